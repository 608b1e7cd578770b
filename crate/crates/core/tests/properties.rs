//! Randomized property tests over generated inputs: algebraic laws that
//! must hold for every tensor, rational, and lattice element, not just
//! the frozen oracle values.

use goldman_core::chord::lc_normalize;
use goldman_core::homgoldman::{hg_bracket, HGElement, PairingLattice};
use goldman_core::json::{
    q_from_string, q_to_string, tensor_from_json, tensor_to_json, to_bytes,
};
use goldman_core::tensor::q_int;
use goldman_core::{BasisSymbol, Q, SurfaceSignature, Tensor, Word};
use num::BigInt;
use proptest::prelude::*;

fn sig_g1d4() -> SurfaceSignature {
    SurfaceSignature::new(1, 0, 4).unwrap()
}

/// A random tensor at genus 1, truncation 4: up to four terms of length
/// at most 4 over {A1, B1}, with small rational coefficients.
fn tensor_strategy() -> impl Strategy<Value = Tensor> {
    let word = prop::collection::vec(prop::bool::ANY, 0..=4).prop_map(|bits| {
        Word(
            bits.into_iter()
                .map(|b| if b { BasisSymbol::A(1) } else { BasisSymbol::B(1) })
                .collect(),
        )
    });
    let coeff = (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q_int(n) / q_int(d));
    prop::collection::vec((word, coeff), 0..=4).prop_map(|terms| {
        let mut t = Tensor::zero(sig_g1d4());
        for (w, c) in terms {
            t.add_term(w, c);
        }
        t
    })
}

fn rational_strategy() -> impl Strategy<Value = Q> {
    (any::<i64>(), 1u64..=u64::from(u32::MAX))
        .prop_map(|(n, d)| Q::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #[test]
    fn rational_strings_round_trip(q in rational_strategy()) {
        prop_assert_eq!(q_from_string(&q_to_string(&q)).unwrap(), q);
    }

    #[test]
    fn tensor_json_round_trips_bit_exactly(t in tensor_strategy()) {
        let v = tensor_to_json(&t);
        prop_assert_eq!(tensor_from_json(&v).unwrap(), t);
        // serialization is canonical: parse-then-serialize is the identity
        let reparsed: serde_json::Value =
            serde_json::from_str(&to_bytes(&v)).unwrap();
        prop_assert_eq!(to_bytes(&reparsed), to_bytes(&v));
    }

    #[test]
    fn multiplication_distributes_and_is_associative(
        x in tensor_strategy(),
        y in tensor_strategy(),
        z in tensor_strategy(),
    ) {
        let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
        let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(
            x.mul(&y).unwrap().mul(&z).unwrap(),
            x.mul(&y.mul(&z).unwrap()).unwrap()
        );
    }

    #[test]
    fn coproduct_is_multiplicative(x in tensor_strategy(), y in tensor_strategy()) {
        prop_assert_eq!(
            x.mul(&y).unwrap().coproduct(),
            x.coproduct().mul(&y.coproduct()).unwrap()
        );
    }

    #[test]
    fn cyclicizer_output_is_rotation_invariant(t in tensor_strategy()) {
        let c = t.cyclicize();
        for (w, coeff) in c.terms() {
            prop_assert_eq!(&c.coeff(&w.rotate_left(1)), coeff);
        }
    }

    #[test]
    fn exp_and_log_invert_on_primitives(n in -5i64..=5, m in -5i64..=5) {
        let s = sig_g1d4();
        let mut p = Tensor::from_symbol(s, BasisSymbol::A(1)).unwrap().scale(&q_int(n));
        p = p.add(
            &Tensor::from_symbol(s, BasisSymbol::B(1)).unwrap().scale(&q_int(m)),
        ).unwrap();
        prop_assert_eq!(p.exp_t().unwrap().log_t().unwrap(), p);
    }

    #[test]
    fn homological_bracket_is_antisymmetric(
        xs in prop::collection::vec((-4i64..=4, -4i64..=4, -3i64..=3), 1..=3),
        ys in prop::collection::vec((-4i64..=4, -4i64..=4, -3i64..=3), 1..=3),
    ) {
        let lat = PairingLattice::symplectic(1);
        let build = |terms: &[(i64, i64, i64)]| {
            let mut u = HGElement::zero(2);
            for &(a, b, c) in terms {
                u.add_term(vec![a, b], q_int(c));
            }
            u
        };
        let (u, v) = (build(&xs), build(&ys));
        prop_assert_eq!(
            hg_bracket(&lat, &u, &v).unwrap().neg(),
            hg_bracket(&lat, &v, &u).unwrap()
        );
    }

    #[test]
    fn chord_normalization_is_idempotent(perm in prop::sample::subsequence(
        (1usize..=6).collect::<Vec<_>>(), 6)
    ) {
        // pair up a permutation of 1..6 into three chords, any orientation
        let raw: Vec<(usize, usize)> =
            perm.chunks(2).map(|c| (c[1], c[0])).collect();
        let c = lc_normalize(&raw).unwrap();
        let again = lc_normalize(c.pairs()).unwrap();
        prop_assert_eq!(again.pairs(), c.pairs());
        prop_assert_eq!(again.sign(), 1);
        prop_assert!(c.sign() == 1 || c.sign() == -1);
    }
}
