//! The Lie algebra of necklaces (cyclically invariant tensors) with its
//! explicit bracket, the section-decorated bracket that also handles
//! boundary classes, the derivation action on the tensor algebra, and the
//! loop-to-necklace map through an expansion.

use crate::error::{AlgebraError, Result};
use crate::expansion::Expansion;
use crate::freegroup::FreeLoop;
use crate::sig::{BasisSymbol, SurfaceSignature, Word};
use crate::tensor::{pairing_symbols, q_int, Tensor};
use num::Zero;
use std::collections::BTreeMap;

/// A cyclically invariant tensor with vanishing degree-0 component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Necklace {
    value: Tensor,
}

impl Necklace {
    /// Wraps a tensor, verifying cyclic invariance (each word must carry
    /// the same coefficient as its rotation by one) and the absence of a
    /// scalar part.
    pub fn new(value: Tensor) -> Result<Self> {
        if !value.aug().is_zero() {
            return Err(AlgebraError::Domain(
                "necklace must have zero degree-0 component".into(),
            ));
        }
        for (w, c) in value.terms() {
            if &value.coeff(&w.rotate_left(1)) != c {
                return Err(AlgebraError::Domain(format!(
                    "tensor is not cyclically invariant at word {w}"
                )));
            }
        }
        Ok(Necklace { value })
    }

    /// The necklace `N(t)`: cyclicize and wrap (always succeeds).
    pub fn cyclicized(t: &Tensor) -> Self {
        Necklace {
            value: t.cyclicize(),
        }
    }

    pub fn zero(sig: SurfaceSignature) -> Self {
        Necklace {
            value: Tensor::zero(sig),
        }
    }

    pub fn value(&self) -> &Tensor {
        &self.value
    }

    pub fn sig(&self) -> SurfaceSignature {
        self.value.sig()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn add(&self, other: &Necklace) -> Result<Necklace> {
        Ok(Necklace {
            value: self.value.add(&other.value)?,
        })
    }

    pub fn scale(&self, c: &crate::tensor::Q) -> Necklace {
        Necklace {
            value: self.value.scale(c),
        }
    }

    pub fn neg(&self) -> Necklace {
        Necklace {
            value: self.value.neg(),
        }
    }
}

/// The necklace bracket
/// `[N(X_1...X_m), N(Y_1...Y_n)] =
///   -sum_{i,j} (X_i . Y_j) N(X_{i+1}...X_{i-1} Y_{j+1}...Y_{j-1})`.
///
/// Because the stored tensors already contain every rotation of their
/// constituent words, the double sum over `(i, j)` is exactly the sum over
/// stored word pairs contracting the two *leading* letters.
pub fn bracket_necklace(u: &Necklace, v: &Necklace) -> Result<Necklace> {
    if u.sig() != v.sig() {
        return Err(AlgebraError::SignatureMismatch(format!(
            "{:?} vs {:?}",
            u.sig(),
            v.sig()
        )));
    }
    if u.sig().boundary_extra != 0 {
        return Err(AlgebraError::Domain(
            "bracket_necklace requires n = 0; use bracket_s for n >= 1".into(),
        ));
    }
    bracket_leading_contraction(u, v)
}

fn bracket_leading_contraction(u: &Necklace, v: &Necklace) -> Result<Necklace> {
    let sig = u.sig();
    let mut out = Tensor::zero(sig);
    for (a, ca) in u.value.terms() {
        for (b, cb) in v.value.terms() {
            let p = pairing_symbols(a.0[0], b.0[0]);
            if p == 0 {
                continue;
            }
            let glued = Word(a.0[1..]
                .iter()
                .chain(b.0[1..].iter())
                .cloned()
                .collect());
            let term = Tensor::from_word(sig, glued, ca * cb * q_int(-p))?;
            out = out.add(&term.cyclicize())?;
        }
    }
    Ok(Necklace { value: out })
}

/// Splits a tensor by the leading symbol of each word: the map sends a
/// symbol `s` to the tensor of tails of words starting with `s`.
fn leading_decomposition(t: &Tensor) -> BTreeMap<BasisSymbol, Tensor> {
    let mut out: BTreeMap<BasisSymbol, Tensor> = BTreeMap::new();
    for (w, c) in t.terms() {
        if w.is_empty() {
            continue;
        }
        let tail = Word(w.0[1..].to_vec());
        out.entry(w.0[0])
            .or_insert_with(|| Tensor::zero(t.sig()))
            .add_term(tail, c.clone());
    }
    out
}

/// The section-decorated bracket: with `u = sum_i A_i u'_i + B_i u''_i +
/// sum_j C_j u0_j` (split by leading symbol) and likewise `v`,
///
/// ```text
/// [u, v]_s = -N( sum_i (u'_i v''_i - u''_i v'_i)
///              + sum_j C_j (u0_j v0_j - v0_j u0_j) ).
/// ```
pub fn bracket_s(u: &Necklace, v: &Necklace) -> Result<Necklace> {
    if u.sig() != v.sig() {
        return Err(AlgebraError::SignatureMismatch(format!(
            "{:?} vs {:?}",
            u.sig(),
            v.sig()
        )));
    }
    let sig = u.sig();
    let du = leading_decomposition(&u.value);
    let dv = leading_decomposition(&v.value);
    let zero = Tensor::zero(sig);
    let part = |d: &BTreeMap<BasisSymbol, Tensor>, s: BasisSymbol| -> Tensor {
        d.get(&s).cloned().unwrap_or_else(|| zero.clone())
    };
    let mut inner = Tensor::zero(sig);
    for i in 1..=sig.genus as u16 {
        let (ua, ub) = (part(&du, BasisSymbol::A(i)), part(&du, BasisSymbol::B(i)));
        let (va, vb) = (part(&dv, BasisSymbol::A(i)), part(&dv, BasisSymbol::B(i)));
        inner = inner.add(&ua.mul(&vb)?)?.sub(&ub.mul(&va)?)?;
    }
    for j in 1..=sig.boundary_extra as u16 {
        let c = Tensor::from_symbol(sig, BasisSymbol::C(j))?;
        let u0 = part(&du, BasisSymbol::C(j));
        let v0 = part(&dv, BasisSymbol::C(j));
        let comm = u0.mul(&v0)?.sub(&v0.mul(&u0)?)?;
        inner = inner.add(&c.mul(&comm)?)?;
    }
    Ok(Necklace {
        value: inner.cyclicize().neg(),
    })
}

/// Values on degree-1 symbols of the derivation associated to a necklace:
/// `A_i |-> u''_i`, `B_i |-> -u'_i`, `C_j |-> u0_j C_j - C_j u0_j`.
pub fn derivation_symbol_values(u: &Necklace) -> Result<BTreeMap<BasisSymbol, Tensor>> {
    let sig = u.sig();
    let d = leading_decomposition(&u.value);
    let zero = Tensor::zero(sig);
    let mut out = BTreeMap::new();
    for s in sig.symbols() {
        let v = match s {
            BasisSymbol::A(i) => d.get(&BasisSymbol::B(i)).cloned().unwrap_or_else(|| zero.clone()),
            BasisSymbol::B(i) => d
                .get(&BasisSymbol::A(i))
                .cloned()
                .unwrap_or_else(|| zero.clone())
                .neg(),
            BasisSymbol::C(j) => {
                let c = Tensor::from_symbol(sig, BasisSymbol::C(j))?;
                let u0 = d.get(&BasisSymbol::C(j)).cloned().unwrap_or_else(|| zero.clone());
                u0.mul(&c)?.sub(&c.mul(&u0)?)?
            }
        };
        out.insert(s, v);
    }
    Ok(out)
}

/// Applies the derivation of the tensor algebra determined by the necklace
/// (through [`derivation_symbol_values`] and the Leibniz rule) to `t`.
pub fn act_derivation(u: &Necklace, t: &Tensor) -> Result<Tensor> {
    if u.sig() != t.sig() {
        return Err(AlgebraError::SignatureMismatch(format!(
            "{:?} vs {:?}",
            u.sig(),
            t.sig()
        )));
    }
    let values = derivation_symbol_values(u)?;
    act_with_values(&values, t)
}

/// Leibniz application of a derivation given by its symbol values.
pub fn act_with_values(
    values: &BTreeMap<BasisSymbol, Tensor>,
    t: &Tensor,
) -> Result<Tensor> {
    let sig = t.sig();
    let mut out = Tensor::zero(sig);
    for (w, c) in t.terms() {
        for pos in 0..w.len() {
            let image = values.get(&w.0[pos]).ok_or_else(|| {
                AlgebraError::SymbolOutOfRange(format!("no derivation value for {}", w.0[pos]))
            })?;
            for (mid, cm) in image.terms() {
                if w.len() - 1 + mid.len() > sig.trunc {
                    continue;
                }
                let mut word = Vec::with_capacity(w.len() - 1 + mid.len());
                word.extend_from_slice(&w.0[..pos]);
                word.extend_from_slice(&mid.0);
                word.extend_from_slice(&w.0[pos + 1..]);
                out.add_term(Word(word), c * cm);
            }
        }
    }
    Ok(out)
}

/// The loop-to-necklace map `x |-> N(theta(x))`.
pub fn lambda_theta(theta: &Expansion, x: &FreeLoop) -> Result<Necklace> {
    let t = theta.eval_theta(x.representative())?;
    Ok(Necklace::cyclicized(&t))
}

/// Bracket of `N(omega^k)` with `u`: a desk-scale witness that boundary
/// classes act centrally.
pub fn center_probe(k: usize, u: &Necklace) -> Result<Necklace> {
    let sig = u.sig();
    if sig.boundary_extra != 0 {
        return Err(AlgebraError::Domain("center_probe requires n = 0".into()));
    }
    if 2 * k > sig.trunc {
        return Err(AlgebraError::Domain(format!(
            "omega^{k} exceeds truncation {}",
            sig.trunc
        )));
    }
    let omega = Tensor::omega(sig);
    let mut pow = Tensor::one(sig);
    for _ in 0..k {
        pow = pow.mul(&omega)?;
    }
    bracket_necklace(&Necklace::cyclicized(&pow), u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::build_symplectic;
    use crate::freegroup::FreeWord;
    use crate::sig::BasisSymbol::{A, B, C};
    use crate::tensor::{q_int, q_ratio};

    fn sig(g: usize, n: usize, d: usize) -> SurfaceSignature {
        SurfaceSignature::new(g, n, d).unwrap()
    }

    fn necklace_of(s: SurfaceSignature, letters: &[BasisSymbol]) -> Necklace {
        let t = Tensor::from_word(s, Word(letters.to_vec()), q_int(1)).unwrap();
        Necklace::cyclicized(&t)
    }

    #[test]
    fn non_invariant_tensor_rejected() {
        let s = sig(1, 0, 4);
        let t = Tensor::from_word(s, Word(vec![A(1), A(1), B(1)]), q_int(1)).unwrap();
        assert!(Necklace::new(t.clone()).is_err());
        assert!(Necklace::new(t.cyclicize()).is_ok());
        assert!(Necklace::new(Tensor::one(s)).is_err());
    }

    #[test]
    fn bracket_example_from_squares() {
        // [N(A1 A1), N(B1)] = -2 N(A1)
        let s = sig(1, 0, 4);
        let u = necklace_of(s, &[A(1), A(1)]);
        let v = necklace_of(s, &[B(1)]);
        let w = bracket_necklace(&u, &v).unwrap();
        let expect = necklace_of(s, &[A(1)]).scale(&q_int(-2));
        assert_eq!(w, expect);
        // [N(A1), N(B1)] = 0 since N(empty) = 0
        let z = bracket_necklace(&necklace_of(s, &[A(1)]), &v).unwrap();
        assert!(z.is_zero());
        // antisymmetry on the nose
        let uu = bracket_necklace(&u, &u).unwrap();
        assert!(uu.is_zero());
    }

    #[test]
    fn bracket_s_equals_bracket_necklace_without_boundary() {
        let s = sig(2, 0, 6);
        let words: Vec<Vec<BasisSymbol>> = vec![
            vec![A(1), A(1)],
            vec![A(1), B(2), B(1)],
            vec![B(1), A(2), B(2)],
            vec![A(2), B(2)],
        ];
        for wu in &words {
            for wv in &words {
                let u = necklace_of(s, wu);
                let v = necklace_of(s, wv);
                assert_eq!(
                    bracket_s(&u, &v).unwrap(),
                    bracket_necklace(&u, &v).unwrap()
                );
            }
        }
    }

    #[test]
    fn bracket_s_boundary_words_use_only_the_c_term() {
        let s = sig(1, 1, 6);
        let u = necklace_of(s, &[C(1), A(1), B(1)]);
        let v = necklace_of(s, &[C(1), B(1)]);
        let w = bracket_s(&u, &v).unwrap();
        // the same bracket with the C-term suppressed: decompositions whose
        // A/B tails pair must still contribute
        assert!(!w.is_zero());
    }

    #[test]
    fn derivation_values_for_single_letter_necklace() {
        let s = sig(1, 0, 4);
        let u = necklace_of(s, &[B(1)]);
        let vals = derivation_symbol_values(&u).unwrap();
        assert_eq!(vals[&A(1)], Tensor::one(s));
        assert!(vals[&B(1)].is_zero());
    }

    #[test]
    fn derivation_annihilates_omega() {
        let s = sig(2, 0, 6);
        for letters in [
            vec![A(1), A(1), B(1)],
            vec![A(1), B(2), A(2), B(1)],
            vec![B(2), B(2)],
        ] {
            let u = necklace_of(s, &letters);
            let res = act_derivation(&u, &Tensor::omega(s)).unwrap();
            assert!(res.is_zero(), "omega not annihilated by N({letters:?})");
        }
    }

    #[test]
    fn derivation_annihilates_boundary_form() {
        // with boundary classes the invariant object is omega + sum_j C_j
        let s = sig(1, 1, 6);
        let mut form = Tensor::omega(s);
        form = form
            .add(&Tensor::from_symbol(s, C(1)).unwrap())
            .unwrap();
        for letters in [
            vec![C(1), A(1), B(1)],
            vec![A(1), C(1), C(1), B(1)],
            vec![C(1), C(1)],
        ] {
            let u = necklace_of(s, &letters);
            let res = act_derivation(&u, &form).unwrap();
            assert!(res.is_zero(), "form not annihilated by N({letters:?})");
        }
    }

    #[test]
    fn leibniz_rule_holds() {
        let s = sig(1, 0, 6);
        let u = necklace_of(s, &[A(1), A(1), B(1)]);
        let t1 = Tensor::from_word(s, Word(vec![A(1), B(1)]), q_ratio(1, 3)).unwrap();
        let t2 = Tensor::from_word(s, Word(vec![B(1)]), q_int(2))
            .unwrap()
            .add(&Tensor::one(s))
            .unwrap();
        let lhs = act_derivation(&u, &t1.mul(&t2).unwrap()).unwrap();
        let rhs = act_derivation(&u, &t1)
            .unwrap()
            .mul(&t2)
            .unwrap()
            .add(&t1.mul(&act_derivation(&u, &t2).unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_matches_derivation_commutator_on_symbols() {
        let s = sig(1, 0, 6);
        let u = necklace_of(s, &[A(1), A(1), B(1)]);
        let v = necklace_of(s, &[B(1), B(1)]);
        let w = bracket_necklace(&u, &v).unwrap();
        for sym in s.symbols() {
            let x = Tensor::from_symbol(s, sym).unwrap();
            let lhs = act_derivation(&w, &x).unwrap();
            let rhs = act_derivation(&u, &act_derivation(&v, &x).unwrap())
                .unwrap()
                .sub(&act_derivation(&v, &act_derivation(&u, &x).unwrap()).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "mismatch on {sym}");
        }
    }

    #[test]
    fn lambda_theta_of_a_generator() {
        let s = sig(1, 0, 2);
        let theta = build_symplectic(s).unwrap();
        let x = FreeLoop::new(&FreeWord::parse("a1").unwrap());
        let l = lambda_theta(&theta, &x).unwrap();
        // N(1 + A1 + A1A1/2) = A1 + A1A1
        let mut expect = Tensor::from_symbol(s, A(1)).unwrap();
        expect.add_term(Word(vec![A(1), A(1)]), q_int(1));
        assert_eq!(l.value(), &expect);
        // conjugation invariance
        let conj = FreeWord::parse("b1 a1 b1^-1").unwrap();
        assert_eq!(
            lambda_theta(&theta, &FreeLoop::new(&conj)).unwrap(),
            l
        );
        // constant loop maps to zero
        let e = lambda_theta(&theta, &FreeLoop::new(&FreeWord::identity())).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn center_probe_vanishes() {
        let s = sig(1, 0, 6);
        for letters in [
            vec![A(1)],
            vec![A(1), B(1), A(1), B(1)],
            vec![A(1), A(1), B(1)],
        ] {
            let u = necklace_of(s, &letters);
            assert!(center_probe(1, &u).unwrap().is_zero());
            assert!(center_probe(2, &u).unwrap().is_zero());
        }
        let u = necklace_of(s, &[A(1)]);
        assert!(center_probe(4, &u).is_err());
    }
}
