//! Labeled linear and circular chord diagrams, the `a`-map onto
//! Sp-invariant tensors, and the amalgamation brackets.
//!
//! The orientation rule for the connecting chord of an amalgamation is
//! derived from the contraction identity of the symplectic form: pairing
//! one slot of one `omega` against one slot of another yields `omega` on
//! the two remaining slots, with sign `+1` when like-numbered slots meet
//! and `-1` otherwise. This rule is frozen by the requirement that the
//! `a`-map intertwine the diagram brackets with the derivation brackets
//! on tensors (see the tests).

use crate::error::{AlgebraError, Result};
use crate::sig::{BasisSymbol, SurfaceSignature, Word};
use crate::tensor::{q_int, Q, Tensor};
use num::{One, Zero};
use std::collections::BTreeMap;

/// A labeled linear chord diagram in canonical (standard-label) form:
/// every pair `(i, j)` has `i < j`, pairs sorted by first entry, with the
/// sign accumulated while normalizing (one flip per label change).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearChord {
    pairs: Vec<(usize, usize)>,
    sign: i64,
}

/// Canonicalizes raw ordered pairs: they must partition `{1..2m}`; each
/// pair with descending entries is flipped at the cost of a sign.
pub fn lc_normalize(raw: &[(usize, usize)]) -> Result<LinearChord> {
    let m = raw.len();
    let mut seen = vec![false; 2 * m + 1];
    for &(i, j) in raw {
        for v in [i, j] {
            if v == 0 || v > 2 * m || seen[v] {
                return Err(AlgebraError::Domain(format!(
                    "pairs do not partition 1..{}",
                    2 * m
                )));
            }
            seen[v] = true;
        }
    }
    let mut sign = 1i64;
    let mut pairs: Vec<(usize, usize)> = raw
        .iter()
        .map(|&(i, j)| {
            if i < j {
                (i, j)
            } else {
                sign = -sign;
                (j, i)
            }
        })
        .collect();
    pairs.sort();
    Ok(LinearChord { pairs, sign })
}

impl LinearChord {
    pub fn chords(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn sign(&self) -> i64 {
        self.sign
    }

    /// The diagram as a one-term combination.
    pub fn combo(&self) -> ChordCombo {
        let mut out = ChordCombo::zero(self.chords());
        out.add_diagram(self, Q::one());
        out
    }
}

/// A rational combination of standard-label diagrams of a fixed chord
/// count (the working representation of elements of the diagram algebra).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordCombo {
    m: usize,
    terms: BTreeMap<Vec<(usize, usize)>, Q>,
}

impl ChordCombo {
    pub fn zero(m: usize) -> Self {
        ChordCombo {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn chords(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &BTreeMap<Vec<(usize, usize)>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_diagram(&mut self, c: &LinearChord, coeff: Q) {
        debug_assert_eq!(c.chords(), self.m);
        let coeff = coeff * q_int(c.sign);
        let entry = self.terms.entry(c.pairs.clone()).or_insert_with(Q::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&c.pairs);
        }
    }

    pub fn add(&self, other: &ChordCombo) -> Result<ChordCombo> {
        if self.m != other.m {
            return Err(AlgebraError::Domain(
                "cannot add combinations with different chord counts".into(),
            ));
        }
        let mut out = self.clone();
        for (p, c) in &other.terms {
            let entry = out.terms.entry(p.clone()).or_insert_with(Q::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(p);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> ChordCombo {
        if c.is_zero() {
            return ChordCombo::zero(self.m);
        }
        ChordCombo {
            m: self.m,
            terms: self.terms.iter().map(|(p, v)| (p.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> ChordCombo {
        self.scale(&-q_int(1))
    }

    /// Image under the rotation `nu: v |-> v - 1 (mod 2m)` applied `s`
    /// times to every vertex, renormalized.
    pub fn rotate(&self, s: usize) -> ChordCombo {
        let n = 2 * self.m;
        let mut out = ChordCombo::zero(self.m);
        for (p, c) in &self.terms {
            let moved: Vec<(usize, usize)> = p
                .iter()
                .map(|&(i, j)| {
                    let f = |v: usize| (v + n - 1 - (s % n)) % n + 1;
                    (f(i), f(j))
                })
                .collect();
            out.add_diagram(&lc_normalize(&moved).expect("rotation preserves partitions"), c.clone());
        }
        out
    }

    /// Is the combination fixed by the rotation action?
    pub fn is_rotation_invariant(&self) -> bool {
        *self == self.rotate(1)
    }
}

/// The Sp-invariant tensor of a diagram: one symplectic form per chord,
/// its two slots placed at the chord's two vertices.
pub fn a_map(c: &LinearChord, sig: SurfaceSignature) -> Result<Tensor> {
    let m = c.chords();
    if 2 * m > sig.trunc {
        return Err(AlgebraError::Domain(format!(
            "a diagram with {m} chords needs truncation order >= {}",
            2 * m
        )));
    }
    let mut out = Tensor::zero(sig);
    // per chord: omega = sum_i A_i B_i - B_i A_i
    let choices: Vec<(BasisSymbol, BasisSymbol, i64)> = (1..=sig.genus as u16)
        .flat_map(|i| {
            [
                (BasisSymbol::A(i), BasisSymbol::B(i), 1),
                (BasisSymbol::B(i), BasisSymbol::A(i), -1),
            ]
        })
        .collect();
    let mut stack: Vec<(usize, Vec<BasisSymbol>, i64)> =
        vec![(0, vec![BasisSymbol::A(1); 2 * m], c.sign)];
    while let Some((k, word, coeff)) = stack.pop() {
        if k == m {
            out.add_term(Word(word), q_int(coeff));
            continue;
        }
        let (i, j) = c.pairs[k];
        for (x, y, s) in &choices {
            let mut w = word.clone();
            w[i - 1] = *x;
            w[j - 1] = *y;
            stack.push((k + 1, w, coeff * s));
        }
    }
    Ok(out)
}

/// Linear extension of [`a_map`] over a combination.
pub fn a_map_combo(u: &ChordCombo, sig: SurfaceSignature) -> Result<Tensor> {
    let mut out = Tensor::zero(sig);
    for (p, c) in &u.terms {
        let d = LinearChord {
            pairs: p.clone(),
            sign: 1,
        };
        out = out.add(&a_map(&d, sig)?.scale(c))?;
    }
    Ok(out)
}

/// The `t`-th amalgamation `C *_t C'` (`2 <= t <= 2l`): cut `C'` at its
/// `t`-th vertex and `C` at its first vertex, insert `C` into the hole,
/// and join the two loose chord ends into one connecting chord. The
/// connecting chord's label and sign follow the contraction rule with the
/// global minus of the bracket formula absorbed.
pub fn amalgamate(c: &LinearChord, cp: &LinearChord, t: usize) -> Result<LinearChord> {
    let m = c.chords();
    let l = cp.chords();
    if t < 2 || t > 2 * l {
        return Err(AlgebraError::Domain(format!(
            "amalgamation index {t} out of range 2..{}",
            2 * l
        )));
    }
    // vertex 1 of C heads its first chord (standard labels, sorted)
    debug_assert_eq!(c.pairs[0].0, 1);
    let j0 = c.pairs[0].1;
    let map_c = |v: usize| v + t - 2;
    let map_cp = |v: usize| if v < t { v } else { v + 2 * m - 2 };
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(m + l - 1);
    for &(i, j) in &c.pairs[1..] {
        pairs.push((map_c(i), map_c(j)));
    }
    let mut epsilon = 0i64;
    for &(i, j) in &cp.pairs {
        if i == t {
            // like-numbered slots meet: connecting chord (j', j0), sign +1
            pairs.push((map_cp(j), map_c(j0)));
            epsilon = 1;
        } else if j == t {
            // unlike slots meet: connecting chord (i', j0), sign -1
            pairs.push((map_cp(i), map_c(j0)));
            epsilon = -1;
        } else {
            pairs.push((map_cp(i), map_cp(j)));
        }
    }
    let mut out = lc_normalize(&pairs)?;
    // the reversed table absorbs the minus sign in front of the first sum
    // of the bracket formula
    out.sign *= -epsilon * c.sign * cp.sign;
    Ok(out)
}

/// The diagram bracket
/// `[C, C'] = - sum_t C *_t C' + sum_s C' *_s C`, with `m + l - 1` chords.
pub fn lc_bracket(c: &LinearChord, cp: &LinearChord) -> Result<ChordCombo> {
    let mut out = ChordCombo::zero(c.chords() + cp.chords() - 1);
    for t in 2..=2 * cp.chords() {
        out.add_diagram(&amalgamate(c, cp, t)?, -q_int(1));
    }
    for s in 2..=2 * c.chords() {
        out.add_diagram(&amalgamate(cp, c, s)?, q_int(1));
    }
    Ok(out)
}

/// Bilinear extension of [`lc_bracket`] to combinations.
pub fn lc_bracket_combo(u: &ChordCombo, v: &ChordCombo) -> Result<ChordCombo> {
    let mut out = ChordCombo::zero(u.m + v.m - 1);
    for (p, cu) in &u.terms {
        let c = LinearChord {
            pairs: p.clone(),
            sign: 1,
        };
        for (q, cv) in &v.terms {
            let cq = LinearChord {
                pairs: q.clone(),
                sign: 1,
            };
            out = out.add(&lc_bracket(&c, &cq)?.scale(&(cu * cv)))?;
        }
    }
    Ok(out)
}

/// A rotation-invariant combination: an oriented circular chord diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircularChord {
    combo: ChordCombo,
}

impl CircularChord {
    /// Wraps a combination, verifying rotation invariance.
    pub fn new(combo: ChordCombo) -> Result<Self> {
        if !combo.is_rotation_invariant() {
            return Err(AlgebraError::Domain(
                "combination is not rotation invariant".into(),
            ));
        }
        Ok(CircularChord { combo })
    }

    /// The closing `N(C) = sum_s nu^s(C)` of a linear diagram.
    pub fn close(c: &LinearChord) -> Self {
        let mut combo = ChordCombo::zero(c.chords());
        let base = c.combo();
        for s in 0..2 * c.chords() {
            combo = combo.add(&base.rotate(s)).expect("equal chord counts");
        }
        CircularChord { combo }
    }

    /// `Omega_m = N({(1,2), (3,4), ...})`, the closing of the standard
    /// non-crossing diagram; its tensor is the cyclicized `omega^m`.
    pub fn omega(m: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..m).map(|k| (2 * k + 1, 2 * k + 2)).collect();
        CircularChord::close(&lc_normalize(&pairs).expect("valid partition"))
    }

    pub fn combo(&self) -> &ChordCombo {
        &self.combo
    }

    pub fn is_zero(&self) -> bool {
        self.combo.is_zero()
    }
}

/// Bracket of circular diagrams: the diagram algebra of invariants is a
/// Lie subalgebra, so this is the bilinear bracket with the invariance of
/// the result checked.
pub fn cc_bracket(d: &CircularChord, dp: &CircularChord) -> Result<CircularChord> {
    let combo = lc_bracket_combo(&d.combo, &dp.combo)?;
    if !combo.is_rotation_invariant() {
        return Err(AlgebraError::InternalInvariant(
            "bracket of invariant diagrams lost rotation invariance".into(),
        ));
    }
    Ok(CircularChord { combo })
}

/// All standard-label diagrams with `m` chords (perfect matchings of
/// `1..2m` in canonical order); there are `(2m-1)!!` of them.
pub fn standard_diagrams(m: usize) -> Vec<LinearChord> {
    fn go(free: &mut Vec<usize>, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = free[0];
        for idx in 1..free.len() {
            let second = free[idx];
            let mut rest: Vec<usize> = free.clone();
            rest.remove(idx);
            rest.remove(0);
            acc.push((first, second));
            go(&mut rest, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    let mut free: Vec<usize> = (1..=2 * m).collect();
    go(&mut free, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|pairs| LinearChord { pairs, sign: 1 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::necklace::{bracket_necklace, Necklace};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sig(g: usize, d: usize) -> SurfaceSignature {
        SurfaceSignature::new(g, 0, d).unwrap()
    }

    #[test]
    fn normalization_oracles() {
        let c = lc_normalize(&[(2, 1)]).unwrap();
        assert_eq!(c.pairs(), &[(1, 2)]);
        assert_eq!(c.sign(), -1);
        let c = lc_normalize(&[(1, 2), (3, 5), (4, 6)]).unwrap();
        assert_eq!(c.pairs(), &[(1, 2), (3, 5), (4, 6)]);
        assert_eq!(c.sign(), 1);
        let c = lc_normalize(&[(5, 3), (2, 1), (4, 6)]).unwrap();
        assert_eq!(c.sign(), 1); // double swap
        assert!(matches!(
            lc_normalize(&[(1, 2), (2, 3)]),
            Err(AlgebraError::Domain(_))
        ));
    }

    #[test]
    fn standard_diagram_counts_are_double_factorials() {
        for (m, expected) in [(1usize, 1usize), (2, 3), (3, 15), (4, 105)] {
            assert_eq!(standard_diagrams(m).len(), expected, "m={m}");
        }
    }

    #[test]
    fn a_map_oracles() {
        let s = sig(1, 4);
        let c = lc_normalize(&[(1, 2)]).unwrap();
        assert_eq!(a_map(&c, s).unwrap(), Tensor::omega(s));
        let flipped = lc_normalize(&[(2, 1)]).unwrap();
        assert_eq!(a_map(&flipped, s).unwrap(), Tensor::omega(s).neg());
        assert!(matches!(
            a_map(&lc_normalize(&[(1, 2), (3, 4)]).unwrap(), sig(1, 3)),
            Err(AlgebraError::Domain(_))
        ));
    }

    #[test]
    fn a_map_rank_grid() {
        // full rank (2m-1)!! exactly when the genus reaches the chord count
        for m in 1..=3usize {
            for g in 1..=3usize {
                let s = sig(g, 2 * m);
                let images: Vec<Tensor> = standard_diagrams(m)
                    .iter()
                    .map(|c| a_map(c, s).unwrap())
                    .collect();
                let rank = crate::linalg::rank(&images).unwrap();
                if g >= m {
                    assert_eq!(rank, images.len(), "m={m} g={g}");
                } else {
                    assert!(rank < images.len(), "m={m} g={g}");
                }
            }
        }
    }

    #[test]
    fn bracket_is_antisymmetric_with_correct_chord_count() {
        let c = lc_normalize(&[(1, 2), (3, 4)]).unwrap();
        let cp = lc_normalize(&[(1, 3), (2, 4)]).unwrap();
        assert!(lc_bracket(&c, &c).unwrap().is_zero());
        let b = lc_bracket(&c, &cp).unwrap();
        assert_eq!(b.chords(), 3);
        let flipped = lc_bracket(&cp, &c).unwrap();
        assert_eq!(b.neg(), flipped);
    }

    #[test]
    fn a_map_is_a_bracket_homomorphism() {
        // exhaustive over m + l <= 3 at g = 1: this test freezes the
        // connecting-chord orientation rule
        let s = sig(1, 6);
        for (m, l) in [(1usize, 1usize), (1, 2), (2, 1)] {
            for c in standard_diagrams(m) {
                for cp in standard_diagrams(l) {
                    let lhs = a_map_combo(&lc_bracket(&c, &cp).unwrap(), s).unwrap();
                    let rhs = a_map(&c, s)
                        .unwrap()
                        .der_bracket(&a_map(&cp, s).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs, "m={m} l={l} C={:?} C'={:?}", c.pairs(), cp.pairs());
                }
            }
        }
        // one genus-2 sample
        let s2 = sig(2, 6);
        let c = lc_normalize(&[(1, 3), (2, 4)]).unwrap();
        let cp = lc_normalize(&[(1, 2)]).unwrap();
        assert_eq!(
            a_map_combo(&lc_bracket(&c, &cp).unwrap(), s2).unwrap(),
            a_map(&c, s2)
                .unwrap()
                .der_bracket(&a_map(&cp, s2).unwrap())
                .unwrap()
        );
    }

    #[test]
    fn lc_bracket_jacobi_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0c0d);
        for _ in 0..12 {
            let picks: Vec<LinearChord> = {
                let mut sizes = vec![1usize, 1, 1];
                let extra = rng.gen_range(0..=2);
                for _ in 0..extra {
                    sizes[rng.gen_range(0..3)] += 1;
                }
                sizes
                    .iter()
                    .map(|&m| {
                        let ds = standard_diagrams(m);
                        ds[rng.gen_range(0..ds.len())].clone()
                    })
                    .collect()
            };
            let (x, y, z) = (picks[0].combo(), picks[1].combo(), picks[2].combo());
            let jac = lc_bracket_combo(&lc_bracket_combo(&x, &y).unwrap(), &z)
                .unwrap()
                .add(&lc_bracket_combo(&lc_bracket_combo(&y, &z).unwrap(), &x).unwrap())
                .unwrap()
                .add(&lc_bracket_combo(&lc_bracket_combo(&z, &x).unwrap(), &y).unwrap())
                .unwrap();
            assert!(jac.is_zero());
        }
    }

    #[test]
    fn single_chord_circular_diagram_vanishes() {
        let c = lc_normalize(&[(1, 2)]).unwrap();
        assert!(CircularChord::close(&c).is_zero());
    }

    #[test]
    fn omega_two_is_central_at_desk_scale() {
        let omega2 = CircularChord::omega(2);
        assert!(!omega2.is_zero());
        for m in 2..=3usize {
            for c in standard_diagrams(m) {
                let d = CircularChord::close(&c);
                assert!(
                    cc_bracket(&omega2, &d).unwrap().is_zero(),
                    "m={m} C={:?}",
                    c.pairs()
                );
            }
        }
    }

    #[test]
    fn cc_bracket_matches_necklace_bracket() {
        for (g, m, mp) in [(1usize, 2usize, 2usize), (2, 2, 2), (1, 1, 3), (2, 3, 1)] {
            let s = sig(g, 2 * (m + mp - 1));
            let ds = standard_diagrams(m);
            let dps = standard_diagrams(mp);
            // a couple of samples per size to keep the runtime low
            for c in ds.iter().take(2) {
                for cp in dps.iter().take(2) {
                    let d = CircularChord::close(c);
                    let dp = CircularChord::close(cp);
                    if d.is_zero() || dp.is_zero() {
                        continue;
                    }
                    let lhs = a_map_combo(cc_bracket(&d, &dp).unwrap().combo(), s).unwrap();
                    let rhs = bracket_necklace(
                        &Necklace::new(a_map_combo(d.combo(), s).unwrap()).unwrap(),
                        &Necklace::new(a_map_combo(dp.combo(), s).unwrap()).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(lhs, *rhs.value(), "g={g} m={m} m'={mp}");
                }
            }
        }
    }

    #[test]
    fn omega_tensor_is_cyclicized_power() {
        let s = sig(2, 4);
        let omega2 = CircularChord::omega(2);
        let w = Tensor::omega(s);
        assert_eq!(
            a_map_combo(omega2.combo(), s).unwrap(),
            w.mul(&w).unwrap().cyclicize()
        );
    }
}
