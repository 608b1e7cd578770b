//! The truncated completed tensor algebra `T = prod_{d<=D} H^{(x)d}` over
//! the rationals, together with its Hopf-algebra structure.
//!
//! Elements are stored sparsely as maps from monomial words to exact
//! rational coefficients; words longer than the truncation order are
//! silently dropped (that is the meaning of working in the quotient).
//! All binary operations insist on equal signatures *including* equal
//! truncation: there is no implicit coercion between truncation levels.

use crate::error::{AlgebraError, Result};
use crate::sig::{BasisSymbol, SurfaceSignature, Word};
use num::{BigInt, BigRational, One, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_ratio(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Intersection pairing on `H`: `(A_i . B_i) = 1`, `(B_i . A_i) = -1`,
/// every other pair of basis symbols (in particular anything involving a
/// boundary class `C_j`) pairs to zero.
pub fn pairing_symbols(x: BasisSymbol, y: BasisSymbol) -> i64 {
    match (x, y) {
        (BasisSymbol::A(i), BasisSymbol::B(j)) if i == j => 1,
        (BasisSymbol::B(i), BasisSymbol::A(j)) if i == j => -1,
        _ => 0,
    }
}

/// Sparse element of the truncated tensor algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    sig: SurfaceSignature,
    terms: BTreeMap<Word, Q>,
}

impl Tensor {
    pub fn zero(sig: SurfaceSignature) -> Self {
        Tensor {
            sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(sig: SurfaceSignature, c: Q) -> Self {
        let mut t = Tensor::zero(sig);
        t.add_term(Word::empty(), c);
        t
    }

    pub fn one(sig: SurfaceSignature) -> Self {
        Tensor::scalar(sig, Q::one())
    }

    pub fn from_symbol(sig: SurfaceSignature, s: BasisSymbol) -> Result<Self> {
        sig.check_symbol(s)?;
        let mut t = Tensor::zero(sig);
        t.add_term(Word::single(s), Q::one());
        Ok(t)
    }

    pub fn from_word(sig: SurfaceSignature, w: Word, c: Q) -> Result<Self> {
        for &s in &w.0 {
            sig.check_symbol(s)?;
        }
        let mut t = Tensor::zero(sig);
        t.add_term(w, c);
        Ok(t)
    }

    pub fn sig(&self) -> SurfaceSignature {
        self.sig
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Q> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `c * w`, respecting truncation and purging cancellations.
    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() || w.len() > self.sig.trunc {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    fn check_sig(&self, other: &Tensor) -> Result<()> {
        if self.sig != other.sig {
            return Err(AlgebraError::SignatureMismatch(format!(
                "{:?} vs {:?}",
                self.sig, other.sig
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_sig(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Tensor {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Tensor {
        if c.is_zero() {
            return Tensor::zero(self.sig);
        }
        let mut out = Tensor::zero(self.sig);
        for (w, v) in &self.terms {
            out.terms.insert(w.clone(), v * c);
        }
        out
    }

    /// Concatenation product, truncated to degree `D`.
    pub fn mul(&self, other: &Tensor) -> Result<Tensor> {
        self.check_sig(other)?;
        let mut out = Tensor::zero(self.sig);
        for (w1, c1) in &self.terms {
            if w1.len() > self.sig.trunc {
                continue;
            }
            for (w2, c2) in &other.terms {
                if w1.len() + w2.len() > self.sig.trunc {
                    continue;
                }
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Augmentation: the coefficient of the empty word.
    pub fn aug(&self) -> Q {
        self.coeff(&Word::empty())
    }

    /// Homogeneous component of the given degree.
    pub fn degree_part(&self, d: usize) -> Tensor {
        let mut out = Tensor::zero(self.sig);
        for (w, c) in &self.terms {
            if w.len() == d {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }

    /// Truncates to degrees `<= d` (a coarser quotient of the same algebra;
    /// the signature keeps its truncation order).
    pub fn truncate_degree(&self, d: usize) -> Tensor {
        let mut out = Tensor::zero(self.sig);
        for (w, c) in &self.terms {
            if w.len() <= d {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }

    /// Smallest degree carrying a nonzero term, if any.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).min()
    }

    /// The symplectic form `omega = sum_i A_i B_i - B_i A_i` (for any
    /// signature; boundary classes do not enter).
    pub fn omega(sig: SurfaceSignature) -> Tensor {
        let mut out = Tensor::zero(sig);
        for i in 1..=sig.genus as u16 {
            out.add_term(
                Word(vec![BasisSymbol::A(i), BasisSymbol::B(i)]),
                Q::one(),
            );
            out.add_term(
                Word(vec![BasisSymbol::B(i), BasisSymbol::A(i)]),
                -Q::one(),
            );
        }
        out
    }

    /// Coproduct: every basis symbol is primitive, so on a word the
    /// coproduct sums over all order-preserving two-colourings.
    pub fn coproduct(&self) -> PairTensor {
        let mut out = PairTensor::zero(self.sig);
        for (w, c) in &self.terms {
            let m = w.len();
            // iterate over subsets of positions going to the left factor
            for mask in 0u64..(1u64 << m) {
                let mut left = Vec::new();
                let mut right = Vec::new();
                for (pos, &s) in w.0.iter().enumerate() {
                    if mask & (1 << pos) != 0 {
                        left.push(s);
                    } else {
                        right.push(s);
                    }
                }
                out.add_term(Word(left), Word(right), c.clone());
            }
        }
        out
    }

    /// Antipode: reverses each word and multiplies by `(-1)^length`.
    pub fn antipode(&self) -> Tensor {
        let mut out = Tensor::zero(self.sig);
        for (w, c) in &self.terms {
            let sign = if w.len() % 2 == 0 { Q::one() } else { -Q::one() };
            out.add_term(w.reversed(), c * sign);
        }
        out
    }

    /// Truncated exponential; requires augmentation zero so that the series
    /// terminates at the truncation order.
    pub fn exp_t(&self) -> Result<Tensor> {
        if !self.aug().is_zero() {
            return Err(AlgebraError::Domain(
                "exp_t requires augmentation 0".into(),
            ));
        }
        let mut out = Tensor::one(self.sig);
        let mut pow = Tensor::one(self.sig);
        let mut fact = Q::one();
        for k in 1..=self.sig.trunc {
            pow = pow.mul(self)?;
            if pow.is_zero() {
                break;
            }
            fact *= q_int(k as i64);
            out = out.add(&pow.scale(&(Q::one() / fact.clone())))?;
        }
        Ok(out)
    }

    /// Truncated logarithm; requires augmentation one.
    pub fn log_t(&self) -> Result<Tensor> {
        if !self.aug().is_one() {
            return Err(AlgebraError::Domain(
                "log_t requires augmentation 1".into(),
            ));
        }
        let v = self.sub(&Tensor::one(self.sig))?;
        let mut out = Tensor::zero(self.sig);
        let mut pow = Tensor::one(self.sig);
        for k in 1..=self.sig.trunc {
            pow = pow.mul(&v)?;
            if pow.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { Q::one() } else { -Q::one() };
            out = out.add(&pow.scale(&(sign / q_int(k as i64))))?;
        }
        Ok(out)
    }

    /// Cyclicizer `N`: sends a word to the sum of all its rotations and
    /// kills degree zero.
    pub fn cyclicize(&self) -> Tensor {
        let mut out = Tensor::zero(self.sig);
        for (w, c) in &self.terms {
            if w.is_empty() {
                continue;
            }
            for k in 0..w.len() {
                out.add_term(w.rotate_left(k), c.clone());
            }
        }
        out
    }

    /// Contraction of the first two tensor slots through the intersection
    /// pairing: `X1 X2 w  |->  (X1 . X2) w`.  Defined only when every word
    /// has length at least two.
    pub fn contract_c12(&self) -> Result<Tensor> {
        let mut out = Tensor::zero(self.sig);
        for (w, c) in &self.terms {
            if w.len() < 2 {
                return Err(AlgebraError::Domain(format!(
                    "contract_c12 needs all words of length >= 2, found {w}"
                )));
            }
            let p = pairing_symbols(w.0[0], w.0[1]);
            if p != 0 {
                out.add_term(Word(w.0[2..].to_vec()), c * q_int(p));
            }
        }
        Ok(out)
    }

    /// Projection to the symmetric algebra: sorts the letters of each word.
    pub fn sym_project(&self) -> Tensor {
        let mut out = Tensor::zero(self.sig);
        for (w, c) in &self.terms {
            let mut v = w.0.clone();
            v.sort();
            out.add_term(Word(v), c.clone());
        }
        out
    }

    /// The bracket of the derivations `D_u(X) = (X . u_1) u_2 ... u_m`
    /// associated to tensors all of whose words have length >= 1,
    /// expressed again as a tensor (the one whose derivation is the
    /// commutator `[D_u, D_v]`).
    pub fn der_bracket(&self, other: &Tensor) -> Result<Tensor> {
        self.check_sig(other)?;
        let mut out = Tensor::zero(self.sig);
        let mut half = |u: &Tensor, v: &Tensor, sign: i64| -> Result<()> {
            for (a, ca) in &u.terms {
                if a.is_empty() {
                    return Err(AlgebraError::Domain(
                        "der_bracket needs words of length >= 1".into(),
                    ));
                }
                for (b, cb) in &v.terms {
                    if b.is_empty() {
                        return Err(AlgebraError::Domain(
                            "der_bracket needs words of length >= 1".into(),
                        ));
                    }
                    // insert tail of a into b at each position t >= 2,
                    // contracting b_t with the head of a
                    for t in 1..b.len() {
                        let p = pairing_symbols(b.0[t], a.0[0]);
                        if p == 0 {
                            continue;
                        }
                        let mut w = Vec::with_capacity(a.len() + b.len() - 2);
                        w.extend_from_slice(&b.0[..t]);
                        w.extend_from_slice(&a.0[1..]);
                        w.extend_from_slice(&b.0[t + 1..]);
                        out.add_term(Word(w), ca * cb * q_int(p * sign));
                    }
                }
            }
            Ok(())
        };
        half(self, other, 1)?;
        half(other, self, -1)?;
        Ok(out)
    }

    /// `true` if the augmentation vanishes and the coproduct equals
    /// `x (x) 1 + 1 (x) x` up to truncation.
    pub fn is_primitive(&self) -> bool {
        if !self.aug().is_zero() {
            return false;
        }
        let mut expected = PairTensor::zero(self.sig);
        for (w, c) in &self.terms {
            expected.add_term(w.clone(), Word::empty(), c.clone());
            expected.add_term(Word::empty(), w.clone(), c.clone());
        }
        self.coproduct() == expected
    }

    /// `true` if the coproduct equals `x (x) x` (compared in the truncated
    /// pair algebra, where total degree is capped by `D`).
    pub fn is_group_like(&self) -> bool {
        match PairTensor::tensor_product(self, self) {
            Ok(sq) => self.coproduct() == sq,
            Err(_) => false,
        }
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{c}*{w}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Sparse element of the (truncated) two-fold tensor product `T (x) T`,
/// graded by total degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTensor {
    sig: SurfaceSignature,
    terms: BTreeMap<(Word, Word), Q>,
}

impl PairTensor {
    pub fn zero(sig: SurfaceSignature) -> Self {
        PairTensor {
            sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn sig(&self) -> SurfaceSignature {
        self.sig
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, l: Word, r: Word, c: Q) {
        if c.is_zero() || l.len() + r.len() > self.sig.trunc {
            return;
        }
        let key = (l, r);
        let entry = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn check_sig(&self, other: &PairTensor) -> Result<()> {
        if self.sig != other.sig {
            return Err(AlgebraError::SignatureMismatch(format!(
                "{:?} vs {:?}",
                self.sig, other.sig
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PairTensor) -> Result<PairTensor> {
        self.check_sig(other)?;
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PairTensor) -> Result<PairTensor> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> PairTensor {
        if c.is_zero() {
            return PairTensor::zero(self.sig);
        }
        let mut out = PairTensor::zero(self.sig);
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v * c);
        }
        out
    }

    /// Componentwise product `(a (x) b)(c (x) d) = ac (x) bd`.
    pub fn mul(&self, other: &PairTensor) -> Result<PairTensor> {
        self.check_sig(other)?;
        let mut out = PairTensor::zero(self.sig);
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &other.terms {
                if l1.len() + r1.len() + l2.len() + r2.len() > self.sig.trunc {
                    continue;
                }
                out.add_term(l1.concat(l2), r1.concat(r2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// `x (x) y` as an element of the truncated pair algebra.
    pub fn tensor_product(x: &Tensor, y: &Tensor) -> Result<PairTensor> {
        if x.sig() != y.sig() {
            return Err(AlgebraError::SignatureMismatch(format!(
                "{:?} vs {:?}",
                x.sig(),
                y.sig()
            )));
        }
        let mut out = PairTensor::zero(x.sig());
        for (l, cl) in x.terms() {
            for (r, cr) in y.terms() {
                out.add_term(l.clone(), r.clone(), cl * cr);
            }
        }
        Ok(out)
    }

    /// The flip `T(x (x) y) = y (x) x`.
    pub fn swap(&self) -> PairTensor {
        let mut out = PairTensor::zero(self.sig);
        for ((l, r), c) in &self.terms {
            out.add_term(r.clone(), l.clone(), c.clone());
        }
        out
    }

    /// Applies a word-level map to the left factor, with a per-word sign
    /// and image word.
    pub fn map_left(&self, f: impl Fn(&Word) -> (Word, Q)) -> PairTensor {
        let mut out = PairTensor::zero(self.sig);
        for ((l, r), c) in &self.terms {
            let (w, s) = f(l);
            out.add_term(w, r.clone(), c * s);
        }
        out
    }

    pub fn map_right(&self, f: impl Fn(&Word) -> (Word, Q)) -> PairTensor {
        let mut out = PairTensor::zero(self.sig);
        for ((l, r), c) in &self.terms {
            let (w, s) = f(r);
            out.add_term(l.clone(), w, c * s);
        }
        out
    }

    /// Multiplication map `m: T (x) T -> T` (concatenate the two factors).
    pub fn collapse(&self) -> Tensor {
        let mut out = Tensor::zero(self.sig);
        for ((l, r), c) in &self.terms {
            out.add_term(l.concat(r), c.clone());
        }
        out
    }
}

/// Word-level antipode, usable with [`PairTensor::map_left`]/`map_right`.
pub fn antipode_word(w: &Word) -> (Word, Q) {
    let sign = if w.len() % 2 == 0 { Q::one() } else { -Q::one() };
    (w.reversed(), sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sig::BasisSymbol::{A, B};

    fn sig(g: usize, n: usize, d: usize) -> SurfaceSignature {
        SurfaceSignature::new(g, n, d).unwrap()
    }

    fn word(s: &[BasisSymbol]) -> Word {
        Word(s.to_vec())
    }

    #[test]
    fn mul_truncates() {
        let s = sig(1, 0, 3);
        let ab = Tensor::from_word(s, word(&[A(1), B(1)]), q_int(1)).unwrap();
        let sq = ab.mul(&ab).unwrap();
        assert!(sq.is_zero(), "degree 4 must vanish at truncation 3");
        let a = Tensor::from_symbol(s, A(1)).unwrap();
        let cube = a.mul(&a).unwrap().mul(&a).unwrap();
        assert_eq!(cube.coeff(&word(&[A(1), A(1), A(1)])), q_int(1));
    }

    #[test]
    fn coproduct_of_ab_has_four_terms() {
        let s = sig(1, 0, 4);
        let ab = Tensor::from_word(s, word(&[A(1), B(1)]), q_int(1)).unwrap();
        let cp = ab.coproduct();
        assert_eq!(cp.terms().len(), 4);
        assert_eq!(
            cp.terms()[&(word(&[A(1)]), word(&[B(1)]))],
            q_int(1)
        );
        assert_eq!(
            cp.terms()[&(word(&[B(1)]), word(&[A(1)]))],
            q_int(1)
        );
        assert_eq!(cp.terms()[&(word(&[A(1), B(1)]), Word::empty())], q_int(1));
        assert_eq!(cp.terms()[&(Word::empty(), word(&[A(1), B(1)]))], q_int(1));
    }

    #[test]
    fn antipode_reverses_with_sign() {
        let s = sig(1, 0, 4);
        let abb = Tensor::from_word(s, word(&[A(1), B(1), B(1)]), q_int(2)).unwrap();
        let anti = abb.antipode();
        assert_eq!(anti.coeff(&word(&[B(1), B(1), A(1)])), q_int(-2));
    }

    #[test]
    fn exp_log_round_trip() {
        let s = sig(1, 0, 5);
        let a = Tensor::from_symbol(s, A(1)).unwrap();
        let b = Tensor::from_symbol(s, B(1)).unwrap();
        let u = a.add(&b.scale(&q_ratio(3, 2))).unwrap();
        let e = u.exp_t().unwrap();
        assert_eq!(e.log_t().unwrap(), u);
        assert!(e.is_group_like());
    }

    #[test]
    fn exp_rejects_nonzero_augmentation() {
        let s = sig(1, 0, 3);
        let one = Tensor::one(s);
        assert!(matches!(one.exp_t(), Err(AlgebraError::Domain(_))));
        assert!(matches!(
            Tensor::zero(s).log_t(),
            Err(AlgebraError::Domain(_))
        ));
    }

    #[test]
    fn primitive_exponentiates_to_group_like() {
        let s = sig(1, 1, 4);
        let c = Tensor::from_symbol(s, BasisSymbol::C(1)).unwrap();
        assert!(c.is_primitive());
        assert!(c.exp_t().unwrap().is_group_like());
    }

    #[test]
    fn cyclicize_kills_scalars_and_sums_rotations() {
        let s = sig(1, 0, 4);
        let mut t = Tensor::one(s);
        t.add_term(word(&[A(1), A(1), B(1)]), q_int(1));
        let n = t.cyclicize();
        assert!(n.aug().is_zero());
        assert_eq!(n.coeff(&word(&[A(1), A(1), B(1)])), q_int(1));
        assert_eq!(n.coeff(&word(&[A(1), B(1), A(1)])), q_int(1));
        assert_eq!(n.coeff(&word(&[B(1), A(1), A(1)])), q_int(1));
    }

    #[test]
    fn contract_c12_applies_pairing() {
        let s = sig(1, 0, 4);
        let mut t = Tensor::zero(s);
        t.add_term(word(&[A(1), B(1), A(1)]), q_int(2));
        t.add_term(word(&[B(1), A(1), B(1)]), q_int(1));
        t.add_term(word(&[A(1), A(1), B(1)]), q_int(5));
        let c = t.contract_c12().unwrap();
        assert_eq!(c.coeff(&word(&[A(1)])), q_int(2));
        assert_eq!(c.coeff(&word(&[B(1)])), q_int(-1));
        assert_eq!(c.terms().len(), 2);

        let bad = Tensor::from_symbol(s, A(1)).unwrap();
        assert!(bad.contract_c12().is_err());
    }

    #[test]
    fn sym_project_sorts_letters() {
        let s = sig(1, 0, 4);
        let t = Tensor::from_word(s, word(&[B(1), A(1)]), q_int(1)).unwrap();
        let p = t.sym_project();
        assert_eq!(p.coeff(&word(&[A(1), B(1)])), q_int(1));
    }

    #[test]
    fn omega_is_primitive() {
        let s = sig(2, 0, 4);
        let w = Tensor::omega(s);
        assert_eq!(w.terms().len(), 4);
        assert!(w.is_primitive());
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let x = Tensor::one(sig(1, 0, 3));
        let y = Tensor::one(sig(1, 0, 4));
        assert!(matches!(
            x.add(&y),
            Err(AlgebraError::SignatureMismatch(_))
        ));
        let z = Tensor::one(sig(2, 0, 3));
        assert!(matches!(
            x.mul(&z),
            Err(AlgebraError::SignatureMismatch(_))
        ));
    }

    #[test]
    fn der_bracket_matches_commutator_on_degree_one() {
        // u = A1 A1, v = B1 B1 at genus 1: D_u(B1) = -A1, D_v(A1) = B1.
        let s = sig(1, 0, 5);
        let u = Tensor::from_word(s, word(&[A(1), A(1)]), q_int(1)).unwrap();
        let v = Tensor::from_word(s, word(&[B(1), B(1)]), q_int(1)).unwrap();
        let w = u.der_bracket(&v).unwrap();
        // [D_u, D_v](A1) = D_u(B1) = -A1 ; D_w(A1) = (A1 . w_1) w_rest
        let mut da = Tensor::zero(s);
        for (t, c) in w.terms() {
            let p = pairing_symbols(A(1), t.0[0]);
            if p != 0 {
                da.add_term(Word(t.0[1..].to_vec()), c * q_int(p));
            }
        }
        let expect = Tensor::from_symbol(s, A(1)).unwrap().neg();
        assert_eq!(da, expect);
    }
}
