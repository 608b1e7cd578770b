//! Tensorial string operations: the intersection pairing `rho`, the double
//! bracket `kappa` (in two independent realizations that must agree), the
//! algebraic self-intersection `mu_alg` with the theta-independent low part
//! of the full self-intersection, and Schedler's cobracket `delta_alg`.
//!
//! Everything is driven by the Bernoulli-type power series
//! `s(z) = 1/(e^{-z} - 1) + 1/z`, evaluated at the symplectic form `omega`.

use crate::error::{AlgebraError, Result};
use crate::necklace::Necklace;
use crate::sig::{SurfaceSignature, Word};
use crate::tensor::{antipode_word, pairing_symbols, q_int, PairTensor, Q, Tensor};
use num::{One, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

/// Coefficients of `s(z) = 1/(e^{-z} - 1) + 1/z`, exact rationals.
///
/// The expansion starts `-1/2 - z/12 + z^3/720 - z^5/30240 + ...`; every
/// even-degree coefficient beyond the constant term vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliSeries {
    coeffs: Vec<Q>,
}

impl BernoulliSeries {
    /// Coefficients `s_0, ..., s_k_max`, computed by inverting the power
    /// series `g(z) = (e^{-z} - 1)/z` exactly: `z s(z) = 1/g(z) + 1`.
    pub fn up_to(k_max: usize) -> Self {
        // g_m = (-1)^{m+1} / (m+1)!
        let len = k_max + 2;
        let mut g = Vec::with_capacity(len);
        let mut fact = Q::one();
        for m in 0..len {
            fact *= q_int(m as i64 + 1);
            let sign = if m % 2 == 0 { -1 } else { 1 };
            g.push(q_int(sign) / fact.clone());
        }
        // h = 1/g by the standard recursion (g_0 = -1 is invertible)
        let mut h: Vec<Q> = Vec::with_capacity(len);
        h.push(Q::one() / g[0].clone());
        for m in 1..len {
            let mut acc = Q::zero();
            for j in 1..=m {
                acc += g[j].clone() * h[m - j].clone();
            }
            h.push(-acc / g[0].clone());
        }
        // z s(z) = h(z) + 1, so s_k = h_{k+1}
        BernoulliSeries {
            coeffs: h[1..].to_vec(),
        }
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }
}

static S_OMEGA_CACHE: Lazy<Mutex<HashMap<SurfaceSignature, Tensor>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The tensor `s(omega)`, the series substituted at the symplectic form;
/// `omega` has degree 2, so only coefficients up to `D/2` contribute.
/// Cached per signature.
pub fn s_of_omega(sig: SurfaceSignature) -> Tensor {
    if let Some(t) = S_OMEGA_CACHE.lock().unwrap().get(&sig) {
        return t.clone();
    }
    let series = BernoulliSeries::up_to(sig.trunc / 2);
    let omega = Tensor::omega(sig);
    let mut power = Tensor::one(sig);
    let mut out = Tensor::zero(sig);
    for k in 0..=sig.trunc / 2 {
        let c = series.coeff(k);
        if !c.is_zero() {
            out = out.add(&power.scale(&c)).expect("same signature");
        }
        power = power.mul(&omega).expect("same signature");
    }
    S_OMEGA_CACHE.lock().unwrap().insert(sig, out.clone());
    out
}

/// The part of a tensor with no scalar component, `t - aug(t) 1`.
fn positive_part(t: &Tensor) -> Tensor {
    let mut out = Tensor::zero(t.sig());
    for (w, c) in t.terms() {
        if !w.is_empty() {
            out.add_term(w.clone(), c.clone());
        }
    }
    out
}

/// The contraction `X1...Xm ~> Y1...Yn = (Xm . Y1) X1...X{m-1} Y2...Yn`,
/// extended bilinearly; zero on any scalar factor.
fn leadsto(a: &Tensor, b: &Tensor) -> Tensor {
    let sig = a.sig();
    let mut out = Tensor::zero(sig);
    for (wa, ca) in a.terms() {
        let Some(&last) = wa.0.last() else { continue };
        for (wb, cb) in b.terms() {
            let Some(&first) = wb.0.first() else { continue };
            let p = pairing_symbols(last, first);
            if p != 0 && wa.len() + wb.len() - 2 <= sig.trunc {
                let mut v = wa.0[..wa.len() - 1].to_vec();
                v.extend_from_slice(&wb.0[1..]);
                out.add_term(Word(v), ca * cb * q_int(p));
            }
        }
    }
    out
}

/// Intersection pairing of one-variable functions of loops:
/// `rho(a, b) = (a - aug(a)) ~> (b - aug(b)) + (a - aug(a)) s(omega) (b - aug(b))`.
pub fn rho(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    if a.sig() != b.sig() {
        return Err(AlgebraError::SignatureMismatch(
            "rho needs both arguments over one signature".into(),
        ));
    }
    if a.sig().boundary_extra != 0 {
        return Err(AlgebraError::Domain(
            "rho is defined for closed-up signatures (n = 0)".into(),
        ));
    }
    Ok(rho_unchecked(a, b))
}

/// `rho` without the boundary check; internal building block for the
/// composite realization of `kappa`.
fn rho_unchecked(a: &Tensor, b: &Tensor) -> Tensor {
    let a1 = positive_part(a);
    let b1 = positive_part(b);
    let s_term = a1
        .mul(&s_of_omega(a.sig()))
        .and_then(|t| t.mul(&b1))
        .expect("same signature");
    leadsto(&a1, &b1).add(&s_term).expect("same signature")
}

fn check_degree_one(t: &Tensor, op: &str) -> Result<()> {
    for w in t.terms().keys() {
        if w.len() != 1 {
            return Err(AlgebraError::Domain(format!(
                "{op} takes degree-1 arguments, found word of length {}",
                w.len()
            )));
        }
    }
    Ok(())
}

/// Intersection pairing of two degree-1 tensors, the bilinear extension of
/// the symbol pairing.
fn pairing_deg1(x: &Tensor, y: &Tensor) -> Q {
    let mut out = Q::zero();
    for (wx, cx) in x.terms() {
        for (wy, cy) in y.terms() {
            out += cx * cy * q_int(pairing_symbols(wx.0[0], wy.0[0]));
        }
    }
    out
}

/// The double bracket on degree-1 arguments, by its closed formula:
/// `kappa(X, Y) = -(X . Y)(1 (x) 1) - (1 (x) antipode) coproduct(X s(omega) Y)`.
pub fn kappa_direct(x: &Tensor, y: &Tensor) -> Result<PairTensor> {
    if x.sig() != y.sig() {
        return Err(AlgebraError::SignatureMismatch(
            "kappa needs both arguments over one signature".into(),
        ));
    }
    check_degree_one(x, "kappa_direct")?;
    check_degree_one(y, "kappa_direct")?;
    let sig = x.sig();
    let w = x.mul(&s_of_omega(sig))?.mul(y)?;
    let mut out = w.coproduct().map_right(antipode_word).scale(&-Q::one());
    out.add_term(Word::empty(), Word::empty(), -pairing_deg1(x, y));
    Ok(out)
}

/// The double bracket on degree-1 arguments, through the four-factor
/// composite built from the pairing:
/// in Sweedler notation, `kappa(x, y) = -sum h' (x) (y'' antipode(h'') x')`
/// with `h = rho(x'', y')` ranging over the coproducts of `x` and `y`.
pub fn kappa_from_eta(x: &Tensor, y: &Tensor) -> Result<PairTensor> {
    if x.sig() != y.sig() {
        return Err(AlgebraError::SignatureMismatch(
            "kappa needs both arguments over one signature".into(),
        ));
    }
    check_degree_one(x, "kappa_from_eta")?;
    check_degree_one(y, "kappa_from_eta")?;
    let sig = x.sig();
    let mut out = PairTensor::zero(sig);
    for ((x1, x2), cx) in x.coproduct().terms() {
        for ((y1, y2), cy) in y.coproduct().terms() {
            let h = rho_unchecked(
                &Tensor::from_word(sig, x2.clone(), Q::one())?,
                &Tensor::from_word(sig, y1.clone(), Q::one())?,
            );
            for ((h1, h2), ch) in h.coproduct().terms() {
                let (h2_rev, sign) = antipode_word(h2);
                if h1.len() + y2.len() + h2_rev.len() + x1.len() > sig.trunc {
                    continue;
                }
                let right = y2.concat(&h2_rev).concat(x1);
                out.add_term(h1.clone(), right, -(cx * cy * ch * sign));
            }
        }
    }
    Ok(out)
}

/// Post-composition with `-1 (x) aug`: keeps terms whose right factor is
/// scalar and negates. Sends `kappa_direct(X, Y)` back to `rho(X, Y)`.
pub fn neg_one_aug(k: &PairTensor) -> Tensor {
    let mut out = Tensor::zero(k.sig());
    for ((l, r), c) in k.terms() {
        if r.is_empty() {
            out.add_term(l.clone(), -c);
        }
    }
    out
}

/// Sum of all rotations of a word; the empty word maps to zero.
fn necklace_of_word(sig: SurfaceSignature, w: &Word) -> Tensor {
    let mut out = Tensor::zero(sig);
    for k in 0..w.len() {
        out.add_term(w.rotate_left(k), Q::one());
    }
    out
}

/// Algebraic self-intersection of a homogeneous word:
/// `mu_alg(X1...Xm) = sum_{i<j} (Xi . Xj) X1...X{i-1}X{j+1}...Xm (x) N(X{i+1}...X{j-1})`,
/// the right factor cyclicized (so an empty inner word contributes zero).
pub fn mu_alg(sig: SurfaceSignature, w: &Word) -> Result<PairTensor> {
    let mut out = PairTensor::zero(sig);
    let m = w.len();
    for i in 0..m {
        for j in i + 1..m {
            let p = pairing_symbols(w.0[i], w.0[j]);
            if p == 0 || j == i + 1 {
                continue; // empty inner word: N(empty) = 0
            }
            let mut outer = w.0[..i].to_vec();
            outer.extend_from_slice(&w.0[j + 1..]);
            let inner = Word(w.0[i + 1..j].to_vec());
            for (rot, c) in necklace_of_word(sig, &inner).into_terms() {
                out.add_term(Word(outer.clone()), rot, c * q_int(p));
            }
        }
    }
    Ok(out)
}

/// Linear extension of [`mu_alg`] over the homogeneous parts of a tensor.
pub fn mu_alg_tensor(t: &Tensor) -> Result<PairTensor> {
    let mut out = PairTensor::zero(t.sig());
    for (w, c) in t.terms() {
        out = out.add(&mu_alg(t.sig(), w)?.scale(c))?;
    }
    Ok(out)
}

/// The theta-independent part of the full self-intersection of a
/// homogeneous word: `mu_alg(w) - 1/2 (1 (x) N(w))`. The components live
/// in total degrees `|w| - 2` and `|w|` only.
pub fn mu_theta_low(sig: SurfaceSignature, w: &Word) -> Result<PairTensor> {
    let mut out = mu_alg(sig, w)?;
    for (rot, c) in necklace_of_word(sig, w).into_terms() {
        out.add_term(Word::empty(), rot, -c / q_int(2));
    }
    Ok(out)
}

/// Schedler's cobracket of the single cyclic word `N(X1...Xm)`, as a list
/// of necklace pairs: each entry `(a, b, c)` stands for `c N(a) (x) N(b)`.
///
/// The formula is `-sum_{i<j} (Xi . Xj) [N(inner) (x) N(outer) -
/// N(outer) (x) N(inner)]`, with `inner = X{i+1}...X{j-1}` and
/// `outer = X{j+1}...Xm X1...X{i-1}`; empty factors drop out.
pub fn delta_word(w: &Word) -> Vec<(Word, Word, Q)> {
    let m = w.len();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let p = pairing_symbols(w.0[i], w.0[j]);
            if p == 0 {
                continue;
            }
            let inner = Word(w.0[i + 1..j].to_vec());
            let mut outer = w.0[j + 1..].to_vec();
            outer.extend_from_slice(&w.0[..i]);
            let outer = Word(outer);
            if inner.is_empty() || outer.is_empty() {
                continue;
            }
            out.push((inner.clone(), outer.clone(), q_int(-p)));
            out.push((outer, inner, q_int(p)));
        }
    }
    out
}

/// Expands a list of symbolic necklace pairs into a pair tensor, each
/// factor replaced by the sum of its rotations.
pub fn expand_necklace_pairs(
    sig: SurfaceSignature,
    terms: &[(Word, Word, Q)],
) -> PairTensor {
    let mut out = PairTensor::zero(sig);
    for (a, b, c) in terms {
        for (ra, ca) in necklace_of_word(sig, a).into_terms() {
            for (rb, cb) in necklace_of_word(sig, b).into_terms() {
                out.add_term(ra.clone(), rb, c * ca.clone() * cb);
            }
        }
    }
    out
}

/// Schedler's cobracket of a necklace, evaluated on the lexicographically
/// minimal rotation of each cyclic orbit.
pub fn delta_alg(u: &Necklace) -> Result<PairTensor> {
    let sig = u.sig();
    if sig.boundary_extra != 0 {
        return Err(AlgebraError::Domain(
            "delta_alg is defined for closed-up signatures (n = 0)".into(),
        ));
    }
    let mut out = PairTensor::zero(sig);
    let mut seen: std::collections::BTreeSet<Word> = std::collections::BTreeSet::new();
    for (w, c) in u.value().terms() {
        let rep = w.min_rotation();
        if !seen.insert(rep.clone()) {
            continue;
        }
        // the orbit carries coefficient c on each of its period() distinct
        // rotations, i.e. it equals (c period / length) N(rep)
        let weight = c * q_int(rep.period() as i64) / q_int(rep.len() as i64);
        out = out.add(&expand_necklace_pairs(sig, &delta_word(&rep)).scale(&weight))?;
    }
    Ok(out)
}
