//! Johnson-type invariants: the graded kernels `h(k)` with their Morita
//! and Satoh traces, generalized Dehn twists as exponentials of necklace
//! derivations, extraction of the Johnson maps from a twist automorphism,
//! and the identity tying the cobracket to the Morita trace.

use crate::error::{AlgebraError, Result};
use crate::expansion::{AlgebraMap, Expansion};
use crate::freegroup::FreeWord;
use crate::linalg::{solve_in_span, SolveOutcome};
use crate::lyndon::lie_basis;
use crate::necklace::{act_with_values, derivation_symbol_values, Necklace};
use crate::sig::{BasisSymbol, SurfaceSignature, Word};
use crate::stringops::delta_alg;
use crate::tensor::{q_int, Q, Tensor};
use num::{One, Zero};
use std::collections::BTreeMap;

/// Deterministic basis of the degree-`k` kernel
/// `h(k) = Ker([ , ]: H (x) L(k+1) -> L(k+2))`, each element expanded as a
/// tensor in `H^{(x) k+2}`.
#[derive(Debug, Clone)]
pub struct GradedKernelBasis {
    pub k: usize,
    pub basis: Vec<Tensor>,
}

/// Basis of `h(k)` via exact elimination: rows are the bracket images
/// `X u - u X` of the products of a symbol with a Lyndon basis element.
pub fn hk_basis(sig: SurfaceSignature, k: usize) -> Result<GradedKernelBasis> {
    if k + 2 > sig.trunc {
        return Err(AlgebraError::Domain(format!(
            "h({k}) needs truncation order >= {}, have {}",
            k + 2,
            sig.trunc
        )));
    }
    if sig.boundary_extra != 0 {
        return Err(AlgebraError::Domain(
            "h(k) is defined for closed-up signatures (n = 0)".into(),
        ));
    }
    let mut domain = Vec::new();
    let mut rows = Vec::new();
    for s in sig.symbols() {
        let x = Tensor::from_symbol(sig, s)?;
        for u in lie_basis(sig, k + 1)? {
            rows.push(x.mul(&u)?.sub(&u.mul(&x)?)?);
            domain.push(x.mul(&u)?);
        }
    }
    let mut basis = Vec::new();
    for v in crate::linalg::kernel_basis(&rows)? {
        let mut elt = Tensor::zero(sig);
        for (c, d) in v.iter().zip(&domain) {
            if !c.is_zero() {
                elt = elt.add(&d.scale(c))?;
            }
        }
        basis.push(elt);
    }
    Ok(GradedKernelBasis { k, basis })
}

/// The `k`-th Morita trace of an element of `h(k)`: contract the first two
/// slots, then project to the symmetric algebra. The argument must lie in
/// the span of the supplied kernel basis.
pub fn morita_trace(basis: &GradedKernelBasis, u: &Tensor) -> Result<Tensor> {
    match solve_in_span(&basis.basis, u)? {
        SolveOutcome::Solution(_) => Ok(u.contract_c12()?.sym_project()),
        SolveOutcome::Inconsistent => Err(AlgebraError::Domain(format!(
            "argument is not in h({})",
            basis.k
        ))),
    }
}

/// A rational combination of cyclic words: the value of a tensor in the
/// coinvariants of the rotation action, keys canonicalized to the
/// lexicographically minimal rotation (no signs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicCoinvariant {
    terms: BTreeMap<Word, Q>,
}

impl CyclicCoinvariant {
    pub fn from_tensor(t: &Tensor) -> Self {
        let mut terms: BTreeMap<Word, Q> = BTreeMap::new();
        for (w, c) in t.terms() {
            let e = terms.entry(w.min_rotation()).or_insert_with(Q::zero);
            *e += c;
        }
        terms.retain(|_, c| !c.is_zero());
        CyclicCoinvariant { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Image in the symmetric algebra (letters of each key sorted).
    pub fn symmetrized(&self, sig: SurfaceSignature) -> Tensor {
        let mut out = Tensor::zero(sig);
        for (w, c) in &self.terms {
            let mut v = w.0.clone();
            v.sort();
            out.add_term(Word(v), c.clone());
        }
        out
    }
}

/// The Satoh trace: contraction of the first two slots followed by the
/// quotient to cyclic coinvariants. A strict refinement of the Morita
/// trace (whose value is recovered by symmetrizing).
pub fn satoh_trace(u: &Tensor) -> Result<CyclicCoinvariant> {
    Ok(CyclicCoinvariant::from_tensor(&u.contract_c12()?))
}

/// The necklace `L(x) = 1/2 N(l l)` with `l = log theta(x)`; the quadratic
/// generating function of the generalized Dehn twist along `x`.
pub fn l_theta(theta: &Expansion, x: &FreeWord) -> Result<Necklace> {
    let l = theta.log_theta(x)?;
    Ok(Necklace::cyclicized(&l.mul(&l)?.scale(&(Q::one() / q_int(2)))))
}

/// Exponential of a necklace derivation as an algebra automorphism,
/// given by its values on the degree-1 symbols. Terminates because the
/// degree-preserving part of the derivation is nilpotent on each word and
/// the rest raises degree.
pub fn exp_derivation(u: &Necklace) -> Result<AlgebraMap> {
    let sig = u.sig();
    let values = derivation_symbol_values(u)?;
    let mut out = BTreeMap::new();
    for s in sig.symbols() {
        let mut total = Tensor::from_symbol(sig, s)?;
        let mut term = total.clone();
        let mut r: i64 = 0;
        while !term.is_zero() {
            r += 1;
            if r > 4 * sig.trunc as i64 + 8 {
                return Err(AlgebraError::InternalInvariant(
                    "derivation exponential did not terminate".into(),
                ));
            }
            term = act_with_values(&values, &term)?.scale(&(Q::one() / q_int(r)));
            total = total.add(&term)?;
        }
        out.insert(s, total);
    }
    AlgebraMap::new(sig, out)
}

/// The generalized Dehn twist along `x` through the expansion `theta`:
/// `exp` of the derivation of `-L(x)`. On degree 1 this is the right-handed
/// transvection `X |-> X - (X . [x]) [x]`.
pub fn twist_auto(theta: &Expansion, x: &FreeWord) -> Result<AlgebraMap> {
    exp_derivation(&l_theta(theta, x)?.neg())
}

/// Exact inverse of a square rational matrix by Gauss-Jordan elimination.
fn invert_matrix(m: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| AlgebraError::Domain("singular degree-1 part".into()))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= p.clone();
            inv[col][j] /= p.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let s = a[col][j].clone() * f.clone();
                    a[r][j] -= s;
                    let s = inv[col][j].clone() * f.clone();
                    inv[r][j] -= s;
                }
            }
        }
    }
    Ok(inv)
}

/// Normalizes an automorphism by the inverse of its degree-1 part, leaving
/// a map with identity linear term.
pub fn ia_normalize(u: &AlgebraMap) -> Result<AlgebraMap> {
    let inv = invert_matrix(&u.degree1_matrix())?;
    u.compose(&AlgebraMap::from_degree1_matrix(u.sig(), &inv)?)
}

/// The degree-`k` Johnson map of an automorphism, as a tensor in
/// `H^{(x) k+2}`: compose with the inverse of the degree-1 part, read the
/// component `H -> H^{(x) k+1}` of the result, and raise the index through
/// the symplectic pairing (`f |-> sum_i B_i f(A_i) - A_i f(B_i)`).
pub fn tau_extract(u: &AlgebraMap, k: usize) -> Result<Tensor> {
    let sig = u.sig();
    let v = ia_normalize(u)?;
    let mut out = Tensor::zero(sig);
    for i in 1..=sig.genus as u16 {
        let a = BasisSymbol::A(i);
        let b = BasisSymbol::B(i);
        let fa = v.value(a)?.degree_part(k + 1);
        let fb = v.value(b)?.degree_part(k + 1);
        let at = Tensor::from_symbol(sig, a)?;
        let bt = Tensor::from_symbol(sig, b)?;
        out = out.add(&bt.mul(&fa)?)?.sub(&at.mul(&fb)?)?;
    }
    Ok(out)
}

/// Logarithm of an automorphism with identity degree-1 part, as the values
/// of the corresponding derivation on the symbols. Its lowest-degree
/// component coincides with the lowest Johnson map.
pub fn log_auto(u: &AlgebraMap) -> Result<BTreeMap<BasisSymbol, Tensor>> {
    let sig = u.sig();
    let mut out = BTreeMap::new();
    for s in sig.symbols() {
        let x = Tensor::from_symbol(sig, s)?;
        if u.value(s)?.degree_part(1) != x {
            return Err(AlgebraError::Domain(
                "log_auto needs an identity degree-1 part".into(),
            ));
        }
        let mut term = u.value(s)?.sub(&x)?; // (U - 1)(s)
        let mut total = Tensor::zero(sig);
        let mut r: i64 = 1;
        while !term.is_zero() {
            let sign = if r % 2 == 1 { Q::one() } else { -Q::one() };
            total = total.add(&term.scale(&(sign / q_int(r))))?;
            term = u.apply(&term)?.sub(&term)?;
            r += 1;
            if r > 2 * sig.trunc as i64 + 4 {
                return Err(AlgebraError::InternalInvariant(
                    "automorphism logarithm did not terminate".into(),
                ));
            }
        }
        out.insert(s, total);
    }
    Ok(out)
}

/// Report of the trace/cobracket identity on one graded piece.
#[derive(Debug, Clone)]
pub struct TraceCobracketReport {
    pub k: usize,
    pub genus: usize,
    pub pass: bool,
    /// Indices of basis elements where the identity failed.
    pub witnesses: Vec<usize>,
}

/// Checks, for every element `u` of the kernel basis of `h(k)`, that the
/// symmetrized composite of the cobracket of `u` equals `(-k)` times the
/// Morita trace of `u`.
///
/// The composite projects the second cobracket factor onto its degree-1
/// part and maps the first factor to the symmetric algebra through its
/// cyclic class; since every rotation of a cyclic word has the same
/// symmetric image, counting each class once amounts to dividing the
/// rotation sum by the word length `k - 1`. With this normalization the
/// identity holds exactly on all of `h(k)`; the mirror-image composite
/// (degree-1 part on the left, rotation sums kept whole) instead produces
/// `k(k-1)` times the trace.
pub fn trace_cobracket_check(sig: SurfaceSignature, k: usize) -> Result<TraceCobracketReport> {
    if k < 3 {
        return Err(AlgebraError::Domain(
            "the trace/cobracket identity needs k >= 3".into(),
        ));
    }
    let basis = hk_basis(sig, k)?;
    let mut witnesses = Vec::new();
    for (i, u) in basis.basis.iter().enumerate() {
        let delta = delta_alg(&Necklace::new(u.clone())?)?;
        let mut lhs = Tensor::zero(sig);
        for ((l, r), c) in delta.terms() {
            if r.len() == 1 {
                lhs.add_term(r.concat(l), c.clone());
            }
        }
        let lhs = lhs
            .sym_project()
            .scale(&(q_int(1) / q_int(k as i64 - 1)));
        let rhs = morita_trace(&basis, u)?.scale(&q_int(-(k as i64)));
        if lhs != rhs {
            witnesses.push(i);
        }
    }
    Ok(TraceCobracketReport {
        k,
        genus: sig.genus,
        pass: witnesses.is_empty(),
        witnesses,
    })
}

/// Do the twists along `x1` and `x2 = x1 c` agree modulo high degree?
/// The witness `c` must multiply `x1` into `x2`; twists then agree up to
/// degree `k` when `c` is a `(k+1)`-fold nested commutator, and one degree
/// deeper when both loops are null-homologous.
pub fn nilpotent_agreement(
    theta: &Expansion,
    x1: &FreeWord,
    x2: &FreeWord,
    witness: &FreeWord,
    k: usize,
) -> Result<bool> {
    if &x1.mul(witness) != x2 {
        return Err(AlgebraError::Domain(
            "witness does not multiply the first word into the second".into(),
        ));
    }
    let null_homologous = theta.log_theta(x1)?.degree_part(1).is_zero()
        && theta.log_theta(x2)?.degree_part(1).is_zero();
    let depth = if null_homologous { k + 1 } else { k };
    let t1 = twist_auto(theta, x1)?;
    let t2 = twist_auto(theta, x2)?;
    Ok(t1.agrees_to_degree(&t2, depth))
}
