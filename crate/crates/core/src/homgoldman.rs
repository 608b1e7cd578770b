//! The homological Goldman Lie algebra of a finitely generated free
//! abelian group with an alternating integer pairing: the bracket
//! `[[X], [Y]] = (X . Y) [X + Y]`, divisibility by the primitivity index
//! `nu`, commutator-ideal membership, and the shape conditions that
//! classify the ideals.

use crate::error::{AlgebraError, Result};
use crate::tensor::{q_int, Q};
use num::{One, Zero};
use std::collections::BTreeMap;

/// An alternating integer pairing on `Z^r`, possibly degenerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingLattice {
    rank: usize,
    matrix: Vec<Vec<i64>>,
}

impl PairingLattice {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let rank = matrix.len();
        for row in &matrix {
            if row.len() != rank {
                return Err(AlgebraError::Domain(
                    "pairing matrix must be square".into(),
                ));
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                if matrix[i][j] != -matrix[j][i] {
                    return Err(AlgebraError::Domain(
                        "pairing matrix must be antisymmetric".into(),
                    ));
                }
            }
        }
        Ok(PairingLattice { rank, matrix })
    }

    /// The standard symplectic pairing of rank `2g`.
    pub fn symplectic(g: usize) -> Self {
        let rank = 2 * g;
        let mut matrix = vec![vec![0i64; rank]; rank];
        for i in 0..g {
            matrix[2 * i][2 * i + 1] = 1;
            matrix[2 * i + 1][2 * i] = -1;
        }
        PairingLattice { rank, matrix }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// `(x . y) = x^T M y`.
    pub fn pairing(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut out = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                out += x[i] * self.matrix[i][j] * y[j];
            }
        }
        out
    }

    /// Is `x` in the kernel of `mu`, i.e. paired trivially with everything?
    pub fn in_kernel(&self, x: &[i64]) -> bool {
        (0..self.rank).all(|j| (0..self.rank).map(|i| x[i] * self.matrix[i][j]).sum::<i64>() == 0)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.kernel_generators().is_empty()
    }

    /// Integer generators of the kernel of `mu`, by exact elimination of
    /// the rational kernel with denominators cleared.
    pub fn kernel_generators(&self) -> Vec<Vec<i64>> {
        // eliminate the rows of M over Q, tracking combinations
        let mut pivots: Vec<(usize, Vec<Q>, Vec<Q>)> = Vec::new(); // (col, row, combo)
        let mut kernel = Vec::new();
        for i in 0..self.rank {
            let mut row: Vec<Q> = self.matrix[i].iter().map(|&v| q_int(v)).collect();
            let mut combo: Vec<Q> = (0..self.rank)
                .map(|j| if j == i { Q::one() } else { Q::zero() })
                .collect();
            for (c, prow, pcombo) in &pivots {
                if !row[*c].is_zero() {
                    let f = row[*c].clone();
                    for j in 0..self.rank {
                        let s = prow[j].clone() * f.clone();
                        row[j] -= s;
                        let s = pcombo[j].clone() * f.clone();
                        combo[j] -= s;
                    }
                }
            }
            if let Some(c) = row.iter().position(|v| !v.is_zero()) {
                let inv = Q::one() / row[c].clone();
                for j in 0..self.rank {
                    row[j] *= inv.clone();
                    combo[j] *= inv.clone();
                }
                pivots.push((c, row, combo));
            } else {
                // clear denominators and content
                let lcm = combo
                    .iter()
                    .fold(num::BigInt::one(), |acc, q| num::integer::lcm(acc, q.denom().clone()));
                let ints: Vec<num::BigInt> =
                    combo.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
                let gcd = ints
                    .iter()
                    .fold(num::BigInt::zero(), |acc, v| num::integer::gcd(acc, v.clone()));
                let vec: Vec<i64> = ints
                    .iter()
                    .map(|v| {
                        use num::ToPrimitive;
                        (v / &gcd).to_i64().expect("desk-scale kernel generator")
                    })
                    .collect();
                kernel.push(vec);
            }
        }
        kernel
    }
}

/// A finite rational combination of lattice points `[X]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HGElement {
    rank: usize,
    terms: BTreeMap<Vec<i64>, Q>,
}

impl HGElement {
    pub fn zero(rank: usize) -> Self {
        HGElement {
            rank,
            terms: BTreeMap::new(),
        }
    }

    /// The basis element `[x]`.
    pub fn basis(x: Vec<i64>) -> Self {
        let rank = x.len();
        let mut terms = BTreeMap::new();
        terms.insert(x, Q::one());
        HGElement { rank, terms }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, x: Vec<i64>, c: Q) {
        debug_assert_eq!(x.len(), self.rank);
        let entry = self.terms.entry(x.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add(&self, other: &HGElement) -> Result<HGElement> {
        if self.rank != other.rank {
            return Err(AlgebraError::SignatureMismatch(
                "homological elements over different lattices".into(),
            ));
        }
        let mut out = self.clone();
        for (x, c) in &other.terms {
            out.add_term(x.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> HGElement {
        if c.is_zero() {
            return HGElement::zero(self.rank);
        }
        HGElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(x, v)| (x.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> HGElement {
        self.scale(&-Q::one())
    }

    /// The translation operator `T(z): [X] |-> [X + z]`.
    pub fn translate(&self, z: &[i64]) -> HGElement {
        HGElement {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(x, c)| (x.iter().zip(z).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }
}

/// The homological Goldman bracket, `[[X], [Y]] = (X . Y) [X + Y]`
/// extended bilinearly.
pub fn hg_bracket(lat: &PairingLattice, u: &HGElement, v: &HGElement) -> Result<HGElement> {
    if u.rank != lat.rank || v.rank != lat.rank {
        return Err(AlgebraError::SignatureMismatch(
            "elements do not match the lattice rank".into(),
        ));
    }
    let mut out = HGElement::zero(lat.rank);
    for (x, cx) in &u.terms {
        for (y, cy) in &v.terms {
            let p = lat.pairing(x, y);
            if p != 0 {
                let sum = x.iter().zip(y).map(|(a, b)| a + b).collect();
                out.add_term(sum, cx * cy * q_int(p));
            }
        }
    }
    Ok(out)
}

/// The primitivity index: gcd of the coordinates, with `nu(0) = 0`.
pub fn nu(x: &[i64]) -> i64 {
    x.iter().fold(0, |acc, &v| num::integer::gcd(acc, v.abs()))
}

/// Is an integer element in the commutator ideal? For a non-degenerate
/// pairing that ideal is the direct sum of `Z nu(X) [X]` over nonzero `X`:
/// the coefficient of `[0]` must vanish and every other coefficient must
/// be divisible by `nu` of its support vector.
pub fn commutator_member(lat: &PairingLattice, u: &HGElement) -> Result<bool> {
    if u.rank != lat.rank {
        return Err(AlgebraError::SignatureMismatch(
            "element does not match the lattice rank".into(),
        ));
    }
    if !lat.is_nondegenerate() {
        return Err(AlgebraError::Domain(
            "commutator membership is stated for non-degenerate pairings".into(),
        ));
    }
    for (x, c) in &u.terms {
        if !c.is_integer() {
            return Err(AlgebraError::Domain(
                "commutator membership needs integer coefficients".into(),
            ));
        }
        let n = nu(x);
        if n == 0 {
            return Ok(false); // the class [0] is not in the commutator ideal
        }
        use num::ToPrimitive;
        let num = c.to_integer().to_i64().ok_or_else(|| {
            AlgebraError::Domain("coefficient out of desk-scale range".into())
        })?;
        if num % n != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is the element central? The center is the linear span of the kernel of
/// `mu`, so every support vector must pair trivially with everything.
pub fn center_member(lat: &PairingLattice, u: &HGElement) -> bool {
    u.terms.keys().all(|x| lat.in_kernel(x))
}

/// Rational span membership by elimination over the support vectors.
fn in_span(gens: &[HGElement], target: &HGElement) -> bool {
    let mut pivots: Vec<HGElement> = Vec::new();
    for g in gens {
        let mut row = g.clone();
        for p in &pivots {
            let lead = p.terms.keys().next().unwrap();
            let c = row.terms.get(lead).cloned();
            if let Some(c) = c {
                row = row.add(&p.scale(&-c)).unwrap();
            }
        }
        if let Some((lead, c)) = row.terms.iter().next().map(|(k, v)| (k.clone(), v.clone())) {
            let _ = lead;
            pivots.push(row.scale(&(Q::one() / c)));
        }
    }
    let mut res = target.clone();
    for p in &pivots {
        let lead = p.terms.keys().next().unwrap();
        let c = res.terms.get(lead).cloned();
        if let Some(c) = c {
            res = res.add(&p.scale(&-c)).unwrap();
        }
    }
    res.is_zero()
}

/// Checks the ideal-shape conditions for a pair `(V0, V)` of finite
/// generating sets: both must span subspaces of the linear span of
/// `Ker(mu)`; `V` must be stable under translation by the kernel; and the
/// assembled subspace `V0 + sum over X outside the kernel of T(X)(V)` must
/// be closed under bracketing with sampled basis classes `[X]`. A
/// necessary-condition check at desk scale, not a certification.
pub fn ideal_shape_check(
    lat: &PairingLattice,
    v0: &[HGElement],
    v: &[HGElement],
) -> Result<bool> {
    for u in v0.iter().chain(v) {
        if u.rank != lat.rank {
            return Err(AlgebraError::SignatureMismatch(
                "generator does not match the lattice rank".into(),
            ));
        }
        // condition (1): support inside Ker(mu)
        if !u.terms.keys().all(|x| lat.in_kernel(x)) {
            return Ok(false);
        }
    }
    // condition (2): T(Z)(V) inside V for kernel generators Z
    for z in lat.kernel_generators() {
        let minus: Vec<i64> = z.iter().map(|v| -v).collect();
        for u in v {
            if !in_span(v, &u.translate(&z)) || !in_span(v, &u.translate(&minus)) {
                return Ok(false);
            }
        }
    }
    // bracket closure on a sampled box of basis classes
    let samples = sample_box(lat.rank, 1);
    let member = |w: &HGElement| -> bool {
        // split into the kernel part (must lie in span V0) and, per
        // translation coset, a part that must lie in span V
        let mut kernel_part = HGElement::zero(lat.rank);
        let mut cosets: BTreeMap<Vec<i64>, HGElement> = BTreeMap::new();
        for (x, c) in &w.terms {
            if lat.in_kernel(x) {
                kernel_part.add_term(x.clone(), c.clone());
            } else {
                let entry = cosets
                    .entry(x.clone())
                    .or_insert_with(|| HGElement::zero(lat.rank));
                entry.add_term(vec![0; lat.rank], c.clone());
            }
        }
        if !in_span(v0, &kernel_part) {
            return false;
        }
        cosets.iter().all(|(_, part)| in_span(v, part))
    };
    for x in &samples {
        let bx = HGElement::basis(x.clone());
        for u in v0.iter().chain(v) {
            if !member(&hg_bracket(lat, &bx, u)?) {
                return Ok(false);
            }
        }
        // also bracket against the assembled translates of V
        for y in &samples {
            if lat.in_kernel(y) {
                continue;
            }
            for u in v {
                if !member(&hg_bracket(lat, &bx, &u.translate(y))?) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// All integer vectors of the given rank with coordinates in `[-b, b]`.
pub fn sample_box(rank: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        out = out
            .iter()
            .flat_map(|v| {
                (-b..=b).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}
