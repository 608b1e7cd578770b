//! Exact linear algebra over the rationals on sparse tensors.
//!
//! Rows are tensors; coordinates are monomial words in the fixed
//! length-then-lex order.  Elimination processes rows in their given order
//! and always pivots on the smallest remaining word, so results are
//! deterministic functions of the input sequence.

use crate::error::{AlgebraError, Result};
use crate::sig::Word;
use crate::tensor::{Q, Tensor};
use num::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Outcome of expressing a target in the span of given rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Coefficients `c` with `sum_i c[i] * rows[i] = target`, with free
    /// coefficients set to zero (the unique reduced-echelon solution for
    /// the fixed row order).
    Solution(Vec<Q>),
    /// The target is not in the span.
    Inconsistent,
}

type Sparse = BTreeMap<usize, Q>;

struct Pivot {
    row: Sparse,
    combo: Sparse,
}

struct Eliminator {
    /// Pivot rows keyed by pivot column, each normalised to leading 1.
    pivots: BTreeMap<usize, Pivot>,
}

impl Eliminator {
    fn new() -> Self {
        Eliminator {
            pivots: BTreeMap::new(),
        }
    }

    /// Reduces `row` in place against the current pivots, updating `combo`.
    fn reduce(&self, row: &mut Sparse, combo: &mut Sparse) {
        loop {
            let col = match row.keys().next() {
                Some(&c) => c,
                None => return,
            };
            let piv = match self.pivots.get(&col) {
                Some(p) => p,
                None => return,
            };
            let factor = row[&col].clone();
            axpy(row, &piv.row, &-factor.clone());
            axpy(combo, &piv.combo, &-factor);
        }
    }

    /// Feeds one row; returns `true` if it created a new pivot.
    fn insert(&mut self, mut row: Sparse, mut combo: Sparse) -> bool {
        self.reduce(&mut row, &mut combo);
        let col = match row.keys().next() {
            Some(&c) => c,
            None => return false,
        };
        let inv = Q::one() / row[&col].clone();
        scale(&mut row, &inv);
        scale(&mut combo, &inv);
        self.pivots.insert(col, Pivot { row, combo });
        true
    }
}

fn axpy(dst: &mut Sparse, src: &Sparse, factor: &Q) {
    if factor.is_zero() {
        return;
    }
    for (k, v) in src {
        let entry = dst.entry(*k).or_insert_with(Q::zero);
        *entry += v * factor;
        if entry.is_zero() {
            dst.remove(k);
        }
    }
}

fn scale(v: &mut Sparse, factor: &Q) {
    for val in v.values_mut() {
        *val *= factor;
    }
}

fn index_words(rows: &[Tensor], target: Option<&Tensor>) -> Result<BTreeMap<Word, usize>> {
    let mut words = BTreeSet::new();
    let mut sig = None;
    for t in rows.iter().chain(target) {
        match sig {
            None => sig = Some(t.sig()),
            Some(s) if s == t.sig() => {}
            Some(s) => {
                return Err(AlgebraError::SignatureMismatch(format!(
                    "{:?} vs {:?}",
                    s,
                    t.sig()
                )))
            }
        }
        words.extend(t.terms().keys().cloned());
    }
    Ok(words
        .into_iter()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect())
}

fn to_sparse(t: &Tensor, index: &BTreeMap<Word, usize>) -> Sparse {
    t.terms()
        .iter()
        .map(|(w, c)| (index[w], c.clone()))
        .collect()
}

/// Expresses `target` as a linear combination of `rows`, if possible.
pub fn solve_in_span(rows: &[Tensor], target: &Tensor) -> Result<SolveOutcome> {
    let index = index_words(rows, Some(target))?;
    let mut elim = Eliminator::new();
    for (i, r) in rows.iter().enumerate() {
        let combo: Sparse = [(i, Q::one())].into_iter().collect();
        elim.insert(to_sparse(r, &index), combo);
    }
    let mut residual = to_sparse(target, &index);
    let mut combo = Sparse::new();
    elim.reduce(&mut residual, &mut combo);
    if !residual.is_empty() {
        return Ok(SolveOutcome::Inconsistent);
    }
    let mut coeffs = vec![Q::zero(); rows.len()];
    for (i, c) in combo {
        coeffs[i] = -c;
    }
    Ok(SolveOutcome::Solution(coeffs))
}

/// Deterministic basis of the kernel of `c |-> sum_i c[i] rows[i]`.
pub fn kernel_basis(rows: &[Tensor]) -> Result<Vec<Vec<Q>>> {
    let index = index_words(rows, None)?;
    let mut elim = Eliminator::new();
    let mut kernel = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut row = to_sparse(r, &index);
        let mut combo: Sparse = [(i, Q::one())].into_iter().collect();
        elim.reduce(&mut row, &mut combo);
        if row.is_empty() {
            let mut v = vec![Q::zero(); rows.len()];
            for (j, c) in combo {
                v[j] = c;
            }
            kernel.push(v);
        } else {
            let col = *row.keys().next().unwrap();
            let inv = Q::one() / row[&col].clone();
            scale(&mut row, &inv);
            scale(&mut combo, &inv);
            elim.pivots.insert(col, Pivot { row, combo });
        }
    }
    Ok(kernel)
}

/// Rank of the span of the rows.
pub fn rank(rows: &[Tensor]) -> Result<usize> {
    let index = index_words(rows, None)?;
    let mut elim = Eliminator::new();
    let mut r = 0;
    for row in rows {
        if elim.insert(to_sparse(row, &index), Sparse::new()) {
            r += 1;
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sig::{BasisSymbol, SurfaceSignature};
    use crate::tensor::q_int;

    fn setup() -> (SurfaceSignature, Tensor, Tensor) {
        let sig = SurfaceSignature::new(1, 0, 3).unwrap();
        let a = Tensor::from_symbol(sig, BasisSymbol::A(1)).unwrap();
        let b = Tensor::from_symbol(sig, BasisSymbol::B(1)).unwrap();
        (sig, a, b)
    }

    #[test]
    fn solve_finds_exact_combination() {
        let (_, a, b) = setup();
        let rows = vec![a.add(&b).unwrap(), b.clone()];
        let target = a.scale(&q_int(2)).add(&b.scale(&q_int(5))).unwrap();
        match solve_in_span(&rows, &target).unwrap() {
            SolveOutcome::Solution(c) => {
                assert_eq!(c, vec![q_int(2), q_int(3)]);
            }
            SolveOutcome::Inconsistent => panic!("expected a solution"),
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let (_, a, b) = setup();
        let rows = vec![a.clone()];
        assert_eq!(
            solve_in_span(&rows, &b).unwrap(),
            SolveOutcome::Inconsistent
        );
    }

    #[test]
    fn kernel_of_dependent_rows() {
        let (_, a, b) = setup();
        let rows = vec![
            a.clone(),
            b.clone(),
            a.add(&b).unwrap(),
        ];
        let k = kernel_basis(&rows).unwrap();
        assert_eq!(k.len(), 1);
        // the dependency a + b - (a+b) = 0, normalised on the last pivot
        let v = &k[0];
        let recombined = a
            .scale(&v[0])
            .add(&b.scale(&v[1]))
            .unwrap()
            .add(&a.add(&b).unwrap().scale(&v[2]))
            .unwrap();
        assert!(recombined.is_zero());
        assert_eq!(rank(&rows).unwrap(), 2);
    }
}
