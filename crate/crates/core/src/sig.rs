//! Surface signatures, homology basis symbols and monomial words.
//!
//! A compact oriented surface of genus `g` with `n + 1` boundary components
//! has first homology `H` free of rank `2g + n`.  We fix the ordered basis
//!
//! ```text
//! A1 < B1 < A2 < B2 < ... < Ag < Bg < C1 < ... < Cn
//! ```
//!
//! where `A_i, B_i` come from the handles and `C_j` is the class of the
//! `j`-th "extra" boundary loop.  Words over this alphabet index the
//! monomial basis of the truncated tensor algebra; they are ordered by
//! length first and lexicographically (in the symbol order above) second.

use crate::error::{AlgebraError, Result};
use std::cmp::Ordering;
use std::fmt;

/// The pair (genus, number of extra boundary loops) together with the
/// truncation order `D` of the completed tensor algebra.
///
/// All tensors carry their signature; binary operations require equal
/// signatures, including equal truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceSignature {
    pub genus: usize,
    pub boundary_extra: usize,
    pub trunc: usize,
}

impl SurfaceSignature {
    pub fn new(genus: usize, boundary_extra: usize, trunc: usize) -> Result<Self> {
        if genus + boundary_extra == 0 {
            return Err(AlgebraError::Domain(
                "surface must satisfy genus + boundary_extra >= 1".into(),
            ));
        }
        if trunc < 2 {
            return Err(AlgebraError::Domain(
                "truncation order must be at least 2".into(),
            ));
        }
        Ok(SurfaceSignature {
            genus,
            boundary_extra,
            trunc,
        })
    }

    /// Rank of `H`, i.e. the alphabet size `2g + n`.
    pub fn rank(&self) -> usize {
        2 * self.genus + self.boundary_extra
    }

    /// The ordered alphabet `A1, B1, ..., Ag, Bg, C1, ..., Cn`.
    pub fn symbols(&self) -> Vec<BasisSymbol> {
        let mut out = Vec::with_capacity(self.rank());
        for i in 1..=self.genus {
            out.push(BasisSymbol::A(i as u16));
            out.push(BasisSymbol::B(i as u16));
        }
        for j in 1..=self.boundary_extra {
            out.push(BasisSymbol::C(j as u16));
        }
        out
    }

    pub fn check_symbol(&self, s: BasisSymbol) -> Result<()> {
        let ok = match s {
            BasisSymbol::A(i) | BasisSymbol::B(i) => i >= 1 && (i as usize) <= self.genus,
            BasisSymbol::C(j) => j >= 1 && (j as usize) <= self.boundary_extra,
        };
        if ok {
            Ok(())
        } else {
            Err(AlgebraError::SymbolOutOfRange(format!(
                "{s} not valid for genus {} with {} extra boundary loops",
                self.genus, self.boundary_extra
            )))
        }
    }

    pub fn same_surface(&self, other: &SurfaceSignature) -> bool {
        self.genus == other.genus && self.boundary_extra == other.boundary_extra
    }
}

/// One basis element of `H`; indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisSymbol {
    A(u16),
    B(u16),
    C(u16),
}

impl BasisSymbol {
    /// Sort key realising `A1 < B1 < A2 < B2 < ... < C1 < C2 < ...`.
    fn key(self) -> (u8, u32) {
        match self {
            BasisSymbol::A(i) => (0, 2 * i as u32),
            BasisSymbol::B(i) => (0, 2 * i as u32 + 1),
            BasisSymbol::C(j) => (1, j as u32),
        }
    }

    /// Parses `"A1"`, `"B2"`, `"C1"` (case sensitive, index >= 1).
    pub fn parse(text: &str) -> Result<Self> {
        let (head, idx) = text.split_at(1.min(text.len()));
        let i: u16 = idx
            .parse()
            .map_err(|_| AlgebraError::Parse(format!("bad symbol {text:?}")))?;
        if i == 0 {
            return Err(AlgebraError::Parse(format!("bad symbol index in {text:?}")));
        }
        match head {
            "A" => Ok(BasisSymbol::A(i)),
            "B" => Ok(BasisSymbol::B(i)),
            "C" => Ok(BasisSymbol::C(i)),
            _ => Err(AlgebraError::Parse(format!("bad symbol {text:?}"))),
        }
    }
}

impl PartialOrd for BasisSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BasisSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSymbol::A(i) => write!(f, "A{i}"),
            BasisSymbol::B(i) => write!(f, "B{i}"),
            BasisSymbol::C(j) => write!(f, "C{j}"),
        }
    }
}

/// A monomial in the tensor algebra: a finite word over the symbol alphabet.
///
/// Words are ordered by length first, then lexicographically; this is the
/// fixed order used for deterministic pivoting in exact linear algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<BasisSymbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(s: BasisSymbol) -> Self {
        Word(vec![s])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Rotation moving the first `k` letters to the end.
    pub fn rotate_left(&self, k: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let k = k % self.len();
        let mut v = Vec::with_capacity(self.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Lexicographically minimal rotation (all rotations have equal length,
    /// so length-then-lex order reduces to lex order here).
    pub fn min_rotation(&self) -> Word {
        (0..self.len().max(1))
            .map(|k| self.rotate_left(k))
            .min()
            .unwrap_or_else(Word::empty)
    }

    /// Smallest period `p` dividing the length with `w = u^{len/p}`.
    pub fn period(&self) -> usize {
        let m = self.len();
        for p in 1..=m {
            if m % p == 0 && (0..m).all(|i| self.0[i] == self.0[i % p]) {
                return p;
            }
        }
        m
    }

    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(""))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_order_interleaves_handles_before_boundary() {
        let sig = SurfaceSignature::new(2, 2, 3).unwrap();
        let syms = sig.symbols();
        let shown: Vec<String> = syms.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["A1", "B1", "A2", "B2", "C1", "C2"]);
        for pair in syms.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let a = Word(vec![BasisSymbol::B(1)]);
        let b = Word(vec![BasisSymbol::A(1), BasisSymbol::A(1)]);
        assert!(a < b);
        let c = Word(vec![BasisSymbol::A(1), BasisSymbol::B(1)]);
        assert!(b < c);
    }

    #[test]
    fn min_rotation_and_period() {
        let w = Word(vec![BasisSymbol::B(1), BasisSymbol::A(1), BasisSymbol::B(1)]);
        assert_eq!(w.min_rotation().to_string(), "A1B1B1");
        let p = Word(vec![
            BasisSymbol::A(1),
            BasisSymbol::B(1),
            BasisSymbol::A(1),
            BasisSymbol::B(1),
        ]);
        assert_eq!(p.period(), 2);
    }

    #[test]
    fn symbol_parse_round_trip() {
        for text in ["A1", "B3", "C2"] {
            assert_eq!(BasisSymbol::parse(text).unwrap().to_string(), text);
        }
        assert!(BasisSymbol::parse("D1").is_err());
        assert!(BasisSymbol::parse("A0").is_err());
    }

    #[test]
    fn degenerate_signature_rejected() {
        assert!(SurfaceSignature::new(0, 0, 4).is_err());
        assert!(SurfaceSignature::new(1, 0, 1).is_err());
    }
}
