//! Words in the fundamental group of the surface.
//!
//! For a surface of genus `g` with `n + 1` boundary components the
//! fundamental group is free on `alpha_1, beta_1, ..., alpha_g, beta_g,
//! gamma_1, ..., gamma_n`.  The distinguished boundary word is
//!
//! ```text
//! xi_0 = gamma_n^-1 ... gamma_1^-1 * ( [alpha_1,beta_1] ... [alpha_g,beta_g] )^-1
//! ```
//!
//! whose homology class is `-(C_1 + ... + C_n)`; for a closed-up handle
//! part (`n = 0`) the product of commutators `zeta = prod_i [alpha_i,
//! beta_i]` plays the corresponding role.
//!
//! The text form of a word is space-separated letters like `a1 b1 a1^-1`.

use crate::error::{AlgebraError, Result};
use crate::sig::{BasisSymbol, SurfaceSignature};
use std::fmt;

/// A free generator of the surface group; indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Alpha(u16),
    Beta(u16),
    Gamma(u16),
}

impl Generator {
    /// The homology class of the generator.
    pub fn homology_symbol(self) -> BasisSymbol {
        match self {
            Generator::Alpha(i) => BasisSymbol::A(i),
            Generator::Beta(i) => BasisSymbol::B(i),
            Generator::Gamma(j) => BasisSymbol::C(j),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (head, idx) = text.split_at(1.min(text.len()));
        let i: u16 = idx
            .parse()
            .map_err(|_| AlgebraError::Parse(format!("bad generator {text:?}")))?;
        if i == 0 {
            return Err(AlgebraError::Parse(format!("bad generator {text:?}")));
        }
        match head {
            "a" => Ok(Generator::Alpha(i)),
            "b" => Ok(Generator::Beta(i)),
            "c" => Ok(Generator::Gamma(i)),
            _ => Err(AlgebraError::Parse(format!("bad generator {text:?}"))),
        }
    }

    pub fn check(self, sig: &SurfaceSignature) -> Result<()> {
        let ok = match self {
            Generator::Alpha(i) | Generator::Beta(i) => i >= 1 && (i as usize) <= sig.genus,
            Generator::Gamma(j) => j >= 1 && (j as usize) <= sig.boundary_extra,
        };
        if ok {
            Ok(())
        } else {
            Err(AlgebraError::SymbolOutOfRange(format!(
                "{self} not valid for genus {} with {} extra boundary loops",
                sig.genus, sig.boundary_extra
            )))
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Alpha(i) => write!(f, "a{i}"),
            Generator::Beta(i) => write!(f, "b{i}"),
            Generator::Gamma(j) => write!(f, "c{j}"),
        }
    }
}

/// A freely reduced word in the surface group, stored as signed letters
/// (`+1` for the generator, `-1` for its inverse).
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct FreeWord(Vec<(Generator, i8)>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    pub fn generator(g: Generator) -> Self {
        FreeWord(vec![(g, 1)])
    }

    pub fn letters(&self) -> &[(Generator, i8)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Builds and freely reduces a word from signed letters.
    pub fn from_letters(letters: impl IntoIterator<Item = (Generator, i8)>) -> Result<Self> {
        let mut out: Vec<(Generator, i8)> = Vec::new();
        for (g, e) in letters {
            if e != 1 && e != -1 {
                return Err(AlgebraError::Parse(format!(
                    "letter exponent must be +1 or -1, got {e}"
                )));
            }
            match out.last() {
                Some(&(h, f)) if h == g && f == -e => {
                    out.pop();
                }
                _ => out.push((g, e)),
            }
        }
        Ok(FreeWord(out))
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        FreeWord::from_letters(self.0.iter().chain(other.0.iter()).cloned())
            .expect("letters already validated")
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n >= 0 { self.clone() } else { self.inverse() };
        let mut out = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn commutator(x: &FreeWord, y: &FreeWord) -> FreeWord {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    /// Parses the text form `a1 b1 a1^-1` (whitespace separated; an
    /// optional `^-1` or `^1` suffix per letter; empty string = identity).
    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let (name, exp) = match token.split_once('^') {
                None => (token, 1i8),
                Some((name, "1")) => (name, 1),
                Some((name, "-1")) => (name, -1),
                Some((_, e)) => {
                    return Err(AlgebraError::Parse(format!(
                        "unsupported exponent {e:?} in {token:?}"
                    )))
                }
            };
            letters.push((Generator::parse(name)?, exp));
        }
        FreeWord::from_letters(letters)
    }

    pub fn check(&self, sig: &SurfaceSignature) -> Result<()> {
        for &(g, _) in &self.0 {
            g.check(sig)?;
        }
        Ok(())
    }

    /// Sum of signed exponents per generator (the homology class).
    pub fn exponent_sum(&self, g: Generator) -> i64 {
        self.0
            .iter()
            .filter(|&&(h, _)| h == g)
            .map(|&(_, e)| e as i64)
            .sum()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    g.to_string()
                } else {
                    format!("{g}^-1")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The product of handle commutators `zeta = [a1,b1] ... [ag,bg]`.
pub fn handle_commutator_product(genus: usize) -> FreeWord {
    let mut out = FreeWord::identity();
    for i in 1..=genus as u16 {
        out = out.mul(&FreeWord::commutator(
            &FreeWord::generator(Generator::Alpha(i)),
            &FreeWord::generator(Generator::Beta(i)),
        ));
    }
    out
}

/// The distinguished boundary word `xi_0` for a surface with `n >= 1`
/// extra boundary loops (see the module docs for the chosen convention).
pub fn distinguished_boundary_word(genus: usize, boundary_extra: usize) -> FreeWord {
    let mut out = FreeWord::identity();
    for j in (1..=boundary_extra as u16).rev() {
        out = out.mul(&FreeWord::generator(Generator::Gamma(j)).inverse());
    }
    out.mul(&handle_commutator_product(genus).inverse())
}

/// A free homotopy class of loops: a word up to conjugation and inversion
/// of nothing (inversion is *not* quotiented; only conjugation is).
/// Canonical representative: cyclically reduce, then take the minimal
/// rotation in the derived letter order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeLoop(FreeWord);

impl FreeLoop {
    pub fn new(w: &FreeWord) -> Self {
        let mut letters = w.letters().to_vec();
        // cyclic reduction: strip conjugating pairs at the two ends
        while letters.len() >= 2 {
            let (first, last) = (letters[0], letters[letters.len() - 1]);
            if first.0 == last.0 && first.1 == -last.1 {
                letters.pop();
                letters.remove(0);
                // re-reduce interior cancellations exposed by the strip
                letters = FreeWord::from_letters(letters).unwrap().0;
            } else {
                break;
            }
        }
        let m = letters.len();
        let canonical = (0..m.max(1))
            .map(|k| {
                let mut v = letters[k..].to_vec();
                v.extend_from_slice(&letters[..k]);
                v
            })
            .min()
            .unwrap_or_default();
        FreeLoop(FreeWord(canonical))
    }

    pub fn representative(&self) -> &FreeWord {
        &self.0
    }
}

impl fmt::Display for FreeLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_display_round_trip() {
        let w = FreeWord::parse("a1 b1 a1^-1").unwrap();
        assert_eq!(w.to_string(), "a1 b1 a1^-1");
        assert_eq!(FreeWord::parse("").unwrap(), FreeWord::identity());
        assert!(FreeWord::parse("a1^2").is_err());
        assert!(FreeWord::parse("x1").is_err());
    }

    #[test]
    fn free_reduction() {
        let w = FreeWord::parse("a1 a1^-1 b1").unwrap();
        assert_eq!(w.to_string(), "b1");
        let v = FreeWord::parse("a1 b1").unwrap();
        assert!(v.mul(&v.inverse()).is_empty());
    }

    #[test]
    fn commutator_and_boundary_words() {
        let z = handle_commutator_product(1);
        assert_eq!(z.to_string(), "a1 b1 a1^-1 b1^-1");
        let xi = distinguished_boundary_word(1, 1);
        assert_eq!(xi.to_string(), "c1^-1 b1 a1 b1^-1 a1^-1");
        // homology class of xi_0 is -C1
        assert_eq!(xi.exponent_sum(Generator::Gamma(1)), -1);
        assert_eq!(xi.exponent_sum(Generator::Alpha(1)), 0);
    }

    #[test]
    fn free_loop_canonicalisation() {
        let w = FreeWord::parse("b1 a1 b1^-1").unwrap();
        let l = FreeLoop::new(&w);
        assert_eq!(l.to_string(), "a1");
        // conjugate words give the same loop
        let g = FreeWord::parse("a1 b1").unwrap();
        let x = FreeWord::parse("a1 a1 b1").unwrap();
        let conj = g.mul(&x).mul(&g.inverse());
        assert_eq!(FreeLoop::new(&conj), FreeLoop::new(&x));
    }
}
