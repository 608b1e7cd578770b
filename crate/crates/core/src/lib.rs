//! Exact-arithmetic computational algebra for surface topology: the
//! truncated tensor algebra of a surface's homology with its Hopf
//! structure, group-like expansions of the surface group, the necklace Lie
//! algebra of symplectic derivations, tensorial string operations
//! (pairing, double bracket, self-intersection, cobracket), generalized
//! Dehn twists and Johnson-type invariants, the homological Goldman Lie
//! algebra, and the chord-diagram model.
//!
//! All arithmetic is exact over the rationals; every operation either
//! returns a value or a structured [`error::AlgebraError`].

pub mod error;
pub mod sig;
pub mod tensor;
pub mod linalg;
pub mod lyndon;
pub mod freegroup;
pub mod expansion;
pub mod necklace;
pub mod stringops;
pub mod johnson;
pub mod homgoldman;
pub mod chord;
pub mod json;
pub mod verify;

pub use error::{AlgebraError, Result};
pub use sig::{BasisSymbol, SurfaceSignature, Word};
pub use tensor::{PairTensor, Q, Tensor};
