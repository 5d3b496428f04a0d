//! Truncations of level one of loop-group elements: root data and Weyl
//! groups, the extended affine Weyl group, Kottwitz invariants, fundamental
//! alcoves, a matrix layer for `GL_n` over `F_q((t))`, and stratum closures.

pub mod affine;
pub mod alcoves;
pub mod error;
pub mod isocrystal;
pub mod lattice;
pub mod matrix;
pub mod parse;
pub mod root_datum;
pub mod strata;

pub use affine::AffineElt;
pub use alcoves::{SemistandardParabolic, TruncationType};
pub use error::{Error, Result};
pub use isocrystal::{KappaClass, NewtonPoint, SigmaClass};
pub use lattice::Q;
pub use matrix::{Field, Laurent, LaurentMatrix};
pub use strata::{SlopeData, StrataAtlas, Stratum};
pub use root_datum::{Coweight, Levi, QCoweight, RootDatum, Side, WeylElt};
