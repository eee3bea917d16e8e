//! Exact computations with skew Taylor resolutions.
//!
//! The crate works over a skew polynomial ring `k_q[x_1, ..., x_n]` in which
//! `x_i x_j = q_ij x_j x_i`, with `k` either the rationals or a prime field.
//! Given a monomial ideal `I` it builds the Taylor resolution of `R/I`, checks
//! that it is a resolution, equips it with its color DG algebra product and
//! divided powers, builds the LCM lattice and GCD graph of `I`, and computes
//! Poincaré series of the residue field over `R/I` together with the ranks
//! of the homotopy Lie algebra read off from them.
//!
//! Everything here is `no_std` (with `alloc`); file formats and the command
//! line live in the `skewtaylor` crate.

#![no_std]

extern crate alloc;
#[cfg(feature = "parallel")]
extern crate std;

pub mod dgalgebra;
pub mod error;
pub mod homres;
pub mod lattice;
pub mod linalg;
pub mod qcommute;
pub mod scalar;
pub mod skewpoly;
pub mod subset;
pub mod taylor;

mod par;

pub use error::{Error, Result};
pub use qcommute::{GDegree, LaurentMonomial, Monomial, QMatrix};
pub use scalar::{Field, Scalar};
pub use skewpoly::{MonomialIdeal, SkewPoly};
pub use subset::Subset;
pub use taylor::{BettiTable, TaylorComplex};
