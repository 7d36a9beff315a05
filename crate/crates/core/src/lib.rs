//! Exact rational invariants of Kac-Moody groups `G(A)` attached to generic
//! generalized Cartan matrices.
//!
//! Everything is computed over `Q` with truncated power series; nothing
//! goes through floating point.
//!
//! ```
//! use kmhomotopy::{bg_series, CartanMatrix, Epsilon};
//!
//! let a = CartanMatrix::from_rows(&[[2, -1], [-4, 2]]).unwrap();
//! assert_eq!(a.epsilon(), Some(Epsilon::One));
//! let s = bg_series(2, Epsilon::One, 8).unwrap();
//! assert_eq!(s.to_string(), "1 + q^4 + q^8 + O(q^9)");
//! ```

#![allow(clippy::needless_range_loop)]

pub mod cartan;
pub mod cli;
pub mod coefficients;
pub mod error;
pub mod homotopy;
pub mod json;
pub mod poincare;
pub mod series;
pub mod verify;

pub use cartan::{CartanError, CartanMatrix, ClassificationReport, Epsilon};
pub use coefficients::{CoefficientTable, Family, Source};
pub use error::{Error, Result};
pub use homotopy::{
    bg_homotopy_type, free_lie_dimensions, homotopy_dimensions, hopf_description,
    rationally_equivalent,
};
pub use poincare::{bg_series, bg_series_recursive, chow_series, flag_series, SeriesName};
pub use series::{PolyFraction, Polynomial, Rational, TruncatedSeries};
