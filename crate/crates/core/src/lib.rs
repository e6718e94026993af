//! Random-subspace derivative-free optimization.
//!
//! The crate has two halves. [`dfo`] is a working optimizer that draws a
//! random `p`-dimensional subspace per iteration and runs either a
//! coordinate direct-search poll or a simplex-gradient step inside it.
//! [`formulas`] and [`mc`] quantify how much one such iteration decreases a
//! linear objective on average, as a function of `p` and the ambient
//! dimension `d`, both exactly and by simulation. [`experiments`] builds the
//! comparison tables on top of those.

pub mod dfo;
pub mod error;
pub mod experiments;
pub mod formulas;
pub mod geometry;
pub mod mc;
pub mod quadrature;
pub mod rng;
pub mod specfun;

pub use error::{Error, Result};
pub use formulas::{FormulaResult, Method, Variant};
pub use geometry::{sample_stiefel, sample_unit_vector, SubspaceBasis, UnitVector};
pub use rng::{split_stream, RngStream};
