//! Exact computations for algebraic surfaces whose Mori cone is finite
//! polyhedral: light-cone certification of the nef cone, ample divisors from
//! the Perron-Frobenius vector, root configurations of (-2)-curves and
//! blow-up bookkeeping on Néron-Severi lattices.

#![allow(clippy::needless_range_loop)]

pub mod ample;
pub mod blowup;
pub mod cli;
pub mod cone;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod report;
pub mod roots;

pub use ample::{make_ample, make_ample_minimal, AmpleCertificate};
pub use cone::{certify_fpmc, ConeCertificate};
pub use config::{CurveConfiguration, Divisor};
pub use error::{Error, Result};
pub use linalg::{IntSymMatrix, Rational, Signature};
