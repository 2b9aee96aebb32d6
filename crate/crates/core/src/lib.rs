//! Exact arithmetic for the Carlitz module over Tate algebras.

pub mod error;
pub mod field;
mod conv;
pub mod laurent;
pub mod poly;
pub mod tate;
pub mod carlitz;
pub mod special;
pub mod report;
pub mod solve;
pub mod mupoly;
pub mod digit;
pub mod suites;

pub use error::{Error, Result};
pub use field::{binom_mod_p, enumerate_monic, Fe, Field, FieldConfig};
pub use laurent::LaurentSeries;
pub use poly::{Poly, RationalFunction};
pub use report::{Check, Report, Status};
pub use suites::{run_suite, SuiteConfig, SUITES};
pub use tate::{expand_inverse_monic, TateElement};
