//! Free resolutions attached to determinantal schemes.

pub mod chern;
pub mod complex;
pub mod cone;
pub mod det;
pub mod error;
pub mod field;
pub mod graded;
pub mod linalg;
pub mod poly;
pub mod strand;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, Fp, Rationals};
pub use graded::{GradedFreeModule, GradedMap};
pub use poly::{Mono, Poly};
