//! Exact construction, verification and classification of fine gradings on the
//! classical simple Lie algebras `sl_n`, `so_n`, `sp_n`, including the triality
//! gradings of `so_8`.

pub mod abgroup;
pub mod cyclotomic;
pub mod enumerate;
pub mod error;
pub mod graded;
pub mod invariants;
pub mod involutions;
pub mod liealg;
pub mod linalg;
pub mod octonion_d4;
pub mod sesquilinear;

pub use abgroup::{FinAbGroup, GrpElt, Presentation};
pub use cyclotomic::{CycNum, Rational};
pub use error::{Error, Result};
pub use linalg::{Matrix, Span, Vector};
