pub mod epistricted;
pub mod equivalence;
pub mod error;
pub mod groupoid;
pub mod linalg;
pub mod moyal;
pub mod parse;
pub mod qudit;
pub mod scalar;
pub mod symplectic;
pub mod wigner;

pub use error::{Error, Result};
pub use scalar::{Kind, Prime, Scalar};
