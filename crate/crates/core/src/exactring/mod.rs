//! Exact arithmetic substrate: fields, polynomials, truncated local rings,
//! linear algebra and polynomial matrices.

pub mod field;
pub mod intersect;
pub mod linalg;
pub mod poly;
pub mod polymatrix;
pub mod trunc;

pub use field::{Field, Fp, Gf, Rational};
pub use linalg::{rank_and_echelon, EchelonForm, Matrix};
pub use poly::Poly;
pub use polymatrix::PolyMatrix;
pub use trunc::{trunc, TruncCtx};
