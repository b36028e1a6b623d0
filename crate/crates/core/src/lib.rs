//! Lengths, multiplicities, Fitting ideals and adjoints for ideals and
//! torsion-free modules over the two-dimensional regular local ring
//! `R = k[x,y]` localized at `(x,y)`.
//!
//! All arithmetic is exact. Every length is obtained from linear algebra in a
//! truncation `R/m^N` and certified by graded Nakayama: once a whole degree
//! `d` lies in the truncated image, `m^d F` is contained in the module and the
//! count below `d` is the true length.

pub mod error;
pub mod exactring;
pub mod ideals;
pub mod modlat;
pub mod monomial;
pub mod multiplicity;
pub mod session;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};
pub use exactring::{Field, Fp, Gf, Poly, PolyMatrix, Rational};
pub use ideals::Ideal;
pub use modlat::Module;
pub use monomial::Staircase;
pub use session::Session;
