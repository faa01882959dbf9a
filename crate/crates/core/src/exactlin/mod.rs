//! Exact linear algebra over Q.

pub mod eigen;
pub mod elim;
pub mod mat;
pub mod modp;
pub mod rat;
pub mod signature;
pub mod sparse;

pub use eigen::{rational_eigenspaces, rationally_diagonalizable};
pub use elim::{kernel_basis, rank, rref, solve_linear, Echelon, Rref};
pub use mat::Mat;
pub use rat::{ParseRatError, Rat};
pub use signature::{symmetric_signature, Signature, SignatureError};
pub use sparse::SVec;
