//! Exact computer algebra for the first order differential calculi on quantum
//! projective spaces: representation data of `U_q(sl_N)`, the presented algebras
//! and calculi, the quantum metric and its Levi-Civita connection, and a
//! catalog of identities verified with zero residual.

pub mod algebra;
pub mod calculus;
pub mod checks;
pub mod classical;
pub mod dump;
pub mod expr;
pub mod geometry;
pub mod leg;
pub mod linalg;
pub mod oracle;
pub mod rep;
pub mod scalar;
