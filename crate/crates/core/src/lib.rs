//! Operator-Schmidt decompositions of bipartite operators.
//!
//! The crate is organised around a single numerical oracle: an operator
//! `F: A⊗B → A'⊗B'` is realigned into a matrix whose singular value
//! decomposition *is* the operator-Schmidt decomposition ([`schmidt`]).
//! Every closed-form construction elsewhere in the crate is checked against
//! that oracle:
//!
//! * [`weyl`]: shift/twist operators, the vectorisation `B(H) ≅ H⊗H*`, the
//!   two-dimensional DFT and the Fourier-analytic decomposition of operators
//!   diagonal in the Weyl basis.
//! * [`catalog`]: unitaries on `C³⊗C³` with every Schmidt number 1..=9, and a
//!   finite certificate that no diagonal-family unitary has Schmidt number 2
//!   or 4.
//! * [`biunimodular`]: biunimodular sequences and the maximally entangled
//!   unitaries they induce.
//! * [`qft`]: the bipartite quantum Fourier transform with a net change of
//!   local dimensions, its equivalence classes and closed-form decomposition.
//! * [`magic`]: the determinant gradient and its vectorised companion.
//! * [`verify`]: the end-to-end acceptance checks.
//!
//! Index convention: a bipartite operator with local dimensions
//! `(dA, dB) → (dA', dB')` is a `dA'·dB' × dA·dB` row-major matrix whose row
//! index is `a'·dB' + b'` and column index `a·dB + b`.

pub mod biunimodular;
pub mod catalog;
pub mod error;
pub mod io;
pub mod magic;
pub mod matrix;
pub mod qft;
pub mod random;
pub mod schmidt;
pub mod svd;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64 as C64;
pub use schmidt::{BipartiteOperator, BipartiteShape, SchmidtDecomposition, DEFAULT_REL_TOL};
