//! Sparse symmetric linear algebra: envelope `LDLᵀ`, shift-invert subspace
//! iteration for the smallest generalized eigenpairs, and kernel-constrained
//! solves for singular shifted operators.

mod constrained;
pub mod dense;
mod gevp;
pub mod ordering;
mod skyline;
mod sparse;

pub use constrained::{solve_constrained, ConstrainedSolution, COMPAT_HARD, COMPAT_TOL};
pub use gevp::{positive_shift, solve_gevp, solve_gevp_smallest, EigOptions, EigPairs};
pub use skyline::{Ldlt, Ordering};
pub use sparse::{axpy, dot, norm2, SymSparseMatrix, TripletBuilder};
