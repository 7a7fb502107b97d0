//! Finite-field linear algebra, represented matroids, and the random
//! column-addition process `A_1, A_2, ...` over F_q.

pub mod error;
pub mod field;
pub mod matroid;
pub mod montecarlo;
pub mod process;
pub mod rng;
pub mod selfcheck;
pub mod matrix;
pub mod rref;
pub mod subspace;
pub mod theory;

pub use error::{Error, Result};
pub use field::{make_field, Elem, Field};
pub use matrix::{random_uniform_matrix, random_vector, FqMatrix, FqVector};
pub use rref::{Insert, RrefState};
pub use subspace::{enumerate_subspaces, SubspaceHandle};
