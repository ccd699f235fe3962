//! Exact linear algebra over Z, Q, F_p and Z/p^k.

pub mod exterior;
pub mod group;
pub mod hnf;
pub mod lattice;
pub mod matrix;
pub mod rational;
pub mod ring;
pub mod snf;

pub use exterior::{binomial, compound, exterior_power, subsets};
pub use group::FgAbelianGroup;
pub use hnf::{hnf, hnf_basis, hnf_full, Hnf};
pub use lattice::{cokernel, kernel, kernel_matrix, lattice_ops, Lattice, LatticeMap, LatticeOps};
pub use matrix::{Int, IntMatrix};
pub use rational::{Rat, RatMatrix, Subspace};
pub use ring::{reduce_ring, Reduced, Ring};
pub use snf::{snf, snf_factors, Snf};
