//! Lattice machinery for inhomogeneous transference: the primal lattice
//! `{(q, q.theta - p)}`, its dual `{(m - h theta, h)}`, LLL reduction,
//! nearest-plane search and the empirical dual lower-bound scan.

mod babai;
mod basis;
mod dual_scan;
mod inhom;
mod lll;

pub use babai::{babai_nearest, LatticePoint};
pub use basis::{
    build_dual_basis, build_primal_basis, determinant, inner_product, pairing_modulus,
    pairing_residue, IntegerLattice, LatticeKind, ThetaVector,
};
pub use dual_scan::{dual_scan, sqrt_convergent_denominators, DecadeMinimum, DualScanReport};
pub use inhom::{default_scale_bits, exhaustive_inhom_f64, solve_inhom, InhomOptions, InhomSolution};
pub use lll::{default_reduction_parameter, gram_schmidt, is_lll_reduced, lll_reduce, GramSchmidt};
