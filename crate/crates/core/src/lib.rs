//! Exact algebra for the Satoh trace on symplectic derivations of a free Lie
//! ring and for the secondary obstructions built on top of it.

pub mod cyclic;
pub mod deriv;
pub mod error;
pub mod freegroup;
pub mod freelie;
pub mod golden;
pub mod intlinalg;
pub mod letters;
pub mod trbar;
pub mod trees;

pub use cyclic::{counts, counts_brute, cyclic_project, mirror_reduce, BClass, Counts, CyclicClass};
pub use deriv::{
    act_on_cyclic, cbar_lattice, deriv_bracket, eval_omega, omega_lift, psi, satoh_trace, CbarLattice, Derivation,
    LatticeBudget,
};
pub use error::{Error, Result};
pub use freegroup::{apply_aut, leading_lie_class, magnus, parse_aut, FreeAutomorphism, GroupWord};
pub use freelie::{lie_bracket, LieElement, TensorElement, Q};
pub use intlinalg::{hnf, kernel_lattice, lattice_member, IntMatrix, LatticeBasis};
pub use trbar::{
    iota, tr_as, tr_mir, trbar_direct, trbar_formula, witness, witness_check, ObstructionValue, ReduceMode, WedgeClass,
    WitnessReport,
};
pub use letters::{omega, Letter, SignedPerm, Word};
