//! Abelian cycles in the Torelli group, read through the Birman–Craggs lens.
//!
//! The crate covers symplectic linear algebra over GF(2) and Z, the Boolean
//! polynomial ring carrying the Birman–Craggs–Johnson map, wedge-power
//! invariants of abelian cycles, partition trees of separating multicurves,
//! and the rank computations that bound second homology.

pub mod boolean;
pub mod bounds;
pub mod certificate;
pub mod cycles;
pub mod error;
pub mod gf2;
pub mod instances;
pub mod lattice;
pub mod selftest;
pub mod sigma;
pub mod trees;
pub mod wedge;

pub use boolean::{arf, bar, normal_form, sp_action, ArfIdealBasis, BoolPoly, Monomial};
pub use bounds::{
    census, count_genus1_sigmas, dim_report, lower_bound_h2, upper_bound_h2, write_census_csv, CensusRow,
    DimReport,
};
pub use certificate::{check_certificate, verify_certificate, Certificate, CertificateReport, Rule, Step};
pub use cycles::{decide_equal_genus1, relation_holds, sigma_k, CycleSystem, SigmaWedge, Verdict};
pub use error::{Error, Result};
pub use gf2::{
    enumerate_symplectic_2subspaces, gf2_form, orthogonal_complement, symplectic_basis_of,
    symplectic_plane_count, GenusContext, Gf2Matrix, Gf2Subspace, Gf2SymplecticSubspace, Gf2Vector,
};
pub use lattice::{
    extend_to_symplectic_basis, int_form, IntSymplecticPair, IntSymplecticSubgroup, IntVector,
};
pub use sigma::{
    recover_genus1_subspace, sigma_coords, sigma_of_int_subgroup, sigma_of_subspace, Mode,
    QuadraticBasis, SigmaValue,
};
pub use trees::{
    classify, curve_genus, edge_sigma, enumerate_admissible_trees, realize_splitting, reduce_to_genus1,
    tree_sigma_k, validate_tree, vanishes_main3, Classification, PartitionTree, SplittingAssignment,
};
pub use wedge::{wedge, BitRow, DenseEchelon, RankAccumulator, WedgeElement};
