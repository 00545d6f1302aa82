//! Tree-decompositions with bounded adhesion, docset superprofiles, local
//! completion and the dynamic program over the decomposition.

mod dp;
mod ldcp;
mod profile;
mod td;

pub use dp::{difference_bounds, dp_solve, shift_normalize, McippDpStats, McippDpTable, McippEntry, PATTERN_STEPS};
pub use ldcp::{solve_ldcp, LocalInstance};
pub use profile::{
    brute_superprofile, check_superprofile, check_superprofile_shape, exact_superprofile, node_roots, DocsetSuperprofile,
    ProfileEntry,
};
pub use td::{trivial_td, two_bag_td, validate_special_td, SpecialTreeDecomposition, TdReport};
