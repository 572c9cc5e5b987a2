//! Gaussian random matrices with an external source diag(a, …, a, −a, …, −a).

mod exact;
pub mod mhp;
pub mod pastur;

pub use mhp::{mhp_kernel, MhpKernel, MhpRoute, MhpState};
pub use pastur::{
    branch_points, bridge_map, modified_pastur, pastur_density, pastur_mass, pastur_roots,
    pastur_support, BranchPoints,
};
