//! Free resolutions, chain-map lifts and the twisted product complex.

pub mod complex;
pub mod exactness;
pub mod lift;
pub mod product;
pub mod resolution;
pub mod tau_chain;

pub use complex::{check_d_squared, FreeComplex, FreeMatrix};
pub use exactness::check_exactness;
pub use lift::{lift_through, verify_lift, ChainContract, ChainMap, Equivariance};
pub use product::{twisted_product_complex, TwistedProductComplex};
pub use resolution::{extend_x_action, standard_resolution_over, standard_truncated_resolution};
pub use tau_chain::{build_tau_b_chain, certify_tau_chain, degree_module, TauChain};
