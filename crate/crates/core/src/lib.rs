//! Community detection under the degree-corrected block model.
//!
//! Two objectives over the same factorization `A ~ Z theta Z^T`:
//!
//! * the Frobenius error, minimized by [`frost::frost_solve`];
//! * the DCBM log-likelihood over hard partitions, maximized by
//!   [`dcbm::kn_infer`] and [`dcbm::klem_infer`].
//!
//! Both can start from [`svca::svca_init`], a separable-NMF initialization
//! that averages well-chosen adjacency columns.

pub mod dcbm;
pub mod eigen;
pub mod error;
pub mod frost;
pub mod generator;
pub mod graph;
pub mod metrics;
pub mod model;
mod quartic;
pub mod runner;
pub mod svca;

pub use error::{Error, Result};
pub use graph::{Graph, Labels};
pub use model::{MixingMatrix, Partition, ScaledAssignment};
