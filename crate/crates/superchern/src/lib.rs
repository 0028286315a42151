//! Chern character forms of superconnections on trivial Z/2-graded bundles
//! over a coordinate chart, computed two ways: directly as the supertrace of
//! the exponential of the curvature, and through parallel transport along
//! the universal superpoint path. The two routes agreeing, exactly in the
//! nilpotent case and numerically otherwise, is the point of the crate.

pub mod error;
pub mod exterior_forms;
pub mod graded_matrix_forms;
pub mod numeric;
pub mod parser;
pub mod sampling;
pub mod scalar_poly;
pub mod spec_file;
pub mod superconnection;
pub mod superpath_pullback;
pub mod transport;

pub use error::{Error, Result};
