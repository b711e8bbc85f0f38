//! Numerical laboratory for gradient flows on finite weighted graphs:
//! the L^2 flow of the q-Cheeger energy (q-heat flow), exact p-Wasserstein
//! transport, the (3-p)-Renyi entropy with its q-Fisher information, and the
//! p-adapted minimizing-movement scheme, together with the machinery needed
//! to verify the identities and inequalities relating them.

pub mod calculus;
pub mod entropy;
pub mod error;
pub mod heatflow;
pub mod jko;
pub mod space;
pub mod transport;

pub use error::{Error, Result};
