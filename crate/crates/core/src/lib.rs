//! Cost and probability analysis of alpha-beta pruning on uniform binary
//! AND-OR trees.
//!
//! * [`tree`]: shapes, leaf addressing, assignments and evaluation.
//! * [`algorithms`]: directional and adaptive alpha-beta algorithms, their
//!   costs, and minimum-cost oracles.
//! * [`poly`]: exact rational polynomials for the IID cost/probability
//!   families, identities and root-counting sign certificates.
//! * [`distributions`]: independent and correlated distributions, reluctant
//!   assignment sets.
//! * [`equilibrium`]: the constrained maximin problems and the comparison
//!   between independent and correlated equilibria.

pub mod error;
pub mod scalar;
pub mod tree;
pub mod poly;
pub mod distributions;
pub mod algorithms;
pub mod equilibrium;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use tree::{Assignment, GateKind, TreeShape};
