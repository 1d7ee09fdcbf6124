//! Finite models of countable systems with prescribed supremum sequence
//! entropy (`0`, `log m`, infinity), and an exhaustive search engine for
//! combinatorial independence over them.
//!
//! Times and head indices are generic over [`Int`]. The minimal growth
//! schedule of the log-m family leaves `i64` after the first block, so the
//! builders are normally run with [`BigInt`].

pub mod checks;
pub mod construct;
pub mod entropy;
pub mod error;
pub mod flower;
pub mod independence;
pub mod intervals;
pub mod model;
pub mod scalar;

pub use error::{Error, Result};
pub use intervals::IntervalSet;
pub use model::{Family, ModelPoint, NeighborhoodSpec, Symbol, Trajectory};
pub use num_bigint::BigInt;
pub use scalar::{Int, Real};

pub type BigTrajectory = Trajectory<BigInt>;
pub type SmallTrajectory = Trajectory<i64>;
