//! Certified arbitrary-precision arithmetic.
//!
//! Three layers: exact dyadic rationals with directed rounding
//! ([`dyadic::Dyadic`]), balls combining a dyadic midpoint with a certified
//! error radius ([`ball::BallReal`]), and the adaptive-precision retry policy
//! ([`policy::PrecisionPolicy`]). Everything else in the crate computes with
//! these; no floating point enters any certified path.

pub mod ball;
pub mod dyadic;
pub mod policy;

pub use ball::{BallReal, SignCert};
pub use dyadic::{Dir, Dyadic};
pub use policy::{with_refinement, PrecisionPolicy, Refined};
