//! Scalar abstraction for the numeric core.
//!
//! Every algorithm in this crate is written against [`Scalar`] so that the
//! same code runs with `f32` or `f64`. The concrete aliases exported at the
//! crate root fix `f64`, which is the precision all documented tolerances
//! refer to.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable throughout the crate.
///
/// The two associated tolerances scale with the precision of the type:
/// `merge_tol` decides when two real atoms are the same point and how far a
/// weight vector may drift from total mass one, `solver_tol` is the
/// feasibility/optimality tolerance of the exact solvers.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Atom-identity and mass-normalization tolerance.
    fn merge_tol() -> Self;
    /// Feasibility and optimality tolerance of the LP / max-flow solvers.
    fn solver_tol() -> Self;
    /// Tolerance for the stationarity equation of Markov initial laws.
    fn stationarity_tol() -> Self;
}

impl Scalar for f64 {
    fn merge_tol() -> Self {
        1e-12
    }
    fn solver_tol() -> Self {
        1e-9
    }
    fn stationarity_tol() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn merge_tol() -> Self {
        1e-6
    }
    fn solver_tol() -> Self {
        1e-4
    }
    fn stationarity_tol() -> Self {
        1e-4
    }
}

/// Convert an `f64` constant into the working scalar type.
///
/// Only used for literals that are exactly representable in `f32` as well,
/// or where the loss of precision is irrelevant (tolerances, grid steps).
#[inline]
pub(crate) fn real<S: Scalar>(x: f64) -> S {
    S::from_f64(x).expect("finite f64 constant must convert")
}
