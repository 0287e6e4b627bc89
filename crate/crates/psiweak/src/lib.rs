//! Probability metrics on discrete measures and asymptotic-stability
//! experiments for risk statistics.
//!
//! The crate computes the Prohorov, bounded-Lipschitz and gauge-weighted
//! (`d_ψ = π + |μψ - νψ|`) distances between finitely supported measures by
//! exact optimization (max-flow and dense LP), simulates stationary,
//! ergodic and exchangeable observation sequences whose directing measures
//! are known in closed form, and runs desk-scale experiments for the
//! consistency of empirical risk estimators and their robustness under
//! path-space perturbations.
//!
//! All numeric code is generic over the scalar type through [`Scalar`]
//! (`f32` or `f64`); the aliases below fix `f64`, which is what the
//! documented tolerances and the command-line front end use.

pub mod harness;
pub mod measure;
pub mod metric;
pub mod opt;
pub mod process;
pub mod risk;
pub mod scalar;

pub use scalar::Scalar;

/// `f64` aliases for the working types.
pub type Point = measure::Point<f64>;
pub type GroundSpace = measure::GroundSpace<f64>;
pub type DiscreteMeasure = measure::DiscreteMeasure<f64>;
pub type Gauge = measure::Gauge<f64>;
pub type MetricReport = metric::MetricReport<f64>;
pub type LinearProgram = opt::LinearProgram<f64>;
pub type FlowNetwork = opt::FlowNetwork<f64>;
pub type PathGenerator = process::PathGenerator<f64>;
pub type SamplePath = process::SamplePath<f64>;
pub type DirectingMeasure = process::DirectingMeasure<f64>;
pub type Perturbation = process::Perturbation<f64>;
pub type Statistic = risk::Statistic<f64>;
pub type Modulus = risk::Modulus<f64>;
pub type ScoringFunction = risk::ScoringFunction<f64>;
pub type LambdaCurve = harness::LambdaCurve<f64>;
pub type ConsistencyRun = harness::ConsistencyRun<f64>;
pub type GcRun = harness::GcRun<f64>;
pub type RobustnessRun = harness::RobustnessRun<f64>;
