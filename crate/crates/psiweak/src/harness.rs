//! Consistency, Glivenko-Cantelli and robustness experiments.
//!
//! The experiments quantify three asymptotic statements about the
//! empirical process `m_n` of a stationary sequence with directing
//! measure `υ`:
//!
//! * convergence `d_ψ(m_n, υ) → 0` (consistency of the empirical law and
//!   hence of `ψ`-continuous risk estimators);
//! * `sup`-convergence over the bounded-Lipschitz unit ball for i.i.d.
//!   draws, realized exactly as the `β` distance;
//! * the robustness bound: the Prohorov distance between the laws of the
//!   estimator `τ(m_n)` under the original and under the perturbed path
//!   law stays below `κ(‖θ‖)`, where `‖θ‖` is the first level at which the
//!   survival function of `d_ψ(υ, υ∘θ)` drops below the modulus `κ`.
//!
//! Replications are independent streams of one master seed, so parallel
//! and serial runs produce identical output.

use rayon::prelude::*;
use thiserror::Error;

use crate::measure::{DiscreteMeasure, Gauge, GroundSpace, MeasureError, MetricMode, Point};
use crate::metric::{bl_metric, d_psi_value, prohorov_with_bound, MetricError};
use crate::process::{PathGenerator, PathSeed, Perturbation, ProcessError};
use crate::risk::{score_integral, Modulus, RiskError, ScoringFunction, Statistic};
use crate::scalar::{real, Scalar};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error(transparent)]
    Risk(#[from] RiskError),
    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),
}

fn check_schedule(n_schedule: &[usize]) -> Result<(), HarnessError> {
    if n_schedule.is_empty() || n_schedule.iter().any(|&n| n == 0) {
        return Err(HarnessError::InvalidExperiment(
            "n-schedule must be nonempty with positive entries".into(),
        ));
    }
    Ok(())
}

fn median<S: Scalar>(values: &[S]) -> S {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / real::<S>(2.0)
    }
}

// ---------------------------------------------------------------------------
// Consistency experiment
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ConsistencyRecord<S> {
    pub stream: u64,
    pub n: usize,
    pub prohorov: S,
    pub beta: S,
    pub psi_gap: S,
    /// Always `prohorov + psi_gap`.
    pub d_psi: S,
}

#[derive(Debug, Clone)]
pub struct ConsistencySummary<S> {
    pub n: usize,
    pub median_prohorov: S,
    pub median_beta: S,
    pub median_psi_gap: S,
    pub median_d_psi: S,
}

#[derive(Debug, Clone)]
pub struct ConsistencyRun<S: Scalar> {
    pub generator: String,
    pub gauge: String,
    pub n_schedule: Vec<usize>,
    pub seeds: u64,
    pub master_seed: u64,
    pub records: Vec<ConsistencyRecord<S>>,
    pub summary: Vec<ConsistencySummary<S>>,
}

impl<S: Scalar> ConsistencyRun<S> {
    pub const RECORDS_HEADER: &'static str = "stream,n,prohorov,beta,psi_gap,d_psi";
    pub const SUMMARY_HEADER: &'static str =
        "n,median_prohorov,median_beta,median_psi_gap,median_d_psi";

    pub fn records_csv(&self) -> String {
        let mut out = format!("{}\n", Self::RECORDS_HEADER);
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.stream, r.n, r.prohorov, r.beta, r.psi_gap, r.d_psi
            ));
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = format!("{}\n", Self::SUMMARY_HEADER);
        for s in &self.summary {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.n, s.median_prohorov, s.median_beta, s.median_psi_gap, s.median_d_psi
            ));
        }
        out
    }

    pub fn median_d_psi_at(&self, n: usize) -> Option<S> {
        self.summary.iter().find(|s| s.n == n).map(|s| s.median_d_psi)
    }
}

/// Distances between the empirical prefix laws and the directing measure,
/// per replication and per `n`; medians across replications per `n`.
pub fn consistency_experiment<S: Scalar>(
    gen: &PathGenerator<S>,
    psi: &Gauge<S>,
    n_schedule: &[usize],
    seeds: u64,
    master_seed: u64,
) -> Result<ConsistencyRun<S>, HarnessError> {
    check_schedule(n_schedule)?;
    let n_max = *n_schedule.iter().max().expect("nonempty schedule");
    let per_seed: Vec<Vec<ConsistencyRecord<S>>> = (0..seeds)
        .into_par_iter()
        .map(|stream| -> Result<Vec<ConsistencyRecord<S>>, HarnessError> {
            let path = gen.generate(n_max, PathSeed::new(master_seed, stream))?;
            let ups = gen.directing_measure(&path)?;
            let mut rows = Vec::with_capacity(n_schedule.len());
            for &n in n_schedule {
                let m_n = path.prefix_empirical(n)?;
                let (pi, gap) = d_psi_value(&m_n, &ups.measure, psi, gen.space())?;
                let beta = bl_metric(&m_n, &ups.measure, gen.space())?;
                rows.push(ConsistencyRecord {
                    stream,
                    n,
                    prohorov: pi,
                    beta,
                    psi_gap: gap,
                    d_psi: pi + gap,
                });
            }
            Ok(rows)
        })
        .collect::<Result<_, _>>()?;
    let records: Vec<ConsistencyRecord<S>> = per_seed.into_iter().flatten().collect();
    let summary = n_schedule
        .iter()
        .map(|&n| {
            let of = |f: &dyn Fn(&ConsistencyRecord<S>) -> S| {
                median(
                    &records
                        .iter()
                        .filter(|r| r.n == n)
                        .map(f)
                        .collect::<Vec<_>>(),
                )
            };
            ConsistencySummary {
                n,
                median_prohorov: of(&|r| r.prohorov),
                median_beta: of(&|r| r.beta),
                median_psi_gap: of(&|r| r.psi_gap),
                median_d_psi: of(&|r| r.d_psi),
            }
        })
        .collect();
    Ok(ConsistencyRun {
        generator: gen.describe().to_string(),
        gauge: psi.describe(),
        n_schedule: n_schedule.to_vec(),
        seeds,
        master_seed,
        records,
        summary,
    })
}

// ---------------------------------------------------------------------------
// Glivenko-Cantelli check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct GcRecord<S> {
    pub stream: u64,
    pub n: usize,
    pub beta: S,
}

#[derive(Debug, Clone)]
pub struct GcRun<S: Scalar> {
    pub generator: String,
    pub n_schedule: Vec<usize>,
    pub seeds: u64,
    pub master_seed: u64,
    pub records: Vec<GcRecord<S>>,
    pub median_beta: Vec<(usize, S)>,
}

impl<S: Scalar> GcRun<S> {
    pub const RECORDS_HEADER: &'static str = "stream,n,beta";
    pub const SUMMARY_HEADER: &'static str = "n,median_beta";

    pub fn records_csv(&self) -> String {
        let mut out = format!("{}\n", Self::RECORDS_HEADER);
        for r in &self.records {
            out.push_str(&format!("{},{},{}\n", r.stream, r.n, r.beta));
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = format!("{}\n", Self::SUMMARY_HEADER);
        for (n, b) in &self.median_beta {
            out.push_str(&format!("{n},{b}\n"));
        }
        out
    }
}

/// `β(m_n, μ)` for an i.i.d. generator: the sup over the bounded-Lipschitz
/// unit ball of `|(m_n - μ)f|`, computed exactly by the dual LP.
pub fn gc_sup_check<S: Scalar>(
    gen: &PathGenerator<S>,
    n_schedule: &[usize],
    seeds: u64,
    master_seed: u64,
) -> Result<GcRun<S>, HarnessError> {
    check_schedule(n_schedule)?;
    if !gen.is_iid() {
        return Err(HarnessError::InvalidExperiment(
            "the Glivenko-Cantelli check requires an iid generator".into(),
        ));
    }
    let n_max = *n_schedule.iter().max().expect("nonempty schedule");
    let per_seed: Vec<Vec<GcRecord<S>>> = (0..seeds)
        .into_par_iter()
        .map(|stream| -> Result<Vec<GcRecord<S>>, HarnessError> {
            let path = gen.generate(n_max, PathSeed::new(master_seed, stream))?;
            let mu = gen.directing_measure(&path)?.measure;
            n_schedule
                .iter()
                .map(|&n| {
                    Ok(GcRecord {
                        stream,
                        n,
                        beta: bl_metric(&path.prefix_empirical(n)?, &mu, gen.space())?,
                    })
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let records: Vec<GcRecord<S>> = per_seed.into_iter().flatten().collect();
    let median_beta = n_schedule
        .iter()
        .map(|&n| {
            (
                n,
                median(
                    &records
                        .iter()
                        .filter(|r| r.n == n)
                        .map(|r| r.beta)
                        .collect::<Vec<_>>(),
                ),
            )
        })
        .collect();
    Ok(GcRun {
        generator: gen.describe().to_string(),
        n_schedule: n_schedule.to_vec(),
        seeds,
        master_seed,
        records,
        median_beta,
    })
}

// ---------------------------------------------------------------------------
// Estimator laws and the λ curve
// ---------------------------------------------------------------------------

/// Empirical law of `τ(m_n)` over independent replications, as a measure on
/// the real line. When a perturbation is supplied the paths are perturbed
/// first; the same seed streams are used either way, so the two laws are
/// coupled replication by replication.
pub fn estimator_law<S: Scalar>(
    gen: &PathGenerator<S>,
    tau: &Statistic<S>,
    n: usize,
    reps: u64,
    theta: Option<&Perturbation<S>>,
    master_seed: u64,
) -> Result<DiscreteMeasure<S>, HarnessError> {
    if reps == 0 || n == 0 {
        return Err(HarnessError::InvalidExperiment(
            "reps and n must be positive".into(),
        ));
    }
    let values: Vec<S> = (0..reps)
        .into_par_iter()
        .map(|stream| -> Result<S, HarnessError> {
            let len = theta.map_or(n, |t| t.required_input_length(n));
            let path = gen.generate(len, PathSeed::new(master_seed, stream))?;
            let path = match theta {
                Some(t) => t.apply(&path, gen.space())?,
                None => path,
            };
            let m_n = path.prefix_empirical(n)?;
            Ok(tau.evaluate(&m_n, gen.space())?)
        })
        .collect::<Result<_, _>>()?;
    let points: Vec<Point<S>> = values.into_iter().map(Point::Real).collect();
    Ok(DiscreteMeasure::make_empirical(&points)?)
}

/// Sorted sample of perturbation distances with its empirical survival
/// function `λ̂(α) = #{dᵢ > α}/N`.
#[derive(Debug, Clone)]
pub struct LambdaCurve<S: Scalar> {
    sorted: Vec<S>,
}

impl<S: Scalar> LambdaCurve<S> {
    pub fn from_samples(mut samples: Vec<S>) -> Result<Self, HarnessError> {
        if samples.is_empty() {
            return Err(HarnessError::InvalidExperiment(
                "empty perturbation-distance sample".into(),
            ));
        }
        for d in samples.iter_mut() {
            if !d.is_finite() || *d < -S::solver_tol() {
                return Err(HarnessError::InvalidExperiment(format!(
                    "negative distance sample {d}"
                )));
            }
            *d = d.max(S::zero());
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(LambdaCurve { sorted: samples })
    }

    pub fn samples(&self) -> &[S] {
        &self.sorted
    }

    /// `λ̂(α)`: fraction of samples strictly above `α`.
    pub fn survival(&self, alpha: S) -> S {
        let below = self.sorted.partition_point(|&d| d <= alpha);
        real::<S>((self.sorted.len() - below) as f64) / real::<S>(self.sorted.len() as f64)
    }

    pub fn max_sample(&self) -> S {
        *self.sorted.last().expect("nonempty")
    }
}

/// Sample `d_ψ(υ, υ∘θ)` over replications.
pub fn lambda_theta<S: Scalar>(
    gen: &PathGenerator<S>,
    theta: &Perturbation<S>,
    psi: &Gauge<S>,
    reps: u64,
    master_seed: u64,
) -> Result<LambdaCurve<S>, HarnessError> {
    if reps == 0 {
        return Err(HarnessError::InvalidExperiment("reps must be positive".into()));
    }
    let samples: Vec<S> = (0..reps)
        .into_par_iter()
        .map(|stream| -> Result<S, HarnessError> {
            let ups = gen.sample_directing(PathSeed::new(master_seed, stream))?;
            let pushed = theta.pushforward(&ups, gen.space())?;
            let (pi, gap) = d_psi_value(&ups.measure, &pushed.measure, psi, gen.space())?;
            Ok(pi + gap)
        })
        .collect::<Result<_, _>>()?;
    LambdaCurve::from_samples(samples)
}

/// `‖θ‖ = inf{α > 0 : λ̂(α) < κ(α)}`, exact for the empirical curve.
///
/// The survival function is piecewise constant with pieces delimited by
/// the distinct sample values; on each piece the crossing with the
/// continuous strictly increasing `κ` is bracketed by bisection.
pub fn theta_norm<S: Scalar>(curve: &LambdaCurve<S>, kappa: &Modulus<S>) -> S {
    let mut boundaries = vec![S::zero()];
    for &d in curve.samples() {
        if d > *boundaries.last().expect("nonempty") {
            boundaries.push(d);
        }
    }
    let tol = real::<S>(1e-9);
    let mut best = S::infinity();
    for (k, &lo) in boundaries.iter().enumerate() {
        let level = curve.survival(lo);
        let hi = boundaries.get(k + 1).copied();
        if level == S::zero() {
            // κ(α) > 0 for every α > 0, so the infimum over this final
            // piece is its left endpoint.
            best = best.min(lo);
            break;
        }
        let hi = hi.expect("only the last piece has level zero");
        if kappa.eval(hi) <= level {
            continue; // κ stays below the survival level on this piece
        }
        let candidate = if kappa.eval(lo) > level {
            lo
        } else {
            // κ(lo) ≤ level < κ(hi): bisect the crossing.
            let (mut a, mut b) = (lo, hi);
            while b - a > tol {
                let mid = (a + b) / real::<S>(2.0);
                if kappa.eval(mid) > level {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            b
        };
        if candidate < hi {
            best = best.min(candidate);
        }
    }
    best
}

/// Scoring-functional variant of the perturbation norm: the same infimum
/// applied to expected-score samples `S̃(υ, υ∘θ)`.
pub fn theta_norm_scoring<S: Scalar>(
    gen: &PathGenerator<S>,
    theta: &Perturbation<S>,
    tau: &Statistic<S>,
    scoring: &ScoringFunction<S>,
    kappa: &Modulus<S>,
    reps: u64,
    master_seed: u64,
) -> Result<S, HarnessError> {
    let (forward, _) = scoring_perturbation_samples(gen, theta, tau, scoring, reps, master_seed)?;
    Ok(theta_norm(&LambdaCurve::from_samples(forward)?, kappa))
}

/// Samples of `S̃(υ, υ∘θ)` and of the reversed `S̃(υ∘θ, υ)`; the
/// functional is not symmetric, so both directions are reported.
pub fn scoring_perturbation_samples<S: Scalar>(
    gen: &PathGenerator<S>,
    theta: &Perturbation<S>,
    tau: &Statistic<S>,
    scoring: &ScoringFunction<S>,
    reps: u64,
    master_seed: u64,
) -> Result<(Vec<S>, Vec<S>), HarnessError> {
    if reps == 0 {
        return Err(HarnessError::InvalidExperiment("reps must be positive".into()));
    }
    let both: Vec<(S, S)> = (0..reps)
        .into_par_iter()
        .map(|stream| -> Result<(S, S), HarnessError> {
            let ups = gen.sample_directing(PathSeed::new(master_seed, stream))?;
            let pushed = theta.pushforward(&ups, gen.space())?;
            let fwd = score_integral(tau, scoring, &ups.measure, &pushed.measure, gen.space())?;
            let rev = score_integral(tau, scoring, &pushed.measure, &ups.measure, gen.space())?;
            Ok((fwd, rev))
        })
        .collect::<Result<_, _>>()?;
    Ok(both.into_iter().unzip())
}

// ---------------------------------------------------------------------------
// Robustness pipeline
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RobustnessRow<S> {
    pub n: usize,
    /// Prohorov distance between the estimator laws under the plain and
    /// the perturbed path measure (bounded real-line metric).
    pub lhs: S,
    /// Coarsening error bound on `lhs`.
    pub lhs_bound: S,
    pub rhs: S,
    pub margin: S,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct RobustnessRun<S: Scalar> {
    pub generator: String,
    pub theta: String,
    pub statistic: String,
    pub kappa: String,
    pub gauge: String,
    pub quasi_invariant: bool,
    pub n_schedule: Vec<usize>,
    pub reps: u64,
    pub master_seed: u64,
    pub theta_norm: S,
    /// `κ(‖θ‖)`, the right-hand side of the bound.
    pub rhs: S,
    /// Monte Carlo margin added to the verdicts: twice the worst-case
    /// binomial standard error of a difference of two empirical
    /// probabilities estimated from `reps` replications.
    pub margin: S,
    pub rows: Vec<RobustnessRow<S>>,
    /// Distance between the laws of `τ(υ)` and `τ(υ∘θ)` (the
    /// directing-measure-level comparison).
    pub lemma_lhs: S,
    pub lemma_holds: bool,
    /// Sampled pairs `(υ, υ∘θ)` where the declared modulus failed to
    /// dominate the statistic gap (reported, not fatal).
    pub modulus_violations: usize,
    /// Per (n, stream): the estimator value on the plain and on the
    /// perturbed path.
    pub records: Vec<(usize, u64, S, S)>,
}

impl<S: Scalar> RobustnessRun<S> {
    pub const RECORDS_HEADER: &'static str = "n,stream,tau,tau_perturbed";
    pub const SUMMARY_HEADER: &'static str = "level,n,lhs,lhs_bound,rhs,margin,holds";

    pub fn records_csv(&self) -> String {
        let mut out = format!("{}\n", Self::RECORDS_HEADER);
        for (n, stream, a, b) in &self.records {
            out.push_str(&format!("{n},{stream},{a},{b}\n"));
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = format!("{}\n", Self::SUMMARY_HEADER);
        for r in &self.rows {
            out.push_str(&format!(
                "estimator,{},{},{},{},{},{}\n",
                r.n, r.lhs, r.lhs_bound, r.rhs, r.margin, r.holds
            ));
        }
        out.push_str(&format!(
            "directing,0,{},0,{},{},{}\n",
            self.lemma_lhs, self.rhs, self.margin, self.lemma_holds
        ));
        out
    }

    pub fn max_lhs(&self) -> S {
        self.rows
            .iter()
            .map(|r| r.lhs)
            .fold(S::zero(), |a, b| a.max(b))
    }

    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds) && self.lemma_holds
    }
}

/// Worst-case binomial standard error of the difference of two empirical
/// probabilities estimated from `reps` samples each.
pub fn binomial_se<S: Scalar>(reps: u64) -> S {
    (real::<S>(0.5) / real::<S>(reps as f64)).sqrt()
}

/// Run the full robustness comparison for one scenario.
pub fn robustness_check<S: Scalar>(
    gen: &PathGenerator<S>,
    theta: &Perturbation<S>,
    tau: &Statistic<S>,
    kappa: &Modulus<S>,
    psi: &Gauge<S>,
    n_schedule: &[usize],
    reps: u64,
    master_seed: u64,
) -> Result<RobustnessRun<S>, HarnessError> {
    check_schedule(n_schedule)?;
    if reps == 0 {
        return Err(HarnessError::InvalidExperiment("reps must be positive".into()));
    }
    let real_line = GroundSpace::real_line(MetricMode::Bounded);

    let curve = lambda_theta(gen, theta, psi, reps, master_seed)?;
    let norm = theta_norm(&curve, kappa);
    let rhs = kappa.eval(norm);
    let margin = real::<S>(2.0) * binomial_se::<S>(reps);

    // Directing-measure-level comparison plus declared-modulus diagnostics.
    let lemma_pairs: Vec<(S, S, bool)> = (0..reps)
        .into_par_iter()
        .map(|stream| -> Result<(S, S, bool), HarnessError> {
            let ups = gen.sample_directing(PathSeed::new(master_seed, stream))?;
            let pushed = theta.pushforward(&ups, gen.space())?;
            let a = tau.evaluate(&ups.measure, gen.space())?;
            let b = tau.evaluate(&pushed.measure, gen.space())?;
            let (pi, gap) = d_psi_value(&ups.measure, &pushed.measure, psi, gen.space())?;
            let guard = real::<S>(1e-12) * (S::one() + kappa.eval(pi + gap));
            let violated = (a - b).abs() > kappa.eval(pi + gap) + guard;
            Ok((a, b, violated))
        })
        .collect::<Result<_, _>>()?;
    let modulus_violations = lemma_pairs.iter().filter(|(_, _, v)| *v).count();
    let tau_ups: Vec<Point<S>> = lemma_pairs.iter().map(|&(a, _, _)| Point::Real(a)).collect();
    let tau_pushed: Vec<Point<S>> = lemma_pairs.iter().map(|&(_, b, _)| Point::Real(b)).collect();
    let law_ups = DiscreteMeasure::make_empirical(&tau_ups)?;
    let law_pushed = DiscreteMeasure::make_empirical(&tau_pushed)?;
    let (lemma_lhs, lemma_bound) = prohorov_with_bound(&law_ups, &law_pushed, &real_line)?;
    let lemma_holds = lemma_lhs + lemma_bound <= rhs + margin;

    let mut rows = Vec::with_capacity(n_schedule.len());
    let mut records = Vec::new();
    for &n in n_schedule {
        let plain = estimator_law(gen, tau, n, reps, None, master_seed)?;
        let perturbed = estimator_law(gen, tau, n, reps, Some(theta), master_seed)?;
        let (lhs, lhs_bound) = prohorov_with_bound(&plain, &perturbed, &real_line)?;
        let holds = lhs + lhs_bound <= rhs + margin;
        rows.push(RobustnessRow {
            n,
            lhs,
            lhs_bound,
            rhs,
            margin,
            holds,
        });
        // Per-replication estimator values, paired by stream.
        let pairs: Vec<(S, S)> = (0..reps)
            .into_par_iter()
            .map(|stream| -> Result<(S, S), HarnessError> {
                let path = gen.generate(
                    theta.required_input_length(n),
                    PathSeed::new(master_seed, stream),
                )?;
                let a = tau.evaluate(&path.prefix_empirical(n)?, gen.space())?;
                let perturbed_path = theta.apply(&path, gen.space())?;
                let b = tau.evaluate(&perturbed_path.prefix_empirical(n)?, gen.space())?;
                Ok((a, b))
            })
            .collect::<Result<_, _>>()?;
        for (stream, (a, b)) in pairs.into_iter().enumerate() {
            records.push((n, stream as u64, a, b));
        }
    }

    Ok(RobustnessRun {
        generator: gen.describe().to_string(),
        theta: theta.describe(),
        statistic: tau.describe(),
        kappa: kappa.describe(),
        gauge: psi.describe(),
        quasi_invariant: theta.quasi_invariant,
        n_schedule: n_schedule.to_vec(),
        reps,
        master_seed,
        theta_norm: norm,
        rhs,
        margin,
        rows,
        lemma_lhs,
        lemma_holds,
        modulus_violations,
        records,
    })
}

// ---------------------------------------------------------------------------
// Built-in scenario presets
// ---------------------------------------------------------------------------

/// Ready-made robustness scenarios used by the verification suite.
pub mod presets {
    use super::*;

    pub struct RobustnessPreset<S: Scalar> {
        pub name: &'static str,
        pub generator: PathGenerator<S>,
        pub theta: Perturbation<S>,
        pub tau: Statistic<S>,
        pub kappa: Modulus<S>,
        pub psi: Gauge<S>,
        pub n_schedule: Vec<usize>,
    }

    fn binary_space<S: Scalar>() -> GroundSpace<S> {
        GroundSpace::finite(
            vec!["0".into(), "1".into()],
            vec![S::zero(), S::one()],
            MetricMode::Bounded,
        )
        .expect("two-point space is valid")
    }

    fn bernoulli<S: Scalar>(p: f64) -> DiscreteMeasure<S> {
        DiscreteMeasure::new(vec![
            (Point::Label(0), real(1.0 - p)),
            (Point::Label(1), real(p)),
        ])
        .expect("bernoulli weights are a probability vector")
    }

    fn exchangeable_bernoulli<S: Scalar>() -> PathGenerator<S> {
        PathGenerator::exchangeable(
            binary_space(),
            vec![bernoulli(0.2), bernoulli(0.8)],
            vec![real(0.5), real(0.5)],
        )
        .expect("valid mixture")
    }

    /// Identity perturbation on an exchangeable Bernoulli mixture: both
    /// sides of the bound are exactly zero.
    pub fn identity_preset<S: Scalar>() -> RobustnessPreset<S> {
        RobustnessPreset {
            name: "identity",
            generator: exchangeable_bernoulli(),
            theta: Perturbation::identity(),
            tau: Statistic::mean(),
            kappa: Modulus::identity(),
            psi: Gauge::one(),
            n_schedule: vec![100, 400, 1000],
        }
    }

    /// Label swap on the symmetric exchangeable mixture: the swap exchanges
    /// the two components, so the perturbed law coincides with the original
    /// in distribution while `‖θ‖` is the component distance 0.6.
    pub fn exchangeable_swap_preset<S: Scalar>() -> RobustnessPreset<S> {
        RobustnessPreset {
            name: "exchangeable-swap",
            generator: exchangeable_bernoulli(),
            theta: Perturbation::permutation(vec![1, 0], true).expect("swap is a bijection"),
            tau: Statistic::mean(),
            kappa: Modulus::identity(),
            psi: Gauge::one(),
            n_schedule: vec![100, 400, 1000],
        }
    }

    /// Label swap on a symmetric two-state chain: the swap fixes the
    /// stationary law, so the directing measure is invariant and `‖θ‖ = 0`.
    pub fn ergodic_invariant_preset<S: Scalar>() -> RobustnessPreset<S> {
        let generator = PathGenerator::markov(
            binary_space(),
            vec![
                vec![real(0.3), real(0.7)],
                vec![real(0.7), real(0.3)],
            ],
            None,
        )
        .expect("irreducible symmetric chain");
        RobustnessPreset {
            name: "ergodic-invariant",
            generator,
            theta: Perturbation::permutation(vec![1, 0], true).expect("swap is a bijection"),
            tau: Statistic::mean(),
            kappa: Modulus::identity(),
            psi: Gauge::one(),
            n_schedule: vec![100, 400, 1000],
        }
    }

    pub fn all<S: Scalar>() -> Vec<RobustnessPreset<S>> {
        vec![
            identity_preset(),
            exchangeable_swap_preset(),
            ergodic_invariant_preset(),
        ]
    }
}
