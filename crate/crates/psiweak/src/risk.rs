//! Statistics on measures, moduli of continuity and scoring functions.
//!
//! Built-in statistics are the mean, the lower `α`-quantile
//! `inf{x : F(x) ≥ α}` and expected shortfall at level `α` (tail
//! expectation with fractional weighting of the boundary atom, so the
//! value is exact for discrete laws). The codomain is the real line with
//! `d_T(s,t) = |s - t|`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::measure::{DiscreteMeasure, Gauge, GroundSpace, MeasureError, Point};
use crate::metric::{d_psi_value, MetricError};
use crate::scalar::{real, Scalar};

#[derive(Debug, Error)]
pub enum RiskError {
    #[error("level {0} outside (0,1)")]
    InvalidLevel(String),
    #[error("{0} requires a real-line ground space")]
    NonRealSupport(String),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("empty pair list")]
    EmptyPairs,
    #[error("custom statistic failed: {0}")]
    Custom(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

type CustomStat<S> =
    Arc<dyn Fn(&DiscreteMeasure<S>, &GroundSpace<S>) -> Result<S, RiskError> + Send + Sync>;

/// A real-valued functional of a measure.
#[derive(Clone)]
pub enum Statistic<S: Scalar> {
    Mean,
    Quantile { level: S },
    ExpectedShortfall { level: S },
    Custom { name: String, f: CustomStat<S> },
}

impl<S: Scalar> fmt::Debug for Statistic<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl<S: Scalar> Statistic<S> {
    pub fn mean() -> Self {
        Statistic::Mean
    }

    pub fn quantile(level: S) -> Result<Self, RiskError> {
        check_level(level)?;
        Ok(Statistic::Quantile { level })
    }

    pub fn expected_shortfall(level: S) -> Result<Self, RiskError> {
        check_level(level)?;
        Ok(Statistic::ExpectedShortfall { level })
    }

    pub fn describe(&self) -> String {
        match self {
            Statistic::Mean => "mean".into(),
            Statistic::Quantile { level } => format!("quantile({level},lower)"),
            Statistic::ExpectedShortfall { level } => format!("expected_shortfall({level})"),
            Statistic::Custom { name, .. } => format!("custom({name})"),
        }
    }

    /// Evaluate the statistic. The mean only needs point coordinates;
    /// quantile and expected shortfall require the real line.
    pub fn evaluate(
        &self,
        mu: &DiscreteMeasure<S>,
        space: &GroundSpace<S>,
    ) -> Result<S, RiskError> {
        match self {
            Statistic::Mean => {
                let mut acc = S::zero();
                for (p, w) in mu.atoms() {
                    acc = acc + *w * space.coordinate(p)?;
                }
                Ok(acc)
            }
            Statistic::Quantile { level } => {
                let xs = real_support(mu, space, "quantile")?;
                Ok(lower_quantile(&xs, *level))
            }
            Statistic::ExpectedShortfall { level } => {
                let xs = real_support(mu, space, "expected shortfall")?;
                Ok(expected_shortfall(&xs, *level))
            }
            Statistic::Custom { f, .. } => f(mu, space),
        }
    }
}

fn check_level<S: Scalar>(level: S) -> Result<(), RiskError> {
    if !level.is_finite() || level <= S::zero() || level >= S::one() {
        return Err(RiskError::InvalidLevel(format!("{level}")));
    }
    Ok(())
}

fn real_support<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    space: &GroundSpace<S>,
    what: &str,
) -> Result<Vec<(S, S)>, RiskError> {
    if !space.is_real_line() {
        return Err(RiskError::NonRealSupport(what.into()));
    }
    mu.check_space(space)?;
    Ok(mu
        .atoms()
        .iter()
        .map(|(p, w)| match p {
            Point::Real(x) => (*x, *w),
            Point::Label(_) => unreachable!("checked real line"),
        })
        .collect())
}

/// Lower quantile of an atom list in ascending order.
fn lower_quantile<S: Scalar>(xs: &[(S, S)], level: S) -> S {
    let guard = S::merge_tol();
    let mut cum = S::zero();
    for &(x, w) in xs {
        cum = cum + w;
        if cum >= level - guard {
            return x;
        }
    }
    xs.last().expect("nonempty support").0
}

/// Tail expectation beyond the α-quantile with fractional boundary weight:
/// `ES_α = (1/(1-α)) [ Σ_{x>q} w x + (F(q) - α) q ]`.
fn expected_shortfall<S: Scalar>(xs: &[(S, S)], level: S) -> S {
    let guard = S::merge_tol();
    let mut cum = S::zero();
    let mut q = xs.last().expect("nonempty support").0;
    let mut f_q = S::one();
    for &(x, w) in xs {
        cum = cum + w;
        if cum >= level - guard {
            q = x;
            f_q = cum;
            break;
        }
    }
    let mut tail = S::zero();
    for &(x, w) in xs {
        if x > q {
            tail = tail + w * x;
        }
    }
    (tail + (f_q - level) * q) / (S::one() - level)
}

type CustomScore<S> = Arc<dyn Fn(S, S) -> S + Send + Sync>;

/// Scoring function `S(forecast, outcome)`.
#[derive(Clone)]
pub enum ScoringFunction<S: Scalar> {
    /// `(x - y)^2`, the strictly consistent score of the mean.
    Squared,
    /// `(1_{x ≥ y} - α)(ψ(x) - ψ(y))`, the gauge-weighted pinball score of
    /// the `α`-quantile.
    PinballPsi { level: S, psi: Gauge<S> },
    Custom { name: String, f: CustomScore<S> },
}

impl<S: Scalar> fmt::Debug for ScoringFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl<S: Scalar> ScoringFunction<S> {
    pub fn squared() -> Self {
        ScoringFunction::Squared
    }

    pub fn pinball_psi(level: S, psi: Gauge<S>) -> Result<Self, RiskError> {
        check_level(level)?;
        Ok(ScoringFunction::PinballPsi { level, psi })
    }

    pub fn describe(&self) -> String {
        match self {
            ScoringFunction::Squared => "squared".into(),
            ScoringFunction::PinballPsi { level, psi } => {
                format!("pinball_psi({level},{})", psi.describe())
            }
            ScoringFunction::Custom { name, .. } => format!("custom({name})"),
        }
    }

    pub fn eval(&self, x: S, y: S, space: &GroundSpace<S>) -> Result<S, RiskError> {
        match self {
            ScoringFunction::Squared => Ok((x - y) * (x - y)),
            ScoringFunction::PinballPsi { level, psi } => {
                let px = psi.eval(&Point::Real(x), space)?;
                let py = psi.eval(&Point::Real(y), space)?;
                let ind = if x >= y { S::one() } else { S::zero() };
                Ok((ind - *level) * (px - py))
            }
            ScoringFunction::Custom { f, .. } => Ok(f(x, y)),
        }
    }
}

/// `S̃(μ, ν) = ∫ S(τ(μ), y) ν(dy)`: expected score of the forecast `τ(μ)`
/// under `ν`.
pub fn score_integral<S: Scalar>(
    tau: &Statistic<S>,
    scoring: &ScoringFunction<S>,
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    space: &GroundSpace<S>,
) -> Result<S, RiskError> {
    if !space.is_real_line() {
        return Err(RiskError::NonRealSupport("score integral".into()));
    }
    nu.check_space(space)?;
    let forecast = tau.evaluate(mu, space)?;
    let mut acc = S::zero();
    for (p, w) in nu.atoms() {
        let y = space.coordinate(p)?;
        acc = acc + *w * scoring.eval(forecast, y, space)?;
    }
    Ok(acc)
}

/// Modulus of continuity: continuous, vanishing at zero, strictly
/// increasing.
#[derive(Debug, Clone, PartialEq)]
pub enum Modulus<S: Scalar> {
    Identity,
    Sqrt,
    /// `κ(z) = z^exponent`, `exponent > 0`.
    Power { exponent: S },
    /// Piecewise-linear through strictly increasing points starting at
    /// `(0,0)`; extrapolated beyond the last point with the final slope.
    Table { points: Vec<(S, S)> },
}

impl<S: Scalar> Modulus<S> {
    pub fn identity() -> Self {
        Modulus::Identity
    }

    pub fn sqrt() -> Self {
        Modulus::Sqrt
    }

    pub fn power(exponent: S) -> Result<Self, RiskError> {
        if !exponent.is_finite() || exponent <= S::zero() {
            return Err(RiskError::InvalidModulus(format!("exponent {exponent}")));
        }
        Ok(Modulus::Power { exponent })
    }

    pub fn table(points: Vec<(S, S)>) -> Result<Self, RiskError> {
        if points.len() < 2 {
            return Err(RiskError::InvalidModulus("need at least two points".into()));
        }
        if points[0] != (S::zero(), S::zero()) {
            return Err(RiskError::InvalidModulus("table must start at (0,0)".into()));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
                return Err(RiskError::InvalidModulus(
                    "table must be strictly increasing".into(),
                ));
            }
        }
        Ok(Modulus::Table { points })
    }

    pub fn describe(&self) -> String {
        match self {
            Modulus::Identity => "identity".into(),
            Modulus::Sqrt => "sqrt".into(),
            Modulus::Power { exponent } => format!("power({exponent})"),
            Modulus::Table { points } => format!("table[{}]", points.len()),
        }
    }

    pub fn eval(&self, z: S) -> S {
        let z = z.max(S::zero());
        match self {
            Modulus::Identity => z,
            Modulus::Sqrt => z.sqrt(),
            Modulus::Power { exponent } => z.powf(*exponent),
            Modulus::Table { points } => {
                let last = points.len() - 1;
                if z >= points[last].0 {
                    let (x0, y0) = points[last - 1];
                    let (x1, y1) = points[last];
                    return y1 + (z - x1) * (y1 - y0) / (x1 - x0);
                }
                let mut i = 0;
                while points[i + 1].0 < z {
                    i += 1;
                }
                let (x0, y0) = points[i];
                let (x1, y1) = points[i + 1];
                y0 + (z - x0) * (y1 - y0) / (x1 - x0)
            }
        }
    }
}

/// One row of a scoring-modulus check.
#[derive(Debug, Clone)]
pub struct ModulusCheckRow<S> {
    /// `d_T(τ(μ), τ(ν))`.
    pub lhs: S,
    /// `S̃(μ, ν)`.
    pub score: S,
    /// `κ(S̃(μ, ν))`.
    pub rhs: S,
    pub violated: bool,
}

/// Per-pair results of checking `d_T(τμ, τν) ≤ κ(S̃(μ,ν))`.
#[derive(Debug, Clone)]
pub struct ViolationReport<S> {
    pub statistic: String,
    pub scoring: String,
    pub kappa: String,
    pub rows: Vec<ModulusCheckRow<S>>,
    pub violations: usize,
}

impl<S: Scalar> ViolationReport<S> {
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# statistic={} scoring={} kappa={} convention=lower-quantile\nlhs,score,rhs,violated\n",
            self.statistic, self.scoring, self.kappa
        );
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.lhs, r.score, r.rhs, r.violated));
        }
        out
    }
}

/// Check the scoring-modulus inequality on a list of measure pairs.
pub fn check_scoring_modulus<S: Scalar>(
    tau: &Statistic<S>,
    scoring: &ScoringFunction<S>,
    kappa: &Modulus<S>,
    pairs: &[(DiscreteMeasure<S>, DiscreteMeasure<S>)],
    space: &GroundSpace<S>,
) -> Result<ViolationReport<S>, RiskError> {
    if pairs.is_empty() {
        return Err(RiskError::EmptyPairs);
    }
    let mut rows = Vec::with_capacity(pairs.len());
    let mut violations = 0;
    for (mu, nu) in pairs {
        let lhs = (tau.evaluate(mu, space)? - tau.evaluate(nu, space)?).abs();
        let score = score_integral(tau, scoring, mu, nu, space)?;
        let rhs = kappa.eval(score);
        // Tiny relative slack absorbs floating-point rounding in the exact
        // identities (e.g. sqrt(gap^2 + Var) vs |gap|).
        let violated = lhs > rhs + real::<S>(1e-12) * (S::one() + rhs);
        if violated {
            violations += 1;
        }
        rows.push(ModulusCheckRow {
            lhs,
            score,
            rhs,
            violated,
        });
    }
    Ok(ViolationReport {
        statistic: tau.describe(),
        scoring: scoring.describe(),
        kappa: kappa.describe(),
        rows,
        violations,
    })
}

/// Scatter of `(d_ψ(μ,ν), d_T(τμ, τν))` pairs together with the least
/// concave majorant envelope, a candidate empirical modulus for `τ`.
#[derive(Debug, Clone)]
pub struct ModulusTable<S> {
    pub statistic: String,
    pub gauge: String,
    /// Rows sorted by the first component.
    pub rows: Vec<(S, S)>,
    /// Breakpoints of the concave, non-decreasing envelope.
    pub envelope: Vec<(S, S)>,
}

impl<S: Scalar> ModulusTable<S> {
    /// Evaluate the envelope (constant beyond the last breakpoint).
    pub fn envelope_eval(&self, x: S) -> S {
        let pts = &self.envelope;
        if pts.is_empty() {
            return S::zero();
        }
        if x <= pts[0].0 {
            return pts[0].1;
        }
        for w in pts.windows(2) {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            if x <= x1 {
                return y0 + (x - x0) * (y1 - y0) / (x1 - x0);
            }
        }
        pts[pts.len() - 1].1
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# statistic={} gauge={} envelope=least-concave-majorant\nd_psi,d_tau\n",
            self.statistic, self.gauge
        );
        for (x, y) in &self.rows {
            out.push_str(&format!("{x},{y}\n"));
        }
        out
    }
}

/// Tabulate the empirical modulus of `τ` over measure pairs.
pub fn empirical_modulus<S: Scalar>(
    tau: &Statistic<S>,
    psi: &Gauge<S>,
    space: &GroundSpace<S>,
    pairs: &[(DiscreteMeasure<S>, DiscreteMeasure<S>)],
) -> Result<ModulusTable<S>, RiskError> {
    if pairs.is_empty() {
        return Err(RiskError::EmptyPairs);
    }
    let mut rows = Vec::with_capacity(pairs.len());
    for (mu, nu) in pairs {
        let (pi, gap) = d_psi_value(mu, nu, psi, space)?;
        let d = pi + gap;
        let dt = (tau.evaluate(mu, space)? - tau.evaluate(nu, space)?).abs();
        rows.push((d, dt));
    }
    rows.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let envelope = concave_majorant(&rows);
    Ok(ModulusTable {
        statistic: tau.describe(),
        gauge: psi.describe(),
        rows,
        envelope,
    })
}

/// Least concave majorant of the running maximum of the scatter, anchored
/// at the origin. Anchoring plus the running maximum make the envelope
/// non-decreasing; the hull makes it concave.
fn concave_majorant<S: Scalar>(rows: &[(S, S)]) -> Vec<(S, S)> {
    let mut pts: Vec<(S, S)> = vec![(S::zero(), S::zero())];
    let mut running = S::zero();
    for &(x, y) in rows {
        running = running.max(y);
        match pts.last_mut() {
            Some((px, py)) if *px == x => *py = (*py).max(running),
            _ => pts.push((x, running)),
        }
    }
    let mut hull: Vec<(S, S)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // keep slopes strictly decreasing left to right
            let lhs = (b.1 - a.1) * (p.0 - b.0);
            let rhs = (p.1 - b.1) * (b.0 - a.0);
            if lhs <= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// The fixed modulus test set used by the elicitability experiments.
pub fn kappa_test_set<S: Scalar>() -> Vec<Modulus<S>> {
    vec![
        Modulus::identity(),
        Modulus::sqrt(),
        Modulus::power(real(2.0)).expect("valid exponent"),
        Modulus::power(real(0.25)).expect("valid exponent"),
        Modulus::table(vec![(S::zero(), S::zero()), (S::one(), real(10.0))])
            .expect("valid table"),
    ]
}

/// Search the two-atom quantile-straddling family for a pair violating the
/// scoring-modulus inequality under `kappa`.
///
/// The family lives on `{0, M}`: `μ` puts mass just under `α` at zero (its
/// quantile is `M`), `ν` puts mass just over `α` (its quantile is `0`), so
/// the quantile gap is `M` while the expected pinball score scales with
/// `ψ(M) - ψ(0)`. Sweeping `M` over a geometric grid finds a violation for
/// any fixed modulus when `ψ` is nonlinear.
pub fn quantile_pinball_violation<S: Scalar>(
    level: S,
    psi: &Gauge<S>,
    kappa: &Modulus<S>,
    space: &GroundSpace<S>,
) -> Result<Option<(DiscreteMeasure<S>, DiscreteMeasure<S>)>, RiskError> {
    check_level(level)?;
    if !space.is_real_line() {
        return Err(RiskError::NonRealSupport("counterexample search".into()));
    }
    let tau = Statistic::Quantile { level };
    let scoring = ScoringFunction::PinballPsi {
        level,
        psi: psi.clone(),
    };
    let half = real::<S>(0.5);
    let delta = (level.min(S::one() - level)) * half * half; // strict straddle
    for k in -60..=60i32 {
        let m = real::<S>(2.0).powi(k / 2) * if k % 2 == 0 { S::one() } else { real(1.5) };
        let mu = DiscreteMeasure::from_reals(&[(S::zero(), level - delta), (m, S::one() - level + delta)])?;
        let nu = DiscreteMeasure::from_reals(&[(S::zero(), level + delta), (m, S::one() - level - delta)])?;
        let report = check_scoring_modulus(&tau, &scoring, kappa, &[(mu.clone(), nu.clone())], space)?;
        if report.violations > 0 {
            return Ok(Some((mu, nu)));
        }
    }
    Ok(None)
}
