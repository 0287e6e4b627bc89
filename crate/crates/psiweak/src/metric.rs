//! Probability metrics on finitely supported measures.
//!
//! * `prohorov` — the Prohorov distance, computed through the coupling
//!   characterization: for a threshold `t` the worst Borel-set deficit
//!   `sup_B (μ(B) - ν(B^t))` equals `1 - maxflow` over the bipartite
//!   network that admits an edge between atoms at distance `≤ t`. The
//!   distance is the smallest `ε` with deficit `D(ε) ≤ ε`; since `D` only
//!   jumps at pairwise atom distances it suffices to scan those
//!   breakpoints, and monotonicity of `D(t) ≤ t` allows a binary search.
//! * `bl_metric` — the bounded-Lipschitz (dual-norm) distance
//!   `sup { |(μ-ν)f| : ‖f‖_∞ + ‖f‖_Lip ≤ 1 }`, realized exactly as a small
//!   LP over the union support: a witness only needs values at atoms, and
//!   pairwise Lipschitz constraints are exactly the condition for a
//!   McShane extension to the whole space.
//! * `d_psi` — the gauge-weighted distance `π(μ,ν) + |μψ - νψ|`.
//! * `ky_fan_empirical` — the empirical Ky Fan functional
//!   `min { ε ≥ 0 : #{dᵢ > ε}/N ≤ ε }` of a distance sample.

use thiserror::Error;

use crate::measure::{psi_moment, DiscreteMeasure, Gauge, GroundSpace, MeasureError, MetricMode, Point};
use crate::opt::{max_flow, solve_lp, FlowNetwork, LinearConstraint, LinearProgram, LpStatus, SolverError};
use crate::scalar::{real, Scalar};

/// Supports larger than this are coarsened by quantile binning before the
/// flow-based Prohorov computation (the network has quadratically many
/// edges in the support size).
pub const MAX_EXACT_SUPPORT: usize = 400;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("lp did not return an optimum: {0}")]
    LpFailure(String),
    #[error("negative distance sample {0}")]
    NegativeDistance(String),
    #[error("empty distance sample")]
    EmptySample,
}

/// All metric values between one pair of measures.
#[derive(Debug, Clone)]
pub struct MetricReport<S> {
    pub prohorov: S,
    pub bl: S,
    pub psi_gap: S,
    pub d_psi: S,
    pub mode: MetricMode,
}

impl<S: Scalar> MetricReport<S> {
    pub const CSV_HEADER: &'static str = "prohorov,bl,psi_gap,d_psi,metric_mode";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.prohorov,
            self.bl,
            self.psi_gap,
            self.d_psi,
            self.mode.as_str()
        )
    }
}

/// Prohorov distance between two measures on a shared ground space.
pub fn prohorov<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    space: &GroundSpace<S>,
) -> Result<S, MetricError> {
    prohorov_with_bound(mu, nu, space).map(|(v, _)| v)
}

/// Prohorov distance together with the coarsening error bound (zero when
/// both supports fit [`MAX_EXACT_SUPPORT`]).
pub fn prohorov_with_bound<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    space: &GroundSpace<S>,
) -> Result<(S, S), MetricError> {
    mu.check_space(space)?;
    nu.check_space(space)?;
    // Identical canonical measures are at distance zero exactly; this keeps
    // identity of indiscernibles free of flow-rounding noise.
    if mu == nu {
        return Ok((S::zero(), S::zero()));
    }
    // Order the pair deterministically so the reported value is exactly
    // symmetric in (μ, ν).
    let (a, b) = order_pair(mu, nu);
    let (a, ra) = coarsen(a, space, MAX_EXACT_SUPPORT);
    let (b, rb) = coarsen(b, space, MAX_EXACT_SUPPORT);
    let value = prohorov_exact(&a, &b, space)?;
    Ok((value, ra + rb))
}

fn order_pair<'a, S: Scalar>(
    mu: &'a DiscreteMeasure<S>,
    nu: &'a DiscreteMeasure<S>,
) -> (DiscreteMeasure<S>, DiscreteMeasure<S>) {
    if mu.cmp_canonical(nu) == std::cmp::Ordering::Greater {
        (nu.clone(), mu.clone())
    } else {
        (mu.clone(), nu.clone())
    }
}

fn prohorov_exact<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    space: &GroundSpace<S>,
) -> Result<S, MetricError> {
    let m = mu.support_size();
    let n = nu.support_size();
    let mut dist = vec![vec![S::zero(); n]; m];
    let mut breakpoints: Vec<S> = Vec::with_capacity(m * n + 1);
    breakpoints.push(S::zero());
    for (i, (p, _)) in mu.atoms().iter().enumerate() {
        for (j, (q, _)) in nu.atoms().iter().enumerate() {
            let d = space.distance(p, q)?;
            dist[i][j] = d;
            breakpoints.push(d);
        }
    }
    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breakpoints.dedup_by(|a, b| a == b);

    let deficit = |t: S| -> Result<S, MetricError> {
        let mut net = FlowNetwork::new(m + n + 2, 0, m + n + 1)?;
        for (i, (_, w)) in mu.atoms().iter().enumerate() {
            net.add_edge(0, 1 + i, *w)?;
        }
        for (j, (_, w)) in nu.atoms().iter().enumerate() {
            net.add_edge(1 + m + j, m + n + 1, *w)?;
        }
        for i in 0..m {
            for j in 0..n {
                if dist[i][j] <= t {
                    net.add_edge(1 + i, 1 + m + j, S::one())?;
                }
            }
        }
        let flow = max_flow(&net)?.value;
        Ok((S::one() - flow).max(S::zero()))
    };

    // First breakpoint index where D(t) ≤ t; the predicate is monotone
    // because D is non-increasing while t increases.
    let mut lo = 0usize;
    let mut hi = breakpoints.len() - 1;
    debug_assert!(deficit(breakpoints[hi])? <= breakpoints[hi]);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if deficit(breakpoints[mid])? <= breakpoints[mid] {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let k = lo;
    let value = if k == 0 {
        breakpoints[0].max(deficit(breakpoints[0])?)
    } else {
        breakpoints[k].min(deficit(breakpoints[k - 1])?)
    };
    Ok(value)
}

/// Quantile-bin a real-line measure down to at most `max_atoms` bins.
/// Returns the coarsened measure and the maximal displacement of any atom,
/// which bounds the Prohorov perturbation.
fn coarsen<S: Scalar>(
    mu: DiscreteMeasure<S>,
    space: &GroundSpace<S>,
    max_atoms: usize,
) -> (DiscreteMeasure<S>, S) {
    if mu.support_size() <= max_atoms || !space.is_real_line() {
        return (mu, S::zero());
    }
    let target = S::one() / real::<S>(max_atoms as f64);
    let mut bins: Vec<(S, S)> = Vec::with_capacity(max_atoms + 1); // (rep, weight)
    let mut radius = S::zero();
    let mut bin: Vec<(S, S)> = Vec::new();
    let mut bin_mass = S::zero();
    let flush = |bin: &mut Vec<(S, S)>, bin_mass: &mut S, bins: &mut Vec<(S, S)>, radius: &mut S| {
        if bin.is_empty() {
            return;
        }
        let mass = *bin_mass;
        let rep = bin
            .iter()
            .fold(S::zero(), |acc, &(x, w)| acc + x * w)
            / mass;
        for &(x, _) in bin.iter() {
            *radius = radius.max((x - rep).abs());
        }
        bins.push((rep, mass));
        bin.clear();
        *bin_mass = S::zero();
    };
    for (p, w) in mu.atoms() {
        let x = match p {
            Point::Real(x) => *x,
            Point::Label(_) => unreachable!("real-line measure"),
        };
        bin.push((x, *w));
        bin_mass = bin_mass + *w;
        if bin_mass >= target {
            flush(&mut bin, &mut bin_mass, &mut bins, &mut radius);
        }
    }
    flush(&mut bin, &mut bin_mass, &mut bins, &mut radius);
    let coarse = DiscreteMeasure::new(
        bins.into_iter()
            .map(|(x, w)| (Point::Real(x), w))
            .collect(),
    )
    .expect("binned atoms form a probability measure");
    (coarse, radius)
}

/// Bounded-Lipschitz distance `β(μ, ν)` on a shared ground space.
///
/// Real-line supports beyond [`MAX_EXACT_SUPPORT`] are quantile-binned like
/// in the Prohorov computation (the witness LP has quadratically many
/// constraints); [`bl_metric_with_bound`] reports the binning error bound.
pub fn bl_metric<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    space: &GroundSpace<S>,
) -> Result<S, MetricError> {
    bl_metric_with_bound(mu, nu, space).map(|(v, _)| v)
}

/// `β` together with the coarsening error bound (a unit-Lipschitz witness
/// moves by at most the bin radius, so the distance moves by at most the
/// summed radii).
pub fn bl_metric_with_bound<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    space: &GroundSpace<S>,
) -> Result<(S, S), MetricError> {
    mu.check_space(space)?;
    nu.check_space(space)?;
    if mu == nu {
        return Ok((S::zero(), S::zero()));
    }
    let (a, b) = order_pair(mu, nu);
    let (a, ra) = coarsen(a, space, MAX_EXACT_SUPPORT);
    let (b, rb) = coarsen(b, space, MAX_EXACT_SUPPORT);
    Ok((bl_exact(&a, &b, space)?, ra + rb))
}

fn bl_exact<S: Scalar>(
    a: &DiscreteMeasure<S>,
    b: &DiscreteMeasure<S>,
    space: &GroundSpace<S>,
) -> Result<S, MetricError> {
    // Signed union support: points with their weight difference.
    let mut atoms: Vec<(Point<S>, S)> = a.atoms().to_vec();
    atoms.extend(b.atoms().iter().map(|&(p, w)| (p, -w)));
    atoms.sort_by(|(p, _), (q, _)| p.cmp_total(q));
    let tol = S::merge_tol();
    let mut union: Vec<(Point<S>, S)> = Vec::with_capacity(atoms.len());
    for (p, w) in atoms {
        match union.last_mut() {
            Some((q, v)) if points_close(q, &p, tol) => *v = *v + w,
            _ => union.push((p, w)),
        }
    }
    union.retain(|(_, w)| *w != S::zero());
    if union.is_empty() {
        return Ok(S::zero());
    }

    // LP over f values on the union support plus (s, L):
    //   maximize Σ cᵢ fᵢ
    //   |fᵢ| ≤ s, |fᵢ - fⱼ| ≤ L·d(xᵢ,xⱼ), s + L ≤ 1.
    let m = union.len();
    let vars = m + 2; // f_0..f_{m-1}, s, L
    let s_col = m;
    let l_col = m + 1;
    let mut objective = vec![S::zero(); vars];
    for (i, (_, c)) in union.iter().enumerate() {
        objective[i] = *c;
    }
    let mut constraints = Vec::with_capacity(2 * m + m * (m - 1) + 1);
    for i in 0..m {
        let mut row = vec![S::zero(); vars];
        row[i] = S::one();
        row[s_col] = -S::one();
        constraints.push(LinearConstraint {
            coeffs: row.clone(),
            rhs: S::zero(),
        });
        row[i] = -S::one();
        constraints.push(LinearConstraint {
            coeffs: row,
            rhs: S::zero(),
        });
    }
    for i in 0..m {
        for j in i + 1..m {
            let d = space.distance(&union[i].0, &union[j].0)?;
            let mut row = vec![S::zero(); vars];
            row[i] = S::one();
            row[j] = -S::one();
            row[l_col] = -d;
            constraints.push(LinearConstraint {
                coeffs: row.clone(),
                rhs: S::zero(),
            });
            row[i] = -S::one();
            row[j] = S::one();
            constraints.push(LinearConstraint {
                coeffs: row,
                rhs: S::zero(),
            });
        }
    }
    let mut cap = vec![S::zero(); vars];
    cap[s_col] = S::one();
    cap[l_col] = S::one();
    constraints.push(LinearConstraint {
        coeffs: cap,
        rhs: S::one(),
    });

    let mut lp = LinearProgram::new(objective, constraints);
    for i in 0..m {
        lp.bounds[i] = (None, None);
    }
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(MetricError::LpFailure(format!("status {:?}", sol.status)));
    }
    Ok(sol.objective.max(S::zero()))
}

fn points_close<S: Scalar>(a: &Point<S>, b: &Point<S>, tol: S) -> bool {
    match (a, b) {
        (Point::Real(x), Point::Real(y)) => (*x - *y).abs() <= tol,
        (Point::Label(i), Point::Label(j)) => i == j,
        _ => false,
    }
}

/// Gauge-weighted distance report: `d_ψ = π + |μψ - νψ|`, with the
/// bounded-Lipschitz value included for reference.
pub fn d_psi<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    psi: &Gauge<S>,
    space: &GroundSpace<S>,
) -> Result<MetricReport<S>, MetricError> {
    let pi = prohorov(mu, nu, space)?;
    let bl = bl_metric(mu, nu, space)?;
    let gap = (psi_moment(mu, psi, space)? - psi_moment(nu, psi, space)?).abs();
    Ok(MetricReport {
        prohorov: pi,
        bl,
        psi_gap: gap,
        d_psi: pi + gap,
        mode: space.mode(),
    })
}

/// Gauge distance value without the bounded-Lipschitz column (cheaper; used
/// by the experiment harness where β is reported separately).
pub fn d_psi_value<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    psi: &Gauge<S>,
    space: &GroundSpace<S>,
) -> Result<(S, S), MetricError> {
    let pi = prohorov(mu, nu, space)?;
    let gap = (psi_moment(mu, psi, space)? - psi_moment(nu, psi, space)?).abs();
    Ok((pi, gap))
}

/// Smallest `ε ≥ 0` such that the fraction of samples exceeding `ε` is at
/// most `ε`; the empirical Ky Fan functional of a distance sample.
pub fn ky_fan_empirical<S: Scalar>(distances: &[S]) -> Result<S, MetricError> {
    if distances.is_empty() {
        return Err(MetricError::EmptySample);
    }
    for d in distances {
        if !d.is_finite() || *d < S::zero() {
            return Err(MetricError::NegativeDistance(format!("{d}")));
        }
    }
    let mut sorted = distances.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = real::<S>(sorted.len() as f64);

    // Piece boundaries: 0 and the distinct sample values. On the piece
    // starting at b the survival fraction is #{d > b}/N.
    let mut boundaries = vec![S::zero()];
    for d in &sorted {
        if *d > *boundaries.last().unwrap() {
            boundaries.push(*d);
        }
    }
    let survival = |t: S| -> S {
        let above = sorted.partition_point(|&d| d <= t);
        real::<S>((sorted.len() - above) as f64) / n
    };
    let mut best = S::infinity();
    for (k, &b) in boundaries.iter().enumerate() {
        let level = survival(b);
        let cand = b.max(level);
        let feasible = match boundaries.get(k + 1) {
            Some(&next) => cand < next,
            None => true,
        };
        if feasible {
            best = best.min(cand);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MetricMode;

    fn line(mode: MetricMode) -> GroundSpace<f64> {
        GroundSpace::real_line(mode)
    }

    fn dirac(x: f64) -> DiscreteMeasure<f64> {
        DiscreteMeasure::dirac(Point::Real(x))
    }

    #[test]
    fn prohorov_identity() {
        let space = line(MetricMode::Raw);
        let m = DiscreteMeasure::from_reals(&[(0.0, 0.3), (1.0, 0.7)]).unwrap();
        assert_eq!(prohorov(&m, &m, &space).unwrap(), 0.0);
    }

    #[test]
    fn prohorov_diracs_min_distance_one() {
        let space = line(MetricMode::Raw);
        for &(x, y) in &[(0.0f64, 0.25), (0.0, 1.0), (-2.0, 3.0), (1.5, 1.5)] {
            let want = (x - y).abs().min(1.0);
            let got = prohorov(&dirac(x), &dirac(y), &space).unwrap();
            assert!(
                (got - want).abs() < 1e-9,
                "pi(d_{x}, d_{y}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn prohorov_symmetric_exactly() {
        let space = line(MetricMode::Raw);
        let a = DiscreteMeasure::from_reals(&[(0.0, 0.2), (0.7, 0.5), (2.0, 0.3)]).unwrap();
        let b = DiscreteMeasure::from_reals(&[(0.1, 0.6), (1.4, 0.4)]).unwrap();
        assert_eq!(
            prohorov(&a, &b, &space).unwrap(),
            prohorov(&b, &a, &space).unwrap()
        );
    }

    #[test]
    fn prohorov_mixture_partial_overlap() {
        // μ = δ_0, ν = (1-p)δ_0 + pδ_M with M large: need ε ≥ p.
        let space = line(MetricMode::Raw);
        let mu = dirac(0.0);
        let nu = DiscreteMeasure::from_reals(&[(0.0, 0.75), (9.0, 0.25)]).unwrap();
        let got = prohorov(&mu, &nu, &space).unwrap();
        assert!((got - 0.25).abs() < 1e-9);
    }

    #[test]
    fn prohorov_on_table_metric_space() {
        // d(a,b) = 0.3, d(a,c) = 0.9, d(b,c) = 0.7. For μ = δ_a and
        // ν = (δ_b + δ_c)/2, any ε in (0.3, 0.9] has ν({a}^ε) = 1/2, so the
        // defining inequality needs ε ≥ 1/2; the ν-side subsets agree.
        let sp = GroundSpace::<f64>::finite_with_table(
            vec!["a".into(), "b".into(), "c".into()],
            vec![0.0, 1.0, 2.0],
            vec![
                vec![0.0, 0.3, 0.9],
                vec![0.3, 0.0, 0.7],
                vec![0.9, 0.7, 0.0],
            ],
            MetricMode::Raw,
        )
        .unwrap();
        let mu = DiscreteMeasure::dirac(Point::Label(0));
        let nu =
            DiscreteMeasure::new(vec![(Point::Label(1), 0.5), (Point::Label(2), 0.5)]).unwrap();
        let got = prohorov(&mu, &nu, &sp).unwrap();
        assert!((got - 0.5).abs() < 1e-9, "{got}");
    }

    #[test]
    fn prohorov_rejects_space_mismatch() {
        let space = line(MetricMode::Raw);
        let m = DiscreteMeasure::new(vec![(Point::Label(0), 1.0)]).unwrap();
        assert!(prohorov(&m, &m, &space).is_err());
    }

    #[test]
    fn bl_identity_and_range() {
        let space = line(MetricMode::Raw);
        let m = DiscreteMeasure::from_reals(&[(0.0, 0.3), (1.0, 0.7)]).unwrap();
        assert_eq!(bl_metric(&m, &m, &space).unwrap(), 0.0);
        let far = bl_metric(&dirac(0.0), &dirac(1e6), &space).unwrap();
        assert!((1.99..=2.0 + 1e-9).contains(&far));
    }

    #[test]
    fn bl_diracs_closed_form() {
        for mode in [MetricMode::Raw, MetricMode::Bounded] {
            let space = line(mode);
            for &(x, y) in &[(0.0, 0.5), (0.0, 2.0), (-1.0, 4.0)] {
                let d = space
                    .distance(&Point::Real(x), &Point::Real(y))
                    .unwrap();
                let want = 2.0 * d / (2.0 + d);
                let got = bl_metric(&dirac(x), &dirac(y), &space).unwrap();
                assert!(
                    (got - want).abs() < 1e-9,
                    "beta(d_{x}, d_{y}) mode {:?} = {got}, want {want}",
                    mode
                );
            }
        }
    }

    #[test]
    fn bl_symmetric_exactly() {
        let space = line(MetricMode::Bounded);
        let a = DiscreteMeasure::from_reals(&[(0.0, 0.5), (0.9, 0.5)]).unwrap();
        let b = DiscreteMeasure::from_reals(&[(0.2, 0.25), (1.8, 0.75)]).unwrap();
        assert_eq!(
            bl_metric(&a, &b, &space).unwrap(),
            bl_metric(&b, &a, &space).unwrap()
        );
    }

    #[test]
    fn d_psi_composition_and_gauge_one() {
        let space = line(MetricMode::Raw);
        let psi = Gauge::polynomial(1.0, 1.0).unwrap();
        // (δ_x, δ_y): d_psi = min(d,1) + ||x|-|y||
        let (x, y) = (0.25f64, 2.0f64);
        let rep = d_psi(&dirac(x), &dirac(y), &psi, &space).unwrap();
        let want = (x - y).abs().min(1.0) + (x.abs() - y.abs()).abs();
        assert!((rep.d_psi - want).abs() < 1e-9);
        assert_eq!(rep.d_psi, rep.prohorov + rep.psi_gap);

        let rep = d_psi(&dirac(x), &dirac(y), &Gauge::one(), &space).unwrap();
        assert_eq!(rep.d_psi, rep.prohorov);
        assert_eq!(rep.psi_gap, 0.0);
    }

    #[test]
    fn d_psi_zero_on_equal() {
        let space = line(MetricMode::Raw);
        let psi = Gauge::polynomial(2.0, 1.5).unwrap();
        let m = DiscreteMeasure::from_reals(&[(0.0, 0.5), (3.0, 0.5)]).unwrap();
        let rep = d_psi(&m, &m, &psi, &space).unwrap();
        assert_eq!(rep.d_psi, 0.0);
    }

    #[test]
    fn convergence_equivalence_designed_sequences() {
        let space = line(MetricMode::Raw);
        let psi = Gauge::polynomial(1.0, 1.0).unwrap();
        // δ_{1/k} → δ_0: both β and the moment gap vanish, so d_ψ does.
        let mut last = f64::INFINITY;
        for k in [1, 4, 16, 64] {
            let rep = d_psi(&dirac(1.0 / k as f64), &dirac(0.0), &psi, &space).unwrap();
            assert!(rep.d_psi < last);
            last = rep.d_psi;
            assert!(bl_metric(&dirac(1.0 / k as f64), &dirac(0.0), &space).unwrap() <= rep.d_psi + 1e-12);
        }
        assert!(last < 0.05);
        // Mass escape: μ_k = (1-1/k)δ_0 + (1/k)δ_k has β → 0 but the
        // ψ-moment gap stays at 1, so d_ψ does not vanish.
        let d0 = dirac(0.0);
        for k in [10, 100, 1000] {
            let kf = k as f64;
            let mk = DiscreteMeasure::from_reals(&[(0.0, 1.0 - 1.0 / kf), (kf, 1.0 / kf)]).unwrap();
            let beta = bl_metric(&mk, &d0, &space).unwrap();
            let rep = d_psi(&mk, &d0, &psi, &space).unwrap();
            assert!(beta < 3.0 / kf);
            assert!((rep.psi_gap - 1.0).abs() < 1e-12);
            assert!(rep.d_psi > 1.0 - 1e-12);
        }
    }

    #[test]
    fn ky_fan_examples() {
        assert_eq!(ky_fan_empirical(&[0.0f64; 5]).unwrap(), 0.0);
        assert_eq!(ky_fan_empirical(&[1.0f64; 7]).unwrap(), 1.0);
        assert_eq!(ky_fan_empirical(&[0.0f64, 0.5, 0.5, 0.5]).unwrap(), 0.5);
        assert!(ky_fan_empirical::<f64>(&[]).is_err());
        assert!(ky_fan_empirical(&[-0.1f64]).is_err());
    }

    #[test]
    fn ky_fan_small_fraction() {
        // 1 of 10 samples at 0.9: at ε = 0.1 the fraction above is 0.1 ≤ 0.1.
        let mut d = vec![0.0f64; 9];
        d.push(0.9);
        assert!((ky_fan_empirical(&d).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn coarsening_kicks_in_and_bounds_error() {
        let space = line(MetricMode::Bounded);
        // 1000 atoms uniform on [0,1) vs the same shifted by one step.
        let n = 1000;
        let mu = DiscreteMeasure::from_reals(
            &(0..n)
                .map(|i| (i as f64 / n as f64, 1.0 / n as f64))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let nu = DiscreteMeasure::from_reals(
            &(0..n)
                .map(|i| ((i + 1) as f64 / n as f64, 1.0 / n as f64))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let (v, bound) = prohorov_with_bound(&mu, &nu, &space).unwrap();
        assert!(bound > 0.0 && bound < 0.01);
        // True value is 1/1000; coarse value must be within the bound.
        assert!(v <= 0.001 + bound + 1e-9);
    }

    #[test]
    fn report_csv_row_shape() {
        let rep = MetricReport {
            prohorov: 0.5f64,
            bl: 0.25,
            psi_gap: 0.1,
            d_psi: 0.6,
            mode: MetricMode::Bounded,
        };
        assert_eq!(rep.to_csv_row(), "0.5,0.25,0.1,0.6,bounded");
    }

    mod proptests {
        use super::*;
        use proptest::prelude::*;

        fn measure_strategy() -> impl Strategy<Value = DiscreteMeasure<f64>> {
            prop::collection::vec(((-3.0..3.0f64), 1u32..8), 1..4).prop_map(|atoms| {
                let total: u32 = atoms.iter().map(|(_, k)| *k).sum();
                DiscreteMeasure::new(
                    atoms
                        .into_iter()
                        .map(|(x, k)| (Point::Real(x), k as f64 / total as f64))
                        .collect(),
                )
                .unwrap()
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn prohorov_in_unit_interval_and_symmetric(
                a in measure_strategy(),
                b in measure_strategy(),
            ) {
                let space = GroundSpace::real_line(MetricMode::Raw);
                let ab = prohorov(&a, &b, &space).unwrap();
                let ba = prohorov(&b, &a, &space).unwrap();
                prop_assert_eq!(ab, ba);
                prop_assert!((0.0..=1.0 + 1e-9).contains(&ab));
            }

            #[test]
            fn bl_at_most_two_and_symmetric(
                a in measure_strategy(),
                b in measure_strategy(),
            ) {
                let space = GroundSpace::real_line(MetricMode::Bounded);
                let ab = bl_metric(&a, &b, &space).unwrap();
                let ba = bl_metric(&b, &a, &space).unwrap();
                prop_assert_eq!(ab, ba);
                prop_assert!((0.0..=2.0 + 1e-9).contains(&ab));
            }

            #[test]
            fn triangle_inequality_holds(
                a in measure_strategy(),
                b in measure_strategy(),
                c in measure_strategy(),
            ) {
                let space = GroundSpace::real_line(MetricMode::Raw);
                let ab = prohorov(&a, &b, &space).unwrap();
                let bc = prohorov(&b, &c, &space).unwrap();
                let ac = prohorov(&a, &c, &space).unwrap();
                prop_assert!(ac <= ab + bc + 1e-8);
                let ab = bl_metric(&a, &b, &space).unwrap();
                let bc = bl_metric(&b, &c, &space).unwrap();
                let ac = bl_metric(&a, &c, &space).unwrap();
                prop_assert!(ac <= ab + bc + 1e-8);
            }

            #[test]
            fn prohorov_invariant_under_atom_permutation(
                a in measure_strategy(),
                b in measure_strategy(),
            ) {
                let space = GroundSpace::real_line(MetricMode::Raw);
                let mut rev_a: Vec<_> = a.atoms().to_vec();
                rev_a.reverse();
                let a2 = DiscreteMeasure::new(rev_a).unwrap();
                prop_assert_eq!(
                    prohorov(&a, &b, &space).unwrap(),
                    prohorov(&a2, &b, &space).unwrap()
                );
            }
        }
    }
}
