//! Finitely supported probability measures, ground metric spaces and gauges.
//!
//! A [`GroundSpace`] is either the real line or a finite labeled metric
//! space; both can be used with the raw metric or with the bounded
//! equivalent `d'(x,y) = min(d(x,y), 1)`, which is the totally bounded
//! choice the asymptotic experiments rely on.
//!
//! A [`DiscreteMeasure`] is kept in canonical form: atoms sorted, pairwise
//! distinct (real points closer than the merge tolerance are fused), weights
//! strictly positive and normalized to total mass one.

use std::cmp::Ordering;

use thiserror::Error;

use crate::scalar::{real, Scalar};

/// Whether distances are used raw or truncated at one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricMode {
    /// `d(x,y) = |x - y|` on the line, or the pairwise table as given.
    Raw,
    /// `d'(x,y) = min(d(x,y), 1)`, an equivalent totally bounded metric.
    Bounded,
}

impl MetricMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            MetricMode::Raw => "raw",
            MetricMode::Bounded => "bounded",
        }
    }
}

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("empty path")]
    EmptyPath,
    #[error("negative weight {0}")]
    NegativeWeight(String),
    #[error("weights sum to {0}, expected 1")]
    MassNotOne(String),
    #[error("weight list length {weights} does not match measure list length {measures}")]
    WeightMismatch { weights: usize, measures: usize },
    #[error("point does not belong to the ground space: {0}")]
    SpaceMismatch(String),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("invalid ground space: {0}")]
    InvalidSpace(String),
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A point of a ground space: a real coordinate or an index into the finite
/// label set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point<S: Scalar> {
    Real(S),
    Label(usize),
}

impl<S: Scalar> Point<S> {
    /// Total order used for canonicalization. Real points order by value,
    /// labels by index; mixed kinds never coexist inside one valid measure.
    pub(crate) fn cmp_total(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Point::Real(a), Point::Real(b)) => a.partial_cmp(b).unwrap_or(Ordering::Equal),
            (Point::Label(a), Point::Label(b)) => a.cmp(b),
            (Point::Real(_), Point::Label(_)) => Ordering::Less,
            (Point::Label(_), Point::Real(_)) => Ordering::Greater,
        }
    }
}

/// Ground metric space `(E, d)`.
#[derive(Debug, Clone, PartialEq)]
pub enum GroundSpace<S: Scalar> {
    RealLine {
        mode: MetricMode,
    },
    Finite {
        labels: Vec<String>,
        coords: Vec<S>,
        /// Optional explicit pairwise distance table; `None` means
        /// `d(i,j) = |coord_i - coord_j|`.
        table: Option<Vec<Vec<S>>>,
        mode: MetricMode,
    },
}

impl<S: Scalar> GroundSpace<S> {
    pub fn real_line(mode: MetricMode) -> Self {
        GroundSpace::RealLine { mode }
    }

    /// Finite labeled space with coordinates and the coordinate metric.
    pub fn finite(
        labels: Vec<String>,
        coords: Vec<S>,
        mode: MetricMode,
    ) -> Result<Self, MeasureError> {
        Self::finite_impl(labels, coords, None, mode)
    }

    /// Finite labeled space with an explicit pairwise distance table.
    /// The table is checked against the metric axioms by enumeration.
    pub fn finite_with_table(
        labels: Vec<String>,
        coords: Vec<S>,
        table: Vec<Vec<S>>,
        mode: MetricMode,
    ) -> Result<Self, MeasureError> {
        Self::finite_impl(labels, coords, Some(table), mode)
    }

    fn finite_impl(
        labels: Vec<String>,
        coords: Vec<S>,
        table: Option<Vec<Vec<S>>>,
        mode: MetricMode,
    ) -> Result<Self, MeasureError> {
        let k = labels.len();
        if k == 0 {
            return Err(MeasureError::InvalidSpace("no points".into()));
        }
        if coords.len() != k {
            return Err(MeasureError::InvalidSpace(format!(
                "{} labels but {} coordinates",
                k,
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(MeasureError::InvalidSpace("non-finite coordinate".into()));
        }
        for (i, a) in labels.iter().enumerate() {
            for b in labels.iter().skip(i + 1) {
                if a == b {
                    return Err(MeasureError::InvalidSpace(format!("duplicate label {a}")));
                }
            }
        }
        if let Some(t) = &table {
            if t.len() != k || t.iter().any(|row| row.len() != k) {
                return Err(MeasureError::InvalidSpace("table shape mismatch".into()));
            }
            let tol = S::merge_tol();
            for i in 0..k {
                if t[i][i].abs() > tol {
                    return Err(MeasureError::InvalidSpace(format!("d({i},{i}) != 0")));
                }
                for j in 0..k {
                    if !t[i][j].is_finite() || t[i][j] < S::zero() {
                        return Err(MeasureError::InvalidSpace(format!(
                            "d({i},{j}) negative or non-finite"
                        )));
                    }
                    if i != j && t[i][j] <= tol {
                        return Err(MeasureError::InvalidSpace(format!(
                            "d({i},{j}) = 0 for distinct points"
                        )));
                    }
                    if (t[i][j] - t[j][i]).abs() > tol {
                        return Err(MeasureError::InvalidSpace(format!("d({i},{j}) asymmetric")));
                    }
                    for l in 0..k {
                        if t[i][j] > t[i][l] + t[l][j] + tol {
                            return Err(MeasureError::InvalidSpace(format!(
                                "triangle inequality fails at ({i},{j},{l})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(GroundSpace::Finite {
            labels,
            coords,
            table,
            mode,
        })
    }

    pub fn mode(&self) -> MetricMode {
        match self {
            GroundSpace::RealLine { mode } => *mode,
            GroundSpace::Finite { mode, .. } => *mode,
        }
    }

    pub fn is_real_line(&self) -> bool {
        matches!(self, GroundSpace::RealLine { .. })
    }

    /// Number of points of a finite space, `None` on the real line.
    pub fn point_count(&self) -> Option<usize> {
        match self {
            GroundSpace::RealLine { .. } => None,
            GroundSpace::Finite { labels, .. } => Some(labels.len()),
        }
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        match (self, p) {
            (GroundSpace::RealLine { .. }, Point::Real(x)) => x.is_finite(),
            (GroundSpace::Finite { labels, .. }, Point::Label(i)) => *i < labels.len(),
            _ => false,
        }
    }

    fn check_point(&self, p: &Point<S>) -> Result<(), MeasureError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(MeasureError::SpaceMismatch(format!("{p:?}")))
        }
    }

    /// Real coordinate of a point (label points use their coordinate field).
    pub fn coordinate(&self, p: &Point<S>) -> Result<S, MeasureError> {
        self.check_point(p)?;
        match (self, p) {
            (GroundSpace::RealLine { .. }, Point::Real(x)) => Ok(*x),
            (GroundSpace::Finite { coords, .. }, Point::Label(i)) => Ok(coords[*i]),
            _ => unreachable!("check_point rules out mixed kinds"),
        }
    }

    /// Distance between two points in the active metric mode.
    pub fn distance(&self, a: &Point<S>, b: &Point<S>) -> Result<S, MeasureError> {
        self.check_point(a)?;
        self.check_point(b)?;
        let raw = match (self, a, b) {
            (GroundSpace::RealLine { .. }, Point::Real(x), Point::Real(y)) => (*x - *y).abs(),
            (GroundSpace::Finite { coords, table, .. }, Point::Label(i), Point::Label(j)) => {
                match table {
                    Some(t) => t[*i][*j],
                    None => (coords[*i] - coords[*j]).abs(),
                }
            }
            _ => unreachable!("check_point rules out mixed kinds"),
        };
        Ok(match self.mode() {
            MetricMode::Raw => raw,
            MetricMode::Bounded => raw.min(S::one()),
        })
    }

    /// Render a point for the line-oriented measure format.
    pub fn format_point(&self, p: &Point<S>) -> Result<String, MeasureError> {
        self.check_point(p)?;
        Ok(match (self, p) {
            (GroundSpace::RealLine { .. }, Point::Real(x)) => format!("{x:.14e}"),
            (GroundSpace::Finite { labels, .. }, Point::Label(i)) => labels[*i].clone(),
            _ => unreachable!(),
        })
    }

    /// Parse a point from the line-oriented measure format.
    pub fn parse_point(&self, text: &str) -> Result<Point<S>, MeasureError> {
        match self {
            GroundSpace::RealLine { .. } => {
                let x: f64 = text
                    .trim()
                    .parse()
                    .map_err(|e| MeasureError::Parse(format!("bad coordinate {text:?}: {e}")))?;
                if !x.is_finite() {
                    return Err(MeasureError::Parse(format!("non-finite coordinate {text:?}")));
                }
                Ok(Point::Real(real(x)))
            }
            GroundSpace::Finite { labels, .. } => labels
                .iter()
                .position(|l| l == text.trim())
                .map(Point::Label)
                .ok_or_else(|| MeasureError::Parse(format!("unknown label {text:?}"))),
        }
    }
}

/// Finitely supported probability measure in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure<S: Scalar> {
    atoms: Vec<(Point<S>, S)>,
}

impl<S: Scalar> DiscreteMeasure<S> {
    /// Build a measure from raw atoms.
    ///
    /// Weights must be non-negative and sum to one within the merge
    /// tolerance. The result is canonicalized: sorted, near-duplicate real
    /// points fused, zero weights dropped, mass renormalized to exactly the
    /// floating-point sum one.
    pub fn new(atoms: Vec<(Point<S>, S)>) -> Result<Self, MeasureError> {
        if atoms.is_empty() {
            return Err(MeasureError::EmptyPath);
        }
        let tol = S::merge_tol();
        let mut total = S::zero();
        for (p, w) in &atoms {
            if !w.is_finite() {
                return Err(MeasureError::NonFinite(format!("weight at {p:?}")));
            }
            if *w < S::zero() && w.abs() > tol {
                return Err(MeasureError::NegativeWeight(format!("{w}")));
            }
            match p {
                Point::Real(x) if !x.is_finite() => {
                    return Err(MeasureError::NonFinite("atom coordinate".into()))
                }
                _ => {}
            }
            total = total + *w;
        }
        if (total - S::one()).abs() > tol {
            return Err(MeasureError::MassNotOne(format!("{total}")));
        }
        Ok(Self::canonical(atoms))
    }

    /// Canonicalize a pre-validated atom list.
    fn canonical(mut atoms: Vec<(Point<S>, S)>) -> Self {
        atoms.sort_by(|(p, _), (q, _)| p.cmp_total(q));
        let tol = S::merge_tol();
        let mut merged: Vec<(Point<S>, S)> = Vec::with_capacity(atoms.len());
        for (p, w) in atoms {
            match merged.last_mut() {
                Some((q, v)) if same_point(q, &p, tol) => *v = *v + w,
                _ => merged.push((p, w)),
            }
        }
        merged.retain(|(_, w)| *w > S::zero());
        let total: S = merged.iter().map(|(_, w)| *w).sum();
        if total > S::zero() && total != S::one() {
            for (_, w) in merged.iter_mut() {
                *w = *w / total;
            }
        }
        DiscreteMeasure { atoms: merged }
    }

    /// Dirac mass at a point.
    pub fn dirac(p: Point<S>) -> Self {
        DiscreteMeasure {
            atoms: vec![(p, S::one())],
        }
    }

    /// Convenience constructor for real-line atoms.
    pub fn from_reals(pairs: &[(S, S)]) -> Result<Self, MeasureError> {
        Self::new(pairs.iter().map(|&(x, w)| (Point::Real(x), w)).collect())
    }

    /// Empirical measure of an ordered sample: weight `k/n` on each point
    /// occurring `k` times among the `n` observations.
    pub fn make_empirical(samples: &[Point<S>]) -> Result<Self, MeasureError> {
        if samples.is_empty() {
            return Err(MeasureError::EmptyPath);
        }
        let n = real::<S>(samples.len() as f64);
        let w = S::one() / n;
        Ok(Self::canonical(samples.iter().map(|p| (*p, w)).collect()))
    }

    pub fn atoms(&self) -> &[(Point<S>, S)] {
        &self.atoms
    }

    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    /// Check that every atom lies in `space`.
    pub fn check_space(&self, space: &GroundSpace<S>) -> Result<(), MeasureError> {
        for (p, _) in &self.atoms {
            space.check_point(p)?;
        }
        Ok(())
    }

    /// `∫ f dμ = Σ wᵢ f(xᵢ)`; errors if `f` is non-finite at an atom.
    pub fn integrate<F>(&self, f: F) -> Result<S, MeasureError>
    where
        F: Fn(&Point<S>) -> S,
    {
        let mut acc = S::zero();
        for (p, w) in &self.atoms {
            let v = f(p);
            if !v.is_finite() {
                return Err(MeasureError::NonFinite(format!("f at {p:?}")));
            }
            acc = acc + *w * v;
        }
        Ok(acc)
    }

    /// Convex combination of measures; weights must be non-negative and sum
    /// to one.
    pub fn mix(measures: &[DiscreteMeasure<S>], weights: &[S]) -> Result<Self, MeasureError> {
        if measures.len() != weights.len() {
            return Err(MeasureError::WeightMismatch {
                weights: weights.len(),
                measures: measures.len(),
            });
        }
        if measures.is_empty() {
            return Err(MeasureError::EmptyPath);
        }
        let tol = S::merge_tol();
        let mut total = S::zero();
        for w in weights {
            if !w.is_finite() || (*w < S::zero() && w.abs() > tol) {
                return Err(MeasureError::NegativeWeight(format!("{w}")));
            }
            total = total + *w;
        }
        if (total - S::one()).abs() > tol {
            return Err(MeasureError::MassNotOne(format!("{total}")));
        }
        let mut atoms = Vec::new();
        for (m, w) in measures.iter().zip(weights) {
            for (p, v) in &m.atoms {
                atoms.push((*p, *v * *w));
            }
        }
        Ok(Self::canonical(atoms))
    }

    /// Deterministic lexicographic comparison of canonical atom lists.
    /// Used by the metric engine to order argument pairs so that the
    /// computed distances are exactly symmetric.
    pub(crate) fn cmp_canonical(&self, other: &Self) -> Ordering {
        let n = self.atoms.len().min(other.atoms.len());
        for i in 0..n {
            let (p, w) = &self.atoms[i];
            let (q, v) = &other.atoms[i];
            let c = p.cmp_total(q);
            if c != Ordering::Equal {
                return c;
            }
            let c = w.partial_cmp(v).unwrap_or(Ordering::Equal);
            if c != Ordering::Equal {
                return c;
            }
        }
        self.atoms.len().cmp(&other.atoms.len())
    }

    /// Serialize as one `point,weight` line per atom (weights with 15
    /// significant digits).
    pub fn to_lines(&self, space: &GroundSpace<S>) -> Result<String, MeasureError> {
        self.check_space(space)?;
        let mut out = String::new();
        for (p, w) in &self.atoms {
            out.push_str(&space.format_point(p)?);
            out.push(',');
            out.push_str(&format!("{w:.14e}\n"));
        }
        Ok(out)
    }

    /// Parse the line-oriented format produced by [`Self::to_lines`].
    pub fn parse_lines(text: &str, space: &GroundSpace<S>) -> Result<Self, MeasureError> {
        let mut atoms = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (pt, wt) = line
                .rsplit_once(',')
                .ok_or_else(|| MeasureError::Parse(format!("missing comma in {line:?}")))?;
            let w: f64 = wt
                .trim()
                .parse()
                .map_err(|e| MeasureError::Parse(format!("bad weight {wt:?}: {e}")))?;
            atoms.push((space.parse_point(pt)?, real(w)));
        }
        Self::new(atoms)
    }
}

fn same_point<S: Scalar>(a: &Point<S>, b: &Point<S>, tol: S) -> bool {
    match (a, b) {
        (Point::Real(x), Point::Real(y)) => (*x - *y).abs() <= tol,
        (Point::Label(i), Point::Label(j)) => i == j,
        _ => false,
    }
}

/// Gauge function `ψ ≥ 1` controlling tail sensitivity.
#[derive(Debug, Clone, PartialEq)]
pub enum Gauge<S: Scalar> {
    /// `ψ ≡ 1`: the gauge-weighted topology degenerates to the weak one.
    One,
    /// `ψ(x) = 1 + scale · |x|^exponent` with `scale ≥ 0`, `exponent ≥ 1`.
    Polynomial { scale: S, exponent: S },
    /// Explicit values per finite-space point, all `≥ 1`.
    Table { values: Vec<S> },
}

impl<S: Scalar> Gauge<S> {
    pub fn one() -> Self {
        Gauge::One
    }

    pub fn polynomial(scale: S, exponent: S) -> Result<Self, MeasureError> {
        if !scale.is_finite() || scale < S::zero() {
            return Err(MeasureError::InvalidGauge(format!("scale {scale}")));
        }
        if !exponent.is_finite() || exponent < S::one() {
            return Err(MeasureError::InvalidGauge(format!("exponent {exponent}")));
        }
        Ok(Gauge::Polynomial { scale, exponent })
    }

    pub fn table(values: Vec<S>) -> Result<Self, MeasureError> {
        if values.is_empty() {
            return Err(MeasureError::InvalidGauge("empty table".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < S::one()) {
            return Err(MeasureError::InvalidGauge("table value below 1".into()));
        }
        Ok(Gauge::Table { values })
    }

    /// Evaluate the gauge at a point of `space`.
    pub fn eval(&self, p: &Point<S>, space: &GroundSpace<S>) -> Result<S, MeasureError> {
        match self {
            Gauge::One => {
                space.check_point(p)?;
                Ok(S::one())
            }
            Gauge::Polynomial { scale, exponent } => {
                let x = space.coordinate(p)?;
                Ok(S::one() + *scale * x.abs().powf(*exponent))
            }
            Gauge::Table { values } => match p {
                Point::Label(i) if *i < values.len() && space.contains(p) => Ok(values[*i]),
                _ => Err(MeasureError::SpaceMismatch(format!(
                    "table gauge needs a finite-space point, got {p:?}"
                ))),
            },
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Gauge::One => "one".into(),
            Gauge::Polynomial { scale, exponent } => format!("1+{scale}*|x|^{exponent}"),
            Gauge::Table { values } => format!("table[{}]", values.len()),
        }
    }
}

/// `μψ = ∫ ψ dμ`, always `≥ 1` because `ψ ≥ 1`.
pub fn psi_moment<S: Scalar>(
    mu: &DiscreteMeasure<S>,
    psi: &Gauge<S>,
    space: &GroundSpace<S>,
) -> Result<S, MeasureError> {
    let mut acc = S::zero();
    for (p, w) in mu.atoms() {
        acc = acc + *w * psi.eval(p, space)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> GroundSpace<f64> {
        GroundSpace::real_line(MetricMode::Raw)
    }

    #[test]
    fn empirical_counts_weights() {
        // [0,0,1] -> {0: 2/3, 1: 1/3}
        let m = DiscreteMeasure::make_empirical(&[
            Point::Real(0.0f64),
            Point::Real(0.0),
            Point::Real(1.0),
        ])
        .unwrap();
        assert_eq!(m.support_size(), 2);
        assert!((m.atoms()[0].1 - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.atoms()[1].1 - 1.0 / 3.0).abs() < 1e-15);

        // [1,2,1,2] -> {1: 1/2, 2: 1/2}
        let m = DiscreteMeasure::make_empirical(&[
            Point::Real(1.0),
            Point::Real(2.0),
            Point::Real(1.0),
            Point::Real(2.0),
        ])
        .unwrap();
        assert_eq!(m.support_size(), 2);
        assert_eq!(m.atoms()[0].1, 0.5);
        assert_eq!(m.atoms()[1].1, 0.5);
    }

    #[test]
    fn empirical_single_observation_is_dirac() {
        let m = DiscreteMeasure::make_empirical(&[Point::Real(3.5f64)]).unwrap();
        assert_eq!(m, DiscreteMeasure::dirac(Point::Real(3.5)));
    }

    #[test]
    fn empirical_empty_errors() {
        let e = DiscreteMeasure::<f64>::make_empirical(&[]).unwrap_err();
        assert!(matches!(e, MeasureError::EmptyPath));
    }

    #[test]
    fn integrate_examples() {
        let m = DiscreteMeasure::from_reals(&[(0.0, 0.5), (2.0, 0.5)]).unwrap();
        let id = |p: &Point<f64>| match p {
            Point::Real(x) => *x,
            Point::Label(_) => unreachable!(),
        };
        assert_eq!(m.integrate(id).unwrap(), 1.0);
        assert_eq!(m.integrate(|_| 1.0).unwrap(), 1.0);
        let d = DiscreteMeasure::dirac(Point::Real(7.0));
        assert_eq!(d.integrate(id).unwrap(), 7.0);
    }

    #[test]
    fn integrate_rejects_non_finite() {
        let m = DiscreteMeasure::from_reals(&[(0.0, 1.0)]).unwrap();
        assert!(m.integrate(|_| f64::NAN).is_err());
    }

    #[test]
    fn psi_moment_examples() {
        let space = line();
        let psi = Gauge::polynomial(1.0, 1.0).unwrap();
        let d0 = DiscreteMeasure::dirac(Point::Real(0.0));
        assert_eq!(psi_moment(&d0, &psi, &space).unwrap(), 1.0);
        let m = DiscreteMeasure::from_reals(&[(-1.0, 0.5), (3.0, 0.5)]).unwrap();
        assert_eq!(psi_moment(&m, &psi, &space).unwrap(), 3.0);
        assert_eq!(psi_moment(&m, &Gauge::one(), &space).unwrap(), 1.0);
    }

    #[test]
    fn mix_examples() {
        let m = DiscreteMeasure::from_reals(&[(0.0, 0.25), (1.0, 0.75)]).unwrap();
        assert_eq!(DiscreteMeasure::mix(&[m.clone()], &[1.0]).unwrap(), m);

        let d0 = DiscreteMeasure::dirac(Point::Real(0.0));
        let d1 = DiscreteMeasure::dirac(Point::Real(1.0));
        let half = DiscreteMeasure::mix(&[d0.clone(), d1], &[0.5, 0.5]).unwrap();
        assert_eq!(
            half,
            DiscreteMeasure::from_reals(&[(0.0, 0.5), (1.0, 0.5)]).unwrap()
        );

        // overlapping supports merge
        let a = DiscreteMeasure::from_reals(&[(0.0, 0.5), (1.0, 0.5)]).unwrap();
        let b = DiscreteMeasure::from_reals(&[(1.0, 0.5), (2.0, 0.5)]).unwrap();
        let mixed = DiscreteMeasure::mix(&[a, b], &[0.5, 0.5]).unwrap();
        assert_eq!(mixed.support_size(), 3);
        assert_eq!(mixed.atoms()[1], (Point::Real(1.0), 0.5));
    }

    #[test]
    fn mix_rejects_bad_weights() {
        let d0 = DiscreteMeasure::dirac(Point::Real(0.0));
        assert!(DiscreteMeasure::mix(&[d0.clone()], &[0.5, 0.5]).is_err());
        assert!(DiscreteMeasure::mix(&[d0.clone()], &[-1.0]).is_err());
        assert!(DiscreteMeasure::mix(&[d0], &[0.9]).is_err());
    }

    #[test]
    fn canonicalization_merges_close_real_atoms() {
        let m =
            DiscreteMeasure::from_reals(&[(0.0, 0.5), (1e-13, 0.25), (1.0, 0.25)]).unwrap();
        assert_eq!(m.support_size(), 2);
        assert_eq!(m.atoms()[0].1, 0.75);
    }

    #[test]
    fn mass_must_be_one() {
        assert!(DiscreteMeasure::from_reals(&[(0.0, 0.5)]).is_err());
        assert!(DiscreteMeasure::from_reals(&[(0.0, 0.5), (1.0, -0.1)]).is_err());
    }

    #[test]
    fn finite_space_distance_and_bounded_mode() {
        let sp = GroundSpace::finite(
            vec!["a".into(), "b".into()],
            vec![0.0, 3.0],
            MetricMode::Raw,
        )
        .unwrap();
        assert_eq!(sp.distance(&Point::Label(0), &Point::Label(1)).unwrap(), 3.0);
        let sp = GroundSpace::finite(
            vec!["a".into(), "b".into()],
            vec![0.0, 3.0],
            MetricMode::Bounded,
        )
        .unwrap();
        assert_eq!(sp.distance(&Point::Label(0), &Point::Label(1)).unwrap(), 1.0);
        assert_eq!(sp.distance(&Point::Label(0), &Point::Label(0)).unwrap(), 0.0);
    }

    #[test]
    fn table_space_validates_metric_axioms() {
        // asymmetric table rejected
        let bad = GroundSpace::finite_with_table(
            vec!["a".into(), "b".into()],
            vec![0.0, 1.0],
            vec![vec![0.0, 1.0], vec![2.0, 0.0]],
            MetricMode::Raw,
        );
        assert!(bad.is_err());
        // triangle violation rejected
        let bad = GroundSpace::finite_with_table(
            vec!["a".into(), "b".into(), "c".into()],
            vec![0.0, 1.0, 2.0],
            vec![
                vec![0.0, 1.0, 5.0],
                vec![1.0, 0.0, 1.0],
                vec![5.0, 1.0, 0.0],
            ],
            MetricMode::Raw,
        );
        assert!(bad.is_err());
        let ok = GroundSpace::finite_with_table(
            vec!["a".into(), "b".into(), "c".into()],
            vec![0.0, 1.0, 2.0],
            vec![
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.0],
                vec![2.0, 1.0, 0.0],
            ],
            MetricMode::Raw,
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn space_mismatch_detected() {
        let sp = line();
        let m = DiscreteMeasure::new(vec![(Point::Label(0), 1.0)]).unwrap();
        assert!(m.check_space(&sp).is_err());
    }

    #[test]
    fn lines_round_trip() {
        let space = line();
        let m = DiscreteMeasure::from_reals(&[(-1.5, 0.25), (0.0, 0.5), (2.25, 0.25)]).unwrap();
        let text = m.to_lines(&space).unwrap();
        assert_eq!(text.lines().count(), 3);
        let back = DiscreteMeasure::parse_lines(&text, &space).unwrap();
        assert_eq!(back, m);

        let sp = GroundSpace::finite(
            vec!["heads".into(), "tails".into()],
            vec![0.0, 1.0],
            MetricMode::Raw,
        )
        .unwrap();
        let m = DiscreteMeasure::new(vec![(Point::Label(0), 0.5), (Point::Label(1), 0.5)]).unwrap();
        let text = m.to_lines(&sp).unwrap();
        assert!(text.starts_with("heads,"));
        assert_eq!(DiscreteMeasure::parse_lines(&text, &sp).unwrap(), m);
    }

    #[test]
    fn gauge_validation() {
        assert!(Gauge::polynomial(-1.0, 1.0).is_err());
        assert!(Gauge::polynomial(1.0, 0.5).is_err());
        assert!(Gauge::<f64>::table(vec![0.5]).is_err());
        assert!(Gauge::<f64>::table(vec![1.0, 2.0]).is_ok());
    }

    #[test]
    fn psi_moment_mix_linearity_exact_on_dyadic_weights() {
        let space = line();
        let psi = Gauge::polynomial(1.0, 2.0).unwrap();
        let a = DiscreteMeasure::from_reals(&[(0.5, 0.5), (2.0, 0.5)]).unwrap();
        let b = DiscreteMeasure::from_reals(&[(-1.0, 0.25), (1.0, 0.75)]).unwrap();
        let mixed = DiscreteMeasure::mix(&[a.clone(), b.clone()], &[0.5, 0.5]).unwrap();
        let lhs = psi_moment(&mixed, &psi, &space).unwrap();
        let rhs = 0.5 * psi_moment(&a, &psi, &space).unwrap()
            + 0.5 * psi_moment(&b, &psi, &space).unwrap();
        assert_eq!(lhs, rhs);
    }

    mod proptests {
        use super::*;
        use proptest::prelude::*;

        fn atoms_strategy() -> impl Strategy<Value = Vec<(f64, u32)>> {
            prop::collection::vec(((-50.0..50.0f64), 1u32..20), 1..6)
        }

        proptest! {
            #[test]
            fn empirical_is_permutation_invariant(raw in prop::collection::vec(-10.0..10.0f64, 1..30), seed in 0u64..1000) {
                let pts: Vec<Point<f64>> = raw.iter().map(|&x| Point::Real(x)).collect();
                let mut shuffled = pts.clone();
                // deterministic Fisher-Yates driven by the seed
                let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                for i in (1..shuffled.len()).rev() {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let j = (state >> 33) as usize % (i + 1);
                    shuffled.swap(i, j);
                }
                let a = DiscreteMeasure::make_empirical(&pts).unwrap();
                let b = DiscreteMeasure::make_empirical(&shuffled).unwrap();
                prop_assert_eq!(a, b);
            }

            #[test]
            fn integrate_is_linear_in_f(atoms in atoms_strategy()) {
                let total: u32 = atoms.iter().map(|(_, k)| *k).sum();
                let m = DiscreteMeasure::new(
                    atoms.iter().map(|&(x, k)| (Point::Real(x), k as f64 / total as f64)).collect(),
                ).unwrap();
                let f = |p: &Point<f64>| match p { Point::Real(x) => x.sin(), _ => 0.0 };
                let g = |p: &Point<f64>| match p { Point::Real(x) => x * 0.5 + 1.0, _ => 0.0 };
                let lhs = m.integrate(|p| 2.0 * f(p) + g(p)).unwrap();
                let rhs = 2.0 * m.integrate(f).unwrap() + m.integrate(g).unwrap();
                prop_assert!((lhs - rhs).abs() < 1e-10);
            }

            #[test]
            fn real_line_metric_axioms(
                x in -100.0..100.0f64,
                y in -100.0..100.0f64,
                z in -100.0..100.0f64,
                bounded in proptest::bool::ANY,
            ) {
                let space = GroundSpace::real_line(if bounded {
                    MetricMode::Bounded
                } else {
                    MetricMode::Raw
                });
                let d = |a: f64, b: f64| space.distance(&Point::Real(a), &Point::Real(b)).unwrap();
                prop_assert_eq!(d(x, x), 0.0);
                prop_assert_eq!(d(x, y), d(y, x));
                prop_assert!(d(x, z) <= d(x, y) + d(y, z) + 1e-12);
                if bounded {
                    prop_assert!(d(x, y) <= 1.0);
                }
            }

            #[test]
            fn canonical_atoms_are_distinct_and_normalized(
                raw in prop::collection::vec(((-1.0..1.0f64), 0.0..1.0f64), 1..12),
            ) {
                let total: f64 = raw.iter().map(|(_, w)| w).sum();
                prop_assume!(total > 1e-6);
                let m = DiscreteMeasure::new(
                    raw.iter().map(|&(x, w)| (Point::Real(x), w / total)).collect(),
                ).unwrap();
                for pair in m.atoms().windows(2) {
                    match (&pair[0].0, &pair[1].0) {
                        (Point::Real(a), Point::Real(b)) => prop_assert!(b - a > 1e-12),
                        _ => unreachable!(),
                    }
                }
                let mass: f64 = m.atoms().iter().map(|(_, w)| w).sum();
                prop_assert!((mass - 1.0).abs() <= 1e-12);
            }

            #[test]
            fn psi_moment_at_least_one(atoms in atoms_strategy()) {
                let total: u32 = atoms.iter().map(|(_, k)| *k).sum();
                let m = DiscreteMeasure::new(
                    atoms.iter().map(|&(x, k)| (Point::Real(x), k as f64 / total as f64)).collect(),
                ).unwrap();
                let space = GroundSpace::real_line(MetricMode::Raw);
                let psi = Gauge::polynomial(0.5, 1.5).unwrap();
                prop_assert!(psi_moment(&m, &psi, &space).unwrap() >= 1.0 - 1e-12);
            }
        }
    }
}
