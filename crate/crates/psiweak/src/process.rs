//! Stationary observation sequences with known directing measures.
//!
//! Three generator classes are provided, chosen so that the directing
//! measure (the limit of the empirical process, equivalently the
//! conditional law of one observation given the shift-invariant
//! information) is available in closed form:
//!
//! * i.i.d. draws from a fixed law `μ` — the directing measure is `μ`;
//! * an irreducible finite Markov chain started from its stationary law —
//!   the chain is ergodic, so the directing measure is the stationary law;
//! * an exchangeable mixture: one mixing component is drawn per path and
//!   the observations are i.i.d. from it — the directing measure is the
//!   realized component.
//!
//! Perturbations act pathwise (identity, shift, coordinate bijections) and
//! carry an explicit pushforward rule for directing measures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::measure::{DiscreteMeasure, GroundSpace, MeasureError, Point};
use crate::scalar::{real, Scalar};

#[derive(Debug, Error)]
pub enum ProcessError {
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("non-ergodic chain: supply component decomposition")]
    NonErgodic,
    #[error("invalid length: {0}")]
    InvalidLength(String),
    #[error("path was not produced by this generator (descriptor mismatch)")]
    PathMismatch,
    #[error("unsupported perturbation: {0}; supported pairs: identity/shift with any generator, finite-space permutations with finite-space generators, affine maps with real-line generators")]
    Unsupported(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Counter-based seed: a master seed plus a stream index. Distinct streams
/// of the same master are independent ChaCha streams, so replications can
/// be generated in parallel or serially with identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathSeed {
    pub master: u64,
    pub stream: u64,
}

impl PathSeed {
    pub fn new(master: u64, stream: u64) -> Self {
        PathSeed { master, stream }
    }

    pub fn master(master: u64) -> Self {
        PathSeed { master, stream: 0 }
    }

    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

/// Which generator class produced a directing measure; determines the
/// pushforward rules that apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceClass {
    Iid,
    MarkovErgodic,
    ExchangeableComponent(usize),
}

/// A realized directing measure `υ(ω, ·)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectingMeasure<S: Scalar> {
    pub measure: DiscreteMeasure<S>,
    pub source: SourceClass,
}

/// One simulated observation path.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath<S: Scalar> {
    pub points: Vec<Point<S>>,
    pub descriptor: String,
    pub seed: PathSeed,
    /// Realized mixture component (exchangeable generators only).
    pub component: Option<usize>,
}

impl<S: Scalar> SamplePath<S> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Empirical measure of the first `n` observations.
    pub fn prefix_empirical(&self, n: usize) -> Result<DiscreteMeasure<S>, ProcessError> {
        if n == 0 || n > self.points.len() {
            return Err(ProcessError::InvalidLength(format!(
                "prefix {n} of a path of length {}",
                self.points.len()
            )));
        }
        Ok(DiscreteMeasure::make_empirical(&self.points[..n])?)
    }

    /// Dump the path as one observation per line, for external inspection.
    pub fn to_lines(&self, space: &GroundSpace<S>) -> Result<String, ProcessError> {
        let mut out = String::new();
        for p in &self.points {
            out.push_str(&space.format_point(p)?);
            out.push('\n');
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
enum Model<S: Scalar> {
    Iid {
        law: DiscreteMeasure<S>,
    },
    Markov {
        transition: Vec<Vec<S>>,
        initial: Vec<S>,
        irreducible: bool,
    },
    Exchangeable {
        components: Vec<DiscreteMeasure<S>>,
        weights: Vec<S>,
    },
}

/// Immutable descriptor of a stationary sequence model.
#[derive(Debug, Clone)]
pub struct PathGenerator<S: Scalar> {
    space: GroundSpace<S>,
    model: Model<S>,
    descriptor: String,
}

impl<S: Scalar> PathGenerator<S> {
    pub fn iid(space: GroundSpace<S>, law: DiscreteMeasure<S>) -> Result<Self, ProcessError> {
        law.check_space(&space)?;
        let descriptor = format!("iid(support={})", law.support_size());
        Ok(PathGenerator {
            space,
            model: Model::Iid { law },
            descriptor,
        })
    }

    /// Markov chain over the points of a finite space.
    ///
    /// `initial` defaults to the unique stationary law, which requires an
    /// irreducible transition matrix. A reducible chain is accepted only
    /// when a stationary `initial` is supplied explicitly; such a chain
    /// still generates stationary paths but has no directing measure here.
    pub fn markov(
        space: GroundSpace<S>,
        transition: Vec<Vec<S>>,
        initial: Option<Vec<S>>,
    ) -> Result<Self, ProcessError> {
        let k = match space.point_count() {
            Some(k) => k,
            None => {
                return Err(ProcessError::InvalidGenerator(
                    "markov generator needs a finite ground space".into(),
                ))
            }
        };
        if transition.len() != k || transition.iter().any(|row| row.len() != k) {
            return Err(ProcessError::InvalidGenerator(format!(
                "transition matrix must be {k}x{k}"
            )));
        }
        let tol = S::merge_tol();
        for (i, row) in transition.iter().enumerate() {
            let mut sum = S::zero();
            for &p in row {
                if !p.is_finite() || p < -tol {
                    return Err(ProcessError::InvalidGenerator(format!(
                        "row {i} has a negative or non-finite entry"
                    )));
                }
                sum = sum + p;
            }
            if (sum - S::one()).abs() > real::<S>(1e-10) {
                return Err(ProcessError::InvalidGenerator(format!(
                    "row {i} sums to {sum}"
                )));
            }
        }
        let irreducible = strongly_connected(&transition);
        let initial = match initial {
            Some(init) => {
                if init.len() != k {
                    return Err(ProcessError::InvalidGenerator(
                        "initial distribution has the wrong length".into(),
                    ));
                }
                let mut sum = S::zero();
                for &p in &init {
                    if !p.is_finite() || p < -tol {
                        return Err(ProcessError::InvalidGenerator(
                            "initial distribution has a negative entry".into(),
                        ));
                    }
                    sum = sum + p;
                }
                if (sum - S::one()).abs() > real::<S>(1e-10) {
                    return Err(ProcessError::InvalidGenerator(format!(
                        "initial distribution sums to {sum}"
                    )));
                }
                // Stationarity: π̄P = π̄ within tolerance.
                for j in 0..k {
                    let mut v = S::zero();
                    for i in 0..k {
                        v = v + init[i] * transition[i][j];
                    }
                    if (v - init[j]).abs() > S::stationarity_tol() {
                        return Err(ProcessError::InvalidGenerator(format!(
                            "initial distribution is not stationary at state {j}"
                        )));
                    }
                }
                init
            }
            None => {
                if !irreducible {
                    return Err(ProcessError::NonErgodic);
                }
                stationary_distribution(&transition)?
            }
        };
        let descriptor = format!("markov(k={k})");
        Ok(PathGenerator {
            space,
            model: Model::Markov {
                transition,
                initial,
                irreducible,
            },
            descriptor,
        })
    }

    pub fn exchangeable(
        space: GroundSpace<S>,
        components: Vec<DiscreteMeasure<S>>,
        weights: Vec<S>,
    ) -> Result<Self, ProcessError> {
        if components.is_empty() || components.len() != weights.len() {
            return Err(ProcessError::InvalidGenerator(format!(
                "{} components with {} mixing weights",
                components.len(),
                weights.len()
            )));
        }
        for c in &components {
            c.check_space(&space)?;
        }
        let tol = S::merge_tol();
        let mut sum = S::zero();
        for &w in &weights {
            if !w.is_finite() || w < -tol {
                return Err(ProcessError::InvalidGenerator(
                    "negative mixing weight".into(),
                ));
            }
            sum = sum + w;
        }
        if (sum - S::one()).abs() > tol {
            return Err(ProcessError::InvalidGenerator(format!(
                "mixing weights sum to {sum}"
            )));
        }
        let descriptor = format!("exchangeable(components={})", components.len());
        Ok(PathGenerator {
            space,
            model: Model::Exchangeable {
                components,
                weights,
            },
            descriptor,
        })
    }

    pub fn space(&self) -> &GroundSpace<S> {
        &self.space
    }

    pub fn describe(&self) -> &str {
        &self.descriptor
    }

    pub fn is_iid(&self) -> bool {
        matches!(self.model, Model::Iid { .. })
    }

    /// Generate a path of length `n`; deterministic in `(self, n, seed)`.
    pub fn generate(&self, n: usize, seed: PathSeed) -> Result<SamplePath<S>, ProcessError> {
        if n == 0 {
            return Err(ProcessError::InvalidLength("path length 0".into()));
        }
        let mut rng = seed.rng();
        let mut points = Vec::with_capacity(n);
        let mut component = None;
        match &self.model {
            Model::Iid { law } => {
                for _ in 0..n {
                    points.push(sample_atom(law, &mut rng));
                }
            }
            Model::Markov {
                transition,
                initial,
                ..
            } => {
                let mut state = sample_index(initial, &mut rng);
                points.push(Point::Label(state));
                for _ in 1..n {
                    state = sample_index(&transition[state], &mut rng);
                    points.push(Point::Label(state));
                }
            }
            Model::Exchangeable {
                components,
                weights,
            } => {
                let comp = sample_index(weights, &mut rng);
                component = Some(comp);
                for _ in 0..n {
                    points.push(sample_atom(&components[comp], &mut rng));
                }
            }
        }
        Ok(SamplePath {
            points,
            descriptor: self.descriptor.clone(),
            seed,
            component,
        })
    }

    /// The analytic directing measure for a path produced by this
    /// generator.
    pub fn directing_measure(
        &self,
        path: &SamplePath<S>,
    ) -> Result<DirectingMeasure<S>, ProcessError> {
        if path.descriptor != self.descriptor {
            return Err(ProcessError::PathMismatch);
        }
        match &self.model {
            Model::Iid { law } => Ok(DirectingMeasure {
                measure: law.clone(),
                source: SourceClass::Iid,
            }),
            Model::Markov {
                initial,
                irreducible,
                ..
            } => {
                if !irreducible {
                    return Err(ProcessError::NonErgodic);
                }
                Ok(DirectingMeasure {
                    measure: stationary_measure(initial)?,
                    source: SourceClass::MarkovErgodic,
                })
            }
            Model::Exchangeable { components, .. } => {
                let comp = path.component.ok_or(ProcessError::PathMismatch)?;
                Ok(DirectingMeasure {
                    measure: components[comp].clone(),
                    source: SourceClass::ExchangeableComponent(comp),
                })
            }
        }
    }

    /// Sample a directing measure directly, without materializing a path.
    /// Consumes randomness exactly like the start of [`Self::generate`], so
    /// for a given seed it matches `directing_measure(generate(...))`.
    pub fn sample_directing(&self, seed: PathSeed) -> Result<DirectingMeasure<S>, ProcessError> {
        match &self.model {
            Model::Iid { law } => Ok(DirectingMeasure {
                measure: law.clone(),
                source: SourceClass::Iid,
            }),
            Model::Markov {
                initial,
                irreducible,
                ..
            } => {
                if !irreducible {
                    return Err(ProcessError::NonErgodic);
                }
                Ok(DirectingMeasure {
                    measure: stationary_measure(initial)?,
                    source: SourceClass::MarkovErgodic,
                })
            }
            Model::Exchangeable {
                components,
                weights,
            } => {
                let mut rng = seed.rng();
                let comp = sample_index(weights, &mut rng);
                Ok(DirectingMeasure {
                    measure: components[comp].clone(),
                    source: SourceClass::ExchangeableComponent(comp),
                })
            }
        }
    }
}

fn stationary_measure<S: Scalar>(initial: &[S]) -> Result<DiscreteMeasure<S>, ProcessError> {
    Ok(DiscreteMeasure::new(
        initial
            .iter()
            .enumerate()
            .map(|(i, &w)| (Point::Label(i), w))
            .collect(),
    )?)
}

fn sample_atom<S: Scalar, R: Rng>(law: &DiscreteMeasure<S>, rng: &mut R) -> Point<S> {
    let u: S = real(rng.gen::<f64>());
    let mut cum = S::zero();
    for (p, w) in law.atoms() {
        cum = cum + *w;
        if u < cum {
            return *p;
        }
    }
    law.atoms().last().expect("measures are nonempty").0
}

fn sample_index<S: Scalar, R: Rng>(weights: &[S], rng: &mut R) -> usize {
    let u: S = real(rng.gen::<f64>());
    let mut cum = S::zero();
    for (i, w) in weights.iter().enumerate() {
        cum = cum + *w;
        if u < cum {
            return i;
        }
    }
    weights.len() - 1
}

/// Strong connectivity of the directed graph of positive transitions.
fn strongly_connected<S: Scalar>(transition: &[Vec<S>]) -> bool {
    let k = transition.len();
    let reach = |forward: bool| -> usize {
        let mut seen = vec![false; k];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for u in 0..k {
                let p = if forward {
                    transition[v][u]
                } else {
                    transition[u][v]
                };
                if p > S::zero() && !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count
    };
    reach(true) == k && reach(false) == k
}

/// Unique stationary law of an irreducible chain, by solving
/// `π̄ᵀ(P - I) = 0, Σπ̄ = 1` with dense Gaussian elimination.
fn stationary_distribution<S: Scalar>(transition: &[Vec<S>]) -> Result<Vec<S>, ProcessError> {
    let k = transition.len();
    let mut a = vec![vec![S::zero(); k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = transition[j][i] - if i == j { S::one() } else { S::zero() };
        }
    }
    // Replace the last equation by the normalization Σπ̄ = 1.
    for j in 0..k {
        a[k - 1][j] = S::one();
    }
    a[k - 1][k] = S::one();

    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty range");
        if a[pivot][col].abs() < real::<S>(1e-13) {
            return Err(ProcessError::NonErgodic);
        }
        a.swap(col, pivot);
        for row in 0..k {
            if row != col {
                let f = a[row][col] / a[col][col];
                if f != S::zero() {
                    for j in col..=k {
                        let delta = f * a[col][j];
                        a[row][j] = a[row][j] - delta;
                    }
                }
            }
        }
    }
    let mut pi = vec![S::zero(); k];
    for i in 0..k {
        pi[i] = a[i][k] / a[i][i];
        if !pi[i].is_finite() || pi[i] < -S::stationarity_tol() {
            return Err(ProcessError::NonErgodic);
        }
        pi[i] = pi[i].max(S::zero());
    }
    let total: S = pi.iter().copied().sum();
    for p in pi.iter_mut() {
        *p = *p / total;
    }
    Ok(pi)
}

/// A measurable endomorphism of path space with a declared
/// quasi-invariance flag (metadata, not verified) and a directing-measure
/// pushforward rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation<S: Scalar> {
    pub kind: PerturbationKind<S>,
    pub quasi_invariant: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PerturbationKind<S> {
    Identity,
    /// Drop the first coordinate.
    Shift,
    /// Coordinate-wise bijection of a finite ground space; `image[i]` is the
    /// index the `i`-th point maps to.
    Permutation(Vec<usize>),
    /// Coordinate-wise affine bijection `x ↦ mul·x + add` of the real line.
    Affine { mul: S, add: S },
}

impl<S: Scalar> Perturbation<S> {
    pub fn identity() -> Self {
        Perturbation {
            kind: PerturbationKind::Identity,
            quasi_invariant: true,
        }
    }

    /// The shift preserves the law of any stationary sequence.
    pub fn shift() -> Self {
        Perturbation {
            kind: PerturbationKind::Shift,
            quasi_invariant: true,
        }
    }

    pub fn permutation(image: Vec<usize>, quasi_invariant: bool) -> Result<Self, ProcessError> {
        let k = image.len();
        let mut seen = vec![false; k];
        for &j in &image {
            if j >= k || seen[j] {
                return Err(ProcessError::InvalidGenerator(
                    "permutation image is not a bijection".into(),
                ));
            }
            seen[j] = true;
        }
        Ok(Perturbation {
            kind: PerturbationKind::Permutation(image),
            quasi_invariant,
        })
    }

    pub fn affine(mul: S, add: S, quasi_invariant: bool) -> Result<Self, ProcessError> {
        if !mul.is_finite() || !add.is_finite() || mul == S::zero() {
            return Err(ProcessError::InvalidGenerator(
                "affine map must have finite coefficients and mul != 0".into(),
            ));
        }
        Ok(Perturbation {
            kind: PerturbationKind::Affine { mul, add },
            quasi_invariant,
        })
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            PerturbationKind::Identity => "identity".into(),
            PerturbationKind::Shift => "shift".into(),
            PerturbationKind::Permutation(img) => format!("permutation{img:?}"),
            PerturbationKind::Affine { mul, add } => format!("affine({mul}x+{add})"),
        }
    }

    /// Input path length needed to yield `n` observations after applying
    /// this perturbation (the shift consumes one).
    pub fn required_input_length(&self, n: usize) -> usize {
        match self.kind {
            PerturbationKind::Shift => n + 1,
            _ => n,
        }
    }

    /// Pathwise action.
    pub fn apply(
        &self,
        path: &SamplePath<S>,
        space: &GroundSpace<S>,
    ) -> Result<SamplePath<S>, ProcessError> {
        let points = match &self.kind {
            PerturbationKind::Identity => path.points.clone(),
            PerturbationKind::Shift => {
                if path.points.len() < 2 {
                    return Err(ProcessError::InvalidLength(
                        "shift of a length-1 path".into(),
                    ));
                }
                path.points[1..].to_vec()
            }
            PerturbationKind::Permutation(img) => {
                if space.point_count() != Some(img.len()) {
                    return Err(ProcessError::Unsupported(format!(
                        "permutation of {} points on {:?}",
                        img.len(),
                        space.mode()
                    )));
                }
                let mut out = Vec::with_capacity(path.points.len());
                for p in &path.points {
                    match p {
                        Point::Label(i) if *i < img.len() => out.push(Point::Label(img[*i])),
                        other => {
                            return Err(ProcessError::Unsupported(format!(
                                "permutation applied to point {other:?}"
                            )))
                        }
                    }
                }
                out
            }
            PerturbationKind::Affine { mul, add } => {
                let mut out = Vec::with_capacity(path.points.len());
                for p in &path.points {
                    match p {
                        Point::Real(x) => out.push(Point::Real(*mul * *x + *add)),
                        other => {
                            return Err(ProcessError::Unsupported(format!(
                                "affine map applied to point {other:?}"
                            )))
                        }
                    }
                }
                out
            }
        };
        Ok(SamplePath {
            points,
            descriptor: format!("{}|{}", path.descriptor, self.describe()),
            seed: path.seed,
            component: path.component,
        })
    }

    /// Directing-measure pushforward: identity and shift leave the
    /// directing measure unchanged (it is shift-invariant information);
    /// coordinate maps push it forward as an image measure.
    pub fn pushforward(
        &self,
        upsilon: &DirectingMeasure<S>,
        space: &GroundSpace<S>,
    ) -> Result<DirectingMeasure<S>, ProcessError> {
        match &self.kind {
            PerturbationKind::Identity | PerturbationKind::Shift => Ok(upsilon.clone()),
            PerturbationKind::Permutation(img) => {
                if space.point_count() != Some(img.len()) {
                    return Err(ProcessError::Unsupported(format!(
                        "permutation of {} points on this space",
                        img.len()
                    )));
                }
                let mut atoms = Vec::with_capacity(upsilon.measure.support_size());
                for (p, w) in upsilon.measure.atoms() {
                    match p {
                        Point::Label(i) if *i < img.len() => atoms.push((Point::Label(img[*i]), *w)),
                        other => {
                            return Err(ProcessError::Unsupported(format!(
                                "permutation pushforward of atom {other:?}"
                            )))
                        }
                    }
                }
                Ok(DirectingMeasure {
                    measure: DiscreteMeasure::new(atoms)?,
                    source: upsilon.source,
                })
            }
            PerturbationKind::Affine { mul, add } => {
                let mut atoms = Vec::with_capacity(upsilon.measure.support_size());
                for (p, w) in upsilon.measure.atoms() {
                    match p {
                        Point::Real(x) => atoms.push((Point::Real(*mul * *x + *add), *w)),
                        other => {
                            return Err(ProcessError::Unsupported(format!(
                                "affine pushforward of atom {other:?}"
                            )))
                        }
                    }
                }
                Ok(DirectingMeasure {
                    measure: DiscreteMeasure::new(atoms)?,
                    source: upsilon.source,
                })
            }
        }
    }
}

/// `(1/n) Σ_{i ≤ n} f(ξᵢ)`.
pub fn birkhoff_average<S: Scalar, F>(
    path: &SamplePath<S>,
    f: F,
    n: usize,
) -> Result<S, ProcessError>
where
    F: Fn(&Point<S>) -> S,
{
    if n == 0 || n > path.points.len() {
        return Err(ProcessError::InvalidLength(format!(
            "prefix {n} of a path of length {}",
            path.points.len()
        )));
    }
    let sum = path.points[..n]
        .iter()
        .fold(S::zero(), |acc, p| acc + f(p));
    Ok(sum / real::<S>(n as f64))
}
