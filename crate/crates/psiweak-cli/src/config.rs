//! Experiment configuration: a single JSON document with one section per
//! ingredient. Unknown keys are rejected and the parsed document is echoed
//! verbatim into each run's metadata, so a run can be reproduced from its
//! own output.

use serde::{Deserialize, Serialize};

use psiweak::measure::{DiscreteMeasure, Gauge, GroundSpace, MetricMode, Point};
use psiweak::process::{PathGenerator, Perturbation};
use psiweak::risk::{Modulus, ScoringFunction, Statistic};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Metrics,
    Consistency,
    Gc,
    Robustness,
    Elicitability,
}

impl CommandKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommandKind::Metrics => "metrics",
            CommandKind::Consistency => "consistency",
            CommandKind::Gc => "gc",
            CommandKind::Robustness => "robustness",
            CommandKind::Elicitability => "elicitability",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Real(f64),
    Label(String),
}

pub type MeasureSpec = Vec<(PointSpec, f64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    RealLine,
    Finite {
        labels: Vec<String>,
        coords: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table: Option<Vec<Vec<f64>>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GaugeSpec {
    One,
    Polynomial { scale: f64, exponent: f64 },
    Table { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    Iid {
        law: MeasureSpec,
    },
    Markov {
        transition: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        initial: Option<Vec<f64>>,
    },
    Exchangeable {
        components: Vec<MeasureSpec>,
        weights: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StatisticSpec {
    Mean,
    Quantile { level: f64 },
    ExpectedShortfall { level: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PerturbationSpec {
    Identity,
    Shift,
    Permutation {
        image: Vec<usize>,
        quasi_invariant: bool,
    },
    Affine {
        mul: f64,
        add: f64,
        quasi_invariant: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModulusSpec {
    Identity,
    Sqrt,
    Power { exponent: f64 },
    Table { points: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScoringSpec {
    Squared,
    /// Pinball score weighted by the configured gauge.
    PinballPsi { level: f64 },
}

/// The whole experiment document. `seed` is mandatory: every random stream
/// of a run derives from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub seed: u64,
    pub metric_mode: MetricModeSpec,
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statistic: Option<StatisticSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<ModulusSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scoring: Option<ScoringSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_schedule: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<u64>,
    /// The two inline measures of the `metrics` command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measures: Option<(MeasureSpec, MeasureSpec)>,
    /// Random-pair count for the `elicitability` command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricModeSpec {
    Raw,
    Bounded,
}

impl From<MetricModeSpec> for MetricMode {
    fn from(m: MetricModeSpec) -> MetricMode {
        match m {
            MetricModeSpec::Raw => MetricMode::Raw,
            MetricModeSpec::Bounded => MetricMode::Bounded,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config parse: {e}")))
    }

    pub fn build_space(&self) -> Result<GroundSpace<f64>, CliError> {
        let mode: MetricMode = self.metric_mode.into();
        match &self.space {
            SpaceSpec::RealLine => Ok(GroundSpace::real_line(mode)),
            SpaceSpec::Finite {
                labels,
                coords,
                table,
            } => match table {
                Some(t) => {
                    GroundSpace::finite_with_table(labels.clone(), coords.clone(), t.clone(), mode)
                        .map_err(|e| CliError::Config(format!("space: {e}")))
                }
                None => GroundSpace::finite(labels.clone(), coords.clone(), mode)
                    .map_err(|e| CliError::Config(format!("space: {e}"))),
            },
        }
    }

    pub fn build_measure(
        &self,
        spec: &MeasureSpec,
        space: &GroundSpace<f64>,
    ) -> Result<DiscreteMeasure<f64>, CliError> {
        let mut atoms = Vec::with_capacity(spec.len());
        for (p, w) in spec {
            let point = match (p, space.is_real_line()) {
                (PointSpec::Real(x), true) => Point::Real(*x),
                (PointSpec::Label(l), false) => space
                    .parse_point(l)
                    .map_err(|e| CliError::Config(format!("measure point: {e}")))?,
                (PointSpec::Real(x), false) => {
                    return Err(CliError::Unsupported(format!(
                        "numeric point {x} in a measure on a finite labeled space"
                    )))
                }
                (PointSpec::Label(l), true) => {
                    return Err(CliError::Unsupported(format!(
                        "label point {l:?} in a measure on the real line"
                    )))
                }
            };
            atoms.push((point, *w));
        }
        DiscreteMeasure::new(atoms).map_err(|e| CliError::Config(format!("measure: {e}")))
    }

    pub fn build_gauge(&self) -> Result<Gauge<f64>, CliError> {
        match self.gauge.as_ref() {
            None | Some(GaugeSpec::One) => Ok(Gauge::one()),
            Some(GaugeSpec::Polynomial { scale, exponent }) => Gauge::polynomial(*scale, *exponent)
                .map_err(|e| CliError::Config(format!("gauge: {e}"))),
            Some(GaugeSpec::Table { values }) => {
                Gauge::table(values.clone()).map_err(|e| CliError::Config(format!("gauge: {e}")))
            }
        }
    }

    pub fn build_generator(
        &self,
        space: &GroundSpace<f64>,
    ) -> Result<PathGenerator<f64>, CliError> {
        let spec = self
            .generator
            .as_ref()
            .ok_or_else(|| CliError::Unsupported("this command needs a generator".into()))?;
        match spec {
            GeneratorSpec::Iid { law } => {
                let law = self.build_measure(law, space)?;
                PathGenerator::iid(space.clone(), law)
                    .map_err(|e| CliError::Config(format!("generator: {e}")))
            }
            GeneratorSpec::Markov {
                transition,
                initial,
            } => {
                if space.is_real_line() {
                    return Err(CliError::Unsupported(
                        "markov generators need a finite labeled space".into(),
                    ));
                }
                PathGenerator::markov(space.clone(), transition.clone(), initial.clone())
                    .map_err(|e| CliError::Config(format!("generator: {e}")))
            }
            GeneratorSpec::Exchangeable {
                components,
                weights,
            } => {
                let comps = components
                    .iter()
                    .map(|c| self.build_measure(c, space))
                    .collect::<Result<Vec<_>, _>>()?;
                PathGenerator::exchangeable(space.clone(), comps, weights.clone())
                    .map_err(|e| CliError::Config(format!("generator: {e}")))
            }
        }
    }

    pub fn build_statistic(&self) -> Result<Statistic<f64>, CliError> {
        let spec = self
            .statistic
            .as_ref()
            .ok_or_else(|| CliError::Unsupported("this command needs a statistic".into()))?;
        match spec {
            StatisticSpec::Mean => Ok(Statistic::mean()),
            StatisticSpec::Quantile { level } => Statistic::quantile(*level)
                .map_err(|e| CliError::Config(format!("statistic: {e}"))),
            StatisticSpec::ExpectedShortfall { level } => Statistic::expected_shortfall(*level)
                .map_err(|e| CliError::Config(format!("statistic: {e}"))),
        }
    }

    pub fn build_perturbation(&self) -> Result<Perturbation<f64>, CliError> {
        let spec = self
            .perturbation
            .as_ref()
            .ok_or_else(|| CliError::Unsupported("this command needs a perturbation".into()))?;
        match spec {
            PerturbationSpec::Identity => Ok(Perturbation::identity()),
            PerturbationSpec::Shift => Ok(Perturbation::shift()),
            PerturbationSpec::Permutation {
                image,
                quasi_invariant,
            } => Perturbation::permutation(image.clone(), *quasi_invariant)
                .map_err(|e| CliError::Config(format!("perturbation: {e}"))),
            PerturbationSpec::Affine {
                mul,
                add,
                quasi_invariant,
            } => Perturbation::affine(*mul, *add, *quasi_invariant)
                .map_err(|e| CliError::Config(format!("perturbation: {e}"))),
        }
    }

    pub fn build_kappa(&self) -> Result<Modulus<f64>, CliError> {
        let spec = self
            .kappa
            .as_ref()
            .ok_or_else(|| CliError::Unsupported("this command needs a kappa modulus".into()))?;
        match spec {
            ModulusSpec::Identity => Ok(Modulus::identity()),
            ModulusSpec::Sqrt => Ok(Modulus::sqrt()),
            ModulusSpec::Power { exponent } => {
                Modulus::power(*exponent).map_err(|e| CliError::Config(format!("kappa: {e}")))
            }
            ModulusSpec::Table { points } => Modulus::table(points.clone())
                .map_err(|e| CliError::Config(format!("kappa: {e}"))),
        }
    }

    pub fn build_scoring(&self) -> Result<ScoringFunction<f64>, CliError> {
        let spec = self
            .scoring
            .as_ref()
            .ok_or_else(|| CliError::Unsupported("this command needs a scoring function".into()))?;
        match spec {
            ScoringSpec::Squared => Ok(ScoringFunction::squared()),
            ScoringSpec::PinballPsi { level } => {
                ScoringFunction::pinball_psi(*level, self.build_gauge()?)
                    .map_err(|e| CliError::Config(format!("scoring: {e}")))
            }
        }
    }

    pub fn n_schedule(&self) -> Result<&[usize], CliError> {
        self.n_schedule
            .as_deref()
            .ok_or_else(|| CliError::Unsupported("this command needs an n_schedule".into()))
    }

    pub fn seeds(&self) -> Result<u64, CliError> {
        self.seeds
            .ok_or_else(|| CliError::Unsupported("this command needs a seeds count".into()))
    }

    pub fn reps(&self) -> Result<u64, CliError> {
        self.reps
            .ok_or_else(|| CliError::Unsupported("this command needs a reps count".into()))
    }
}
