//! Experiment configuration files (TOML).
//!
//! ```toml
//! [run]
//! experiment = "one-arm"
//! seed = 7
//! trials = 1000
//! workers = 1
//! out = "one_arm.csv"
//!
//! [graph]
//! family = "triangular-lattice-disk"
//! size = 16
//!
//! [one-arm]
//! radii = [4, 8, 16]
//! p = 0.5
//! ```
//!
//! `[graph]` either names a generator (`family`, `size`, `degree`, `width`,
//! `seed`) or a file (`path`). Unknown keys are rejected.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::error::HarnessError;
use crate::generators::{Family, GeneratorSpec};
use crate::network::GraphFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    OneArm,
    ArcCross,
    MacroClusters,
    PcSweep,
    CrossTiling,
    Hvoronoi,
    Resistance,
}

impl ExperimentKind {
    pub fn tag(self) -> &'static str {
        match self {
            ExperimentKind::OneArm => "one-arm",
            ExperimentKind::ArcCross => "arc-cross",
            ExperimentKind::MacroClusters => "macro-clusters",
            ExperimentKind::PcSweep => "pc-sweep",
            ExperimentKind::CrossTiling => "cross-tiling",
            ExperimentKind::Hvoronoi => "hvoronoi",
            ExperimentKind::Resistance => "resistance",
        }
    }
}

fn default_trials() -> u64 {
    1000
}

fn default_workers() -> usize {
    1
}

fn half() -> f64 {
    0.5
}

fn default_bootstrap() -> usize {
    200
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl GraphSection {
    pub fn from_spec(spec: &GeneratorSpec) -> Self {
        Self {
            path: None,
            family: Some(spec.family),
            size: Some(spec.size),
            degree: Some(spec.degree),
            width: spec.width,
            seed: Some(spec.seed),
        }
    }

    pub fn from_path(path: impl Into<PathBuf>) -> Self {
        Self {
            path: Some(path.into()),
            ..Self::default()
        }
    }

    /// Generator spec with `size` overriding the configured size.
    pub fn spec_with_size(&self, size: Option<usize>) -> Result<GeneratorSpec, HarnessError> {
        let family = self
            .family
            .ok_or_else(|| HarnessError::Config("graph.family: required unless graph.path is set".into()))?;
        let size = size
            .or(self.size)
            .ok_or_else(|| HarnessError::Config("graph.size: required for generated graphs".into()))?;
        let mut spec = GeneratorSpec::new(family, size);
        if let Some(d) = self.degree {
            spec.degree = d;
        }
        spec.width = self.width;
        spec.seed = self.seed.unwrap_or(0);
        Ok(spec)
    }

    pub fn load(&self) -> Result<GraphFile, HarnessError> {
        match (&self.path, self.family) {
            (Some(_), Some(_)) => Err(HarnessError::Config(
                "graph: set either path or family, not both".into(),
            )),
            (Some(p), None) => {
                let text = std::fs::read_to_string(p).map_err(|e| HarnessError::Io(format!("{}: {e}", p.display())))?;
                Ok(GraphFile::parse(&text)?)
            }
            (None, _) => Ok(self.spec_with_size(None)?.generate()?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneArmParams {
    #[serde(default)]
    pub center: usize,
    pub radii: Vec<usize>,
    #[serde(default = "half")]
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcCrossParams {
    #[serde(default)]
    pub center: usize,
    pub r: usize,
    /// Start indices of the four arcs on the ball's boundary cycle;
    /// quarters when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arcs: Option<[usize; 4]>,
    #[serde(default = "half")]
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MacroClusterParams {
    #[serde(default)]
    pub center: usize,
    pub r: usize,
    #[serde(default = "half")]
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PcSweepParams {
    pub sizes: Vec<usize>,
    pub p_grid: Vec<f64>,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossTilingParams {
    /// Tiling JSON; when absent the tiling of `[graph]` is built.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tiling: Option<PathBuf>,
    #[serde(default = "half")]
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HvoronoiParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub lambdas: Vec<f64>,
    #[serde(default = "half")]
    pub p: f64,
    /// `uniform`, `const:<k>` or `wave:<amp>:<freq>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    /// Fixed truncation radius; the default rule when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResistanceParams {
    #[serde(default)]
    pub center: usize,
    pub r_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub run: RunSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSection>,
    #[serde(rename = "one-arm", default, skip_serializing_if = "Option::is_none")]
    pub one_arm: Option<OneArmParams>,
    #[serde(rename = "arc-cross", default, skip_serializing_if = "Option::is_none")]
    pub arc_cross: Option<ArcCrossParams>,
    #[serde(rename = "macro-clusters", default, skip_serializing_if = "Option::is_none")]
    pub macro_clusters: Option<MacroClusterParams>,
    #[serde(rename = "pc-sweep", default, skip_serializing_if = "Option::is_none")]
    pub pc_sweep: Option<PcSweepParams>,
    #[serde(rename = "cross-tiling", default, skip_serializing_if = "Option::is_none")]
    pub cross_tiling: Option<CrossTilingParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hvoronoi: Option<HvoronoiParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resistance: Option<ResistanceParams>,
}

fn check_p(field: &str, p: f64) -> Result<(), HarnessError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(HarnessError::Config(format!("{field}: {p} is not in [0, 1]")))
    }
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, seed: u64, trials: u64) -> Self {
        Self {
            run: RunSection {
                experiment: kind,
                seed,
                trials,
                workers: 1,
                out: None,
            },
            graph: None,
            one_arm: None,
            arc_cross: None,
            macro_clusters: None,
            pc_sweep: None,
            cross_tiling: None,
            hvoronoi: None,
            resistance: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    fn missing(&self) -> HarnessError {
        let tag = self.run.experiment.tag();
        HarnessError::Config(format!("[{tag}]: section required by run.experiment = \"{tag}\""))
    }

    /// Checks cross-field constraints that serde cannot express.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.run.trials == 0 && self.run.experiment != ExperimentKind::Resistance {
            return Err(HarnessError::Config("run.trials: must be at least 1".into()));
        }
        if self.run.workers == 0 {
            return Err(HarnessError::Config("run.workers: must be at least 1".into()));
        }
        let needs_graph = !matches!(self.run.experiment, ExperimentKind::Hvoronoi)
            && !(self.run.experiment == ExperimentKind::CrossTiling
                && self.cross_tiling.as_ref().is_some_and(|c| c.tiling.is_some()));
        if needs_graph && self.graph.is_none() {
            return Err(HarnessError::Config("[graph]: section required".into()));
        }
        match self.run.experiment {
            ExperimentKind::OneArm => {
                let p = self.one_arm.as_ref().ok_or_else(|| self.missing())?;
                check_p("one-arm.p", p.p)?;
                if p.radii.is_empty() {
                    return Err(HarnessError::Config("one-arm.radii: must be nonempty".into()));
                }
            }
            ExperimentKind::ArcCross => check_p("arc-cross.p", self.arc_cross.as_ref().ok_or_else(|| self.missing())?.p)?,
            ExperimentKind::MacroClusters => check_p(
                "macro-clusters.p",
                self.macro_clusters.as_ref().ok_or_else(|| self.missing())?.p,
            )?,
            ExperimentKind::PcSweep => {
                let p = self.pc_sweep.as_ref().ok_or_else(|| self.missing())?;
                if p.sizes.is_empty() || p.p_grid.is_empty() {
                    return Err(HarnessError::Config("pc-sweep: sizes and p_grid must be nonempty".into()));
                }
                for &x in &p.p_grid {
                    check_p("pc-sweep.p_grid", x)?;
                }
            }
            ExperimentKind::CrossTiling => {
                check_p("cross-tiling.p", self.cross_tiling.as_ref().ok_or_else(|| self.missing())?.p)?
            }
            ExperimentKind::Hvoronoi => {
                let h = self.hvoronoi.as_ref().ok_or_else(|| self.missing())?;
                check_p("hvoronoi.p", h.p)?;
                if h.lambdas.is_empty() || h.lambdas.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(HarnessError::Config("hvoronoi.lambdas: must be nonempty and increasing".into()));
                }
                if let Some(w) = &h.weight {
                    w.parse::<crate::hyperbolic::DensityWeight>()
                        .map_err(|e| HarnessError::Config(format!("hvoronoi.weight: {e}")))?;
                }
            }
            ExperimentKind::Resistance => {
                self.resistance.as_ref().ok_or_else(|| self.missing())?;
            }
        }
        Ok(())
    }
}
