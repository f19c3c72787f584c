use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    CompandingTable1,
    CompandingTable2,
    CompandingNoise,
    FriTable3,
    FriTable4,
    BlindDemo,
}

impl Experiment {
    /// Base name of the emitted artifacts.
    pub fn name(self) -> &'static str {
        match self {
            Experiment::CompandingTable1 => "table1",
            Experiment::CompandingTable2 => "table2",
            Experiment::CompandingNoise => "noise",
            Experiment::FriTable3 => "table3",
            Experiment::FriTable4 => "table4",
            Experiment::BlindDemo => "blind",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            Experiment::CompandingTable1,
            Experiment::CompandingTable2,
            Experiment::CompandingNoise,
            Experiment::FriTable3,
            Experiment::FriTable4,
            Experiment::BlindDemo,
        ]
        .into_iter()
        .find(|e| e.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompandingTag {
    Sine,
    Identity,
}

/// Flat experiment description; unknown keys are rejected when parsing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    /// Knots (companding) or innovations (identification, blind).
    pub count: usize,
    pub gap_min: f64,
    pub gap_max: f64,
    pub companding: CompandingTag,
    pub alpha: f64,
    pub noise_level: f64,
    /// Bound on the innovation shifts of the blind demonstration.
    pub perturbation: f64,
    pub max_iter: usize,
    pub out_dir: String,
}

impl ExperimentConfig {
    /// Defaults of each experiment.
    pub fn preset(experiment: Experiment) -> Self {
        let base = Self {
            experiment,
            seed: 1,
            count: 40,
            gap_min: 0.05,
            gap_max: 0.15,
            companding: CompandingTag::Sine,
            alpha: 0.3,
            noise_level: 0.0,
            perturbation: 0.05,
            max_iter: 50,
            out_dir: "out".into(),
        };
        match experiment {
            Experiment::CompandingTable1 => base,
            Experiment::CompandingTable2 => Self { max_iter: 15, ..base },
            Experiment::CompandingNoise => Self { noise_level: 0.025, max_iter: 2000, ..base },
            Experiment::FriTable3 => Self { count: 20, gap_min: 0.5, gap_max: 1.5, alpha: 0.5, max_iter: 30, ..base },
            Experiment::FriTable4 => {
                Self { count: 20, gap_min: 0.5, gap_max: 1.5, alpha: 0.5, max_iter: 30, noise_level: 0.05, ..base }
            }
            Experiment::BlindDemo => Self {
                count: 24,
                gap_min: 1.0,
                gap_max: 1.0,
                companding: CompandingTag::Identity,
                alpha: 0.5,
                max_iter: 500,
                ..base
            },
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// One-line echo used in error messages.
    pub fn echo(&self) -> String {
        format!(
            "{} seed={} count={} gaps=[{}, {}] alpha={} noise={} max_iter={}",
            self.experiment.name(),
            self.seed,
            self.count,
            self.gap_min,
            self.gap_max,
            self.alpha,
            self.noise_level,
            self.max_iter
        )
    }

    // Negated comparisons so that NaN is rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.alpha > 0.0) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.noise_level >= 0.0) {
            return bad(format!("noise level must be non-negative, got {}", self.noise_level));
        }
        if !(self.gap_min >= 0.0 && self.gap_max >= self.gap_min) {
            return bad(format!("bad gap range [{}, {}]", self.gap_min, self.gap_max));
        }
        if !(self.perturbation >= 0.0) {
            return bad(format!("perturbation must be non-negative, got {}", self.perturbation));
        }
        if self.count < 3 {
            return bad(format!("count must be at least 3, got {}", self.count));
        }
        match self.experiment {
            Experiment::CompandingTable1 | Experiment::CompandingTable2 | Experiment::CompandingNoise => {
                if self.gap_min < 0.05 || self.gap_max > 0.15 {
                    return bad("knot gaps must lie within [0.05, 0.15]".into());
                }
                if self.gap_min * (self.count - 1) as f64 > 4.0 {
                    return bad("knots do not fit into [-2, 2]".into());
                }
            }
            Experiment::FriTable3 | Experiment::FriTable4 => {
                if self.gap_min < 0.5 || self.gap_max > 1.5 {
                    return bad("innovation gaps must lie within [0.5, 1.5]".into());
                }
            }
            Experiment::BlindDemo => {}
        }
        Ok(())
    }
}
