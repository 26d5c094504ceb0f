use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Gamma,
    Learn,
    Partition,
    SimonGap,
    PacFormulas,
    Bench,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Gamma => "gamma",
            Self::Learn => "learn",
            Self::Partition => "partition",
            Self::SimonGap => "simon-gap",
            Self::PacFormulas => "pac-formulas",
            Self::Bench => "bench",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerKind {
    Quantum,
    Halving,
    Nestedbv,
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Quantum => "quantum",
            Self::Halving => "halving",
            Self::Nestedbv => "nestedbv",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// A fully resolved experiment.
///
/// `seed` defaults to 0 and `trials` to 100. `class` is a class spec such as
/// `parity:n=6`, or `file:PATH` for a class stored as JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub class: Option<String>,
    pub learner: LearnerKind,
    pub k: Option<usize>,
    pub m: Option<u32>,
    pub l: Option<u32>,
    pub trials: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub partition_out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            class: None,
            learner: LearnerKind::Quantum,
            k: None,
            m: None,
            l: None,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            out: None,
            format: OutputFormat::Csv,
            partition_out: None,
        }
    }

    pub fn with_class(mut self, class: &str) -> Self {
        self.class = Some(class.to_string());
        self
    }

    pub fn with_learner(mut self, learner: LearnerKind) -> Self {
        self.learner = learner;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_subspace(mut self, m: u32, l: u32) -> Self {
        self.m = Some(m);
        self.l = Some(l);
        self
    }

    /// Checks that the fields the experiment kind needs are present.
    pub fn validate(&self) -> Result<()> {
        let need_class = matches!(
            self.kind,
            ExperimentKind::Gamma | ExperimentKind::Learn | ExperimentKind::Partition
        );
        if need_class && self.class.is_none() {
            bail!("`{}` needs --class", self.kind);
        }
        if self.kind == ExperimentKind::Partition && self.k.is_none() {
            bail!("`partition` needs --k");
        }
        if self.kind == ExperimentKind::SimonGap && (self.m.is_none() || self.l.is_none()) {
            bail!("`simon-gap` needs --m and --l");
        }
        if self.trials == 0 {
            bail!("--trials must be positive");
        }
        Ok(())
    }
}

/// Optional settings from a JSON config file or the command line. Command line
/// values take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub kind: Option<ExperimentKind>,
    pub class: Option<String>,
    pub learner: Option<LearnerKind>,
    pub k: Option<usize>,
    pub m: Option<u32>,
    pub l: Option<u32>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub partition_out: Option<PathBuf>,
}

impl ConfigOverrides {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fills every unset field from `lower`.
    pub fn over(self, lower: Self) -> Self {
        Self {
            kind: self.kind.or(lower.kind),
            class: self.class.or(lower.class),
            learner: self.learner.or(lower.learner),
            k: self.k.or(lower.k),
            m: self.m.or(lower.m),
            l: self.l.or(lower.l),
            trials: self.trials.or(lower.trials),
            seed: self.seed.or(lower.seed),
            out: self.out.or(lower.out),
            format: self.format.or(lower.format),
            partition_out: self.partition_out.or(lower.partition_out),
        }
    }

    pub fn resolve(self) -> Result<ExperimentConfig> {
        let Some(kind) = self.kind else { bail!("no experiment kind given") };
        let base = ExperimentConfig::new(kind);
        let config = ExperimentConfig {
            kind,
            class: self.class,
            learner: self.learner.unwrap_or(base.learner),
            k: self.k,
            m: self.m,
            l: self.l,
            trials: self.trials.unwrap_or(base.trials),
            seed: self.seed.unwrap_or(base.seed),
            out: self.out,
            format: self.format.unwrap_or(base.format),
            partition_out: self.partition_out,
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_line_wins() {
        let file: ConfigOverrides =
            serde_json::from_str(r#"{"kind":"learn","class":"delta:n=3","trials":7,"seed":3}"#).unwrap();
        let cli = ConfigOverrides { seed: Some(9), ..Default::default() };
        let c = cli.over(file).resolve().unwrap();
        assert_eq!((c.kind, c.trials, c.seed), (ExperimentKind::Learn, 7, 9));
        assert_eq!(c.class.as_deref(), Some("delta:n=3"));
    }

    #[test]
    fn missing_fields_rejected() {
        let c = ConfigOverrides { kind: Some(ExperimentKind::Partition), class: Some("delta:n=3".into()), ..Default::default() };
        assert!(c.resolve().is_err());
        assert!(serde_json::from_str::<ConfigOverrides>(r#"{"bogus":1}"#).is_err());
        let simon = ConfigOverrides { kind: Some(ExperimentKind::SimonGap), m: Some(6), ..Default::default() };
        assert!(simon.resolve().is_err());
    }
}
