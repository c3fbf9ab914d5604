use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::codec::{join_x, payload_bits, sorted_factorizations, FactorizationConfig};
use crate::error::{Error, Result};
use crate::hosvd::PowerOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    PayloadRatio,
    AdrVsK,
    FixedBudget,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::PayloadRatio => "payload-ratio",
            ExperimentKind::AdrVsK => "adr-vs-k",
            ExperimentKind::FixedBudget => "fixed-budget",
        }
    }
}

/// Rician factors (dB) swept by the Monte Carlo experiments.
pub const DEFAULT_K_DB: [f64; 12] = [
    -20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 30.0, 40.0, 60.0,
];
pub const DEFAULT_TRIALS: usize = 200;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_NOISE_VAR: f64 = 0.1;
pub const DEFAULT_BASELINE_BITS: u8 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// IRS columns; `N = n_h · n_v`.
    pub n_h: usize,
    /// IRS rows.
    pub n_v: usize,
    pub m_t: usize,
    pub m_r: usize,
    pub configs: Vec<FactorizationConfig>,
    pub k_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub noise_var: f64,
    /// Control-link budget in bits (fixed-budget only).
    pub budget_bits: Option<u64>,
    /// Per-phase resolution of the unfactorized baseline.
    pub baseline_bits: u8,
    pub solver: PowerOptions,
    pub output: Option<PathBuf>,
}

fn uniform(dims: &[usize], bits: u8) -> FactorizationConfig {
    FactorizationConfig::uniform(dims.to_vec(), bits).expect("built-in configuration is valid")
}

impl ExperimentConfig {
    /// Built-in defaults: a 16×16 IRS at desk scale, 32×32 at full scale.
    ///
    /// The payload-ratio sweep is pure arithmetic and always uses `N = 1024`.
    pub fn defaults(kind: ExperimentKind, full_scale: bool) -> Self {
        let side = if full_scale || kind == ExperimentKind::PayloadRatio {
            32
        } else {
            16
        };
        let (configs, budget_bits) =
            match (kind, full_scale || kind == ExperimentKind::PayloadRatio) {
                (ExperimentKind::PayloadRatio, _) => (
                    sorted_factorizations(1024)
                        .into_iter()
                        .map(|d| uniform(&d, DEFAULT_BASELINE_BITS))
                        .collect(),
                    None,
                ),
                (ExperimentKind::AdrVsK, false) => (
                    vec![
                        uniform(&[16, 16], 3),
                        uniform(&[16, 4, 4], 3),
                        uniform(&[4, 4, 4, 4], 3),
                        uniform(&[2; 8], 3),
                    ],
                    None,
                ),
                (ExperimentKind::AdrVsK, true) => (
                    vec![
                        uniform(&[32, 32], 3),
                        uniform(&[16, 8, 8], 3),
                        uniform(&[8, 8, 4, 4], 3),
                        uniform(&[2; 10], 3),
                    ],
                    None,
                ),
                (ExperimentKind::FixedBudget, false) => (
                    vec![
                        uniform(&[64, 2, 2], 3),
                        uniform(&[32, 4, 2], 6),
                        uniform(&[16, 4, 4], 10),
                        uniform(&[8, 8, 4], 12),
                    ],
                    Some(256),
                ),
                (ExperimentKind::FixedBudget, true) => (
                    vec![
                        uniform(&[256, 2, 2], 3),
                        uniform(&[128, 4, 2], 7),
                        uniform(&[64, 8, 2], 8),
                        uniform(&[64, 8, 2], 12),
                        uniform(&[16, 8, 8], 16),
                    ],
                    Some(1024),
                ),
            };
        Self {
            kind,
            n_h: side,
            n_v: side,
            m_t: 2,
            m_r: 2,
            configs,
            k_db: DEFAULT_K_DB.to_vec(),
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            noise_var: DEFAULT_NOISE_VAR,
            budget_bits,
            baseline_bits: DEFAULT_BASELINE_BITS,
            solver: PowerOptions::default(),
            output: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n_h * self.n_v
    }

    /// Baseline resolution actually used: `floor(budget / N)` for the
    /// fixed-budget experiment, the configured one otherwise.
    pub fn effective_baseline_bits(&self) -> Result<u8> {
        match (self.kind, self.budget_bits) {
            (ExperimentKind::FixedBudget, Some(budget)) => {
                let b = budget / self.n() as u64;
                if b == 0 {
                    return Err(Error::InvalidConfig(format!(
                        "budget of {budget} bits cannot give every one of {} phases a bit",
                        self.n()
                    )));
                }
                Ok(b.min(u64::from(crate::codec::MAX_BITS)) as u8)
            }
            (ExperimentKind::FixedBudget, None) => Err(Error::InvalidConfig(
                "fixed-budget needs budget_bits".into(),
            )),
            _ => Ok(self.baseline_bits),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_h == 0 || self.n_v == 0 || self.m_t == 0 || self.m_r == 0 {
            return Err(Error::InvalidConfig(
                "n_h, n_v, m_t and m_r must be positive".into(),
            ));
        }
        if self.configs.is_empty() {
            return Err(Error::InvalidConfig("no factorization configured".into()));
        }
        for c in &self.configs {
            c.check_size(self.n())?;
        }
        if self.baseline_bits == 0 || self.baseline_bits > crate::codec::MAX_BITS {
            return Err(Error::InvalidConfig(format!(
                "baseline_bits {} out of range",
                self.baseline_bits
            )));
        }
        if self.kind == ExperimentKind::PayloadRatio {
            return Ok(());
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.k_db.is_empty() || self.k_db.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidConfig(
                "k_db must be a non-empty list of finite values".into(),
            ));
        }
        if !(self.noise_var > 0.0 && self.noise_var.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "noise_var must be positive, got {}",
                self.noise_var
            )));
        }
        if self.solver.tol.is_nan() || self.solver.tol < 0.0 {
            return Err(Error::InvalidConfig(
                "solver tol must be non-negative".into(),
            ));
        }
        if self.kind == ExperimentKind::FixedBudget {
            let budget = self.budget_bits.unwrap_or(0);
            if budget == 0 {
                return Err(Error::InvalidConfig("budget_bits must be positive".into()));
            }
            self.effective_baseline_bits()?;
            for c in &self.configs {
                let bits = payload_bits(c);
                if bits > budget {
                    return Err(Error::InvalidConfig(format!(
                        "dims {} with bits {} need {bits} bits, over the {budget}-bit budget",
                        join_x(c.dims()),
                        join_x(c.bits())
                    )));
                }
            }
        }
        Ok(())
    }

    /// Overlays the values present in `file` onto `self`.
    pub fn apply(&mut self, file: ConfigFile) -> Result<()> {
        if let Some(s) = file.scenario {
            set(&mut self.n_h, s.n_h);
            set(&mut self.n_v, s.n_v);
            set(&mut self.m_t, s.m_t);
            set(&mut self.m_r, s.m_r);
            set(&mut self.noise_var, s.noise_var);
        }
        if let Some(s) = file.sweep {
            set(&mut self.k_db, s.k_db);
            set(&mut self.trials, s.trials);
            set(&mut self.seed, s.seed);
        }
        if let Some(f) = file.feedback {
            set(&mut self.baseline_bits, f.baseline_bits);
            if f.budget_bits.is_some() {
                self.budget_bits = f.budget_bits;
            }
        }
        if let Some(s) = file.solver {
            set(&mut self.solver.tol, s.tol);
            set(&mut self.solver.max_iter, s.max_iter);
        }
        if let Some(o) = file.output {
            if o.path.is_some() {
                self.output = o.path;
            }
        }
        if let Some(entries) = file.factorization {
            self.configs = entries
                .into_iter()
                .map(|e| {
                    let bits = match e.bits {
                        BitsSpec::Uniform(b) => vec![b; e.dims.len()],
                        BitsSpec::PerFactor(b) => b,
                    };
                    FactorizationConfig::new(e.dims, bits)
                })
                .collect::<Result<_>>()?;
        }
        Ok(())
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// On-disk experiment configuration; every key is optional and overrides the
/// built-in default. Unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<ScenarioSection>,
    pub sweep: Option<SweepSection>,
    pub feedback: Option<FeedbackSection>,
    pub solver: Option<SolverSection>,
    pub output: Option<OutputSection>,
    pub factorization: Option<Vec<FactorizationEntry>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub n_h: Option<usize>,
    pub n_v: Option<usize>,
    pub m_t: Option<usize>,
    pub m_r: Option<usize>,
    pub noise_var: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub k_db: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeedbackSection {
    pub baseline_bits: Option<u8>,
    pub budget_bits: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationEntry {
    pub dims: Vec<usize>,
    pub bits: BitsSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum BitsSpec {
    Uniform(u8),
    PerFactor(Vec<u8>),
}
