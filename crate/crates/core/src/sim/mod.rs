//! Monte Carlo experiments: payload-ratio table, ADR versus Rician factor,
//! and ADR under a fixed control-link budget.
//!
//! Trial `t` draws its geometry and NLOS matrices from the substream
//! `(seed, t)` and reuses them for every Rician factor and factorization, so
//! sweeps are paired across `K` and configurations. Trials run on a worker
//! pool; aggregation always proceeds in trial order, making the output
//! independent of the number of workers.

pub mod config;
pub mod csv;
pub mod selftest;

use rayon::prelude::*;
use serde::Serialize;

use crate::beamform::{optimal_beamformers, CascadeGains, EvalParams};
use crate::channel::{trial_rng, ChannelRealization, RicianParams};
use crate::codec::{
    self, join_x, payload_bits, payload_ratio, quantize_factor, FactorizationConfig,
};
use crate::error::{Error, Result};
use crate::hosvd::correlation_fidelity;
use crate::phase::PhaseShiftVector;

pub use config::{ConfigFile, ExperimentConfig, ExperimentKind};
use csv::{fmt_sig6, push_row};

/// Header of the ADR sweeps.
pub const ADR_CSV_HEADER: &str =
    "k_db,config,p,dims,bits,payload_bits,adr_baseline_cont,adr_baseline_quant,adr_proposed,fidelity_mean";

/// Header of the payload-ratio table.
pub const PAYLOAD_CSV_HEADER: &str =
    "config,p,dims,sum_np,payload_ratio,payload_bits,baseline_bits";

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "IRSFB_WORKERS";

/// How trials are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Workers {
    /// Rayon's global pool.
    #[default]
    Auto,
    /// Everything on the calling thread.
    Serial,
    /// A dedicated pool of this many threads.
    Threads(usize),
}

impl Workers {
    /// Parses a worker count: `1` is serial, `0` or empty is automatic.
    pub fn from_count(count: usize) -> Self {
        match count {
            0 => Workers::Auto,
            1 => Workers::Serial,
            n => Workers::Threads(n),
        }
    }
}

/// Outcome of one (trial, K, configuration) evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub k_db: f64,
    pub config: String,
    pub adr_baseline_cont: f64,
    pub adr_baseline_quant: f64,
    pub adr_proposed: f64,
    pub fidelity: f64,
    pub payload_bits: u64,
}

/// Trial means for one (K, configuration) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub k_db: f64,
    pub config: FactorizationConfig,
    pub payload_bits: u64,
    pub adr_baseline_cont: f64,
    pub adr_baseline_quant: f64,
    pub adr_proposed: f64,
    pub fidelity_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdrSweep {
    pub kind: ExperimentKind,
    pub trials: usize,
    pub baseline_bits: u8,
    pub rows: Vec<SweepRow>,
}

impl AdrSweep {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        push_row(&mut out, &[ADR_CSV_HEADER.to_string()]);
        for r in &self.rows {
            push_row(
                &mut out,
                &[
                    fmt_sig6(r.k_db),
                    r.config.label(),
                    r.config.order().to_string(),
                    join_x(r.config.dims()),
                    join_x(r.config.bits()),
                    r.payload_bits.to_string(),
                    fmt_sig6(r.adr_baseline_cont),
                    fmt_sig6(r.adr_baseline_quant),
                    fmt_sig6(r.adr_proposed),
                    fmt_sig6(r.fidelity_mean),
                ],
            );
        }
        out
    }

    /// Rows for one configuration, in sweep order of `K`.
    pub fn series<'a>(
        &'a self,
        config: &'a FactorizationConfig,
    ) -> impl Iterator<Item = &'a SweepRow> + 'a {
        self.rows.iter().filter(move |r| &r.config == config)
    }
}

/// One row per configuration: label, `P`, dims, `Σ N_p`, payload ratio,
/// proposed and baseline payload bits.
pub fn run_payload_sweep(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    let n = cfg.n();
    let mut out = String::new();
    push_row(&mut out, &[PAYLOAD_CSV_HEADER.to_string()]);
    for c in &cfg.configs {
        push_row(
            &mut out,
            &[
                c.label(),
                c.order().to_string(),
                join_x(c.dims()),
                c.sum_dims().to_string(),
                fmt_sig6(payload_ratio(c)),
                payload_bits(c).to_string(),
                codec::baseline_payload_bits(n, cfg.baseline_bits).to_string(),
            ],
        );
    }
    Ok(out)
}

pub fn run_adr_vs_k(cfg: &ExperimentConfig, workers: Workers) -> Result<AdrSweep> {
    if cfg.kind != ExperimentKind::AdrVsK {
        return Err(Error::InvalidConfig(format!(
            "expected an adr-vs-k config, got {}",
            cfg.kind.name()
        )));
    }
    run_monte_carlo(cfg, workers)
}

pub fn run_fixed_budget(cfg: &ExperimentConfig, workers: Workers) -> Result<AdrSweep> {
    if cfg.kind != ExperimentKind::FixedBudget {
        return Err(Error::InvalidConfig(format!(
            "expected a fixed-budget config, got {}",
            cfg.kind.name()
        )));
    }
    run_monte_carlo(cfg, workers)
}

fn run_monte_carlo(cfg: &ExperimentConfig, workers: Workers) -> Result<AdrSweep> {
    cfg.validate()?;
    let baseline_bits = cfg.effective_baseline_bits()?;
    let per_trial = run_trials(cfg, baseline_bits, workers)?;

    let nk = cfg.k_db.len();
    let nc = cfg.configs.len();
    let mut sums = vec![[0.0f64; 4]; nk * nc];
    for records in &per_trial {
        for (slot, r) in sums.iter_mut().zip(records) {
            slot[0] += r.adr_baseline_cont;
            slot[1] += r.adr_baseline_quant;
            slot[2] += r.adr_proposed;
            slot[3] += r.fidelity;
        }
    }
    let trials = cfg.trials as f64;
    let rows = sums
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let config = cfg.configs[i % nc].clone();
            SweepRow {
                k_db: cfg.k_db[i / nc],
                payload_bits: payload_bits(&config),
                config,
                adr_baseline_cont: s[0] / trials,
                adr_baseline_quant: s[1] / trials,
                adr_proposed: s[2] / trials,
                fidelity_mean: s[3] / trials,
            }
        })
        .collect();
    Ok(AdrSweep {
        kind: cfg.kind,
        trials: cfg.trials,
        baseline_bits,
        rows,
    })
}

/// Per-trial records, indexed by trial, each ordered by (K, configuration).
pub fn run_trials(
    cfg: &ExperimentConfig,
    baseline_bits: u8,
    workers: Workers,
) -> Result<Vec<Vec<TrialRecord>>> {
    let job = |t: usize| {
        evaluate_trial(cfg, t, baseline_bits).map_err(|e| Error::TrialFailed {
            trial: t,
            source: Box::new(e),
        })
    };
    match workers {
        Workers::Serial => (0..cfg.trials).map(job).collect(),
        Workers::Auto => (0..cfg.trials).into_par_iter().map(job).collect(),
        Workers::Threads(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("cannot start {n} workers: {e}")))?;
            pool.install(|| (0..cfg.trials).into_par_iter().map(job).collect())
        }
    }
}

/// Evaluates every (K, configuration) pair on trial `trial`.
pub fn evaluate_trial(
    cfg: &ExperimentConfig,
    trial: usize,
    baseline_bits: u8,
) -> Result<Vec<TrialRecord>> {
    let mut rng = trial_rng(cfg.seed, trial as u64);
    let realization = ChannelRealization::sample(&mut rng, cfg.m_t, cfg.m_r, cfg.n_h, cfg.n_v);
    let params = EvalParams {
        noise_var: cfg.noise_var,
    };
    let mut out = Vec::with_capacity(cfg.k_db.len() * cfg.configs.len());
    for &k_db in &cfg.k_db {
        let pair = realization.channels(RicianParams::from_db(k_db));
        let bf = optimal_beamformers(&pair.h, &pair.g, &cfg.solver)?;
        let gains = CascadeGains::new(&pair.h, &pair.g, &bf.w, &bf.q)?;
        let adr_cont = gains.adr(&bf.s_opt, &params)?;
        let s_quant =
            PhaseShiftVector::project(&quantize_factor(bf.s_opt.as_slice(), baseline_bits).1);
        let adr_quant = gains.adr(&s_quant, &params)?;
        for c in &cfg.configs {
            let msg = codec::encode(&bf.s_opt, c, &cfg.solver)?;
            let s_hat = codec::decode(&msg)?;
            out.push(TrialRecord {
                trial,
                k_db,
                config: c.label(),
                adr_baseline_cont: adr_cont,
                adr_baseline_quant: adr_quant,
                adr_proposed: gains.adr(&s_hat, &params)?,
                fidelity: correlation_fidelity(&bf.s_opt, &s_hat)?,
                payload_bits: payload_bits(c),
            });
        }
    }
    Ok(out)
}
