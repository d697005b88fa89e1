//! Monte Carlo simulation of write and rewrite cost on a defective memory page.
//!
//! Each trial draws a channel state, stores a random message, then applies a
//! sequence of updates. Trial `i` uses a ChaCha8 generator seeded with
//! `seed + i`, so results are reproducible and trials are independent.

use std::io::Write;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{sample_exact, sample_with, ChannelState};
use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::lwc::{AdditiveCode, CostReport};

/// A code given either by stock name or by a full spec.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CodeRef {
    Named(String),
    Spec(CodeSpec),
}

impl CodeRef {
    pub fn resolve(&self) -> Result<CodeSpec> {
        match self {
            CodeRef::Named(name) => CodeSpec::from_name(name),
            CodeRef::Spec(spec) => {
                spec.validate()?;
                Ok(spec.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum UpdateModel {
    /// A fresh uniformly random message.
    IidUniform,
    /// Flip between 1 and `radius` message bits, the count and the positions uniform.
    HammingBall { radius: usize },
}

impl Default for UpdateModel {
    fn default() -> Self {
        UpdateModel::HammingBall { radius: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DefectInjection {
    /// Each cell stuck independently with probability `beta`.
    #[default]
    Bernoulli,
    /// Exactly `count` stuck cells at uniform positions; `beta` is ignored.
    Exact { count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub code: CodeRef,
    #[serde(default)]
    pub beta: f64,
    pub trials: u64,
    #[serde(default)]
    pub updates_per_trial: usize,
    #[serde(default)]
    pub update_model: UpdateModel,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub defects: DefectInjection,
    /// Draw one channel state for the whole run instead of one per trial.
    #[serde(default)]
    pub fixed_state: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub state: ChannelState,
    /// Step 0 is the initial write; later steps are updates.
    pub writes: Vec<CostReport>,
    /// Step at which masking failed, if it did. Remaining updates are skipped.
    pub failed_at: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub trials: u64,
    pub masking_failures: u64,
    pub masking_failure_rate: f64,
    pub mean_write_cost: f64,
    pub max_write_cost: usize,
    pub mean_rewrite_cost: f64,
    pub max_rewrite_cost: usize,
    /// Writes on at most one stuck cell whose cost exceeded the single-defect bound.
    pub bound_violations: u64,
    pub non_minimal_writes: u64,
    /// Number of times each cell changed value over the whole run.
    pub per_cell_writes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub summary: SimSummary,
    pub trials: Vec<TrialRecord>,
}

fn random_message<R: Rng>(rng: &mut R, k: usize) -> BitVector {
    BitVector::from_bits(&(0..k).map(|_| rng.gen::<bool>()).collect::<Vec<_>>())
}

fn next_message<R: Rng>(rng: &mut R, model: UpdateModel, m: &BitVector) -> BitVector {
    match model {
        UpdateModel::IidUniform => random_message(rng, m.len()),
        UpdateModel::HammingBall { radius } => {
            let mut out = m.clone();
            if radius == 0 {
                return out;
            }
            let d = rng.gen_range(1..=radius);
            for i in index::sample(rng, m.len(), d) {
                out.flip(i);
            }
            out
        }
    }
}

fn draw_state<R: Rng>(rng: &mut R, config: &SimConfig, n: usize) -> Result<ChannelState> {
    match config.defects {
        DefectInjection::Bernoulli => sample_with(rng, config.beta, n),
        DefectInjection::Exact { count } => sample_exact(rng, n, count),
    }
}

fn run_trial(code: &AdditiveCode, config: &SimConfig, trial: u64, fixed: Option<&ChannelState>) -> Result<TrialRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(trial));
    let state = match fixed {
        Some(s) => s.clone(),
        None => draw_state(&mut rng, config, code.n())?,
    };
    let mut writes = Vec::with_capacity(config.updates_per_trial + 1);
    let mut m = random_message(&mut rng, code.k());
    let mut c = match code.encode_initial(&m, &state) {
        Ok(enc) => {
            writes.push(enc.report);
            enc.codeword
        }
        Err(Error::Masking(_)) => return Ok(TrialRecord { trial, state, writes, failed_at: Some(0) }),
        Err(e) => return Err(e),
    };
    for step in 1..=config.updates_per_trial {
        let m_next = next_message(&mut rng, config.update_model, &m);
        match code.encode_update(&c, &m_next, &state) {
            Ok(enc) => {
                writes.push(enc.report);
                c = enc.codeword;
                m = m_next;
            }
            Err(Error::Masking(_)) => return Ok(TrialRecord { trial, state, writes, failed_at: Some(step) }),
            Err(e) => return Err(e),
        }
    }
    Ok(TrialRecord { trial, state, writes, failed_at: None })
}

/// Runs the simulation described by `config`.
pub fn run(config: &SimConfig) -> Result<SimResult> {
    if config.trials == 0 {
        return Err(Error::Usage("trials must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&config.beta) {
        return Err(Error::Usage(format!("defect probability {} is outside [0, 1]", config.beta)));
    }
    let spec = config.code.resolve()?;
    let code = AdditiveCode::build(spec.g0()?)?;
    if let UpdateModel::HammingBall { radius } = config.update_model {
        if radius > code.k() {
            return Err(Error::Usage(format!("update radius {radius} exceeds k = {}", code.k())));
        }
    }
    if let DefectInjection::Exact { count } = config.defects {
        if count > code.n() {
            return Err(Error::Usage(format!("cannot place {count} defects in {} cells", code.n())));
        }
    }
    // Warm the analysis cache so cost bounds are available to every trial.
    let _ = code.analysis();

    let fixed = if config.fixed_state {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(1);
        Some(draw_state(&mut rng, config, code.n())?)
    } else {
        None
    };

    let trials = (0..config.trials)
        .map(|t| run_trial(&code, config, t, fixed.as_ref()).map_err(|e| Error::Trial { trial: t, source: Box::new(e) }))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(code.n(), &trials);
    Ok(SimResult { summary, trials })
}

fn summarize(n: usize, trials: &[TrialRecord]) -> SimSummary {
    let mut per_cell_writes = vec![0u64; n];
    let (mut w_sum, mut w_cnt, mut w_max) = (0usize, 0usize, 0usize);
    let (mut r_sum, mut r_cnt, mut r_max) = (0usize, 0usize, 0usize);
    let (mut violations, mut non_minimal) = (0u64, 0u64);
    for t in trials {
        for rep in &t.writes {
            for &i in &rep.cells_touched {
                per_cell_writes[i] += 1;
            }
            if let Some(w) = rep.write_cost {
                w_sum += w;
                w_cnt += 1;
                w_max = w_max.max(w);
            }
            if let Some(r) = rep.rewrite_cost {
                r_sum += r;
                r_cnt += 1;
                r_max = r_max.max(r);
            }
            if !rep.minimal {
                non_minimal += 1;
            } else if rep.bound.is_some_and(|b| rep.cost() > b) {
                violations += 1;
            }
        }
    }
    let failures = trials.iter().filter(|t| t.failed_at.is_some()).count() as u64;
    let mean = |s: usize, c: usize| if c == 0 { 0.0 } else { s as f64 / c as f64 };
    SimSummary {
        trials: trials.len() as u64,
        masking_failures: failures,
        masking_failure_rate: failures as f64 / trials.len().max(1) as f64,
        mean_write_cost: mean(w_sum, w_cnt),
        max_write_cost: w_max,
        mean_rewrite_cost: mean(r_sum, r_cnt),
        max_rewrite_cost: r_max,
        bound_violations: violations,
        non_minimal_writes: non_minimal,
        per_cell_writes,
    }
}

fn opt(v: Option<usize>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes one CSV row per write operation.
///
/// Columns: `trial,step,defect_state,cost,bound,minimal,cells_touched`.
/// `cells_touched` is a `;`-separated index list. A masking failure is a row
/// with empty `cost`, `bound`, `minimal` and `cells_touched`.
pub fn write_csv<W: Write>(result: &SimResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["trial", "step", "defect_state", "cost", "bound", "minimal", "cells_touched"]).map_err(csv_err)?;
    for t in &result.trials {
        let state = t.state.to_string();
        for (step, rep) in t.writes.iter().enumerate() {
            let cells = rep.cells_touched.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";");
            w.write_record([
                t.trial.to_string(),
                step.to_string(),
                state.clone(),
                rep.cost().to_string(),
                opt(rep.bound),
                rep.minimal.to_string(),
                cells,
            ])
            .map_err(csv_err)?;
        }
        if let Some(step) = t.failed_at {
            w.write_record([t.trial.to_string(), step.to_string(), state, String::new(), String::new(), String::new(), String::new()])
                .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}
