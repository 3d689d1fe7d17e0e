//! Discrete-time SIR Monte-Carlo simulation and the outbreak-difference
//! sweep used to compare seed-ranking measures against the degree baseline.
//!
//! Every run draws from a counter-based ChaCha stream keyed on the master
//! seed plus the run's grid coordinates, so results are bit-identical for
//! any worker count. Within a sweep the streams depend only on the seed
//! fraction and run index — measures are compared under common random
//! numbers, which makes lanes with identical seed sets produce identical
//! outbreaks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{degree_moments, Graph};
use crate::ranking::{rank, top_fraction, Ranking, Strategy};
use crate::scores::ScoreVector;
use crate::util::{mix64, stream_key};

/// SIR simulation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SirParams {
    /// Per-contact infection probability per step.
    pub infection_prob: f64,
    /// Per-step recovery probability of an infectious node.
    pub recovery_prob: f64,
    /// Independent simulations to average.
    pub runs: usize,
    /// Master seed; all per-run streams derive from it.
    pub seed: u64,
}

impl SirParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.infection_prob) {
            return Err(Error::Parameter(format!(
                "infection probability must lie in [0,1], got {}",
                self.infection_prob
            )));
        }
        if !(self.recovery_prob > 0.0 && self.recovery_prob <= 1.0) {
            return Err(Error::Parameter(format!(
                "recovery probability must lie in (0,1], got {}",
                self.recovery_prob
            )));
        }
        if self.runs < 1 {
            return Err(Error::Parameter("runs must be >= 1".into()));
        }
        Ok(())
    }
}

/// Outbreak sizes of the averaged runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SirOutcome {
    pub outbreak_sizes: Vec<usize>,
    pub mean_outbreak: f64,
}

const STATE_S: u8 = 0;
const STATE_I: u8 = 1;
const STATE_NEW: u8 = 2;
const STATE_R: u8 = 3;

/// Synchronous dynamics: each step, every infectious node attempts to infect
/// each neighbor that was susceptible at step start (one independent draw
/// per attempt), then attempts recovery. Nodes infected this step become
/// infectious next step. Runs until no infectious node remains; returns the
/// recovered count.
fn simulate(g: &Graph, seeds: &[u32], lambda: f64, gamma: f64, rng: &mut ChaCha8Rng) -> usize {
    let n = g.node_count();
    let mut state = vec![STATE_S; n];
    for &s in seeds {
        state[s as usize] = STATE_I;
    }
    let mut infectious: Vec<u32> = seeds.to_vec();
    let mut recovered = 0usize;
    let mut newly: Vec<u32> = Vec::new();
    while !infectious.is_empty() {
        newly.clear();
        for &v in &infectious {
            for &u in g.neighbors(v) {
                let st = state[u as usize];
                // one draw per (attacker, step-start-susceptible) pair
                if st == STATE_S || st == STATE_NEW {
                    let hit = rng.random_bool(lambda);
                    if hit && st == STATE_S {
                        state[u as usize] = STATE_NEW;
                        newly.push(u);
                    }
                }
            }
        }
        let mut survivors: Vec<u32> = Vec::with_capacity(infectious.len());
        for &v in &infectious {
            if rng.random_bool(gamma) {
                state[v as usize] = STATE_R;
                recovered += 1;
            } else {
                survivors.push(v);
            }
        }
        for &v in &newly {
            state[v as usize] = STATE_I;
        }
        survivors.extend_from_slice(&newly);
        survivors.sort_unstable();
        infectious = survivors;
    }
    recovered
}

fn validate_seeds(g: &Graph, seeds: &[u32]) -> Result<Vec<u32>> {
    if seeds.is_empty() {
        return Err(Error::Parameter("seed set must not be empty".into()));
    }
    let mut sorted = seeds.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&bad) = sorted.iter().find(|&&v| v as usize >= g.node_count()) {
        return Err(Error::NodeId {
            id: bad as usize,
            n: g.node_count(),
        });
    }
    Ok(sorted)
}

fn run_rng(master_seed: u64, lane: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(lane);
    rng
}

/// One simulation; the stream is derived from `(params.seed, run_index)`.
pub fn sir_run(g: &Graph, seeds: &[u32], params: &SirParams, run_index: u64) -> Result<usize> {
    params.validate()?;
    let seeds = validate_seeds(g, seeds)?;
    let mut rng = run_rng(params.seed, mix64(run_index));
    Ok(simulate(
        g,
        &seeds,
        params.infection_prob,
        params.recovery_prob,
        &mut rng,
    ))
}

/// `params.runs` independent simulations with decorrelated streams, averaged.
pub fn sir_mean(g: &Graph, seeds: &[u32], params: &SirParams) -> Result<SirOutcome> {
    params.validate()?;
    let seeds = validate_seeds(g, seeds)?;
    let outbreak_sizes: Vec<usize> = (0..params.runs as u64)
        .into_par_iter()
        .map(|run| {
            let mut rng = run_rng(params.seed, mix64(run));
            simulate(
                g,
                &seeds,
                params.infection_prob,
                params.recovery_prob,
                &mut rng,
            )
        })
        .collect();
    let total: u64 = outbreak_sizes.iter().map(|&r| r as u64).sum();
    Ok(SirOutcome {
        mean_outbreak: total as f64 / outbreak_sizes.len() as f64,
        outbreak_sizes,
    })
}

/// Heterogeneous mean-field epidemic threshold `<k> / (<k^2> - <k>)`.
pub fn epidemic_threshold(g: &Graph) -> Result<f64> {
    let (k1, k2) = degree_moments(g);
    if k2 <= k1 {
        return Err(Error::ThresholdUndefined);
    }
    Ok(k1 / (k2 - k1))
}

/// Relative outbreak difference `(r_c - r_b) / r_b`.
pub fn relative_outbreak_difference(r_c: f64, r_b: f64) -> Result<f64> {
    if r_b <= 0.0 {
        return Err(Error::UndefinedBaseline(r_b));
    }
    Ok((r_c - r_b) / r_b)
}

/// One measure/strategy lane of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepLane {
    pub measure: String,
    pub strategy: Strategy,
    /// Seed node labels per grid point, in ranking order.
    pub seeds: Vec<Vec<String>>,
    /// Outbreak size of every run, per grid point.
    pub outbreaks: Vec<Vec<usize>>,
    /// Mean outbreak per grid point.
    pub mean_outbreak: Vec<f64>,
    /// Relative difference against the baseline, per grid point; absent on
    /// the baseline lane itself.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_r: Option<Vec<f64>>,
}

/// Full sweep output: everything needed to audit or reproduce the numbers.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub params: SirParams,
    pub f_grid: Vec<f64>,
    pub baseline: SweepLane,
    pub lanes: Vec<SweepLane>,
}

/// Runs the outbreak sweep: for every grid fraction and every
/// (measure, strategy) lane, seeds the top fraction of the lane's ranking
/// and averages `params.runs` simulations; the degree baseline (ranked
/// positive-first) is simulated once per fraction with the same streams.
pub fn sweep(
    g: &Graph,
    measures: &[(ScoreVector, Strategy)],
    baseline: &ScoreVector,
    f_grid: &[f64],
    params: &SirParams,
) -> Result<SweepResult> {
    params.validate()?;
    if f_grid.is_empty() {
        return Err(Error::Parameter("fraction grid must not be empty".into()));
    }
    for &f in f_grid {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::Parameter(format!(
                "fraction grid values must lie in (0,1], got {f}"
            )));
        }
    }

    let baseline_ranking = rank(g, baseline, Strategy::PositiveFirst)?;
    let mut rankings: Vec<Ranking> = vec![baseline_ranking];
    for (scores, strategy) in measures {
        rankings.push(rank(g, scores, *strategy)?);
    }

    // seed sets per (lane, grid point); lane 0 is the baseline
    let mut seed_sets: Vec<Vec<Vec<u32>>> = Vec::with_capacity(rankings.len());
    for ranking in &rankings {
        let per_f: Result<Vec<Vec<u32>>> =
            f_grid.iter().map(|&f| top_fraction(ranking, f)).collect();
        seed_sets.push(per_f?);
    }

    // run everything in parallel over (lane, grid point); the stream key
    // ignores the lane so equal seed sets give equal outbreak sequences
    let tasks: Vec<(usize, usize)> = (0..rankings.len())
        .flat_map(|lane| (0..f_grid.len()).map(move |fi| (lane, fi)))
        .collect();
    let mut outbreaks: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); f_grid.len()]; rankings.len()];
    let computed: Vec<((usize, usize), Vec<usize>)> = tasks
        .par_iter()
        .map(|&(lane, fi)| {
            let mut seeds = seed_sets[lane][fi].clone();
            seeds.sort_unstable();
            let sizes: Vec<usize> = (0..params.runs as u64)
                .map(|run| {
                    let mut rng =
                        run_rng(params.seed, stream_key(&[fi as u64, run]));
                    simulate(
                        g,
                        &seeds,
                        params.infection_prob,
                        params.recovery_prob,
                        &mut rng,
                    )
                })
                .collect();
            ((lane, fi), sizes)
        })
        .collect();
    for ((lane, fi), sizes) in computed {
        outbreaks[lane][fi] = sizes;
    }

    let means: Vec<Vec<f64>> = outbreaks
        .iter()
        .map(|per_f| {
            per_f
                .iter()
                .map(|sizes| {
                    let total: u64 = sizes.iter().map(|&r| r as u64).sum();
                    total as f64 / sizes.len() as f64
                })
                .collect()
        })
        .collect();

    let seed_labels = |lane: usize| -> Vec<Vec<String>> {
        seed_sets[lane]
            .iter()
            .map(|seeds| seeds.iter().map(|&v| g.label(v).to_string()).collect())
            .collect()
    };

    let baseline_lane = SweepLane {
        measure: baseline.measure.clone(),
        strategy: Strategy::PositiveFirst,
        seeds: seed_labels(0),
        outbreaks: outbreaks[0].clone(),
        mean_outbreak: means[0].clone(),
        delta_r: None,
    };

    let mut lanes = Vec::with_capacity(measures.len());
    for (i, (scores, strategy)) in measures.iter().enumerate() {
        let lane = i + 1;
        let delta: Result<Vec<f64>> = (0..f_grid.len())
            .map(|fi| relative_outbreak_difference(means[lane][fi], means[0][fi]))
            .collect();
        lanes.push(SweepLane {
            measure: scores.measure.clone(),
            strategy: *strategy,
            seeds: seed_labels(lane),
            outbreaks: outbreaks[lane].clone(),
            mean_outbreak: means[lane].clone(),
            delta_r: Some(delta?),
        });
    }

    Ok(SweepResult {
        params: *params,
        f_grid: f_grid.to_vec(),
        baseline: baseline_lane,
        lanes,
    })
}

/// Plot-ready table: one row per (lane, grid point).
pub fn write_sweep_csv<W: std::io::Write>(w: &mut W, result: &SweepResult) -> Result<()> {
    writeln!(w, "measure,strategy,f0,R_mean,R_baseline,delta_R")?;
    for lane in &result.lanes {
        for (fi, &f0) in result.f_grid.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                lane.measure,
                lane.strategy,
                f0,
                lane.mean_outbreak[fi],
                result.baseline.mean_outbreak[fi],
                lane.delta_r.as_ref().expect("measure lanes carry deltas")[fi],
            )?;
        }
    }
    Ok(())
}
