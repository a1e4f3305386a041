//! Local repairability under node unavailability.
//!
//! Each trial draws an unavailable set `U` and asks, for every symbol `i`,
//! whether some repair vector of `i` avoids `U \ {i}`. Randomness comes from
//! ChaCha8 keyed by `seed` with the stream set to the trial index, so every
//! trial is reproducible on its own and the schedule does not matter.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{binomial, next_combination};

use super::RepairSets;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum AvailabilityModel {
    /// Every node is unavailable independently with probability `p`.
    Iid { p: f64 },
    /// Every set of `u` nodes other than the one being repaired.
    Adversarial { u: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub model: AvailabilityModel,
    /// Trials for the iid model; samples per symbol when the adversarial
    /// model falls back to sampling.
    pub trials: u64,
    pub seed: u64,
    /// Largest number of (symbol, set) pairs the adversarial model checks
    /// exhaustively before it switches to sampling.
    pub exhaustive_limit: u64,
}

impl SimulationConfig {
    pub fn new(model: AvailabilityModel, trials: u64, seed: u64) -> Self {
        Self { model, trials, seed, exhaustive_limit: 10_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolStats {
    pub symbol: usize,
    pub checks: u64,
    pub successes: u64,
    pub success_rate: f64,
    /// Mean symbols read over successful repairs (0 if none succeeded).
    pub mean_retrieved: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureWitness {
    pub symbol: usize,
    pub unavailable: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub config: SimulationConfig,
    /// True when the adversarial model enumerated every set.
    pub exhaustive: bool,
    pub per_symbol: Vec<SymbolStats>,
    /// Iid: fraction of trials in which every symbol was repairable.
    /// Adversarial: fraction of checked (symbol, set) pairs that succeeded.
    pub overall_success: f64,
    pub mean_retrieved: f64,
    pub all_repairable: bool,
    pub failure: Option<FailureWitness>,
}

#[derive(Clone, Default)]
struct Tally {
    checks: Vec<u64>,
    successes: Vec<u64>,
    retrieved: Vec<u64>,
    full_successes: u64,
    units: u64,
    failure: Option<FailureWitness>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Self { checks: vec![0; n], successes: vec![0; n], retrieved: vec![0; n], ..Default::default() }
    }

    fn record(&mut self, sets: &RepairSets, i: usize, unavailable: &[usize]) -> bool {
        self.checks[i] += 1;
        match sets.first_available(i, |j| unavailable.contains(&j)) {
            Some(alt) => {
                self.successes[i] += 1;
                self.retrieved[i] += (sets.for_symbol(i)[alt].weight() - 1) as u64;
                true
            }
            None => {
                if self.failure.is_none() {
                    self.failure = Some(FailureWitness { symbol: i, unavailable: unavailable.to_vec() });
                }
                false
            }
        }
    }

    /// Merges `other`, which covers later work units than `self`.
    fn merge(mut self, other: Tally) -> Tally {
        if self.checks.is_empty() {
            return other;
        }
        for (a, b) in self.checks.iter_mut().zip(&other.checks) {
            *a += b;
        }
        for (a, b) in self.successes.iter_mut().zip(&other.successes) {
            *a += b;
        }
        for (a, b) in self.retrieved.iter_mut().zip(&other.retrieved) {
            *a += b;
        }
        self.full_successes += other.full_successes;
        self.units += other.units;
        self.failure = self.failure.or(other.failure);
        self
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs the availability model against the given repair sets.
pub fn simulate_availability(sets: &RepairSets, config: SimulationConfig) -> SimulationReport {
    let n = sets.len();
    let (tally, exhaustive) = match config.model {
        AvailabilityModel::Iid { p } => (iid(sets, p, config), false),
        AvailabilityModel::Adversarial { u } => adversarial(sets, u, config),
    };
    let per_symbol: Vec<SymbolStats> = (0..n)
        .map(|i| SymbolStats {
            symbol: i,
            checks: tally.checks[i],
            successes: tally.successes[i],
            success_rate: ratio(tally.successes[i], tally.checks[i]),
            mean_retrieved: mean(tally.retrieved[i], tally.successes[i]),
        })
        .collect();
    let total_checks: u64 = tally.checks.iter().sum();
    let total_successes: u64 = tally.successes.iter().sum();
    let overall_success = match config.model {
        AvailabilityModel::Iid { .. } => ratio(tally.full_successes, tally.units),
        AvailabilityModel::Adversarial { .. } => ratio(total_successes, total_checks),
    };
    SimulationReport {
        config,
        exhaustive,
        overall_success,
        mean_retrieved: mean(tally.retrieved.iter().sum(), total_successes),
        all_repairable: total_successes == total_checks,
        failure: tally.failure,
        per_symbol,
    }
}

/// Success fraction; vacuously 1 when nothing was checked.
fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

fn mean(total: u64, count: u64) -> f64 {
    if count == 0 {
        0.0
    } else {
        total as f64 / count as f64
    }
}

fn iid(sets: &RepairSets, p: f64, config: SimulationConfig) -> Tally {
    let n = sets.len();
    let p = p.clamp(0.0, 1.0);
    (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng_for(config.seed, trial);
            let unavailable: Vec<usize> = (0..n).filter(|_| rng.gen_bool(p)).collect();
            let mut tally = Tally::new(n);
            let mut all = true;
            for i in 0..n {
                all &= tally.record(sets, i, &unavailable);
            }
            tally.full_successes = all as u64;
            tally.units = 1;
            tally
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge)
}

fn adversarial(sets: &RepairSets, u: usize, config: SimulationConfig) -> (Tally, bool) {
    let n = sets.len();
    if n == 0 {
        return (Tally::new(0), true);
    }
    let others = n - 1;
    let u = u.min(others);
    let per_symbol = binomial(others as u64, u as u64).unwrap_or(u64::MAX);
    let exhaustive = per_symbol.saturating_mul(n as u64) <= config.exhaustive_limit;
    let tally = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut tally = Tally::new(n);
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            if exhaustive {
                let mut subset: Vec<usize> = (0..u).collect();
                loop {
                    let unavailable: Vec<usize> = subset.iter().map(|&k| others[k]).collect();
                    tally.record(sets, i, &unavailable);
                    if !next_combination(&mut subset, others.len()) {
                        break;
                    }
                }
            } else {
                for t in 0..config.trials {
                    let mut rng = rng_for(config.seed, i as u64 * config.trials + t);
                    let mut unavailable: Vec<usize> =
                        sample(&mut rng, others.len(), u).into_iter().map(|k| others[k]).collect();
                    unavailable.sort_unstable();
                    tally.record(sets, i, &unavailable);
                }
            }
            tally
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge);
    (tally, exhaustive)
}

impl SimulationReport {
    /// One row per symbol followed by an `all` row; fixed six-decimal output
    /// so equal reports serialize to identical bytes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("symbol,checks,successes,success_rate,mean_retrieved\n");
        for s in &self.per_symbol {
            let _ = writeln!(
                out,
                "{},{},{},{:.6},{:.6}",
                s.symbol, s.checks, s.successes, s.success_rate, s.mean_retrieved
            );
        }
        let checks: u64 = self.per_symbol.iter().map(|s| s.checks).sum();
        let successes: u64 = self.per_symbol.iter().map(|s| s.successes).sum();
        let _ = writeln!(out, "all,{checks},{successes},{:.6},{:.6}", ratio(successes, checks), self.mean_retrieved);
        out
    }
}
