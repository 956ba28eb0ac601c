//! End-to-end solvers with algorithm selection.
//!
//! `solve_01` runs the windowed DP on a 0-1 instance. `solve_bounded` runs the
//! bounded pipeline: greedy prefix, difference instance, item reduction,
//! windowed DP over the reduced signed items, recombination. In `auto` mode
//! both fall back to the exact Bellman DP when the table is small.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::baselines::{
    bellman_01, bellman_01_witness, bellman_bounded, bellman_bounded_cells,
    bellman_bounded_witness, brute_force_01, DEFAULT_CELL_LIMIT,
};
use crate::egreduce::{reduce_items, ReductionConfig, ReductionReport};
use crate::error::{Result, SolveError};
use crate::model::{validate, BoundedInstance, DiffInstance, Item, Solution, SolveMeta};
use crate::permdp::{permdp_solve, PermDpOptions, DEFAULT_ALPHA};
use crate::proximity::{build_diff_instance, greedy_prefix, recombine, GreedyPrefix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Auto,
    Bellman,
    PermDp,
    Pipeline,
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Auto,
        Algorithm::Bellman,
        Algorithm::PermDp,
        Algorithm::Pipeline,
        Algorithm::Brute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Bellman => "bellman",
            Algorithm::PermDp => "permdp",
            Algorithm::Pipeline => "pipeline",
            Algorithm::Brute => "brute",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub alpha: f64,
    /// Proximity safety factor for the item reduction.
    pub safety: f64,
    pub seed: u64,
    pub witness: bool,
    /// `auto` uses the exact DP when it needs at most this many cells.
    pub auto_cell_limit: u64,
    /// Hard guard for explicitly requested exact DPs.
    pub oracle_cell_limit: u64,
    /// Hard guard on copies materialised for the windowed DP.
    pub max_expanded_items: u64,
    pub parallel_reduction: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            algorithm: Algorithm::Auto,
            alpha: DEFAULT_ALPHA,
            safety: 2.0,
            seed: 0,
            witness: false,
            auto_cell_limit: 10_000_000,
            oracle_cell_limit: DEFAULT_CELL_LIMIT,
            max_expanded_items: 5_000_000,
            parallel_reduction: false,
        }
    }
}

impl SolverConfig {
    pub fn with_algorithm(algorithm: Algorithm) -> Self {
        SolverConfig {
            algorithm,
            ..Default::default()
        }
    }

    pub fn reduction(&self) -> ReductionConfig {
        ReductionConfig {
            safety: self.safety,
            parallel: self.parallel_reduction,
            ..Default::default()
        }
    }

    fn check(&self) -> Result<()> {
        if self.alpha.is_nan() || self.safety.is_nan() || self.alpha < 1.0 || self.safety < 1.0 {
            return Err(SolveError::Corrupt(format!(
                "alpha ({}) and safety ({}) must both be at least 1",
                self.alpha, self.safety
            )));
        }
        Ok(())
    }
}

/// Seed stream for the windowed DP's shuffle.
pub const PHASE_PERMUTATION: u64 = 1;
/// Seed stream for the windowed DP inside the bounded pipeline.
pub const PHASE_PIPELINE_DIFF: u64 = 2;

/// Per-phase seed: splitmix64 applied to `master + phase · 0x9E3779B97F4A7C15`.
pub fn derive_seed(master: u64, phase: u64) -> u64 {
    let mut z = master.wrapping_add(phase.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn ensure_valid(instance: &BoundedInstance) -> Result<()> {
    let violations = validate(instance);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(SolveError::Invalid(violations))
    }
}

fn counts_to_witness(counts: &[u64]) -> Vec<(usize, u64)> {
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (i, c))
        .collect()
}

fn indices_to_witness(chosen: impl IntoIterator<Item = usize>, len: usize) -> Vec<(usize, u64)> {
    let mut counts = vec![0u64; len];
    for i in chosen {
        counts[i] += 1;
    }
    counts_to_witness(&counts)
}

fn finish(mut solution: Solution, name: String, seed: Option<u64>, start: Instant) -> Solution {
    solution.meta.algorithm = name;
    solution.meta.seed = seed;
    solution.meta.elapsed = start.elapsed();
    solution
}

/// 0-1 knapsack.
pub fn solve_01(items: &[Item], capacity: i64, config: &SolverConfig) -> Result<Solution> {
    let start = Instant::now();
    config.check()?;
    let instance = BoundedInstance::from_01(items, capacity);
    ensure_valid(&instance)?;
    let (algorithm, label) = match config.algorithm {
        Algorithm::Auto => {
            let total: i64 = items.iter().map(|it| it.weight).sum();
            let cells = items.len() as u128 * (capacity.min(total) as u128 + 1);
            if cells <= config.auto_cell_limit as u128 {
                (Algorithm::Bellman, "auto:bellman".to_string())
            } else {
                (Algorithm::PermDp, "auto:permdp".to_string())
            }
        }
        a => (a, a.name().to_string()),
    };
    let n = items.len();
    match algorithm {
        Algorithm::Bellman => {
            let solution = if config.witness {
                let (profit, chosen) =
                    bellman_01_witness(items, capacity, config.oracle_cell_limit)?;
                Solution {
                    profit,
                    witness: Some(indices_to_witness(chosen, n)),
                    ..Default::default()
                }
            } else {
                Solution {
                    profit: bellman_01(items, capacity, config.oracle_cell_limit)?,
                    ..Default::default()
                }
            };
            Ok(finish(solution, label, None, start))
        }
        Algorithm::Brute => {
            let (profit, chosen) = brute_force_01(items, capacity)?;
            let solution = Solution {
                profit,
                witness: config.witness.then(|| indices_to_witness(chosen, n)),
                ..Default::default()
            };
            Ok(finish(solution, label, None, start))
        }
        Algorithm::PermDp => {
            let opts = PermDpOptions {
                alpha: config.alpha,
                seed: derive_seed(config.seed, PHASE_PERMUTATION),
                want_witness: config.witness,
                min_slack: 0,
            };
            let out = permdp_solve(items, capacity, &opts)?;
            Ok(finish(out.solution, label, Some(config.seed), start))
        }
        Algorithm::Pipeline => {
            let mut solution = solve_bounded(&instance, config)?;
            solution.meta.algorithm = label;
            Ok(solution)
        }
        Algorithm::Auto => unreachable!("resolved above"),
    }
}

/// Bounded knapsack.
pub fn solve_bounded(instance: &BoundedInstance, config: &SolverConfig) -> Result<Solution> {
    let start = Instant::now();
    config.check()?;
    ensure_valid(instance)?;
    let (algorithm, label) = match config.algorithm {
        Algorithm::Auto => {
            if bellman_bounded_cells(instance) <= config.auto_cell_limit as u128 {
                (Algorithm::Bellman, "auto:bellman".to_string())
            } else {
                (Algorithm::Pipeline, "auto:pipeline".to_string())
            }
        }
        a => (a, a.name().to_string()),
    };
    match algorithm {
        Algorithm::Bellman => {
            let solution = if config.witness {
                let (profit, counts) = bellman_bounded_witness(instance, config.oracle_cell_limit)?;
                Solution {
                    profit,
                    witness: Some(counts_to_witness(&counts)),
                    ..Default::default()
                }
            } else {
                Solution {
                    profit: bellman_bounded(instance, config.oracle_cell_limit)?,
                    ..Default::default()
                }
            };
            Ok(finish(solution, label, None, start))
        }
        Algorithm::Brute => {
            if instance.total_copies() > crate::baselines::BRUTE_FORCE_MAX_ITEMS as u64 {
                return Err(SolveError::TooLarge {
                    solver: "brute_force_01",
                    needed: instance.total_copies() as u128,
                    limit: crate::baselines::BRUTE_FORCE_MAX_ITEMS as u128,
                });
            }
            let (items, source) = instance.expand();
            let (profit, chosen) = brute_force_01(&items, instance.capacity)?;
            let solution = Solution {
                profit,
                witness: config.witness.then(|| {
                    indices_to_witness(chosen.into_iter().map(|i| source[i]), instance.items.len())
                }),
                ..Default::default()
            };
            Ok(finish(solution, label, None, start))
        }
        Algorithm::PermDp => {
            guard_expansion(instance.total_copies(), config)?;
            let (items, source) = instance.expand();
            let opts = PermDpOptions {
                alpha: config.alpha,
                seed: derive_seed(config.seed, PHASE_PERMUTATION),
                want_witness: config.witness,
                min_slack: 0,
            };
            let mut out = permdp_solve(&items, instance.capacity, &opts)?;
            out.solution.witness = out.solution.witness.map(|w| {
                indices_to_witness(w.into_iter().map(|(i, _)| source[i]), instance.items.len())
            });
            Ok(finish(out.solution, label, Some(config.seed), start))
        }
        Algorithm::Pipeline => {
            let out = pipeline_solve(instance, config)?;
            Ok(finish(out.solution, label, Some(config.seed), start))
        }
        Algorithm::Auto => unreachable!("resolved above"),
    }
}

fn guard_expansion(copies: u64, config: &SolverConfig) -> Result<()> {
    if copies > config.max_expanded_items {
        return Err(SolveError::TooLarge {
            solver: "permdp",
            needed: copies as u128,
            limit: config.max_expanded_items as u128,
        });
    }
    Ok(())
}

/// Intermediate products of one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub solution: Solution,
    pub prefix: GreedyPrefix,
    pub diff: DiffInstance,
    pub reduced: DiffInstance,
    pub report: ReductionReport,
}

/// Greedy prefix, difference instance, item reduction, windowed DP on the
/// reduced signed items, recombination.
pub fn pipeline_solve(
    instance: &BoundedInstance,
    config: &SolverConfig,
) -> Result<PipelineOutcome> {
    let start = Instant::now();
    config.check()?;
    ensure_valid(instance)?;
    let prefix = greedy_prefix(instance);
    let diff = build_diff_instance(instance, &prefix);

    if prefix.takes_everything() {
        let solution = Solution {
            profit: prefix.profit,
            witness: config.witness.then(|| counts_to_witness(&prefix.taken)),
            meta: SolveMeta {
                reduced_items: Some(0),
                ..Default::default()
            },
        };
        return Ok(PipelineOutcome {
            solution: finish(solution, "pipeline".into(), Some(config.seed), start),
            prefix,
            reduced: DiffInstance {
                items: Vec::new(),
                residual_budget: diff.residual_budget,
            },
            diff,
            report: ReductionReport::default(),
        });
    }

    let w_max = instance.w_max();
    let (reduced, report) = reduce_items(&diff, w_max as u64, &config.reduction());
    guard_expansion(reduced.total_copies(), config)?;
    let (items, source) = reduced.expand();
    let opts = PermDpOptions {
        alpha: config.alpha,
        seed: derive_seed(config.seed, PHASE_PIPELINE_DIFF),
        want_witness: config.witness,
        min_slack: w_max,
    };
    let out = permdp_solve(&items, reduced.residual_budget, &opts)?;
    let mut diff_solution = out.solution;
    diff_solution.witness = diff_solution
        .witness
        .map(|w| indices_to_witness(w.into_iter().map(|(i, _)| source[i]), reduced.items.len()));
    let mut solution = recombine(instance, &prefix, &reduced, &diff_solution)?;
    solution.meta.reduced_items = Some(reduced.total_copies());
    Ok(PipelineOutcome {
        solution: finish(solution, "pipeline".into(), Some(config.seed), start),
        prefix,
        diff,
        reduced,
        report,
    })
}
