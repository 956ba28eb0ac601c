//! Random-permutation windowed dynamic programming for 0-1 knapsack.
//!
//! After shuffling the items, the weight that a fixed optimal solution places
//! in the first `i` items is a sample without replacement, so it concentrates
//! around `i/n` of the optimum's total weight. The DP therefore only keeps a
//! window of `O(sqrt(i log n) · w_max)` weights around `i·W/n` in row `i`,
//! which brings the total work down to `Õ(n^{3/2} · w_max)`.
//!
//! Cells use "at most `j`" semantics: `f[i][j]` is the best profit of a subset
//! of the first `i` shuffled items with total weight at most `j`. A read below
//! the previous window returns 0 for `j >= 0` (the empty set) and bottom for
//! `j < 0`; a read above it may also use the window's top cell. Every stored
//! value is therefore the profit of some feasible subset, so the result can
//! only ever under-report the optimum.
//!
//! Items may carry negative weight and profit (removals in a difference
//! instance); the window then accounts for values in `[-w_max, w_max]`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

use crate::baselines::{default_cell, DpRow, BOTTOM_LIMIT};
use crate::error::{Result, SolveError};
use crate::model::{Item, Solution, SolveMeta, SAFE_SUM};

/// Default confidence exponent; per-step failure probability is
/// `2 (n+1)^-alpha`.
pub const DEFAULT_ALPHA: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowStep {
    pub center: i64,
    pub half_width: i64,
    pub low: i64,
    pub high: i64,
}

/// Window bounds for every DP row, `steps[i - 1]` for row `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowPlan {
    pub steps: Vec<WindowStep>,
    pub alpha: f64,
    /// `r - ℓ`, the spread of a single item's contribution.
    pub value_range: i64,
    /// Extra room below each center for an optimum lighter than the budget.
    pub slack: i64,
}

impl WindowPlan {
    pub fn total_cells(&self) -> u64 {
        self.steps
            .iter()
            .map(|s| (s.high - s.low + 1).max(0) as u64)
            .sum()
    }

    /// Union-bound probability that some row's window misses the optimum's
    /// prefix weight: `2 n (n+1)^-alpha`.
    pub fn failure_bound(&self) -> f64 {
        failure_bound(self.steps.len(), self.alpha)
    }
}

pub fn failure_bound(n: usize, alpha: f64) -> f64 {
    let n = n as f64;
    (2.0 * n * (n + 1.0).powf(-alpha)).min(1.0)
}

/// Half-width of row `i`'s window:
/// `ceil((r - ℓ) · sqrt(alpha · i · ln(n + 1) / 2))`.
pub fn half_width(i: usize, n: usize, value_range: i64, alpha: f64) -> i64 {
    let spread = (alpha * i as f64 * ((n + 1) as f64).ln() / 2.0).sqrt();
    (value_range as f64 * spread).ceil() as i64
}

/// Window schedule with the lower slack set to `max(|ℓ|, |r|)`.
pub fn window_schedule(
    n: usize,
    budget: i64,
    weight_lo: i64,
    weight_hi: i64,
    alpha: f64,
) -> WindowPlan {
    let slack = weight_lo.abs().max(weight_hi.abs());
    window_schedule_with_slack(n, budget, weight_lo, weight_hi, alpha, slack)
}

/// Row `i` covers `[μ_i - Δ_i - slack, μ_i + Δ_i]` with `μ_i = round(i·budget/n)`,
/// clamped to the weights reachable after `i` items, `[min(0, i·ℓ), max(0, i·r)]`.
/// With no negative weights (`ℓ >= 0`) the window is also capped at `budget`,
/// since cells above it can never feed the answer.
pub fn window_schedule_with_slack(
    n: usize,
    budget: i64,
    weight_lo: i64,
    weight_hi: i64,
    alpha: f64,
    slack: i64,
) -> WindowPlan {
    assert!(alpha >= 1.0, "alpha must be at least 1");
    let value_range = weight_hi - weight_lo;
    let unsigned = weight_lo >= 0;
    let steps = (1..=n)
        .map(|i| {
            let center = ((i as i128 * budget as i128 * 2 + n as i128) / (2 * n as i128)) as i64;
            let half_width = half_width(i, n, value_range, alpha);
            let reach_lo = (i as i64 * weight_lo).min(0);
            let reach_hi = (i as i64 * weight_hi).max(0);
            let mut low = (center - half_width - slack).max(reach_lo);
            let mut high = (center + half_width).min(reach_hi);
            if unsigned {
                high = high.min(budget.max(0));
            }
            // The center itself may lie outside the reachable range (e.g. a
            // budget above i·r); keep the window nonempty.
            if low > high {
                low = high;
            }
            WindowStep {
                center,
                half_width,
                low,
                high,
            }
        })
        .collect();
    WindowPlan {
        steps,
        alpha,
        value_range,
        slack,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermDpOptions {
    pub alpha: f64,
    pub seed: u64,
    pub want_witness: bool,
    /// Lower bound on the window slack. A reduced difference instance may have
    /// a smaller `w_max` than the instance it came from, while the optimum's
    /// distance below the budget is governed by the original one.
    pub min_slack: i64,
}

impl Default for PermDpOptions {
    fn default() -> Self {
        PermDpOptions {
            alpha: DEFAULT_ALPHA,
            seed: 0,
            want_witness: false,
            min_slack: 0,
        }
    }
}

/// What a run leaves behind for witness reconstruction.
#[derive(Debug, Clone)]
pub struct PermDpState {
    /// `permutation[t]` is the original index of the `t`-th processed item.
    pub permutation: Vec<usize>,
    /// Row 0 (initial) through row n when a witness was requested, otherwise
    /// only the last row.
    pub rows: Vec<DpRow>,
    pub rng_seed: u64,
    pub plan: WindowPlan,
    /// Cell holding the reported profit in the last row, if any.
    pub end_cell: Option<i64>,
}

#[derive(Debug, Clone)]
pub struct PermDpOutcome {
    /// Witness (when requested) lists original item indices with count 1.
    pub solution: Solution,
    pub state: PermDpState,
}

/// Runs the windowed DP over `items` with capacity `budget`.
pub fn permdp_solve(items: &[Item], budget: i64, opts: &PermDpOptions) -> Result<PermDpOutcome> {
    let start = Instant::now();
    let abs_profit: i128 = items.iter().map(|it| (it.profit as i128).abs()).sum();
    if abs_profit > SAFE_SUM {
        return Err(SolveError::Overflow);
    }
    let n = items.len();
    let w_max = items.iter().map(|it| it.weight.abs()).max().unwrap_or(0);
    let signed = items.iter().any(|it| it.weight < 0);
    let (lo, hi) = if signed { (-w_max, w_max) } else { (0, w_max) };

    // With only additions, an optimum that takes everything may sit far below
    // the budget; centering on min(budget, Σw) keeps it inside the windows.
    let center_budget = if signed {
        budget
    } else {
        let total: i128 = items.iter().map(|it| it.weight as i128).sum();
        (budget as i128).min(total) as i64
    };
    let slack = w_max.max(opts.min_slack);

    let mut permutation: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    permutation.shuffle(&mut rng);

    let mut plan = if n == 0 {
        WindowPlan {
            steps: Vec::new(),
            alpha: opts.alpha,
            value_range: hi - lo,
            slack,
        }
    } else {
        window_schedule_with_slack(n, center_budget, lo, hi, opts.alpha, slack)
    };
    clamp_to_prefix_sums(&mut plan, items, &permutation, budget);

    let mut rows = vec![DpRow::initial(0, 0)];
    let mut spare = Vec::new();
    for (step, &idx) in plan.steps.iter().zip(&permutation) {
        let prev = rows.last().expect("at least the initial row");
        let next = advance(prev, items[idx], step.low, step.high, spare);
        if opts.want_witness {
            rows.push(next);
            spare = Vec::new();
        } else {
            spare = std::mem::replace(&mut rows[0], next).values;
        }
    }

    let last = rows.last().expect("at least the initial row");
    let mut profit = 0i64;
    let mut end_cell = None;
    let top = last.high().min(budget);
    let mut j = last.low();
    while j <= top {
        let v = last.read(j);
        if v > profit {
            profit = v;
            end_cell = Some(j);
        }
        j += 1;
    }

    let mut state = PermDpState {
        permutation,
        rows,
        rng_seed: opts.seed,
        plan,
        end_cell,
    };
    let witness = if opts.want_witness {
        let chosen = match end_cell {
            Some(j) => reconstruct_witness(&state, items, j)?,
            None => Vec::new(),
        };
        Some(chosen.into_iter().map(|i| (i, 1)).collect())
    } else {
        None
    };
    if !opts.want_witness {
        state.rows.truncate(1);
    }

    let solution = Solution {
        profit,
        witness,
        meta: SolveMeta {
            algorithm: "permdp".into(),
            seed: Some(opts.seed),
            elapsed: start.elapsed(),
            dp_cells: state.plan.total_cells(),
            reduced_items: None,
        },
    };
    Ok(PermDpOutcome { solution, state })
}

/// Narrows every window to the sums the shuffled prefix can actually reach:
/// row `i` lies within `[negative mass of the first i, positive mass of the
/// first i]`, and nothing above `budget` plus the negative mass still to come
/// can end within the budget. Every subset's prefix sums stay inside, so this
/// never loses a solution.
fn clamp_to_prefix_sums(plan: &mut WindowPlan, items: &[Item], permutation: &[usize], budget: i64) {
    let mut neg_after: i64 = items.iter().map(|it| it.weight.min(0)).sum();
    let (mut neg, mut pos) = (0i64, 0i64);
    for (step, &idx) in plan.steps.iter_mut().zip(permutation) {
        let w = items[idx].weight;
        if w < 0 {
            neg += w;
            neg_after -= w;
        } else {
            pos += w;
        }
        let reach_hi = pos.min(budget.max(0) - neg_after);
        step.low = step.low.max(neg);
        step.high = step.high.min(reach_hi);
        if step.low > step.high {
            step.low = step.high;
        }
    }
}

/// Computes row `[low, high]` from `prev` for one item, reusing `values`.
///
/// Cells derived from bottom are not renormalised: profits sum to at most
/// `SAFE_SUM` in absolute value, so they stay below `BOTTOM_LIMIT`.
fn advance(prev: &DpRow, item: Item, low: i64, high: i64, mut values: Vec<i64>) -> DpRow {
    let len = (high - low + 1) as usize;
    values.clear();
    values.reserve(len);

    // Skip the item: copy the overlap, read through the row elsewhere.
    let (plo, phi) = (prev.low(), prev.high());
    let top = prev.top();
    for j in low..(plo.min(high + 1)) {
        values.push(default_cell(j));
    }
    let a = low.max(plo);
    let b = high.min(phi);
    if a <= b {
        values.extend_from_slice(&prev.values[(a - plo) as usize..=(b - plo) as usize]);
    }
    for j in (phi + 1).max(low)..=high {
        values.push(default_cell(j).max(top));
    }
    debug_assert_eq!(values.len(), len);

    // Take the item: source weight is j - w.
    let (w, p) = (item.weight, item.profit);
    let src_lo = low - w;
    let src_hi = high - w;
    let a = src_lo.max(plo);
    let b = src_hi.min(phi);
    if a <= b {
        let src = &prev.values[(a - plo) as usize..=(b - plo) as usize];
        let dst_start = (a + w - low) as usize;
        for (d, &s) in values[dst_start..dst_start + src.len()].iter_mut().zip(src) {
            *d = (*d).max(s.wrapping_add(p));
        }
    }
    // Sources below the previous window only exist for a nonnegative weight.
    let from = src_lo.max(0);
    let to = src_hi.min(plo - 1);
    if from <= to {
        for d in &mut values[(from + w - low) as usize..=(to + w - low) as usize] {
            *d = (*d).max(p);
        }
    }
    for src in src_lo.max(phi + 1)..=src_hi {
        let d = &mut values[(src + w - low) as usize];
        *d = (*d).max(default_cell(src).max(top) + p);
    }

    DpRow {
        offset: low,
        values,
    }
}

/// Backtracks from `end_cell` in the last row to the items on its chain.
///
/// Needs every row (the run must have requested a witness). Returns original
/// item indices in ascending order; their profit equals the end cell's value
/// and their weight is `end_cell - j0` for the chain's starting cell `j0 >= 0`.
pub fn reconstruct_witness(
    state: &PermDpState,
    items: &[Item],
    end_cell: i64,
) -> Result<Vec<usize>> {
    let n = state.permutation.len();
    if state.rows.len() != n + 1 {
        return Err(SolveError::Corrupt(format!(
            "witness needs {} rows, state holds {}",
            n + 1,
            state.rows.len()
        )));
    }
    let mut chosen = Vec::new();
    let mut j = end_cell;
    let mut value = state.rows[n].read(j);
    let mut i = n;
    while i > 0 {
        let row = &state.rows[i];
        if j > row.high() && value == row.top() && value > default_cell(j) {
            j = row.high();
        }
        if row.get(j).is_none() {
            // The chain entered through a default read: it starts here.
            break;
        }
        let prev = &state.rows[i - 1];
        let idx = state.permutation[i - 1];
        let item = items[idx];
        if prev.read(j) == value {
            i -= 1;
            continue;
        }
        let src = prev.read(j - item.weight);
        if src > BOTTOM_LIMIT && src + item.profit == value {
            chosen.push(idx);
            j -= item.weight;
            value = src;
            i -= 1;
            continue;
        }
        return Err(SolveError::Corrupt(format!(
            "row {i} cell {j} value {value} has no predecessor"
        )));
    }
    if value != 0 || j < 0 {
        return Err(SolveError::Corrupt(format!(
            "chain ended at weight {j} with residual value {value}"
        )));
    }
    chosen.sort_unstable();
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::{bellman_01, brute_force_01};

    fn items(v: &[(i64, i64)]) -> Vec<Item> {
        v.iter().map(|&(w, p)| Item::new(w, p)).collect()
    }

    #[test]
    fn half_width_matches_hand_evaluation() {
        // 10 · sqrt(4 · 25 · ln(101) / 2) = 10 · sqrt(230.76…) = 151.9…
        assert_eq!(half_width(25, 100, 10, 4.0), 152);
        let plan = window_schedule(100, 500, 0, 10, 4.0);
        assert_eq!(plan.steps[24].half_width, 152);
        assert_eq!(plan.steps[24].center, 125);
    }

    #[test]
    fn single_item_window_is_full_range() {
        let plan = window_schedule(1, 10, 0, 5, 4.0);
        assert_eq!((plan.steps[0].low, plan.steps[0].high), (0, 5));
    }

    #[test]
    fn last_window_covers_budget() {
        for &(n, budget, lo, hi) in &[
            (50, 400, 0, 16),
            (37, 3, -9, 9),
            (5, 0, 0, 4),
            (200, 7, -8, 8),
        ] {
            let plan = window_schedule(n, budget, lo, hi, 1.0);
            let last = plan.steps.last().unwrap();
            assert_eq!(last.center, budget);
            assert!(last.low <= budget && budget <= last.high);
            for s in &plan.steps {
                assert!(s.low <= s.high);
            }
        }
    }

    #[test]
    fn failure_bound_is_small_at_default_alpha() {
        assert!(failure_bound(16, 4.0) < 4e-4);
        assert_eq!(failure_bound(1, 1.0), 1.0);
    }

    #[test]
    fn solves_small_example() {
        let small = items(&[(2, 6), (3, 6), (4, 4)]);
        let opts = PermDpOptions {
            want_witness: true,
            ..Default::default()
        };
        let out = permdp_solve(&small, 6, &opts).unwrap();
        assert_eq!(out.solution.profit, 12);
        assert_eq!(out.solution.witness, Some(vec![(0, 1), (1, 1)]));
    }

    #[test]
    fn single_item_and_empty() {
        let one = items(&[(3, 7)]);
        assert_eq!(
            permdp_solve(&one, 3, &Default::default())
                .unwrap()
                .solution
                .profit,
            7
        );
        assert_eq!(
            permdp_solve(&one, 2, &Default::default())
                .unwrap()
                .solution
                .profit,
            0
        );
        assert_eq!(
            permdp_solve(&[], 9, &Default::default())
                .unwrap()
                .solution
                .profit,
            0
        );
    }

    #[test]
    fn all_too_heavy_gives_empty_witness() {
        let it = items(&[(8, 3), (9, 4)]);
        let opts = PermDpOptions {
            want_witness: true,
            ..Default::default()
        };
        let out = permdp_solve(&it, 5, &opts).unwrap();
        assert_eq!(out.solution.profit, 0);
        assert_eq!(out.solution.witness, Some(vec![]));
    }

    #[test]
    fn signed_diff_example() {
        // Additions (4,3)x2, (5,5); removal (-5,-5); budget 3.
        let it = items(&[(4, 3), (4, 3), (5, 5), (-5, -5)]);
        for seed in 0..20 {
            let opts = PermDpOptions {
                seed,
                want_witness: true,
                ..Default::default()
            };
            let out = permdp_solve(&it, 3, &opts).unwrap();
            assert_eq!(out.solution.profit, 1, "seed {seed}");
            let w = out.solution.witness.unwrap();
            let weight: i64 = w.iter().map(|&(i, _)| it[i].weight).sum();
            let profit: i64 = w.iter().map(|&(i, _)| it[i].profit).sum();
            assert!(weight <= 3);
            assert_eq!(profit, 1);
        }
    }

    #[test]
    fn never_exceeds_bellman_even_at_alpha_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        use rand::Rng;
        for _ in 0..200 {
            let n = rng.gen_range(1..=40);
            let it: Vec<Item> = (0..n)
                .map(|_| Item::new(rng.gen_range(1..=20), rng.gen_range(1..=20)))
                .collect();
            let cap = rng.gen_range(0..=it.iter().map(|i| i.weight).sum::<i64>());
            let exact = bellman_01(&it, cap, u64::MAX).unwrap();
            let opts = PermDpOptions {
                alpha: 1.0,
                seed: rng.gen(),
                ..Default::default()
            };
            assert!(permdp_solve(&it, cap, &opts).unwrap().solution.profit <= exact);
        }
    }

    #[test]
    fn full_windows_reproduce_the_exact_row() {
        // Row 2 reaches weight 12 only by skipping (5,1) after (10,100).
        let it = items(&[(10, 100), (5, 1), (3, 7)]);
        let exact = crate::baselines::bellman_01_row(&it, 18, u64::MAX).unwrap();
        for seed in 0..12 {
            let opts = PermDpOptions {
                alpha: 64.0,
                seed,
                want_witness: true,
                ..Default::default()
            };
            let out = permdp_solve(&it, 18, &opts).unwrap();
            let last = out.state.rows.last().unwrap();
            assert_eq!((last.low(), last.high()), (0, 18));
            assert_eq!(last.values, exact, "seed {seed}");
            assert_eq!(out.solution.profit, 108);
        }
    }

    #[test]
    fn witness_needs_all_rows() {
        let small = items(&[(2, 6), (3, 6), (4, 4)]);
        let out = permdp_solve(&small, 6, &Default::default()).unwrap();
        assert!(matches!(
            reconstruct_witness(&out.state, &small, 5),
            Err(SolveError::Corrupt(_))
        ));
    }

    #[test]
    fn matches_brute_force_on_small_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        use rand::Rng;
        for _ in 0..100 {
            let n = rng.gen_range(1..=14);
            let it: Vec<Item> = (0..n)
                .map(|_| Item::new(rng.gen_range(1..=30), rng.gen_range(1..=30)))
                .collect();
            let cap = rng.gen_range(0..=it.iter().map(|i| i.weight).sum::<i64>());
            let (want, _) = brute_force_01(&it, cap).unwrap();
            let opts = PermDpOptions {
                seed: rng.gen(),
                want_witness: true,
                ..Default::default()
            };
            let out = permdp_solve(&it, cap, &opts).unwrap();
            assert_eq!(out.solution.profit, want);
            let w = out.solution.witness.unwrap();
            assert_eq!(w.iter().map(|&(i, _)| it[i].profit).sum::<i64>(), want);
            assert!(w.iter().map(|&(i, _)| it[i].weight).sum::<i64>() <= cap);
        }
    }
}
