//! Exact reference solvers. These are the oracles the randomized solvers are
//! checked against, and the fast path for small instances.

use crate::error::{Result, SolveError};
use crate::model::{BoundedInstance, DiffInstance, Item};

/// "Unreachable" marker for DP cells. Far below any achievable profit, and far
/// enough above `i64::MIN` that adding a profit never wraps.
pub const BOTTOM: i64 = i64::MIN / 4;

/// Anything below this is unreachable: cells derived from [`BOTTOM`] stay
/// below it as long as profits sum to at most `SAFE_SUM` in absolute value.
pub(crate) const BOTTOM_LIMIT: i64 = i64::MIN / 8;

/// Default cell budget for the dense oracles.
pub const DEFAULT_CELL_LIMIT: u64 = 4_000_000_000;

/// Hard item limit for [`brute_force_01`].
pub const BRUTE_FORCE_MAX_ITEMS: usize = 24;

/// One row of a windowed DP: `values[t]` holds the cell for weight
/// `offset + t`.
///
/// Cells hold the best profit at weight at most `j`, so rows are monotone.
/// A read below the window falls back to the all-items-skipped row (0 for a
/// nonnegative weight, [`BOTTOM`] for a negative one); a read above it also
/// sees the top cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpRow {
    pub offset: i64,
    pub values: Vec<i64>,
}

impl DpRow {
    /// The row before any item is considered, over `[low, high]`.
    pub fn initial(low: i64, high: i64) -> Self {
        let values = (low..=high).map(default_cell).collect();
        DpRow {
            offset: low,
            values,
        }
    }

    pub fn low(&self) -> i64 {
        self.offset
    }

    pub fn high(&self) -> i64 {
        self.offset + self.values.len() as i64 - 1
    }

    pub fn get(&self, j: i64) -> Option<i64> {
        if j < self.offset {
            return None;
        }
        self.values.get((j - self.offset) as usize).copied()
    }

    pub fn read(&self, j: i64) -> i64 {
        match self.get(j) {
            Some(v) => v,
            None if j > self.high() => default_cell(j).max(self.top()),
            None => default_cell(j),
        }
    }

    pub fn top(&self) -> i64 {
        self.values.last().copied().unwrap_or(BOTTOM)
    }
}

#[inline]
pub(crate) fn default_cell(j: i64) -> i64 {
    if j >= 0 {
        0
    } else {
        BOTTOM
    }
}

fn guard(solver: &'static str, needed: u128, limit: u64) -> Result<()> {
    if needed > limit as u128 {
        Err(SolveError::TooLarge {
            solver,
            needed,
            limit: limit as u128,
        })
    } else {
        Ok(())
    }
}

/// `f[j] = max(f[j], f[j - w] + p)` for every `j >= w`, in place.
///
/// Walks blocks of width `w` from the top down so each block only reads cells
/// below it that are still un-updated, which keeps the inner loop branch-free.
fn relax(f: &mut [i64], w: usize, p: i64) {
    let mut end = f.len();
    while end > w {
        let start = end.saturating_sub(w).max(w);
        let (below, above) = f.split_at_mut(start);
        let src = &below[start - w..end - w];
        for (dst, &s) in above[..end - start].iter_mut().zip(src) {
            *dst = (*dst).max(s + p);
        }
        end = start;
    }
}

fn capped_capacity(total_weight: i128, capacity: i64) -> i64 {
    (capacity as i128).min(total_weight).max(0) as i64
}

/// Classic `O(n·W)` 0-1 knapsack.
///
/// The table is only as wide as `min(W, Σw)`; `cell_limit` bounds
/// `n · (that + 1)`.
pub fn bellman_01(items: &[Item], capacity: i64, cell_limit: u64) -> Result<i64> {
    let f = bellman_01_row(items, capacity, cell_limit)?;
    Ok(*f.last().expect("row has at least one cell"))
}

/// The final row of [`bellman_01`]: best profit at weight at most `j` for
/// every `j` in `0..=min(W, Σw)`.
pub fn bellman_01_row(items: &[Item], capacity: i64, cell_limit: u64) -> Result<Vec<i64>> {
    let total: i128 = items.iter().map(|it| it.weight as i128).sum();
    let cap = capped_capacity(total, capacity);
    guard(
        "bellman_01",
        items.len() as u128 * (cap as u128 + 1),
        cell_limit,
    )?;
    let mut f = vec![0i64; cap as usize + 1];
    for it in items {
        relax(&mut f, it.weight as usize, it.profit);
    }
    Ok(f)
}

/// [`bellman_01`] that also returns the chosen item indices (ascending).
pub fn bellman_01_witness(
    items: &[Item],
    capacity: i64,
    cell_limit: u64,
) -> Result<(i64, Vec<usize>)> {
    let total: i128 = items.iter().map(|it| it.weight as i128).sum();
    let cap = capped_capacity(total, capacity) as usize;
    guard(
        "bellman_01",
        items.len() as u128 * (cap as u128 + 1),
        cell_limit,
    )?;
    let words = (cap + 1).div_ceil(64);
    let mut taken = vec![0u64; words * items.len()];
    let mut f = vec![0i64; cap + 1];
    for (i, it) in items.iter().enumerate() {
        let w = it.weight as usize;
        let bits = &mut taken[i * words..(i + 1) * words];
        for j in (w..=cap).rev() {
            let cand = f[j - w] + it.profit;
            if cand > f[j] {
                f[j] = cand;
                bits[j / 64] |= 1 << (j % 64);
            }
        }
    }
    let mut chosen = Vec::new();
    let mut j = cap;
    for i in (0..items.len()).rev() {
        if taken[i * words + j / 64] >> (j % 64) & 1 == 1 {
            chosen.push(i);
            j -= items[i].weight as usize;
        }
    }
    chosen.reverse();
    Ok((f[cap], chosen))
}

/// Splits `count` copies into bundles of 1, 2, 4, … plus a remainder, so that
/// every total in `0..=count` is a sum of a sub-multiset of bundles.
pub fn binary_split(count: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut left = count;
    let mut size = 1u64;
    while left > 0 {
        let take = size.min(left);
        out.push(take);
        left -= take;
        size <<= 1;
    }
    out
}

/// `(type index, copies)` bundles from binary-splitting every multiplicity.
fn bundles(instance: &BoundedInstance) -> Vec<(usize, u64)> {
    instance
        .items
        .iter()
        .enumerate()
        .flat_map(|(i, it)| {
            binary_split(it.multiplicity)
                .into_iter()
                .map(move |c| (i, c))
        })
        .collect()
}

/// Number of DP cells [`bellman_bounded`] would need.
pub fn bellman_bounded_cells(instance: &BoundedInstance) -> u128 {
    let n: u128 = instance
        .items
        .iter()
        .map(|it| 64 - it.multiplicity.leading_zeros() as u128)
        .sum();
    let cap = capped_capacity(instance.total_weight() as i128, instance.capacity);
    n * (cap as u128 + 1)
}

/// Exact bounded knapsack via binary decomposition into 0-1 bundles.
pub fn bellman_bounded(instance: &BoundedInstance, cell_limit: u64) -> Result<i64> {
    guard(
        "bellman_bounded",
        bellman_bounded_cells(instance),
        cell_limit,
    )?;
    let items: Vec<Item> = bundles(instance)
        .into_iter()
        .map(|(i, c)| {
            let it = instance.items[i];
            Item::new(it.weight * c as i64, it.profit * c as i64)
        })
        .collect();
    bellman_01(&items, instance.capacity, u64::MAX)
}

/// [`bellman_bounded`] plus per-type counts of an optimal solution.
pub fn bellman_bounded_witness(
    instance: &BoundedInstance,
    cell_limit: u64,
) -> Result<(i64, Vec<u64>)> {
    guard(
        "bellman_bounded",
        bellman_bounded_cells(instance),
        cell_limit,
    )?;
    let parts = bundles(instance);
    let items: Vec<Item> = parts
        .iter()
        .map(|&(i, c)| {
            let it = instance.items[i];
            Item::new(it.weight * c as i64, it.profit * c as i64)
        })
        .collect();
    let (profit, chosen) = bellman_01_witness(&items, instance.capacity, u64::MAX)?;
    let mut counts = vec![0u64; instance.items.len()];
    for b in chosen {
        counts[parts[b].0] += parts[b].1;
    }
    Ok((profit, counts))
}

/// Exhaustive search over all subsets. Returns the optimum and, among all
/// optimal subsets, the lexicographically smallest ascending index list.
pub fn brute_force_01(items: &[Item], capacity: i64) -> Result<(i64, Vec<usize>)> {
    guard(
        "brute_force_01",
        items.len() as u128,
        BRUTE_FORCE_MAX_ITEMS as u64,
    )?;
    let n = items.len();
    let mut best_profit = 0i64;
    let mut best_mask = 0u32;
    for mask in 1u32..(1u32 << n) {
        let mut w = 0i64;
        let mut p = 0i64;
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            w += items[i].weight;
            p += items[i].profit;
            bits &= bits - 1;
        }
        if w > capacity {
            continue;
        }
        if p > best_profit || (p == best_profit && lex_less(mask, best_mask)) {
            best_profit = p;
            best_mask = mask;
        }
    }
    let chosen = (0..n).filter(|&i| best_mask >> i & 1 == 1).collect();
    Ok((best_profit, chosen))
}

/// Lexicographic order of the ascending index lists encoded by two masks.
fn lex_less(a: u32, b: u32) -> bool {
    if a == b {
        return false;
    }
    // Both lists agree below the lowest differing index.
    let first = (a ^ b).trailing_zeros();
    let above = |m: u32| (m as u64) >> (first + 1) != 0;
    if a >> first & 1 == 1 {
        // b continues with a larger index (a < b) or has ended (b < a).
        above(b)
    } else {
        !above(a)
    }
}

/// Exact optimum of a difference instance: the best signed-profit subset whose
/// signed weight is at most the residual budget. Never negative.
///
/// Removals are processed before additions so the table spans
/// `[-Σ|removal weights|, W']` only. `cell_limit` bounds bundles × span.
pub fn diff_exact(diff: &DiffInstance, cell_limit: u64) -> Result<i64> {
    let budget = diff.residual_budget.max(0);
    let neg_total: i64 = diff
        .items
        .iter()
        .filter(|it| it.weight < 0)
        .map(|it| -it.weight * it.count as i64)
        .sum();
    let mut parts: Vec<Item> = Vec::new();
    for remove_phase in [true, false] {
        for it in diff
            .items
            .iter()
            .filter(|it| (it.weight < 0) == remove_phase)
        {
            for c in binary_split(it.count) {
                parts.push(Item::new(it.weight * c as i64, it.profit * c as i64));
            }
        }
    }
    let span = (neg_total + budget + 1) as u128;
    guard("diff_exact", parts.len() as u128 * span, cell_limit)?;

    let offset = neg_total;
    let len = (neg_total + budget + 1) as usize;
    let mut f: Vec<i64> = (0..len).map(|t| default_cell(t as i64 - offset)).collect();
    for part in parts {
        if part.weight < 0 {
            // f[j] reads f[j + |w|]; ascending keeps the source un-updated.
            // Above the table (weight > W' ≥ 0) only the empty set is optimal
            // while removals are being processed, i.e. 0.
            let s = (-part.weight) as usize;
            for t in 0..len {
                let src = if t + s < len { f[t + s] } else { 0 };
                if src > BOTTOM_LIMIT {
                    f[t] = f[t].max(src + part.profit);
                }
            }
        } else {
            let s = part.weight as usize;
            for t in (s.min(len)..len).rev() {
                let src = f[t - s];
                if src > BOTTOM_LIMIT {
                    f[t] = f[t].max(src + part.profit);
                }
            }
        }
    }
    Ok(f[len - 1].max(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ItemType, SignedItemType};

    fn items(v: &[(i64, i64)]) -> Vec<Item> {
        v.iter().map(|&(w, p)| Item::new(w, p)).collect()
    }

    #[test]
    fn bellman_01_examples() {
        let small = items(&[(2, 6), (3, 6), (4, 4)]);
        assert_eq!(bellman_01(&small, 6, u64::MAX).unwrap(), 12);
        assert_eq!(bellman_01(&[], 6, u64::MAX).unwrap(), 0);
        assert_eq!(bellman_01(&small, 1, u64::MAX).unwrap(), 0);
    }

    #[test]
    fn bellman_01_guard_trips() {
        let small = items(&[(2, 6), (3, 6), (4, 4)]);
        let err = bellman_01(&small, 6, 10).unwrap_err();
        assert!(err.is_guard());
    }

    #[test]
    fn bellman_01_witness_matches_value() {
        let small = items(&[(2, 6), (3, 6), (4, 4)]);
        let (p, chosen) = bellman_01_witness(&small, 6, u64::MAX).unwrap();
        assert_eq!(p, 12);
        assert_eq!(chosen, vec![0, 1]);
    }

    #[test]
    fn bellman_bounded_examples() {
        let inst = BoundedInstance::new(vec![ItemType::new(5, 5, 2), ItemType::new(4, 3, 2)], 8);
        assert_eq!(bellman_bounded(&inst, u64::MAX).unwrap(), 6);
        let (p, counts) = bellman_bounded_witness(&inst, u64::MAX).unwrap();
        assert_eq!((p, counts), (6, vec![0, 2]));

        let zero = BoundedInstance::new(inst.items.clone(), 0);
        assert_eq!(bellman_bounded(&zero, u64::MAX).unwrap(), 0);
    }

    #[test]
    fn binary_split_covers_every_count() {
        for m in 0..70u64 {
            let parts = binary_split(m);
            assert_eq!(parts.iter().sum::<u64>(), m);
            let mut reach = vec![false; m as usize + 1];
            reach[0] = true;
            for &p in &parts {
                for t in (p as usize..=m as usize).rev() {
                    reach[t] |= reach[t - p as usize];
                }
            }
            assert!(reach.iter().all(|&r| r), "m = {m}");
        }
    }

    #[test]
    fn brute_force_examples() {
        let small = items(&[(2, 6), (3, 6), (4, 4)]);
        assert_eq!(brute_force_01(&small, 6).unwrap(), (12, vec![0, 1]));
        assert_eq!(brute_force_01(&[], 6).unwrap(), (0, vec![]));
        assert_eq!(brute_force_01(&small, 100).unwrap(), (16, vec![0, 1, 2]));
        let too_many = vec![Item::new(1, 1); 25];
        assert!(brute_force_01(&too_many, 3).unwrap_err().is_guard());
    }

    #[test]
    fn brute_force_prefers_lexicographically_smallest() {
        // {0,3} and {1,2} and {2,3}... all weight 2 profit 2; smallest is {0,1}.
        let it = items(&[(1, 1), (1, 1), (1, 1), (1, 1)]);
        assert_eq!(brute_force_01(&it, 2).unwrap().1, vec![0, 1]);
        // {1} vs {0,2}: same profit 5; [0,2] < [1].
        let it = items(&[(2, 2), (4, 5), (2, 3)]);
        assert_eq!(brute_force_01(&it, 4).unwrap(), (5, vec![0, 2]));
        // [0] vs [0,1] is not a tie here but [0,2] < [1] < [1,2] ordering holds.
        assert!(lex_less(0b101, 0b010));
        assert!(lex_less(0b001, 0b011));
        assert!(!lex_less(0b011, 0b001));
        assert!(lex_less(0b011, 0b101));
        assert!(!lex_less(0b010, 0b101));
    }

    fn signed(w: i64, p: i64, count: u64) -> SignedItemType {
        SignedItemType {
            weight: w,
            profit: p,
            count,
            source: 0,
        }
    }

    #[test]
    fn diff_exact_examples() {
        let diff = DiffInstance {
            items: vec![signed(4, 3, 2), signed(5, 5, 1), signed(-5, -5, 1)],
            residual_budget: 3,
        };
        assert_eq!(diff_exact(&diff, u64::MAX).unwrap(), 1);
        assert_eq!(diff_exact(&DiffInstance::default(), u64::MAX).unwrap(), 0);
        let pos_only = DiffInstance {
            items: vec![signed(2, 9, 3)],
            residual_budget: 0,
        };
        assert_eq!(diff_exact(&pos_only, u64::MAX).unwrap(), 0);
    }
}
