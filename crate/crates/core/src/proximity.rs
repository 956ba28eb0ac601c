//! Greedy maximal prefix and the reduction of bounded knapsack to a
//! difference problem over additions and removals.
//!
//! Some optimal solution differs from the greedy prefix in only `O(w_max)`
//! copies, and the residual budget after the prefix is below `w_max`. The
//! solver therefore only has to decide which untaken copies to add and which
//! taken copies to drop.

use crate::error::{Result, SolveError};
use crate::model::{efficiency_order, BoundedInstance, DiffInstance, SignedItemType, Solution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyPrefix {
    /// Type indices by decreasing efficiency.
    pub order: Vec<usize>,
    /// Copies taken per type (indexed by type, not by position in `order`).
    pub taken: Vec<u64>,
    pub profit: i64,
    pub weight: i64,
    /// `W - weight`.
    pub residual: i64,
    /// Position in `order` of the first type with an untaken copy, `None` if
    /// every copy fits.
    pub split: Option<usize>,
}

impl GreedyPrefix {
    pub fn takes_everything(&self) -> bool {
        self.split.is_none()
    }
}

/// Takes copies in efficiency order and stops at the first copy that does not
/// fit. Works on counts, never on expanded copies.
pub fn greedy_prefix(instance: &BoundedInstance) -> GreedyPrefix {
    let order = efficiency_order(&instance.items);
    let mut taken = vec![0u64; instance.items.len()];
    let mut remaining = instance.capacity;
    let mut profit = 0i64;
    let mut split = None;
    for (pos, &t) in order.iter().enumerate() {
        let it = instance.items[t];
        let fit = (remaining / it.weight) as u64;
        let c = fit.min(it.multiplicity);
        taken[t] = c;
        remaining -= c as i64 * it.weight;
        profit += c as i64 * it.profit;
        if c < it.multiplicity {
            split = Some(pos);
            break;
        }
    }
    GreedyPrefix {
        order,
        taken,
        profit,
        weight: instance.capacity - remaining,
        residual: remaining,
        split,
    }
}

/// Additions are the untaken copies, `(+w, +p)`, in decreasing efficiency;
/// removals are the taken copies, `(-w, -p)`, in increasing efficiency. Every
/// diff item's `source` is its original type index.
pub fn build_diff_instance(instance: &BoundedInstance, prefix: &GreedyPrefix) -> DiffInstance {
    let mut items = Vec::new();
    for &t in &prefix.order {
        let it = instance.items[t];
        let left = it.multiplicity - prefix.taken[t];
        if left > 0 {
            items.push(SignedItemType {
                weight: it.weight,
                profit: it.profit,
                count: left,
                source: t,
            });
        }
    }
    for &t in prefix.order.iter().rev() {
        let it = instance.items[t];
        if prefix.taken[t] > 0 {
            items.push(SignedItemType {
                weight: -it.weight,
                profit: -it.profit,
                count: prefix.taken[t],
                source: t,
            });
        }
    }
    DiffInstance {
        items,
        residual_budget: prefix.residual,
    }
}

/// Adds a difference solution onto the greedy prefix.
///
/// A diff witness lists `(diff item index, count)`; it is merged into per-type
/// counts and validated against the instance.
pub fn recombine(
    instance: &BoundedInstance,
    prefix: &GreedyPrefix,
    diff: &DiffInstance,
    diff_solution: &Solution,
) -> Result<Solution> {
    let meta = diff_solution.meta.clone();
    let witness = match &diff_solution.witness {
        None => None,
        Some(picks) => {
            let mut counts: Vec<i128> = prefix.taken.iter().map(|&c| c as i128).collect();
            for &(d, c) in picks {
                let item = diff.items.get(d).ok_or_else(|| {
                    SolveError::Corrupt(format!("diff witness references item {d}"))
                })?;
                if c > item.count {
                    return Err(SolveError::Corrupt(format!(
                        "diff item {d} picked {c} times, only {} available",
                        item.count
                    )));
                }
                if item.is_addition() {
                    counts[item.source] += c as i128;
                } else {
                    counts[item.source] -= c as i128;
                }
            }
            let mut merged = Vec::new();
            for (t, &c) in counts.iter().enumerate() {
                if c < 0 || c > instance.items[t].multiplicity as i128 {
                    return Err(SolveError::Corrupt(format!(
                        "type {t} ends with count {c}, multiplicity {}",
                        instance.items[t].multiplicity
                    )));
                }
                if c > 0 {
                    merged.push((t, c as u64));
                }
            }
            Some(merged)
        }
    };
    let solution = Solution {
        profit: prefix.profit + diff_solution.profit,
        witness,
        meta,
    };
    solution
        .check_witness(instance)
        .map_err(SolveError::Corrupt)?;
    Ok(solution)
}
