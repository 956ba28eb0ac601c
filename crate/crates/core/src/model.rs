//! Domain types shared by every solver, plus instance validation and the
//! canonical efficiency ordering.

use std::cmp::Ordering;
use std::fmt;
use std::time::Duration;

/// Upper bound on any accumulated weight or profit sum.
///
/// The dynamic programs keep a "bottom" sentinel at `i64::MIN / 4` and let
/// it drift by at most one profit per row before renormalising, so every
/// achievable sum has to stay well inside `2^58`.
pub const SAFE_SUM: i128 = 1 << 58;

/// One item type of a bounded instance: `multiplicity` interchangeable copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ItemType {
    pub weight: i64,
    pub profit: i64,
    pub multiplicity: u64,
}

impl ItemType {
    pub fn new(weight: i64, profit: i64, multiplicity: u64) -> Self {
        ItemType {
            weight,
            profit,
            multiplicity,
        }
    }

    /// A single-copy item.
    pub fn single(weight: i64, profit: i64) -> Self {
        ItemType::new(weight, profit, 1)
    }
}

/// Bounded knapsack instance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoundedInstance {
    pub items: Vec<ItemType>,
    pub capacity: i64,
}

impl BoundedInstance {
    pub fn new(items: Vec<ItemType>, capacity: i64) -> Self {
        BoundedInstance { items, capacity }
    }

    /// Builds a 0-1 instance (all multiplicities 1).
    pub fn from_01(items: &[Item], capacity: i64) -> Self {
        BoundedInstance {
            items: items
                .iter()
                .map(|it| ItemType::single(it.weight, it.profit))
                .collect(),
            capacity,
        }
    }

    pub fn w_max(&self) -> i64 {
        self.items.iter().map(|it| it.weight).max().unwrap_or(0)
    }

    pub fn p_max(&self) -> i64 {
        self.items.iter().map(|it| it.profit).max().unwrap_or(0)
    }

    pub fn total_copies(&self) -> u64 {
        self.items.iter().map(|it| it.multiplicity).sum()
    }

    pub fn total_weight(&self) -> i64 {
        self.items
            .iter()
            .map(|it| it.weight * it.multiplicity as i64)
            .sum()
    }

    pub fn is_01(&self) -> bool {
        self.items.iter().all(|it| it.multiplicity == 1)
    }

    /// Every copy as a separate 0-1 item, with the originating type index.
    pub fn expand(&self) -> (Vec<Item>, Vec<usize>) {
        let mut items = Vec::new();
        let mut source = Vec::new();
        for (idx, it) in self.items.iter().enumerate() {
            for _ in 0..it.multiplicity {
                items.push(Item::new(it.weight, it.profit));
                source.push(idx);
            }
        }
        (items, source)
    }
}

/// A single 0-1 item. Weight and profit are signed so the same type carries
/// the removal items of a difference instance, which have both negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Item {
    pub weight: i64,
    pub profit: i64,
}

impl Item {
    pub fn new(weight: i64, profit: i64) -> Self {
        Item { weight, profit }
    }
}

/// A signed item with a copy count, as produced by the greedy-prefix
/// reduction. `source` is the index of the originating [`ItemType`].
///
/// Items that may be added have positive weight and profit; items that may be
/// removed from the greedy prefix have both negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedItemType {
    pub weight: i64,
    pub profit: i64,
    pub count: u64,
    pub source: usize,
}

impl SignedItemType {
    pub fn is_addition(&self) -> bool {
        self.weight > 0
    }
}

/// Residual problem: pick additions and removals maximising the profit
/// change while the signed weight change stays within `residual_budget`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffInstance {
    pub items: Vec<SignedItemType>,
    pub residual_budget: i64,
}

impl DiffInstance {
    pub fn total_copies(&self) -> u64 {
        self.items.iter().map(|it| it.count).sum()
    }

    pub fn w_max(&self) -> i64 {
        self.items
            .iter()
            .map(|it| it.weight.abs())
            .max()
            .unwrap_or(0)
    }

    /// Every copy as a separate signed item, with the index of the diff item
    /// type it came from.
    pub fn expand(&self) -> (Vec<Item>, Vec<usize>) {
        let mut items = Vec::with_capacity(self.total_copies() as usize);
        let mut source = Vec::with_capacity(items.capacity());
        for (idx, it) in self.items.iter().enumerate() {
            for _ in 0..it.count {
                items.push(Item::new(it.weight, it.profit));
                source.push(idx);
            }
        }
        (items, source)
    }
}

/// Bookkeeping attached to every solve.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolveMeta {
    pub algorithm: String,
    pub seed: Option<u64>,
    pub elapsed: Duration,
    /// Number of DP cells evaluated (0 for enumeration).
    pub dp_cells: u64,
    /// Size of the reduced difference instance, pipeline only.
    pub reduced_items: Option<u64>,
}

/// Optimal profit with an optional witness of `(item index, count)` pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Solution {
    pub profit: i64,
    pub witness: Option<Vec<(usize, u64)>>,
    pub meta: SolveMeta,
}

impl Solution {
    /// Checks the witness (if any) against `instance`: counts within
    /// multiplicities, weight within capacity and profit equal to `self.profit`.
    pub fn check_witness(&self, instance: &BoundedInstance) -> Result<(), String> {
        let Some(witness) = &self.witness else {
            return Ok(());
        };
        let mut weight: i128 = 0;
        let mut profit: i128 = 0;
        let mut seen = vec![0u64; instance.items.len()];
        for &(idx, count) in witness {
            let Some(it) = instance.items.get(idx) else {
                return Err(format!("witness references item {idx} out of range"));
            };
            seen[idx] += count;
            if seen[idx] > it.multiplicity {
                return Err(format!(
                    "item {idx} taken {} times but multiplicity is {}",
                    seen[idx], it.multiplicity
                ));
            }
            weight += it.weight as i128 * count as i128;
            profit += it.profit as i128 * count as i128;
        }
        if weight > instance.capacity as i128 {
            return Err(format!(
                "witness weight {weight} exceeds capacity {}",
                instance.capacity
            ));
        }
        if profit != self.profit as i128 {
            return Err(format!(
                "witness profit {profit} differs from reported {}",
                self.profit
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NonPositiveWeight,
    NonPositiveProfit,
    ZeroMultiplicity,
    NegativeCapacity,
    WeightSumTooLarge,
    ProfitSumTooLarge,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::NonPositiveWeight => "weight ≥ 1",
            ViolationKind::NonPositiveProfit => "profit ≥ 1",
            ViolationKind::ZeroMultiplicity => "multiplicity ≥ 1",
            ViolationKind::NegativeCapacity => "capacity ≥ 0",
            ViolationKind::WeightSumTooLarge => "total weight fits in 2^58",
            ViolationKind::ProfitSumTooLarge => "total profit fits in 2^58",
        };
        f.write_str(s)
    }
}

/// A broken invariant, with the offending item index when there is one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub item: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.item {
            Some(i) => write!(f, "item {i}: {}", self.kind),
            None => write!(f, "instance: {}", self.kind),
        }
    }
}

/// Lists every violated invariant. An empty list means the instance is valid.
pub fn validate(instance: &BoundedInstance) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut weight_sum: i128 = 0;
    let mut profit_sum: i128 = 0;
    for (i, it) in instance.items.iter().enumerate() {
        if it.weight < 1 {
            out.push(Violation {
                item: Some(i),
                kind: ViolationKind::NonPositiveWeight,
            });
        }
        if it.profit < 1 {
            out.push(Violation {
                item: Some(i),
                kind: ViolationKind::NonPositiveProfit,
            });
        }
        if it.multiplicity < 1 {
            out.push(Violation {
                item: Some(i),
                kind: ViolationKind::ZeroMultiplicity,
            });
        }
        weight_sum += it.weight.max(0) as i128 * it.multiplicity as i128;
        profit_sum += it.profit.max(0) as i128 * it.multiplicity as i128;
    }
    if instance.capacity < 0 {
        out.push(Violation {
            item: None,
            kind: ViolationKind::NegativeCapacity,
        });
    }
    if weight_sum > SAFE_SUM {
        out.push(Violation {
            item: None,
            kind: ViolationKind::WeightSumTooLarge,
        });
    }
    if profit_sum > SAFE_SUM {
        out.push(Violation {
            item: None,
            kind: ViolationKind::ProfitSumTooLarge,
        });
    }
    out
}

/// Compares two items by efficiency `p/w`, higher first; ties go to the
/// smaller weight, then the smaller index. Exact (cross-multiplied in i128).
pub fn compare_efficiency(a: (i64, i64, usize), b: (i64, i64, usize)) -> Ordering {
    let (wa, pa, ia) = a;
    let (wb, pb, ib) = b;
    let lhs = pa as i128 * wb as i128;
    let rhs = pb as i128 * wa as i128;
    rhs.cmp(&lhs).then(wa.cmp(&wb)).then(ia.cmp(&ib))
}

/// Type indices sorted by decreasing efficiency.
pub fn efficiency_order(items: &[ItemType]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        compare_efficiency(
            (items[a].weight, items[a].profit, a),
            (items[b].weight, items[b].profit, b),
        )
    });
    order
}
