//! Item reduction for the difference instance.
//!
//! Computes, per weight, how many copies can possibly take part in the
//! difference between the greedy prefix and some optimal solution, so that
//! only `Õ(w_max)` copies remain out of an arbitrary number.
//!
//! Each direction (additions, removals) is streamed in its own efficiency
//! order: best-first for additions, worst-first for removals. For every dyadic
//! weight batch `[w, 2w)` and every dyadic level `r` with
//! `k = ceil(s · w_max / r)`:
//!
//! * a weight "triggers" once `2r + 2` of its copies have been seen;
//! * the first `9k` triggering weights become the initial bases `B`;
//! * afterwards a triggering weight is capped if it is divisible by every
//!   possible gcd of `B` minus any `k` of its elements. Then a multiple of it
//!   above `w²/k` is a nonnegative combination of surviving bases (bounded
//!   Frobenius number), so at most `floor(w² / (k·wt))` further copies are
//!   useful. Otherwise it joins `B`.
//!
//! The gcd test is relaxed to per-prime exponent bounds `q_p` that only ever
//! decrease: a prime is tracked while fewer than `k + 1` bases avoid it, and
//! once `k + 1` new bases have a smaller exponent, `q_p` drops to the largest
//! of those exponents. `s` is a safety factor on the number of copies in
//! which an optimal solution may differ from the greedy prefix.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::model::{compare_efficiency, DiffInstance, SignedItemType};

/// Smallest-prime-factor table for `0..=limit`.
#[derive(Debug, Clone)]
pub struct FactorTable {
    spf: Vec<u32>,
}

impl FactorTable {
    pub fn limit(&self) -> u64 {
        self.spf.len() as u64 - 1
    }

    /// Least prime divisor of `n`, or `None` for 0 and 1.
    pub fn spf(&self, n: u64) -> Option<u64> {
        match self.spf[n as usize] {
            0 => None,
            p => Some(p as u64),
        }
    }

    /// Prime factorization of `n` as ascending `(prime, exponent)` pairs.
    pub fn factorize(&self, mut n: u64) -> Vec<(u64, u32)> {
        assert!(n >= 1 && n <= self.limit(), "{n} outside sieve range");
        let mut out: Vec<(u64, u32)> = Vec::new();
        while let Some(p) = self.spf(n) {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
            n /= p;
        }
        out
    }
}

/// Linear-time sieve of smallest prime factors.
pub fn spf_sieve(limit: u64) -> FactorTable {
    let limit = limit.max(1) as usize;
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        for &p in &primes {
            let m = i * p as usize;
            if p > spf[i] || m > limit {
                break;
            }
            spf[m] = p;
        }
    }
    FactorTable { spf }
}

pub fn factorize(w: u64, table: &FactorTable) -> Vec<(u64, u32)> {
    table.factorize(w)
}

fn exponent_of(p: u64, mut n: u64) -> u32 {
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BaseSetError {
    #[error("need at least two bases, got {0}")]
    TooFew(usize),
    #[error("bases must be strictly decreasing and positive")]
    NotDecreasing,
}

/// Bound above which every multiple of `d = gcd(bases)` is a nonnegative
/// integer combination of `bases` (`v1 > v2 > … > vk`, `k >= 2`):
/// `2 · floor(v1 / (d·k)) · v2 - v1`.
pub fn eg_bound(bases: &[u64]) -> Result<i64, BaseSetError> {
    if bases.len() < 2 {
        return Err(BaseSetError::TooFew(bases.len()));
    }
    if bases.windows(2).any(|p| p[0] <= p[1]) || *bases.last().unwrap() == 0 {
        return Err(BaseSetError::NotDecreasing);
    }
    let d = bases.iter().copied().fold(0, gcd);
    let (v1, v2, k) = (bases[0] as i64, bases[1] as i64, bases.len() as i64);
    Ok(2 * (v1 / (d as i64 * k)) * v2 - v1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionConfig {
    /// Multiplier on `w_max` for the number of copies an optimum may change.
    pub safety: f64,
    /// Initial bases collected per unit of `k` (9 by default).
    pub initial_bases_per_k: u64,
    /// A weight triggers after `2r + trigger_extra` copies (2 by default).
    pub trigger_extra: u64,
    /// Run the (batch, level) passes on the rayon pool.
    pub parallel: bool,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            safety: 2.0,
            initial_bases_per_k: 9,
            trigger_extra: 2,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Add,
    Remove,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::Add => "add",
            Direction::Remove => "remove",
        }
    }
}

/// Everything one (batch, level) pass decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassReport {
    pub direction: Direction,
    /// Lower end `w` of the weight batch `[w, 2w)`.
    pub batch: u64,
    pub level: u64,
    pub k: u64,
    /// Bases in admission order.
    pub bases: Vec<u64>,
    /// Tracked primes and their bounds right after the initial bases.
    pub initial_tracked: Vec<(u64, u32)>,
    /// Tracked primes and their final bounds.
    pub tracked: Vec<(u64, u32)>,
    /// Number of times some `q_p` was lowered.
    pub rounds: u64,
    /// `(weight, total copies kept)` for every weight capped in this pass.
    pub caps: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionReduction {
    /// Copies kept for each input entry.
    pub kept: Vec<u64>,
    pub passes: Vec<PassReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReductionReport {
    pub passes: Vec<PassReport>,
    pub input_copies: u64,
    pub kept_copies: u64,
    pub elapsed: Duration,
}

impl ReductionReport {
    /// Line-oriented summary: one `reduction` header, one `pass` line per
    /// (direction, batch, level), one `cap` line per capped weight.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "reduction input={} kept={} passes={} elapsed_ns={}",
            self.input_copies,
            self.kept_copies,
            self.passes.len(),
            self.elapsed.as_nanos()
        );
        for p in &self.passes {
            let join = |v: &[(u64, u32)]| {
                v.iter()
                    .map(|(p, q)| format!("{p}^{q}"))
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let bases = p
                .bases
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let _ = writeln!(
                s,
                "pass dir={} batch={} level={} k={} bases=[{}] tracked=[{}] rounds={} capped={}",
                p.direction.label(),
                p.batch,
                p.level,
                p.k,
                bases,
                join(&p.tracked),
                p.rounds,
                p.caps.len()
            );
            for (w, cap) in &p.caps {
                let _ = writeln!(
                    s,
                    "cap dir={} batch={} level={} weight={} keep={}",
                    p.direction.label(),
                    p.batch,
                    p.level,
                    w,
                    cap
                );
            }
        }
        s
    }
}

#[derive(Debug, Clone)]
struct Tracked {
    q: u32,
    pending: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WeightState {
    Counting(u64),
    Decided,
}

fn powers_of_two_upto(limit: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    while *out.last().unwrap() < limit {
        let next = out.last().unwrap() * 2;
        out.push(next);
    }
    out
}

fn run_pass(
    direction: Direction,
    items: &[(u64, u64)],
    batch: u64,
    level: u64,
    w_max: u64,
    cfg: &ReductionConfig,
    table: &FactorTable,
) -> PassReport {
    let k = ((cfg.safety * w_max as f64) / level as f64).ceil().max(1.0) as u64;
    let trigger = 2 * level + cfg.trigger_extra;
    let need = cfg.initial_bases_per_k * k;
    let mut state = vec![WeightState::Counting(0); batch as usize];
    let mut bases: Vec<u64> = Vec::new();
    let mut tracked: Option<BTreeMap<u64, Tracked>> = None;
    let mut initial_tracked = Vec::new();
    let mut rounds = 0;
    let mut caps = Vec::new();

    for &(w, c) in items {
        if w < batch || w >= 2 * batch {
            continue;
        }
        let slot = &mut state[(w - batch) as usize];
        let WeightState::Counting(seen) = *slot else {
            continue;
        };
        if seen + c < trigger {
            *slot = WeightState::Counting(seen + c);
            continue;
        }
        *slot = WeightState::Decided;
        match tracked.as_mut() {
            None => {
                bases.push(w);
                if bases.len() as u64 == need {
                    let t = initial_bounds(&bases, k, table);
                    initial_tracked = t.iter().map(|(&p, t)| (p, t.q)).collect();
                    tracked = Some(t);
                }
            }
            Some(primes) => {
                let divisible = primes
                    .iter()
                    .all(|(&p, t)| t.q == 0 || exponent_of(p, w) >= t.q);
                if divisible {
                    let extra = (batch as u128 * batch as u128 / (k as u128 * w as u128)) as u64;
                    caps.push((w, trigger + extra));
                } else {
                    bases.push(w);
                    for (&p, t) in primes.iter_mut() {
                        let e = exponent_of(p, w);
                        if t.q > 0 && e < t.q {
                            t.pending.push(e);
                            if t.pending.len() as u64 == k + 1 {
                                t.q = *t.pending.iter().max().unwrap();
                                t.pending.clear();
                                rounds += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    PassReport {
        direction,
        batch,
        level,
        k,
        bases,
        initial_tracked,
        tracked: tracked
            .map(|t| t.into_iter().map(|(p, t)| (p, t.q)).collect())
            .unwrap_or_default(),
        rounds,
        caps,
    }
}

/// A prime is tracked iff fewer than `k + 1` bases avoid it; its bound is the
/// `(k + 1)`-th smallest exponent among the bases.
fn initial_bounds(bases: &[u64], k: u64, table: &FactorTable) -> BTreeMap<u64, Tracked> {
    let mut exps: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &b in bases {
        for (p, e) in table.factorize(b) {
            exps.entry(p).or_default().push(e);
        }
    }
    let mut out = BTreeMap::new();
    for (p, mut e) in exps {
        let zeros = bases.len() - e.len();
        if (zeros as u64) < k + 1 {
            e.extend(std::iter::repeat_n(0, zeros));
            e.sort_unstable();
            out.insert(
                p,
                Tracked {
                    q: e[k as usize],
                    pending: Vec::new(),
                },
            );
        }
    }
    out
}

/// Reduces one direction. `items` are `(weight, copies)` in the direction's
/// stream order; weights must lie in `1..=w_max`.
pub fn reduce_direction(
    direction: Direction,
    items: &[(u64, u64)],
    w_max: u64,
    cfg: &ReductionConfig,
    table: &FactorTable,
) -> DirectionReduction {
    if items.is_empty() || w_max == 0 {
        return DirectionReduction {
            kept: items.iter().map(|&(_, c)| c).collect(),
            passes: Vec::new(),
        };
    }
    let grid: Vec<(u64, u64)> = powers_of_two_upto(w_max)
        .into_iter()
        .filter(|&b| b <= w_max)
        .flat_map(|b| powers_of_two_upto(w_max).into_iter().map(move |r| (b, r)))
        .collect();
    let pass = |&(b, r): &(u64, u64)| run_pass(direction, items, b, r, w_max, cfg, table);
    let passes: Vec<PassReport> = if cfg.parallel {
        grid.par_iter().map(pass).collect()
    } else {
        grid.iter().map(pass).collect()
    };

    let mut cap: HashMap<u64, u64> = HashMap::new();
    for p in &passes {
        for &(w, c) in &p.caps {
            cap.entry(w).and_modify(|v| *v = (*v).min(c)).or_insert(c);
        }
    }
    let kept = items
        .iter()
        .map(|&(w, c)| match cap.get_mut(&w) {
            Some(left) => {
                let k = c.min(*left);
                *left -= k;
                k
            }
            None => c,
        })
        .collect();
    DirectionReduction { kept, passes }
}

/// Applies [`reduce_direction`] to the additions and to the removals of a
/// difference instance and returns the kept copies as a new instance.
pub fn reduce_items(
    diff: &DiffInstance,
    w_max: u64,
    cfg: &ReductionConfig,
) -> (DiffInstance, ReductionReport) {
    let start = Instant::now();
    let table = spf_sieve(w_max.max(1));
    let mut kept_counts: Vec<u64> = diff.items.iter().map(|it| it.count).collect();
    let mut passes = Vec::new();
    for direction in [Direction::Add, Direction::Remove] {
        let mut idx: Vec<usize> = (0..diff.items.len())
            .filter(|&i| (diff.items[i].weight > 0) == (direction == Direction::Add))
            .collect();
        let key = |i: usize| {
            let it = &diff.items[i];
            (it.weight.abs(), it.profit.abs(), it.source)
        };
        idx.sort_by(|&a, &b| {
            let ord = compare_efficiency(key(a), key(b));
            match direction {
                Direction::Add => ord,
                Direction::Remove => ord.reverse(),
            }
        });
        let stream: Vec<(u64, u64)> = idx
            .iter()
            .map(|&i| (diff.items[i].weight.unsigned_abs(), diff.items[i].count))
            .collect();
        let red = reduce_direction(direction, &stream, w_max, cfg, &table);
        for (&i, &k) in idx.iter().zip(&red.kept) {
            kept_counts[i] = k;
        }
        passes.extend(red.passes);
    }
    let items: Vec<SignedItemType> = diff
        .items
        .iter()
        .zip(&kept_counts)
        .filter(|(_, &k)| k > 0)
        .map(|(it, &k)| SignedItemType { count: k, ..*it })
        .collect();
    let reduced = DiffInstance {
        items,
        residual_budget: diff.residual_budget,
    };
    let report = ReductionReport {
        passes,
        input_copies: diff.total_copies(),
        kept_copies: reduced.total_copies(),
        elapsed: start.elapsed(),
    };
    (reduced, report)
}
