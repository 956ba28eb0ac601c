//! Timing runs, CSV records and log-log slope estimates.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use permknap::baselines::bellman_bounded;
use permknap::{solve_bounded, Algorithm, BoundedInstance, SolverConfig};

pub const HEADER: [&str; 13] = [
    "instance_id",
    "n",
    "W",
    "w_max",
    "p_max",
    "algorithm",
    "seed",
    "alpha",
    "safety",
    "profit",
    "reduced_items",
    "elapsed_ns",
    "verified",
];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub instance_id: String,
    /// Number of item types.
    pub n: usize,
    pub capacity: i64,
    pub w_max: i64,
    pub p_max: i64,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub alpha: f64,
    pub safety: f64,
    /// `None` when the solver refused the instance.
    pub profit: Option<i64>,
    pub reduced_items: Option<u64>,
    /// Median over the repeats.
    pub elapsed_ns: u128,
    /// Agreement with the exact DP, when checked and within its guard.
    pub verified: Option<bool>,
}

impl BenchRecord {
    fn fields(&self) -> [String; 13] {
        let opt = |v: Option<String>| v.unwrap_or_default();
        [
            self.instance_id.clone(),
            self.n.to_string(),
            self.capacity.to_string(),
            self.w_max.to_string(),
            self.p_max.to_string(),
            self.algorithm.to_string(),
            self.seed.to_string(),
            self.alpha.to_string(),
            self.safety.to_string(),
            opt(self.profit.map(|p| p.to_string())),
            opt(self.reduced_items.map(|r| r.to_string())),
            self.elapsed_ns.to_string(),
            opt(self.verified.map(|v| u8::from(v).to_string())),
        ]
    }
}

/// Median; the mean of the two middle values for an even count.
pub fn median(values: &mut [u128]) -> u128 {
    assert!(!values.is_empty());
    values.sort_unstable();
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        (values[m - 1] + values[m]) / 2
    }
}

/// One record per (instance, algorithm), instances in input order.
pub fn run_bench(
    instances: &[(String, BoundedInstance)],
    algorithms: &[Algorithm],
    repeats: usize,
    base: &SolverConfig,
    verify: bool,
) -> Vec<BenchRecord> {
    let mut records = Vec::new();
    for (id, inst) in instances {
        let want = if verify {
            bellman_bounded(inst, base.oracle_cell_limit).ok()
        } else {
            None
        };
        for &algorithm in algorithms {
            let cfg = SolverConfig { algorithm, ..*base };
            let mut times = Vec::with_capacity(repeats.max(1));
            let mut result = None;
            for _ in 0..repeats.max(1) {
                let start = Instant::now();
                let r = solve_bounded(inst, &cfg);
                times.push(start.elapsed().as_nanos());
                result = Some(r);
            }
            let solution = result.and_then(|r| r.ok());
            let profit = solution.as_ref().map(|s| s.profit);
            records.push(BenchRecord {
                instance_id: id.clone(),
                n: inst.items.len(),
                capacity: inst.capacity,
                w_max: inst.w_max(),
                p_max: inst.p_max(),
                algorithm,
                seed: cfg.seed,
                alpha: cfg.alpha,
                safety: cfg.safety,
                profit,
                reduced_items: solution.and_then(|s| s.meta.reduced_items),
                elapsed_ns: median(&mut times),
                verified: want.zip(profit).map(|(w, p)| w == p),
            });
        }
    }
    records
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than two
/// distinct `x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if pts.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeSummary {
    pub algorithm: Algorithm,
    pub w_max: i64,
    /// Distinct `n` values fitted.
    pub sizes: usize,
    pub slope: Option<f64>,
}

/// Slope of mean elapsed time vs `n`, per (algorithm, w_max). Records without
/// a profit are left out.
pub fn slopes(records: &[BenchRecord]) -> Vec<SlopeSummary> {
    let mut groups: BTreeMap<(Algorithm, i64), BTreeMap<usize, Vec<u128>>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.profit.is_some()) {
        groups
            .entry((r.algorithm, r.w_max))
            .or_default()
            .entry(r.n)
            .or_default()
            .push(r.elapsed_ns);
    }
    groups
        .into_iter()
        .map(|((algorithm, w_max), by_n)| {
            let points: Vec<(f64, f64)> = by_n
                .iter()
                .map(|(&n, t)| (n as f64, t.iter().sum::<u128>() as f64 / t.len() as f64))
                .collect();
            SlopeSummary {
                algorithm,
                w_max,
                sizes: points.len(),
                slope: loglog_slope(&points),
            }
        })
        .collect()
}

pub fn write_summary<W: Write>(summary: &[SlopeSummary], mut out: W) -> std::io::Result<()> {
    for s in summary {
        match s.slope {
            Some(v) => writeln!(
                out,
                "slope algorithm={} w_max={} sizes={} slope={v:.3}",
                s.algorithm, s.w_max, s.sizes
            )?,
            None => writeln!(
                out,
                "slope algorithm={} w_max={} sizes={} slope=n/a",
                s.algorithm, s.w_max, s.sizes
            )?,
        }
    }
    Ok(())
}
