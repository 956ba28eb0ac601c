//! Seeded random instances.

use std::fmt;
use std::str::FromStr;

use permknap::egreduce::gcd;
use permknap::{BoundedInstance, ItemType};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distribution {
    /// Independent uniform weights, profits and multiplicities.
    Uniform,
    /// `p = w + noise`, which leaves greedy little to separate items by.
    Correlated,
    /// Weights drawn from a handful of values.
    ClusteredWeights,
    /// Every weight is `w_max`.
    AllEqual,
    /// Two coprime weights.
    TwoCoprime,
    /// Weights sharing a factor `d >= 2`.
    CommonFactor,
}

impl Distribution {
    pub const ALL: [Distribution; 6] = [
        Distribution::Uniform,
        Distribution::Correlated,
        Distribution::ClusteredWeights,
        Distribution::AllEqual,
        Distribution::TwoCoprime,
        Distribution::CommonFactor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Distribution::Uniform => "uniform",
            Distribution::Correlated => "correlated",
            Distribution::ClusteredWeights => "clustered-weights",
            Distribution::AllEqual => "all-equal",
            Distribution::TwoCoprime => "two-coprime",
            Distribution::CommonFactor => "common-factor",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Distribution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Distribution::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| format!("unknown distribution `{s}`"))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("two-coprime weights need w_max >= 2")]
    NoCoprimePair,
    #[error("capacity must be nonnegative")]
    NegativeCapacity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    pub w_max: i64,
    pub p_max: i64,
    pub m_max: u64,
    pub distribution: Distribution,
    pub seed: u64,
    /// Defaults to `floor(Σ w·m / 2)`.
    pub capacity: Option<i64>,
    /// Distinct weights for `clustered-weights`.
    pub clusters: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 100,
            w_max: 100,
            p_max: 100,
            m_max: 1,
            distribution: Distribution::Uniform,
            seed: 0,
            capacity: None,
            clusters: 4,
        }
    }
}

pub fn generate(params: &GenParams) -> Result<BoundedInstance, GenError> {
    let GenParams {
        n,
        w_max,
        p_max,
        m_max,
        distribution,
        ..
    } = *params;
    if n == 0 {
        return Err(GenError::NonPositive("n"));
    }
    if w_max < 1 {
        return Err(GenError::NonPositive("w_max"));
    }
    if p_max < 1 {
        return Err(GenError::NonPositive("p_max"));
    }
    if m_max < 1 {
        return Err(GenError::NonPositive("m_max"));
    }
    if params.clusters < 1 {
        return Err(GenError::NonPositive("clusters"));
    }
    if params.capacity.is_some_and(|c| c < 0) {
        return Err(GenError::NegativeCapacity);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let palette: Vec<i64> = match distribution {
        Distribution::ClusteredWeights => (0..params.clusters)
            .map(|_| rng.gen_range(1..=w_max))
            .collect(),
        Distribution::AllEqual => vec![w_max],
        Distribution::TwoCoprime => {
            if w_max < 2 {
                return Err(GenError::NoCoprimePair);
            }
            loop {
                let a = rng.gen_range(1..w_max);
                let b = rng.gen_range(a + 1..=w_max);
                if gcd(a as u64, b as u64) == 1 {
                    break vec![a, b];
                }
            }
        }
        Distribution::CommonFactor if w_max >= 2 => {
            let d = rng.gen_range(2..=(w_max / 4).max(2));
            (1..=w_max / d).map(|k| k * d).collect()
        }
        _ => Vec::new(),
    };

    let noise = (w_max / 10).max(1);
    let items: Vec<ItemType> = (0..n)
        .map(|_| {
            let w = if palette.is_empty() {
                rng.gen_range(1..=w_max)
            } else {
                palette[rng.gen_range(0..palette.len())]
            };
            let p = match distribution {
                Distribution::Correlated => (w + rng.gen_range(-noise..=noise)).max(1),
                _ => rng.gen_range(1..=p_max),
            };
            ItemType::new(w, p, rng.gen_range(1..=m_max))
        })
        .collect();
    let capacity = params.capacity.unwrap_or_else(|| {
        let total: i64 = items
            .iter()
            .map(|it| it.weight * it.multiplicity as i64)
            .sum();
        total / 2
    });
    Ok(BoundedInstance::new(items, capacity))
}
