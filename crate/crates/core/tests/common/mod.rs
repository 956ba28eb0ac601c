#![allow(dead_code)]

use permknap::model::{BoundedInstance, Item, ItemType};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_01(rng: &mut impl Rng, n_max: usize, w_max: i64, p_max: i64) -> (Vec<Item>, i64) {
    let n = rng.gen_range(1..=n_max);
    let items: Vec<Item> = (0..n)
        .map(|_| Item::new(rng.gen_range(1..=w_max), rng.gen_range(1..=p_max)))
        .collect();
    let total: i64 = items.iter().map(|it| it.weight).sum();
    let cap = rng.gen_range(0..=total);
    (items, cap)
}

#[derive(Debug, Clone, Copy)]
pub enum Shape {
    Uniform,
    AllEqual,
    TwoCoprime,
    CommonFactor,
    Clustered,
}

pub const SHAPES: [Shape; 5] = [
    Shape::Uniform,
    Shape::AllEqual,
    Shape::TwoCoprime,
    Shape::CommonFactor,
    Shape::Clustered,
];

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn random_bounded(
    rng: &mut impl Rng,
    shape: Shape,
    n_max: usize,
    w_max: i64,
    p_max: i64,
    m_max: u64,
) -> BoundedInstance {
    let n = rng.gen_range(1..=n_max);
    let weights: Vec<i64> = match shape {
        Shape::Uniform => (0..n).map(|_| rng.gen_range(1..=w_max)).collect(),
        Shape::AllEqual => vec![rng.gen_range(1..=w_max); n],
        Shape::TwoCoprime => {
            let (a, b) = loop {
                let a = rng.gen_range(1..=w_max);
                let b = rng.gen_range(1..=w_max);
                if a != b && gcd(a, b) == 1 {
                    break (a, b);
                }
            };
            (0..n)
                .map(|_| if rng.gen_bool(0.5) { a } else { b })
                .collect()
        }
        Shape::CommonFactor => {
            let d = rng.gen_range(2..=w_max.clamp(2, 6));
            (0..n)
                .map(|_| d * rng.gen_range(1..=(w_max / d).max(1)))
                .collect()
        }
        Shape::Clustered => {
            let k = rng.gen_range(2..=4);
            let centers: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=w_max)).collect();
            (0..n).map(|_| centers[rng.gen_range(0..k)]).collect()
        }
    };
    let items: Vec<ItemType> = weights
        .into_iter()
        .map(|w| ItemType::new(w, rng.gen_range(1..=p_max), rng.gen_range(1..=m_max)))
        .collect();
    let total: i64 = items
        .iter()
        .map(|it| it.weight * it.multiplicity as i64)
        .sum();
    let cap = rng.gen_range(0..=total);
    BoundedInstance::new(items, cap)
}

/// Many types over few weights so every batch has enough distinct weights for
/// the reduction to start capping.
pub fn heavy_repetition(
    rng: &mut impl Rng,
    types: usize,
    w_max: i64,
    m_max: u64,
) -> BoundedInstance {
    heavy_in_range(rng, types, 1, w_max, m_max)
}

/// Heavy repetition with every weight in `lo..=hi`.
pub fn heavy_in_range(
    rng: &mut impl Rng,
    types: usize,
    lo: i64,
    hi: i64,
    m_max: u64,
) -> BoundedInstance {
    let items: Vec<ItemType> = (0..types)
        .map(|_| {
            let w = rng.gen_range(lo..=hi);
            let p = (w * rng.gen_range(80..=120) / 100).max(1);
            ItemType::new(w, p, rng.gen_range(1..=m_max))
        })
        .collect();
    let total: i64 = items
        .iter()
        .map(|it| it.weight * it.multiplicity as i64)
        .sum();
    let cap = rng.gen_range(total / 4..=3 * total / 4).max(1);
    BoundedInstance::new(items, cap)
}
