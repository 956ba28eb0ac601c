//! Exact pseudo-polynomial knapsack solvers.
//!
//! * [`permdp`]: randomly permuted, concentration-windowed DP for 0-1
//!   knapsack in `Õ(n^{3/2} · w_max)`, also usable on signed items.
//! * [`pipeline`]: bounded knapsack in `Õ(n + w_max^{5/2})` via the greedy
//!   prefix ([`proximity`]), item reduction ([`egreduce`]) and [`permdp`].
//! * [`baselines`]: exact Bellman DPs and brute force, used as oracles.
//!
//! ```
//! use permknap::model::{BoundedInstance, ItemType};
//! use permknap::pipeline::{solve_bounded, Algorithm, SolverConfig};
//!
//! let inst = BoundedInstance::new(vec![ItemType::new(5, 5, 2), ItemType::new(4, 3, 2)], 8);
//! let cfg = SolverConfig::with_algorithm(Algorithm::Pipeline);
//! assert_eq!(solve_bounded(&inst, &cfg).unwrap().profit, 6);
//! ```

pub mod baselines;
pub mod egreduce;
pub mod error;
pub mod model;
pub mod permdp;
pub mod pipeline;
pub mod proximity;

pub use error::{Result, SolveError};
pub use model::{BoundedInstance, DiffInstance, Item, ItemType, SignedItemType, Solution};
pub use pipeline::{solve_01, solve_bounded, Algorithm, SolverConfig};
