//! Cross-checking solvers against the exact bounded DP.

use std::fmt;

use permknap::baselines::bellman_bounded;
use permknap::{Algorithm, BoundedInstance, Solution, SolveError, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Got {
    Profit(i64),
    Error(String),
}

impl fmt::Display for Got {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Got::Profit(p) => write!(f, "{p}"),
            Got::Error(e) => write!(f, "error({e})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyLine {
    pub file: String,
    pub algorithm: Algorithm,
    pub verdict: Verdict,
    pub got: Option<Got>,
    pub want: Option<i64>,
    /// Why the check was skipped.
    pub note: Option<String>,
}

impl fmt::Display for VerifyLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.file, self.algorithm, self.verdict)?;
        if let Some(got) = &self.got {
            write!(f, " got={got}")?;
        }
        if let Some(want) = self.want {
            write!(f, " want={want}")?;
        }
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        Ok(())
    }
}

/// Anything that can stand in for [`permknap::solve_bounded`].
pub type Solver<'a> = dyn Fn(&BoundedInstance, &SolverConfig) -> permknap::Result<Solution> + 'a;

/// Runs each algorithm `trials` times (seeds `seed`, `seed + 1`, ...) with
/// witnesses on, and compares profits with the exact optimum. A witness that
/// does not check out is a failure too.
pub fn verify_instance(
    file: &str,
    instance: &BoundedInstance,
    algorithms: &[Algorithm],
    trials: u64,
    seed: u64,
    base: &SolverConfig,
    solver: &Solver,
) -> Vec<VerifyLine> {
    let line = |algorithm, verdict, got, want, note| VerifyLine {
        file: file.to_string(),
        algorithm,
        verdict,
        got,
        want,
        note,
    };
    let want = match bellman_bounded(instance, base.oracle_cell_limit) {
        Ok(v) => v,
        Err(e) => {
            let note = Some(format!("oracle: {e}"));
            return algorithms
                .iter()
                .map(|&a| line(a, Verdict::Skip, None, None, note.clone()))
                .collect();
        }
    };

    algorithms
        .iter()
        .map(|&algorithm| {
            let mut first = None;
            for t in 0..trials.max(1) {
                let cfg = SolverConfig {
                    algorithm,
                    seed: seed.wrapping_add(t),
                    witness: true,
                    ..*base
                };
                match solver(instance, &cfg) {
                    Ok(s) => {
                        if s.profit != want {
                            return line(
                                algorithm,
                                Verdict::Fail,
                                Some(Got::Profit(s.profit)),
                                Some(want),
                                None,
                            );
                        }
                        if let Err(e) = s.check_witness(instance) {
                            return line(
                                algorithm,
                                Verdict::Fail,
                                Some(Got::Profit(s.profit)),
                                Some(want),
                                Some(format!("witness: {e}")),
                            );
                        }
                        first.get_or_insert(s.profit);
                    }
                    Err(e @ SolveError::TooLarge { .. }) => {
                        return line(
                            algorithm,
                            Verdict::Skip,
                            None,
                            Some(want),
                            Some(e.to_string()),
                        );
                    }
                    Err(e) => {
                        return line(
                            algorithm,
                            Verdict::Fail,
                            Some(Got::Error(e.to_string())),
                            Some(want),
                            None,
                        );
                    }
                }
            }
            line(
                algorithm,
                Verdict::Pass,
                first.map(Got::Profit),
                Some(want),
                None,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use permknap::{solve_bounded, ItemType};

    fn small() -> BoundedInstance {
        BoundedInstance::new(
            vec![
                ItemType::single(2, 6),
                ItemType::single(3, 6),
                ItemType::single(4, 4),
            ],
            6,
        )
    }

    const ALGOS: [Algorithm; 2] = [Algorithm::Pipeline, Algorithm::PermDp];

    #[test]
    fn both_algorithms_pass_on_small_example() {
        let lines = verify_instance(
            "small",
            &small(),
            &ALGOS,
            3,
            0,
            &SolverConfig::default(),
            &solve_bounded,
        );
        assert_eq!(lines.len(), 2);
        for l in &lines {
            assert_eq!(l.verdict, Verdict::Pass);
            assert_eq!(
                l.to_string(),
                format!("small {} PASS got=12 want=12", l.algorithm)
            );
        }
    }

    #[test]
    fn corrupted_solver_fails() {
        let off_by_one = |inst: &BoundedInstance, cfg: &SolverConfig| {
            let mut s = solve_bounded(inst, cfg)?;
            s.profit -= 1;
            s.witness = None;
            Ok(s)
        };
        let lines = verify_instance(
            "small",
            &small(),
            &ALGOS,
            1,
            0,
            &SolverConfig::default(),
            &off_by_one,
        );
        assert!(lines.iter().all(|l| l.verdict == Verdict::Fail));
        assert_eq!(lines[0].to_string(), "small pipeline FAIL got=11 want=12");
    }

    #[test]
    fn oversized_instance_is_skipped() {
        let cfg = SolverConfig {
            oracle_cell_limit: 5,
            ..Default::default()
        };
        let lines = verify_instance("big", &small(), &ALGOS, 1, 0, &cfg, &solve_bounded);
        assert!(lines.iter().all(|l| l.verdict == Verdict::Skip));
        assert!(lines[0].to_string().starts_with("big pipeline SKIP"));
    }
}
