//! Oracle-equivalence sweeps, reported check by check.

use crate::character_engine::{character_row, EngineConfig};
use crate::combinatorics::{enumerate_partitions, Partition};
use crate::error::Result;
use crate::kostka_engine::{self, kostka_row};
use crate::oracle::{ssyt_count, MnOracle, MN_CAP, SSYT_CAP};

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub n: usize,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn first_mismatch<'a>(
    entries: impl Iterator<Item = (&'a Partition, i64)>,
    mut oracle: impl FnMut(&Partition) -> Result<i64>,
) -> Result<Option<(Partition, i64, i64)>> {
    for (l, got) in entries {
        let want = oracle(l)?;
        if got != want {
            return Ok(Some((l.clone(), got, want)));
        }
    }
    Ok(None)
}

/// Characters against Murnaghan–Nakayama and Kostka numbers against
/// tableau counts, for every `n` in `n_min..=n_max` within the oracle caps.
pub fn run(n_min: usize, n_max: usize, characters: &EngineConfig, kostka: &EngineConfig) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for n in n_min..=n_max {
        let classes = enumerate_partitions(n)?;
        if n <= MN_CAP {
            let mut mn = MnOracle::new();
            let mut mismatch = None;
            let mut worst_norm: f64 = 0.0;
            let mut worst_residual: f64 = 0.0;
            for nu in &classes {
                let row = character_row(nu, n, characters)?;
                worst_norm = worst_norm.max(row.norm_residual);
                worst_residual = worst_residual.max(row.max_residual());
                let bad = first_mismatch(row.entries.iter().map(|(l, r)| (l, r.value)), |l| mn.character(l, nu))?;
                if let Some((l, got, want)) = bad {
                    mismatch = Some(format!("chi_{l}({nu}) = {got}, oracle {want}"));
                    break;
                }
            }
            report.checks.push(CheckOutcome {
                name: "characters",
                n,
                passed: mismatch.is_none() && worst_norm <= crate::character_engine::NORM_TOLERANCE,
                detail: mismatch.unwrap_or_else(|| {
                    format!(
                        "{} classes, max residual {worst_residual:.3e}, max norm residual {worst_norm:.3e}",
                        classes.len()
                    )
                }),
            });
        }
        if n <= SSYT_CAP {
            let mut mismatch = None;
            for mu in &classes {
                let row = kostka_row(mu, n, kostka)?;
                let bad = first_mismatch(row.entries.iter().map(|(l, r)| (l, r.value)), |l| {
                    ssyt_count(l, mu).map(|c| c as i64)
                })?;
                if let Some((l, got, want)) = bad {
                    mismatch = Some(format!("K({l}; {mu}) = {got}, oracle {want}"));
                    break;
                }
            }
            report.checks.push(CheckOutcome {
                name: "kostka",
                n,
                passed: mismatch.is_none(),
                detail: mismatch.unwrap_or_else(|| format!("{} weights", classes.len())),
            });
        }
    }
    Ok(report)
}

/// [`run`] with the default epsilons of both engines.
pub fn run_default(n_min: usize, n_max: usize) -> Result<VerifyReport> {
    run(n_min, n_max, &EngineConfig::default(), &kostka_engine::default_config())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_range_passes() {
        let report = run_default(1, 5).unwrap();
        assert_eq!(report.checks.len(), 10);
        assert!(report.passed(), "{:?}", report.checks);
    }
}
