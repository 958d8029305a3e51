//! Runtime and bond-dimension sweep over permutations made of 2-cycles.
//!
//! For each `n` the class is `(2^{n/2})`, with one fixed point added when `n`
//! is odd. Each record times a full character row (state build plus every
//! amplitude) and reports the largest bond next to the a-priori bound
//! `Π_j (ν_j + 2)`.

use std::time::Instant;

use num_bigint::BigUint;

use crate::character_engine::{bond_bound, character_row, EngineConfig};
use crate::combinatorics::Partition;
use crate::error::{invalid, Result};

#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub n: usize,
    pub nu: Partition,
    pub wall_seconds: f64,
    pub max_bond: usize,
    pub bound: BigUint,
    pub norm_residual: f64,
    pub max_residual: f64,
}

impl BenchRecord {
    pub const CSV_HEADER: &'static str = "n,wall_seconds,max_bond,bound,norm_residual";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.16e},{},{},{:.16e}",
            self.n, self.wall_seconds, self.max_bond, self.bound, self.norm_residual
        )
    }
}

/// `(2, 2, …, 2)` or `(2, …, 2, 1)`.
pub fn two_cycle_class(n: usize) -> Result<Partition> {
    if n < 2 {
        return Err(invalid("two-cycle classes need n >= 2"));
    }
    let mut parts = vec![2; n / 2];
    if n % 2 == 1 {
        parts.push(1);
    }
    Partition::new(parts)
}

pub fn bench_point(n: usize, config: &EngineConfig) -> Result<BenchRecord> {
    let nu = two_cycle_class(n)?;
    let start = Instant::now();
    let row = character_row(&nu, n, config)?;
    let wall_seconds = start.elapsed().as_secs_f64();
    Ok(BenchRecord {
        n,
        bound: bond_bound(&nu),
        max_residual: row.max_residual(),
        nu,
        wall_seconds,
        max_bond: row.max_bond,
        norm_residual: row.norm_residual,
    })
}

/// `n = start, start + step, …` up to and including `end`.
pub fn run(start: usize, end: usize, step: usize, config: &EngineConfig) -> Result<Vec<BenchRecord>> {
    if step == 0 || start > end {
        return Err(invalid(format!("bad bench range {start}..={end} step {step}")));
    }
    (start..=end)
        .step_by(step)
        .map(|n| {
            let rec = bench_point(n, config)?;
            log::info!("n={n}: {:.3}s, max bond {}", rec.wall_seconds, rec.max_bond);
            Ok(rec)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        assert_eq!(two_cycle_class(6).unwrap().to_string(), "2,2,2");
        assert_eq!(two_cycle_class(7).unwrap().to_string(), "2,2,2,1");
        assert!(two_cycle_class(1).is_err());
    }

    #[test]
    fn small_sweep() {
        let recs = run(4, 10, 2, &EngineConfig::default()).unwrap();
        assert_eq!(recs.iter().map(|r| r.n).collect::<Vec<_>>(), vec![4, 6, 8, 10]);
        for r in &recs {
            assert!(BigUint::from(r.max_bond) < r.bound);
            assert!(r.norm_residual <= 1e-6);
            assert_eq!(
                r.csv_row().split(',').count(),
                BenchRecord::CSV_HEADER.split(',').count()
            );
        }
        assert!(run(4, 2, 1, &EngineConfig::default()).is_err());
    }
}
