//! Character-squared sampling distributions and their granularity.
//!
//! Row sampling draws an irrep `λ ⊢ n` with probability `χ_λ(ν)² / |E_ν|`
//! for a fixed class `ν`; column sampling draws a permutation with
//! probability `χ_λ(g)² / n!` for a fixed irrep, represented here collapsed
//! onto conjugacy classes. Weights are exact rationals.
//!
//! [`sample`] uses ChaCha8 seeded through `SeedableRng::seed_from_u64`; each
//! draw takes one `f64` uniform in `[0, 1)` and inverts the cumulative
//! distribution of the weights rounded to `f64`.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::character_engine::{character_row, EngineConfig};
use crate::combinatorics::{
    centralizer_size, class_size, enumerate_partitions, factorial, partition_count, partitions_with_at_most, Partition,
};
use crate::error::{invalid, Error, Result};
use crate::oracle::MnOracle;

/// Largest `n` for which full character rows are computed here.
pub const TABLE_CAP: usize = 12;
/// Largest `n` for granularity (pure integer arithmetic).
pub const GRANULARITY_CAP: usize = 200;
/// Largest `n` for the per-permutation expansion of column sampling.
pub const PERMUTATION_EXPANSION_CAP: usize = 7;

/// Where characters come from.
#[derive(Clone, Copy, Debug)]
pub enum CharacterSource {
    Oracle,
    Mps(EngineConfig),
}

/// Finite distribution with exact rational weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDistribution<L> {
    outcomes: Vec<(L, BigRational)>,
}

impl<L> FiniteDistribution<L> {
    pub fn new(outcomes: Vec<(L, BigRational)>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(invalid("a distribution needs at least one outcome"));
        }
        if outcomes.iter().any(|(_, w)| w.is_negative()) {
            return Err(invalid("negative probability weight"));
        }
        let total: BigRational = outcomes.iter().map(|(_, w)| w.clone()).sum();
        if !total.is_one() {
            return Err(invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(FiniteDistribution { outcomes })
    }

    pub fn outcomes(&self) -> &[(L, BigRational)] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.outcomes.iter().map(|(l, _)| l)
    }
}

impl<L: PartialEq> FiniteDistribution<L> {
    pub fn weight(&self, label: &L) -> Option<&BigRational> {
        self.outcomes.iter().find(|(l, _)| l == label).map(|(_, w)| w)
    }
}

fn row_characters(nu: &Partition, n: usize, source: &CharacterSource) -> Result<Vec<(Partition, i64)>> {
    match source {
        CharacterSource::Oracle => {
            let mut mn = MnOracle::new();
            enumerate_partitions(n)?
                .into_iter()
                .map(|l| {
                    let v = mn.character(&l, nu)?;
                    Ok((l, v))
                })
                .collect()
        }
        CharacterSource::Mps(config) => {
            let row = character_row(nu, n, config)?;
            if let Some((l, r)) = row.entries.iter().find(|(_, r)| r.precision_flag) {
                return Err(Error::Precision(format!(
                    "character at {l} for class {nu}: amplitude {}",
                    r.amplitude
                )));
            }
            Ok(row.entries.into_iter().map(|(l, r)| (l, r.value)).collect())
        }
    }
}

fn check_table_range(n: usize) -> Result<()> {
    if n == 0 || n > TABLE_CAP {
        return Err(Error::ResourceLimit(format!(
            "sampling tables limited to 1 <= n <= {TABLE_CAP}, got {n}"
        )));
    }
    Ok(())
}

fn square(v: i64) -> BigInt {
    BigInt::from(v) * BigInt::from(v)
}

/// `P(λ) = χ_λ(ν)² / |E_ν|` over `λ ⊢ n`.
pub fn row_distribution(nu: &Partition, n: usize, source: &CharacterSource) -> Result<FiniteDistribution<Partition>> {
    nu.expect_size(n, "cycle type")?;
    check_table_range(n)?;
    let chars = row_characters(nu, n, source)?;
    let centralizer = BigInt::from(centralizer_size(nu));
    let squares: BigInt = chars.iter().map(|&(_, v)| square(v)).sum();
    if squares != centralizer {
        return Err(Error::InconsistentEngine(format!(
            "squared characters of class {nu} sum to {squares}, expected {centralizer}"
        )));
    }
    let outcomes = chars
        .into_iter()
        .map(|(l, v)| (l, BigRational::new(square(v), centralizer.clone())))
        .collect();
    FiniteDistribution::new(outcomes)
}

/// `P(ν) = |C_ν| χ_λ(ν)² / n!` over conjugacy classes `ν ⊢ n`.
pub fn column_distribution(
    lambda: &Partition,
    n: usize,
    source: &CharacterSource,
) -> Result<FiniteDistribution<Partition>> {
    lambda.expect_size(n, "irrep")?;
    check_table_range(n)?;
    let group_order = BigInt::from(factorial(n));
    let mut mn = MnOracle::new();
    let outcomes = enumerate_partitions(n)?
        .into_iter()
        .map(|nu| {
            let chi = match source {
                CharacterSource::Oracle => mn.character(lambda, &nu)?,
                CharacterSource::Mps(config) => {
                    let row = character_row(&nu, n, config)?;
                    row.certify()?;
                    row.get(lambda)
                        .map(|r| r.value)
                        .ok_or_else(|| Error::Internal(format!("irrep {lambda} missing")))?
                }
            };
            let weight = BigRational::new(BigInt::from(class_size(&nu)) * square(chi), group_order.clone());
            Ok((nu, weight))
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteDistribution::new(outcomes)
        .map_err(|e| Error::InconsistentEngine(format!("column distribution of {lambda}: {e}")))
}

/// Cycle type of a permutation in one-line notation (`perm[i]` is the image of `i`).
pub fn cycle_type(perm: &[usize]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        lengths.push(len);
    }
    Partition::from_unsorted(lengths).expect("cycle lengths are positive")
}

/// Column sampling over all `n!` permutations, `P(g) = χ_λ(g)² / n!`.
pub fn expand_to_permutations(lambda: &Partition, n: usize) -> Result<FiniteDistribution<Vec<usize>>> {
    lambda.expect_size(n, "irrep")?;
    if n > PERMUTATION_EXPANSION_CAP {
        return Err(Error::ResourceLimit(format!(
            "permutation expansion limited to n <= {PERMUTATION_EXPANSION_CAP}"
        )));
    }
    let mut mn = MnOracle::new();
    let mut by_class: HashMap<Partition, BigInt> = HashMap::new();
    let order = BigInt::from(factorial(n));
    let mut perm: Vec<usize> = (0..n).collect();
    let mut outcomes = Vec::new();
    loop {
        let nu = cycle_type(&perm);
        let chi_sq = match by_class.get(&nu) {
            Some(v) => v.clone(),
            None => {
                let v = square(mn.character(lambda, &nu)?);
                by_class.insert(nu, v.clone());
                v
            }
        };
        outcomes.push((perm.clone(), BigRational::new(chi_sq, order.clone())));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    FiniteDistribution::new(outcomes)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Granularity of a sampling problem.
#[derive(Clone, Debug, PartialEq)]
pub struct GranularityReport {
    pub gamma: BigRational,
    pub granular: bool,
    /// An outcome whose weight is not an integer multiple of `γ/|Ω|`.
    pub witness: Option<Partition>,
}

/// `γ = p(n) / |E_ν|` for row sampling; granular iff `γ ≥ 1`.
pub fn granularity(nu: &Partition, n: usize) -> Result<GranularityReport> {
    nu.expect_size(n, "cycle type")?;
    if n > GRANULARITY_CAP {
        return Err(Error::ResourceLimit(format!(
            "granularity limited to n <= {GRANULARITY_CAP}"
        )));
    }
    let gamma = BigRational::new(BigInt::from(partition_count(n)), BigInt::from(centralizer_size(nu)));
    let granular = gamma >= BigRational::one();
    Ok(GranularityReport {
        gamma,
        granular,
        witness: None,
    })
}

/// [`granularity`] plus an integrality check of every weight of `dist`
/// against the unit `γ/|Ω|`.
pub fn certify_row_granularity(
    nu: &Partition,
    n: usize,
    dist: &FiniteDistribution<Partition>,
) -> Result<GranularityReport> {
    let mut report = granularity(nu, n)?;
    let omega = BigRational::from_integer(BigInt::from(partition_count(n)));
    let unit = &report.gamma / &omega;
    report.witness = dist
        .outcomes()
        .iter()
        .find(|(_, w)| !(w / &unit).is_integer())
        .map(|(l, _)| l.clone());
    if report.witness.is_some() {
        report.granular = false;
    }
    Ok(report)
}

/// Column sampling over `Ω = S_n` always has `γ = 1`: every permutation
/// weight is `χ²/n!` with integer `χ`.
pub fn column_granularity() -> GranularityReport {
    GranularityReport {
        gamma: BigRational::one(),
        granular: true,
        witness: None,
    }
}

/// Checks that every class weight times `n!` equals `|C_ν|` times a perfect
/// square; returns the first class that fails.
pub fn column_integrality_violation(dist: &FiniteDistribution<Partition>, n: usize) -> Option<Partition> {
    let order = BigRational::from_integer(BigInt::from(factorial(n)));
    dist.outcomes().iter().find_map(|(nu, w)| {
        let scaled = w * &order;
        if !scaled.is_integer() {
            return Some(nu.clone());
        }
        let size = BigInt::from(class_size(nu));
        let (q, r) = (scaled.to_integer() / &size, scaled.to_integer() % &size);
        let root = q.sqrt();
        (!r.is_zero() || &root * &root != q).then(|| nu.clone())
    })
}

/// `A = π·√(2/3) − 0.1`, the constant used for finite-n granularity checks.
pub fn threshold_constant() -> f64 {
    std::f64::consts::PI * (2.0f64 / 3.0).sqrt() - 0.1
}

/// `⌊A·√n / ln n⌋`.
pub fn cycle_count_threshold(n: usize, a: f64) -> Result<usize> {
    if n < 2 {
        return Err(invalid(format!("cycle-count threshold needs n >= 2, got {n}")));
    }
    if !(a > 0.0) {
        return Err(invalid(format!("threshold constant must be positive, got {a}")));
    }
    let nf = n as f64;
    Ok((a * nf.sqrt() / nf.ln()).floor() as usize)
}

/// Classes `ν ⊢ n` with at most `cycle_count_threshold(n, a)` cycles whose
/// row-sampling `γ` is below one.
pub fn threshold_counterexamples(n: usize, a: f64) -> Result<Vec<(Partition, BigRational)>> {
    let limit = cycle_count_threshold(n, a)?;
    let mut out = Vec::new();
    for nu in partitions_with_at_most(n, limit) {
        let report = granularity(&nu, n)?;
        if !report.granular {
            out.push((nu, report.gamma));
        }
    }
    Ok(out)
}

/// `shots` independent draws from `dist` (see the module docs for the generator).
pub fn sample<L: Clone>(dist: &FiniteDistribution<L>, shots: usize, seed: u64) -> Vec<L> {
    let mut cumulative = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for (_, w) in dist.outcomes() {
        acc += w.to_f64().unwrap_or(0.0);
        cumulative.push(acc);
    }
    // the last positive-weight outcome absorbs rounding in the f64 sums
    let last_positive = dist.outcomes().iter().rposition(|(_, w)| w.is_positive()).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..shots)
        .map(|_| {
            let u = rng.gen::<f64>() * acc;
            let idx = cumulative.partition_point(|&c| c <= u).min(last_positive);
            dist.outcomes()[idx].0.clone()
        })
        .collect()
}

/// Total-variation distance between the empirical histogram of `draws` and `dist`.
pub fn total_variation<L: Eq + Hash + Clone>(dist: &FiniteDistribution<L>, draws: &[L]) -> f64 {
    let mut counts: HashMap<L, usize> = HashMap::new();
    for d in draws {
        *counts.entry(d.clone()).or_default() += 1;
    }
    let shots = draws.len().max(1) as f64;
    let mut tv = 0.0;
    for (l, w) in dist.outcomes() {
        let emp = counts.remove(l).unwrap_or(0) as f64 / shots;
        tv += (emp - w.to_f64().unwrap_or(0.0)).abs();
    }
    tv += counts.values().map(|&c| c as f64 / shots).sum::<f64>();
    tv / 2.0
}

/// `p(n) = |Ω_n|` as an exact integer.
pub fn row_sample_space_size(n: usize) -> BigUint {
    partition_count(n)
}
