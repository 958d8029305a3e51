//! Characters of `S_n` as rounded MPS amplitudes.
//!
//! For a cycle type `ν ⊢ n` the engine builds `|ψ_ν⟩ = Π_j J_{ν_j} |1^n 0^n⟩`
//! by alternating exact MPO application with compression, then reads
//! `χ_λ(ν) = ⟨x_{λ+τ}|ψ_ν⟩` for the requested irreps. Since characters are
//! integers the amplitudes are rounded; the identity `Σ_λ χ_λ(ν)² = |E_ν|`
//! certifies a full row.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinatorics::{centralizer_size, encode_occupation, enumerate_partitions, OccupationString, Partition};
use crate::error::{Error, Result};
use crate::mpo_builders::current_mpo;
use crate::tensor::{amplitude_batch, compress, mpo_apply, BlockCache, Mps, TruncationPolicy};

pub const DEFAULT_CHARACTER_EPSILON: f64 = 1e-10;
pub const DEFAULT_HARD_BOND_CAP: usize = 4096;
/// Amplitudes at or above this magnitude no longer resolve integers.
pub const EXACT_INTEGER_LIMIT: f64 = 4_503_599_627_370_496.0; // 2^52
/// Largest relative norm-identity violation a row may show and still pass.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Truncation policy plus the hard bond cap that aborts a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineConfig {
    pub policy: TruncationPolicy,
    pub hard_cap: usize,
}

impl EngineConfig {
    pub fn new(policy: TruncationPolicy) -> Self {
        EngineConfig {
            policy,
            hard_cap: DEFAULT_HARD_BOND_CAP,
        }
    }

    pub fn with_epsilon(epsilon: f64) -> Result<Self> {
        Ok(Self::new(TruncationPolicy::new(epsilon, None)?))
    }

    pub fn with_hard_cap(mut self, cap: usize) -> Self {
        self.hard_cap = cap;
        self
    }
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self::with_epsilon(DEFAULT_CHARACTER_EPSILON).expect("default epsilon is valid")
    }
}

/// One rounded amplitude.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterResult {
    pub value: i64,
    pub amplitude: f64,
    /// `|amplitude − value|`.
    pub residual: f64,
    pub max_bond_seen: usize,
    /// Set when the amplitude is too large to resolve integers or the
    /// residual reaches 1/2.
    pub precision_flag: bool,
}

impl CharacterResult {
    pub fn from_amplitude(amplitude: f64, max_bond_seen: usize) -> Self {
        let rounded = amplitude.round();
        let residual = (amplitude - rounded).abs();
        let precision_flag = !amplitude.is_finite() || amplitude.abs() >= EXACT_INTEGER_LIMIT || residual >= 0.5;
        let value = if precision_flag && !amplitude.is_finite() {
            0
        } else {
            rounded as i64
        };
        CharacterResult {
            value,
            amplitude,
            residual,
            max_bond_seen,
            precision_flag,
        }
    }
}

/// Bond statistics of one `J_ℓ` application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepStats {
    pub ell: usize,
    /// Max bond of the uncompressed product.
    pub raw_bond: usize,
    /// Max bond after compression.
    pub bond: usize,
}

#[derive(Clone, Debug)]
pub struct PsiBuild {
    pub state: Mps,
    pub steps: Vec<StepStats>,
}

impl PsiBuild {
    pub fn max_bond(&self) -> usize {
        self.steps.iter().map(|s| s.bond).max().unwrap_or(1)
    }
}

/// Applies `op(len)` for each entry of `lengths` in order, compressing after
/// each step. Shared by the character and Kostka engines.
pub(crate) fn build_by_mpos<F>(n: usize, lengths: &[usize], config: &EngineConfig, op: F) -> Result<PsiBuild>
where
    F: Fn(usize, usize) -> Result<crate::tensor::Mpo>,
{
    let sites = 2 * n;
    let mut state = Mps::product_state(&OccupationString::filled(n));
    let mut steps = Vec::with_capacity(lengths.len());
    for &len in lengths {
        let raw = mpo_apply(&op(len, sites)?, &state)?;
        let raw_bond = raw.max_bond();
        state = compress(&raw, &config.policy)?;
        let bond = state.max_bond();
        log::debug!("applied length {len}: raw bond {raw_bond}, compressed {bond}");
        if bond > config.hard_cap {
            return Err(Error::ResourceLimit(format!(
                "bond dimension {bond} exceeds the hard cap {}",
                config.hard_cap
            )));
        }
        steps.push(StepStats {
            ell: len,
            raw_bond,
            bond,
        });
    }
    Ok(PsiBuild { state, steps })
}

/// `Π_j J_{ν_j} |1^n 0^n⟩`, applying cycle lengths in ascending order.
pub fn build_psi(nu: &Partition, n: usize, config: &EngineConfig) -> Result<PsiBuild> {
    nu.expect_size(n, "cycle type")?;
    let ascending: Vec<usize> = nu.parts().iter().rev().copied().collect();
    build_psi_in_order(&ascending, n, config)
}

/// Like [`build_psi`] with an explicit application order of the cycle lengths.
pub fn build_psi_in_order(lengths: &[usize], n: usize, config: &EngineConfig) -> Result<PsiBuild> {
    if lengths.iter().sum::<usize>() != n || lengths.contains(&0) {
        return Err(crate::error::invalid(format!(
            "cycle lengths {lengths:?} do not partition {n}"
        )));
    }
    build_by_mpos(n, lengths, config, current_mpo)
}

pub fn character(lambda: &Partition, nu: &Partition, n: usize, config: &EngineConfig) -> Result<CharacterResult> {
    lambda.expect_size(n, "irrep")?;
    let build = build_psi(nu, n, config)?;
    let x = encode_occupation(lambda, n)?;
    Ok(CharacterResult::from_amplitude(
        build.state.amplitude(&x),
        build.max_bond(),
    ))
}

/// [`character`] that fails instead of returning an unreliable integer: the
/// amplitude must round cleanly and `‖ψ_ν‖²` must reproduce `|E_ν|`.
pub fn character_checked(
    lambda: &Partition,
    nu: &Partition,
    n: usize,
    config: &EngineConfig,
) -> Result<CharacterResult> {
    lambda.expect_size(n, "irrep")?;
    let build = build_psi(nu, n, config)?;
    let r = CharacterResult::from_amplitude(build.state.amplitude(&encode_occupation(lambda, n)?), build.max_bond());
    if r.precision_flag {
        return Err(Error::Precision(format!(
            "amplitude {} for chi_{lambda}({nu}) cannot be rounded reliably",
            r.amplitude
        )));
    }
    let expected = centralizer_size(nu).to_f64().unwrap_or(f64::INFINITY);
    let residual = (build.state.norm_squared() - expected).abs() / expected;
    if !(residual <= NORM_TOLERANCE) {
        return Err(Error::Precision(format!(
            "norm identity violated for class {nu}: relative residual {residual:e}"
        )));
    }
    Ok(r)
}

/// All characters `χ_λ(ν)`, `λ ⊢ n`, for one conjugacy class.
#[derive(Clone, Debug)]
pub struct CharacterRow {
    pub n: usize,
    pub nu: Partition,
    /// In [`enumerate_partitions`] order.
    pub entries: Vec<(Partition, CharacterResult)>,
    /// `|Σ value² − |E_ν|| / |E_ν|`.
    pub norm_residual: f64,
    pub max_bond: usize,
}

impl CharacterRow {
    pub fn get(&self, lambda: &Partition) -> Option<&CharacterResult> {
        self.entries.iter().find(|(l, _)| l == lambda).map(|(_, r)| r)
    }

    pub fn values(&self) -> Vec<i64> {
        self.entries.iter().map(|(_, r)| r.value).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|(_, r)| r.residual).fold(0.0, f64::max)
    }

    /// Fails if any entry is flagged or the norm identity is violated.
    pub fn certify(&self) -> Result<()> {
        if let Some((lambda, r)) = self.entries.iter().find(|(_, r)| r.precision_flag) {
            return Err(Error::Precision(format!(
                "amplitude {} at irrep {lambda} (class {}) cannot be rounded reliably",
                r.amplitude, self.nu
            )));
        }
        if !(self.norm_residual <= NORM_TOLERANCE) {
            return Err(Error::Precision(format!(
                "norm identity violated for class {}: relative residual {:e}",
                self.nu, self.norm_residual
            )));
        }
        Ok(())
    }
}

pub(crate) fn relative_norm_residual(values: impl Iterator<Item = i64>, expected: &BigUint) -> f64 {
    let sum: BigInt = values.map(|v| BigInt::from(v) * BigInt::from(v)).sum();
    let expected = BigInt::from(expected.clone());
    if expected.is_zero() {
        return f64::INFINITY;
    }
    let diff = (sum - &expected).magnitude().to_f64().unwrap_or(f64::INFINITY);
    diff / expected.to_f64().unwrap_or(f64::INFINITY)
}

/// One state build, then cached amplitude extraction for every `λ ⊢ n`.
pub fn character_row(nu: &Partition, n: usize, config: &EngineConfig) -> Result<CharacterRow> {
    let build = build_psi(nu, n, config)?;
    let irreps = enumerate_partitions(n)?;
    let xs = irreps
        .iter()
        .map(|l| encode_occupation(l, n))
        .collect::<Result<Vec<_>>>()?;
    let mut cache = BlockCache::new();
    let amps = amplitude_batch(&build.state, &xs, &mut cache);
    let max_bond = build.max_bond();
    let entries: Vec<(Partition, CharacterResult)> = irreps
        .into_iter()
        .zip(amps)
        .map(|(l, a)| (l, CharacterResult::from_amplitude(a, max_bond)))
        .collect();
    let norm_residual = relative_norm_residual(entries.iter().map(|(_, r)| r.value), &centralizer_size(nu));
    Ok(CharacterRow {
        n,
        nu: nu.clone(),
        entries,
        norm_residual,
        max_bond,
    })
}

/// Rows for every conjugacy class of `S_n`, in [`enumerate_partitions`]
/// order. `jobs > 1` computes rows on a dedicated thread pool; the output
/// order does not depend on it.
pub fn character_table(n: usize, config: &EngineConfig, jobs: usize) -> Result<Vec<CharacterRow>> {
    let classes = enumerate_partitions(n)?;
    if jobs <= 1 {
        return classes.iter().map(|nu| character_row(nu, n, config)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| classes.par_iter().map(|nu| character_row(nu, n, config)).collect())
}

/// `Π_j (ν_j + 2)`, the a-priori bond bound for `|ψ_ν⟩`.
pub fn bond_bound(nu: &Partition) -> BigUint {
    nu.parts().iter().fold(BigUint::from(1u32), |acc, &p| acc * (p + 2))
}
