//! Kostka numbers `K_{λ,μ} = ⟨x_{λ+τ}| Π_j ĥ_{μ_j} |1^n 0^n⟩`.

use num_bigint::BigUint;

use crate::character_engine::{build_by_mpos, CharacterResult, EngineConfig, PsiBuild};
use crate::combinatorics::{encode_occupation, enumerate_partitions, Partition};
use crate::error::{Error, Result};
use crate::mpo_builders::complete_homogeneous_mpo;
use crate::tensor::{amplitude_batch, BlockCache};

pub const DEFAULT_KOSTKA_EPSILON: f64 = 1e-11;

/// Engine defaults for Kostka runs.
pub fn default_config() -> EngineConfig {
    EngineConfig::with_epsilon(DEFAULT_KOSTKA_EPSILON).expect("default epsilon is valid")
}

/// `Π_j (2μ_j + 1)`.
pub fn kostka_bond_bound(mu: &Partition) -> BigUint {
    mu.parts().iter().fold(BigUint::from(1u32), |acc, &p| acc * (2 * p + 1))
}

/// `Π_j ĥ_{μ_j} |1^n 0^n⟩`, applying parts in ascending order.
pub fn build_psi_mu(mu: &Partition, n: usize, config: &EngineConfig) -> Result<PsiBuild> {
    mu.expect_size(n, "weight")?;
    if 3 * mu.len() > n {
        log::warn!("weight {mu} has more than n/3 parts; expect slower runs and tighter epsilon requirements");
    }
    let ascending: Vec<usize> = mu.parts().iter().rev().copied().collect();
    build_by_mpos(n, &ascending, config, complete_homogeneous_mpo)
}

fn checked(lambda: &Partition, mu: &Partition, r: CharacterResult) -> Result<CharacterResult> {
    if r.value < 0 {
        return Err(Error::Internal(format!(
            "negative Kostka number {} for ({lambda}; {mu})",
            r.value
        )));
    }
    Ok(r)
}

pub fn kostka(lambda: &Partition, mu: &Partition, n: usize, config: &EngineConfig) -> Result<CharacterResult> {
    lambda.expect_size(n, "shape")?;
    let build = build_psi_mu(mu, n, config)?;
    let x = encode_occupation(lambda, n)?;
    checked(
        lambda,
        mu,
        CharacterResult::from_amplitude(build.state.amplitude(&x), build.max_bond()),
    )
}

#[derive(Clone, Debug)]
pub struct KostkaRow {
    pub n: usize,
    pub mu: Partition,
    pub entries: Vec<(Partition, CharacterResult)>,
    pub max_bond: usize,
}

impl KostkaRow {
    pub fn get(&self, lambda: &Partition) -> Option<&CharacterResult> {
        self.entries.iter().find(|(l, _)| l == lambda).map(|(_, r)| r)
    }

    pub fn values(&self) -> Vec<i64> {
        self.entries.iter().map(|(_, r)| r.value).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|(_, r)| r.residual).fold(0.0, f64::max)
    }

    pub fn certify(&self) -> Result<()> {
        match self.entries.iter().find(|(_, r)| r.precision_flag) {
            Some((lambda, r)) => Err(Error::Precision(format!(
                "amplitude {} at shape {lambda} (weight {}) cannot be rounded reliably",
                r.amplitude, self.mu
            ))),
            None => Ok(()),
        }
    }
}

/// `{K_{λ,μ}}_{λ ⊢ n}` from a single state build.
pub fn kostka_row(mu: &Partition, n: usize, config: &EngineConfig) -> Result<KostkaRow> {
    let build = build_psi_mu(mu, n, config)?;
    let shapes = enumerate_partitions(n)?;
    let xs = shapes
        .iter()
        .map(|l| encode_occupation(l, n))
        .collect::<Result<Vec<_>>>()?;
    let amps = amplitude_batch(&build.state, &xs, &mut BlockCache::new());
    let max_bond = build.max_bond();
    let entries = shapes
        .into_iter()
        .zip(amps)
        .map(|(l, a)| {
            let r = checked(&l, mu, CharacterResult::from_amplitude(a, max_bond))?;
            Ok((l, r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KostkaRow {
        n,
        mu: mu.clone(),
        entries,
        max_bond,
    })
}
