//! Exact integer ground truth for the tensor-network engines.
//!
//! Nothing here touches floating point: characters come from the
//! Murnaghan–Nakayama border-strip recursion, Kostka numbers from explicit
//! enumeration of semistandard tableaux, and the spin-chain states from a
//! particle-hopping simulation in the fixed-particle-number sector.
//! [`SparseOp`] builds the Jordan–Wigner operators as explicit `2^L`-dimensional
//! matrices so the hopping sign rule itself can be checked.

use std::collections::{BTreeMap, HashMap};
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{CheckedAdd, One, Zero};

use crate::combinatorics::{encode_occupation, OccupationString, Partition};
use crate::error::{invalid, Error, Result};

pub const MN_CAP: usize = 14;
pub const SSYT_CAP: usize = 12;
pub const DENSE_PSI_CAP: usize = 8;
pub const JW_CROSSCHECK_CAP: usize = 5;

fn over_cap(what: &str, n: usize, cap: usize) -> Error {
    Error::ResourceLimit(format!("{what} limited to n <= {cap}, got {n}"))
}

/// Memoized Murnaghan–Nakayama evaluator.
#[derive(Debug, Default)]
pub struct MnOracle {
    memo: HashMap<(Vec<usize>, Vec<usize>), i64>,
}

impl MnOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn character(&mut self, lambda: &Partition, nu: &Partition) -> Result<i64> {
        let n = nu.size();
        if lambda.size() != n {
            return Err(invalid(format!("{lambda} and {nu} partition different integers")));
        }
        if n > MN_CAP {
            return Err(over_cap("Murnaghan-Nakayama oracle", n, MN_CAP));
        }
        Ok(self.eval(lambda.parts(), nu.parts()))
    }

    fn eval(&mut self, lambda: &[usize], nu: &[usize]) -> i64 {
        let Some((&strip, rest)) = nu.split_first() else {
            return i64::from(lambda.is_empty());
        };
        let key = (lambda.to_vec(), nu.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        // Beta-set: removing a border strip of size r moves one bead from b to
        // b - r; the strip height is the number of beads jumped over.
        let m = lambda.len();
        let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + m - 1 - i).collect();
        let mut total = 0;
        for (i, &b) in beta.iter().enumerate() {
            if b < strip || beta.contains(&(b - strip)) {
                continue;
            }
            let target = b - strip;
            let height = beta.iter().filter(|&&c| c > target && c < b).count();
            let mut next = beta.clone();
            next[i] = target;
            next.sort_unstable_by(|a, b| b.cmp(a));
            let shape: Vec<usize> = next
                .iter()
                .enumerate()
                .map(|(j, &c)| c - (m - 1 - j))
                .filter(|&p| p > 0)
                .collect();
            let sign = if height % 2 == 0 { 1 } else { -1 };
            total += sign * self.eval(&shape, rest);
        }
        self.memo.insert(key, total);
        total
    }
}

/// `χ_λ(ν)` by the Murnaghan–Nakayama rule.
pub fn mn_character(lambda: &Partition, nu: &Partition) -> Result<i64> {
    MnOracle::new().character(lambda, nu)
}

/// Number of semistandard tableaux of shape `λ` and content `μ`, by filling
/// cells in reading order with weakly increasing rows and strictly
/// increasing columns.
pub fn ssyt_count(lambda: &Partition, mu: &Partition) -> Result<u64> {
    let n = lambda.size();
    if mu.size() != n {
        return Err(invalid(format!("{lambda} and {mu} partition different integers")));
    }
    if n > SSYT_CAP {
        return Err(over_cap("tableau enumeration", n, SSYT_CAP));
    }
    let cells: Vec<(usize, usize)> = lambda
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<usize>> = lambda.parts().iter().map(|&len| vec![0; len]).collect();
    let mut remaining = mu.parts().to_vec();

    fn fill(idx: usize, cells: &[(usize, usize)], grid: &mut Vec<Vec<usize>>, remaining: &mut Vec<usize>) -> u64 {
        let Some(&(r, c)) = cells.get(idx) else {
            return 1;
        };
        let min_row = if c > 0 { grid[r][c - 1] } else { 0 };
        let min_col = if r > 0 { grid[r - 1][c] + 1 } else { 0 };
        let lo = min_row.max(min_col);
        let mut count = 0;
        for v in lo..remaining.len() {
            if remaining[v] == 0 {
                continue;
            }
            remaining[v] -= 1;
            grid[r][c] = v;
            count += fill(idx + 1, cells, grid, remaining);
            remaining[v] += 1;
        }
        count
    }

    Ok(fill(0, &cells, &mut grid, &mut remaining))
}

trait ExactInt: Clone + Zero + One + Neg<Output = Self> + CheckedAdd {}
impl ExactInt for i64 {}
impl ExactInt for BigInt {}

fn hop_sign_rule<T: ExactInt>(nu: &Partition, n: usize) -> Option<BTreeMap<OccupationString, T>> {
    let mut state: BTreeMap<OccupationString, T> = BTreeMap::new();
    state.insert(OccupationString::filled(n), T::one());
    for &ell in nu.parts().iter().rev() {
        let mut next: BTreeMap<OccupationString, T> = BTreeMap::new();
        for (x, amp) in &state {
            let bits = x.bits();
            for k in 0..bits.len().saturating_sub(ell) {
                if !bits[k] || bits[k + ell] {
                    continue;
                }
                let between = bits[k + 1..k + ell].iter().filter(|&&b| b).count();
                let mut moved = bits.to_vec();
                moved[k] = false;
                moved[k + ell] = true;
                let term = if between % 2 == 0 { amp.clone() } else { -amp.clone() };
                let slot = next.entry(OccupationString::from_bits(moved)).or_insert_with(T::zero);
                *slot = slot.checked_add(&term)?;
            }
        }
        next.retain(|_, v| !v.is_zero());
        state = next;
    }
    Some(state)
}

/// `Π_j J_{ν_j} |1^n 0^n⟩` on `2n` sites as a map from occupation strings to
/// exact integer amplitudes (zero amplitudes omitted).
pub fn dense_psi(nu: &Partition, n: usize) -> Result<BTreeMap<OccupationString, BigInt>> {
    nu.expect_size(n, "cycle type")?;
    if n > DENSE_PSI_CAP {
        return Err(over_cap("dense fermionic state", n, DENSE_PSI_CAP));
    }
    if let Some(small) = hop_sign_rule::<i64>(nu, n) {
        return Ok(small.into_iter().map(|(k, v)| (k, BigInt::from(v))).collect());
    }
    hop_sign_rule::<BigInt>(nu, n).ok_or_else(|| Error::Internal("arbitrary-precision accumulation overflowed".into()))
}

/// Integer matrix on `L` two-level sites stored by columns; basis index as
/// [`OccupationString::index`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseOp {
    sites: usize,
    columns: Vec<BTreeMap<usize, i64>>,
}

type IntLocal = [[i64; 2]; 2];

const INT_IDENTITY: IntLocal = [[1, 0], [0, 1]];
const INT_Z: IntLocal = [[1, 0], [0, -1]];
/// `(X + iY)/2`, which maps `|1⟩` to `|0⟩`.
const INT_LOWER: IntLocal = [[0, 1], [0, 0]];

impl SparseOp {
    pub fn zero(sites: usize) -> Self {
        SparseOp {
            sites,
            columns: vec![BTreeMap::new(); 1 << sites],
        }
    }

    /// Tensor product of the given single-site matrices (identity elsewhere).
    fn kron(sites: usize, locals: &[(usize, IntLocal)]) -> Self {
        let mut per_site = vec![INT_IDENTITY; sites];
        for &(s, m) in locals {
            per_site[s] = m;
        }
        let columns = (0..1usize << sites)
            .map(|col| {
                let mut row = 0usize;
                let mut value = 1i64;
                for (s, m) in per_site.iter().enumerate() {
                    let input = (col >> (sites - 1 - s)) & 1;
                    let out = if m[0][input] != 0 { 0 } else { 1 };
                    value *= m[out][input];
                    row = (row << 1) | out;
                }
                let mut entry = BTreeMap::new();
                if value != 0 {
                    entry.insert(row, value);
                }
                entry
            })
            .collect();
        SparseOp { sites, columns }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.columns[col].get(&row).copied().unwrap_or(0)
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.columns[col].iter().map(|(&r, &v)| (r, v))
    }

    pub fn transpose(&self) -> Self {
        let mut out = SparseOp::zero(self.sites);
        for (c, col) in self.columns.iter().enumerate() {
            for (&r, &v) in col {
                out.columns[r].insert(c, v);
            }
        }
        out
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &SparseOp) -> Self {
        let columns = rhs
            .columns
            .iter()
            .map(|col| {
                let mut acc = BTreeMap::new();
                for (&mid, &v) in col {
                    for (&row, &w) in &self.columns[mid] {
                        *acc.entry(row).or_insert(0) += v * w;
                    }
                }
                acc.retain(|_, v| *v != 0);
                acc
            })
            .collect();
        SparseOp {
            sites: self.sites,
            columns,
        }
    }

    pub fn add(&self, rhs: &SparseOp) -> Self {
        let mut out = self.clone();
        for (c, col) in rhs.columns.iter().enumerate() {
            for (&r, &v) in col {
                *out.columns[c].entry(r).or_insert(0) += v;
            }
            out.columns[c].retain(|_, v| *v != 0);
        }
        out
    }

    /// `self |v⟩` for a sparse vector.
    pub fn apply(&self, v: &BTreeMap<usize, i64>) -> BTreeMap<usize, i64> {
        let mut acc = BTreeMap::new();
        for (&c, &a) in v {
            for (&r, &w) in &self.columns[c] {
                *acc.entry(r).or_insert(0) += a * w;
            }
        }
        acc.retain(|_, x| *x != 0);
        acc
    }
}

/// Jordan–Wigner annihilator `a_k = (X_k + iY_k)/2 · Π_{j<k} Z_j`.
pub fn jw_annihilator(k: usize, sites: usize) -> SparseOp {
    let mut locals: Vec<(usize, IntLocal)> = (0..k).map(|j| (j, INT_Z)).collect();
    locals.push((k, INT_LOWER));
    SparseOp::kron(sites, &locals)
}

/// `J_ℓ = Σ_{k=0}^{L−1−ℓ} a†_{k+ℓ} a_k` from explicit fermion operators.
pub fn jw_current(ell: usize, sites: usize) -> SparseOp {
    (0..sites.saturating_sub(ell)).fold(SparseOp::zero(sites), |acc, k| {
        acc.add(
            &jw_annihilator(k + ell, sites)
                .transpose()
                .compose(&jw_annihilator(k, sites)),
        )
    })
}

/// `x̂_i = a†_{i+1} a_i`.
pub fn jw_hop(i: usize, sites: usize) -> SparseOp {
    jw_annihilator(i + 1, sites)
        .transpose()
        .compose(&jw_annihilator(i, sites))
}

/// `Σ_{i_1 > ⋯ > i_k} x̂_{i_1} ⋯ x̂_{i_k}` over hop indices `0..L−1`.
pub fn hop_product_sum(k: usize, sites: usize) -> SparseOp {
    let hops: Vec<SparseOp> = (0..sites - 1).map(|i| jw_hop(i, sites)).collect();
    // indices chosen in decreasing order, building the product left to right
    fn rec(k: usize, below: usize, prefix: &SparseOp, hops: &[SparseOp], acc: &mut SparseOp) {
        if k == 0 {
            *acc = acc.add(prefix);
            return;
        }
        for i in (k - 1)..below {
            rec(k - 1, i, &prefix.compose(&hops[i]), hops, acc);
        }
    }
    let mut acc = SparseOp::zero(sites);
    let mut identity = SparseOp::zero(sites);
    for c in 0..identity.dim() {
        identity.columns[c].insert(c, 1);
    }
    rec(k, hops.len(), &identity, &hops, &mut acc);
    acc
}

/// Confirms [`dense_psi`] against the full `2^{2n}`-dimensional Jordan–Wigner
/// operators applied to `|1^n 0^n⟩`.
pub fn dense_jw_crosscheck(nu: &Partition, n: usize) -> Result<bool> {
    nu.expect_size(n, "cycle type")?;
    if n > JW_CROSSCHECK_CAP {
        return Err(over_cap("Jordan-Wigner cross-check", n, JW_CROSSCHECK_CAP));
    }
    let sites = 2 * n;
    let mut v = BTreeMap::new();
    v.insert(OccupationString::filled(n).index(), 1i64);
    for &ell in nu.parts() {
        v = jw_current(ell, sites).apply(&v);
    }
    let reference = dense_psi(nu, n)?;
    let as_index: BTreeMap<usize, BigInt> = reference.into_iter().map(|(x, a)| (x.index(), a)).collect();
    let same = v.len() == as_index.len() && v.iter().all(|(i, a)| as_index.get(i) == Some(&BigInt::from(*a)));
    Ok(same)
}

/// Oracle character read off [`dense_psi`] at the encoding of `λ`.
pub fn dense_character(lambda: &Partition, nu: &Partition, n: usize) -> Result<BigInt> {
    let psi = dense_psi(nu, n)?;
    let x = encode_occupation(lambda, n)?;
    Ok(psi.get(&x).cloned().unwrap_or_else(BigInt::zero))
}
