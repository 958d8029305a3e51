//! Open-boundary matrix product states and operators over two-level sites.
//!
//! An [`Mps`] stores, for every site, the pair of matrices `A[s][0]`,
//! `A[s][1]` selected by the physical index; the amplitude of a basis string
//! `x` is the ordered product `A[0][x_0] · A[1][x_1] ⋯` between 1-dimensional
//! boundary bonds. States are unnormalized: the pipelines in this crate read
//! exact integers off amplitudes and the norm carries information.
//!
//! [`compress`] brings a state into mixed-canonical form with its center on
//! site 0: a left-to-right QR sweep followed by a right-to-left SVD sweep
//! that truncates every cut with the relative rule of [`TruncationPolicy`].
//! After compression every site to the right of the center is a right
//! isometry, `Σ_s A[s] A[s]ᵀ = I`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::{DMatrix, DVector};

use crate::combinatorics::OccupationString;
use crate::error::{invalid, Error, Result};
use crate::linalg::{thin_qr, thin_svd};

/// Largest chain accepted by [`dense_materialize`] (a `2^14 × 2^14` matrix).
pub const MAX_DENSE_OPERATOR_SITES: usize = 14;

/// Largest chain accepted by [`Mps::to_dense`].
pub const MAX_DENSE_STATE_SITES: usize = 24;

static NEXT_STATE_ID: AtomicU64 = AtomicU64::new(0);

fn next_id() -> u64 {
    NEXT_STATE_ID.fetch_add(1, Ordering::Relaxed)
}

/// Relative singular-value truncation with an optional bond cap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    epsilon: f64,
    max_bond: Option<usize>,
}

impl TruncationPolicy {
    pub fn new(epsilon: f64, max_bond: Option<usize>) -> Result<Self> {
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(invalid(format!(
                "truncation epsilon must be finite and >= 0, got {epsilon}"
            )));
        }
        if max_bond == Some(0) {
            return Err(invalid("max bond must be at least 1"));
        }
        Ok(TruncationPolicy { epsilon, max_bond })
    }

    /// Removes numerically zero singular values only.
    pub fn lossless() -> Self {
        TruncationPolicy {
            epsilon: 0.0,
            max_bond: None,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn max_bond(&self) -> Option<usize> {
        self.max_bond
    }

    /// Number of leading singular values to keep. `values` must be sorted
    /// in decreasing order.
    ///
    /// Keeps the smallest `d ≥ 1` with `Σ_{i>d} s_i ≤ ε Σ_i s_i`, then drops
    /// values at or below the numerical-rank threshold `tol`, then clamps to
    /// the bond cap.
    pub fn retained(&self, values: &[f64], tol: f64) -> usize {
        if values.is_empty() {
            return 1;
        }
        let total: f64 = values.iter().sum();
        let budget = self.epsilon * total;
        let mut keep = values.len();
        let mut tail = 0.0;
        while keep > 1 {
            let next = tail + values[keep - 1];
            if next > budget {
                break;
            }
            tail = next;
            keep -= 1;
        }
        let rank = values.iter().take_while(|&&s| s > tol).count().max(1);
        let mut keep = keep.min(rank);
        if let Some(cap) = self.max_bond {
            keep = keep.min(cap);
        }
        keep
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::lossless()
    }
}

/// Matrix product state: per-site pairs of `left × right` matrices.
#[derive(Clone, Debug)]
pub struct Mps {
    sites: Vec<[DMatrix<f64>; 2]>,
    center: Option<usize>,
    id: u64,
}

impl Mps {
    /// Builds an MPS from per-site `[A[0], A[1]]` pairs, checking bond agreement.
    pub fn from_sites(sites: Vec<[DMatrix<f64>; 2]>) -> Result<Self> {
        if sites.is_empty() {
            return Err(invalid("an MPS needs at least one site"));
        }
        for (i, [a0, a1]) in sites.iter().enumerate() {
            if a0.shape() != a1.shape() {
                return Err(invalid(format!("site {i}: physical slices differ in shape")));
            }
            if a0.nrows() == 0 || a0.ncols() == 0 {
                return Err(invalid(format!("site {i}: empty bond")));
            }
        }
        if sites[0][0].nrows() != 1 || sites[sites.len() - 1][0].ncols() != 1 {
            return Err(invalid("boundary bonds must have dimension 1"));
        }
        for (i, pair) in sites.windows(2).enumerate() {
            if pair[0][0].ncols() != pair[1][0].nrows() {
                return Err(invalid(format!("bond mismatch between sites {i} and {}", i + 1)));
            }
        }
        Ok(Mps {
            sites,
            center: None,
            id: next_id(),
        })
    }

    /// The basis state `|x⟩` as a bond-1 MPS.
    pub fn product_state(x: &OccupationString) -> Self {
        let sites = x
            .bits()
            .iter()
            .map(|&b| {
                let on = DMatrix::from_element(1, 1, 1.0);
                let off = DMatrix::zeros(1, 1);
                if b {
                    [off, on]
                } else {
                    [on, off]
                }
            })
            .collect();
        Mps {
            sites,
            center: None,
            id: next_id(),
        }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn site(&self, i: usize) -> &[DMatrix<f64>; 2] {
        &self.sites[i]
    }

    /// Orthogonality center after [`compress`], if any.
    pub fn center(&self) -> Option<usize> {
        self.center
    }

    /// Dimensions of the `len − 1` internal bonds.
    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites[..self.sites.len() - 1]
            .iter()
            .map(|s| s[0].ncols())
            .collect()
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1).max(1)
    }

    /// Copy with both matrices of one site multiplied by `factor`.
    pub fn scaled_site(&self, site: usize, factor: f64) -> Mps {
        let mut out = self.clone();
        out.id = next_id();
        for m in &mut out.sites[site] {
            *m *= factor;
        }
        out
    }

    pub fn amplitude(&self, x: &OccupationString) -> f64 {
        assert_eq!(x.len(), self.len(), "occupation string and MPS differ in site count");
        let mut row = DMatrix::from_element(1, 1, 1.0);
        for (site, &b) in self.sites.iter().zip(x.bits()) {
            row = &row * &site[b as usize];
        }
        row[(0, 0)]
    }

    /// `⟨ψ|ψ⟩` by transfer-matrix contraction.
    pub fn norm_squared(&self) -> f64 {
        let mut env = DMatrix::from_element(1, 1, 1.0);
        for site in &self.sites {
            let mut next = DMatrix::zeros(site[0].ncols(), site[0].ncols());
            for a in site {
                next += a.transpose() * &env * a;
            }
            env = next;
        }
        env[(0, 0)]
    }

    /// Full amplitude vector, indexed as [`OccupationString::index`].
    pub fn to_dense(&self) -> Result<DVector<f64>> {
        if self.len() > MAX_DENSE_STATE_SITES {
            return Err(Error::ResourceLimit(format!(
                "dense state of {} sites exceeds the {MAX_DENSE_STATE_SITES}-site guard",
                self.len()
            )));
        }
        let mut acc = DMatrix::from_element(1, 1, 1.0);
        for site in &self.sites {
            let left = &acc * &site[0];
            let right = &acc * &site[1];
            let mut next = DMatrix::zeros(2 * acc.nrows(), site[0].ncols());
            for r in 0..acc.nrows() {
                next.row_mut(2 * r).copy_from(&left.row(r));
                next.row_mut(2 * r + 1).copy_from(&right.row(r));
            }
            acc = next;
        }
        Ok(DVector::from_column_slice(acc.column(0).as_slice()))
    }

    /// Largest deviation of site `i` from the isometry condition on the
    /// requested side (`Σ_s AᵀA = I` for left, `Σ_s AAᵀ = I` for right).
    pub fn isometry_defect(&self, i: usize, left: bool) -> f64 {
        let [a0, a1] = &self.sites[i];
        let gram = if left {
            a0.transpose() * a0 + a1.transpose() * a1
        } else {
            a0 * a0.transpose() + a1 * a1.transpose()
        };
        let id = DMatrix::<f64>::identity(gram.nrows(), gram.ncols());
        (gram - id).amax()
    }

    /// Plain-text dump: `sites=<L>`, then per site a `left right` line
    /// followed by the entries of `A[a][s][b]` in row-major order.
    pub fn dump(&self) -> String {
        let mut out = format!("sites={}\n", self.len());
        for [a0, a1] in &self.sites {
            let _ = writeln!(out, "{} {}", a0.nrows(), a0.ncols());
            let mut vals = Vec::with_capacity(2 * a0.len());
            for a in 0..a0.nrows() {
                for m in [a0, a1] {
                    for b in 0..a0.ncols() {
                        vals.push(format!("{:e}", m[(a, b)]));
                    }
                }
            }
            out.push_str(&vals.join(" "));
            out.push('\n');
        }
        out
    }
}

/// One MPO site: `ops[out][in]` is a `left × right` matrix over the virtual bonds.
#[derive(Clone, Debug)]
pub struct MpoSite {
    ops: [[DMatrix<f64>; 2]; 2],
}

impl MpoSite {
    pub fn zeros(left: usize, right: usize) -> Self {
        let z = || DMatrix::zeros(left, right);
        MpoSite {
            ops: [[z(), z()], [z(), z()]],
        }
    }

    /// Adds `value · |out⟩⟨in|` on the transition `left_state → right_state`.
    pub fn add(&mut self, left_state: usize, right_state: usize, local: [[f64; 2]; 2]) {
        for (out, row) in local.iter().enumerate() {
            for (inp, &v) in row.iter().enumerate() {
                self.ops[out][inp][(left_state, right_state)] += v;
            }
        }
    }

    pub fn op(&self, out: usize, inp: usize) -> &DMatrix<f64> {
        &self.ops[out][inp]
    }

    pub fn left(&self) -> usize {
        self.ops[0][0].nrows()
    }

    pub fn right(&self) -> usize {
        self.ops[0][0].ncols()
    }
}

/// Matrix product operator.
#[derive(Clone, Debug)]
pub struct Mpo {
    sites: Vec<MpoSite>,
}

impl Mpo {
    pub fn from_sites(sites: Vec<MpoSite>) -> Result<Self> {
        if sites.is_empty() {
            return Err(invalid("an MPO needs at least one site"));
        }
        if sites[0].left() != 1 || sites[sites.len() - 1].right() != 1 {
            return Err(invalid("boundary bonds must have dimension 1"));
        }
        for (i, pair) in sites.windows(2).enumerate() {
            if pair[0].right() != pair[1].left() {
                return Err(invalid(format!("bond mismatch between sites {i} and {}", i + 1)));
            }
        }
        Ok(Mpo { sites })
    }

    pub fn identity(sites: usize) -> Self {
        let sites = (0..sites)
            .map(|_| {
                let mut s = MpoSite::zeros(1, 1);
                s.add(0, 0, [[1.0, 0.0], [0.0, 1.0]]);
                s
            })
            .collect();
        Mpo { sites }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn site(&self, i: usize) -> &MpoSite {
        &self.sites[i]
    }

    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites[..self.sites.len() - 1].iter().map(MpoSite::right).collect()
    }

    /// Nonzero entries `(row, value)` of the column `op |x⟩`, with rows
    /// indexed as [`OccupationString::index`].
    pub fn column(&self, x: &OccupationString) -> Vec<(usize, f64)> {
        assert_eq!(x.len(), self.len(), "basis string and MPO differ in site count");
        let mut frontier: HashMap<usize, DMatrix<f64>> = HashMap::new();
        frontier.insert(0, DMatrix::from_element(1, 1, 1.0));
        for (site, &b) in self.sites.iter().zip(x.bits()) {
            let mut next: HashMap<usize, DMatrix<f64>> = HashMap::new();
            for (prefix, row) in &frontier {
                for out in 0..2 {
                    let op = &site.ops[out][b as usize];
                    let v = row * op;
                    if v.iter().all(|&e| e == 0.0) {
                        continue;
                    }
                    next.entry((prefix << 1) | out)
                        .and_modify(|acc| *acc += &v)
                        .or_insert(v);
                }
            }
            frontier = next;
        }
        let mut col: Vec<(usize, f64)> = frontier
            .into_iter()
            .map(|(row, v)| (row, v[(0, 0)]))
            .filter(|&(_, v)| v != 0.0)
            .collect();
        col.sort_unstable_by_key(|&(r, _)| r);
        col
    }
}

/// Contracts all virtual indices of `op` into a `2^L × 2^L` matrix.
pub fn dense_materialize(op: &Mpo) -> Result<DMatrix<f64>> {
    let sites = op.len();
    if sites > MAX_DENSE_OPERATOR_SITES {
        return Err(Error::ResourceLimit(format!(
            "dense operator on {sites} sites exceeds the {MAX_DENSE_OPERATOR_SITES}-site guard"
        )));
    }
    let dim = 1usize << sites;
    let mut out = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let x = OccupationString::from_index(col, sites);
        for (row, v) in op.column(&x) {
            out[(row, col)] = v;
        }
    }
    Ok(out)
}

/// Exact MPO × MPS product; bond dimensions multiply.
pub fn mpo_apply(op: &Mpo, state: &Mps) -> Result<Mps> {
    if op.len() != state.len() {
        return Err(invalid(format!(
            "MPO has {} sites but MPS has {}",
            op.len(),
            state.len()
        )));
    }
    let sites = op
        .sites
        .iter()
        .zip(&state.sites)
        .map(|(w, a)| {
            let site = |out: usize| -> DMatrix<f64> { w.ops[out][0].kronecker(&a[0]) + w.ops[out][1].kronecker(&a[1]) };
            [site(0), site(1)]
        })
        .collect();
    Ok(Mps {
        sites,
        center: None,
        id: next_id(),
    })
}

/// Per-cut bookkeeping from one [`compress_with_report`] sweep.
#[derive(Clone, Debug, Default)]
pub struct CompressionReport {
    /// Sum of discarded singular values at each cut (cut `i` sits between
    /// sites `i` and `i + 1`).
    pub discarded: Vec<f64>,
}

impl CompressionReport {
    pub fn total_discarded(&self) -> f64 {
        self.discarded.iter().sum()
    }
}

pub fn compress(state: &Mps, policy: &TruncationPolicy) -> Result<Mps> {
    compress_with_report(state, policy).map(|(s, _)| s)
}

/// Canonicalizes and truncates `state`; the result has its center on site 0.
fn at_cut<T>(r: Result<T>, cut: usize) -> Result<T> {
    r.map_err(|e| match e {
        Error::Numerical { reason, .. } => Error::Numerical { cut, reason },
        other => other,
    })
}

pub fn compress_with_report(state: &Mps, policy: &TruncationPolicy) -> Result<(Mps, CompressionReport)> {
    let mut sites = state.sites.clone();
    let len = sites.len();
    let mut report = CompressionReport {
        discarded: vec![0.0; len.saturating_sub(1)],
    };

    // Left-to-right QR: sites 0..len-1 become left isometries.
    for i in 0..len.saturating_sub(1) {
        let [a0, a1] = &sites[i];
        let (l, r) = a0.shape();
        let mut stacked = DMatrix::zeros(2 * l, r);
        stacked.rows_mut(0, l).copy_from(a0);
        stacked.rows_mut(l, l).copy_from(a1);
        let (q, rmat) = at_cut(thin_qr(&stacked), i)?;
        sites[i] = [q.rows(0, l).into_owned(), q.rows(l, l).into_owned()];
        let [b0, b1] = &sites[i + 1];
        sites[i + 1] = [&rmat * b0, &rmat * b1];
    }

    // Right-to-left SVD with truncation: sites 1..len become right isometries.
    for i in (1..len).rev() {
        let [a0, a1] = &sites[i];
        let (l, r) = a0.shape();
        let mut wide = DMatrix::zeros(l, 2 * r);
        wide.columns_mut(0, r).copy_from(a0);
        wide.columns_mut(r, r).copy_from(a1);

        if wide.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical {
                cut: i - 1,
                reason: "non-finite tensor entry".into(),
            });
        }
        let (u, values, vt) = at_cut(thin_svd(&wide), i - 1)?;
        let tol = values.first().copied().unwrap_or(0.0) * f64::EPSILON * l.max(2 * r) as f64;
        let keep = policy.retained(&values, tol);
        report.discarded[i - 1] = values[keep..].iter().sum();

        let vt_kept = vt.rows(0, keep).into_owned();
        let us_kept = u.columns(0, keep) * DMatrix::from_diagonal(&DVector::from_row_slice(&values[..keep]));
        sites[i] = [vt_kept.columns(0, r).into_owned(), vt_kept.columns(r, r).into_owned()];
        let [b0, b1] = &sites[i - 1];
        sites[i - 1] = [b0 * &us_kept, b1 * &us_kept];
    }

    Ok((
        Mps {
            sites,
            center: Some(0),
            id: next_id(),
        },
        report,
    ))
}

/// Cached per-block matrix products for repeated amplitude queries on one
/// state.
///
/// The chain is split into four blocks of `⌈L/4⌉` sites (the last block takes
/// the remainder). A cache is bound to the first state it is used with and
/// is cleared if handed a different one.
#[derive(Debug, Default)]
pub struct BlockCache {
    state_id: Option<u64>,
    blocks: HashMap<(usize, Vec<bool>), DMatrix<f64>>,
    hits: u64,
    misses: u64,
}

impl BlockCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    fn bind(&mut self, state: &Mps) {
        if self.state_id != Some(state.id) {
            self.blocks.clear();
            self.hits = 0;
            self.misses = 0;
            self.state_id = Some(state.id);
        }
    }
}

/// Site ranges of the four cache blocks for a chain of `len` sites.
pub fn block_ranges(len: usize) -> Vec<std::ops::Range<usize>> {
    let size = len.div_ceil(4).max(1);
    (0..4)
        .map(|b| {
            let start = (b * size).min(len);
            let end = if b == 3 { len } else { ((b + 1) * size).min(len) };
            start..end
        })
        .collect()
}

/// Amplitudes of `state` at every string in `xs`, reusing block products.
pub fn amplitude_batch(state: &Mps, xs: &[OccupationString], cache: &mut BlockCache) -> Vec<f64> {
    cache.bind(state);
    let ranges = block_ranges(state.len());
    xs.iter()
        .map(|x| {
            assert_eq!(x.len(), state.len(), "occupation string and MPS differ in site count");
            let mut row = DMatrix::from_element(1, 1, 1.0);
            for (b, range) in ranges.iter().enumerate() {
                if range.is_empty() {
                    continue;
                }
                let key = (b, x.bits()[range.clone()].to_vec());
                if let Some(m) = cache.blocks.get(&key) {
                    cache.hits += 1;
                    row = &row * m;
                } else {
                    cache.misses += 1;
                    let first = &state.sites[range.start][x.get(range.start) as usize];
                    let m = range
                        .clone()
                        .skip(1)
                        .fold(first.clone(), |acc, s| acc * &state.sites[s][x.get(s) as usize]);
                    row = &row * &m;
                    cache.blocks.insert(key, m);
                }
            }
            row[(0, 0)]
        })
        .collect()
}
