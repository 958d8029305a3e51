//! Integer partitions, cycle types and the occupation-string encoding.
//!
//! Partitions label both irreducible representations and conjugacy classes of
//! `S_n`. The encoding into length-`2n` bit strings places a particle at site
//! `λ_j + n − j` for every (zero-padded) part `j = 1..n`; site 0 is the
//! leftmost character of the textual form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};

/// Largest `n` accepted by [`enumerate_partitions`]. `p(60) = 966467`.
pub const MAX_ENUMERATION_N: usize = 60;

/// A non-increasing sequence of positive integers.
///
/// The empty partition (n = 0) exists only as the decoding of the all-padding
/// occupation string `1^n 0^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Validating constructor; parts must already be non-increasing and positive.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(invalid("partition parts must be positive"));
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(invalid("partition parts must be non-increasing"));
        }
        Ok(Partition { parts })
    }

    /// Sorts the parts into canonical (non-increasing) order.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The single-row partition `(n)`.
    pub fn row(n: usize) -> Self {
        Partition { parts: vec![n] }
    }

    /// The single-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (0-indexed), or 0 past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// The transposed (conjugate) partition.
    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        let parts = (1..=first)
            .map(|k| self.parts.iter().filter(|&&p| p >= k).count())
            .collect();
        Partition { parts }
    }

    /// `true` if `self` dominates `other` (equal sizes assumed).
    pub fn dominates(&self, other: &Partition) -> bool {
        let len = self.len().max(other.len());
        let mut a = 0;
        let mut b = 0;
        for i in 0..len {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return false;
            }
        }
        true
    }

    pub(crate) fn expect_size(&self, n: usize, what: &str) -> Result<()> {
        if self.size() != n {
            return Err(invalid(format!(
                "{what} {self} is a partition of {}, expected {n}",
                self.size()
            )));
        }
        if n == 0 {
            return Err(invalid(format!("{what} must partition a positive integer")));
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `part ("," part)*`, ignoring whitespace, and sorts the parts.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(invalid("empty partition string"));
        }
        let parts = cleaned
            .split(',')
            .map(|tok| {
                tok.parse::<usize>()
                    .ok()
                    .filter(|&p| p > 0)
                    .ok_or_else(|| invalid(format!("bad partition part {tok:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::from_unsorted(parts)
    }
}

/// Counts `a_ℓ` of cycles of each length `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleMultiplicities {
    counts: BTreeMap<usize, usize>,
}

impl CycleMultiplicities {
    pub fn get(&self, len: usize) -> usize {
        self.counts.get(&len).copied().unwrap_or(0)
    }

    /// `(ℓ, a_ℓ)` pairs with `a_ℓ > 0`, increasing in `ℓ`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|(&l, &a)| (l, a))
    }

    /// `Σ ℓ·a_ℓ`.
    pub fn total(&self) -> usize {
        self.iter().map(|(l, a)| l * a).sum()
    }
}

pub fn cycle_multiplicities(nu: &Partition) -> CycleMultiplicities {
    let mut counts = BTreeMap::new();
    for &p in nu.parts() {
        *counts.entry(p).or_insert(0) += 1;
    }
    CycleMultiplicities { counts }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Size of the centralizer of a permutation of cycle type `ν`:
/// `Π_ℓ a_ℓ! · ℓ^{a_ℓ}`.
pub fn centralizer_size(nu: &Partition) -> BigUint {
    cycle_multiplicities(nu).iter().fold(BigUint::one(), |acc, (l, a)| {
        acc * factorial(a) * BigUint::from(l).pow(a as u32)
    })
}

/// Number of permutations of cycle type `ν`: `n! / |E_ν|`.
pub fn class_size(nu: &Partition) -> BigUint {
    factorial(nu.size()) / centralizer_size(nu)
}

/// Dimension of the irrep `λ` by the hook length formula.
pub fn hook_length_dimension(lambda: &Partition) -> BigUint {
    let conj = lambda.conjugate();
    let mut hooks = BigUint::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = conj.part(j) - i - 1;
            hooks *= BigUint::from(arm + leg + 1);
        }
    }
    factorial(lambda.size()) / hooks
}

/// Sign of any permutation of cycle type `ν`: `(−1)^{n−c}`.
pub fn permutation_sign(nu: &Partition) -> i32 {
    if (nu.size() - nu.len()).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All partitions of `n` in lexicographically decreasing order.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(invalid("cannot enumerate partitions of 0"));
    }
    if n > MAX_ENUMERATION_N {
        return Err(Error::ResourceLimit(format!(
            "partition enumeration limited to n <= {MAX_ENUMERATION_N}, got {n}"
        )));
    }
    Ok(partitions_with_at_most(n, n))
}

/// Partitions of `n` with at most `max_parts` parts, lexicographically
/// decreasing. No size cap; the caller bounds the output.
pub fn partitions_with_at_most(n: usize, max_parts: usize) -> Vec<Partition> {
    fn rec(rest: usize, max_part: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        // the remaining slots must be able to absorb `rest`
        if slots == 0 || slots * max_part < rest {
            return;
        }
        for p in (1..=max_part.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, n, max_parts, &mut Vec::new(), &mut out);
    out
}

/// `p(n)` via Euler's pentagonal-number recurrence.
pub fn partition_count(n: usize) -> BigUint {
    let mut p: Vec<num_bigint::BigInt> = vec![num_bigint::BigInt::one()];
    for m in 1..=n {
        let mut acc = num_bigint::BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign_pos = k % 2 == 1;
            let mut term = p[m - g1].clone();
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                term += &p[m - g2];
            }
            if sign_pos {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    p[n].to_biguint().expect("partition counts are positive")
}

/// A `2n`-site occupation bit string; site 0 is written first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationString {
    bits: Vec<bool>,
}

impl OccupationString {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        OccupationString { bits }
    }

    /// The reference state `1^n 0^n`.
    pub fn filled(n: usize) -> Self {
        let mut bits = vec![true; n];
        bits.resize(2 * n, false);
        OccupationString { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn get(&self, site: usize) -> bool {
        self.bits[site]
    }

    /// Sites holding a particle, increasing.
    pub fn occupied(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    /// Row-major basis index with site 0 as the most significant bit.
    pub fn index(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn from_index(index: usize, sites: usize) -> Self {
        let bits = (0..sites).map(|s| (index >> (sites - 1 - s)) & 1 == 1).collect();
        OccupationString { bits }
    }
}

impl fmt::Display for OccupationString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for OccupationString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(invalid(format!("bad occupation character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OccupationString { bits })
    }
}

/// Encodes `λ` (padded with zeros to `n` parts) as the weight-`n` string with
/// support `{λ_j + n − j : j = 1..n}` on `2n` sites.
///
/// Any partition with at most `n` parts and first part at most `n` fits; the
/// empty partition maps to `1^n 0^n`.
pub fn encode_occupation(lambda: &Partition, n: usize) -> Result<OccupationString> {
    if lambda.len() > n || lambda.part(0) > n {
        return Err(invalid(format!(
            "partition {lambda} does not fit the {n}x{n} box of a {}-site chain",
            2 * n
        )));
    }
    let mut bits = vec![false; 2 * n];
    for j in 1..=n {
        let site = lambda.part(j - 1) + n - j;
        if bits[site] {
            return Err(Error::Internal(format!(
                "support collision at site {site} encoding {lambda}"
            )));
        }
        bits[site] = true;
    }
    Ok(OccupationString { bits })
}

/// Inverse of [`encode_occupation`]; trailing zero parts are dropped.
pub fn decode_occupation(x: &OccupationString) -> Result<Partition> {
    if !x.len().is_multiple_of(2) {
        return Err(invalid(format!("occupation string of odd length {}", x.len())));
    }
    let n = x.len() / 2;
    if x.weight() != n {
        return Err(invalid(format!(
            "occupation string {x} has weight {}, expected {n}",
            x.weight()
        )));
    }
    let parts = x
        .occupied()
        .rev()
        .enumerate()
        .map(|(j, site)| site + j + 1 - n)
        .filter(|&p| p > 0)
        .collect();
    Ok(Partition { parts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    /// Independent count: number of partitions of n with parts at most k.
    fn count_dp(n: usize) -> u64 {
        let mut ways = vec![0u64; n + 1];
        ways[0] = 1;
        for part in 1..=n {
            for total in part..=n {
                ways[total] += ways[total - part];
            }
        }
        ways[n]
    }

    #[test]
    fn enumerate_small() {
        assert_eq!(enumerate_partitions(1).unwrap(), vec![p("1")]);
        let four: Vec<String> = enumerate_partitions(4)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(four, ["4", "3,1", "2,2", "2,1,1", "1,1,1,1"]);
        assert_eq!(enumerate_partitions(10).unwrap().len(), 42);
    }

    #[test]
    fn enumerate_rejects_out_of_range() {
        assert!(matches!(enumerate_partitions(0), Err(Error::InvalidArgument(_))));
        assert!(enumerate_partitions(MAX_ENUMERATION_N + 1).is_err());
    }

    #[test]
    fn enumeration_counts_match_dp_and_pentagonal() {
        for n in 1..=30 {
            let parts = enumerate_partitions(n).unwrap();
            assert_eq!(parts.len() as u64, count_dp(n), "n = {n}");
            assert_eq!(partition_count(n), BigUint::from(count_dp(n)));
            assert!(parts.windows(2).all(|w| w[0] > w[1]), "strictly decreasing order");
        }
        assert_eq!(partition_count(100), BigUint::from(190_569_292u64));
    }

    #[test]
    fn bounded_part_count() {
        let got = partitions_with_at_most(6, 2);
        let want: Vec<Partition> = ["6", "5,1", "4,2", "3,3"].iter().map(|s| p(s)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn cycle_types() {
        let m = cycle_multiplicities(&p("2,2"));
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![(2, 2)]);
        let m = cycle_multiplicities(&p("3,1,1"));
        assert_eq!((m.get(3), m.get(1), m.get(2)), (1, 2, 0));
        assert_eq!(cycle_multiplicities(&p("5")).iter().collect::<Vec<_>>(), vec![(5, 1)]);
        for n in 1..=12 {
            for nu in enumerate_partitions(n).unwrap() {
                assert_eq!(cycle_multiplicities(&nu).total(), n);
            }
        }
    }

    #[test]
    fn centralizers() {
        assert_eq!(centralizer_size(&Partition::column(6)), factorial(6));
        assert_eq!(centralizer_size(&p("2,2")), BigUint::from(8u32));
        assert_eq!(centralizer_size(&p("9")), BigUint::from(9u32));
    }

    #[test]
    fn class_sizes_partition_the_group() {
        for n in 1..=20 {
            let total: BigUint = enumerate_partitions(n)
                .unwrap()
                .iter()
                .map(|nu| factorial(n) / centralizer_size(nu))
                .sum();
            assert_eq!(total, factorial(n), "n = {n}");
        }
    }

    #[test]
    fn hook_lengths() {
        assert_eq!(hook_length_dimension(&p("7")), BigUint::one());
        assert_eq!(hook_length_dimension(&p("2,1")), BigUint::from(2u32));
        assert_eq!(hook_length_dimension(&p("2,2")), BigUint::from(2u32));
        for n in 1..=20 {
            let total: BigUint = enumerate_partitions(n)
                .unwrap()
                .iter()
                .map(|l| hook_length_dimension(l).pow(2))
                .sum();
            assert_eq!(total, factorial(n), "Plancherel at n = {n}");
        }
    }

    #[test]
    fn encodings() {
        assert_eq!(encode_occupation(&Partition::empty(), 3).unwrap().to_string(), "111000");
        assert_eq!(encode_occupation(&p("2"), 2).unwrap().to_string(), "1001");
        assert_eq!(encode_occupation(&p("1,1"), 2).unwrap().to_string(), "0110");

        let dec = |s: &str| decode_occupation(&s.parse().unwrap()).unwrap();
        assert_eq!(dec("111000"), Partition::empty());
        assert_eq!(dec("1001"), p("2"));
        assert_eq!(dec("0110"), p("1,1"));
        assert!(matches!(
            decode_occupation(&"1101".parse().unwrap()),
            Err(Error::InvalidArgument(_))
        ));
        assert!(encode_occupation(&p("3"), 2).is_err());
    }

    #[test]
    fn encode_decode_round_trip() {
        for n in 1..=20 {
            for lambda in enumerate_partitions(n).unwrap() {
                let x = encode_occupation(&lambda, n).unwrap();
                assert_eq!(x.weight(), n);
                assert_eq!(decode_occupation(&x).unwrap(), lambda);
            }
        }
    }

    #[test]
    fn signs() {
        assert_eq!(permutation_sign(&p("1,1,1")), 1);
        assert_eq!(permutation_sign(&p("2,1")), -1);
        assert_eq!(permutation_sign(&p("3")), 1);
    }

    #[test]
    fn parse_partition_strings() {
        assert_eq!(p(" 1, 3 ,1").parts(), &[3, 1, 1]);
        assert_eq!(p("3,1,1").to_string(), "3,1,1");
        for bad in ["", "3,,1", "3,0", "a", "-1"] {
            assert!(bad.parse::<Partition>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn dominance_and_conjugate() {
        assert!(p("3,1").dominates(&p("2,2")));
        assert!(!p("2,2").dominates(&p("3,1")));
        assert_eq!(p("3,1").conjugate(), p("2,1,1"));
    }
}
