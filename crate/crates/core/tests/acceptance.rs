//! End-to-end acceptance checks. Every test prints a single
//! `criterion N: PASS|FAIL — detail` line and then asserts the outcome.
//!
//! Run with `cargo test -p snchar-core --test acceptance -- --nocapture` to
//! see the report lines.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use snchar::bench;
use snchar::character_engine::{bond_bound, build_psi, character_row, CharacterRow, EngineConfig};
use snchar::combinatorics::{
    centralizer_size, enumerate_partitions, hook_length_dimension, partition_count, partitions_with_at_most,
    OccupationString, Partition,
};
use snchar::kostka_engine::{self, kostka_row};
use snchar::mpo_builders::{complete_homogeneous_mpo, current_mpo};
use snchar::oracle::{dense_psi, hop_product_sum, jw_current, ssyt_count, MnOracle, SparseOp};
use snchar::sampling::{
    certify_row_granularity, column_distribution, column_granularity, column_integrality_violation,
    cycle_count_threshold, granularity, row_distribution, sample, threshold_constant, threshold_counterexamples,
    total_variation, CharacterSource,
};
use snchar::tensor::{compress, dense_materialize, mpo_apply, Mps, TruncationPolicy};

fn report(criterion: u32, passed: bool, detail: impl AsRef<str>) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {verdict} — {}", detail.as_ref());
    assert!(passed, "criterion {criterion} failed: {}", detail.as_ref());
}

fn lossless() -> EngineConfig {
    EngineConfig::new(TruncationPolicy::lossless())
}

/// Character rows for every class of `S_n`, `n ≤ 10`, at the default epsilon.
fn small_rows() -> &'static Vec<CharacterRow> {
    static ROWS: OnceLock<Vec<CharacterRow>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let config = EngineConfig::default();
        (1..=10)
            .flat_map(|n| enumerate_partitions(n).unwrap().into_iter().map(move |nu| (n, nu)))
            .map(|(n, nu)| character_row(&nu, n, &config).unwrap())
            .collect()
    })
}

#[test]
fn criterion_01_characters_match_murnaghan_nakayama() {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut mismatches = Vec::new();
    let mut oracle = MnOracle::new();
    for row in small_rows() {
        for (lambda, r) in &row.entries {
            let want = oracle.character(lambda, &row.nu).unwrap();
            checked += 1;
            if r.value != want {
                mismatches.push(format!("chi_{lambda}({}) = {} vs {want}", row.nu, r.value));
            }
        }
    }
    report(
        1,
        mismatches.is_empty(),
        format!(
            "{checked} characters for n <= 10, {} mismatches {:?}, {:.1}s",
            mismatches.len(),
            mismatches.iter().take(3).collect::<Vec<_>>(),
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_02_rounding_residual() {
    let rows = small_rows();
    let worst = rows.iter().map(CharacterRow::max_residual).fold(0.0, f64::max);
    let flagged = rows
        .iter()
        .flat_map(|r| &r.entries)
        .filter(|(_, r)| r.precision_flag)
        .count();
    report(
        2,
        worst <= 1e-4 && flagged == 0,
        format!("max |amplitude - integer| = {worst:.3e} (bound 1e-4), {flagged} entries flagged"),
    );
}

#[test]
fn criterion_03_norm_identity() {
    let config = EngineConfig::default();
    let mut worst: (f64, String) = (0.0, String::new());
    let mut classes = 0;
    for n in 1..=12 {
        for nu in enumerate_partitions(n).unwrap() {
            let row = character_row(&nu, n, &config).unwrap();
            classes += 1;
            if worst.1.is_empty() || row.norm_residual > worst.0 {
                worst = (row.norm_residual, format!("{nu}"));
            }
        }
    }
    report(
        3,
        worst.0 <= 1e-6,
        format!(
            "{classes} classes for n <= 12, worst relative residual {:.3e} at ({})",
            worst.0, worst.1
        ),
    );
}

#[test]
fn criterion_04_lossless_bond_bounds() {
    let config = lossless();
    let mut violations = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    let mut single_violations = Vec::new();
    for n in 1..=9 {
        for nu in enumerate_partitions(n).unwrap() {
            let build = build_psi(&nu, n, &config).unwrap();
            let bound = bond_bound(&nu);
            for step in &build.steps {
                if BigUint::from(step.bond) > bound {
                    violations.push(format!("{nu}: bond {} > {bound}", step.bond));
                }
            }
            worst_ratio = worst_ratio.max(build.max_bond() as f64 / bound.to_f64().unwrap());

            let first = nu.part(0);
            let raw = mpo_apply(
                &current_mpo(first, 2 * n).unwrap(),
                &Mps::product_state(&OccupationString::filled(n)),
            )
            .unwrap();
            let bond = compress(&raw, &TruncationPolicy::lossless()).unwrap().max_bond();
            if bond > first {
                single_violations.push(format!("J_{first} at n={n}: bond {bond}"));
            }
        }
    }
    report(
        4,
        violations.is_empty() && single_violations.is_empty(),
        format!(
            "n <= 9: {} product-bound violations {:?}, largest bond/bound {worst_ratio:.3}; {} single-current violations {:?}",
            violations.len(),
            violations.iter().take(3).collect::<Vec<_>>(),
            single_violations.len(),
            single_violations.iter().take(3).collect::<Vec<_>>()
        ),
    );
}

fn max_abs_difference(dense: &nalgebra::DMatrix<f64>, op: &SparseOp) -> f64 {
    let mut worst: f64 = 0.0;
    for col in 0..op.dim() {
        for row in 0..op.dim() {
            worst = worst.max((dense[(row, col)] - op.entry(row, col) as f64).abs());
        }
    }
    worst
}

#[test]
fn criterion_05_mpo_matches_jordan_wigner() {
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for s in 2..=12 {
        for ell in 1..s {
            let dense = dense_materialize(&current_mpo(ell, s).unwrap()).unwrap();
            worst = worst.max(max_abs_difference(&dense, &jw_current(ell, s)));
            pairs += 1;
        }
    }
    let mut h_worst: f64 = 0.0;
    let mut h_pairs = 0;
    for s in 2..=12 {
        for k in 1..=4.min(s - 1) {
            let dense = dense_materialize(&complete_homogeneous_mpo(k, s).unwrap()).unwrap();
            h_worst = h_worst.max(max_abs_difference(&dense, &hop_product_sum(k, s)));
            h_pairs += 1;
        }
    }
    report(
        5,
        worst == 0.0 && h_worst == 0.0,
        format!(
            "J_l: {pairs} (l, s) pairs, max difference {worst}; h_k: {h_pairs} (k, s) pairs, max difference {h_worst}"
        ),
    );
}

#[test]
fn criterion_06_kostka_numbers() {
    let config = kostka_engine::default_config();
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for n in 1..=9 {
        for mu in enumerate_partitions(n).unwrap() {
            let row = kostka_row(&mu, n, &config).unwrap();
            for (lambda, r) in &row.entries {
                let want = ssyt_count(lambda, &mu).unwrap();
                checked += 1;
                if r.value < 0 || r.value as u64 != want {
                    mismatches.push(format!("K({lambda}; {mu}) = {} vs {want}", r.value));
                }
            }
        }
    }
    let mut dims = Vec::new();
    for n in 1..=12 {
        let row = kostka_row(&Partition::column(n), n, &config).unwrap();
        for (lambda, r) in &row.entries {
            if BigUint::from(r.value.max(0) as u64) != hook_length_dimension(lambda) || r.value < 0 {
                dims.push(format!("K({lambda}; 1^{n}) = {}", r.value));
            }
        }
    }
    report(
        6,
        mismatches.is_empty() && dims.is_empty(),
        format!(
            "{checked} Kostka numbers for n <= 9, {} mismatches {:?}; {} standard-tableau mismatches for n <= 12 {:?}",
            mismatches.len(),
            mismatches.iter().take(3).collect::<Vec<_>>(),
            dims.len(),
            dims.iter().take(3).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_07_dense_state_equivalence() {
    let config = lossless();
    let mut states = 0;
    let mut mismatches = Vec::new();
    for n in 1..=7 {
        for nu in enumerate_partitions(n).unwrap() {
            let dense = build_psi(&nu, n, &config).unwrap().state.to_dense().unwrap();
            let want: BTreeMap<usize, BigInt> = dense_psi(&nu, n)
                .unwrap()
                .into_iter()
                .map(|(x, v)| (x.index(), v))
                .collect();
            states += 1;
            let bad = dense.iter().enumerate().find(|&(i, &a)| {
                let expected = want.get(&i).cloned().unwrap_or_default();
                BigInt::from(a.round() as i64) != expected
            });
            if let Some((i, a)) = bad {
                mismatches.push(format!("{nu} at {}: {a}", OccupationString::from_index(i, 2 * n)));
            }
        }
    }
    report(
        7,
        mismatches.is_empty(),
        format!(
            "{states} states for n <= 7, {} mismatches {:?}",
            mismatches.len(),
            mismatches.iter().take(3).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_08_sampling_fidelity() {
    const SEED: u64 = 20_240_601;
    const SHOTS: usize = 100_000;
    let nu: Partition = "2,2,1,1".parse().unwrap();
    let dist = row_distribution(&nu, 6, &CharacterSource::Mps(EngineConfig::default())).unwrap();
    let draws = sample(&dist, SHOTS, SEED);
    let tv = total_variation(&dist, &draws);
    let identical = sample(&dist, SHOTS, SEED) == draws;
    report(
        8,
        tv <= 0.02 && identical,
        format!("TV distance {tv:.4} over {SHOTS} shots (bound 0.02), resample identical: {identical}"),
    );
}

#[test]
fn criterion_09_granularity_certificates() {
    let a = threshold_constant();

    // Exact gamma: gamma · |E_ν| = p(n) for every class below the threshold.
    let mut exact_classes = 0usize;
    let mut exact_ok = true;
    for n in 2..=100 {
        let p = BigRational::from_integer(BigInt::from(partition_count(n)));
        let limit = cycle_count_threshold(n, a).unwrap();
        let mut classes = partitions_with_at_most(n, limit);
        classes.push(Partition::column(n));
        for nu in classes {
            let g = granularity(&nu, n).unwrap();
            exact_ok &= &g.gamma * BigRational::from_integer(BigInt::from(centralizer_size(&nu))) == p;
            exact_classes += 1;
        }
    }
    // Integrality of the actual row weights against the unit gamma/p(n).
    for n in 1..=10 {
        for nu in enumerate_partitions(n).unwrap() {
            let dist = row_distribution(&nu, n, &CharacterSource::Oracle).unwrap();
            exact_ok &= certify_row_granularity(&nu, n, &dist).unwrap().witness.is_none();
        }
    }

    // Column sampling: gamma = 1 and every class weight is |C_ν| χ² / n!.
    let column_ok = column_granularity().gamma == BigRational::one()
        && (1..=8).all(|n| {
            enumerate_partitions(n).unwrap().iter().all(|lambda| {
                let dist = column_distribution(lambda, n, &CharacterSource::Oracle).unwrap();
                column_integrality_violation(&dist, n).is_none()
            })
        });

    // Threshold clause: every class with few enough cycles is granular.
    let mut failing_n = Vec::new();
    let mut first = None;
    for n in 2..=100 {
        let bad = threshold_counterexamples(n, a).unwrap();
        if let Some((nu, gamma)) = bad.first() {
            failing_n.push(n);
            first.get_or_insert_with(|| format!("n={n} nu=({nu}) gamma={gamma}"));
        }
    }

    report(
        9,
        exact_ok && column_ok && failing_n.is_empty(),
        format!(
            "exact gamma on {exact_classes} classes: {exact_ok}; column gamma = 1: {column_ok}; \
             threshold clause fails at {} values of n {:?}, first {}",
            failing_n.len(),
            failing_n,
            first.unwrap_or_else(|| "none".into())
        ),
    );
}

#[test]
fn criterion_10_runtime_and_bond_gap() {
    let config = EngineConfig::default();
    let rec = bench::bench_point(20, &config).unwrap();
    let bound = rec.bound.to_f64().unwrap();
    let gap = (bound / rec.max_bond as f64).log10();
    let in_time = Duration::from_secs_f64(rec.wall_seconds) < Duration::from_secs(300);
    let below = BigUint::from(rec.max_bond) < rec.bound;
    report(
        10,
        in_time && below && rec.norm_residual <= 1e-6,
        format!(
            "n=20 nu=({}): {:.2}s, max bond {} vs bound {} ({gap:.1} orders of magnitude), norm residual {:.1e}",
            rec.nu, rec.wall_seconds, rec.max_bond, rec.bound, rec.norm_residual
        ),
    );
}
