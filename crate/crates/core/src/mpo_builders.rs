//! MPOs for the current operator `J_ℓ` and the non-commutative complete
//! homogeneous polynomial `ĥ_k`.
//!
//! Both are written as finite-state automata over the virtual bond. Local
//! matrices use the convention `|1⟩ = occupied` and are indexed `[out][in]`.
//!
//! `J_ℓ = Σ_j σ⁻_j Z_{j+1} ⋯ Z_{j+ℓ−1} σ⁺_{j+ℓ}` (ℓ + 2 states):
//!
//! ```text
//!   0 --I--> 0 --σ⁻--> 1 --Z--> 2 --Z--> ... --Z--> ℓ --σ⁺--> ℓ+1 --I--> ℓ+1
//! ```
//!
//! `ĥ_k = Σ_{i_1 > ⋯ > i_k} x̂_{i_1} ⋯ x̂_{i_k}` with `x̂_i = a†_{i+1} a_i`
//! (2k + 1 states): `(m, closed)` counts completed hops, `(m, open)` has a
//! hop whose particle left the previous site. Two hops sharing a site act
//! there as the empty projector `|0⟩⟨0|`.

use crate::error::{invalid, Result};
use crate::tensor::{Mpo, MpoSite};

type Local = [[f64; 2]; 2];

const IDENTITY: Local = [[1.0, 0.0], [0.0, 1.0]];
/// Removes the particle: `|1⟩ → |0⟩`.
const ANNIHILATE: Local = [[0.0, 1.0], [0.0, 0.0]];
/// Places a particle: `|0⟩ → |1⟩`.
const CREATE: Local = [[0.0, 0.0], [1.0, 0.0]];
const PARITY: Local = [[1.0, 0.0], [0.0, -1.0]];
const EMPTY_PROJECTOR: Local = [[1.0, 0.0], [0.0, 0.0]];

struct Transition {
    from: usize,
    to: usize,
    local: Local,
}

fn automaton_mpo(sites: usize, states: usize, transitions: &[Transition], start: usize, end: usize) -> Result<Mpo> {
    let tensors = (0..sites)
        .map(|s| {
            let first = s == 0;
            let last = s + 1 == sites;
            let mut site = MpoSite::zeros(if first { 1 } else { states }, if last { 1 } else { states });
            for t in transitions {
                if (first && t.from != start) || (last && t.to != end) {
                    continue;
                }
                let l = if first { 0 } else { t.from };
                let r = if last { 0 } else { t.to };
                site.add(l, r, t.local);
            }
            site
        })
        .collect();
    Mpo::from_sites(tensors)
}

/// `J_ℓ` on a chain of `sites` sites; every internal bond has dimension `ℓ + 2`.
pub fn current_mpo(ell: usize, sites: usize) -> Result<Mpo> {
    if ell == 0 || ell >= sites {
        return Err(invalid(format!("hop length {ell} must lie in 1..{sites}")));
    }
    let mut ts = vec![
        Transition {
            from: 0,
            to: 0,
            local: IDENTITY,
        },
        Transition {
            from: 0,
            to: 1,
            local: ANNIHILATE,
        },
        Transition {
            from: ell,
            to: ell + 1,
            local: CREATE,
        },
        Transition {
            from: ell + 1,
            to: ell + 1,
            local: IDENTITY,
        },
    ];
    ts.extend((1..ell).map(|k| Transition {
        from: k,
        to: k + 1,
        local: PARITY,
    }));
    automaton_mpo(sites, ell + 2, &ts, 0, ell + 1)
}

/// `ĥ_k` on a chain of `sites` sites; every internal bond has dimension `2k + 1`.
pub fn complete_homogeneous_mpo(k: usize, sites: usize) -> Result<Mpo> {
    if k == 0 || k >= sites {
        return Err(invalid(format!("polynomial degree {k} must lie in 1..{sites}")));
    }
    let closed = |m: usize| m;
    let open = |m: usize| k + 1 + m;
    let mut ts = Vec::new();
    for m in 0..=k {
        ts.push(Transition {
            from: closed(m),
            to: closed(m),
            local: IDENTITY,
        });
    }
    for m in 0..k {
        ts.push(Transition {
            from: closed(m),
            to: open(m),
            local: ANNIHILATE,
        });
        ts.push(Transition {
            from: open(m),
            to: closed(m + 1),
            local: CREATE,
        });
        if m + 1 < k {
            ts.push(Transition {
                from: open(m),
                to: open(m + 1),
                local: EMPTY_PROJECTOR,
            });
        }
    }
    automaton_mpo(sites, 2 * k + 1, &ts, closed(0), closed(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::OccupationString;
    use crate::tensor::dense_materialize;
    use nalgebra::DMatrix;

    fn local(m: Local) -> DMatrix<f64> {
        DMatrix::from_fn(2, 2, |r, c| m[r][c])
    }

    /// `ops` placed on their sites, identity elsewhere; site 0 is the most
    /// significant tensor factor.
    fn kron_string(sites: usize, ops: &[(usize, Local)]) -> DMatrix<f64> {
        (0..sites).fold(DMatrix::from_element(1, 1, 1.0), |acc, s| {
            let m = ops
                .iter()
                .filter(|(i, _)| *i == s)
                .fold(local(IDENTITY), |m, (_, o)| m * local(*o));
            acc.kronecker(&m)
        })
    }

    /// Jordan–Wigner annihilator `a_k = σ⁻_k Π_{j<k} Z_j`.
    fn jw_annihilator(k: usize, sites: usize) -> DMatrix<f64> {
        let mut ops: Vec<(usize, Local)> = (0..k).map(|j| (j, PARITY)).collect();
        ops.push((k, ANNIHILATE));
        kron_string(sites, &ops)
    }

    fn dense_current(ell: usize, sites: usize) -> DMatrix<f64> {
        (0..sites - ell).fold(DMatrix::zeros(1 << sites, 1 << sites), |acc, k| {
            acc + jw_annihilator(k + ell, sites).transpose() * jw_annihilator(k, sites)
        })
    }

    fn hop(i: usize, sites: usize) -> DMatrix<f64> {
        jw_annihilator(i + 1, sites).transpose() * jw_annihilator(i, sites)
    }

    /// Sparse columns of an MPO, for composing operators on larger chains.
    fn columns(op: &Mpo) -> Vec<Vec<(usize, f64)>> {
        let sites = op.len();
        (0..1usize << sites)
            .map(|c| op.column(&OccupationString::from_index(c, sites)))
            .collect()
    }

    fn compose(a: &[Vec<(usize, f64)>], b: &[Vec<(usize, f64)>]) -> Vec<Vec<(usize, f64)>> {
        b.iter()
            .map(|col| {
                let mut acc = std::collections::BTreeMap::<usize, f64>::new();
                for &(mid, v) in col {
                    for &(row, w) in &a[mid] {
                        *acc.entry(row).or_default() += v * w;
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0.0).collect()
            })
            .collect()
    }

    #[test]
    fn current_matches_jordan_wigner() {
        for sites in 2..=6 {
            for ell in 1..sites {
                let mpo = current_mpo(ell, sites).unwrap();
                assert_eq!(
                    dense_materialize(&mpo).unwrap(),
                    dense_current(ell, sites),
                    "l={ell} s={sites}"
                );
                assert!(mpo.bond_dims().iter().all(|&d| d == ell + 2));
            }
        }
    }

    #[test]
    fn nearest_neighbour_current_has_no_string() {
        let direct = (0..3).fold(DMatrix::zeros(16, 16), |acc, j| {
            acc + kron_string(4, &[(j, ANNIHILATE), (j + 1, CREATE)])
        });
        assert_eq!(dense_materialize(&current_mpo(1, 4).unwrap()).unwrap(), direct);
        let triples = (0..2).fold(DMatrix::zeros(16, 16), |acc, j| {
            acc + kron_string(4, &[(j, ANNIHILATE), (j + 1, PARITY), (j + 2, CREATE)])
        });
        assert_eq!(dense_materialize(&current_mpo(2, 4).unwrap()).unwrap(), triples);
    }

    #[test]
    fn homogeneous_matches_hop_products() {
        let h1 = dense_materialize(&complete_homogeneous_mpo(1, 4).unwrap()).unwrap();
        assert_eq!(h1, dense_materialize(&current_mpo(1, 4).unwrap()).unwrap());

        let want = hop(1, 4) * hop(0, 4) + hop(2, 4) * hop(0, 4) + hop(2, 4) * hop(1, 4);
        let h2 = dense_materialize(&complete_homogeneous_mpo(2, 4).unwrap()).unwrap();
        assert_eq!(h2, want);

        for k in 1..5 {
            let mpo = complete_homogeneous_mpo(k, 7).unwrap();
            assert!(mpo.bond_dims().iter().all(|&d| d == 2 * k + 1));
        }
    }

    #[test]
    fn out_of_range_arguments() {
        assert!(current_mpo(0, 4).is_err());
        assert!(current_mpo(4, 4).is_err());
        assert!(complete_homogeneous_mpo(0, 4).is_err());
        assert!(complete_homogeneous_mpo(4, 4).is_err());
    }

    #[test]
    fn operators_commute_and_conserve_particles() {
        for sites in [6, 10] {
            let currents: Vec<_> = (1..sites).map(|l| columns(&current_mpo(l, sites).unwrap())).collect();
            let homs: Vec<_> = (1..sites.min(5))
                .map(|k| columns(&complete_homogeneous_mpo(k, sites).unwrap()))
                .collect();
            for family in [&currents, &homs] {
                for a in family.iter() {
                    for b in family.iter() {
                        assert_eq!(compose(a, b), compose(b, a));
                    }
                    for (col, entries) in a.iter().enumerate() {
                        for &(row, _) in entries {
                            assert_eq!(row.count_ones(), col.count_ones());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn current_moves_one_particle_by_ell() {
        let sites = 8;
        for ell in 1..sites {
            let cols = columns(&current_mpo(ell, sites).unwrap());
            for (c, entries) in cols.iter().enumerate() {
                let x = OccupationString::from_index(c, sites);
                for &(r, v) in entries {
                    let y = OccupationString::from_index(r, sites);
                    let moved: Vec<usize> = (0..sites).filter(|&s| x.get(s) != y.get(s)).collect();
                    assert_eq!(moved.len(), 2);
                    assert!(x.get(moved[0]) && y.get(moved[1]));
                    assert_eq!(moved[1] - moved[0], ell);
                    assert!(v == 1.0 || v == -1.0);
                }
            }
        }
    }

    #[test]
    fn common_prefix_can_be_cleared() {
        let sites = 8;
        let product = compose(
            &columns(&current_mpo(2, sites).unwrap()),
            &compose(
                &columns(&current_mpo(1, sites).unwrap()),
                &columns(&current_mpo(3, sites).unwrap()),
            ),
        );
        let element =
            |row: usize, col: usize| -> f64 { product[col].iter().find(|&&(r, _)| r == row).map_or(0.0, |&(_, v)| v) };
        for prefix in 1..4 {
            let high_mask = ((1usize << prefix) - 1) << (sites - prefix);
            for col in 0..1usize << sites {
                for &(row, v) in &product[col] {
                    if row & high_mask != col & high_mask {
                        continue;
                    }
                    assert_eq!(element(row & !high_mask, col & !high_mask), v);
                }
            }
        }
    }
}
