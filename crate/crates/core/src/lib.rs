//! Irreducible characters of the symmetric group and Kostka numbers computed
//! as amplitudes of matrix product states on a fermionic spin chain.
//!
//! A permutation with cycle type `ν ⊢ n` is mapped to the state
//! `Π_j J_{ν_j} |1^n 0^n⟩` on `2n` two-level sites, where `J_ℓ` is the
//! Jordan–Wigner current operator that hops one fermion `ℓ` sites to the
//! right. The character `χ_λ(ν)` is the amplitude of that state at the
//! occupation string encoding `λ`. Kostka numbers come out of the same
//! machinery with `J_ℓ` replaced by non-commutative complete homogeneous
//! polynomials in nearest-neighbour hops.
//!
//! Every floating-point pipeline in this crate has an exact integer
//! counterpart in [`oracle`] against which it is tested.
//!
//! ```
//! use snchar::{character_row, EngineConfig, Partition};
//!
//! let nu: Partition = "2,2".parse()?;
//! let row = character_row(&nu, 4, &EngineConfig::default())?;
//! row.certify()?;
//! assert_eq!(row.values(), vec![1, -1, 2, -1, 1]);
//! # Ok::<(), snchar::Error>(())
//! ```

pub mod bench;
pub mod character_engine;
pub mod combinatorics;
pub mod error;
pub mod kostka_engine;
mod linalg;
pub mod mpo_builders;
pub mod oracle;
pub mod sampling;
pub mod tensor;
pub mod verify;

pub use character_engine::{
    build_psi, character, character_checked, character_row, character_table, CharacterResult, CharacterRow,
    EngineConfig,
};
pub use combinatorics::{OccupationString, Partition};
pub use error::{Error, Result};
pub use kostka_engine::{build_psi_mu, kostka, kostka_row, KostkaRow};
pub use tensor::{Mpo, Mps, TruncationPolicy};
