//! Covariant convolution algebras of invariant characters.
//!
//! The crate builds finite groups from composition tables, semi-direct
//! products and their normal subgroups, enumerates the characters of abelian
//! normal subgroups that are invariant under conjugation, and implements the
//! covariant projection `T_ξ`, the covariant convolution `♮` and the
//! covariant involution on functions of the quotient. Identities between
//! these operations are checked numerically by [`covariant::run_verification`],
//! by closed forms for finite Weyl–Heisenberg groups in [`weyl_heisenberg`],
//! and by quadrature for the continuous Heisenberg and affine groups in
//! [`continuum`].

pub mod characters;
pub mod continuum;
pub mod covariant;
pub mod error;
pub mod group;
pub mod report;
pub mod rng;
pub mod semidirect;
pub mod weyl_heisenberg;

pub use num_complex::Complex64 as C64;

pub use characters::{
    conjugate_character, enumerate_characters, invariant_characters, invariant_characters_semidirect, Character,
    CharacterSet,
};
pub use covariant::{
    cov_convolve, cov_involve, cov_norm, project, run_verification, CovariantContext, CovariantFunction,
    VerifyOptions,
};
pub use error::{Error, Result};
pub use group::{FiniteGroup, Quotient, Subgroup};
pub use report::{PropertyRecord, VerificationReport};
pub use semidirect::{make_finite_heisenberg, semidirect, Action, SemidirectGroup};
