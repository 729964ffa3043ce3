//! Eigenvalue engine for a one-dimensional infinite well whose bottom is not
//! flat, based on repeated differentiation of the wavefunction's logarithmic
//! derivative (the asymptotic iteration scheme), together with an independent
//! finite-difference matrix oracle used for cross-checks.
//!
//! The crate is layered bottom-up:
//!
//! * [`scalar`] — configurable-precision real arithmetic;
//! * [`jet`] — truncated Taylor expansions (jets) and their algebra.
//!
//! Everything except the oracle works at user-selected precision; the oracle
//! is deliberately double-precision to stay an independent check rather than a
//! second copy of the same machinery.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod aim;
pub mod jet;
pub mod oracle;
pub mod scalar;
pub mod solve;
pub mod wavefunction;
pub mod well;

pub use aim::{
    alpha_sequence, delta_at, run_recursion, AimError, AimIterate, HarmonicProblem, SoldeProblem,
};
pub use jet::{
    jet_add, jet_differentiate, jet_div, jet_from_rational, jet_mul, Jet, JetError,
};
pub use oracle::{
    oracle_eigenvector, oracle_spectrum, sturm_count, OracleConfig, OracleError, OracleSpectrum,
};
pub use scalar::{Precision, Real};
pub use solve::{
    find_roots, plateau_scan, spectrum, EigenResult, ScanConfig, SolveError, SpectrumOutcome,
    StabilityReport,
};
pub use wavefunction::{wavefunction, WavefunctionError, WavefunctionModel};
pub use well::{
    characteristic_exponents, lambda0_jet, make_well_problem, s0_jet, to_x, to_y, v_of_x,
    CharacteristicExponents, PotentialParams, WellError, WellProblem,
};
