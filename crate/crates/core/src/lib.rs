//! Hydrogenic energy levels from a Dirac-Coulomb Hamiltonian whose coupling
//! Z alpha is rescaled by state-dependent effective factors.
//!
//! The factors take the form `g = 1 - lambda (1 - eps_Dirac^n)`, where
//! `lambda` carries either the radiative (Lamb) strength or the proton
//! magnetic-moment (hyperfine) strength. Solving the resulting quantization
//! condition reproduces the Lamb shift at order alpha (Z alpha)^4 and the
//! hyperfine splitting at order alpha^4.
//!
//! Module map:
//!
//! * [`constants`] and [`data`]: constants, Bethe logarithms, reference values
//! * [`states`]: (n, kappa, S) bookkeeping and spectroscopic labels
//! * [`dirac`]: closed forms and the terminating radial series
//! * [`coupling`]: lambda factors and coupling matrices
//! * [`eigensolver`]: the quantization condition, expansions, order fits
//! * [`observables`]: splittings in MHz and comparison reports

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod coupling;
pub mod data;
pub mod dirac;
pub mod eigensolver;
pub mod error;
pub mod observables;
pub mod roots;
pub mod states;

pub use constants::{load_config, load_constants, Config, ModelOptions, PhysicalConstants};
pub use coupling::{CouplingFactors, CouplingModel, LambdaFactor, LambdaKind};
pub use data::{BetheLogTable, Quantity, ReferenceRecord, Source};
pub use eigensolver::{EnergyLevel, ExpansionKind, SolveReport, Term};
pub use error::{Error, Result};
pub use observables::{ComparisonRow, LambOrder, SplittingKind, SplittingResult};
pub use states::QuantumState;
