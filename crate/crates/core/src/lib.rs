//! Solvers for abstract games whose payoffs are quasi-Leontief functions on
//! finite inf-semilattices.
//!
//! The crate is layered bottom-up:
//!
//! - [`semilattice`]: finite meet tables, the induced order, intervals,
//!   brackets, products, and the set predicates used by the game hypotheses.
//! - [`leontief`]: tabulated quasi-Leontief functions with the residual map
//!   (`sharp`), the efficiency retraction (`circ`), efficient and argmax sets.
//! - [`game`]: games with globally or individually quasi-Leontief payoffs,
//!   Nash certificates, the decoupled and maximal constructions, the
//!   N1/N2 and (a1)/(a2) characterizations, and the E-map.
//! - [`spec_file`], [`report`], [`refine`]: the JSON game format, grid
//!   discretization of piecewise-linear payoffs, and machine-readable reports.
//! - [`random`], [`sweep`]: seeded generators for the property corpora and
//!   the existence sweep over them.

pub mod error;
pub mod game;
pub mod grid;
pub mod leontief;
pub mod pwl;
pub mod random;
pub mod rational;
pub mod refine;
pub mod report;
pub mod semilattice;
pub mod spec_file;
pub mod sweep;

pub use error::{Error, Result};
pub use game::{
    Characterization, EMapTrace, EMapValue, EfficiencyCase, EfficientNashMethod, Game,
    NashCertificate, PayoffModel, PlayerEfficiency, StrategyProfile, DEFAULT_BUDGET,
};
pub use leontief::{MinAggregate, QlCertificate, QuasiLeontief, TabulatedFunction};
pub use rational::Rational;
pub use semilattice::{AxiomReport, Element, ElementSet, FiniteInfSemilattice, ProductSemilattice};
