//! A laboratory for two-dimensional mutual-information feature selection.
//!
//! The crate evaluates eight sequential forward selection criteria (MIFS,
//! MIFS-U, mRMR, mMIFS-U, MICC, QMIFS, NMIFS and maxMIFS) against two kinds of
//! information sources:
//!
//! * [`oracle`]: closed-form and quadrature ground truth for a ten-feature,
//!   two-class benchmark (uniform and Gaussian variants), including the
//!   symbolic `+inf` mutual informations between functionally related
//!   features;
//! * [`estimation`]: equal-width histogram estimates computed from samples.
//!
//! Objectives are evaluated in extended-real arithmetic ([`xreal`]) so that
//! indeterminate forms such as `0 * inf` or `0 / 0` are detected and reported
//! instead of turning into NaN. [`relevance`] implements exact relevance and
//! Markov-blanket analysis on finite joint distributions, and [`simlab`]
//! runs seeded Monte Carlo experiments.

pub mod config;
pub mod error;
pub mod estimation;
pub mod infotheory;
pub mod oracle;
pub mod quadrature;
pub mod relevance;
pub mod selection;
pub mod simlab;
pub mod verify;
pub mod xreal;

pub use error::{Error, Result};
pub use estimation::{estimated_provider, EstimatedProvider, Sample};
pub use oracle::{oracle_provider, FeatureId, OracleProvider, Scenario, ScenarioSpec};
pub use selection::{select_all, HaltReason, MethodSpec, MiProvider, SelectionTrace};
pub use xreal::{IndetKind, XReal};
