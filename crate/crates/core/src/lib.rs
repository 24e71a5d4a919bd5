//! Heat-bath Ising simulation of tax evasion under audits and punishment.
//!
//! Agents on an `L×L` torus are honest (`+1`) or evade (`-1`). Each sweep
//! every agent reconsiders with the heat-bath rule, so it tends to copy its
//! four neighbours, with `T` setting how much it decides on its own. Evaders
//! are audited with probability `p_a`; a caught evader is forced honest for
//! `k` sweeps.
//!
//! ```
//! use tax_ising::{run_series, ModelParams};
//!
//! let params = ModelParams::baseline(25.0)
//!     .with_enforcement(0.9, 50)
//!     .with_side_length(32)
//!     .with_sweeps(100);
//! let series = run_series(&params).unwrap();
//! assert_eq!(series.len(), 100);
//! ```
//!
//! The guide in `book/` walks through the model chapter by chapter; its code
//! blocks are compiled and run as doc-tests of this crate.

pub mod dynamics;
pub mod enforcement;
pub mod error;
pub mod experiment;
pub mod lattice;
pub mod oracle;
pub mod output;
pub mod params;
pub mod rng;
pub mod stats;

pub use dynamics::{flip_probability, sweep, update_site, Dynamics, FlipTable, SweepReport};
pub use enforcement::{audit, AuditPolicy, EnforcementState};
pub use error::{Error, Result};
pub use experiment::{
    compare_with_oracle, estimate_equilibrium, run_grid, run_series, EquilibriumEstimate,
    OracleComparison, Simulation, SweepGrid, TimeSeries,
};
pub use lattice::{Observables, SpinLattice, EVADER, HONEST};
pub use oracle::{
    critical_temperature, exact_boltzmann_stats, onsager_spontaneous_magnetization, BoltzmannStats,
};
pub use params::ModelParams;
pub use rng::{derive_seed, RandomStream, UniformSource};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/enforcement.md")]
    mod enforcement {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
