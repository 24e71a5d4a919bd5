//! Single runs, audit-probability grids, equilibrium estimates and the
//! comparison of the kernel against exact enumeration.

use rayon::prelude::*;

use crate::dynamics::{sweep, Dynamics, SweepReport};
use crate::enforcement::EnforcementState;
use crate::error::{Error, Result};
use crate::lattice::SpinLattice;
use crate::oracle::{exact_boltzmann_stats, MAX_ENUMERATION_SIDE};
use crate::params::ModelParams;
use crate::rng::{derive_seed, RandomStream};
use crate::stats;

/// A run in progress: all-honest start, no locks, seeded stream.
#[derive(Debug, Clone)]
pub struct Simulation {
    lattice: SpinLattice,
    enforcement: EnforcementState,
    dynamics: Dynamics,
    rng: RandomStream,
    sweeps_done: usize,
}

impl Simulation {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let dynamics = Dynamics::new(params)?;
        Ok(Simulation {
            lattice: SpinLattice::new_all_honest(params.side_length)?,
            enforcement: EnforcementState::new(params.side_length),
            dynamics,
            rng: RandomStream::new(params.seed),
            sweeps_done: 0,
        })
    }

    pub fn step(&mut self) -> SweepReport {
        self.sweeps_done += 1;
        sweep(
            &mut self.lattice,
            &mut self.enforcement,
            &self.dynamics,
            &mut self.rng,
        )
        .expect("lattice and enforcement are built with the same side")
    }

    pub fn lattice(&self) -> &SpinLattice {
        &self.lattice
    }

    pub fn enforcement(&self) -> &EnforcementState {
        &self.enforcement
    }

    pub fn sweeps_done(&self) -> usize {
        self.sweeps_done
    }
}

/// Evasion share (and magnetization) after each sweep of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    /// `evasion[t]` is the state after sweep `t + 1`.
    pub evasion: Vec<f64>,
    pub magnetization: Vec<i64>,
    pub params: ModelParams,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.evasion.len()
    }

    pub fn is_empty(&self) -> bool {
        self.evasion.is_empty()
    }

    /// Mean evasion over sweeps `start..end` (0-based series indices).
    pub fn window_mean(&self, start: usize, end: usize) -> f64 {
        stats::mean(&self.evasion[start..end])
    }
}

pub fn run_series(params: &ModelParams) -> Result<TimeSeries> {
    let mut sim = Simulation::new(params)?;
    let mut evasion = Vec::with_capacity(params.sweeps);
    let mut magnetization = Vec::with_capacity(params.sweeps);
    for _ in 0..params.sweeps {
        let obs = sim.step().observables;
        evasion.push(obs.evasion_fraction);
        magnetization.push(obs.magnetization);
    }
    Ok(TimeSeries {
        evasion,
        magnetization,
        params: *params,
    })
}

/// Number of audit-probability rows in a grid: 0.00, 0.01, ..., 1.00.
pub const GRID_ROWS: usize = 101;

/// Audit probability of grid row `row`.
pub fn grid_audit_probability(row: usize) -> f64 {
    row as f64 / 100.0
}

/// Evasion share indexed by (audit-probability row, sweep).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub base: ModelParams,
    /// Per-row seeds, `derive_seed(base.seed, row)`.
    pub seeds: Vec<u64>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepGrid {
    pub fn audit_probability(&self, row: usize) -> f64 {
        grid_audit_probability(row)
    }

    /// Parameters used for row `row`.
    pub fn row_params(&self, row: usize) -> ModelParams {
        grid_row_params(&self.base, row)
    }
}

pub fn grid_row_params(base: &ModelParams, row: usize) -> ModelParams {
    let mut p = *base;
    p.audit_probability = grid_audit_probability(row);
    p.seed = derive_seed(base.seed, row as u64);
    p
}

/// Runs the 101 audit probabilities of a grid. Rows execute on the ambient
/// rayon pool; the result does not depend on the number of threads.
pub fn run_grid(base: &ModelParams) -> Result<SweepGrid> {
    base.validate()?;
    let rows = (0..GRID_ROWS)
        .into_par_iter()
        .map(|row| run_series(&grid_row_params(base, row)).map(|s| s.evasion))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid {
        base: *base,
        seeds: (0..GRID_ROWS)
            .map(|r| derive_seed(base.seed, r as u64))
            .collect(),
        rows,
    })
}

/// Long-run evasion level averaged over independent replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumEstimate {
    pub mean_evasion: f64,
    /// Standard error across replicate means.
    pub std_error: f64,
    pub burn_in_sweeps: usize,
    pub measure_sweeps: usize,
    pub seeds_used: usize,
    pub replicate_means: Vec<f64>,
    pub replicate_seeds: Vec<u64>,
}

/// Runs `n_seeds` replicates (seed `derive_seed(params.seed, r)`) for
/// `burn_in + measure` sweeps each and averages evasion over the last
/// `measure` sweeps.
pub fn estimate_equilibrium(
    params: &ModelParams,
    burn_in: usize,
    measure: usize,
    n_seeds: usize,
) -> Result<EquilibriumEstimate> {
    params.validate()?;
    if measure == 0 {
        return Err(Error::invalid("measure", "must be positive"));
    }
    if burn_in + measure > params.sweeps {
        return Err(Error::invalid(
            "sweeps",
            format!(
                "{} is shorter than burn-in {burn_in} plus measure {measure}",
                params.sweeps
            ),
        ));
    }
    if n_seeds == 0 {
        return Err(Error::invalid("seeds", "need at least one replicate"));
    }
    let replicate_seeds: Vec<u64> = (0..n_seeds as u64)
        .map(|r| derive_seed(params.seed, r))
        .collect();
    let replicate_means = replicate_seeds
        .par_iter()
        .map(|&seed| {
            let mut sim = Simulation::new(&ModelParams { seed, ..*params })?;
            for _ in 0..burn_in {
                sim.step();
            }
            let total: f64 = (0..measure)
                .map(|_| sim.step().observables.evasion_fraction)
                .sum();
            Ok(total / measure as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(EquilibriumEstimate {
        mean_evasion: stats::mean(&replicate_means),
        std_error: stats::standard_error(&replicate_means),
        burn_in_sweeps: burn_in,
        measure_sweeps: measure,
        seeds_used: n_seeds,
        replicate_means,
        replicate_seeds,
    })
}

/// Exact enumeration next to a long heat-bath run on the same small lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub side_length: usize,
    pub temperature: f64,
    pub exact_energy: f64,
    pub simulated_energy: f64,
    /// Batch-means error of `simulated_energy`.
    pub std_error: f64,
    pub sweeps: usize,
}

impl OracleComparison {
    pub const BATCHES: usize = 100;

    pub fn difference(&self) -> f64 {
        self.simulated_energy - self.exact_energy
    }

    /// Agreement within `n_sigma` standard errors.
    pub fn agrees_within(&self, n_sigma: f64) -> bool {
        self.difference().abs() <= n_sigma * self.std_error
    }
}

/// Plain heat-bath run of `sweeps` measured sweeps (after `sweeps / 100`
/// discarded ones) on an `L ≤ 4` lattice, compared with enumeration.
pub fn compare_with_oracle(
    side_length: usize,
    temperature: f64,
    sweeps: usize,
    seed: u64,
) -> Result<OracleComparison> {
    if side_length > MAX_ENUMERATION_SIDE {
        return Err(Error::EnumerationTooLarge(side_length));
    }
    if sweeps < OracleComparison::BATCHES {
        return Err(Error::invalid(
            "sweeps",
            format!("need at least {}", OracleComparison::BATCHES),
        ));
    }
    let exact = exact_boltzmann_stats(side_length, temperature)?;
    let params = ModelParams::baseline(temperature)
        .with_side_length(side_length)
        .with_seed(seed)
        .with_sweeps(sweeps);
    let mut sim = Simulation::new(&params)?;
    for _ in 0..sweeps / 100 {
        sim.step();
    }
    let energies: Vec<f64> = (0..sweeps)
        .map(|_| sim.step().observables.total_energy)
        .collect();
    Ok(OracleComparison {
        side_length,
        temperature,
        exact_energy: exact.mean_energy,
        simulated_energy: stats::mean(&energies),
        std_error: stats::batch_means_error(&energies, OracleComparison::BATCHES),
        sweeps,
    })
}
