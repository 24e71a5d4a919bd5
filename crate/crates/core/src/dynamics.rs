//! Heat-bath single-spin-flip dynamics.
//!
//! Flipping spin `S_i` changes the energy by `ΔE = 2·J·I_e + 2·B·S_i`, where
//! `I_e = S_i · Σ_j S_j`. The flip is accepted with probability
//! `exp(-ΔE/T) / (1 + exp(-ΔE/T)) = 1 / (1 + exp(ΔE/T))`.
//!
//! One sweep visits every site once in row-major (typewriter) order. At each
//! unlocked site:
//!
//! 1. if the agent is an evader and enforcement is active, one uniform is
//!    drawn for the audit; a caught agent turns honest, is locked and the
//!    visit ends;
//! 2. otherwise one uniform `u` is drawn and the spin flips iff `u < p`.
//!
//! Locked sites draw nothing. After the last site, the punishment countdowns
//! run down by one.

use crate::enforcement::{AuditPolicy, EnforcementState};
use crate::error::{Error, Result};
use crate::lattice::{Observables, SpinLattice, EVADER};
use crate::params::{check_temperature, ModelParams};
use crate::rng::UniformSource;

/// Beyond this `|ΔE/T|` the logistic is saturated to exactly 0 or 1.
const SATURATION: f64 = 700.0;

/// Probability that a spin with interaction energy `interaction_energy`
/// flips in one heat-bath update.
pub fn flip_probability(
    interaction_energy: i32,
    temperature: f64,
    coupling: f64,
    field: f64,
    spin: i8,
) -> Result<f64> {
    check_temperature(temperature)?;
    Ok(logistic_flip(
        interaction_energy,
        temperature,
        coupling,
        field,
        spin,
    ))
}

#[inline]
fn logistic_flip(ie: i32, temperature: f64, coupling: f64, field: f64, spin: i8) -> f64 {
    let delta_e = 2.0 * coupling * ie as f64 + 2.0 * field * spin as f64;
    let x = delta_e / temperature;
    if x > SATURATION {
        0.0
    } else if x < -SATURATION {
        1.0
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Flip probabilities for every `(spin, neighbour sum)` pair of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipTable {
    // [spin == +1][(neighbor_sum + 4) / 2]
    probs: [[f64; 5]; 2],
}

impl FlipTable {
    pub fn new(temperature: f64, coupling: f64, field: f64) -> Result<Self> {
        check_temperature(temperature)?;
        let mut probs = [[0.0; 5]; 2];
        for (si, spin) in [-1i8, 1].into_iter().enumerate() {
            for (ni, nsum) in (-4..=4).step_by(2).enumerate() {
                probs[si][ni] =
                    logistic_flip(spin as i32 * nsum, temperature, coupling, field, spin);
            }
        }
        Ok(FlipTable { probs })
    }

    #[inline(always)]
    pub fn get(&self, spin: i8, neighbor_sum: i32) -> f64 {
        self.probs[(spin > 0) as usize][((neighbor_sum + 4) >> 1) as usize]
    }
}

/// Everything a sweep needs besides the state it mutates.
#[derive(Debug, Clone, PartialEq)]
pub struct Dynamics {
    pub table: FlipTable,
    pub policy: Option<AuditPolicy>,
}

impl Dynamics {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        Ok(Dynamics {
            table: FlipTable::new(params.temperature, params.coupling, params.field)?,
            policy: AuditPolicy::from_params(params),
        })
    }

    /// Plain heat-bath dynamics, no audits.
    pub fn heat_bath(temperature: f64) -> Result<Self> {
        Ok(Dynamics {
            table: FlipTable::new(temperature, 1.0, 0.0)?,
            policy: None,
        })
    }
}

/// Counts from one sweep together with the observables at its end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepReport {
    pub observables: Observables,
    pub flips: usize,
    pub caught: usize,
    pub released: usize,
}

/// Heat-bath decision for one site. Locked sites are left alone and draw
/// nothing; otherwise exactly one uniform is consumed.
pub fn update_site<R: UniformSource>(
    lattice: &mut SpinLattice,
    enforcement: &EnforcementState,
    table: &FlipTable,
    row: usize,
    col: usize,
    rng: &mut R,
) -> bool {
    if enforcement.is_locked(row, col) {
        return false;
    }
    heat_bath_update(lattice, table, row, col, rng)
}

#[inline(always)]
fn heat_bath_update<R: UniformSource>(
    lattice: &mut SpinLattice,
    table: &FlipTable,
    row: usize,
    col: usize,
    rng: &mut R,
) -> bool {
    let idx = row * lattice.side_length() + col;
    let spin = lattice.spins()[idx];
    let nsum = lattice.neighbor_sum(row, col);
    let flip = rng.next_uniform() < table.get(spin, nsum);
    if flip {
        lattice.flip_with_sum(idx, nsum);
    }
    flip
}

/// One time unit: a typewriter pass over the lattice, then the countdown tick.
pub fn sweep<R: UniformSource>(
    lattice: &mut SpinLattice,
    enforcement: &mut EnforcementState,
    dynamics: &Dynamics,
    rng: &mut R,
) -> Result<SweepReport> {
    if lattice.side_length() != enforcement.side_length() {
        return Err(Error::DimensionMismatch {
            lattice: lattice.side_length(),
            enforcement: enforcement.side_length(),
        });
    }
    let (flips, caught) = match &dynamics.policy {
        Some(policy) => enforced_pass(lattice, enforcement, &dynamics.table, policy, rng),
        None => (heat_bath_pass(lattice, &dynamics.table, rng), 0),
    };
    let released = enforcement.tick();
    Ok(SweepReport {
        observables: lattice.observables(),
        flips,
        caught,
        released,
    })
}

fn enforced_pass<R: UniformSource>(
    lattice: &mut SpinLattice,
    enforcement: &mut EnforcementState,
    table: &FlipTable,
    policy: &AuditPolicy,
    rng: &mut R,
) -> (usize, usize) {
    let l = lattice.side_length();
    let mut acc = Deltas::default();
    let mut caught = 0;
    let spins = lattice.raw_spins_mut();
    for row in 0..l {
        let (up, here, down) = row_offsets(row, l);
        for col in 0..l {
            let idx = here + col;
            if enforcement.is_locked_at(idx) {
                continue;
            }
            let nsum = neighbor_sum(spins, up, here, down, col, l);
            let s = spins[idx];
            if s == EVADER && rng.next_uniform() < policy.audit_probability {
                spins[idx] = -s;
                acc.record(s, nsum, 1);
                enforcement.punish_at(idx, policy.punishment_length);
                caught += 1;
                continue;
            }
            let flip = (rng.next_uniform() < table.get(s, nsum)) as i32;
            spins[idx] = s * (1 - 2 * flip as i8);
            acc.record(s, nsum, flip);
        }
    }
    lattice.apply_deltas(acc.magnetization, acc.bond_sum);
    (acc.flips as usize - caught, caught)
}

/// A typewriter heat-bath pass with no enforcement bookkeeping at all.
pub fn heat_bath_pass<R: UniformSource>(
    lattice: &mut SpinLattice,
    table: &FlipTable,
    rng: &mut R,
) -> usize {
    let l = lattice.side_length();
    let mut acc = Deltas::default();
    let spins = lattice.raw_spins_mut();
    for row in 0..l {
        let (up, here, down) = row_offsets(row, l);
        for col in 0..l {
            let idx = here + col;
            let nsum = neighbor_sum(spins, up, here, down, col, l);
            let s = spins[idx];
            let flip = (rng.next_uniform() < table.get(s, nsum)) as i32;
            spins[idx] = s * (1 - 2 * flip as i8);
            acc.record(s, nsum, flip);
        }
    }
    lattice.apply_deltas(acc.magnetization, acc.bond_sum);
    acc.flips as usize
}

#[derive(Default)]
struct Deltas {
    magnetization: i64,
    bond_sum: i64,
    flips: i64,
}

impl Deltas {
    /// `flip` is 0 or 1; `spin` is the value before the flip.
    #[inline(always)]
    fn record(&mut self, spin: i8, nsum: i32, flip: i32) {
        let s = spin as i32 * flip;
        self.magnetization -= 2 * s as i64;
        self.bond_sum -= 2 * (s * nsum) as i64;
        self.flips += flip as i64;
    }
}

/// Start offsets of the rows above, at and below `row`.
#[inline(always)]
fn row_offsets(row: usize, l: usize) -> (usize, usize, usize) {
    let up = if row == 0 { l - 1 } else { row - 1 };
    let down = if row + 1 == l { 0 } else { row + 1 };
    (up * l, row * l, down * l)
}

#[inline(always)]
fn neighbor_sum(spins: &[i8], up: usize, here: usize, down: usize, col: usize, l: usize) -> i32 {
    let left = if col == 0 { l - 1 } else { col - 1 };
    let right = if col + 1 == l { 0 } else { col + 1 };
    spins[up + col] as i32
        + spins[down + col] as i32
        + spins[here + left] as i32
        + spins[here + right] as i32
}
