//! Audits and punishment.
//!
//! A caught evader is forced honest and gets a countdown of `k` sweeps.
//! While the countdown is positive the site is locked: the dynamics skip it
//! and it cannot be audited. Countdowns run down once per sweep, after every
//! site has been visited; a site caught during sweep `t` is skipped during
//! sweeps `t+1 ..= t+k` and decides freely again from sweep `t+k+1`.

use crate::lattice::{SpinLattice, EVADER, HONEST};
use crate::params::ModelParams;
use crate::rng::UniformSource;

/// The audit rule of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditPolicy {
    pub audit_probability: f64,
    pub punishment_length: u32,
}

impl AuditPolicy {
    /// `None` when the parameters leave enforcement inert (`p_a = 0` or `k = 0`).
    pub fn from_params(params: &ModelParams) -> Option<Self> {
        params.enforcement_active().then_some(AuditPolicy {
            audit_probability: params.audit_probability,
            punishment_length: params.punishment_length,
        })
    }
}

/// Per-site punishment countdowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnforcementState {
    side: usize,
    countdown: Vec<u32>,
    // sites caught since the last tick; their countdown is not run down by it
    fresh: Vec<usize>,
}

impl EnforcementState {
    pub fn new(side_length: usize) -> Self {
        EnforcementState {
            side: side_length,
            countdown: vec![0; side_length * side_length],
            fresh: Vec::new(),
        }
    }

    pub fn side_length(&self) -> usize {
        self.side
    }

    #[inline]
    pub fn is_locked(&self, row: usize, col: usize) -> bool {
        self.countdown[row * self.side + col] > 0
    }

    #[inline(always)]
    pub(crate) fn is_locked_at(&self, idx: usize) -> bool {
        self.countdown[idx] > 0
    }

    pub fn countdown(&self, row: usize, col: usize) -> u32 {
        self.countdown[row * self.side + col]
    }

    pub fn countdowns(&self) -> &[u32] {
        &self.countdown
    }

    pub fn locked_count(&self) -> usize {
        self.countdown.iter().filter(|&&c| c > 0).count()
    }

    #[inline(always)]
    pub(crate) fn punish_at(&mut self, idx: usize, k: u32) {
        self.countdown[idx] = k;
        if k > 0 {
            self.fresh.push(idx);
        }
    }

    /// Runs every positive countdown down by one, except those set since the
    /// previous tick. Returns how many sites were released.
    pub fn tick(&mut self) -> usize {
        let mut released = 0;
        for c in &mut self.countdown {
            if *c > 0 {
                *c -= 1;
                released += (*c == 0) as usize;
            }
        }
        for &idx in &self.fresh {
            // k >= 1 here, so a fresh site never counts as released
            self.countdown[idx] += 1;
        }
        self.fresh.clear();
        released
    }
}

/// Audits the evader at `(row, col)`.
///
/// Draws one uniform `u`; when `u < p_a` the agent is made honest and
/// locked for `k` sweeps. Must only be called on an unlocked evader.
pub fn audit<R: UniformSource>(
    lattice: &mut SpinLattice,
    enforcement: &mut EnforcementState,
    policy: &AuditPolicy,
    row: usize,
    col: usize,
    rng: &mut R,
) -> bool {
    debug_assert_eq!(
        lattice.spin(row, col),
        EVADER,
        "audit called on an honest site"
    );
    debug_assert!(
        !enforcement.is_locked(row, col),
        "audit called on a locked site"
    );
    let idx = row * lattice.side_length() + col;
    let caught = rng.next_uniform() < policy.audit_probability;
    if caught {
        let nsum = lattice.neighbor_sum(row, col);
        lattice.flip_with_sum(idx, nsum);
        enforcement.punish_at(idx, policy.punishment_length);
    }
    caught
}

/// Every locked site must be honest.
pub fn locks_are_honest(lattice: &SpinLattice, enforcement: &EnforcementState) -> bool {
    lattice
        .spins()
        .iter()
        .zip(enforcement.countdowns())
        .all(|(&s, &c)| c == 0 || s == HONEST)
}
