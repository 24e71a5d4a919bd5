use crate::error::{Error, Result};

/// Full configuration of one simulation run.
///
/// Temperature is measured in units of `J / k_B`. `coupling` and `field`
/// default to 1 and 0; every replication experiment keeps them there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub temperature: f64,
    pub coupling: f64,
    pub field: f64,
    /// Chance that a current evader is caught when visited.
    pub audit_probability: f64,
    /// Sweeps a caught evader is held honest.
    pub punishment_length: u32,
    pub side_length: usize,
    pub seed: u64,
    pub sweeps: usize,
}

impl ModelParams {
    pub const DEFAULT_SIDE: usize = 256;
    pub const DEFAULT_SWEEPS: usize = 300;

    /// Plain Ising run (no enforcement) at `temperature`, on the default
    /// 256×256 lattice for 300 sweeps with seed 0.
    pub fn baseline(temperature: f64) -> Self {
        ModelParams {
            temperature,
            coupling: 1.0,
            field: 0.0,
            audit_probability: 0.0,
            punishment_length: 0,
            side_length: Self::DEFAULT_SIDE,
            seed: 0,
            sweeps: Self::DEFAULT_SWEEPS,
        }
    }

    pub fn with_enforcement(mut self, audit_probability: f64, punishment_length: u32) -> Self {
        self.audit_probability = audit_probability;
        self.punishment_length = punishment_length;
        self
    }

    pub fn with_side_length(mut self, side_length: usize) -> Self {
        self.side_length = side_length;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_sweeps(mut self, sweeps: usize) -> Self {
        self.sweeps = sweeps;
        self
    }

    pub fn with_field(mut self, field: f64) -> Self {
        self.field = field;
        self
    }

    /// Audits only run when both the audit probability and the punishment
    /// length are positive. Otherwise the model is the plain Ising model and
    /// no audit randomness is drawn.
    pub fn enforcement_active(&self) -> bool {
        self.audit_probability > 0.0 && self.punishment_length > 0
    }

    pub fn validate(&self) -> Result<()> {
        check_temperature(self.temperature)?;
        if !self.coupling.is_finite() {
            return Err(Error::invalid("coupling", "must be finite"));
        }
        if !self.field.is_finite() {
            return Err(Error::invalid("field", "must be finite"));
        }
        check_probability(self.audit_probability)?;
        if self.side_length < crate::lattice::MIN_SIDE {
            return Err(Error::invalid(
                "side_length",
                format!(
                    "must be at least {}, got {}",
                    crate::lattice::MIN_SIDE,
                    self.side_length
                ),
            ));
        }
        if self.sweeps == 0 {
            return Err(Error::invalid("sweeps", "must be positive"));
        }
        Ok(())
    }
}

pub(crate) fn check_temperature(t: f64) -> Result<()> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::invalid(
            "temperature",
            format!("must be positive, got {t}"),
        ));
    }
    Ok(())
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(
            "audit_probability",
            format!("must lie in [0, 1], got {p}"),
        ));
    }
    Ok(())
}
