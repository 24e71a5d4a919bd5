//! Text output formats.
//!
//! All files are UTF-8 with LF line endings and a mandatory header row.
//! Reals are written in Rust's shortest round-trip form (`{}` on `f64`), so
//! a parsed value is bit-identical to the simulated one. Audit probabilities
//! in grid files use two fixed decimals.
//!
//! Every data file has a sidecar manifest of `key=value` lines holding the
//! parameters and seeds that reproduce it.

use std::io::{self, Write};

use crate::dynamics::flip_probability;
use crate::error::Result;
use crate::experiment::{EquilibriumEstimate, OracleComparison, SweepGrid, TimeSeries};
use crate::params::ModelParams;

pub const SERIES_HEADER: &str = "sweep,evasion_fraction,magnetization";
pub const GRID_HEADER: &str = "p_a,sweep,evasion_fraction";
pub const EQUILIBRIUM_HEADER: &str =
    "temperature,audit_probability,punishment_length,side_length,burn_in,measure,seeds,mean_evasion,std_error";

pub const DEFAULT_TABLE_TEMPERATURES: [f64; 5] = [0.25, 2.0, 2.5, 3.0, 25.0];

/// One row per sweep, numbered from 1.
pub fn write_series_csv<W: Write>(mut w: W, series: &TimeSeries) -> io::Result<()> {
    writeln!(w, "{SERIES_HEADER}")?;
    for (i, (e, m)) in series.evasion.iter().zip(&series.magnetization).enumerate() {
        writeln!(w, "{},{},{}", i + 1, e, m)?;
    }
    w.flush()
}

/// Long form: audit probability ascending, then sweep ascending.
pub fn write_grid_csv<W: Write>(mut w: W, grid: &SweepGrid) -> io::Result<()> {
    writeln!(w, "{GRID_HEADER}")?;
    for (row, values) in grid.rows.iter().enumerate() {
        let pa = grid.audit_probability(row);
        for (i, e) in values.iter().enumerate() {
            writeln!(w, "{pa:.2},{},{}", i + 1, e)?;
        }
    }
    w.flush()
}

/// Whitespace-separated matrix, one line per audit probability and one
/// column per sweep, readable by gnuplot's `splot 'file' matrix`.
pub fn write_grid_matrix<W: Write>(mut w: W, grid: &SweepGrid) -> io::Result<()> {
    writeln!(
        w,
        "# rows: p_a = 0.00..1.00 step 0.01; columns: sweep 1..{}",
        grid.base.sweeps
    )?;
    for values in &grid.rows {
        let line: Vec<String> = values.iter().map(|e| e.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    w.flush()
}

pub fn write_equilibrium_csv<W: Write>(
    mut w: W,
    params: &ModelParams,
    est: &EquilibriumEstimate,
) -> io::Result<()> {
    writeln!(w, "{EQUILIBRIUM_HEADER}")?;
    writeln!(
        w,
        "{},{},{},{},{},{},{},{},{}",
        params.temperature,
        params.audit_probability,
        params.punishment_length,
        params.side_length,
        est.burn_in_sweeps,
        est.measure_sweeps,
        est.seeds_used,
        est.mean_evasion,
        est.std_error
    )?;
    w.flush()
}

/// Flip probability for `I_e ∈ {-4, -2, 0, 2, 4}` (rows) at each
/// temperature (columns), six decimals, `J = 1`, `B = 0`.
pub fn format_probability_table(temperatures: &[f64]) -> Result<String> {
    let mut rows = Vec::with_capacity(5);
    for ie in [-4, -2, 0, 2, 4] {
        let cells = temperatures
            .iter()
            .map(|&t| flip_probability(ie, t, 1.0, 0.0, 1).map(|p| format!("{p:>10.6}")))
            .collect::<Result<Vec<_>>>()?;
        rows.push(format!("{:<8}{}", format!("I_e={ie}"), cells.concat()));
    }
    let header: String = temperatures
        .iter()
        .map(|t| format!("{:>10}", format!("T={t}")))
        .collect();
    let mut out = format!("{:<8}{header}\n", "");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    Ok(out)
}

pub fn format_oracle_report(c: &OracleComparison, n_sigma: f64) -> String {
    let verdict = if c.agrees_within(n_sigma) {
        "PASS"
    } else {
        "FAIL"
    };
    format!(
        "side_length={}\ntemperature={}\nsweeps={}\nexact_energy={}\nsimulated_energy={}\ndifference={}\nstd_error={}\nresult={verdict}\n",
        c.side_length,
        c.temperature,
        c.sweeps,
        c.exact_energy,
        c.simulated_energy,
        c.difference(),
        c.std_error,
    )
}

/// Ordered `key=value` metadata accompanying an output file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunManifest {
    entries: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        let mut m = RunManifest::default();
        m.push(
            "software",
            concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")),
        );
        m.push("command", command);
        m.push(
            "rng",
            "xoshiro256++ seeded by splitmix64; u = (x >> 11) * 2^-53",
        );
        m.push(
            "seed_derivation",
            "splitmix64(base_seed ^ splitmix64(index))",
        );
        m
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn with_params(&mut self, p: &ModelParams) -> &mut Self {
        self.push("temperature", p.temperature)
            .push("coupling", p.coupling)
            .push("field", p.field)
            .push("audit_probability", p.audit_probability)
            .push("punishment_length", p.punishment_length)
            .push("side_length", p.side_length)
            .push("seed", p.seed)
            .push("sweeps", p.sweeps)
    }

    /// Records wall time and site-update throughput.
    pub fn with_timing(&mut self, seconds: f64, site_updates: u64) -> &mut Self {
        let rate = if seconds > 0.0 {
            site_updates as f64 / seconds
        } else {
            0.0
        };
        self.push("wall_clock_seconds", format!("{seconds:.3}"))
            .push("site_updates", site_updates)
            .push("site_updates_per_second", format!("{rate:.0}"))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn write<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (k, v) in &self.entries {
            writeln!(w, "{k}={v}")?;
        }
        w.flush()
    }
}
