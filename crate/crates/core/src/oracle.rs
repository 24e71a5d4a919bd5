//! Closed-form and enumeration references for the plain Ising model.

use crate::error::{Error, Result};
use crate::params::check_temperature;

/// `T_c = 2 / ln(1 + √2)` for `J = 1`.
pub fn critical_temperature() -> f64 {
    2.0 / (1.0 + std::f64::consts::SQRT_2).ln()
}

/// Onsager–Yang spontaneous magnetization per site of the infinite square
/// lattice: `(1 - sinh(2/T)^-4)^(1/8)` below `T_c`, zero above.
pub fn onsager_spontaneous_magnetization(temperature: f64) -> f64 {
    if temperature >= critical_temperature() {
        return 0.0;
    }
    let s = (2.0 / temperature).sinh();
    (1.0 - s.powi(-4)).max(0.0).powf(0.125)
}

/// Exact canonical averages of a small periodic lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoltzmannStats {
    pub mean_energy: f64,
    pub mean_abs_magnetization: f64,
}

pub const MAX_ENUMERATION_SIDE: usize = 4;

/// Enumerates all `2^(L²)` configurations of an `L×L` periodic lattice with
/// `J = 1`, `B = 0` and returns the Boltzmann-weighted mean energy and mean
/// `|M|`. Bonds are the right and down neighbour of each site, so an `L = 2`
/// lattice carries every bond twice, the same way the dynamics read
/// duplicate neighbours.
pub fn exact_boltzmann_stats(side_length: usize, temperature: f64) -> Result<BoltzmannStats> {
    if side_length > MAX_ENUMERATION_SIDE {
        return Err(Error::EnumerationTooLarge(side_length));
    }
    if side_length < crate::lattice::MIN_SIDE {
        return Err(Error::invalid(
            "side_length",
            format!("must be at least 2, got {side_length}"),
        ));
    }
    check_temperature(temperature)?;

    let l = side_length;
    let n = l * l;
    let states = 1usize << n;
    let mut energies = Vec::with_capacity(states);
    let mut abs_mag = Vec::with_capacity(states);
    let spin = |bits: usize, r: usize, c: usize| -> i32 {
        if bits >> ((r % l) * l + (c % l)) & 1 == 1 {
            -1
        } else {
            1
        }
    };
    for bits in 0..states {
        let mut e = 0i32;
        let mut m = 0i32;
        for r in 0..l {
            for c in 0..l {
                let s = spin(bits, r, c);
                m += s;
                e -= s * spin(bits, r, c + 1);
                e -= s * spin(bits, r + 1, c);
            }
        }
        energies.push(e as f64);
        abs_mag.push(m.abs() as f64);
    }

    let e_min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut z = 0.0;
    let mut e_sum = 0.0;
    let mut m_sum = 0.0;
    for (e, m) in energies.iter().zip(&abs_mag) {
        let w = (-(e - e_min) / temperature).exp();
        z += w;
        e_sum += w * e;
        m_sum += w * m;
    }
    Ok(BoltzmannStats {
        mean_energy: e_sum / z,
        mean_abs_magnetization: m_sum / z,
    })
}
