//! Square lattice of agents with periodic boundaries.
//!
//! Site `(row, col)` lives at index `row * L + col`. Each site holds `+1`
//! (honest) or `-1` (evader). The lattice keeps its magnetization and bond
//! sum up to date on every mutation so observables are O(1).

use crate::error::{Error, Result};

pub const HONEST: i8 = 1;
pub const EVADER: i8 = -1;

/// Smallest admissible side length. For `L = 2` the two neighbours in each
/// direction are the same site and are read twice.
pub const MIN_SIDE: usize = 2;

/// Snapshot of the aggregate state of a lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    /// Sum of all spins.
    pub magnetization: i64,
    /// Share of sites holding `-1`.
    pub evasion_fraction: f64,
    /// `-Σ S_i S_j` over nearest-neighbour bonds, each bond once (J = 1).
    pub total_energy: f64,
}

impl Observables {
    fn from_sums(sites: usize, magnetization: i64, bond_sum: i64) -> Self {
        let n = sites as i64;
        Observables {
            magnetization,
            evasion_fraction: (n - magnetization) as f64 / (2 * n) as f64,
            total_energy: -(bond_sum as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinLattice {
    side: usize,
    spins: Vec<i8>,
    magnetization: i64,
    bond_sum: i64,
}

impl SpinLattice {
    /// Every agent starts honest.
    pub fn new_all_honest(side_length: usize) -> Result<Self> {
        Self::filled(side_length, HONEST)
    }

    pub fn new_all_evader(side_length: usize) -> Result<Self> {
        Self::filled(side_length, EVADER)
    }

    fn filled(side: usize, value: i8) -> Result<Self> {
        check_side(side)?;
        Self::from_spins(side, vec![value; side * side])
    }

    /// Builds a lattice from `f(row, col)`, which must return `±1`.
    pub fn from_fn(side_length: usize, mut f: impl FnMut(usize, usize) -> i8) -> Result<Self> {
        check_side(side_length)?;
        let spins = (0..side_length * side_length)
            .map(|i| f(i / side_length, i % side_length))
            .collect();
        Self::from_spins(side_length, spins)
    }

    /// Builds a lattice from a row-major spin vector.
    pub fn from_spins(side_length: usize, spins: Vec<i8>) -> Result<Self> {
        check_side(side_length)?;
        if spins.len() != side_length * side_length {
            return Err(Error::invalid(
                "spins",
                format!(
                    "has {} entries, expected {}",
                    spins.len(),
                    side_length * side_length
                ),
            ));
        }
        if let Some(bad) = spins.iter().find(|&&s| s != HONEST && s != EVADER) {
            return Err(Error::invalid(
                "spins",
                format!("contains {bad}, expected +1 or -1"),
            ));
        }
        let mut lattice = SpinLattice {
            side: side_length,
            spins,
            magnetization: 0,
            bond_sum: 0,
        };
        let (m, b) = lattice.recount();
        lattice.magnetization = m;
        lattice.bond_sum = b;
        Ok(lattice)
    }

    #[inline]
    pub fn side_length(&self) -> usize {
        self.side
    }

    /// Number of sites, `L²`.
    #[inline]
    pub fn len(&self) -> usize {
        self.spins.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    #[inline]
    pub fn spin(&self, row: usize, col: usize) -> i8 {
        self.spins[row * self.side + col]
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    /// Sum of the four nearest neighbours, with wraparound.
    #[inline]
    pub fn neighbor_sum(&self, row: usize, col: usize) -> i32 {
        let l = self.side;
        let up = if row == 0 { l - 1 } else { row - 1 };
        let down = if row + 1 == l { 0 } else { row + 1 };
        let left = if col == 0 { l - 1 } else { col - 1 };
        let right = if col + 1 == l { 0 } else { col + 1 };
        let s = &self.spins;
        s[up * l + col] as i32
            + s[down * l + col] as i32
            + s[row * l + left] as i32
            + s[row * l + right] as i32
    }

    /// `S_i` times its neighbour sum.
    #[inline]
    pub fn interaction_energy(&self, row: usize, col: usize) -> i32 {
        self.spin(row, col) as i32 * self.neighbor_sum(row, col)
    }

    /// O(1): read from the running sums.
    pub fn observables(&self) -> Observables {
        Observables::from_sums(self.len(), self.magnetization, self.bond_sum)
    }

    /// Full O(L²) recount, independent of the running sums.
    pub fn recompute_observables(&self) -> Observables {
        let (m, b) = self.recount();
        Observables::from_sums(self.len(), m, b)
    }

    fn recount(&self) -> (i64, i64) {
        let l = self.side;
        let mut magnetization = 0i64;
        let mut bonds = 0i64;
        for row in 0..l {
            for col in 0..l {
                let s = self.spins[row * l + col] as i64;
                let right = self.spins[row * l + (col + 1) % l] as i64;
                let down = self.spins[((row + 1) % l) * l + col] as i64;
                magnetization += s;
                bonds += s * (right + down);
            }
        }
        (magnetization, bonds)
    }

    /// Negates one spin.
    pub fn flip(&mut self, row: usize, col: usize) {
        let nsum = self.neighbor_sum(row, col);
        self.flip_with_sum(row * self.side + col, nsum);
    }

    /// Negates the spin at `idx` whose neighbour sum is already known.
    #[inline(always)]
    pub(crate) fn flip_with_sum(&mut self, idx: usize, nsum: i32) {
        let s = self.spins[idx];
        self.spins[idx] = -s;
        self.magnetization -= 2 * s as i64;
        self.bond_sum -= 2 * (s as i32 * nsum) as i64;
    }

    /// Raw spin storage for the sweep kernels, which report their changes
    /// back through [`SpinLattice::apply_deltas`].
    #[inline(always)]
    pub(crate) fn raw_spins_mut(&mut self) -> &mut [i8] {
        &mut self.spins
    }

    #[inline(always)]
    pub(crate) fn apply_deltas(&mut self, magnetization: i64, bond_sum: i64) {
        self.magnetization += magnetization;
        self.bond_sum += bond_sum;
    }

    pub fn set_spin(&mut self, row: usize, col: usize, value: i8) {
        assert!(value == HONEST || value == EVADER, "spin must be +1 or -1");
        if self.spin(row, col) != value {
            self.flip(row, col);
        }
    }

    /// Negates every spin.
    pub fn flip_all(&mut self) {
        for s in &mut self.spins {
            *s = -*s;
        }
        self.magnetization = -self.magnetization;
    }
}

fn check_side(side: usize) -> Result<()> {
    if side < MIN_SIDE {
        return Err(Error::invalid(
            "side_length",
            format!("must be at least {MIN_SIDE}, got {side}"),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn checkerboard(l: usize) -> SpinLattice {
        SpinLattice::from_fn(l, |r, c| if (r + c) % 2 == 0 { HONEST } else { EVADER }).unwrap()
    }

    #[test]
    fn all_honest_start() {
        let lat = SpinLattice::new_all_honest(4).unwrap();
        assert_eq!(lat.len(), 16);
        assert!(lat.spins().iter().all(|&s| s == HONEST));
        assert_eq!(lat.observables().magnetization, 16);
        let big = SpinLattice::new_all_honest(1000).unwrap();
        assert_eq!(big.observables().evasion_fraction, 0.0);
    }

    #[test]
    fn degenerate_side_rejected() {
        assert!(matches!(
            SpinLattice::new_all_honest(1),
            Err(Error::InvalidConfig {
                field: "side_length",
                ..
            })
        ));
        assert!(SpinLattice::new_all_honest(0).is_err());
        assert!(SpinLattice::from_spins(2, vec![1, 1, 0, 1]).is_err());
        assert!(SpinLattice::from_spins(2, vec![1, 1, 1]).is_err());
    }

    #[test]
    fn neighbor_sums() {
        let honest = SpinLattice::new_all_honest(5).unwrap();
        let evader = SpinLattice::new_all_evader(5).unwrap();
        for r in 0..5 {
            for c in 0..5 {
                assert_eq!(honest.neighbor_sum(r, c), 4);
                assert_eq!(evader.neighbor_sum(r, c), -4);
            }
        }
        let mut lat = SpinLattice::new_all_honest(3).unwrap();
        lat.set_spin(0, 0, EVADER);
        assert_eq!(lat.neighbor_sum(0, 1), 2);
    }

    #[test]
    fn neighbor_sum_wraps() {
        let mut lat = SpinLattice::new_all_honest(4).unwrap();
        lat.set_spin(3, 0, EVADER);
        assert_eq!(lat.neighbor_sum(0, 0), 2);
        lat.set_spin(0, 3, EVADER);
        assert_eq!(lat.neighbor_sum(0, 0), 0);
    }

    #[test]
    fn two_by_two_reads_duplicates() {
        let mut lat = SpinLattice::new_all_honest(2).unwrap();
        lat.set_spin(1, 0, EVADER);
        // (1,0) is both the north and the south neighbour of (0,0)
        assert_eq!(lat.neighbor_sum(0, 0), 0);
    }

    #[test]
    fn interaction_energies() {
        let mut lat = SpinLattice::new_all_honest(4).unwrap();
        assert_eq!(lat.interaction_energy(2, 2), 4);
        lat.set_spin(2, 2, EVADER);
        assert_eq!(lat.interaction_energy(2, 2), -4);

        let mut mixed = SpinLattice::new_all_honest(4).unwrap();
        mixed.set_spin(0, 1, EVADER);
        mixed.set_spin(1, 0, EVADER);
        assert_eq!(mixed.interaction_energy(1, 1), 0);
    }

    #[test]
    fn reference_observables() {
        let honest = SpinLattice::new_all_honest(4).unwrap().observables();
        assert_eq!(
            honest,
            Observables {
                magnetization: 16,
                evasion_fraction: 0.0,
                total_energy: -32.0
            }
        );
        let evader = SpinLattice::new_all_evader(4).unwrap().observables();
        assert_eq!(
            evader,
            Observables {
                magnetization: -16,
                evasion_fraction: 1.0,
                total_energy: -32.0
            }
        );
        let cb = checkerboard(4).observables();
        assert_eq!(
            cb,
            Observables {
                magnetization: 0,
                evasion_fraction: 0.5,
                total_energy: 32.0
            }
        );
    }

    fn arb_lattice() -> impl Strategy<Value = SpinLattice> {
        (2usize..8).prop_flat_map(|l| {
            proptest::collection::vec(prop_oneof![Just(HONEST), Just(EVADER)], l * l)
                .prop_map(move |spins| SpinLattice::from_spins(l, spins).unwrap())
        })
    }

    proptest! {
        #[test]
        fn global_flip_symmetry(lat in arb_lattice()) {
            let before = lat.observables();
            let mut flipped = lat.clone();
            flipped.flip_all();
            let after = flipped.observables();
            prop_assert_eq!(after.magnetization, -before.magnetization);
            prop_assert!((after.evasion_fraction - (1.0 - before.evasion_fraction)).abs() < 1e-15);
            prop_assert_eq!(after.total_energy, before.total_energy);
            prop_assert_eq!(flipped.recompute_observables(), after);
        }

        #[test]
        fn local_quantities_even_and_bounded(lat in arb_lattice()) {
            let l = lat.side_length();
            for r in 0..l {
                for c in 0..l {
                    for v in [lat.neighbor_sum(r, c), lat.interaction_energy(r, c)] {
                        prop_assert!((-4..=4).contains(&v) && v % 2 == 0);
                    }
                }
            }
        }

        #[test]
        fn interaction_energy_double_counts_bonds(lat in arb_lattice()) {
            let l = lat.side_length();
            let total: i32 = (0..l).flat_map(|r| (0..l).map(move |c| (r, c)))
                .map(|(r, c)| lat.interaction_energy(r, c))
                .sum();
            prop_assert_eq!(total as f64, -2.0 * lat.observables().total_energy);
        }

        #[test]
        fn magnetization_parity_and_evasion_identity(lat in arb_lattice()) {
            let o = lat.observables();
            let n = lat.len() as i64;
            prop_assert!(o.magnetization.abs() <= n);
            prop_assert_eq!((o.magnetization - n).rem_euclid(2), 0);
            let evaders = lat.spins().iter().filter(|&&s| s == EVADER).count();
            prop_assert_eq!(o.evasion_fraction, evaders as f64 / n as f64);
        }

        #[test]
        fn running_sums_track_flips(lat in arb_lattice(), flips in proptest::collection::vec((0usize..64, 0usize..64), 0..40)) {
            let mut lat = lat;
            let l = lat.side_length();
            for (r, c) in flips {
                lat.flip(r % l, c % l);
            }
            prop_assert_eq!(lat.observables(), lat.recompute_observables());
        }
    }
}
