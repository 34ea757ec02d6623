//! Littlewood-Paley machinery on the torus: smooth radial cutoffs chi/phi,
//! dyadic blocks and the low-pass mollifier.

use crate::field::SpectralField;
use crate::grid::TorusGrid;
use crate::util::smooth_step;

/// chi: smooth radial cutoff, 1 on [0, 3/4], 0 on [4/3, inf), built from a
/// C-infinity step over the transition annulus.
pub fn chi(r: f64) -> f64 {
    const LO: f64 = 0.75;
    const HI: f64 = 4.0 / 3.0;
    1.0 - smooth_step((r - LO) / (HI - LO))
}

/// phi(r) = chi(r/2) - chi(r), supported on [3/4, 8/3].
pub fn phi(r: f64) -> f64 {
    chi(r / 2.0) - chi(r)
}

/// Dyadic ladder bound to a grid: shells `j` in `[j_min, j_max]` chosen so
/// that every resolved nonzero wavenumber is covered exactly once by
/// `sum_j phi(|xi|/2^j) = 1`, and `chi(|xi|/2^{j_max+1}) = 1` on the whole
/// grid (so low-pass at the top of the ladder is the identity).
#[derive(Debug, Clone, Copy)]
pub struct DyadicLadder {
    grid: TorusGrid,
    j_min: i32,
    j_max: i32,
}

impl DyadicLadder {
    pub fn new(grid: TorusGrid) -> Self {
        // chi(xi/2^{j_min}) must vanish at the smallest nonzero |xi|:
        // (4/3) 2^{j_min} <= xi_min.
        let j_min = (0.75 * grid.xi_min()).log2().floor() as i32;
        // chi(xi/2^{j_max+1}) must equal 1 at the largest resolved |xi|:
        // xi_max <= (3/4) 2^{j_max+1}.
        let j_max = ((2.0 / 3.0) * grid.xi_max()).log2().ceil() as i32;
        DyadicLadder { grid, j_min, j_max }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn shells(&self) -> impl Iterator<Item = i32> {
        self.j_min..=self.j_max
    }

    /// True when shell `j` lies inside the resolved ladder range.
    pub fn shell_resolved(&self, j: i32) -> bool {
        (self.j_min..=self.j_max).contains(&j)
    }

    /// Frequency-localized block: modes multiplied by `phi(|xi|/2^j)`.
    ///
    /// Outside `[j_min, j_max]` this returns an empty shell; callers that
    /// care should check [`Self::shell_resolved`] and report truncation.
    pub fn block(&self, v: &SpectralField, j: i32) -> SpectralField {
        let scale = (2.0f64).powi(j);
        v.apply_multiplier(|k2| phi(k2.sqrt() / scale))
    }

    /// Low-pass `S_j`: modes multiplied by `chi(|xi|/2^j)`; this is the
    /// dyadic mollifier (spectrally truncated approximate identity with
    /// integral one, since chi(0) = 1).
    pub fn low_pass(&self, v: &SpectralField, j: i32) -> SpectralField {
        let scale = (2.0f64).powi(j);
        v.apply_multiplier(|k2| chi(k2.sqrt() / scale))
    }

    /// Worst deviation of `chi(xi) + sum_{j in [0, j_max]} phi_j(xi)` from 1
    /// over resolved wavenumbers (the partition-of-unity defect).
    pub fn partition_defect(&self) -> f64 {
        let grid = self.grid;
        let mut worst = 0.0f64;
        for idx in 0..grid.total() {
            let r = grid.xi_sq(idx).sqrt();
            let mut s = chi(r);
            for j in 0..=self.j_max {
                s += phi(r / (2.0f64).powi(j));
            }
            worst = worst.max((s - 1.0).abs());
        }
        worst
    }

    /// Worst deviation of `sum_{j in [j_min, j_max]} phi_j(xi)` from 1 over
    /// resolved nonzero wavenumbers (homogeneous completeness).
    pub fn homogeneous_defect(&self) -> f64 {
        let grid = self.grid;
        let mut worst = 0.0f64;
        for idx in 1..grid.total() {
            let r = grid.xi_sq(idx).sqrt();
            if r == 0.0 {
                continue;
            }
            let s: f64 = self.shells().map(|j| phi(r / (2.0f64).powi(j))).sum();
            worst = worst.max((s - 1.0).abs());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn profile_support_and_values() {
        assert_eq!(chi(0.0), 1.0);
        assert_eq!(chi(0.75), 1.0);
        assert_eq!(chi(4.0 / 3.0), 0.0);
        assert_eq!(phi(0.5), 0.0);
        assert_eq!(phi(3.0), 0.0);
        assert!(phi(1.0) > 0.0);
        // telescoping: chi(r) + sum phi(r/2^j) reaches 1 once chi(r/2^J)=1
        for &r in &[0.3, 0.9, 2.7, 11.0] {
            let mut s = chi(r);
            for j in 0..=8 {
                s += phi(r / (2.0f64).powi(j));
            }
            assert!((s - 1.0).abs() < 1e-15, "r={r}");
        }
    }

    #[test]
    fn shells_two_apart_have_disjoint_support() {
        // supp phi_j subset [0.75 * 2^j, 8/3 * 2^j]; check on a fine sample
        for j in -2..4i32 {
            for l in (j + 2)..(j + 5) {
                for i in 0..2000 {
                    let r = 0.01 + i as f64 * 0.02;
                    let pj = phi(r / (2.0f64).powi(j));
                    let pl = phi(r / (2.0f64).powi(l));
                    assert!(
                        pj * pl == 0.0,
                        "phi_{j} phi_{l} nonzero at r={r}: {pj} {pl}"
                    );
                }
            }
        }
    }

    #[test]
    fn partition_of_unity_on_resolved_modes() {
        let grid = TorusGrid::cubic(16).unwrap();
        let ladder = DyadicLadder::new(grid);
        assert!(ladder.partition_defect() < 1e-12);
        assert!(ladder.homogeneous_defect() < 1e-12);
    }

    #[test]
    fn single_mode_captured_by_adjacent_blocks_only() {
        let grid = TorusGrid::cubic(32).unwrap();
        let ladder = DyadicLadder::new(grid);
        // |k| = 4 = 2^2
        let v = SpectralField::single_mode(grid, 1, 0, [4, 0, 0], 1.0, 0.0);
        let mut captured = 0.0;
        for j in ladder.shells() {
            let b = ladder.block(&v, j);
            let norm = b.l2_norm();
            if (j - 2).abs() > 1 {
                assert!(norm < 1e-14, "shell {j} should not see |k|=4");
            } else {
                captured += norm;
            }
        }
        assert!(captured > 0.9 * v.l2_norm());
    }

    #[test]
    fn blocks_plus_low_pass_reconstruct() {
        let grid = TorusGrid::cubic(16).unwrap();
        let ladder = DyadicLadder::new(grid);
        let v = synth::random_bandlimited(grid, 7, 11);
        for j0 in [ladder.j_min(), 0, 2] {
            let mut recon = ladder.low_pass(&v, j0);
            for j in j0..=ladder.j_max() {
                recon.axpy(1.0, &ladder.block(&v, j));
            }
            let err = recon.sub(&v).l2_norm();
            assert!(err <= 1e-12 * v.l2_norm(), "j0={j0}: err {err}");
        }
    }

    #[test]
    fn low_pass_above_ladder_is_identity_and_constant_unchanged() {
        let grid = TorusGrid::cubic(16).unwrap();
        let ladder = DyadicLadder::new(grid);
        let v = synth::random_bandlimited(grid, 7, 3);
        let lp = ladder.low_pass(&v, ladder.j_max() + 1);
        assert!(lp.sub(&v).max_mode() < 1e-15 * v.max_mode());
        let mut c = SpectralField::zeros(grid, 1);
        c.modes_mut(0)[0] = rustfft::num_complex::Complex64::new(2.5, 0.0);
        let lc = ladder.low_pass(&c, 0);
        assert!((lc.modes(0)[0].re - 2.5).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_block_is_empty() {
        let grid = TorusGrid::cubic(8).unwrap();
        let ladder = DyadicLadder::new(grid);
        let v = synth::random_bandlimited(grid, 3, 5);
        assert!(!ladder.shell_resolved(ladder.j_max() + 3));
        let b = ladder.block(&v, ladder.j_max() + 3);
        assert_eq!(b.max_mode(), 0.0);
    }

    #[test]
    fn white_noise_block_energy_within_overlap_factor() {
        let grid = TorusGrid::cubic(16).unwrap();
        let ladder = DyadicLadder::new(grid);
        let mut v = synth::random_bandlimited(grid, 8, 17);
        // drop the zero mode: shells only cover xi != 0
        for c in 0..v.ncomp() {
            v.modes_mut(c)[0] = rustfft::num_complex::Complex64::default();
        }
        let total: f64 = ladder.shells().map(|j| ladder.block(&v, j).l2_norm().powi(2)).sum();
        let full = v.l2_norm().powi(2);
        let ratio = full / total;
        assert!((1.0..=2.0).contains(&ratio), "overlap ratio {ratio}");
    }
}
