//! Periodic grid descriptor and wavevector bookkeeping.

use crate::error::VnsError;
use crate::Result;

/// Periodic box `[0, L)^dim` sampled with `n` points per axis.
///
/// Resolved integer wavenumbers per axis are `k in [-n/2, n/2)` in FFT
/// storage order (`0, 1, ..., n/2-1, -n/2, ..., -1`); physical wavevectors
/// are `xi = 2 pi k / L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusGrid {
    n: usize,
    length: f64,
    dim: usize,
}

impl TorusGrid {
    /// `n` must be a power of two, `length` positive; `dim` is 3 for
    /// production runs, 2 is allowed for cheap tests.
    pub fn new(n: usize, length: f64, dim: usize) -> Result<Self> {
        if !n.is_power_of_two() || n < 4 {
            return Err(VnsError::invalid(format!(
                "grid points per axis must be a power of two >= 4, got {n}"
            )));
        }
        if !(length > 0.0) {
            return Err(VnsError::invalid(format!("box length must be positive, got {length}")));
        }
        if dim != 2 && dim != 3 {
            return Err(VnsError::invalid(format!("dim must be 2 or 3, got {dim}")));
        }
        Ok(TorusGrid { n, length, dim })
    }

    /// Standard cube: side 2 pi, three dimensions.
    pub fn cubic(n: usize) -> Result<Self> {
        TorusGrid::new(n, std::f64::consts::TAU, 3)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Grid spacing L/n.
    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Total number of grid points / modes.
    pub fn total(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// Shape array for FFT routines (length `dim`).
    pub fn shape(&self) -> Vec<usize> {
        vec![self.n; self.dim]
    }

    /// Volume of the box.
    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    /// Volume of one grid cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// 2 pi / L, the smallest nonzero wavenumber magnitude.
    pub fn xi_min(&self) -> f64 {
        std::f64::consts::TAU / self.length
    }

    /// Largest resolved |xi| (cube corner).
    pub fn xi_max(&self) -> f64 {
        self.xi_min() * (self.n as f64 / 2.0) * (self.dim as f64).sqrt()
    }

    /// Signed integer wavenumber for storage index `i` along one axis.
    #[inline]
    pub fn k_of_index(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Storage index for signed integer wavenumber `k`.
    #[inline]
    pub fn index_of_k(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Decompose a linear mode index into per-axis storage indices.
    #[inline]
    pub fn decompose(&self, mut idx: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        for a in (0..self.dim).rev() {
            out[a] = idx % self.n;
            idx /= self.n;
        }
        out
    }

    /// Linear index from per-axis storage indices.
    #[inline]
    pub fn linear(&self, ijk: &[usize]) -> usize {
        let mut idx = 0usize;
        for a in 0..self.dim {
            idx = idx * self.n + ijk[a];
        }
        idx
    }

    /// Signed integer wavevector of a linear mode index.
    #[inline]
    pub fn kvec(&self, idx: usize) -> [i64; 3] {
        let ijk = self.decompose(idx);
        let mut k = [0i64; 3];
        for a in 0..self.dim {
            k[a] = self.k_of_index(ijk[a]);
        }
        k
    }

    /// Physical wavevector xi = 2 pi k / L of a linear mode index.
    #[inline]
    pub fn xi(&self, idx: usize) -> [f64; 3] {
        let k = self.kvec(idx);
        let f = self.xi_min();
        [k[0] as f64 * f, k[1] as f64 * f, k[2] as f64 * f]
    }

    /// |xi|^2 of a linear mode index.
    #[inline]
    pub fn xi_sq(&self, idx: usize) -> f64 {
        let xi = self.xi(idx);
        xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
    }

    /// Linear index of the mode with wavevector `-k` (exact on the grid,
    /// where `-n/2` maps to itself).
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let ijk = self.decompose(idx);
        let mut out = [0usize; 3];
        for a in 0..self.dim {
            out[a] = (self.n - ijk[a]) % self.n;
        }
        self.linear(&out[..self.dim])
    }

    /// Physical coordinates of grid point with linear index `idx`.
    #[inline]
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let ijk = self.decompose(idx);
        let h = self.spacing();
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = ijk[a] as f64 * h;
        }
        x
    }

    /// Wrap a coordinate into [0, L).
    #[inline]
    pub fn wrap(&self, x: f64) -> f64 {
        let l = self.length;
        let r = x - l * (x / l).floor();
        if r >= l {
            0.0
        } else {
            r
        }
    }

    /// Minimal-image distance between two coordinates on the circle.
    #[inline]
    pub fn torus_dist_1d(&self, a: f64, b: f64) -> f64 {
        let l = self.length;
        let d = (a - b).rem_euclid(l);
        d.min(l - d)
    }

    /// True when the 2/3-rule dealiasing mask keeps wavenumber `k`.
    #[inline]
    pub fn dealias_keep(&self, k: i64) -> bool {
        3 * k.unsigned_abs() as usize <= self.n
    }

    pub fn same_grid(&self, other: &TorusGrid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(VnsError::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(TorusGrid::new(12, 1.0, 3).is_err());
        assert!(TorusGrid::new(16, -1.0, 3).is_err());
        assert!(TorusGrid::new(16, 1.0, 4).is_err());
    }

    #[test]
    fn wavenumber_layout() {
        let g = TorusGrid::new(8, std::f64::consts::TAU, 3).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.k_of_index(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for k in -4..4 {
            assert_eq!(g.k_of_index(g.index_of_k(k)), k);
        }
        assert!(g.spacing() > 0.0);
    }

    #[test]
    fn conjugate_index_involution() {
        let g = TorusGrid::new(8, 1.0, 3).unwrap();
        for idx in 0..g.total() {
            let c = g.conjugate_index(idx);
            assert_eq!(g.conjugate_index(c), idx);
            let k = g.kvec(idx);
            let kc = g.kvec(c);
            for a in 0..3 {
                // -(-n/2) aliases to -n/2 on the grid
                if k[a] == -4 {
                    assert_eq!(kc[a], -4);
                } else {
                    assert_eq!(kc[a], -k[a]);
                }
            }
        }
    }

    #[test]
    fn torus_distance_symmetric_and_small() {
        let g = TorusGrid::new(8, 2.0, 3).unwrap();
        assert!((g.torus_dist_1d(0.1, 1.9) - 0.2).abs() < 1e-14);
        assert!((g.torus_dist_1d(1.9, 0.1) - 0.2).abs() < 1e-14);
        assert!(g.torus_dist_1d(0.5, 0.5) == 0.0);
    }
}
