//! Fourier-side representation of real scalar / vector fields on the torus.

use crate::error::VnsError;
use crate::fft;
use crate::grid::TorusGrid;
use crate::util::{stable_sum, stable_sum_by};
use crate::Result;
use rustfft::num_complex::Complex64;

/// A real field on a [`TorusGrid`] stored as complex Fourier coefficients,
/// one flat row-major cube per component (1 component for scalars, `dim`
/// for vector fields).
///
/// Convention: `u(x) = sum_k uhat_k e^{i xi_k . x}`, so the zero mode is the
/// spatial mean and Parseval reads `||u||_2^2 = L^dim sum_k |uhat_k|^2`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: TorusGrid,
    comps: Vec<Vec<Complex64>>,
}

impl SpectralField {
    pub fn zeros(grid: TorusGrid, ncomp: usize) -> Self {
        assert!(ncomp == 1 || ncomp == grid.dim(), "components must be 1 or dim");
        SpectralField {
            grid,
            comps: vec![vec![Complex64::default(); grid.total()]; ncomp],
        }
    }

    /// Build from raw mode data (one cube per component).
    pub fn from_modes(grid: TorusGrid, comps: Vec<Vec<Complex64>>) -> Result<Self> {
        if comps.is_empty() || (comps.len() != 1 && comps.len() != grid.dim()) {
            return Err(VnsError::invalid("components must be 1 or dim"));
        }
        for c in &comps {
            if c.len() != grid.total() {
                return Err(VnsError::invalid("mode array length does not match grid"));
            }
        }
        Ok(SpectralField { grid, comps })
    }

    /// Build from physical samples (row-major, one cube per component).
    pub fn from_physical(grid: TorusGrid, phys: &[Vec<f64>]) -> Result<Self> {
        let mut comps = Vec::with_capacity(phys.len());
        let shape = grid.shape();
        for p in phys {
            if p.len() != grid.total() {
                return Err(VnsError::invalid("sample array length does not match grid"));
            }
            let mut buf: Vec<Complex64> = p.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            fft::forward(&mut buf, &shape);
            comps.push(buf);
        }
        let mut out = SpectralField::from_modes(grid, comps)?;
        out.hermitian_symmetrize();
        Ok(out)
    }

    /// Real single mode `amp * cos(xi_k . x + phase)` in component `comp`.
    pub fn single_mode(grid: TorusGrid, ncomp: usize, comp: usize, k: [i64; 3], amp: f64, phase: f64) -> Self {
        let mut f = SpectralField::zeros(grid, ncomp);
        let mut ijk = [0usize; 3];
        for a in 0..grid.dim() {
            ijk[a] = grid.index_of_k(k[a]);
        }
        let idx = grid.linear(&ijk[..grid.dim()]);
        let cidx = grid.conjugate_index(idx);
        let half = 0.5 * amp * Complex64::new(phase.cos(), phase.sin());
        f.comps[comp][idx] += half;
        f.comps[comp][cidx] += half.conj();
        f
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.comps.len()
    }

    pub fn modes(&self, comp: usize) -> &[Complex64] {
        &self.comps[comp]
    }

    pub fn modes_mut(&mut self, comp: usize) -> &mut [Complex64] {
        &mut self.comps[comp]
    }

    /// Spatial mean of component `comp` (the zero mode).
    pub fn mean(&self, comp: usize) -> f64 {
        self.comps[comp][0].re
    }

    /// Physical samples of one component (inverse FFT, real parts).
    pub fn to_physical(&self, comp: usize) -> Vec<f64> {
        let shape = self.grid.shape();
        let mut buf = self.comps[comp].clone();
        fft::inverse(&mut buf, &shape);
        buf.into_iter().map(|z| z.re).collect()
    }

    /// Physical samples of every component.
    pub fn to_physical_all(&self) -> Vec<Vec<f64>> {
        (0..self.ncomp()).map(|c| self.to_physical(c)).collect()
    }

    /// Enforce `uhat(-k) = conj(uhat(k))` exactly; self-paired modes are
    /// forced real. Applied after every nonlinear physical-space operation.
    pub fn hermitian_symmetrize(&mut self) {
        let grid = self.grid;
        for comp in &mut self.comps {
            for idx in 0..grid.total() {
                let c = grid.conjugate_index(idx);
                if c == idx {
                    comp[idx] = Complex64::new(comp[idx].re, 0.0);
                } else if c > idx {
                    let avg = 0.5 * (comp[idx] + comp[c].conj());
                    comp[idx] = avg;
                    comp[c] = avg.conj();
                }
            }
        }
    }

    /// Largest deviation from Hermitian symmetry, relative to the largest mode.
    pub fn hermitian_defect(&self) -> f64 {
        let grid = self.grid;
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for comp in &self.comps {
            for idx in 0..grid.total() {
                let c = grid.conjugate_index(idx);
                worst = worst.max((comp[idx] - comp[c].conj()).norm());
                scale = scale.max(comp[idx].norm());
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    /// Zero all modes outside the 2/3-rule band.
    pub fn dealias(&mut self) {
        let grid = self.grid;
        for comp in &mut self.comps {
            for idx in 0..grid.total() {
                let k = grid.kvec(idx);
                let keep = (0..grid.dim()).all(|a| grid.dealias_keep(k[a]));
                if !keep {
                    comp[idx] = Complex64::default();
                }
            }
        }
    }

    pub fn scale(&mut self, a: f64) {
        for comp in &mut self.comps {
            for v in comp.iter_mut() {
                *v *= a;
            }
        }
    }

    pub fn scaled(&self, a: f64) -> SpectralField {
        let mut f = self.clone();
        f.scale(a);
        f
    }

    /// self += a * other
    pub fn axpy(&mut self, a: f64, other: &SpectralField) {
        assert_eq!(self.ncomp(), other.ncomp());
        for (dst, src) in self.comps.iter_mut().zip(&other.comps) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += a * s;
            }
        }
    }

    pub fn add(&self, other: &SpectralField) -> SpectralField {
        let mut f = self.clone();
        f.axpy(1.0, other);
        f
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        let mut f = self.clone();
        f.axpy(-1.0, other);
        f
    }

    /// Multiply every mode by `g(|xi|^2)` (a Fourier multiplier).
    pub fn apply_multiplier<F: Fn(f64) -> f64>(&self, g: F) -> SpectralField {
        let grid = self.grid;
        let mut out = self.clone();
        for comp in &mut out.comps {
            for idx in 0..grid.total() {
                comp[idx] *= g(grid.xi_sq(idx));
            }
        }
        out
    }

    /// L2 norm from mode space (exact Parseval).
    pub fn l2_norm(&self) -> f64 {
        let vol = self.grid.volume();
        let mut sum = 0.0;
        for comp in &self.comps {
            sum += stable_sum_by(comp.len(), |i| comp[i].norm_sqr());
        }
        (vol * sum).sqrt()
    }

    /// L2 norm by physical-grid quadrature (should match `l2_norm` to 1e-12).
    pub fn l2_norm_quadrature(&self) -> f64 {
        let cv = self.grid.cell_volume();
        let mut sum = 0.0;
        for c in 0..self.ncomp() {
            let phys = self.to_physical(c);
            sum += stable_sum_by(phys.len(), |i| phys[i] * phys[i]);
        }
        (cv * sum).sqrt()
    }

    /// L^p norm by grid quadrature; `p = inf` is the grid maximum of the
    /// pointwise Euclidean magnitude (a lower bound for the true sup).
    pub fn lp_norm(&self, p: f64) -> f64 {
        let mags = self.magnitude_samples();
        if p.is_infinite() {
            return mags.iter().cloned().fold(0.0, f64::max);
        }
        assert!(p >= 1.0, "p must be in [1, inf]");
        let cv = self.grid.cell_volume();
        if (p - 2.0).abs() < 1e-14 {
            return (cv * stable_sum_by(mags.len(), |i| mags[i] * mags[i])).sqrt();
        }
        (cv * stable_sum_by(mags.len(), |i| mags[i].powf(p))).powf(1.0 / p)
    }

    /// Pointwise Euclidean magnitude samples |u(x)| on the grid.
    pub fn magnitude_samples(&self) -> Vec<f64> {
        let phys = self.to_physical_all();
        let total = self.grid.total();
        (0..total)
            .map(|i| {
                let mut s = 0.0;
                for p in &phys {
                    s += p[i] * p[i];
                }
                s.sqrt()
            })
            .collect()
    }

    /// Homogeneous Sobolev seminorm ||u||_{H^s homog}; drops the zero mode.
    pub fn sobolev_seminorm(&self, s: f64) -> f64 {
        let vol = self.grid.volume();
        let grid = self.grid;
        let mut sum = 0.0;
        for comp in &self.comps {
            let terms: Vec<f64> = (0..comp.len())
                .map(|idx| {
                    let k2 = grid.xi_sq(idx);
                    if k2 == 0.0 {
                        0.0
                    } else {
                        k2.powf(s) * comp[idx].norm_sqr()
                    }
                })
                .collect();
            sum += stable_sum(&terms);
        }
        (vol * sum).sqrt()
    }

    /// H^{-1} seminorm (|xi|^{-1} weight, zero mode dropped).
    pub fn h_minus1_norm(&self) -> f64 {
        self.sobolev_seminorm(-1.0)
    }

    /// Inhomogeneous H^s norm ((1+|xi|^2)^{s} weights).
    pub fn h_norm(&self, s: f64) -> f64 {
        let vol = self.grid.volume();
        let grid = self.grid;
        let mut sum = 0.0;
        for comp in &self.comps {
            let terms: Vec<f64> = (0..comp.len())
                .map(|idx| (1.0 + grid.xi_sq(idx)).powf(s) * comp[idx].norm_sqr())
                .collect();
            sum += stable_sum(&terms);
        }
        (vol * sum).sqrt()
    }

    /// max_k |xi . uhat(k)| / max_k |xi| |uhat(k)| for vector fields; the
    /// divergence-free tag requires this to be <= 1e-10.
    pub fn divergence_ratio(&self) -> f64 {
        assert_eq!(self.ncomp(), self.grid.dim(), "divergence needs a vector field");
        let grid = self.grid;
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for idx in 0..grid.total() {
            let xi = grid.xi(idx);
            let mut dot = Complex64::default();
            let mut mag2 = 0.0;
            for (a, comp) in self.comps.iter().enumerate() {
                dot += Complex64::new(xi[a], 0.0) * comp[idx];
                mag2 += comp[idx].norm_sqr();
            }
            num = num.max(dot.norm());
            den = den.max(grid.xi_sq(idx).sqrt() * mag2.sqrt());
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    pub fn is_divergence_free(&self, tol: f64) -> bool {
        self.divergence_ratio() <= tol
    }

    /// Largest |uhat_k| over all modes and components.
    pub fn max_mode(&self) -> f64 {
        let mut m = 0.0f64;
        for comp in &self.comps {
            for v in comp {
                m = m.max(v.norm());
            }
        }
        m
    }

    /// True if any mode is NaN or infinite.
    pub fn has_nan(&self) -> bool {
        self.comps
            .iter()
            .any(|c| c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()))
    }
}
