//! Uniformly sampled time sequences of spectral fields.

use crate::error::VnsError;
use crate::field::SpectralField;
use crate::Result;

/// Snapshots `u(t0 + i dt)` for `i = 0..len`, all on one grid with one
/// component count.
#[derive(Debug, Clone)]
pub struct Trajectory {
    t0: f64,
    dt: f64,
    fields: Vec<SpectralField>,
}

impl Trajectory {
    pub fn new(t0: f64, dt: f64, fields: Vec<SpectralField>) -> Result<Self> {
        if fields.len() < 2 {
            return Err(VnsError::invalid("a trajectory needs at least 2 snapshots"));
        }
        if !(dt > 0.0) {
            return Err(VnsError::invalid("snapshot spacing must be positive"));
        }
        let g = *fields[0].grid();
        let nc = fields[0].ncomp();
        for f in &fields {
            f.grid().same_grid(&g)?;
            if f.ncomp() != nc {
                return Err(VnsError::invalid("inconsistent component counts in trajectory"));
            }
        }
        Ok(Trajectory { t0, dt, fields })
    }

    /// Constant-in-time trajectory with `n` snapshots on `[0, t_final]`.
    pub fn constant(field: SpectralField, t_final: f64, n: usize) -> Result<Self> {
        let dt = t_final / (n.max(2) - 1) as f64;
        Trajectory::new(0.0, dt, vec![field; n.max(2)])
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t_final(&self) -> f64 {
        self.t0 + self.dt * (self.fields.len() - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + self.dt * i as f64
    }

    pub fn field(&self, i: usize) -> &SpectralField {
        &self.fields[i]
    }

    pub fn fields(&self) -> &[SpectralField] {
        &self.fields
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &SpectralField)> {
        self.fields.iter().enumerate().map(|(i, f)| (self.time(i), f))
    }

    /// Midpoint value between snapshots i and i+1 (linear interpolation).
    pub fn midpoint(&self, i: usize) -> SpectralField {
        let mut f = self.fields[i].clone();
        f.axpy(1.0, &self.fields[i + 1]);
        f.scale(0.5);
        f
    }

    /// Apply `f` snapshot-wise.
    pub fn map<F: Fn(&SpectralField) -> SpectralField>(&self, f: F) -> Trajectory {
        Trajectory {
            t0: self.t0,
            dt: self.dt,
            fields: self.fields.iter().map(f).collect(),
        }
    }

    /// self(t) += a * other(t), snapshot-wise.
    pub fn axpy(&mut self, a: f64, other: &Trajectory) {
        assert_eq!(self.len(), other.len());
        for (dst, src) in self.fields.iter_mut().zip(&other.fields) {
            dst.axpy(a, src);
        }
    }

    pub fn sub(&self, other: &Trajectory) -> Trajectory {
        let mut t = self.clone();
        t.axpy(-1.0, other);
        t
    }

    /// Dump per-snapshot scalar series obtained from `f`.
    pub fn series<F: Fn(&SpectralField) -> f64>(&self, f: F) -> Vec<f64> {
        self.fields.iter().map(f).collect()
    }
}
