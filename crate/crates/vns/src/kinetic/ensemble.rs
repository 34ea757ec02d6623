//! Weighted particle clouds and their deterministic quadrature sampling.

use super::profile::InitialKineticData;
use crate::error::VnsError;
use crate::util::{stable_sum, stable_sum_by};
use crate::Result;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Particles `(x_i, v_i, w_i)` with stable ids for cross-run pairing.
/// Positions live on the torus `[0, L)^dim`; velocities are unbounded.
#[derive(Debug, Clone)]
pub struct ParticleEnsemble {
    pub box_length: f64,
    pub dim: usize,
    pub x: Vec<[f64; 3]>,
    pub v: Vec<[f64; 3]>,
    pub w: Vec<f64>,
    pub id: Vec<u64>,
    pub time: f64,
}

/// Diagnostics from sampling: what the quadrature saw.
#[derive(Debug, Clone)]
pub struct SampleReport {
    /// Particles kept (cells inside the velocity ball).
    pub count: usize,
    /// Spatial cells per axis.
    pub cells_x: usize,
    /// Velocity cells per axis.
    pub cells_v: usize,
    /// Estimated mass fraction outside |v| <= v_max.
    pub tail_fraction: f64,
    /// True when the tail exceeds 1e-6 of the mass.
    pub tail_warning: bool,
    /// |sum raw weights - mass| / mass before normalization.
    pub quadrature_defect: f64,
}

impl ParticleEnsemble {
    pub fn from_raw(
        box_length: f64,
        dim: usize,
        x: Vec<[f64; 3]>,
        v: Vec<[f64; 3]>,
        w: Vec<f64>,
        id: Vec<u64>,
        time: f64,
    ) -> Result<Self> {
        let n = x.len();
        if v.len() != n || w.len() != n || id.len() != n {
            return Err(VnsError::invalid("particle arrays must have equal length"));
        }
        Ok(ParticleEnsemble { box_length, dim, x, v, w, id, time })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Total weight (the represented mass), fixed-order reduction.
    pub fn total_mass(&self) -> f64 {
        stable_sum(&self.w)
    }

    /// sum w_i |v_i|^k, fixed-order reduction.
    pub fn moment(&self, k: f64) -> f64 {
        stable_sum_by(self.len(), |i| {
            let r2: f64 = self.v[i][..self.dim].iter().map(|a| a * a).sum();
            if k == 0.0 {
                self.w[i]
            } else if k == 2.0 {
                self.w[i] * r2
            } else {
                self.w[i] * r2.sqrt().powf(k)
            }
        })
    }

    /// Kinetic energy (1/2) sum w |v|^2.
    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.moment(2.0)
    }

    /// Total momentum sum w v.
    pub fn momentum(&self) -> [f64; 3] {
        let mut out = [0.0; 3];
        for a in 0..self.dim {
            out[a] = stable_sum_by(self.len(), |i| self.w[i] * self.v[i][a]);
        }
        out
    }

    /// Same points with weights drawn from another density (the natural
    /// sampling of a second measure on the shared quadrature points). The
    /// weights are normalized to `other.mass` exactly like `sample_particles`.
    pub fn reweighted(&self, other: &InitialKineticData, cell_volume_phase: f64) -> Result<ParticleEnsemble> {
        if other.dim() != self.dim || (other.box_length() - self.box_length).abs() > 1e-12 {
            return Err(VnsError::invalid("reweighting requires matching box and dim"));
        }
        let raw: Vec<f64> = (0..self.len())
            .map(|i| other.density(&self.x[i], &self.v[i]) * cell_volume_phase)
            .collect();
        let total = stable_sum(&raw);
        if total <= 0.0 {
            return Err(VnsError::invalid("reweighting produced no mass"));
        }
        let scale = other.mass / total;
        let mut out = self.clone();
        out.w = raw.into_iter().map(|r| r * scale).collect();
        Ok(out)
    }

    /// Copy with |w| weights (for moments of a signed difference measure).
    pub fn with_abs_weights(&self) -> ParticleEnsemble {
        let mut out = self.clone();
        for w in &mut out.w {
            *w = w.abs();
        }
        out
    }

    /// Copy with weights `a w1 + b w2` taken from two id-aligned ensembles
    /// on the same points (used for signed difference measures).
    pub fn with_combined_weights(&self, other: &ParticleEnsemble, a: f64, b: f64) -> Result<ParticleEnsemble> {
        if self.id != other.id {
            return Err(VnsError::invalid("weight combination requires identical id sets"));
        }
        let mut out = self.clone();
        for (i, w) in out.w.iter_mut().enumerate() {
            *w = a * self.w[i] + b * other.w[i];
        }
        Ok(out)
    }

    pub fn wrap_positions(&mut self) {
        let l = self.box_length;
        for x in &mut self.x {
            for a in 0..self.dim {
                let r = x[a] - l * (x[a] / l).floor();
                x[a] = if r >= l { 0.0 } else { r };
            }
        }
    }
}

/// Deterministic tensorized quadrature sampling of `data`: a shifted
/// regular lattice of position points (one per spatial cell, global offset
/// drawn from the seed) crossed with a shifted velocity lattice in the cube
/// `[-v_max, v_max]^dim` (points outside the |v| <= v_max ball are
/// dropped). Weights are `f(x_i, v_i) * cell volume`, normalized so the
/// total equals the data's mass exactly.
pub fn sample_particles(
    data: &InitialKineticData,
    n_target: usize,
    seed: u64,
) -> Result<(ParticleEnsemble, SampleReport)> {
    if n_target == 0 {
        return Err(VnsError::invalid("particle count must be at least 1"));
    }
    let dim = data.dim();
    let l = data.box_length();

    // best (cells_x, cells_v) with cells_x^dim * cells_v^dim <= n_target,
    // keeping the two resolutions within a factor two of each other
    let mut best = (1usize, 1usize);
    let mut best_count = 0usize;
    let max_c = (n_target as f64).powf(1.0 / dim as f64).ceil() as usize + 1;
    for cx in 1..=max_c {
        for cv in cx.div_ceil(2)..=(2 * cx) {
            let count = cx.pow(dim as u32).saturating_mul(cv.pow(dim as u32));
            // ties resolved toward spatial resolution (deposition quality)
            let better = count <= n_target
                && (count > best_count || (count == best_count && cx > best.0));
            if better {
                best = (cx, cv);
                best_count = count;
            }
        }
    }
    let (cells_x, cells_v) = best;

    let hx = l / cells_x as f64;
    let hv = 2.0 * data.v_max / cells_v as f64;
    let cell_vol = hx.powi(dim as i32) * hv.powi(dim as i32);

    let n_cells_x = cells_x.pow(dim as u32);
    let n_cells_v = cells_v.pow(dim as u32);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0x5A3C);
    let xoff: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
    let voff: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];

    // velocity lattice, shared by every spatial point (tensor quadrature)
    let mut vel_pts: Vec<([f64; 3], usize)> = Vec::with_capacity(n_cells_v);
    for cv_lin in 0..n_cells_v {
        let mut vi = [0.0; 3];
        let mut rem = cv_lin;
        for a in (0..dim).rev() {
            vi[a] = (rem % cells_v) as f64;
            rem /= cells_v;
        }
        let mut vel = [0.0; 3];
        for a in 0..dim {
            vel[a] = -data.v_max + (vi[a] + voff[a]) * hv;
        }
        let speed2: f64 = vel[..dim].iter().map(|a| a * a).sum();
        if speed2.sqrt() <= data.v_max {
            vel_pts.push((vel, cv_lin));
        }
    }

    let kept = n_cells_x * vel_pts.len();
    let mut x = Vec::with_capacity(kept);
    let mut v = Vec::with_capacity(kept);
    let mut raw = Vec::with_capacity(kept);
    let mut id = Vec::with_capacity(kept);

    for cx_lin in 0..n_cells_x {
        let mut xi = [0.0; 3];
        let mut rem = cx_lin;
        for a in (0..dim).rev() {
            xi[a] = (rem % cells_x) as f64;
            rem /= cells_x;
        }
        let mut pos = [0.0; 3];
        for a in 0..dim {
            pos[a] = (xi[a] + xoff[a]) * hx;
        }
        for (vel, cv_lin) in &vel_pts {
            x.push(pos);
            v.push(*vel);
            raw.push(data.density(&pos, vel) * cell_vol);
            id.push((cx_lin * n_cells_v + cv_lin) as u64);
        }
    }

    let total_raw = stable_sum(&raw);
    if total_raw <= 0.0 {
        return Err(VnsError::invalid("sampled density carries no mass"));
    }
    let scale = data.mass / total_raw;
    let w: Vec<f64> = raw.into_iter().map(|r| r * scale).collect();

    let tail = data.tail_fraction();
    let report = SampleReport {
        count: x.len(),
        cells_x,
        cells_v,
        tail_fraction: tail,
        tail_warning: tail > 1e-6,
        quadrature_defect: (total_raw - data.mass).abs() / data.mass.max(f64::MIN_POSITIVE),
    };
    let ens = ParticleEnsemble::from_raw(l, dim, x, v, w, id, 0.0)?;
    Ok((ens, report))
}

/// Phase-space cell volume used by a `(cells_x, cells_v)` sampling; needed
/// to reweight an ensemble under a second density.
pub fn cell_volume_of(report: &SampleReport, data: &InitialKineticData) -> f64 {
    let dim = data.dim();
    let hx = data.box_length() / report.cells_x as f64;
    let hv = 2.0 * data.v_max / report.cells_v as f64;
    hx.powi(dim as i32) * hv.powi(dim as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetic::profile::{SpatialProfile, VelocityProfile};

    fn uniform_maxwellian(mass: f64, sigma: f64) -> InitialKineticData {
        InitialKineticData::new(
            SpatialProfile::Uniform,
            VelocityProfile::Maxwellian { sigma, center: [0.0; 3] },
            mass,
            6.0,
            6.0 * sigma,
            3,
            std::f64::consts::TAU,
        )
        .unwrap()
    }

    #[test]
    fn mass_is_normalized_exactly() {
        let data = uniform_maxwellian(2.5, 0.5);
        let (ens, report) = sample_particles(&data, 20_000, 7).unwrap();
        assert!(report.count > 5_000, "count {}", report.count);
        let total = ens.total_mass();
        assert!((total - 2.5).abs() <= 1e-10 * 2.5, "total {total}");
        assert!(!report.tail_warning);
        assert!(report.quadrature_defect < 0.5, "defect {}", report.quadrature_defect);
    }

    #[test]
    fn ids_unique_and_deterministic() {
        let data = uniform_maxwellian(1.0, 0.5);
        let (a, _) = sample_particles(&data, 5_000, 42).unwrap();
        let (b, _) = sample_particles(&data, 5_000, 42).unwrap();
        assert_eq!(a.id, b.id);
        assert_eq!(a.x, b.x);
        assert_eq!(a.v, b.v);
        let mut ids = a.id.clone();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), a.id.len(), "ids must be unique");
        let (c, _) = sample_particles(&data, 5_000, 43).unwrap();
        assert_ne!(a.x, c.x, "different seeds should jitter differently");
    }

    #[test]
    fn narrow_maxwellian_velocities_inside_three_sigma() {
        // sigma -> 0 limit config: v_max = 3 sigma
        let sigma = 0.01;
        let data = InitialKineticData::new(
            SpatialProfile::Uniform,
            VelocityProfile::Maxwellian { sigma, center: [0.0; 3] },
            1.0,
            6.0,
            3.0 * sigma,
            3,
            1.0,
        )
        .unwrap();
        let (ens, report) = sample_particles(&data, 4_000, 1).unwrap();
        assert!(report.tail_warning, "3 sigma ball leaves a real tail");
        for v in &ens.v {
            let s: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            assert!(s <= 3.0 * sigma + 1e-15);
        }
    }

    #[test]
    fn reweighting_shares_points_and_normalizes() {
        let d1 = uniform_maxwellian(1.0, 0.5);
        let d2 = uniform_maxwellian(1.3, 0.5);
        let (e1, rep) = sample_particles(&d1, 8_000, 9).unwrap();
        let cv = cell_volume_of(&rep, &d1);
        let e2 = e1.reweighted(&d2, cv).unwrap();
        assert_eq!(e1.x, e2.x);
        assert_eq!(e1.id, e2.id);
        assert!((e2.total_mass() - 1.3).abs() < 1e-10 * 1.3);
        // same shape, same points: weights must be proportional
        for i in 0..e1.len() {
            assert!((e2.w[i] / e1.w[i] - 1.3).abs() < 1e-9);
        }
    }

    #[test]
    fn moments_match_direct_sums() {
        let data = uniform_maxwellian(1.0, 0.7);
        let (ens, _) = sample_particles(&data, 3_000, 5).unwrap();
        let direct: f64 = ens.w.iter().zip(&ens.v).map(|(w, v)| {
            let r2: f64 = v.iter().map(|a| a * a).sum();
            w * r2
        }).sum();
        assert!((ens.moment(2.0) - direct).abs() < 1e-12 * direct.abs().max(1.0));
    }
}
