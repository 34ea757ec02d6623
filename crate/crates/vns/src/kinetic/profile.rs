//! Analytic families of kinetic initial data: spatial profile x velocity
//! profile, with closed-form (or quadrature) decay functionals.

use crate::error::VnsError;
use crate::Result;

/// Spatial factor, normalized to integrate to 1 over the box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpatialProfile {
    /// Constant 1/L^dim.
    Uniform,
    /// `(1/L^dim) prod_a (1 + amplitude cos(2 pi x_a / L))`, |amplitude| < 1.
    CosineBump { amplitude: f64 },
}

/// Velocity factor, normalized to integrate to 1 over R^dim.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VelocityProfile {
    /// Gaussian of width sigma centered at `center`.
    Maxwellian { sigma: f64, center: [f64; 3] },
    /// `c_q / (1 + |v|^q)`: the algebraically decaying family; its
    /// `(1+|v|^q) f` bound is attained exactly.
    Algebraic { q: f64 },
}

/// Analytic kinetic initial data `f(x, v) = mass s(x) g(v)`, with a declared
/// decay exponent `q_decay > 4` and a velocity-space truncation radius for
/// the particle representation.
#[derive(Debug, Clone)]
pub struct InitialKineticData {
    pub spatial: SpatialProfile,
    pub velocity: VelocityProfile,
    pub mass: f64,
    pub q_decay: f64,
    pub v_max: f64,
    dim: usize,
    box_length: f64,
    velocity_norm: f64,
    nq: f64,
}

impl InitialKineticData {
    pub fn new(
        spatial: SpatialProfile,
        velocity: VelocityProfile,
        mass: f64,
        q_decay: f64,
        v_max: f64,
        dim: usize,
        box_length: f64,
    ) -> Result<Self> {
        if mass < 0.0 {
            return Err(VnsError::invalid("kinetic mass must be nonnegative"));
        }
        if q_decay <= 4.0 {
            return Err(VnsError::invalid(format!(
                "velocity decay exponent must exceed 4, got {q_decay}"
            )));
        }
        if !(v_max > 0.0) {
            return Err(VnsError::invalid("v_max must be positive"));
        }
        if let SpatialProfile::CosineBump { amplitude } = spatial {
            if amplitude.abs() >= 1.0 {
                return Err(VnsError::invalid("cosine bump amplitude must satisfy |a| < 1 (density >= 0)"));
            }
        }
        match velocity {
            VelocityProfile::Maxwellian { sigma, .. } if !(sigma > 0.0) => {
                return Err(VnsError::invalid("Maxwellian width must be positive"));
            }
            VelocityProfile::Algebraic { q } if q <= dim as f64 => {
                return Err(VnsError::invalid("algebraic exponent must exceed dim for integrability"));
            }
            _ => {}
        }
        let mut data = InitialKineticData {
            spatial,
            velocity,
            mass,
            q_decay,
            v_max,
            dim,
            box_length,
            velocity_norm: 1.0,
            nq: 0.0,
        };
        data.velocity_norm = data.compute_velocity_norm();
        data.nq = data.compute_nq();
        Ok(data)
    }

    /// True when the declared decay is below the strict q > 5 regime the
    /// stability theory prefers (still accepted, worth a warning).
    pub fn weak_decay(&self) -> bool {
        self.q_decay <= 5.0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// sup over phase space of `(1 + |v|^q) f(x, v)`.
    pub fn n_q(&self) -> f64 {
        self.nq
    }

    /// Spatial factor s(x), integral 1 over the box.
    pub fn spatial_density(&self, x: &[f64; 3]) -> f64 {
        let vol = self.box_length.powi(self.dim as i32);
        match self.spatial {
            SpatialProfile::Uniform => 1.0 / vol,
            SpatialProfile::CosineBump { amplitude } => {
                let mut p = 1.0 / vol;
                for a in 0..self.dim {
                    p *= 1.0 + amplitude * (std::f64::consts::TAU * x[a] / self.box_length).cos();
                }
                p
            }
        }
    }

    fn spatial_sup(&self) -> f64 {
        let vol = self.box_length.powi(self.dim as i32);
        match self.spatial {
            SpatialProfile::Uniform => 1.0 / vol,
            SpatialProfile::CosineBump { amplitude } => (1.0 + amplitude.abs()).powi(self.dim as i32) / vol,
        }
    }

    /// Unnormalized velocity shape.
    fn velocity_shape(&self, v: &[f64; 3]) -> f64 {
        match self.velocity {
            VelocityProfile::Maxwellian { sigma, center } => {
                let mut r2 = 0.0;
                for a in 0..self.dim {
                    let d = v[a] - center[a];
                    r2 += d * d;
                }
                (-r2 / (2.0 * sigma * sigma)).exp()
            }
            VelocityProfile::Algebraic { q } => {
                let r2: f64 = v[..self.dim].iter().map(|x| x * x).sum();
                1.0 / (1.0 + r2.sqrt().powf(q))
            }
        }
    }

    /// Velocity factor g(v), integral 1 over R^dim.
    pub fn velocity_density(&self, v: &[f64; 3]) -> f64 {
        self.velocity_shape(v) / self.velocity_norm
    }

    /// Full density f(x, v).
    pub fn density(&self, x: &[f64; 3], v: &[f64; 3]) -> f64 {
        self.mass * self.spatial_density(x) * self.velocity_density(v)
    }

    fn compute_velocity_norm(&self) -> f64 {
        match self.velocity {
            VelocityProfile::Maxwellian { sigma, .. } => {
                (std::f64::consts::TAU * sigma * sigma).powf(self.dim as f64 / 2.0)
            }
            VelocityProfile::Algebraic { q } => {
                // int_{R^dim} dv / (1 + |v|^q) by radial quadrature plus the
                // analytic power-law tail
                let d = self.dim as f64;
                let surface = if self.dim == 3 { 2.0 * std::f64::consts::TAU } else { std::f64::consts::TAU };
                let r_cut = 100.0f64.max(10.0 * self.v_max);
                let integrand = |r: f64| r.powf(d - 1.0) / (1.0 + r.powf(q));
                let body = simpson(integrand, 0.0, r_cut, 40_000);
                let tail = r_cut.powf(d - q) / (q - d);
                surface * (body + tail)
            }
        }
    }

    fn compute_nq(&self) -> f64 {
        let q = self.q_decay;
        let vmax_shape = match self.velocity {
            VelocityProfile::Maxwellian { sigma, center } => {
                // sup_r (1+r^q) g along the worst ray through the center
                let c: f64 = center[..self.dim].iter().map(|x| x * x).sum::<f64>().sqrt();
                let h = |r: f64| (1.0 + r.powf(q)) * (-(r - c) * (r - c) / (2.0 * sigma * sigma)).exp();
                let mut best = 0.0f64;
                let r_hi = c + 12.0 * sigma + 1.0;
                for i in 0..=20_000 {
                    best = best.max(h(r_hi * i as f64 / 20_000.0));
                }
                best
            }
            VelocityProfile::Algebraic { q: qa } => {
                if (qa - q).abs() < 1e-12 {
                    1.0
                } else {
                    let h = |r: f64| (1.0 + r.powf(q)) / (1.0 + r.powf(qa));
                    let mut best = 0.0f64;
                    for i in 0..=20_000 {
                        best = best.max(h(1000.0 * i as f64 / 20_000.0));
                    }
                    best
                }
            }
        };
        self.mass * self.spatial_sup() * vmax_shape / self.velocity_norm
    }

    /// Largest violation ratio of `(1+|v|^q) f <= N_q` over a sample lattice
    /// (1.0 means the bound is attained, values above 1 indicate a bug).
    pub fn check_nq_bound(&self, lattice: usize) -> f64 {
        let mut worst = 0.0f64;
        for ix in 0..lattice {
            for iv in 0..lattice {
                for axis in 0..self.dim {
                    let mut x = [0.0; 3];
                    x[axis] = self.box_length * ix as f64 / lattice as f64;
                    let mut v = [0.0; 3];
                    v[axis] = -self.v_max + 2.0 * self.v_max * iv as f64 / (lattice - 1) as f64;
                    let r: f64 = v[..self.dim].iter().map(|y| y * y).sum::<f64>().sqrt();
                    let val = (1.0 + r.powf(self.q_decay)) * self.density(&x, &v);
                    worst = worst.max(val / self.nq.max(f64::MIN_POSITIVE));
                }
            }
        }
        worst
    }

    /// Mass fraction outside the truncation ball |v| <= v_max (relative to
    /// the total mass), by quadrature.
    pub fn tail_fraction(&self) -> f64 {
        let inside = self.velocity_mass_in_ball();
        (1.0 - inside).max(0.0)
    }

    /// int_{|v| <= v_max} g(v) dv.
    fn velocity_mass_in_ball(&self) -> f64 {
        match self.velocity {
            VelocityProfile::Maxwellian { center, .. } => {
                let c: f64 = center[..self.dim].iter().map(|x| x * x).sum::<f64>().sqrt();
                if c == 0.0 {
                    self.radial_ball_integral()
                } else {
                    self.shifted_ball_integral(c)
                }
            }
            VelocityProfile::Algebraic { .. } => self.radial_ball_integral(),
        }
    }

    fn radial_ball_integral(&self) -> f64 {
        let d = self.dim as f64;
        let surface = if self.dim == 3 { 2.0 * std::f64::consts::TAU } else { std::f64::consts::TAU };
        let f = |r: f64| r.powf(d - 1.0) * self.velocity_shape(&[r, 0.0, 0.0]);
        surface * simpson(f, 0.0, self.v_max, 8_000) / self.velocity_norm
    }

    /// Ball integral of a radial-about-center profile, via (r, angle)
    /// quadrature in 3D (2D uses the angular chord directly).
    fn shifted_ball_integral(&self, c: f64) -> f64 {
        let shape_r = |rho: f64| match self.velocity {
            VelocityProfile::Maxwellian { sigma, .. } => (-rho * rho / (2.0 * sigma * sigma)).exp(),
            VelocityProfile::Algebraic { q } => 1.0 / (1.0 + rho.powf(q)),
        };
        // integrate over w = v - center with |w + c e| <= v_max
        let d = self.dim;
        let f = |rho: f64| -> f64 {
            if rho == 0.0 {
                return 0.0;
            }
            // fraction of the sphere of radius rho (around the center) lying
            // inside the ball: cos(theta) >= (c^2 + rho^2 - vmax^2)/(2 c rho)
            let cos_min = ((c * c + rho * rho - self.v_max * self.v_max) / (2.0 * c * rho)).clamp(-1.0, 1.0);
            let frac = if d == 3 {
                (1.0 - cos_min) / 2.0
            } else {
                cos_min.acos() / std::f64::consts::PI
            };
            let surface = if d == 3 {
                2.0 * std::f64::consts::TAU * rho * rho
            } else {
                std::f64::consts::TAU * rho
            };
            surface * frac * shape_r(rho)
        };
        simpson(f, 0.0, c + self.v_max, 8_000) / self.velocity_norm
    }

    /// Global velocity moment `M_k = mass int |v|^k g(v) dv` of the full
    /// (untruncated) measure, by quadrature.
    pub fn moment(&self, k: f64) -> f64 {
        let d = self.dim as f64;
        let surface = if self.dim == 3 { 2.0 * std::f64::consts::TAU } else { std::f64::consts::TAU };
        match self.velocity {
            VelocityProfile::Maxwellian { center, sigma } => {
                let c: f64 = center[..self.dim].iter().map(|x| x * x).sum::<f64>().sqrt();
                let r_hi = c + 14.0 * sigma;
                // average |w + c e|^k over the sphere of radius rho, then radially
                let f = |rho: f64| -> f64 {
                    let shape = (-rho * rho / (2.0 * sigma * sigma)).exp();
                    let ang = angular_moment(rho, c, k, self.dim);
                    let surf = if self.dim == 3 {
                        2.0 * std::f64::consts::TAU * rho * rho
                    } else {
                        std::f64::consts::TAU * rho
                    };
                    surf * ang * shape
                };
                self.mass * simpson(f, 0.0, r_hi, 8_000) / self.velocity_norm
            }
            VelocityProfile::Algebraic { q } => {
                if k + d >= q {
                    return f64::INFINITY;
                }
                let r_cut = 200.0f64.max(20.0 * self.v_max);
                let f = |r: f64| r.powf(k + d - 1.0) / (1.0 + r.powf(q));
                let body = simpson(f, 0.0, r_cut, 60_000);
                let tail = r_cut.powf(k + d - q) / (q - k - d);
                self.mass * surface * (body + tail) / self.velocity_norm
            }
        }
    }
}

/// Mean of |rho e + c e0|^k over directions e on the unit sphere.
fn angular_moment(rho: f64, c: f64, k: f64, dim: usize) -> f64 {
    if c == 0.0 {
        return rho.powf(k);
    }
    let n = 256;
    let mut acc = 0.0;
    let mut wsum = 0.0;
    for i in 0..n {
        // midpoint in mu = cos(theta), weight uniform in mu for 3D; for 2D
        // use uniform angle
        if dim == 3 {
            let mu = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (rho * rho + c * c + 2.0 * rho * c * mu).sqrt();
            acc += r.powf(k);
            wsum += 1.0;
        } else {
            let th = std::f64::consts::TAU * (i as f64 + 0.5) / n as f64;
            let r = (rho * rho + c * c + 2.0 * rho * c * th.cos()).sqrt();
            acc += r.powf(k);
            wsum += 1.0;
        }
    }
    acc / wsum
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 0 { n } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maxwellian(sigma: f64) -> InitialKineticData {
        InitialKineticData::new(
            SpatialProfile::Uniform,
            VelocityProfile::Maxwellian { sigma, center: [0.0; 3] },
            1.0,
            6.0,
            8.0 * sigma,
            3,
            std::f64::consts::TAU,
        )
        .unwrap()
    }

    #[test]
    fn rejects_weak_decay_and_negative_density() {
        let bad = InitialKineticData::new(
            SpatialProfile::Uniform,
            VelocityProfile::Algebraic { q: 6.0 },
            1.0,
            3.0,
            4.0,
            3,
            1.0,
        );
        assert!(bad.is_err());
        let neg = InitialKineticData::new(
            SpatialProfile::CosineBump { amplitude: 1.5 },
            VelocityProfile::Algebraic { q: 6.0 },
            1.0,
            5.5,
            4.0,
            3,
            1.0,
        );
        assert!(neg.is_err());
    }

    #[test]
    fn weak_decay_flagged_between_4_and_5() {
        let d = InitialKineticData::new(
            SpatialProfile::Uniform,
            VelocityProfile::Algebraic { q: 4.5 },
            1.0,
            4.5,
            4.0,
            3,
            1.0,
        )
        .unwrap();
        assert!(d.weak_decay());
        assert!(!maxwellian(0.5).weak_decay());
    }

    #[test]
    fn velocity_density_normalized() {
        let d = maxwellian(0.7);
        // radial quadrature of g over a generous ball should be ~1
        let m0 = d.moment(0.0);
        assert!((m0 - 1.0).abs() < 1e-6, "m0 = {m0}");

        let alg = InitialKineticData::new(
            SpatialProfile::Uniform,
            VelocityProfile::Algebraic { q: 6.0 },
            2.0,
            6.0,
            5.0,
            3,
            1.0,
        )
        .unwrap();
        assert!((alg.moment(0.0) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn maxwellian_second_moment_closed_form() {
        let sigma = 0.6;
        let d = maxwellian(sigma);
        // E|v|^2 = 3 sigma^2 in 3D
        let m2 = d.moment(2.0);
        assert!((m2 - 3.0 * sigma * sigma).abs() < 1e-5, "m2 = {m2}");
        assert!(d.moment(6.0).is_finite());
    }

    #[test]
    fn nq_bound_holds_on_lattice() {
        for data in [
            maxwellian(0.5),
            InitialKineticData::new(
                SpatialProfile::CosineBump { amplitude: 0.4 },
                VelocityProfile::Algebraic { q: 6.0 },
                1.3,
                6.0,
                5.0,
                3,
                2.0,
            )
            .unwrap(),
        ] {
            let worst = data.check_nq_bound(24);
            assert!(worst <= 1.0 + 1e-9, "N_q bound violated: ratio {worst}");
            assert!(worst > 0.2, "N_q should be near-attained, got {worst}");
        }
    }

    #[test]
    fn algebraic_nq_attained_exactly() {
        let d = InitialKineticData::new(
            SpatialProfile::Uniform,
            VelocityProfile::Algebraic { q: 6.0 },
            1.0,
            6.0,
            5.0,
            3,
            2.0,
        )
        .unwrap();
        // (1+|v|^6) f = mass sup_s / norm everywhere
        let expect = 1.0 * (1.0 / 8.0) / d.velocity_norm;
        assert!((d.n_q() - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn tail_fraction_small_for_generous_ball_and_large_for_tight() {
        let d = maxwellian(0.5);
        assert!(d.tail_fraction() < 1e-9);
        let tight = InitialKineticData::new(
            SpatialProfile::Uniform,
            VelocityProfile::Maxwellian { sigma: 1.0, center: [0.0; 3] },
            1.0,
            6.0,
            1.0,
            3,
            1.0,
        )
        .unwrap();
        assert!(tight.tail_fraction() > 0.1);
    }

    #[test]
    fn shifted_ball_integral_consistent() {
        let d = InitialKineticData::new(
            SpatialProfile::Uniform,
            VelocityProfile::Maxwellian { sigma: 0.4, center: [0.8, 0.0, 0.0] },
            1.0,
            6.0,
            6.0,
            3,
            1.0,
        )
        .unwrap();
        assert!(d.tail_fraction() < 1e-8, "tail {}", d.tail_fraction());
    }
}
