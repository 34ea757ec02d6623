//! Characteristics integration: the drag ODE `x' = v, v' = u(t, x) - v`
//! advanced with an exponential-midpoint step (exact on the drag part).

use super::ensemble::ParticleEnsemble;
use crate::field::SpectralField;
use crate::grid::TorusGrid;
use crate::traj::Trajectory;
use rayon::prelude::*;

/// A velocity field samplable at arbitrary time/position; implementations
/// must be cheap per call (the pusher evaluates twice per particle step).
pub trait VelocityField: Sync {
    fn eval(&self, t: f64, x: &[f64; 3]) -> [f64; 3];
}

/// u = 0.
pub struct ZeroField;

impl VelocityField for ZeroField {
    fn eval(&self, _t: f64, _x: &[f64; 3]) -> [f64; 3] {
        [0.0; 3]
    }
}

/// Spatially constant field.
pub struct ConstField(pub [f64; 3]);

impl VelocityField for ConstField {
    fn eval(&self, _t: f64, _x: &[f64; 3]) -> [f64; 3] {
        self.0
    }
}

/// Periodic interpolation of grid samples with the TSC (quadratic B-spline)
/// kernel: the exact adjoint of moment deposition, so the drag exchange
/// between particles and grid is antisymmetric to machine precision.
pub struct GridInterp {
    n: usize,
    dim: usize,
    spacing: f64,
    comps: Vec<Vec<f64>>,
}

impl GridInterp {
    pub fn new(grid: &TorusGrid, comps: Vec<Vec<f64>>) -> Self {
        GridInterp { n: grid.n(), dim: grid.dim(), spacing: grid.spacing(), comps }
    }

    #[inline]
    fn weights(s: f64) -> (i64, [f64; 3]) {
        let i = s.round();
        let d = s - i;
        (
            i as i64,
            [0.5 * (0.5 - d) * (0.5 - d), 0.75 - d * d, 0.5 * (0.5 + d) * (0.5 + d)],
        )
    }

    pub fn eval(&self, x: &[f64; 3]) -> [f64; 3] {
        let n = self.n as i64;
        let mut base = [0i64; 3];
        let mut wts = [[0.0; 3]; 3];
        for a in 0..self.dim {
            let (i0, ws) = Self::weights(x[a] / self.spacing);
            base[a] = i0;
            wts[a] = ws;
        }
        let wrap = |i: i64| -> usize { i.rem_euclid(n) as usize };
        let mut out = [0.0; 3];
        match self.dim {
            3 => {
                for (ci, comp) in self.comps.iter().enumerate() {
                    let mut acc = 0.0;
                    for (di, &wi) in wts[0].iter().enumerate() {
                        let i = wrap(base[0] + di as i64 - 1) * self.n;
                        for (dj, &wj) in wts[1].iter().enumerate() {
                            let j = (i + wrap(base[1] + dj as i64 - 1)) * self.n;
                            let wij = wi * wj;
                            for (dk, &wk) in wts[2].iter().enumerate() {
                                acc += wij * wk * comp[j + wrap(base[2] + dk as i64 - 1)];
                            }
                        }
                    }
                    out[ci] = acc;
                }
            }
            _ => {
                for (ci, comp) in self.comps.iter().enumerate() {
                    let mut acc = 0.0;
                    for (di, &wi) in wts[0].iter().enumerate() {
                        let i = wrap(base[0] + di as i64 - 1) * self.n;
                        for (dj, &wj) in wts[1].iter().enumerate() {
                            acc += wi * wj * comp[i + wrap(base[1] + dj as i64 - 1)];
                        }
                    }
                    out[ci] = acc;
                }
            }
        }
        out
    }
}

/// A spectral field frozen in time, sampled at particles by TSC kernel
/// interpolation of its physical grid values.
pub struct FrozenField {
    interp: GridInterp,
}

impl FrozenField {
    pub fn new(u: &SpectralField) -> Self {
        FrozenField { interp: GridInterp::new(u.grid(), u.to_physical_all()) }
    }
}

impl VelocityField for FrozenField {
    fn eval(&self, _t: f64, x: &[f64; 3]) -> [f64; 3] {
        self.interp.eval(x)
    }
}

/// A snapshot trajectory sampled with linear interpolation in time and
/// TSC kernel interpolation in space.
pub struct TrajectoryField {
    t0: f64,
    dt: f64,
    interps: Vec<GridInterp>,
}

impl TrajectoryField {
    pub fn new(traj: &Trajectory) -> Self {
        let interps = traj
            .fields()
            .iter()
            .map(|f| GridInterp::new(f.grid(), f.to_physical_all()))
            .collect();
        TrajectoryField { t0: traj.t0(), dt: traj.dt(), interps }
    }
}

impl VelocityField for TrajectoryField {
    fn eval(&self, t: f64, x: &[f64; 3]) -> [f64; 3] {
        let m = self.interps.len();
        let s = ((t - self.t0) / self.dt).clamp(0.0, (m - 1) as f64);
        let i = (s.floor() as usize).min(m - 2);
        let th = s - i as f64;
        let a = self.interps[i].eval(x);
        let b = self.interps[i + 1].eval(x);
        let mut out = [0.0; 3];
        for c in 0..3 {
            out[c] = (1.0 - th) * a[c] + th * b[c];
        }
        out
    }
}

/// One exponential-midpoint step of length `dt` starting at `ens.time`:
/// the drag factor `e^{-dt}` is exact, the field is evaluated at a midpoint
/// predictor, and positions use the exact integral of the velocity formula.
///
/// With `u = 0` a step maps `(x, v) -> (x + (1 - e^{-dt}) v, e^{-dt} v)`
/// to machine precision.
pub fn push_particles(ens: &mut ParticleEnsemble, field: &dyn VelocityField, dt: f64) {
    assert!(dt > 0.0, "push step must be positive");
    let t = ens.time;
    let dim = ens.dim;
    let l = ens.box_length;
    let decay = (-dt).exp();
    let em1 = -(-dt).exp_m1(); // 1 - e^{-dt}
    let em1h = -(-0.5 * dt).exp_m1(); // 1 - e^{-dt/2}

    const CHUNK: usize = 4096;
    let xs = &mut ens.x;
    let vs = &mut ens.v;
    xs.par_chunks_mut(CHUNK)
        .zip(vs.par_chunks_mut(CHUNK))
        .for_each(|(xc, vc)| {
            for (x, v) in xc.iter_mut().zip(vc.iter_mut()) {
                // predictor: exact flow frozen at u(t, x)
                let u0 = field.eval(t, x);
                let mut xm = [0.0; 3];
                for a in 0..dim {
                    xm[a] = x[a] + u0[a] * 0.5 * dt + (v[a] - u0[a]) * em1h;
                }
                wrap_into(&mut xm, dim, l);
                // corrector: exact flow frozen at the midpoint value
                let um = field.eval(t + 0.5 * dt, &xm);
                for a in 0..dim {
                    let dv = v[a] - um[a];
                    x[a] += um[a] * dt + dv * em1;
                    v[a] = um[a] + dv * decay;
                }
                wrap_into(x, dim, l);
            }
        });
    ens.time = t + dt;
}

#[inline]
fn wrap_into(x: &mut [f64; 3], dim: usize, l: f64) {
    for xa in x.iter_mut().take(dim) {
        let r = *xa - l * (*xa / l).floor();
        *xa = if r >= l { 0.0 } else { r };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TorusGrid;
    use crate::kinetic::ensemble::ParticleEnsemble;
    use crate::synth;

    fn test_cloud(n: usize, l: f64) -> ParticleEnsemble {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let x: Vec<[f64; 3]> = (0..n)
            .map(|_| [rng.gen_range(0.0..l), rng.gen_range(0.0..l), rng.gen_range(0.0..l)])
            .collect();
        let v: Vec<[f64; 3]> = (0..n)
            .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .collect();
        let w = vec![1.0 / n as f64; n];
        let id = (0..n as u64).collect();
        ParticleEnsemble::from_raw(l, 3, x, v, w, id, 0.0).unwrap()
    }

    #[test]
    fn drag_only_step_is_exact() {
        let mut ens = test_cloud(100, std::f64::consts::TAU);
        let x0 = ens.x.clone();
        let v0 = ens.v.clone();
        let dt = 0.37;
        push_particles(&mut ens, &ZeroField, dt);
        let decay = (-dt).exp();
        let em1 = -(-dt).exp_m1();
        for i in 0..ens.len() {
            for a in 0..3 {
                let expect_v = v0[i][a] * decay;
                assert_eq!(ens.v[i][a], expect_v, "drag velocity must be bit-exact");
                let mut expect_x = x0[i][a] + em1 * v0[i][a];
                let l = ens.box_length;
                expect_x -= l * (expect_x / l).floor();
                if expect_x >= l {
                    expect_x = 0.0;
                }
                assert_eq!(ens.x[i][a], expect_x, "drag position must be bit-exact");
            }
        }
    }

    #[test]
    fn drag_energy_law_over_many_steps() {
        let mut ens = test_cloud(200, 1.0);
        let e0 = ens.moment(2.0);
        let dt = 0.05;
        for _ in 0..40 {
            push_particles(&mut ens, &ZeroField, dt);
        }
        let t = ens.time;
        let expect = (-2.0 * t).exp() * e0;
        assert!(
            (ens.moment(2.0) - expect).abs() <= 1e-12 * e0,
            "{} vs {}",
            ens.moment(2.0),
            expect
        );
    }

    #[test]
    fn constant_field_attracts_velocities() {
        let mut ens = test_cloud(50, 1.0);
        let target = [0.3, -0.2, 0.1];
        for _ in 0..200 {
            push_particles(&mut ens, &ConstField(target), 0.1);
        }
        for v in &ens.v {
            for a in 0..3 {
                assert!((v[a] - target[a]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn pairing_ids_preserved() {
        let mut a = test_cloud(64, 1.0);
        let mut b = a.clone();
        push_particles(&mut a, &ZeroField, 0.2);
        push_particles(&mut b, &ConstField([0.5, 0.0, 0.0]), 0.2);
        assert_eq!(a.id, b.id);
    }

    /// Richardson refinement against a tiny-step reference: the fitted
    /// order of the coupled pusher must be 2.0 +- 0.1.
    #[test]
    fn convergence_order_two_against_refined_reference() {
        let grid = TorusGrid::cubic(16).unwrap();
        let u = crate::ops::leray_project(&synth::random_bandlimited(grid, 2, 11)).scaled(0.5);
        let field = FrozenField::new(&u);
        let t_end = 0.5;

        let run = |dt: f64| -> ParticleEnsemble {
            let mut ens = test_cloud(32, grid.length());
            let steps = (t_end / dt).round() as usize;
            for _ in 0..steps {
                push_particles(&mut ens, &field, dt);
            }
            ens
        };

        // reference at dt/64 relative to the finest tested step
        let reference = run(2.0f64.powi(-9) / 8.0);
        let dts: Vec<f64> = (3..=6).map(|k| 2.0f64.powi(-k)).collect();
        let errs: Vec<f64> = dts
            .iter()
            .map(|&dt| {
                let got = run(dt);
                let mut worst = 0.0f64;
                for i in 0..got.len() {
                    for a in 0..3 {
                        let dx = synth::signed_torus_delta(got.x[i][a], reference.x[i][a], grid.length());
                        worst = worst.max(dx.abs()).max((got.v[i][a] - reference.v[i][a]).abs());
                    }
                }
                worst
            })
            .collect();
        let logdt: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
        let logerr: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let (_, slope, _, _) = crate::util::linear_fit(&logdt, &logerr);
        assert!((slope - 2.0).abs() <= 0.1, "fitted order {slope}, errors {errs:?}");
    }

    #[test]
    fn interpolation_reproduces_smooth_field_closely() {
        let grid = TorusGrid::cubic(32).unwrap();
        let u = synth::taylor_green(grid, 1.0);
        let f = FrozenField::new(&u);
        // compare at random off-grid points against the spectral truth
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = [
                rng.gen_range(0.0..grid.length()),
                rng.gen_range(0.0..grid.length()),
                rng.gen_range(0.0..grid.length()),
            ];
            let approx = f.eval(0.0, &x);
            let exact = [
                x[0].sin() * x[1].cos() * x[2].cos(),
                -x[0].cos() * x[1].sin() * x[2].cos(),
                0.0,
            ];
            for a in 0..3 {
                // the B-spline kernel smooths at O(h^2)
                assert!((approx[a] - exact[a]).abs() < 2e-2, "{approx:?} vs {exact:?}");
            }
        }
    }
}
