//! Seeded synthetic fields and trajectories used by tests, examples and the
//! diagnostics suites.

use crate::field::SpectralField;
use crate::grid::TorusGrid;
use crate::ladder::DyadicLadder;
use crate::ops;
use crate::traj::Trajectory;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random band-limited real scalar field: independent modes with |k| <= kmax.
pub fn random_scalar(grid: TorusGrid, kmax: i64, seed: u64) -> SpectralField {
    random_with_ncomp(grid, 1, kmax, seed)
}

/// Random band-limited real vector field (`dim` components).
pub fn random_bandlimited(grid: TorusGrid, kmax: i64, seed: u64) -> SpectralField {
    random_with_ncomp(grid, grid.dim(), kmax, seed)
}

fn random_with_ncomp(grid: TorusGrid, ncomp: usize, kmax: i64, seed: u64) -> SpectralField {
    let mut rng = rng_for(seed, 0xF1E1D);
    let mut f = SpectralField::zeros(grid, ncomp);
    for c in 0..ncomp {
        for idx in 0..grid.total() {
            let k = grid.kvec(idx);
            let within = (0..grid.dim()).all(|a| k[a].abs() <= kmax);
            if within {
                f.modes_mut(c)[idx] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
    }
    f.hermitian_symmetrize();
    f
}

/// Random band-limited divergence-free vector field with unit L2 norm.
pub fn random_divfree_unit(grid: TorusGrid, kmax: i64, seed: u64) -> SpectralField {
    let mut f = ops::leray_project(&random_bandlimited(grid, kmax, seed));
    for c in 0..f.ncomp() {
        f.modes_mut(c)[0] = Complex64::default();
    }
    let n = f.l2_norm();
    f.scale(1.0 / n);
    f
}

/// Scalar field with isotropic power-law spectrum `|uhat| ~ |xi|^{-alpha}`
/// and random phases; zero mean. `alpha > s + dim/2` gives finite H^s.
pub fn power_law_scalar(grid: TorusGrid, alpha: f64, seed: u64) -> SpectralField {
    let mut rng = rng_for(seed, 0x9A3E);
    let mut f = SpectralField::zeros(grid, 1);
    for idx in 1..grid.total() {
        let k2 = grid.xi_sq(idx);
        if k2 == 0.0 {
            continue;
        }
        let amp = k2.powf(-alpha / 2.0);
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        f.modes_mut(0)[idx] = amp * Complex64::new(phase.cos(), phase.sin());
    }
    f.hermitian_symmetrize();
    f
}

/// Random field spectrally supported in dyadic shell `j` of the ladder.
pub fn random_shell(ladder: &DyadicLadder, ncomp: usize, j: i32, seed: u64) -> SpectralField {
    let grid = *ladder.grid();
    let raw = random_with_ncomp(grid, ncomp, grid.n() as i64 / 2, seed);
    ladder.block(&raw, j)
}

/// Random band-limited wavepacket at dyadic scale `j`: Gaussian envelope of
/// width `~2.5 * 2^{-j}` wavelengths around a random center, random carrier
/// with `|xi| ~ 1.4 * 2^j` and random polarization, filtered to shell `j`.
///
/// This is the family that saturates the frequency-localized L^q -> L^p
/// norm inequality uniformly in `j` (plane waves sit far below the
/// constant). Requires `2^j` large enough for the envelope to fit the box.
pub fn wavepacket_shell(ladder: &DyadicLadder, ncomp: usize, j: i32, seed: u64) -> SpectralField {
    let grid = *ladder.grid();
    let mut rng = rng_for(seed, 0x7ACE ^ (j as u64) << 32);
    let scale = grid.xi_min() * (2.0f64).powi(j);
    let width = 3.5 / scale;
    let carrier = 1.35 * scale;
    let center: [f64; 3] = [
        rng.gen_range(0.0..grid.length()),
        rng.gen_range(0.0..grid.length()),
        rng.gen_range(0.0..grid.length()),
    ];
    let dir = random_unit(&mut rng);
    let phase0 = rng.gen_range(0.0..std::f64::consts::TAU);
    let pol = if ncomp == 1 { [1.0, 0.0, 0.0] } else { random_unit(&mut rng) };
    let mut comps: Vec<Vec<f64>> = vec![vec![0.0; grid.total()]; ncomp];
    for idx in 0..grid.total() {
        let x = grid.point(idx);
        let mut r2 = 0.0;
        let mut proj = 0.0;
        for a in 0..grid.dim() {
            let dxa = signed_torus_delta(x[a], center[a], grid.length());
            r2 += dxa * dxa;
            proj += dxa * dir[a];
        }
        let val = (-r2 / (2.0 * width * width)).exp() * (carrier * proj + phase0).cos();
        for (c, comp) in comps.iter_mut().enumerate() {
            comp[idx] = val * pol[c];
        }
    }
    let f = SpectralField::from_physical(grid, &comps).unwrap();
    ladder.block(&f, j)
}

/// Largest shell whose wavepackets are resolved: envelope at least ~2 grid
/// spacings wide and carrier safely inside the per-axis band.
pub fn wavepacket_shell_hi(ladder: &DyadicLadder) -> i32 {
    let grid = *ladder.grid();
    let mut hi = ladder.j_min();
    for j in ladder.shells() {
        let scale = grid.xi_min() * (2.0f64).powi(j);
        let width_ok = 3.5 / scale >= 1.8 * grid.spacing();
        let carrier_ok = 1.35 * scale <= 0.45 * grid.n() as f64 * grid.xi_min();
        if width_ok && carrier_ok {
            hi = j;
        }
    }
    hi
}

/// Classic three-dimensional Taylor-Green vortex, divergence-free by
/// construction: `A (sin x cos y cos z, -cos x sin y cos z, 0)` scaled to
/// the box.
pub fn taylor_green(grid: TorusGrid, amp: f64) -> SpectralField {
    let dim = grid.dim();
    let two_pi_over_l = grid.xi_min();
    let mut comps: Vec<Vec<f64>> = vec![vec![0.0; grid.total()]; dim];
    for idx in 0..grid.total() {
        let p = grid.point(idx);
        let (x, y) = (p[0] * two_pi_over_l, p[1] * two_pi_over_l);
        let z = if dim == 3 { p[2] * two_pi_over_l } else { 0.0 };
        let cz = if dim == 3 { z.cos() } else { 1.0 };
        comps[0][idx] = amp * x.sin() * y.cos() * cz;
        comps[1][idx] = -amp * x.cos() * y.sin() * cz;
    }
    let mut f = SpectralField::from_physical(grid, &comps).unwrap();
    f.hermitian_symmetrize();
    f
}

/// Parameters of the intermittent wavepacket trajectory used by the
/// well-approximation diagnostics: a smooth base flow plus, per dyadic
/// shell, wavepackets whose amplitude, envelope width and time-activity
/// follow the scalings that saturate the commutator decay `2^{-j/(p-2)}`
/// for fields with a prescribed `B^{-1+3/p}_{p,inf}`-type spectrum.
#[derive(Debug, Clone)]
pub struct BesovTrajectorySpec {
    /// Besov integrability index p (> 3).
    pub p: f64,
    /// Amplitude of the smooth base flow.
    pub base_amplitude: f64,
    /// Overall packet amplitude scale.
    pub packet_amplitude: f64,
    /// Packets per shell.
    pub packets_per_shell: usize,
    /// First packet shell (inclusive).
    pub shell_lo: i32,
    /// Last packet shell (inclusive).
    pub shell_hi: i32,
    /// Number of snapshots on [0, T].
    pub snapshots: usize,
    /// Final time.
    pub t_final: f64,
}

impl Default for BesovTrajectorySpec {
    fn default() -> Self {
        BesovTrajectorySpec {
            p: 6.0,
            base_amplitude: 1.0,
            packet_amplitude: 0.35,
            packets_per_shell: 2,
            shell_lo: 1,
            shell_hi: 5,
            snapshots: 64,
            t_final: 1.0,
        }
    }
}

/// Build the synthetic trajectory described by `spec` on `grid`.
///
/// Shell `l` carries divergence-free wavepackets with carrier frequency
/// `~2^l`, envelope width `d_l = L 2^{-l(3/p-1) 2p/(3(p-2))}` (volume
/// fraction `lambda_l = (d_l/L)^3`), pointwise amplitude
/// `sigma_l = packet_amplitude / sqrt(lambda_l)` and activity on the
/// parabolic window `[0, 2^{-2(l - shell_lo)} T]`.
pub fn besov_trajectory(grid: TorusGrid, spec: &BesovTrajectorySpec, seed: u64) -> Trajectory {
    let p = spec.p;
    let mut rng = rng_for(seed, 0xBE50);
    let base = ops::leray_project(&taylor_green(grid, spec.base_amplitude));

    // per-shell steady packet fields, built once
    let mut shell_fields: Vec<(i32, SpectralField)> = Vec::new();
    for l in spec.shell_lo..=spec.shell_hi {
        let rel = (l - spec.shell_lo) as f64;
        // lambda_l = 2^{l (1-3/p) 2p/(2-p)} (decreasing for p > 3)
        let lam_exp = rel * (1.0 - 3.0 / p) * 2.0 * p / (2.0 - p);
        let lambda = (2.0f64).powf(lam_exp) / 8.0;
        let d = grid.length() * lambda.powf(1.0 / 3.0) / (spec.packets_per_shell as f64).powf(1.0 / 3.0);
        let sigma = spec.packet_amplitude / lambda.sqrt();
        let carrier = grid.xi_min() * (2.0f64).powi(l) * 1.3; // mid-shell |xi|

        let mut comps: Vec<Vec<f64>> = vec![vec![0.0; grid.total()]; grid.dim()];
        for _ in 0..spec.packets_per_shell {
            let center: [f64; 3] = [
                rng.gen_range(0.0..grid.length()),
                rng.gen_range(0.0..grid.length()),
                rng.gen_range(0.0..grid.length()),
            ];
            // random carrier direction and a polarization orthogonal to it
            let dir = random_unit(&mut rng);
            let pol = orthogonal_unit(&mut rng, dir);
            let phase0 = rng.gen_range(0.0..std::f64::consts::TAU);
            for idx in 0..grid.total() {
                let x = grid.point(idx);
                let mut r2 = 0.0;
                let mut proj = 0.0;
                for a in 0..grid.dim() {
                    let dxa = signed_torus_delta(x[a], center[a], grid.length());
                    r2 += dxa * dxa;
                    proj += dxa * dir[a];
                }
                let envelope = (-r2 / (2.0 * d * d)).exp();
                let wave = (carrier * proj + phase0).cos();
                for a in 0..grid.dim() {
                    comps[a][idx] += sigma * envelope * wave * pol[a];
                }
            }
        }
        let mut f = SpectralField::from_physical(grid, &comps).unwrap();
        // keep the packet spectrally inside its shell and solenoidal
        f = ops::leray_project(&f);
        let ladder = DyadicLadder::new(grid);
        let mut shell = ladder.block(&f, l);
        shell.hermitian_symmetrize();
        shell_fields.push((l, shell));
    }

    let m = spec.snapshots;
    let dt = spec.t_final / (m - 1) as f64;
    let mut fields = Vec::with_capacity(m);
    for i in 0..m {
        let t = i as f64 * dt;
        let mut u = base.clone();
        for (l, f) in &shell_fields {
            let rel = (l - spec.shell_lo) as f64;
            let window = spec.t_final * (2.0f64).powf(-2.0 * rel);
            if t <= window {
                u.axpy(1.0, f);
            }
        }
        fields.push(u);
    }
    Trajectory::new(0.0, dt, fields).unwrap()
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            let n = n2.sqrt();
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

fn orthogonal_unit(rng: &mut ChaCha8Rng, dir: [f64; 3]) -> [f64; 3] {
    loop {
        let v = random_unit(rng);
        let dot: f64 = v.iter().zip(&dir).map(|(a, b)| a * b).sum();
        let mut w = [0.0; 3];
        for a in 0..3 {
            w[a] = v[a] - dot * dir[a];
        }
        let n2: f64 = w.iter().map(|x| x * x).sum();
        if n2 > 1e-4 {
            let n = n2.sqrt();
            return [w[0] / n, w[1] / n, w[2] / n];
        }
    }
}

/// Signed minimal-image difference a - b on the circle of length l.
pub fn signed_torus_delta(a: f64, b: f64, l: f64) -> f64 {
    let mut d = (a - b) % l;
    if d > l / 2.0 {
        d -= l;
    } else if d < -l / 2.0 {
        d += l;
    }
    d
}
