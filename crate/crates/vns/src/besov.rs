//! Besov seminorms and Chemin-Lerner time-space norms evaluated on the
//! dyadic ladder.

use crate::error::VnsError;
use crate::field::SpectralField;
use crate::ladder::DyadicLadder;
use crate::traj::Trajectory;
use crate::util::trapezoid;
use crate::Result;

/// Index triple (s, p, q) of a Besov (semi)norm, optionally with the
/// Chemin-Lerner time exponent r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovIndex {
    /// Regularity.
    pub s: f64,
    /// Spatial integrability, in [1, inf].
    pub p: f64,
    /// Summation index over shells, in [1, inf].
    pub q: f64,
    /// Time integrability for Chemin-Lerner norms, in [1, inf].
    pub r: Option<f64>,
}

impl BesovIndex {
    pub fn new(s: f64, p: f64, q: f64) -> Result<Self> {
        let idx = BesovIndex { s, p, q, r: None };
        idx.validate()?;
        Ok(idx)
    }

    pub fn with_time(s: f64, p: f64, q: f64, r: f64) -> Result<Self> {
        let idx = BesovIndex { s, p, q, r: Some(r) };
        idx.validate()?;
        Ok(idx)
    }

    fn validate(&self) -> Result<()> {
        let ok = |v: f64| v >= 1.0; // includes +inf
        if !ok(self.p) || !ok(self.q) || !self.r.map_or(true, ok) {
            return Err(VnsError::invalid("Besov indices p, q, r must lie in [1, inf]"));
        }
        Ok(())
    }

    /// Kato-type class: time-L^4 Chemin-Lerner space at regularity -1/2+3/p.
    pub fn kato(p: f64) -> Self {
        BesovIndex { s: -0.5 + 3.0 / p, p, q: f64::INFINITY, r: Some(4.0) }
    }
}

/// Homogeneous Besov seminorm `|| 2^{js} ||Delta_j v||_{L^p} ||_{l^q}` over
/// the resolved shells of the ladder.
pub fn besov_seminorm(ladder: &DyadicLadder, v: &SpectralField, idx: &BesovIndex) -> f64 {
    let per_shell: Vec<f64> = ladder
        .shells()
        .map(|j| (2.0f64).powi(j).powf(idx.s) * ladder.block(v, j).lp_norm(idx.p))
        .collect();
    lq_aggregate(&per_shell, idx.q)
}

/// Per-shell values `2^{js} ||Delta_j v||_{L^p}` (diagnostic view of the
/// seminorm before aggregation).
pub fn besov_profile(ladder: &DyadicLadder, v: &SpectralField, idx: &BesovIndex) -> Vec<(i32, f64)> {
    ladder
        .shells()
        .map(|j| (j, (2.0f64).powi(j).powf(idx.s) * ladder.block(v, j).lp_norm(idx.p)))
        .collect()
}

/// Chemin-Lerner norm: per shell, the time-L^r norm (trapezoid quadrature
/// over the uniform snapshots) of `||Delta_j u(t)||_{L^p}`, scaled by
/// `2^{js}` and aggregated in l^q over shells.
pub fn chemin_lerner_norm(ladder: &DyadicLadder, traj: &Trajectory, idx: &BesovIndex) -> Result<f64> {
    let r = idx
        .r
        .ok_or_else(|| VnsError::invalid("Chemin-Lerner norm needs a time index r"))?;
    traj.field(0).grid().same_grid(ladder.grid())?;
    let mut per_shell = Vec::new();
    for j in ladder.shells() {
        let series: Vec<f64> = traj.fields().iter().map(|f| ladder.block(f, j).lp_norm(idx.p)).collect();
        let time_norm = if r.is_infinite() {
            series.iter().cloned().fold(0.0, f64::max)
        } else {
            trapezoid(&series.iter().map(|v| v.powf(r)).collect::<Vec<_>>(), traj.dt()).powf(1.0 / r)
        };
        per_shell.push((2.0f64).powi(j).powf(idx.s) * time_norm);
    }
    Ok(lq_aggregate(&per_shell, idx.q))
}

/// Kato-class norm of a trajectory.
pub fn kato_norm(ladder: &DyadicLadder, traj: &Trajectory, p: f64) -> Result<f64> {
    chemin_lerner_norm(ladder, traj, &BesovIndex::kato(p))
}

/// Heat-flow Besov norm of a trajectory: the `r = inf` component at
/// regularity `-1+3/p` plus the `r = 1` component at `1+3/p` (both with
/// `q = inf`).
pub fn bp_norm(ladder: &DyadicLadder, traj: &Trajectory, p: f64) -> Result<f64> {
    let low = BesovIndex { s: -1.0 + 3.0 / p, p, q: f64::INFINITY, r: Some(f64::INFINITY) };
    let high = BesovIndex { s: 1.0 + 3.0 / p, p, q: f64::INFINITY, r: Some(1.0) };
    Ok(chemin_lerner_norm(ladder, traj, &low)? + chemin_lerner_norm(ladder, traj, &high)?)
}

fn lq_aggregate(values: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        values.iter().cloned().fold(0.0, f64::max)
    } else {
        values.iter().map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TorusGrid;
    use crate::ops;
    use crate::synth;
    use crate::util::rel_err;

    #[test]
    fn zero_field_has_zero_seminorm() {
        let grid = TorusGrid::cubic(16).unwrap();
        let ladder = DyadicLadder::new(grid);
        let z = SpectralField::zeros(grid, 1);
        let idx = BesovIndex::new(0.5, 2.0, f64::INFINITY).unwrap();
        assert_eq!(besov_seminorm(&ladder, &z, &idx), 0.0);
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(BesovIndex::new(0.0, 0.5, 2.0).is_err());
        assert!(BesovIndex::with_time(0.0, 2.0, 2.0, 0.0).is_err());
    }

    /// Single mode at |k| = 2^{j0}: the seminorm must equal the direct
    /// block-and-quadrature evaluation, shell by shell.
    #[test]
    fn single_mode_matches_direct_block_quadrature() {
        let grid = TorusGrid::cubic(32).unwrap();
        let ladder = DyadicLadder::new(grid);
        let amp = 1.7;
        let v = SpectralField::single_mode(grid, 1, 0, [4, 0, 0], amp, 0.0);
        for &(p, q, s) in &[(2.0, f64::INFINITY, -0.5), (4.0, 2.0, 1.0), (f64::INFINITY, f64::INFINITY, 0.0)] {
            let idx = BesovIndex::new(s, p, q).unwrap();
            let got = besov_seminorm(&ladder, &v, &idx);
            // oracle: evaluate phi_j(|xi|) directly and build the filtered
            // cosine on the grid, then quadrature its L^p norm
            let mut per_shell = Vec::new();
            for j in ladder.shells() {
                let w = crate::ladder::phi(4.0 / (2.0f64).powi(j));
                let filtered = SpectralField::single_mode(grid, 1, 0, [4, 0, 0], amp * w, 0.0);
                per_shell.push((2.0f64).powi(j).powf(s) * filtered.lp_norm(p));
            }
            let expect = super::lq_aggregate(&per_shell, q);
            assert!(rel_err(got, expect) < 1e-10, "p={p} q={q}: {got} vs {expect}");
        }
    }

    /// Bernstein: ||Delta_j v||_p <= C 2^{j(3/q - 3/p)} ||Delta_j v||_q with
    /// one constant across shells and random fields. Wavepackets are the
    /// family that saturates the constant uniformly in j; the sweep runs
    /// over the shells whose packets fit inside the box.
    #[test]
    fn bernstein_constant_is_uniform() {
        let grid = TorusGrid::cubic(32).unwrap();
        let ladder = DyadicLadder::new(grid);
        let pairs = [(1.0, 2.0), (2.0, f64::INFINITY), (2.0, 6.0), (1.0, f64::INFINITY)];
        let hi = synth::wavepacket_shell_hi(&ladder);
        for &(q, p) in &pairs {
            let mut ratios = Vec::new();
            for seed in 0..6u64 {
                for js in 1..=hi {
                    let v = synth::wavepacket_shell(&ladder, 1, js, 300 + seed);
                    for j in ladder.shells() {
                        let b = ladder.block(&v, j);
                        if b.l2_norm() < 0.2 * v.l2_norm() {
                            continue;
                        }
                        let nq = b.lp_norm(q);
                        let np = b.lp_norm(p);
                        let factor = (2.0f64).powi(j).powf(3.0 / q - 3.0 / p);
                        ratios.push(np / (factor * nq));
                    }
                }
            }
            let max = ratios.iter().cloned().fold(0.0, f64::max);
            let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(max / min <= 10.0, "q={q} p={p}: spread {}", max / min);
        }
    }

    /// Heat flow of a single mode: the Chemin-Lerner norm has a closed-form
    /// time integral per shell.
    #[test]
    fn chemin_lerner_heat_flow_closed_form() {
        let grid = TorusGrid::cubic(16).unwrap();
        let ladder = DyadicLadder::new(grid);
        let k = [1i64, 0, 0];
        let amp = 2.0;
        let v = SpectralField::single_mode(grid, 1, 0, k, amp, 0.0);
        let t_final = 1.0;
        let m = 129;
        let dt = t_final / (m - 1) as f64;
        let fields: Vec<SpectralField> = (0..m)
            .map(|i| ops::heat_propagate(&v, i as f64 * dt).unwrap())
            .collect();
        let traj = Trajectory::new(0.0, dt, fields).unwrap();

        for &(r, s) in &[(1.0, 0.3), (2.0, -0.4), (4.0, 0.0)] {
            let idx = BesovIndex::with_time(s, 2.0, f64::INFINITY, r).unwrap();
            let got = chemin_lerner_norm(&ladder, &traj, &idx).unwrap();
            // oracle: ||Delta_j u(t)||_2 = phi_j(1) amp e^{-t} sqrt(vol/2),
            // closed-form integral of e^{-r t} over [0, T]
            let lam = 1.0; // |xi|^2
            let mut per_shell = Vec::new();
            for j in ladder.shells() {
                let w = crate::ladder::phi(1.0 / (2.0f64).powi(j));
                let space = w * amp * (grid.volume() / 2.0).sqrt();
                let time = ((1.0 - (-r * lam * t_final).exp()) / (r * lam)).powf(1.0 / r);
                per_shell.push((2.0f64).powi(j).powf(s) * space * time);
            }
            let expect = per_shell.iter().cloned().fold(0.0, f64::max);
            assert!(rel_err(got, expect) < 0.01, "r={r}: {got} vs {expect}");
        }
    }

    #[test]
    fn constant_trajectory_factorizes_and_zero_is_zero() {
        let grid = TorusGrid::cubic(16).unwrap();
        let ladder = DyadicLadder::new(grid);
        let v = synth::random_scalar(grid, 5, 3);
        let t_final = 0.7;
        let traj = Trajectory::constant(v.clone(), t_final, 33).unwrap();
        for &r in &[1.0, 2.0, 4.0] {
            let idx = BesovIndex::with_time(0.2, 3.0, f64::INFINITY, r).unwrap();
            let got = chemin_lerner_norm(&ladder, &traj, &idx).unwrap();
            let space = besov_seminorm(&ladder, &v, &BesovIndex::new(0.2, 3.0, f64::INFINITY).unwrap());
            let expect = t_final.powf(1.0 / r) * space;
            assert!(rel_err(got, expect) < 1e-10, "r={r}");
        }
        let z = Trajectory::constant(SpectralField::zeros(grid, 1), 1.0, 8).unwrap();
        let idx = BesovIndex::with_time(0.0, 2.0, f64::INFINITY, 2.0).unwrap();
        assert_eq!(chemin_lerner_norm(&ladder, &z, &idx).unwrap(), 0.0);
    }

    /// ||v - S_j v||_2 <= C 2^{-sj} ||v||_{H^s} for a power-law spectrum
    /// saturating H^s; the Sobolev norm is the independent oracle.
    #[test]
    fn low_pass_tail_decay_at_sobolev_rate() {
        let grid = TorusGrid::cubic(32).unwrap();
        let ladder = DyadicLadder::new(grid);
        let s = 1.0;
        let v = synth::power_law_scalar(grid, s + 1.5 + 0.05, 8);
        let hs = v.h_norm(s);
        let mut worst = 0.0f64;
        for j in 1..=ladder.j_max() {
            let tail = v.sub(&ladder.low_pass(&v, j)).l2_norm();
            let bound = (2.0f64).powi(-j).powf(s) * hs;
            worst = worst.max(tail / bound);
        }
        // the constant is O(1); anything wildly larger signals a broken mask
        assert!(worst < 4.0, "tail/bound ratio {worst}");
    }
}
