//! Triangular-shaped-cloud deposition of particle moments onto the grid.

use super::ensemble::ParticleEnsemble;
use crate::field::SpectralField;
use crate::grid::TorusGrid;
use crate::util::stable_sum_by;
use crate::Result;
use rayon::prelude::*;

/// Deposited velocity moments of an ensemble: the macroscopic density
/// (zeroth moment), the current (vector first moment), the scalar |v|
/// moment and the scalar |v|^2 moment, all as spectral fields.
#[derive(Debug, Clone)]
pub struct MomentFields {
    pub rho: SpectralField,
    pub current: SpectralField,
    pub m1: SpectralField,
    pub m2: SpectralField,
}

/// Sup / integral norms of the deposited moments (grid max and quadrature
/// L1; the L1 cap Linf entries take the max of the two).
#[derive(Debug, Clone, Copy)]
pub struct MomentNorms {
    pub m0_l1: f64,
    pub m0_linf: f64,
    pub m1_l1: f64,
    pub m1_linf: f64,
    pub m2_linf: f64,
}

impl MomentNorms {
    pub fn m0_l1_cap_linf(&self) -> f64 {
        self.m0_l1.max(self.m0_linf)
    }

    pub fn m1_l1_cap_linf(&self) -> f64 {
        self.m1_l1.max(self.m1_linf)
    }
}

#[inline]
fn tsc_axis(s: f64) -> (i64, [f64; 3]) {
    // nearest node and the three TSC weights for nodes i-1, i, i+1
    let i = s.round();
    let d = s - i;
    (
        i as i64,
        [0.5 * (0.5 - d) * (0.5 - d), 0.75 - d * d, 0.5 * (0.5 + d) * (0.5 + d)],
    )
}

struct Buffers {
    rho: Vec<f64>,
    jx: Vec<f64>,
    jy: Vec<f64>,
    jz: Vec<f64>,
    m1: Vec<f64>,
    m2: Vec<f64>,
}

impl Buffers {
    fn new(total: usize) -> Self {
        Buffers {
            rho: vec![0.0; total],
            jx: vec![0.0; total],
            jy: vec![0.0; total],
            jz: vec![0.0; total],
            m1: vec![0.0; total],
            m2: vec![0.0; total],
        }
    }
}

/// Deposit `w`, `w v`, `w |v|` and `w |v|^2` with the TSC (quadratic
/// spline) kernel, divided by the cell volume.
///
/// Particles are processed in a fixed number of index chunks whose partial
/// grids are merged in chunk order, so the result is bit-identical for any
/// worker count.
pub fn deposit_moments(ens: &ParticleEnsemble, grid: &TorusGrid) -> Result<MomentFields> {
    if (grid.length() - ens.box_length).abs() > 1e-12 * grid.length() || grid.dim() != ens.dim {
        return Err(crate::error::VnsError::GridMismatch(
            "ensemble box does not match deposition grid".into(),
        ));
    }
    let n = grid.n();
    let dim = grid.dim();
    let total = grid.total();
    let h = grid.spacing();

    const NCHUNKS: usize = 64;
    let len = ens.len();
    let chunk_size = len.div_ceil(NCHUNKS).max(1);

    let partials: Vec<Buffers> = (0..len.div_ceil(chunk_size).max(1))
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk_size;
            let hi = ((c + 1) * chunk_size).min(len);
            let mut buf = Buffers::new(total);
            for i in lo..hi {
                let w = ens.w[i];
                let v = ens.v[i];
                let speed2: f64 = v[..dim].iter().map(|a| a * a).sum();
                let speed = speed2.sqrt();
                let mut node = [0i64; 3];
                let mut wts = [[0.0; 3]; 3];
                for a in 0..dim {
                    let (i0, ws) = tsc_axis(ens.x[i][a] / h);
                    node[a] = i0;
                    wts[a] = ws;
                }
                let wrap = |k: i64| -> usize { k.rem_euclid(n as i64) as usize };
                if dim == 3 {
                    for (d0, &w0) in wts[0].iter().enumerate() {
                        let i0 = wrap(node[0] + d0 as i64 - 1) * n;
                        for (d1, &w1) in wts[1].iter().enumerate() {
                            let i01 = (i0 + wrap(node[1] + d1 as i64 - 1)) * n;
                            let w01 = w0 * w1;
                            for (d2, &w2) in wts[2].iter().enumerate() {
                                let idx = i01 + wrap(node[2] + d2 as i64 - 1);
                                let ww = w * w01 * w2;
                                buf.rho[idx] += ww;
                                buf.jx[idx] += ww * v[0];
                                buf.jy[idx] += ww * v[1];
                                buf.jz[idx] += ww * v[2];
                                buf.m1[idx] += ww * speed;
                                buf.m2[idx] += ww * speed2;
                            }
                        }
                    }
                } else {
                    for (d0, &w0) in wts[0].iter().enumerate() {
                        let i0 = wrap(node[0] + d0 as i64 - 1) * n;
                        for (d1, &w1) in wts[1].iter().enumerate() {
                            let idx = i0 + wrap(node[1] + d1 as i64 - 1);
                            let ww = w * w0 * w1;
                            buf.rho[idx] += ww;
                            buf.jx[idx] += ww * v[0];
                            buf.jy[idx] += ww * v[1];
                            buf.m1[idx] += ww * speed;
                            buf.m2[idx] += ww * speed2;
                        }
                    }
                }
            }
            buf
        })
        .collect();

    let mut acc = Buffers::new(total);
    for buf in &partials {
        for idx in 0..total {
            acc.rho[idx] += buf.rho[idx];
            acc.jx[idx] += buf.jx[idx];
            acc.jy[idx] += buf.jy[idx];
            acc.jz[idx] += buf.jz[idx];
            acc.m1[idx] += buf.m1[idx];
            acc.m2[idx] += buf.m2[idx];
        }
    }

    let cv = grid.cell_volume();
    let scale = 1.0 / cv;
    for arr in [&mut acc.rho, &mut acc.jx, &mut acc.jy, &mut acc.jz, &mut acc.m1, &mut acc.m2] {
        for x in arr.iter_mut() {
            *x *= scale;
        }
    }

    let rho = SpectralField::from_physical(*grid, &[acc.rho])?;
    let current = if dim == 3 {
        SpectralField::from_physical(*grid, &[acc.jx, acc.jy, acc.jz])?
    } else {
        SpectralField::from_physical(*grid, &[acc.jx, acc.jy])?
    };
    let m1 = SpectralField::from_physical(*grid, &[acc.m1])?;
    let m2 = SpectralField::from_physical(*grid, &[acc.m2])?;
    Ok(MomentFields { rho, current, m1, m2 })
}

/// Grid max and quadrature L1 norms of the deposited moments.
pub fn sup_moment_norms(m: &MomentFields) -> MomentNorms {
    let cv = m.rho.grid().cell_volume();
    let rho = m.rho.to_physical(0);
    let m1 = m.m1.to_physical(0);
    let m2 = m.m2.to_physical(0);
    MomentNorms {
        m0_l1: cv * stable_sum_by(rho.len(), |i| rho[i].abs()),
        m0_linf: rho.iter().cloned().fold(0.0, |a, b| a.max(b.abs())),
        m1_l1: cv * stable_sum_by(m1.len(), |i| m1[i].abs()),
        m1_linf: m1.iter().cloned().fold(0.0, |a, b| a.max(b.abs())),
        m2_linf: m2.iter().cloned().fold(0.0, |a, b| a.max(b.abs())),
    }
}
