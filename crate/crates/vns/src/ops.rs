//! Differential and semigroup operators on spectral fields, plus dealiased
//! nonlinear products.

use crate::error::VnsError;
use crate::field::SpectralField;
use crate::Result;
use rustfft::num_complex::Complex64;

/// Leray projection onto solenoidal fields:
/// `uhat(xi) -= xi (xi . uhat) / |xi|^2`, zero mode passed through.
pub fn leray_project(v: &SpectralField) -> SpectralField {
    let grid = *v.grid();
    assert_eq!(v.ncomp(), grid.dim(), "Leray projection needs a vector field");
    let mut out = v.clone();
    let dim = grid.dim();
    for idx in 0..grid.total() {
        let k2 = grid.xi_sq(idx);
        if k2 == 0.0 {
            continue;
        }
        let xi = grid.xi(idx);
        let mut dot = Complex64::default();
        for a in 0..dim {
            dot += xi[a] * out.modes(a)[idx];
        }
        let factor = dot / k2;
        for a in 0..dim {
            out.modes_mut(a)[idx] -= xi[a] * factor;
        }
    }
    out
}

/// Heat semigroup `e^{t Laplacian}`: each mode multiplied by `exp(-|xi|^2 t)`.
pub fn heat_propagate(v: &SpectralField, t: f64) -> Result<SpectralField> {
    if t < 0.0 {
        return Err(VnsError::invalid(format!("heat time must be nonnegative, got {t}")));
    }
    Ok(v.apply_multiplier(|k2| (-k2 * t).exp()))
}

/// Spectral partial derivative of one component along `axis`.
pub fn derivative(v: &SpectralField, comp: usize, axis: usize) -> SpectralField {
    let grid = *v.grid();
    let mut out = SpectralField::zeros(grid, 1);
    for idx in 0..grid.total() {
        let xi = grid.xi(idx);
        out.modes_mut(0)[idx] = Complex64::new(0.0, xi[axis]) * v.modes(comp)[idx];
    }
    out
}

/// Gradient of a scalar field as a `dim`-component field.
pub fn grad(v: &SpectralField) -> SpectralField {
    let grid = *v.grid();
    assert_eq!(v.ncomp(), 1, "grad acts on scalars");
    let mut out = SpectralField::zeros(grid, grid.dim());
    for a in 0..grid.dim() {
        let d = derivative(v, 0, a);
        out.modes_mut(a).copy_from_slice(d.modes(0));
    }
    out
}

/// Divergence of a vector field as a scalar field.
pub fn divergence(v: &SpectralField) -> SpectralField {
    let grid = *v.grid();
    assert_eq!(v.ncomp(), grid.dim(), "divergence needs a vector field");
    let mut out = SpectralField::zeros(grid, 1);
    for idx in 0..grid.total() {
        let xi = grid.xi(idx);
        let mut s = Complex64::default();
        for a in 0..grid.dim() {
            s += Complex64::new(0.0, xi[a]) * v.modes(a)[idx];
        }
        out.modes_mut(0)[idx] = s;
    }
    out
}

/// L2 norm of grad u summed over components (the dissipation integrand).
pub fn grad_norm_sq(v: &SpectralField) -> f64 {
    // ||grad u||_2^2 = vol * sum |xi|^2 |uhat|^2 over all components
    let grid = *v.grid();
    let vol = grid.volume();
    let mut sum = 0.0;
    for c in 0..v.ncomp() {
        let modes = v.modes(c);
        let terms: Vec<f64> = (0..modes.len())
            .map(|idx| grid.xi_sq(idx) * modes[idx].norm_sqr())
            .collect();
        sum += crate::util::stable_sum(&terms);
    }
    vol * sum
}

/// Pointwise physical-space product of two scalar components, dealiased and
/// re-symmetrized.
pub fn pointwise_product(a: &SpectralField, ca: usize, b: &SpectralField, cb: usize) -> Result<SpectralField> {
    a.grid().same_grid(b.grid())?;
    let grid = *a.grid();
    let pa = a.to_physical(ca);
    let pb = b.to_physical(cb);
    let prod: Vec<f64> = pa.iter().zip(&pb).map(|(&x, &y)| x * y).collect();
    let mut out = SpectralField::from_physical(grid, &[prod])?;
    out.dealias();
    out.hermitian_symmetrize();
    Ok(out)
}

/// Multiply a vector (or scalar) field pointwise by a scalar field:
/// returns a field with the same component count as `v`.
pub fn scalar_times_field(rho: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    rho.grid().same_grid(v.grid())?;
    assert_eq!(rho.ncomp(), 1);
    let grid = *v.grid();
    let prho = rho.to_physical(0);
    let mut comps = Vec::with_capacity(v.ncomp());
    for c in 0..v.ncomp() {
        let pv = v.to_physical(c);
        comps.push(prho.iter().zip(&pv).map(|(&r, &u)| r * u).collect());
    }
    let mut out = SpectralField::from_physical(grid, &comps)?;
    out.dealias();
    out.hermitian_symmetrize();
    Ok(out)
}

/// Advection term `(u . grad) v` via dealiased physical products of `u_a`
/// with the spectral derivatives of `v`.
pub fn advect(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    u.grid().same_grid(v.grid())?;
    let grid = *u.grid();
    let dim = grid.dim();
    assert_eq!(u.ncomp(), dim, "advecting velocity must be a vector field");
    let u_phys: Vec<Vec<f64>> = (0..dim).map(|a| u.to_physical(a)).collect();
    let mut comps: Vec<Vec<f64>> = vec![vec![0.0; grid.total()]; v.ncomp()];
    for c in 0..v.ncomp() {
        for a in 0..dim {
            let dv = derivative(v, c, a).to_physical(0);
            for (slot, (&ua, &dva)) in comps[c].iter_mut().zip(u_phys[a].iter().zip(&dv)) {
                *slot += ua * dva;
            }
        }
    }
    let mut out = SpectralField::from_physical(grid, &comps)?;
    out.dealias();
    out.hermitian_symmetrize();
    Ok(out)
}

/// `div(w (x) v)`: the tensor product formed pointwise in physical space and
/// the divergence taken spectrally. Equals `(w . grad) v` when `div w = 0`,
/// up to dealiasing.
pub fn tensor_divergence(w: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    w.grid().same_grid(v.grid())?;
    let grid = *w.grid();
    let dim = grid.dim();
    assert_eq!(w.ncomp(), dim);
    assert_eq!(v.ncomp(), dim);
    let wp: Vec<Vec<f64>> = (0..dim).map(|a| w.to_physical(a)).collect();
    let vp: Vec<Vec<f64>> = (0..dim).map(|a| v.to_physical(a)).collect();
    // T_{a c} = w_a v_c  ->  (div T)_c = d_a T_{a c}
    let mut out = SpectralField::zeros(grid, dim);
    for c in 0..dim {
        for a in 0..dim {
            let prod: Vec<f64> = wp[a].iter().zip(&vp[c]).map(|(&x, &y)| x * y).collect();
            let mut t = SpectralField::from_physical(grid, &[prod])?;
            t.dealias();
            for idx in 0..grid.total() {
                let xi = grid.xi(idx);
                out.modes_mut(c)[idx] += Complex64::new(0.0, xi[a]) * t.modes(0)[idx];
            }
        }
    }
    out.hermitian_symmetrize();
    Ok(out)
}
