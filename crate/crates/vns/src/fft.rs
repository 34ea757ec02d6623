//! Thin FFT layer: cached rustfft plans plus strided axis transforms on
//! flat row-major arrays of any dimension.

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type PlanKey = (usize, bool); // (len, forward)

fn plan_cache() -> &'static Mutex<HashMap<PlanKey, Arc<dyn Fft<f64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<PlanKey, Arc<dyn Fft<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut cache = plan_cache().lock().unwrap();
    cache
        .entry((len, forward))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if forward {
                planner.plan_fft_forward(len)
            } else {
                planner.plan_fft_inverse(len)
            }
        })
        .clone()
}

/// In-place unnormalized DFT along one axis of a row-major `shape` array.
///
/// `forward` uses the e^{-i...} kernel. Lanes are gathered into a scratch
/// buffer, transformed, and scattered back; works for any stride.
pub fn fft_axis(data: &mut [Complex64], shape: &[usize], axis: usize, forward: bool) {
    let n = shape[axis];
    let total: usize = shape.iter().product();
    assert_eq!(data.len(), total);
    if n == 1 {
        return;
    }
    let fft = plan(n, forward);
    let mut lane = vec![Complex64::default(); n];
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    // stride between consecutive elements along `axis`, and the number of
    // lanes; lane start indices enumerate all other-axis combinations.
    let stride: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let block = stride * n;
    for o in 0..outer {
        for s in 0..stride {
            let base = o * block + s;
            for (i, slot) in lane.iter_mut().enumerate() {
                *slot = data[base + i * stride];
            }
            fft.process_with_scratch(&mut lane, &mut scratch);
            for (i, slot) in lane.iter().enumerate() {
                data[base + i * stride] = *slot;
            }
        }
    }
}

/// Full forward transform (physical values -> Fourier coefficients),
/// normalized so that `u(x) = sum_k  uhat_k e^{i xi_k . x}`.
pub fn forward(data: &mut [Complex64], shape: &[usize]) {
    for axis in 0..shape.len() {
        fft_axis(data, shape, axis, true);
    }
    let norm = 1.0 / shape.iter().product::<usize>() as f64;
    for v in data.iter_mut() {
        *v *= norm;
    }
}

/// Full inverse transform (Fourier coefficients -> physical values).
pub fn inverse(data: &mut [Complex64], shape: &[usize]) {
    for axis in 0..shape.len() {
        fft_axis(data, shape, axis, false);
    }
}
