//! Small numeric helpers shared across modules.

/// Deterministic sum of a float slice: fixed-size chunked pairwise summation.
///
/// The reduction order depends only on the slice length, never on worker
/// count, so results are bit-identical across thread configurations while
/// keeping the rounding error close to pairwise-summation quality.
pub fn stable_sum(xs: &[f64]) -> f64 {
    const CHUNK: usize = 256;
    if xs.len() <= CHUNK {
        return xs.iter().sum();
    }
    let partial: Vec<f64> = xs.chunks(CHUNK).map(|c| c.iter().sum()).collect();
    stable_sum(&partial)
}

/// Deterministic sum of `f(i)` for `i in 0..n` with the same fixed chunking.
pub fn stable_sum_by<F: Fn(usize) -> f64>(n: usize, f: F) -> f64 {
    const CHUNK: usize = 256;
    if n <= CHUNK {
        return (0..n).map(f).sum();
    }
    let nchunks = n.div_ceil(CHUNK);
    let partial: Vec<f64> = (0..nchunks)
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(n);
            (lo..hi).map(&f).sum()
        })
        .collect();
    stable_sum(&partial)
}

/// C-infinity step: 0 for t <= 0, 1 for t >= 1, strictly increasing between.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// Least-squares line fit `y ~ a + b x`. Returns `(a, b, residual_rms, b_stderr)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    assert!(x.len() >= 2, "need at least two points for a line fit");
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|&v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(&u, &v)| (u - mx) * (v - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(&u, &v)| {
            let r = v - (a + b * u);
            r * r
        })
        .sum();
    let rms = (ss_res / n).sqrt();
    let dof = (x.len().max(3) - 2) as f64;
    let stderr = (ss_res / dof / sxx).sqrt();
    (a, b, rms, stderr)
}

/// Relative gap |a-b| / max(|a|, |b|, floor).
pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    (a - b).abs() / scale
}

/// Trapezoid-rule integral of uniformly spaced samples with spacing `dt`.
pub fn trapezoid(samples: &[f64], dt: f64) -> f64 {
    if samples.len() < 2 {
        return 0.0;
    }
    let inner: f64 = samples[1..samples.len() - 1].iter().sum();
    dt * (0.5 * (samples[0] + samples[samples.len() - 1]) + inner)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_sum_matches_naive_on_small() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((stable_sum(&xs) - naive).abs() < 1e-9);
    }

    #[test]
    fn stable_sum_is_length_deterministic() {
        let xs: Vec<f64> = (0..100_000).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let a = stable_sum(&xs);
        let b = stable_sum(&xs);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn smooth_step_endpoints_and_monotone() {
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(2.0), 1.0);
        let mut prev = 0.0;
        for i in 0..=100 {
            let v = smooth_step(i as f64 / 100.0);
            assert!(v >= prev);
            prev = v;
        }
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn linear_fit_recovers_exact_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| 3.0 - 2.0 * v).collect();
        let (a, b, rms, _) = linear_fit(&x, &y);
        assert!((a - 3.0).abs() < 1e-12);
        assert!((b + 2.0).abs() < 1e-12);
        assert!(rms < 1e-12);
    }

    #[test]
    fn trapezoid_linear_exact() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1 * 2.0).collect();
        assert!((trapezoid(&xs, 0.1) - 1.0).abs() < 1e-14);
    }
}
