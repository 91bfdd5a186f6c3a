use std::f64::consts::PI;

use num_complex::Complex64;

use super::SSampleSet;
use crate::error::{Error, Result};

/// Six-point Lagrange interpolation of uniformly spaced values at
/// fractional index `t`.
fn interp(vals: &[Complex64], t: f64) -> Option<Complex64> {
    let base = t.floor() as isize - 2;
    if base < 0 || base as usize + 5 >= vals.len() {
        return None;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..6 {
        let xj = (base + j) as f64;
        let mut w = 1.0;
        for m in 0..6 {
            if m != j {
                let xm = (base + m) as f64;
                w *= (t - xm) / (xj - xm);
            }
        }
        acc += vals[(base + j) as usize] * w;
    }
    Some(acc)
}

/// Mean `|S(k + τ) − S(k)|²` for a shift of `tau` grid steps.
fn mismatch(vals: &[Complex64], tau: f64) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for (i, v) in vals.iter().enumerate() {
        if let Some(s) = interp(vals, i as f64 + tau) {
            sum += (s - v).norm_sqr();
            n += 1;
        }
    }
    if n == 0 {
        f64::INFINITY
    } else {
        sum / n as f64
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Edge length `l = π/P` from the period `P` of `S` in `√λ`. Candidate
/// periods are the local maxima of the shift autocorrelation, smallest
/// first; each is refined by minimizing the interpolated shift mismatch
/// and accepted once that mismatch is small against the variance of `S`.
/// The result is accurate to a few parts in 10⁴ on typical grids, which
/// is what the fit's own refinement of `l` needs.
pub fn estimate_edge_length(samples: &SSampleSet) -> Result<f64> {
    let pts = samples.points();
    let n = pts.len();
    if n < 16 {
        return Err(Error::InvalidSamples("need at least 16 samples".into()));
    }
    let h = (pts[n - 1].0 - pts[0].0) / (n - 1) as f64;
    let uniform = pts
        .iter()
        .enumerate()
        .all(|(i, (k, _))| (k - pts[0].0 - i as f64 * h).abs() <= 1e-6 * h);
    if !uniform {
        return Err(Error::InvalidSamples("sqrt_lambda grid must be uniform".into()));
    }
    let vals: Vec<Complex64> = pts.iter().map(|p| p.1).collect();
    let mean = vals.iter().sum::<Complex64>() / n as f64;
    let var = vals.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / n as f64;
    if var < 1e-10 {
        return Err(Error::PeriodNotDetected);
    }
    let max_lag = n / 2;
    let corr: Vec<f64> = (0..=max_lag)
        .map(|j| {
            let m = n - j;
            (0..m).map(|i| (vals[i + j] * vals[i].conj()).re).sum::<f64>() / m as f64
        })
        .collect();
    let c0 = corr[0];
    let candidates = (2..max_lag).filter(|&j| corr[j] >= corr[j - 1] && corr[j] >= corr[j + 1] && corr[j] > 0.5 * c0);
    for j in candidates.take(64) {
        let tau = golden_min(|t| mismatch(&vals, t), j as f64 - 1.0, j as f64 + 1.0, 80);
        if mismatch(&vals, tau) < 0.02 * var {
            // Interpolation error pulls the minimum towards whole steps; a
            // long multiple of the period dilutes that bias.
            let m = ((0.9 * n as f64) / tau).floor().max(1.0);
            let long = golden_min(|t| mismatch(&vals, t), m * tau - 2.0, m * tau + 2.0, 80);
            return Ok(PI * m / (long * h));
        }
    }
    Err(Error::PeriodNotDetected)
}
