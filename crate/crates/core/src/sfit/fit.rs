use nalgebra::DMatrix;
use num_complex::Complex64;

use super::SSampleSet;
use crate::error::{Error, Result};
use crate::poly::rational::{best_rational, to_f64};
use crate::poly::RatFunc;
use crate::{QPoly, Rational};

#[derive(Clone, Copy, Debug)]
pub struct FitOptions {
    /// Denominator bound for rationalized coefficients.
    pub max_den: u64,
    /// Relative half-width of the window searched when refining `l`.
    pub l_window: f64,
    /// Grid points in that window before the local refinement.
    pub l_scan: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_den: 1_000_000,
            l_window: 2e-3,
            l_scan: 41,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ShapeFit {
    /// Rationalized, reduced `ψ/ψ̂`.
    pub fraction: RatFunc,
    /// Float coefficients before rationalization, ascending, scaled so that
    /// `ψ̂` is monic.
    pub psi_float: Vec<f64>,
    pub psi_hat_float: Vec<f64>,
    pub degree: usize,
    /// Refined edge length.
    pub l: f64,
    /// `max |S_fit − S|` of the rationalized fraction at `l`.
    pub residual: f64,
}

/// Monomial coefficients of `T_j`.
fn chebyshev(j: usize) -> Vec<f64> {
    let (mut a, mut b) = (vec![1.0], vec![0.0, 1.0]);
    if j == 0 {
        return a;
    }
    for _ in 1..j {
        let mut c = vec![0.0; b.len() + 1];
        for (i, x) in b.iter().enumerate() {
            c[i + 1] += 2.0 * x;
        }
        for (i, x) in a.iter().enumerate() {
            c[i] -= x;
        }
        a = b;
        b = c;
    }
    b
}

fn cheb_values(z: f64, n: usize) -> Vec<f64> {
    let mut t = vec![1.0, z];
    while t.len() < n {
        let m = t.len();
        t.push(2.0 * z * t[m - 1] - t[m - 2]);
    }
    t.truncate(n.max(1));
    t
}

/// Basis indices for `ψ̃` (degree `d − 2`) and `ψ̂` (degree `d − 1`); the
/// two have the parities of `d` and `d − 1`.
fn basis(d: usize) -> (Vec<usize>, Vec<usize>) {
    let tilde = (0..=d - 2).filter(|j| (d - j) % 2 == 0).collect();
    let hat = (0..d).filter(|j| (d - 1 - j) % 2 == 0).collect();
    (tilde, hat)
}

#[derive(Clone, Debug)]
struct FloatPair {
    tilde: Vec<f64>,
    hat: Vec<f64>,
}

fn horner(c: &[f64], z: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * z + a)
}

impl FloatPair {
    fn from_basis(d: usize, v: &[f64]) -> Self {
        let (tj, hj) = basis(d);
        let mut tilde = vec![0.0; d - 1];
        let mut hat = vec![0.0; d];
        for (i, &j) in tj.iter().enumerate() {
            for (m, c) in chebyshev(j).iter().enumerate() {
                tilde[m] += v[i] * c;
            }
        }
        for (i, &j) in hj.iter().enumerate() {
            for (m, c) in chebyshev(j).iter().enumerate() {
                hat[m] += v[tj.len() + i] * c;
            }
        }
        let lead = *hat.last().expect("d ≥ 2");
        if lead != 0.0 {
            tilde.iter_mut().for_each(|x| *x /= lead);
            hat.iter_mut().for_each(|x| *x /= lead);
        }
        FloatPair { tilde, hat }
    }

    fn from_exact(tilde: &QPoly, hat: &QPoly) -> Self {
        FloatPair {
            tilde: tilde.coeffs().iter().map(to_f64).collect(),
            hat: hat.coeffs().iter().map(to_f64).collect(),
        }
    }

    /// `(a, b)` with `S = (a − b)/(a + b)`.
    fn parts(&self, k: f64, l: f64) -> (Complex64, Complex64) {
        let x = k * l;
        let z = x.cos();
        (
            Complex64::new(x.sin() * horner(&self.tilde, z), 0.0),
            Complex64::new(0.0, horner(&self.hat, z)),
        )
    }

    fn s(&self, k: f64, l: f64) -> Complex64 {
        let (a, b) = self.parts(k, l);
        (a - b) / (a + b)
    }

    fn residual(&self, samples: &SSampleSet, l: f64) -> f64 {
        samples
            .points()
            .iter()
            .map(|&(k, s)| (self.s(k, l) - s).norm())
            .fold(0.0, |m, r| if r.is_nan() { f64::INFINITY } else { m.max(r) })
    }

    fn mean_square(&self, samples: &SSampleSet, l: f64) -> f64 {
        samples.points().iter().map(|&(k, s)| (self.s(k, l) - s).norm_sqr()).sum::<f64>() / samples.len() as f64
    }

    fn weights(&self, samples: &SSampleSet, l: f64) -> Vec<f64> {
        let mags: Vec<f64> = samples
            .points()
            .iter()
            .map(|&(k, _)| {
                let (a, b) = self.parts(k, l);
                (a + b).norm()
            })
            .collect();
        let mut sorted = mags.clone();
        sorted.sort_by(f64::total_cmp);
        let floor = 1e-3 * sorted[sorted.len() / 2].max(f64::MIN_POSITIVE);
        mags.into_iter().map(|m| 1.0 / m.max(floor)).collect()
    }
}

/// Least-squares null vector of `s·ψ̃(z)(S − 1) + iψ̂(z)(S + 1) = 0`;
/// returns the pair and the smallest singular value relative to the
/// largest.
fn solve(samples: &SSampleSet, l: f64, d: usize, weights: Option<&[f64]>) -> (FloatPair, f64) {
    let (tj, hj) = basis(d);
    let cols = tj.len() + hj.len();
    let n = samples.len();
    let mut a = DMatrix::<f64>::zeros(2 * n, cols);
    for (i, &(k, s)) in samples.points().iter().enumerate() {
        let x = k * l;
        let t = cheb_values(x.cos(), d);
        let w = weights.map_or(1.0, |w| w[i]);
        let sm1 = (s - 1.0) * (x.sin() * w);
        let sp1 = (s + 1.0) * Complex64::new(0.0, w);
        for (c, &j) in tj.iter().enumerate() {
            let v = sm1 * t[j];
            a[(2 * i, c)] = v.re;
            a[(2 * i + 1, c)] = v.im;
        }
        for (c, &j) in hj.iter().enumerate() {
            let v = sp1 * t[j];
            a[(2 * i, tj.len() + c)] = v.re;
            a[(2 * i + 1, tj.len() + c)] = v.im;
        }
    }
    let svd = a.svd(false, true);
    let sv = &svd.singular_values;
    let (imin, smin) = sv.iter().enumerate().fold((0, f64::INFINITY), |b, (i, &x)| if x < b.1 { (i, x) } else { b });
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let vt = svd.v_t.expect("requested");
    let v: Vec<f64> = vt.row(imin).iter().copied().collect();
    (FloatPair::from_basis(d, &v), smin / smax.max(f64::MIN_POSITIVE))
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

fn fit_degree(samples: &SSampleSet, l: f64, d: usize) -> (FloatPair, Vec<f64>) {
    let (first, _) = solve(samples, l, d, None);
    let w = first.weights(samples, l);
    let (second, _) = solve(samples, l, d, Some(&w));
    (second, w)
}

/// Minimizes the relative smallest singular value over
/// `l·(1 ± l_window)`: a grid scan, then golden section around the best
/// grid point.
fn refine_length(samples: &SSampleSet, l: f64, d: usize, opts: &FitOptions) -> f64 {
    let n = opts.l_scan.max(3);
    let step = 2.0 * opts.l_window * l / (n - 1) as f64;
    let lo = l * (1.0 - opts.l_window);
    let sigma = |lt: f64| solve(samples, lt, d, None).1;
    let best = (0..n)
        .map(|i| lo + step * i as f64)
        .map(|lt| (lt, sigma(lt)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map_or(l, |(lt, _)| lt);
    golden_min(sigma, best - step, best + step, 60)
}

fn rationalize(fp: &FloatPair, tol: f64, max_den: u64) -> Option<(QPoly, QPoly)> {
    let conv = |c: &[f64]| -> Option<QPoly> {
        c.iter()
            .map(|&x| best_rational(x, max_den, tol * x.abs().max(1.0)))
            .collect::<Option<Vec<Rational>>>()
            .map(QPoly::new)
    };
    Some((conv(&fp.tilde)?, conv(&fp.hat)?))
}

/// [`fit_shape_fraction_with`] with default options.
pub fn fit_shape_fraction(samples: &SSampleSet, l: f64, degree_cap: usize) -> Result<ShapeFit> {
    fit_shape_fraction_with(samples, l, degree_cap, &FitOptions::default())
}

/// Fits `ψ/ψ̂` for `deg ψ = 2, 3, …, degree_cap`, accepting the smallest
/// degree whose re-synthesized `S` matches the samples within
/// `100·noise + 1e−8`. `l` only needs to be roughly right: each degree
/// re-estimates it by minimizing the fit's smallest singular value. The
/// accepted coefficients are rationalized and the exact fraction is
/// re-verified.
pub fn fit_shape_fraction_with(samples: &SSampleSet, l: f64, degree_cap: usize, opts: &FitOptions) -> Result<ShapeFit> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::FitFailed(format!("edge length {l} is not positive")));
    }
    let thr = 100.0 * samples.noise_level() + 1e-8;
    for d in 2..=degree_cap.max(2) {
        let l_fit = refine_length(samples, l, d, opts);
        let (fp, _) = fit_degree(samples, l_fit, d);
        let res = fp.residual(samples, l_fit);
        if res > thr {
            continue;
        }
        let mut tol = 1e-3;
        while tol >= 1e-11 {
            if let Some((tilde, hat)) = rationalize(&fp, tol, opts.max_den) {
                if !hat.is_zero() && !tilde.is_zero() {
                    let exact = FloatPair::from_exact(&tilde, &hat);
                    let span = opts.l_window * 0.1;
                    let l_exact = golden_min(|lt| exact.mean_square(samples, lt), l_fit * (1.0 - span), l_fit * (1.0 + span), 60);
                    let r = exact.residual(samples, l_exact);
                    if r <= thr {
                        let psi = QPoly::one_minus_z2() * tilde;
                        let fraction = RatFunc::new(psi.clone(), hat)?;
                        let psi_float = (QPoly::one_minus_z2().to_f64() * crate::Poly::new(fp.tilde.clone())).into_coeffs();
                        return Ok(ShapeFit {
                            fraction,
                            psi_float,
                            psi_hat_float: fp.hat.clone(),
                            degree: d,
                            l: l_exact,
                            residual: r,
                        });
                    }
                }
            }
            tol *= 0.1;
        }
        return Err(Error::FitFailed(format!(
            "degree {d} fits with residual {res:.3e} but no rational coefficients with denominator ≤ {} reproduce it; float fit psi_tilde = {:?}, psi_hat = {:?}",
            opts.max_den, fp.tilde, fp.hat
        )));
    }
    Err(Error::FitFailed(format!(
        "residual above {thr:.3e} at every degree up to {degree_cap}"
    )))
}
