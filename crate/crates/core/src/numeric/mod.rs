//! Sturm–Liouville numerics on a single edge, the characteristic functions
//! of a tree with a symmetric edge potential, and complex zero finding.

mod asymptotics;
mod potential;
mod roots;
mod zeros;

pub use asymptotics::{verify_asymptotics, window_residuals, AsymptoticsReport, WindowResidual};
pub use potential::{phi_d_with_potential, phi_n_with_potential, PotentialJost};
pub use roots::{poly_roots, squarefree_decomposition};
pub use zeros::{
    find_jost_zeros, find_jost_zeros_with_potential, find_zeros, jost_laurent, Rect, Zero,
    ZeroOptions, ZeroReport,
};

use num_complex::Complex;
use num_traits::Zero as _;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Real potential on `[0, l]` given by uniformly spaced samples, linearly
/// interpolated between them.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential<F> {
    samples: Vec<F>,
    l: F,
}

impl<F: Real> Potential<F> {
    pub fn new(samples: Vec<F>, l: F) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidPotential("need at least two samples".into()));
        }
        if !(l > F::zero()) || !l.is_finite() {
            return Err(Error::InvalidPotential("edge length must be positive".into()));
        }
        if samples.iter().any(|q| !q.is_finite()) {
            return Err(Error::InvalidPotential("non-finite sample".into()));
        }
        Ok(Potential { samples, l })
    }

    pub fn zero(l: F) -> Result<Self> {
        Self::new(vec![F::zero(); 2], l)
    }

    pub fn constant(value: F, l: F) -> Result<Self> {
        Self::new(vec![value; 2], l)
    }

    /// Samples `f` at `n` equally spaced points including both ends.
    pub fn from_fn(f: impl Fn(F) -> F, l: F, n: usize) -> Result<Self> {
        let n = n.max(2);
        let h = l / F::of((n - 1) as f64);
        Self::new((0..n).map(|i| f(h * F::of(i as f64))).collect(), l)
    }

    pub fn samples(&self) -> &[F] {
        &self.samples
    }

    pub fn l(&self) -> F {
        self.l
    }

    /// Number of sample intervals.
    pub fn intervals(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn eval(&self, x: F) -> F {
        let n = self.intervals();
        let t = (x / self.l * F::of(n as f64)).max(F::zero()).min(F::of(n as f64));
        let i = t.floor().to_usize().unwrap_or(0).min(n - 1);
        let frac = t - F::of(i as f64);
        self.samples[i] + (self.samples[i + 1] - self.samples[i]) * frac
    }

    /// `max |q(l − x) − q(x)|` over the samples.
    pub fn max_asymmetry(&self) -> F {
        let n = self.samples.len();
        (0..n / 2)
            .map(|i| (self.samples[i] - self.samples[n - 1 - i]).abs())
            .fold(F::zero(), F::max)
    }

    /// Errors unless `q(l − x) = q(x)` within `tol·max(1, max|q|)`.
    pub fn require_symmetric(&self, tol: F) -> Result<()> {
        let scale = self.samples.iter().fold(F::one(), |m, q| m.max(q.abs()));
        let dev = self.max_asymmetry();
        if dev > tol * scale {
            return Err(Error::AsymmetricPotential(dev.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|q| q.is_zero())
    }
}

/// Values at `x = l` of the solutions `s`, `c` of `−y″ + qy = λy` with
/// `s(0) = c′(0) = 0`, `s′(0) = c(0) = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FundamentalPair<F> {
    pub s_val: Complex<F>,
    pub s_deriv: Complex<F>,
    pub c_val: Complex<F>,
    pub c_deriv: Complex<F>,
}

impl<F: Real> FundamentalPair<F> {
    /// `s′c − sc′`; identically one.
    pub fn wronskian(&self) -> Complex<F> {
        self.s_deriv * self.c_val - self.s_val * self.c_deriv
    }

    /// Closed form for `q ≡ 0`.
    pub fn free(k: Complex<F>, l: F) -> Self {
        let x = k * l;
        let (s, c) = (x.sin(), x.cos());
        let s_val = if k.norm() < F::of(1e-12) {
            Complex::new(l, F::zero())
        } else {
            s / k
        };
        FundamentalPair {
            s_val,
            s_deriv: c,
            c_val: c,
            c_deriv: -k * s,
        }
    }

    fn distance(&self, other: &Self, k: Complex<F>) -> F {
        let kappa = k.norm().max(F::one());
        let a = [self.s_val * kappa, self.s_deriv, self.c_val, self.c_deriv / kappa];
        let b = [other.s_val * kappa, other.s_deriv, other.c_val, other.c_deriv / kappa];
        let diff = a.iter().zip(&b).map(|(x, y)| (*x - *y).norm()).fold(F::zero(), F::max);
        let size = b.iter().map(|y| y.norm()).fold(F::zero(), F::max);
        diff / size.max(F::min_positive_value())
    }
}

/// Classical RK4 with `steps` equal steps; `steps` should be a multiple of
/// the potential's sample intervals so that the kinks of the interpolant
/// fall on step boundaries.
pub fn integrate_sc_fixed<F: Real>(
    q: &Potential<F>,
    k: Complex<F>,
    steps: usize,
) -> Result<FundamentalPair<F>> {
    let steps = steps.max(1);
    let lam = k * k;
    let h = q.l() / F::of(steps as f64);
    let half = h / F::of(2.0);
    let sixth = h / F::of(6.0);
    // y = (y, y′); y′′ = (q − λ) y
    let rhs = |x: F, y: [Complex<F>; 2]| -> [Complex<F>; 2] {
        [y[1], (Complex::new(q.eval(x), F::zero()) - lam) * y[0]]
    };
    let one = Complex::new(F::one(), F::zero());
    let zero = Complex::zero();
    let mut s = [zero, one];
    let mut c = [one, zero];
    for j in 0..steps {
        let x = h * F::of(j as f64);
        for y in [&mut s, &mut c] {
            let k1 = rhs(x, *y);
            let k2 = rhs(x + half, [y[0] + k1[0] * half, y[1] + k1[1] * half]);
            let k3 = rhs(x + half, [y[0] + k2[0] * half, y[1] + k2[1] * half]);
            let k4 = rhs(x + h, [y[0] + k3[0] * h, y[1] + k3[1] * h]);
            for i in 0..2 {
                y[i] = y[i] + (k1[i] + (k2[i] + k3[i]) * F::of(2.0) + k4[i]) * sixth;
            }
        }
    }
    let pair = FundamentalPair {
        s_val: s[0],
        s_deriv: s[1],
        c_val: c[0],
        c_deriv: c[1],
    };
    let finite = [pair.s_val, pair.s_deriv, pair.c_val, pair.c_deriv]
        .iter()
        .all(|z| z.re.is_finite() && z.im.is_finite());
    if !finite {
        return Err(Error::NonFinite {
            re: k.re.to_f64().unwrap_or(f64::NAN),
            im: k.im.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(pair)
}

const MAX_STEPS: usize = 1 << 22;

/// Doubles the step count until successive results agree to `tol`
/// (relative); returns the finer result and its step count.
pub fn integrate_sc_tol<F: Real>(
    q: &Potential<F>,
    k: Complex<F>,
    tol: F,
) -> Result<(FundamentalPair<F>, usize)> {
    let base = q.intervals();
    let want = (k.norm() * q.l() * F::of(4.0)).to_usize().unwrap_or(MAX_STEPS).max(32);
    let mut steps = base * want.div_ceil(base);
    let mut prev = integrate_sc_fixed(q, k, steps)?;
    loop {
        steps *= 2;
        let next = integrate_sc_fixed(q, k, steps)?;
        if next.distance(&prev, k) < tol || steps >= MAX_STEPS {
            return Ok((next, steps));
        }
        prev = next;
    }
}

/// `integrate_sc_tol` at relative tolerance `1e−10`, or a floor tied to
/// the precision of `F`.
pub fn integrate_sc<F: Real>(q: &Potential<F>, k: Complex<F>) -> Result<FundamentalPair<F>> {
    let tol = F::of(1e-10).max(F::epsilon() * F::of(1e3));
    integrate_sc_tol(q, k, tol).map(|(p, _)| p)
}
