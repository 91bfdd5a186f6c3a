use std::f64::consts::PI;

use num_complex::{Complex, Complex64};
use num_traits::{ToPrimitive, Zero as _};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::roots::squarefree_decomposition;
use super::PotentialJost;
use crate::characteristic::JostData;
use crate::error::{Error, Result};
use crate::io::f17;
use crate::{QiPoly, Rational};

/// Axis-parallel rectangle in the complex `√λ`-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    #[serde(serialize_with = "f17")]
    pub re_min: f64,
    #[serde(serialize_with = "f17")]
    pub re_max: f64,
    #[serde(serialize_with = "f17")]
    pub im_min: f64,
    #[serde(serialize_with = "f17")]
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let r = Rect {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        if ![re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidRect("non-finite bound".into()));
        }
        if re_min >= re_max || im_min >= im_max {
            return Err(Error::InvalidRect(format!("empty rectangle {r:?}")));
        }
        Ok(r)
    }

    /// `[−10/l, 10/l] × [−2/l, 2/l]`. The height is a heuristic: the zeros
    /// below the real axis are known to be bounded but no bound is given.
    pub fn for_length(l: f64) -> Self {
        Rect {
            re_min: -10.0 / l,
            re_max: 10.0 / l,
            im_min: -2.0 / l,
            im_max: 2.0 / l,
        }
    }

    /// Parses `re_min:re_max:im_min:im_max`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRect(format!("expected re_min:re_max:im_min:im_max, got {s:?}"));
        let v: Vec<f64> = s
            .split(':')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        if v.len() != 4 {
            return Err(bad());
        }
        Self::new(v[0], v[1], v[2], v[3])
    }

    fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    fn diam(&self) -> f64 {
        self.width().hypot(self.height())
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let eps = 1e-12 * (1.0 + z.norm());
        z.re >= self.re_min - eps && z.re <= self.re_max + eps && z.im >= self.im_min - eps && z.im <= self.im_max + eps
    }

    fn split(&self, ratio: f64) -> [Rect; 2] {
        let (mut a, mut b) = (*self, *self);
        if self.width() >= self.height() {
            let x = self.re_min + ratio * self.width();
            a.re_max = x;
            b.re_min = x;
        } else {
            let y = self.im_min + ratio * self.height();
            a.im_max = y;
            b.im_min = y;
        }
        [a, b]
    }

    fn grown(&self, attempt: usize) -> Rect {
        let d = 1e-3 * attempt as f64;
        Rect {
            re_min: self.re_min - d * 1.37 * self.width(),
            re_max: self.re_max + d * 0.91 * self.width(),
            im_min: self.im_min - d * 1.13 * self.height(),
            im_max: self.im_max + d * 0.79 * self.height(),
        }
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ZeroOptions {
    /// Boundary samples per cell before adaptive refinement.
    pub segments: usize,
    /// Cells smaller than this are reported as a (multiple) zero at their
    /// centre.
    pub min_cell: f64,
    /// A zero is verified when `|f| ≤ residual_tol · scale`.
    pub residual_tol: f64,
}

impl Default for ZeroOptions {
    fn default() -> Self {
        ZeroOptions {
            segments: 64,
            min_cell: 1e-10,
            residual_tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Zero {
    #[serde(serialize_with = "f17")]
    pub re: f64,
    #[serde(serialize_with = "f17")]
    pub im: f64,
    #[serde(serialize_with = "f17")]
    pub residual: f64,
    pub multiplicity: usize,
}

impl Zero {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroReport {
    /// The rectangle actually scanned.
    pub rect: Rect,
    /// Whether the requested rectangle had to be enlarged to keep zeros off
    /// its boundary.
    pub perturbed: bool,
    /// `max |f|` over the boundary samples of `rect`.
    #[serde(serialize_with = "f17")]
    pub scale: f64,
    pub note: String,
    pub zeros: Vec<Zero>,
}

impl ZeroReport {
    pub fn all_verified(&self, opts: &ZeroOptions) -> bool {
        self.zeros.iter().all(|z| z.residual <= opts.residual_tol * self.scale)
    }
}

const HEIGHT_NOTE: &str =
    "scan height is a heuristic; zeros below the real axis lie on a bounded interval of unspecified length";

/// Total change of `arg f` along `[a, b]`, bisecting until each piece turns
/// by less than π/4. `None` when `f` vanishes on or too near the segment.
fn arg_change<F: Fn(Complex64) -> Complex64>(
    f: &F,
    a: Complex64,
    fa: Complex64,
    b: Complex64,
    fb: Complex64,
    depth: u32,
) -> Option<f64> {
    if fa.is_zero() || fb.is_zero() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    let d = (fb / fa).arg();
    if d.abs() < PI / 4.0 {
        return Some(d);
    }
    if depth > 48 || (b - a).norm() < 1e-13 * (1.0 + a.norm()) {
        return None;
    }
    let m = (a + b) * 0.5;
    let fm = f(m);
    Some(arg_change(f, a, fa, m, fm, depth + 1)? + arg_change(f, m, fm, b, fb, depth + 1)?)
}

/// Winding number of `f` around the boundary of `r` and the largest
/// sampled `|f|`.
fn winding<F: Fn(Complex64) -> Complex64>(f: &F, r: &Rect, segments: usize) -> Option<(i64, f64)> {
    let per_side = (segments / 4).max(1);
    let corners = r.corners();
    let mut pts = Vec::with_capacity(4 * per_side);
    for s in 0..4 {
        let (a, b) = (corners[s], corners[(s + 1) % 4]);
        for j in 0..per_side {
            pts.push(a + (b - a) * (j as f64 / per_side as f64));
        }
    }
    let vals: Vec<Complex64> = pts.iter().map(|&z| f(z)).collect();
    let mut total = 0.0;
    for i in 0..pts.len() {
        let j = (i + 1) % pts.len();
        total += arg_change(f, pts[i], vals[i], pts[j], vals[j], 0)?;
    }
    let n = total / (2.0 * PI);
    let rounded = n.round();
    if (n - rounded).abs() > 0.1 {
        return None;
    }
    let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Some((rounded as i64, scale))
}

fn newton<F: Fn(Complex64) -> Complex64>(f: &F, cell: &Rect) -> Option<Complex64> {
    let mut z = cell.center();
    let h = 1e-7 * cell.diam().max(1e-4);
    for _ in 0..60 {
        let fz = f(z);
        if fz.is_zero() {
            return Some(z);
        }
        let hc = Complex64::new(h, 0.0);
        let df = (f(z + hc) - f(z - hc)) / (2.0 * hc);
        let step = fz / df;
        if !step.is_finite() {
            return None;
        }
        z -= step;
        if step.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    // one more step certifies convergence
    let fz = f(z);
    let hc = Complex64::new(h, 0.0);
    let df = (f(z + hc) - f(z - hc)) / (2.0 * hc);
    let step = fz / df;
    (step.is_finite() && step.norm() <= 1e-9 * (1.0 + z.norm()) && cell.contains(z)).then_some(z)
}

enum Outcome {
    Found(Complex64, usize),
    Split(Vec<(Rect, i64)>),
}

const RATIOS: [f64; 6] = [0.5371, 0.4529, 0.6113, 0.3839, 0.7, 0.3];

fn handle<F: Fn(Complex64) -> Complex64>(f: &F, cell: &Rect, w: i64, opts: &ZeroOptions) -> Outcome {
    if cell.diam() < opts.min_cell {
        return Outcome::Found(cell.center(), w as usize);
    }
    if w == 1 {
        if let Some(z) = newton(f, cell) {
            return Outcome::Found(z, 1);
        }
    }
    for ratio in RATIOS {
        let halves = cell.split(ratio);
        let ws: Option<Vec<i64>> = halves.iter().map(|h| winding(f, h, opts.segments).map(|x| x.0)).collect();
        if let Some(ws) = ws {
            if ws.iter().sum::<i64>() == w && ws.iter().all(|&x| x >= 0) {
                return Outcome::Split(halves.into_iter().zip(ws).filter(|(_, x)| *x > 0).collect());
            }
        }
    }
    Outcome::Found(cell.center(), w as usize)
}

/// Zeros of an analytic `f` inside `rect` by the argument principle:
/// cells are bisected until each holds at most one zero, which Newton's
/// method then locates. A zero on the boundary of `rect` triggers a small
/// enlargement, reported in the result.
pub fn find_zeros<F>(f: F, rect: Rect, opts: &ZeroOptions) -> Result<ZeroReport>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let mut used = rect;
    let mut start = None;
    for attempt in 0..8 {
        used = if attempt == 0 { rect } else { rect.grown(attempt) };
        if let Some(ws) = winding(&f, &used, 4 * opts.segments) {
            start = Some(ws);
            break;
        }
    }
    let (w0, scale) = start.ok_or_else(|| Error::InvalidRect("zero on the boundary persists after perturbation".into()))?;
    if w0 < 0 {
        return Err(Error::InvalidRect(format!("negative winding number {w0}; f has poles inside")));
    }
    let mut found = Vec::new();
    let mut work = if w0 > 0 { vec![(used, w0)] } else { Vec::new() };
    while !work.is_empty() {
        let outcomes: Vec<Outcome> = work.par_iter().map(|(c, w)| handle(&f, c, *w, opts)).collect();
        work = Vec::new();
        for o in outcomes {
            match o {
                Outcome::Found(z, m) => found.push((z, m)),
                Outcome::Split(children) => work.extend(children),
            }
        }
    }
    let mut zeros: Vec<Zero> = found
        .into_iter()
        .map(|(z, m)| Zero {
            re: z.re,
            im: z.im,
            residual: f(z).norm(),
            multiplicity: m,
        })
        .collect();
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(ZeroReport {
        rect: used,
        perturbed: used != rect,
        scale,
        note: HEIGHT_NOTE.into(),
        zeros,
    })
}

fn qi(re: Rational, im: Rational) -> Complex<Rational> {
    Complex::new(re, im)
}

/// `P(w) = w^m·E(k)/k` with `w = e^{ikl}`, a polynomial with Gaussian
/// rational coefficients; returns `(P, m)`.
pub fn jost_laurent(d: &JostData) -> (QiPoly, usize) {
    let half = Rational::new(1.into(), 2.into());
    let zero = Rational::from_integer(0.into());
    let cw = QiPoly::new(vec![qi(half.clone(), zero.clone()), qi(zero.clone(), zero.clone()), qi(half.clone(), zero.clone())]);
    let dt = d.psi_tilde().degree().unwrap_or(0);
    let dh = d.psi_hat().degree().unwrap_or(0);
    let m = (dt + 1).max(dh);
    // −s·w = (i/2)(w² − 1)
    let sw = QiPoly::new(vec![qi(zero.clone(), -half.clone()), qi(zero.clone(), zero.clone()), qi(zero.clone(), half.clone())]);
    let mut tilde = QiPoly::zero();
    for (j, a) in d.psi_tilde().coeffs().iter().enumerate() {
        tilde = tilde + (cw.pow(j as u32) * QiPoly::constant(qi(a.clone(), zero.clone()))).shift(m - 1 - j);
    }
    let mut hat = QiPoly::zero();
    for (j, b) in d.psi_hat().coeffs().iter().enumerate() {
        hat = hat + (cw.pow(j as u32) * QiPoly::constant(qi(zero.clone(), b.clone()))).shift(m - j);
    }
    (sw * tilde + hat, m)
}

fn to_c64(p: &QiPoly) -> Vec<Complex64> {
    p.coeffs()
        .iter()
        .map(|c| Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN)))
        .collect()
}

fn horner_c(c: &[Complex64], w: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * w + a)
}

/// Zeros of the zero-potential Jost function in `rect`. The scan runs on
/// `k·P_sf(e^{ikl})` with `P_sf` the exact squarefree part of
/// [`jost_laurent`], so every scanned zero is simple; multiplicities come
/// from the exact squarefree decomposition.
pub fn find_jost_zeros(d: &JostData, rect: Rect) -> Result<ZeroReport> {
    let (p, _) = jost_laurent(d);
    let mut p = p;
    while p.coeff(0).is_zero() && !p.is_zero() {
        p = p.divmod(&QiPoly::z())?.0;
    }
    let parts = squarefree_decomposition(&p)?;
    let sf = parts.iter().fold(QiPoly::one(), |acc, a| acc * a);
    let sf_c = to_c64(&sf.monic());
    let parts_c: Vec<Vec<Complex64>> = parts.iter().map(to_c64).collect();
    let l = d.l_f64();
    let f = |k: Complex64| k * horner_c(&sf_c, (Complex64::i() * k * l).exp());
    let opts = ZeroOptions::default();
    let mut report = find_zeros(f, rect, &opts)?;
    let mut scale: f64 = 0.0;
    for c in report.rect.corners() {
        scale = scale.max(d.jost(c).norm());
    }
    for i in 0..64 {
        let t = i as f64 / 64.0;
        let r = report.rect;
        for z in [
            Complex64::new(r.re_min + t * (r.re_max - r.re_min), r.im_min),
            Complex64::new(r.re_min + t * (r.re_max - r.re_min), r.im_max),
            Complex64::new(r.re_min, r.im_min + t * (r.im_max - r.im_min)),
            Complex64::new(r.re_max, r.im_min + t * (r.im_max - r.im_min)),
        ] {
            scale = scale.max(d.jost(z).norm());
        }
    }
    report.scale = scale;
    for z in &mut report.zeros {
        let k = z.z();
        z.residual = d.jost(k).norm();
        if k.norm() < 1e-12 {
            z.multiplicity = 1;
            continue;
        }
        let w = (Complex64::i() * k * l).exp();
        z.multiplicity = parts_c
            .iter()
            .enumerate()
            .filter(|(_, a)| a.len() > 1)
            .map(|(i, a)| {
                let norm: f64 = a.iter().map(|c| c.norm()).sum::<f64>() * w.norm().max(1.0).powi(a.len() as i32);
                (i + 1, horner_c(a, w).norm() / norm)
            })
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .map_or(1, |(i, _)| i);
    }
    Ok(report)
}

/// Zeros of the Jost function of a tree with a potential, scanning the
/// numerically integrated `E` directly.
pub fn find_jost_zeros_with_potential(pj: &PotentialJost<f64>, rect: Rect) -> Result<ZeroReport> {
    let f = |k: Complex64| pj.jost(k).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    find_zeros(f, rect, &ZeroOptions::default())
}
