//! Recovery of the shape fraction from sampled S-function values.

mod fit;
mod period;

pub use fit::{fit_shape_fraction, fit_shape_fraction_with, FitOptions, ShapeFit};
pub use period::estimate_edge_length;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::characteristic::{shape_fraction, JostData};
use crate::error::{Error, Result};
use crate::io::f17;
use crate::poly::RatFunc;
use crate::reconstruct::{invert, Match};
use crate::tree::RootedTree;

/// `S` sampled on an increasing grid of positive `√λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SSampleSet {
    points: Vec<(f64, Complex64)>,
    noise_level: f64,
}

impl SSampleSet {
    pub fn new(points: Vec<(f64, Complex64)>, noise_level: f64) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidSamples("need at least two samples".into()));
        }
        if !(noise_level >= 0.0) || !noise_level.is_finite() {
            return Err(Error::InvalidSamples("noise level must be finite and non-negative".into()));
        }
        if points.iter().any(|(k, s)| !k.is_finite() || !s.is_finite() || *k <= 0.0) {
            return Err(Error::InvalidSamples("sqrt_lambda must be positive and all values finite".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidSamples("sqrt_lambda must be strictly increasing".into()));
        }
        Ok(SSampleSet { points, noise_level })
    }

    /// Noise estimated as the RMS of `|S| − 1`; additive complex noise of
    /// standard deviation `σ` per component moves `|S|` by about `σ`.
    pub fn with_estimated_noise(points: Vec<(f64, Complex64)>) -> Result<Self> {
        let n = points.len().max(1) as f64;
        let rms = (points.iter().map(|(_, s)| (s.norm() - 1.0).powi(2)).sum::<f64>() / n).sqrt();
        Self::new(points, if rms.is_finite() { rms } else { 0.0 })
    }

    pub fn points(&self) -> &[(f64, Complex64)] {
        &self.points
    }

    pub fn noise_level(&self) -> f64 {
        self.noise_level
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same samples times a constant.
    pub fn scaled(&self, c: Complex64) -> Self {
        SSampleSet {
            points: self.points.iter().map(|&(k, s)| (k, s * c)).collect(),
            noise_level: self.noise_level,
        }
    }
}

/// `count` equally spaced points from `start` to `stop` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if !(start > 0.0) || !(stop > start) || !stop.is_finite() || count < 2 {
            return Err(Error::InvalidSamples(format!("bad grid {start}:{stop}:{count}")));
        }
        Ok(Grid { start, stop, count })
    }

    /// Parses `start:stop:count`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSamples(format!("expected start:stop:count, got {s:?}"));
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [a, b, n] = parts[..] else { return Err(bad()) };
        Self::new(a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?)
    }

    /// `periods` periods of `S` (period `π/l`) with `count` points, starting
    /// one step above zero.
    pub fn periods(l: f64, periods: f64, count: usize) -> Result<Self> {
        let stop = periods * std::f64::consts::PI / l;
        Self::new(stop / count as f64, stop, count)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let h = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(move |i| self.start + h * i as f64)
    }
}

/// Samples `S` of `d` on `grid` with additive complex Gaussian noise of
/// standard deviation `noise` per component.
pub fn synthesize<R: Rng + ?Sized>(d: &JostData, grid: &Grid, noise: f64, rng: &mut R) -> Result<SSampleSet> {
    let normal = Normal::new(0.0, noise.max(0.0)).map_err(|e| Error::InvalidSamples(e.to_string()))?;
    let mut points = Vec::with_capacity(grid.count);
    for k in grid.points() {
        let s = d.s_value(Complex64::new(k, 0.0))?;
        let e = if noise > 0.0 {
            Complex64::new(normal.sample(rng), normal.sample(rng))
        } else {
            Complex64::new(0.0, 0.0)
        };
        points.push((k, s + e));
    }
    SSampleSet::new(points, noise)
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    /// Edge length after refinement against the fitted fraction.
    #[serde(serialize_with = "f17")]
    pub l_hat: f64,
    /// Edge length from the period of `S` alone.
    #[serde(serialize_with = "f17")]
    pub l_period: f64,
    pub fraction: RatFunc,
    /// `max |S_fit − S|` over the samples.
    #[serde(serialize_with = "f17")]
    pub residual: f64,
    pub degree: usize,
    pub shapes: Vec<Match>,
    pub searched_p_range: (usize, usize),
    /// Every (tree, edge length) pair consistent with the samples.
    pub candidates: Vec<ShapeCandidate>,
}

/// With `q ≡ 0` a degree-two vertex imposes nothing, so the `m`-fold
/// subdivision of a tree at edge length `l/m` scatters exactly like the tree
/// at `l`. The samples cannot tell these apart.
#[derive(Clone, Debug, Serialize)]
pub struct ShapeCandidate {
    pub code: String,
    pub p: usize,
    #[serde(serialize_with = "f17")]
    pub l: f64,
    /// `1` for a shape of the fitted fraction itself.
    pub subdivision: usize,
    pub fraction: RatFunc,
    pub tree: RootedTree,
}

/// Each shape, plus its subdivisions with at most `p_max` vertices.
pub fn shape_candidates(shapes: &[Match], l: f64, p_max: usize) -> Result<Vec<ShapeCandidate>> {
    let mut out = Vec::new();
    for m in shapes {
        for div in 1.. {
            if (m.p - 1) * div + 1 > p_max {
                break;
            }
            let tree = m.tree.subdivide(div).canonical_form();
            out.push(ShapeCandidate {
                code: tree.canonical_code(),
                p: tree.p(),
                l: l / div as f64,
                subdivision: div,
                fraction: shape_fraction(&tree)?,
                tree,
            });
        }
    }
    out.sort_by(|a, b| a.subdivision.cmp(&b.subdivision).then_with(|| a.code.cmp(&b.code)));
    Ok(out)
}

/// Period → edge length → fitted fraction → shapes and their
/// subdivisions.
pub fn pipeline_invert(samples: &SSampleSet, p_max: usize) -> Result<PipelineReport> {
    let l_period = estimate_edge_length(samples).map_err(|e| e.in_stage("estimate_edge_length"))?;
    let fit = fit_shape_fraction(samples, l_period, p_max).map_err(|e| e.in_stage("fit_shape_fraction"))?;
    let result = invert(&fit.fraction, p_max)
        .into_result()
        .map_err(|e| e.in_stage("reconstruct"))?;
    let candidates = shape_candidates(&result.matches, fit.l, p_max)?;
    Ok(PipelineReport {
        candidates,
        l_hat: fit.l,
        l_period,
        fraction: fit.fraction,
        residual: fit.residual,
        degree: fit.degree,
        searched_p_range: result.searched_p_range,
        shapes: result.matches,
    })
}
