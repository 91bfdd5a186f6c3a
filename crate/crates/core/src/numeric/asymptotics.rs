use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{Potential, PotentialJost};
use crate::error::Result;
use crate::io::f17;
use crate::tree::RootedTree;

/// Largest deviations from the zero-potential functions over `λ ∈ [lo, hi]`.
#[derive(Clone, Debug, Serialize)]
pub struct WindowResidual {
    #[serde(serialize_with = "f17")]
    pub lam_lo: f64,
    #[serde(serialize_with = "f17")]
    pub lam_hi: f64,
    #[serde(serialize_with = "f17")]
    pub max_phi_n: f64,
    #[serde(serialize_with = "f17")]
    pub max_phi_d: f64,
    /// `max |S/Š − 1|`.
    #[serde(serialize_with = "f17")]
    pub max_s_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticsReport {
    pub windows: Vec<WindowResidual>,
    /// Window maxima of `|φ_N − φ̌_N|` strictly decrease.
    pub decreasing: bool,
}

/// Residuals on `n` equally spaced `λ` in `[lo, hi]`.
pub fn window_residuals(pj: &PotentialJost<f64>, lo: f64, hi: f64, n: usize) -> Result<WindowResidual> {
    let n = n.max(2);
    let lams: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let rows = lams
        .par_iter()
        .map(|&lam| residual_at(pj, lam))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(lo, hi, &rows))
}

fn residual_at(pj: &PotentialJost<f64>, lam: f64) -> Result<[f64; 3]> {
    let k = Complex64::new(lam, 0.0).sqrt();
    let pair = pj.pair(k)?;
    let free = pj.free_pair(k);
    let dn = (pj.phi_n_from(&pair) - pj.phi_n_from(&free)).norm();
    let dd = (pj.phi_d_from(&pair) - pj.phi_d_from(&free)).norm();
    let s = |p| {
        let e = pj.jost_from(k, p);
        let e_neg = pj.jost_from(-k, p);
        e / e_neg
    };
    let ratio = (s(&pair) / s(&free) - 1.0).norm();
    Ok([dn, dd, if ratio.is_finite() { ratio } else { 0.0 }])
}

fn summarize(lo: f64, hi: f64, rows: &[[f64; 3]]) -> WindowResidual {
    let max = |i: usize| rows.iter().map(|r| r[i]).fold(0.0, f64::max);
    WindowResidual {
        lam_lo: lo,
        lam_hi: hi,
        max_phi_n: max(0),
        max_phi_d: max(1),
        max_s_ratio: max(2),
    }
}

/// Groups an increasing positive grid of `λ` into dyadic windows
/// `[2ʲ, 2ʲ⁺¹)` and reports per-window maxima.
pub fn verify_asymptotics(t: &RootedTree, q: &Potential<f64>, lam_grid: &[f64]) -> Result<AsymptoticsReport> {
    let pj = PotentialJost::new(t, q.clone())?;
    let rows = lam_grid
        .par_iter()
        .map(|&lam| residual_at(&pj, lam).map(|r| (lam.log2().floor() as i64, r)))
        .collect::<Result<Vec<_>>>()?;
    let mut windows = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let key = rows[start].0;
        let end = rows[start..].iter().position(|r| r.0 != key).map_or(rows.len(), |i| start + i);
        let block: Vec<[f64; 3]> = rows[start..end].iter().map(|r| r.1).collect();
        windows.push(summarize(2f64.powi(key as i32), 2f64.powi(key as i32 + 1), &block));
        start = end;
    }
    let decreasing = windows.windows(2).all(|w| w[1].max_phi_n < w[0].max_phi_n);
    Ok(AsymptoticsReport { windows, decreasing })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_potential_has_no_residual() {
        let t = RootedTree::star(3);
        let q = Potential::zero(1.0).unwrap();
        let grid: Vec<f64> = (1..200).map(|i| i as f64 * 0.7).collect();
        let rep = verify_asymptotics(&t, &q, &grid).unwrap();
        assert!(rep.windows.iter().all(|w| w.max_phi_n < 1e-6 && w.max_phi_d < 1e-6));
    }

    #[test]
    fn residuals_shrink_for_a_mean_zero_potential() {
        let t = RootedTree::path(2).unwrap();
        let q = Potential::from_fn(|x| (2.0 * std::f64::consts::PI * x).cos(), 1.0, 2001).unwrap();
        let pj = PotentialJost::new(&t, q).unwrap();
        let a = window_residuals(&pj, 100.0, 400.0, 60).unwrap();
        let b = window_residuals(&pj, 1000.0, 4000.0, 60).unwrap();
        assert!(b.max_phi_n < a.max_phi_n);
        assert!(b.max_s_ratio < a.max_s_ratio);
    }
}
