use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::Result;
use crate::poly::Poly;
use crate::scalar::Coeff;

/// Yun's squarefree decomposition over a field of characteristic zero:
/// `p = c·∏ aᵢ^i` with pairwise coprime squarefree monic `aᵢ`. Entry `i − 1`
/// holds `aᵢ` (possibly constant one).
pub fn squarefree_decomposition<T: Coeff>(p: &Poly<T>) -> Result<Vec<Poly<T>>> {
    let dp = p.derivative();
    if dp.is_zero() {
        return Ok(Vec::new());
    }
    let a0 = Poly::gcd(p, &dp)?;
    let mut b = p.div_exact(&a0)?.monic();
    let mut c = dp.div_exact(&a0)?;
    c = c.scale(&(T::one() / p.div_exact(&a0)?.lead().expect("non-zero").clone()));
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    while b.degree().unwrap_or(0) > 0 {
        let a = Poly::gcd(&b, &d)?;
        let nb = b.div_exact(&a)?;
        let nc = d.div_exact(&a)?;
        d = &nc - &nb.derivative();
        b = nb;
        out.push(a);
    }
    Ok(out)
}

/// All complex roots with multiplicity, from the eigenvalues of the
/// companion matrix, each polished by Newton steps on `p`.
pub fn poly_roots(p: &Poly<Complex64>) -> Vec<Complex64> {
    let Some(n) = p.degree() else { return Vec::new() };
    if n == 0 {
        return Vec::new();
    }
    let lead = *p.lead().expect("non-zero");
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -p.coeff(i) / lead;
    }
    let eig = nalgebra::Schur::try_new(m, 1e-15, 200 * n)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().copied().collect::<Vec<_>>())
        .unwrap_or_else(|| aberth(p, n));
    let dp = p.derivative();
    eig.into_iter()
        .map(|mut z| {
            for _ in 0..8 {
                let f = p.eval(&z);
                let df = dp.eval(&z);
                if df.is_zero() || f.norm() == 0.0 {
                    break;
                }
                let step = f / df;
                if !step.is_finite() {
                    break;
                }
                let next = z - step;
                if p.eval(&next).norm() >= f.norm() {
                    break;
                }
                z = next;
            }
            z
        })
        .collect()
}

/// Aberth–Ehrlich simultaneous iteration; the fallback when the QR
/// iteration does not converge (clustered roots).
fn aberth(p: &Poly<Complex64>, n: usize) -> Vec<Complex64> {
    let dp = p.derivative();
    let lead = p.lead().expect("non-zero").norm();
    let radius = 1.0 + p.coeffs().iter().map(|c| c.norm() / lead).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(0.5 * radius, 0.4 + 2.0 * std::f64::consts::PI * j as f64 / n as f64))
        .collect();
    for _ in 0..5000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let f = p.eval(&z[i]);
            if f.is_zero() {
                continue;
            }
            let ratio = f / dp.eval(&z[i]);
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{QPoly, Rational};

    #[test]
    fn yun_splits_multiplicities() {
        // (z − 1)(z + 2)²z³
        let p = QPoly::from_ints(&[-1, 1]) * QPoly::from_ints(&[2, 1]).pow(2) * QPoly::from_ints(&[0, 1]).pow(3);
        let parts = squarefree_decomposition(&p.scale(&Rational::from_integer(5.into()))).unwrap();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], QPoly::from_ints(&[-1, 1]));
        assert_eq!(parts[1], QPoly::from_ints(&[2, 1]));
        assert_eq!(parts[2], QPoly::from_ints(&[0, 1]));
    }

    #[test]
    fn companion_roots() {
        let p = Poly::new(vec![Complex64::new(-2.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let mut r: Vec<f64> = poly_roots(&p).iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] + 2f64.sqrt()).abs() < 1e-14 && (r[1] - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn aberth_finds_a_repeated_root() {
        let one = Complex64::new(1.0, 0.0);
        let p = Poly::new(vec![one, -2.0 * one, one]) * Poly::new(vec![Complex64::new(0.0, 3.0), one]);
        let r = aberth(&p, 3);
        assert!(r.iter().filter(|z| (*z - one).norm() < 1e-6).count() == 2);
        assert!(r.iter().any(|z| (z - Complex64::new(0.0, -3.0)).norm() < 1e-10));
    }
}
