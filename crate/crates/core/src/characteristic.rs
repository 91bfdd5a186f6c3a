//! The polynomials `ψ`, `ψ̂`, `ψ̃` of a rooted tree and the zero-potential
//! characteristic, Jost and S-functions built from them.
//!
//! With the lead attached at the root and `k = √λ`, `c = cos kl`,
//! `s = sin kl`, the Neumann and Dirichlet characteristic functions are
//! `φ_N = −k·ψ(c)/s = −k·s·ψ̃(c)` and `φ_D = ψ̂(c)`, the Jost function is
//! `E(k) = φ_N + ik·φ_D` and `S(k) = E(k)/E(−k)`.

use num_complex::Complex;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::rational::{format_rational, parse_rational};
use crate::poly::{det_polymatrix, RatFunc};
use crate::scalar::Real;
use crate::tree::RootedTree;
use crate::{Complex64, QPoly, Rational};

/// `(f_v, g_v)` for every vertex: `f_v` is the determinant of the block of
/// `−zD + A` on the subtree below `v`, `g_v` the same with `v` removed.
fn peel(t: &RootedTree, degrees: &[usize]) -> Vec<(QPoly, QPoly)> {
    let mut out: Vec<(QPoly, QPoly)> = vec![(QPoly::zero(), QPoly::zero()); t.p()];
    for v in (0..t.p()).rev() {
        let kids = t.children(v);
        let mut prod = QPoly::one();
        let mut cross = QPoly::zero();
        for &c in kids {
            let (fc, gc) = &out[c];
            cross = &cross * fc + &prod * gc;
            prod = &prod * fc;
        }
        let dz = QPoly::from_ints(&[0, -(degrees[v] as i64)]);
        out[v] = (&dz * &prod - cross, prod);
    }
    out
}

/// `ψ(z) = det(−zD + A)` by leaf peeling.
pub fn psi_of_tree(t: &RootedTree) -> QPoly {
    peel(t, &t.degrees()).swap_remove(0).0
}

/// `ψ̂(z)`: the determinant of `−zD̂ + Â` over the root-deleted forest with
/// the degrees of the original tree.
pub fn psi_hat_of_tree(t: &RootedTree) -> Result<QPoly> {
    if t.p() < 2 {
        return Err(Error::SingleVertex);
    }
    Ok(peel(t, &t.degrees()).swap_remove(0).1)
}

/// Per-component factors `ψ̂ᵢ` of `ψ̂`, in the order of the root's children.
pub fn psi_hat_components(t: &RootedTree) -> Result<Vec<QPoly>> {
    if t.p() < 2 {
        return Err(Error::SingleVertex);
    }
    let pairs = peel(t, &t.degrees());
    Ok(t.children(0).iter().map(|&c| pairs[c].0.clone()).collect())
}

/// `−zD + A` with the given diagonal degrees.
fn pencil(t: &RootedTree, degrees: &[usize]) -> Vec<Vec<QPoly>> {
    let p = t.p();
    let mut m = vec![vec![QPoly::zero(); p]; p];
    for v in 0..p {
        m[v][v] = QPoly::from_ints(&[0, -(degrees[v] as i64)]);
        if let Some(u) = t.parent(v) {
            m[u][v] = QPoly::one();
            m[v][u] = QPoly::one();
        }
    }
    m
}

/// The matrix `−zD + A`, root in the first row.
pub fn pencil_matrix(t: &RootedTree) -> Vec<Vec<QPoly>> {
    pencil(t, &t.degrees())
}

/// `ψ` by fraction-free elimination of `−zD + A`.
pub fn psi_by_determinant(t: &RootedTree) -> QPoly {
    det_polymatrix(&pencil_matrix(t)).expect("square matrix")
}

/// `ψ̂` as the product of per-component determinants, each component using
/// its original degrees.
pub fn psi_hat_by_determinant(t: &RootedTree) -> Result<QPoly> {
    let forest = t.delete_root()?;
    forest
        .components
        .iter()
        .zip(&forest.original_degree)
        .try_fold(QPoly::one(), |acc, (comp, deg)| {
            Ok(acc * det_polymatrix(&pencil(comp, deg))?)
        })
}

/// Reduced `ψ/ψ̂`.
pub fn shape_fraction(t: &RootedTree) -> Result<RatFunc> {
    RatFunc::new(psi_of_tree(t), psi_hat_of_tree(t)?)
}

/// `R = f/g` for `s` hanging from a parent by one extra edge at its root;
/// such a branch contributes `−1/R` to its parent's fraction.
pub fn planted_fraction(s: &RootedTree) -> RatFunc {
    let mut degrees = s.degrees();
    degrees[0] += 1;
    let (f, g) = peel(s, &degrees).swap_remove(0);
    RatFunc::new(f, g).expect("g is a product of non-zero determinants")
}

/// `ψ̃ = ψ/(1 − z²)`.
pub fn psi_tilde(psi: &QPoly) -> Result<QPoly> {
    psi.div_exact(&QPoly::one_minus_z2())
        .map_err(|_| Error::InvalidJost("psi does not vanish at z = ±1".into()))
}

/// Exact data fixing the zero-potential Jost function: `ψ`, `ψ̂` and the
/// edge length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JostJson", into = "JostJson")]
pub struct JostData {
    psi: QPoly,
    psi_hat: QPoly,
    l: Rational,
    psi_tilde: QPoly,
    psi_f: Vec<f64>,
    psi_tilde_f: Vec<f64>,
    psi_hat_f: Vec<f64>,
    /// `ψ̃`, `ψ̂` of the reduced fraction, for `S`.
    reduced_tilde_f: Vec<f64>,
    reduced_hat_f: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct JostJson {
    psi: QPoly,
    psi_hat: QPoly,
    l: LengthJson,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LengthJson {
    Int(i64),
    Text(String),
}

impl TryFrom<JostJson> for JostData {
    type Error = Error;
    fn try_from(j: JostJson) -> Result<Self> {
        let l = match j.l {
            LengthJson::Int(n) => Rational::from_integer(n.into()),
            LengthJson::Text(s) => parse_rational(&s)?,
        };
        JostData::new(j.psi, j.psi_hat, l)
    }
}

impl From<JostData> for JostJson {
    fn from(d: JostData) -> Self {
        JostJson {
            l: LengthJson::Text(format_rational(&d.l)),
            psi: d.psi,
            psi_hat: d.psi_hat,
        }
    }
}

/// Coefficients in the Chebyshev basis `T_j`, converted exactly before
/// rounding. Evaluation near `[−1, 1]` is then stable for high degrees,
/// where the monomial form loses digits to cancellation.
pub(crate) fn chebyshev_coeffs(p: &QPoly) -> Vec<f64> {
    let n = p.coeffs().len();
    let mut out = vec![Rational::zero(); n];
    let two = Rational::from_integer(2.into());
    for (deg, a) in p.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        // x^n = 2^{1−n} Σ_k C(n, k) T_{n−2k}, the middle term halved
        let scale = a / two.pow(deg as i32 - 1);
        let mut binom = Rational::one();
        for k in 0..=deg / 2 {
            let mut term = &scale * &binom;
            if 2 * k == deg {
                term /= &two;
            }
            out[deg - 2 * k] += term;
            binom = binom * Rational::from_integer((deg - k).into()) / Rational::from_integer((k + 1).into());
        }
    }
    out.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Clenshaw summation of `Σ c_j T_j(x)`.
pub(crate) fn clenshaw<F: Real>(coeffs: &[f64], x: Complex<F>) -> Complex<F> {
    let two_x = x * F::of(2.0);
    let (mut b1, mut b2) = (Complex::<F>::zero(), Complex::<F>::zero());
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = two_x * b1 - b2 + Complex::new(F::of(c), F::zero());
        b2 = b1;
        b1 = b0;
    }
    let c0 = coeffs.first().copied().unwrap_or(0.0);
    x * b1 - b2 + Complex::new(F::of(c0), F::zero())
}

impl JostData {
    pub fn new(psi: QPoly, psi_hat: QPoly, l: Rational) -> Result<Self> {
        if l <= Rational::zero() {
            return Err(Error::InvalidJost("edge length must be positive".into()));
        }
        if psi_hat.is_zero() {
            return Err(Error::InvalidJost("psi_hat is zero".into()));
        }
        if psi.is_zero() {
            return Err(Error::InvalidJost("psi is zero".into()));
        }
        let psi_tilde = psi_tilde(&psi)?;
        let reduced = RatFunc::new(psi.clone(), psi_hat.clone())?;
        let reduced_tilde = self::psi_tilde(reduced.num())?;
        Ok(JostData {
            reduced_tilde_f: chebyshev_coeffs(&reduced_tilde),
            reduced_hat_f: chebyshev_coeffs(reduced.den()),
            psi_f: chebyshev_coeffs(&psi),
            psi_tilde_f: chebyshev_coeffs(&psi_tilde),
            psi_hat_f: chebyshev_coeffs(&psi_hat),
            psi,
            psi_hat,
            l,
            psi_tilde,
        })
    }

    pub fn from_tree(t: &RootedTree, l: Rational) -> Result<Self> {
        Self::new(psi_of_tree(t), psi_hat_of_tree(t)?, l)
    }

    /// Uses the numerator and denominator of a (possibly reduced) shape
    /// fraction. The S-function depends on `ψ/ψ̂` only, so this reproduces
    /// the S-function of every tree with that fraction.
    pub fn from_fraction(f: &RatFunc, l: Rational) -> Result<Self> {
        Self::new(f.num().clone(), f.den().clone(), l)
    }

    pub fn psi(&self) -> &QPoly {
        &self.psi
    }

    pub fn psi_hat(&self) -> &QPoly {
        &self.psi_hat
    }

    pub fn psi_tilde(&self) -> &QPoly {
        &self.psi_tilde
    }

    pub fn l(&self) -> &Rational {
        &self.l
    }

    pub fn l_f64(&self) -> f64 {
        self.l.to_f64().unwrap_or(f64::NAN)
    }

    pub fn fraction(&self) -> Result<RatFunc> {
        RatFunc::new(self.psi.clone(), self.psi_hat.clone())
    }

    pub fn eval_psi<F: Real>(&self, z: Complex<F>) -> Complex<F> {
        clenshaw(&self.psi_f, z)
    }

    pub fn eval_psi_tilde<F: Real>(&self, z: Complex<F>) -> Complex<F> {
        clenshaw(&self.psi_tilde_f, z)
    }

    pub fn eval_psi_hat<F: Real>(&self, z: Complex<F>) -> Complex<F> {
        clenshaw(&self.psi_hat_f, z)
    }

    fn angle<F: Real>(&self, k: Complex<F>) -> Complex<F> {
        k * F::of(self.l_f64())
    }

    /// `φ_N` as a function of `k = √λ`.
    pub fn phi_n<F: Real>(&self, k: Complex<F>) -> Complex<F> {
        let x = self.angle(k);
        let (s, c) = (x.sin(), x.cos());
        if s.norm() < F::of(1e-6) {
            -k * s * self.eval_psi_tilde(c)
        } else {
            -k * self.eval_psi(c) / s
        }
    }

    /// `φ_D = ψ̂(cos kl)`.
    pub fn phi_d<F: Real>(&self, k: Complex<F>) -> Complex<F> {
        self.eval_psi_hat(self.angle(k).cos())
    }

    /// `E(k) = φ_N + ik·φ_D`.
    pub fn jost<F: Real>(&self, k: Complex<F>) -> Complex<F> {
        self.phi_n(k) + Complex::<F>::i() * k * self.phi_d(k)
    }

    /// `S(k) = E(k)/E(−k)`, evaluated with the common factor `k` removed.
    /// Common factors of `ψ` and `ψ̂` are cancelled first, so removable
    /// singularities are not reported as poles.
    pub fn s_value<F: Real>(&self, k: Complex<F>) -> Result<Complex<F>> {
        let x = self.angle(k);
        let c = x.cos();
        let a = x.sin() * clenshaw(&self.reduced_tilde_f, c);
        let b = Complex::<F>::i() * clenshaw(&self.reduced_hat_f, c);
        let den = a + b;
        let scale = a.norm() + b.norm();
        if den.norm() <= F::of(1e-14) * scale || scale.is_zero() {
            return Err(Error::SPole {
                re: k.re.to_f64().unwrap_or(f64::NAN),
                im: k.im.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok((a - b) / den)
    }
}

/// `φ_N` at `λ` (principal square root).
pub fn phi_n_check(d: &JostData, lam: Complex64) -> Complex64 {
    d.phi_n(lam.sqrt())
}

/// `φ_D` at `λ`.
pub fn phi_d_check(d: &JostData, lam: Complex64) -> Complex64 {
    d.phi_d(lam.sqrt())
}

pub fn jost_e(d: &JostData, sqrt_lam: Complex64) -> Complex64 {
    d.jost(sqrt_lam)
}

pub fn s_function(d: &JostData, sqrt_lam: Complex64) -> Result<Complex64> {
    d.s_value(sqrt_lam)
}
