use num_complex::Complex;

use super::{integrate_sc, FundamentalPair, Potential};
use crate::characteristic::{chebyshev_coeffs, clenshaw, psi_hat_of_tree, psi_of_tree, psi_tilde, JostData};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tree::RootedTree;
use crate::QPoly;

/// A tree whose edges all carry the same potential, symmetric about the
/// edge midpoint. Then `φ_N = c′(l)·ψ̃(c(l))` and `φ_D = ψ̂(c(l))`.
#[derive(Clone, Debug)]
pub struct PotentialJost<F> {
    q: Potential<F>,
    psi_tilde: Vec<f64>,
    psi_hat: Vec<f64>,
}

impl<F: Real> PotentialJost<F> {
    pub fn new(t: &RootedTree, q: Potential<F>) -> Result<Self> {
        let psi_t = psi_tilde(&psi_of_tree(t))?;
        Self::from_polys(&psi_t, &psi_hat_of_tree(t)?, q)
    }

    pub fn from_jost(d: &JostData, q: Potential<F>) -> Result<Self> {
        Self::from_polys(d.psi_tilde(), d.psi_hat(), q)
    }

    pub fn from_polys(psi_tilde: &QPoly, psi_hat: &QPoly, q: Potential<F>) -> Result<Self> {
        q.require_symmetric(F::of(1e-10))?;
        if psi_hat.is_zero() {
            return Err(Error::InvalidJost("psi_hat is zero".into()));
        }
        Ok(PotentialJost {
            q,
            psi_tilde: chebyshev_coeffs(psi_tilde),
            psi_hat: chebyshev_coeffs(psi_hat),
        })
    }

    pub fn potential(&self) -> &Potential<F> {
        &self.q
    }

    pub fn pair(&self, k: Complex<F>) -> Result<FundamentalPair<F>> {
        integrate_sc(&self.q, k)
    }

    pub fn phi_n_from(&self, pair: &FundamentalPair<F>) -> Complex<F> {
        pair.c_deriv * clenshaw(&self.psi_tilde, pair.c_val)
    }

    pub fn phi_d_from(&self, pair: &FundamentalPair<F>) -> Complex<F> {
        clenshaw(&self.psi_hat, pair.c_val)
    }

    pub fn jost_from(&self, k: Complex<F>, pair: &FundamentalPair<F>) -> Complex<F> {
        self.phi_n_from(pair) + Complex::<F>::i() * k * self.phi_d_from(pair)
    }

    pub fn phi_n(&self, k: Complex<F>) -> Result<Complex<F>> {
        Ok(self.phi_n_from(&self.pair(k)?))
    }

    pub fn phi_d(&self, k: Complex<F>) -> Result<Complex<F>> {
        Ok(self.phi_d_from(&self.pair(k)?))
    }

    pub fn jost(&self, k: Complex<F>) -> Result<Complex<F>> {
        Ok(self.jost_from(k, &self.pair(k)?))
    }

    /// `S(k) = E(k)/E(−k)`; `s`, `c` depend on `k²` only, so one
    /// integration serves both.
    pub fn s_value(&self, k: Complex<F>) -> Result<Complex<F>> {
        let pair = self.pair(k)?;
        let n = self.phi_n_from(&pair);
        let d = Complex::<F>::i() * k * self.phi_d_from(&pair);
        let den = n - d;
        if den.norm() <= F::of(1e-14) * (n.norm() + d.norm()) {
            return Err(Error::SPole {
                re: k.re.to_f64().unwrap_or(f64::NAN),
                im: k.im.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok((n + d) / den)
    }

    /// The same quantities with the potential switched off.
    pub fn free_pair(&self, k: Complex<F>) -> FundamentalPair<F> {
        FundamentalPair::free(k, self.q.l())
    }
}

/// `φ_N(λ)` for `t` with potential `q` on every edge.
pub fn phi_n_with_potential<F: Real>(t: &RootedTree, q: &Potential<F>, lam: Complex<F>) -> Result<Complex<F>> {
    PotentialJost::new(t, q.clone())?.phi_n(lam.sqrt())
}

/// `φ_D(λ)` for `t` with potential `q` on every edge.
pub fn phi_d_with_potential<F: Real>(t: &RootedTree, q: &Potential<F>, lam: Complex<F>) -> Result<Complex<F>> {
    PotentialJost::new(t, q.clone())?.phi_d(lam.sqrt())
}
