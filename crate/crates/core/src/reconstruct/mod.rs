//! Recovery of tree shapes from a shape fraction `ψ/ψ̂`.

mod catalog;
mod diophantine;
mod expansion;

pub use catalog::{Planted, TreeCatalog};
pub use diophantine::solve_reciprocal_diophantine;
pub use expansion::{expand_branched_cf, peel_root, BranchExpansion};

use serde::Serialize;

use crate::characteristic::{psi_hat_of_tree, psi_of_tree};
use crate::error::{Error, Result};
use crate::poly::RatFunc;
use crate::tree::RootedTree;
use crate::QPoly;

pub const DEFAULT_P_MAX: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct Match {
    pub tree: RootedTree,
    pub p: usize,
    pub code: String,
    /// `p − deg num F`: degree of the factor of `ψ` cancelled in `F`.
    pub cancelled_factor_degree: usize,
    /// The cancelled factor, monic.
    pub cancelled_factor: QPoly,
    /// The tree matches `−F`; only possible for even `p`, where the two
    /// sign conventions for `ψ̂` differ.
    pub sign_flipped: bool,
    pub dot: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Expansion,
    Enumeration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NotAShapeFraction,
    NoTree,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconstructionResult {
    /// Sorted by canonical code.
    pub matches: Vec<Match>,
    pub searched_p_range: (usize, usize),
    /// Cancelled degree of the first match.
    pub cancelled_factor_degree: Option<usize>,
    pub method: Method,
    /// Whether enumeration was run and agreed.
    pub cross_checked: bool,
    pub status: Status,
    pub diagnostic: Option<String>,
}

impl ReconstructionResult {
    pub fn codes(&self) -> Vec<&str> {
        self.matches.iter().map(|m| m.code.as_str()).collect()
    }

    pub fn is_unique(&self) -> bool {
        self.matches.len() == 1
    }

    /// Converts an empty result into the matching error.
    pub fn into_result(self) -> Result<Self> {
        match self.status {
            Status::Ok => Ok(self),
            Status::NotAShapeFraction => Err(Error::NotShapeFraction(self.diagnostic.unwrap_or_default())),
            Status::NoTree => Err(Error::NoTree {
                p_max: self.searched_p_range.1,
            }),
        }
    }
}

fn make_match(t: &RootedTree, f: &RatFunc, sign_flipped: bool) -> Match {
    let psi = psi_of_tree(t);
    let cancelled = psi.div_exact(f.num()).map(|q| q.monic()).unwrap_or_else(|_| QPoly::one());
    let t = t.canonical_form();
    Match {
        p: t.p(),
        code: t.canonical_code(),
        cancelled_factor_degree: t.p() - f.num().degree().unwrap_or(0),
        cancelled_factor: cancelled,
        sign_flipped,
        dot: t.to_dot(),
        tree: t,
    }
}

fn p_range(f: &RatFunc, p_max: usize) -> (usize, usize) {
    (f.num().degree().unwrap_or(0).max(2), p_max)
}

fn finish(f: &RatFunc, p_max: usize, mut matches: Vec<Match>, method: Method, cross_checked: bool) -> ReconstructionResult {
    matches.sort_by(|a, b| a.code.cmp(&b.code));
    matches.dedup_by(|a, b| a.code == b.code);
    let (status, diagnostic) = if !matches.is_empty() {
        (Status::Ok, None)
    } else if let Err(e) = peel_root(f) {
        let msg = match e {
            Error::NotShapeFraction(m) => m,
            other => other.to_string(),
        };
        (Status::NotAShapeFraction, Some(msg))
    } else {
        (Status::NoTree, Some(format!("no tree within p_max = {p_max}")))
    };
    ReconstructionResult {
        cancelled_factor_degree: matches.first().map(|m| m.cancelled_factor_degree),
        matches,
        searched_p_range: p_range(f, p_max),
        method,
        cross_checked,
        status,
        diagnostic,
    }
}

fn enumeration_matches(f: &RatFunc, catalog: &TreeCatalog, p_max: usize) -> Vec<Match> {
    let (lo, hi) = p_range(f, p_max);
    let direct = catalog.lookup(f).map(|t| (t, false));
    let neg = -f;
    let flipped = catalog.lookup(&neg).filter(|t| t.p() % 2 == 0).map(|t| (t, true));
    direct
        .chain(flipped)
        .filter(|(t, _)| (lo..=hi).contains(&t.p()))
        .map(|(t, s)| make_match(t, if s { &neg } else { f }, s))
        .collect()
}

/// Every rooted tree with `deg num F ≤ p ≤ p_max` whose reduced shape
/// fraction equals `F`.
pub fn invert_by_enumeration(f: &RatFunc, p_max: usize) -> ReconstructionResult {
    let catalog = TreeCatalog::cached(p_max.max(2));
    let matches = enumeration_matches(f, &catalog, p_max);
    finish(f, p_max, matches, Method::Enumeration, false)
}

fn expansion_matches(f: &RatFunc, catalog: &TreeCatalog, p_max: usize) -> Vec<Match> {
    let (lo, hi) = p_range(f, p_max);
    let mut out: Vec<Match> = expansion::expand_with(f, lo..=hi, catalog)
        .iter()
        .map(|b| make_match(&b.to_tree(), f, false))
        .collect();
    let neg = -f;
    out.extend(
        expansion::expand_with(&neg, lo..=hi, catalog)
            .iter()
            .map(|b| b.to_tree())
            .filter(|t| t.p() % 2 == 0)
            .map(|t| make_match(&t, &neg, true)),
    );
    out
}

/// Branched continued-fraction expansion, cross-checked against
/// exhaustive enumeration; enumeration's answer wins if they differ.
pub fn invert(f: &RatFunc, p_max: usize) -> ReconstructionResult {
    let catalog = TreeCatalog::cached(p_max.max(2));
    let expanded = expansion_matches(f, &catalog, p_max);
    let enumerated = enumeration_matches(f, &catalog, p_max);
    let mut a: Vec<&str> = expanded.iter().map(|m| m.code.as_str()).collect();
    let mut b: Vec<&str> = enumerated.iter().map(|m| m.code.as_str()).collect();
    a.sort_unstable();
    a.dedup();
    b.sort_unstable();
    b.dedup();
    if a == b {
        finish(f, p_max, expanded, Method::Expansion, true)
    } else {
        finish(f, p_max, enumerated, Method::Enumeration, true)
    }
}

fn proportional(a: &QPoly, b: &QPoly, c: &QPoly, d: &QPoly) -> bool {
    let (Some(la), Some(lc)) = (a.lead(), c.lead()) else {
        return false;
    };
    let k = la / lc;
    *a == c.scale(&k) && *b == d.scale(&k)
}

/// Like [`invert`], but keeps only trees whose unreduced `ψ`, `ψ̂` agree
/// with the given pair up to a common constant. The reduced fraction can
/// lose a cancelled factor that tells two shapes apart; the pair does not.
pub fn invert_pair(psi: &QPoly, psi_hat: &QPoly, p_max: usize) -> Result<ReconstructionResult> {
    let f = RatFunc::new(psi.clone(), psi_hat.clone())?;
    let r = invert(&f, p_max);
    if r.matches.is_empty() {
        return Ok(r);
    }
    let kept: Vec<Match> = r
        .matches
        .into_iter()
        .filter(|m| {
            let Ok(hat) = psi_hat_of_tree(&m.tree) else {
                return false;
            };
            let hat = if m.sign_flipped { -hat } else { hat };
            proportional(psi, psi_hat, &psi_of_tree(&m.tree), &hat)
        })
        .collect();
    Ok(finish(&f, p_max, kept, r.method, r.cross_checked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristic::shape_fraction;

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(QPoly::from_ints(n), QPoly::from_ints(d)).unwrap()
    }

    #[test]
    fn single_edge_is_unique() {
        let r = invert_by_enumeration(&rf(&[-1, 0, 1], &[0, -1]), 6);
        assert_eq!(r.matches.len(), 1);
        assert_eq!(r.matches[0].p, 2);
        let r = invert(&rf(&[-1, 0, 1], &[0, -1]), 6);
        assert_eq!(r.codes(), vec!["(())"]);
        assert_eq!(r.method, Method::Expansion);
    }

    #[test]
    fn not_a_shape_fraction() {
        let r = invert(&rf(&[0, 1], &[1]), 6);
        assert!(r.matches.is_empty());
        assert_eq!(r.status, Status::NotAShapeFraction);
        assert!(matches!(r.into_result(), Err(Error::NotShapeFraction(_))));
    }

    #[test]
    fn opposite_sign_convention_for_even_p() {
        let t = RootedTree::path(4).unwrap();
        let f = shape_fraction(&t).unwrap();
        let r = invert(&-f, 8);
        assert!(r.matches.iter().any(|m| m.code == t.canonical_code() && m.sign_flipped));
    }

    #[test]
    fn the_unreduced_pair_separates_a_pendant_snowflake() {
        let t = RootedTree::snowflake(3, &[4, 4, 1]).unwrap();
        let f = shape_fraction(&t).unwrap();
        assert_eq!(invert(&f, 12).matches.len(), 2);
        let r = invert_pair(&psi_of_tree(&t), &psi_hat_of_tree(&t).unwrap(), 12).unwrap();
        assert_eq!(r.codes(), vec![t.canonical_code().as_str()]);
    }
}
