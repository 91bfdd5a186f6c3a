use serde::Serialize;

use super::catalog::TreeCatalog;
use super::diophantine::solve_reciprocal_diophantine;
use crate::error::{Error, Result};
use crate::poly::RatFunc;
use crate::tree::RootedTree;
use crate::{QPoly, Rational};

/// One node of a branched continued fraction. The root's degree is its
/// number of children; every other node also counts the edge to its
/// parent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchExpansion {
    pub node_degree: usize,
    pub pendant_children: usize,
    pub internal_children: Vec<BranchExpansion>,
    /// `true` at even depth (the root).
    pub depth_parity: bool,
}

impl BranchExpansion {
    pub fn vertex_count(&self) -> usize {
        1 + self.pendant_children + self.internal_children.iter().map(|c| c.vertex_count()).sum::<usize>()
    }

    pub fn to_tree(&self) -> RootedTree {
        let mut parent = vec![None];
        self.push_children(0, &mut parent);
        RootedTree::new(parent).expect("parents precede children")
    }

    fn push_children(&self, me: usize, parent: &mut Vec<Option<usize>>) {
        for _ in 0..self.pendant_children {
            parent.push(Some(me));
        }
        for c in &self.internal_children {
            let idx = parent.len();
            parent.push(Some(me));
            c.push_children(idx, parent);
        }
    }

    pub fn from_tree(t: &RootedTree) -> Self {
        Self::from_vertex(t, 0, true)
    }

    fn from_vertex(t: &RootedTree, v: usize, even: bool) -> Self {
        let kids = t.children(v);
        let mut internal: Vec<BranchExpansion> = kids
            .iter()
            .filter(|&&c| !t.is_leaf(c))
            .map(|&c| Self::from_vertex(t, c, !even))
            .collect();
        internal.sort_by_key(|b| b.to_tree().canonical_code());
        BranchExpansion {
            node_degree: kids.len() + usize::from(v != 0),
            pendant_children: kids.iter().filter(|&&c| t.is_leaf(c)).count(),
            internal_children: internal,
            depth_parity: even,
        }
    }
}

/// Splits off the root term: `F = −m₀z + R` with `R` proper and `m₀` a
/// positive integer.
pub fn peel_root(f: &RatFunc) -> Result<(usize, RatFunc)> {
    if f.degree_excess() != Some(1) {
        return Err(Error::NotShapeFraction(format!(
            "numerator degree must exceed denominator degree by one in {f}"
        )));
    }
    let ratio = f.leading_ratio().expect("non-zero");
    let m0 = -ratio;
    if !m0.is_integer() || m0 <= Rational::from_integer(0.into()) {
        return Err(Error::NotShapeFraction(format!("leading coefficient {} is not −m for a positive integer m", -m0)));
    }
    let m = usize::try_from(m0.to_integer()).map_err(|_| Error::NotShapeFraction("root degree too large".into()))?;
    let rest = f + &RatFunc::from_poly(QPoly::monomial(m0, 1));
    if rest.is_zero() {
        return Err(Error::NotShapeFraction(format!("{f} leaves the root of degree {m} without branches")));
    }
    Ok((m, rest))
}

struct Search<'a> {
    catalog: &'a TreeCatalog,
}

type Children = (usize, Vec<BranchExpansion>);

impl Search<'_> {
    /// Every way to write `h` as the sum of the terms of `k` children whose
    /// subtrees hold at most `budget` vertices in total.
    fn children(&self, h: &RatFunc, k: usize, budget: usize, even: bool) -> Vec<Children> {
        if k == 0 {
            return if h.is_zero() { vec![(0, Vec::new())] } else { Vec::new() };
        }
        if h.degree_excess() != Some(-1) {
            return Vec::new();
        }
        let r = h.leading_ratio().expect("non-zero");
        let mut out = Vec::new();
        for degrees in solve_reciprocal_diophantine(k, &r, budget) {
            if degrees.iter().sum::<usize>() > budget {
                continue;
            }
            let pendants = degrees.iter().filter(|&&n| n == 1).count();
            let internal: Vec<usize> = degrees.into_iter().filter(|&n| n > 1).collect();
            let rest = h - &RatFunc::new(QPoly::constant(Rational::from_integer(pendants.into())), QPoly::z())
                .expect("non-zero denominator");
            for kids in self.split(&rest, &internal, budget - pendants, None, !even) {
                out.push((pendants, kids));
            }
        }
        out
    }

    /// Splits `h` among internal children of the given degrees (ascending).
    /// All but the last come from the catalog; the last is peeled
    /// algebraically.
    fn split(&self, h: &RatFunc, degrees: &[usize], budget: usize, after: Option<usize>, even: bool) -> Vec<Vec<BranchExpansion>> {
        match degrees {
            [] => {
                if h.is_zero() {
                    vec![Vec::new()]
                } else {
                    Vec::new()
                }
            }
            [d] => self.single(h, *d, budget, even).into_iter().map(|b| vec![b]).collect(),
            [d, rest @ ..] => {
                let reserve: usize = rest.iter().sum();
                if budget < reserve + d {
                    return Vec::new();
                }
                let mut out = Vec::new();
                for (idx, branch) in self.catalog.planted_dividing(*d, budget - reserve, h.den()) {
                    // equal degrees: keep catalog order to avoid permutations
                    if after.is_some_and(|a| idx < a) {
                        continue;
                    }
                    let remainder = h - &branch.h;
                    let next_after = (rest.first() == Some(d)).then_some(idx);
                    for mut tail in self.split(&remainder, rest, budget - branch.tree.p(), next_after, even) {
                        let mut b = BranchExpansion::from_tree(&branch.tree);
                        b.node_degree = *d;
                        set_parity(&mut b, even);
                        tail.insert(0, b);
                        out.push(tail);
                    }
                }
                out
            }
        }
    }

    /// The single child with term `h = 1/(d·z − h′)`, `h′` the sum of its
    /// own children's terms.
    fn single(&self, h: &RatFunc, d: usize, budget: usize, even: bool) -> Vec<BranchExpansion> {
        if budget < d || h.is_zero() {
            return Vec::new();
        }
        let inv = h.recip().expect("non-zero");
        let dz = RatFunc::from_poly(QPoly::monomial(Rational::from_integer(d.into()), 1));
        let rest = &dz - &inv;
        if !rest.is_proper() {
            return Vec::new();
        }
        self.children(&rest, d - 1, budget - 1, even)
            .into_iter()
            .map(|(pendants, internal)| BranchExpansion {
                node_degree: d,
                pendant_children: pendants,
                internal_children: internal,
                depth_parity: even,
            })
            .collect()
    }
}

fn set_parity(b: &mut BranchExpansion, even: bool) {
    b.depth_parity = even;
    for c in &mut b.internal_children {
        set_parity(c, !even);
    }
}

/// All branched continued fractions of `f` whose trees have a vertex count
/// in `p_range`. Each is checked by exact re-composition.
pub fn expand_branched_cf(f: &RatFunc, p_range: std::ops::RangeInclusive<usize>) -> Vec<BranchExpansion> {
    let p_max = *p_range.end();
    if p_max < 2 {
        return Vec::new();
    }
    expand_with(f, p_range, &TreeCatalog::cached(p_max))
}

pub(crate) fn expand_with(f: &RatFunc, p_range: std::ops::RangeInclusive<usize>, catalog: &TreeCatalog) -> Vec<BranchExpansion> {
    let Ok((m0, rest)) = peel_root(f) else {
        return Vec::new();
    };
    let p_max = *p_range.end();
    let search = Search { catalog };
    let mut out: Vec<BranchExpansion> = search
        .children(&rest, m0, p_max.saturating_sub(1), true)
        .into_iter()
        .map(|(pendants, internal)| BranchExpansion {
            node_degree: m0,
            pendant_children: pendants,
            internal_children: internal,
            depth_parity: true,
        })
        .filter(|b| p_range.contains(&b.vertex_count()))
        .filter(|b| crate::characteristic::shape_fraction(&b.to_tree()).is_ok_and(|g| &g == f))
        .collect();
    out.sort_by_key(|b| b.to_tree().canonical_code());
    out.dedup_by_key(|b| b.to_tree().canonical_code());
    out
}
