use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::characteristic::{planted_fraction, shape_fraction};
use crate::poly::RatFunc;
use crate::tree::{enumerate_up_to, RootedTree};
use crate::QPoly;

/// A rooted tree hung from a parent by one extra edge, with its
/// contribution `h = −1/R` to the parent's fraction.
#[derive(Clone, Debug)]
pub struct Planted {
    pub tree: RootedTree,
    /// Degree of the root including the edge to the parent.
    pub degree: usize,
    pub h: RatFunc,
}

/// Every rooted tree up to `p_max` vertices with its shape fraction, and
/// every planted branch up to `p_max − 1` vertices.
#[derive(Debug)]
pub struct TreeCatalog {
    p_max: usize,
    trees: Vec<RootedTree>,
    by_fraction: HashMap<RatFunc, Vec<usize>>,
    planted: Vec<Planted>,
}

impl TreeCatalog {
    pub fn build(p_max: usize) -> Self {
        let levels = enumerate_up_to(p_max);
        let trees: Vec<RootedTree> = levels.into_iter().flatten().collect();
        let fractions: Vec<Option<RatFunc>> = trees.par_iter().map(|t| shape_fraction(t).ok()).collect();
        let mut by_fraction: HashMap<RatFunc, Vec<usize>> = HashMap::new();
        for (i, f) in fractions.into_iter().enumerate() {
            if let Some(f) = f {
                by_fraction.entry(f).or_default().push(i);
            }
        }
        let planted = trees
            .par_iter()
            .filter(|t| t.p() < p_max)
            .map(|t| {
                let r = planted_fraction(t);
                Planted {
                    tree: t.clone(),
                    degree: t.children(0).len() + 1,
                    h: -r.recip().expect("planted fraction is non-zero"),
                }
            })
            .collect();
        TreeCatalog {
            p_max,
            trees,
            by_fraction,
            planted,
        }
    }

    /// Shared catalog for `p_max`, built on first use.
    pub fn cached(p_max: usize) -> Arc<TreeCatalog> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<TreeCatalog>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.lock().expect("catalog cache").get(&p_max) {
            return c.clone();
        }
        let built = Arc::new(TreeCatalog::build(p_max));
        cache
            .lock()
            .expect("catalog cache")
            .entry(p_max)
            .or_insert(built)
            .clone()
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Trees whose reduced shape fraction equals `f`.
    pub fn lookup(&self, f: &RatFunc) -> impl Iterator<Item = &RootedTree> {
        self.by_fraction
            .get(f)
            .into_iter()
            .flatten()
            .map(move |&i| &self.trees[i])
    }

    /// Planted branches of the given root degree and at most `max_size`
    /// vertices whose poles are all poles of a function with denominator
    /// `den`.
    pub fn planted_dividing<'a>(
        &'a self,
        degree: usize,
        max_size: usize,
        den: &'a QPoly,
    ) -> impl Iterator<Item = (usize, &'a Planted)> + 'a {
        self.planted
            .iter()
            .enumerate()
            .filter(move |(_, b)| b.degree == degree && b.tree.p() <= max_size && b.h.den().divides(den))
    }
}
