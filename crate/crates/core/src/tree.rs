//! Rooted combinatorial trees.
//!
//! Vertices are indexed `0..p` with the root at `0` and `parent[i] < i`, so
//! the index order is a topological order from the root and the adjacency
//! and degree matrices have the root in their first row.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TreeJson", into = "TreeJson")]
pub struct RootedTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    p: usize,
    parent: Vec<Option<usize>>,
}

impl TryFrom<TreeJson> for RootedTree {
    type Error = Error;

    fn try_from(json: TreeJson) -> Result<Self> {
        if json.p != json.parent.len() {
            return Err(Error::InvalidTree(format!(
                "p = {} but parent has {} entries",
                json.p,
                json.parent.len()
            )));
        }
        RootedTree::new(json.parent)
    }
}

impl From<RootedTree> for TreeJson {
    fn from(t: RootedTree) -> Self {
        TreeJson {
            p: t.p(),
            parent: t.parent,
        }
    }
}

impl RootedTree {
    /// Builds a tree from its parent array; `parent[0]` must be `None` and
    /// `parent[i] < i` for every other vertex.
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self> {
        if parent.is_empty() {
            return Err(Error::InvalidTree("empty parent array".into()));
        }
        if parent[0].is_some() {
            return Err(Error::InvalidTree("parent[0] must be null".into()));
        }
        let mut children = vec![Vec::new(); parent.len()];
        for (i, par) in parent.iter().enumerate().skip(1) {
            match *par {
                Some(q) if q < i => children[q].push(i),
                Some(q) => {
                    return Err(Error::InvalidTree(format!(
                        "parent[{i}] = {q} violates parent[i] < i"
                    )))
                }
                None => return Err(Error::InvalidTree(format!("parent[{i}] is null"))),
            }
        }
        Ok(RootedTree { parent, children })
    }

    fn from_parents_unchecked(parent: Vec<Option<usize>>) -> Self {
        Self::new(parent).expect("parent array built in topological order")
    }

    pub fn single_vertex() -> Self {
        Self::from_parents_unchecked(vec![None])
    }

    /// Path on `n` vertices rooted at one end.
    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTree("path needs at least one vertex".into()));
        }
        let parent = (0..n).map(|i| i.checked_sub(1)).collect();
        Ok(Self::from_parents_unchecked(parent))
    }

    /// Star with `leaves` pendant vertices, rooted at the center.
    pub fn star(leaves: usize) -> Self {
        let parent = std::iter::once(None)
            .chain(std::iter::repeat(Some(0)).take(leaves))
            .collect();
        Self::from_parents_unchecked(parent)
    }

    /// Root joined to `root_degree` star centers; center `k` has
    /// `child_degrees[k] - 1` pendant vertices.
    pub fn snowflake(root_degree: usize, child_degrees: &[usize]) -> Result<Self> {
        if child_degrees.len() != root_degree {
            return Err(Error::SnowflakeLength {
                expected: root_degree,
                got: child_degrees.len(),
            });
        }
        if let Some(&d) = child_degrees.iter().find(|&&d| d == 0) {
            return Err(Error::InvalidTree(format!("child degree {d} must be >= 1")));
        }
        let mut parent = vec![None];
        let centers: Vec<usize> = (1..=root_degree).collect();
        parent.extend(centers.iter().map(|_| Some(0)));
        for (&center, &d) in centers.iter().zip(child_degrees) {
            parent.extend(std::iter::repeat(Some(center)).take(d - 1));
        }
        Ok(Self::from_parents_unchecked(parent))
    }

    /// Random recursive tree: vertex `i` attaches to a uniform earlier vertex.
    pub fn random<R: Rng + ?Sized>(p: usize, rng: &mut R) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidTree("p must be >= 1".into()));
        }
        let parent = (0..p)
            .map(|i| (i > 0).then(|| rng.gen_range(0..i)))
            .collect();
        Ok(Self::from_parents_unchecked(parent))
    }

    pub fn p(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.p() {
            return Err(Error::VertexOutOfRange {
                index: v,
                p: self.p(),
            });
        }
        Ok(self.degree_unchecked(v))
    }

    pub(crate) fn degree_unchecked(&self, v: usize) -> usize {
        self.children[v].len() + usize::from(v != 0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.p()).map(|v| self.degree_unchecked(v)).collect()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// Deletes the root and its incident edges. Each component is rooted at
    /// a former child of the root and keeps the degrees the vertices had in
    /// `self`.
    pub fn delete_root(&self) -> Result<Forest> {
        if self.p() < 2 {
            return Err(Error::SingleVertex);
        }
        let degrees = self.degrees();
        let mut components = Vec::new();
        let mut original_degree = Vec::new();
        let mut origin = Vec::new();
        for &c in self.children(0) {
            let (sub, map) = self.subtree(c);
            original_degree.push(map.iter().map(|&v| degrees[v]).collect());
            origin.push(map);
            components.push(sub);
        }
        Ok(Forest {
            components,
            original_degree,
            origin,
        })
    }

    /// The subtree below `v`, reindexed in BFS order, with the map from new
    /// to old indices.
    pub fn subtree(&self, v: usize) -> (RootedTree, Vec<usize>) {
        let mut order = vec![v];
        let mut new_index = BTreeMap::new();
        new_index.insert(v, 0usize);
        let mut parent = vec![None];
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &c in self.children(u) {
                new_index.insert(c, order.len());
                parent.push(Some(new_index[&u]));
                order.push(c);
                queue.push_back(c);
            }
        }
        (Self::from_parents_unchecked(parent), order)
    }

    /// AHU encoding: equal iff the trees are isomorphic as rooted trees.
    pub fn canonical_code(&self) -> String {
        let codes = self.subtree_codes();
        codes.into_iter().next().unwrap_or_default()
    }

    fn subtree_codes(&self) -> Vec<String> {
        let mut codes = vec![String::new(); self.p()];
        for v in (0..self.p()).rev() {
            let mut kids: Vec<&str> = self.children[v].iter().map(|&c| codes[c].as_str()).collect();
            kids.sort_unstable();
            let mut code = String::with_capacity(2 + kids.iter().map(|k| k.len()).sum::<usize>());
            code.push('(');
            kids.into_iter().for_each(|k| code.push_str(k));
            code.push(')');
            codes[v] = code;
        }
        codes
    }

    /// Isomorphic copy with children ordered by code and vertices numbered in
    /// BFS order. Isomorphic trees have identical canonical forms.
    pub fn canonical_form(&self) -> RootedTree {
        let codes = self.subtree_codes();
        let mut parent = vec![None];
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        while let Some((old, new)) = queue.pop_front() {
            let mut kids = self.children[old].clone();
            kids.sort_by(|&a, &b| codes[a].cmp(&codes[b]));
            for c in kids {
                queue.push_back((c, parent.len()));
                parent.push(Some(new));
            }
        }
        Self::from_parents_unchecked(parent)
    }

    /// A copy with one more pendant vertex attached to `v`.
    pub fn with_leaf_at(&self, v: usize) -> RootedTree {
        let mut parent = self.parent.clone();
        parent.push(Some(v));
        Self::from_parents_unchecked(parent)
    }

    /// Every edge replaced by a path of `m` edges (`m ≥ 1`).
    pub fn subdivide(&self, m: usize) -> RootedTree {
        let m = m.max(1);
        let mut parent = vec![None];
        let mut image = vec![0; self.p()];
        for v in 1..self.p() {
            let mut up = image[self.parent[v].expect("non-root")];
            for _ in 1..m {
                parent.push(Some(up));
                up = parent.len() - 1;
            }
            parent.push(Some(up));
            image[v] = parent.len() - 1;
        }
        Self::from_parents_unchecked(parent)
    }

    /// Graphviz digraph with edges directed away from the root.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n");
        out.push_str("  0 [label=\"root\", shape=doublecircle];\n");
        for v in 1..self.p() {
            let _ = writeln!(out, "  {v} [label=\"{v}\"];");
        }
        for v in 1..self.p() {
            if let Some(q) = self.parent[v] {
                let _ = writeln!(out, "  {q} -> {v};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Components left after deleting the root, with degrees from the original
/// tree.
#[derive(Clone, Debug)]
pub struct Forest {
    pub components: Vec<RootedTree>,
    /// `original_degree[i][v]` is the degree in the parent tree of vertex
    /// `v` of component `i`.
    pub original_degree: Vec<Vec<usize>>,
    /// Vertex indices in the parent tree.
    pub origin: Vec<Vec<usize>>,
}

impl Forest {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Joins every component root to a fresh root vertex.
    pub fn reattach(&self) -> RootedTree {
        let mut parent = vec![None];
        for comp in &self.components {
            let offset = parent.len();
            parent.push(Some(0));
            for v in 1..comp.p() {
                parent.push(comp.parent(v).map(|q| q + offset));
            }
        }
        RootedTree::from_parents_unchecked(parent)
    }
}

/// One representative per rooted-isomorphism class on `p` vertices, in
/// canonical form, sorted by canonical code.
pub fn enumerate_rooted_trees(p: usize) -> impl Iterator<Item = RootedTree> {
    let levels = if p == 0 {
        Vec::new()
    } else {
        enumerate_up_to(p).pop().unwrap_or_default()
    };
    levels.into_iter()
}

/// `levels[n - 1]` holds every rooted tree on `n` vertices, `n = 1..=p_max`.
pub fn enumerate_up_to(p_max: usize) -> Vec<Vec<RootedTree>> {
    let mut levels: Vec<Vec<RootedTree>> = Vec::with_capacity(p_max);
    if p_max == 0 {
        return levels;
    }
    levels.push(vec![RootedTree::single_vertex()]);
    for _ in 1..p_max {
        let prev = levels.last().expect("non-empty");
        let mut seen: BTreeMap<String, RootedTree> = BTreeMap::new();
        for t in prev {
            for v in 0..t.p() {
                let grown = t.with_leaf_at(v);
                let code = grown.canonical_code();
                seen.entry(code).or_insert_with(|| grown.canonical_form());
            }
        }
        levels.push(seen.into_values().collect());
    }
    levels
}
