//! Rooted forests as parent maps, child ranks, and the charged depth
//! computation.

use std::io::Write;

use crate::mpc::{PrimitiveKind, RoundLedger};
use crate::{Result, Vertex};

/// Rooted forest as a map child -> parent; roots map to themselves.
/// Vertices are `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentMap {
    parent: Vec<Vertex>,
}

impl ParentMap {
    /// `parent[i]` is the parent of vertex `i + 1`.
    pub fn new(parent: Vec<Vertex>) -> Self {
        let pm = ParentMap { parent };
        debug_assert!(pm.check_acyclic());
        pm
    }

    fn check_acyclic(&self) -> bool {
        let n = self.len();
        (1..=n as Vertex).all(|v| {
            let mut x = v;
            for _ in 0..=n {
                if self.parent_of(x) == x {
                    return true;
                }
                x = self.parent_of(x);
            }
            false
        })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent_of(&self, v: Vertex) -> Vertex {
        self.parent[v as usize - 1]
    }

    pub fn is_root(&self, v: Vertex) -> bool {
        self.parent_of(v) == v
    }

    pub fn roots(&self) -> Vec<Vertex> {
        (1..=self.len() as Vertex).filter(|&v| self.is_root(v)).collect()
    }

    pub fn single_root(&self) -> Result<Vertex> {
        let roots = self.roots();
        match roots.as_slice() {
            [r] => Ok(*r),
            _ => Err(crate::Error::NotSingleRoot(roots.len())),
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.len() as Vertex
    }

    /// Per-vertex child lists sorted ascending, so `children[v][k-1]` is the
    /// k-th child of `v` and ranks are positions in these lists.
    pub fn children(&self) -> ChildTable {
        let mut lists = vec![Vec::new(); self.len() + 1];
        for v in self.vertices() {
            if !self.is_root(v) {
                lists[self.parent_of(v) as usize].push(v);
            }
        }
        // vertices are enumerated ascending, so lists are already sorted
        ChildTable { lists }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices().map(|v| (v, self.parent_of(v)))
    }

    pub fn write_forest<W: Write>(&self, w: &mut W) -> Result<()> {
        for (v, p) in self.iter() {
            writeln!(w, "{v} {p}")?;
        }
        Ok(())
    }
}

/// Children-of and rank lookups for one forest.
#[derive(Debug, Clone)]
pub struct ChildTable {
    lists: Vec<Vec<Vertex>>,
}

impl ChildTable {
    pub fn children_of(&self, v: Vertex) -> &[Vertex] {
        &self.lists[v as usize]
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.lists[v as usize].is_empty()
    }

    /// 1-based position of `u` among its parent's children.
    pub fn rank(&self, parent: Vertex, u: Vertex) -> usize {
        self.lists[parent as usize]
            .binary_search(&u)
            .expect("rank of a non-child")
            + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthMap {
    dep: Vec<u32>,
    pub tree_depth: u32,
}

impl DepthMap {
    pub fn depth_of(&self, v: Vertex) -> u32 {
        self.dep[v as usize - 1]
    }

    pub fn len(&self) -> usize {
        self.dep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dep.is_empty()
    }
}

/// Connected-component labels: `label(u) == label(v)` iff `u`, `v` are in the
/// same component, and each label is a vertex of its component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub label: Vec<Vertex>,
}

impl ComponentLabeling {
    pub fn label_of(&self, v: Vertex) -> Vertex {
        self.label[v as usize - 1]
    }

    pub fn representatives(&self) -> Vec<Vertex> {
        let mut reps: Vec<Vertex> = self.label.clone();
        reps.sort_unstable();
        reps.dedup();
        reps
    }
}

/// Depths of every vertex by distance-accumulating link doubling: each vertex
/// keeps one link and one counter, so live space stays at 2n words, and the
/// number of charged doubling steps is logarithmic in the forest depth.
pub fn compute_depths(p: &ParentMap, ledger: &mut RoundLedger) -> DepthMap {
    let n = p.len();
    let mut jump: Vec<Vertex> = (1..=n as Vertex).map(|v| p.parent_of(v)).collect();
    let mut dist: Vec<u32> = (1..=n as Vertex)
        .map(|v| if p.is_root(v) { 0 } else { 1 })
        .collect();
    loop {
        let done = (0..n).all(|i| {
            let j = jump[i];
            p.is_root(j) && jump[j as usize - 1] == j
        });
        if done {
            break;
        }
        ledger.charge(PrimitiveKind::LinkDoubleStep, 2 * n as u64);
        for i in 0..n {
            let j = jump[i];
            let ji = j as usize - 1;
            if jump[ji] != j {
                dist[i] += dist[ji];
                jump[i] = jump[ji];
            }
        }
    }
    let tree_depth = dist.iter().copied().max().unwrap_or(0);
    DepthMap {
        dep: dist,
        tree_depth,
    }
}
