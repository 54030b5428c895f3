//! Sequential ground-truth implementations used by the verification suite.
//! Everything here is independent of the charged pipeline code paths and of
//! the machine-model accounting.

use std::collections::{BTreeMap, BTreeSet};

use crate::conn2::EdgeColoring;
use crate::dfs::DfsSequence;
use crate::forest::ParentMap;
use crate::graph::Graph;
use crate::{Result, Vertex};

/// Classical low-link bridge finding (iterative DFS).
pub fn tarjan_bridges(g: &Graph) -> BTreeSet<(Vertex, Vertex)> {
    let n = g.n;
    let adj = adjacency_with_edge_ids(g);
    let mut disc = vec![0u32; n + 1];
    let mut low = vec![0u32; n + 1];
    let mut timer = 1u32;
    let mut bridges = BTreeSet::new();

    for start in 1..=n as Vertex {
        if disc[start as usize] != 0 {
            continue;
        }
        // stack entry: (vertex, incoming edge id, next adjacency index)
        let mut stack: Vec<(Vertex, usize, usize)> = vec![(start, usize::MAX, 0)];
        disc[start as usize] = timer;
        low[start as usize] = timer;
        timer += 1;
        while let Some(&mut (u, in_edge, ref mut idx)) = stack.last_mut() {
            if *idx < adj[u as usize].len() {
                let (w, eid) = adj[u as usize][*idx];
                *idx += 1;
                if eid == in_edge {
                    continue;
                }
                if disc[w as usize] == 0 {
                    disc[w as usize] = timer;
                    low[w as usize] = timer;
                    timer += 1;
                    stack.push((w, eid, 0));
                } else {
                    low[u as usize] = low[u as usize].min(disc[w as usize]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent as usize] = low[parent as usize].min(low[u as usize]);
                    if low[u as usize] > disc[parent as usize] {
                        bridges.insert((parent.min(u), parent.max(u)));
                    }
                }
            }
        }
    }
    bridges
}

fn adjacency_with_edge_ids(g: &Graph) -> Vec<Vec<(Vertex, usize)>> {
    let mut adj = vec![Vec::new(); g.n + 1];
    for (eid, &(u, v)) in g.edges.iter().enumerate() {
        adj[u as usize].push((v, eid));
        adj[v as usize].push((u, eid));
    }
    adj
}

/// Classical block decomposition: partition of the edge set into biconnected
/// components, via an iterative DFS with an edge stack.
pub fn hopcroft_tarjan_blocks(g: &Graph) -> Vec<BTreeSet<(Vertex, Vertex)>> {
    let n = g.n;
    let adj = adjacency_with_edge_ids(g);
    let mut disc = vec![0u32; n + 1];
    let mut low = vec![0u32; n + 1];
    let mut timer = 1u32;
    let mut edge_stack: Vec<(Vertex, Vertex)> = Vec::new();
    let mut blocks = Vec::new();
    let mut edge_seen = vec![false; g.m()];

    for start in 1..=n as Vertex {
        if disc[start as usize] != 0 {
            continue;
        }
        let mut stack: Vec<(Vertex, usize, usize)> = vec![(start, usize::MAX, 0)];
        disc[start as usize] = timer;
        low[start as usize] = timer;
        timer += 1;
        while let Some(&mut (u, in_edge, ref mut idx)) = stack.last_mut() {
            if *idx < adj[u as usize].len() {
                let (w, eid) = adj[u as usize][*idx];
                *idx += 1;
                if eid == in_edge {
                    continue;
                }
                if disc[w as usize] == 0 {
                    edge_seen[eid] = true;
                    edge_stack.push((u.min(w), u.max(w)));
                    disc[w as usize] = timer;
                    low[w as usize] = timer;
                    timer += 1;
                    stack.push((w, eid, 0));
                } else {
                    if !edge_seen[eid] && disc[w as usize] < disc[u as usize] {
                        edge_seen[eid] = true;
                        edge_stack.push((u.min(w), u.max(w)));
                    }
                    low[u as usize] = low[u as usize].min(disc[w as usize]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent as usize] = low[parent as usize].min(low[u as usize]);
                    if low[u as usize] >= disc[parent as usize] {
                        // pop one block: everything above (parent, u)
                        let mut block = BTreeSet::new();
                        let marker = (parent.min(u), parent.max(u));
                        while let Some(e) = edge_stack.pop() {
                            block.insert(e);
                            if e == marker {
                                break;
                            }
                        }
                        if !block.is_empty() {
                            blocks.push(block);
                        }
                    }
                }
            }
        }
    }
    blocks
}

/// Literal recursive unfolding of the DFS-sequence definition, implemented
/// iteratively to survive depth-n paths. Children are visited in ascending
/// identifier order.
pub fn sequential_dfs(p: &ParentMap) -> Result<DfsSequence> {
    let root = p.single_root()?;
    let children = p.children();
    let mut entries = Vec::with_capacity(2 * p.len());
    // stack entry: (vertex, next child index)
    let mut stack: Vec<(Vertex, usize)> = vec![(root, 0)];
    while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
        let kids = children.children_of(v);
        if *idx == 0 {
            entries.push(v);
        }
        if *idx < kids.len() {
            let c = kids[*idx];
            *idx += 1;
            stack.push((c, 0));
        } else {
            stack.pop();
            if let Some(&(parent, _)) = stack.last() {
                entries.push(parent);
            }
        }
    }
    Ok(DfsSequence {
        entries,
        n: p.len(),
    })
}

/// Deepest common element of the two ancestor chains.
pub fn brute_lca(p: &ParentMap, u: Vertex, v: Vertex) -> Vertex {
    let chain = |mut x: Vertex| {
        let mut c = vec![x];
        while !p.is_root(x) {
            x = p.parent_of(x);
            c.push(x);
        }
        c
    };
    let cu = chain(u);
    let set: BTreeSet<Vertex> = chain(v).into_iter().collect();
    *cu.iter().find(|x| set.contains(x)).expect("no common ancestor")
}

pub fn brute_rmq(a: &[i64], l: usize, r: usize) -> i64 {
    a[l - 1..r].iter().copied().min().expect("empty range")
}

/// True iff the color classes of `col` equal `blocks` as set partitions.
pub fn partitions_equal(col: &EdgeColoring, blocks: &[BTreeSet<(Vertex, Vertex)>]) -> bool {
    let mut classes: BTreeMap<Vertex, BTreeSet<(Vertex, Vertex)>> = BTreeMap::new();
    for (&e, &c) in &col.col {
        classes.entry(c).or_default().insert(e);
    }
    let a: BTreeSet<_> = classes.into_values().collect();
    let b: BTreeSet<_> = blocks.iter().cloned().collect();
    a == b
}

/// Brute-force bridge check: an edge is a bridge iff removing it disconnects
/// its endpoints. Used as the oracle-of-the-oracle on small graphs.
pub fn removal_bridges(g: &Graph) -> BTreeSet<(Vertex, Vertex)> {
    let mut out = BTreeSet::new();
    for &(u, v) in &g.edges {
        let rest: Vec<_> = g.edges.iter().copied().filter(|&e| e != (u, v)).collect();
        let h = Graph::from_edges(g.n, rest).unwrap();
        let adj = h.adjacency();
        let mut seen = vec![false; g.n + 1];
        let mut stack = vec![u];
        seen[u as usize] = true;
        while let Some(x) = stack.pop() {
            for &w in &adj[x as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        if !seen[v as usize] {
            out.insert((u, v));
        }
    }
    out
}
