//! Pluggable spanning-forest strategies, registered by name.
//!
//! The pipeline only needs a rooted spanning forest plus component labels;
//! how that forest is produced is a strategy choice. `bfs_layered` keeps the
//! forest depth within the component diameter and charges one round per BFS
//! layer; `hooking` charges O(log n) rounds but gives no depth guarantee.

use std::collections::VecDeque;

use crate::forest::{ComponentLabeling, ParentMap};
use crate::graph::Graph;
use crate::mpc::{PrimitiveKind, RoundLedger};
use crate::Vertex;

pub trait SpanningForestStrategy: Sync {
    fn name(&self) -> &'static str;

    /// Returns a rooted spanning forest of `g` (one tree per component) and
    /// the component labeling. Tree edges are edges of `g`.
    fn run(&self, g: &Graph, ledger: &mut RoundLedger) -> (ParentMap, ComponentLabeling);
}

struct BfsLayered;

impl SpanningForestStrategy for BfsLayered {
    fn name(&self) -> &'static str {
        "bfs_layered"
    }

    fn run(&self, g: &Graph, ledger: &mut RoundLedger) -> (ParentMap, ComponentLabeling) {
        let n = g.n;
        let adj = g.adjacency();
        let mut parent: Vec<Vertex> = (1..=n as Vertex).collect();
        let mut label: Vec<Vertex> = vec![0; n];
        let mut max_layers = 0u64;
        // Each component is explored from its smallest vertex; components
        // advance their BFS layers in lockstep, so the charged rounds equal
        // the deepest layer count.
        for root in 1..=n as Vertex {
            if label[root as usize - 1] != 0 {
                continue;
            }
            label[root as usize - 1] = root;
            let mut frontier = vec![root];
            let mut layers = 0u64;
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for &u in &frontier {
                    for &w in &adj[u as usize] {
                        if label[w as usize - 1] == 0 {
                            label[w as usize - 1] = root;
                            parent[w as usize - 1] = u;
                            next.push(w);
                        }
                    }
                }
                if !next.is_empty() {
                    layers += 1;
                }
                frontier = next;
            }
            max_layers = max_layers.max(layers);
        }
        let volume = (n + 2 * g.m()) as u64;
        ledger.charge_steps(PrimitiveKind::MultiQuery, max_layers.max(1), volume);
        (ParentMap::new(parent), ComponentLabeling { label })
    }
}

struct Hooking;

impl SpanningForestStrategy for Hooking {
    fn name(&self) -> &'static str {
        "hooking"
    }

    fn run(&self, g: &Graph, ledger: &mut RoundLedger) -> (ParentMap, ComponentLabeling) {
        let n = g.n;
        let volume = (n + 2 * g.m()) as u64;
        let mut label: Vec<Vertex> = (1..=n as Vertex).collect();
        let find = |label: &[Vertex], mut x: Vertex| -> Vertex {
            while label[x as usize - 1] != x {
                x = label[x as usize - 1];
            }
            x
        };
        let mut forest_edges: Vec<(Vertex, Vertex)> = Vec::new();
        loop {
            // Every component root hooks onto the smallest neighboring
            // component; strictly decreasing hooks cannot form a cycle.
            let mut best: Vec<Option<(Vertex, Vertex, Vertex)>> = vec![None; n + 1];
            for &(u, v) in &g.edges {
                let (lu, lv) = (find(&label, u), find(&label, v));
                if lu == lv {
                    continue;
                }
                for ((from, to), edge) in [((lu, lv), (u, v)), ((lv, lu), (v, u))] {
                    if to < from {
                        let cand = (to, edge.0, edge.1);
                        let slot = &mut best[from as usize];
                        if slot.map_or(true, |b| cand < b) {
                            *slot = Some(cand);
                        }
                    }
                }
            }
            ledger.charge(PrimitiveKind::Sort, volume);
            let mut changed = false;
            for r in 1..=n as Vertex {
                if label[r as usize - 1] == r {
                    if let Some((to, eu, ev)) = best[r as usize] {
                        label[r as usize - 1] = to;
                        forest_edges.push((eu, ev));
                        changed = true;
                    }
                }
            }
            // full pointer jumping to keep label chains flat
            let mut steps = 0u64;
            loop {
                let mut jumped = false;
                for v in 0..n {
                    let l = label[v];
                    let ll = label[l as usize - 1];
                    if ll != l {
                        label[v] = ll;
                        jumped = true;
                    }
                }
                steps += 1;
                if !jumped {
                    break;
                }
            }
            ledger.charge_steps(PrimitiveKind::LinkDoubleStep, steps, volume);
            if !changed {
                break;
            }
        }

        // Orient each component's forest edges away from the label vertex.
        let mut tree_adj = vec![Vec::new(); n + 1];
        for &(u, v) in &forest_edges {
            tree_adj[u as usize].push(v);
            tree_adj[v as usize].push(u);
        }
        let mut parent: Vec<Vertex> = (1..=n as Vertex).collect();
        let mut seen = vec![false; n + 1];
        for root in 1..=n as Vertex {
            if label[root as usize - 1] != root || seen[root as usize] {
                continue;
            }
            seen[root as usize] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &w in &tree_adj[u as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        parent[w as usize - 1] = u;
                        queue.push_back(w);
                    }
                }
            }
        }
        ledger.charge(PrimitiveKind::LocalRound, volume);
        (ParentMap::new(parent), ComponentLabeling { label })
    }
}

const STRATEGIES: &[&dyn SpanningForestStrategy] = &[&BfsLayered, &Hooking];

pub fn strategy(name: &str) -> Option<&'static dyn SpanningForestStrategy> {
    STRATEGIES.iter().copied().find(|s| s.name() == name)
}

pub fn strategy_names() -> Vec<&'static str> {
    STRATEGIES.iter().map(|s| s.name()).collect()
}

pub fn default_strategy() -> &'static dyn SpanningForestStrategy {
    STRATEGIES[0]
}

/// Runs the named strategy (default `bfs_layered`).
pub fn spanning_forest(
    g: &Graph,
    method: &str,
    ledger: &mut RoundLedger,
) -> (ParentMap, ComponentLabeling) {
    let s = strategy(method).unwrap_or_else(|| panic!("unknown spanning forest method '{method}'"));
    s.run(g, ledger)
}
