//! Compressed-tree machinery: depth-stride sampling of a rooted tree,
//! power-of-two ancestor tables on the sample, batched leaf-pair LCA, and
//! multi-path generation, all within linear charged space.
//!
//! The sample keeps vertices whose depth is a multiple of the stride
//! `t = ceil(log2 dep)` and at least `t` above the deepest level, so the
//! sample shrinks by a log factor and a full doubling table over it fits in
//! linear space.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::forest::{DepthMap, ParentMap};
use crate::mpc::{PrimitiveKind, RoundLedger};
use crate::{Error, Result, Vertex};

#[derive(Debug, Clone)]
pub struct CompressedTree {
    /// stride t, clamped to >= 1 so depth-1 trees stay well-defined
    pub stride: usize,
    /// sampled vertex set V', ascending
    pub sampled: Vec<Vertex>,
    membership: HashSet<Vertex>,
    parent_c: HashMap<Vertex, Vertex>,
}

impl CompressedTree {
    pub fn contains(&self, v: Vertex) -> bool {
        self.membership.contains(&v)
    }

    /// p'(v) = p^(t)(v), defined on V' only.
    pub fn parent_c(&self, v: Vertex) -> Vertex {
        self.parent_c[&v]
    }

    pub fn len(&self) -> usize {
        self.sampled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sampled.is_empty()
    }
}

pub(crate) fn stride_for(tree_depth: u32) -> usize {
    if tree_depth <= 1 {
        1
    } else {
        (32 - (tree_depth - 1).leading_zeros()) as usize
    }
}

/// Samples V' = { v : dep(v) mod t = 0, subtree height >= t } and links each
/// sampled vertex to its t-th ancestor by t charged link hops. The height
/// condition guarantees t-1 exclusive strict descendants per sampled vertex,
/// which is what bounds |V'| by n / t.
pub fn compress(p: &ParentMap, dep: &DepthMap, ledger: &mut RoundLedger) -> CompressedTree {
    let d = dep.tree_depth;
    let t = stride_for(d);
    let n = p.len() as u64;
    // subtree heights, deepest vertices first
    let mut height = vec![0u32; p.len() + 1];
    let mut order: Vec<Vertex> = p.vertices().collect();
    order.sort_by_key(|&v| std::cmp::Reverse(dep.depth_of(v)));
    for v in order {
        if !p.is_root(v) {
            let pv = p.parent_of(v) as usize;
            height[pv] = height[pv].max(height[v as usize] + 1);
        }
    }
    ledger.charge_steps(
        PrimitiveKind::LinkDoubleStep,
        (32 - d.leading_zeros()).max(1) as u64,
        n,
    );
    let sampled: Vec<Vertex> = p
        .vertices()
        .filter(|&v| dep.depth_of(v) as usize % t == 0 && height[v as usize] >= t as u32)
        .collect();
    let membership: HashSet<Vertex> = sampled.iter().copied().collect();
    let mut link: Vec<Vertex> = sampled.clone();
    for _ in 0..t {
        for x in &mut link {
            *x = p.parent_of(*x);
        }
        ledger.charge(PrimitiveKind::LinkDoubleStep, n);
    }
    let parent_c = sampled.iter().copied().zip(link).collect();
    CompressedTree {
        stride: t,
        sampled,
        membership,
        parent_c,
    }
}

/// Ancestor-at-2^j maps over the compressed tree: g_j(v) = p'^(2^j)(v)
/// for j in 0..=t.
#[derive(Debug, Clone)]
pub struct DoublingTable {
    levels: Vec<HashMap<Vertex, Vertex>>,
}

impl DoublingTable {
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn get(&self, j: usize, v: Vertex) -> Vertex {
        self.levels[j][&v]
    }

    pub fn storage_entries(&self) -> usize {
        self.levels.iter().map(|m| m.len()).sum()
    }
}

pub fn build_doubling(ct: &CompressedTree, ledger: &mut RoundLedger) -> DoublingTable {
    if ct.is_empty() {
        return DoublingTable { levels: Vec::new() };
    }
    let t = ct.stride;
    let mut levels = vec![ct.parent_c.clone()];
    for j in 1..=t {
        let prev = &levels[j - 1];
        let next: HashMap<Vertex, Vertex> =
            prev.iter().map(|(&v, &w)| (v, prev[&w])).collect();
        ledger.charge(
            PrimitiveKind::LinkDoubleStep,
            (ct.len() * (j + 1)) as u64,
        );
        levels.push(next);
    }
    DoublingTable { levels }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LcaAnswer {
    pub lca: Vertex,
    /// Child of the LCA on the path toward u; `None` when the LCA is u.
    pub child_toward_u: Option<Vertex>,
    /// Child of the LCA on the path toward v; `None` when the LCA is v.
    pub child_toward_v: Option<Vertex>,
}

/// Navigation view that extends the tree with one virtual leaf per vertex:
/// phantom id `n + u` is an extra child of `u`. Non-leaf query endpoints are
/// replaced by their phantoms, which keeps every query a leaf pair without
/// materializing anything in the parent map.
struct Nav<'a> {
    p: &'a ParentMap,
    dep: &'a DepthMap,
    n: Vertex,
}

impl Nav<'_> {
    fn parent(&self, x: Vertex) -> Vertex {
        if x > self.n {
            x - self.n
        } else {
            self.p.parent_of(x)
        }
    }

    fn depth(&self, x: Vertex) -> u32 {
        if x > self.n {
            self.dep.depth_of(x - self.n) + 1
        } else {
            self.dep.depth_of(x)
        }
    }

    fn unphantom(&self, x: Vertex) -> Option<Vertex> {
        if x > self.n {
            None
        } else {
            Some(x)
        }
    }
}

/// Batched LCA over the compressed tree. Queries may name any two distinct
/// vertices; internally each endpoint is treated as a leaf via the phantom
/// rule. The whole batch is charged O(stride) rounds.
pub fn lca_batch(
    p: &ParentMap,
    dep: &DepthMap,
    ct: &CompressedTree,
    table: &DoublingTable,
    queries: &[(Vertex, Vertex)],
    ledger: &mut RoundLedger,
) -> Result<BTreeMap<(Vertex, Vertex), LcaAnswer>> {
    let t = ct.stride;
    let nav = Nav {
        p,
        dep,
        n: p.len() as Vertex,
    };
    let mut answers = BTreeMap::new();
    // per-phase maxima across the batch; queries advance in lockstep
    let mut max_steps = [0u64; 4];

    for &(qu, qv) in queries {
        if qu == qv {
            return Err(Error::DegenerateQuery(qu, qv));
        }
        let leaves = p.children();
        let phantomize = |x: Vertex| {
            if leaves.is_leaf(x) {
                x
            } else {
                x + nav.n
            }
        };
        let (mut u, mut v) = (phantomize(qu), phantomize(qv));
        let swapped = nav.depth(u) < nav.depth(v);
        if swapped {
            std::mem::swap(&mut u, &mut v);
        }

        let mut uh = u;
        if nav.depth(u) > nav.depth(v) + 2 * t as u32 {
            // climb to the sample, then exponential descent toward dep(v)
            let mut hops = 0u64;
            while !ct.contains(uh) {
                uh = nav.parent(uh);
                hops += 1;
            }
            for k in (0..table.level_count()).rev() {
                let g = table.get(k, uh);
                if nav.depth(g) > nav.depth(v) {
                    uh = g;
                }
                hops += 1;
            }
            max_steps[0] = max_steps[0].max(hops);
        }
        debug_assert!(nav.depth(uh) >= nav.depth(v));
        debug_assert!(nav.depth(uh) <= nav.depth(v) + 2 * t as u32);

        // fast path: align depths, then lockstep ascent for up to 4t steps
        let mut a = uh;
        let mut last_a = None;
        for _ in 0..(nav.depth(uh) - nav.depth(v)) {
            last_a = Some(a);
            a = nav.parent(a);
        }
        let mut b = v;
        let mut last_b = None;
        let mut fast = None;
        for step in 0..=(4 * t as u64) {
            if a == b {
                fast = Some((a, last_a, last_b));
                max_steps[1] = max_steps[1].max(step);
                break;
            }
            last_a = Some(a);
            last_b = Some(b);
            a = nav.parent(a);
            b = nav.parent(b);
        }

        let (lca, cu, cv) = match fast {
            Some(hit) => hit,
            None => {
                // slow path through the compressed tree
                let climb = |mut x: Vertex, steps: &mut u64| {
                    while !ct.contains(x) {
                        x = nav.parent(x);
                        *steps += 1;
                    }
                    x
                };
                let mut steps = 0u64;
                let mut x = climb(uh, &mut steps);
                let mut y = climb(v, &mut steps);
                max_steps[2] = max_steps[2].max(steps);
                // align in p' (depths are multiples of t)
                for k in (0..table.level_count()).rev() {
                    if nav.depth(x) > nav.depth(y) && nav.depth(table.get(k, x)) >= nav.depth(y) {
                        x = table.get(k, x);
                    }
                    if nav.depth(y) > nav.depth(x) && nav.depth(table.get(k, y)) >= nav.depth(x) {
                        y = table.get(k, y);
                    }
                }
                debug_assert_eq!(nav.depth(x), nav.depth(y));
                debug_assert_ne!(x, y, "slow path reached a common sampled ancestor");
                for k in (0..table.level_count()).rev() {
                    if table.get(k, x) != table.get(k, y) {
                        x = table.get(k, x);
                        y = table.get(k, y);
                    }
                }
                // x, y now hang just below the LCA in p'; finish in p
                let mut j = 0u64;
                let (mut a, mut b) = (x, y);
                let (mut la, mut lb) = (None, None);
                while a != b {
                    la = Some(a);
                    lb = Some(b);
                    a = nav.parent(a);
                    b = nav.parent(b);
                    j += 1;
                    debug_assert!(j <= 2 * t as u64);
                }
                max_steps[3] = max_steps[3].max(j);
                (a, la, lb)
            }
        };

        let answer = LcaAnswer {
            lca,
            child_toward_u: if swapped { cv } else { cu }.and_then(|c| nav.unphantom(c)),
            child_toward_v: if swapped { cu } else { cv }.and_then(|c| nav.unphantom(c)),
        };
        answers.insert((qu, qv), answer);
    }

    let volume = (p.len() + 3 * queries.len()) as u64;
    ledger.charge(PrimitiveKind::MultiQuery, volume);
    let total_steps: u64 = max_steps.iter().sum::<u64>() + 4 * t as u64;
    ledger.charge_steps(PrimitiveKind::LinkDoubleStep, total_steps, volume);
    Ok(answers)
}

/// Generates the ancestor path (u, p(u), ..., v) for every pair. Short paths
/// are walked directly; long paths go through the compressed skeleton and a
/// fixpoint in-fill, so charged rounds stay logarithmic in the depth.
pub fn multipaths(
    p: &ParentMap,
    dep: &DepthMap,
    ct: &CompressedTree,
    table: &DoublingTable,
    pairs: &[(Vertex, Vertex)],
    ledger: &mut RoundLedger,
) -> Result<Vec<Vec<Vertex>>> {
    let t = ct.stride;
    let mut out = Vec::with_capacity(pairs.len());
    let mut max_direct = 0u64;
    let mut max_skeleton_log = 0u64;
    let mut max_fill = 0u64;
    let mut total_len = 0u64;

    for &(u, v) in pairs {
        if dep.depth_of(u) < dep.depth_of(v) {
            return Err(Error::NotAncestor(u, v));
        }
        let gap = (dep.depth_of(u) - dep.depth_of(v)) as usize;
        if gap <= 2 * t {
            let mut path = vec![u];
            let mut x = u;
            for _ in 0..gap {
                x = p.parent_of(x);
                path.push(x);
            }
            if x != v {
                return Err(Error::NotAncestor(u, v));
            }
            max_direct = max_direct.max(gap as u64);
            total_len += path.len() as u64;
            out.push(path);
            continue;
        }

        // climb into the sample, then exponential search for the sampled
        // ancestor just below dep(v)
        let mut up = u;
        while !ct.contains(up) {
            up = p.parent_of(up);
        }
        let mut vp = up;
        for k in (0..table.level_count()).rev() {
            let g = table.get(k, vp);
            if dep.depth_of(g) > dep.depth_of(v) {
                vp = g;
            }
        }
        // validate ancestry before filling: v must sit on vp's chain
        let tail_gap = (dep.depth_of(vp) - dep.depth_of(v)) as usize;
        let mut x = vp;
        for _ in 0..tail_gap {
            x = p.parent_of(x);
        }
        if x != v {
            return Err(Error::NotAncestor(u, v));
        }

        // skeleton u -> (sampled chain) -> v
        let mut skeleton = vec![u];
        let hops = (dep.depth_of(up) - dep.depth_of(vp)) as usize / t;
        let mut s = up;
        if s != u {
            skeleton.push(s);
        }
        for _ in 0..hops {
            s = ct.parent_c(s);
            skeleton.push(s);
        }
        skeleton.push(v);
        skeleton.dedup();
        max_skeleton_log = max_skeleton_log.max((hops as u64 + 2).ilog2() as u64 + 1);

        // fixpoint in-fill: close every gap by one parent hop per round
        let mut seq = skeleton;
        let mut rounds = 0u64;
        loop {
            let mut next = Vec::with_capacity(seq.len() * 2);
            let mut grew = false;
            for i in 0..seq.len() {
                next.push(seq[i]);
                if i + 1 < seq.len() && seq[i + 1] != p.parent_of(seq[i]) {
                    next.push(p.parent_of(seq[i]));
                    grew = true;
                }
            }
            seq = next;
            if !grew {
                break;
            }
            rounds += 1;
        }
        max_fill = max_fill.max(rounds);
        debug_assert_eq!(seq.len(), gap + 1);
        total_len += seq.len() as u64;
        out.push(seq);
    }

    let volume = p.len() as u64 + total_len;
    ledger.charge(PrimitiveKind::MultiQuery, volume);
    ledger.charge_steps(
        PrimitiveKind::LinkDoubleStep,
        max_direct + max_skeleton_log + max_fill,
        volume,
    );
    Ok(out)
}
