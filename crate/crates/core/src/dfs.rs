//! DFS sequence construction by leaf sampling.
//!
//! A DFS sequence of a rooted tree lists each vertex once per incidence on
//! the Euler walk: the root first, every vertex again after each child
//! subtree finishes, for a total length of 2n - 1. Trees that fit on one
//! machine are walked directly; larger trees sample a small set of leaves,
//! stitch the sampled root-to-leaf paths into a skeleton, expand each vertex
//! to its correct multiplicity, and recurse on the missing subtrees.

use std::collections::{HashMap, HashSet};

use rand::Rng;

use crate::forest::{compute_depths, ChildTable, ParentMap};
use crate::mpc::{PrimitiveKind, RoundLedger};
use crate::tree::{build_doubling, compress, lca_batch, multipaths};
use crate::{Error, Result, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfsSequence {
    pub entries: Vec<Vertex>,
    pub n: usize,
}

impl DfsSequence {
    /// First and last occurrence of each vertex, 0-based, indexed by vertex.
    pub fn spans(&self) -> Vec<(usize, usize)> {
        let mut first = vec![usize::MAX; self.n + 1];
        let mut last = vec![0usize; self.n + 1];
        for (i, &v) in self.entries.iter().enumerate() {
            let v = v as usize;
            if first[v] == usize::MAX {
                first[v] = i;
            }
            last[v] = i;
        }
        (0..=self.n).map(|v| (first[v], last[v])).collect()
    }
}

/// Target sample size. The nominal s^(1/3) * log2 n target is capped at
/// sqrt(s)/4 so the expected sample stays well inside the abort threshold
/// |S|^2 <= s even when s is small relative to n and many subtrees recurse.
fn sampling_target(n: usize, s: usize) -> usize {
    let nominal = ((s as f64).powf(1.0 / 3.0) * (n as f64).log2()).ceil() as usize;
    let cap = (((s as f64).sqrt() as usize) / 4).max(1);
    nominal.min(cap).max(1)
}

/// Direct Euler walk for trees that fit in local memory. Children are
/// visited in ascending vertex order.
fn local_dfs(
    children: &ChildTable,
    root: Vertex,
    n: usize,
    ledger: &mut RoundLedger,
) -> Vec<Vertex> {
    let mut seq = vec![root];
    let mut stack = vec![(root, 0usize)];
    while let Some((v, i)) = stack.pop() {
        let kids = children.children_of(v);
        if i < kids.len() {
            stack.push((v, i + 1));
            let c = kids[i];
            seq.push(c);
            stack.push((c, 0));
        } else if let Some(&(parent, _)) = stack.last() {
            seq.push(parent);
        }
    }
    debug_assert_eq!(seq.len(), 2 * n - 1);
    ledger.charge(PrimitiveKind::LocalRound, (2 * n - 1) as u64);
    seq
}

/// Expands a skeleton sequence (alternating up/down root-to-leaf paths) so
/// that every listed vertex appears with its true DFS multiplicity relative
/// to its present children. At each appearance of v the copy count is
/// rank(next child) - rank(previous child), where a parent on the left
/// counts as rank 0 and a parent on the right as rank deg+1.
pub fn expand_copies(
    p: &ParentMap,
    children: &ChildTable,
    skeleton: &[Vertex],
) -> Result<Vec<Vertex>> {
    let mut out = Vec::with_capacity(skeleton.len() * 2);
    for (i, &v) in skeleton.iter().enumerate() {
        let rank_of = |w: Option<&Vertex>, fallback: usize| -> Result<usize> {
            match w {
                None => Ok(fallback),
                Some(&w) if p.parent_of(w) == v && w != v => Ok(children.rank(v, w)),
                Some(&w) if p.parent_of(v) == w => Ok(fallback),
                _ => Err(Error::BadSkeleton(i)),
            }
        };
        let deg = children.children_of(v).len();
        let r_prev = rank_of(if i > 0 { skeleton.get(i - 1) } else { None }, 0)?;
        let r_next = rank_of(skeleton.get(i + 1), deg + 1)?;
        if r_next <= r_prev {
            return Err(Error::BadSkeleton(i));
        }
        for _ in r_prev..r_next {
            out.push(v);
        }
    }
    Ok(out)
}

fn dfs_inner<R: Rng>(
    p: &ParentMap,
    s: usize,
    rng: &mut R,
    ledger: &mut RoundLedger,
) -> Result<Vec<Vertex>> {
    let n = p.len();
    let root = p.single_root()?;
    let children = p.children();
    if n <= s.max(1) {
        return Ok(local_dfs(&children, root, n, ledger));
    }

    let dep = compute_depths(p, ledger);
    let ct = compress(p, &dep, ledger);
    let table = build_doubling(&ct, ledger);

    let leaves: Vec<Vertex> = p.vertices().filter(|&v| children.is_leaf(v)).collect();
    let target = sampling_target(n, s);
    let prob = (target as f64 / leaves.len() as f64).min(1.0);
    let mut sample: Vec<Vertex> = leaves
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(prob))
        .collect();
    ledger.charge(PrimitiveKind::LocalRound, n as u64);
    let squared = sample.len() * sample.len();
    if squared > s {
        return Err(Error::SamplingFail {
            squared: squared as u64,
            s: s as u64,
        });
    }
    if sample.is_empty() {
        sample.push(leaves[0]);
    }

    // all-pairs LCA over the sample, then sort the leaves into visit order
    // by comparing child ranks at the shared ancestor
    let mut queries = Vec::new();
    for i in 0..sample.len() {
        for j in i + 1..sample.len() {
            queries.push((sample[i], sample[j]));
        }
    }
    let raw = lca_batch(p, &dep, &ct, &table, &queries, ledger)?;
    let mut pair_info: HashMap<(Vertex, Vertex), (Vertex, Vertex, Vertex)> = HashMap::new();
    for (&(a, b), ans) in &raw {
        // sampled endpoints are leaves, so both children exist
        let (ca, cb) = (ans.child_toward_u.unwrap(), ans.child_toward_v.unwrap());
        pair_info.insert((a, b), (ans.lca, ca, cb));
        pair_info.insert((b, a), (ans.lca, cb, ca));
    }
    sample.sort_by(|&a, &b| {
        if a == b {
            return std::cmp::Ordering::Equal;
        }
        let &(w, ca, cb) = &pair_info[&(a, b)];
        children.rank(w, ca).cmp(&children.rank(w, cb))
    });
    ledger.charge(PrimitiveKind::Sort, n as u64);

    // skeleton: descend to the first leaf, hop leaf to leaf through the
    // shared ancestors, climb back to the root
    let mut path_pairs = vec![(sample[0], root)];
    for k in 0..sample.len() - 1 {
        let w = pair_info[&(sample[k], sample[k + 1])].0;
        path_pairs.push((sample[k], w));
        path_pairs.push((sample[k + 1], w));
    }
    path_pairs.push((*sample.last().unwrap(), root));
    let paths = multipaths(p, &dep, &ct, &table, &path_pairs, ledger)?;

    let mut skeleton: Vec<Vertex> = Vec::new();
    let extend = |seg: &[Vertex], skeleton: &mut Vec<Vertex>| {
        for &x in seg {
            if skeleton.last() != Some(&x) {
                skeleton.push(x);
            }
        }
    };
    let mut down = paths[0].clone();
    down.reverse();
    extend(&down, &mut skeleton);
    for k in 0..sample.len() - 1 {
        extend(&paths[1 + 2 * k], &mut skeleton);
        let mut d = paths[2 + 2 * k].clone();
        d.reverse();
        extend(&d, &mut skeleton);
    }
    extend(paths.last().unwrap(), &mut skeleton);

    let expanded = expand_copies(p, &children, &skeleton)?;

    // recurse on every subtree hanging off the skeleton that it missed
    let present: HashSet<Vertex> = expanded.iter().copied().collect();
    let mut pending: HashMap<Vertex, HashMap<usize, Vec<Vertex>>> = HashMap::new();
    for &v in &present {
        for &c in children.children_of(v) {
            if !present.contains(&c) {
                let sub = subtree_sequence(p, &children, c, s, rng, ledger)?;
                pending
                    .entry(v)
                    .or_default()
                    .insert(children.rank(v, c), sub);
            }
        }
    }

    let mut seq = Vec::with_capacity(2 * n - 1);
    let mut seen: HashMap<Vertex, usize> = HashMap::new();
    for &v in &expanded {
        seq.push(v);
        let cnt = seen.entry(v).or_insert(0);
        *cnt += 1;
        if let Some(slots) = pending.get_mut(&v) {
            if let Some(sub) = slots.remove(cnt) {
                seq.extend(sub);
            }
        }
    }
    ledger.charge(PrimitiveKind::Route, seq.len() as u64);
    debug_assert!(pending.values().all(|m| m.is_empty()));
    Ok(seq)
}

/// Extracts the subtree rooted at `c`, relabels its vertices monotonically
/// (which preserves child rank order), recurses, and maps labels back.
fn subtree_sequence<R: Rng>(
    p: &ParentMap,
    children: &ChildTable,
    c: Vertex,
    s: usize,
    rng: &mut R,
    ledger: &mut RoundLedger,
) -> Result<Vec<Vertex>> {
    let mut verts = vec![c];
    let mut stack = vec![c];
    while let Some(v) = stack.pop() {
        for &k in children.children_of(v) {
            verts.push(k);
            stack.push(k);
        }
    }
    verts.sort_unstable();
    let index: HashMap<Vertex, Vertex> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, (i + 1) as Vertex))
        .collect();
    let parent: Vec<Vertex> = verts
        .iter()
        .map(|&v| if v == c { index[&c] } else { index[&p.parent_of(v)] })
        .collect();
    let sub = ParentMap::new(parent);
    let seq = dfs_inner(&sub, s, rng, ledger)?;
    Ok(seq.into_iter().map(|x| verts[x as usize - 1]).collect())
}

/// Builds the DFS sequence of a rooted tree with local memory `s`.
/// Returns `Error::SamplingFail` when a sampling round draws more than
/// sqrt(s) leaves; callers are expected to retry with a fresh seed.
pub fn leaf_sampling_dfs<R: Rng>(
    p: &ParentMap,
    s: usize,
    rng: &mut R,
    ledger: &mut RoundLedger,
) -> Result<DfsSequence> {
    let entries = dfs_inner(p, s, rng, ledger)?;
    debug_assert_eq!(entries.len(), 2 * p.len() - 1);
    Ok(DfsSequence {
        entries,
        n: p.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::sequential_dfs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_tree(n: usize, seed: u64) -> ParentMap {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ParentMap::new(
            (1..=n)
                .map(|v| if v == 1 { 1 } else { rng.gen_range(1..v) as Vertex })
                .collect(),
        )
    }

    #[test]
    fn path_sequence() {
        let p = ParentMap::new(vec![1, 1, 2, 3, 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut l = RoundLedger::default();
        let seq = leaf_sampling_dfs(&p, 2, &mut rng, &mut l).unwrap();
        assert_eq!(seq.entries, vec![1, 2, 3, 4, 5, 4, 3, 2, 1]);
    }

    #[test]
    fn star_sequence() {
        // 7 leaves with s = 7 forces the sampling path but cannot abort
        // (the threshold needs |S| >= 3 with a target of 1)
        let p = ParentMap::new(vec![1; 8]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut l = RoundLedger::default();
        let seq = leaf_sampling_dfs(&p, 7, &mut rng, &mut l).unwrap();
        let want: Vec<Vertex> = std::iter::once(1)
            .chain((2..=8).flat_map(|v| [v, 1]))
            .collect();
        assert_eq!(seq.entries, want);
    }

    #[test]
    fn local_base_case_matches_oracle() {
        for seed in 0..10 {
            let p = random_tree(40, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut l = RoundLedger::default();
            let seq = leaf_sampling_dfs(&p, 100, &mut rng, &mut l).unwrap();
            assert_eq!(seq.entries, sequential_dfs(&p).unwrap().entries);
        }
    }

    #[test]
    fn expand_copies_star_skeleton() {
        let p = ParentMap::new(vec![1, 1, 1, 1]);
        let children = p.children();
        // skeleton touching only leaf 3: root copies 2 then 2
        let out = expand_copies(&p, &children, &[1, 3, 1]).unwrap();
        assert_eq!(out, vec![1, 1, 3, 1, 1]);
    }

    #[test]
    fn expand_copies_rejects_gibberish() {
        let p = ParentMap::new(vec![1, 1, 2, 3, 4]);
        let children = p.children();
        assert!(matches!(
            expand_copies(&p, &children, &[2, 5, 2]),
            Err(Error::BadSkeleton(_))
        ));
        assert!(expand_copies(&p, &children, &[2, 3, 2]).is_ok());
        // climbing out of a child and re-descending into it is invalid
        assert!(expand_copies(&p, &children, &[3, 2, 3]).is_err());
        assert!(expand_copies(&p, &children, &[2, 3, 2, 3]).is_err());
    }

    #[test]
    fn sampled_recursion_matches_oracle() {
        let mut failures = 0;
        let mut runs = 0;
        for seed in 0..40 {
            let n = 60 + (seed as usize * 97) % 1940;
            let p = random_tree(n, 500 + seed);
            let expect = sequential_dfs(&p).unwrap().entries;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut l = RoundLedger::default();
            runs += 1;
            match leaf_sampling_dfs(&p, 64, &mut rng, &mut l) {
                Ok(seq) => {
                    assert_eq!(seq.entries.len(), 2 * n - 1);
                    assert_eq!(seq.entries, expect, "seed {seed} n {n}");
                }
                Err(Error::SamplingFail { .. }) => failures += 1,
                Err(e) => panic!("unexpected error: {e}"),
            }
        }
        assert!(failures * 20 < runs, "{failures}/{runs} sampling aborts");
    }

    #[test]
    fn deep_path_forces_sampling() {
        let n = 3000usize;
        let p = ParentMap::new(
            (1..=n)
                .map(|v| if v == 1 { 1 } else { v as Vertex - 1 })
                .collect(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut l = RoundLedger::default();
        let seq = leaf_sampling_dfs(&p, 50, &mut rng, &mut l).unwrap();
        assert_eq!(seq.entries, sequential_dfs(&p).unwrap().entries);
        // rounds must stay far below the tree depth
        assert!(l.rounds_charged < 500, "rounds {}", l.rounds_charged);
    }

    #[test]
    fn spans_cover_subtrees() {
        let p = random_tree(300, 11);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut l = RoundLedger::default();
        let seq = leaf_sampling_dfs(&p, 32, &mut rng, &mut l).unwrap();
        let spans = seq.spans();
        for v in p.vertices() {
            let (f, g) = spans[v as usize];
            assert_eq!(seq.entries[f], v);
            assert_eq!(seq.entries[g], v);
            if !p.is_root(v) {
                let (pf, pg) = spans[p.parent_of(v) as usize];
                assert!(pf < f && g < pg, "subtree nesting for {v}");
            }
        }
    }
}
