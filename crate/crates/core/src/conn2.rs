//! 2-edge-connectivity and biconnectivity pipelines.
//!
//! Both pipelines share the same skeleton per connected component: spanning
//! tree, depths, back-ancestor clearance values (`bac`), a DFS sequence, and
//! range-minimum queries over subtree spans. Bridges fall out of the subtree
//! minima directly; blocks come from connected components of an auxiliary
//! graph on the non-root tree vertices.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dfs::{leaf_sampling_dfs, DfsSequence};
use crate::forest::{compute_depths, ComponentLabeling, DepthMap, ParentMap};
use crate::graph::Graph;
use crate::mpc::{PrimitiveKind, RoundLedger};
use crate::rmq::{rmq_batch, rmq_preprocess};
use crate::sf::spanning_forest;
use crate::tree::{build_doubling, compress, lca_batch, CompressedTree, DoublingTable, LcaAnswer};
use crate::{Result, Vertex};

/// Edge -> block color. Colors are vertex identifiers of block
/// representatives, so they are globally unique across components.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeColoring {
    pub col: BTreeMap<(Vertex, Vertex), Vertex>,
}

impl EdgeColoring {
    pub fn blocks(&self) -> Vec<BTreeSet<(Vertex, Vertex)>> {
        let mut by_color: BTreeMap<Vertex, BTreeSet<(Vertex, Vertex)>> = BTreeMap::new();
        for (&e, &c) in &self.col {
            by_color.entry(c).or_default().insert(e);
        }
        by_color.into_values().collect()
    }

    pub fn write<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        for (&(u, v), &c) in &self.col {
            writeln!(w, "{u} {v} {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct BiconnOutput {
    pub coloring: EdgeColoring,
    pub cut_vertices: Vec<Vertex>,
}

/// Non-root tree vertices plus the linking edges whose connected components
/// are exactly the blocks of the underlying graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxiliaryGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
}

/// bac(v) = min(dep(v), min dep(LCA(v, w)) over edges (v, w) where w is not
/// v's tree parent). One LCA batch covers every edge; the per-edge answers
/// are returned for reuse.
pub fn compute_bac(
    g: &Graph,
    p: &ParentMap,
    dep: &DepthMap,
    ct: &CompressedTree,
    table: &DoublingTable,
    ledger: &mut RoundLedger,
) -> Result<(Vec<i64>, BTreeMap<(Vertex, Vertex), LcaAnswer>)> {
    let answers = lca_batch(p, dep, ct, table, &g.edges, ledger)?;
    let mut bac: Vec<i64> = (0..=p.len())
        .map(|v| if v == 0 { 0 } else { dep.depth_of(v as Vertex) as i64 })
        .collect();
    for &(u, v) in &g.edges {
        let d = dep.depth_of(answers[&(u, v)].lca) as i64;
        if p.parent_of(u) != v {
            bac[u as usize] = bac[u as usize].min(d);
        }
        if p.parent_of(v) != u {
            bac[v as usize] = bac[v as usize].min(d);
        }
    }
    Ok((bac, answers))
}

/// Minimum bac over each vertex's subtree, read off the DFS sequence: wide
/// spans go through the range-minimum index in one batch, narrow ones are
/// scanned locally.
pub fn subtree_bac_min(
    seq: &DfsSequence,
    bac: &[i64],
    ledger: &mut RoundLedger,
) -> Result<Vec<i64>> {
    let b: Vec<i64> = seq.entries.iter().map(|&v| bac[v as usize]).collect();
    let idx = rmq_preprocess(&b, ledger)?;
    let spans = seq.spans();
    let mut out = vec![i64::MAX; seq.n + 1];
    let mut wide = Vec::new();
    let mut wide_v = Vec::new();
    let mut scanned = 0u64;
    for v in 1..=seq.n {
        let (f, l) = spans[v];
        // 1-based inclusive range
        if f + 1 + idx.t <= l + 1 {
            wide.push((f + 1, l + 1));
            wide_v.push(v);
        } else {
            out[v] = b[f..=l].iter().copied().min().unwrap();
            scanned += (l - f + 1) as u64;
        }
    }
    if scanned > 0 {
        ledger.charge(PrimitiveKind::LocalRound, scanned);
    }
    if !wide.is_empty() {
        let answers = rmq_batch(&idx, &wide, ledger)?;
        for (v, a) in wide_v.into_iter().zip(answers) {
            out[v] = a;
        }
    }
    Ok(out)
}

/// One connected component, relabeled 1..k in ascending global order.
struct Component {
    verts: Vec<Vertex>,
    graph: Graph,
    parent: ParentMap,
}

impl Component {
    fn to_global(&self, local: Vertex) -> Vertex {
        self.verts[local as usize - 1]
    }
}

fn split_components(g: &Graph, p: &ParentMap, labels: &ComponentLabeling) -> Vec<Component> {
    let mut groups: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for v in p.vertices() {
        groups.entry(labels.label_of(v)).or_default().push(v);
    }
    let mut index: HashMap<Vertex, Vertex> = HashMap::new();
    let mut comps = Vec::new();
    for verts in groups.into_values() {
        index.clear();
        for (i, &v) in verts.iter().enumerate() {
            index.insert(v, (i + 1) as Vertex);
        }
        let parent = ParentMap::new(verts.iter().map(|&v| index[&p.parent_of(v)]).collect());
        let edges: Vec<(Vertex, Vertex)> = g
            .edges
            .iter()
            .filter(|(u, _)| index.contains_key(u))
            .map(|&(u, v)| (index[&u], index[&v]))
            .collect();
        let graph = Graph::from_edges(verts.len(), edges).expect("component relabeling");
        comps.push(Component {
            verts,
            graph,
            parent,
        });
    }
    comps
}

struct Prepared {
    dep: DepthMap,
    lcas: BTreeMap<(Vertex, Vertex), LcaAnswer>,
    smin: Vec<i64>,
}

fn prepare(comp: &Component, s: usize, rng: &mut ChaCha8Rng, ledger: &mut RoundLedger) -> Result<Prepared> {
    let p = &comp.parent;
    let dep = compute_depths(p, ledger);
    let ct = compress(p, &dep, ledger);
    let table = build_doubling(&ct, ledger);
    let (bac, lcas) = compute_bac(&comp.graph, p, &dep, &ct, &table, ledger)?;
    let seq = leaf_sampling_dfs(p, s, rng, ledger)?;
    let smin = subtree_bac_min(&seq, &bac, ledger)?;
    Ok(Prepared { dep, lcas, smin })
}

/// All bridges of `g`, normalized and sorted. `s` is the local memory
/// capacity driving the DFS base case, `method` names the spanning forest
/// strategy.
pub fn bridges(
    g: &Graph,
    s: usize,
    method: &str,
    seed: u64,
    ledger: &mut RoundLedger,
) -> Result<Vec<(Vertex, Vertex)>> {
    let (p, labels) = spanning_forest(g, method, ledger);
    ledger.charge(PrimitiveKind::Sort, g.words());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for comp in split_components(g, &p, &labels) {
        if comp.verts.len() < 2 {
            continue;
        }
        let prep = prepare(&comp, s, &mut rng, ledger)?;
        for v in comp.parent.vertices() {
            if comp.parent.is_root(v) {
                continue;
            }
            if prep.smin[v as usize] >= prep.dep.depth_of(v) as i64 {
                let (a, b) = (comp.to_global(v), comp.to_global(comp.parent.parent_of(v)));
                out.push((a.min(b), a.max(b)));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Builds the auxiliary graph for one rooted component: vertices are the
/// non-root tree vertices; a tree edge (v, p(v)) joins them when v's subtree
/// can clear p(v), and a non-tree edge joins its endpoints when neither one
/// is their common ancestor.
pub fn build_auxiliary_graph(
    g: &Graph,
    p: &ParentMap,
    dep: &DepthMap,
    smin: &[i64],
    lcas: &BTreeMap<(Vertex, Vertex), LcaAnswer>,
) -> AuxiliaryGraph {
    let vertices: Vec<Vertex> = p.vertices().filter(|&v| !p.is_root(v)).collect();
    let mut edges = Vec::new();
    for &v in &vertices {
        let pv = p.parent_of(v);
        if !p.is_root(pv) && smin[v as usize] < dep.depth_of(pv) as i64 {
            edges.push((v.min(pv), v.max(pv)));
        }
    }
    for &(u, v) in &g.edges {
        if p.parent_of(u) == v || p.parent_of(v) == u {
            continue;
        }
        let w = lcas[&(u, v)].lca;
        if w != u && w != v {
            edges.push((u, v));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    AuxiliaryGraph { vertices, edges }
}

/// Block coloring and cut vertices of `g`. Every edge gets the color of its
/// block; a vertex is a cut vertex iff it touches two or more colors.
pub fn biconnectivity(
    g: &Graph,
    s: usize,
    method: &str,
    seed: u64,
    ledger: &mut RoundLedger,
) -> Result<BiconnOutput> {
    let (p, labels) = spanning_forest(g, method, ledger);
    ledger.charge(PrimitiveKind::Sort, g.words());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coloring = EdgeColoring::default();

    for comp in split_components(g, &p, &labels) {
        if comp.verts.len() < 2 {
            continue;
        }
        let prep = prepare(&comp, s, &mut rng, ledger)?;
        let aux = build_auxiliary_graph(&comp.graph, &comp.parent, &prep.dep, &prep.smin, &prep.lcas);

        // components of the auxiliary graph, via a third relabeling
        let aux_index: HashMap<Vertex, Vertex> = aux
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, (i + 1) as Vertex))
            .collect();
        let aux_graph = Graph::from_edges(
            aux.vertices.len(),
            aux.edges.iter().map(|&(u, v)| (aux_index[&u], aux_index[&v])),
        )
        .expect("auxiliary relabeling");
        let (_, aux_labels) = spanning_forest(&aux_graph, method, ledger);
        // local non-root vertex -> globally unique color
        let color_of = |v: Vertex| -> Vertex {
            let rep = aux_labels.label_of(aux_index[&v]);
            comp.to_global(aux.vertices[rep as usize - 1])
        };

        for &(u, v) in &comp.graph.edges {
            let deeper = if comp.parent.parent_of(u) == v {
                u
            } else if comp.parent.parent_of(v) == u {
                v
            } else if prep.dep.depth_of(v) > prep.dep.depth_of(u) {
                v
            } else {
                u
            };
            let (gu, gv) = (comp.to_global(u), comp.to_global(v));
            coloring
                .col
                .insert((gu.min(gv), gu.max(gv)), color_of(deeper));
        }
    }

    let mut incident: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
    for (&(u, v), &c) in &coloring.col {
        incident.entry(u).or_default().insert(c);
        incident.entry(v).or_default().insert(c);
    }
    let cut_vertices = incident
        .into_iter()
        .filter(|(_, cs)| cs.len() >= 2)
        .map(|(v, _)| v)
        .collect();
    Ok(BiconnOutput {
        coloring,
        cut_vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, random_graph, GraphKind};
    use crate::oracles::{hopcroft_tarjan_blocks, partitions_equal, tarjan_bridges};

    fn run_bridges(g: &Graph) -> Vec<(Vertex, Vertex)> {
        let mut l = RoundLedger::default();
        bridges(g, 64, "bfs_layered", 7, &mut l).unwrap()
    }

    #[test]
    fn bac_triangle_pendant() {
        let g = generate(GraphKind::TrianglePendant, 4, 0).unwrap();
        let mut l = RoundLedger::default();
        let (p, _) = spanning_forest(&g, "bfs_layered", &mut l);
        let dep = compute_depths(&p, &mut l);
        let ct = compress(&p, &dep, &mut l);
        let table = build_doubling(&ct, &mut l);
        let (bac, _) = compute_bac(&g, &p, &dep, &ct, &table, &mut l).unwrap();
        // vertices 1,2,3 sit on the triangle; 4 hangs off 3
        assert_eq!(bac[1], 0);
        assert_eq!(bac[2], 0);
        assert_eq!(bac[3], 0);
        assert_eq!(bac[4] as u32, dep.depth_of(4));
    }

    #[test]
    fn bridges_gadgets() {
        let path = generate(GraphKind::Path, 5, 0).unwrap();
        assert_eq!(run_bridges(&path).len(), 4);
        let cycle = generate(GraphKind::Cycle, 8, 0).unwrap();
        assert!(run_bridges(&cycle).is_empty());
        let tp = generate(GraphKind::TrianglePendant, 4, 0).unwrap();
        assert_eq!(run_bridges(&tp), vec![(3, 4)]);
        let bow = generate(GraphKind::Bowtie, 5, 0).unwrap();
        assert!(run_bridges(&bow).is_empty());
    }

    #[test]
    fn aux_graph_cycle_with_explicit_tree() {
        // C4 rooted along the path 1-2-3-4; the chord (1,4) pins bac(4) to 0
        let g = Graph::from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        let p = ParentMap::new(vec![1, 1, 2, 3]);
        let mut l = RoundLedger::default();
        let dep = compute_depths(&p, &mut l);
        let ct = compress(&p, &dep, &mut l);
        let table = build_doubling(&ct, &mut l);
        let (bac, lcas) = compute_bac(&g, &p, &dep, &ct, &table, &mut l).unwrap();
        let seq = crate::oracles::sequential_dfs(&p).unwrap();
        let smin = subtree_bac_min(&seq, &bac, &mut l).unwrap();
        let aux = build_auxiliary_graph(&g, &p, &dep, &smin, &lcas);
        assert_eq!(aux.vertices, vec![2, 3, 4]);
        assert_eq!(aux.edges, vec![(2, 3), (3, 4)]);
    }

    fn run_biconn(g: &Graph) -> BiconnOutput {
        let mut l = RoundLedger::default();
        biconnectivity(g, 64, "bfs_layered", 11, &mut l).unwrap()
    }

    #[test]
    fn biconn_bowtie() {
        let g = generate(GraphKind::Bowtie, 5, 0).unwrap();
        let out = run_biconn(&g);
        let blocks = out.coloring.blocks();
        assert_eq!(blocks.len(), 2);
        assert!(partitions_equal(&out.coloring, &hopcroft_tarjan_blocks(&g)));
        assert_eq!(out.cut_vertices, vec![3]);
    }

    #[test]
    fn biconn_gadgets() {
        for (kind, want_blocks) in [
            (GraphKind::WheelApex, 1usize),
            (GraphKind::TwoCycles, 2),
            (GraphKind::Cycle, 1),
        ] {
            let g = generate(kind, 8, 0).unwrap();
            let out = run_biconn(&g);
            assert_eq!(out.coloring.blocks().len(), want_blocks, "{kind:?}");
            assert!(partitions_equal(&out.coloring, &hopcroft_tarjan_blocks(&g)));
        }
        // path: every edge its own block, inner vertices are cut vertices
        let g = generate(GraphKind::Path, 6, 0).unwrap();
        let out = run_biconn(&g);
        assert_eq!(out.coloring.blocks().len(), 5);
        assert_eq!(out.cut_vertices, vec![2, 3, 4, 5]);
    }

    #[test]
    fn pipelines_match_oracles_random() {
        for seed in 0..25 {
            let n = 8 + (seed as usize * 37) % 192;
            let extra = (seed as usize * 13) % (2 * n);
            let g = random_graph(n, extra, 900 + seed);
            let got: BTreeSet<_> = run_bridges(&g).into_iter().collect();
            assert_eq!(got, tarjan_bridges(&g), "bridges seed {seed}");
            let out = run_biconn(&g);
            assert!(
                partitions_equal(&out.coloring, &hopcroft_tarjan_blocks(&g)),
                "blocks seed {seed} n {n}"
            );
        }
    }

    #[test]
    fn hooking_strategy_agrees() {
        for seed in 0..10 {
            let g = random_graph(40, 30, 40 + seed);
            let mut l = RoundLedger::default();
            let b = bridges(&g, 64, "hooking", seed, &mut l).unwrap();
            assert_eq!(b.into_iter().collect::<BTreeSet<_>>(), tarjan_bridges(&g));
            let out = biconnectivity(&g, 64, "hooking", seed, &mut l).unwrap();
            assert!(partitions_equal(&out.coloring, &hopcroft_tarjan_blocks(&g)));
        }
    }

    #[test]
    fn coloring_output_format() {
        let g = generate(GraphKind::TrianglePendant, 4, 0).unwrap();
        let out = run_biconn(&g);
        let mut buf = Vec::new();
        out.coloring.write(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        for line in &lines {
            assert_eq!(line.split_whitespace().count(), 3);
        }
        // sorted by edge
        let mut sorted = lines.clone();
        sorted.sort();
        assert_eq!(lines, sorted);
    }
}
