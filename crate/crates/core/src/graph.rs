//! Undirected simple graphs: edge-list I/O, test-graph generators, and the
//! exact diameter / bi-diameter oracles used by structural checks.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result, Vertex};

/// Undirected simple graph on vertices `1..=n`. Edges are stored normalized
/// with the smaller endpoint first, deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut g = Graph::new(n);
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            let e = g.check_edge(u, v)?;
            seen.insert(e);
        }
        g.edges = seen.into_iter().collect();
        Ok(g)
    }

    fn check_edge(&self, u: Vertex, v: Vertex) -> Result<(Vertex, Vertex)> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        for x in [u, v] {
            if x == 0 || x as usize > self.n {
                return Err(Error::VertexRange(x, self.n));
            }
        }
        Ok((u.min(v), u.max(v)))
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Input-size word count `N = n + m`.
    pub fn words(&self) -> u64 {
        (self.n + self.edges.len()) as u64
    }

    /// Adjacency lists with neighbors sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    pub fn write_edge_list<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "{} {}", self.n, self.edges.len())?;
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        for (u, v) in edges {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Parses the `n m` header followed by `m` lines `u v`. Duplicate edges are
/// deduplicated with a warning on stderr; self-loops are errors.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut lines = reader.lines().enumerate();
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })
        .and_then(|(i, l)| Ok((i + 1, l?)))?;
    let mut head = header.split_whitespace();
    let n: usize = parse_field(head.next(), line_no, "vertex count")?;
    let m: usize = parse_field(head.next(), line_no, "edge count")?;

    let mut g = Graph::new(n);
    let mut seen = BTreeSet::new();
    let mut read = 0;
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if read == m {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("more than {m} edge lines"),
            });
        }
        let mut f = line.split_whitespace();
        let u: Vertex = parse_field(f.next(), i + 1, "endpoint")?;
        let v: Vertex = parse_field(f.next(), i + 1, "endpoint")?;
        let e = g.check_edge(u, v)?;
        if seen.insert(e) {
            g.edges.push(e);
        } else {
            eprintln!("warning: duplicate edge {u} {v} on line {}, deduplicated", i + 1);
        }
        read += 1;
    }
    if read < m {
        return Err(Error::Parse {
            line: read + 1,
            msg: format!("expected {m} edges, found {read}"),
        });
    }
    g.edges = seen.into_iter().collect();
    Ok(g)
}

fn parse_field<T: FromStr>(field: Option<&str>, line: usize, what: &str) -> Result<T> {
    field
        .ok_or_else(|| Error::Parse {
            line,
            msg: format!("missing {what}"),
        })?
        .parse()
        .map_err(|_| Error::Parse {
            line,
            msg: format!("bad {what}"),
        })
}

/// Generator families. `WheelApex` is a cycle on `n-1` vertices plus an apex
/// adjacent to every cycle vertex; `TwoCycles` splits `n` into two disjoint
/// cycles. `Bowtie` and `TrianglePendant` are small fixed gadgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Path,
    Cycle,
    TwoCycles,
    WheelApex,
    RandomTree,
    Gnm(usize),
    Bowtie,
    TrianglePendant,
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "path" => GraphKind::Path,
            "cycle" => GraphKind::Cycle,
            "two_cycles" => GraphKind::TwoCycles,
            "wheel_apex" => GraphKind::WheelApex,
            "random_tree" => GraphKind::RandomTree,
            "bowtie" => GraphKind::Bowtie,
            "triangle_pendant" => GraphKind::TrianglePendant,
            other => {
                if let Some(m) = other.strip_prefix("gnm").and_then(|x| x.parse().ok()) {
                    GraphKind::Gnm(m)
                } else {
                    return Err(Error::UnknownKind(other.into()));
                }
            }
        })
    }
}

fn require(kind: &'static str, n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::TooSmall { kind, min, n })
    } else {
        Ok(())
    }
}

pub fn generate(kind: GraphKind, n: usize, seed: u64) -> Result<Graph> {
    let v = |x: usize| x as Vertex;
    match kind {
        GraphKind::Path => {
            require("path", n, 1)?;
            Graph::from_edges(n, (1..n).map(|i| (v(i), v(i + 1))))
        }
        GraphKind::Cycle => {
            require("cycle", n, 3)?;
            let mut e: Vec<_> = (1..n).map(|i| (v(i), v(i + 1))).collect();
            e.push((v(1), v(n)));
            Graph::from_edges(n, e)
        }
        GraphKind::TwoCycles => {
            require("two_cycles", n, 6)?;
            let half = n / 2;
            let mut e = Vec::new();
            for i in 1..half {
                e.push((v(i), v(i + 1)));
            }
            e.push((v(1), v(half)));
            for i in half + 1..n {
                e.push((v(i), v(i + 1)));
            }
            e.push((v(half + 1), v(n)));
            Graph::from_edges(n, e)
        }
        GraphKind::WheelApex => {
            require("wheel_apex", n, 4)?;
            let rim = n - 1;
            let mut e: Vec<_> = (1..rim).map(|i| (v(i), v(i + 1))).collect();
            if rim >= 3 {
                e.push((v(1), v(rim)));
            }
            for i in 1..=rim {
                e.push((v(i), v(n)));
            }
            Graph::from_edges(n, e)
        }
        GraphKind::RandomTree => {
            require("random_tree", n, 1)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut e = Vec::new();
            for child in 2..=n {
                let parent = rng.gen_range(1..child);
                e.push((v(parent), v(child)));
            }
            Graph::from_edges(n, e)
        }
        GraphKind::Gnm(m) => {
            require("gnm", n, 2)?;
            let max_m = n * (n - 1) / 2;
            let m = m.min(max_m);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut chosen = BTreeSet::new();
            while chosen.len() < m {
                let a = rng.gen_range(1..=n as Vertex);
                let b = rng.gen_range(1..=n as Vertex);
                if a != b {
                    chosen.insert((a.min(b), a.max(b)));
                }
            }
            Graph::from_edges(n, chosen)
        }
        GraphKind::Bowtie => {
            require("bowtie", n, 5)?;
            Graph::from_edges(5, [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5)])
        }
        GraphKind::TrianglePendant => {
            require("triangle_pendant", n, 4)?;
            Graph::from_edges(4, [(1, 2), (2, 3), (1, 3), (3, 4)])
        }
    }
}

/// Seeded connected-ish random graph used by the verification corpus: a
/// random spanning tree plus `extra` random non-tree edges.
pub fn random_graph(n: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    let mut order: Vec<Vertex> = (1..=n as Vertex).collect();
    order.shuffle(&mut rng);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i], order[j]);
        edges.insert((a.min(b), a.max(b)));
    }
    let max_m = n * (n - 1) / 2;
    let target = (n - 1 + extra).min(max_m);
    while edges.len() < target {
        let a = rng.gen_range(1..=n as Vertex);
        let b = rng.gen_range(1..=n as Vertex);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn bfs_dists(adj: &[Vec<Vertex>], src: Vertex) -> Vec<i64> {
    let mut dist = vec![-1i64; adj.len()];
    dist[src as usize] = 0;
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u as usize] {
            if dist[w as usize] < 0 {
                dist[w as usize] = dist[u as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Largest eccentricity within any component, by BFS from every vertex.
pub fn diameter_exact(g: &Graph) -> usize {
    let adj = g.adjacency();
    let mut best = 0i64;
    for v in 1..=g.n as Vertex {
        let d = bfs_dists(&adj, v);
        best = best.max(d.into_iter().max().unwrap_or(0));
    }
    best.max(0) as usize
}

/// Exhaustive bi-diameter: the largest, over vertex pairs lying on a common
/// simple cycle, of the minimum simple-cycle length containing both. Simple
/// cycles have length >= 3. Exponential; intended for n <= 12.
pub fn bidiameter_exact(g: &Graph) -> usize {
    assert!(g.n <= 12, "bidiameter_exact is gated to n <= 12");
    let n = g.n;
    let adj = g.adjacency();
    let inf = usize::MAX;
    let mut cyclen = vec![vec![inf; n + 1]; n + 1];

    // Enumerate each simple cycle once, anchored at its smallest vertex.
    fn extend(
        adj: &[Vec<Vertex>],
        start: Vertex,
        path: &mut Vec<Vertex>,
        on_path: &mut Vec<bool>,
        cyclen: &mut Vec<Vec<usize>>,
    ) {
        let last = *path.last().unwrap();
        for &w in &adj[last as usize] {
            if w == start && path.len() >= 3 {
                let len = path.len();
                for i in 0..len {
                    for j in i..len {
                        let (a, b) = (path[i] as usize, path[j] as usize);
                        if cyclen[a][b] > len {
                            cyclen[a][b] = len;
                            cyclen[b][a] = len;
                        }
                    }
                }
            } else if w > start && !on_path[w as usize] {
                path.push(w);
                on_path[w as usize] = true;
                extend(adj, start, path, on_path, cyclen);
                on_path[w as usize] = false;
                path.pop();
            }
        }
    }

    for s in 1..=n as Vertex {
        let mut on_path = vec![false; n + 1];
        on_path[s as usize] = true;
        extend(&adj, s, &mut vec![s], &mut on_path, &mut cyclen);
    }

    let mut best = 0;
    for u in 1..=n {
        for v in u + 1..=n {
            if cyclen[u][v] != inf {
                best = best.max(cyclen[u][v]);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic() {
        let g = parse_edge_list("3 2\n1 2\n2 3".as_bytes()).unwrap();
        assert_eq!(g.n, 3);
        assert_eq!(g.edges, vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn parse_rejects_self_loop() {
        assert!(matches!(
            parse_edge_list("2 1\n1 1".as_bytes()),
            Err(Error::SelfLoop(1))
        ));
    }

    #[test]
    fn parse_cycle_and_roundtrip() {
        let g = parse_edge_list("4 4\n1 2\n2 3\n3 4\n4 1".as_bytes()).unwrap();
        assert_eq!(g.m(), 4);
        let mut out = Vec::new();
        g.write_edge_list(&mut out).unwrap();
        let g2 = parse_edge_list(out.as_slice()).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn parse_dedupes_duplicates() {
        let g = parse_edge_list("3 3\n1 2\n2 1\n2 3".as_bytes()).unwrap();
        assert_eq!(g.m(), 2);
    }

    #[test]
    fn parse_rejects_out_of_range() {
        assert!(parse_edge_list("2 1\n1 5".as_bytes()).is_err());
        assert!(parse_edge_list("junk".as_bytes()).is_err());
    }

    #[test]
    fn generate_gadgets() {
        let g = generate(GraphKind::TwoCycles, 8, 0).unwrap();
        assert_eq!(g.m(), 8);
        // two disjoint C4: no edge crosses the halves
        assert!(g.edges.iter().all(|&(u, v)| (u <= 4) == (v <= 4)));

        let g = generate(GraphKind::WheelApex, 7, 0).unwrap();
        let apex_deg = g.edges.iter().filter(|&&(u, v)| u == 7 || v == 7).count();
        assert_eq!(apex_deg, 6);
        assert_eq!(g.m(), 12);

        let g = generate(GraphKind::Bowtie, 5, 0).unwrap();
        assert_eq!(g.edges, vec![(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)]);
    }

    #[test]
    fn generate_minimums() {
        assert!(generate(GraphKind::Cycle, 2, 0).is_err());
        assert!(generate(GraphKind::TwoCycles, 5, 0).is_err());
        assert!(generate(GraphKind::WheelApex, 3, 0).is_err());
    }

    #[test]
    fn generate_reproducible() {
        for kind in [GraphKind::RandomTree, GraphKind::Gnm(40)] {
            let a = generate(kind, 30, 7).unwrap();
            let b = generate(kind, 30, 7).unwrap();
            assert_eq!(a, b);
            let c = generate(kind, 30, 8).unwrap();
            assert!(a != c || a.m() <= 1);
        }
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(diameter_exact(&generate(GraphKind::Cycle, 8, 0).unwrap()), 4);
        assert_eq!(diameter_exact(&generate(GraphKind::Path, 5, 0).unwrap()), 4);
        let two_c6 = generate(GraphKind::TwoCycles, 12, 0).unwrap();
        assert_eq!(diameter_exact(&two_c6), 3);
        assert_eq!(diameter_exact(&Graph::new(0)), 0);
    }

    #[test]
    fn bidiameter_examples() {
        assert_eq!(bidiameter_exact(&generate(GraphKind::Cycle, 8, 0).unwrap()), 8);
        assert_eq!(bidiameter_exact(&generate(GraphKind::Bowtie, 5, 0).unwrap()), 3);
        assert_eq!(bidiameter_exact(&generate(GraphKind::WheelApex, 7, 0).unwrap()), 5);
        // a tree has no simple cycle at all
        assert_eq!(bidiameter_exact(&generate(GraphKind::Path, 5, 0).unwrap()), 0);
    }
}
