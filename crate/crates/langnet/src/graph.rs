//! Weighted directed graph with string-labeled vertices.
//!
//! Weights are positive integer occurrence counts. The graph is simple:
//! no self-loops, at most one edge per ordered vertex pair (repeated
//! occurrences accumulate into the weight). All read operations are pure;
//! construction is single-writer.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::io::{BufRead, Write};

use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-pair `{0}` rejected under strict policy")]
    SelfLoopRejected(String),
    #[error("vertex `{0}` not found")]
    VertexNotFound(String),
    #[error("label `{0}` contains whitespace")]
    InvalidLabel(String),
    #[error("edge list line {line}: {msg}")]
    MalformedEdgeList { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How vertex pairs are traversed when computing hop distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathMode {
    /// Treat every edge as bidirectional.
    UndirectedProjection,
    /// Follow edge direction.
    Directed,
}

/// Per-vertex degrees, strengths and selectivities.
///
/// Selectivity is strength divided by degree per direction — the average
/// weight of the vertex's links. It is defined as 0 for a direction with
/// no links.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexStats {
    pub vertex: String,
    pub k_in: usize,
    pub k_out: usize,
    pub s_in: u64,
    pub s_out: u64,
    pub e_in: f64,
    pub e_out: f64,
}

#[derive(Debug, Clone, Default)]
pub struct WeightedDigraph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    out_adj: Vec<BTreeMap<VertexId, u64>>,
    in_adj: Vec<BTreeMap<VertexId, u64>>,
    edge_count: usize,
    self_loop_skips: u64,
}

impl WeightedDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of directed edges.
    pub fn k(&self) -> usize {
        self.edge_count
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> u64 {
        self.out_adj.iter().flat_map(|m| m.values()).sum()
    }

    /// How many occurrence pairs were dropped because both members were the
    /// same label.
    pub fn self_loop_skips(&self) -> u64 {
        self.self_loop_skips
    }

    pub fn vertex_id(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, id: VertexId) -> &str {
        &self.labels[id as usize]
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(|s| s.as_str())
    }

    /// Inserts a vertex if absent and returns its id.
    pub fn add_vertex(&mut self, label: &str) -> VertexId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len() as VertexId;
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        self.out_adj.push(BTreeMap::new());
        self.in_adj.push(BTreeMap::new());
        id
    }

    /// Records one occurrence of the ordered pair `(src, dst)`, creating
    /// vertices and the edge as needed. A self-pair is skipped and counted;
    /// returns whether the occurrence was recorded.
    pub fn add_occurrence(&mut self, src: &str, dst: &str) -> bool {
        if src == dst {
            // both labels still become vertices, mirroring token counting
            self.add_vertex(src);
            self.self_loop_skips += 1;
            return false;
        }
        let s = self.add_vertex(src);
        let d = self.add_vertex(dst);
        self.bump(s, d, 1);
        true
    }

    /// Like [`add_occurrence`](Self::add_occurrence) but a self-pair is an error.
    pub fn add_occurrence_strict(&mut self, src: &str, dst: &str) -> Result<(), GraphError> {
        if src == dst {
            return Err(GraphError::SelfLoopRejected(src.to_string()));
        }
        self.add_occurrence(src, dst);
        Ok(())
    }

    /// Adds `w` to the weight of `(src, dst)`. Used by deserialization;
    /// self-pairs and zero weights are malformed input here.
    pub fn add_weighted(&mut self, src: &str, dst: &str, w: u64) -> Result<(), GraphError> {
        if src == dst {
            return Err(GraphError::SelfLoopRejected(src.to_string()));
        }
        if w == 0 {
            return Err(GraphError::MalformedEdgeList {
                line: 0,
                msg: format!("zero weight on edge {src} -> {dst}"),
            });
        }
        let s = self.add_vertex(src);
        let d = self.add_vertex(dst);
        self.bump(s, d, w);
        Ok(())
    }

    fn bump(&mut self, s: VertexId, d: VertexId, w: u64) {
        let entry = self.out_adj[s as usize].entry(d).or_insert(0);
        if *entry == 0 {
            self.edge_count += 1;
        }
        *entry += w;
        *self.in_adj[d as usize].entry(s).or_insert(0) += w;
    }

    pub fn has_edge(&self, src: VertexId, dst: VertexId) -> bool {
        self.out_adj[src as usize].contains_key(&dst)
    }

    pub fn weight_by_id(&self, src: VertexId, dst: VertexId) -> Option<u64> {
        self.out_adj[src as usize].get(&dst).copied()
    }

    pub fn weight(&self, src: &str, dst: &str) -> Option<u64> {
        let s = self.vertex_id(src)?;
        let d = self.vertex_id(dst)?;
        self.weight_by_id(s, d)
    }

    /// Directed edges in vertex-id order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, u64)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(s, m)| m.iter().map(move |(&d, &w)| (s as VertexId, d, w)))
    }

    pub fn out_neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, u64)> + '_ {
        self.out_adj[v as usize].iter().map(|(&d, &w)| (d, w))
    }

    pub fn in_neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, u64)> + '_ {
        self.in_adj[v as usize].iter().map(|(&s, &w)| (s, w))
    }

    /// Neighbors of `v` ignoring direction, deduplicated, ascending.
    pub fn undirected_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let out = &self.out_adj[v as usize];
        let inn = &self.in_adj[v as usize];
        let mut nbrs: Vec<VertexId> = out.keys().chain(inn.keys()).copied().collect();
        nbrs.sort_unstable();
        nbrs.dedup();
        nbrs
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adj[v as usize].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj[v as usize].len()
    }

    pub fn out_strength(&self, v: VertexId) -> u64 {
        self.out_adj[v as usize].values().sum()
    }

    pub fn in_strength(&self, v: VertexId) -> u64 {
        self.in_adj[v as usize].values().sum()
    }

    pub fn vertex_stats(&self, label: &str) -> Result<VertexStats, GraphError> {
        let v = self
            .vertex_id(label)
            .ok_or_else(|| GraphError::VertexNotFound(label.to_string()))?;
        let k_in = self.in_degree(v);
        let k_out = self.out_degree(v);
        let s_in = self.in_strength(v);
        let s_out = self.out_strength(v);
        Ok(VertexStats {
            vertex: label.to_string(),
            k_in,
            k_out,
            s_in,
            s_out,
            e_in: if k_in > 0 { s_in as f64 / k_in as f64 } else { 0.0 },
            e_out: if k_out > 0 { s_out as f64 / k_out as f64 } else { 0.0 },
        })
    }

    /// Hop distances from `src` to every vertex under the given mode;
    /// `None` for unreachable vertices.
    pub fn bfs_distances(&self, src: VertexId, mode: PathMode) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n()];
        dist[src as usize] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize].unwrap();
            let step = |u: VertexId, dist: &mut Vec<Option<u32>>, queue: &mut VecDeque<VertexId>| {
                if dist[u as usize].is_none() {
                    dist[u as usize] = Some(d + 1);
                    queue.push_back(u);
                }
            };
            for &u in self.out_adj[v as usize].keys() {
                step(u, &mut dist, &mut queue);
            }
            if mode == PathMode::UndirectedProjection {
                for &u in self.in_adj[v as usize].keys() {
                    step(u, &mut dist, &mut queue);
                }
            }
        }
        dist
    }

    /// Hop distances for all reachable ordered pairs; unreachable pairs are
    /// absent. The `(v, v)` diagonal is not included.
    pub fn shortest_path_lengths(&self, mode: PathMode) -> BTreeMap<(VertexId, VertexId), u32> {
        let mut map = BTreeMap::new();
        for src in 0..self.n() as VertexId {
            for (dst, d) in self.bfs_distances(src, mode).into_iter().enumerate() {
                if let Some(d) = d {
                    if dst as VertexId != src {
                        map.insert((src, dst as VertexId), d);
                    }
                }
            }
        }
        map
    }

    /// Maximal weakly connected components as vertex ids, largest first.
    /// Ties are broken by the smallest label in the component; each
    /// component is sorted by label.
    pub fn weakly_connected_component_ids(&self) -> Vec<Vec<VertexId>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut comps: Vec<Vec<VertexId>> = Vec::new();
        for start in 0..n as VertexId {
            if seen[start as usize] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start as usize] = true;
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for u in self.undirected_neighbors(v) {
                    if !seen[u as usize] {
                        seen[u as usize] = true;
                        queue.push_back(u);
                    }
                }
            }
            comp.sort_by(|&a, &b| self.label(a).cmp(self.label(b)));
            comps.push(comp);
        }
        comps.sort_by(|a, b| {
            b.len()
                .cmp(&a.len())
                .then_with(|| self.label(a[0]).cmp(self.label(b[0])))
        });
        comps
    }

    /// Same partition as [`weakly_connected_component_ids`](Self::weakly_connected_component_ids),
    /// with labels.
    pub fn weakly_connected_components(&self) -> Vec<Vec<String>> {
        self.weakly_connected_component_ids()
            .into_iter()
            .map(|c| c.into_iter().map(|v| self.label(v).to_string()).collect())
            .collect()
    }

    /// Writes the edge-list text form: `source<TAB>target<TAB>weight`, one
    /// edge per line, ordered lexicographically by (source, target).
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<(), GraphError> {
        for label in &self.labels {
            if label.chars().any(char::is_whitespace) {
                return Err(GraphError::InvalidLabel(label.clone()));
            }
        }
        let mut rows: Vec<(&str, &str, u64)> = self
            .edges()
            .map(|(s, d, wt)| (self.label(s), self.label(d), wt))
            .collect();
        rows.sort_unstable();
        for (s, d, wt) in rows {
            writeln!(w, "{s}\t{d}\t{wt}")?;
        }
        Ok(())
    }

    /// Parses the edge-list text form. Duplicate ordered pairs are malformed.
    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Self, GraphError> {
        let mut g = Self::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let (src, dst, w) = parse_edge_line(&line, i + 1)?;
            if g.weight(src, dst).is_some() {
                return Err(GraphError::MalformedEdgeList {
                    line: i + 1,
                    msg: format!("duplicate edge {src} -> {dst}"),
                });
            }
            g.add_weighted(src, dst, w)
                .map_err(|e| located(e, i + 1))?;
        }
        Ok(g)
    }

    /// Content equality keyed by labels, independent of insertion order.
    /// Skip counters are construction metadata and not part of identity.
    pub fn content_eq(&self, other: &Self) -> bool {
        if self.n() != other.n() || self.k() != other.k() {
            return false;
        }
        if self.labels().any(|l| other.vertex_id(l).is_none()) {
            return false;
        }
        self.edges().all(|(s, d, w)| {
            other.weight(self.label(s), self.label(d)) == Some(w)
        })
    }
}

pub(crate) fn parse_edge_line(line: &str, lineno: usize) -> Result<(&str, &str, u64), GraphError> {
    let mut parts = line.split('\t');
    let (src, dst, w) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
        (Some(s), Some(d), Some(w), None) => (s, d, w),
        _ => {
            return Err(GraphError::MalformedEdgeList {
                line: lineno,
                msg: "expected `source<TAB>target<TAB>weight`".into(),
            })
        }
    };
    let w: u64 = w.parse().map_err(|_| GraphError::MalformedEdgeList {
        line: lineno,
        msg: format!("bad weight `{w}`"),
    })?;
    Ok((src, dst, w))
}

fn located(e: GraphError, line: usize) -> GraphError {
    match e {
        GraphError::SelfLoopRejected(l) => GraphError::MalformedEdgeList {
            line,
            msg: format!("self-loop on `{l}`"),
        },
        GraphError::MalformedEdgeList { msg, .. } => GraphError::MalformedEdgeList { line, msg },
        other => other,
    }
}

impl PartialEq for WeightedDigraph {
    fn eq(&self, other: &Self) -> bool {
        self.content_eq(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph_of(edges: &[(&str, &str)]) -> WeightedDigraph {
        let mut g = WeightedDigraph::new();
        for (s, d) in edges {
            g.add_occurrence(s, d);
        }
        g
    }

    #[test]
    fn single_insertion_creates_edge() {
        let g = graph_of(&[("a", "b")]);
        assert_eq!(g.weight("a", "b"), Some(1));
        assert_eq!(g.n(), 2);
        assert_eq!(g.k(), 1);
    }

    #[test]
    fn repeated_insertion_accumulates() {
        let g = graph_of(&[("a", "b"), ("a", "b")]);
        assert_eq!(g.weight("a", "b"), Some(2));
        assert_eq!(g.k(), 1);
    }

    #[test]
    fn direction_is_distinguished() {
        let g = graph_of(&[("a", "b"), ("b", "a")]);
        assert_eq!(g.weight("a", "b"), Some(1));
        assert_eq!(g.weight("b", "a"), Some(1));
        assert_eq!(g.k(), 2);
    }

    #[test]
    fn self_pair_is_skipped_and_counted() {
        let mut g = WeightedDigraph::new();
        assert!(!g.add_occurrence("a", "a"));
        assert_eq!(g.k(), 0);
        assert_eq!(g.n(), 1);
        assert_eq!(g.self_loop_skips(), 1);
    }

    #[test]
    fn strict_self_pair_is_rejected() {
        let mut g = WeightedDigraph::new();
        assert!(matches!(
            g.add_occurrence_strict("x", "x"),
            Err(GraphError::SelfLoopRejected(_))
        ));
    }

    #[test]
    fn vertex_stats_match_definitions() {
        // incoming weights {2, 3} -> k_in 2, s_in 5, e_in 2.5
        let mut g = WeightedDigraph::new();
        g.add_weighted("a", "c", 2).unwrap();
        g.add_weighted("b", "c", 3).unwrap();
        let st = g.vertex_stats("c").unwrap();
        assert_eq!((st.k_in, st.s_in), (2, 5));
        assert_eq!(st.e_in, 2.5);
        assert_eq!((st.k_out, st.s_out), (0, 0));
        assert_eq!(st.e_out, 0.0);
    }

    #[test]
    fn isolated_vertex_stats_are_zero() {
        let mut g = WeightedDigraph::new();
        g.add_vertex("lone");
        let st = g.vertex_stats("lone").unwrap();
        assert_eq!((st.k_in, st.k_out, st.s_in, st.s_out), (0, 0, 0, 0));
        assert_eq!((st.e_in, st.e_out), (0.0, 0.0));
    }

    #[test]
    fn single_out_edge_selectivity() {
        let mut g = WeightedDigraph::new();
        g.add_weighted("a", "b", 7).unwrap();
        let st = g.vertex_stats("a").unwrap();
        assert_eq!((st.k_out, st.s_out), (1, 7));
        assert_eq!(st.e_out, 7.0);
    }

    #[test]
    fn unknown_vertex_errors() {
        let g = graph_of(&[("a", "b")]);
        assert!(matches!(
            g.vertex_stats("zz"),
            Err(GraphError::VertexNotFound(_))
        ));
    }

    #[test]
    fn components_split_and_merge() {
        let g = graph_of(&[("a", "b"), ("c", "d")]);
        let comps = g.weakly_connected_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], vec!["a", "b"]);
        assert_eq!(comps[1], vec!["c", "d"]);

        let g = graph_of(&[("a", "b"), ("b", "c")]);
        assert_eq!(g.weakly_connected_components().len(), 1);
    }

    #[test]
    fn isolated_vertices_are_singleton_components() {
        let mut g = WeightedDigraph::new();
        for l in ["a", "b", "c", "d", "e"] {
            g.add_vertex(l);
        }
        assert_eq!(g.weakly_connected_components().len(), 5);
    }

    #[test]
    fn path_distances_undirected() {
        let g = graph_of(&[("a", "b"), ("b", "c")]);
        let d = g.shortest_path_lengths(PathMode::UndirectedProjection);
        let id = |l: &str| g.vertex_id(l).unwrap();
        assert_eq!(d[&(id("a"), id("c"))], 2);
        assert_eq!(d[&(id("a"), id("b"))], 1);
        assert_eq!(d[&(id("c"), id("a"))], 2);
    }

    #[test]
    fn path_distances_directed_unreachable_absent() {
        let g = graph_of(&[("a", "b"), ("b", "c")]);
        let d = g.shortest_path_lengths(PathMode::Directed);
        let id = |l: &str| g.vertex_id(l).unwrap();
        assert_eq!(d.get(&(id("c"), id("a"))), None);
        assert_eq!(d[&(id("a"), id("c"))], 2);
    }

    #[test]
    fn directed_cycle_distance_goes_around() {
        let g = graph_of(&[("a", "b"), ("b", "c"), ("c", "a")]);
        let d = g.shortest_path_lengths(PathMode::Directed);
        let id = |l: &str| g.vertex_id(l).unwrap();
        assert_eq!(d[&(id("a"), id("c"))], 2);
        assert_eq!(d[&(id("c"), id("a"))], 1);
    }

    #[test]
    fn edge_list_round_trip_is_identical() {
        let mut g = graph_of(&[("b", "a"), ("a", "b"), ("a", "c")]);
        g.add_occurrence("a", "b");
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text, "a\tb\t2\na\tc\t1\nb\ta\t1\n");
        let g2 = WeightedDigraph::read_edge_list(&buf[..]).unwrap();
        assert!(g.content_eq(&g2));
    }

    #[test]
    fn edge_list_rejects_garbage() {
        assert!(WeightedDigraph::read_edge_list("a\tb\n".as_bytes()).is_err());
        assert!(WeightedDigraph::read_edge_list("a\tb\tx\n".as_bytes()).is_err());
        assert!(WeightedDigraph::read_edge_list("a\ta\t1\n".as_bytes()).is_err());
        assert!(WeightedDigraph::read_edge_list("a\tb\t0\n".as_bytes()).is_err());
        assert!(WeightedDigraph::read_edge_list("a\tb\t1\na\tb\t2\n".as_bytes()).is_err());
    }

    fn occurrence_list() -> impl Strategy<Value = Vec<(u8, u8)>> {
        prop::collection::vec((0u8..8, 0u8..8), 0..120)
    }

    proptest! {
        #[test]
        fn strength_and_degree_totals_balance(pairs in occurrence_list()) {
            let mut g = WeightedDigraph::new();
            for (s, d) in &pairs {
                g.add_occurrence(&format!("v{s}"), &format!("v{d}"));
            }
            let ids: Vec<VertexId> = (0..g.n() as VertexId).collect();
            let s_in: u64 = ids.iter().map(|&v| g.in_strength(v)).sum();
            let s_out: u64 = ids.iter().map(|&v| g.out_strength(v)).sum();
            prop_assert_eq!(s_in, g.total_weight());
            prop_assert_eq!(s_out, g.total_weight());
            let k_in: usize = ids.iter().map(|&v| g.in_degree(v)).sum();
            let k_out: usize = ids.iter().map(|&v| g.out_degree(v)).sum();
            prop_assert_eq!(k_in, g.k());
            prop_assert_eq!(k_out, g.k());
        }

        #[test]
        fn insertion_order_does_not_matter(pairs in occurrence_list(), seed in 0u64..1000) {
            let build = |ps: &[(u8, u8)]| {
                let mut g = WeightedDigraph::new();
                for (s, d) in ps {
                    g.add_occurrence(&format!("v{s}"), &format!("v{d}"));
                }
                g
            };
            let a = build(&pairs);
            let mut shuffled = pairs.clone();
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            shuffled.shuffle(&mut rng);
            let b = build(&shuffled);
            prop_assert!(a.content_eq(&b));
            prop_assert_eq!(a.self_loop_skips(), b.self_loop_skips());
        }

        #[test]
        fn undirected_distances_are_symmetric(pairs in occurrence_list()) {
            let mut g = WeightedDigraph::new();
            for (s, d) in &pairs {
                g.add_occurrence(&format!("v{s}"), &format!("v{d}"));
            }
            let d = g.shortest_path_lengths(PathMode::UndirectedProjection);
            for (&(i, j), &hops) in &d {
                prop_assert_eq!(d.get(&(j, i)), Some(&hops));
            }
        }

        #[test]
        fn components_partition_all_vertices(pairs in occurrence_list()) {
            let mut g = WeightedDigraph::new();
            for (s, d) in &pairs {
                g.add_occurrence(&format!("v{s}"), &format!("v{d}"));
            }
            let comps = g.weakly_connected_components();
            let mut all: Vec<String> = comps.concat();
            all.sort();
            let mut expect: Vec<String> = g.labels().map(String::from).collect();
            expect.sort();
            prop_assert_eq!(all, expect);
        }
    }
}
