//! Per-layer network statistics: average path length, weighted clustering,
//! transitivity, rank distributions and the bundled layer summary.
//!
//! Path lengths, clustering and transitivity are computed on the undirected
//! projection of the layer (the directed variant of the path length is
//! available behind [`PathMode`]). Projected pair weight is the sum of the
//! two directed weights; weight normalization by the maximum happens only
//! inside the clustering computation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{GraphError, PathMode, VertexId, WeightedDigraph};
use crate::layers::{AspectCoord, Layer};

pub mod powerlaw;

pub use powerlaw::{fit_power_law, fit_power_law_with_floor, PowerLawFit};

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("measure undefined: {0}")]
    Undefined(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Undirected projection with summed pair weights, used by the clustering
/// and transitivity computations.
struct Projection {
    adj: Vec<BTreeMap<VertexId, u64>>,
    max_weight: u64,
}

fn project(g: &WeightedDigraph) -> Projection {
    let mut adj: Vec<BTreeMap<VertexId, u64>> = vec![BTreeMap::new(); g.n()];
    let mut max_weight = 0;
    for (s, d, w) in g.edges() {
        let e = adj[s as usize].entry(d).or_insert(0);
        *e += w;
        let w_sd = *e;
        *adj[d as usize].entry(s).or_insert(0) += w;
        max_weight = max_weight.max(w_sd);
    }
    Projection { adj, max_weight }
}

impl Projection {
    fn clustering(&self, v: usize) -> f64 {
        let nbrs = &self.adj[v];
        let k = nbrs.len();
        if k < 2 {
            return 0.0;
        }
        let maxw = self.max_weight as f64;
        let entries: Vec<(VertexId, f64)> =
            nbrs.iter().map(|(&u, &w)| (u, w as f64 / maxw)).collect();
        let mut sum = 0.0;
        for (i, &(j, w_vj)) in entries.iter().enumerate() {
            for &(h, w_vh) in &entries[i + 1..] {
                if let Some(&w_jh) = self.adj[j as usize].get(&h) {
                    sum += (w_vj * w_vh * (w_jh as f64 / maxw)).cbrt();
                }
            }
        }
        // ordered neighbor pairs: each unordered pair counts twice
        2.0 * sum / (k * (k - 1)) as f64
    }
}

/// Weighted clustering coefficient of one vertex: the geometric mean of
/// triangle link weights, normalized by the network maximum, averaged over
/// neighbor pairs. Zero for degree < 2.
pub fn weighted_clustering(g: &WeightedDigraph, vertex: &str) -> Result<f64, MeasureError> {
    let v = g
        .vertex_id(vertex)
        .ok_or_else(|| GraphError::VertexNotFound(vertex.to_string()))?;
    Ok(project(g).clustering(v as usize))
}

/// Mean of the per-vertex clustering coefficients over all vertices.
pub fn average_clustering(g: &WeightedDigraph) -> Result<f64, MeasureError> {
    if g.n() == 0 {
        return Err(MeasureError::Undefined("empty graph".into()));
    }
    let proj = project(g);
    let sum: f64 = (0..g.n()).map(|v| proj.clustering(v)).sum();
    Ok(sum / g.n() as f64)
}

/// Fraction of possible triangles present:
/// 3 × triangles / paths-of-length-two, on the undirected projection.
/// Zero triads yield 0 by convention.
pub fn transitivity(g: &WeightedDigraph) -> Result<f64, MeasureError> {
    if g.n() == 0 {
        return Err(MeasureError::Undefined("empty graph".into()));
    }
    let proj = project(g);
    let mut triads: u64 = 0;
    let mut closed: u64 = 0;
    for v in 0..g.n() {
        let nbrs: Vec<VertexId> = proj.adj[v].keys().copied().collect();
        let k = nbrs.len() as u64;
        triads += k * k.saturating_sub(1) / 2;
        for (i, &j) in nbrs.iter().enumerate() {
            for &h in &nbrs[i + 1..] {
                if proj.adj[j as usize].contains_key(&h) {
                    closed += 1;
                }
            }
        }
    }
    if triads == 0 {
        return Ok(0.0);
    }
    // closed counts each triangle three times, once per corner
    Ok(closed as f64 / triads as f64)
}

/// Mean hop distance over ordered reachable pairs within the largest weakly
/// connected component.
pub fn average_path_length(g: &WeightedDigraph, mode: PathMode) -> Result<f64, MeasureError> {
    let comps = g.weakly_connected_component_ids();
    let comp = comps
        .first()
        .filter(|c| c.len() >= 2)
        .ok_or_else(|| MeasureError::Undefined("no component with at least 2 vertices".into()))?;
    let mut total: u64 = 0;
    let mut pairs: u64 = 0;
    for &src in comp {
        let dist = g.bfs_distances(src, mode);
        for &dst in comp {
            if dst == src {
                continue;
            }
            if let Some(d) = dist[dst as usize] {
                total += d as u64;
                pairs += 1;
            }
        }
    }
    if pairs == 0 {
        return Err(MeasureError::Undefined(
            "no reachable ordered pairs in the largest component".into(),
        ));
    }
    Ok(total as f64 / pairs as f64)
}

/// Per-vertex quantities that feed the rank distributions and power-law fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantity {
    DegreeIn,
    DegreeOut,
    StrengthIn,
    StrengthOut,
    SelectivityIn,
    SelectivityOut,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::DegreeIn,
        Quantity::DegreeOut,
        Quantity::StrengthIn,
        Quantity::StrengthOut,
        Quantity::SelectivityIn,
        Quantity::SelectivityOut,
    ];

    /// The integer-valued quantities whose distributions get power-law fits.
    pub const FITTED: [Quantity; 4] = [
        Quantity::DegreeIn,
        Quantity::DegreeOut,
        Quantity::StrengthIn,
        Quantity::StrengthOut,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::DegreeIn => "degree-in",
            Quantity::DegreeOut => "degree-out",
            Quantity::StrengthIn => "strength-in",
            Quantity::StrengthOut => "strength-out",
            Quantity::SelectivityIn => "selectivity-in",
            Quantity::SelectivityOut => "selectivity-out",
        }
    }

    pub fn of(self, g: &WeightedDigraph, v: VertexId) -> f64 {
        match self {
            Quantity::DegreeIn => g.in_degree(v) as f64,
            Quantity::DegreeOut => g.out_degree(v) as f64,
            Quantity::StrengthIn => g.in_strength(v) as f64,
            Quantity::StrengthOut => g.out_strength(v) as f64,
            Quantity::SelectivityIn => {
                let k = g.in_degree(v);
                if k == 0 { 0.0 } else { g.in_strength(v) as f64 / k as f64 }
            }
            Quantity::SelectivityOut => {
                let k = g.out_degree(v);
                if k == 0 { 0.0 } else { g.out_strength(v) as f64 / k as f64 }
            }
        }
    }
}

/// Per-vertex values of `q` indexed by vertex id.
pub fn vertex_values(g: &WeightedDigraph, q: Quantity) -> Vec<f64> {
    (0..g.n() as VertexId).map(|v| q.of(g, v)).collect()
}

/// Values sorted descending with 1-based ranks; ties are broken by vertex
/// label so the output is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct RankDistribution {
    pub quantity: Quantity,
    pub entries: Vec<(usize, f64)>,
}

pub fn rank_distribution(g: &WeightedDigraph, q: Quantity) -> RankDistribution {
    let mut rows: Vec<(&str, f64)> = (0..g.n() as VertexId)
        .map(|v| (g.label(v), q.of(g, v)))
        .collect();
    rows.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(b.0)));
    RankDistribution {
        quantity: q,
        entries: rows
            .into_iter()
            .enumerate()
            .map(|(i, (_, v))| (i + 1, v))
            .collect(),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SummaryOptions {
    pub path_mode: PathMode,
    /// Smallest tail size a power-law fit may select its cutoff from.
    pub min_tail: usize,
}

impl Default for SummaryOptions {
    fn default() -> Self {
        SummaryOptions { path_mode: PathMode::UndirectedProjection, min_tail: 50 }
    }
}

/// The bundled standard measures of one layer. Fields that are undefined on
/// the layer are absent, with the reason recorded in `notes`.
#[derive(Debug, Clone)]
pub struct LayerSummary {
    pub coord: AspectCoord,
    pub n: usize,
    pub k: usize,
    pub total_weight: u64,
    pub l: Option<f64>,
    pub c: Option<f64>,
    pub t: Option<f64>,
    pub omega: usize,
    pub gamma_fits: BTreeMap<Quantity, PowerLawFit>,
    pub notes: Vec<String>,
}

pub fn summarize(layer: &Layer, opts: SummaryOptions) -> LayerSummary {
    let g = &layer.graph;
    let mut notes = Vec::new();
    let mut keep = |name: &str, r: Result<f64, MeasureError>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("{name}: {e}"));
            None
        }
    };
    let l = keep("L", average_path_length(g, opts.path_mode));
    let c = keep("C", average_clustering(g));
    let t = keep("T", transitivity(g));
    let mut gamma_fits = BTreeMap::new();
    for q in Quantity::FITTED {
        let values = vertex_values(g, q);
        match powerlaw::fit_power_law_with_floor(&values, opts.min_tail) {
            Ok(fit) => {
                gamma_fits.insert(q, fit);
            }
            Err(e) => notes.push(format!("gamma {}: {e}", q.name())),
        }
    }
    LayerSummary {
        coord: layer.coord.clone(),
        n: g.n(),
        k: g.k(),
        total_weight: g.total_weight(),
        l,
        c,
        t,
        omega: g.weakly_connected_component_ids().len(),
        gamma_fits,
        notes,
    }
}
