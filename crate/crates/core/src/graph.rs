//! Undirected simple graph: edge-list ingestion, connected components, and
//! basic topology statistics.

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::scores::ScoreVector;
use crate::util::{content_hash, KahanSum};

/// Immutable undirected simple graph over dense node ids `0..n`.
///
/// External node labels are kept in first-seen order; all computation runs on
/// dense ids and all user-facing output goes through the labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
    labels: Vec<String>,
    label_index: HashMap<String, u32>,
}

/// What `load_edge_list` dropped or merged while building a simple graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadDiagnostics {
    pub self_loops_dropped: usize,
    pub duplicate_edges_merged: usize,
}

/// Edge-list parsing conventions. Defaults follow the common text format:
/// two whitespace- or comma-separated labels per line, `#`/`%` comments.
#[derive(Debug, Clone)]
pub struct EdgeListOptions {
    pub comment_prefixes: Vec<char>,
    /// Explicit single-character delimiter; `None` splits on whitespace and commas.
    pub delimiter: Option<char>,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        Self {
            comment_prefixes: vec!['#', '%'],
            delimiter: None,
        }
    }
}

/// Scalar topology statistics of a graph.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TopologyStats {
    pub node_count: usize,
    pub edge_count: usize,
    /// Average degree 2|E|/N.
    pub avg_degree: f64,
    /// Global transitivity: 3 * triangles / connected triples, 0 when no triples.
    pub transitivity: f64,
}

impl Graph {
    /// Builds a simple graph from labeled endpoint pairs. Self-loops are
    /// dropped and duplicate (or reversed) edges merged; labels are densified
    /// in first-seen order.
    pub fn from_labeled_edges<I, S>(pairs: I) -> Result<(Graph, LoadDiagnostics)>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut labels: Vec<String> = Vec::new();
        let mut label_index: HashMap<String, u32> = HashMap::new();
        let mut raw_edges: Vec<(u32, u32)> = Vec::new();
        let mut diag = LoadDiagnostics::default();

        let intern = |s: &str, labels: &mut Vec<String>, idx: &mut HashMap<String, u32>| -> u32 {
            if let Some(&id) = idx.get(s) {
                return id;
            }
            let id = labels.len() as u32;
            labels.push(s.to_string());
            idx.insert(s.to_string(), id);
            id
        };

        for (a, b) in pairs {
            let (a, b) = (a.as_ref(), b.as_ref());
            let ia = intern(a, &mut labels, &mut label_index);
            let ib = intern(b, &mut labels, &mut label_index);
            if ia == ib {
                diag.self_loops_dropped += 1;
                continue;
            }
            raw_edges.push((ia.min(ib), ia.max(ib)));
        }

        if labels.is_empty() {
            return Err(Error::EmptyGraph("no nodes in input".into()));
        }

        raw_edges.sort_unstable();
        let before = raw_edges.len();
        raw_edges.dedup();
        diag.duplicate_edges_merged = before - raw_edges.len();

        let mut adjacency = vec![Vec::new(); labels.len()];
        for &(i, j) in &raw_edges {
            adjacency[i as usize].push(j);
            adjacency[j as usize].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        Ok((
            Graph {
                adjacency,
                edge_count: raw_edges.len(),
                labels,
                label_index,
            },
            diag,
        ))
    }

    /// Test/fixture helper: nodes labeled by their numeric id.
    pub fn from_numeric_edges(pairs: &[(u32, u32)]) -> Result<Graph> {
        // Pre-register endpoints in numeric order so dense ids equal the numbers.
        let mut max = 0;
        for &(a, b) in pairs {
            max = max.max(a).max(b);
        }
        let mut labeled: Vec<(String, String)> = Vec::with_capacity(pairs.len() + 1);
        for i in 0..=max {
            labeled.push((i.to_string(), i.to_string()));
        }
        labeled.extend(
            pairs
                .iter()
                .map(|&(a, b)| (a.to_string(), b.to_string())),
        );
        let (g, _) = Graph::from_labeled_edges(labeled)?;
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adjacency[v as usize]
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.adjacency[a as usize].binary_search(&b).is_ok()
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn node_by_label(&self, label: &str) -> Option<u32> {
        self.label_index.get(label).copied()
    }

    /// Iterates each undirected edge once, as `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, nbrs)| {
            let i = i as u32;
            nbrs.iter()
                .copied()
                .filter(move |&j| i < j)
                .map(move |j| (i, j))
        })
    }

    /// Stable content hash over labels and edges, for output provenance.
    pub fn provenance_hash(&self) -> String {
        let mut buf = String::new();
        buf.push_str("graph-v1\n");
        for (i, label) in self.labels.iter().enumerate() {
            buf.push_str(&format!("{i} {label}\n"));
        }
        for (i, j) in self.edges() {
            buf.push_str(&format!("{i}-{j}\n"));
        }
        content_hash(buf.as_bytes())
    }
}

/// Parses an edge list: one edge per line, two endpoint labels.
///
/// Returns the graph plus diagnostics about dropped self-loops and merged
/// duplicates. Malformed lines (token count != 2) are parse errors carrying
/// the 1-based line number; an input with no edges and no nodes is an error.
pub fn load_edge_list<R: BufRead>(
    reader: R,
    options: &EdgeListOptions,
) -> Result<(Graph, LoadDiagnostics)> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if options
            .comment_prefixes
            .iter()
            .any(|&c| trimmed.starts_with(c))
        {
            continue;
        }
        let tokens: Vec<&str> = match options.delimiter {
            Some(d) => trimmed.split(d).map(str::trim).filter(|t| !t.is_empty()).collect(),
            None => trimmed
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .collect(),
        };
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected two endpoint labels, found {}", tokens.len()),
            });
        }
        pairs.push((tokens[0].to_string(), tokens[1].to_string()));
    }
    if pairs.is_empty() {
        return Err(Error::EmptyGraph("edge list has no edges".into()));
    }
    Graph::from_labeled_edges(pairs)
}

/// Extracts the induced subgraph on the largest connected component.
///
/// Ties are broken toward the component containing the smallest dense id.
/// Labels are preserved; surviving nodes are re-densified in ascending order
/// of their old ids.
pub fn largest_connected_component(g: &Graph) -> Result<Graph> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph("cannot take component of empty graph".into()));
    }
    let mut component = vec![u32::MAX; n];
    let mut sizes: Vec<usize> = Vec::new();
    let mut queue = Vec::new();
    for start in 0..n as u32 {
        if component[start as usize] != u32::MAX {
            continue;
        }
        let cid = sizes.len() as u32;
        let mut size = 0usize;
        queue.push(start);
        component[start as usize] = cid;
        while let Some(v) = queue.pop() {
            size += 1;
            for &u in g.neighbors(v) {
                if component[u as usize] == u32::MAX {
                    component[u as usize] = cid;
                    queue.push(u);
                }
            }
        }
        sizes.push(size);
    }
    // First-seen component order means the smallest contained id wins ties.
    let mut best = 0u32;
    for (cid, &size) in sizes.iter().enumerate() {
        if size > sizes[best as usize] {
            best = cid as u32;
        }
    }
    let keep: Vec<u32> = (0..n as u32).filter(|&v| component[v as usize] == best).collect();
    let mut pairs: Vec<(&str, &str)> = Vec::new();
    // register nodes first: re-densified ids follow ascending old-id order,
    // and a size-1 component survives even though it has no edges
    for &v in &keep {
        pairs.push((g.label(v), g.label(v)));
    }
    for &v in &keep {
        for &u in g.neighbors(v) {
            if v < u {
                pairs.push((g.label(v), g.label(u)));
            }
        }
    }
    let (sub, _) = Graph::from_labeled_edges(pairs)?;
    Ok(sub)
}

/// Average degree and global transitivity.
pub fn topology_stats(g: &Graph) -> TopologyStats {
    let n = g.node_count();
    let m = g.edge_count();
    let avg_degree = if n == 0 { 0.0 } else { 2.0 * m as f64 / n as f64 };

    let mut triangles3 = 0u64; // each triangle counted once per edge pair => 3x
    for (i, j) in g.edges() {
        let (a, b) = (g.neighbors(i), g.neighbors(j));
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    triangles3 += 1;
                    x += 1;
                    y += 1;
                }
            }
        }
    }
    let mut triples = 0u64;
    for v in 0..n as u32 {
        let d = g.neighbors(v).len() as u64;
        triples += d * (d - 1) / 2;
    }
    let transitivity = if triples == 0 {
        0.0
    } else {
        triangles3 as f64 / triples as f64
    };
    TopologyStats {
        node_count: n,
        edge_count: m,
        avg_degree,
        transitivity,
    }
}

/// Degree of a single node.
pub fn degree(g: &Graph, v: u32) -> Result<usize> {
    if (v as usize) >= g.node_count() {
        return Err(Error::NodeId {
            id: v as usize,
            n: g.node_count(),
        });
    }
    Ok(g.neighbors(v).len())
}

/// All degrees as a score vector (the spreading-evaluation baseline measure).
pub fn degree_scores(g: &Graph) -> ScoreVector {
    let values = (0..g.node_count() as u32)
        .map(|v| g.neighbors(v).len() as f64)
        .collect();
    ScoreVector::new("degree", values)
}

/// Degree first and second moments, exact integer sums divided at the end.
pub(crate) fn degree_moments(g: &Graph) -> (f64, f64) {
    let mut k1 = KahanSum::new();
    let mut k2 = KahanSum::new();
    for v in 0..g.node_count() as u32 {
        let d = g.neighbors(v).len() as f64;
        k1.add(d);
        k2.add(d * d);
    }
    let n = g.node_count() as f64;
    (k1.value() / n, k2.value() / n)
}
