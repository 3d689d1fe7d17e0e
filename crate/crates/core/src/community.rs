//! Overlapping community covers: membership bookkeeping, belonging
//! coefficients, speaker-listener label propagation, statistics, and the
//! cover/partition file format.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::util::content_hash;

/// Overlapping community assignment over dense node ids.
///
/// Belonging coefficients are uniform over a node's memberships: a node in
/// `O` communities carries coefficient `1/O` in each of them, so the
/// per-node coefficient row always sums to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    communities: Vec<Vec<u32>>,
    memberships: Vec<Vec<u32>>,
}

/// Crisp special case of [`Cover`]: every node in exactly one community.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition(Cover);

/// Overlap statistics of a cover.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CoverStats {
    pub community_count: usize,
    /// Fraction of nodes with two or more memberships.
    pub overlap_fraction: f64,
    /// Mean membership count over all nodes.
    pub avg_memberships: f64,
}

/// Parameters of speaker-listener label propagation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlpaParams {
    pub iterations: usize,
    /// Membership-retention threshold on the final label probabilities.
    pub threshold: f64,
    pub seed: u64,
}

impl Default for SlpaParams {
    fn default() -> Self {
        Self {
            iterations: 100,
            threshold: 0.01,
            seed: 0,
        }
    }
}

impl SlpaParams {
    pub fn validate(&self) -> Result<()> {
        if self.iterations < 1 {
            return Err(Error::Parameter("slpa iterations must be >= 1".into()));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::Parameter(format!(
                "slpa threshold must lie in (0,1), got {}",
                self.threshold
            )));
        }
        Ok(())
    }
}

impl Cover {
    /// Builds a cover from per-node membership lists, assigning the uniform
    /// belonging coefficients. Community ids may be sparse; they are
    /// compacted in ascending numeric order. Every node needs at least one
    /// membership.
    pub fn from_memberships(memberships: Vec<Vec<u32>>) -> Result<Cover> {
        let mut used: Vec<u32> = Vec::new();
        for (v, ms) in memberships.iter().enumerate() {
            if ms.is_empty() {
                return Err(Error::Coverage(format!(
                    "node {v} has no community membership"
                )));
            }
            used.extend_from_slice(ms);
        }
        used.sort_unstable();
        used.dedup();
        let remap: HashMap<u32, u32> = used
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new as u32))
            .collect();

        let mut compact: Vec<Vec<u32>> = Vec::with_capacity(memberships.len());
        let mut communities: Vec<Vec<u32>> = vec![Vec::new(); used.len()];
        for (v, ms) in memberships.into_iter().enumerate() {
            let mut ids: Vec<u32> = ms.iter().map(|c| remap[c]).collect();
            ids.sort_unstable();
            ids.dedup();
            for &c in &ids {
                communities[c as usize].push(v as u32);
            }
            compact.push(ids);
        }
        Ok(Cover {
            communities,
            memberships: compact,
        })
    }

    pub fn node_count(&self) -> usize {
        self.memberships.len()
    }

    pub fn community_count(&self) -> usize {
        self.communities.len()
    }

    pub fn members(&self, c: u32) -> &[u32] {
        &self.communities[c as usize]
    }

    pub fn communities(&self) -> &[Vec<u32>] {
        &self.communities
    }

    pub fn memberships(&self, v: u32) -> &[u32] {
        &self.memberships[v as usize]
    }

    pub fn membership_count(&self, v: u32) -> usize {
        self.memberships[v as usize].len()
    }

    pub fn is_member(&self, v: u32, c: u32) -> bool {
        self.memberships[v as usize].binary_search(&c).is_ok()
    }

    /// Belonging coefficient of `v` in `c`: `1/O_v` for members, 0 otherwise.
    pub fn belonging(&self, v: u32, c: u32) -> f64 {
        if self.is_member(v, c) {
            1.0 / self.membership_count(v) as f64
        } else {
            0.0
        }
    }

    pub fn is_crisp(&self) -> bool {
        self.memberships.iter().all(|ms| ms.len() == 1)
    }

    /// Checks that the cover is defined on exactly the nodes of `g`.
    pub fn validate_for(&self, g: &Graph) -> Result<()> {
        if self.node_count() != g.node_count() {
            return Err(Error::Consistency(format!(
                "cover describes {} nodes but graph has {}",
                self.node_count(),
                g.node_count()
            )));
        }
        Ok(())
    }

    /// Stable content hash for output provenance.
    pub fn provenance_hash(&self) -> String {
        let mut buf = String::from("cover-v1\n");
        for (v, ms) in self.memberships.iter().enumerate() {
            buf.push_str(&format!("{v}:"));
            for (i, c) in ms.iter().enumerate() {
                if i > 0 {
                    buf.push(',');
                }
                buf.push_str(&c.to_string());
            }
            buf.push('\n');
        }
        content_hash(buf.as_bytes())
    }

    /// Canonical community order: size descending, then smallest member,
    /// then member list. Renumbers ids accordingly.
    fn canonicalize(self) -> Cover {
        let mut order: Vec<u32> = (0..self.communities.len() as u32).collect();
        order.sort_by(|&a, &b| {
            let (ca, cb) = (&self.communities[a as usize], &self.communities[b as usize]);
            cb.len()
                .cmp(&ca.len())
                .then_with(|| ca.first().cmp(&cb.first()))
                .then_with(|| ca.cmp(cb))
        });
        let mut remap = vec![0u32; order.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let memberships = self
            .memberships
            .iter()
            .map(|ms| {
                let mut ids: Vec<u32> = ms.iter().map(|&c| remap[c as usize]).collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        let mut communities = vec![Vec::new(); order.len()];
        for (new, &old) in order.iter().enumerate() {
            communities[new] = self.communities[old as usize].clone();
        }
        Cover {
            communities,
            memberships,
        }
    }
}

impl Partition {
    /// Wraps a crisp cover; errors if any node has more than one membership.
    pub fn from_cover(cover: Cover) -> Result<Partition> {
        if let Some(v) = (0..cover.node_count() as u32).find(|&v| cover.membership_count(v) != 1) {
            return Err(Error::Consistency(format!(
                "node {v} has {} memberships; a partition needs exactly one",
                cover.membership_count(v)
            )));
        }
        Ok(Partition(cover))
    }

    /// Single community id per node.
    pub fn from_assignments(assignments: &[u32]) -> Result<Partition> {
        let cover = Cover::from_memberships(assignments.iter().map(|&c| vec![c]).collect())?;
        Partition::from_cover(cover)
    }

    /// Everything in one community.
    pub fn single_community(n: usize) -> Partition {
        Partition::from_assignments(&vec![0; n]).expect("non-empty assignment")
    }

    pub fn community_of(&self, v: u32) -> u32 {
        self.0.memberships(v)[0]
    }

    pub fn as_cover(&self) -> &Cover {
        &self.0
    }

    pub fn into_cover(self) -> Cover {
        self.0
    }

    pub fn node_count(&self) -> usize {
        self.0.node_count()
    }

    pub fn community_count(&self) -> usize {
        self.0.community_count()
    }
}

/// Uniform belonging coefficients from raw membership lists.
pub fn belonging_coefficients(memberships: Vec<Vec<u32>>) -> Result<Cover> {
    Cover::from_memberships(memberships)
}

/// Overlap statistics: fraction of nodes with >= 2 memberships and the mean
/// membership count over all nodes.
pub fn cover_stats(cover: &Cover) -> CoverStats {
    let n = cover.node_count();
    let overlapping = (0..n as u32)
        .filter(|&v| cover.membership_count(v) >= 2)
        .count();
    let total: usize = (0..n as u32).map(|v| cover.membership_count(v)).sum();
    CoverStats {
        community_count: cover.community_count(),
        overlap_fraction: overlapping as f64 / n as f64,
        avg_memberships: total as f64 / n as f64,
    }
}

/// Collapses a cover to a partition: each node keeps its community of
/// maximal belonging coefficient, ties toward the smallest community id.
/// Emptied communities disappear.
pub fn collapse_to_partition(cover: &Cover) -> Partition {
    let assignments: Vec<u32> = (0..cover.node_count() as u32)
        .map(|v| {
            let mut best = cover.memberships(v)[0];
            let mut best_a = cover.belonging(v, best);
            for &c in &cover.memberships(v)[1..] {
                let a = cover.belonging(v, c);
                if a > best_a {
                    best = c;
                    best_a = a;
                }
            }
            best
        })
        .collect();
    Partition::from_assignments(&assignments).expect("collapse keeps one membership per node")
}

/// Speaker-listener label propagation.
///
/// Every node starts with its own label in memory. Each iteration visits the
/// nodes in a fresh random order; the visited node hears one label from each
/// neighbor (sampled proportional to that label's frequency in the speaker's
/// memory) and memorizes the most frequent label heard, breaking ties
/// uniformly at random. After the final iteration, labels whose share of a
/// node's memory reaches `threshold` become memberships; nodes whose every
/// label falls short keep their single most frequent one. Communities that
/// duplicate or sit inside another community are dropped, the rest are
/// canonicalized, and coefficients are assigned uniformly per membership.
pub fn slpa_detect(g: &Graph, params: &SlpaParams) -> Result<Cover> {
    params.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph("cannot detect communities".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    // memory[v]: (label, count) in first-heard order; totals track memory size.
    let mut memory: Vec<Vec<(u32, u32)>> = (0..n as u32).map(|v| vec![(v, 1)]).collect();
    let mut totals: Vec<u32> = vec![1; n];

    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut heard: Vec<u32> = Vec::new();
    let mut tied: Vec<u32> = Vec::new();
    for _ in 0..params.iterations {
        order.shuffle(&mut rng);
        for &v in &order {
            let neighbors = g.neighbors(v);
            if neighbors.is_empty() {
                continue;
            }
            heard.clear();
            for &u in neighbors {
                let mut pick = rng.random_range(0..totals[u as usize]);
                for &(label, count) in &memory[u as usize] {
                    if pick < count {
                        heard.push(label);
                        break;
                    }
                    pick -= count;
                }
            }
            // most frequent heard label; ties resolved uniformly at random
            tied.clear();
            let mut best = 0u32;
            for (i, &label) in heard.iter().enumerate() {
                if heard[..i].contains(&label) {
                    continue;
                }
                let count = heard.iter().filter(|&&l| l == label).count() as u32;
                if count > best {
                    best = count;
                    tied.clear();
                    tied.push(label);
                } else if count == best {
                    tied.push(label);
                }
            }
            let winner = if tied.len() == 1 {
                tied[0]
            } else {
                tied[rng.random_range(0..tied.len())]
            };
            match memory[v as usize].iter_mut().find(|(l, _)| *l == winner) {
                Some(entry) => entry.1 += 1,
                None => memory[v as usize].push((winner, 1)),
            }
            totals[v as usize] += 1;
        }
    }

    // Threshold the per-node label distributions.
    let mut raw: Vec<Vec<u32>> = Vec::with_capacity(n);
    for v in 0..n {
        let total = totals[v] as f64;
        let mut keep: Vec<u32> = memory[v]
            .iter()
            .filter(|&&(_, c)| c as f64 / total >= params.threshold)
            .map(|&(l, _)| l)
            .collect();
        if keep.is_empty() {
            // sub-threshold node: retain its single most probable label
            let &(label, _) = memory[v]
                .iter()
                .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
                .expect("memory never empty");
            keep.push(label);
        }
        keep.sort_unstable();
        raw.push(keep);
    }

    // Communities = nodes sharing a surviving label; keep only maximal sets.
    let mut by_label: HashMap<u32, Vec<u32>> = HashMap::new();
    for (v, labels) in raw.iter().enumerate() {
        for &l in labels {
            by_label.entry(l).or_default().push(v as u32);
        }
    }
    let mut sets: Vec<Vec<u32>> = by_label.into_values().collect();
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut kept: Vec<Vec<u32>> = Vec::new();
    for s in sets {
        if !kept.iter().any(|t| is_subset(&s, t)) {
            kept.push(s);
        }
    }

    let mut memberships: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (c, members) in kept.iter().enumerate() {
        for &v in members {
            memberships[v as usize].push(c as u32);
        }
    }
    debug_assert!(memberships.iter().all(|ms| !ms.is_empty()));
    Ok(Cover::from_memberships(memberships)?.canonicalize())
}

/// `a` subset of `b`, both sorted ascending.
fn is_subset(a: &[u32], b: &[u32]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut i = 0;
    for &x in a {
        while i < b.len() && b[i] < x {
            i += 1;
        }
        if i == b.len() || b[i] != x {
            return false;
        }
        i += 1;
    }
    true
}

pub const COVER_FILE_VERSION: &str = "modvit cover v1";

/// Writes one line per node: `label<TAB>c1,c2,...`.
pub fn write_cover<W: Write>(w: &mut W, g: &Graph, cover: &Cover) -> Result<()> {
    cover.validate_for(g)?;
    writeln!(w, "# {COVER_FILE_VERSION}")?;
    for v in 0..g.node_count() as u32 {
        let ids: Vec<String> = cover.memberships(v).iter().map(|c| c.to_string()).collect();
        writeln!(w, "{}\t{}", g.label(v), ids.join(","))?;
    }
    Ok(())
}

/// Reads a cover file back against a graph. Unknown labels are consistency
/// errors; graph nodes absent from the file are coverage errors. Community
/// ids may be sparse in the file and are compacted in ascending order, so
/// writing and re-reading a cover reproduces it exactly.
pub fn read_cover<R: BufRead>(r: R, g: &Graph) -> Result<Cover> {
    let n = g.node_count();
    let mut memberships: Vec<Option<Vec<u32>>> = vec![None; n];
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split('\t');
        let (label, ids) = match (parts.next(), parts.next(), parts.next()) {
            (Some(l), Some(ids), None) => (l, ids),
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "expected label<TAB>c1,c2,...".into(),
                })
            }
        };
        let v = g.node_by_label(label).ok_or_else(|| {
            Error::Consistency(format!("cover names node {label:?} absent from graph"))
        })?;
        if memberships[v as usize].is_some() {
            return Err(Error::Consistency(format!(
                "node {label:?} assigned twice in cover file"
            )));
        }
        let mut communities = Vec::new();
        for tok in ids.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            communities.push(tok.parse::<u32>().map_err(|e| Error::Parse {
                line: idx + 1,
                msg: format!("bad community id {tok:?}: {e}"),
            })?);
        }
        if communities.is_empty() {
            return Err(Error::Coverage(format!(
                "node {label:?} listed without any community"
            )));
        }
        memberships[v as usize] = Some(communities);
    }
    let mut filled = Vec::with_capacity(n);
    for (v, ms) in memberships.into_iter().enumerate() {
        match ms {
            Some(ms) => filled.push(ms),
            None => {
                return Err(Error::Coverage(format!(
                    "node {:?} missing from cover file",
                    g.label(v as u32)
                )))
            }
        }
    }
    Cover::from_memberships(filled)
}

/// Partition files share the cover format with exactly one community per node.
pub fn read_partition<R: BufRead>(r: R, g: &Graph) -> Result<Partition> {
    Partition::from_cover(read_cover(r, g)?)
}

pub fn write_partition<W: Write>(w: &mut W, g: &Graph, p: &Partition) -> Result<()> {
    write_cover(w, g, p.as_cover())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cliques(k: usize) -> Graph {
        let mut edges = Vec::new();
        for base in [0usize, k] {
            for i in 0..k {
                for j in (i + 1)..k {
                    edges.push(((base + i) as u32, (base + j) as u32));
                }
            }
        }
        Graph::from_numeric_edges(&edges).unwrap()
    }

    #[test]
    fn belonging_is_uniform_reciprocal() {
        let cover =
            belonging_coefficients(vec![vec![0], vec![0, 1], vec![0, 1, 2, 3], vec![1, 2, 3]])
                .unwrap();
        assert_eq!(cover.belonging(0, 0), 1.0);
        assert_eq!(cover.belonging(1, 0), 0.5);
        assert_eq!(cover.belonging(1, 1), 0.5);
        assert_eq!(cover.belonging(2, 3), 0.25);
        assert_eq!(cover.belonging(0, 1), 0.0);
        for v in 0..4 {
            let total: f64 = (0..4).map(|c| cover.belonging(v, c)).sum();
            assert!((total - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn empty_membership_is_coverage_error() {
        assert!(matches!(
            belonging_coefficients(vec![vec![0], vec![]]),
            Err(Error::Coverage(_))
        ));
    }

    #[test]
    fn sparse_ids_are_compacted() {
        let cover = belonging_coefficients(vec![vec![7], vec![7, 42]]).unwrap();
        assert_eq!(cover.community_count(), 2);
        assert_eq!(cover.memberships(0), &[0]);
        assert_eq!(cover.memberships(1), &[0, 1]);
    }

    #[test]
    fn stats_crisp_and_mixed() {
        let crisp = Partition::from_assignments(&[0, 0, 1, 1]).unwrap();
        let s = cover_stats(crisp.as_cover());
        assert_eq!(s.overlap_fraction, 0.0);
        assert_eq!(s.avg_memberships, 1.0);

        let mixed =
            belonging_coefficients(vec![vec![0], vec![1], vec![0, 1], vec![0, 1]]).unwrap();
        let s = cover_stats(&mixed);
        assert_eq!(s.overlap_fraction, 0.5);
        assert_eq!(s.avg_memberships, 1.5);
    }

    #[test]
    fn collapse_rules() {
        let crisp = Partition::from_assignments(&[0, 1, 0]).unwrap();
        let again = collapse_to_partition(crisp.as_cover());
        assert_eq!(again, crisp);

        let cover = belonging_coefficients(vec![vec![0, 1], vec![1], vec![0, 1]]).unwrap();
        let p = collapse_to_partition(&cover);
        assert_eq!(p.community_of(0), 0);
        assert_eq!(p.community_of(1), 1);
        assert_eq!(p.community_of(2), 0);

        // every node overlapping the same two communities: all keep the smaller id,
        // the emptied community disappears
        let all = belonging_coefficients(vec![vec![0, 1], vec![0, 1]]).unwrap();
        let p = collapse_to_partition(&all);
        assert_eq!(p.community_count(), 1);
        let s = cover_stats(p.as_cover());
        assert_eq!(s.overlap_fraction, 0.0);
        assert_eq!(s.avg_memberships, 1.0);
    }

    #[test]
    fn slpa_recovers_disjoint_cliques() {
        let g = two_cliques(5);
        let expected: Vec<Vec<u32>> = vec![(0..5).collect(), (5..10).collect()];
        let mut hits = 0;
        for seed in 0..100 {
            let cover = slpa_detect(
                &g,
                &SlpaParams {
                    iterations: 100,
                    threshold: 0.01,
                    seed,
                },
            )
            .unwrap();
            if cover.communities() == expected.as_slice() {
                hits += 1;
            }
            // labels cannot cross components regardless of seed
            for members in cover.communities() {
                let sides: std::collections::HashSet<bool> =
                    members.iter().map(|&v| v >= 5).collect();
                assert_eq!(sides.len(), 1, "community spans components");
            }
        }
        assert!(hits >= 95, "clique recovery in only {hits}/100 seeds");
    }

    #[test]
    fn slpa_single_clique() {
        let mut edges = Vec::new();
        for i in 0..4u32 {
            for j in (i + 1)..4 {
                edges.push((i, j));
            }
        }
        let g = Graph::from_numeric_edges(&edges).unwrap();
        let mut hits = 0;
        for seed in 0..100 {
            let cover = slpa_detect(
                &g,
                &SlpaParams {
                    iterations: 100,
                    threshold: 0.01,
                    seed,
                },
            )
            .unwrap();
            if cover.community_count() == 1 && cover.members(0) == [0, 1, 2, 3] {
                hits += 1;
            }
        }
        assert!(hits >= 95, "K4 recovered as one community in only {hits}/100 seeds");
    }

    #[test]
    fn slpa_keeps_a_membership_under_aggressive_threshold() {
        // with r = 0.9 almost every label falls below the cut; the fallback
        // to the most probable label must keep every node covered
        let g = two_cliques(5);
        for seed in 0..20 {
            let cover = slpa_detect(
                &g,
                &SlpaParams {
                    iterations: 5,
                    threshold: 0.9,
                    seed,
                },
            )
            .unwrap();
            for v in 0..g.node_count() as u32 {
                assert!(cover.membership_count(v) >= 1);
            }
        }
    }

    #[test]
    fn slpa_is_deterministic() {
        let g = two_cliques(5);
        let params = SlpaParams {
            iterations: 50,
            threshold: 0.05,
            seed: 1234,
        };
        let a = slpa_detect(&g, &params).unwrap();
        let b = slpa_detect(&g, &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn slpa_isolated_node_becomes_singleton() {
        // a triangle plus an isolated node (registered via the numeric helper)
        let mut g_edges = vec![(0u32, 1u32), (1, 2), (0, 2)];
        g_edges.push((3, 3)); // self loop dropped, registers node 3
        let g = Graph::from_numeric_edges(&g_edges).unwrap();
        assert_eq!(g.node_count(), 4);
        let cover = slpa_detect(&g, &SlpaParams::default()).unwrap();
        assert!(cover
            .communities()
            .iter()
            .any(|members| members.as_slice() == [3]));
        assert_eq!(cover.membership_count(3), 1);
    }

    #[test]
    fn cover_round_trip() {
        let g = Graph::from_numeric_edges(&[(0, 1), (1, 2), (2, 3)]).unwrap();
        let cover =
            belonging_coefficients(vec![vec![0], vec![0, 1], vec![1], vec![1, 2]]).unwrap();
        let mut buf = Vec::new();
        write_cover(&mut buf, &g, &cover).unwrap();
        let back = read_cover(buf.as_slice(), &g).unwrap();
        assert_eq!(back, cover);
    }

    #[test]
    fn cover_file_errors() {
        let g = Graph::from_numeric_edges(&[(0, 1)]).unwrap();
        // unknown node
        assert!(matches!(
            read_cover("x\t0\n0\t0\n1\t0\n".as_bytes(), &g),
            Err(Error::Consistency(_))
        ));
        // missing node
        assert!(matches!(
            read_cover("0\t0\n".as_bytes(), &g),
            Err(Error::Coverage(_))
        ));
    }

    #[test]
    fn partition_file_round_trip_and_validation() {
        let g = Graph::from_numeric_edges(&[(0, 1), (1, 2)]).unwrap();
        let p = Partition::from_assignments(&[0, 0, 1]).unwrap();
        let mut buf = Vec::new();
        write_partition(&mut buf, &g, &p).unwrap();
        let back = read_partition(buf.as_slice(), &g).unwrap();
        assert_eq!(back, p);
        // an overlapping file is not a partition
        assert!(read_partition("0\t0,1\n1\t0\n2\t1\n".as_bytes(), &g).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn belonging_rows_sum_to_one(memberships in proptest::collection::vec(
                proptest::collection::btree_set(0u32..6, 1..4), 1..20)) {
                let ms: Vec<Vec<u32>> =
                    memberships.into_iter().map(|s| s.into_iter().collect()).collect();
                let cover = Cover::from_memberships(ms).unwrap();
                for v in 0..cover.node_count() as u32 {
                    let o = cover.membership_count(v);
                    let row: f64 = (0..cover.community_count() as u32)
                        .map(|c| cover.belonging(v, c))
                        .sum();
                    prop_assert!((row - 1.0).abs() <= 1e-12);
                    for &c in cover.memberships(v) {
                        prop_assert_eq!(cover.belonging(v, c), 1.0 / o as f64);
                    }
                }
            }

            #[test]
            fn collapse_always_yields_crisp_stats(memberships in proptest::collection::vec(
                proptest::collection::btree_set(0u32..5, 1..4), 1..20)) {
                let ms: Vec<Vec<u32>> =
                    memberships.into_iter().map(|s| s.into_iter().collect()).collect();
                let cover = Cover::from_memberships(ms).unwrap();
                let p = collapse_to_partition(&cover);
                let s = cover_stats(p.as_cover());
                prop_assert_eq!(s.overlap_fraction, 0.0);
                prop_assert_eq!(s.avg_memberships, 1.0);
            }
        }
    }
}
