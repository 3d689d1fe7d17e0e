//! Community quality: crisp modularity and its fuzzy overlapping extension,
//! both expressed through reusable per-community edge tallies.

use crate::community::{Cover, Partition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::util::KahanSum;

/// Per-community intra/inter edge masses plus the tallied graph's edge count.
///
/// Crisp tallies are integer edge counts; fuzzy tallies weight each edge end
/// by the endpoints' belonging coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityTally {
    pub intra: Vec<f64>,
    pub inter: Vec<f64>,
    pub total_edges: f64,
}

impl CommunityTally {
    pub fn community_count(&self) -> usize {
        self.intra.len()
    }
}

/// Integer intra/inter edge counts of a crisp partition.
///
/// An edge inside community `c` adds 1 to `intra[c]`; an edge between `c`
/// and `d` adds 1 to both `inter[c]` and `inter[d]`.
pub fn crisp_tallies(g: &Graph, p: &Partition) -> Result<CommunityTally> {
    p.as_cover().validate_for(g)?;
    let k = p.community_count();
    let mut intra = vec![0u64; k];
    let mut inter = vec![0u64; k];
    for (i, j) in g.edges() {
        let (ci, cj) = (p.community_of(i), p.community_of(j));
        if ci == cj {
            intra[ci as usize] += 1;
        } else {
            inter[ci as usize] += 1;
            inter[cj as usize] += 1;
        }
    }
    Ok(CommunityTally {
        intra: intra.into_iter().map(|x| x as f64).collect(),
        inter: inter.into_iter().map(|x| x as f64).collect(),
        total_edges: g.edge_count() as f64,
    })
}

/// Membership-weighted intra/inter masses of an overlapping cover.
///
/// For an edge `{i, j}` and community `c`:
/// - both endpoints members of `c`: `intra[c] += (a_i + a_j) / 2`;
/// - for each ordered endpoint pair `(x, y)` with `x` a member of `c` and
///   `y` a member of at least one other community:
///   `inter[c] += (a_x + 1 - a_y) / 2`, where `a_y` is 0 when `y` is not
///   in `c`.
///
/// An edge between two overlapping co-members of `c` therefore contributes
/// to both masses, which is exactly what makes the crisp case collapse to
/// the integer tallies.
pub fn fuzzy_tallies(g: &Graph, cover: &Cover) -> Result<CommunityTally> {
    cover.validate_for(g)?;
    let k = cover.community_count();
    let mut intra = vec![KahanSum::new(); k];
    let mut inter = vec![KahanSum::new(); k];
    for (i, j) in g.edges() {
        let o_i = cover.membership_count(i);
        let o_j = cover.membership_count(j);
        let a_i = 1.0 / o_i as f64;
        let a_j = 1.0 / o_j as f64;
        for &c in cover.memberships(i) {
            let j_in = cover.is_member(j, c);
            if j_in {
                intra[c as usize].add((a_i + a_j) * 0.5);
                if o_j >= 2 {
                    inter[c as usize].add((a_i + 1.0 - a_j) * 0.5);
                }
            } else {
                inter[c as usize].add((a_i + 1.0) * 0.5);
            }
        }
        for &c in cover.memberships(j) {
            let i_in = cover.is_member(i, c);
            if i_in {
                if o_i >= 2 {
                    inter[c as usize].add((a_j + 1.0 - a_i) * 0.5);
                }
            } else {
                inter[c as usize].add((a_j + 1.0) * 0.5);
            }
        }
    }
    Ok(CommunityTally {
        intra: intra.iter().map(KahanSum::value).collect(),
        inter: inter.iter().map(KahanSum::value).collect(),
        total_edges: g.edge_count() as f64,
    })
}

/// The shared quality expression: sum over communities of
/// `intra/m - ((2*intra + inter) / 2m)^2`.
pub fn modularity_from_tallies(t: &CommunityTally) -> Result<f64> {
    if t.total_edges <= 0.0 {
        return Err(Error::UndefinedModularity);
    }
    let m = t.total_edges;
    let mut q = KahanSum::new();
    for c in 0..t.community_count() {
        let frac = (2.0 * t.intra[c] + t.inter[c]) / (2.0 * m);
        q.add(t.intra[c] / m - frac * frac);
    }
    Ok(q.value())
}

/// Crisp Newman modularity of a partition.
pub fn newman_modularity(g: &Graph, p: &Partition) -> Result<f64> {
    modularity_from_tallies(&crisp_tallies(g, p)?)
}

/// Overlapping modularity: the crisp expression over fuzzy tallies, with the
/// plain edge count as denominator.
pub fn overlapping_modularity(g: &Graph, cover: &Cover) -> Result<f64> {
    modularity_from_tallies(&fuzzy_tallies(g, cover)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn clique_edges(nodes: std::ops::Range<u32>) -> Vec<(u32, u32)> {
        let nodes: Vec<u32> = nodes.collect();
        let mut edges = Vec::new();
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                edges.push((a, b));
            }
        }
        edges
    }

    /// Direct double-sum oracle: (1/2m) * sum_ij (A_ij - k_i k_j / 2m) * delta(c_i, c_j).
    fn pairwise_modularity_oracle(g: &Graph, p: &Partition) -> f64 {
        let m2 = 2.0 * g.edge_count() as f64;
        let n = g.node_count() as u32;
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                if p.community_of(i) != p.community_of(j) {
                    continue;
                }
                let a = if g.has_edge(i, j) { 1.0 } else { 0.0 };
                let ki = g.neighbors(i).len() as f64;
                let kj = g.neighbors(j).len() as f64;
                q += a - ki * kj / m2;
            }
        }
        q / m2
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: u32, p: f64) -> Graph {
        loop {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.random_bool(p) {
                        edges.push((i, j));
                    }
                }
            }
            if !edges.is_empty() {
                // register all ids so isolated nodes stay in the graph
                edges.extend((0..n).map(|i| (i, i)));
                return Graph::from_numeric_edges(&edges).unwrap();
            }
        }
    }

    fn random_partition(rng: &mut ChaCha8Rng, n: usize, k: u32) -> Partition {
        let assignments: Vec<u32> = (0..n).map(|_| rng.random_range(0..k)).collect();
        Partition::from_assignments(&assignments).unwrap()
    }

    #[test]
    fn crisp_tallies_examples() {
        // two disjoint triangles, one community each
        let mut edges = clique_edges(0..3);
        edges.extend(clique_edges(3..6));
        let g = Graph::from_numeric_edges(&edges).unwrap();
        let p = Partition::from_assignments(&[0, 0, 0, 1, 1, 1]).unwrap();
        let t = crisp_tallies(&g, &p).unwrap();
        assert_eq!(t.intra, vec![3.0, 3.0]);
        assert_eq!(t.inter, vec![0.0, 0.0]);

        // triangle split {a,b} | {c}
        let g = Graph::from_numeric_edges(&clique_edges(0..3)).unwrap();
        let p = Partition::from_assignments(&[0, 0, 1]).unwrap();
        let t = crisp_tallies(&g, &p).unwrap();
        assert_eq!(t.intra, vec![1.0, 0.0]);
        assert_eq!(t.inter, vec![2.0, 2.0]);

        // whole graph one community
        let p = Partition::single_community(3);
        let t = crisp_tallies(&g, &p).unwrap();
        assert_eq!(t.intra, vec![3.0]);
        assert_eq!(t.inter, vec![0.0]);
    }

    #[test]
    fn q_whole_graph_is_zero() {
        let g = Graph::from_numeric_edges(&clique_edges(0..4)).unwrap();
        let q = newman_modularity(&g, &Partition::single_community(4)).unwrap();
        assert!(q.abs() <= 1e-15);
    }

    #[test]
    fn q_two_disjoint_cliques_is_half() {
        for k in [3u32, 5, 8] {
            let mut edges = clique_edges(0..k);
            edges.extend(clique_edges(k..2 * k));
            let g = Graph::from_numeric_edges(&edges).unwrap();
            let assignments: Vec<u32> = (0..2 * k).map(|v| (v >= k) as u32).collect();
            let p = Partition::from_assignments(&assignments).unwrap();
            let q = newman_modularity(&g, &p).unwrap();
            assert!((q - 0.5).abs() <= 1e-15, "K{k}: q = {q}");
        }
    }

    #[test]
    fn q_matches_pairwise_oracle_on_random_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..50 {
            let n = rng.random_range(5..40);
            let g = random_graph(&mut rng, n, 0.2);
            let k = rng.random_range(1..6);
            let p = random_partition(&mut rng, g.node_count(), k);
            let q = newman_modularity(&g, &p).unwrap();
            let oracle = pairwise_modularity_oracle(&g, &p);
            assert!(
                (q - oracle).abs() <= 1e-12,
                "trial {trial}: q={q} oracle={oracle}"
            );
        }
    }

    #[test]
    fn zero_edges_is_undefined() {
        let g = Graph::from_numeric_edges(&[(0, 0), (1, 1)]).unwrap();
        assert_eq!(g.edge_count(), 0);
        let p = Partition::single_community(2);
        assert!(matches!(
            newman_modularity(&g, &p),
            Err(Error::UndefinedModularity)
        ));
        assert!(matches!(
            overlapping_modularity(&g, p.as_cover()),
            Err(Error::UndefinedModularity)
        ));
    }

    #[test]
    fn fuzzy_reduces_to_crisp_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let n = rng.random_range(4..30);
            let g = random_graph(&mut rng, n, 0.25);
            let k = rng.random_range(1..5);
            let p = random_partition(&mut rng, g.node_count(), k);
            let crisp = crisp_tallies(&g, &p).unwrap();
            let fuzzy = fuzzy_tallies(&g, p.as_cover()).unwrap();
            assert_eq!(crisp, fuzzy);
        }
    }

    #[test]
    fn fuzzy_tally_hand_example() {
        // edge 0-1 with 0 in {c0, c1} (a = 0.5 each) and 1 in {c0} only
        let g = Graph::from_numeric_edges(&[(0, 1)]).unwrap();
        let cover = crate::community::belonging_coefficients(vec![vec![0, 1], vec![0]]).unwrap();
        let t = fuzzy_tallies(&g, &cover).unwrap();
        // intra(c0) gains (0.5 + 1)/2; the ordered pair (1, 0) also lands in
        // inter(c0) because node 0 belongs to another community
        assert!((t.intra[0] - 0.75).abs() <= 1e-15);
        assert!((t.inter[0] - 0.75).abs() <= 1e-15);
        // community c1: member 0 with a=0.5, neighbor 1 outside entirely
        assert!((t.intra[1] - 0.0).abs() <= 1e-15);
        assert!((t.inter[1] - 0.75).abs() <= 1e-15);
    }

    #[test]
    fn overlapping_q_on_shared_node_cliques() {
        // two K4 cliques sharing node 3, the shared node in both communities
        let mut edges = clique_edges(0..4);
        edges.extend(clique_edges(3..7));
        let g = Graph::from_numeric_edges(&edges).unwrap();
        let memberships: Vec<Vec<u32>> = (0..7)
            .map(|v| match v {
                3 => vec![0, 1],
                x if x < 3 => vec![0],
                _ => vec![1],
            })
            .collect();
        let cover = crate::community::belonging_coefficients(memberships).unwrap();
        let q = overlapping_modularity(&g, &cover).unwrap();
        // direct evaluation: each clique has intra 3*1 + 3*0.75 = 5.25 and
        // inter 3*0.75 + 3*0.75 = 4.5, with m = 12
        let expected = 2.0 * (5.25 / 12.0 - (15.0 / 24.0) * (15.0 / 24.0));
        assert!((q - expected).abs() <= 1e-12);
        assert!((q - 0.09375).abs() <= 1e-12);
    }

    #[test]
    fn crisp_masses_balance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g = random_graph(&mut rng, 25, 0.2);
            let p = random_partition(&mut rng, g.node_count(), 4);
            let t = crisp_tallies(&g, &p).unwrap();
            let balance: f64 = (0..t.community_count())
                .map(|c| 2.0 * t.intra[c] + t.inter[c])
                .sum();
            assert_eq!(balance, 2.0 * g.edge_count() as f64);
            assert!(t.intra.iter().chain(t.inter.iter()).all(|&x| x >= 0.0));
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn relabeling_leaves_q_unchanged(seed in 0u64..500) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let g = random_graph(&mut rng, 18, 0.25);
                let n = g.node_count();
                let p = random_partition(&mut rng, n, 3);

                // permute community ids
                let perm = [2u32, 0, 1];
                let relabeled: Vec<u32> =
                    (0..n as u32).map(|v| perm[p.community_of(v) as usize]).collect();
                let p2 = Partition::from_assignments(&relabeled).unwrap();
                let (q1, q2) = (
                    newman_modularity(&g, &p).unwrap(),
                    newman_modularity(&g, &p2).unwrap(),
                );
                prop_assert!((q1 - q2).abs() <= 1e-12);

                // permute node ids
                use rand::seq::SliceRandom;
                let mut node_perm: Vec<u32> = (0..n as u32).collect();
                node_perm.shuffle(&mut rng);
                let edges: Vec<(u32, u32)> = g
                    .edges()
                    .map(|(i, j)| (node_perm[i as usize], node_perm[j as usize]))
                    .chain((0..n as u32).map(|v| (v, v)))
                    .collect();
                let g2 = Graph::from_numeric_edges(&edges).unwrap();
                let mut assigned = vec![0u32; n];
                for v in 0..n as u32 {
                    assigned[node_perm[v as usize] as usize] = p.community_of(v);
                }
                let p3 = Partition::from_assignments(&assigned).unwrap();
                let q3 = newman_modularity(&g2, &p3).unwrap();
                prop_assert!((q1 - q3).abs() <= 1e-12);
            }

            #[test]
            fn crisp_reduction_holds(seed in 0u64..500) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let g = random_graph(&mut rng, 20, 0.2);
                let p = random_partition(&mut rng, g.node_count(), 4);
                let q = newman_modularity(&g, &p).unwrap();
                let qo = overlapping_modularity(&g, p.as_cover()).unwrap();
                prop_assert!((q - qo).abs() <= 1e-12);
            }
        }
    }
}
