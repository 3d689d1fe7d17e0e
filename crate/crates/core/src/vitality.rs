//! Signed node vitalities: the change in (overlapping) modularity caused by
//! removing a node, computed incrementally per node.
//!
//! Removing `v` deletes its incident edges and its memberships; the community
//! structure is otherwise held fixed — detection is never re-run and the
//! remaining nodes keep their belonging coefficients. The quality of the
//! reduced graph is evaluated over its own edge count `|E| - deg(v)`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::community::{Cover, Partition};
use crate::error::Result;
use crate::graph::Graph;
use crate::modularity::{crisp_tallies, fuzzy_tallies, modularity_from_tallies, CommunityTally};
use crate::scores::ScoreVector;
use crate::util::KahanSum;

/// Modularity vitality of every node under a crisp partition.
///
/// Nodes whose removal would leave an empty edge set get NaN (undefined),
/// never a silent zero.
pub fn modularity_vitality(g: &Graph, p: &Partition) -> Result<ScoreVector> {
    let tallies = crisp_tallies(g, p)?;
    let engine = VitalityEngine::new(g, p.as_cover(), tallies)?;
    Ok(ScoreVector::new("mv", engine.all_scores()))
}

/// Overlapping modularity vitality of every node under a cover.
pub fn overlapping_modularity_vitality(g: &Graph, cover: &Cover) -> Result<ScoreVector> {
    let tallies = fuzzy_tallies(g, cover)?;
    let engine = VitalityEngine::new(g, cover, tallies)?;
    Ok(ScoreVector::new("omv", engine.all_scores()))
}

/// Reference path: recompute the reduced graph's quality from scratch for a
/// single node. Much slower than the incremental engine; used to spot-check
/// it (the score command exposes this as an opt-in verification pass).
pub fn vitality_by_recompute(g: &Graph, cover: &Cover, v: u32) -> Result<f64> {
    let tallies = if cover.is_crisp() {
        crisp_tallies(g, &Partition::from_cover(cover.clone())?)?
    } else {
        fuzzy_tallies(g, cover)?
    };
    let q_base = modularity_from_tallies(&tallies)?;
    let m_reduced = g.edge_count() - g.neighbors(v).len();
    if m_reduced == 0 {
        return Ok(f64::NAN);
    }

    // Re-tally every community over the surviving edges, with the original
    // belonging coefficients.
    let k = cover.community_count();
    let mut intra = vec![KahanSum::new(); k];
    let mut inter = vec![KahanSum::new(); k];
    for (i, j) in g.edges() {
        if i == v || j == v {
            continue;
        }
        let o_i = cover.membership_count(i);
        let o_j = cover.membership_count(j);
        let a_i = 1.0 / o_i as f64;
        let a_j = 1.0 / o_j as f64;
        for &c in cover.memberships(i) {
            if cover.is_member(j, c) {
                intra[c as usize].add((a_i + a_j) * 0.5);
                if o_j >= 2 {
                    inter[c as usize].add((a_i + 1.0 - a_j) * 0.5);
                }
            } else {
                inter[c as usize].add((a_i + 1.0) * 0.5);
            }
        }
        for &c in cover.memberships(j) {
            if cover.is_member(i, c) {
                if o_i >= 2 {
                    inter[c as usize].add((a_j + 1.0 - a_i) * 0.5);
                }
            } else {
                inter[c as usize].add((a_j + 1.0) * 0.5);
            }
        }
    }
    let reduced = CommunityTally {
        intra: intra.iter().map(KahanSum::value).collect(),
        inter: inter.iter().map(KahanSum::value).collect(),
        total_edges: m_reduced as f64,
    };
    Ok(q_base - modularity_from_tallies(&reduced)?)
}

/// Shared incremental engine. Maintains the global aggregates
/// `S1 = sum_c intra_c` and `S2 = sum_c (2*intra_c + inter_c)^2`; per node it
/// adjusts only the communities touched by that node's edges and
/// memberships, then re-evaluates the quality at the reduced edge count.
struct VitalityEngine<'a> {
    g: &'a Graph,
    cover: &'a Cover,
    tallies: CommunityTally,
    q_base: f64,
    s1: f64,
    s2: f64,
}

impl<'a> VitalityEngine<'a> {
    fn new(g: &'a Graph, cover: &'a Cover, tallies: CommunityTally) -> Result<Self> {
        let q_base = modularity_from_tallies(&tallies)?;
        let mut s1 = KahanSum::new();
        let mut s2 = KahanSum::new();
        for c in 0..tallies.community_count() {
            s1.add(tallies.intra[c]);
            let x = 2.0 * tallies.intra[c] + tallies.inter[c];
            s2.add(x * x);
        }
        Ok(Self {
            g,
            cover,
            tallies,
            q_base,
            s1: s1.value(),
            s2: s2.value(),
        })
    }

    /// Tally deltas for the communities touched by removing `v`, mirroring
    /// the fuzzy mass definitions edge by edge.
    fn removal_deltas(&self, v: u32) -> BTreeMap<u32, (f64, f64)> {
        let cover = self.cover;
        let o_v = cover.membership_count(v);
        let a_v = 1.0 / o_v as f64;
        let mut delta: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
        for &u in self.g.neighbors(v) {
            let o_u = cover.membership_count(u);
            let a_u = 1.0 / o_u as f64;
            for &c in cover.memberships(v) {
                let e = delta.entry(c).or_default();
                if cover.is_member(u, c) {
                    e.0 -= (a_v + a_u) * 0.5;
                    if o_u >= 2 {
                        e.1 -= (a_v + 1.0 - a_u) * 0.5;
                    }
                } else {
                    e.1 -= (a_v + 1.0) * 0.5;
                }
            }
            for &c in cover.memberships(u) {
                if cover.is_member(v, c) {
                    if o_v >= 2 {
                        delta.entry(c).or_default().1 -= (a_u + 1.0 - a_v) * 0.5;
                    }
                } else {
                    delta.entry(c).or_default().1 -= (a_u + 1.0) * 0.5;
                }
            }
        }
        delta
    }

    fn score(&self, v: u32) -> f64 {
        let deg = self.g.neighbors(v).len();
        let m_reduced = self.tallies.total_edges - deg as f64;
        if m_reduced <= 0.0 {
            return f64::NAN;
        }
        let mut s1 = self.s1;
        let mut s2 = self.s2;
        for (&c, &(d_intra, d_inter)) in &self.removal_deltas(v) {
            let c = c as usize;
            let x0 = 2.0 * self.tallies.intra[c] + self.tallies.inter[c];
            let x1 = 2.0 * (self.tallies.intra[c] + d_intra) + self.tallies.inter[c] + d_inter;
            s1 += d_intra;
            s2 += (x1 - x0) * (x1 + x0);
        }
        let q_reduced = s1 / m_reduced - s2 / (4.0 * m_reduced * m_reduced);
        self.q_base - q_reduced
    }

    /// Scores for every node; per-node work is independent, so the map runs
    /// in parallel and collects in dense-id order.
    fn all_scores(&self) -> Vec<f64> {
        (0..self.g.node_count() as u32)
            .into_par_iter()
            .map(|v| self.score(v))
            .collect()
    }
}
