//! Seed orderings from signed score vectors.

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scores::ScoreVector;

/// How a signed measure is turned into an ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Highest positive value first: hubs first.
    PositiveFirst,
    /// Lowest (most negative) value first: bridges first.
    NegativeFirst,
    /// Largest magnitude first: hubs and bridges together.
    Absolute,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::PositiveFirst,
        Strategy::NegativeFirst,
        Strategy::Absolute,
    ];

    /// Short form used in CLI flags and output tables.
    pub fn tag(&self) -> &'static str {
        match self {
            Strategy::PositiveFirst => "pos",
            Strategy::NegativeFirst => "neg",
            Strategy::Absolute => "abs",
        }
    }

    pub fn parse(s: &str) -> Result<Strategy> {
        match s {
            "pos" => Ok(Strategy::PositiveFirst),
            "neg" => Ok(Strategy::NegativeFirst),
            "abs" => Ok(Strategy::Absolute),
            other => Err(Error::Parameter(format!(
                "unknown strategy {other:?} (expected pos, neg, or abs)"
            ))),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// A full ordering of the scored nodes, with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub strategy: Strategy,
    pub measure: String,
    pub order: Vec<u32>,
}

/// Orders nodes under the given strategy.
///
/// NaN scores sort after all valid scores in every strategy. Ties break
/// toward higher degree, then toward the smaller dense node id, so the
/// ordering is a deterministic function of (graph, scores, strategy).
pub fn rank(g: &Graph, scores: &ScoreVector, strategy: Strategy) -> Result<Ranking> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("cannot rank an empty score vector".into()));
    }
    if scores.len() != g.node_count() {
        return Err(Error::Consistency(format!(
            "score vector has {} entries but graph has {} nodes",
            scores.len(),
            g.node_count()
        )));
    }
    let key = |v: u32| -> Option<f64> {
        let s = scores.values[v as usize];
        if s.is_nan() {
            return None;
        }
        Some(match strategy {
            Strategy::PositiveFirst => -s,
            Strategy::NegativeFirst => s,
            Strategy::Absolute => -s.abs(),
        })
    };
    let mut order: Vec<u32> = (0..g.node_count() as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        match (key(a), key(b)) {
            (Some(x), Some(y)) => x.partial_cmp(&y).expect("keys are finite"),
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, None) => std::cmp::Ordering::Equal,
        }
        .then_with(|| g.neighbors(b).len().cmp(&g.neighbors(a).len()))
        .then_with(|| a.cmp(&b))
    });
    Ok(Ranking {
        strategy,
        measure: scores.measure.clone(),
        order,
    })
}

/// First `ceil(f * n)` nodes of the ordering, at least one.
///
/// The product is nudged down by 1e-9 before the ceiling so that grid values
/// like 0.3 (whose binary product can land a hair above the exact decimal
/// one) do not admit a spurious extra node.
pub fn top_fraction(ranking: &Ranking, f: f64) -> Result<Vec<u32>> {
    if !(f > 0.0 && f <= 1.0) {
        return Err(Error::Parameter(format!(
            "seed fraction must lie in (0,1], got {f}"
        )));
    }
    let n = ranking.order.len();
    let k = ((f * n as f64) - 1e-9).ceil().max(1.0) as usize;
    Ok(ranking.order[..k.min(n)].to_vec())
}

pub const RANKING_FILE_VERSION: &str = "modvit ranking v1";

/// Writes `rank<TAB>label<TAB>score` lines under a strategy/measure header.
pub fn write_ranking<W: Write>(
    w: &mut W,
    g: &Graph,
    ranking: &Ranking,
    scores: &ScoreVector,
) -> Result<()> {
    writeln!(w, "# {RANKING_FILE_VERSION}")?;
    writeln!(w, "# measure: {}", ranking.measure)?;
    writeln!(w, "# strategy: {}", ranking.strategy)?;
    for (i, &v) in ranking.order.iter().enumerate() {
        let s = scores.values[v as usize];
        if s.is_nan() {
            writeln!(w, "{}\t{}\tnan", i + 1, g.label(v))?;
        } else {
            writeln!(w, "{}\t{}\t{}", i + 1, g.label(v), s)?;
        }
    }
    Ok(())
}
