//! Per-node score vectors and their on-disk format.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Signed per-node centrality values, one per dense node id.
///
/// Undefined entries (a vitality whose removal would empty the edge set) are
/// carried as NaN: an explicit not-a-value marker, never a silent zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub measure: String,
    pub values: Vec<f64>,
}

impl ScoreVector {
    pub fn new(measure: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            measure: measure.into(),
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub const SCORE_FILE_VERSION: &str = "modvit scores v1";

/// Writes `label<TAB>score` lines in dense-id order, preceded by a header
/// naming the measure and the provenance hashes of the graph and cover.
///
/// Scores round-trip exactly: the shortest-representation float formatting
/// parses back to the identical f64.
pub fn write_scores<W: Write>(
    w: &mut W,
    g: &Graph,
    scores: &ScoreVector,
    cover_hash: Option<&str>,
) -> Result<()> {
    if scores.len() != g.node_count() {
        return Err(Error::Consistency(format!(
            "score vector has {} entries but graph has {} nodes",
            scores.len(),
            g.node_count()
        )));
    }
    writeln!(w, "# {SCORE_FILE_VERSION}")?;
    writeln!(w, "# measure: {}", scores.measure)?;
    writeln!(w, "# graph: {}", g.provenance_hash())?;
    writeln!(w, "# cover: {}", cover_hash.unwrap_or("-"))?;
    for (v, &s) in scores.values.iter().enumerate() {
        if s.is_nan() {
            writeln!(w, "{}\tnan", g.label(v as u32))?;
        } else {
            writeln!(w, "{}\t{}", g.label(v as u32), s)?;
        }
    }
    Ok(())
}

/// Reads a score file back against the graph it was produced for.
pub fn read_scores<R: BufRead>(r: R, g: &Graph) -> Result<ScoreVector> {
    let mut measure = String::from("unknown");
    let mut values = vec![f64::NAN; g.node_count()];
    let mut seen = vec![false; g.node_count()];
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            if let Some(m) = rest.trim().strip_prefix("measure:") {
                measure = m.trim().to_string();
            }
            continue;
        }
        let mut parts = trimmed.split('\t');
        let (label, value) = match (parts.next(), parts.next(), parts.next()) {
            (Some(l), Some(v), None) => (l, v),
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "expected label<TAB>score".into(),
                })
            }
        };
        let v = g.node_by_label(label).ok_or_else(|| {
            Error::Consistency(format!("score file names node {label:?} absent from graph"))
        })? as usize;
        if seen[v] {
            return Err(Error::Consistency(format!(
                "node {label:?} scored more than once"
            )));
        }
        seen[v] = true;
        values[v] = if value == "nan" {
            f64::NAN
        } else {
            value.parse::<f64>().map_err(|e| Error::Parse {
                line: idx + 1,
                msg: format!("bad score {value:?}: {e}"),
            })?
        };
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::Coverage(format!(
            "node {:?} missing from score file",
            g.label(missing as u32)
        )));
    }
    Ok(ScoreVector::new(measure, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph() -> Graph {
        Graph::from_numeric_edges(&[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn round_trip_exact() {
        let g = graph();
        let scores = ScoreVector::new("mv", vec![0.1 + 0.2, -1.0 / 3.0, f64::NAN]);
        let mut buf = Vec::new();
        write_scores(&mut buf, &g, &scores, Some("abc")).unwrap();
        let back = read_scores(buf.as_slice(), &g).unwrap();
        assert_eq!(back.measure, "mv");
        assert_eq!(back.values[0].to_bits(), scores.values[0].to_bits());
        assert_eq!(back.values[1].to_bits(), scores.values[1].to_bits());
        assert!(back.values[2].is_nan());
    }

    #[test]
    fn unknown_label_is_consistency_error() {
        let g = graph();
        let text = "ghost\t1.0\n";
        assert!(matches!(
            read_scores(text.as_bytes(), &g),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn missing_node_is_coverage_error() {
        let g = graph();
        let text = "0\t1.0\n1\t2.0\n";
        assert!(matches!(
            read_scores(text.as_bytes(), &g),
            Err(Error::Coverage(_))
        ));
    }
}
