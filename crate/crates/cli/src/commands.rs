use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;

use modvit::{
    collapse_to_partition, cover_stats, crisp_tallies, degree_scores, epidemic_threshold,
    fuzzy_tallies, largest_connected_component, load_edge_list, modularity_vitality,
    newman_modularity, overlapping_modularity, overlapping_modularity_vitality, rank, read_cover,
    read_partition, read_scores, slpa_detect, sweep as run_sweep, topology_stats,
    vitality_by_recompute, write_cover, write_ranking, write_scores, write_sweep_csv, Cover,
    EdgeListOptions, Error, Graph, Partition, Result, ScoreVector, SirParams, SlpaParams,
    Strategy,
};

use crate::files::{write_atomic, write_atomic_with};
use crate::{DetectArgs, GraphArgs, Measure, ScoreArgs, StatsArgs, SweepArgs};

fn open_file(path: &Path) -> Result<File> {
    File::open(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_graph(args: &GraphArgs) -> Result<Graph> {
    let file = open_file(&args.edges)?;
    let (g, diag) = load_edge_list(BufReader::new(file), &EdgeListOptions::default())?;
    if diag.self_loops_dropped > 0 || diag.duplicate_edges_merged > 0 {
        eprintln!(
            "load: dropped {} self-loop(s), merged {} duplicate edge(s)",
            diag.self_loops_dropped, diag.duplicate_edges_merged
        );
    }
    if args.lcc {
        let before = (g.node_count(), g.edge_count());
        let g = largest_connected_component(&g)?;
        if (g.node_count(), g.edge_count()) != before {
            eprintln!(
                "lcc: kept {} of {} nodes, {} of {} edges",
                g.node_count(),
                before.0,
                g.edge_count(),
                before.1
            );
        }
        return Ok(g);
    }
    Ok(g)
}

fn open_reader(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(open_file(path)?))
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct TallyRecord {
    community_id: usize,
    intra: f64,
    inter: f64,
}

#[derive(Serialize)]
struct StatsReport {
    nodes: usize,
    edges: usize,
    avg_degree: f64,
    transitivity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_o: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    community_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    overlap_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    avg_memberships: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    crisp_tallies: Option<Vec<TallyRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fuzzy_tallies: Option<Vec<TallyRecord>>,
}

fn tally_records(intra: &[f64], inter: &[f64]) -> Vec<TallyRecord> {
    intra
        .iter()
        .zip(inter)
        .enumerate()
        .map(|(community_id, (&intra, &inter))| TallyRecord {
            community_id,
            intra,
            inter,
        })
        .collect()
}

pub fn stats(args: StatsArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let topo = topology_stats(&g);

    let cover: Option<Cover> = match &args.cover {
        Some(path) => Some(read_cover(open_reader(path)?, &g)?),
        None => None,
    };
    let partition: Option<Partition> = match &args.partition {
        Some(path) => Some(read_partition(open_reader(path)?, &g)?),
        None => None,
    };

    let mut report = StatsReport {
        nodes: topo.node_count,
        edges: topo.edge_count,
        avg_degree: topo.avg_degree,
        transitivity: topo.transitivity,
        q: None,
        q_o: None,
        community_count: None,
        overlap_fraction: None,
        avg_memberships: None,
        crisp_tallies: None,
        fuzzy_tallies: None,
    };

    // the partition for Q: explicit file first, otherwise collapsed cover
    let crisp: Option<Partition> = match (&partition, &cover) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(c)) => Some(collapse_to_partition(c)),
        (None, None) => None,
    };
    if let Some(p) = &crisp {
        let tallies = crisp_tallies(&g, p)?;
        report.q = Some(newman_modularity(&g, p)?);
        report.crisp_tallies = Some(tally_records(&tallies.intra, &tallies.inter));
    }
    let wide: Option<&Cover> = cover.as_ref().or(partition.as_ref().map(|p| p.as_cover()));
    if let Some(c) = wide {
        let tallies = fuzzy_tallies(&g, c)?;
        report.q_o = Some(overlapping_modularity(&g, c)?);
        report.fuzzy_tallies = Some(tally_records(&tallies.intra, &tallies.inter));
        let cs = cover_stats(c);
        report.community_count = Some(cs.community_count);
        report.overlap_fraction = Some(cs.overlap_fraction);
        report.avg_memberships = Some(cs.avg_memberships);
    }

    println!("nodes: {}", report.nodes);
    println!("edges: {}", report.edges);
    println!("avg_degree: {:.6}", report.avg_degree);
    println!("transitivity: {:.6}", report.transitivity);
    if let Some(q) = report.q {
        println!("q: {q:.6}");
    }
    if let Some(q_o) = report.q_o {
        println!("q_o: {q_o:.6}");
    }
    if let Some(k) = report.community_count {
        println!("communities: {k}");
    }
    if let Some(on) = report.overlap_fraction {
        println!("overlap_fraction: {on:.6}");
    }
    if let Some(m) = report.avg_memberships {
        println!("avg_memberships: {m:.6}");
    }

    if let Some(out) = &args.out {
        let path = out.join("stats.json");
        let json = serde_json::to_vec_pretty(&report)
            .map_err(|e| Error::Consistency(format!("stats serialization: {e}")))?;
        write_atomic(&path, &json)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

pub fn detect(args: DetectArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let params = SlpaParams {
        iterations: args.slpa_t,
        threshold: args.slpa_r,
        seed: args.seed,
    };
    let cover = slpa_detect(&g, &params)?;
    let path = args.out.join("cover.tsv");
    write_atomic_with(&path, |buf| write_cover(buf, &g, &cover))?;
    let cs = cover_stats(&cover);
    println!("communities: {}", cs.community_count);
    println!("overlap_fraction: {:.6}", cs.overlap_fraction);
    println!("avg_memberships: {:.6}", cs.avg_memberships);
    eprintln!("wrote {}", path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

struct ScoreInputs {
    scores: ScoreVector,
    cover_hash: Option<String>,
    /// structure used for the optional verification pass
    cover: Option<Cover>,
}

fn compute_scores(g: &Graph, args: &ScoreArgs) -> Result<ScoreInputs> {
    let cover: Option<Cover> = match &args.cover {
        Some(path) => Some(read_cover(open_reader(path)?, g)?),
        None => None,
    };
    let partition: Option<Partition> = match &args.partition {
        Some(path) => Some(read_partition(open_reader(path)?, g)?),
        None => None,
    };
    match args.measure {
        Measure::Degree => Ok(ScoreInputs {
            scores: degree_scores(g),
            cover_hash: None,
            cover: None,
        }),
        Measure::Mv => {
            let p = match (partition, &cover) {
                (Some(p), _) => p,
                (None, Some(c)) => collapse_to_partition(c),
                (None, None) => {
                    return Err(Error::Parameter(
                        "measure mv needs --partition (or --cover to collapse)".into(),
                    ))
                }
            };
            Ok(ScoreInputs {
                scores: modularity_vitality(g, &p)?,
                cover_hash: Some(p.as_cover().provenance_hash()),
                cover: Some(p.into_cover()),
            })
        }
        Measure::Omv => {
            let c = match (cover, partition) {
                (Some(c), _) => c,
                (None, Some(p)) => p.into_cover(),
                (None, None) => {
                    return Err(Error::Parameter(
                        "measure omv needs --cover (or --partition to widen)".into(),
                    ))
                }
            };
            Ok(ScoreInputs {
                scores: overlapping_modularity_vitality(g, &c)?,
                cover_hash: Some(c.provenance_hash()),
                cover: Some(c),
            })
        }
    }
}

/// Re-verifies a deterministic 1% node sample against the slow
/// full-recompute path.
fn verify_sample(g: &Graph, inputs: &ScoreInputs, seed: u64) -> Result<usize> {
    let n = g.node_count();
    let sample_size = usize::max(1, n.div_ceil(100));
    let mut ids: Vec<u32> = (0..n as u32).collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);
    ids.truncate(sample_size);
    for &v in &ids {
        let expected = match &inputs.cover {
            Some(cover) => vitality_by_recompute(g, cover, v)?,
            None => g.neighbors(v).len() as f64,
        };
        let got = inputs.scores.values[v as usize];
        let ok = if expected.is_nan() {
            got.is_nan()
        } else {
            (got - expected).abs() <= 1e-10
        };
        if !ok {
            return Err(Error::NumericCheck(format!(
                "node {} ({}): engine {got} vs recompute {expected}",
                g.label(v),
                inputs.scores.measure
            )));
        }
    }
    Ok(sample_size)
}

pub fn score(args: ScoreArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let inputs = compute_scores(&g, &args)?;
    if args.verify_oracle {
        let checked = verify_sample(&g, &inputs, args.seed)?;
        eprintln!(
            "verify-oracle: {checked} node(s) match the full recompute within 1e-10"
        );
    }
    let path = args.out.join(format!("scores_{}.tsv", args.measure.tag()));
    write_atomic_with(&path, |buf| {
        write_scores(buf, &g, &inputs.scores, inputs.cover_hash.as_deref())
    })?;
    let finite = inputs.scores.values.iter().filter(|v| v.is_finite()).count();
    println!(
        "measure: {} ({} nodes scored, {} undefined)",
        inputs.scores.measure,
        finite,
        inputs.scores.values.len() - finite
    );
    eprintln!("wrote {}", path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn parse_fgrid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parameter(format!(
            "fraction grid must be START:STOP:STEP, got {spec:?}"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|e| Error::Parameter(format!("bad grid number {p:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(start > 0.0 && stop <= 1.0 && stop >= start && step > 0.0) {
        return Err(Error::Parameter(format!(
            "fraction grid {spec:?} must satisfy 0 < START <= STOP <= 1 with STEP > 0"
        )));
    }
    let mut grid = Vec::new();
    let mut i = 0u32;
    loop {
        let f = start + step * i as f64;
        if f > stop + 1e-9 {
            break;
        }
        // snap to a clean decimal so grid points print as entered
        grid.push((f * 1e9).round() / 1e9);
        i += 1;
    }
    Ok(grid)
}

/// The score file's recorded graph hash, if any.
fn recorded_graph_hash(text: &str) -> Option<String> {
    text.lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.trim_start_matches('#').trim().strip_prefix("graph:"))
        .map(|h| h.trim().to_string())
}

#[derive(Serialize)]
struct ScoreFileEntry {
    path: String,
    measure: String,
}

#[derive(Serialize)]
struct SweepManifest {
    command: &'static str,
    toolkit_version: &'static str,
    edges: String,
    graph_hash: String,
    lcc: bool,
    score_files: Vec<ScoreFileEntry>,
    strategies: Vec<String>,
    /// effective infection probability actually used
    lambda: f64,
    lambda_source: String,
    gamma: f64,
    runs: usize,
    seed: u64,
    fgrid: String,
    f_grid: Vec<f64>,
    outputs: Vec<String>,
}

pub fn sweep(args: SweepArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let graph_hash = g.provenance_hash();

    let mut measures: Vec<ScoreVector> = Vec::new();
    let mut score_files = Vec::new();
    for path in &args.scores {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?;
        if let Some(recorded) = recorded_graph_hash(&text) {
            if recorded != graph_hash {
                return Err(Error::Consistency(format!(
                    "score file {path:?} was produced for graph {recorded}, current graph is {graph_hash}"
                )));
            }
        }
        let scores = read_scores(text.as_bytes(), &g)?;
        score_files.push(ScoreFileEntry {
            path: path.display().to_string(),
            measure: scores.measure.clone(),
        });
        measures.push(scores);
    }

    let strategies: Vec<Strategy> = if args.strategy.is_empty() {
        Strategy::ALL.to_vec()
    } else {
        args.strategy
            .iter()
            .map(|s| Strategy::parse(s))
            .collect::<Result<_>>()?
    };

    let (lambda, lambda_source) = match args.lambda {
        Some(l) => (l, "explicit".to_string()),
        None => {
            let lc = epidemic_threshold(&g)?;
            ((1.5 * lc).min(1.0), format!("1.5*lambda_c (lambda_c = {lc})"))
        }
    };
    let params = SirParams {
        infection_prob: lambda,
        recovery_prob: args.gamma,
        runs: args.runs,
        seed: args.seed,
    };
    let f_grid = parse_fgrid(&args.fgrid)?;

    let lanes: Vec<(ScoreVector, Strategy)> = measures
        .iter()
        .flat_map(|m| strategies.iter().map(move |&s| (m.clone(), s)))
        .collect();
    let baseline = degree_scores(&g);
    let result = run_sweep(&g, &lanes, &baseline, &f_grid, &params)?;

    let mut outputs = Vec::new();
    let csv_path = args.out.join("sweep.csv");
    write_atomic_with(&csv_path, |buf| write_sweep_csv(buf, &result))?;
    outputs.push(csv_path.display().to_string());

    let json_path = args.out.join("sweep.json");
    let json = serde_json::to_vec_pretty(&result)
        .map_err(|e| Error::Consistency(format!("sweep serialization: {e}")))?;
    write_atomic(&json_path, &json)?;
    outputs.push(json_path.display().to_string());

    // the orderings behind every lane, in the ranking file format
    for (scores, strategy) in &lanes {
        let ranking = rank(&g, scores, *strategy)?;
        let path = args
            .out
            .join(format!("ranking_{}_{}.tsv", scores.measure, strategy));
        write_atomic_with(&path, |buf| write_ranking(buf, &g, &ranking, scores))?;
        outputs.push(path.display().to_string());
    }

    let manifest = SweepManifest {
        command: "modvit sweep",
        toolkit_version: env!("CARGO_PKG_VERSION"),
        edges: args.graph.edges.display().to_string(),
        graph_hash,
        lcc: args.graph.lcc,
        score_files,
        strategies: strategies.iter().map(|s| s.to_string()).collect(),
        lambda: params.infection_prob,
        lambda_source,
        gamma: params.recovery_prob,
        runs: params.runs,
        seed: params.seed,
        fgrid: args.fgrid.clone(),
        f_grid: f_grid.clone(),
        outputs: outputs.clone(),
    };
    let manifest_path = args.out.join("manifest.json");
    let manifest_json = serde_json::to_vec_pretty(&manifest)
        .map_err(|e| Error::Consistency(format!("manifest serialization: {e}")))?;
    write_atomic(&manifest_path, &manifest_json)?;

    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "lambda: {} ({})", manifest.lambda, manifest.lambda_source)?;
    writeln!(stdout, "gamma: {} runs: {} seed: {}", params.recovery_prob, params.runs, params.seed)?;
    for lane in &result.lanes {
        let deltas = lane.delta_r.as_ref().expect("measure lane");
        let last = f_grid.len() - 1;
        writeln!(
            stdout,
            "{}/{}: delta_R {:+.4} at f0={} ... {:+.4} at f0={}",
            lane.measure, lane.strategy, deltas[0], f_grid[0], deltas[last], f_grid[last]
        )?;
    }
    eprintln!("wrote {}", manifest_path.display());
    Ok(())
}
