//! Command-line front end: file formats in, reports out.
//!
//! Exit status: 0 on success, 1 on a validation failure (a witness is
//! printed), 2 on malformed input or misuse. A single `--seed` governs all
//! sampling; identical `(input, seed)` pairs produce byte-identical output.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::approx::{self, Resolver};
use crate::coarse::{self, Mode, TieBreak};
use crate::complex::one_skeleton;
use crate::deform;
use crate::error::{Error, Result};
use crate::formats::*;
use crate::metrics::{
    verify_median_metric, wall_metric, MetricMedianAlgebraInstance, WallWeighting,
};

/// Exhaustive axiom verification (an `n^5` scan) is refused beyond this
/// carrier size; use sampled mode there.
pub const VALIDATE_EXHAUSTIVE_CAP: usize = 32;

/// Exhaustive graph diagnostics (quartic scans) are refused beyond this.
pub const GRAPH_EXHAUSTIVE_CAP: usize = 64;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "cmedian",
    version,
    about = "Finite median algebra and coarse median toolkit"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Input document (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for sampled computations (required in sampled mode).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: FormatArg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check median-algebra axioms (algebra document) or the median metric
    /// property (metric document).
    Validate,
    /// Median closure of a generating set inside an algebra.
    Closure {
        /// Comma-separated element ids.
        #[arg(long)]
        generators: String,
    },
    /// Enumerate all walls of an algebra.
    Walls,
    /// Export the cube complex 1-skeleton of an algebra.
    Cubify,
    /// Wall-weighted metric d_l of an algebra.
    Metric {
        /// JSON map wall index -> length; unit lengths when omitted.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Rectified metric of a metric median algebra instance.
    Rectify,
    /// Deformed metric sigma_d with the sandwich check.
    Cat0,
    /// Graph model diagnostics: center quality, four-point delta,
    /// parameters, tie-break closeness.
    Hypmedian,
    /// Rotation gap of the coordinatewise median on the Euclidean plane.
    Gap {
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        /// Angle, e.g. "pi/4", "0.7853981634".
        #[arg(long)]
        angle: String,
        /// Sweep k = 1..=k_max as CSV instead of a single value.
        #[arg(long)]
        k_max: Option<u64>,
    },
    /// Pushforward of the model median along a self-quasi-isometry.
    Push,
    /// Pullback of the model median along a self-quasi-isometry.
    Pull,
    /// Approximation pipeline: resolver, wall lengths, distortion report.
    Approx,
}

struct Outcome {
    exit: i32,
    text: String,
}

pub fn run(config: RunConfig) -> i32 {
    match execute(&config) {
        Ok(outcome) => {
            let written = match &config.output {
                Some(path) => std::fs::write(path, &outcome.text).map_err(Error::from),
                None => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => outcome.exit,
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(config: &RunConfig) -> Result<Outcome> {
    match &config.command {
        Command::Validate => validate(config),
        Command::Closure { generators } => closure(config, generators),
        Command::Walls => walls(config),
        Command::Cubify => cubify(config),
        Command::Metric { weights } => metric(config, weights.as_deref()),
        Command::Rectify => rectify(config),
        Command::Cat0 => cat0(config),
        Command::Hypmedian => hypmedian(config),
        Command::Gap { k, angle, k_max } => gap(*k, angle, *k_max),
        Command::Push => transport(config, true),
        Command::Pull => transport(config, false),
        Command::Approx => approx_cmd(config),
    }
}

// ---------------------------------------------------------------------------
// plumbing
// ---------------------------------------------------------------------------

fn read_input(config: &RunConfig) -> Result<serde_json::Value> {
    let path = config
        .input
        .as_ref()
        .ok_or_else(|| Error::MalformedInput("--input is required".into()))?;
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn parse_doc<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    Ok(serde_json::from_value(value)?)
}

fn mode_of(config: &RunConfig) -> Result<Mode> {
    match config.mode {
        ModeArg::Exhaustive => Ok(Mode::Exhaustive),
        ModeArg::Sampled => {
            let seed = config.seed.ok_or_else(|| {
                Error::MalformedInput("--seed is required in sampled mode".into())
            })?;
            Ok(Mode::Sampled {
                samples: config.samples,
                seed,
            })
        }
    }
}

fn json_outcome<T: Serialize>(exit: i32, value: &T) -> Result<Outcome> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(Outcome { exit, text })
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn parse_angle(s: &str) -> Result<f64> {
    let t: String = s.trim().replace(' ', "").to_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (body, denom) = match t.split_once('/') {
        Some((b, d)) => {
            let denom: f64 = d
                .parse()
                .map_err(|_| Error::MalformedInput(format!("bad angle denominator in {s:?}")))?;
            (b.to_string(), denom)
        }
        None => (t.clone(), 1.0),
    };
    let Some(prefix) = body.strip_suffix("pi") else {
        return Err(Error::MalformedInput(format!("cannot parse angle {s:?}")));
    };
    let factor = match prefix {
        "" => 1.0,
        "-" => -1.0,
        p => p
            .parse::<f64>()
            .map_err(|_| Error::MalformedInput(format!("bad angle multiplier in {s:?}")))?,
    };
    Ok(factor * std::f64::consts::PI / denom)
}

fn resolve_elements(ids: &[String], wanted: &str) -> Result<Vec<usize>> {
    wanted
        .split(',')
        .map(|raw| {
            let name = raw.trim();
            ids.iter()
                .position(|id| id == name)
                .ok_or_else(|| Error::MalformedInput(format!("unknown element {name:?}")))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn validate(config: &RunConfig) -> Result<Outcome> {
    let value = read_input(config)?;
    if value.get("median").is_some() {
        let doc: AlgebraDoc = parse_doc(value)?;
        let algebra = doc.build()?;
        let report = match config.mode {
            ModeArg::Exhaustive => {
                if algebra.n() > VALIDATE_EXHAUSTIVE_CAP {
                    return Err(Error::ExhaustiveCapExceeded {
                        got: algebra.n(),
                        cap: VALIDATE_EXHAUSTIVE_CAP,
                    });
                }
                algebra.verify_axioms()
            }
            ModeArg::Sampled => {
                let Mode::Sampled { samples, seed } = mode_of(config)? else {
                    unreachable!()
                };
                algebra.verify_axioms_sampled(seed, samples)
            }
        };
        let witnesses: Vec<_> = report
            .violations
            .iter()
            .take(16)
            .map(|v| json!({"identity": v.identity, "witness": v.witness}))
            .collect();
        let body = json!({
            "ok": report.ok,
            "kind": "median_algebra",
            "checked_tuples": report.checked_tuples,
            "violation_count": report.violations.len(),
            "violations": witnesses,
        });
        return json_outcome(if report.ok { 0 } else { 1 }, &body);
    }
    if value.get("matrix").is_some() {
        let doc: MetricDoc = parse_doc(value)?;
        let metric = match doc.build() {
            Ok(m) => m,
            Err(Error::Validation(witness)) => {
                let body = json!({"ok": false, "kind": "metric", "witness": witness});
                return json_outcome(1, &body);
            }
            Err(e) => return Err(e),
        };
        let report = verify_median_metric(&metric);
        let body = match report.witness {
            None => json!({"ok": true, "kind": "median_metric"}),
            Some((x, y, z, count)) => json!({
                "ok": false,
                "kind": "median_metric",
                "witness": {"triple": [x, y, z], "intersection_size": count},
            }),
        };
        return json_outcome(if report.ok { 0 } else { 1 }, &body);
    }
    Err(Error::MalformedInput(
        "expected an algebra or metric document".into(),
    ))
}

fn closure(config: &RunConfig, generators: &str) -> Result<Outcome> {
    let doc: AlgebraDoc = parse_doc(read_input(config)?)?;
    let algebra = doc.build()?;
    let gens = resolve_elements(algebra.ids(), generators)?;
    let closure = algebra.median_closure(&gens)?;
    let ids: Vec<&str> = closure.iter().map(|&i| algebra.id(i)).collect();
    let body = json!({
        "generators": gens.iter().map(|&i| algebra.id(i)).collect::<Vec<_>>(),
        "closure": ids,
        "size": closure.len(),
    });
    json_outcome(0, &body)
}

fn walls(config: &RunConfig) -> Result<Outcome> {
    let doc: AlgebraDoc = parse_doc(read_input(config)?)?;
    let algebra = doc.build()?;
    let walls = algebra.enumerate_walls()?;
    let body = json!({
        "count": walls.len(),
        "walls": walls.iter().map(|w| json!({"half": w.half()})).collect::<Vec<_>>(),
    });
    json_outcome(0, &body)
}

fn cubify(config: &RunConfig) -> Result<Outcome> {
    let doc: AlgebraDoc = parse_doc(read_input(config)?)?;
    let algebra = doc.build()?;
    let skeleton = one_skeleton(&algebra)?;
    json_outcome(0, &SkeletonDoc::from_skeleton(&skeleton))
}

fn metric(config: &RunConfig, weights: Option<&std::path::Path>) -> Result<Outcome> {
    let doc: AlgebraDoc = parse_doc(read_input(config)?)?;
    let algebra = doc.build()?;
    let walls = algebra.enumerate_walls()?;
    let weighting = match weights {
        None => WallWeighting::unit(walls.len()),
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let raw: BTreeMap<String, f64> = serde_json::from_str(&text)?;
            let mut map = BTreeMap::new();
            for (k, v) in raw {
                let idx: usize = k
                    .parse()
                    .map_err(|_| Error::MalformedInput(format!("bad wall index {k:?}")))?;
                map.insert(idx, v);
            }
            WallWeighting::from_map(&map, walls.len())?
        }
    };
    let metric = wall_metric(&algebra, &walls, &weighting)?;
    json_outcome(0, &MetricDoc::from_metric(&metric))
}

fn rectify(config: &RunConfig) -> Result<Outcome> {
    let doc: InstanceDoc = parse_doc(read_input(config)?)?;
    let algebra = doc.algebra.build()?;
    let metric = doc.metric.build()?;
    let inst = MetricMedianAlgebraInstance::new(algebra, metric)?;
    let rectified = inst.rectified_metric()?;
    let thickness: Vec<[f64; 2]> = inst
        .wall_thickness()
        .iter()
        .map(|&(lo, hi)| [round9(lo), round9(hi)])
        .collect();
    let body = json!({
        "rectified": MetricDoc::from_metric(&rectified),
        "wall_thickness": thickness,
    });
    json_outcome(0, &body)
}

fn cat0(config: &RunConfig) -> Result<Outcome> {
    let value = read_input(config)?;
    let inst = if value.get("algebra").is_some() {
        let doc: InstanceDoc = parse_doc(value)?;
        MetricMedianAlgebraInstance::new(doc.algebra.build()?, doc.metric.build()?)?
    } else {
        let doc: MetricDoc = parse_doc(value)?;
        let metric = doc.build()?;
        let report = verify_median_metric(&metric);
        if let Some((x, y, z, count)) = report.witness {
            let body = json!({
                "ok": false,
                "witness": {"triple": [x, y, z], "intersection_size": count},
            });
            return json_outcome(1, &body);
        }
        let algebra = report
            .intrinsic_algebra(metric.ids().to_vec())
            .ok_or_else(|| Error::MalformedInput("metric has no intrinsic median".into()))?;
        MetricMedianAlgebraInstance::new(algebra, metric)?
    };
    let (_, rows) = deform::cat0_metric_with_rows(&inst)?;
    match config.format {
        FormatArg::Csv => {
            let mut text = String::from("x,y,d,sigma,lower,upper\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{:.9},{:.9},{:.9},{:.9}\n",
                    csv_field(&inst.metric.ids()[r.x]),
                    csv_field(&inst.metric.ids()[r.y]),
                    r.d,
                    r.sigma,
                    r.lower,
                    r.upper
                ));
            }
            Ok(Outcome { exit: 0, text })
        }
        FormatArg::Json => {
            let body: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "x": inst.metric.ids()[r.x],
                        "y": inst.metric.ids()[r.y],
                        "d": round9(r.d),
                        "sigma": round9(r.sigma),
                        "lower": round9(r.lower),
                        "upper": round9(r.upper),
                    })
                })
                .collect();
            json_outcome(0, &body)
        }
    }
}

fn hypmedian(config: &RunConfig) -> Result<Outcome> {
    let doc: GraphDoc = parse_doc(read_input(config)?)?;
    if doc.vertices.len() > GRAPH_EXHAUSTIVE_CAP {
        return Err(Error::ExhaustiveCapExceeded {
            got: doc.vertices.len(),
            cap: GRAPH_EXHAUSTIVE_CAP,
        });
    }
    let edges = doc.edge_pairs();
    let lex = coarse::graph_model_from_edges(doc.vertices.len(), &edges, TieBreak::Lex)?;
    let rev = coarse::graph_model_from_edges(doc.vertices.len(), &edges, TieBreak::RevLex)?;
    let closeness = coarse::closeness_distance(&lex, &rev, Mode::Exhaustive)?;
    let graph = lex.graph().expect("graph model");
    let body = json!({
        "k_center_max": graph.center_quality_max(),
        "delta_four_point": round9(graph.delta_four_point()),
        "params": {"k": round9(lex.params.k), "h0": round9(lex.params.h0)},
        "tie_break_closeness": round9(closeness.sup_observed),
    });
    json_outcome(0, &body)
}

fn gap(k: f64, angle: &str, k_max: Option<u64>) -> Result<Outcome> {
    let theta = parse_angle(angle)?;
    match k_max {
        None => {
            let value = coarse::euclidean_rotation_gap(k, theta);
            Ok(Outcome {
                exit: 0,
                text: format!("{value:.9}\n"),
            })
        }
        Some(top) => {
            let mut text = String::from("k,gap\n");
            for step in 1..=top {
                let value = coarse::euclidean_rotation_gap(step as f64, theta);
                text.push_str(&format!("{step},{value:.9}\n"));
            }
            Ok(Outcome { exit: 0, text })
        }
    }
}

fn transport(config: &RunConfig, push: bool) -> Result<Outcome> {
    let doc: TransportDoc = parse_doc(read_input(config)?)?;
    let model = doc.model.build(TieBreak::Lex)?;
    let qi = coarse::QuasiIsometryPair::measure(
        &model,
        &model,
        doc.forward.clone(),
        doc.backward.clone(),
    )?;
    let mode = mode_of(config)?;
    let transported = if push {
        coarse::pushforward(&qi, &model, &model, mode)?
    } else {
        coarse::pullback(&qi, &model, &model, mode)?
    };
    let closeness = coarse::closeness_distance(&transported, &model, mode)?;
    let body = json!({
        "operation": if push { "pushforward" } else { "pullback" },
        "qi": {
            "mult": round9(qi.constants.mult),
            "add": round9(qi.constants.add),
            "back_forth": round9(qi.constants.back_forth),
            "forth_back": round9(qi.constants.forth_back),
        },
        "params": {"k": round9(transported.params.k), "h0": round9(transported.params.h0)},
        "closeness": {
            "sup_observed": round9(closeness.sup_observed),
            "exhaustive": closeness.exhaustive,
            "sample_count": closeness.sample_count,
            "seed": closeness.seed,
        },
    });
    json_outcome(0, &body)
}

fn approx_cmd(config: &RunConfig) -> Result<Outcome> {
    let doc: ApproxInputDoc = parse_doc(read_input(config)?)?;
    let model = doc.model.build(TieBreak::Lex)?;
    let subset = approx::resolve_point_ids(&model, &doc.subset)?;
    let resolver = match doc.resolver.as_str() {
        "lattice" => Resolver::Lattice,
        "tree" => {
            let id = doc
                .basepoint
                .as_ref()
                .ok_or_else(|| Error::MalformedInput("tree resolver needs a basepoint".into()))?;
            let basepoint = approx::resolve_point_ids(&model, std::slice::from_ref(id))?[0];
            Resolver::Tree { basepoint }
        }
        other => {
            return Err(Error::MalformedInput(format!("unknown resolver {other:?}")));
        }
    };
    let report = approx::approximate(&model, &subset, resolver, doc.exactify)?;
    json_outcome(0, &ApproxReportDoc::from_report(&report, &model))
}
