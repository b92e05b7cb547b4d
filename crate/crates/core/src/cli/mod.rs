//! Command-line front end. Reports are JSON on standard output unless
//! `--output` or `--format csv` say otherwise.
//!
//! Exit status: 0 on success, 1 on a domain failure (invalid metric,
//! infinite constant under `--require-finite`, violated bound, numerical
//! failure), 2 on malformed input or usage.

mod args;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

pub use args::{Cli, Command, Format, GenKind, GlobalOpts, GraphCommand, MetricSource, WcModeArg};
use args::{GraphInput, PathQueries};

use crate::error::{Error, Result};
use crate::graph::{self, PathMetric, WeightedGraph};
use crate::io::{
    self, CertificateDoc, GraphDoc, IndexDoc, MapDoc, MoleculeDoc, SequenceDoc, SpaceDoc, ViolationDoc,
};
use crate::metric::{self, FiniteMetricSpace, SquareMatrix, WcMode};
use crate::summing::{self, ProbabilityMeasure};
use crate::tolerance::ToleranceConfig;

/// What a command produced, before formatting.
enum Output {
    Json(Value),
    Matrix { ids: Vec<String>, matrix: SquareMatrix, extra: Value },
}

/// A successful run whose result is nonetheless a domain failure.
struct Outcome {
    output: Output,
    failed: bool,
}

impl Outcome {
    fn ok(output: Output) -> Self {
        Outcome { output, failed: false }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    init_logging(cli.global.debug);
    match execute(&cli) {
        Ok(outcome) => match emit(&cli.global, outcome.output) {
            Ok(()) => i32::from(outcome.failed),
            Err(e) => report_error(&e),
        },
        Err(e) => report_error(&e),
    }
}

fn init_logging(debug: bool) {
    let default = if debug { "trace" } else { "warn" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(default))
        .target(env_logger::Target::Stderr)
        .try_init();
}

fn report_error(e: &Error) -> i32 {
    eprintln!("error: {}", e);
    match e {
        Error::Input(_) | Error::Parse { .. } => 2,
        _ => 1,
    }
}

fn emit(global: &GlobalOpts, output: Output) -> Result<()> {
    let text = match (global.format, output) {
        (Format::Json, Output::Json(v)) => serde_json::to_string_pretty(&v).expect("JSON value"),
        (Format::Json, Output::Matrix { ids, matrix, extra }) => {
            let mut v = json!({ "points": ids, "d": matrix.to_rows() });
            if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
                map.extend(more);
            }
            serde_json::to_string_pretty(&v).expect("JSON value")
        }
        (Format::Csv, Output::Matrix { ids, matrix, .. }) => io::matrix_to_csv(&ids, &matrix),
        (Format::Csv, Output::Json(_)) => {
            return Err(Error::input("--format csv is only available for matrix outputs"))
        }
    };
    match &global.output {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Error::input(format!("cannot write {}: {}", path.display(), e))),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{}", text).map_err(|e| Error::input(format!("cannot write output: {}", e)))
        }
    }
}

fn tolerances(global: &GlobalOpts) -> Result<ToleranceConfig> {
    let mut tol = ToleranceConfig::default();
    for (name, value, slot) in [
        ("--tol-feas", global.tol_feas, &mut tol.feas),
        ("--tol-metric", global.tol_metric, &mut tol.metric),
    ] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::input(format!("{} must be a positive number", name)));
            }
            *slot = v;
        }
    }
    Ok(tol)
}

fn read_graph(path: &Path) -> Result<WeightedGraph> {
    io::read_json::<GraphDoc>(path)?.to_graph()
}

fn read_space(path: &Path) -> Result<FiniteMetricSpace> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read {}: {}", path.display(), e)))?;
        let (ids, d) = io::matrix_from_csv(&text)?;
        return FiniteMetricSpace::new(ids, d, 0, false);
    }
    io::read_json::<SpaceDoc>(path)?.to_space()
}

fn load_metric(source: &MetricSource) -> Result<FiniteMetricSpace> {
    match (&source.space, &source.graph) {
        (Some(path), None) => read_space(path),
        (None, Some(path)) => read_graph(path)?.metric_space(1.0),
        _ => Err(Error::input("give exactly one of --space or --graph")),
    }
}

fn load_graph_input(input: &GraphInput) -> Result<(WeightedGraph, FiniteMetricSpace)> {
    let g = read_graph(&input.graph)?;
    let d = match &input.space {
        Some(path) => read_space(path)?,
        None => g.metric_space(1.0)?,
    };
    Ok((g, d))
}

fn split_ids(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// Indices named in a comma-separated list; every point when absent.
fn parse_subset(list: Option<&str>, ids: &[String]) -> Result<Vec<usize>> {
    let index = |id: &str| {
        ids.iter().position(|x| x == id).ok_or_else(|| Error::input(format!("unknown point id {:?}", id)))
    };
    match list {
        None => Ok((0..ids.len()).collect()),
        Some(list) => {
            let s = split_ids(list).into_iter().map(index).collect::<Result<Vec<_>>>()?;
            if s.is_empty() {
                return Err(Error::input("subset must name at least one point"));
            }
            Ok(s)
        }
    }
}

/// `uniform`, `uniform:a,b`, `a`, `a=0.25,b=0.75`, or a JSON file of weights.
pub fn parse_measure(spec: Option<&str>, ids: &[String]) -> Result<ProbabilityMeasure> {
    let spec = spec.unwrap_or("uniform");
    if spec == "uniform" {
        return ProbabilityMeasure::uniform(&(0..ids.len()).collect::<Vec<_>>());
    }
    if let Some(list) = spec.strip_prefix("uniform:") {
        return ProbabilityMeasure::uniform(&parse_subset(Some(list), ids)?);
    }
    let path = Path::new(spec);
    if path.is_file() {
        let weights: BTreeMap<String, f64> = io::read_json(path)?;
        return io::measure_from_ids(&weights, ids);
    }
    let mut weights = BTreeMap::new();
    let entries = split_ids(spec);
    for entry in &entries {
        let (id, w) = match entry.split_once('=') {
            Some((id, w)) => {
                let w = w
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::input(format!("bad weight in measure entry {:?}: {}", entry, e)))?;
                (id.trim(), w)
            }
            None => (*entry, 1.0 / entries.len() as f64),
        };
        weights.insert(id.to_string(), w);
    }
    io::measure_from_ids(&weights, ids)
}

fn parse_queries(q: &PathQueries, ids: &[String]) -> Result<Vec<(usize, usize)>> {
    q.paths
        .iter()
        .map(|s| match parse_subset(Some(s), ids)?.as_slice() {
            &[a, b] => Ok((a, b)),
            _ => Err(Error::input(format!("--path expects two ids as `from,to`, got {:?}", s))),
        })
        .collect()
}

fn path_report(m: &PathMetric, ids: &[String], queries: &[(usize, usize)]) -> Value {
    let paths: Vec<Value> = queries
        .iter()
        .map(|&(a, b)| {
            let r = m.path(a, b);
            json!({
                "from": ids[a],
                "to": ids[b],
                "value": r.value,
                "path": r.path.iter().map(|&v| ids[v].as_str()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "p": m.p(), "paths": paths })
}

fn pair_json(ids: &[String], (x, y): (usize, usize)) -> Value {
    json!([ids[x], ids[y]])
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let p = g.p;
    let tol = tolerances(g)?;
    match &cli.command {
        Command::Validate { source, pseudometric } => {
            let space = load_metric(source)?;
            let pseudo = *pseudometric || space.is_pseudometric();
            let report = metric::validate_matrix(&space.matrix().to_rows(), pseudo, tol.metric)?;
            let violations: Vec<ViolationDoc> =
                report.violations.iter().map(|v| ViolationDoc::new(v, space.ids())).collect();
            Ok(Outcome {
                failed: !report.is_valid(),
                output: Output::Json(json!({
                    "valid": report.is_valid(),
                    "pseudometric": pseudo,
                    "tolerance": tol.metric,
                    "violations": violations,
                })),
            })
        }
        Command::EccPseudo { source, subset } => {
            let space = load_metric(source)?;
            let s = parse_subset(subset.as_deref(), space.ids())?;
            let matrix = metric::eccentric_pseudometric(&space, &s)?;
            let subset: Vec<&str> = s.iter().map(|&i| space.id(i)).collect();
            Ok(Outcome::ok(Output::Matrix {
                ids: space.ids().to_vec(),
                matrix,
                extra: json!({ "subset": subset }),
            }))
        }
        Command::Seqdist { source, seq, subset, wc, exact_limit, starts } => {
            let space = load_metric(source)?;
            let seq = io::read_json::<SequenceDoc>(seq)?.to_sequence(space.ids())?;
            let s = parse_subset(subset.as_deref(), space.ids())?;
            let ac = metric::d_ac(&space, &seq, p)?;
            let cc = metric::d_cc(&space, &seq, p, &s)?;
            let bracket = WcMode::Bracket { starts: *starts, seed: g.seed.unwrap_or(WcMode::DEFAULT_SEED) };
            let exact = WcMode::Exact { limit: *exact_limit };
            let active = seq.iter().filter(|&(x, y, a)| x != y && a > 0.0).count();
            let mode = match wc {
                WcModeArg::Exact => exact,
                WcModeArg::Bracket => bracket,
                WcModeArg::Auto if p == 1.0 && active <= *exact_limit => exact,
                WcModeArg::Auto => bracket,
            };
            let wc = metric::d_wc(&space, &seq, p, mode, &tol)?;
            Ok(Outcome::ok(Output::Json(json!({
                "p": p,
                "d_ac": ac,
                "d_cc": { "value": cc.value, "witness": space.id(cc.witness) },
                "d_wc": {
                    "method": wc.method,
                    "value": wc.value(),
                    "lower": wc.lower,
                    "upper": wc.upper,
                    "lambda": wc.lambda,
                    "witness": wc.witness.as_ref().map(|f| IndexDoc::from_function(f, space.ids())),
                },
            }))))
        }
        Command::AeNorm { source, molecule } => {
            let space = load_metric(source)?;
            let m = io::read_json::<MoleculeDoc>(molecule)?.to_molecule(space.ids())?;
            let norm = metric::ae_norm(&space, &m, &tol)?;
            Ok(Outcome::ok(Output::Json(json!({
                "value": norm.value,
                "witness": IndexDoc::from_function(&norm.witness, space.ids()),
            }))))
        }
        Command::Pietsch { source, function, map, subset, require_finite } => {
            let (cert, ids) = match (function, map) {
                (Some(fpath), None) => {
                    let space = load_metric(source)?;
                    let f = io::read_json::<IndexDoc>(fpath)?.to_function(space.ids())?;
                    let k = parse_subset(subset.as_deref(), space.ids())?;
                    (summing::pietsch_functional(&space, &f, &k, p, &tol)?, space.ids().to_vec())
                }
                (None, Some(mpath)) => {
                    if source.space.is_some() || source.graph.is_some() {
                        return Err(Error::input("--map carries its own spaces; drop --space/--graph"));
                    }
                    let t = io::read_json::<MapDoc>(mpath)?.to_map()?;
                    let k = parse_subset(subset.as_deref(), t.domain.ids())?;
                    (summing::pietsch_map(&t, &k, p, &tol)?, t.domain.ids().to_vec())
                }
                _ => return Err(Error::input("give exactly one of --function or --map")),
            };
            let infinite = !cert.constant.is_finite();
            if infinite {
                log::info!("constant is infinite");
            }
            Ok(Outcome {
                failed: infinite && *require_finite,
                output: Output::Json(to_value(&CertificateDoc::from_certificate(&cert, &ids))),
            })
        }
        Command::Approx { map, k1, k2 } => {
            let t = io::read_json::<MapDoc>(map)?.to_map()?;
            let k1 = parse_subset(k1.as_deref(), t.domain.ids())?;
            let k2 = parse_subset(k2.as_deref(), t.codomain.ids())?;
            let r = summing::approximating_constant(&t, &k1, &k2, p, &tol)?;
            let per_z: Vec<Value> = r
                .per_z
                .iter()
                .map(|(z, c)| {
                    json!({
                        "z": t.codomain.id(*z),
                        "certificate": CertificateDoc::from_certificate(c, t.domain.ids()),
                    })
                })
                .collect();
            Ok(Outcome::ok(Output::Json(json!({
                "p": p,
                "constant": r.constant,
                "per_z": per_z,
                "witness": r.witness.map(|(z, pair)| json!({
                    "z": t.codomain.id(z),
                    "pair": pair_json(t.domain.ids(), pair),
                })),
            }))))
        }
        Command::Graph { which } => graph_command(which, p),
        Command::Symmetry { input, measure, tol: threshold } => {
            let (gr, d) = load_graph_input(input)?;
            let mu = parse_measure(measure.as_deref(), gr.ids())?;
            let threshold = threshold.unwrap_or(tol.symmetry);
            let classes = graph::symmetry_classes(&gr, &d, p, &mu, threshold)?;
            let named: Vec<Vec<&str>> =
                classes.classes.iter().map(|c| c.iter().map(|&v| gr.id(v)).collect()).collect();
            Ok(Outcome::ok(Output::Json(json!({
                "p": p,
                "tolerance": threshold,
                "measure": io::measure_to_ids(&mu, gr.ids()),
                "classes": named,
                "non_transitive": classes.non_transitive,
            }))))
        }
        Command::CheckT2 { input, function, certificate, subset } => {
            let (gr, d) = load_graph_input(input)?;
            let f = io::read_json::<IndexDoc>(function)?.to_function(gr.ids())?;
            let cert = match certificate {
                Some(path) => io::read_json::<CertificateDoc>(path)?.to_certificate(gr.ids())?,
                None => {
                    let k = parse_subset(subset.as_deref(), gr.ids())?;
                    summing::pietsch_functional(&d, &f, &k, p, &tol)?
                }
            };
            let report = graph::check_t2(&gr, &d, p, &f, &cert)?;
            let named = |b: &graph::BoundCheck| {
                json!({
                    "constant": b.constant,
                    "worst_excess": b.worst_excess,
                    "worst_pair": b.worst_pair.map(|pr| pair_json(gr.ids(), pr)),
                    "worst_ratio": b.worst_ratio,
                    "passes": b.passes,
                })
            };
            Ok(Outcome {
                failed: !report.passes(),
                output: Output::Json(json!({
                    "p": p,
                    "slack": graph::T2_SLACK,
                    "lipschitz": named(&report.lipschitz),
                    "summing": report.summing.as_ref().map(named),
                    "certificate_constant": cert.constant,
                    "passes": report.passes(),
                })),
            })
        }
        Command::Gen { kind, n } => {
            let gr = match kind {
                GenKind::Sequence => graph::sequence_graph(*n)?,
                GenKind::TwoApex => graph::two_apex_graph(*n)?,
                GenKind::Circle => graph::circle_graph(*n)?,
                GenKind::Path => graph::path_graph(*n, 1.0)?,
            };
            Ok(Outcome::ok(Output::Json(to_value(&GraphDoc::from_graph(&gr)))))
        }
    }
}

fn graph_command(which: &GraphCommand, p: f64) -> Result<Outcome> {
    let (gr, m, queries, extra) = match which {
        GraphCommand::Qp { graph: path, queries } => {
            let gr = read_graph(path)?;
            let m = graph::q_p(&gr, p)?;
            (gr, m, queries, Value::Null)
        }
        GraphCommand::Dp { input, queries } => {
            let (gr, d) = load_graph_input(input)?;
            let m = graph::d_p(&gr, &d, p)?;
            (gr, m, queries, Value::Null)
        }
        GraphCommand::Dpmu { input, measure, queries } => {
            let (gr, d) = load_graph_input(input)?;
            let mu = parse_measure(measure.as_deref(), gr.ids())?;
            let m = graph::d_p_mu(&gr, &d, p, &mu)?;
            let extra = json!({ "measure": io::measure_to_ids(&mu, gr.ids()) });
            (gr, m, queries, extra)
        }
        GraphCommand::Ep { graph: path, function, queries } => {
            let gr = read_graph(path)?;
            let f = io::read_json::<IndexDoc>(function)?.to_function(gr.ids())?;
            let m = graph::e_p(&gr, &f, p)?;
            (gr, m, queries, Value::Null)
        }
    };
    let queries = parse_queries(queries, gr.ids())?;
    let mut report = path_report(&m, gr.ids(), &queries);
    if let (Value::Object(map), Value::Object(more)) = (&mut report, extra) {
        map.extend(more);
    }
    Ok(Outcome::ok(Output::Matrix { ids: gr.ids().to_vec(), matrix: m.matrix(), extra: report }))
}

