//! `radolab`: partition regularity reports for Diophantine equations.
//!
//! JSON goes to stdout, a short human summary to stderr. Exit codes: 0 on any
//! verdict, 2 for unusable input, 3 when an internal cap is exceeded, 4 when
//! `asymptotic` is given an equation it does not cover.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use radolab_core::filters::FilterResult;
use radolab_core::linear::{
    asymptotic_candidates_linear, linear_coefficients, rado_condition, slack_pairs,
    verify_hl_choice,
};
use radolab_core::search::{
    default_family, head_census, monochromatic_solutions, profile_census, witness_search,
    ColoringSpec,
};
use radolab_core::{
    analyze, columns_condition, parse, Equation, Error, OrderedPartition, QMatrix, Verdict,
};

const TOOL_VERSION: &str = concat!("radolab ", env!("CARGO_PKG_VERSION"));
const SCHEMA: &str = "radolab-report/1";

#[derive(Parser)]
#[command(
    name = "radolab",
    version,
    about = "Partition regularity of Diophantine equations"
)]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "RADOLAB_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide or bound partition regularity.
    Analyze { equation: String },
    /// Two-class asymptotic structures of a linear homogeneous PR equation.
    Asymptotic {
        equation: String,
        #[arg(long = "N", default_value_t = 10)]
        n: u64,
    },
    /// Brute-force experiments over colorings.
    Search {
        equation: String,
        /// Colorings such as mod:5, digit:10, logband:2:3, random:42:4. Comma
        /// separated or repeated; witness mode defaults to a fixed family.
        #[arg(long, value_delimiter = ',')]
        coloring: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        bound: u64,
        #[arg(long = "N", default_value_t = 10)]
        n: u64,
        #[arg(long, default_value_t = 10)]
        base: u64,
        #[arg(long, default_value_t = 10)]
        bins: usize,
        /// Most solution records printed in solutions mode.
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
        #[arg(long, value_enum, default_value_t = Mode::Solutions)]
        mode: Mode,
    },
    /// Columns condition of a matrix file: one row per line, entries are
    /// integers or fractions separated by spaces or commas, `#` comments.
    ColumnsCondition { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Solutions,
    Census,
    Heads,
    Witness,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Solutions => "solutions",
            Mode::Census => "census",
            Mode::Heads => "heads",
            Mode::Witness => "witness",
        }
    }
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: "usage",
            message: message.into(),
        }
    }

    fn not_covered(message: impl Into<String>) -> Self {
        Failure {
            code: 4,
            kind: "not_applicable",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse(_) => (2, "parse"),
            Error::Matrix(_) => (2, "matrix"),
            Error::Coloring(_) => (2, "coloring"),
            Error::ZeroPolynomial | Error::InvalidParameter(_) => (2, "usage"),
            Error::CapExceeded { .. } => (3, "cap_exceeded"),
            Error::Nonlinear(_) | Error::NotPartitionRegular(_) => (4, "not_applicable"),
            _ => (1, "internal"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<radolab_core::ParseError> for Failure {
    fn from(e: radolab_core::ParseError) -> Self {
        Failure::from(Error::Parse(e))
    }
}

#[derive(Serialize)]
struct EquationEcho {
    source: String,
    canonical: String,
    variables: Vec<String>,
}

#[derive(Serialize)]
struct Candidate {
    classes: OrderedPartition,
    rendered: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Value>,
}

#[derive(Serialize, Default)]
struct Report {
    schema: &'static str,
    tool_version: &'static str,
    command: &'static str,
    parameters: BTreeMap<&'static str, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    equation: Option<EquationEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<Verdict>,
    filters: Vec<FilterResult>,
    asymptotic_candidates: Vec<Candidate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    normalized: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    experiments: Option<Value>,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report {
            schema: SCHEMA,
            tool_version: TOOL_VERSION,
            command,
            ..Default::default()
        }
    }
}

fn echo(source: &str, eq: &Equation) -> EquationEcho {
    EquationEcho {
        source: source.to_string(),
        canonical: eq.to_string(),
        variables: eq.variables().to_vec(),
    }
}

fn print_json(value: &impl Serialize) {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, value).expect("serializable report");
    writeln!(out).expect("stdout");
}

fn homogeneous_pr(eq: &Equation) -> bool {
    eq.is_linear()
        && linear_coefficients(eq)
            .is_ok_and(|(c, k)| k == 0.into() && rado_condition(&c).is_ok_and(|s| s.is_some()))
}

fn cmd_analyze(text: &str) -> Result<(), Failure> {
    let eq = parse(text)?;
    let analysis = analyze(&eq)?;
    let mut report = Report::new("analyze");
    report.parameters.insert("equation", json!(text));
    if homogeneous_pr(&eq) {
        report.asymptotic_candidates = asymptotic_candidates_linear(&eq)?
            .into_iter()
            .map(|p| Candidate {
                rendered: p.render(eq.variables()),
                classes: p,
                certificate: None,
            })
            .collect();
    }
    let v = &analysis.verdict;
    eprintln!("{eq}: {}", v.status());
    for r in v.reasons() {
        eprintln!("  fails: {r}");
    }
    for n in v.notes() {
        eprintln!("  note: {n}");
    }
    report.equation = Some(echo(text, &eq));
    report.verdict = Some(analysis.verdict);
    report.filters = analysis.filters;
    report.normalized = analysis.normalized;
    print_json(&report);
    Ok(())
}

fn cmd_asymptotic(text: &str, big_n: u64) -> Result<(), Failure> {
    let eq = parse(text)?;
    if !eq.is_linear() {
        return Err(Failure::not_covered(format!("{eq} is not linear")));
    }
    let (coeffs, constant) = linear_coefficients(&eq)?;
    if constant != 0.into() {
        return Err(Failure::not_covered(format!("{eq} has a constant term")));
    }
    if rado_condition(&coeffs)?.is_none() {
        return Err(Failure::not_covered(format!(
            "{eq} is not partition regular: no zero-sum coefficient subset"
        )));
    }
    let names = eq.variables();
    let n = names.len();
    let mut candidates = Vec::new();
    for p in asymptotic_candidates_linear(&eq)? {
        let rendered = p.render(names);
        let certificate = match p.classes() {
            [_] => json!({ "kind": "single_class" }),
            [first, rest] => {
                let order: Vec<usize> = first.iter().chain(rest).copied().collect();
                let reordered: Vec<_> = order.iter().map(|&i| coeffs[i].clone()).collect();
                let k = first.len();
                let cert = verify_hl_choice(&reordered, k, big_n)?;
                let mut labels: Vec<String> = order.iter().map(|&i| names[i].clone()).collect();
                labels.extend(
                    slack_pairs(n, k).into_iter().map(|(a, b)| {
                        format!("s({},{})", names[order[a - 1]], names[order[b - 1]])
                    }),
                );
                let blocks: Vec<Vec<&str>> = cert
                    .blocks
                    .iter()
                    .map(|b| b.iter().map(|&c| labels[c].as_str()).collect())
                    .collect();
                json!({ "kind": "columns", "blocks": cert.display_one_based(), "columns": labels, "named_blocks": blocks })
            }
            _ => unreachable!("candidates have one or two classes"),
        };
        eprintln!("{rendered}: certified at N = {big_n}");
        candidates.push(Candidate {
            classes: p,
            rendered,
            certificate: Some(certificate),
        });
    }
    let mut report = Report::new("asymptotic");
    report.parameters.insert("equation", json!(text));
    report.parameters.insert("N", json!(big_n));
    report.equation = Some(echo(text, &eq));
    report.asymptotic_candidates = candidates;
    print_json(&report);
    Ok(())
}

fn single_coloring(specs: &[ColoringSpec], mode: Mode) -> Result<ColoringSpec, Failure> {
    match specs {
        [one] => Ok(*one),
        [] => Err(Failure::usage(format!(
            "{} mode needs --coloring",
            mode.name()
        ))),
        _ => Err(Failure::usage(format!(
            "{} mode takes a single coloring",
            mode.name()
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    text: &str,
    coloring: &[String],
    bound: u64,
    big_n: u64,
    base: u64,
    bins: usize,
    limit: usize,
    mode: Mode,
) -> Result<(), Failure> {
    let eq = parse(text)?;
    let specs: Vec<ColoringSpec> = coloring
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_, Error>>()?;
    let poly = eq.nonzero_poly()?;
    let names = eq.variables();
    let mut report = Report::new("search");
    report.parameters.insert("equation", json!(text));
    report.parameters.insert("mode", json!(mode.name()));
    report.parameters.insert("bound", json!(bound));
    report.parameters.insert(
        "coloring",
        json!(specs.iter().map(ToString::to_string).collect::<Vec<_>>()),
    );
    report.equation = Some(echo(text, &eq));
    match mode {
        Mode::Solutions => {
            let spec = match specs.len() {
                0 => None,
                _ => Some(single_coloring(&specs, mode)?),
            };
            report.parameters.insert("N", json!(big_n));
            report.parameters.insert("base", json!(base));
            report.parameters.insert("limit", json!(limit));
            let records =
                monochromatic_solutions(poly, spec.as_ref(), bound, Some(big_n), &[base], limit)?;
            eprintln!("{} solution records (limit {limit})", records.len());
            report.experiments = Some(
                json!({ "mode": "solutions", "records": records.len(), "format": "one record per following line" }),
            );
            print_json(&report);
            for r in &records {
                let rendered = r.profile.as_ref().map(|p| p.partition.render(names));
                print_json(&json!({ "record": r, "profile_rendered": rendered }));
            }
        }
        Mode::Census => {
            let spec = single_coloring(&specs, mode)?;
            report.parameters.insert("N", json!(big_n));
            let census = profile_census(poly, &spec, bound, big_n)?;
            let rendered: Vec<Value> = census
                .entries
                .iter()
                .map(|e| json!({ "profile": e.partition.render(names), "count": e.count }))
                .collect();
            for r in &rendered {
                eprintln!(
                    "{}: {}",
                    r["profile"].as_str().unwrap_or_default(),
                    r["count"]
                );
            }
            eprintln!(
                "{} valid of {} examined",
                census.valid_solutions, census.examined
            );
            report.experiments =
                Some(json!({ "mode": "census", "census": census, "profiles": rendered }));
            print_json(&report);
        }
        Mode::Heads => {
            let spec = single_coloring(&specs, mode)?;
            report.parameters.insert("base", json!(base));
            report.parameters.insert("bins", json!(bins));
            let h = head_census(poly, &spec, bound, base, bins)?;
            eprintln!(
                "{} coordinates from {} solutions; first bin {:.3}, last bin {:.3}",
                h.coordinates, h.solutions, h.near_one, h.near_base
            );
            report.experiments = Some(json!({ "mode": "heads", "histogram": h }));
            print_json(&report);
        }
        Mode::Witness => {
            let family = if specs.is_empty() {
                default_family()
            } else {
                specs.clone()
            };
            report.parameters.insert(
                "coloring",
                json!(family.iter().map(ToString::to_string).collect::<Vec<_>>()),
            );
            let reports = witness_search(poly, &family, bound)?;
            for r in &reports {
                match &r.example {
                    Some(ex) => eprintln!("{}: monochromatic solution {ex:?}", r.coloring),
                    None => eprintln!(
                        "{}: witness, no monochromatic solution up to {bound}",
                        r.coloring
                    ),
                }
            }
            let found: Vec<String> = reports
                .iter()
                .filter(|r| r.witness)
                .map(|r| r.coloring.to_string())
                .collect();
            report.experiments = Some(json!({
                "mode": "witness",
                "witnesses": found,
                "colorings": reports,
                "note": "a witness is evidence against partition regularity, not a proof",
            }));
            print_json(&report);
        }
    }
    Ok(())
}

fn cmd_columns(file: &PathBuf) -> Result<(), Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure {
        code: 2,
        kind: "io",
        message: format!("{}: {e}", file.display()),
    })?;
    let m = QMatrix::parse_text(&text)?;
    let cert = columns_condition(&m)?;
    let result = cert
        .as_ref()
        .map_or_else(|| "NONE".to_string(), |c| c.display_one_based());
    eprintln!("{result}");
    let blocks = cert.as_ref().map(|c| {
        c.blocks
            .iter()
            .map(|b| b.iter().map(|i| i + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    });
    let mut parameters = BTreeMap::new();
    parameters.insert("file", json!(file.display().to_string()));
    print_json(&json!({
        "schema": SCHEMA,
        "tool_version": TOOL_VERSION,
        "command": "columns-condition",
        "parameters": parameters,
        "rows": m.rows(),
        "cols": m.cols(),
        "result": result,
        "blocks": blocks,
    }));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("radolab: cannot configure {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let (command, result) = match &cli.command {
        Command::Analyze { equation } => ("analyze", cmd_analyze(equation)),
        Command::Asymptotic { equation, n } => ("asymptotic", cmd_asymptotic(equation, *n)),
        Command::Search {
            equation,
            coloring,
            bound,
            n,
            base,
            bins,
            limit,
            mode,
        } => (
            "search",
            cmd_search(equation, coloring, *bound, *n, *base, *bins, *limit, *mode),
        ),
        Command::ColumnsCondition { file } => ("columns-condition", cmd_columns(file)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("radolab: {}", f.message);
            print_json(&json!({
                    "schema": SCHEMA,
            "tool_version": TOOL_VERSION,
                    "command": command,
                    "error": { "kind": f.kind, "message": f.message },
                    "exit_code": f.code,
                }));
            ExitCode::from(f.code)
        }
    }
}
