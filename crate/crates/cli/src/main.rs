use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use deltaprop::arith::{factorize, is_perfect_square};
use deltaprop::delta::{
    delta_triples, has_delta, is_primitive, primitive_decompositions, MembershipTable,
};
use deltaprop::graphs::{factor_graph, graph_stats, FactorGraph, GraphStats, SplitGraph};
use deltaprop::polyfam::{family_members, make_family, square_scan, SquareHit};
use deltaprop::realize::{active_realizations, realization_params, realize_graph, VennCells};
use deltaprop::verify::{Suite, SuiteReport};
use deltaprop::{classify, DeltaTriple, Error, RealizationParams};

/// Enumerations above this size stream as JSON Lines.
const STREAM_ABOVE: u64 = 100_000;

#[derive(Parser)]
#[command(name = "deltaprop", version, about = "Differences of complementary divisors and split graph factor graphs")]
struct Cli {
    /// Wrap JSON output in {command, inputs, results, elapsedMs}
    #[arg(long, global = true)]
    report: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(untagged)]
enum Command {
    /// Membership, triples and primitivity of n
    Check { n: u64 },
    /// All triples (x, y, z) of n
    Triples { n: u64 },
    /// Members up to --max
    Enumerate(EnumerateArgs),
    /// Square-times-primitive decompositions of n
    Primitive { n: u64 },
    /// Classify n by the structural rules, with the oracle as fallback
    Classify { n: u64 },
    /// Values of the cubic family for (a, b, c)
    Family(FamilyArgs),
    /// Split graphs realizing the triple (x, y, z)
    Realize(RealizeArgs),
    /// Run the self-verification suites
    Verify(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Triples { .. } => "triples",
            Command::Enumerate(_) => "enumerate",
            Command::Primitive { .. } => "primitive",
            Command::Classify { .. } => "classify",
            Command::Family(_) => "family",
            Command::Realize(_) => "realize",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Args, Serialize)]
#[serde(rename_all = "camelCase")]
#[command(group(ArgGroup::new("filter").args(["primitive_only", "squares_only", "odd_only"])))]
struct EnumerateArgs {
    #[arg(long)]
    max: u64,
    #[arg(long)]
    primitive_only: bool,
    #[arg(long)]
    squares_only: bool,
    #[arg(long)]
    odd_only: bool,
    /// json for up to 100000, jsonl above
    #[arg(long, value_enum)]
    format: Option<TableFormat>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum TableFormat {
    Json,
    Jsonl,
    Csv,
}

#[derive(Args, Serialize)]
#[serde(rename_all = "camelCase")]
#[command(group(ArgGroup::new("mode").args(["count", "square_scan"])))]
struct FamilyArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: i64,
    #[arg(long, allow_negative_numbers = true)]
    b: i64,
    #[arg(long, allow_negative_numbers = true)]
    c: i64,
    /// Number of values from n0 on
    #[arg(long, default_value_t = 10)]
    count: u64,
    /// List x in [n0, X] with n(x) a perfect square
    #[arg(long, value_name = "X")]
    square_scan: Option<u64>,
}

#[derive(Args, Serialize)]
#[serde(rename_all = "camelCase")]
#[command(group(ArgGroup::new("which").args(["da", "all_active"])))]
struct RealizeArgs {
    x: u64,
    y: u64,
    z: u64,
    /// Degree of a; defaults to z
    #[arg(long)]
    da: Option<u64>,
    /// Every dA in [z, x + z] whose graph has no inactive vertex
    #[arg(long)]
    all_active: bool,
    #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
    format: GraphFormat,
    /// DOT: draw the factor graph instead of the split graph
    #[arg(long)]
    phi: bool,
    /// DOT: draw the clique as a single box
    #[arg(long)]
    collapse_k: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Args, Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 100_000)]
    max: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SuiteArg {
    Bounds,
    Classification,
    Families,
    Graphs,
    All,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Falsified(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

type Run<T = ()> = Result<T, Failure>;

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RunReport<'a, T: Serialize> {
    command: &'a str,
    inputs: &'a Command,
    results: T,
    elapsed_ms: u128,
}

struct Out<'a> {
    cli: &'a Cli,
    start: Instant,
    sink: BufWriter<io::StdoutLock<'static>>,
}

impl Out<'_> {
    fn json<T: Serialize>(&mut self, results: &T) -> Run {
        let line = if self.cli.report {
            serde_json::to_string(&RunReport {
                command: self.cli.command.name(),
                inputs: &self.cli.command,
                results,
                elapsed_ms: self.start.elapsed().as_millis(),
            })
        } else {
            serde_json::to_string(results)
        }
        .expect("plain data serializes");
        writeln!(self.sink, "{line}")?;
        Ok(())
    }

    fn line<T: Serialize>(&mut self, row: &T) -> Run {
        serde_json::to_writer(&mut self.sink, row).expect("plain data serializes");
        writeln!(self.sink)?;
        Ok(())
    }

    fn text(&mut self, text: &str) -> Run {
        if self.cli.report {
            return Err(Failure::Usage("--report applies to JSON output only".into()));
        }
        self.sink.write_all(text.as_bytes())?;
        Ok(())
    }
}

fn arrays(ts: &[DeltaTriple]) -> Vec<[u64; 3]> {
    ts.iter().map(DeltaTriple::as_array).collect()
}

#[derive(Serialize)]
struct CheckOut {
    n: u64,
    member: bool,
    triples: Vec<[u64; 3]>,
    primitive: bool,
}

fn check(out: &mut Out, n: u64) -> Run {
    let triples = delta_triples(n)?;
    out.json(&CheckOut {
        n,
        member: !triples.is_empty(),
        primitive: is_primitive(n)?,
        triples: arrays(&triples),
    })
}

#[derive(Serialize)]
struct TriplesOut {
    n: u64,
    triples: Vec<[u64; 3]>,
}

fn triples(out: &mut Out, n: u64) -> Run {
    out.json(&TriplesOut { n, triples: arrays(&delta_triples(n)?) })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Row {
    n: u64,
    member: bool,
    primitive: bool,
    tau: u64,
    squarefree_part: u64,
}

#[derive(Serialize)]
struct EnumerateOut {
    max: u64,
    filter: &'static str,
    count: usize,
    members: Vec<Row>,
}

fn enumerate(out: &mut Out, args: &EnumerateArgs) -> Run {
    let format = args.format.unwrap_or(if args.max > STREAM_ABOVE {
        TableFormat::Jsonl
    } else {
        TableFormat::Json
    });
    if out.cli.report && format != TableFormat::Json {
        return Err(Failure::Usage("--report applies to JSON output only".into()));
    }
    let table = MembershipTable::build(args.max);
    let rows = table
        .members()
        .filter(|&n| !args.odd_only || n % 2 == 1)
        .filter(|&n| !args.squares_only || is_perfect_square(n))
        .filter(|&n| !args.primitive_only || table.is_primitive(n))
        .map(|n| {
            let f = factorize(n).expect("table stays within the ceiling");
            Row {
                n,
                member: true,
                primitive: table.is_primitive(n),
                tau: f.tau(),
                squarefree_part: f.squarefree_part(),
            }
        });
    match format {
        TableFormat::Json => {
            let members: Vec<Row> = rows.collect();
            let filter = match (args.primitive_only, args.squares_only, args.odd_only) {
                (true, _, _) => "primitive",
                (_, true, _) => "squares",
                (_, _, true) => "odd",
                _ => "all",
            };
            out.json(&EnumerateOut { max: args.max, filter, count: members.len(), members })
        }
        TableFormat::Jsonl => {
            for row in rows {
                out.line(&row)?;
            }
            Ok(())
        }
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut out.sink);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Decomposition {
    alpha: u64,
    m: u64,
}

#[derive(Serialize)]
struct PrimitiveOut {
    n: u64,
    member: bool,
    primitive: bool,
    decompositions: Vec<Decomposition>,
}

fn primitive(out: &mut Out, n: u64) -> Run {
    let member = has_delta(n)?;
    let decompositions = if member {
        primitive_decompositions(n)?
            .into_iter()
            .map(|d| Decomposition { alpha: d.alpha, m: d.m })
            .collect()
    } else {
        Vec::new()
    };
    out.json(&PrimitiveOut { n, member, primitive: is_primitive(n)?, decompositions })
}

#[derive(Serialize)]
struct ClassifyOut {
    n: u64,
    member: bool,
    decision: deltaprop::Decision,
    rule: deltaprop::Rule,
    witness: Option<[u64; 3]>,
    explanation: String,
}

fn classify_cmd(out: &mut Out, n: u64) -> Run {
    let v = classify(n)?;
    out.json(&ClassifyOut {
        n,
        member: v.is_member(),
        decision: v.decision,
        rule: v.rule,
        witness: v.witness.map(|t| t.as_array()),
        explanation: v.explanation,
    })
}

#[derive(Serialize)]
struct XValue {
    x: u64,
    n: u64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FamilyOut {
    a: i64,
    b: i64,
    c: i64,
    alpha: i64,
    beta: i64,
    n0: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    members: Option<Vec<XValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    squares: Option<Vec<SquareHit>>,
}

fn family(out: &mut Out, args: &FamilyArgs) -> Run {
    let fam = make_family(args.a, args.b, args.c)?;
    let (members, squares) = match args.square_scan {
        Some(xmax) => (None, Some(square_scan(&fam, xmax)?)),
        None => {
            let vals = family_members(&fam, args.count)?;
            (Some(vals.into_iter().map(|(x, n)| XValue { x, n }).collect()), None)
        }
    };
    out.json(&FamilyOut {
        a: fam.a,
        b: fam.b,
        c: fam.c,
        alpha: fam.alpha,
        beta: fam.beta,
        n0: fam.n0,
        members,
        squares,
    })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Realization {
    d_a: u64,
    params: RealizationParams,
    cells: VennCells,
    graph: SplitGraph,
    stats: GraphStats,
    phi: FactorGraph,
}

#[derive(Serialize)]
struct RealizeOut {
    n: u64,
    triple: [u64; 3],
    realizations: Vec<Realization>,
}

fn realize(out: &mut Out, args: &RealizeArgs) -> Run {
    let t = DeltaTriple::recover(args.x, args.y, args.z)?;
    let graphs: Vec<(u64, SplitGraph)> = if args.all_active {
        active_realizations(&t)?
    } else {
        let d_a = args.da.unwrap_or(t.z());
        vec![(d_a, realize_graph(&realization_params(&t, d_a)?)?)]
    };
    match args.format {
        GraphFormat::Dot => {
            let text: String = graphs
                .iter()
                .map(|(_, s)| if args.phi { factor_graph(s).to_dot() } else { s.to_dot(!args.collapse_k) })
                .collect();
            out.text(&text)
        }
        GraphFormat::Json => {
            let mut realizations = Vec::with_capacity(graphs.len());
            for (d_a, graph) in graphs {
                let params = realization_params(&t, d_a)?;
                realizations.push(Realization {
                    d_a,
                    cells: params.cells()?,
                    params,
                    stats: graph_stats(&graph),
                    phi: factor_graph(&graph),
                    graph,
                });
            }
            out.json(&RealizeOut { n: t.n(), triple: t.as_array(), realizations })
        }
    }
}

fn verify(out: &mut Out, args: &VerifyArgs) -> Run {
    let suites: Vec<Suite> = match args.suite {
        SuiteArg::Bounds => vec![Suite::Bounds],
        SuiteArg::Classification => vec![Suite::Classification],
        SuiteArg::Families => vec![Suite::Families],
        SuiteArg::Graphs => vec![Suite::Graphs],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let reports: Vec<SuiteReport> = suites.into_iter().map(|s| s.run(args.max)).collect();
    if out.cli.report {
        out.json(&reports)?;
    } else {
        for r in &reports {
            out.line(r)?;
        }
    }
    let failed: u64 = reports.iter().map(|r| r.failed).sum();
    if failed > 0 {
        return Err(Failure::Verification(format!("{failed} checks failed")));
    }
    Ok(())
}

fn run(cli: &Cli) -> Run {
    let mut out = Out { cli, start: Instant::now(), sink: BufWriter::new(io::stdout().lock()) };
    let result = match &cli.command {
        Command::Check { n } => check(&mut out, *n),
        Command::Triples { n } => triples(&mut out, *n),
        Command::Enumerate(args) => enumerate(&mut out, args),
        Command::Primitive { n } => primitive(&mut out, *n),
        Command::Classify { n } => classify_cmd(&mut out, *n),
        Command::Family(args) => family(&mut out, args),
        Command::Realize(args) => realize(&mut out, args),
        Command::Verify(args) => verify(&mut out, args),
    };
    out.sink.flush()?;
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("deltaprop: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("deltaprop: {msg}");
            ExitCode::from(2)
        }
    }
}
