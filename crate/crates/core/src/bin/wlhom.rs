//! Command-line surface: pairwise equivalence verdicts, counting and
//! refinement queries, linear-system feasibility, the verification
//! suites, the refinement benchmark, and the truncated kernel.
//!
//! Exit codes: 0 on success, 1 for a "distinguished" verdict when
//! `--exit-code-verdict` is set, 2 on input errors, 3 on capacity
//! errors, 4 on suite violations or contradictory verdicts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wlhom::graph::{parse_edgelist, parse_graph6, write_graph6, Graph};
use wlhom::homcount::hom_auto;
use wlhom::kwl::{distinguishes_kwl, kwl_stable};
use wlhom::linsys::{
    build_fiso, build_fiso_khalf_with_budget, build_liso_with_budget, RationalLinearSystem,
};
use wlhom::refine::{
    cr_vector, distinguishes_1wl, distinguishes_1wl_round, stable_colors_fast,
};
use wlhom::report::{
    GraphSummary, KwlVerdict, LpVerdict, ProbeVerdict, SuiteConfig, SuiteReport, VerdictReport,
    REPORT_SCHEMA,
};
use wlhom::solve::{solve_nonneg, solve_real, spectral_fiso_solution};
use wlhom::spectral::{char_poly, cospectral, walk_fingerprint};
use wlhom::suite::{
    bench_refine, graph_from_spec, kernel_matrix, oracle_suite, refinement_suite, fingerprint_suite,
    tuple_suite, pathwidth_suite, tree_probe, tw2_probe, KernelFamily,
};
use wlhom::{Error, Result};

const EXIT_DISTINGUISHED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAPACITY: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "wlhom",
    version,
    about = "Equivalence verdicts for graphs: counting, refinement, and exact feasibility",
    long_about = "Decides when two graphs agree on homomorphism counts over pattern \
                  families, when iterated color refinement tells them apart, and when the \
                  associated linear relaxations of isomorphism are feasible — exactly, over \
                  the rationals.\n\n\
                  Graphs are given as files (graph6 line or an edge list preceded by the \
                  vertex count), generator specs (path:5 counts edges; cycle:6, star:4, \
                  spider:3,2, complete:4, empty:3), raw codes (g6:EEh_), fixture names \
                  (walk-twins-a, walk-twins-b, spectral-twins-a, spectral-twins-b, refine-twins-a, refine-twins-b), or \
                  `+`-joined disjoint unions of any of these.\n\n\
                  The tree and width-2 probes are falsifiers only: a witness pattern \
                  refutes equivalence, but exhausted search proves nothing — equivalence \
                  verdicts come from the refinement and feasibility deciders."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Variable budget for the lifted-system builders.
    #[arg(long, global = true, default_value_t = wlhom::linsys::VARIABLE_BUDGET)]
    budget_vars: u128,
    /// Seed for randomized inputs (benchmark graphs).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the verification suites.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Exit with status 1 when the requested deciders distinguish the pair.
    #[arg(long, global = true)]
    exit_code_verdict: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run selected deciders on a pair of graphs and report every verdict.
    Compare(CompareArgs),
    /// Count homomorphisms from a pattern graph into a target graph.
    Hom {
        pattern: String,
        target: String,
    },
    /// Stable refinement of one graph, or a refinement verdict on two.
    Refine {
        graph: String,
        other: Option<String>,
        /// Also report the unfolding classes at this depth (single graph).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// k-dimensional tuple refinement of one graph, or a verdict on two.
    Kwl {
        graph: String,
        other: Option<String>,
        /// Tuple dimension.
        #[arg(short, long, default_value_t = 2)]
        k: usize,
    },
    /// Feasibility of one of the isomorphism relaxations.
    Lp(LpArgs),
    /// Characteristic polynomials of a pair, and the spectral solution
    /// of the flat system when the walk fingerprints agree.
    Spectral {
        left: String,
        right: String,
    },
    /// Walk fingerprint (minimal recurrence plus initial terms).
    Fingerprint {
        graph: String,
        other: Option<String>,
    },
    /// Run the equivalence suites over the bundled corpus.
    VerifyTheorems(VerifyArgs),
    /// Time stable refinement plus comparison on random pairs.
    Bench(BenchArgs),
    /// Truncated kernel matrix over a corpus of graphs.
    Kernel(KernelArgs),
}

#[derive(Args)]
struct CompareArgs {
    left: String,
    right: String,
    /// Run every decider at its default size.
    #[arg(long)]
    all: bool,
    /// Vertex refinement.
    #[arg(long)]
    wl1: bool,
    /// Tuple refinement at this dimension.
    #[arg(long)]
    kwl: Option<usize>,
    /// Flat system, real and nonnegative.
    #[arg(long)]
    fiso: bool,
    /// Lifted system at this level, real and nonnegative.
    #[arg(long)]
    liso: Option<usize>,
    /// Characteristic-polynomial comparison.
    #[arg(long)]
    cospectral: bool,
    /// Walk-fingerprint comparison.
    #[arg(long)]
    fingerprint: bool,
    /// Search trees up to this many vertices for differing counts.
    #[arg(long)]
    tree_probe: Option<usize>,
    /// Search treewidth-2 corpus patterns up to this many vertices.
    #[arg(long)]
    tw2_probe: Option<usize>,
    /// Attach exact witnesses to the feasibility verdicts.
    #[arg(long)]
    witness: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LpSystem {
    /// Flat doubly-stochastic commutation system.
    Fiso,
    /// Lifted system over partial isomorphisms up to the given level.
    Liso,
    /// Half-level system over arbitrary pair sets up to the given level.
    Fkhalf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LpSense {
    Real,
    Nonneg,
}

#[derive(Args)]
struct LpArgs {
    system: LpSystem,
    sense: LpSense,
    left: String,
    right: String,
    /// Level for the lifted and half-level systems.
    #[arg(short, long, default_value_t = 2)]
    k: usize,
    /// Attach the exact witness to a feasible verdict.
    #[arg(long)]
    witness: bool,
    /// Write the system in LP text form to this file.
    #[arg(long)]
    dump_lp: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    /// Vertex refinement vs flat nonnegative feasibility, plus tree probe.
    Refinement,
    /// Walk fingerprints vs flat real feasibility.
    Fingerprint,
    /// k-tuple refinement vs lifted nonnegative feasibility.
    Tuple,
    /// Pathwidth-2 counts vs lifted real feasibility, plus transfer identity.
    Pathwidth,
    /// Counting routines vs brute-force oracles.
    Oracles,
    /// Every suite in the order above.
    All,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which suite to run.
    #[arg(long, value_enum, default_value_t = SuiteName::All)]
    suite: SuiteName,
    /// Largest vertex count drawn from the corpus.
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    /// Pattern-size limit for probes and oracle patterns.
    #[arg(long, default_value_t = 7)]
    probe_size: usize,
    /// Tuple dimension for the lifted suite.
    #[arg(short, long, default_value_t = 1)]
    k: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Vertex counts to time, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "100000,200000")]
    sizes: Vec<usize>,
    /// Average degree of the random graphs.
    #[arg(long, default_value_t = 20)]
    avg_degree: usize,
}

#[derive(Args)]
struct KernelArgs {
    /// Pattern family.
    #[arg(long, default_value = "trees")]
    family: String,
    /// Largest pattern size in the truncated sum.
    #[arg(long, default_value_t = 6)]
    size_bound: usize,
    /// File with one graph6 code per line, prepended to the positional graphs.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Graphs of the corpus.
    graphs: Vec<String>,
}

// ---------------------------------------------------------------------
// input plumbing
// ---------------------------------------------------------------------

/// Loads a graph argument: an existing file (one graph6 line, or an edge
/// list led by the vertex count), otherwise a spec string.
fn load_graph(arg: &str) -> Result<Graph> {
    if Path::new(arg).is_file() {
        let content = fs::read_to_string(arg)
            .map_err(|e| Error::Input(format!("cannot read {arg}: {e}")))?;
        let first = content
            .lines()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::Input(format!("{arg} is empty")))?;
        return parse_graph6(first.trim()).or_else(|_| parse_edgelist(&content));
    }
    graph_from_spec(arg)
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serialization cannot fail")
    );
}

#[derive(Serialize)]
struct ErrorReport {
    schema: u32,
    error: ErrorBody,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: String,
    message: String,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::Input(_) => "input",
        Error::Capacity { .. } => "capacity",
        Error::Decomposition(_) => "decomposition",
        Error::Precondition(_) => "precondition",
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Capacity { .. } => EXIT_CAPACITY,
        _ => EXIT_INPUT,
    }
}

// ---------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------

fn run_compare(cli: &Cli, args: &CompareArgs) -> Result<u8> {
    let g = load_graph(&args.left)?;
    let h = load_graph(&args.right)?;
    let mut report = VerdictReport::new(&g, &h);
    let v = &mut report.verdicts;

    if args.all || args.wl1 {
        v.wl1_distinguished = Some(distinguishes_1wl(&g, &h));
    }
    if let Some(k) = args.kwl.or(if args.all { Some(2) } else { None }) {
        v.kwl = Some(KwlVerdict { k, distinguished: distinguishes_kwl(&g, &h, k)? });
    }
    if args.all || args.fiso {
        let sys = build_fiso(&g, &h);
        v.fiso_real = Some(LpVerdict::new(&solve_real(&sys), args.witness));
        v.fiso_nonneg = Some(LpVerdict::new(&solve_nonneg(&sys), args.witness));
    }
    if let Some(level) = args.liso.or(if args.all { Some(3) } else { None }) {
        let sys = build_liso_with_budget(&g, &h, level, cli.budget_vars)?;
        v.liso_level = Some(level);
        v.liso_real = Some(LpVerdict::new(&solve_real(&sys), args.witness));
        v.liso_nonneg = Some(LpVerdict::new(&solve_nonneg(&sys), args.witness));
    }
    if args.all || args.cospectral {
        v.cospectral = Some(cospectral(&g, &h));
    }
    if args.all || args.fingerprint {
        v.walk_fingerprint_equal = Some(walk_fingerprint(&g) == walk_fingerprint(&h));
    }
    if let Some(max_size) = args.tree_probe.or(if args.all { Some(7) } else { None }) {
        let witness = tree_probe(&g, &h, max_size)?.map(|t| write_graph6(&t));
        v.tree_probe = Some(ProbeVerdict { max_size, witness });
    }
    if let Some(max_size) = args.tw2_probe.or(if args.all { Some(5) } else { None }) {
        let witness = tw2_probe(&g, &h, max_size)?.map(|t| write_graph6(&t));
        v.tw2_probe = Some(ProbeVerdict { max_size, witness });
    }

    let broken = report.cross_check();
    if !broken.is_empty() {
        // verdicts contradicting the equivalence theorems are a bug in a
        // decider, never a reportable state
        match cli.format {
            Format::Json => print_json(&ErrorReport {
                schema: REPORT_SCHEMA,
                error: ErrorBody {
                    kind: "contradiction".to_string(),
                    message: broken.join("; "),
                },
            }),
            Format::Text => {
                eprintln!("contradictory verdicts:");
                for b in &broken {
                    eprintln!("  {b}");
                }
            }
        }
        return Ok(EXIT_VIOLATION);
    }

    match cli.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }

    let vv = &report.verdicts;
    let distinguished = vv.wl1_distinguished == Some(true)
        || vv.kwl.as_ref().is_some_and(|k| k.distinguished)
        || vv.fiso_real.as_ref().is_some_and(|l| !l.feasible)
        || vv.fiso_nonneg.as_ref().is_some_and(|l| !l.feasible)
        || vv.liso_real.as_ref().is_some_and(|l| !l.feasible)
        || vv.liso_nonneg.as_ref().is_some_and(|l| !l.feasible)
        || vv.cospectral == Some(false)
        || vv.walk_fingerprint_equal == Some(false)
        || vv.tree_probe.as_ref().is_some_and(|p| p.witness.is_some())
        || vv.tw2_probe.as_ref().is_some_and(|p| p.witness.is_some());
    Ok(if cli.exit_code_verdict && distinguished { EXIT_DISTINGUISHED } else { 0 })
}

fn run_hom(cli: &Cli, pattern: &str, target: &str) -> Result<u8> {
    let f = load_graph(pattern)?;
    let g = load_graph(target)?;
    let (count, routine) = hom_auto(&f, &g)?;

    #[derive(Serialize)]
    struct HomReport {
        schema: u32,
        pattern: GraphSummary,
        target: GraphSummary,
        count: String,
        routine: &'static str,
    }
    let report = HomReport {
        schema: REPORT_SCHEMA,
        pattern: GraphSummary::new(&f),
        target: GraphSummary::new(&g),
        count: count.to_string(),
        routine,
    };
    match cli.format {
        Format::Json => print_json(&report),
        Format::Text => println!("{} homomorphisms ({})", report.count, report.routine),
    }
    Ok(0)
}

#[derive(Serialize)]
struct RefineReport {
    schema: u32,
    graph: GraphSummary,
    classes: usize,
    largest_class: usize,
    singleton_classes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    unfolding_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unfolding_classes: Option<usize>,
}

fn run_refine(cli: &Cli, graph: &str, other: &Option<String>, depth: Option<usize>) -> Result<u8> {
    let g = load_graph(graph)?;
    if let Some(other) = other {
        let h = load_graph(other)?;
        let distinguished = distinguishes_1wl(&g, &h);
        // the round-by-round engine is quadratic in the worst case; only
        // consult it for the human-sized report
        let round = if distinguished && g.n().max(h.n()) <= 10_000 {
            distinguishes_1wl_round(&g, &h)
        } else {
            None
        };

        #[derive(Serialize)]
        struct RefinePairReport {
            schema: u32,
            left: GraphSummary,
            right: GraphSummary,
            distinguished: bool,
            #[serde(skip_serializing_if = "Option::is_none")]
            distinguishing_round: Option<usize>,
        }
        let report = RefinePairReport {
            schema: REPORT_SCHEMA,
            left: GraphSummary::new(&g),
            right: GraphSummary::new(&h),
            distinguished,
            distinguishing_round: round,
        };
        match cli.format {
            Format::Json => print_json(&report),
            Format::Text => match (distinguished, round) {
                (true, Some(r)) => println!("distinguished at round {r}"),
                (true, None) => println!("distinguished"),
                (false, _) => println!("equivalent"),
            },
        }
        return Ok(if cli.exit_code_verdict && distinguished { EXIT_DISTINGUISHED } else { 0 });
    }

    let colors = stable_colors_fast(&g);
    let classes = colors.iter().copied().max().map_or(0, |c| c as usize + 1);
    let mut sizes = vec![0usize; classes];
    for &c in &colors {
        sizes[c as usize] += 1;
    }
    let (mut unfolding_depth, mut unfolding_classes) = (None, None);
    if let Some(d) = depth {
        unfolding_depth = Some(d);
        unfolding_classes = Some(cr_vector(&g, d)?.len());
    }
    let report = RefineReport {
        schema: REPORT_SCHEMA,
        graph: GraphSummary::new(&g),
        classes,
        largest_class: sizes.iter().copied().max().unwrap_or(0),
        singleton_classes: sizes.iter().filter(|&&s| s == 1).count(),
        unfolding_depth,
        unfolding_classes,
    };
    match cli.format {
        Format::Json => print_json(&report),
        Format::Text => {
            println!(
                "{} stable classes on {} vertices (largest {}, {} singletons)",
                report.classes, report.graph.n, report.largest_class, report.singleton_classes
            );
            if let (Some(d), Some(c)) = (report.unfolding_depth, report.unfolding_classes) {
                println!("{c} unfolding classes at depth {d}");
            }
        }
    }
    Ok(0)
}

fn run_kwl(cli: &Cli, graph: &str, other: &Option<String>, k: usize) -> Result<u8> {
    let g = load_graph(graph)?;
    if let Some(other) = other {
        let h = load_graph(other)?;
        let distinguished = distinguishes_kwl(&g, &h, k)?;

        #[derive(Serialize)]
        struct KwlPairReport {
            schema: u32,
            left: GraphSummary,
            right: GraphSummary,
            verdict: KwlVerdict,
        }
        let report = KwlPairReport {
            schema: REPORT_SCHEMA,
            left: GraphSummary::new(&g),
            right: GraphSummary::new(&h),
            verdict: KwlVerdict { k, distinguished },
        };
        match cli.format {
            Format::Json => print_json(&report),
            Format::Text => println!(
                "{}",
                if distinguished { "distinguished" } else { "equivalent" }
            ),
        }
        return Ok(if cli.exit_code_verdict && distinguished { EXIT_DISTINGUISHED } else { 0 });
    }

    let coloring = kwl_stable(&g, k)?;

    #[derive(Serialize)]
    struct KwlStableReport {
        schema: u32,
        graph: GraphSummary,
        k: usize,
        classes: usize,
        rounds: usize,
    }
    let report = KwlStableReport {
        schema: REPORT_SCHEMA,
        graph: GraphSummary::new(&g),
        k,
        classes: coloring.class_count(),
        rounds: coloring.rounds(),
    };
    match cli.format {
        Format::Json => print_json(&report),
        Format::Text => println!(
            "{} stable {}-tuple classes after {} refining rounds",
            report.classes, report.k, report.rounds
        ),
    }
    Ok(0)
}

fn run_lp(cli: &Cli, args: &LpArgs) -> Result<u8> {
    let g = load_graph(&args.left)?;
    let h = load_graph(&args.right)?;
    let sys: RationalLinearSystem = match args.system {
        LpSystem::Fiso => build_fiso(&g, &h),
        LpSystem::Liso => build_liso_with_budget(&g, &h, args.k, cli.budget_vars)?,
        LpSystem::Fkhalf => build_fiso_khalf_with_budget(&g, &h, args.k, cli.budget_vars)?,
    };
    let nonneg = args.sense == LpSense::Nonneg;
    if let Some(path) = &args.dump_lp {
        fs::write(path, sys.to_lp_text(nonneg))
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    let feasibility = if nonneg { solve_nonneg(&sys) } else { solve_real(&sys) };
    let verdict = LpVerdict::new(&feasibility, args.witness);

    #[derive(Serialize)]
    struct LpReport {
        schema: u32,
        left: GraphSummary,
        right: GraphSummary,
        system: String,
        sense: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        level: Option<usize>,
        variables: usize,
        rows: usize,
        verdict: LpVerdict,
    }
    let report = LpReport {
        schema: REPORT_SCHEMA,
        left: GraphSummary::new(&g),
        right: GraphSummary::new(&h),
        system: match args.system {
            LpSystem::Fiso => "flat".to_string(),
            LpSystem::Liso => "lifted".to_string(),
            LpSystem::Fkhalf => "half-level".to_string(),
        },
        sense: if nonneg { "nonneg" } else { "real" }.to_string(),
        level: match args.system {
            LpSystem::Fiso => None,
            _ => Some(args.k),
        },
        variables: sys.n_vars(),
        rows: sys.n_rows(),
        verdict,
    };
    match cli.format {
        Format::Json => print_json(&report),
        Format::Text => println!(
            "{} ({}, {} variables, {} rows)",
            if report.verdict.feasible { "feasible" } else { "infeasible" },
            report.verdict.certificate,
            report.variables,
            report.rows
        ),
    }
    let distinguished = !report.verdict.feasible;
    Ok(if cli.exit_code_verdict && distinguished { EXIT_DISTINGUISHED } else { 0 })
}

fn run_spectral(cli: &Cli, left: &str, right: &str) -> Result<u8> {
    let g = load_graph(left)?;
    let h = load_graph(right)?;
    let equal_polys = cospectral(&g, &h);
    let fingerprints_equal = walk_fingerprint(&g) == walk_fingerprint(&h);

    #[derive(Serialize)]
    struct SpectralSolutionReport {
        matched_eigenvalues: Vec<f64>,
        residual_commute: f64,
        residual_row_sums: f64,
        residual_col_sums: f64,
        x: Vec<Vec<f64>>,
    }
    #[derive(Serialize)]
    struct SpectralReport {
        schema: u32,
        left: GraphSummary,
        right: GraphSummary,
        char_poly_left: Vec<String>,
        char_poly_right: Vec<String>,
        cospectral: bool,
        walk_fingerprint_equal: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        solution: Option<SpectralSolutionReport>,
    }

    let solution = if fingerprints_equal {
        let s = spectral_fiso_solution(&g, &h)?;
        Some(SpectralSolutionReport {
            matched_eigenvalues: s.matched_eigenvalues,
            residual_commute: s.residual_commute,
            residual_row_sums: s.residual_row_sums,
            residual_col_sums: s.residual_col_sums,
            x: s.x,
        })
    } else {
        None
    };
    let report = SpectralReport {
        schema: REPORT_SCHEMA,
        left: GraphSummary::new(&g),
        right: GraphSummary::new(&h),
        char_poly_left: char_poly(&g).coeffs_desc().iter().map(|c| c.to_string()).collect(),
        char_poly_right: char_poly(&h).coeffs_desc().iter().map(|c| c.to_string()).collect(),
        cospectral: equal_polys,
        walk_fingerprint_equal: fingerprints_equal,
        solution,
    };
    match cli.format {
        Format::Json => print_json(&report),
        Format::Text => {
            println!("co-spectral: {equal_polys}");
            println!("walk fingerprints equal: {fingerprints_equal}");
            if let Some(s) = &report.solution {
                println!(
                    "spectral solution residuals: commute {:.2e}, rows {:.2e}, columns {:.2e}",
                    s.residual_commute, s.residual_row_sums, s.residual_col_sums
                );
            }
        }
    }
    Ok(if cli.exit_code_verdict && !equal_polys { EXIT_DISTINGUISHED } else { 0 })
}

fn run_fingerprint(cli: &Cli, graph: &str, other: &Option<String>) -> Result<u8> {
    #[derive(Serialize)]
    struct FingerprintBody {
        graph: GraphSummary,
        order: usize,
        recurrence: Vec<String>,
        initial: Vec<String>,
    }
    fn body(g: &Graph) -> FingerprintBody {
        let fp = walk_fingerprint(g);
        FingerprintBody {
            graph: GraphSummary::new(g),
            order: fp.order(),
            recurrence: fp
                .recurrence
                .iter()
                .map(|c| format!("{}/{}", c.numer(), c.denom()))
                .collect(),
            initial: fp.initial.iter().map(|c| c.to_string()).collect(),
        }
    }

    let g = load_graph(graph)?;
    let left = body(&g);
    let mut equal = None;
    let mut right = None;
    if let Some(other) = other {
        let h = load_graph(other)?;
        equal = Some(walk_fingerprint(&g) == walk_fingerprint(&h));
        right = Some(body(&h));
    }

    #[derive(Serialize)]
    struct FingerprintReport {
        schema: u32,
        left: FingerprintBody,
        #[serde(skip_serializing_if = "Option::is_none")]
        right: Option<FingerprintBody>,
        #[serde(skip_serializing_if = "Option::is_none")]
        equal: Option<bool>,
    }
    let report = FingerprintReport { schema: REPORT_SCHEMA, left, right, equal };
    match cli.format {
        Format::Json => print_json(&report),
        Format::Text => {
            println!(
                "order {} recurrence [{}], initial terms [{}]",
                report.left.order,
                report.left.recurrence.join(", "),
                report.left.initial.join(", ")
            );
            if let Some(r) = &report.right {
                println!(
                    "order {} recurrence [{}], initial terms [{}]",
                    r.order,
                    r.recurrence.join(", "),
                    r.initial.join(", ")
                );
            }
            if let Some(e) = report.equal {
                println!("equal: {e}");
            }
        }
    }
    let distinguished = equal == Some(false);
    Ok(if cli.exit_code_verdict && distinguished { EXIT_DISTINGUISHED } else { 0 })
}

fn run_verify(cli: &Cli, args: &VerifyArgs) -> Result<u8> {
    let cfg = SuiteConfig {
        max_n: args.max_n,
        probe_size: args.probe_size,
        k: args.k,
        budget_vars: cli.budget_vars,
        jobs: cli.jobs,
        seed: cli.seed,
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    let selected = |name: SuiteName| args.suite == name || args.suite == SuiteName::All;
    if selected(SuiteName::Refinement) {
        reports.push(refinement_suite(&cfg)?);
    }
    if selected(SuiteName::Fingerprint) {
        reports.push(fingerprint_suite(&cfg)?);
    }
    if selected(SuiteName::Tuple) {
        reports.push(tuple_suite(&cfg)?);
    }
    if selected(SuiteName::Pathwidth) {
        reports.push(pathwidth_suite(&cfg)?);
    }
    if selected(SuiteName::Oracles) {
        reports.push(oracle_suite(&cfg)?);
    }

    #[derive(Serialize)]
    struct VerifyReport {
        schema: u32,
        reports: Vec<SuiteReport>,
    }
    let failed = reports.iter().any(|r| !r.passed());
    match cli.format {
        Format::Json => print_json(&VerifyReport { schema: REPORT_SCHEMA, reports }),
        Format::Text => {
            for r in &reports {
                print!("{}", r.to_text());
            }
        }
    }
    Ok(if failed { EXIT_VIOLATION } else { 0 })
}

fn run_bench(cli: &Cli, args: &BenchArgs) -> Result<u8> {
    let rows = bench_refine(&args.sizes, args.avg_degree, cli.seed)?;

    #[derive(Serialize)]
    struct BenchReport {
        schema: u32,
        avg_degree: usize,
        seed: u64,
        rows: Vec<wlhom::report::BenchRow>,
    }
    match cli.format {
        Format::Json => print_json(&BenchReport {
            schema: REPORT_SCHEMA,
            avg_degree: args.avg_degree,
            seed: cli.seed,
            rows,
        }),
        Format::Text => {
            println!("{:>12} {:>12} {:>10} {:>8}", "vertices", "edges", "millis", "ratio");
            for r in &rows {
                match r.ratio {
                    Some(q) => println!("{:>12} {:>12} {:>10} {:>8.2}", r.n, r.m, r.millis, q),
                    None => println!("{:>12} {:>12} {:>10} {:>8}", r.n, r.m, r.millis, "-"),
                }
            }
        }
    }
    Ok(0)
}

fn run_kernel(cli: &Cli, args: &KernelArgs) -> Result<u8> {
    let mut graphs = Vec::new();
    if let Some(path) = &args.corpus {
        let content = fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        for line in content.lines().filter(|l| !l.trim().is_empty()) {
            graphs.push(parse_graph6(line.trim())?);
        }
    }
    for spec in &args.graphs {
        graphs.push(load_graph(spec)?);
    }
    if graphs.is_empty() {
        return Err(Error::Input("kernel needs at least one graph".to_string()));
    }
    let family: KernelFamily = args.family.parse()?;
    let matrix = kernel_matrix(&graphs, family, args.size_bound)?;
    let rendered: Vec<Vec<String>> = matrix
        .iter()
        .map(|row| row.iter().map(|q| format!("{}/{}", q.numer(), q.denom())).collect())
        .collect();

    #[derive(Serialize)]
    struct KernelReport {
        schema: u32,
        family: String,
        size_bound: usize,
        graphs: Vec<GraphSummary>,
        matrix: Vec<Vec<String>>,
    }
    let report = KernelReport {
        schema: REPORT_SCHEMA,
        family: args.family.clone(),
        size_bound: args.size_bound,
        graphs: graphs.iter().map(GraphSummary::new).collect(),
        matrix: rendered,
    };
    match cli.format {
        Format::Json => print_json(&report),
        Format::Text => {
            for row in &report.matrix {
                println!("{}", row.join("  "));
            }
        }
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Compare(args) => run_compare(cli, args),
        Command::Hom { pattern, target } => run_hom(cli, pattern, target),
        Command::Refine { graph, other, depth } => run_refine(cli, graph, other, *depth),
        Command::Kwl { graph, other, k } => run_kwl(cli, graph, other, *k),
        Command::Lp(args) => run_lp(cli, args),
        Command::Spectral { left, right } => run_spectral(cli, left, right),
        Command::Fingerprint { graph, other } => run_fingerprint(cli, graph, other),
        Command::VerifyTheorems(args) => run_verify(cli, args),
        Command::Bench(args) => run_bench(cli, args),
        Command::Kernel(args) => run_kernel(cli, args),
    }
}

/// Dying silently on a closed pipe (`wlhom … | head`) is correct filter
/// behavior; the Rust runtime masks SIGPIPE, which would turn it into a
/// broken-pipe panic instead.
#[cfg(unix)]
fn restore_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn restore_sigpipe() {}

fn main() -> ExitCode {
    restore_sigpipe();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            match cli.format {
                Format::Json => print_json(&ErrorReport {
                    schema: REPORT_SCHEMA,
                    error: ErrorBody {
                        kind: error_kind(&e).to_string(),
                        message: e.to_string(),
                    },
                }),
                Format::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(exit_for(&e))
        }
    }
}
