//! `ndkt` — search, verify, and analyze knight's tours on n-dimensional
//! rectangular boards.
//!
//! Exit codes: 0 success/found/verified, 1 verification failed or no tour
//! found or search exhausted, 2 usage or input error. Reports go to
//! stdout; progress and warnings go to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ndkt_core::{
    closed_tour_feasible, corpus, degree_profile, enumerate_lines, find_magic_tour, find_tour,
    magic_report, magic_tour_feasible, quartile_report, tour_from_grid, validate, Answer, Budget,
    Grid, Heuristic, SearchConfig, SearchMode, SearchOutcome, Shape, Tour,
};

const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "ndkt",
    version,
    about = "Knight's tours on n-dimensional boards: search, verification, feasibility, analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a tour file and optionally check magic properties.
    Verify(VerifyArgs),
    /// Search for an open or closed tour.
    Search(SearchArgs),
    /// Search for a magic tour on a cubic board.
    MagicSearch(MagicSearchArgs),
    /// Report whether a tour can exist, with the rule it rests on.
    Feasibility(FeasibilityArgs),
    /// Degree profiles and line inventories of a board.
    Analyze(AnalyzeArgs),
    /// Inspect and verify the bundled tour corpus.
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Tour file in ndkt v1 format.
    file: PathBuf,
    /// Also require every axis line to attain the magic constant.
    #[arg(long)]
    magic: bool,
    /// Also require every space diagonal to attain the magic constant.
    #[arg(long)]
    diagonals: bool,
    /// Also require quartile balance on every line (order-4 boards).
    #[arg(long)]
    quartiles: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum CliMode {
    Open,
    Closed,
}

#[derive(Copy, Clone, ValueEnum)]
enum CliHeuristic {
    Warnsdorff,
    Lexicographic,
}

#[derive(Args)]
struct SearchArgs {
    /// Board extents, e.g. 3x4x2x2.
    #[arg(long)]
    shape: String,
    /// Tour kind to search for.
    #[arg(long, value_enum)]
    mode: CliMode,
    #[command(flatten)]
    common: CommonSearchArgs,
}

#[derive(Args)]
struct MagicSearchArgs {
    /// Cubic board extents, e.g. 4x4x4.
    #[arg(long)]
    shape: String,
    /// Tour file whose leading steps seed the search.
    #[arg(long)]
    prefix: Option<PathBuf>,
    /// How many steps of the prefix file to use (default: all).
    #[arg(long)]
    prefix_len: Option<usize>,
    /// Restrict the search to quartile-balanced placements. This is the
    /// published construction discipline; it can skip magic tours that are
    /// not balanced.
    #[arg(long)]
    quartile_pruning: bool,
    #[command(flatten)]
    common: CommonSearchArgs,
}

#[derive(Args)]
struct CommonSearchArgs {
    /// Node budget as a plain integer, or wall-clock budget with a suffix
    /// (e.g. 500ms, 60s, 10m, 2h).
    #[arg(long, value_parser = parse_budget)]
    budget: Option<Budget>,
    /// 0 is deterministic; any other value seeds randomized tie-breaking.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Child ordering at each expansion.
    #[arg(long, value_enum, default_value_t = CliHeuristic::Warnsdorff)]
    heuristic: CliHeuristic,
    /// Keep searching until the whole tree is covered.
    #[arg(long)]
    exhaustive: bool,
    /// Write the found tour here in canonical ndkt v1 form.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (determinism is only promised at 1).
    #[arg(long, env = "NDKT_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Search even when a proven theorem says no tour exists.
    #[arg(long)]
    force: bool,
    /// Stream progress (nodes/sec, depth histogram) to stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FeasibilityTarget {
    /// Board extents, e.g. 3x4x2x2 (closed-tour feasibility).
    #[arg(long)]
    shape: Option<String>,
    /// Hypercube order m (with --dim and --magic: magic-tour feasibility).
    #[arg(long, requires = "dim", requires = "magic")]
    order: Option<u64>,
}

#[derive(Args)]
struct FeasibilityArgs {
    #[command(flatten)]
    target: FeasibilityTarget,
    /// Hypercube dimension d.
    #[arg(long)]
    dim: Option<u32>,
    /// Ask about magic tours instead of closed tours.
    #[arg(long)]
    magic: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Board extents, e.g. 4x4x4x4.
    #[arg(long)]
    shape: String,
    /// Print the per-plane degree profile table.
    #[arg(long, conflicts_with = "lines")]
    degrees: bool,
    /// Print the axis-line inventory.
    #[arg(long)]
    lines: bool,
}

#[derive(Args)]
struct CorpusArgs {
    #[command(subcommand)]
    action: CorpusAction,
}

#[derive(Subcommand)]
enum CorpusAction {
    /// List the bundled entries.
    List,
    /// Print one bundled entry in ndkt v1 form.
    Show { id: String },
    /// Check every bundled entry against its declared properties.
    VerifyAll,
}

fn parse_budget(text: &str) -> Result<Budget, String> {
    if text.is_empty() {
        return Err("empty budget".into());
    }
    if text.chars().all(|c| c.is_ascii_digit()) {
        let nodes: u64 = text.parse().map_err(|_| "bad node budget".to_string())?;
        return Ok(Budget::nodes(nodes));
    }
    let split = text
        .find(|c: char| !c.is_ascii_digit())
        .ok_or_else(|| "bad budget".to_string())?;
    let (value, unit) = text.split_at(split);
    let value: u64 = value
        .parse()
        .map_err(|_| format!("bad budget value {value:?}"))?;
    let duration = match unit {
        "ms" => Duration::from_millis(value),
        "s" => Duration::from_secs(value),
        "m" => Duration::from_secs(value * 60),
        "h" => Duration::from_secs(value * 3600),
        other => return Err(format!("unknown budget unit {other:?} (use ms/s/m/h)")),
    };
    Ok(Budget {
        node_limit: None,
        time_limit: Some(duration),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Search(args) => cmd_search(args),
        Command::MagicSearch(args) => cmd_magic_search(args),
        Command::Feasibility(args) => cmd_feasibility(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Corpus(args) => cmd_corpus(args),
    };
    ExitCode::from(code)
}

fn usage_error(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn read_grid(path: &Path) -> Result<Grid, u8> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage_error(format!("cannot read {}: {e}", path.display())))?;
    corpus::parse_tour_file(&text).map_err(|e| usage_error(e))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(args: VerifyArgs) -> u8 {
    let grid = match read_grid(&args.file) {
        Ok(grid) => grid,
        Err(code) => return code,
    };
    let shape = grid.shape().clone();
    println!("shape: {shape} ({} cells)", shape.cell_count());

    let report = validate(&grid);
    let mut kv_lines = vec![report.to_kv()];
    let mut failed = !report.valid;
    match &report.first_violation {
        None => println!("tour: valid, {}", report.closure),
        Some(violation) => println!("tour: INVALID — {violation}"),
    }

    if args.magic || args.diagonals {
        let magic = match magic_report(&grid, args.diagonals) {
            Ok(m) => m,
            Err(e) => return usage_error(e),
        };
        match magic.magic_constant() {
            Some(constant) => {
                let attained = magic.magic_line_count().unwrap_or(0);
                println!(
                    "magic: constant {constant}, lines {attained}/{}, ratio {}",
                    magic.total_line_count(),
                    magic.magic_ratio().expect("cubic")
                );
                if let Some(line) = magic.first_off_line() {
                    println!(
                        "magic: first off line: axis {} starting at flat {} sums to {}",
                        line.axis, line.first_cell, line.sum
                    );
                }
            }
            None => return usage_error("magic predicate is undefined for non-cubic shapes"),
        }
        if args.diagonals {
            let sums = magic.diagonal_sums().expect("requested");
            println!(
                "diagonals: {}/{} magic, sums {:?}",
                magic.magic_diagonal_count().expect("requested"),
                sums.len(),
                sums
            );
        }
        if args.magic && magic.is_magic() != Some(true) {
            failed = true;
        }
        if args.diagonals && magic.is_diagonally_magic() != Some(true) {
            failed = true;
        }
        kv_lines.push(magic.to_kv());
    }

    if args.quartiles {
        let quartile = match quartile_report(&grid) {
            Ok(q) => q,
            Err(e) => return usage_error(e),
        };
        println!(
            "quartiles: {}/{} lines balanced",
            quartile.balanced_line_count, quartile.total_line_count
        );
        if let Some((axis, cell)) = quartile.first_unbalanced {
            println!("quartiles: first unbalanced line: axis {axis} starting at flat {cell}");
        }
        if !quartile.balanced {
            failed = true;
        }
        kv_lines.push(quartile.to_kv());
    }

    println!("{}", kv_lines.join(" "));
    if failed {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

fn build_config(mode: SearchMode, common: &CommonSearchArgs) -> SearchConfig {
    let mut config = SearchConfig::new(mode);
    if let Some(budget) = common.budget {
        config.budget = budget;
    }
    config.seed = common.seed;
    config.heuristic = match common.heuristic {
        CliHeuristic::Warnsdorff => Heuristic::Warnsdorff,
        CliHeuristic::Lexicographic => Heuristic::Lexicographic,
    };
    config.exhaustive = common.exhaustive;
    config.jobs = common.jobs.max(1);
    if common.verbose {
        config.progress = Some(Duration::from_secs(2));
    }
    config
}

/// Writes a found tour, re-parses it, and re-validates it; emitting a file
/// the tool itself cannot verify would be a bug.
fn emit_tour(tour: &Tour, out: Option<&Path>) -> Result<(), u8> {
    let text = corpus::write_tour_file(&ndkt_core::grid_from_tour(tour));
    let reparsed = corpus::parse_tour_file(&text).expect("emitted file re-parses");
    assert!(
        validate(&reparsed).valid,
        "emitted file failed re-verification"
    );
    match out {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| usage_error(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn finish_search(outcome: &SearchOutcome, out: Option<&Path>) -> u8 {
    println!("{}", outcome.to_kv());
    match &outcome.tour {
        Some(tour) => match emit_tour(tour, out) {
            Ok(()) => EXIT_OK,
            Err(code) => code,
        },
        None => EXIT_FAILED,
    }
}

fn cmd_search(args: SearchArgs) -> u8 {
    let shape = match Shape::parse(&args.shape) {
        Ok(shape) => shape,
        Err(e) => return usage_error(e),
    };
    let mode = match args.mode {
        CliMode::Open => SearchMode::Open,
        CliMode::Closed => SearchMode::Closed,
    };
    if mode == SearchMode::Closed {
        let verdict = closed_tour_feasible(&shape);
        if verdict.answer == Answer::Impossible {
            if verdict.is_proven_impossible() && !args.common.force {
                println!("{}", verdict.to_kv());
                println!("infeasible: {verdict}");
                println!("status=exhausted_no_solution nodes=0 elapsed=0.000s");
                return EXIT_FAILED;
            }
            eprintln!("warning: {verdict}");
            if verdict.is_proven_impossible() {
                eprintln!("warning: searching anyway (--force)");
            }
        }
    }
    let config = build_config(mode, &args.common);
    match find_tour(&shape, &config) {
        Ok(outcome) => finish_search(&outcome, args.common.out.as_deref()),
        Err(e) => usage_error(e),
    }
}

fn cmd_magic_search(args: MagicSearchArgs) -> u8 {
    let shape = match Shape::parse(&args.shape) {
        Ok(shape) => shape,
        Err(e) => return usage_error(e),
    };
    let Some(order) = shape.order() else {
        return usage_error(format!(
            "magic searches need a cubic shape, got {shape}"
        ));
    };
    if shape.dimension() >= 2 {
        match magic_tour_feasible(order as u64, shape.dimension() as u32) {
            Ok(verdict) if verdict.is_proven_impossible() && !args.common.force => {
                println!("{}", verdict.to_kv());
                println!("infeasible: {verdict}");
                println!("status=exhausted_no_solution nodes=0 elapsed=0.000s");
                return EXIT_FAILED;
            }
            Ok(verdict) if verdict.is_proven_impossible() => {
                eprintln!("warning: {verdict}");
                eprintln!("warning: searching anyway (--force)");
            }
            Ok(_) => {}
            Err(e) => return usage_error(e),
        }
    }
    let mut config = build_config(SearchMode::Magic, &args.common);
    config.quartile_pruning = args.quartile_pruning;
    if let Some(path) = &args.prefix {
        let grid = match read_grid(path) {
            Ok(grid) => grid,
            Err(code) => return code,
        };
        let tour = match tour_from_grid(&grid) {
            Ok(tour) => tour,
            Err(e) => return usage_error(e),
        };
        let len = args.prefix_len.unwrap_or(tour.sequence().len());
        if len == 0 || len > tour.sequence().len() {
            return usage_error(format!(
                "prefix length {len} outside 1..={}",
                tour.sequence().len()
            ));
        }
        config.prefix = Some(tour.sequence()[..len].to_vec());
    } else if args.prefix_len.is_some() {
        return usage_error("--prefix-len needs --prefix");
    }
    match find_magic_tour(&shape, &config) {
        Ok(outcome) => finish_search(&outcome, args.common.out.as_deref()),
        Err(e) => usage_error(e),
    }
}

// ---------------------------------------------------------------------------
// feasibility / analyze / corpus
// ---------------------------------------------------------------------------

fn cmd_feasibility(args: FeasibilityArgs) -> u8 {
    let verdict = if let Some(shape) = args.target.shape {
        if args.magic {
            return usage_error("--magic goes with --order/--dim; use a cubic order instead");
        }
        match Shape::parse(&shape) {
            Ok(shape) => {
                println!("closed tour on {shape}:");
                closed_tour_feasible(&shape)
            }
            Err(e) => return usage_error(e),
        }
    } else {
        let order = args.target.order.expect("clap group guarantees order");
        let dim = args.dim.expect("clap requires dim");
        println!("magic tour on the order-{order} {dim}-dimensional hypercube:");
        match magic_tour_feasible(order, dim) {
            Ok(verdict) => verdict,
            Err(e) => return usage_error(e),
        }
    };
    println!("  {verdict}");
    println!("{}", verdict.to_kv());
    EXIT_OK
}

fn axis_name(axis: usize, dimension: usize) -> String {
    const NAMES: [char; 7] = ['x', 'y', 'z', 'w', 'v', 'u', 't'];
    if dimension <= NAMES.len() {
        NAMES[axis].to_string()
    } else {
        format!("a{axis}")
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> u8 {
    let shape = match Shape::parse(&args.shape) {
        Ok(shape) => shape,
        Err(e) => return usage_error(e),
    };
    if args.degrees == args.lines {
        return usage_error("pick exactly one of --degrees or --lines");
    }
    if args.degrees {
        let profile = match degree_profile(&shape) {
            Ok(p) => p,
            Err(e) => return usage_error(e),
        };
        let d = shape.dimension();
        println!(
            "degree profile of {shape}: min total {}, max total {}",
            profile.min_total(),
            profile.max_total()
        );
        let distinct = profile.distinct_profiles();
        println!(
            "{} distinct per-plane profiles ({} up to axis relabeling):",
            distinct.len(),
            profile.canonical_classes().len()
        );
        for (index, &(i, j)) in profile.planes().iter().enumerate() {
            let label = format!("{}{}", axis_name(i, d), axis_name(j, d));
            print!("{label:>6} =");
            for (counts, _, _) in distinct {
                print!(" {:>3}", counts[index]);
            }
            println!();
        }
        print!(" total =");
        for (_, total, _) in distinct {
            print!(" {total:>3}");
        }
        println!();
        print!(" cells =");
        for (_, _, cells) in distinct {
            print!(" {cells:>3}");
        }
        println!();
        println!(
            "min={} max={} distinct={} classes={}",
            profile.min_total(),
            profile.max_total(),
            distinct.len(),
            profile.canonical_classes().len()
        );
    } else {
        let lines = enumerate_lines(&shape);
        println!("line inventory of {shape}:");
        for axis in 0..shape.dimension() {
            let count = lines.iter().filter(|l| l.axis == axis).count();
            println!(
                "  axis {} ({}): {count} lines of length {}",
                axis,
                axis_name(axis, shape.dimension()),
                shape.dims()[axis]
            );
        }
        println!(
            "lines={} cells={} per_cell={}",
            lines.len(),
            shape.cell_count(),
            shape.dimension()
        );
    }
    EXIT_OK
}

fn cmd_corpus(args: CorpusArgs) -> u8 {
    match args.action {
        CorpusAction::List => {
            for entry in corpus::entries() {
                let shape = entry.shape().expect("bundled entries parse");
                println!(
                    "{:>6}  {:<12} {:>5} cells  {}",
                    entry.id,
                    shape.to_string(),
                    shape.cell_count(),
                    entry.note
                );
            }
            EXIT_OK
        }
        CorpusAction::Show { id } => match corpus::entry(&id) {
            Some(entry) => {
                print!("{}", entry.text);
                EXIT_OK
            }
            None => usage_error(format!("unknown corpus id {id:?}")),
        },
        CorpusAction::VerifyAll => {
            let mut all_passed = true;
            for v in corpus::corpus_verify_all() {
                if v.passed {
                    println!("{}: pass", v.id);
                } else {
                    all_passed = false;
                    println!("{}: FAIL", v.id);
                    for failure in &v.failures {
                        println!("  {failure}");
                    }
                }
            }
            if all_passed {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
    }
}
