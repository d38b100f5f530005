//! Command-line front end for the kneser library.
//!
//! Exit codes form the contract CI scripts rely on:
//!   0  success, including every "the theorem holds here" outcome
//!   1  a violation or witness the theorems say should not exist
//!   2  a search ran out of budget before reaching a verdict
//!   64 usage error: bad flags, bad parameters, unreadable input
//!
//! Every run is fully determined by the parsed configuration (flags plus the
//! two budget environment variables, which clap folds in at parse time) and
//! produces byte-identical artifacts on reruns. The one exception is the
//! elapsed_ms field of base-case reports, which records wall-clock time.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process;
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num::BigRational;

use kneser::basecase::{verify_base_cases, SearchBudget, SearchOptions, Verdict};
use kneser::coloring::{c1, ck1, greedy_random, Validation};
use kneser::descent::{
    batch_discard_count, reduce_fully, schedule, Mode, ReductionTrace, StopReason,
};
use kneser::rng::SplitMix64;
use kneser::translate::{kneser_cnf_with, size_report, tucker_cnf, Variant};
use kneser::tucker::{
    canonical_total_order, check_lift_soundness, enumerate_ball, find_k_complementary,
    find_k_complementary_among, lambda_from_coloring, lift_map, related_pairs, AntipodalMap,
    Flavor, SignedPair,
};
use kneser::{Coloring, InstanceParams};

const EXIT_OK: i32 = 0;
const EXIT_VIOLATION: i32 = 1;
const EXIT_BUDGET: i32 = 2;
const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "kneser",
    version,
    propagate_version = true,
    about = "Exact toolkit for Kneser-graph colorings, descent reductions, \
             antipodal maps on truncated balls, and their propositional translations"
)]
struct Cli {
    /// Seed driving every randomized choice (greedy colorings, sampled maps)
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Write the artifact here instead of stdout (same bytes either way)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format; each subcommand documents which ones it accepts
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Node budget for exhaustive searches
    #[arg(long, global = true, env = "KNESER_MAX_NODES", default_value_t = 100_000_000)]
    max_nodes: u64,

    /// Time budget in seconds for exhaustive searches
    #[arg(long, global = true, env = "KNESER_MAX_SECONDS", default_value_t = 300)]
    max_seconds: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Json,
    Dimacs,
    Csv,
    Text,
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Dimacs => "dimacs",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum ModeArg {
    /// Discard one color and one node per step
    Single,
    /// Discard ceil(n/2k) colors and nodes per step
    Batch,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Single => Mode::Single,
            ModeArg::Batch => Mode::Batch,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit a CNF instance in DIMACS form [formats: dimacs]
    Gen {
        #[command(subcommand)]
        what: GenWhat,
    },
    /// Build a proper coloring and emit it as JSON [formats: json]
    Construct {
        #[command(subcommand)]
        what: ConstructWhat,
    },
    /// Check an artifact file; a failed check exits 1
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
    /// Reduce a coloring by descent steps, emitting the trace [formats: json, text]
    Descend {
        /// Coloring JSON file to reduce
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Discard policy applied at each step
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Keep stepping until n reaches the base threshold (default: one step)
        #[arg(long)]
        full: bool,
        /// With --full, stop once n is at or below this value (default 2k)
        #[arg(long, requires = "full", value_name = "N")]
        threshold: Option<u32>,
    },
    /// Exhaustively search every base case n in 2k..=n-max at m = n-2k+1 [formats: text, json]
    Basecase {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n_max: u32,
        /// Disable the color-symmetry pruning (slower, same verdicts)
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Antipodal-map checks on truncated balls [formats: text, json]
    Tucker {
        #[command(subcommand)]
        what: TuckerWhat,
    },
    /// Planned descent sizes for discard fraction beta [formats: text, json]
    Schedule {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u32,
        /// Exact rational in p/q form
        #[arg(long, default_value = "1/2")]
        beta: String,
    },
    /// Translation size table across instance sizes [formats: csv, json]
    Sizes {
        #[arg(long)]
        k: u32,
        /// Comma-separated n values; at least two are needed for the exponent fit
        #[arg(long, value_delimiter = ',', required = true, value_name = "N,N,...")]
        n_list: Vec<u32>,
        /// Proof-system variant shaping the gadgets: ef or frege
        #[arg(long, default_value = "ef")]
        variant: String,
    },
}

#[derive(Subcommand)]
enum GenWhat {
    /// Proper m-coloring constraints for the (n, k) Kneser graph
    Kneser {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Number of colors [default: n-2k+1]
        #[arg(long)]
        m: Option<u32>,
    },
    /// Antipodality versus complementary-pair constraints on the truncated ball
    Tucker {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Subcommand)]
enum ConstructWhat {
    /// Wheel coloring: n-2k+2 colors, exactly one non-star class
    C1 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Block coloring: n-2k+2 colors, k-1 non-star classes (needs n >= 3k+3)
    Ck1 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Seeded greedy coloring; m may not go below n-2k+2
    Greedy {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Number of colors [default: n-2k+2]
        #[arg(long)]
        m: Option<u32>,
    },
}

#[derive(Subcommand)]
enum VerifyWhat {
    /// Properness and the star-shape report of a coloring JSON file [formats: text, json]
    Coloring {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Structural bookkeeping of a reduction-trace JSON file [formats: text]
    Trace {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Well-formedness of an antipodal-map JSON file [formats: text]
    Map {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum TuckerWhat {
    /// Check every antipodal map on the ball for a k-complementary pair
    Exhaust {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Check seeded random maps, or the map derived from a coloring
    Witness {
        /// Ball parameter; taken from the coloring file when --coloring is given
        #[arg(long)]
        n: Option<u32>,
        /// Ball parameter; taken from the coloring file when --coloring is given
        #[arg(long)]
        k: Option<u32>,
        /// How many seeded maps to draw
        #[arg(long, default_value_t = 100, conflicts_with = "coloring")]
        count: u64,
        /// Derive the map from this coloring JSON instead of sampling
        #[arg(long, value_name = "FILE")]
        coloring: Option<PathBuf>,
        /// Also write a map artifact here: the derived map, or in seeded
        /// mode the counterexample if one turns up
        #[arg(long, value_name = "FILE")]
        emit_map: Option<PathBuf>,
    },
    /// Lift seeded maps to the full ball and verify the case analysis
    LiftCheck {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// How many seeded maps to lift
        #[arg(long, default_value_t = 10)]
        count: u64,
    },
}

/// Everything a run depends on. Built once from the parsed command line;
/// dispatch consults nothing else, so identical configurations yield
/// identical artifacts.
struct RunConfig {
    command: Command,
    seed: u64,
    out: Option<PathBuf>,
    format: Option<Format>,
    budget: SearchBudget,
}

impl RunConfig {
    fn from_cli(cli: Cli) -> RunConfig {
        RunConfig {
            command: cli.command,
            seed: cli.seed,
            out: cli.out,
            format: cli.format,
            budget: SearchBudget {
                max_nodes: cli.max_nodes,
                max_time: Duration::from_secs(cli.max_seconds),
            },
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            process::exit(code);
        }
    };
    let config = RunConfig::from_cli(cli);
    match dispatch(config) {
        Ok(code) => process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            process::exit(EXIT_USAGE);
        }
    }
}

fn dispatch(config: RunConfig) -> Result<i32, String> {
    match &config.command {
        Command::Gen { .. } => run_gen(&config),
        Command::Construct { .. } => run_construct(&config),
        Command::Verify { .. } => run_verify(&config),
        Command::Descend { .. } => run_descend(&config),
        Command::Basecase { .. } => run_basecase(&config),
        Command::Tucker { .. } => run_tucker(&config),
        Command::Schedule { .. } => run_schedule(&config),
        Command::Sizes { .. } => run_sizes(&config),
    }
}

fn run_gen(config: &RunConfig) -> Result<i32, String> {
    let Command::Gen { what } = &config.command else { unreachable!() };
    pick_format(config.format, &[Format::Dimacs])?;
    let cnf = match *what {
        GenWhat::Kneser { n, k, m } => {
            let params = match m {
                Some(m) => InstanceParams::new(n, k, m),
                None => InstanceParams::standard(n, k),
            }
            .map_err(err_str)?;
            kneser_cnf_with(params).map_err(err_str)?
        }
        GenWhat::Tucker { n, k } => tucker_cnf(n, k).map_err(err_str)?,
    };
    emit(&config.out, &cnf.to_dimacs())?;
    Ok(EXIT_OK)
}

fn run_construct(config: &RunConfig) -> Result<i32, String> {
    let Command::Construct { what } = &config.command else { unreachable!() };
    pick_format(config.format, &[Format::Json])?;
    let coloring = match *what {
        ConstructWhat::C1 { n, k } => c1(n, k).map_err(err_str)?,
        ConstructWhat::Ck1 { n, k } => ck1(n, k).map_err(err_str)?,
        ConstructWhat::Greedy { n, k, m } => {
            let params = match m {
                Some(m) => InstanceParams::new(n, k, m),
                None => InstanceParams::chromatic(n, k),
            }
            .map_err(err_str)?;
            greedy_random(params, config.seed).map_err(err_str)?
        }
    };
    emit(&config.out, &coloring.to_json())?;
    Ok(EXIT_OK)
}

fn run_verify(config: &RunConfig) -> Result<i32, String> {
    let Command::Verify { what } = &config.command else { unreachable!() };
    match what {
        VerifyWhat::Coloring { input } => {
            let format = pick_format(config.format, &[Format::Text, Format::Json])?;
            let coloring = match Coloring::from_json(&read_file(input)?) {
                Ok(c) => c,
                Err(e) => return fail_check(config, &format!("invalid: {e}")),
            };
            let validation = coloring.validate();
            let report = coloring.star_report();
            let non_star: Vec<u32> = report
                .classes
                .iter()
                .filter(|c| !c.star_shaped)
                .map(|c| c.color)
                .collect();
            let code = if validation.is_proper() { EXIT_OK } else { EXIT_VIOLATION };
            match format {
                Format::Json => {
                    let p = coloring.params();
                    let value = serde_json::json!({
                        "n": p.n,
                        "k": p.k,
                        "m": p.m,
                        "validation": validation,
                        "non_star_classes": non_star,
                        "star_report": report,
                    });
                    emit(&config.out, &value.to_string())?;
                }
                _ => match &validation {
                    Validation::Proper => {
                        emit(
                            &config.out,
                            &format!(
                                "ok alpha={} non-star-classes={}",
                                report.alpha,
                                fmt_list(&non_star)
                            ),
                        )?;
                    }
                    Validation::Violation { s, t, color } => {
                        emit(
                            &config.out,
                            &format!(
                                "violation: disjoint vertices {} and {} share color {color}",
                                fmt_set(s),
                                fmt_set(t)
                            ),
                        )?;
                    }
                },
            }
            Ok(code)
        }
        VerifyWhat::Trace { input } => {
            pick_format(config.format, &[Format::Text])?;
            match ReductionTrace::from_json(&read_file(input)?) {
                Ok(trace) => {
                    let (fin_n, fin_m) = trace.sizes.last().copied().unwrap_or(trace.start);
                    emit(
                        &config.out,
                        &format!(
                            "ok start-n={} start-m={} steps={} final-n={fin_n} final-m={fin_m} stop={}",
                            trace.start.0,
                            trace.start.1,
                            trace.steps.len(),
                            fmt_stop(&trace.stop)
                        ),
                    )?;
                    Ok(EXIT_OK)
                }
                Err(e) => fail_check(config, &format!("invalid: {e}")),
            }
        }
        VerifyWhat::Map { input } => {
            pick_format(config.format, &[Format::Text])?;
            match AntipodalMap::from_json(&read_file(input)?) {
                Ok((ball, map)) => {
                    emit(
                        &config.out,
                        &format!(
                            "ok flavor={} n={} k={} elements={} orbits={} widened={}",
                            flavor_name(ball.flavor()),
                            ball.n(),
                            ball.k(),
                            ball.len(),
                            ball.orbit_count(),
                            map.widened()
                        ),
                    )?;
                    Ok(EXIT_OK)
                }
                Err(e) => fail_check(config, &format!("invalid: {e}")),
            }
        }
    }
}

fn run_descend(config: &RunConfig) -> Result<i32, String> {
    let Command::Descend { input, mode, full, threshold } = &config.command else {
        unreachable!()
    };
    let format = pick_format(config.format, &[Format::Json, Format::Text])?;
    let coloring = Coloring::from_json(&read_file(input)?).map_err(err_str)?;
    let mode = Mode::from(*mode);
    let threshold = if *full {
        *threshold
    } else {
        // One step: stop as soon as n has dropped by one step's discard count.
        let p = coloring.params();
        let d = match mode {
            Mode::Single => 1,
            Mode::Batch => batch_discard_count(p.n, p.k),
        };
        Some(p.n.saturating_sub(d))
    };
    let run = reduce_fully(&coloring, mode, threshold).map_err(err_str)?;
    let trace = &run.trace;
    match format {
        Format::Json => emit(&config.out, &trace.to_json())?,
        _ => {
            let mut lines = format!("start n={} m={}\n", trace.start.0, trace.start.1);
            for (step, &(n, m)) in trace.steps.iter().zip(&trace.sizes) {
                writeln!(
                    lines,
                    "discard colors={} nodes={} -> n={n} m={m}",
                    fmt_list(&step.discarded_colors),
                    fmt_list(&step.discarded_nodes)
                )
                .unwrap();
            }
            lines.push_str(&format!("stop={}\n", fmt_stop(&trace.stop)));
            emit(&config.out, &lines)?;
        }
    }
    Ok(match trace.stop {
        StopReason::Threshold { .. } => EXIT_OK,
        StopReason::StarShortfall { .. } => EXIT_VIOLATION,
    })
}

fn run_basecase(config: &RunConfig) -> Result<i32, String> {
    let Command::Basecase { k, n_max, no_symmetry } = &config.command else { unreachable!() };
    let format = pick_format(config.format, &[Format::Text, Format::Json])?;
    let options = SearchOptions { budget: config.budget, symmetry_breaking: !no_symmetry };
    let report = verify_base_cases(*k, *n_max, &options).map_err(err_str)?;
    match format {
        Format::Json => emit(&config.out, &report.to_json())?,
        _ => {
            let mut lines = String::new();
            for inst in &report.instances {
                let verdict = match &inst.verdict {
                    Verdict::Unsatisfiable => "unsatisfiable".to_string(),
                    Verdict::ColoringFound { colors } => {
                        format!("coloring-found colors={colors:?}")
                    }
                    Verdict::BudgetExceeded => "budget-exceeded".to_string(),
                };
                writeln!(
                    lines,
                    "n={} k={} m={} {verdict} nodes={}",
                    inst.n, inst.k, inst.m, inst.nodes_explored
                )
                .unwrap();
            }
            let found = report
                .instances
                .iter()
                .any(|i| matches!(i.verdict, Verdict::ColoringFound { .. }));
            let exceeded = report
                .instances
                .iter()
                .any(|i| matches!(i.verdict, Verdict::BudgetExceeded));
            lines.push_str(if found {
                "a base case admits a proper coloring\n"
            } else if exceeded {
                "budget exceeded before a verdict\n"
            } else {
                "all unsatisfiable\n"
            });
            emit(&config.out, &lines)?;
        }
    }
    let found = report
        .instances
        .iter()
        .any(|i| matches!(i.verdict, Verdict::ColoringFound { .. }));
    let exceeded = report
        .instances
        .iter()
        .any(|i| matches!(i.verdict, Verdict::BudgetExceeded));
    Ok(if found {
        EXIT_VIOLATION
    } else if exceeded {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

fn run_tucker(config: &RunConfig) -> Result<i32, String> {
    let Command::Tucker { what } = &config.command else { unreachable!() };
    let format = pick_format(config.format, &[Format::Text, Format::Json])?;
    match what {
        TuckerWhat::Exhaust { n, k } => {
            let ball = enumerate_ball(*n, *k, Flavor::Truncated).map_err(err_str)?;
            let pairs = related_pairs(&ball).map_err(err_str)?;
            let maps = AntipodalMap::enumerate_all(&ball).map_err(err_str)?;
            let without_pair: Vec<&AntipodalMap> = maps
                .iter()
                .filter(|map| find_k_complementary_among(&ball, map, &pairs).is_none())
                .collect();
            match format {
                Format::Json => {
                    let value = serde_json::json!({
                        "n": n,
                        "k": k,
                        "elements": ball.len(),
                        "orbits": ball.orbit_count(),
                        "maps": maps.len(),
                        "without_pair": without_pair
                            .iter()
                            .map(|m| m.rep_labels().to_vec())
                            .collect::<Vec<_>>(),
                    });
                    emit(&config.out, &value.to_string())?;
                }
                _ => {
                    let mut lines = format!(
                        "ball n={n} k={k} elements={} orbits={} maps={}\n",
                        ball.len(),
                        ball.orbit_count(),
                        maps.len()
                    );
                    if without_pair.is_empty() {
                        lines.push_str("all maps have a k-complementary pair\n");
                    } else {
                        for map in &without_pair {
                            writeln!(
                                lines,
                                "no k-complementary pair for rep-labels={:?}",
                                map.rep_labels()
                            )
                            .unwrap();
                        }
                    }
                    emit(&config.out, &lines)?;
                }
            }
            Ok(if without_pair.is_empty() { EXIT_OK } else { EXIT_VIOLATION })
        }
        TuckerWhat::Witness { n, k, count, coloring, emit_map } => match coloring {
            Some(path) => {
                let c = Coloring::from_json(&read_file(path)?).map_err(err_str)?;
                let p = c.params();
                if n.is_some_and(|v| v != p.n) || k.is_some_and(|v| v != p.k) {
                    return Err(format!(
                        "coloring file is an (n={}, k={}) instance; drop or match --n/--k",
                        p.n, p.k
                    ));
                }
                let ball = enumerate_ball(p.n, p.k, Flavor::Truncated).map_err(err_str)?;
                let order =
                    canonical_total_order(p.n, p.k, Flavor::Truncated).map_err(err_str)?;
                let map = lambda_from_coloring(&c, &ball, &order).map_err(err_str)?;
                if let Some(path) = emit_map {
                    write_map(path, &ball, &map)?;
                }
                let pair = find_k_complementary(&ball, &map).map_err(err_str)?;
                match format {
                    Format::Json => {
                        let value = serde_json::json!({
                            "mode": "coloring",
                            "n": p.n,
                            "k": p.k,
                            "m": p.m,
                            "widened": map.widened(),
                            "pair": pair.as_ref().map(|(a, b)| vec![pair_json(a), pair_json(b)]),
                        });
                        emit(&config.out, &value.to_string())?;
                    }
                    _ => {
                        let mut lines = format!(
                            "map from coloring n={} k={} m={} widened={}\n",
                            p.n,
                            p.k,
                            p.m,
                            map.widened()
                        );
                        match &pair {
                            None => lines.push_str("no k-complementary pair\n"),
                            Some((a, b)) => writeln!(
                                lines,
                                "k-complementary pair: {} and {}",
                                fmt_signed_pair(a),
                                fmt_signed_pair(b)
                            )
                            .unwrap(),
                        }
                        emit(&config.out, &lines)?;
                    }
                }
                // A proper coloring is expected to dodge complementarity, so
                // finding a pair is the reportable violation here.
                Ok(if pair.is_none() { EXIT_OK } else { EXIT_VIOLATION })
            }
            None => {
                let (Some(n), Some(k)) = (*n, *k) else {
                    return Err("--n and --k are required unless --coloring is given".into());
                };
                let ball = enumerate_ball(n, k, Flavor::Truncated).map_err(err_str)?;
                let pairs = related_pairs(&ball).map_err(err_str)?;
                let mut stream = SplitMix64::new(config.seed);
                let mut counterexample: Option<(u64, u64, AntipodalMap)> = None;
                for i in 0..*count {
                    let sub_seed = stream.next_u64();
                    let map = AntipodalMap::random(&ball, sub_seed);
                    if find_k_complementary_among(&ball, &map, &pairs).is_none() {
                        counterexample = Some((i, sub_seed, map));
                        break;
                    }
                }
                if let (Some(path), Some((_, _, map))) = (emit_map, &counterexample) {
                    write_map(path, &ball, map)?;
                }
                match format {
                    Format::Json => {
                        let value = serde_json::json!({
                            "mode": "seeded",
                            "n": n,
                            "k": k,
                            "seed": config.seed,
                            "count": count,
                            "counterexample": counterexample.as_ref().map(|(i, s, m)| {
                                serde_json::json!({
                                    "index": i,
                                    "seed": s,
                                    "rep_labels": m.rep_labels().to_vec(),
                                })
                            }),
                        });
                        emit(&config.out, &value.to_string())?;
                    }
                    _ => {
                        let lines = match &counterexample {
                            None => format!(
                                "checked {count} seeded maps on ball n={n} k={k} (seed {}); \
                                 all have a k-complementary pair\n",
                                config.seed
                            ),
                            Some((i, s, m)) => format!(
                                "map {i} (seed {s}) has no k-complementary pair: rep-labels={:?}\n",
                                m.rep_labels()
                            ),
                        };
                        emit(&config.out, &lines)?;
                    }
                }
                Ok(if counterexample.is_none() { EXIT_OK } else { EXIT_VIOLATION })
            }
        },
        TuckerWhat::LiftCheck { n, k, count } => {
            let trunc = enumerate_ball(*n, *k, Flavor::Truncated).map_err(err_str)?;
            let full = enumerate_ball(*n, *k, Flavor::Full).map_err(err_str)?;
            let order = canonical_total_order(*n, *k, Flavor::Full).map_err(err_str)?;
            let mut stream = SplitMix64::new(config.seed);
            let mut pairs_total = 0u64;
            let mut checked_total = 0u64;
            let mut violating = Vec::new();
            for i in 0..*count {
                let sub_seed = stream.next_u64();
                let map = AntipodalMap::random(&trunc, sub_seed);
                let lifted = lift_map(&trunc, &map, &full, &order).map_err(err_str)?;
                let report = check_lift_soundness(&trunc, &map, &full, &order, &lifted)
                    .map_err(err_str)?;
                pairs_total += report.complementary_pairs;
                checked_total += report.checked_projections;
                if !report.violations.is_empty() {
                    violating.push((i, sub_seed, report));
                }
            }
            match format {
                Format::Json => {
                    let value = serde_json::json!({
                        "n": n,
                        "k": k,
                        "seed": config.seed,
                        "maps": count,
                        "complementary_pairs": pairs_total,
                        "checked_projections": checked_total,
                        "violating_maps": violating.iter().map(|(i, s, r)| {
                            serde_json::json!({ "index": i, "seed": s, "report": r })
                        }).collect::<Vec<_>>(),
                    });
                    emit(&config.out, &value.to_string())?;
                }
                _ => {
                    let mut lines = format!(
                        "lifted {count} seeded maps from the truncated (n={n}, k={k}) ball \
                         to the full ball (seed {})\n",
                        config.seed
                    );
                    writeln!(
                        lines,
                        "complementary-pairs={pairs_total} checked-projections={checked_total} \
                         violations={}",
                        violating.iter().map(|(_, _, r)| r.violations.len()).sum::<usize>()
                    )
                    .unwrap();
                    for (i, s, r) in &violating {
                        writeln!(lines, "map {i} (seed {s}): {} violations", r.violations.len())
                            .unwrap();
                    }
                    emit(&config.out, &lines)?;
                }
            }
            Ok(if violating.is_empty() { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}

fn run_schedule(config: &RunConfig) -> Result<i32, String> {
    let Command::Schedule { n, k, beta } = &config.command else { unreachable!() };
    let format = pick_format(config.format, &[Format::Text, Format::Json])?;
    let beta: BigRational = beta
        .trim()
        .parse()
        .map_err(|_| format!("beta must be an exact rational like 1/2, got {beta:?}"))?;
    let sizes = schedule(*n, *k, &beta).map_err(err_str)?;
    match format {
        Format::Json => {
            emit(&config.out, &serde_json::to_string(&sizes).expect("u64 list serializes"))?
        }
        _ => {
            let mut lines = String::new();
            for s in &sizes {
                writeln!(lines, "{s}").unwrap();
            }
            emit(&config.out, &lines)?;
        }
    }
    Ok(EXIT_OK)
}

fn run_sizes(config: &RunConfig) -> Result<i32, String> {
    let Command::Sizes { k, n_list, variant } = &config.command else { unreachable!() };
    let format = pick_format(config.format, &[Format::Csv, Format::Json])?;
    let variant: Variant = variant.parse().map_err(err_str)?;
    let report = size_report(*k, n_list, variant).map_err(err_str)?;
    let content = match format {
        Format::Json => report.to_json(),
        _ => report.to_csv(),
    };
    emit(&config.out, &content)?;
    Ok(EXIT_OK)
}

/// Report a failed artifact check on the normal output channel and signal it
/// through the exit code.
fn fail_check(config: &RunConfig, message: &str) -> Result<i32, String> {
    emit(&config.out, message)?;
    Ok(EXIT_VIOLATION)
}

fn pick_format(requested: Option<Format>, allowed: &[Format]) -> Result<Format, String> {
    match requested {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => {
            let names: Vec<String> = allowed.iter().map(|a| a.to_string()).collect();
            Err(format!("format {f} is not available here; choose from {}", names.join(", ")))
        }
    }
}

/// Single output path for every artifact: identical bytes go to the file or
/// to stdout, always ending in exactly one newline.
fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    let mut text = content.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, &text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, String> {
    fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write_map(path: &Path, ball: &kneser::tucker::Ball, map: &AntipodalMap) -> Result<(), String> {
    let json = map.to_json(ball).map_err(err_str)?;
    emit(&Some(path.to_path_buf()), &json)
}

fn err_str(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn fmt_list(xs: &[u32]) -> String {
    let body: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", body.join(","))
}

fn fmt_set(xs: &[u32]) -> String {
    let body: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", body.join(","))
}

fn fmt_signed_pair(p: &SignedPair) -> String {
    format!("({}|{})", fmt_set(&p.a), fmt_set(&p.b))
}

fn fmt_stop(stop: &StopReason) -> String {
    match stop {
        StopReason::Threshold { limit } => format!("threshold(limit={limit})"),
        StopReason::StarShortfall { needed, alpha } => {
            format!("star-shortfall(needed={needed},alpha={alpha})")
        }
    }
}

fn flavor_name(f: Flavor) -> &'static str {
    match f {
        Flavor::Truncated => "truncated",
        Flavor::Full => "full",
    }
}

fn pair_json(p: &SignedPair) -> serde_json::Value {
    serde_json::json!({ "a": p.a, "b": p.b })
}
