//! Command-line front end. [`run`] takes the argument list and two sinks and
//! returns the process exit code; all output is written once, at the end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::csv_format::{assignment_to_csv, parse_assignment, parse_availability, problem_to_csv};
use crate::impossibility::{
    build_witness, search_witness_g2, verify_no_fair_ef, SearchBounds, WitnessReport,
};
use crate::model::{
    envy_report, g_vector, games_per_player, is_feasible, max_total_games, EnvyReport, Feasibility,
    Problem,
};
use crate::oracle::{count_efficient, enumerate_efficient, EnumerationBudget};
use crate::reduce::reduce;
use crate::solver::{solve_fair, TieBreakPolicy};

pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const FLAG: i32 = 3;
    pub const INFEASIBLE: i32 = 4;
    pub const EXHAUSTED: i32 = 5;
    pub const INCONCLUSIVE: i32 = 6;
}

/// Default `--bounds` for the pair-sport witness search.
pub const DEFAULT_G2_BOUNDS: (usize, usize) = (5, 7);

#[derive(Debug, Parser)]
#[command(
    name = "qsport",
    version,
    about = "Fair group-sport scheduling from availability tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum TieBreakArg {
    #[default]
    Lex,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum SolveFormat {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum EnumerateFormat {
    #[default]
    Count,
    Stream,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Drop days that cannot host a game and players left without a day.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        group_size: usize,
        /// Write the reduced table here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compute a fair assignment.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        group_size: usize,
        #[arg(long, value_enum, default_value_t)]
        tie_break: TieBreakArg,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: SolveFormat,
    },
    /// Audit an assignment: feasibility, efficiency, G-vector and strong envy.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long)]
        group_size: usize,
    },
    /// Demonstrate that efficiency and strong envy-freeness can be incompatible.
    Verify {
        #[arg(long)]
        group_size: usize,
        /// Largest players,days for the group size 2 search.
        #[arg(long, value_parser = parse_bounds)]
        bounds: Option<(usize, usize)>,
        /// Maximum efficient assignments enumerated per instance.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Count or list the efficient assignments.
    Enumerate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        group_size: usize,
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: EnumerateFormat,
    },
}

fn parse_bounds(s: &str) -> Result<(usize, usize), String> {
    let (n, m) = s
        .split_once(',')
        .ok_or_else(|| format!("expected PLAYERS,DAYS, got {s:?}"))?;
    let n: usize = n.trim().parse().map_err(|e| format!("players: {e}"))?;
    let m: usize = m.trim().parse().map_err(|e| format!("days: {e}"))?;
    if n < 1 || !(1..=16).contains(&m) {
        return Err("bounds must be at least 1, with at most 16 days".into());
    }
    Ok((n, m))
}

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Outcome {
    fn new() -> Self {
        Self {
            code: exit::OK,
            stdout: String::new(),
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let outcome = match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli.command),
        Err(e) => {
            let code = if e.use_stderr() {
                exit::INPUT
            } else {
                exit::OK
            };
            let text = e.render().to_string();
            let mut o = Outcome::new();
            o.code = code;
            if e.use_stderr() {
                o.stderr = text;
            } else {
                o.stdout = text;
            }
            o
        }
    };
    // Sinks that fail (closed pipes) have nowhere to report to.
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stderr.write_all(outcome.stderr.as_bytes());
    let _ = stdout.flush();
    outcome.code
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Reduce {
            input,
            group_size,
            output,
        } => cmd_reduce(&input, group_size, output.as_deref()),
        Command::Solve {
            input,
            group_size,
            tie_break,
            seed,
            format,
        } => cmd_solve(&input, group_size, tie_break, seed, format),
        Command::Check {
            input,
            assignment,
            group_size,
        } => cmd_check(&input, &assignment, group_size),
        Command::Verify {
            group_size,
            bounds,
            budget,
        } => cmd_verify(group_size, bounds, budget),
        Command::Enumerate {
            input,
            group_size,
            limit,
            format,
        } => cmd_enumerate(&input, group_size, limit, format),
    }
}

fn read_text(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(exit::INPUT, format!("cannot read {}: {e}", path.display())))
}

fn load_problem(path: &Path, group_size: usize) -> Result<Problem, Outcome> {
    let text = read_text(path)?;
    parse_availability(&text, group_size)
        .map_err(|e| Outcome::fail(exit::INPUT, format!("{}: {e}", path.display())))
}

macro_rules! try_outcome {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(outcome) => return outcome,
        }
    };
}

fn cmd_reduce(input: &Path, group_size: usize, output: Option<&Path>) -> Outcome {
    let p = try_outcome!(load_problem(input, group_size));
    let r = reduce(&p);
    let mut o = Outcome::new();
    for round in 1..=r.log.rounds {
        for (_, day) in r.log.removed_days.iter().filter(|(k, _)| *k == round) {
            let _ = writeln!(o.stderr, "round {round}: removed day {day}");
        }
        for (_, player) in r.log.removed_players.iter().filter(|(k, _)| *k == round) {
            let _ = writeln!(o.stderr, "round {round}: removed player {player}");
        }
    }
    if r.is_empty() {
        let _ = writeln!(o.stderr, "reduced problem is empty: no day can host a game");
    }
    let csv = problem_to_csv(&r.problem);
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, csv) {
                return Outcome::fail(exit::INPUT, format!("cannot write {}: {e}", path.display()));
            }
        }
        None => o.stdout = csv,
    }
    o
}

#[derive(Serialize)]
struct EnvyJson<'a> {
    envied: &'a str,
    envied_availability: usize,
    envied_games: usize,
    envious: &'a str,
    envious_availability: usize,
    envious_games: usize,
}

/// Fields in alphabetical order.
#[derive(Serialize)]
struct SolveJson<'a> {
    days: &'a [String],
    envy_pairs: Vec<EnvyJson<'a>>,
    g_vector: &'a [usize],
    games_per_player: Vec<usize>,
    matrix: Vec<Vec<u8>>,
    players: &'a [String],
    total_games: usize,
}

fn envy_json(report: &EnvyReport) -> Vec<EnvyJson<'_>> {
    report
        .pairs
        .iter()
        .map(|p| EnvyJson {
            envied: &p.envied,
            envied_availability: p.envied_availability,
            envied_games: p.envied_games,
            envious: &p.envious,
            envious_availability: p.envious_availability,
            envious_games: p.envious_games,
        })
        .collect()
}

fn write_envy(out: &mut String, report: &EnvyReport) {
    let _ = writeln!(out, "strong envy pairs: {}", report.len());
    for p in &report.pairs {
        let _ = writeln!(
            out,
            "  {} (availability {}, games {}) envies {} (availability {}, games {})",
            p.envious,
            p.envious_availability,
            p.envious_games,
            p.envied,
            p.envied_availability,
            p.envied_games
        );
    }
}

fn cmd_solve(
    input: &Path,
    group_size: usize,
    tie_break: TieBreakArg,
    seed: Option<u64>,
    format: SolveFormat,
) -> Outcome {
    let policy = match (tie_break, seed) {
        (TieBreakArg::Lex, _) => TieBreakPolicy::DeterministicLex,
        (TieBreakArg::Random, Some(seed)) => TieBreakPolicy::SeededRandom { seed },
        (TieBreakArg::Random, None) => {
            return Outcome::fail(exit::FLAG, "--tie-break random requires --seed");
        }
    };
    let p = try_outcome!(load_problem(input, group_size));
    let report = solve_fair(&p, policy);
    let reduction = reduce(&p);
    let core_x = reduction.restrict(&report.assignment);
    let core_g = g_vector(&core_x);
    let envy = envy_report(&core_x, &reduction.problem).expect("solver output is feasible");
    let games = games_per_player(&report.assignment);

    let mut o = Outcome::new();
    match format {
        SolveFormat::Json => {
            let doc = SolveJson {
                days: p.days(),
                envy_pairs: envy_json(&envy),
                g_vector: core_g.counts(),
                games_per_player: games,
                matrix: report.assignment.matrix().to_u8_rows(),
                players: p.players(),
                total_games: report.total_games,
            };
            o.stdout = serde_json::to_string_pretty(&doc).expect("plain data serializes");
            o.stdout.push('\n');
        }
        SolveFormat::Table => {
            let out = &mut o.stdout;
            for (k, day) in p.days().iter().enumerate() {
                let roster = report.assignment.day_roster(k);
                if roster.is_empty() {
                    let _ = writeln!(out, "{day}: no games");
                    continue;
                }
                let matches: Vec<String> = roster
                    .chunks(group_size)
                    .map(|c| {
                        let names: Vec<&str> = c.iter().map(|&i| p.players()[i].as_str()).collect();
                        format!("[{}]", names.join(", "))
                    })
                    .collect();
                let _ = writeln!(out, "{day}: {}", matches.join(" "));
            }
            let _ = writeln!(out, "games per player:");
            for (name, n) in p.players().iter().zip(&games) {
                let _ = writeln!(out, "  {name}: {n}");
            }
            let _ = writeln!(out, "g_vector: {core_g}");
            let _ = writeln!(out, "total games: {}", report.total_games);
            write_envy(out, &envy);
        }
    }
    o
}

fn cmd_check(input: &Path, assignment: &Path, group_size: usize) -> Outcome {
    let p = try_outcome!(load_problem(input, group_size));
    let text = try_outcome!(read_text(assignment));
    let x = match parse_assignment(&text, &p) {
        Ok(x) => x,
        Err(e) => return Outcome::fail(exit::INPUT, format!("{}: {e}", assignment.display())),
    };
    let mut o = Outcome::new();
    let feasibility = is_feasible(&x, &p).expect("shapes checked while parsing");
    if let Feasibility::Infeasible(v) = feasibility {
        let _ = writeln!(o.stdout, "feasible: no ({})", v.describe(&p));
        o.code = exit::INFEASIBLE;
        return o;
    }
    // Feasible assignments are zero outside the irreducible core.
    let reduction = reduce(&p);
    let core = &reduction.problem;
    let core_x = reduction.restrict(&x);
    let games = core_x.total_slots() / group_size;
    let best = max_total_games(core);
    let _ = writeln!(o.stdout, "feasible: yes");
    let _ = writeln!(
        o.stdout,
        "efficient: {} ({games} of {best} games)",
        if games == best { "yes" } else { "no" }
    );
    let _ = writeln!(o.stdout, "g_vector: {}", g_vector(&core_x));
    let envy = envy_report(&core_x, core).expect("feasible on the core");
    write_envy(&mut o.stdout, &envy);
    o
}

fn write_report(out: &mut String, report: &WitnessReport) {
    let _ = writeln!(out, "group_size: {}", report.group_size);
    let _ = writeln!(
        out,
        "players: {}, days: {}",
        report.problem.num_players(),
        report.problem.num_days()
    );
    let _ = writeln!(out, "efficient_count: {}", report.efficient_count);
    let _ = writeln!(out, "ef_found: {}", report.ef_found);
    let _ = writeln!(out, "min_envy_pairs: {}", report.min_envy_pairs);
}

fn cmd_verify(group_size: usize, bounds: Option<(usize, usize)>, budget: Option<u64>) -> Outcome {
    if group_size < 2 {
        return Outcome::fail(
            exit::INPUT,
            format!("group size must be at least 2, got {group_size}"),
        );
    }
    let budget = match budget {
        Some(0) => return Outcome::fail(exit::INPUT, "--budget must be at least 1"),
        Some(b) => EnumerationBudget::error_after(b),
        None => EnumerationBudget::default(),
    };
    let mut o = Outcome::new();
    if group_size >= 3 {
        let p = build_witness(group_size).expect("group size checked");
        match verify_no_fair_ef(&p, budget) {
            Err(e) => return Outcome::fail(exit::INCONCLUSIVE, e),
            Ok(report) => {
                let _ = write!(o.stdout, "{}", problem_to_csv(&p));
                write_report(&mut o.stdout, &report);
                if report.ef_found {
                    let _ = writeln!(o.stdout, "impossibility NOT demonstrated");
                    o.code = exit::INTERNAL;
                } else {
                    let _ = writeln!(
                        o.stdout,
                        "impossibility demonstrated: no efficient assignment is strongly envy-free"
                    );
                }
            }
        }
        return o;
    }

    let (max_players, max_days) = bounds.unwrap_or(DEFAULT_G2_BOUNDS);
    let search = SearchBounds {
        per_instance_budget: budget,
        ..SearchBounds::new(max_players, max_days)
    };
    let outcome = search_witness_g2(&search);
    let _ = writeln!(
        o.stdout,
        "searched irreducible group size 2 problems up to {max_players} players x {max_days} days, one per row/column permutation class"
    );
    let _ = writeln!(
        o.stdout,
        "instances examined: {}",
        outcome.instances_examined
    );
    let _ = writeln!(o.stdout, "inconclusive instances: {}", outcome.inconclusive);
    match outcome.witness {
        Some((p, report)) => {
            let _ = write!(o.stdout, "{}", problem_to_csv(&p));
            write_report(&mut o.stdout, &report);
            let _ = writeln!(
                o.stdout,
                "impossibility demonstrated: no efficient assignment is strongly envy-free"
            );
        }
        None if outcome.inconclusive > 0 => {
            let _ = writeln!(
                o.stdout,
                "no witness found, but some instances exceeded the budget"
            );
            o.code = exit::INCONCLUSIVE;
        }
        None => {
            let _ = writeln!(o.stdout, "search exhausted: no witness within these bounds");
            o.code = exit::EXHAUSTED;
        }
    }
    o
}

fn cmd_enumerate(
    input: &Path,
    group_size: usize,
    limit: Option<u64>,
    format: EnumerateFormat,
) -> Outcome {
    let limit = match limit {
        Some(0) => return Outcome::fail(exit::INPUT, "--limit must be at least 1"),
        Some(l) => l,
        None => EnumerationBudget::DEFAULT_MAX,
    };
    let p = try_outcome!(load_problem(input, group_size));
    let reduction = reduce(&p);
    let core = &reduction.problem;
    let mut o = Outcome::new();
    match format {
        EnumerateFormat::Count => match count_efficient(core) {
            Ok(count) if count <= limit => {
                let _ = writeln!(o.stdout, "{count}");
            }
            Ok(count) => {
                return Outcome::fail(
                    exit::INCONCLUSIVE,
                    format!("{count} efficient assignments exceed the limit of {limit}"),
                )
            }
            Err(e) => return Outcome::fail(exit::INCONCLUSIVE, e),
        },
        EnumerateFormat::Stream => {
            let mut first = true;
            let mut stream = enumerate_efficient(core, EnumerationBudget::truncate_after(limit));
            for x in stream.by_ref() {
                let x = x.expect("truncating budget never errors");
                if !first {
                    o.stdout.push('\n');
                }
                first = false;
                o.stdout
                    .push_str(&assignment_to_csv(&reduction.extend(&x), &p));
            }
            if stream.truncated() {
                let _ = writeln!(o.stderr, "stopped after {limit} assignments");
            }
        }
    }
    o
}
