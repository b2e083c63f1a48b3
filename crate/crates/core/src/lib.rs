//! Exact fair scheduling for group sports from binary availability tables.
//!
//! A [`Problem`] says which players can play on which days and how many
//! players a game needs. An [`Assignment`] says who plays when. The crate
//! computes assignments that maximise the number of games and, among those,
//! the number of players with at least one game, then at least two, and so on
//! ([`solve_fair`]); audits assignments for strong envy, where a more available
//! player gets fewer games than a less available one ([`envy_report`]); and
//! certifies by exhaustive enumeration that some instances admit no efficient
//! assignment without strong envy ([`verify_no_fair_ef`]).

pub mod cli;
pub mod csv_format;
mod enumerate;
pub mod fixtures;
mod flow;
pub mod impossibility;
pub mod model;
pub mod oracle;
pub mod reduce;
pub mod solver;

pub use impossibility::{
    build_table2, build_witness, search_witness_g2, verify_no_fair_ef, ImpossibilityError,
    SearchBounds, SearchOutcome, WitnessReport,
};
pub use model::{
    compare_fairness, envy_report, g_vector, games_per_player, is_efficient, is_feasible,
    max_total_games, validate_problem, Assignment, BitMatrix, EnvyPair, EnvyReport, FairnessOrder,
    Feasibility, GVector, ModelError, Problem, ProblemError, Violation,
};
pub use oracle::{
    brute_force_fair, count_efficient, enumerate_efficient, exists_efficient_strongly_ef,
    misreport_scan, EnumerationBudget, MisreportFinding, OnExceed, OracleError,
};
pub use reduce::{is_irreducible, reduce, Reduction, ReductionLog};
pub use solver::{solve_efficient, solve_fair, SolveReport, StageResult, TieBreakPolicy};
