//! Brute-force ground truth for desk-scale instances.
//!
//! Everything here enumerates efficient assignments one day-combination at a
//! time (see [`enumerate_efficient`]) and is meant as an independent check on
//! the flow-based solver, not as a production path.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::enumerate::{binomial, EfficientCursor};
use crate::model::{count_envy_pairs, Assignment, GVector, Problem};
use crate::solver::{solve_fair, TieBreakPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnExceed {
    Error,
    TruncateWithFlag,
}

/// Cap on the number of assignments an enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_assignments: u64,
    pub on_exceed: OnExceed,
}

impl EnumerationBudget {
    pub const DEFAULT_MAX: u64 = 10_000_000;

    pub fn new(max_assignments: u64, on_exceed: OnExceed) -> Self {
        assert!(max_assignments >= 1, "budget cap must be at least 1");
        Self {
            max_assignments,
            on_exceed,
        }
    }

    pub fn error_after(max_assignments: u64) -> Self {
        Self::new(max_assignments, OnExceed::Error)
    }

    pub fn truncate_after(max_assignments: u64) -> Self {
        Self::new(max_assignments, OnExceed::TruncateWithFlag)
    }
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self::error_after(Self::DEFAULT_MAX)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration budget of {cap} assignments exceeded")]
    BudgetExceeded { cap: u64 },
    #[error("number of efficient assignments does not fit in 64 bits")]
    CountOverflow,
    #[error("unknown player {0:?}")]
    UnknownPlayer(String),
    #[error(
        "misreport scans need the deterministic tie-break; random gains would depend on the seed"
    )]
    RandomTieBreak,
}

/// Number of efficient assignments: the product over days of
/// `C(avail_k, g * floor(avail_k / g))`. Zero for the empty problem.
pub fn count_efficient(p: &Problem) -> Result<u64, OracleError> {
    if p.is_empty() {
        return Ok(0);
    }
    let totals = p.day_totals();
    let slots = p.efficient_slots();
    totals.iter().zip(&slots).try_fold(1u64, |acc, (&a, &s)| {
        binomial(a as u64, s as u64)
            .and_then(|c| acc.checked_mul(c))
            .ok_or(OracleError::CountOverflow)
    })
}

/// Stream of efficient assignments in odometer order: each day's players are
/// chosen in lexicographic order of index, and the last day varies fastest.
pub struct EfficientAssignments {
    cursor: Option<EfficientCursor>,
    budget: EnumerationBudget,
    yielded: u64,
    truncated: bool,
}

impl EfficientAssignments {
    /// True once the stream stopped early because of a truncating budget.
    pub fn truncated(&self) -> bool {
        self.truncated
    }
}

impl Iterator for EfficientAssignments {
    type Item = Result<Assignment, OracleError>;

    fn next(&mut self) -> Option<Self::Item> {
        let cursor = self.cursor.as_mut()?;
        if self.yielded == self.budget.max_assignments {
            self.cursor = None;
            return match self.budget.on_exceed {
                OnExceed::Error => Some(Err(OracleError::BudgetExceeded {
                    cap: self.budget.max_assignments,
                })),
                OnExceed::TruncateWithFlag => {
                    self.truncated = true;
                    None
                }
            };
        }
        let x = cursor.assignment();
        self.yielded += 1;
        if !cursor.advance() {
            self.cursor = None;
        }
        Some(Ok(x))
    }
}

/// Yields each efficient assignment of `p` exactly once. An empty problem gives
/// an empty stream.
pub fn enumerate_efficient(p: &Problem, budget: EnumerationBudget) -> EfficientAssignments {
    EfficientAssignments {
        cursor: EfficientCursor::new(p),
        budget,
        yielded: 0,
        truncated: false,
    }
}

/// Visits every efficient assignment's game vector, refusing up front when the
/// count exceeds the budget. Returns the number visited.
pub(crate) fn scan_efficient<F>(
    p: &Problem,
    budget: EnumerationBudget,
    mut visit: F,
) -> Result<u64, OracleError>
where
    F: FnMut(&[usize], &dyn Fn() -> Assignment) -> ControlFlow<()>,
{
    let total = count_efficient(p)?;
    if total > budget.max_assignments {
        return Err(OracleError::BudgetExceeded {
            cap: budget.max_assignments,
        });
    }
    let Some(mut cursor) = EfficientCursor::new(p) else {
        return Ok(0);
    };
    let mut visited = 0;
    loop {
        visited += 1;
        let flow = {
            let snapshot = || cursor.assignment();
            visit(cursor.games(), &snapshot)
        };
        if flow.is_break() || !cursor.advance() {
            return Ok(visited);
        }
    }
}

/// Lexicographically maximal G-vector over all efficient assignments, with the
/// first assignment in enumeration order that attains it.
///
/// Budgets are always enforced as errors here; a truncated scan cannot certify
/// a maximum.
pub fn brute_force_fair(
    p: &Problem,
    budget: EnumerationBudget,
) -> Result<(GVector, Assignment), OracleError> {
    let width = p.num_days();
    let mut best: Option<(GVector, Assignment)> = None;
    scan_efficient(p, budget, |games, snapshot| {
        let g = GVector::from_games(games, width);
        let better = best.as_ref().is_none_or(|(b, _)| g.fairness_cmp(b).is_gt());
        if better {
            best = Some((g, snapshot()));
        }
        ControlFlow::Continue(())
    })?;
    Ok(best.unwrap_or_else(|| {
        (
            GVector::new(vec![0; width]),
            Assignment::zeros(p.num_players(), width),
        )
    }))
}

/// First efficient assignment (in enumeration order) with no strong envy.
pub fn exists_efficient_strongly_ef(
    p: &Problem,
    budget: EnumerationBudget,
) -> Result<Option<Assignment>, OracleError> {
    let avail = p.availability_counts();
    let mut found = None;
    scan_efficient(p, budget, |games, snapshot| {
        if count_envy_pairs(&avail, games) == 0 {
            found = Some(snapshot());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

/// Outcome of one player under-reporting their availability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisreportFinding {
    pub player: String,
    pub true_row: Vec<bool>,
    /// Entrywise at most `true_row`, and never equal to it.
    pub reported_row: Vec<bool>,
    pub games_truthful: usize,
    pub games_misreport: usize,
    pub gain: i64,
}

/// Re-solves the problem for every strict sub-report of `player`'s true
/// availability (including reporting nothing) and records how many games the
/// player ends up with, judged against the truthful solve.
///
/// Findings are sorted by gain, largest first, then by reported row with 0 < 1.
pub fn misreport_scan(
    p: &Problem,
    player: &str,
    tie_break: TieBreakPolicy,
) -> Result<Vec<MisreportFinding>, OracleError> {
    if tie_break != TieBreakPolicy::DeterministicLex {
        return Err(OracleError::RandomTieBreak);
    }
    let i = p
        .player_index(player)
        .ok_or_else(|| OracleError::UnknownPlayer(player.to_string()))?;
    let true_row: Vec<bool> = p.availability().row(i).to_vec();
    let available: Vec<usize> = (0..p.num_days()).filter(|&k| true_row[k]).collect();
    let games_of = |q: &Problem| {
        let x = solve_fair(q, tie_break).assignment;
        x.matrix().row_sum(i)
    };
    let games_truthful = games_of(p);

    let full_mask = (1u64 << available.len()) - 1;
    let mut findings: Vec<MisreportFinding> = (0..full_mask)
        .map(|mask| {
            let mut reported_row = vec![false; p.num_days()];
            for (bit, &k) in available.iter().enumerate() {
                reported_row[k] = mask >> bit & 1 == 1;
            }
            let games_misreport = games_of(&p.with_player_row(i, &reported_row));
            MisreportFinding {
                player: player.to_string(),
                true_row: true_row.clone(),
                reported_row,
                games_truthful,
                games_misreport,
                gain: games_misreport as i64 - games_truthful as i64,
            }
        })
        .collect();
    findings.sort_by(|a, b| {
        b.gain
            .cmp(&a.gain)
            .then_with(|| a.reported_row.cmp(&b.reported_row))
    });
    Ok(findings)
}
