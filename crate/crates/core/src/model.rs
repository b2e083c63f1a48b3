//! Availability problems, assignments, and the predicates that judge them:
//! feasibility, efficiency, the fairness vector and strong envy.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Dense row-major binary matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<bool>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            cells: vec![false; rows * cols],
        }
    }

    /// Builds a matrix from boolean rows. All rows must have length `cols`.
    pub fn from_bool_rows(rows: &[Vec<bool>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            m.cells[i * cols..(i + 1) * cols].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.cells[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[bool] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn row_sum(&self, row: usize) -> usize {
        self.row(row).iter().filter(|&&b| b).count()
    }

    pub fn col_sum(&self, col: usize) -> usize {
        (0..self.rows).filter(|&i| self.get(i, col)).count()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.rows).map(|i| self.row_sum(i)).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.cols).map(|k| self.col_sum(k)).collect()
    }

    pub fn total(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn to_u8_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&b| u8::from(b)).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameKind {
    Player,
    Day,
}

impl fmt::Display for NameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NameKind::Player => f.write_str("player"),
            NameKind::Day => f.write_str("day"),
        }
    }
}

/// Reasons a raw availability table is rejected. Row and column indices are 0-based.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("group size must be at least 2, got {0}")]
    GroupSizeTooSmall(usize),
    #[error("a problem needs at least one player")]
    NoPlayers,
    #[error("a problem needs at least one day")]
    NoDays,
    #[error("empty {kind} name at position {index}")]
    EmptyName { kind: NameKind, index: usize },
    #[error("duplicate {kind} name {name:?} at positions {first} and {second}")]
    DuplicateName {
        kind: NameKind,
        name: String,
        first: usize,
        second: usize,
    },
    #[error("dimension mismatch: {expected} players but {found} matrix rows")]
    RowCountMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: row {row} has {found} cells, expected {expected}")]
    ColumnCountMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-binary entry {value} at row {row}, column {col}")]
    NonBinary { row: usize, col: usize, value: i64 },
}

/// Named players by named days availability table together with the group size
/// `g` every game needs.
///
/// Raw tables need not be irreducible. The only way to obtain a problem with
/// zero players or days is [`reduce`](crate::reduce::reduce).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    players: Vec<String>,
    days: Vec<String>,
    avail: BitMatrix,
    group_size: usize,
}

/// Checks every invariant of [`Problem`] and builds it.
pub fn validate_problem(
    players: Vec<String>,
    days: Vec<String>,
    matrix: &[Vec<i64>],
    group_size: usize,
) -> Result<Problem, ProblemError> {
    if group_size < 2 {
        return Err(ProblemError::GroupSizeTooSmall(group_size));
    }
    if players.is_empty() {
        return Err(ProblemError::NoPlayers);
    }
    if days.is_empty() {
        return Err(ProblemError::NoDays);
    }
    check_names(&players, NameKind::Player)?;
    check_names(&days, NameKind::Day)?;
    if matrix.len() != players.len() {
        return Err(ProblemError::RowCountMismatch {
            expected: players.len(),
            found: matrix.len(),
        });
    }
    let mut avail = BitMatrix::zeros(players.len(), days.len());
    for (row, cells) in matrix.iter().enumerate() {
        if cells.len() != days.len() {
            return Err(ProblemError::ColumnCountMismatch {
                row,
                expected: days.len(),
                found: cells.len(),
            });
        }
        for (col, &value) in cells.iter().enumerate() {
            match value {
                0 => {}
                1 => avail.set(row, col, true),
                _ => return Err(ProblemError::NonBinary { row, col, value }),
            }
        }
    }
    Ok(Problem {
        players,
        days,
        avail,
        group_size,
    })
}

fn check_names(names: &[String], kind: NameKind) -> Result<(), ProblemError> {
    let mut seen: HashMap<&str, usize> = HashMap::with_capacity(names.len());
    for (index, name) in names.iter().enumerate() {
        if name.is_empty() {
            return Err(ProblemError::EmptyName { kind, index });
        }
        if let Some(&first) = seen.get(name.as_str()) {
            return Err(ProblemError::DuplicateName {
                kind,
                name: name.clone(),
                first,
                second: index,
            });
        }
        seen.insert(name, index);
    }
    Ok(())
}

impl Problem {
    /// Convenience constructor over 0/1 rows.
    pub fn from_rows(
        players: &[&str],
        days: &[&str],
        rows: &[&[u8]],
        group_size: usize,
    ) -> Result<Self, ProblemError> {
        let matrix: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| i64::from(v)).collect())
            .collect();
        validate_problem(
            players.iter().map(|s| s.to_string()).collect(),
            days.iter().map(|s| s.to_string()).collect(),
            &matrix,
            group_size,
        )
    }

    /// Builds a problem whose names are already known to be valid.
    pub(crate) fn from_parts(
        players: Vec<String>,
        days: Vec<String>,
        avail: BitMatrix,
        group_size: usize,
    ) -> Self {
        debug_assert_eq!(avail.rows(), players.len());
        debug_assert_eq!(avail.cols(), days.len());
        Self {
            players,
            days,
            avail,
            group_size,
        }
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn days(&self) -> &[String] {
        &self.days
    }

    pub fn availability(&self) -> &BitMatrix {
        &self.avail
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn num_days(&self) -> usize {
        self.days.len()
    }

    /// True when there is nothing left to schedule (no players or no days).
    pub fn is_empty(&self) -> bool {
        self.players.is_empty() || self.days.is_empty()
    }

    #[inline]
    pub fn is_available(&self, player: usize, day: usize) -> bool {
        self.avail.get(player, day)
    }

    /// Number of available days per player.
    pub fn availability_counts(&self) -> Vec<usize> {
        self.avail.row_sums()
    }

    /// Number of available players per day.
    pub fn day_totals(&self) -> Vec<usize> {
        self.avail.col_sums()
    }

    /// Player slots each day holds in an efficient assignment: `g * floor(avail_k / g)`.
    pub fn efficient_slots(&self) -> Vec<usize> {
        let g = self.group_size;
        self.day_totals().into_iter().map(|a| g * (a / g)).collect()
    }

    pub fn player_index(&self, name: &str) -> Option<usize> {
        self.players.iter().position(|p| p == name)
    }

    pub fn day_index(&self, label: &str) -> Option<usize> {
        self.days.iter().position(|d| d == label)
    }

    /// Same problem with one player's availability row replaced.
    pub fn with_player_row(&self, player: usize, row: &[bool]) -> Self {
        assert_eq!(row.len(), self.num_days());
        let mut avail = self.avail.clone();
        for (k, &v) in row.iter().enumerate() {
            avail.set(player, k, v);
        }
        Self {
            avail,
            ..self.clone()
        }
    }
}

/// Binary play matrix aligned index-for-index with a [`Problem`].
///
/// Nothing about feasibility is enforced at construction; see [`is_feasible`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    matrix: BitMatrix,
}

impl Assignment {
    pub fn zeros(players: usize, days: usize) -> Self {
        Self {
            matrix: BitMatrix::zeros(players, days),
        }
    }

    pub fn from_matrix(matrix: BitMatrix) -> Self {
        Self { matrix }
    }

    /// Builds from 0/1 rows; any other value panics.
    pub fn from_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let bools: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| match v {
                        0 => false,
                        1 => true,
                        _ => panic!("non-binary entry {v}"),
                    })
                    .collect()
            })
            .collect();
        Self::from_matrix(BitMatrix::from_bool_rows(&bools, cols))
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn num_players(&self) -> usize {
        self.matrix.rows()
    }

    pub fn num_days(&self) -> usize {
        self.matrix.cols()
    }

    #[inline]
    pub fn plays(&self, player: usize, day: usize) -> bool {
        self.matrix.get(player, day)
    }

    pub fn set(&mut self, player: usize, day: usize, plays: bool) {
        self.matrix.set(player, day, plays);
    }

    /// Total assigned player slots.
    pub fn total_slots(&self) -> usize {
        self.matrix.total()
    }

    /// Players assigned on a day, in player order.
    pub fn day_roster(&self, day: usize) -> Vec<usize> {
        (0..self.num_players())
            .filter(|&i| self.plays(i, day))
            .collect()
    }
}

/// Which constraint an assignment breaks first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// A player is scheduled on a day they are not available.
    Unavailable { player: usize, day: usize },
    /// A day's head count is not a multiple of the group size.
    Indivisible {
        day: usize,
        assigned: usize,
        group_size: usize,
    },
}

impl Violation {
    /// Human-readable description using the problem's names.
    pub fn describe(&self, p: &Problem) -> String {
        match *self {
            Violation::Unavailable { player, day } => format!(
                "availability constraint violated: {} plays on {} but is not available",
                p.players()[player],
                p.days()[day]
            ),
            Violation::Indivisible {
                day,
                assigned,
                group_size,
            } => format!(
                "divisibility constraint violated: day {} sum {} is not a multiple of {}",
                p.days()[day],
                assigned,
                group_size
            ),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Unavailable { player, day } => {
                write!(f, "player {player} assigned on unavailable day {day}")
            }
            Violation::Indivisible {
                day,
                assigned,
                group_size,
            } => write!(
                f,
                "day {day} has {assigned} players, not a multiple of {group_size}"
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Infeasible(Violation),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }

    pub fn violation(&self) -> Option<Violation> {
        match self {
            Feasibility::Feasible => None,
            Feasibility::Infeasible(v) => Some(*v),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("assignment is {found_players}x{found_days} but the problem is {players}x{days}")]
    ShapeMismatch {
        players: usize,
        days: usize,
        found_players: usize,
        found_days: usize,
    },
    #[error("assignment is infeasible: {0}")]
    Infeasible(Violation),
}

fn check_shape(x: &Assignment, p: &Problem) -> Result<(), ModelError> {
    if x.num_players() != p.num_players() || x.num_days() != p.num_days() {
        return Err(ModelError::ShapeMismatch {
            players: p.num_players(),
            days: p.num_days(),
            found_players: x.num_players(),
            found_days: x.num_days(),
        });
    }
    Ok(())
}

/// Checks the availability constraint cell by cell (row-major), then the
/// per-day divisibility constraint, and reports the first violation.
pub fn is_feasible(x: &Assignment, p: &Problem) -> Result<Feasibility, ModelError> {
    check_shape(x, p)?;
    for player in 0..p.num_players() {
        for day in 0..p.num_days() {
            if x.plays(player, day) && !p.is_available(player, day) {
                return Ok(Feasibility::Infeasible(Violation::Unavailable {
                    player,
                    day,
                }));
            }
        }
    }
    let g = p.group_size();
    for day in 0..p.num_days() {
        let assigned = x.matrix().col_sum(day);
        if !assigned.is_multiple_of(g) {
            return Ok(Feasibility::Infeasible(Violation::Indivisible {
                day,
                assigned,
                group_size: g,
            }));
        }
    }
    Ok(Feasibility::Feasible)
}

fn require_feasible(x: &Assignment, p: &Problem) -> Result<(), ModelError> {
    match is_feasible(x, p)? {
        Feasibility::Feasible => Ok(()),
        Feasibility::Infeasible(v) => Err(ModelError::Infeasible(v)),
    }
}

/// Largest number of games any feasible assignment can hold.
///
/// Days interact only through their own head counts, so the bound is the sum of
/// per-day floors.
pub fn max_total_games(p: &Problem) -> usize {
    let g = p.group_size();
    p.day_totals().into_iter().map(|a| a / g).sum()
}

pub fn is_efficient(x: &Assignment, p: &Problem) -> Result<bool, ModelError> {
    require_feasible(x, p)?;
    Ok(x.total_slots() == p.group_size() * max_total_games(p))
}

/// Games per player (row sums).
pub fn games_per_player(x: &Assignment) -> Vec<usize> {
    x.matrix().row_sums()
}

/// `counts[t - 1]` is the number of players with at least `t` games.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct GVector {
    counts: Vec<usize>,
}

impl GVector {
    pub fn new(counts: Vec<usize>) -> Self {
        Self { counts }
    }

    /// Builds the vector of length `len` from per-player game counts.
    pub fn from_games(games: &[usize], len: usize) -> Self {
        let mut counts = vec![0usize; len];
        for &n in games {
            for c in counts.iter_mut().take(n.min(len)) {
                *c += 1;
            }
        }
        Self { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `G_t` for a 1-based threshold; zero past the end.
    pub fn at_least(&self, t: usize) -> usize {
        assert!(t >= 1);
        self.counts.get(t - 1).copied().unwrap_or(0)
    }

    /// Lexicographic order on zero-padded vectors; `Greater` means fairer.
    pub fn fairness_cmp(&self, other: &GVector) -> Ordering {
        let len = self.counts.len().max(other.counts.len());
        for t in 1..=len {
            match self.at_least(t).cmp(&other.at_least(t)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for GVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

pub fn g_vector(x: &Assignment) -> GVector {
    GVector::from_games(&games_per_player(x), x.num_days())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FairnessOrder {
    FirstFairer,
    SecondFairer,
    Equal,
}

pub fn compare_fairness(u: &GVector, v: &GVector) -> FairnessOrder {
    match u.fairness_cmp(v) {
        Ordering::Greater => FairnessOrder::FirstFairer,
        Ordering::Less => FairnessOrder::SecondFairer,
        Ordering::Equal => FairnessOrder::Equal,
    }
}

/// A more available player receiving strictly fewer games than a less
/// available one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvyPair {
    pub envious: String,
    pub envied: String,
    pub envious_availability: usize,
    pub envied_availability: usize,
    pub envious_games: usize,
    pub envied_games: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnvyReport {
    pub pairs: Vec<EnvyPair>,
}

impl EnvyReport {
    pub fn is_envy_free(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, envious: &str, envied: &str) -> bool {
        self.pairs
            .iter()
            .any(|p| p.envious == envious && p.envied == envied)
    }
}

/// Every ordered `(i, j)` with `avail[i] > avail[j]` and `games[i] < games[j]`,
/// sorted by `(i, j)`.
pub(crate) fn envy_index_pairs(avail: &[usize], games: &[usize]) -> Vec<(usize, usize)> {
    let n = avail.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if avail[i] > avail[j] && games[i] < games[j] {
                out.push((i, j));
            }
        }
    }
    out
}

pub(crate) fn count_envy_pairs(avail: &[usize], games: &[usize]) -> usize {
    let n = avail.len();
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            if avail[i] > avail[j] && games[i] < games[j] {
                count += 1;
            }
        }
    }
    count
}

/// All strong-envy violations of a feasible assignment.
///
/// Availability totals are read from `p` as given; audit against the reduced
/// problem to ignore days on which no game could ever be formed.
pub fn envy_report(x: &Assignment, p: &Problem) -> Result<EnvyReport, ModelError> {
    require_feasible(x, p)?;
    let avail = p.availability_counts();
    let games = games_per_player(x);
    let pairs = envy_index_pairs(&avail, &games)
        .into_iter()
        .map(|(i, j)| EnvyPair {
            envious: p.players()[i].clone(),
            envied: p.players()[j].clone(),
            envious_availability: avail[i],
            envied_availability: avail[j],
            envious_games: games[i],
            envied_games: games[j],
        })
        .collect();
    Ok(EnvyReport { pairs })
}
