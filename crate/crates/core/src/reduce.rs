//! Elimination of days that can never host a game and of players left with no
//! usable day.

use crate::model::{Assignment, BitMatrix, Problem};

/// Everything removed on the way to the irreducible core. Round indices are 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionLog {
    pub removed_days: Vec<(usize, String)>,
    pub removed_players: Vec<(usize, String)>,
    /// Passes that removed at least one day or player.
    pub rounds: usize,
}

impl ReductionLog {
    pub fn is_empty(&self) -> bool {
        self.removed_days.is_empty() && self.removed_players.is_empty()
    }
}

/// The irreducible core of a problem plus the index maps back to the original.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub problem: Problem,
    pub log: ReductionLog,
    /// Original index of each surviving player, in order.
    pub kept_players: Vec<usize>,
    /// Original index of each surviving day, in order.
    pub kept_days: Vec<usize>,
    original_players: usize,
    original_days: usize,
}

impl Reduction {
    /// True when nothing survived.
    pub fn is_empty(&self) -> bool {
        self.problem.is_empty()
    }

    /// Zero-extends an assignment on the core to the original shape.
    pub fn extend(&self, core: &Assignment) -> Assignment {
        assert_eq!(core.num_players(), self.kept_players.len());
        assert_eq!(core.num_days(), self.kept_days.len());
        let mut full = Assignment::zeros(self.original_players, self.original_days);
        for (ci, &oi) in self.kept_players.iter().enumerate() {
            for (ck, &ok) in self.kept_days.iter().enumerate() {
                if core.plays(ci, ck) {
                    full.set(oi, ok, true);
                }
            }
        }
        full
    }

    /// Restricts an original-shape assignment to the surviving rows and columns.
    pub fn restrict(&self, full: &Assignment) -> Assignment {
        assert_eq!(full.num_players(), self.original_players);
        assert_eq!(full.num_days(), self.original_days);
        let mut core = Assignment::zeros(self.kept_players.len(), self.kept_days.len());
        for (ci, &oi) in self.kept_players.iter().enumerate() {
            for (ck, &ok) in self.kept_days.iter().enumerate() {
                if full.plays(oi, ok) {
                    core.set(ci, ck, true);
                }
            }
        }
        core
    }
}

/// True iff every player is available on some day and every day has at least
/// `g` available players. The empty problem qualifies vacuously.
pub fn is_irreducible(p: &Problem) -> bool {
    let g = p.group_size();
    p.availability_counts().iter().all(|&a| a >= 1) && p.day_totals().iter().all(|&a| a >= g)
}

/// Alternately drops days with fewer than `g` remaining available players and
/// players with no remaining day, until nothing changes. Survivor order is kept.
pub fn reduce(p: &Problem) -> Reduction {
    let g = p.group_size();
    let avail = p.availability();
    let mut day_alive = vec![true; p.num_days()];
    let mut player_alive = vec![true; p.num_players()];
    let mut log = ReductionLog::default();
    let mut pass = 0;

    loop {
        pass += 1;
        let mut changed = false;
        for (k, alive) in day_alive.iter_mut().enumerate() {
            if !*alive {
                continue;
            }
            let count = (0..p.num_players())
                .filter(|&i| player_alive[i] && avail.get(i, k))
                .count();
            if count < g {
                *alive = false;
                log.removed_days.push((pass, p.days()[k].clone()));
                changed = true;
            }
        }
        for (i, alive) in player_alive.iter_mut().enumerate() {
            if !*alive {
                continue;
            }
            if !(0..p.num_days()).any(|k| day_alive[k] && avail.get(i, k)) {
                *alive = false;
                log.removed_players.push((pass, p.players()[i].clone()));
                changed = true;
            }
        }
        if !changed {
            break;
        }
        log.rounds = pass;
    }

    let kept_players: Vec<usize> = (0..p.num_players()).filter(|&i| player_alive[i]).collect();
    let kept_days: Vec<usize> = (0..p.num_days()).filter(|&k| day_alive[k]).collect();
    let mut core = BitMatrix::zeros(kept_players.len(), kept_days.len());
    for (ci, &oi) in kept_players.iter().enumerate() {
        for (ck, &ok) in kept_days.iter().enumerate() {
            core.set(ci, ck, avail.get(oi, ok));
        }
    }
    let problem = Problem::from_parts(
        kept_players
            .iter()
            .map(|&i| p.players()[i].clone())
            .collect(),
        kept_days.iter().map(|&k| p.days()[k].clone()).collect(),
        core,
        g,
    );
    Reduction {
        problem,
        log,
        kept_players,
        kept_days,
        original_players: p.num_players(),
        original_days: p.num_days(),
    }
}
