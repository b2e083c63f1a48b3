//! Exact fair assignments.
//!
//! Fair assignments are efficient, so the search ranges over flows that fill
//! every day with `g * floor(avail_k / g)` players. Player degrees are priced so
//! that minimising cost maximises `(G_1, G_2, ...)` lexicographically; the
//! thresholds are solved one stage at a time, `t = 1..m`, each stage optimising
//! the objective truncated to the first `t` thresholds. Ties among optimal
//! assignments are broken by cancelling zero-cost cycles in the residual graph.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enumerate::EfficientCursor;
use crate::flow::{ArcCost, LexFlowGraph};
use crate::model::{g_vector, Assignment, GVector, Problem};
use crate::oracle::count_efficient;
use crate::reduce::reduce;

/// Seeded random selection samples uniformly among all optimal assignments when
/// the problem has at most this many efficient assignments.
pub const UNIFORM_SAMPLING_LIMIT: u64 = 250_000;

/// How to choose among assignments that share the optimal G-vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreakPolicy {
    /// The optimal matrix that is smallest in row-major order (0 before 1).
    #[default]
    DeterministicLex,
    /// Uniform over all optimal assignments when there are at most
    /// [`UNIFORM_SAMPLING_LIMIT`] efficient assignments; otherwise a seeded
    /// random walk over optimal assignments that fixes cells in random order to
    /// random values where an optimal completion still exists (not uniform).
    SeededRandom { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageResult {
    /// Threshold `t`.
    pub threshold: usize,
    /// Best `G_t` given optimal `G_1..G_{t-1}`.
    pub optimum: usize,
    /// Augmenting paths used to solve the stage.
    pub augmentations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub assignment: Assignment,
    pub g_vector: GVector,
    pub total_games: usize,
    pub stages: Vec<StageResult>,
}

/// Baseline efficient assignment with no regard to fairness: each surviving day
/// takes its first `g * floor(avail_k / g)` available players.
pub fn solve_efficient(p: &Problem) -> Assignment {
    let reduction = reduce(p);
    let core = &reduction.problem;
    let slots = core.efficient_slots();
    let mut x = Assignment::zeros(core.num_players(), core.num_days());
    for (k, &s) in slots.iter().enumerate() {
        for i in (0..core.num_players())
            .filter(|&i| core.is_available(i, k))
            .take(s)
        {
            x.set(i, k, true);
        }
    }
    reduction.extend(&x)
}

struct FairNetwork {
    graph: LexFlowGraph,
    players: usize,
    days: usize,
    cell_arcs: Vec<Option<usize>>,
    required: usize,
}

impl FairNetwork {
    const SOURCE: usize = 0;

    fn day_node(&self, k: usize) -> usize {
        1 + k
    }

    fn player_node(&self, i: usize) -> usize {
        1 + self.days + i
    }

    fn sink(&self) -> usize {
        1 + self.days + self.players
    }

    fn build(core: &Problem, depth: usize) -> Self {
        let n = core.num_players();
        let m = core.num_days();
        let mut net = Self {
            graph: LexFlowGraph::new(n + m + 2, depth),
            players: n,
            days: m,
            cell_arcs: vec![None; n * m],
            required: 0,
        };
        for (k, s) in core.efficient_slots().into_iter().enumerate() {
            let day = net.day_node(k);
            net.graph
                .add_arc(Self::SOURCE, day, s as i32, ArcCost::Zero);
            net.required += s;
        }
        for i in 0..n {
            for k in 0..m {
                if core.is_available(i, k) {
                    let (day, player) = (net.day_node(k), net.player_node(i));
                    net.cell_arcs[i * m + k] =
                        Some(net.graph.add_arc(day, player, 1, ArcCost::Zero));
                }
            }
        }
        let sink = net.sink();
        for (i, avail) in core.availability_counts().into_iter().enumerate() {
            let player = net.player_node(i);
            for axis in 0..avail {
                net.graph
                    .add_arc(player, sink, 1, ArcCost::Unit { axis, sign: -1 });
            }
        }
        net
    }

    fn solve(&mut self) -> usize {
        let sink = self.sink();
        let pushed = self.graph.min_cost_flow(Self::SOURCE, sink, self.required);
        // Every day can always be filled from its own available players.
        assert_eq!(pushed, self.required, "efficient flow must saturate");
        pushed
    }

    fn plays(&self, i: usize, k: usize) -> bool {
        self.cell_arcs[i * self.days + k].is_some_and(|a| self.graph.flow(a) == 1)
    }

    fn assignment(&self) -> Assignment {
        let mut x = Assignment::zeros(self.players, self.days);
        for i in 0..self.players {
            for k in 0..self.days {
                if self.plays(i, k) {
                    x.set(i, k, true);
                }
            }
        }
        x
    }

    /// Tries to move cell `(i, k)` to `target` through a zero-cost cycle, then
    /// pins it to whatever value it ends with.
    fn settle_cell(&mut self, i: usize, k: usize, target: bool) {
        let Some(arc) = self.cell_arcs[i * self.days + k] else {
            return;
        };
        let current = self.graph.flow(arc) == 1;
        self.graph.freeze(arc);
        if current == target {
            return;
        }
        let (day, player) = (self.day_node(k), self.player_node(i));
        if current {
            // cancel day -> player, reroute along day ~> player
            let tree = self.graph.shortest_paths(day);
            if tree.is_zero(player) {
                self.graph.augment(&tree, day, player);
                self.graph.push(arc, -1);
            }
        } else {
            // player ~> day, then day -> player closes the cycle
            let tree = self.graph.shortest_paths(player);
            if tree.is_zero(day) {
                self.graph.augment(&tree, player, day);
                self.graph.push(arc, 1);
            }
        }
    }
}

/// Assignment with the lexicographically maximal G-vector over all feasible
/// assignments, chosen among the optimal ones by `tie_break`.
///
/// Non-irreducible inputs are reduced first; removed players and days get zeros.
pub fn solve_fair(p: &Problem, tie_break: TieBreakPolicy) -> SolveReport {
    let reduction = reduce(p);
    let core = &reduction.problem;
    let m = core.num_days();
    let mut stages = Vec::with_capacity(m);

    let core_assignment = if core.is_empty() {
        Assignment::zeros(0, 0)
    } else {
        for t in 1..m {
            let mut net = FairNetwork::build(core, t);
            let augmentations = net.solve();
            let g = g_vector(&net.assignment());
            stages.push(StageResult {
                threshold: t,
                optimum: g.at_least(t),
                augmentations,
            });
        }
        let mut net = FairNetwork::build(core, m);
        let augmentations = net.solve();
        let optimum = g_vector(&net.assignment());
        stages.push(StageResult {
            threshold: m,
            optimum: optimum.at_least(m),
            augmentations,
        });

        let chosen = match tie_break {
            TieBreakPolicy::DeterministicLex => {
                for i in 0..core.num_players() {
                    for k in 0..m {
                        net.settle_cell(i, k, false);
                    }
                }
                net.assignment()
            }
            TieBreakPolicy::SeededRandom { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                match count_efficient(core) {
                    Ok(count) if count <= UNIFORM_SAMPLING_LIMIT => {
                        uniform_optimal(core, &optimum, &mut rng)
                    }
                    _ => {
                        let mut cells: Vec<(usize, usize)> = (0..core.num_players())
                            .flat_map(|i| (0..m).map(move |k| (i, k)))
                            .collect();
                        cells.shuffle(&mut rng);
                        for (i, k) in cells {
                            let target = rng.random_bool(0.5);
                            net.settle_cell(i, k, target);
                        }
                        net.assignment()
                    }
                }
            }
        };
        debug_assert_eq!(g_vector(&chosen), optimum);
        chosen
    };

    if core.is_empty() {
        stages.extend((1..=p.num_days()).map(|threshold| StageResult {
            threshold,
            optimum: 0,
            augmentations: 0,
        }));
    }

    let assignment = reduction.extend(&core_assignment);
    let g_vector = g_vector(&assignment);
    let total_games = assignment.total_slots() / p.group_size();
    SolveReport {
        assignment,
        g_vector,
        total_games,
        stages,
    }
}

/// Reservoir sample over the efficient assignments that attain `optimum`.
fn uniform_optimal(core: &Problem, optimum: &GVector, rng: &mut ChaCha8Rng) -> Assignment {
    let mut cursor = EfficientCursor::new(core).expect("non-empty core");
    let width = core.num_days();
    let mut seen: u64 = 0;
    let mut chosen = None;
    loop {
        if GVector::from_games(cursor.games(), width) == *optimum {
            seen += 1;
            if rng.random_range(0..seen) == 0 {
                chosen = Some(cursor.assignment());
            }
        }
        if !cursor.advance() {
            break;
        }
    }
    chosen.expect("the flow optimum is attained by some efficient assignment")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{is_efficient, is_feasible, max_total_games};

    #[test]
    fn single_forced_day() {
        let p = Problem::from_rows(&["a", "b", "c", "d"], &["d1"], &[&[1], &[1], &[1], &[1]], 4)
            .unwrap();
        let r = solve_fair(&p, TieBreakPolicy::DeterministicLex);
        assert_eq!(r.g_vector.counts(), &[4]);
        assert_eq!(r.total_games, 1);
        assert_eq!(r.stages.len(), 1);
    }

    #[test]
    fn empty_core_yields_zero_assignment() {
        let p = Problem::from_rows(&["a", "b"], &["x", "y"], &[&[1, 0], &[0, 0]], 2).unwrap();
        let r = solve_fair(&p, TieBreakPolicy::DeterministicLex);
        assert_eq!(r.assignment, Assignment::zeros(2, 2));
        assert_eq!(r.g_vector.counts(), &[0, 0]);
        assert_eq!(r.total_games, 0);
        assert_eq!(solve_efficient(&p), Assignment::zeros(2, 2));
    }

    #[test]
    fn balances_games_across_players() {
        // Three players, two days, pairs. Efficient: 2 slots per day (4 total).
        // Fair: everyone plays at least once.
        let p = Problem::from_rows(
            &["a", "b", "c"],
            &["x", "y"],
            &[&[1, 1], &[1, 1], &[1, 1]],
            2,
        )
        .unwrap();
        let r = solve_fair(&p, TieBreakPolicy::DeterministicLex);
        assert_eq!(r.g_vector.counts(), &[3, 1]);
        // lexicographically smallest optimal matrix: a gets day y only
        assert_eq!(
            r.assignment,
            Assignment::from_rows(&[&[0, 1], &[1, 0], &[1, 1]])
        );
        assert!(is_feasible(&r.assignment, &p).unwrap().is_feasible());
        assert!(is_efficient(&r.assignment, &p).unwrap());
        assert_eq!(r.total_games, max_total_games(&p));
    }

    #[test]
    fn random_walk_path_is_optimal_and_seed_stable() {
        // C(22,20) * C(11,8) * C(14,12) efficient assignments, far above the limit.
        let names: Vec<String> = (0..22).map(|i| format!("p{i}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let rows: Vec<Vec<u8>> = (0..22)
            .map(|i| vec![1, u8::from(i % 2 == 0), u8::from(i % 3 != 0)])
            .collect();
        let rows: Vec<&[u8]> = rows.iter().map(Vec::as_slice).collect();
        let p = Problem::from_rows(&names, &["x", "y", "z"], &rows, 4).unwrap();
        assert!(count_efficient(&reduce(&p).problem).unwrap() > UNIFORM_SAMPLING_LIMIT);
        let lex = solve_fair(&p, TieBreakPolicy::DeterministicLex);
        let a = solve_fair(&p, TieBreakPolicy::SeededRandom { seed: 7 });
        let b = solve_fair(&p, TieBreakPolicy::SeededRandom { seed: 7 });
        assert_eq!(a, b);
        assert_eq!(a.g_vector, lex.g_vector);
        assert!(is_efficient(&a.assignment, &p).unwrap());
    }
}
