#![allow(dead_code)]

use qsport::{Assignment, BitMatrix, GVector, Problem};
use rand::Rng;

pub fn random_problem<R: Rng>(
    rng: &mut R,
    max_players: usize,
    max_days: usize,
    groups: &[usize],
) -> Problem {
    let n = rng.random_range(1..=max_players);
    let m = rng.random_range(1..=max_days);
    let g = groups[rng.random_range(0..groups.len())];
    let density = rng.random_range(0.3..0.9);
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| i64::from(rng.random_bool(density)))
                .collect()
        })
        .collect();
    qsport::validate_problem(
        (0..n).map(|i| format!("p{i}")).collect(),
        (0..m).map(|k| format!("d{k}")).collect(),
        &rows,
        g,
    )
    .unwrap()
}

/// Every feasible assignment, found by trying every subset of available cells.
/// Shares no code with the library's enumeration.
pub fn naive_feasible(p: &Problem) -> Vec<Assignment> {
    let cells: Vec<(usize, usize)> = (0..p.num_players())
        .flat_map(|i| (0..p.num_days()).map(move |k| (i, k)))
        .filter(|&(i, k)| p.availability().get(i, k))
        .collect();
    assert!(cells.len() <= 20, "too many cells for the naive oracle");
    let g = p.group_size();
    let mut out = Vec::new();
    for mask in 0u32..(1 << cells.len()) {
        let mut day_counts = vec![0usize; p.num_days()];
        let mut m = BitMatrix::zeros(p.num_players(), p.num_days());
        for (b, &(i, k)) in cells.iter().enumerate() {
            if mask >> b & 1 == 1 {
                m.set(i, k, true);
                day_counts[k] += 1;
            }
        }
        if day_counts.iter().all(|c| c % g == 0) {
            out.push(Assignment::from_matrix(m));
        }
    }
    out
}

pub fn naive_g_vector(x: &Assignment) -> GVector {
    let m = x.num_days();
    let games: Vec<usize> = (0..x.num_players())
        .map(|i| (0..m).filter(|&k| x.plays(i, k)).count())
        .collect();
    GVector::new(
        (1..=m)
            .map(|t| games.iter().filter(|&&c| c >= t).count())
            .collect(),
    )
}

/// Lexicographically largest G-vector over every feasible assignment.
pub fn naive_fair(p: &Problem) -> GVector {
    naive_feasible(p)
        .iter()
        .map(naive_g_vector)
        .max_by(|a, b| a.counts().cmp(b.counts()))
        .unwrap()
}
