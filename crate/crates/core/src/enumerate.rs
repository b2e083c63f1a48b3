//! Odometer over efficient assignments.
//!
//! An efficient assignment fills every day with exactly `g * floor(avail_k / g)`
//! of its available players, independently of the other days. Each day walks
//! its combinations in lexicographic order of player index; the last day turns
//! fastest.

use crate::model::{Assignment, Problem};

pub(crate) struct EfficientCursor {
    players: usize,
    day_players: Vec<Vec<usize>>,
    combos: Vec<Vec<usize>>,
    games: Vec<usize>,
}

impl EfficientCursor {
    /// Positioned on the first efficient assignment. `None` for an empty problem.
    pub(crate) fn new(p: &Problem) -> Option<Self> {
        if p.is_empty() {
            return None;
        }
        let slots = p.efficient_slots();
        let day_players: Vec<Vec<usize>> = (0..p.num_days())
            .map(|k| {
                (0..p.num_players())
                    .filter(|&i| p.is_available(i, k))
                    .collect()
            })
            .collect();
        let combos: Vec<Vec<usize>> = slots.iter().map(|&s| (0..s).collect()).collect();
        let mut cursor = Self {
            players: p.num_players(),
            day_players,
            combos,
            games: vec![0; p.num_players()],
        };
        for k in 0..cursor.combos.len() {
            cursor.tally(k, 1);
        }
        Some(cursor)
    }

    fn tally(&mut self, day: usize, add: isize) {
        for &pos in &self.combos[day] {
            let i = self.day_players[day][pos];
            self.games[i] = self.games[i].wrapping_add_signed(add);
        }
    }

    pub(crate) fn games(&self) -> &[usize] {
        &self.games
    }

    pub(crate) fn assignment(&self) -> Assignment {
        let mut x = Assignment::zeros(self.players, self.combos.len());
        for (k, combo) in self.combos.iter().enumerate() {
            for &pos in combo {
                x.set(self.day_players[k][pos], k, true);
            }
        }
        x
    }

    /// Moves to the next assignment; false once every combination was visited.
    pub(crate) fn advance(&mut self) -> bool {
        for k in (0..self.combos.len()).rev() {
            let n = self.day_players[k].len();
            self.tally(k, -1);
            let moved = next_combination(&mut self.combos[k], n);
            if !moved {
                for (j, c) in self.combos[k].iter_mut().enumerate() {
                    *c = j;
                }
            }
            self.tally(k, 1);
            if moved {
                return true;
            }
        }
        false
    }
}

/// Advances a strictly increasing index list to the next `k`-subset of `0..n`
/// in lexicographic order.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `C(n, k)` with overflow detection.
pub(crate) fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_in_lexicographic_order() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut empty: Vec<usize> = vec![];
        assert!(!next_combination(&mut empty, 3));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 4), Some(35));
        assert_eq!(binomial(10, 8), Some(45));
        assert_eq!(binomial(9, 5), Some(126));
        assert_eq!(binomial(3, 0), Some(1));
        assert_eq!(binomial(2, 3), Some(0));
        assert_eq!(binomial(200, 100), None);
    }

    #[test]
    fn cursor_tracks_games() {
        let p = Problem::from_rows(
            &["a", "b", "c"],
            &["x", "y"],
            &[&[1, 1], &[1, 1], &[1, 0]],
            2,
        )
        .unwrap();
        let mut cur = EfficientCursor::new(&p).unwrap();
        let mut count = 1;
        loop {
            let x = cur.assignment();
            assert_eq!(cur.games(), x.matrix().row_sums().as_slice());
            if !cur.advance() {
                break;
            }
            count += 1;
        }
        // day x: C(3,2) = 3, day y: C(2,2) = 1
        assert_eq!(count, 3);
    }
}
