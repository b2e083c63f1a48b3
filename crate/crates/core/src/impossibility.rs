//! Instances on which no assignment is both efficient and strongly envy-free,
//! and the exhaustive machinery that certifies them.
//!
//! For `g >= 3` the family is explicit: `g` players share two days on which
//! nobody else is available, so both of those games are forced and each of them
//! plays twice; `2g - 1` more flexible players share three other days, which
//! hold only `3g < 2(2g - 1)` slots, so one of them plays at most once. For
//! `g = 2` no such closed form is used and [`search_witness_g2`] looks for one
//! by bounded exhaustive search over matrices up to row and column permutation.

use std::ops::ControlFlow;

use rayon::prelude::*;
use thiserror::Error;

use crate::model::{count_envy_pairs, Assignment, BitMatrix, Problem};
use crate::oracle::{count_efficient, scan_efficient, EnumerationBudget, OracleError};

const WEEK: [&str; 5] = ["Mon", "Tues", "Wed", "Thurs", "Fri"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImpossibilityError {
    #[error("the explicit witness family needs a group size of at least 3, got {0}")]
    GroupSizeTooSmall(usize),
    #[error("inconclusive: {0}")]
    Inconclusive(OracleError),
}

/// Exhaustive verdict for one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub problem: Problem,
    pub group_size: usize,
    pub efficient_count: u64,
    pub ef_found: bool,
    pub first_ef_witness: Option<Assignment>,
    /// Fewest strong-envy pairs over all efficient assignments. A severity
    /// measure of our own, zero exactly when `ef_found`.
    pub min_envy_pairs: usize,
}

impl WitnessReport {
    /// True when the instance admits no efficient strongly envy-free
    /// assignment, hence no fair one either.
    pub fn is_witness(&self) -> bool {
        !self.ef_found
    }
}

/// `a, b, ..., z, aa, ab, ...`
fn player_label(mut index: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Left block of `g` players on the first two days, right block of `2g - 1`
/// players on the last three.
pub fn build_witness(g: usize) -> Result<Problem, ImpossibilityError> {
    if g < 3 {
        return Err(ImpossibilityError::GroupSizeTooSmall(g));
    }
    let left = g;
    let right = 2 * g - 1;
    let players: Vec<String> = (0..left + right).map(player_label).collect();
    let mut avail = BitMatrix::zeros(left + right, WEEK.len());
    for i in 0..left + right {
        let days = if i < left { 0..2 } else { 2..5 };
        for k in days {
            avail.set(i, k, true);
        }
    }
    Ok(Problem::from_parts(
        players,
        WEEK.iter().map(|d| d.to_string()).collect(),
        avail,
        g,
    ))
}

/// The eleven-player tennis instance: `a`-`d` free Monday and Tuesday only,
/// `e`-`k` free Wednesday to Friday only.
pub fn build_table2() -> Problem {
    build_witness(4).expect("g = 4 is in range")
}

/// Walks every efficient assignment of `p`, recording whether any is strongly
/// envy-free and the fewest envy pairs seen.
///
/// Exceeding the budget is reported as inconclusive, never as a verdict.
pub fn verify_no_fair_ef(
    p: &Problem,
    budget: EnumerationBudget,
) -> Result<WitnessReport, ImpossibilityError> {
    let avail = p.availability_counts();
    let mut min_envy_pairs = usize::MAX;
    let mut first_ef_witness = None;
    let visited = scan_efficient(p, budget, |games, snapshot| {
        let pairs = count_envy_pairs(&avail, games);
        if pairs == 0 && first_ef_witness.is_none() {
            first_ef_witness = Some(snapshot());
        }
        min_envy_pairs = min_envy_pairs.min(pairs);
        ControlFlow::Continue(())
    })
    .map_err(ImpossibilityError::Inconclusive)?;
    Ok(WitnessReport {
        problem: p.clone(),
        group_size: p.group_size(),
        efficient_count: visited,
        ef_found: first_ef_witness.is_some(),
        first_ef_witness,
        min_envy_pairs: if visited == 0 { 0 } else { min_envy_pairs },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_players: usize,
    pub max_days: usize,
    pub per_instance_budget: EnumerationBudget,
    /// Visit one matrix per row/column permutation class.
    pub symmetry_dedup: bool,
}

impl SearchBounds {
    pub fn new(max_players: usize, max_days: usize) -> Self {
        assert!(
            max_players >= 1 && max_days >= 1,
            "bounds must be at least 1"
        );
        assert!(max_days <= 16, "rows are packed into 16 bits");
        Self {
            max_players,
            max_days,
            per_instance_budget: EnumerationBudget::default(),
            symmetry_dedup: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Lowest-index witness in search order, with its full report.
    pub witness: Option<(Problem, WitnessReport)>,
    /// False only if the search stopped early; exhausting the family or
    /// finding a witness both complete it.
    pub completed: bool,
    /// Irreducible candidates examined up to and including the witness.
    pub instances_examined: u64,
    /// Candidates skipped because their enumeration exceeded the budget.
    pub inconclusive: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Screen {
    HasEnvyFree,
    Witness,
    Inconclusive,
}

/// Searches irreducible pair-sport (`g = 2`) problems with up to
/// `max_players` players and `max_days` days for one where no efficient
/// assignment is strongly envy-free.
///
/// Sizes are visited by player count, then day count. Within a size, matrices
/// come in decreasing order of their rows read as binary numbers; with
/// `symmetry_dedup` only the lexicographically largest matrix of each
/// row/column permutation class is visited. Candidates are screened in
/// parallel but the lowest-index witness always wins.
pub fn search_witness_g2(bounds: &SearchBounds) -> SearchOutcome {
    const G: usize = 2;
    let mut examined = 0u64;
    let mut inconclusive = 0u64;
    for n in G..=bounds.max_players {
        for m in 1..=bounds.max_days {
            let candidates = if bounds.symmetry_dedup {
                canonical_matrices(n, m, G)
            } else {
                all_matrices(n, m, G)
            };
            let screens: Vec<Screen> = candidates
                .par_iter()
                .map(|rows| screen(&problem_from_rows(rows, m, G), bounds.per_instance_budget))
                .collect();
            match screens.iter().position(|s| *s == Screen::Witness) {
                Some(idx) => {
                    examined += idx as u64 + 1;
                    inconclusive += screens[..idx]
                        .iter()
                        .filter(|s| **s == Screen::Inconclusive)
                        .count() as u64;
                    let problem = problem_from_rows(&candidates[idx], m, G);
                    let report = verify_no_fair_ef(&problem, bounds.per_instance_budget)
                        .expect("screened within budget");
                    return SearchOutcome {
                        witness: Some((problem, report)),
                        completed: true,
                        instances_examined: examined,
                        inconclusive,
                    };
                }
                None => {
                    examined += candidates.len() as u64;
                    inconclusive += screens
                        .iter()
                        .filter(|s| **s == Screen::Inconclusive)
                        .count() as u64;
                }
            }
        }
    }
    SearchOutcome {
        witness: None,
        completed: true,
        instances_examined: examined,
        inconclusive,
    }
}

fn screen(p: &Problem, budget: EnumerationBudget) -> Screen {
    match count_efficient(p) {
        Ok(c) if c <= budget.max_assignments => {}
        _ => return Screen::Inconclusive,
    }
    let avail = p.availability_counts();
    let mut ef = false;
    let scanned = scan_efficient(p, budget, |games, _| {
        if count_envy_pairs(&avail, games) == 0 {
            ef = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    match scanned {
        Err(_) => Screen::Inconclusive,
        Ok(_) if ef => Screen::HasEnvyFree,
        Ok(_) => Screen::Witness,
    }
}

/// Row `r` packs its cells with column 0 in the most significant of `m` bits.
fn problem_from_rows(rows: &[u16], m: usize, g: usize) -> Problem {
    let mut avail = BitMatrix::zeros(rows.len(), m);
    for (i, &r) in rows.iter().enumerate() {
        for k in 0..m {
            avail.set(i, k, bit(r, k, m));
        }
    }
    Problem::from_parts(
        (0..rows.len()).map(|i| format!("p{}", i + 1)).collect(),
        (0..m).map(|k| format!("d{}", k + 1)).collect(),
        avail,
        g,
    )
}

#[inline]
fn bit(row: u16, col: usize, m: usize) -> bool {
    row >> (m - 1 - col) & 1 == 1
}

/// Every `n x m` matrix with all row sums at least 1 and column sums at least
/// `min_col`, rows taken in odometer order.
fn all_matrices(n: usize, m: usize, min_col: usize) -> Vec<Vec<u16>> {
    let width = 1u32 << m;
    let total = (width as u64)
        .checked_pow(n as u32)
        .expect("search space too large");
    let mut out = Vec::new();
    let mut rows = vec![0u16; n];
    for code in 0..total {
        let mut c = code;
        for r in rows.iter_mut().rev() {
            *r = (c % width as u64) as u16;
            c /= width as u64;
        }
        let rows_ok = rows.iter().all(|&r| r != 0);
        let cols_ok = (0..m).all(|k| rows.iter().filter(|&&r| bit(r, k, m)).count() >= min_col);
        if rows_ok && cols_ok {
            out.push(rows.clone());
        }
    }
    out
}

/// One representative per row/column permutation class: the matrix whose
/// column-major reading is largest once rows are sorted in decreasing order.
/// Such a matrix has both its rows and its columns in decreasing lexicographic
/// order, so candidates are generated with that shape and then tested.
pub(crate) fn canonical_matrices(n: usize, m: usize, min_col: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut rows = Vec::with_capacity(n);
    let tied = if m > 1 { (1u32 << (m - 1)) - 1 } else { 0 };
    extend_sorted(n, m, min_col, tied, &mut vec![0; m], &mut rows, &mut out);
    out
}

fn extend_sorted(
    n: usize,
    m: usize,
    min_col: usize,
    tied: u32,
    col_counts: &mut Vec<usize>,
    rows: &mut Vec<u16>,
    out: &mut Vec<Vec<u16>>,
) {
    if rows.len() == n {
        if is_canonical(rows, m) {
            out.push(rows.clone());
        }
        return;
    }
    let top = rows.last().copied().unwrap_or(((1u32 << m) - 1) as u16);
    let remaining_after = n - rows.len() - 1;
    for r in (1..=top).rev() {
        let mut next_tied = 0u32;
        let mut ok = true;
        for j in 0..m.saturating_sub(1) {
            if tied >> j & 1 == 1 {
                let (a, b) = (bit(r, j, m), bit(r, j + 1, m));
                if !a && b {
                    ok = false;
                    break;
                }
                if a == b {
                    next_tied |= 1 << j;
                }
            }
        }
        if !ok {
            continue;
        }
        if (0..m).any(|k| col_counts[k] + usize::from(bit(r, k, m)) + remaining_after < min_col) {
            continue;
        }
        for (k, c) in col_counts.iter_mut().enumerate() {
            *c += usize::from(bit(r, k, m));
        }
        rows.push(r);
        extend_sorted(n, m, min_col, next_tied, col_counts, rows, out);
        rows.pop();
        for (k, c) in col_counts.iter_mut().enumerate() {
            *c -= usize::from(bit(r, k, m));
        }
    }
}

/// Column `k` read top to bottom, row 0 most significant.
fn column_word(rows: &[u16], k: usize, m: usize) -> u32 {
    rows.iter()
        .fold(0u32, |acc, &r| acc << 1 | u32::from(bit(r, k, m)))
}

/// True iff no column permutation, followed by sorting rows in decreasing
/// order, produces a larger column-major reading than `rows` itself.
/// Assumes `rows` is already sorted in decreasing order.
fn is_canonical(rows: &[u16], m: usize) -> bool {
    let targets: Vec<u32> = (0..m).map(|k| column_word(rows, k, m)).collect();
    let mut prefixes = vec![0u16; rows.len()];
    !exceeds(rows, m, &targets, 0, 0, &mut prefixes)
}

fn exceeds(
    rows: &[u16],
    m: usize,
    targets: &[u32],
    depth: usize,
    used: u32,
    prefixes: &mut [u16],
) -> bool {
    for c in 0..m {
        if used >> c & 1 == 1 {
            continue;
        }
        let mut next: Vec<u16> = prefixes
            .iter()
            .zip(rows)
            .map(|(&p, &r)| p << 1 | u16::from(bit(r, c, m)))
            .collect();
        let saved = next.clone();
        next.sort_unstable_by(|a, b| b.cmp(a));
        let word = next
            .iter()
            .fold(0u32, |acc, &p| acc << 1 | u32::from(p & 1));
        if word > targets[depth] {
            return true;
        }
        if word == targets[depth] && depth + 1 < m {
            let mut child = saved;
            if exceeds(rows, m, targets, depth + 1, used | 1 << c, &mut child) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::is_irreducible;
    use std::collections::HashSet;

    #[test]
    fn labels() {
        assert_eq!(player_label(0), "a");
        assert_eq!(player_label(10), "k");
        assert_eq!(player_label(25), "z");
        assert_eq!(player_label(26), "aa");
        assert_eq!(player_label(27), "ab");
        assert_eq!(player_label(52), "ba");
    }

    #[test]
    fn witness_family_shape() {
        assert!(matches!(
            build_witness(2),
            Err(ImpossibilityError::GroupSizeTooSmall(2))
        ));
        for g in 3..=12 {
            let p = build_witness(g).unwrap();
            assert!(is_irreducible(&p), "g = {g}");
            assert_eq!(p.num_players(), 3 * g - 1);
            assert_eq!(p.day_totals(), vec![g, g, 2 * g - 1, 2 * g - 1, 2 * g - 1]);
        }
    }

    /// Brute-force class representatives: max over all row and column
    /// permutations of the sorted-row column-major reading.
    fn brute_canonical(rows: &[u16], m: usize) -> Vec<u16> {
        let mut best: Option<Vec<u16>> = None;
        let mut perm: Vec<usize> = (0..m).collect();
        let mut all_perms = Vec::new();
        permutations(&mut perm, 0, &mut all_perms);
        for p in all_perms {
            let mut permuted: Vec<u16> = rows
                .iter()
                .map(|&r| (0..m).fold(0u16, |acc, pos| acc << 1 | u16::from(bit(r, p[pos], m))))
                .collect();
            permuted.sort_unstable_by(|a, b| b.cmp(a));
            let key: Vec<u32> = (0..m).map(|k| column_word(&permuted, k, m)).collect();
            let better = match &best {
                None => true,
                Some(b) => {
                    let bk: Vec<u32> = (0..m).map(|k| column_word(b, k, m)).collect();
                    key > bk
                }
            };
            if better {
                best = Some(permuted);
            }
        }
        best.unwrap()
    }

    fn permutations(perm: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == perm.len() {
            out.push(perm.clone());
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            permutations(perm, k + 1, out);
            perm.swap(k, i);
        }
    }

    #[test]
    fn canonical_generation_hits_each_class_once() {
        for (n, m, min_col) in [
            (2, 2, 1),
            (3, 3, 1),
            (3, 3, 2),
            (4, 3, 2),
            (3, 4, 1),
            (4, 4, 2),
        ] {
            let classes: HashSet<Vec<u16>> = all_matrices(n, m, min_col)
                .iter()
                .map(|rows| brute_canonical(rows, m))
                .collect();
            let reps = canonical_matrices(n, m, min_col);
            let rep_set: HashSet<Vec<u16>> = reps.iter().cloned().collect();
            assert_eq!(reps.len(), rep_set.len(), "duplicates at {n}x{m}");
            assert_eq!(rep_set, classes, "class mismatch at {n}x{m}");
        }
    }

    #[test]
    fn small_bounds_have_no_pair_witness() {
        let out = search_witness_g2(&SearchBounds::new(2, 2));
        assert!(out.witness.is_none());
        assert!(out.completed);
        assert_eq!(out.inconclusive, 0);
        // 2x1 [1;1] and 2x2 all-ones are the only irreducible classes.
        assert_eq!(out.instances_examined, 2);

        let plain = search_witness_g2(&SearchBounds {
            symmetry_dedup: false,
            ..SearchBounds::new(2, 2)
        });
        assert!(plain.witness.is_none());
        assert_eq!(plain.instances_examined, 2);
    }
}
