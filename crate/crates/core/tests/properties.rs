mod common;

use std::cmp::Ordering;

use proptest::prelude::*;
use qsport::csv_format::{assignment_to_csv, parse_assignment, parse_availability, problem_to_csv};
use qsport::{
    brute_force_fair, build_witness, compare_fairness, count_efficient, enumerate_efficient,
    envy_report, exists_efficient_strongly_ef, g_vector, games_per_player, is_efficient,
    is_feasible, is_irreducible, max_total_games, reduce, solve_efficient, solve_fair,
    validate_problem, verify_no_fair_ef, EnumerationBudget, FairnessOrder, GVector, Problem,
    TieBreakPolicy,
};

fn problem(
    max_players: usize,
    max_days: usize,
    groups: Vec<usize>,
) -> impl Strategy<Value = Problem> {
    (1..=max_players, 1..=max_days, prop::sample::select(groups)).prop_flat_map(|(n, m, g)| {
        prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.6), m), n).prop_map(
            move |rows| {
                let cells: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|r| r.iter().map(|&b| i64::from(b)).collect())
                    .collect();
                validate_problem(
                    (0..n).map(|i| format!("p{i}")).collect(),
                    (0..m).map(|k| format!("d{k}")).collect(),
                    &cells,
                    g,
                )
                .unwrap()
            },
        )
    })
}

fn g_vectors() -> impl Strategy<Value = GVector> {
    prop::collection::vec(0usize..6, 0..5).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        GVector::new(v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn reduce_is_idempotent(p in problem(8, 5, vec![2, 3, 4])) {
        let once = reduce(&p);
        prop_assert!(is_irreducible(&once.problem));
        let twice = reduce(&once.problem);
        prop_assert!(twice.log.is_empty());
        prop_assert_eq!(twice.problem, once.problem);
    }

    #[test]
    fn feasible_assignments_live_on_the_core(p in problem(5, 3, vec![2, 3])) {
        let r = reduce(&p);
        for x in common::naive_feasible(&p) {
            prop_assert_eq!(r.extend(&r.restrict(&x)), x);
        }
    }

    #[test]
    fn reduction_keeps_the_fair_vector(p in problem(5, 3, vec![2, 3])) {
        let r = reduce(&p);
        let full = common::naive_fair(&p);
        let core = solve_fair(&r.problem, TieBreakPolicy::DeterministicLex).g_vector;
        prop_assert_eq!(compare_fairness(&full, &core), FairnessOrder::Equal);
    }

    #[test]
    fn g_vector_is_monotone_and_sums_to_slots(p in problem(8, 5, vec![2, 3, 4])) {
        let x = solve_efficient(&p);
        let g = g_vector(&x);
        prop_assert!(g.counts().windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(g.counts().iter().sum::<usize>(), x.total_slots());
        prop_assert_eq!(g, common::naive_g_vector(&x));
    }

    #[test]
    fn fairness_order_is_a_total_preorder(a in g_vectors(), b in g_vectors(), c in g_vectors()) {
        let ab = a.fairness_cmp(&b);
        prop_assert_eq!(ab, b.fairness_cmp(&a).reverse());
        prop_assert_eq!(a.fairness_cmp(&a), Ordering::Equal);
        if ab != Ordering::Less && b.fairness_cmp(&c) != Ordering::Less {
            prop_assert_ne!(a.fairness_cmp(&c), Ordering::Less);
        }
        let expected = match ab {
            Ordering::Greater => FairnessOrder::FirstFairer,
            Ordering::Less => FairnessOrder::SecondFairer,
            Ordering::Equal => FairnessOrder::Equal,
        };
        prop_assert_eq!(compare_fairness(&a, &b), expected);
    }

    #[test]
    fn equal_availability_means_no_envy(
        n in 1usize..8,
        m in 1usize..5,
        free in 1usize..5,
        g in 2usize..4,
    ) {
        let free = free.min(m);
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..m).map(|k| i64::from((k + i) % m < free)).collect())
            .collect();
        let p = validate_problem(
            (0..n).map(|i| format!("p{i}")).collect(),
            (0..m).map(|k| format!("d{k}")).collect(),
            &rows,
            g,
        ).unwrap();
        for x in enumerate_efficient(&p, EnumerationBudget::truncate_after(200)) {
            prop_assert!(envy_report(&x.unwrap(), &p).unwrap().is_envy_free());
        }
    }

    #[test]
    fn efficiency_decouples_by_day(p in problem(5, 3, vec![2, 3])) {
        let naive = common::naive_feasible(&p);
        let best = naive.iter().map(|x| x.total_slots()).max().unwrap();
        prop_assert_eq!(best, p.group_size() * max_total_games(&p));
        let efficient: Vec<_> = naive.into_iter().filter(|x| x.total_slots() == best).collect();
        prop_assert_eq!(efficient.len() as u64, count_efficient(&p).unwrap());
        for x in &efficient {
            prop_assert!(is_efficient(x, &p).unwrap());
        }
        let mut listed: Vec<_> = enumerate_efficient(&p, EnumerationBudget::default())
            .map(|x| x.unwrap())
            .collect();
        let mut naive_sorted = efficient;
        let key = |x: &qsport::Assignment| x.matrix().to_u8_rows();
        listed.sort_by_key(key);
        naive_sorted.sort_by_key(key);
        prop_assert_eq!(listed, naive_sorted);
    }

    #[test]
    fn solver_matches_naive_oracle(p in problem(6, 3, vec![2, 3, 4]), seed in any::<u64>()) {
        prop_assume!(p.availability().total() <= 16);
        let naive = common::naive_fair(&p);
        for policy in [TieBreakPolicy::DeterministicLex, TieBreakPolicy::SeededRandom { seed }] {
            let r = solve_fair(&p, policy);
            prop_assert!(is_feasible(&r.assignment, &p).unwrap().is_feasible());
            prop_assert_eq!(&r.g_vector, &naive);
            prop_assert_eq!(g_vector(&r.assignment), naive.clone());
        }
    }

    #[test]
    fn solver_matches_brute_force(p in problem(8, 4, vec![2, 3, 4])) {
        let (oracle, _) = brute_force_fair(&p, EnumerationBudget::default()).unwrap();
        let r = solve_fair(&p, TieBreakPolicy::DeterministicLex);
        prop_assert_eq!(&r.g_vector, &oracle);
        prop_assert_eq!(r.total_games, max_total_games(&p));
        prop_assert!(is_efficient(&r.assignment, &p).unwrap());
        for stage in &r.stages {
            prop_assert_eq!(stage.optimum, r.g_vector.at_least(stage.threshold));
        }
    }

    #[test]
    fn solver_is_deterministic(p in problem(10, 5, vec![2, 3, 4]), seed in any::<u64>()) {
        prop_assert_eq!(
            solve_fair(&p, TieBreakPolicy::DeterministicLex),
            solve_fair(&p, TieBreakPolicy::DeterministicLex)
        );
        let policy = TieBreakPolicy::SeededRandom { seed };
        prop_assert_eq!(solve_fair(&p, policy), solve_fair(&p, policy));
    }

    #[test]
    fn enumeration_respects_budget(p in problem(8, 4, vec![2, 3]), cap in 1u64..50) {
        let total = count_efficient(&p).unwrap();
        let mut stream = enumerate_efficient(&p, EnumerationBudget::truncate_after(cap));
        let seen = stream.by_ref().filter(|x| x.is_ok()).count() as u64;
        prop_assert_eq!(seen, total.min(cap));
        prop_assert_eq!(stream.truncated(), total > cap);
        let strict: Vec<_> = enumerate_efficient(&p, EnumerationBudget::error_after(cap)).collect();
        if total > cap {
            prop_assert!(strict.iter().any(|x| x.is_err()));
        } else {
            prop_assert_eq!(strict.len() as u64, total);
        }
    }

    #[test]
    fn verify_agrees_with_exists(p in problem(7, 4, vec![2, 3])) {
        let report = verify_no_fair_ef(&p, EnumerationBudget::default()).unwrap();
        let found = exists_efficient_strongly_ef(&p, EnumerationBudget::default()).unwrap();
        prop_assert_eq!(report.ef_found, found.is_some());
        prop_assert_eq!(report.first_ef_witness, found);
        prop_assert_eq!(report.ef_found, report.min_envy_pairs == 0);
        prop_assert_eq!(report.efficient_count, count_efficient(&p).unwrap());
    }

    #[test]
    fn csv_round_trips(p in problem(10, 6, vec![2, 3, 4]), seed in any::<u64>()) {
        let text = problem_to_csv(&p);
        prop_assert_eq!(parse_availability(&text, p.group_size()).unwrap(), p.clone());
        let x = solve_fair(&p, TieBreakPolicy::SeededRandom { seed }).assignment;
        let written = assignment_to_csv(&x, &p);
        prop_assert_eq!(parse_assignment(&written, &p).unwrap(), x);
    }

    #[test]
    fn games_sum_to_slots(p in problem(8, 5, vec![2, 3, 4])) {
        let x = solve_fair(&p, TieBreakPolicy::DeterministicLex).assignment;
        prop_assert_eq!(games_per_player(&x).iter().sum::<usize>(), x.total_slots());
    }
}

#[test]
fn witness_family_envy_grows_with_group_size() {
    for g in 3..=5 {
        let report =
            verify_no_fair_ef(&build_witness(g).unwrap(), EnumerationBudget::default()).unwrap();
        assert!(!report.ef_found);
        assert!(
            report.min_envy_pairs >= g,
            "g = {g}: {}",
            report.min_envy_pairs
        );
    }
}
