mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;
use rawlsian_core::analysis::{
    bvn_decompose, bvn_term_bound, egalitarian_check, egalitarian_relaxed, envy_report, rank_distribution,
    rank_efficient, rank_efficient_brute_force, sd_efficient,
};
use rawlsian_core::lp::{build_bistochastic, solve, LinearProgram, LpStatus, Relation, Sense};
use rawlsian_core::ratio::{q, qi};
use rawlsian_core::rules::{
    fractional_boston, maxmin_cardinal, mtav, probabilistic_serial, rawlsian, sigma_minimal, CardinalUtilityProfile,
    Extraction, LpForm, SigmaMinimal,
};
use rawlsian_core::{block_vector, cumulative_vector, sd_dominates, Assignment, PreferenceProfile, SigmaOrder, Q};

fn order(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

fn profile_in(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PreferenceProfile> {
    sizes.prop_flat_map(|n| proptest::collection::vec(order(n), n))
        .prop_map(|orders| PreferenceProfile::from_orders(orders).unwrap())
}

/// Convex mixture of up to four permutation matrices.
fn assignment(n: usize) -> impl Strategy<Value = Assignment> {
    proptest::collection::vec((order(n), 1i64..=5), 1..=4).prop_map(move |terms| {
        let total: i64 = terms.iter().map(|t| t.1).sum();
        let mut p = vec![vec![Q::zero(); n]; n];
        for (perm, w) in terms {
            for (i, &o) in perm.iter().enumerate() {
                p[i][o] += q(w, total);
            }
        }
        Assignment::new(p).unwrap()
    })
}

fn profile_and_assignment(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (PreferenceProfile, Assignment)> {
    sizes.prop_flat_map(|n| (proptest::collection::vec(order(n), n), assignment(n)))
        .prop_map(|(orders, x)| (PreferenceProfile::from_orders(orders).unwrap(), x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ranks_invert_orders(p in profile_in(1..=8)) {
        for i in 0..p.n() {
            for k in 1..=p.n() {
                prop_assert_eq!(p.rank(i, p.object_at(i, k)), k);
            }
        }
    }

    #[test]
    fn cumulative_vectors_are_monotone((p, x) in profile_and_assignment(1..=6)) {
        for i in 0..p.n() {
            let c = cumulative_vector(&p, &x, i).unwrap();
            prop_assert!(c.b(1).is_one());
            prop_assert!(c.b(p.n() + 1).is_zero());
            for k in 1..=p.n() {
                prop_assert!(c.b(k) >= c.b(k + 1));
                prop_assert_eq!(c.t(k), Q::one() - c.b(k + 1));
            }
        }
    }

    #[test]
    fn block_vector_shape((p, x) in profile_and_assignment(1..=6)) {
        let n = p.n();
        let b = block_vector(&p, &x, &SigmaOrder::rawlsian(n)).unwrap();
        prop_assert_eq!(b.entries().len(), n * (n - 1));
        for j in 0..b.num_blocks() {
            prop_assert!(b.block(j).windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn sd_dominance_is_reflexive((p, x) in profile_and_assignment(1..=6)) {
        for i in 0..p.n() {
            prop_assert!(sd_dominates(&p, i, x.row(i), x.row(i)));
        }
    }

    #[test]
    fn rank_distribution_recomposes((p, x) in profile_and_assignment(1..=6)) {
        let n = p.n();
        let d = rank_distribution(&p, &x).unwrap();
        prop_assert_eq!(&d.m[0], &qi(n as i64));
        prop_assert!(d.m.windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(d.e.iter().sum::<Q>(), qi(n as i64));
        for k in 1..=n {
            let direct: Q = (0..n).map(|i| cumulative_vector(&p, &x, i).unwrap().b(k)).sum();
            prop_assert_eq!(d.at(k), direct);
        }
    }

    #[test]
    fn birkhoff_recomposes(x in (1usize..=6).prop_flat_map(assignment)) {
        let d = bvn_decompose(&x).unwrap();
        prop_assert_eq!(d.recompose(), x.rows().to_vec());
        prop_assert!(d.len() <= bvn_term_bound(x.n()));
        prop_assert!(d.terms.iter().all(|(w, _)| w > &Q::zero()));
        prop_assert!(d.terms.iter().map(|(w, _)| w.clone()).sum::<Q>().is_one());
    }

    #[test]
    fn efficiency_methods_agree((p, x) in profile_and_assignment(1..=6)) {
        // sd_efficient errors when the graph and LP verdicts differ
        let r = sd_efficient(&p, &x).unwrap();
        prop_assert_eq!(r.efficient, r.cycle.is_none());
    }

    #[test]
    fn rank_efficiency_matches_enumeration((p, x) in profile_and_assignment(1..=4)) {
        prop_assert_eq!(rank_efficient(&p, &x).unwrap(), rank_efficient_brute_force(&p, &x).unwrap());
    }

    #[test]
    fn probabilistic_serial_is_envy_free(p in profile_in(1..=8)) {
        let x = probabilistic_serial(&p).unwrap();
        let r = envy_report(&p, &x).unwrap();
        prop_assert_eq!(r.enviers, 0);
    }

    #[test]
    fn fractional_boston_is_bistochastic(p in profile_in(1..=7)) {
        // construction validates the matrix
        let x = fractional_boston(&p).unwrap();
        for i in 0..p.n() {
            prop_assert!(x.get(i, p.object_at(i, 1)) > &Q::zero());
        }
    }

    #[test]
    fn mtav_aggregates_do_not_depend_on_seed(p in profile_in(1..=7), s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = mtav(&p, s1).unwrap();
        let b = mtav(&p, s2).unwrap();
        prop_assert_eq!((a.bottleneck, a.rank_sum), (b.bottleneck, b.rank_sum));
        prop_assert_eq!(mtav(&p, s1).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn encodings_and_extractions_agree(p in profile_in(1..=5), rev in any::<bool>()) {
        let n = p.n();
        let sigma = if rev { SigmaOrder::rawlsian(n) } else { SigmaOrder::ascending(n) };
        let fast = SigmaMinimal::new().extraction(Extraction::CrossCheck).solve(&p, &sigma).unwrap();
        let plain = SigmaMinimal::new()
            .form(LpForm::Verbatim)
            .use_witnesses(false)
            .extraction(Extraction::FeasibilityLp)
            .solve(&p, &sigma)
            .unwrap();
        prop_assert_eq!(&fast.assignment, &plain.assignment);
        prop_assert_eq!(&fast.ledger, &plain.ledger);
        prop_assert!(plain.lp_solves <= rawlsian_core::rules::lp_solve_bound(n) + 1);
    }

    #[test]
    fn rawlsian_is_sigma_minimal_for_descending_order(p in profile_in(1..=6)) {
        prop_assert_eq!(rawlsian(&p).unwrap(), sigma_minimal(&p, &SigmaOrder::rawlsian(p.n())).unwrap());
    }

    #[test]
    fn relaxed_egalitarian_is_sufficient((p, y) in profile_and_assignment(1..=4)) {
        let relaxed = egalitarian_relaxed(&p, &y).unwrap();
        if !relaxed.egalitarian {
            prop_assert!(!egalitarian_check(&p, &y).unwrap().egalitarian);
        }
    }

    #[test]
    fn egalitarian_witness_is_valid((p, y) in profile_and_assignment(1..=4)) {
        if let Some((j, x)) = egalitarian_check(&p, &y).unwrap().witness {
            for i in 0..p.n() {
                let xi = cumulative_vector(&p, &x, i).unwrap();
                let yj = cumulative_vector(&p, &y, j).unwrap();
                prop_assert!((1..=p.n()).all(|k| xi.t(k) >= yj.t(k)));
                prop_assert!((1..=p.n()).any(|k| xi.t(k) > yj.t(k)));
            }
        }
    }

    #[test]
    fn sd_improvement_raises_worst_utility((p, y) in profile_and_assignment(1..=5), gaps in proptest::collection::vec(1i64..=9, 5)) {
        // any x whose rows sd-dominate y's rows gives every consistent
        // utility profile a weakly higher minimum
        let n = p.n();
        let mut alp = build_bistochastic(n);
        let mut slack = Vec::new();
        for i in 0..n {
            for k in 1..n {
                let s = alp.lp.add_var(format!("s_{i}_{k}"));
                slack.push((s, Q::one()));
                let mut terms: Vec<_> = (1..=k).map(|r| (alp.x[i][p.object_at(i, r)], Q::one())).collect();
                terms.push((s, -Q::one()));
                let floor: Q = (1..=k).map(|r| y.get(i, p.object_at(i, r)).clone()).sum();
                alp.lp.add_constraint(terms, Relation::Ge, floor).unwrap();
            }
        }
        alp.lp.set_objective(Sense::Maximize, slack).unwrap();
        let sol = solve(&alp.lp).unwrap();
        let x = Assignment::new(alp.x.iter().map(|r| r.iter().map(|&v| sol.value(v).clone()).collect()).collect()).unwrap();
        let mut values = vec![qi(0)];
        for g in gaps.iter().take(n.saturating_sub(1)) {
            let next = values.last().unwrap() + qi(*g);
            values.push(next);
        }
        values.reverse();
        let u = CardinalUtilityProfile::from_rank_values(&p, &values).unwrap();
        prop_assert!(u.min_expected(&x) >= u.min_expected(&y));
        prop_assert!(maxmin_cardinal(&p, &u).unwrap().value >= u.min_expected(&x));
    }
}

/// Random dense LP `max c·x, A x <= b, x >= 0` and its dual
/// `min b·y, Aᵀ y >= c, y >= 0` share their optimum whenever both are feasible.
fn primal_dual(a: &[Vec<i64>], b: &[i64], c: &[i64]) -> (LpStatus, Option<Q>, LpStatus, Option<Q>) {
    let (m, k) = (a.len(), c.len());
    let mut primal = LinearProgram::new();
    let xs: Vec<_> = (0..k).map(|j| primal.add_var(format!("x{j}"))).collect();
    for (row, &rhs) in a.iter().zip(b) {
        primal.add_constraint(xs.iter().zip(row).map(|(&v, &c)| (v, qi(c))), Relation::Le, qi(rhs)).unwrap();
    }
    primal.set_objective(Sense::Maximize, xs.iter().zip(c).map(|(&v, &c)| (v, qi(c)))).unwrap();
    let mut dual = LinearProgram::new();
    let ys: Vec<_> = (0..m).map(|i| dual.add_var(format!("y{i}"))).collect();
    for j in 0..k {
        dual.add_constraint(ys.iter().enumerate().map(|(i, &v)| (v, qi(a[i][j]))), Relation::Ge, qi(c[j])).unwrap();
    }
    dual.set_objective(Sense::Minimize, ys.iter().zip(b).map(|(&v, &b)| (v, qi(b)))).unwrap();
    let ps = solve(&primal).unwrap();
    let ds = solve(&dual).unwrap();
    (ps.status, ps.objective, ds.status, ds.objective)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn strong_duality(
        (a, b, c) in (1usize..=5, 1usize..=5).prop_flat_map(|(m, k)| (
            proptest::collection::vec(proptest::collection::vec(-4i64..=6, k), m),
            proptest::collection::vec(-3i64..=8, m),
            proptest::collection::vec(-5i64..=5, k),
        ))
    ) {
        let (pst, pv, dst, dv) = primal_dual(&a, &b, &c);
        match (pst, dst) {
            (LpStatus::Optimal, LpStatus::Optimal) => prop_assert_eq!(pv, dv),
            (LpStatus::Unbounded, d) => prop_assert_eq!(d, LpStatus::Infeasible),
            (p, LpStatus::Unbounded) => prop_assert_eq!(p, LpStatus::Infeasible),
            (LpStatus::Optimal, d) | (d, LpStatus::Optimal) => prop_assert!(false, "one side optimal, other {:?}", d),
            _ => {}
        }
    }
}
