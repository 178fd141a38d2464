mod common;

use hypwalk::hypgeom::{four_point_defect, gromov_product, in_shadow, Shadow};
use hypwalk::models::{Classification, FareyElement, FareyGroup, FreeGroup, FreeWord, Model, Slope};
use hypwalk::models::farey_slope_distance;
use hypwalk::stats::{chernoff_bound, clopper_pearson, fit_exponential_decay};
use hypwalk::walk::{iterated_decomposition, sample_iterated, sample_walk_stream, StepDistribution};
use proptest::prelude::*;

fn word() -> impl Strategy<Value = String> {
    "[abAB]{0,40}"
}

fn w(s: &str) -> FreeWord {
    s.parse().unwrap()
}

fn farey_word() -> impl Strategy<Value = FareyElement> {
    proptest::collection::vec(0usize..4, 0..24).prop_map(|idx| {
        let gens = FareyGroup.generators();
        idx.into_iter()
            .fold(FareyElement::identity(), |g, i| g.mul(&gens[i]))
    })
}

fn slope() -> impl Strategy<Value = Slope> {
    (-150i64..150, 0i64..=50).prop_filter_map("coprime", |(p, q)| Slope::new(p, q).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn free_reduction_matches_stack_oracle(s in word()) {
        prop_assert_eq!(w(&s).to_string(), common::canonical(&s));
    }

    #[test]
    fn free_group_axioms(a in word(), b in word(), c in word()) {
        let (a, b, c) = (w(&a), w(&b), w(&c));
        let m = &FreeGroup;
        prop_assert_eq!(m.multiply(&m.multiply(&a, &b), &c), m.multiply(&a, &m.multiply(&b, &c)));
        prop_assert!(m.multiply(&a, &m.invert(&a)).is_empty());
        prop_assert_eq!(m.invert(&m.multiply(&a, &b)), m.multiply(&m.invert(&b), &m.invert(&a)));
    }

    #[test]
    fn free_metric_is_left_invariant_and_tree_like(g in word(), a in word(), b in word(), c in word()) {
        let m = &FreeGroup;
        let (g, a, b, c) = (w(&g), w(&a), w(&b), w(&c));
        let d = m.distance(&a, &b);
        prop_assert_eq!(m.distance(&m.multiply(&g, &a), &m.multiply(&g, &b)), d);
        prop_assert_eq!(m.norm(&m.multiply(&m.invert(&a), &b)), d);
        prop_assert_eq!(d, m.distance(&b, &a));
        prop_assert!(m.distance(&a, &c) <= d + m.distance(&b, &c));
        prop_assert_eq!(four_point_defect(m, [&a, &b, &c, &g]), 0.0);
    }

    #[test]
    fn gromov_product_is_symmetric_and_bounded(z in word(), x in word(), y in word()) {
        let m = &FreeGroup;
        let (z, x, y) = (w(&z), w(&x), w(&y));
        let p = gromov_product(m, &z, &x, &y);
        prop_assert_eq!(p, gromov_product(m, &z, &y, &x));
        prop_assert!(p >= 0.0);
        prop_assert!(p <= m.distance(&z, &x).min(m.distance(&z, &y)));
    }

    #[test]
    fn tree_product_is_common_prefix(x in word(), y in word()) {
        let (x, y) = (w(&x), w(&y));
        let p = gromov_product(&FreeGroup, &FreeWord::identity(), &x, &y);
        prop_assert_eq!(p, x.common_prefix_len(&y) as f64);
    }

    #[test]
    fn shadows_shrink_as_radius_grows(z in word(), x in word(), y in word(), r in -2.0f64..20.0, dr in 0.0f64..5.0) {
        let (z, x, y) = (w(&z), w(&x), w(&y));
        let wide = Shadow::new(z.clone(), x.clone(), r - dr);
        let narrow = Shadow::new(z, x, r);
        prop_assert!(!in_shadow(&FreeGroup, &narrow, &y) || in_shadow(&FreeGroup, &wide, &y));
    }

    #[test]
    fn translation_length_is_cyclic_length(s in word(), n in 1usize..=5) {
        let g = w(&s);
        let tau = FreeGroup.translation_length(&g, 1).unwrap().value;
        prop_assert_eq!(tau, common::cyclic_length(&s) as f64);
        prop_assert_eq!(tau, FreeGroup.conjugacy_min_length(&g).length);
        prop_assert_eq!(FreeGroup.translation_length(&g.pow(n), 1).unwrap().value, n as f64 * tau);
    }

    #[test]
    fn conjugacy_decomposition_reassembles(s in word()) {
        let g = w(&s);
        let m = FreeGroup.conjugacy_min_length(&g);
        let back = FreeGroup.multiply(&FreeGroup.multiply(&m.conjugator, &m.core), &m.conjugator.inverse());
        prop_assert_eq!(back, g);
        prop_assert!(m.core.is_cyclically_reduced());
    }

    #[test]
    fn farey_determinant_stays_one(g in farey_word(), h in farey_word()) {
        let p = FareyGroup.multiply(&g, &FareyGroup.invert(&h));
        prop_assert_eq!(p.determinant(), 1.into());
    }

    #[test]
    fn farey_metric_left_invariant(g in farey_word(), h in farey_word(), k in farey_word()) {
        let m = &FareyGroup;
        let d = m.distance(&g, &h);
        prop_assert_eq!(m.norm(&m.multiply(&m.invert(&g), &h)), d);
        prop_assert_eq!(m.distance(&m.multiply(&k, &g), &m.multiply(&k, &h)), d);
    }

    #[test]
    fn slope_distance_is_a_metric(u in slope(), v in slope(), x in slope()) {
        let d = |a: &Slope, b: &Slope| farey_slope_distance(a, b);
        prop_assert_eq!(d(&u, &v), d(&v, &u));
        prop_assert!(d(&u, &x) <= d(&u, &v) + d(&v, &x));
        prop_assert_eq!(d(&u, &v) == 0, u == v);
        prop_assert_eq!(d(&u, &v) == 1, u.is_adjacent(&v));
    }

    #[test]
    fn farey_translation_positive_iff_anosov(g in farey_word()) {
        let t = FareyGroup.translation_length(&g, 64).unwrap();
        if t.stabilized {
            prop_assert_eq!(t.value > 0.0, g.classify() == Classification::PseudoAnosov);
        }
    }

    #[test]
    fn backtracking_is_nonnegative_and_consistent(seed in any::<u64>(), k in 1usize..8) {
        let dist = StepDistribution::uniform(FreeGroup.generators()).unwrap();
        let walk = sample_walk_stream(&FreeGroup, &dist, 8 * k, seed, 3);
        let dec = iterated_decomposition(&FreeGroup, &walk, k).unwrap();
        let streamed = sample_iterated(&FreeGroup, &dist, k, 8, seed, 3).unwrap();
        prop_assert_eq!(&dec, &streamed);
        for i in 0..dec.len() {
            prop_assert!(dec.z[i] >= 0.0);
            prop_assert_eq!(dec.x[i], dec.y[i] - dec.z[i]);
        }
        for i in 0..walk.len() {
            let step = FreeGroup.distance(&walk.locations[i], &walk.locations[i + 1]);
            prop_assert!(walk.distances[i + 1] <= walk.distances[i] + step);
        }
    }

    #[test]
    fn clopper_pearson_brackets_the_estimate(n in 1u64..2000, frac in 0.0f64..=1.0) {
        let k = (frac * n as f64).round() as u64;
        let (lo, hi) = clopper_pearson(k, n, 0.95);
        let p = k as f64 / n as f64;
        prop_assert!(lo <= p + 1e-12 && p <= hi + 1e-12);
        prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
    }

    #[test]
    fn exact_exponential_is_recovered(c in 0.05f64..0.95, k in 0.1f64..10.0) {
        let pts: Vec<(f64, f64)> = (1..10).map(|x| (x as f64, k * c.powi(x))).collect();
        let fit = fit_exponential_decay(&pts).unwrap();
        prop_assert!((fit.c - c).abs() < 1e-9);
        prop_assert!((fit.k - k).abs() < 1e-7 * k.max(1.0));
        prop_assert!(fit.r_squared > 1.0 - 1e-9);
    }

    #[test]
    fn chernoff_bound_matches_log_form(t in 0.0f64..5.0, n in 1u32..50) {
        let direct = chernoff_bound(t, n).unwrap();
        let log_form = (n as f64 * ((1.0 + t).ln() - t)).exp();
        prop_assert!((direct - log_form).abs() <= 1e-12 * log_form.max(1e-300) + 1e-300);
        prop_assert!(direct <= 1.0);
    }
}

#[test]
fn sample_streams_are_independent_of_order() {
    let dist = StepDistribution::uniform(FreeGroup.generators()).unwrap();
    let forward: Vec<_> = (0..16).map(|i| sample_walk_stream(&FreeGroup, &dist, 30, 9, i)).collect();
    let backward: Vec<_> = (0..16).rev().map(|i| sample_walk_stream(&FreeGroup, &dist, 30, 9, i)).collect();
    for (a, b) in forward.iter().zip(backward.iter().rev()) {
        assert_eq!(a, b);
    }
    assert_ne!(forward[0].steps, forward[1].steps);
}
