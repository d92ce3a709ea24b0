mod common;

use common::strategies::{builtin, cloud, coord, points};
use common::{embedded_sq, h};
use proptest::prelude::*;
use riemann_bregman::geometry::{
    bregman_divergence, centroid, distance, dual_distance, euclidean, geodesic, squared_distance,
};
use riemann_bregman::Builtin;

fn pair(dim: usize) -> impl Strategy<Value = (Builtin, Vec<f64>, Vec<f64>)> {
    builtin().prop_flat_map(move |b| {
        (
            Just(b),
            prop::collection::vec(coord(b), dim),
            prop::collection::vec(coord(b), dim),
        )
    })
}

proptest! {
    #[test]
    fn round_trip_and_monotone((b, x, y) in pair(1)) {
        let g = b.generator();
        let (x, y) = (x[0], y[0]);
        let back = g.h_inverse(g.h(x));
        prop_assert!((back - x).abs() <= 1e-10 * (1.0 + x.abs()));
        if x < y {
            prop_assert!(g.h(x) < g.h(y));
        }
        let eps = 1e-5;
        let fd = (g.h(x + eps) - g.h(x - eps)) / (2.0 * eps);
        if g.domain().contains(x - eps) {
            prop_assert!((fd - g.phi_double_prime(x).sqrt()).abs() <= 1e-5 * (1.0 + fd.abs()));
        }
    }

    #[test]
    fn distance_is_embedded_euclidean((b, x, y) in pair(3)) {
        let g = b.generator();
        let hx: Vec<f64> = x.iter().map(|&v| g.h(v)).collect();
        let hy: Vec<f64> = y.iter().map(|&v| g.h(v)).collect();
        prop_assert_eq!(distance(&g, &x, &y).unwrap(), euclidean(&hx, &hy));
        // against the closed forms written out in the test helpers
        let oracle = embedded_sq(b, &x, &y).sqrt();
        let d = distance(&g, &x, &y).unwrap();
        prop_assert!((d - oracle).abs() <= 1e-12 * (1.0 + oracle));
    }

    #[test]
    fn metric_axioms((b, pts) in cloud(2, 3..=3)) {
        let g = b.generator();
        let d = |i: usize, j: usize| distance(&g, &pts[i], &pts[j]).unwrap();
        prop_assert_eq!(d(0, 0), 0.0);
        prop_assert_eq!(d(0, 1), d(1, 0));
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-12);
    }

    #[test]
    fn dual_distance_agrees((b, x, y) in pair(2)) {
        let g = b.generator();
        let d = distance(&g, &x, &y).unwrap();
        let dd = dual_distance(&g, &x, &y).unwrap();
        prop_assert!((d - dd).abs() <= 1e-9 * (1.0 + d), "{} vs {}", d, dd);
    }

    #[test]
    fn geodesic_is_proportional((b, x, y) in pair(2), s in 0.0..=1.0f64, t in 0.0..=1.0f64) {
        let g = b.generator();
        let pts = geodesic(&g, &x, &y, &[s, t]).unwrap();
        let got = distance(&g, &pts[0].point, &pts[1].point).unwrap();
        let want = (t - s).abs() * distance(&g, &x, &y).unwrap();
        prop_assert!((got - want).abs() <= 1e-9 * want.max(1e-9), "{} vs {}", got, want);
        let ends = geodesic(&g, &x, &y, &[0.0, 1.0]).unwrap();
        for (a, e) in ends[0].point.iter().zip(&x) {
            prop_assert!((a - e).abs() <= 1e-10 * (1.0 + e.abs()));
        }
    }

    #[test]
    fn geodesic_rejects_extrapolation((b, x, y) in pair(2), t in 1.0001..5.0f64) {
        let g = b.generator();
        prop_assert!(geodesic(&g, &x, &y, &[t]).is_err());
        prop_assert!(geodesic(&g, &x, &y, &[-t]).is_err());
    }

    #[test]
    fn centroid_beats_perturbations((b, pts) in cloud(2, 1..=12), du in -0.5..0.5f64, dv in -0.5..0.5f64) {
        let g = b.generator();
        let c = centroid(&g, &pts, None).unwrap();
        let cost = |q: &[f64]| -> f64 { pts.iter().map(|p| squared_distance(&g, p, q).unwrap()).sum() };
        let hc = g.embed(&c).unwrap();
        let moved = [hc[0] + du, hc[1] + dv];
        if g.embedded_range().contains(moved[0]) && g.embedded_range().contains(moved[1]) {
            let q = g.unembed(&moved).unwrap();
            prop_assert!(cost(&c) <= cost(&q) * (1.0 + 1e-12));
        }
        // the closed form: H of the embedded mean, coordinate by coordinate
        for j in 0..2 {
            let m = pts.iter().map(|p| h(b, p[j])).sum::<f64>() / pts.len() as f64;
            prop_assert!((h(b, c[j]) - m).abs() <= 1e-9 * (1.0 + m.abs()));
        }
    }

    #[test]
    fn weighted_centroid_matches_repetition((b, pts) in cloud(2, 1..=6), reps in prop::collection::vec(1usize..4, 6)) {
        let g = b.generator();
        let w: Vec<f64> = reps[..pts.len()].iter().map(|&r| r as f64).collect();
        let mut repeated = Vec::new();
        for (p, &r) in pts.iter().zip(&reps) {
            for _ in 0..r {
                repeated.push(p.clone());
            }
        }
        let a = centroid(&g, &pts, Some(&w)).unwrap();
        let c = centroid(&g, &repeated, None).unwrap();
        for (x, y) in a.iter().zip(&c) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn bregman_divergence_nonnegative((b, x, y) in pair(2)) {
        let g = b.generator();
        prop_assert!(bregman_divergence(&g, &x, &y).unwrap() >= 0.0);
        prop_assert_eq!(bregman_divergence(&g, &x, &x).unwrap(), 0.0);
    }

    #[test]
    fn scaling_h_moves_no_argmin((b, pts) in cloud(2, 2..=10), q in 0usize..10) {
        let g = b.generator();
        let g3 = g.scaled(3.0).unwrap();
        let c = centroid(&g, &pts, None).unwrap();
        let c3 = centroid(&g3, &pts, None).unwrap();
        for (x, y) in c.iter().zip(&c3) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()));
        }
        let query = &pts[q % pts.len()];
        let nn = |g: &riemann_bregman::Generator| {
            (0..pts.len())
                .min_by(|&i, &j| {
                    distance(g, query, &pts[i]).unwrap().total_cmp(&distance(g, query, &pts[j]).unwrap())
                })
                .unwrap()
        };
        prop_assert_eq!(nn(&g), nn(&g3));
    }

    #[test]
    fn out_of_domain_is_an_error(x in -50.0..=0.0f64) {
        for b in [Builtin::Shannon, Builtin::Burg] {
            let g = b.generator();
            prop_assert!(distance(&g, &[x, 1.0], &[1.0, 1.0]).is_err());
        }
    }
}

#[test]
fn points_strategy_stays_in_domain() {
    use proptest::strategy::ValueTree;
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for b in Builtin::ALL {
        let pts = points(b, 2, 5..=5).new_tree(&mut runner).unwrap().current();
        let g = b.generator();
        for p in &pts {
            assert!(g.check_domain(p).is_ok());
        }
    }
}
