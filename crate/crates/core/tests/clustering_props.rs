mod common;

use common::strategies::cloud;
use proptest::prelude::*;
use riemann_bregman::clustering::{
    em_gmm, hac, hcpc, kmeans, EmOptions, HacOptions, HcpcOptions, KMeansOptions, Linkage,
};
use riemann_bregman::geometry::{centroid, squared_euclidean};
use riemann_bregman::quantization::{lloyd, Codebook, LloydOptions};
use riemann_bregman::voronoi::{classify, Flavor, SiteSet};
use riemann_bregman::{Builtin, Generator, PointSet};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

fn distinct(pts: &[Vec<f64>]) -> usize {
    PointSet::new(pts.to_vec()).unwrap().distinct_count()
}

/// Same-cluster relation, which ignores how clusters are numbered.
fn same_partition(a: &[usize], b: &[usize]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

fn embedded_set(g: &Generator, pts: &[Vec<f64>]) -> PointSet {
    PointSet::new(g.embed_all(pts).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn kmeans_equals_euclidean_kmeans_on_embedded_points((b, pts) in cloud(2, 8..=40), k in 1usize..5, seed in 0u64..50) {
        prop_assume!(k <= distinct(&pts));
        let g = b.generator();
        let eu = Builtin::Euclidean.generator();
        let ps = PointSet::new(pts.clone()).unwrap();
        let r = kmeans(&ps, &g, &KMeansOptions::new(k, seed)).unwrap();
        let e = kmeans(&embedded_set(&g, &pts), &eu, &KMeansOptions::new(k, seed)).unwrap();
        prop_assert_eq!(&r.assignments, &e.assignments);
        for (c, ec) in r.centers.iter().zip(&e.centers) {
            let back = g.unembed(ec).unwrap();
            for (x, y) in c.iter().zip(&back) {
                prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()));
            }
        }
    }

    #[test]
    fn result_invariants((b, pts) in cloud(2, 6..=40), k in 1usize..5, seed in 0u64..50, which in 0usize..4) {
        prop_assume!(k <= distinct(&pts));
        let g = b.generator();
        let ps = PointSet::new(pts.clone()).unwrap();
        let r = match which {
            0 => kmeans(&ps, &g, &KMeansOptions::new(k, seed)).unwrap(),
            1 => em_gmm(&ps, &g, &EmOptions::new(k, seed)).unwrap().0,
            2 => hac(&ps, &g, &HacOptions::new(k, Linkage::ALL[seed as usize % 4])).unwrap(),
            _ => match hcpc(&ps, &g, &HcpcOptions::new(k)) {
                Ok(r) => r,
                // a degenerate cloud has no principal axes
                Err(_) => return Ok(()),
            },
        };
        prop_assert_eq!(r.sizes.iter().sum::<usize>(), pts.len());
        prop_assert_eq!(r.centers.len(), r.k);
        for c in 0..r.k {
            let members: Vec<Vec<f64>> = pts.iter().zip(&r.assignments).filter(|(_, &a)| a == c).map(|(p, _)| p.clone()).collect();
            prop_assert!(!members.is_empty());
            prop_assert_eq!(members.len(), r.sizes[c]);
            let want = centroid(&g, &members, None).unwrap();
            for (x, y) in r.centers[c].iter().zip(&want) {
                prop_assert!((x - y).abs() <= 1e-10 * (1.0 + y.abs()));
            }
        }
    }

    #[test]
    fn kmeans_objective_never_rises((b, pts) in cloud(2, 8..=60), k in 1usize..6, seed in 0u64..50) {
        prop_assume!(k <= distinct(&pts));
        let ps = PointSet::new(pts).unwrap();
        let (_, trace) = riemann_bregman::clustering::kmeans_with_trace(&ps, &b.generator(), &KMeansOptions::new(k, seed)).unwrap();
        for w in trace.windows(2) {
            prop_assert!(w[1] <= w[0], "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn deterministic_methods_are_permutation_equivariant((b, pts) in cloud(2, 5..=30), k in 1usize..5, shift in 1usize..29) {
        prop_assume!(k <= distinct(&pts) && distinct(&pts) == pts.len());
        let g = b.generator();
        let n = pts.len();
        let perm: Vec<usize> = (0..n).map(|i| (i * (shift % n).max(1) + 3) % n).collect();
        let mut seen = perm.clone();
        seen.sort();
        seen.dedup();
        prop_assume!(seen.len() == n);
        let permuted: Vec<Vec<f64>> = perm.iter().map(|&i| pts[i].clone()).collect();
        let a = PointSet::new(pts.clone()).unwrap();
        let p = PointSet::new(permuted).unwrap();
        for linkage in Linkage::ALL {
            let ra = hac(&a, &g, &HacOptions::new(k, linkage)).unwrap();
            let rp = hac(&p, &g, &HacOptions::new(k, linkage)).unwrap();
            let pulled: Vec<usize> = perm.iter().map(|&i| ra.assignments[i]).collect();
            prop_assert!(same_partition(&pulled, &rp.assignments), "{}", linkage);
        }
        let mut o = HcpcOptions::new(k);
        o.consolidate = false;
        if let (Ok(ra), Ok(rp)) = (hcpc(&a, &g, &o), hcpc(&p, &g, &o)) {
            let pulled: Vec<usize> = perm.iter().map(|&i| ra.assignments[i]).collect();
            prop_assert!(same_partition(&pulled, &rp.assignments));
        }
    }

    #[test]
    fn full_rank_hcpc_without_consolidation_is_ward((b, pts) in cloud(2, 5..=40), k in 1usize..5) {
        prop_assume!(k <= distinct(&pts));
        let g = b.generator();
        let ps = PointSet::new(pts).unwrap();
        let mut o = HcpcOptions::new(k);
        o.consolidate = false;
        o.n_components = Some(2);
        if let Ok(h) = hcpc(&ps, &g, &o) {
            let w = hac(&ps, &g, &HacOptions::new(k, Linkage::Ward)).unwrap();
            prop_assert!(same_partition(&h.assignments, &w.assignments));
        }
    }

    #[test]
    fn em_likelihood_rises_and_model_is_valid((b, pts) in cloud(2, 10..=60), k in 1usize..4, seed in 0u64..50) {
        prop_assume!(k <= distinct(&pts));
        let ps = PointSet::new(pts).unwrap();
        let (r, m) = em_gmm(&ps, &b.generator(), &EmOptions::new(k, seed)).unwrap();
        prop_assert!((m.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        for w in m.log_likelihood.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-9 * w[0].abs().max(1.0));
        }
        for cov in &m.covariances {
            let (a, bb, d) = (cov[0][0], cov[0][1], cov[1][1]);
            prop_assert_eq!(cov[0][1], cov[1][0]);
            let min_eig = 0.5 * (a + d) - (0.25 * (a - d).powi(2) + bb * bb).sqrt();
            prop_assert!(min_eig >= m.regularization * (1.0 - 1e-6), "{} < {}", min_eig, m.regularization);
        }
        prop_assert!(r.k <= k);
    }

    #[test]
    fn lloyd_equals_euclidean_lloyd_on_embedded_points((b, pts) in cloud(2, 5..=50), rate in 1usize..7, seed in 0u64..50) {
        prop_assume!(rate <= distinct(&pts));
        let g = b.generator();
        let ps = PointSet::new(pts.clone()).unwrap();
        let r = lloyd(&ps, &g, &LloydOptions::new(rate, seed)).unwrap();
        let e = lloyd(&embedded_set(&g, &pts), &Builtin::Euclidean.generator(), &LloydOptions::new(rate, seed)).unwrap();
        prop_assert_eq!(&r.assignments, &e.assignments);
        prop_assert_eq!(&r.distortion_trace, &e.distortion_trace);
        for (c, ec) in r.codebook.codes.iter().zip(&e.codebook.codes) {
            let back = g.unembed(ec).unwrap();
            for (x, y) in c.iter().zip(&back) {
                prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()));
            }
        }
        for w in r.distortion_trace.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        if r.converged {
            for (i, code) in r.codebook.codes.iter().enumerate() {
                prop_assert_eq!(r.codebook.quantize(code).unwrap(), i);
            }
        }
    }

    #[test]
    fn distortion_matches_double_loop((b, pts) in cloud(2, 1..=30), codes in 1usize..5) {
        let g = b.generator();
        let mut cb_codes: Vec<Vec<f64>> = Vec::new();
        for p in &pts {
            if cb_codes.len() < codes && !cb_codes.contains(p) {
                cb_codes.push(p.clone());
            }
        }
        let cb = Codebook::new(g.clone(), cb_codes.clone()).unwrap();
        let got = cb.distortion(&PointSet::new(pts.clone()).unwrap()).unwrap();
        let mut total = 0.0;
        for p in &pts {
            let mut best = f64::INFINITY;
            for c in &cb_codes {
                best = best.min(common::embedded_sq(b, p, c));
            }
            total += best;
        }
        let want = total / pts.len() as f64;
        prop_assert!((got - want).abs() <= 1e-12 * (1.0 + want), "{} vs {}", got, want);
    }
}

/// Bregman divergence of the shannon generator, written out by hand.
fn shannon_left(x: f64, c: f64) -> f64 {
    x * (x / c).ln() - x + c
}

#[test]
fn riemann_and_left_bregman_assignments_differ() {
    // centers 1 and 9, point 3.9: 2|√3.9 - 1| = 1.95 < 2.05 = 2|3 - √3.9|,
    // but the divergence from 3.9 is 2.41 to center 1 and 1.84 to center 9
    let (x, centers): (f64, [f64; 2]) = (3.9, [1.0, 9.0]);
    let riemann_oracle = if (x.sqrt() - 1.0).abs() <= (x.sqrt() - 3.0).abs() { 0 } else { 1 };
    let left_oracle = if shannon_left(x, centers[0]) <= shannon_left(x, centers[1]) { 0 } else { 1 };
    assert_eq!((riemann_oracle, left_oracle), (0, 1));

    let sites = SiteSet::new(Builtin::Shannon.generator(), vec![vec![1.0], vec![9.0]]).unwrap();
    assert_eq!(classify(&[x], &sites, Flavor::Riemann).unwrap(), riemann_oracle);
    assert_eq!(classify(&[x], &sites, Flavor::Left).unwrap(), left_oracle);
    let cb = Codebook::new(Builtin::Shannon.generator(), vec![vec![1.0], vec![9.0]]).unwrap();
    assert_eq!(cb.quantize(&[x]).unwrap(), riemann_oracle);
}

#[test]
fn hcpc_consolidation_does_not_raise_objective() {
    let spec = riemann_bregman::evaluation::SyntheticSpec::default();
    let data = riemann_bregman::evaluation::generate_dataset(&spec).unwrap();
    for b in Builtin::ALL {
        let g = b.generator();
        let emb = data.embed(&g).unwrap();
        let sse = |r: &riemann_bregman::clustering::ClusteringResult| -> f64 {
            let centers = g.embed_all(&r.centers).unwrap();
            emb.iter().zip(&r.assignments).map(|(p, &a)| squared_euclidean(p, &centers[a])).sum()
        };
        let mut o = HcpcOptions::new(4);
        o.consolidate = false;
        let raw = hcpc(&data, &g, &o).unwrap();
        o.consolidate = true;
        let con = hcpc(&data, &g, &o).unwrap();
        assert!(sse(&con) <= sse(&raw) * (1.0 + 1e-12), "{}", b.name());
    }
}
