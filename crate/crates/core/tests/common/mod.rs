//! Fuzzing helpers and independent oracles shared by the integration tests.
//!
//! The oracles deliberately avoid the library's geometry code: they use the
//! closed-form embeddings written out here.
#![allow(dead_code)]

use rand::Rng;
use riemann_bregman::Builtin;

/// Closed-form embedding, independent of the library.
pub fn h(b: Builtin, x: f64) -> f64 {
    match b {
        Builtin::Euclidean => x,
        Builtin::Exp => 2.0 * (x / 2.0).exp(),
        Builtin::NegExp => -2.0 * (-x / 2.0).exp(),
        Builtin::Shannon => 2.0 * x.sqrt(),
        Builtin::Burg => x.ln(),
    }
}

/// A coordinate comfortably inside the generator's domain.
pub fn coord<R: Rng>(b: Builtin, rng: &mut R) -> f64 {
    match b {
        Builtin::Euclidean => rng.random_range(-20.0..20.0),
        Builtin::Exp | Builtin::NegExp => rng.random_range(-6.0..6.0),
        Builtin::Shannon | Builtin::Burg => rng.random_range(0.01..50.0),
    }
}

pub fn point<R: Rng>(b: Builtin, dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| coord(b, rng)).collect()
}

pub fn embedded_sq(b: Builtin, x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(&a, &c)| (h(b, a) - h(b, c)).powi(2)).sum()
}

/// Nearest site by brute force on the closed-form embedding; lowest index
/// wins ties.
pub fn argmin_site(b: Builtin, sites: &[Vec<f64>], x: &[f64]) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, s) in sites.iter().enumerate() {
        let d = embedded_sq(b, x, s);
        if d < best.1 {
            best = (i, d);
        }
    }
    best.0
}

/// Largest matched agreement over all k! bijections.
pub fn brute_force_accuracy(assignments: &[usize], labels: &[usize], k: usize) -> f64 {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = 0;
    permute(&mut perm, 0, &mut |p| {
        let hits = assignments.iter().zip(labels).filter(|(&a, &l)| p[a] == l).count();
        best = best.max(hits);
    });
    best as f64 / assignments.len() as f64
}

fn permute(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, f);
        p.swap(i, j);
    }
}

/// Adjusted Rand index from explicit pair counting.
pub fn pair_counting_ari(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut both, mut only_a, mut only_b, mut neither) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => both += 1.0,
                (true, false) => only_a += 1.0,
                (false, true) => only_b += 1.0,
                (false, false) => neither += 1.0,
            }
        }
    }
    let total: f64 = both + only_a + only_b + neither;
    if total == 0.0 {
        // fewer than two points: nothing to disagree on
        return 1.0;
    }
    let pairs_a = both + only_a;
    let pairs_b = both + only_b;
    let expected = pairs_a * pairs_b / total;
    let max = (pairs_a + pairs_b) / 2.0;
    if max == expected {
        return 1.0;
    }
    (both - expected) / (max - expected)
}

pub mod strategies {
    use proptest::prelude::*;
    use riemann_bregman::Builtin;

    pub fn builtin() -> impl Strategy<Value = Builtin> {
        prop::sample::select(Builtin::ALL.to_vec())
    }

    pub fn coord(b: Builtin) -> BoxedStrategy<f64> {
        match b {
            Builtin::Euclidean => (-20.0..20.0f64).boxed(),
            Builtin::Exp | Builtin::NegExp => (-6.0..6.0f64).boxed(),
            Builtin::Shannon | Builtin::Burg => (0.01..50.0f64).boxed(),
        }
    }

    pub fn points(b: Builtin, dim: usize, n: std::ops::RangeInclusive<usize>) -> BoxedStrategy<Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(coord(b), dim), n).boxed()
    }

    /// A generator together with a point cloud in its domain.
    pub fn cloud(dim: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (Builtin, Vec<Vec<f64>>)> {
        builtin().prop_flat_map(move |b| (Just(b), points(b, dim, n.clone())))
    }
}
