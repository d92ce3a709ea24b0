//! Euclidean Lloyd iteration and k-means++ seeding on embedded points.
//!
//! Quantization and k-means both run here after mapping samples through `h`;
//! squared Euclidean distances between embedded points are squared
//! Riemann-Bregman distances between the originals.

use rand::Rng;
use rayon::prelude::*;

use crate::geometry::squared_euclidean;

/// Mutable state of a Lloyd run, in embedded coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LloydState {
    pub points: Vec<Vec<f64>>,
    pub codes: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    /// Squared distance of each point to its assigned code.
    pub sq_dists: Vec<f64>,
}

/// Index of the nearest code; ties go to the lowest index.
#[inline]
pub fn nearest(codes: &[Vec<f64>], p: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, c) in codes.iter().enumerate() {
        let d = squared_euclidean(p, c);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

impl LloydState {
    pub fn new(points: Vec<Vec<f64>>, codes: Vec<Vec<f64>>) -> Self {
        let n = points.len();
        let mut state = LloydState {
            points,
            codes,
            assignments: vec![0; n],
            sq_dists: vec![0.0; n],
        };
        state.assign();
        state
    }

    /// Assignment step: every point goes to its nearest code.
    pub fn assign(&mut self) {
        let codes = &self.codes;
        let (a, d): (Vec<usize>, Vec<f64>) = self
            .points
            .par_iter()
            .map(|p| nearest(codes, p))
            .unzip();
        self.assignments = a;
        self.sq_dists = d;
    }

    /// Mean squared distance to assigned codes, summed in index order.
    pub fn distortion(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        self.sq_dists.iter().sum::<f64>() / self.points.len() as f64
    }

    pub fn cell_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.codes.len()];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }

    /// Update step: each code with members moves to the mean of its cell.
    /// Sums run in point order so the result does not depend on scheduling.
    pub fn update(&mut self) {
        let dim = self.codes.first().map_or(0, Vec::len);
        let mut sums = vec![vec![0.0; dim]; self.codes.len()];
        let mut counts = vec![0usize; self.codes.len()];
        for (p, &a) in self.points.iter().zip(&self.assignments) {
            counts[a] += 1;
            for (s, v) in sums[a].iter_mut().zip(p) {
                *s += v;
            }
        }
        for ((code, sum), &count) in self.codes.iter_mut().zip(sums).zip(&counts) {
            if count > 0 {
                let n = count as f64;
                *code = sum.into_iter().map(|s| s / n).collect();
            }
        }
    }
}

/// Reseeds every empty cell at the point currently farthest from its own
/// code (ties to the lowest index), one cell at a time. Returns how many
/// codes were replaced. Distortion never increases.
pub fn empty_cell_repair(state: &mut LloydState) -> usize {
    let mut repaired = 0;
    let mut sizes = state.cell_sizes();
    for cell in 0..state.codes.len() {
        if sizes[cell] > 0 {
            continue;
        }
        let mut far = None::<(usize, f64)>;
        for (i, &d) in state.sq_dists.iter().enumerate() {
            // a point whose cell would be emptied is not a candidate
            if sizes[state.assignments[i]] < 2 {
                continue;
            }
            if far.is_none_or(|(_, best)| d > best) {
                far = Some((i, d));
            }
        }
        let Some((i, d)) = far else { break };
        if d <= 0.0 {
            break;
        }
        state.codes[cell] = state.points[i].clone();
        sizes[state.assignments[i]] -= 1;
        sizes[cell] += 1;
        state.assignments[i] = cell;
        state.sq_dists[i] = 0.0;
        repaired += 1;
    }
    repaired
}

/// Index drawn with probability proportional to `weights`; `None` when all
/// weights are zero. Zero-weight entries are never returned.
fn sample_weighted<R: Rng>(weights: &[f64], total: f64, rng: &mut R) -> Option<usize> {
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut pick = None;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        pick = Some(i);
        if acc > target {
            break;
        }
    }
    pick
}

/// Greedy k-means++ seeding: the first center uniformly, then at each step
/// `2 + ⌊ln k⌋` candidates are drawn with probability proportional to the
/// squared distance to the nearest chosen center, and the one that most
/// lowers the total squared distance is kept. Assumes `k` does not exceed
/// the number of distinct points.
pub fn kmeans_plus_plus<R: Rng>(points: &[Vec<f64>], k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centers = Vec::with_capacity(k);
    if k == 0 || n == 0 {
        return centers;
    }
    let trials = 2 + (k as f64).ln().floor() as usize;
    let first = rng.random_range(0..n);
    centers.push(points[first].clone());
    let mut d2: Vec<f64> = points
        .iter()
        .map(|p| squared_euclidean(p, &centers[0]))
        .collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        if total <= 0.0 {
            break;
        }
        // (potential, candidate, distances after adding it)
        let mut best: Option<(f64, usize, Vec<f64>)> = None;
        for _ in 0..trials {
            let i = sample_weighted(&d2, total, rng).expect("positive total weight");
            let updated: Vec<f64> = d2
                .par_iter()
                .zip(points)
                .map(|(&d, p)| d.min(squared_euclidean(p, &points[i])))
                .collect();
            let potential: f64 = updated.iter().sum();
            if best.as_ref().is_none_or(|b| potential < b.0) {
                best = Some((potential, i, updated));
            }
        }
        let (_, chosen, updated) = best.expect("at least two trials");
        centers.push(points[chosen].clone());
        d2 = updated;
    }
    centers
}

/// Outcome of [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct LloydRun {
    pub state: LloydState,
    /// Distortion after each assignment step (including repairs).
    pub trace: Vec<f64>,
    pub iterations: usize,
    /// Assignments stopped changing, so every code is the mean of its cell.
    pub converged: bool,
}

/// Lloyd iteration from the given initial codes.
///
/// Each iteration assigns, repairs empty cells, records the distortion, then
/// stops if the assignment is unchanged (a fixed point) or the relative
/// improvement fell below `tol`; otherwise codes move to their cell means.
pub fn run(points: Vec<Vec<f64>>, init: Vec<Vec<f64>>, max_iters: usize, tol: f64) -> LloydRun {
    let mut state = LloydState {
        assignments: vec![usize::MAX; points.len()],
        sq_dists: vec![0.0; points.len()],
        points,
        codes: init,
    };
    let mut trace: Vec<f64> = Vec::new();
    let mut previous: Option<Vec<usize>> = None;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iters.max(1) {
        iterations += 1;
        state.assign();
        // bounded: each repair strictly lowers the number of empty cells
        for _ in 0..state.codes.len() {
            if empty_cell_repair(&mut state) == 0 {
                break;
            }
            state.assign();
        }
        let distortion = state.distortion();
        let improvement = trace.last().map(|&prev| prev - distortion);
        let prev_d = trace.last().copied();
        trace.push(distortion);
        if previous.as_ref() == Some(&state.assignments) {
            converged = true;
            break;
        }
        if let (Some(gain), Some(prev)) = (improvement, prev_d) {
            if prev > 0.0 && gain <= tol * prev {
                break;
            }
        }
        state.update();
        previous = Some(state.assignments.clone());
    }
    LloydRun {
        state,
        trace,
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line(xs: &[f64]) -> Vec<Vec<f64>> {
        xs.iter().map(|&x| vec![x]).collect()
    }

    #[test]
    fn repair_is_identity_without_empty_cells() {
        let mut s = LloydState::new(line(&[0.0, 1.0, 10.0]), line(&[0.0, 10.0]));
        let before = s.clone();
        assert_eq!(empty_cell_repair(&mut s), 0);
        assert_eq!(s, before);
    }

    #[test]
    fn repair_replaces_exactly_one_code() {
        // code at 100 attracts nothing
        let mut s = LloydState::new(line(&[0.0, 1.0, 2.0, 9.0, 10.0]), line(&[0.0, 10.0, 100.0]));
        assert_eq!(s.cell_sizes(), vec![3, 2, 0]);
        let before = s.codes.clone();
        let d_before = s.distortion();
        assert_eq!(empty_cell_repair(&mut s), 1);
        let changed = before.iter().zip(&s.codes).filter(|(a, b)| a != b).count();
        assert_eq!(changed, 1);
        // farthest point is 2.0 (distance² 4 to code 0)
        assert_eq!(s.codes[2], vec![2.0]);
        s.assign();
        assert!(s.cell_sizes().iter().all(|&c| c > 0));
        assert!(s.distortion() <= d_before);
    }

    #[test]
    fn repair_repeats_until_cells_filled() {
        let pts = line(&[0.0, 0.1, 0.2, 0.3, 5.0, 5.1]);
        let mut s = LloydState::new(pts, line(&[0.0, 50.0, 60.0, 70.0]));
        let mut rounds = 0;
        while s.cell_sizes().contains(&0) {
            assert!(empty_cell_repair(&mut s) > 0);
            s.assign();
            rounds += 1;
            assert!(rounds < 10);
        }
    }

    #[test]
    fn plus_plus_is_deterministic_and_distinct() {
        let pts: Vec<Vec<f64>> = (0..50).map(|i| vec![(i % 7) as f64, (i / 7) as f64]).collect();
        let a = kmeans_plus_plus(&pts, 5, &mut ChaCha8Rng::seed_from_u64(3));
        let b = kmeans_plus_plus(&pts, 5, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
        for i in 0..a.len() {
            for j in 0..i {
                assert_ne!(a[i], a[j]);
            }
        }
    }

    #[test]
    fn run_reaches_fixed_point() {
        let pts = line(&[0.0, 1.0, 2.0, 10.0, 11.0, 12.0]);
        let r = run(pts, line(&[0.0, 1.0]), 100, 0.0);
        assert!(r.converged);
        let mut codes = r.state.codes.clone();
        codes.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert_eq!(codes, line(&[1.0, 11.0]));
        assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
    }
}
