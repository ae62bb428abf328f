//! Maximin search over independent distributions with a fixed root
//! probability.
//!
//! The last leaf is not a free coordinate. The root probability is affine in
//! any single leaf probability, so it is solved for exactly from the others;
//! points where the solution leaves `[0, 1]` are infeasible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{deviation_from_mean, Argmax, EquilibriumReport, RootConstraint, ARGMAX_TOL, CONSTRAINT_TOL};
use crate::algorithms::min_cost_value;
use crate::distributions::{node_probabilities, IndependentDistribution};
use crate::error::{Error, Result};
use crate::poly::numeric::prob_inverse;
use crate::tree::TreeShape;

const MAX_EIGEN_HEIGHT: u32 = 4;
const INITIAL_STEP: f64 = 0.25;
const MAX_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Argmax tolerance; the search stops once its step falls below `tol / 1000`.
    pub tol: f64,
    /// Start `i` draws from a generator seeded with `seed + i`.
    pub seed: u64,
    pub starts: usize,
    /// Poll budget per start.
    pub max_iterations: usize,
    pub parallel: bool,
}

impl EigenOptions {
    pub fn new(tol: f64) -> Self {
        EigenOptions { tol, seed: 0, starts: 8, max_iterations: 200_000, parallel: true }
    }
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions::new(ARGMAX_TOL)
    }
}

struct Problem<'a> {
    shape: &'a TreeShape,
    r: f64,
}

struct Run {
    leaves: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

impl Problem<'_> {
    fn root_prob(&self, leaves: &[f64]) -> f64 {
        node_probabilities(self.shape, leaves)[1]
    }

    /// All leaf probabilities from the free ones, if the constraint can be met.
    fn complete(&self, free: &[f64]) -> Option<Vec<f64>> {
        let mut leaves = free.to_vec();
        leaves.push(0.0);
        let a = self.root_prob(&leaves);
        *leaves.last_mut()? = 1.0;
        let b = self.root_prob(&leaves) - a;
        if b.abs() < 1e-14 {
            return None;
        }
        let t = (self.r - a) / b;
        if !(-1e-15..=1.0 + 1e-15).contains(&t) {
            return None;
        }
        *leaves.last_mut()? = t.clamp(0.0, 1.0);
        ((self.root_prob(&leaves) - self.r).abs() <= CONSTRAINT_TOL).then_some(leaves)
    }

    fn value(&self, free: &[f64]) -> f64 {
        match self.complete(free) {
            Some(leaves) => min_cost_value(self.shape, &leaves),
            None => f64::NEG_INFINITY,
        }
    }

    fn start(&self, rng: &mut ChaCha8Rng, iid: f64) -> Vec<f64> {
        let m = self.shape.leaf_count() - 1;
        loop {
            let target: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
            let mut t = 1.0;
            while t > 1e-6 {
                let x: Vec<f64> = target.iter().map(|y| iid + t * (y - iid)).collect();
                if self.value(&x).is_finite() {
                    return x;
                }
                t *= 0.5;
            }
        }
    }

    /// Pattern search polling the coordinate directions, the pairwise
    /// differences of coordinates and `m` fresh random directions, both signs
    /// each. The step doubles after an
    /// improvement and halves otherwise.
    fn ascend(&self, seed: u64, opts: &EigenOptions, iid: f64) -> Run {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = self.shape.leaf_count() - 1;
        let mut x = self.start(&mut rng, iid);
        let mut fx = self.value(&x);
        let min_step = (opts.tol * 1e-3).max(1e-14);
        let mut step = INITIAL_STEP;
        let mut iterations = 0;
        let mut converged = false;
        // coordinate axes, pairwise differences, then fresh random directions
        let pairs = m * (m - 1) / 2;
        let mut dirs = vec![vec![0.0; m]; 2 * m + pairs];
        for (i, d) in dirs.iter_mut().enumerate().take(m) {
            d[i] = 1.0;
        }
        let mut k = m;
        for i in 0..m {
            for j in i + 1..m {
                dirs[k][i] = std::f64::consts::FRAC_1_SQRT_2;
                dirs[k][j] = -std::f64::consts::FRAC_1_SQRT_2;
                k += 1;
            }
        }
        while iterations < opts.max_iterations {
            iterations += 1;
            for d in dirs.iter_mut().skip(m + pairs) {
                d.iter_mut().for_each(|v| *v = rng.gen::<f64>() * 2.0 - 1.0);
                let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
                d.iter_mut().for_each(|v| *v /= norm);
            }
            let mut best: Option<(f64, Vec<f64>)> = None;
            for d in &dirs {
                for sign in [1.0, -1.0] {
                    let y: Vec<f64> =
                        x.iter().zip(d).map(|(xi, di)| (xi + sign * step * di).clamp(0.0, 1.0)).collect();
                    let fy = self.value(&y);
                    if fy > fx && best.as_ref().is_none_or(|(b, _)| fy > *b) {
                        best = Some((fy, y));
                    }
                }
            }
            match best {
                Some((fy, y)) => {
                    x = y;
                    fx = fy;
                    step = (2.0 * step).min(MAX_STEP);
                }
                None => {
                    step *= 0.5;
                    if step < min_step {
                        converged = true;
                        break;
                    }
                }
            }
        }
        let leaves = self.complete(&x).expect("iterates stay feasible");
        Run { leaves, value: fx, iterations, converged }
    }
}

/// Maximises the minimum expected cost over directional orders among
/// independent distributions with root probability `r`, from several seeded
/// random starts. The best run wins, ties broken by the lexicographically
/// smallest leaf vector.
pub fn eigen_search(shape: &TreeShape, r: RootConstraint, opts: &EigenOptions) -> Result<EquilibriumReport> {
    let rv = r.require_interior("eigen search")?;
    if shape.height() > MAX_EIGEN_HEIGHT {
        return Err(Error::capability(format!(
            "eigen search is bounded to height {MAX_EIGEN_HEIGHT}, got {shape}"
        )));
    }
    if !(opts.tol > 0.0) || opts.starts == 0 {
        return Err(Error::input("eigen search needs a positive tolerance and at least one start"));
    }
    let problem = Problem { shape, r: rv };
    let iid = prob_inverse(shape.root_gate(), shape.height(), rv, 0.0);
    let seeds: Vec<u64> = (0..opts.starts as u64).map(|i| opts.seed.wrapping_add(i)).collect();
    let runs: Vec<Run> = if opts.parallel {
        seeds.par_iter().map(|&s| problem.ascend(s, opts, iid)).collect()
    } else {
        seeds.iter().map(|&s| problem.ascend(s, opts, iid)).collect()
    };
    let iterations = runs.iter().map(|r| r.iterations).sum();
    let converged = runs.iter().all(|r| r.converged);
    let best = runs
        .into_iter()
        .reduce(|a, b| {
            let better = b.value > a.value
                || (b.value == a.value && b.leaves.partial_cmp(&a.leaves) == Some(std::cmp::Ordering::Less));
            if better { b } else { a }
        })
        .expect("at least one start");
    let deviation = deviation_from_mean(&best.leaves);
    Ok(EquilibriumReport {
        value: best.value,
        argmax: Argmax::Independent(IndependentDistribution::new(best.leaves)?),
        iterations,
        deviation,
        certified_iid: deviation < 10.0 * opts.tol,
        converged,
        tol: opts.tol,
        seeds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::numeric::shape_cost_prob;

    fn run(shape: TreeShape, r: f64, tol: f64) -> EquilibriumReport {
        eigen_search(&shape, RootConstraint::new(r).unwrap(), &EigenOptions::new(tol)).unwrap()
    }

    fn leaves(rep: &EquilibriumReport) -> Vec<f64> {
        match &rep.argmax {
            Argmax::Independent(d) => d.leaf_probs().to_vec(),
            Argmax::Pair(_) => panic!(),
        }
    }

    #[test]
    fn height_one_closed_form() {
        let rep = run(TreeShape::and_or(1).unwrap(), 0.19, 1e-7);
        assert!(rep.certified_iid, "{rep:?}");
        for x in leaves(&rep) {
            assert!((x - 0.1).abs() < 1e-6);
        }
    }

    #[test]
    fn or_root_at_nine_sixteenths() {
        let s = TreeShape::or_and(2).unwrap();
        let rep = run(s, 9.0 / 16.0, 1e-7);
        assert!(rep.certified_iid, "{rep:?}");
        for x in leaves(&rep) {
            assert!((x - 0.5).abs() < 1e-6);
        }
        assert!((rep.value - shape_cost_prob(&s, 0.5).0).abs() < 1e-9);
    }

    #[test]
    fn deterministic_across_parallelism() {
        let s = TreeShape::and_or(2).unwrap();
        let r = RootConstraint::new(0.3).unwrap();
        let mut opts = EigenOptions::new(1e-6);
        let a = eigen_search(&s, r, &opts).unwrap();
        opts.parallel = false;
        let b = eigen_search(&s, r, &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_endpoints_and_tall_trees() {
        let s = TreeShape::and_or(2).unwrap();
        let opts = EigenOptions::default();
        assert!(matches!(eigen_search(&s, RootConstraint::new(1.0).unwrap(), &opts), Err(Error::Domain(_))));
        let tall = TreeShape::and_or(5).unwrap();
        assert!(matches!(
            eigen_search(&tall, RootConstraint::new(0.5).unwrap(), &opts),
            Err(Error::Capability(_))
        ));
    }
}
