//! Generic constrained max-min optimizer over low-dimensional boxes.
//!
//! Every rate computation in this crate is a max-min problem: maximize, over
//! a box of distribution parameters, the minimum of a small set of bound
//! functions subject to a feasibility predicate. The search is a
//! deterministic multi-resolution grid: evaluate the coarse grid, keep the
//! top-k feasible points, re-grid shrunken boxes around each, repeat.
//! Gradient methods are deliberately avoided — the objectives are nonsmooth
//! minima of several terms and the dimension is small.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Grid-search configuration.
#[derive(Debug, Clone)]
pub struct GridConfig {
    pub coarse_points_per_dim: usize,
    pub refine_rounds: usize,
    pub refine_top_k: usize,
    pub shrink_factor: f64,
}

impl GridConfig {
    pub fn new(
        coarse_points_per_dim: usize,
        refine_rounds: usize,
        refine_top_k: usize,
        shrink_factor: f64,
    ) -> Result<Self> {
        if coarse_points_per_dim == 0 || refine_top_k == 0 {
            return Err(Error::Config(alloc::format!(
                "grid sizes must be positive"
            )));
        }
        if !(shrink_factor > 0.0 && shrink_factor < 1.0) {
            return Err(Error::Config(alloc::format!(
                "shrink factor {shrink_factor} outside (0, 1)"
            )));
        }
        Ok(GridConfig {
            coarse_points_per_dim,
            refine_rounds,
            refine_top_k,
            shrink_factor,
        })
    }

    /// Scale the coarse grid down for higher-dimensional boxes so that the
    /// total evaluation count stays workstation-sized. The refinement
    /// schedule is unchanged.
    pub fn for_dim(dim: usize) -> Self {
        let points = match dim {
            0..=3 => 41,
            4 => 21,
            5..=6 => 11,
            _ => 7,
        };
        GridConfig {
            coarse_points_per_dim: points,
            ..GridConfig::default()
        }
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            coarse_points_per_dim: 41,
            refine_rounds: 3,
            refine_top_k: 5,
            shrink_factor: 0.15,
        }
    }
}

type CombinedEval<'a> = dyn Fn(&[f64], &mut [f64]) -> bool + Sync + 'a;

/// A constrained max-min problem over a closed box.
///
/// The evaluation callback writes one value per objective into the output
/// slice and returns `false` when the point is infeasible (infeasible points
/// are skipped, not penalized). Objective and feasibility functions must be
/// pure: the search may evaluate grid points in any order.
pub struct MaxMinProblem<'a> {
    bounds: Vec<(f64, f64)>,
    num_objectives: usize,
    eval: Box<CombinedEval<'a>>,
}

impl<'a> MaxMinProblem<'a> {
    /// Build from a combined evaluation callback (feasibility plus all
    /// objective values in one call — the objectives usually share most of
    /// their work).
    pub fn new(
        bounds: Vec<(f64, f64)>,
        num_objectives: usize,
        eval: impl Fn(&[f64], &mut [f64]) -> bool + Sync + 'a,
    ) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::Config(alloc::format!("dimension must be >= 1")));
        }
        if num_objectives == 0 {
            return Err(Error::Config(alloc::format!("objectives must be nonempty")));
        }
        for &(lo, hi) in &bounds {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Config(alloc::format!(
                    "invalid interval [{lo}, {hi}]"
                )));
            }
        }
        Ok(MaxMinProblem {
            bounds,
            num_objectives,
            eval: Box::new(eval),
        })
    }

    /// Build from a list of objective functions and a feasibility predicate.
    pub fn from_parts(
        bounds: Vec<(f64, f64)>,
        objectives: Vec<Box<dyn Fn(&[f64]) -> f64 + Sync + 'a>>,
        feasible: Box<dyn Fn(&[f64]) -> bool + Sync + 'a>,
    ) -> Result<Self> {
        let n = objectives.len();
        Self::new(bounds, n, move |x, out| {
            if !feasible(x) {
                return false;
            }
            for (slot, obj) in out.iter_mut().zip(&objectives) {
                *slot = obj(x);
            }
            true
        })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn num_objectives(&self) -> usize {
        self.num_objectives
    }

    /// Evaluate the problem at one point: writes the objective values and
    /// returns the feasibility flag. Useful for re-checking a reported
    /// argmax or scoring externally constructed candidate points.
    pub fn evaluate(&self, point: &[f64], out: &mut [f64]) -> bool {
        (self.eval)(point, out)
    }
}

/// Result of a max-min search.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    /// Best min-over-objectives value found, clamped at zero by the rate
    /// wrappers that consume it (kept raw here).
    pub value: f64,
    /// The maximizing point (feasible, within bounds).
    pub argmax: Vec<f64>,
    /// Index of the objective achieving the minimum at `argmax`.
    pub active_bound: usize,
    /// Number of evaluation-callback invocations.
    pub evaluations: u64,
}

#[derive(Clone)]
struct Candidate {
    value: f64,
    point: Vec<f64>,
    active: usize,
}

/// `a` ranks strictly better than `b`: larger value, ties broken by
/// lexicographically smaller argmax.
fn better(a: &Candidate, b: &Candidate) -> bool {
    match a.value.total_cmp(&b.value) {
        core::cmp::Ordering::Greater => true,
        core::cmp::Ordering::Less => false,
        core::cmp::Ordering::Equal => lex_less(&a.point, &b.point),
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            core::cmp::Ordering::Less => return true,
            core::cmp::Ordering::Greater => return false,
            core::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// Grid points over [lo, hi] with both endpoints exact.
fn axis_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if hi <= lo || points < 2 {
        return vec![lo];
    }
    let last = (points - 1) as f64;
    (0..points)
        .map(|k| (lo * (last - k as f64) + hi * k as f64) / last)
        .collect()
}

struct Pool {
    cap: usize,
    entries: Vec<Candidate>,
}

impl Pool {
    fn new(cap: usize) -> Self {
        Pool {
            cap,
            entries: Vec::with_capacity(cap + 1),
        }
    }

    fn offer(&mut self, cand: Candidate) {
        if self.entries.iter().any(|e| e.point == cand.point) {
            return;
        }
        let pos = self
            .entries
            .iter()
            .position(|e| better(&cand, e))
            .unwrap_or(self.entries.len());
        if pos >= self.cap {
            return;
        }
        self.entries.insert(pos, cand);
        self.entries.truncate(self.cap);
    }
}

/// Maximize the minimum of the problem's objectives by multi-resolution grid
/// search. Deterministic: identical problem and configuration produce a
/// bit-identical result. Every interval endpoint appears on the coarse grid,
/// so boundary optima are found exactly.
pub fn maximize_min(problem: &MaxMinProblem, cfg: &GridConfig) -> Result<OptResult> {
    let dim = problem.dim();
    let mut pool = Pool::new(cfg.refine_top_k);
    let mut evaluations: u64 = 0;
    let mut values = vec![0.0; problem.num_objectives];

    let mut scan = |pool: &mut Pool, evaluations: &mut u64, boxes: &[Vec<(f64, f64)>]| {
        for bx in boxes {
            let grids: Vec<Vec<f64>> = bx
                .iter()
                .map(|&(lo, hi)| axis_grid(lo, hi, cfg.coarse_points_per_dim))
                .collect();
            let mut idx = vec![0usize; dim];
            let mut point: Vec<f64> = grids.iter().map(|g| g[0]).collect();
            loop {
                *evaluations += 1;
                if (problem.eval)(&point, &mut values) {
                    let mut min_val = values[0];
                    let mut active = 0;
                    for (i, &v) in values.iter().enumerate().skip(1) {
                        if v < min_val {
                            min_val = v;
                            active = i;
                        }
                    }
                    if !min_val.is_nan() {
                        pool.offer(Candidate {
                            value: min_val,
                            point: point.clone(),
                            active,
                        });
                    }
                }
                // odometer: last axis fastest
                let mut axis = dim;
                loop {
                    if axis == 0 {
                        return;
                    }
                    axis -= 1;
                    idx[axis] += 1;
                    if idx[axis] < grids[axis].len() {
                        point[axis] = grids[axis][idx[axis]];
                        break;
                    }
                    idx[axis] = 0;
                    point[axis] = grids[axis][0];
                }
            }
        }
    };

    scan(&mut pool, &mut evaluations, &[problem.bounds.clone()]);
    if pool.entries.is_empty() {
        return Err(Error::Infeasible);
    }

    for round in 1..=cfg.refine_rounds {
        let mut shrink = 1.0;
        for _ in 0..round {
            shrink *= cfg.shrink_factor;
        }
        let boxes: Vec<Vec<(f64, f64)>> = pool
            .entries
            .iter()
            .map(|c| {
                problem
                    .bounds
                    .iter()
                    .zip(&c.point)
                    .map(|(&(lo, hi), &center)| {
                        let half = 0.5 * (hi - lo) * shrink;
                        ((center - half).max(lo), (center + half).min(hi))
                    })
                    .collect()
            })
            .collect();
        scan(&mut pool, &mut evaluations, &boxes);
    }

    let best = &pool.entries[0];
    Ok(OptResult {
        value: best.value,
        argmax: best.point.clone(),
        active_bound: best.active,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_objective<'a>(
        bounds: Vec<(f64, f64)>,
        f: impl Fn(&[f64]) -> f64 + Sync + 'a,
    ) -> MaxMinProblem<'a> {
        MaxMinProblem::new(bounds, 1, move |x, out| {
            out[0] = f(x);
            true
        })
        .unwrap()
    }

    #[test]
    fn maximizes_linear_objective_at_boundary() {
        let p = single_objective(vec![(0.0, 1.0)], |x| x[0]);
        let r = maximize_min(&p, &GridConfig::default()).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.argmax, vec![1.0]);
        assert_eq!(r.active_bound, 0);
    }

    #[test]
    fn symmetric_crossing_found_at_half() {
        let p = MaxMinProblem::new(vec![(0.0, 1.0)], 2, |x, out| {
            out[0] = x[0];
            out[1] = 1.0 - x[0];
            true
        })
        .unwrap();
        let r = maximize_min(&p, &GridConfig::default()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-9, "value = {}", r.value);
        assert!((r.argmax[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn feasibility_constraint_caps_optimum() {
        let p = MaxMinProblem::new(vec![(0.0, 1.0)], 1, |x, out| {
            if x[0] > 0.3 {
                return false;
            }
            out[0] = x[0];
            true
        })
        .unwrap();
        let r = maximize_min(&p, &GridConfig::default()).unwrap();
        assert_eq!(r.value, 0.3);
        assert_eq!(r.argmax, vec![0.3]);
    }

    #[test]
    fn infeasible_everywhere_is_an_error() {
        let p = MaxMinProblem::new(vec![(0.0, 1.0)], 1, |_, _| false).unwrap();
        assert_eq!(
            maximize_min(&p, &GridConfig::default()).unwrap_err(),
            Error::Infeasible
        );
    }

    #[test]
    fn from_parts_matches_combined() {
        let objectives: Vec<Box<dyn Fn(&[f64]) -> f64 + Sync>> =
            vec![Box::new(|x: &[f64]| x[0]), Box::new(|x: &[f64]| 1.0 - x[0])];
        let p = MaxMinProblem::from_parts(
            vec![(0.0, 1.0)],
            objectives,
            Box::new(|_: &[f64]| true),
        )
        .unwrap();
        let r = maximize_min(&p, &GridConfig::default()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn refinement_is_monotone() {
        // optimum at an off-grid interior point
        let f = |x: &[f64]| -(x[0] - 0.377_123).powi(2);
        let mut prev = f64::NEG_INFINITY;
        for rounds in 0..=3 {
            let p = single_objective(vec![(0.0, 1.0)], f);
            let cfg = GridConfig {
                refine_rounds: rounds,
                ..GridConfig::default()
            };
            let r = maximize_min(&p, &cfg).unwrap();
            assert!(
                r.value >= prev,
                "value decreased from {prev} to {} at {rounds} rounds",
                r.value
            );
            prev = r.value;
        }
    }

    #[test]
    fn reproducible_bit_identical() {
        let f = |x: &[f64]| (x[0] * 3.7).sin() + (x[1] * 1.3).cos();
        let run = || {
            let p = single_objective(vec![(0.0, 1.0), (-1.0, 2.0)], f);
            maximize_min(&p, &GridConfig::default()).unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.argmax, b.argmax);
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn boundary_endpoints_are_on_the_coarse_grid() {
        for points in [2, 5, 41] {
            let g = axis_grid(0.3, 0.9, points);
            assert_eq!(g[0], 0.3);
            assert_eq!(*g.last().unwrap(), 0.9);
            assert!(g.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn degenerate_interval_collapses_to_one_point() {
        let g = axis_grid(0.7, 0.7, 41);
        assert_eq!(g, vec![0.7]);
    }

    #[test]
    fn concave_sandwich_bound() {
        // f(x) = 1 - (x - c)^2 is concave with Lipschitz constant <= 2 on [0,1];
        // the coarse-grid error is at most (width / points) * L even with no
        // refinement.
        let c = 0.481_729;
        let f = move |x: &[f64]| 1.0 - (x[0] - c) * (x[0] - c);
        let p = single_objective(vec![(0.0, 1.0)], f);
        let cfg = GridConfig {
            refine_rounds: 0,
            ..GridConfig::default()
        };
        let r = maximize_min(&p, &cfg).unwrap();
        let bound = (1.0 / 41.0) * 2.0;
        assert!(1.0 - r.value <= bound, "gap {} > {}", 1.0 - r.value, bound);
    }

    #[test]
    fn ties_break_to_lexicographically_smallest() {
        // flat objective: every grid point ties at 0
        let p = single_objective(vec![(0.0, 1.0), (0.0, 1.0)], |_| 0.0);
        let r = maximize_min(&p, &GridConfig::default()).unwrap();
        assert_eq!(r.argmax, vec![0.0, 0.0]);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(GridConfig::new(0, 3, 5, 0.15).is_err());
        assert!(GridConfig::new(41, 3, 0, 0.15).is_err());
        assert!(GridConfig::new(41, 3, 5, 1.0).is_err());
        assert!(MaxMinProblem::new(vec![], 1, |_, _| true).is_err());
        assert!(MaxMinProblem::new(vec![(0.0, 1.0)], 0, |_, _| true).is_err());
        assert!(MaxMinProblem::new(vec![(1.0, 0.0)], 1, |_, _| true).is_err());
    }
}
