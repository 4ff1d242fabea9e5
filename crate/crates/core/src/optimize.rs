//! Deterministic coarse grid search followed by coordinate descent.
//!
//! The grid is evaluated in parallel but reduced in grid order, and only a
//! strictly smaller value replaces the incumbent, so ties go to the first
//! labelled candidate and then to the lexicographically first grid point.

use crate::config::Config;
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    /// Periodic axes cover `[lo, hi)` and wrap during refinement.
    pub periodic: bool,
    /// Extra grid values outside `[lo, hi]`, e.g. `∞` for a homodyne limit.
    /// Refinement never moves a coordinate sitting on one of them.
    pub extra: Vec<f64>,
}

impl Axis {
    pub fn linear(lo: f64, hi: f64, points: usize) -> Axis {
        Axis { lo, hi, points, periodic: false, extra: Vec::new() }
    }

    pub fn periodic(lo: f64, hi: f64, points: usize) -> Axis {
        Axis { lo, hi, points, periodic: true, extra: Vec::new() }
    }

    pub fn with_extra(mut self, value: f64) -> Axis {
        self.extra.push(value);
        self
    }

    fn spacing(&self) -> f64 {
        if self.periodic {
            (self.hi - self.lo) / self.points as f64
        } else {
            (self.hi - self.lo) / (self.points.max(2) - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let mut v: Vec<f64> =
            if self.points == 1 { vec![self.lo] } else { (0..self.points).map(|i| self.lo + i as f64 * self.spacing()).collect() };
        v.extend(self.extra.iter().copied());
        v
    }

    fn clamp(&self, x: f64) -> f64 {
        if self.periodic {
            self.lo + (x - self.lo).rem_euclid(self.hi - self.lo)
        } else {
            x.clamp(self.lo, self.hi)
        }
    }

    fn is_free(&self, x: f64) -> bool {
        x.is_finite() && !self.extra.contains(&x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub params: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub params: Vec<f64>,
    pub value: f64,
    /// Label of the winning candidate; `None` when a grid or refined point won.
    pub label: Option<String>,
    /// Candidates, the best grid point and every refinement evaluation, in order.
    pub trace: Vec<TracePoint>,
    pub evaluations: usize,
    pub converged: bool,
}

const CANDIDATE_TIE: f64 = 1e-12;

/// Minimizes `objective` over the product grid of `axes` plus `candidates`,
/// then refines the best grid point by coordinate descent with halving steps.
///
/// `objective` returns `None` at infeasible points.
pub fn minimize<F>(axes: &[Axis], candidates: &[(String, Vec<f64>)], objective: F, cfg: &Config) -> Result<Minimum>
where
    F: Fn(&[f64]) -> Option<f64> + Sync,
{
    let eval = |p: &[f64]| objective(p).filter(|v| !v.is_nan());
    let mut trace = Vec::new();
    let mut best: Option<(Vec<f64>, f64, Option<String>)> = None;
    let mut evaluations = 0usize;

    for (label, params) in candidates {
        if params.len() != axes.len() {
            return Err(Error::ShapeMismatch(format!("candidate `{label}` has {} parameters", params.len())));
        }
        evaluations += 1;
        if let Some(v) = eval(params) {
            trace.push(TracePoint { params: params.clone(), value: v });
            if best.as_ref().is_none_or(|b| v < b.1) {
                best = Some((params.clone(), v, Some(label.clone())));
            }
        }
    }

    let grids: Vec<Vec<f64>> = axes.iter().map(Axis::values).collect();
    let total: usize = grids.iter().map(Vec::len).product();
    let point = |mut idx: usize| -> Vec<f64> {
        let mut p = vec![0.0; grids.len()];
        for d in (0..grids.len()).rev() {
            p[d] = grids[d][idx % grids[d].len()];
            idx /= grids[d].len();
        }
        p
    };
    let values: Vec<Option<f64>> = (0..total).into_par_iter().map(|i| eval(&point(i))).collect();
    evaluations += total;
    let mut grid_best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = *v {
            if grid_best.is_none_or(|b| v < b.1) {
                grid_best = Some((i, v));
            }
        }
    }

    let mut converged = true;
    if let Some((idx, v0)) = grid_best {
        let mut x = point(idx);
        let mut v = v0;
        trace.push(TracePoint { params: x.clone(), value: v });
        let mut steps: Vec<f64> = axes.iter().map(Axis::spacing).collect();
        let mut sweeps = 0;
        converged = false;
        while sweeps < cfg.max_refine_sweeps {
            sweeps += 1;
            let mut improved = false;
            for d in 0..axes.len() {
                if !axes[d].is_free(x[d]) || steps[d] == 0.0 {
                    continue;
                }
                for dir in [1.0, -1.0] {
                    let mut y = x.clone();
                    y[d] = axes[d].clamp(x[d] + dir * steps[d]);
                    if y[d] == x[d] {
                        continue;
                    }
                    evaluations += 1;
                    if let Some(w) = eval(&y) {
                        trace.push(TracePoint { params: y.clone(), value: w });
                        if w < v {
                            x = y;
                            v = w;
                            improved = true;
                            break;
                        }
                    }
                }
            }
            if !improved {
                for s in steps.iter_mut() {
                    *s *= 0.5;
                }
                if steps.iter().all(|&s| s < cfg.refine_tol) {
                    converged = true;
                    break;
                }
            }
        }
        // a refined point must beat a candidate by more than rounding to displace it
        if best.as_ref().is_none_or(|b| v < b.1 - CANDIDATE_TIE * (1.0 + b.1.abs())) {
            best = Some((x, v, None));
        }
    }

    let (params, value, label) = best.ok_or_else(|| Error::NoConvergence("objective was infeasible at every point".into()))?;
    Ok(Minimum { params, value, label, trace, evaluations, converged })
}
