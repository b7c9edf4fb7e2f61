//! Dense two-phase simplex for `min cᵀx  s.t.  Ax = b, x ≥ 0`, using Bland's
//! rule so that degenerate problems cannot cycle.

use crate::error::{Error, Result};

pub const DEFAULT_ITERATION_LIMIT: usize = 1_000_000;

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-10;

/// Optimal basic solution.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

/// A problem in equality standard form; `a` is row-major `rows × cols`.
#[derive(Debug, Clone)]
pub struct StandardLp<'a> {
    pub a: &'a [f64],
    pub b: &'a [f64],
    pub c: &'a [f64],
    pub iteration_limit: usize,
}

struct Tableau {
    width: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
    rows: usize,
    iterations: usize,
    limit: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, r: usize, s: usize) {
        let w = self.width;
        let p = self.at(r, s);
        for v in &mut self.data[r * w..(r + 1) * w] {
            *v /= p;
        }
        let (before, rest) = self.data.split_at_mut(r * w);
        let (row, after) = rest.split_at_mut(w);
        for other in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = other[s];
            if f != 0.0 {
                for (o, v) in other.iter_mut().zip(row.iter()) {
                    *o -= f * v;
                }
                other[s] = 0.0;
            }
        }
        self.basis[r] = s;
    }

    /// Runs simplex iterations against the objective row; columns at or
    /// beyond `allowed` never enter.
    fn optimize(&mut self, allowed: usize) -> Result<()> {
        let obj = self.rows;
        loop {
            let Some(s) = (0..allowed).find(|&j| self.at(obj, j) < -COST_TOL) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, s);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            let tie = (ratio - lratio).abs() <= 1e-12 * (1.0 + lratio.abs());
                            if ratio < lratio && !tie || tie && self.basis[r] < self.basis[lr] {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::LpUnbounded);
            };
            if self.iterations >= self.limit {
                return Err(Error::LpIterationLimit { limit: self.limit });
            }
            self.iterations += 1;
            self.pivot(r, s);
        }
    }
}

/// Solves the problem or reports infeasibility, unboundedness, or an
/// exhausted iteration budget.
pub fn solve(lp: &StandardLp<'_>) -> Result<LpSolution> {
    let m = lp.b.len();
    let n = lp.c.len();
    if lp.a.len() != m * n {
        return Err(Error::DimensionMismatch {
            expected: m * n,
            actual: lp.a.len(),
        });
    }
    // columns: n structural, m artificial, 1 right-hand side
    let width = n + m + 1;
    let mut data = vec![0.0; (m + 1) * width];
    for r in 0..m {
        let sign = if lp.b[r] < 0.0 { -1.0 } else { 1.0 };
        let row = &mut data[r * width..(r + 1) * width];
        for j in 0..n {
            row[j] = sign * lp.a[r * n + j];
        }
        row[n + r] = 1.0;
        row[width - 1] = sign * lp.b[r];
    }
    // phase one costs: 1 on every artificial, expressed in reduced form
    for r in 0..m {
        for j in 0..n {
            data[m * width + j] -= data[r * width + j];
        }
        data[m * width + width - 1] -= data[r * width + width - 1];
    }
    let mut t = Tableau {
        width,
        data,
        basis: (n..n + m).collect(),
        rows: m,
        iterations: 0,
        limit: lp.iteration_limit,
    };
    t.optimize(n)?;

    let scale = 1.0 + lp.b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let residual = -t.rhs(m);
    if residual > 1e-9 * scale {
        return Err(Error::LpInfeasible { residual });
    }

    // drive zero-valued artificials out of the basis; rows with no structural
    // entry left are redundant and are dropped
    let mut r = 0;
    while r < t.rows {
        if t.basis[r] >= n {
            if let Some(s) = (0..n).find(|&j| t.at(r, j).abs() > PIVOT_TOL) {
                t.pivot(r, s);
            } else {
                let w = t.width;
                t.data.drain(r * w..(r + 1) * w);
                t.basis.remove(r);
                t.rows -= 1;
                continue;
            }
        }
        r += 1;
    }

    // phase two objective row
    let obj = t.rows;
    let w = t.width;
    for j in 0..w {
        t.data[obj * w + j] = if j < n { lp.c[j] } else { 0.0 };
    }
    for r in 0..t.rows {
        let cb = lp.c[t.basis[r]];
        if cb != 0.0 {
            for j in 0..w {
                let v = t.data[r * w + j];
                t.data[obj * w + j] -= cb * v;
            }
        }
    }
    t.optimize(n)?;

    let mut x = vec![0.0; n];
    for r in 0..t.rows {
        x[t.basis[r]] = t.rhs(r).max(0.0);
    }
    let objective = x.iter().zip(lp.c).map(|(a, b)| a * b).sum();
    Ok(LpSolution {
        x,
        objective,
        iterations: t.iterations,
    })
}
