//! Membership in the polytopes and in the phase-locked region, and the
//! stability test for phase configurations.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{self, StandardLp, DEFAULT_ITERATION_LIMIT};
use crate::norms::norm_for;
use crate::points::VertexFamily;
use crate::polytope::{PolytopeKind, PolytopeSpec};
use crate::subspace::PhaseConfiguration;

/// Slack allowed on the minimal coefficient sum before a point counts as
/// outside a hull.
pub const HULL_TOL: f64 = 1e-9;

/// Tolerance on `κ_j` and on `τ − 2` inside which a verdict is marginal.
pub const STABILITY_TOL: f64 = 1e-9;

/// Whether `y` lies in the polytope. Closed-form kinds compare their gauge to
/// 1; hulls of unions solve the coefficient LP.
pub fn in_polytope(spec: &PolytopeSpec, y: &[f64]) -> Result<bool> {
    if y.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            actual: y.len(),
        });
    }
    match spec.kind() {
        PolytopeKind::HullOfUnion(_) => {
            let families = spec.vertex_families()?;
            Ok(hull_membership_families(&families, y)?.inside)
        }
        _ => Ok(norm_for(spec, y)?.value() <= 1.0),
    }
}

/// Rado's test: `y` lies in the permutahedron of `v` iff, with both sorted
/// descending, every partial sum of `y` is at most that of `v`.
pub fn rado_membership(y: &[f64], v: &[f64]) -> Result<bool> {
    if y.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            actual: y.len(),
        });
    }
    let (sy, sv): (f64, f64) = (y.iter().sum(), v.iter().sum());
    if (sy - sv).abs() > 1e-8 {
        return Err(Error::InvalidParameter(format!("entry sums differ: {sy} vs {sv}")));
    }
    let desc = |x: &[f64]| {
        let mut s = x.to_vec();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    };
    let (ys, vs) = (desc(y), desc(v));
    let scale = 1.0 + vs.iter().map(|a| a.abs()).fold(0.0, f64::max);
    let (mut py, mut pv) = (0.0, 0.0);
    for k in 0..y.len().saturating_sub(1) {
        py += ys[k];
        pv += vs[k];
        if py > pv + 1e-12 * scale {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimal-weight representation `y = Σ α_i v_i`, `α ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullCertificate {
    pub inside: bool,
    pub coefficients: Vec<f64>,
    pub objective: f64,
}

fn solve_hull(matrix: &[f64], cols: usize, y: &[f64]) -> Result<HullCertificate> {
    let rows = y.len() - 1;
    let c = vec![1.0; cols];
    let sol = lp::solve(&StandardLp {
        a: matrix,
        b: &y[..rows],
        c: &c,
        iteration_limit: DEFAULT_ITERATION_LIMIT,
    })?;
    Ok(HullCertificate {
        inside: sol.objective <= 1.0 + HULL_TOL,
        coefficients: sol.x,
        objective: sol.objective,
    })
}

/// Row-major `(N − 1) × k` matrix of the first `N − 1` coordinates of each
/// vertex; the last coordinate is implied by the zero sum.
fn vertex_matrix<V: AsRef<[f64]>>(vertices: &[V], n: usize) -> Result<Vec<f64>> {
    let k = vertices.len();
    let mut m = vec![0.0; (n - 1) * k];
    for (j, v) in vertices.iter().enumerate() {
        let v = v.as_ref();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: v.len(),
            });
        }
        for r in 0..n - 1 {
            m[r * k + j] = v[r];
        }
    }
    Ok(m)
}

/// LP hull membership against an explicit, negation-closed list of mean-zero
/// vertices (so that the origin is inside and the minimal sum is a gauge).
pub fn hull_membership<V: AsRef<[f64]>>(vertices: &[V], y: &[f64]) -> Result<HullCertificate> {
    if vertices.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let n = y.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let m = vertex_matrix(vertices, n)?;
    solve_hull(&m, vertices.len(), y)
}

/// [`hull_membership`] over the concatenated vertices of several families,
/// columns in family order.
pub fn hull_membership_families(families: &[VertexFamily], y: &[f64]) -> Result<HullCertificate> {
    let mut vertices = Vec::new();
    for f in families {
        vertices.extend(f.iter());
    }
    hull_membership(&vertices, y)
}

/// Reusable hull-of-union membership with a closed-form prefilter: a point
/// inside any member polytope is inside, and a point outside the matching
/// circumscribed polytopes is outside. Only the remaining band goes to the
/// LP.
#[derive(Debug, Clone)]
pub struct HullOracle {
    n: usize,
    cols: usize,
    matrix: Vec<f64>,
    members: Vec<PolytopeSpec>,
    outer: Option<PolytopeSpec>,
}

fn matching_outer(spec: &PolytopeSpec) -> Result<PolytopeSpec> {
    let n = spec.n();
    match spec.kind() {
        PolytopeKind::IDb => PolytopeSpec::c_db(n),
        PolytopeKind::ICs => PolytopeSpec::c_cs(n),
        PolytopeKind::ICsGen(j) => PolytopeSpec::c_cs_gen(n, *j),
        _ => Err(Error::UnsupportedSpec(spec.to_string())),
    }
}

fn flatten_members(spec: &PolytopeSpec, out: &mut Vec<PolytopeSpec>) {
    match spec.kind() {
        PolytopeKind::HullOfUnion(ms) => ms.iter().for_each(|m| flatten_members(m, out)),
        _ => out.push(spec.clone()),
    }
}

impl HullOracle {
    /// Builds the oracle for any inscribed spec.
    pub fn new(spec: &PolytopeSpec) -> Result<Self> {
        if !spec.is_inscribed() {
            return Err(Error::UnsupportedSpec(format!("{spec} is not a hull")));
        }
        let n = spec.n();
        let mut members = Vec::new();
        flatten_members(spec, &mut members);
        let mut vertices = Vec::new();
        for f in spec.vertex_families()? {
            vertices.extend(f.iter());
        }
        let outer = PolytopeSpec::intersection(members.iter().map(matching_outer).collect::<Result<Vec<_>>>()?)?;
        // the outer filter is only sound if every vertex of the union lies in
        // every member's circumscribed polytope
        let mut sound = true;
        for v in &vertices {
            if norm_for(&outer, v)?.value() > 1.0 + 1e-12 {
                sound = false;
                break;
            }
        }
        Ok(HullOracle {
            n,
            cols: vertices.len(),
            matrix: vertex_matrix(&vertices, n)?,
            members,
            outer: sound.then_some(outer),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.cols
    }

    /// Membership, using the LP only when the closed-form bounds disagree.
    pub fn contains(&self, y: &[f64]) -> Result<bool> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: y.len(),
            });
        }
        for m in &self.members {
            if norm_for(m, y)?.value() <= 1.0 {
                return Ok(true);
            }
        }
        if let Some(outer) = &self.outer {
            if norm_for(outer, y)?.value() > 1.0 + HULL_TOL {
                return Ok(false);
            }
        }
        Ok(self.certificate(y)?.inside)
    }

    /// Always solves the LP.
    pub fn certificate(&self, y: &[f64]) -> Result<HullCertificate> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: y.len(),
            });
        }
        solve_hull(&self.matrix, self.cols, y)
    }
}

/// Number of radii sampled by [`order_param_locking_test`].
pub const ORDER_PARAM_GRID: usize = 20;

/// Self-consistency test for the order parameter. With `ω̃ = ω/γ` and
/// `g(r) = r − (1/N) Σ √(1 − (ω̃_i/r)²)`, a locked state exists when `g`
/// changes sign on `[max|ω̃_i|, 1]`; since `g(1) ≥ 0` this is checked as
/// `min g ≤ 0` over 20 equally spaced radii.
pub fn order_param_locking_test(omega: &[f64], gamma: f64) -> Result<bool> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "coupling must be positive, got {gamma}"
        )));
    }
    let n = omega.len();
    if n == 0 {
        return Err(Error::DimensionTooSmall { n, min: 1 });
    }
    let scaled: Vec<f64> = omega.iter().map(|w| w / gamma).collect();
    let lo = scaled.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    if lo >= 1.0 {
        return Ok(false);
    }
    let step = (1.0 - lo) / (ORDER_PARAM_GRID - 1) as f64;
    for k in 0..ORDER_PARAM_GRID {
        let r = if k + 1 == ORDER_PARAM_GRID {
            1.0
        } else {
            lo + k as f64 * step
        };
        let mut sum = 0.0;
        for &w in &scaled {
            let q = if w == 0.0 { 0.0 } else { w / r };
            sum += (1.0 - q * q).max(0.0).sqrt();
        }
        if r - sum / n as f64 <= 0.0 {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub kappas: Vec<f64>,
    pub tau_sum: f64,
    pub verdict: Verdict,
}

/// Stability of a fixed point from `κ_j = Σ_i cos(θ_j − θ_i)` and
/// `τ = Σ_j 1/κ_j`: stable iff every `κ_j > 0` and `τ < 2`.
pub fn stability_check(theta: &PhaseConfiguration) -> StabilityReport {
    let a = theta.angles();
    let kappas: Vec<f64> = a.iter().map(|&tj| a.iter().map(|&ti| (tj - ti).cos()).sum()).collect();
    let tau_sum: f64 = kappas.iter().map(|k| 1.0 / k).sum();
    let tol = STABILITY_TOL;
    let verdict = if kappas.iter().any(|k| k.abs() <= tol) || (tau_sum - 2.0).abs() <= tol {
        Verdict::Marginal
    } else if kappas.iter().all(|&k| k > tol) && tau_sum < 2.0 - tol {
        Verdict::Stable
    } else {
        Verdict::Unstable
    };
    StabilityReport {
        kappas,
        tau_sum,
        verdict,
    }
}

/// Linearization of the co-rotating dynamics at `θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianMatrix {
    pub entries: DMatrix<f64>,
}

impl JacobianMatrix {
    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }
}

/// `J_ij = cos(θ_j − θ_i)` off the diagonal, with zero row sums.
pub fn jacobian(theta: &PhaseConfiguration) -> JacobianMatrix {
    let a = theta.angles();
    let n = a.len();
    let mut m = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { (a[j] - a[i]).cos() });
    for i in 0..n {
        let row: f64 = m.row(i).sum();
        m[(i, i)] = -row;
    }
    JacobianMatrix { entries: m }
}

/// Verdict from the spectrum: one zero mode comes from rotation, so the
/// state is stable when the second-largest eigenvalue is negative.
pub fn eig_stability_oracle(j: &JacobianMatrix) -> Verdict {
    let n = j.entries.nrows();
    let tol = 1e-8 * n as f64;
    let ev = j.eigenvalues();
    if ev[0] > tol {
        Verdict::Unstable
    } else if ev.len() > 1 && ev[1] < -tol {
        Verdict::Stable
    } else {
        Verdict::Marginal
    }
}
