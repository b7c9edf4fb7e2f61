//! Closed-form gauges of the named polytopes on the mean-zero subspace.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::{tau_general, VertexFamily};
use crate::polytope::{PolytopeKind, PolytopeSpec};
use crate::subspace::dot;

/// A nonnegative gauge value; the polytope is the set where it is `≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct NormValue(f64);

impl NormValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<NormValue> for f64 {
    fn from(v: NormValue) -> f64 {
        v.0
    }
}

/// `max − min` of the entries (0 for an empty slice).
pub fn spread(y: &[f64]) -> NormValue {
    if y.is_empty() {
        return NormValue(0.0);
    }
    let (lo, hi) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    NormValue(hi - lo)
}

fn sorted_descending(y: &[f64]) -> Vec<f64> {
    let mut s = y.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn l1(y: &[f64]) -> f64 {
    y.iter().map(|v| v.abs()).sum()
}

fn linf(y: &[f64]) -> f64 {
    y.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn c_db_sorted(desc: &[f64]) -> f64 {
    let n = desc.len();
    let mut best = 0.0f64;
    let mut partial = 0.0;
    for (k, v) in desc.iter().enumerate().take(n - 1) {
        partial += v;
        let k = k + 1;
        best = best.max(partial / (k * (n - k)) as f64);
    }
    best
}

fn c_cs_gen_sorted(desc: &[f64], j: usize, tau: f64) -> f64 {
    let n = desc.len();
    let top: f64 = desc[..j].iter().sum();
    let bottom: f64 = desc[n - j..].iter().sum();
    (top - bottom) / (2.0 * j as f64 * tau)
}

fn cached_sort<'a>(desc: &'a mut Option<Vec<f64>>, y: &[f64]) -> &'a [f64] {
    desc.get_or_insert_with(|| sorted_descending(y))
}

fn norm_inner(spec: &PolytopeSpec, y: &[f64], desc: &mut Option<Vec<f64>>) -> Result<f64> {
    let n = spec.n();
    let value = match spec.kind() {
        PolytopeKind::IDb => spread(y).0 / n as f64,
        PolytopeKind::ICs => l1(y) / (2.0 * tau_general(n, 1)?.value),
        PolytopeKind::ICsGen(j) => {
            let t = tau_general(n, *j)?.value;
            (l1(y) / (2.0 * *j as f64 * t)).max(linf(y) / t)
        }
        PolytopeKind::CDb => c_db_sorted(cached_sort(desc, y)),
        PolytopeKind::CCs => spread(y).0 / (2.0 * tau_general(n, 1)?.value),
        PolytopeKind::CCsGen(j) => {
            let t = tau_general(n, *j)?.value;
            c_cs_gen_sorted(cached_sort(desc, y), *j, t)
        }
        PolytopeKind::CCsAll => {
            let s = cached_sort(desc, y);
            let mut best = 0.0f64;
            for j in 1..=n / 2 {
                best = best.max(c_cs_gen_sorted(s, j, tau_general(n, j)?.value));
            }
            best
        }
        PolytopeKind::Intersection(members) => {
            let mut best = 0.0f64;
            for m in members {
                best = best.max(norm_inner(m, y, desc)?);
            }
            best
        }
        PolytopeKind::HullOfUnion(_) => {
            return Err(Error::UnsupportedSpec(format!(
                "{spec} has no closed-form gauge; use hull membership"
            )))
        }
    };
    Ok(value)
}

/// The gauge of `spec` at the mean-zero vector `y`.
pub fn norm_for(spec: &PolytopeSpec, y: &[f64]) -> Result<NormValue> {
    if y.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            actual: y.len(),
        });
    }
    norm_inner(spec, y, &mut None).map(|v| NormValue(v.max(0.0)))
}

/// Gauge of the circumscribed polytope of an arbitrary negation-closed point
/// set: `max_x ⟨y, x⟩ / ⟨x, x⟩`.
pub fn circ_norm_generic<I, V>(vertices: I, y: &[f64]) -> Result<NormValue>
where
    I: IntoIterator<Item = V>,
    V: AsRef<[f64]>,
{
    let mut best: Option<f64> = None;
    for x in vertices {
        let x = x.as_ref();
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: y.len(),
                actual: x.len(),
            });
        }
        let r = dot(y, x) / dot(x, x);
        best = Some(best.map_or(r, |b| b.max(r)));
    }
    best.map(|b| NormValue(b.max(0.0))).ok_or(Error::EmptyFamily)
}

/// [`circ_norm_generic`] over a [`VertexFamily`], using its integer pattern
/// and scale so that no scaled vertex is allocated.
pub fn circ_norm_family(family: &VertexFamily, y: &[f64]) -> Result<NormValue> {
    if y.len() != family.n() {
        return Err(Error::DimensionMismatch {
            expected: family.n(),
            actual: y.len(),
        });
    }
    let mut best: Option<f64> = None;
    for v in family.integer_vertices() {
        let (mut num, mut den) = (0.0, 0.0);
        for (a, &b) in y.iter().zip(&v) {
            num += a * b as f64;
            den += (b * b) as f64;
        }
        let r = num / (den * family.scale());
        best = Some(best.map_or(r, |b| b.max(r)));
    }
    best.map(|b| NormValue(b.max(0.0))).ok_or(Error::EmptyFamily)
}

/// One term `coefficient · (e_positive − e_negative)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairTerm {
    pub coefficient: f64,
    pub positive: usize,
    pub negative: usize,
}

/// Writes a mean-zero `y` as a nonnegative combination of pair vectors
/// `e_i − e_j` with total weight `‖y‖₁/2`. Each step clears the
/// smallest-magnitude nonzero entry against the largest entry of the opposite
/// sign, so at most `N − 1` terms are produced.
pub fn greedy_l1_decompose(y: &[f64]) -> Vec<PairTerm> {
    let eps = 1e-12 * linf(y);
    let mut r = y.to_vec();
    let mut terms = Vec::new();
    loop {
        let Some(i) = (0..r.len())
            .filter(|&i| r[i].abs() > eps)
            .min_by(|&a, &b| r[a].abs().total_cmp(&r[b].abs()))
        else {
            break;
        };
        let sign = r[i].signum();
        let Some(j) = (0..r.len())
            .filter(|&j| r[j] * sign < -eps)
            .min_by(|&a, &b| r[b].abs().total_cmp(&r[a].abs()))
        else {
            break;
        };
        let c = r[i].abs();
        r[i] = 0.0;
        r[j] += sign * c;
        let (positive, negative) = if sign > 0.0 { (i, j) } else { (j, i) };
        terms.push(PairTerm {
            coefficient: c,
            positive,
            negative,
        });
    }
    terms
}
