//! Vectors on the mean-zero subspace `{x : sum(x) = 0}` and its fixed
//! orthonormal basis.
//!
//! Frequency vectors live in this `N - 1` dimensional hyperplane. Every
//! volume reported by the crate is Lebesgue measure on it, so the basis here
//! is what turns ambient vectors into coordinates.

use serde::{Deserialize, Serialize};
use std::ops::Deref;

use crate::error::{Error, Result};

/// Absolute tolerance (per coordinate) on the entry sum of a mean-zero vector.
pub const MEAN_ZERO_TOL_PER_ENTRY: f64 = 1e-9;

fn check_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn check_len(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    Ok(())
}

/// A natural-frequency vector `ω ∈ ℝ^N` with zero entry sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FrequencyVector {
    entries: Vec<f64>,
}

impl FrequencyVector {
    /// Wraps `entries`, asserting they already sum to zero within
    /// `1e-9 · N`.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        check_len(entries.len())?;
        check_finite(&entries)?;
        let sum: f64 = entries.iter().sum();
        let tolerance = MEAN_ZERO_TOL_PER_ENTRY * entries.len() as f64;
        if sum.abs() > tolerance {
            return Err(Error::NotMeanZero { sum, tolerance });
        }
        Ok(Self { entries })
    }

    /// Projects `x` onto the mean-zero subspace and wraps the result.
    pub fn project(x: &[f64]) -> Result<Self> {
        project_mean_zero(x)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        check_len(n)?;
        Ok(Self { entries: vec![0.0; n] })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.entries
    }

    /// Returns `factor · ω`; scaling keeps the vector mean-zero.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Parses a comma separated row such as `"2,-1,-1"`, projecting it onto
    /// the mean-zero subspace if `project` is set.
    pub fn from_csv_row(row: &str, project: bool) -> Result<Self> {
        let values = crate::io::parse_csv_row(row)?;
        if project {
            Self::project(&values)
        } else {
            Self::new(values)
        }
    }

    pub fn to_csv_row(&self) -> String {
        crate::io::format_csv_row(&self.entries)
    }
}

impl Deref for FrequencyVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.entries
    }
}

impl AsRef<[f64]> for FrequencyVector {
    fn as_ref(&self) -> &[f64] {
        &self.entries
    }
}

impl TryFrom<Vec<f64>> for FrequencyVector {
    type Error = Error;

    fn try_from(entries: Vec<f64>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<FrequencyVector> for Vec<f64> {
    fn from(v: FrequencyVector) -> Self {
        v.entries
    }
}

/// Oscillator angles `θ` in radians. No reduction modulo 2π is applied;
/// everything downstream uses differences only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PhaseConfiguration {
    angles: Vec<f64>,
}

impl PhaseConfiguration {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        check_len(angles.len())?;
        check_finite(&angles)?;
        Ok(Self { angles })
    }

    pub fn synchronized(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    pub fn n(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}

impl TryFrom<Vec<f64>> for PhaseConfiguration {
    type Error = Error;

    fn try_from(angles: Vec<f64>) -> Result<Self> {
        Self::new(angles)
    }
}

impl From<PhaseConfiguration> for Vec<f64> {
    fn from(c: PhaseConfiguration) -> Self {
        c.angles
    }
}

/// Orthogonal projection `x ↦ x − mean(x)·(1,…,1)`.
pub fn project_mean_zero(x: &[f64]) -> Result<FrequencyVector> {
    check_len(x.len())?;
    check_finite(x)?;
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    Ok(FrequencyVector {
        entries: x.iter().map(|v| v - mean).collect(),
    })
}

/// The orthonormal basis `u_k = w_k / ‖w_k‖`, `k = 1..N-1`, where
/// `w_k = (1,…,1, −k, 0,…,0)` has `k` leading ones.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanZeroBasis {
    n: usize,
    // ‖w_k‖ = sqrt(k (k + 1)), indexed by k - 1
    norms: Vec<f64>,
}

/// Builds the fixed basis of the mean-zero subspace of `ℝ^n`.
pub fn mean_zero_basis(n: usize) -> Result<MeanZeroBasis> {
    check_len(n)?;
    let norms = (1..n).map(|k| ((k * (k + 1)) as f64).sqrt()).collect();
    Ok(MeanZeroBasis { n, norms })
}

impl MeanZeroBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n - 1
    }

    /// Basis vector `u_k` for `1 ≤ k ≤ n - 1`.
    pub fn vector(&self, k: usize) -> Vec<f64> {
        assert!(k >= 1 && k < self.n, "basis index {k} out of range");
        let inv = 1.0 / self.norms[k - 1];
        let mut u = vec![0.0; self.n];
        u[..k].iter_mut().for_each(|e| *e = inv);
        u[k] = -(k as f64) * inv;
        u
    }

    pub fn vectors(&self) -> Vec<Vec<f64>> {
        (1..self.n).map(|k| self.vector(k)).collect()
    }

    /// Coordinates `⟨u_k, y⟩` of a mean-zero vector, computed with a running
    /// prefix sum.
    pub fn ambient_to_coords(&self, y: &FrequencyVector) -> Result<Vec<f64>> {
        if y.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: y.n(),
            });
        }
        let mut prefix = 0.0;
        let mut coords = Vec::with_capacity(self.n - 1);
        for k in 1..self.n {
            prefix += y[k - 1];
            coords.push((prefix - k as f64 * y[k]) / self.norms[k - 1]);
        }
        Ok(coords)
    }

    /// Inverse of [`Self::ambient_to_coords`].
    pub fn coords_to_ambient(&self, coords: &[f64]) -> Result<FrequencyVector> {
        if coords.len() != self.n - 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n - 1,
                actual: coords.len(),
            });
        }
        check_finite(coords)?;
        let scaled: Vec<f64> = coords.iter().zip(&self.norms).map(|(c, norm)| c / norm).collect();
        let mut entries = vec![0.0; self.n];
        // entry i receives +c_k/‖w_k‖ from every k > i and −i·c_i/‖w_i‖
        let mut suffix = 0.0;
        for i in (0..self.n).rev() {
            let own = if i >= 1 { -(i as f64) * scaled[i - 1] } else { 0.0 };
            entries[i] = suffix + own;
            if i >= 1 {
                suffix += scaled[i - 1];
            }
        }
        Ok(FrequencyVector { entries })
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
