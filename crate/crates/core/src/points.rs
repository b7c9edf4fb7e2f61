//! Boundary points of the phase-locked region and the Chopra–Spong
//! constants that scale them.
//!
//! Two families are generated lazily, in a fixed order:
//!
//! * Dörfler–Bullo points: `k` entries equal to `N − k` and `N − k` entries
//!   equal to `−k`, for every nonempty proper subset of positive entries.
//! * generalized Chopra–Spong points: all permutations of
//!   `τ_{N,j}·(1^(j), (−1)^(j), 0^(N−2j))`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::subspace::{FrequencyVector, PhaseConfiguration};

/// Largest `n` for which a vertex family may be collected into memory.
pub const MATERIALIZE_LIMIT: usize = 16;

/// Largest `n` for which Dörfler–Bullo points can be enumerated (one bit of a
/// `u64` mask per entry).
pub const DB_ENUMERATION_LIMIT: usize = 63;

/// `τ_{N,j} = max_φ [(N − 2j) sin φ + j sin 2φ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingConstant {
    pub value: f64,
    pub n: usize,
    pub j: usize,
}

fn check_pair(n: usize, j: usize) -> Result<()> {
    if j == 0 || 2 * j > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= j and 2j <= n, got n = {n}, j = {j}"
        )));
    }
    Ok(())
}

/// The Chopra–Spong constant `τ_N` from its closed radical form.
pub fn tau(n: usize) -> Result<CouplingConstant> {
    if n < 3 {
        return Err(Error::DimensionTooSmall { n, min: 3 });
    }
    let m = (n - 2) as f64;
    let root = (32.0 + m * m).sqrt();
    let value = (root + 3.0 * m) * (16.0 + m * root - m * m).sqrt() / (16.0 * 2f64.sqrt());
    Ok(CouplingConstant { value, n, j: 1 })
}

/// The generalized constant `τ_{N,j}` for `1 ≤ j`, `2j ≤ N`.
pub fn tau_general(n: usize, j: usize) -> Result<CouplingConstant> {
    check_pair(n, j)?;
    let (nf, jf) = (n as f64, j as f64);
    let s = (36.0 * jf * jf - 4.0 * jf * nf + nf * nf).sqrt();
    let inner = -2.0 * s + nf * (s - nf) / jf + 12.0 * jf + 4.0 * nf;
    let value = (s - 6.0 * jf + 3.0 * nf) * inner.max(0.0).sqrt() / (16.0 * (2.0 * jf).sqrt());
    Ok(CouplingConstant { value, n, j })
}

/// The angle `φ*` attaining `τ_{N,j}`: the root in `(0, π/2]` of
/// `(N − 2j) cos φ + 2j cos 2φ = 0`.
pub fn optimal_angle(n: usize, j: usize) -> Result<f64> {
    check_pair(n, j)?;
    let a = (n - 2 * j) as f64;
    let jf = j as f64;
    let cos = (-a + (a * a + 32.0 * jf * jf).sqrt()) / (8.0 * jf);
    Ok(cos.clamp(-1.0, 1.0).acos())
}

/// Which boundary family a [`VertexFamily`] enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    DorflerBullo,
    ChopraSpong { j: usize },
}

/// A negation-closed set of boundary points, enumerated lazily.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFamily {
    kind: FamilyKind,
    n: usize,
    scale: f64,
}

/// All `2^N − 2` Dörfler–Bullo points.
pub fn db_points(n: usize) -> Result<VertexFamily> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    if n > DB_ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "Dörfler–Bullo family",
            n,
            limit: DB_ENUMERATION_LIMIT,
        });
    }
    Ok(VertexFamily {
        kind: FamilyKind::DorflerBullo,
        n,
        scale: 1.0,
    })
}

/// The generalized Chopra–Spong points for `j` (use `j = 1` for the plain
/// family of `N(N − 1)` points).
pub fn cs_points(n: usize, j: usize) -> Result<VertexFamily> {
    check_pair(n, j)?;
    let scale = if n == 2 { 1.0 } else { tau_general(n, j)?.value };
    Ok(VertexFamily {
        kind: FamilyKind::ChopraSpong { j },
        n,
        scale,
    })
}

impl VertexFamily {
    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Factor applied to the integer pattern (1 for Dörfler–Bullo, `τ_{N,j}`
    /// for Chopra–Spong).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Number of vertices.
    pub fn count(&self) -> u128 {
        match self.kind {
            FamilyKind::DorflerBullo => (1u128 << self.n) - 2,
            FamilyKind::ChopraSpong { j } => {
                // n! / (j! j! (n - 2j)!) = C(n, j) · C(n - j, j)
                binomial(self.n as u128, j as u128) * binomial((self.n - j) as u128, j as u128)
            }
        }
    }

    /// Vertices before scaling; entries are exact integers that sum to zero.
    pub fn integer_vertices(&self) -> IntegerVertices {
        match self.kind {
            FamilyKind::DorflerBullo => IntegerVertices::Db {
                n: self.n,
                mask: 1,
                end: (1u64 << self.n) - 1,
            },
            FamilyKind::ChopraSpong { j } => {
                let mut first = vec![-1i64; j];
                first.extend(std::iter::repeat_n(0, self.n - 2 * j));
                first.extend(std::iter::repeat_n(1, j));
                IntegerVertices::Permutations { next: Some(first) }
            }
        }
    }

    /// Scaled vertices in the family's deterministic order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.integer_vertices()
            .map(move |v| v.into_iter().map(|e| e as f64 * self.scale).collect())
    }

    /// Collects the vertices; refused above [`MATERIALIZE_LIMIT`].
    pub fn to_vec(&self) -> Result<Vec<Vec<f64>>> {
        if self.n > MATERIALIZE_LIMIT {
            return Err(Error::TooLarge {
                what: "vertex family",
                n: self.n,
                limit: MATERIALIZE_LIMIT,
            });
        }
        Ok(self.iter().collect())
    }

    /// The symmetric configuration whose fixed-point frequency is `vertex`:
    /// `π/2` on the positive entries (Dörfler–Bullo), or `±φ*` by sign
    /// (Chopra–Spong).
    pub fn configuration_for(&self, vertex: &[f64]) -> Result<PhaseConfiguration> {
        if vertex.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: vertex.len(),
            });
        }
        let angle = match self.kind {
            FamilyKind::DorflerBullo => FRAC_PI_2,
            FamilyKind::ChopraSpong { j } => {
                if self.n == 2 {
                    std::f64::consts::FRAC_PI_4
                } else {
                    optimal_angle(self.n, j)?
                }
            }
        };
        let angles = vertex
            .iter()
            .map(|&v| match self.kind {
                FamilyKind::DorflerBullo if v > 0.0 => angle,
                FamilyKind::DorflerBullo => 0.0,
                FamilyKind::ChopraSpong { .. } => angle * v.signum() * (v != 0.0) as u8 as f64,
            })
            .collect();
        PhaseConfiguration::new(angles)
    }
}

/// Lazy iterator over the integer patterns of a [`VertexFamily`].
#[derive(Debug, Clone)]
pub enum IntegerVertices {
    Db { n: usize, mask: u64, end: u64 },
    Permutations { next: Option<Vec<i64>> },
}

impl Iterator for IntegerVertices {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        match self {
            IntegerVertices::Db { n, mask, end } => {
                if *mask >= *end {
                    return None;
                }
                let n = *n;
                let m = *mask;
                *mask += 1;
                let k = m.count_ones() as i64;
                let nn = n as i64;
                // entry i is positive when bit (n - 1 - i) is set
                Some(
                    (0..n)
                        .map(|i| if m >> (n - 1 - i) & 1 == 1 { nn - k } else { -k })
                        .collect(),
                )
            }
            IntegerVertices::Permutations { next } => {
                let current = next.take()?;
                let mut successor = current.clone();
                if next_permutation(&mut successor) {
                    *next = Some(successor);
                }
                Some(current)
            }
        }
    }
}

/// Rearranges `v` into its lexicographic successor; returns `false` when
/// `v` is already the last permutation.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut k = v.len() - 1;
    while v[k] <= v[i - 1] {
        k -= 1;
    }
    v.swap(i - 1, k);
    v[i..].reverse();
    true
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// `ω_i = −Σ_j sin(θ_j − θ_i)`: the frequencies for which `θ` is a fixed
/// point of the co-rotating dynamics.
pub fn frequency_from_configuration(theta: &PhaseConfiguration) -> Result<FrequencyVector> {
    let angles = theta.angles();
    let omega = angles
        .iter()
        .map(|&ti| -angles.iter().map(|&tj| (tj - ti).sin()).sum::<f64>())
        .collect();
    FrequencyVector::new(omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::collections::HashSet;

    // Independent oracle for τ_{N,j}: dense scan plus golden-section search.
    fn tau_by_search(n: usize, j: usize) -> f64 {
        let f = |phi: f64| (n as f64 - 2.0 * j as f64) * phi.sin() + j as f64 * (2.0 * phi).sin();
        let steps = 10_000;
        let h = std::f64::consts::PI / steps as f64;
        let best = (0..=steps)
            .max_by(|&a, &b| f(a as f64 * h).total_cmp(&f(b as f64 * h)))
            .unwrap();
        let (mut lo, mut hi) = ((best as f64 - 1.0) * h, (best as f64 + 1.0) * h);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        while hi - lo > 1e-12 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if f(a) < f(b) {
                lo = a;
            } else {
                hi = b;
            }
        }
        f(0.5 * (lo + hi))
    }

    #[test]
    fn tau_examples() {
        assert_abs_diff_eq!(tau(3).unwrap().value, 1.76017, epsilon = 1e-5);
        assert_abs_diff_eq!(tau(4).unwrap().value, 3.0 * 3f64.sqrt() / 2.0, epsilon = 1e-12);
        // cos φ* = (−3 + √41)/8 gives 3.484995
        assert_abs_diff_eq!(tau(5).unwrap().value, 3.484995, epsilon = 1e-6);
        assert_abs_diff_eq!(tau(5).unwrap().value, tau_by_search(5, 1), epsilon = 1e-9);
        assert!(tau(2).is_err());
    }

    #[test]
    fn tau_general_examples() {
        assert_abs_diff_eq!(
            tau_general(4, 1).unwrap().value,
            3.0 * 3f64.sqrt() / 2.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(tau_general(6, 3).unwrap().value, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(tau_general(7, 2).unwrap().value, tau_by_search(7, 2), epsilon = 1e-9);
        assert!(tau_general(5, 3).is_err());
        assert!(tau_general(5, 0).is_err());
    }

    #[test]
    fn closed_forms_agree_with_search_over_grid() {
        for n in 3..=30 {
            let t = tau(n).unwrap().value;
            assert!((n - 2) as f64 <= t && t <= (n - 1) as f64, "n = {n}");
            assert_abs_diff_eq!(t, tau_general(n, 1).unwrap().value, epsilon = 1e-9);
            for j in 1..=n / 2 {
                let c = tau_general(n, j).unwrap().value;
                assert_abs_diff_eq!(c, tau_by_search(n, j), epsilon = 1e-9);
                assert!((n - 2 * j) as f64 - 1e-12 <= c && c <= (n - j) as f64 + 1e-12);
            }
        }
    }

    #[test]
    fn optimal_angle_attains_tau() {
        for n in 3..=20 {
            for j in 1..=n / 2 {
                let phi = optimal_angle(n, j).unwrap();
                let value = (n - 2 * j) as f64 * phi.sin() + j as f64 * (2.0 * phi).sin();
                assert_abs_diff_eq!(value, tau_general(n, j).unwrap().value, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn db_examples() {
        let fam = db_points(3).unwrap();
        let got: HashSet<Vec<i64>> = fam.integer_vertices().collect();
        let want: HashSet<Vec<i64>> = [
            [2, -1, -1],
            [-1, 2, -1],
            [-1, -1, 2],
            [-2, 1, 1],
            [1, -2, 1],
            [1, 1, -2],
        ]
        .iter()
        .map(|v| v.to_vec())
        .collect();
        assert_eq!(got, want);

        let four: Vec<Vec<i64>> = db_points(4).unwrap().integer_vertices().collect();
        assert_eq!(four.len(), 14);
        let pattern = |v: &Vec<i64>| {
            let mut s = v.clone();
            s.sort();
            s
        };
        for v in &four {
            let p = pattern(v);
            assert!(
                p == vec![-1, -1, -1, 3] || p == vec![-3, 1, 1, 1] || p == vec![-2, -2, 2, 2],
                "{v:?}"
            );
        }
    }

    #[test]
    fn families_are_negation_closed_and_mean_zero() {
        for fam in [
            db_points(5).unwrap(),
            cs_points(6, 2).unwrap(),
            cs_points(5, 1).unwrap(),
        ] {
            let all: Vec<Vec<i64>> = fam.integer_vertices().collect();
            assert_eq!(all.len() as u128, fam.count());
            let set: HashSet<Vec<i64>> = all.iter().cloned().collect();
            assert_eq!(set.len(), all.len(), "duplicates in {:?}", fam.kind());
            for v in &all {
                assert_eq!(v.iter().sum::<i64>(), 0);
                let neg: Vec<i64> = v.iter().map(|e| -e).collect();
                assert!(set.contains(&neg));
            }
        }
        assert_eq!(cs_points(6, 2).unwrap().count(), 90);
    }

    #[test]
    fn family_counts() {
        for n in 2..=12 {
            let db = db_points(n).unwrap();
            assert_eq!(db.count(), (1u128 << n) - 2);
            assert_eq!(db.integer_vertices().count() as u128, db.count());
            let cs = cs_points(n, 1).unwrap();
            assert_eq!(cs.count(), (n * (n - 1)) as u128);
            assert_eq!(cs.integer_vertices().count() as u128, cs.count());
        }
    }

    #[test]
    fn cs_examples() {
        let t3 = tau(3).unwrap().value;
        let three: Vec<Vec<f64>> = cs_points(3, 1).unwrap().iter().collect();
        assert_eq!(three.len(), 6);
        for v in &three {
            let mut s = v.clone();
            s.sort_by(f64::total_cmp);
            assert_eq!(s, vec![-t3, 0.0, t3]);
        }
        assert_eq!(cs_points(4, 1).unwrap().iter().count(), 12);
        assert!(cs_points(4, 3).is_err());
    }

    #[test]
    fn even_half_family_is_inside_db_points() {
        // for N even and j = N/2 the integer patterns are Dörfler–Bullo points up to scale
        for n in [4usize, 6, 8] {
            let half = n as i64 / 2;
            let db: HashSet<Vec<i64>> = db_points(n).unwrap().integer_vertices().collect();
            for v in cs_points(n, n / 2).unwrap().integer_vertices() {
                let scaled: Vec<i64> = v.iter().map(|e| e * half).collect();
                assert!(db.contains(&scaled));
            }
        }
    }

    #[test]
    fn materialization_limit() {
        assert!(db_points(16).unwrap().to_vec().is_ok());
        assert!(matches!(db_points(17).unwrap().to_vec(), Err(Error::TooLarge { .. })));
        assert!(db_points(64).is_err());
        // streaming still works past the limit
        assert!(db_points(30).unwrap().iter().take(3).count() == 3);
    }

    #[test]
    fn frequency_examples() {
        let zero = frequency_from_configuration(&PhaseConfiguration::synchronized(5).unwrap()).unwrap();
        assert!(zero.iter().all(|w| *w == 0.0));

        let phi = optimal_angle(3, 1).unwrap();
        let omega = frequency_from_configuration(&PhaseConfiguration::new(vec![phi, 0.0, -phi]).unwrap()).unwrap();
        let t3 = tau(3).unwrap().value;
        assert_abs_diff_eq!(omega[0], t3, epsilon = 1e-12);
        assert_abs_diff_eq!(omega[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(omega[2], -t3, epsilon = 1e-12);

        let n = 7;
        for k in 1..n {
            let mut angles = vec![FRAC_PI_2; k];
            angles.extend(vec![0.0; n - k]);
            let omega = frequency_from_configuration(&PhaseConfiguration::new(angles).unwrap()).unwrap();
            for (i, w) in omega.iter().enumerate() {
                let want = if i < k { (n - k) as f64 } else { -(k as f64) };
                assert_abs_diff_eq!(*w, want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn vertices_come_from_their_configurations() {
        for n in 3..=8 {
            let mut families = vec![db_points(n).unwrap()];
            families.extend((1..=n / 2).map(|j| cs_points(n, j).unwrap()));
            for fam in families {
                for v in fam.iter() {
                    let theta = fam.configuration_for(&v).unwrap();
                    let omega = frequency_from_configuration(&theta).unwrap();
                    for (a, b) in omega.iter().zip(&v) {
                        assert_abs_diff_eq!(*a, *b, epsilon = 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn next_permutation_walks_multisets() {
        let mut v = vec![0, 0, 1];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    }
}
