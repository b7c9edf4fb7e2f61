//! Exact `(N − 1)`-dimensional volumes of the named polytopes and of general
//! permutahedra.

use std::sync::OnceLock;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::points::{binomial, next_permutation, tau};
use crate::polytope::{PolytopeKind, PolytopeSpec};

/// Up to this `n`, factorials and binomials use exact integers.
pub const EXACT_INTEGER_LIMIT: usize = 20;
/// Largest `n` for [`descent_count`].
pub const DESCENT_LIMIT: usize = 9;
/// Largest `n` for [`postnikov_volume`].
pub const POSTNIKOV_LIMIT: usize = 8;

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `√N · C(2(N−1), N−1) / (N−1)!`, the volume of the permutahedron of
/// `(1, 0, …, 0, −1)`.
pub fn unit_cs_volume_closed_form(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let m = n - 1;
    let root = (n as f64).sqrt();
    if n <= EXACT_INTEGER_LIMIT {
        Ok(root * binomial(2 * m as u128, m as u128) as f64 / factorial(m) as f64)
    } else {
        Ok(root * (ln_factorial(2 * m) - 3.0 * ln_factorial(m)).exp())
    }
}

/// Closed-form volume of `I_DB`, `C_DB`, `I_CS` or `C_CS`.
pub fn exact_volume(spec: &PolytopeSpec) -> Result<f64> {
    let n = spec.n();
    let nf = n as f64;
    let t = tau(n)?.value;
    let big = n > EXACT_INTEGER_LIMIT;
    let v = match spec.kind() {
        PolytopeKind::IDb => {
            if big {
                ((nf - 0.5) * nf.ln()).exp()
            } else {
                nf.powf(nf - 0.5)
            }
        }
        PolytopeKind::CDb => {
            if big {
                ((nf - 1.0) * 2f64.ln() + (nf - 1.5) * nf.ln()).exp()
            } else {
                2f64.powi(n as i32 - 1) * nf.powf(nf - 1.5)
            }
        }
        PolytopeKind::ICs => {
            if big {
                (0.5 * nf.ln() + ln_factorial(2 * (n - 1)) - 3.0 * ln_factorial(n - 1) + (nf - 1.0) * t.ln()).exp()
            } else {
                unit_cs_volume_closed_form(n)? * t.powi(n as i32 - 1)
            }
        }
        PolytopeKind::CCs => {
            if big {
                ((nf - 0.5) * nf.ln() + (nf - 1.0) * (2.0 * t / nf).ln()).exp()
            } else {
                nf.powf(nf - 0.5) * (2.0 * t / nf).powi(n as i32 - 1)
            }
        }
        _ => return Err(Error::UnsupportedSpec(format!("no closed-form volume for {spec}"))),
    };
    Ok(v)
}

fn descent_mask(p: &[u8]) -> usize {
    p.windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] > w[1])
        .fold(0, |m, (i, _)| m | 1 << i)
}

fn descent_table(n: usize) -> &'static [u64] {
    static TABLES: [OnceLock<Vec<u64>>; DESCENT_LIMIT + 1] = [const { OnceLock::new() }; DESCENT_LIMIT + 1];
    TABLES[n].get_or_init(|| {
        let mut table = vec![0u64; 1 << n.saturating_sub(1)];
        let mut p: Vec<u8> = (0..n as u8).collect();
        loop {
            table[descent_mask(&p)] += 1;
            if !next_permutation(&mut p) {
                break;
            }
        }
        table
    })
}

/// Number of permutations of `{1..n}` whose descent set is exactly `set`
/// (positions in `1..n−1`), counted by enumeration.
pub fn descent_count(n: usize, set: &[usize]) -> Result<u64> {
    if n > DESCENT_LIMIT {
        return Err(Error::TooLarge {
            what: "descent enumeration",
            n,
            limit: DESCENT_LIMIT,
        });
    }
    if n == 0 {
        return Err(Error::DimensionTooSmall { n, min: 1 });
    }
    let mut mask = 0usize;
    for &i in set {
        if i == 0 || i >= n {
            return Err(Error::InvalidParameter(format!(
                "descent position {i} outside 1..{}",
                n - 1
            )));
        }
        mask |= 1 << (i - 1);
    }
    Ok(descent_table(n)[mask])
}

/// Calls `f` on every composition of `total` into `parts` nonnegative parts,
/// in lexicographic order.
fn for_each_composition(total: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(remaining: usize, c: &mut Vec<usize>, parts: usize, f: &mut dyn FnMut(&[usize])) {
        if c.len() + 1 == parts {
            c.push(remaining);
            f(c);
            c.pop();
            return;
        }
        for v in 0..=remaining {
            c.push(v);
            rec(remaining - v, c, parts, f);
            c.pop();
        }
    }
    rec(total, &mut Vec::with_capacity(parts), parts, f);
}

/// Descent set, as a bitmask over positions `1..N−1`, attached to a
/// composition: each part `c_i` contributes `c_i` ones and then a `−1`, the
/// final `−1` is dropped, and `i` is included when the first `2i − 1` signs
/// sum to a negative number.
fn composition_descents(c: &[usize]) -> usize {
    let mut eps = Vec::with_capacity(2 * c.len());
    for &ci in c {
        eps.extend(std::iter::repeat_n(1i64, ci));
        eps.push(-1);
    }
    eps.pop();
    let mut mask = 0;
    let mut partial = 0i64;
    for (l, e) in eps.iter().enumerate() {
        partial += e;
        // l is 0-based, so position i closes at l = 2i − 2
        if l % 2 == 0 {
            let i = l / 2 + 1;
            if i < c.len() && partial < 0 {
                mask |= 1 << (i - 1);
            }
        }
    }
    mask
}

/// Volume of the permutahedron `conv{σ(x)}` by Postnikov's descent formula.
/// The plain value is in lattice units of the hyperplane; `euclidean`
/// multiplies by `√N` for ordinary `(N − 1)`-volume.
pub fn postnikov_volume(x: &[f64], euclidean: bool) -> Result<f64> {
    let n = x.len();
    if n > POSTNIKOV_LIMIT {
        return Err(Error::TooLarge {
            what: "permutahedron volume",
            n,
            limit: POSTNIKOV_LIMIT,
        });
    }
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index: i });
    }
    let mut xs = x.to_vec();
    xs.sort_by(|a, b| b.total_cmp(a));
    let table = descent_table(n);
    let fact: Vec<f64> = (0..n).map(|k| factorial(k) as f64).collect();
    let mut total = 0.0;
    for_each_composition(n - 1, n, &mut |c| {
        let mask = composition_descents(c);
        let sign = if mask.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        let mono: f64 = c
            .iter()
            .zip(&xs)
            .map(|(&ci, &xi)| xi.powi(ci as i32) / fact[ci])
            .product();
        total += sign * table[mask] as f64 * mono;
    });
    Ok(if euclidean { total * (n as f64).sqrt() } else { total })
}
