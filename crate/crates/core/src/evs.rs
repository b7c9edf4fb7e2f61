//! Extreme-value scaling of the sample spread and the synchronization
//! transition for random natural frequencies.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal, Pareto};
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal as NormalCdf};

use crate::error::{Error, Result};
use crate::membership::order_param_locking_test;
use crate::norms::spread;
use crate::rng::StreamFactory;
use crate::subspace::project_mean_zero;

/// Spread scales at or below this are treated as a deterministic population.
pub const DEGENERATE_XI: f64 = 1e-9;

// stream tags keep the experiments' random numbers apart
const TAG_EXTREMES: u64 = 0x4558_5452;
const TAG_TRANSITION: u64 = 0x5452_414E;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrequencyDistribution {
    Gaussian {
        mu: f64,
        sigma: f64,
    },
    Exponential {
        rate: f64,
    },
    /// Laplace law with density `(λ/2) e^{−λ|z|}`.
    TwoSidedExponential {
        rate: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// `1 − F(x) = x^{−α}` on `x ≥ 1`.
    Pareto {
        alpha: f64,
    },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

impl FrequencyDistribution {
    pub fn standard_gaussian() -> Self {
        FrequencyDistribution::Gaussian { mu: 0.0, sigma: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FrequencyDistribution::Gaussian { mu, sigma } => {
                if !mu.is_finite() {
                    return Err(Error::InvalidParameter(format!("mean must be finite, got {mu}")));
                }
                positive("sigma", sigma)
            }
            FrequencyDistribution::Exponential { rate } | FrequencyDistribution::TwoSidedExponential { rate } => {
                positive("rate", rate)
            }
            FrequencyDistribution::Uniform { lo, hi } => {
                if lo.is_finite() && hi.is_finite() && lo <= hi {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("bad uniform range [{lo}, {hi}]")))
                }
            }
            FrequencyDistribution::Pareto { alpha } => positive("alpha", alpha),
        }
    }

    pub fn cdf(&self, z: f64) -> f64 {
        1.0 - self.sf(z)
    }

    /// Survival function `1 − F(z)`, accurate far into the upper tail.
    pub fn sf(&self, z: f64) -> f64 {
        match *self {
            FrequencyDistribution::Gaussian { mu, sigma } => NormalCdf::new(mu, sigma).expect("validated").sf(z),
            FrequencyDistribution::Exponential { rate } => {
                if z <= 0.0 {
                    1.0
                } else {
                    (-rate * z).exp()
                }
            }
            FrequencyDistribution::TwoSidedExponential { rate } => {
                if z <= 0.0 {
                    1.0 - 0.5 * (rate * z).exp()
                } else {
                    0.5 * (-rate * z).exp()
                }
            }
            FrequencyDistribution::Uniform { lo, hi } => {
                if z <= lo {
                    1.0
                } else if z >= hi {
                    0.0
                } else {
                    (hi - z) / (hi - lo)
                }
            }
            FrequencyDistribution::Pareto { alpha } => {
                if z <= 1.0 {
                    1.0
                } else {
                    z.powf(-alpha)
                }
            }
        }
    }

    /// Quantile function on `(0, 1)`.
    pub fn inverse_cdf(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!("probability {p} outside (0, 1)")));
        }
        Ok(match *self {
            FrequencyDistribution::Gaussian { mu, sigma } => {
                NormalCdf::new(mu, sigma).expect("validated").inverse_cdf(p)
            }
            FrequencyDistribution::Exponential { rate } => -(-p).ln_1p() / rate,
            FrequencyDistribution::TwoSidedExponential { rate } => {
                if p < 0.5 {
                    (2.0 * p).ln() / rate
                } else {
                    -(2.0 * (1.0 - p)).ln() / rate
                }
            }
            FrequencyDistribution::Uniform { lo, hi } => lo + p * (hi - lo),
            FrequencyDistribution::Pareto { alpha } => (1.0 - p).powf(-1.0 / alpha),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            FrequencyDistribution::Gaussian { mu, sigma } => Normal::new(mu, sigma).expect("validated").sample(rng),
            FrequencyDistribution::Exponential { rate } => Exp::new(rate).expect("validated").sample(rng),
            FrequencyDistribution::TwoSidedExponential { rate } => {
                let z = Exp::new(rate).expect("validated").sample(rng);
                if rng.random::<bool>() {
                    z
                } else {
                    -z
                }
            }
            FrequencyDistribution::Uniform { lo, hi } => {
                if lo == hi {
                    lo
                } else {
                    rng.random_range(lo..hi)
                }
            }
            FrequencyDistribution::Pareto { alpha } => Pareto::new(1.0, alpha).expect("validated").sample(rng),
        }
    }

    /// Whether the law is symmetric about [`Self::center`].
    pub fn symmetric(&self) -> bool {
        !matches!(
            self,
            FrequencyDistribution::Exponential { .. } | FrequencyDistribution::Pareto { .. }
        )
    }

    pub fn center(&self) -> f64 {
        match *self {
            FrequencyDistribution::Gaussian { mu, .. } => mu,
            FrequencyDistribution::Uniform { lo, hi } => 0.5 * (lo + hi),
            _ => 0.0,
        }
    }

    /// Right end of the support, if finite.
    pub fn upper_support(&self) -> Option<f64> {
        match *self {
            FrequencyDistribution::Uniform { hi, .. } => Some(hi),
            _ => None,
        }
    }
}

impl fmt::Display for FrequencyDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FrequencyDistribution::Gaussian { mu, sigma } if mu == 0.0 && sigma == 1.0 => {
                write!(f, "gaussian")
            }
            FrequencyDistribution::Gaussian { mu, sigma } => write!(f, "gaussian:{mu},{sigma}"),
            FrequencyDistribution::Exponential { rate } => write!(f, "exp:{rate}"),
            FrequencyDistribution::TwoSidedExponential { rate } => write!(f, "dexp:{rate}"),
            FrequencyDistribution::Uniform { lo, hi } => write!(f, "uniform:{lo},{hi}"),
            FrequencyDistribution::Pareto { alpha } => write!(f, "pareto:{alpha}"),
        }
    }
}

impl FromStr for FrequencyDistribution {
    type Err = Error;

    /// `gaussian[:mu,sigma]`, `exp:λ`, `dexp:λ`, `uniform[:lo,hi]`,
    /// `pareto:α`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<f64> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| {
                    a.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad number '{a}' in '{s}'")))
                })
                .collect::<Result<_>>()?
        };
        let arity = |k: usize| -> Result<()> {
            if nums.len() == k {
                Ok(())
            } else {
                Err(Error::Parse(format!("'{name}' takes {k} parameter(s), got '{s}'")))
            }
        };
        let d = match name.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "normal" if nums.is_empty() => Self::standard_gaussian(),
            "gaussian" | "normal" => {
                arity(2)?;
                FrequencyDistribution::Gaussian {
                    mu: nums[0],
                    sigma: nums[1],
                }
            }
            "exp" => {
                arity(1)?;
                FrequencyDistribution::Exponential { rate: nums[0] }
            }
            "dexp" | "laplace" => {
                arity(1)?;
                FrequencyDistribution::TwoSidedExponential { rate: nums[0] }
            }
            "uniform" if nums.is_empty() => FrequencyDistribution::Uniform { lo: 0.0, hi: 1.0 },
            "uniform" => {
                arity(2)?;
                FrequencyDistribution::Uniform {
                    lo: nums[0],
                    hi: nums[1],
                }
            }
            "pareto" => {
                arity(1)?;
                FrequencyDistribution::Pareto { alpha: nums[0] }
            }
            other => return Err(Error::Parse(format!("unknown distribution '{other}'"))),
        };
        d.validate()?;
        Ok(d)
    }
}

/// Normalizing constants `(a_N, b_N)` for the maximum, and the scale `ξ_N`
/// of the sample spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingSequence {
    pub n: usize,
    pub a_n: f64,
    pub b_n: f64,
    pub xi_n: f64,
}

impl ScalingSequence {
    pub fn degenerate(&self) -> bool {
        self.xi_n <= DEGENERATE_XI
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::DimensionTooSmall { n, min: 3 })
    } else {
        Ok(())
    }
}

/// Standard-normal constants at a real-valued `N`.
pub fn gaussian_constants(n: f64) -> (f64, f64) {
    let l = n.ln();
    let root = (2.0 * l).sqrt();
    (1.0 / root, root - (4.0 * PI * l).ln() / (2.0 * root))
}

pub fn scaling_gaussian(n: usize) -> Result<ScalingSequence> {
    check_n(n)?;
    let (a, b) = gaussian_constants(n as f64);
    Ok(ScalingSequence {
        n,
        a_n: a,
        b_n: b,
        xi_n: 2.0 * b,
    })
}

/// One-sided exponential: the minimum tends to 0, so `ξ_N = b_N`.
pub fn scaling_exponential(n: usize, rate: f64) -> Result<ScalingSequence> {
    check_n(n)?;
    positive("rate", rate)?;
    let b = (n as f64).ln() / rate;
    Ok(ScalingSequence {
        n,
        a_n: 1.0 / rate,
        b_n: b,
        xi_n: b,
    })
}

/// Two-sided exponential: about `N/2` samples land on each side, so the
/// maximum sits near `log(N/2)/λ` and the spread near twice that.
pub fn scaling_two_sided_exponential(n: usize, rate: f64) -> Result<ScalingSequence> {
    check_n(n)?;
    positive("rate", rate)?;
    let b = (n as f64 / 2.0).ln() / rate;
    Ok(ScalingSequence {
        n,
        a_n: 1.0 / rate,
        b_n: b,
        xi_n: 2.0 * b,
    })
}

/// Closed forms where known, the numeric construction otherwise.
pub fn scaling_for(dist: &FrequencyDistribution, n: usize) -> Result<ScalingSequence> {
    dist.validate()?;
    match *dist {
        FrequencyDistribution::Gaussian { mu, sigma } => {
            let s = scaling_gaussian(n)?;
            Ok(ScalingSequence {
                n,
                a_n: sigma * s.a_n,
                b_n: mu + sigma * s.b_n,
                xi_n: sigma * s.xi_n,
            })
        }
        FrequencyDistribution::Exponential { rate } => scaling_exponential(n, rate),
        FrequencyDistribution::TwoSidedExponential { rate } => scaling_two_sided_exponential(n, rate),
        FrequencyDistribution::Uniform { lo, hi } => {
            check_n(n)?;
            Ok(ScalingSequence {
                n,
                a_n: (hi - lo) / n as f64,
                b_n: hi,
                xi_n: hi - lo,
            })
        }
        FrequencyDistribution::Pareto { .. } => scaling_generic(dist, n),
    }
}

fn simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailed(format!("no convergence on [{a}, {b}]")));
    }
    Ok(simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)?
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)?)
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> Result<f64> {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, eps, 40)
}

/// Mean excess `q(t) = ∫_t^∞ (1 − F) / (1 − F(t))`, integrated over
/// geometrically growing pieces to relative accuracy about 1e-8.
pub fn mean_excess(dist: &FrequencyDistribution, t: f64) -> Result<f64> {
    let st = dist.sf(t);
    if st <= 0.0 {
        return Err(Error::QuadratureFailed(format!("survival is zero at {t}")));
    }
    let f = |s: f64| dist.sf(s) / st;
    let width = t.abs().max(1.0);
    let mut total = 0.0;
    let mut quiet = 0;
    for k in 0..200 {
        let a = t + width * (2f64.powi(k) - 1.0);
        let b = t + width * (2f64.powi(k + 1) - 1.0);
        let piece = integrate(&f, a, b, 1e-10 * (b - a).min(width))?;
        total += piece;
        if piece <= 1e-10 * total {
            quiet += 1;
            if quiet == 2 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NotGumbelClass("tail integral diverges".into()))
}

/// `b_N = F⁻¹(1 − 1/N)` and `a_N = q(b_N)`; rejects laws whose `q(t)/t`
/// does not decay (heavy or bounded tails).
pub fn scaling_generic(dist: &FrequencyDistribution, n: usize) -> Result<ScalingSequence> {
    check_n(n)?;
    dist.validate()?;
    if let Some(hi) = dist.upper_support() {
        return Err(Error::NotGumbelClass(format!("support is bounded above by {hi}")));
    }
    let ratio = |p: f64| -> Result<f64> {
        let t = dist.inverse_cdf(p)?;
        Ok(mean_excess(dist, t)? / t)
    };
    let (r1, r2) = (ratio(1.0 - 1e-6)?, ratio(1.0 - 1e-12)?);
    if !(r2 < 0.9 * r1) {
        return Err(Error::NotGumbelClass(format!(
            "q(t)/t does not decay ({r1:.4} -> {r2:.4})"
        )));
    }
    let nf = n as f64;
    let b = dist.inverse_cdf(1.0 - 1.0 / nf)?;
    let a = mean_excess(dist, b)?;
    let xi = if dist.symmetric() {
        2.0 * (b - dist.center())
    } else {
        b - dist.inverse_cdf(1.0 / nf)?
    };
    Ok(ScalingSequence {
        n,
        a_n: a,
        b_n: b,
        xi_n: xi,
    })
}

/// Sample maximum and minimum of one draw of `n` values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremes {
    pub max: f64,
    pub min: f64,
}

/// `trials` independent samples of size `n`, keyed by `(n, trial)`.
pub fn sample_extremes(dist: &FrequencyDistribution, n: usize, trials: usize, seed: u64) -> Result<Vec<Extremes>> {
    dist.validate()?;
    let streams = StreamFactory::new(seed);
    Ok((0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = streams.keyed(&[TAG_EXTREMES, n as u64, t as u64]);
            let mut e = Extremes {
                max: f64::NEG_INFINITY,
                min: f64::INFINITY,
            };
            for _ in 0..n {
                let x = dist.sample(&mut rng);
                e.max = e.max.max(x);
                e.min = e.min.min(x);
            }
            e
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MmcRow {
    pub n: usize,
    pub xi_n: f64,
    pub trials: usize,
    /// `P(|M_N/ξ_N − 1| > 0.1)`.
    pub p_eps_01: f64,
    /// `P(|M_N/ξ_N − 1| > 0.2)`.
    pub p_eps_02: f64,
    pub se_eps_01: f64,
    pub se_eps_02: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MmcReport {
    pub distribution: String,
    /// Set when some `ξ_N` vanishes; no rows are simulated then.
    pub degenerate: bool,
    pub rows: Vec<MmcRow>,
}

fn binomial_se(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Empirical concentration of the spread `M_N` around `ξ_N`.
pub fn mmc_check(dist: &FrequencyDistribution, n_list: &[usize], trials: usize, seed: u64) -> Result<MmcReport> {
    let scalings = n_list
        .iter()
        .map(|&n| scaling_for(dist, n))
        .collect::<Result<Vec<_>>>()?;
    let mut report = MmcReport {
        distribution: dist.to_string(),
        degenerate: scalings.iter().any(ScalingSequence::degenerate),
        rows: Vec::new(),
    };
    if report.degenerate || trials == 0 {
        return Ok(report);
    }
    for s in scalings {
        let ext = sample_extremes(dist, s.n, trials, seed)?;
        let dev = |e: &Extremes| ((e.max - e.min) / s.xi_n - 1.0).abs();
        let p1 = ext.iter().filter(|e| dev(e) > 0.1).count() as f64 / trials as f64;
        let p2 = ext.iter().filter(|e| dev(e) > 0.2).count() as f64 / trials as f64;
        report.rows.push(MmcRow {
            n: s.n,
            xi_n: s.xi_n,
            trials,
            p_eps_01: p1,
            p_eps_02: p2,
            se_eps_01: binomial_se(p1, trials),
            se_eps_02: binomial_se(p2, trials),
        });
    }
    Ok(report)
}

/// Smallest trial count accepted by [`phase_transition_experiment`].
pub const MIN_TRIALS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionRow {
    pub n: usize,
    pub kappa: f64,
    pub gamma: f64,
    pub trials: usize,
    pub p_sync: f64,
    pub std_error: f64,
    pub prediction: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionCurve {
    pub distribution: String,
    pub seed: u64,
    pub rows: Vec<TransitionRow>,
}

/// What the asymptotic theory says at `κ = γ_N/ξ_N`.
pub fn theoretical_prediction(kappa: f64) -> &'static str {
    if kappa < 0.5 {
        "P_sync -> 0"
    } else if kappa > 1.0 {
        "P_sync -> 1"
    } else {
        "no theoretical prediction"
    }
}

/// Locking probability at coupling `γ = κ ξ_N` for iid frequencies, each
/// trial re-centered to mean zero and run through the order-parameter test.
pub fn phase_transition_experiment(
    dist: &FrequencyDistribution,
    n_list: &[usize],
    kappa_list: &[f64],
    trials: usize,
    seed: u64,
) -> Result<TransitionCurve> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    if let Some(k) = kappa_list.iter().find(|k| !(**k >= 0.0) || !k.is_finite()) {
        return Err(Error::InvalidParameter(format!("kappa must be nonnegative, got {k}")));
    }
    let streams = StreamFactory::new(seed);
    let mut rows = Vec::new();
    for &n in n_list {
        let s = scaling_for(dist, n)?;
        if s.degenerate() {
            return Err(Error::InvalidParameter(format!(
                "spread scale vanishes for {dist} at N = {n}"
            )));
        }
        for &kappa in kappa_list {
            let gamma = kappa * s.xi_n;
            let hits = (0..trials)
                .into_par_iter()
                .map(|t| -> Result<bool> {
                    let mut rng = streams.keyed(&[TAG_TRANSITION, n as u64, kappa.to_bits(), t as u64]);
                    let raw: Vec<f64> = (0..n).map(|_| dist.sample(&mut rng)).collect();
                    let omega = project_mean_zero(&raw)?;
                    if gamma == 0.0 {
                        return Ok(spread(&omega).value() == 0.0);
                    }
                    order_param_locking_test(&omega, gamma)
                })
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .filter(|h| *h)
                .count();
            let p = hits as f64 / trials as f64;
            rows.push(TransitionRow {
                n,
                kappa,
                gamma,
                trials,
                p_sync: p,
                std_error: binomial_se(p, trials),
                prediction: theoretical_prediction(kappa),
            });
        }
    }
    Ok(TransitionCurve {
        distribution: dist.to_string(),
        seed,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{ks_critical_two, ks_two_sample, mean};
    use approx::assert_abs_diff_eq;

    fn all_dists() -> Vec<FrequencyDistribution> {
        vec![
            FrequencyDistribution::standard_gaussian(),
            FrequencyDistribution::Gaussian { mu: 1.5, sigma: 0.3 },
            FrequencyDistribution::Exponential { rate: 2.0 },
            FrequencyDistribution::TwoSidedExponential { rate: 0.7 },
            FrequencyDistribution::Uniform { lo: -1.0, hi: 3.0 },
            FrequencyDistribution::Pareto { alpha: 2.5 },
        ]
    }

    #[test]
    fn cdf_shape_and_symmetry() {
        for d in all_dists() {
            let mut prev = 0.0;
            for i in -400..=400 {
                let z = i as f64 * 0.05;
                let f = d.cdf(z);
                assert!((0.0..=1.0).contains(&f) && f >= prev - 1e-15, "{d}");
                prev = f;
            }
            assert!(d.cdf(-1e6) < 1e-9 && d.cdf(1e6) > 1.0 - 1e-9, "{d}");
            if d.symmetric() {
                let c = d.center();
                for i in 0..200 {
                    let z = i as f64 * 0.03;
                    assert_abs_diff_eq!(d.cdf(c - z), 1.0 - d.cdf(c + z), epsilon = 1e-9);
                }
            }
            for p in [1e-9, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9] {
                let x = d.inverse_cdf(p).unwrap();
                assert_abs_diff_eq!(d.cdf(x), p, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        for d in all_dists() {
            assert_eq!(d.to_string().parse::<FrequencyDistribution>().unwrap(), d);
        }
        assert_eq!(
            "exp:0.5".parse::<FrequencyDistribution>().unwrap(),
            FrequencyDistribution::Exponential { rate: 0.5 }
        );
        for bad in ["exp", "exp:-1", "dexp:1,2", "cauchy", "uniform:2,1", "gaussian:0,0"] {
            assert!(bad.parse::<FrequencyDistribution>().is_err(), "{bad}");
        }
    }

    #[test]
    fn gaussian_formulas() {
        for n in [10usize, 1000, 1 << 20] {
            let s = scaling_gaussian(n).unwrap();
            let l = (n as f64).ln();
            assert_abs_diff_eq!(s.b_n / s.a_n, 2.0 * l - 0.5 * (4.0 * PI * l).ln(), epsilon = 1e-9);
            assert_eq!(s.xi_n, 2.0 * s.b_n);
        }
        assert_abs_diff_eq!(
            gaussian_constants(std::f64::consts::E).0,
            1.0 / 2f64.sqrt(),
            epsilon = 1e-15
        );
        assert!(scaling_gaussian(2).is_err());
        let big = 1usize << 20;
        assert!(scaling_gaussian(big).unwrap().b_n / scaling_gaussian(big).unwrap().a_n > 10.0);
        let e = scaling_exponential(big, 1.0).unwrap();
        assert!(e.b_n / e.a_n > 10.0);
    }

    #[test]
    fn ratio_b_over_a_grows() {
        let mut prev = (0.0, 0.0);
        for k in 4..=20 {
            let n = 1usize << k;
            let g = scaling_gaussian(n).unwrap();
            let e = scaling_exponential(n, 1.3).unwrap();
            let cur = (g.b_n / g.a_n, e.b_n / e.a_n);
            assert!(cur.0 > prev.0 && cur.1 > prev.1);
            prev = cur;
        }
    }

    #[test]
    fn exponential_examples() {
        assert!(scaling_exponential(10, 0.0).is_err());
        assert!(scaling_two_sided_exponential(10, -1.0).is_err());
        let lambda = 1.7;
        let n = 200;
        let trials = 20_000;
        let d = FrequencyDistribution::Exponential { rate: lambda };
        let ext = sample_extremes(&d, n, trials, 5).unwrap();
        let harmonic: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
        let max_mean = mean(&ext.iter().map(|e| e.max).collect::<Vec<_>>());
        let min_mean = mean(&ext.iter().map(|e| e.min).collect::<Vec<_>>());
        // sd of max is π/(λ√6), of min 1/(λN)
        assert!((max_mean - harmonic / lambda).abs() < 4.0 * PI / (lambda * 6f64.sqrt()) / (trials as f64).sqrt());
        assert!((min_mean - 1.0 / (lambda * n as f64)).abs() < 4.0 / (lambda * n as f64) / (trials as f64).sqrt());
    }

    #[test]
    fn generic_matches_closed_forms() {
        let d = FrequencyDistribution::Exponential { rate: 0.8 };
        for n in [10usize, 1000, 100_000] {
            let g = scaling_generic(&d, n).unwrap();
            let c = scaling_exponential(n, 0.8).unwrap();
            assert_abs_diff_eq!(g.a_n, c.a_n, epsilon = 1e-7 * c.a_n);
            assert_abs_diff_eq!(g.b_n, c.b_n, epsilon = 1e-9 * c.b_n);
        }
        let g = FrequencyDistribution::standard_gaussian();
        for n in [1000usize, 10_000, 1_000_000] {
            let num = scaling_generic(&g, n).unwrap();
            let closed = scaling_gaussian(n).unwrap();
            assert!((num.b_n / closed.b_n - 1.0).abs() < 0.02, "n = {n}");
            assert_abs_diff_eq!(num.xi_n, 2.0 * num.b_n, epsilon = 1e-12);
        }
        let lap = FrequencyDistribution::TwoSidedExponential { rate: 2.0 };
        let num = scaling_generic(&lap, 10_000).unwrap();
        let closed = scaling_two_sided_exponential(10_000, 2.0).unwrap();
        assert_abs_diff_eq!(num.b_n, closed.b_n, epsilon = 1e-9);
        assert_abs_diff_eq!(num.a_n, closed.a_n, epsilon = 1e-7);
    }

    #[test]
    fn heavy_and_bounded_tails_rejected() {
        for alpha in [1.0, 1.5, 3.0] {
            assert!(matches!(
                scaling_generic(&FrequencyDistribution::Pareto { alpha }, 100),
                Err(Error::NotGumbelClass(_))
            ));
        }
        assert!(matches!(
            scaling_generic(&FrequencyDistribution::Uniform { lo: 0.0, hi: 1.0 }, 100),
            Err(Error::NotGumbelClass(_))
        ));
    }

    #[test]
    fn mmc_examples() {
        let nearly_constant = FrequencyDistribution::Uniform {
            lo: 1.0,
            hi: 1.0 + 1e-12,
        };
        let r = mmc_check(&nearly_constant, &[10, 100], 100, 1).unwrap();
        assert!(r.degenerate && r.rows.is_empty());

        let u = FrequencyDistribution::Uniform { lo: 0.0, hi: 1.0 };
        let r = mmc_check(&u, &[10, 100, 1000], 2000, 2).unwrap();
        assert!(!r.degenerate);
        assert!(r.rows.iter().all(|row| row.xi_n == 1.0));
        assert_eq!(r.rows[2].p_eps_01, 0.0);
    }

    #[test]
    fn gaussian_max_location() {
        let n = 10_000;
        let s = scaling_gaussian(n).unwrap();
        let ext = sample_extremes(&FrequencyDistribution::standard_gaussian(), n, 1000, 8).unwrap();
        let m = mean(&ext.iter().map(|e| e.max).collect::<Vec<_>>());
        assert!((m - s.b_n).abs() < 3.0 * s.a_n);
    }

    #[test]
    fn symmetric_max_and_negated_min_agree() {
        for d in [
            FrequencyDistribution::standard_gaussian(),
            FrequencyDistribution::TwoSidedExponential { rate: 1.0 },
        ] {
            let ext = sample_extremes(&d, 100, 5000, 4).unwrap();
            let maxes: Vec<f64> = ext.iter().map(|e| e.max).collect();
            let mins: Vec<f64> = ext.iter().map(|e| -e.min).collect();
            assert!(ks_two_sample(&maxes, &mins) < ks_critical_two(5000, 5000));
        }
    }

    #[test]
    fn transition_guards_and_edges() {
        let g = FrequencyDistribution::standard_gaussian();
        assert!(phase_transition_experiment(&g, &[16], &[1.0], 29, 1).is_err());
        assert!(phase_transition_experiment(&g, &[16], &[-1.0], 30, 1).is_err());
        let c = phase_transition_experiment(&g, &[16], &[0.0, 0.75, 3.0], 50, 1).unwrap();
        assert_eq!(c.rows[0].p_sync, 0.0);
        assert_eq!(c.rows[1].prediction, "no theoretical prediction");
        for r in &c.rows {
            assert!((0.0..=1.0).contains(&r.p_sync));
            assert_abs_diff_eq!(
                r.std_error,
                (r.p_sync * (1.0 - r.p_sync) / 50.0).sqrt(),
                epsilon = 1e-15
            );
        }
    }
}
