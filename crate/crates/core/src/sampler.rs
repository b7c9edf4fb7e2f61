//! Weighted Monte Carlo volumes on the mean-zero subspace.
//!
//! A point `x` drawn uniformly from the cube `[−h, h]^N` projects to
//! `ω = Px`; the fiber of the cube over `ω` is a segment of length
//! `√N (2h − spread(ω))`. Weighting each sample by `(2h)^N` over that length
//! turns cube averages into `(N − 1)`-dimensional volumes of any region
//! contained in `{spread < 2h}`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::membership::{order_param_locking_test, HullOracle};
use crate::norms::{norm_for, spread};
use crate::points::tau;
use crate::polytope::{PolytopeKind, PolytopeSpec};
use crate::rng::StreamFactory;
use crate::stats::Moments;
use crate::subspace::FrequencyVector;

/// Smallest sample count accepted by the estimators.
pub const MIN_SAMPLES: u64 = 1_000;

/// Samples per parallel work unit; chunk boundaries are fixed so the
/// reduction order never depends on the thread count.
pub const CHUNK: u64 = 4_096;

/// Caveat attached to reported standard errors.
pub const STD_ERROR_CAVEAT: &str =
    "std_error is empirical; the weight has a K^-2 tail so its variance may converge slowly";

/// One projected cube sample and its volume weight.
#[derive(Debug, Clone, PartialEq)]
pub struct PokeSample {
    pub omega: FrequencyVector,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// `N` independent uniform coordinates on `[−h, h)`.
pub fn sample_hypercube<R: Rng + ?Sized>(n: usize, half_width: f64, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-half_width..half_width)).collect()
}

/// Length of `{x + s·(1,…,1)/√N} ∩ [−h, h]^N` for any `x` whose spread is
/// `spread`.
pub fn fiber_length(n: usize, half_width: f64, spread: f64) -> f64 {
    (n as f64).sqrt() * (2.0 * half_width - spread).max(0.0)
}

/// A region indicator on mean-zero vectors; errors abort the estimate.
pub type Indicator<'a> = dyn Fn(&FrequencyVector) -> Result<bool> + Sync + 'a;

#[derive(Debug, Clone)]
pub struct PokeSampler {
    n: usize,
    half_width: f64,
    samples: u64,
    seed: u64,
    streams: StreamFactory,
}

impl PokeSampler {
    /// Sampler on the cube of half-width `τ_N`, which covers `C_CS(N)`.
    pub fn new(n: usize, samples: u64, seed: u64) -> Result<Self> {
        let h = tau(n)?.value;
        if samples < MIN_SAMPLES {
            return Err(Error::InvalidParameter(format!(
                "need at least {MIN_SAMPLES} samples, got {samples}"
            )));
        }
        Ok(PokeSampler {
            n,
            half_width: h,
            samples,
            seed,
            streams: StreamFactory::new(seed),
        })
    }

    /// Replaces the cube half-width; regions must satisfy `spread < 2h`.
    pub fn with_half_width(mut self, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        self.half_width = half_width;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn draw(&self, index: u64) -> (Vec<f64>, f64) {
        let mut rng = self.streams.stream(index);
        let x = sample_hypercube(self.n, self.half_width, &mut rng);
        // spread is projection invariant, so take it before rounding noise
        let s = spread(&x).value();
        (x, s)
    }

    /// The sample with the given index.
    pub fn sample(&self, index: u64) -> PokeSample {
        let (x, s) = self.draw(index);
        let h2 = 2.0 * self.half_width;
        PokeSample {
            omega: FrequencyVector::project(&x).expect("finite cube sample"),
            weight: h2.powi(self.n as i32) / fiber_length(self.n, self.half_width, s),
        }
    }

    /// Estimates several regions from the same samples.
    pub fn estimate_many(&self, indicators: &[&Indicator<'_>]) -> Result<Vec<VolumeEstimate>> {
        let k = indicators.len();
        let chunks = self.samples.div_ceil(CHUNK);
        let partials: Vec<Result<Vec<Moments>>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = vec![Moments::default(); k];
                for i in c * CHUNK..((c + 1) * CHUNK).min(self.samples) {
                    let s = self.sample(i);
                    for (m, f) in acc.iter_mut().zip(indicators) {
                        m.push(if f(&s.omega)? { s.weight } else { 0.0 });
                    }
                }
                Ok(acc)
            })
            .collect();
        let mut total = vec![Moments::default(); k];
        for p in partials {
            for (t, m) in total.iter_mut().zip(p?) {
                t.merge(&m);
            }
        }
        Ok(total
            .into_iter()
            .map(|m| VolumeEstimate {
                value: m.mean,
                std_error: m.std_error(),
                samples: self.samples,
                seed: self.seed,
            })
            .collect())
    }

    pub fn estimate(&self, indicator: &Indicator<'_>) -> Result<VolumeEstimate> {
        Ok(self.estimate_many(&[indicator])?.remove(0))
    }
}

/// Volume of `{ω : indicator(ω)}` on the cube of half-width `τ_N`.
pub fn poke_estimate<F>(n: usize, indicator: F, m_samp: u64, seed: u64) -> Result<VolumeEstimate>
where
    F: Fn(&FrequencyVector) -> bool + Sync,
{
    PokeSampler::new(n, m_samp, seed)?.estimate(&|w: &FrequencyVector| Ok(indicator(w)))
}

/// Volume of the phase-locked region at coupling `γ = N`.
pub fn estimate_true_volume(n: usize, m_samp: u64, seed: u64) -> Result<VolumeEstimate> {
    let gamma = n as f64;
    PokeSampler::new(n, m_samp, seed)?.estimate(&|w: &FrequencyVector| order_param_locking_test(w, gamma))
}

/// A region whose volume can be estimated.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Polytope(PolytopeSpec),
    /// The phase-locked region at coupling `γ = N`.
    Locked {
        n: usize,
    },
}

impl Region {
    pub fn n(&self) -> usize {
        match self {
            Region::Polytope(s) => s.n(),
            Region::Locked { n } => *n,
        }
    }

    /// Half-width of the smallest sampling cube that covers the region.
    pub fn half_width(&self) -> Result<f64> {
        match self {
            Region::Polytope(s) => Ok(0.5 * s.spread_bound()?),
            Region::Locked { n } => Ok(tau(*n)?.value),
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Region::Polytope(s) => write!(f, "{s}"),
            Region::Locked { n } => write!(f, "true({n})"),
        }
    }
}

enum CompiledRegion {
    Gauge(PolytopeSpec),
    Hull(HullOracle),
    Locked(f64),
}

impl CompiledRegion {
    fn new(region: &Region) -> Result<Self> {
        Ok(match region {
            Region::Polytope(s) if matches!(s.kind(), PolytopeKind::HullOfUnion(_)) => {
                CompiledRegion::Hull(HullOracle::new(s)?)
            }
            Region::Polytope(s) => CompiledRegion::Gauge(s.clone()),
            Region::Locked { n } => CompiledRegion::Locked(*n as f64),
        })
    }

    fn contains(&self, w: &FrequencyVector) -> Result<bool> {
        match self {
            CompiledRegion::Gauge(s) => Ok(norm_for(s, w)?.value() <= 1.0),
            CompiledRegion::Hull(o) => o.contains(w),
            CompiledRegion::Locked(gamma) => order_param_locking_test(w, *gamma),
        }
    }
}

/// Estimates every region with `m_samp` samples. Regions that share a cube
/// half-width share one pass over the same samples.
pub fn estimate_regions(regions: &[Region], m_samp: u64, seed: u64) -> Result<Vec<VolumeEstimate>> {
    let mut out: Vec<Option<VolumeEstimate>> = vec![None; regions.len()];
    let mut widths = Vec::with_capacity(regions.len());
    for r in regions {
        widths.push(r.half_width()?);
    }
    for i in 0..regions.len() {
        if out[i].is_some() {
            continue;
        }
        let group: Vec<usize> = (i..regions.len())
            .filter(|&k| out[k].is_none() && regions[k].n() == regions[i].n() && widths[k] == widths[i])
            .collect();
        let compiled = group
            .iter()
            .map(|&k| CompiledRegion::new(&regions[k]))
            .collect::<Result<Vec<_>>>()?;
        let closures: Vec<Box<Indicator<'_>>> = compiled
            .iter()
            .map(|c| Box::new(move |w: &FrequencyVector| c.contains(w)) as Box<Indicator<'_>>)
            .collect();
        let refs: Vec<&Indicator<'_>> = closures.iter().map(|b| b.as_ref()).collect();
        let sampler = PokeSampler::new(regions[i].n(), m_samp, seed)?.with_half_width(widths[i])?;
        for (k, e) in group.iter().zip(sampler.estimate_many(&refs)?) {
            out[*k] = Some(e);
        }
    }
    Ok(out.into_iter().map(|e| e.expect("every region estimated")).collect())
}

/// Log–log fit of the survival function of `1/(2τ_N − spread)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub n: usize,
    pub samples: u64,
    pub slope: f64,
    /// `(K, P(weight > K))` pairs used in the fit.
    pub points: Vec<(f64, f64)>,
}

pub fn weight_tail_check(n: usize, m_samp: u64, seed: u64) -> Result<TailReport> {
    let sampler = PokeSampler::new(n, m_samp, seed)?;
    let two_tau = 2.0 * sampler.half_width();
    let mut w: Vec<f64> = (0..m_samp)
        .into_par_iter()
        .map(|i| 1.0 / (two_tau - sampler.draw(i).1))
        .collect();
    w.sort_by(|a, b| b.total_cmp(a));
    let m = m_samp as f64;
    // survival levels from the median down to about 20 expected exceedances
    let levels = 24;
    let lo = 20.0 / m;
    let ratio = (lo / 0.5).powf(1.0 / (levels - 1) as f64);
    let points: Vec<(f64, f64)> = (0..levels)
        .map(|i| {
            let p = 0.5 * ratio.powi(i);
            let rank = ((p * m).round() as usize).clamp(1, w.len());
            (w[rank - 1], rank as f64 / m)
        })
        .collect();
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (crate::stats::mean(&xs), crate::stats::mean(&ys));
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(TailReport {
        n,
        samples: m_samp,
        slope: sxy / sxx,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::norm_for;
    use crate::polytope::PolytopeSpec;
    use crate::stats::{ks_critical_one, ks_one_sample};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::{Beta, ContinuousCDF};

    #[test]
    fn cube_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = 1.7;
        let draws = 1_000_000;
        let mut m = [Moments::default(), Moments::default(), Moments::default()];
        for _ in 0..draws {
            let x = sample_hypercube(3, h, &mut rng);
            for (a, v) in m.iter_mut().zip(&x) {
                a.push(*v);
            }
        }
        let sigma = h / 3f64.sqrt() / (draws as f64).sqrt();
        for a in &m {
            assert!(a.mean.abs() < 4.0 * sigma);
            assert!((a.sample_variance() / (h * h / 3.0) - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn cube_spread_is_beta() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = 2.0;
        let s: Vec<f64> = (0..10_000)
            .map(|_| spread(&sample_hypercube(3, h, &mut rng)).value() / (2.0 * h))
            .collect();
        let beta = Beta::new(2.0, 2.0).unwrap();
        assert!(ks_one_sample(&s, |x| beta.cdf(x)) < ks_critical_one(s.len()));
    }

    #[test]
    fn fiber_length_matches_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let n = rng.random_range(2..9);
            let h = rng.random_range(0.5..5.0);
            let x = sample_hypercube(n, h, &mut rng);
            // the line x + s·1/√N stays in the cube while every coordinate does
            let r = (n as f64).sqrt();
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for v in &x {
                lo = lo.max((-h - v) * r);
                hi = hi.min((h - v) * r);
            }
            let s = spread(&FrequencyVector::project(&x).unwrap()).value();
            assert_abs_diff_eq!(hi - lo, fiber_length(n, h, s), epsilon = 1e-9);
        }
    }

    #[test]
    fn empty_region_is_exactly_zero() {
        let e = poke_estimate(4, |_| false, 5_000, 1).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.std_error, 0.0);
    }

    #[test]
    fn rejects_tiny_sample_counts() {
        assert!(poke_estimate(4, |_| true, 999, 1).is_err());
        assert!(PokeSampler::new(4, 1000, 1).unwrap().with_half_width(0.0).is_err());
    }

    #[test]
    fn weights_are_finite_and_regions_inside_c_cs() {
        let sampler = PokeSampler::new(5, 10_000, 9).unwrap();
        let c_cs = PolytopeSpec::c_cs(5).unwrap();
        for i in 0..10_000 {
            let s = sampler.sample(i);
            assert!(s.weight.is_finite() && s.weight > 0.0);
            assert!(norm_for(&c_cs, &s.omega).unwrap().value() < 1.0);
        }
    }

    #[test]
    fn whole_cube_region_volume() {
        // c_cs(3) = 4√3 τ₃² exactly
        let t = tau(3).unwrap().value;
        let e = poke_estimate(3, |_| true, 200_000, 5).unwrap();
        let exact = 4.0 * 3f64.sqrt() * t * t;
        assert!((e.value - exact).abs() < 4.0 * e.std_error, "{e:?} vs {exact}");
    }

    #[test]
    fn same_seed_same_estimate() {
        let a = poke_estimate(4, |w| spread(w).value() < 4.0, 20_000, 17).unwrap();
        let b = poke_estimate(4, |w| spread(w).value() < 4.0, 20_000, 17).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        let c = poke_estimate(4, |w| spread(w).value() < 4.0, 20_000, 18).unwrap();
        assert_ne!(a.value, c.value);
    }
}
