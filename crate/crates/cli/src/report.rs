//! The acceptance suite as data: every criterion is a [`CheckResult`] with
//! measured values, targets and tolerances. Nothing here depends on wall
//! time or thread count, so the serialized report is reproducible.

use std::f64::consts::PI;

use phaselock_core::evs::sample_extremes;
use phaselock_core::rng::StreamFactory;
use phaselock_core::stats::{ks_critical_one, ks_one_sample};
use phaselock_core::volumes::postnikov_volume;
use phaselock_core::{
    circ_norm_family, cs_points, db_points, eig_stability_oracle, estimate_regions, exact_volume, hull_membership,
    jacobian, norm_for, order_param_locking_test, phase_transition_experiment, project_mean_zero, rado_membership,
    spread, stability_check, tau, unit_cs_volume_closed_form, FrequencyDistribution, PhaseConfiguration, PolytopeSpec,
    Region, Result, Verdict, VolumeEstimate,
};
use rand::Rng;
use serde::Serialize;

use crate::tables::{table1, table2, TableCell};

/// Monte Carlo budget of the sampled volume checks.
pub const MC_SAMPLES: u64 = 1_000_000;
/// Monte Carlo budget of LP-based hull checks.
pub const LP_SAMPLES: u64 = 10_000;
/// Random points per dimension in the oracle and sandwich checks.
pub const ORACLE_POINTS: usize = 1_000;
pub const SANDWICH_POINTS: usize = 10_000;
/// Excluded band around the stability boundary when comparing verdicts.
pub const MARGINAL_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `|measured − target| ≤ tolerance`
    Within,
    /// `measured < target`
    Below,
    /// `measured > target`
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub name: String,
    pub measured: f64,
    pub target: f64,
    pub tolerance: f64,
    pub rule: Rule,
    pub passed: bool,
}

impl Measurement {
    pub fn within(name: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        Measurement {
            name: name.into(),
            measured,
            target,
            tolerance,
            rule: Rule::Within,
            passed: (measured - target).abs() <= tolerance,
        }
    }

    pub fn relative(name: impl Into<String>, measured: f64, target: f64, rel: f64) -> Self {
        Self::within(name, measured, target, rel * target.abs())
    }

    pub fn below(name: impl Into<String>, measured: f64, target: f64) -> Self {
        Measurement {
            name: name.into(),
            measured,
            target,
            tolerance: 0.0,
            rule: Rule::Below,
            passed: measured < target,
        }
    }

    pub fn above(name: impl Into<String>, measured: f64, target: f64) -> Self {
        Measurement {
            name: name.into(),
            measured,
            target,
            tolerance: 0.0,
            rule: Rule::Above,
            passed: measured > target,
        }
    }

    /// A count that must be zero.
    pub fn none(name: impl Into<String>, count: usize) -> Self {
        Self::within(name, count as f64, 0.0, 0.0)
    }

    /// A fallible computation that failed.
    fn failed(name: impl Into<String>, err: &phaselock_core::Error) -> Self {
        Measurement {
            name: format!("{}: {err}", name.into()),
            measured: f64::NAN,
            target: f64::NAN,
            tolerance: f64::NAN,
            rule: Rule::Within,
            passed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub measurements: Vec<Measurement>,
}

impl CheckResult {
    fn new(id: u32, name: &'static str, measurements: Vec<Measurement>) -> Self {
        CheckResult {
            id,
            name,
            passed: !measurements.is_empty() && measurements.iter().all(|m| m.passed),
            measurements,
        }
    }

    fn from_result(id: u32, name: &'static str, r: Result<Vec<Measurement>>) -> Self {
        match r {
            Ok(m) => Self::new(id, name, m),
            Err(e) => Self::new(id, name, vec![Measurement::failed("evaluation", &e)]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PanelEntry {
    pub spec: String,
    pub method: &'static str,
    pub volume: f64,
    pub std_error: Option<f64>,
    pub reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub all_passed: bool,
    pub checks: Vec<CheckResult>,
    /// `(N, τ_N)` for N = 3..=10.
    pub tau_table: Vec<(usize, f64)>,
    pub n4_panel: Vec<PanelEntry>,
}

fn sqrt3() -> f64 {
    3f64.sqrt()
}

fn within_sigma(name: &str, e: &VolumeEstimate, target: f64, k: f64) -> Measurement {
    Measurement::within(name, e.value, target, k * e.std_error)
}

pub fn check_tau() -> CheckResult {
    let run = || -> Result<Vec<Measurement>> {
        let mut m = vec![
            Measurement::within("tau_3", tau(3)?.value, 1.76017, 1e-4),
            Measurement::within("tau_4", tau(4)?.value, 1.5 * sqrt3(), 1e-10),
        ];
        let mut outside = 0;
        for n in 3..=50 {
            let t = tau(n)?.value;
            if !(t >= n as f64 - 2.0 && t <= n as f64 - 1.0) {
                outside += 1;
            }
        }
        m.push(Measurement::none("tau_N outside [N-2, N-1] for N in 3..=50", outside));
        Ok(m)
    };
    CheckResult::from_result(1, "coupling constants", run())
}

pub fn check_exact_volumes() -> CheckResult {
    let run = || -> Result<Vec<Measurement>> {
        let t3 = tau(3)?.value;
        let s3 = sqrt3();
        let v = |s: Result<PolytopeSpec>| s.and_then(|s| exact_volume(&s));
        Ok(vec![
            Measurement::relative("I_DB(3)", v(PolytopeSpec::i_db(3))?, 9.0 * s3, 1e-9),
            Measurement::relative("C_DB(3)", v(PolytopeSpec::c_db(3))?, 12.0 * s3, 1e-9),
            Measurement::relative("I_CS(3)", v(PolytopeSpec::i_cs(3))?, 3.0 * s3 * t3 * t3, 1e-9),
            Measurement::relative("C_CS(3)", v(PolytopeSpec::c_cs(3))?, 4.0 * s3 * t3 * t3, 1e-9),
            Measurement::within("C_CS(5)", v(PolytopeSpec::c_cs(5))?, 5277.32, 0.01),
            Measurement::within("C_DB(5)", v(PolytopeSpec::c_db(5))?, 4472.14, 0.01),
        ])
    };
    CheckResult::from_result(2, "exact volumes", run())
}

pub fn check_poke_n4(seed: u64) -> CheckResult {
    let run = || -> Result<Vec<Measurement>> {
        let specs = [
            ("C_CS(4)", 162.0 * sqrt3()),
            ("C_DB(4)", 256.0),
            ("I_DB(4)", 128.0),
            ("I_CS(4)", 135.0 * sqrt3() / 2.0),
            ("Intersect(C_DB(4),C_CS(4))", 236.34),
        ];
        let regions = specs
            .iter()
            .map(|(s, _)| s.parse::<PolytopeSpec>().map(Region::Polytope))
            .collect::<Result<Vec<_>>>()?;
        let est = estimate_regions(&regions, MC_SAMPLES, seed)?;
        Ok(specs
            .iter()
            .zip(&est)
            .map(|((s, target), e)| within_sigma(s, e, *target, 3.0))
            .collect())
    };
    CheckResult::from_result(3, "sampled polytope volumes at N = 4", run())
}

pub fn check_true_volume(seed: u64) -> CheckResult {
    let run = || -> Result<Vec<Measurement>> {
        let est = estimate_regions(&[Region::Locked { n: 4 }, Region::Locked { n: 5 }], MC_SAMPLES, seed)?;
        Ok(vec![
            Measurement::relative("true(4)", est[0].value, 210.0, 0.05),
            Measurement::relative("true(5)", est[1].value, 3210.0, 0.05),
        ])
    };
    CheckResult::from_result(4, "phase-locked volume", run())
}

fn cell<'a>(cells: &'a [TableCell], column: &str) -> &'a TableCell {
    cells.iter().find(|c| c.column == column).expect("table column present")
}

fn cell_measurement(c: &TableCell, m: impl FnOnce(&TableCell) -> Measurement) -> Measurement {
    match &c.error {
        Some(e) => Measurement {
            name: format!("{}: {e}", c.spec),
            measured: f64::NAN,
            target: f64::NAN,
            tolerance: f64::NAN,
            rule: Rule::Within,
            passed: false,
        },
        None => m(c),
    }
}

pub fn check_table1_ratios(seed: u64) -> CheckResult {
    let run = || -> Result<Vec<Measurement>> {
        let cells = table1(&[10], MC_SAMPLES, seed)?;
        Ok(vec![
            cell_measurement(cell(&cells, "C_DB"), |c| {
                Measurement::within("C_DB(10)/C_CS(10)", c.ratio_to_c_cs, 0.58, 0.03)
            }),
            cell_measurement(cell(&cells, "true"), |c| {
                Measurement::within("true(10)/C_CS(10)", c.ratio_to_c_cs, 0.19, 0.03)
            }),
        ])
    };
    CheckResult::from_result(5, "circumscribed ratios at N = 10", run())
}

pub fn check_table2(seed: u64) -> CheckResult {
    let run = || -> Result<Vec<Measurement>> {
        let cells = table2(&[5], LP_SAMPLES, LP_SAMPLES, seed)?;
        let sigma3 = |name: &'static str, target: f64| {
            move |c: &TableCell| Measurement::within(name, c.volume, target, 3.0 * c.std_error.unwrap_or(0.0))
        };
        Ok(vec![
            cell_measurement(cell(&cells, "hull(R_CS cup R_DB)"), |c| {
                Measurement::relative("Hull(I_DB(5),I_CS(5))", c.volume, 2032.0, 0.10)
            }),
            cell_measurement(cell(&cells, "I_DB"), sigma3("I_DB(5)", 5f64.powf(4.5))),
            cell_measurement(cell(&cells, "I_CS"), sigma3("I_CS(5)", 962.1)),
        ])
    };
    CheckResult::from_result(6, "inscribed volumes at N = 5", run())
}

pub fn check_postnikov() -> CheckResult {
    let run = || -> Result<Vec<Measurement>> {
        (3..=8)
            .map(|n| {
                let mut x = vec![0.0; n];
                x[0] = 1.0;
                x[n - 1] = -1.0;
                Ok(Measurement::relative(
                    format!("permutahedron(1,0,..,-1), N = {n}"),
                    postnikov_volume(&x, true)?,
                    unit_cs_volume_closed_form(n)?,
                    1e-9,
                ))
            })
            .collect()
    };
    CheckResult::from_result(7, "descent-formula volume", run())
}

const TAG_RADO: u64 = 0x5241_444f;
const TAG_NORMS: u64 = 0x4e4f_524d;
const TAG_STABILITY: u64 = 0x5354_4142;
const TAG_JACOBIAN: u64 = 0x4a41_4342;
const TAG_SANDWICH: u64 = 0x5341_4e44;

fn random_mean_zero<R: Rng>(rng: &mut R, n: usize) -> Result<Vec<f64>> {
    let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    Ok(project_mean_zero(&x)?.into_vec())
}

/// Random mean-zero vector rescaled to the given spread.
fn with_spread<R: Rng>(rng: &mut R, n: usize, target: f64) -> Result<Vec<f64>> {
    let y = random_mean_zero(rng, n)?;
    let s = spread(&y).value();
    Ok(y.iter().map(|v| v * target / s).collect())
}

fn rado_vs_lp(seed: u64) -> Result<Vec<Measurement>> {
    let streams = StreamFactory::new(seed);
    let mut mismatches = 0;
    let mut excluded = 0;
    let mut inside = 0;
    let mut total = 0;
    for n in 3..=7 {
        let mut rng = streams.keyed(&[TAG_RADO, n as u64]);
        let families = (1..=n / 2).map(|j| cs_points(n, j)).collect::<Result<Vec<_>>>()?;
        let vertices = families.iter().map(|f| f.to_vec()).collect::<Result<Vec<_>>>()?;
        for k in 0..ORACLE_POINTS {
            let j = k % families.len();
            let v = &vertices[j][0];
            let target = rng.random_range(0.0..1.5) * spread(v).value();
            let y = with_spread(&mut rng, n, target)?;
            let lp = hull_membership(&vertices[j], &y)?;
            if (lp.objective - 1.0).abs() <= 1e-7 {
                excluded += 1;
                continue;
            }
            total += 1;
            inside += lp.inside as usize;
            if rado_membership(&y, v)? != lp.inside {
                mismatches += 1;
            }
        }
    }
    Ok(vec![
        Measurement::none("Rado vs LP disagreements, N in 3..=7", mismatches),
        Measurement::above("Rado vs LP points inside", inside as f64, 0.0),
        Measurement::above("Rado vs LP points outside", (total - inside) as f64, 0.0),
        Measurement::below(
            "Rado vs LP boundary points excluded",
            excluded as f64,
            0.01 * (5 * ORACLE_POINTS) as f64,
        ),
    ])
}

fn generic_vs_closed(seed: u64) -> Result<Vec<Measurement>> {
    let streams = StreamFactory::new(seed);
    let mut worst = 0.0f64;
    for n in 3..=8 {
        let mut rng = streams.keyed(&[TAG_NORMS, n as u64]);
        let mut pairs = vec![(db_points(n)?, PolytopeSpec::c_db(n)?)];
        for j in 1..=n / 2 {
            pairs.push((cs_points(n, j)?, PolytopeSpec::c_cs_gen(n, j)?));
        }
        for _ in 0..ORACLE_POINTS {
            let y = random_mean_zero(&mut rng, n)?;
            for (family, spec) in &pairs {
                let a = circ_norm_family(family, &y)?.value();
                let b = norm_for(spec, &y)?.value();
                worst = worst.max((a - b).abs() / b.abs().max(1e-300));
            }
        }
    }
    Ok(vec![Measurement::within(
        "max relative gap, generic vs closed-form norms, N in 3..=8",
        worst,
        0.0,
        1e-9,
    )])
}

fn stability_vs_eigen(seed: u64) -> Result<Vec<Measurement>> {
    let streams = StreamFactory::new(seed);
    let mut mismatches = 0;
    let mut stable = 0;
    let mut unstable = 0;
    for n in 2..=8 {
        let mut rng = streams.keyed(&[TAG_STABILITY, n as u64]);
        let mut compared = 0;
        while compared < ORACLE_POINTS {
            let width = rng.random_range(0.0..1.6);
            let theta: Vec<f64> = (0..n).map(|_| rng.random_range(-width..=width)).collect();
            let theta = PhaseConfiguration::new(theta)?;
            let rule = stability_check(&theta);
            let near =
                rule.kappas.iter().any(|k| k.abs() < MARGINAL_BAND) || (rule.tau_sum - 2.0).abs() < MARGINAL_BAND;
            if near {
                continue;
            }
            compared += 1;
            match rule.verdict {
                Verdict::Stable => stable += 1,
                _ => unstable += 1,
            }
            if eig_stability_oracle(&jacobian(&theta)) != rule.verdict {
                mismatches += 1;
            }
        }
    }
    Ok(vec![
        Measurement::none(
            "stability verdict vs eigenvalue verdict disagreements, N in 2..=8",
            mismatches,
        ),
        Measurement::above("stable configurations compared", stable as f64, 0.0),
        Measurement::above("unstable configurations compared", unstable as f64, 0.0),
    ])
}

/// `f_i(θ) = Σ_j sin(θ_j − θ_i)`, whose derivative is the Jacobian.
fn coupling_field(theta: &[f64]) -> Vec<f64> {
    theta
        .iter()
        .map(|&ti| theta.iter().map(|&tj| (tj - ti).sin()).sum())
        .collect()
}

fn jacobian_finite_difference(seed: u64) -> Result<Vec<Measurement>> {
    let streams = StreamFactory::new(seed);
    let h = 1e-6;
    let mut worst = 0.0f64;
    for n in 2..=8 {
        let mut rng = streams.keyed(&[TAG_JACOBIAN, n as u64]);
        for _ in 0..ORACLE_POINTS / 7 + 1 {
            let theta: Vec<f64> = (0..n).map(|_| rng.random_range(-PI..PI)).collect();
            let j = jacobian(&PhaseConfiguration::new(theta.clone())?).entries;
            for col in 0..n {
                let mut plus = theta.clone();
                let mut minus = theta.clone();
                plus[col] += h;
                minus[col] -= h;
                let fp = coupling_field(&plus);
                let fm = coupling_field(&minus);
                for row in 0..n {
                    worst = worst.max(((fp[row] - fm[row]) / (2.0 * h) - j[(row, col)]).abs());
                }
            }
        }
    }
    Ok(vec![Measurement::within(
        "max |Jacobian - central difference|",
        worst,
        0.0,
        1e-6,
    )])
}

pub fn check_oracles(seed: u64) -> CheckResult {
    let run = || -> Result<Vec<Measurement>> {
        let mut m = rado_vs_lp(seed)?;
        m.extend(generic_vs_closed(seed)?);
        m.extend(stability_vs_eigen(seed)?);
        m.extend(jacobian_finite_difference(seed)?);
        Ok(m)
    };
    CheckResult::from_result(8, "oracle equivalences", run())
}

pub fn check_three_oscillators() -> CheckResult {
    let run = || -> Result<Vec<Measurement>> {
        let s33 = 33f64.sqrt();
        let alpha = ((-1.0 + s33) / 8.0).acos();
        let at = |a: f64| PhaseConfiguration::new(vec![-a, 0.0, a]);
        let edge = stability_check(&at(alpha)?);
        let inner_alpha = 0.28 * PI;
        let inner = stability_check(&at(inner_alpha)?);
        let inner_cos = (2.0 * inner_alpha).cos();
        Ok(vec![
            Measurement::within("tau at alpha_+", edge.tau_sum, 2.0, 1e-9),
            Measurement::within("kappa_1 at alpha_+", edge.kappas[0], (15.0 + s33) / 16.0, 1e-12),
            Measurement::within("kappa_3 at alpha_+", edge.kappas[2], (15.0 + s33) / 16.0, 1e-12),
            Measurement::within("kappa_2 at alpha_+", edge.kappas[1], (3.0 + s33) / 4.0, 1e-12),
            Measurement::within(
                "cos(theta_1 - theta_3) at alpha_+",
                (2.0 * alpha).cos(),
                -0.296535,
                1e-5,
            ),
            Measurement::within(
                "verdict at 0.28 pi is stable (1 = yes)",
                (inner.verdict == Verdict::Stable) as u8 as f64,
                1.0,
                0.0,
            ),
            Measurement::below("cos(theta_1 - theta_3) at 0.28 pi", inner_cos, 0.0),
        ])
    };
    CheckResult::from_result(9, "three-oscillator family", run())
}

pub fn check_sandwich(seed: u64) -> CheckResult {
    let run = || -> Result<Vec<Measurement>> {
        let streams = StreamFactory::new(seed);
        let mut lower = 0;
        let mut upper = 0;
        let mut locked = 0;
        for n in 3..=8 {
            let mut rng = streams.keyed(&[TAG_SANDWICH, n as u64]);
            let gamma = n as f64;
            let t = tau(n)?.value;
            for _ in 0..SANDWICH_POINTS {
                let s = rng.random_range(0.0..1.1) * 2.0 * t * gamma / n as f64;
                let w = with_spread(&mut rng, n, s)?;
                let test = order_param_locking_test(&w, gamma)?;
                let sp = spread(&w).value();
                locked += test as usize;
                if sp < gamma && !test {
                    lower += 1;
                }
                if test && sp >= 2.0 * t * gamma / n as f64 {
                    upper += 1;
                }
            }
        }
        Ok(vec![
            Measurement::none("spread < gamma but test says unlocked", lower),
            Measurement::none("test says locked but spread >= 2 tau gamma / N", upper),
            Measurement::above("locked points", locked as f64, 0.0),
        ])
    };
    CheckResult::from_result(10, "spread sandwich", run())
}

pub fn check_evs(seed: u64) -> CheckResult {
    let run = || -> Result<Vec<Measurement>> {
        let trials = 10_000;
        let mut m = Vec::new();
        let uniform = FrequencyDistribution::Uniform { lo: 0.0, hi: 1.0 };
        for n in [3usize, 5, 10] {
            let spreads: Vec<f64> = sample_extremes(&uniform, n, trials, seed)?
                .iter()
                .map(|e| e.max - e.min)
                .collect();
            let nf = n as f64;
            // Beta(N − 1, 2)
            let cdf = |x: f64| {
                let x = x.clamp(0.0, 1.0);
                nf * x.powf(nf - 1.0) - (nf - 1.0) * x.powf(nf)
            };
            m.push(Measurement::below(
                format!("KS uniform spread vs Beta({}, 2)", n - 1),
                ks_one_sample(&spreads, cdf),
                ks_critical_one(trials),
            ));
        }
        let n = 10_000;
        let exp = FrequencyDistribution::Exponential { rate: 1.0 };
        let maxima: Vec<f64> = sample_extremes(&exp, n, trials, seed)?
            .iter()
            .map(|e| e.max - (n as f64).ln())
            .collect();
        m.push(Measurement::below(
            "KS exponential maximum vs Gumbel, N = 10^4",
            ks_one_sample(&maxima, |x| (-(-x).exp()).exp()),
            0.02,
        ));
        let kappas = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0];
        let curve =
            phase_transition_experiment(&FrequencyDistribution::standard_gaussian(), &[512], &kappas, 500, seed)?;
        let rows = &curve.rows;
        let lo = rows.first().expect("rows present");
        let hi = rows.last().expect("rows present");
        m.push(Measurement::below("p_sync at kappa 0.25", lo.p_sync, 0.5));
        m.push(Measurement::above("p_sync at kappa 2", hi.p_sync, 0.5));
        m.push(Measurement::above(
            "p_sync gap between kappa 2 and 0.25",
            hi.p_sync - lo.p_sync,
            0.5,
        ));
        let drops = rows
            .windows(2)
            .filter(|w| w[1].p_sync < w[0].p_sync - 2.0 * w[0].std_error.hypot(w[1].std_error))
            .count();
        m.push(Measurement::none("p_sync decreases beyond 2 sigma", drops));
        Ok(m)
    };
    CheckResult::from_result(11, "extreme-value suite", run())
}

/// Sampled volumes must not depend on the size of the worker pool.
pub fn check_thread_invariance(seed: u64) -> CheckResult {
    let run = || -> Result<Vec<Measurement>> {
        let regions = [
            Region::Polytope(PolytopeSpec::c_cs(4)?),
            Region::Polytope(PolytopeSpec::hull_of_union(vec![
                PolytopeSpec::i_db(4)?,
                PolytopeSpec::i_cs(4)?,
            ])?),
            Region::Locked { n: 5 },
        ];
        let mut runs = Vec::new();
        for threads in [1, 2, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| phaselock_core::Error::InvalidParameter(e.to_string()))?;
            runs.push(pool.install(|| estimate_regions(&regions, 20_000, seed))?);
        }
        let bits = |v: &[VolumeEstimate]| -> Vec<(u64, u64)> {
            v.iter().map(|e| (e.value.to_bits(), e.std_error.to_bits())).collect()
        };
        let differing = runs.iter().filter(|r| bits(r) != bits(&runs[0])).count();
        Ok(vec![Measurement::none(
            "pools of 1, 2, 8 threads with differing estimates",
            differing,
        )])
    };
    CheckResult::from_result(12, "thread-count invariance", run())
}

fn tau_table() -> Vec<(usize, f64)> {
    (3..=10).map(|n| (n, tau(n).map_or(f64::NAN, |t| t.value))).collect()
}

fn n4_panel(seed: u64) -> Vec<PanelEntry> {
    let s3 = sqrt3();
    let exact = [
        ("I_DB(4)", 128.0),
        ("C_DB(4)", 256.0),
        ("I_CS(4)", 135.0 * s3 / 2.0),
        ("C_CS(4)", 162.0 * s3),
    ];
    let mut out: Vec<PanelEntry> = exact
        .iter()
        .map(|(s, r)| {
            let v = s
                .parse::<PolytopeSpec>()
                .and_then(|p| exact_volume(&p))
                .unwrap_or(f64::NAN);
            PanelEntry {
                spec: s.to_string(),
                method: "exact",
                volume: v,
                std_error: None,
                reference: *r,
            }
        })
        .collect();
    let sampled: [(Region, f64, u64); 3] = [
        (Region::Locked { n: 4 }, 210.0, MC_SAMPLES),
        (
            Region::Polytope("Intersect(C_DB(4),C_CS(4))".parse().expect("valid spec")),
            236.34,
            MC_SAMPLES,
        ),
        (
            Region::Polytope("Hull(I_DB(4),I_CS(4))".parse().expect("valid spec")),
            166.28,
            10 * LP_SAMPLES,
        ),
    ];
    for (region, reference, m) in sampled {
        let est = estimate_regions(std::slice::from_ref(&region), m, seed);
        out.push(PanelEntry {
            spec: region.to_string(),
            method: "mc",
            volume: est.as_ref().map_or(f64::NAN, |e| e[0].value),
            std_error: est.as_ref().ok().map(|e| e[0].std_error),
            reference,
        });
    }
    out
}

/// Runs every check in order.
pub fn run_checks(seed: u64) -> Vec<CheckResult> {
    vec![
        check_tau(),
        check_exact_volumes(),
        check_poke_n4(seed),
        check_true_volume(seed),
        check_table1_ratios(seed),
        check_table2(seed),
        check_postnikov(),
        check_oracles(seed),
        check_three_oscillators(),
        check_sandwich(seed),
        check_evs(seed),
        check_thread_invariance(seed),
    ]
}

pub fn run_report(seed: u64) -> Report {
    let checks = run_checks(seed);
    Report {
        seed,
        all_passed: checks.iter().all(|c| c.passed),
        checks,
        tau_table: tau_table(),
        n4_panel: n4_panel(seed),
    }
}
