use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use phaselock_cli::config::{DEFAULT_LP_SAMPLES, DEFAULT_SAMPLES};
use phaselock_cli::output::{render, Cell, Payload};
use phaselock_cli::report::run_report;
use phaselock_cli::tables::{self, TABLE1_DEFAULT_N, TABLE2_DEFAULT_N, TABLE2_SLOW_N};
use phaselock_cli::{Format, RunConfig, DEFAULT_SEED};
use phaselock_core::io::parse_csv_row;
use phaselock_core::membership::{HullOracle, HULL_TOL};
use phaselock_core::points::FamilyKind;
use phaselock_core::sampler::STD_ERROR_CAVEAT;
use phaselock_core::{
    cs_points, db_points, estimate_regions, exact_volume, norm_for, order_param_locking_test,
    phase_transition_experiment, postnikov_volume, FrequencyDistribution, FrequencyVector, PolytopeKind, PolytopeSpec,
    Region,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "phaselock",
    version,
    about = "Phase-locking regions of the all-to-all Kuramoto model"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Base seed for every random stream.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Monte Carlo samples.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, default_value = "csv")]
    format: Format,
    /// Write to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Stream the vertices of a vertex family.
    Points {
        #[arg(long, value_parser = ["db", "cs"])]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        j: usize,
    },
    /// Gauge of a vector with respect to a polytope.
    Norm {
        #[arg(long)]
        spec: PolytopeSpec,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        /// Project the vector onto the mean-zero subspace first.
        #[arg(long)]
        project: bool,
    },
    /// Membership in a polytope or in the phase-locked region.
    Member {
        #[arg(long, conflicts_with = "locked", required_unless_present = "locked")]
        spec: Option<PolytopeSpec>,
        /// Use the phase-locked region instead of a polytope.
        #[arg(long = "true")]
        locked: bool,
        /// Coupling for --true; defaults to N.
        #[arg(long, requires = "locked")]
        gamma: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long)]
        project: bool,
    },
    /// Volume by sampling, closed form or the descent formula.
    Volume(VolumeArgs),
    /// Volumes of circumscribing regions.
    Table1 {
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
    },
    /// Volumes of inscribed regions.
    Table2 {
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Samples for the LP-based hull column.
        #[arg(long, default_value_t = DEFAULT_LP_SAMPLES)]
        lp_samples: u64,
    },
    /// Locking probability against coupling for iid frequencies.
    Evs {
        #[arg(long, default_value = "gaussian")]
        dist: FrequencyDistribution,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        kappa: Vec<f64>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Run the acceptance checks; exits with 2 if any fails.
    Report,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["mc", "exact", "postnikov"])))]
struct VolumeArgs {
    #[arg(long)]
    mc: bool,
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    postnikov: bool,
    #[arg(long, conflicts_with = "locked")]
    spec: Option<PolytopeSpec>,
    /// Phase-locked region at coupling N (with --mc).
    #[arg(long = "true")]
    locked: bool,
    #[arg(long)]
    n: Option<usize>,
    /// Generating point of the permutahedron (with --postnikov).
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Report ordinary Euclidean volume instead of lattice units.
    #[arg(long)]
    euclidean: bool,
}

enum Failure {
    Usage(String),
    Checks,
}

impl From<phaselock_core::Error> for Failure {
    fn from(e: phaselock_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn writer(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(g: &Global, config: &RunConfig, payload: &Payload) -> Result<(), Failure> {
    let mut w = writer(&g.out)?;
    render(config, payload, &mut w)?;
    w.flush()?;
    Ok(())
}

fn vector_arg(raw: &str, project: bool) -> Result<FrequencyVector, Failure> {
    Ok(FrequencyVector::from_csv_row(raw, project)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let config = |name: &str| RunConfig::new(name, g.seed, g.samples, g.format, g.threads);
    match cli.command {
        Command::Points { family, n, j } => {
            let fam = if family == "db" {
                db_points(n)?
            } else {
                cs_points(n, j)?
            };
            let mut cfg = config("points")
                .with("family", &family)
                .with("n", n)
                .with("count", fam.count());
            if let FamilyKind::ChopraSpong { j } = fam.kind() {
                cfg = cfg.with("j", j);
            }
            let mut w = writer(&g.out)?;
            // vertex lists grow like 2^N, so they are streamed rather than rendered
            match g.format {
                Format::Csv => {
                    for line in cfg.header_lines() {
                        writeln!(w, "{line}")?;
                    }
                    for v in fam.iter() {
                        writeln!(w, "{}", phaselock_core::io::format_csv_row(&v))?;
                    }
                }
                Format::Json => {
                    write!(
                        w,
                        "{{\"config\":{},\"data\":[",
                        serde_json::to_string(&cfg).expect("config serializes")
                    )?;
                    for (i, v) in fam.iter().enumerate() {
                        let sep = if i == 0 { "" } else { "," };
                        write!(w, "{sep}{}", serde_json::to_string(&v).expect("finite vertex"))?;
                    }
                    writeln!(w, "]}}")?;
                }
            }
            w.flush()?;
        }
        Command::Norm { spec, vector, project } => {
            let y = vector_arg(&vector, project)?;
            let v = norm_for(&spec, &y)?.value();
            let cfg = config("norm").with("spec", &spec).with("vector", y.to_csv_row());
            emit(
                g,
                &cfg,
                &Payload::document(&json!({ "spec": spec.to_string(), "value": v })),
            )?;
        }
        Command::Member {
            spec,
            locked,
            gamma,
            vector,
            project,
        } => {
            let y = vector_arg(&vector, project)?;
            let cfg = config("member").with("vector", y.to_csv_row());
            let (cfg, doc) = if locked {
                let gamma = gamma.unwrap_or(y.n() as f64);
                let inside = order_param_locking_test(&y, gamma)?;
                (
                    cfg.with("spec", format!("true({})", y.n())).with("gamma", gamma),
                    json!({ "inside": inside }),
                )
            } else {
                let spec = spec.ok_or_else(|| usage("either --spec or --true is required"))?;
                if spec.n() != y.n() {
                    return Err(usage(format!(
                        "vector has {} entries but {spec} has N = {}",
                        y.n(),
                        spec.n()
                    )));
                }
                let cfg = cfg.with("spec", &spec).with("tolerance", HULL_TOL);
                if let PolytopeKind::HullOfUnion(_) = spec.kind() {
                    let cert = HullOracle::new(&spec)?.certificate(&y)?;
                    (cfg, json!({ "inside": cert.inside, "certificate": cert }))
                } else {
                    let gauge = norm_for(&spec, &y)?.value();
                    (cfg, json!({ "inside": gauge <= 1.0, "gauge": gauge }))
                }
            };
            emit(g, &cfg, &Payload::document(&doc))?;
        }
        Command::Volume(a) => volume(g, a, config("volume"))?,
        Command::Table1 { n } => {
            let ns = if n.is_empty() { TABLE1_DEFAULT_N.to_vec() } else { n };
            let cells = tables::table1(&ns, g.samples, g.seed)?;
            let cfg = config("table1").with("n", join(&ns)).with("caveat", STD_ERROR_CAVEAT);
            emit(g, &cfg, &tables::to_payload(&cells))?;
        }
        Command::Table2 { n, lp_samples } => {
            let ns = if n.is_empty() { TABLE2_DEFAULT_N.to_vec() } else { n };
            if ns.iter().any(|&n| n >= TABLE2_SLOW_N) {
                eprintln!("warning: LP hull membership at N >= {TABLE2_SLOW_N} is slow (minutes per 10^3 samples)");
            }
            let cells = tables::table2(&ns, g.samples, lp_samples, g.seed)?;
            let cfg = config("table2")
                .with("n", join(&ns))
                .with("lp_samples", lp_samples)
                .with("tolerance", HULL_TOL)
                .with("caveat", STD_ERROR_CAVEAT);
            emit(g, &cfg, &tables::to_payload(&cells))?;
        }
        Command::Evs { dist, n, kappa, trials } => {
            let curve = phase_transition_experiment(&dist, &n, &kappa, trials, g.seed)?;
            let cfg = config("evs")
                .with("dist", dist)
                .with("n", join(&n))
                .with("kappa", join(&kappa))
                .with("trials", trials);
            let rows = curve
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.into(),
                        r.kappa.into(),
                        r.gamma.into(),
                        r.trials.into(),
                        r.p_sync.into(),
                        r.std_error.into(),
                        Cell::from(r.prediction),
                    ]
                })
                .collect();
            let payload = Payload::table(
                &["n", "kappa", "gamma", "trials", "p_sync", "std_error", "prediction"],
                rows,
            );
            emit(g, &cfg, &payload)?;
        }
        Command::Report => {
            let report = run_report(g.seed);
            let cfg = config("report");
            emit(g, &cfg, &Payload::document(&report))?;
            if !report.all_passed {
                return Err(Failure::Checks);
            }
        }
    }
    Ok(())
}

fn volume(g: &Global, a: VolumeArgs, cfg: RunConfig) -> Result<(), Failure> {
    if a.postnikov {
        let raw = a.x.ok_or_else(|| usage("--postnikov needs --x"))?;
        let x = parse_csv_row(&raw)?;
        let v = postnikov_volume(&x, a.euclidean)?;
        let cfg = cfg.with("x", &raw).with("euclidean", a.euclidean);
        return emit(g, &cfg, &Payload::document(&json!({ "value": v })));
    }
    let region = match (a.spec, a.locked) {
        (Some(spec), false) => {
            if let Some(n) = a.n.filter(|&n| n != spec.n()) {
                return Err(usage(format!("--n {n} does not match {spec}")));
            }
            Region::Polytope(spec)
        }
        (None, true) => Region::Locked {
            n: a.n.ok_or_else(|| usage("--true needs --n"))?,
        },
        _ => return Err(usage("give exactly one of --spec or --true")),
    };
    let cfg = cfg.with("spec", &region);
    if a.exact {
        let Region::Polytope(spec) = &region else {
            return Err(usage("the phase-locked region has no closed-form volume"));
        };
        let v = exact_volume(spec)?;
        return emit(g, &cfg, &Payload::document(&json!({ "value": v })));
    }
    let est = estimate_regions(std::slice::from_ref(&region), g.samples, g.seed)?.remove(0);
    let cfg = cfg.with("caveat", STD_ERROR_CAVEAT);
    emit(g, &cfg, &Payload::document(&est))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let threads = cli.global.threads;
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
