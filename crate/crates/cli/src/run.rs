use std::io::Write;
use std::path::{Path, PathBuf};

use gauss_factor::experiment::{
    run_adaptation_comparison, run_contrast_scan, run_factorization, run_signal_trace, Physics,
    DEFAULT_COMPARISON_FACTORS,
};
use gauss_factor::factor::{trial_factors, TrialStrategy};
use gauss_factor::schedule::{phase_schedule, PhaseSchedule};
use gauss_factor::{PhysicsConfig, Timing};
use thiserror::Error;

use crate::args::{Cli, Command, Common, PhysicsArg, StrategyArg};
use crate::manifest::{manifest_path, sha256_hex, OutputRecord, Resolved, RunManifest};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(gauss_factor::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<gauss_factor::Error> for CliError {
    fn from(e: gauss_factor::Error) -> Self {
        match e {
            gauss_factor::Error::Domain(_) => CliError::Domain(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn dispatch(cli: Cli) -> Result<()> {
    let (name, common) = match cli.command {
        Command::Replay {
            manifest,
            out,
            threads,
        } => return replay(&manifest, out, threads),
        Command::Signal(c) => ("signal", c),
        Command::Factor(c) => ("factor", c),
        Command::Contrast(c) => ("contrast", c),
        Command::AdaptCompare(c) => ("adapt-compare", c),
        Command::Schedule(c) => ("schedule", c),
        Command::Primes(c) => ("primes", c),
    };
    let resolved = resolve(&common)?;
    let rendered = with_threads(common.threads, || render(name, &resolved))??;
    match &common.out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(rendered.body.as_bytes())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
        }
        Some(path) => {
            write_file(path, rendered.body.as_bytes())?;
            let manifest = RunManifest {
                tool: env!("CARGO_PKG_NAME").into(),
                version: env!("CARGO_PKG_VERSION").into(),
                command: name.into(),
                config: resolved,
                outputs: vec![OutputRecord {
                    path: path.clone(),
                    sha256: sha256_hex(rendered.body.as_bytes()),
                }],
                summary: rendered.summary.clone(),
            };
            let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
            write_file(&manifest_path(path), json.as_bytes())?;
        }
    }
    if let Some(summary) = rendered.summary {
        eprintln!("{summary}");
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--threads must be >= 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn resolve(c: &Common) -> Result<Resolved> {
    let mut physics_config = match &c.config {
        Some(path) => PhysicsConfig::from_file(path).map_err(|e| CliError::io(path, e))??,
        None => PhysicsConfig::default(),
    };
    if let Some(seed) = c.seed {
        physics_config.seed = seed;
    }
    let base = physics_config.timing();
    let tau_pi = c.tau_pi_us.unwrap_or(base.tau_pi_us);
    let timing = Timing {
        t_us: c.t_us.unwrap_or(base.t_us),
        tau_pi_us: tau_pi,
        tau_pi2_us: c.tau_pi2_us.unwrap_or(tau_pi / 2.0),
    };
    let schedule_source = match &c.from {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?),
        None => None,
    };
    Ok(Resolved {
        n: c.n,
        m_max: c.m_max,
        l: c.l,
        m: c.m,
        strategy: c.strategy,
        l_min: c.l_min,
        l_max: c.l_max,
        threshold: c.threshold,
        include_one: c.include_one,
        factors: c.factors.clone(),
        physics: c.physics,
        physics_config,
        timing,
        schedule_source,
    })
}

pub struct Rendered {
    pub body: String,
    pub summary: Option<String>,
}

fn required<T: Copy>(value: Option<T>, flag: &str, command: &str) -> Result<T> {
    value.ok_or_else(|| CliError::Usage(format!("`{command}` requires {flag}")))
}

fn physics(r: &Resolved) -> Physics {
    match r.physics {
        PhysicsArg::Ideal => Physics::Ideal,
        PhysicsArg::Sim => Physics::Simulated(r.timing),
        PhysicsArg::Beam => Physics::Beam(r.physics_config.clone()),
    }
}

fn strategy(r: &Resolved) -> TrialStrategy {
    match r.strategy {
        StrategyArg::Primes => TrialStrategy::Primes,
        StrategyArg::Range => TrialStrategy::Range {
            min: r.l_min,
            max: r.l_max,
        },
    }
}

pub fn render(command: &str, r: &Resolved) -> Result<Rendered> {
    let body_only = |body: String| Rendered {
        body,
        summary: None,
    };
    if command == "schedule" {
        if let Some(text) = &r.schedule_source {
            return Ok(body_only(
                PhaseSchedule::parse_export(text)?.to_export_string(),
            ));
        }
    }
    let n = required(r.n, "--n", command)?;
    Ok(match command {
        "signal" => {
            let l = required(r.l, "--l", command)?;
            let trace = run_signal_trace(n, l, r.m_max, &physics(r))?;
            Rendered {
                summary: Some(format!(
                    "C_{n}^({})({l}) = {}",
                    r.m_max,
                    gauss_factor::format::csv_float(trace.total())
                )),
                body: trace.to_csv(),
            }
        }
        "factor" => {
            let f = run_factorization(
                n,
                r.m_max,
                strategy(r),
                r.threshold,
                r.include_one,
                &physics(r),
            )?;
            Rendered {
                summary: Some(f.summary()),
                body: f.to_csv(),
            }
        }
        "contrast" => body_only(run_contrast_scan(n, r.m_max, strategy(r), &physics(r))?.to_csv()),
        "adapt-compare" => {
            let factors = r
                .factors
                .clone()
                .unwrap_or_else(|| DEFAULT_COMPARISON_FACTORS.to_vec());
            body_only(run_adaptation_comparison(n, &factors, r.m_max, &physics(r))?.to_csv())
        }
        "schedule" => {
            let l = required(r.l, "--l", command)?;
            let m = required(r.m, "--m", command)?;
            body_only(phase_schedule(n, l, m, r.timing)?.to_export_string())
        }
        "primes" => {
            let mut body = String::from("p\n");
            for p in trial_factors(n, TrialStrategy::Primes)? {
                body.push_str(&format!("{p}\n"));
            }
            body_only(body)
        }
        other => return Err(CliError::Usage(format!("unknown command {other:?}"))),
    })
}

fn replay(path: &Path, out: Option<PathBuf>, threads: Option<usize>) -> Result<()> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let manifest: RunManifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: not a run manifest: {e}", path.display())))?;
    let rendered = with_threads(threads, || render(&manifest.command, &manifest.config))??;
    let record = manifest
        .outputs
        .first()
        .ok_or_else(|| CliError::Usage("manifest lists no outputs".into()))?;
    let target = out.unwrap_or_else(|| record.path.clone());
    write_file(&target, rendered.body.as_bytes())?;
    let digest = sha256_hex(rendered.body.as_bytes());
    if digest != record.sha256 {
        return Err(CliError::Domain(gauss_factor::Error::Domain(format!(
            "replayed output {} has checksum {digest}, manifest records {}",
            target.display(),
            record.sha256
        ))));
    }
    eprintln!(
        "replay of {} reproduced {} ({digest})",
        manifest.command,
        target.display()
    );
    Ok(())
}
