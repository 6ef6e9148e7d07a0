use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use beaches::denoiser::{denoise_beamspace_in_place, Beaches, DenoiserConfig};
use beaches::io::{format_results_csv, format_vector_csv, parse_paths_csv, parse_vector_csv, RunManifest};
use beaches::selftest::{run_selftest, SelftestOptions};
use beaches::sim::{run_ber_sweep, run_mse_sweep, run_scaling_benchmark, SimConfig};
use beaches::{sample_profile, synthesize_channel, Error, Profile};

#[derive(Parser)]
#[command(name = "beaches", version, about = "SURE-tuned beamspace channel denoising")]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputDomain {
    Antenna,
    Beamspace,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Los,
    Nlos,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Mse,
    Ber,
    Scaling,
}

#[derive(Subcommand)]
enum Command {
    /// Denoise one channel vector.
    Denoise {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        e0: f64,
        #[arg(long)]
        output: PathBuf,
        /// Print "tau_star=<v> sure_min=<v>" to stdout.
        #[arg(long)]
        emit_tau: bool,
        /// Domain of the input (and output) vector.
        #[arg(long, value_enum, default_value = "antenna")]
        domain: InputDomain,
    },
    /// Generate a channel vector from a random profile or explicit paths.
    GenChannel {
        #[arg(long, value_enum, default_value = "los")]
        profile: ProfileArg,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV of alpha_re,alpha_im,omega rows; overrides --profile.
        #[arg(long)]
        paths_file: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run an MSE, BER or runtime sweep.
    Sweep {
        #[arg(long, value_enum)]
        kind: SweepKind,
        /// key = value config file.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run the fast invariant checks.
    Selftest,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Config(_) | Error::InvalidNoiseVariance(_) | Error::InvalidArgument(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn with_context(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| match Failure::from(e) {
        Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
        Failure::Runtime(m) => Failure::Runtime(format!("{}: {m}", path.display())),
    }
}

fn denoise(input: &Path, e0: f64, output: &Path, emit_tau: bool, domain: InputDomain) -> Result<(), Failure> {
    let cfg = DenoiserConfig::new(e0)?;
    let mut data = parse_vector_csv(&read_input(input)?).map_err(with_context(input))?;
    let result = match domain {
        InputDomain::Antenna => Beaches::new(data.len(), cfg)?.denoise_in_place(&mut data)?,
        InputDomain::Beamspace => denoise_beamspace_in_place(&mut data, &cfg),
    };
    write_output(output, &format_vector_csv(&data))?;
    if emit_tau {
        println!("tau_star={} sure_min={}", result.tau_star, result.sure_min);
    }
    info!("denoised {} entries, interval {}", data.len(), result.interval_index);
    Ok(())
}

fn gen_channel(profile: ProfileArg, b: usize, seed: u64, paths_file: Option<&Path>, output: &Path) -> Result<(), Failure> {
    let model = match paths_file {
        Some(p) => parse_paths_csv(&read_input(p)?, b).map_err(with_context(p))?,
        None => {
            let profile = match profile {
                ProfileArg::Los => Profile::los(),
                ProfileArg::Nlos => Profile::nlos(),
            };
            sample_profile(&profile, b, seed)?
        }
    };
    let h = synthesize_channel(&model);
    write_output(output, &format_vector_csv(h.as_slice()))
}

fn sweep(kind: SweepKind, config: &Path, output: &Path, threads: usize) -> Result<(), Failure> {
    let cfg = SimConfig::parse(&read_input(config)?).map_err(with_context(config))?;
    let start = Instant::now();
    let (name, records) = match kind {
        SweepKind::Mse => ("mse", run_mse_sweep(&cfg)?),
        SweepKind::Ber => ("ber", run_ber_sweep(&cfg)?),
        SweepKind::Scaling => {
            cfg.validate_scaling()?;
            ("scaling", run_scaling_benchmark(&cfg.b_list, cfg.scaling_runs, cfg.master_seed)?)
        }
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    write_output(output, &format_results_csv(&records))?;
    let manifest = RunManifest { command: format!("sweep --kind {name}"), config: cfg, threads, wall_time_ms };
    let mut manifest_path = output.as_os_str().to_owned();
    manifest_path.push(".manifest");
    write_output(Path::new(&manifest_path), &manifest.to_text())?;
    info!("{name} sweep: {} records in {wall_time_ms:.1} ms", records.len());
    Ok(())
}

fn selftest() -> Result<(), Failure> {
    let outcomes = run_selftest(&SelftestOptions::default());
    let mut failed = 0;
    for c in &outcomes {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.passed);
    }
    if failed > 0 {
        Err(Failure::Runtime(format!("{failed} of {} checks failed", outcomes.len())))
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    let threads = cli.threads.unwrap_or_else(rayon::current_num_threads);
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }

    let result = match &cli.command {
        Command::Denoise { input, e0, output, emit_tau, domain } => denoise(input, *e0, output, *emit_tau, *domain),
        Command::GenChannel { profile, b, seed, paths_file, output } => {
            gen_channel(*profile, *b, *seed, paths_file.as_deref(), output)
        }
        Command::Sweep { kind, config, output } => sweep(*kind, config, output, threads),
        Command::Selftest => selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
