//! aquaclean: enhance degraded underwater images and reproduce the
//! evaluation experiments (bank/rule/bilateral sweeps, smoother benchmark).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use aquaclean_core::error::{Error, Result};
use aquaclean_core::pipeline::{
    self, benchmark_smoothers, fixtures, load_config, render_banks_csv, render_bench_csv,
    render_bilateral_csv, render_rules_csv, run_pipeline, sweep_bilateral_params,
    sweep_filter_banks, sweep_shrinkage_rules, PipelineConfig,
};

#[derive(Parser)]
#[command(
    name = "aquaclean",
    version,
    about = "Underwater image enhancement: homomorphic correction, wavelet denoising, edge-preserving smoothing, tone adjustment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Configuration file (INI-style; missing keys use defaults).
    #[arg(short, long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the enhancement pipeline on one image.
    Enhance {
        /// Input image (PPM P5/P6, or PNG when built with the png feature).
        input: PathBuf,
        /// Directory for the outputs (created if missing).
        #[arg(short, long, default_value = ".")]
        outdir: PathBuf,
        #[command(flatten)]
        config: ConfigArg,
        /// Also write the image after each enabled stage.
        #[arg(long)]
        dump_stages: bool,
        /// Skip the homomorphic illumination correction.
        #[arg(long)]
        no_homomorphic: bool,
        /// Skip the wavelet denoising stage.
        #[arg(long)]
        no_wavelet: bool,
        /// Skip the smoothing stage (bilateral or anisotropic).
        #[arg(long)]
        no_bilateral: bool,
        /// Skip the tone stage (equalization + contrast stretch).
        #[arg(long)]
        no_tone: bool,
    },
    /// Run a comparison sweep and print its CSV to stdout.
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Time the bilateral vs. anisotropic pipeline variants.
    Bench {
        /// Input images.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Repetitions per variant (minimum 3).
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Synthetic fixture utilities.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Subcommand)]
enum SweepKind {
    /// Compare the four wavelet filter banks (MSE/PSNR vs. pre-denoise).
    Banks {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Compare the four shrinkage rules (PSNR vs. pre-denoise).
    Rules {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Grid over bilateral sigma_d x sigma_r with smoothness and
    /// edge-retention proxies.
    Bilateral {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        config: ConfigArg,
        /// Comma-separated sigma_d values (default 1..10).
        #[arg(long, value_delimiter = ',')]
        sigma_d: Option<Vec<f64>>,
        /// Comma-separated sigma_r values (default 10,20,...,200).
        #[arg(long, value_delimiter = ',')]
        sigma_r: Option<Vec<f64>>,
    },
}

#[derive(Subcommand)]
enum FixturesAction {
    /// Generate the deterministic fixture set (clean/degraded pairs, step
    /// target, 512x512 benchmark image).
    Generate {
        /// Seed for the generator (default taken from the config).
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(short, long, default_value = "fixtures")]
        outdir: PathBuf,
        #[command(flatten)]
        config: ConfigArg,
    },
}

/// Loads the config (or defaults) and applies the AQUACLEAN_THREADS cap.
fn effective_config(arg: &ConfigArg) -> Result<PipelineConfig> {
    let mut cfg = match &arg.config {
        Some(path) => load_config(path)?,
        None => PipelineConfig::default(),
    };
    if let Ok(value) = std::env::var("AQUACLEAN_THREADS") {
        cfg.threads = value.trim().parse().map_err(|_| Error::Config {
            line: None,
            reason: format!("AQUACLEAN_THREADS must be a nonnegative integer, got `{value}`"),
        })?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Enhance {
            input,
            outdir,
            config,
            dump_stages,
            no_homomorphic,
            no_wavelet,
            no_bilateral,
            no_tone,
        } => {
            let mut cfg = effective_config(&config)?;
            cfg.stages.homomorphic &= !no_homomorphic;
            cfg.stages.wavelet &= !no_wavelet;
            cfg.stages.smoothing &= !no_bilateral;
            cfg.stages.tone &= !no_tone;
            let report = run_pipeline(&cfg, &input, &outdir, dump_stages)?;
            print!("{}", report.render());
        }
        Command::Sweep { kind } => match kind {
            SweepKind::Banks { inputs, config } => {
                let cfg = effective_config(&config)?;
                let rows = sweep_filter_banks(&cfg, &inputs)?;
                print!("{}", render_banks_csv(&rows));
            }
            SweepKind::Rules { inputs, config } => {
                let cfg = effective_config(&config)?;
                let rows = sweep_shrinkage_rules(&cfg, &inputs)?;
                print!("{}", render_rules_csv(&rows));
            }
            SweepKind::Bilateral {
                inputs,
                config,
                sigma_d,
                sigma_r,
            } => {
                let cfg = effective_config(&config)?;
                let sigma_d = sigma_d.unwrap_or_else(pipeline::default_sigma_d_list);
                let sigma_r = sigma_r.unwrap_or_else(pipeline::default_sigma_r_list);
                let rows = sweep_bilateral_params(&cfg, &inputs, &sigma_d, &sigma_r)?;
                print!("{}", render_bilateral_csv(&rows));
            }
        },
        Command::Bench {
            inputs,
            reps,
            config,
        } => {
            let cfg = effective_config(&config)?;
            let rows = benchmark_smoothers(&cfg, &inputs, reps)?;
            print!("{}", render_bench_csv(&rows));
        }
        Command::Fixtures { action } => match action {
            FixturesAction::Generate {
                seed,
                outdir,
                config,
            } => {
                let cfg = effective_config(&config)?;
                let seed = seed.unwrap_or(cfg.seed);
                let paths = fixtures::write_fixtures(&outdir, seed)?;
                for path in paths {
                    println!("{}", path.display());
                }
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
