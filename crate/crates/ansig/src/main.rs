//! Command-line front end: sign shapes, compare and classify signatures,
//! maintain a prototype database, export signature samples for plotting, and
//! run the synthetic noise benchmark.
//!
//! Exit codes: 0 success, 2 usage error, 3 I/O error, 4 format or K mismatch,
//! 5 degenerate shape.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::f64::consts::TAU;
use std::path::PathBuf;
use std::process::ExitCode;

use ansig::error::AnsigError;
use ansig::ingest::{self, Polarity};
use ansig::matching;
use ansig::shape::PointSet;
use ansig::sigdb::{self, SigDb};
use ansig::signature::{sign, SignConfig, Signature, DEFAULT_K};
use ansig::synth::{self, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "ansig",
    about = "Analytic signatures for 2D point-set shapes: signing, rotation \
             alignment, similarity scoring, and classification",
    long_about = "Shapes are bags of unlabeled 2D points. Signatures are \
                  invariant to point order, translation, and scale; rotation \
                  is recovered during comparison (counterclockwise positive). \
                  Image input uses the convention x = column, y = height-1-row \
                  (y axis points up)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImageMode {
    /// Keep pixels passing an intensity threshold
    Threshold,
    /// Keep pixels with a central-difference gradient magnitude above the threshold
    Edge,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolarityArg {
    Dark,
    Bright,
}

#[derive(Args)]
struct InputArgs {
    /// CSV point file, one "x,y" per line
    #[arg(long, conflicts_with = "image")]
    input: Option<PathBuf>,
    /// PGM image (P2 or P5) to extract points from
    #[arg(long, required_unless_present = "input")]
    image: Option<PathBuf>,
    /// Point extraction mode for --image
    #[arg(long, value_enum, default_value = "threshold")]
    mode: ImageMode,
    /// Intensity cutoff (threshold mode, default max_val/2) or gradient
    /// magnitude cutoff (edge mode, default max_val/10)
    #[arg(long)]
    threshold: Option<f64>,
    /// Which side of the intensity threshold to keep (threshold mode)
    #[arg(long, value_enum, default_value = "dark")]
    polarity: PolarityArg,
}

#[derive(Args)]
struct SignArgs {
    /// Number of unit-circle samples (power of two)
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    /// Weight landmark moduli as ln(1 + rho) before signing
    #[arg(long)]
    weighted: bool,
    /// Also sign the inner landmarks (two-signature representation)
    #[arg(long = "two")]
    two_ansig: bool,
    /// Modulus cutoff on the normalized shape for the inner subset
    #[arg(long, default_value_t = 1.0)]
    inner_threshold: f64,
}

impl SignArgs {
    fn config(&self) -> SignConfig {
        SignConfig {
            k: self.k,
            weighted: self.weighted,
            two_ansig: self.two_ansig,
            inner_threshold: self.inner_threshold,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the signature of a point set or image and write it to a file
    Sign {
        #[command(flatten)]
        input: InputArgs,
        /// Output signature file (JSON)
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        sign: SignArgs,
    },
    /// Align two signature files and print shift, angle, and similarity
    Compare {
        sig_a: PathBuf,
        sig_b: PathBuf,
    },
    /// Rank database entries by similarity to a query shape
    Classify {
        /// Signature database file
        #[arg(long)]
        db: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        /// Show only the best N entries
        #[arg(long)]
        top: Option<usize>,
        /// Mark entries with similarity at or above this value
        #[arg(long)]
        min_psi: Option<f64>,
    },
    /// Signature database maintenance
    Db {
        #[command(subcommand)]
        command: DbCommand,
    },
    /// Export signature samples as CSV (index, angle, magnitude, phase)
    Export {
        /// Signature file to export
        #[arg(long)]
        sig: PathBuf,
        /// Output CSV path
        #[arg(long)]
        output: PathBuf,
    },
    /// Synthetic noisy-polygon classification benchmark
    Bench {
        /// Trials per shape per SNR level
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Comma-separated SNR levels in dB ("inf" for noiseless)
        #[arg(long, value_delimiter = ',', default_values_t = vec![27.96, 26.02, 24.44, 23.1, 21.94])]
        snr: Vec<f64>,
        /// Landmarks per shape
        #[arg(long = "n-points", default_value_t = 100)]
        n_points: usize,
        /// Base seed; the whole run is reproducible from it
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for per-level confusion CSV files
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        sign: SignArgs,
        /// Also write a per-trial log CSV
        #[arg(long = "trial-log")]
        trial_log: Option<PathBuf>,
        /// Run trials on a single thread
        #[arg(long)]
        serial: bool,
    },
}

#[derive(Subcommand)]
enum DbCommand {
    /// Add a signature file to a database (created if missing)
    Add {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        label: String,
        #[arg(long)]
        sig: PathBuf,
    },
    /// List database entries
    List {
        #[arg(long)]
        db: PathBuf,
    },
}

fn load_points(args: &InputArgs) -> Result<PointSet, AnsigError> {
    if let Some(path) = &args.input {
        return ingest::read_points(path);
    }
    let path = args.image.as_ref().expect("clap enforces input or image");
    let img = ingest::read_pgm(path)?;
    let points = match args.mode {
        ImageMode::Threshold => {
            let t = args.threshold.unwrap_or(img.max_val as f64 / 2.0) as u16;
            let polarity = match args.polarity {
                PolarityArg::Dark => Polarity::Dark,
                PolarityArg::Bright => Polarity::Bright,
            };
            ingest::threshold_points(&img, t, polarity)
        }
        ImageMode::Edge => {
            let t = args.threshold.unwrap_or(img.max_val as f64 / 10.0);
            ingest::edge_points(&img, t)?
        }
    };
    PointSet::new(points)
}

fn print_match(result: &matching::MatchResult) {
    println!("k*     = {}", result.k_star);
    println!(
        "theta* = {:.6} rad ({:.4} deg, counterclockwise)",
        result.theta_star,
        result.theta_star.to_degrees()
    );
    println!("psi    = {:.6}", result.psi);
}

fn run(cli: Cli) -> Result<(), AnsigError> {
    match cli.command {
        Command::Sign { input, output, sign: sign_args } => {
            let points = load_points(&input)?;
            let sig = sign(&points, &sign_args.config())?;
            sigdb::save_signature(&output, &sig)?;
            println!(
                "signed {} points, K = {}{}{}",
                sig.n_points,
                sig.k(),
                if sig.weighted { ", weighted" } else { "" },
                match (&sig.inner, sig.inner_degraded) {
                    (Some(inner), _) => format!(", inner = {} points", inner.n_points),
                    (None, true) => String::from(", inner degraded (too few inner points)"),
                    (None, false) => String::new(),
                }
            );
        }
        Command::Compare { sig_a, sig_b } => {
            let a = sigdb::load_signature(&sig_a)?;
            let b = sigdb::load_signature(&sig_b)?;
            print_match(&matching::match_signatures(&a, &b)?);
        }
        Command::Classify { db, input, top, min_psi } => {
            let db = SigDb::load(&db)?;
            let points = load_points(&input)?;
            let cfg = SignConfig {
                k: db.k().ok_or(AnsigError::EmptyDatabase)?,
                weighted: db.weighted().unwrap_or(false),
                two_ansig: db.two_ansig().unwrap_or(false),
                ..Default::default()
            };
            let query = sign(&points, &cfg)?;
            let ranked = matching::classify(&db, &query)?;
            let limit = top.unwrap_or(ranked.entries.len());
            println!("label,psi,theta_deg{}", if min_psi.is_some() { ",match" } else { "" });
            for (label, result) in ranked.entries.iter().take(limit) {
                print!(
                    "{},{:.6},{:.4}",
                    label,
                    result.psi,
                    result.theta_star.to_degrees()
                );
                if let Some(t) = min_psi {
                    print!(",{}", if result.psi >= t { "yes" } else { "no" });
                }
                println!();
            }
        }
        Command::Db { command } => match command {
            DbCommand::Add { db: db_path, label, sig } => {
                let mut db = if db_path.exists() {
                    SigDb::load(&db_path)?
                } else {
                    SigDb::new()
                };
                db.add(&label, sigdb::load_signature(&sig)?)?;
                db.save(&db_path)?;
                println!("added '{}' ({} entries)", label, db.entries().len());
            }
            DbCommand::List { db } => {
                let db = SigDb::load(&db)?;
                match db.k() {
                    Some(k) => println!(
                        "K = {k}, weighted = {}, two-ansig = {}",
                        db.weighted().unwrap_or(false),
                        db.two_ansig().unwrap_or(false)
                    ),
                    None => println!("empty database"),
                }
                for entry in db.entries() {
                    println!(
                        "{}\t{} points{}",
                        entry.label,
                        entry.signature.n_points,
                        match &entry.signature.inner {
                            Some(inner) => format!(" (+{} inner)", inner.n_points),
                            None => String::new(),
                        }
                    );
                }
            }
        },
        Command::Export { sig, output } => {
            let sig: Signature = sigdb::load_signature(&sig)?;
            let k = sig.k();
            let mut out = String::from("index,angle,magnitude,phase\n");
            for (i, s) in sig.samples.iter().enumerate() {
                out.push_str(&format!(
                    "{},{:.12},{:.12},{:.12}\n",
                    i,
                    TAU * i as f64 / k as f64,
                    s.norm(),
                    s.arg()
                ));
            }
            std::fs::write(&output, out).map_err(|e| AnsigError::Io {
                path: output.display().to_string(),
                source: e,
            })?;
        }
        Command::Bench {
            trials,
            snr,
            n_points,
            seed,
            out,
            sign: sign_args,
            trial_log,
            serial,
        } => {
            let cfg = ExperimentConfig {
                n_points,
                trials_per_shape_per_level: trials,
                snr_db_levels: snr,
                k: sign_args.k,
                weighted: sign_args.weighted,
                two_ansig: sign_args.two_ansig,
                base_seed: seed,
                parallel: !serial,
                ..Default::default()
            };
            let results = synth::run_experiment(&cfg)?;
            std::fs::create_dir_all(&out).map_err(|e| AnsigError::Io {
                path: out.display().to_string(),
                source: e,
            })?;
            for level in &results {
                let name = format!("confusion_{}dB.csv", level.snr_db);
                let path = out.join(&name);
                std::fs::write(&path, level.confusion.to_csv()).map_err(|e| AnsigError::Io {
                    path: path.display().to_string(),
                    source: e,
                })?;
                println!("SNR {} dB -> {}", level.snr_db, path.display());
                print!("{}", level.confusion.to_csv());
            }
            if let Some(path) = trial_log {
                std::fs::write(&path, synth::trial_log_csv(&results)).map_err(|e| {
                    AnsigError::Io {
                        path: path.display().to_string(),
                        source: e,
                    }
                })?;
            }
        }
    }
    Ok(())
}

fn exit_code_for(err: &AnsigError) -> u8 {
    match err {
        AnsigError::Io { .. } => 3,
        AnsigError::DegenerateShape => 5,
        AnsigError::TooFewPoints(_) => 2,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
