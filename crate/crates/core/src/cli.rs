//! `klr-hopfield` command line.
//!
//! Every subcommand writes its CSV (or JSON) output plus an
//! `<stem>.manifest.json` next to it. Failures print one line to stderr,
//! `error kind=<kind> message=<json string>`, and exit non-zero (2 for usage
//! errors, 1 otherwise).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::analysis::cover::cover_rows;
use crate::analysis::morph::{
    effective_potential_profile, morph_experiment, slowdown_profile, uniform_grid, MorphConfig,
};
use crate::analysis::snr::snr_analysis;
use crate::analysis::spectrum::gram_spectrum;
use crate::dynamics::{recall_noisy, run_sequence_with, DEFAULT_MAX_STEPS};
use crate::error::{Error, Result};
use crate::harness::embeddings::{binarize_embeddings, load_embeddings};
use crate::harness::manifest::ExperimentManifest;
use crate::harness::model_io::{load_model, save_model};
use crate::harness::output::{self, Table};
use crate::harness::patterns::{gen_random_patterns, read_meta, read_patterns, sibling, write_patterns};
use crate::harness::rng::derive_u64;
use crate::harness::sweep::{run_sweep, summarize_capacity, summarize_snr, SnrRow, SweepConfig};
use crate::kernel::{gram_matrix, KernelConfig};
use crate::model::{LossNormalization, TrainingMode};
use crate::training::{train_klr_with_gram, TrainingConfig};

pub const THREADS_ENV: &str = "KLR_HOPFIELD_THREADS";

#[derive(Debug, Parser)]
#[command(name = "klr-hopfield", version, about = "Kernel logistic regression Hopfield memory experiments")]
pub struct Cli {
    /// Worker threads for independent trials.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct TrainerArgs {
    #[arg(long, default_value_t = 0.1)]
    pub lr: f64,
    #[arg(long, default_value_t = 500)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0.01)]
    pub weight_decay: f64,
    /// Loss normalisation: sum or mean.
    #[arg(long, default_value = "sum")]
    pub normalization: LossNormalization,
}

impl TrainerArgs {
    fn config(&self, mode: TrainingMode, seed: u64) -> TrainingConfig {
        TrainingConfig {
            mode,
            learning_rate: self.lr,
            iterations: self.iterations,
            weight_decay: self.weight_decay,
            loss_normalization: self.normalization,
            seed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Comma list (`100,200,400`) or range `start:stop:step` (inclusive).
    #[arg(long, value_parser = parse_grid)]
    pub p_grid: Option<Grid>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = KernelConfig::RIDGE_GAMMA)]
    pub gamma: f64,
    #[command(flatten)]
    pub trainer: TrainerArgs,
}

/// Pattern-count grid parsed from one `--p-grid` value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid(pub Vec<usize>);

impl SweepArgs {
    fn config(&self, mode: TrainingMode) -> Result<SweepConfig> {
        let grid = self
            .p_grid
            .as_ref()
            .ok_or_else(|| Error::Config("--p-grid is required".into()))?;
        Ok(SweepConfig {
            kernel: KernelConfig::new(self.gamma)?,
            training: self.trainer.config(mode, self.seed),
            ..SweepConfig::new(self.n, grid.0.clone(), self.trials, self.seed)
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct MorphArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub a: usize,
    #[arg(long)]
    pub b: usize,
    /// Number of evenly spaced ratios in [0, 1].
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[arg(long, default_value_t = 0.01)]
    pub nu: f64,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

impl MorphArgs {
    fn config(&self) -> Result<MorphConfig> {
        Ok(MorphConfig {
            ratio_grid: uniform_grid(self.grid)?,
            nu: self.nu,
            trials: self.trials,
            seed: self.seed,
            max_steps: self.max_steps,
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate i.i.d. random ±1 patterns.
    GenPatterns {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Centre and sign-binarise an embedding CSV.
    Binarize {
        #[arg(long)]
        input: PathBuf,
        /// Optional number of rows to sample (without replacement) before binarising.
        #[arg(long)]
        subset: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a network on a pattern file and save the model JSON.
    Train {
        #[arg(long)]
        patterns: PathBuf,
        #[arg(long, default_value = "auto")]
        mode: TrainingMode,
        #[arg(long, default_value_t = KernelConfig::RIDGE_GAMMA)]
        gamma: f64,
        #[command(flatten)]
        trainer: TrainerArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Noisy-cue recall of stored patterns.
    Recall {
        #[arg(long)]
        model: PathBuf,
        /// Fraction of bits flipped in each cue.
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Only this pattern (default: every stored pattern).
        #[arg(long)]
        pattern: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the 6P-step sequence-recall protocol on a sequence model.
    Sequence {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Optional CSV of overlaps with every stored pattern at every step.
        #[arg(long)]
        full_out: Option<PathBuf>,
    },
    /// Sequence capacity over a grid of pattern counts.
    CapacitySweep {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Morph between two stored patterns and relax.
    Morph(MorphArgs),
    /// Effective potential along the sphere-projected morphing path.
    Potential {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convergence time along the morphing path.
    Slowdown(MorphArgs),
    /// Signal/crosstalk statistics of a model, or of a fresh sweep.
    Snr {
        #[arg(long, conflicts_with = "p_grid")]
        model: Option<PathBuf>,
        /// Target convention (default: the model's mode; sequence for sweeps).
        #[arg(long)]
        mode: Option<TrainingMode>,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Gram spectrum and participation ratio.
    Effdim {
        #[arg(long, conflicts_with = "patterns")]
        model: Option<PathBuf>,
        #[arg(long)]
        patterns: Option<PathBuf>,
        #[arg(long, default_value_t = KernelConfig::RIDGE_GAMMA)]
        gamma: f64,
        #[arg(long)]
        eigenvalues_out: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Storage accuracy against 2·D_eff over a grid of pattern counts.
    Cover {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value = "sequence")]
        mode: TrainingMode,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad grid value '{t}': {e}"))
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range must be start:stop:step, got '{s}'"));
        }
        let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if step == 0 || start > stop {
            return Err(format!("empty range '{s}'"));
        }
        Ok(Grid((start..=stop).step_by(step).collect()))
    } else {
        s.split(',').map(parse).collect::<std::result::Result<_, _>>().map(Grid)
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    sibling(out, "manifest.json")
}

fn write_table(table: &Table, out: &Path, manifest: &mut ExperimentManifest) -> Result<()> {
    table.write(out)?;
    manifest.add_output(out);
    Ok(())
}

fn run_command(command: Command) -> Result<()> {
    match command {
        Command::GenPatterns { n, p, seed, out } => {
            let mut m = ExperimentManifest::start("gen-patterns", json!({"n": n, "p": p}), Some(seed));
            let patterns = gen_random_patterns(n, p, seed)?;
            write_patterns(&out, &patterns, Some(seed), json!({"generator": "iid-uniform-bipolar"}))?;
            m.add_output(&out);
            m.finish_and_write(&manifest_path(&out))
        }
        Command::Binarize {
            input,
            subset,
            seed,
            out,
        } => {
            let mut m = ExperimentManifest::start(
                "binarize",
                json!({"input": input.display().to_string(), "subset": subset}),
                Some(seed),
            );
            let emb = load_embeddings(&input)?;
            let mut patterns = binarize_embeddings(&emb)?;
            let mut rows: Option<Vec<usize>> = None;
            if let Some(k) = subset {
                if k > patterns.p() {
                    return Err(Error::invalid("subset", format!("{k} exceeds {} rows", patterns.p())));
                }
                let mut rng = crate::harness::rng::stream(seed, "subset", &[k as u64]);
                let mut idx = rand::seq::index::sample(&mut rng, patterns.p(), k).into_vec();
                idx.sort_unstable();
                patterns = patterns.subset(&idx)?;
                m.add_seed("subset", &[k as u64], derive_u64(seed, "subset", &[k as u64]));
                rows = Some(idx);
            }
            let source_meta = read_meta(&input)?;
            write_patterns(
                &out,
                &patterns,
                None,
                json!({
                    "source": input.display().to_string(),
                    "source_meta": source_meta,
                    "centred": true,
                    "rows": rows,
                    "subset_seed": subset.map(|_| seed),
                }),
            )?;
            m.add_output(&out);
            m.finish_and_write(&manifest_path(&out))
        }
        Command::Train {
            patterns,
            mode,
            gamma,
            trainer,
            seed,
            out,
        } => {
            let kernel = KernelConfig::new(gamma)?;
            let cfg = trainer.config(mode, seed);
            let mut m = ExperimentManifest::start(
                "train",
                json!({"patterns": patterns.display().to_string(), "kernel": kernel, "training": cfg}),
                Some(seed),
            );
            let pats = read_patterns(&patterns)?;
            let gram = gram_matrix(&pats, &kernel)?;
            let (weights, trace) = train_klr_with_gram(&pats, &gram, &cfg, &kernel)?;
            save_model(&weights, &pats, &out)?;
            m.config["final_loss"] = json!(trace.last());
            m.add_output(&out);
            m.finish_and_write(&manifest_path(&out))
        }
        Command::Recall {
            model,
            noise,
            trials,
            pattern,
            seed,
            max_steps,
            out,
        } => {
            let mut m = ExperimentManifest::start(
                "recall",
                json!({"model": model.display().to_string(), "noise": noise, "trials": trials,
                       "pattern": pattern, "max_steps": max_steps}),
                Some(seed),
            );
            let (weights, pats) = load_model(&model)?;
            let indices: Vec<usize> = match pattern {
                Some(mu) => vec![mu],
                None => (0..pats.p()).collect(),
            };
            let per_pattern = indices
                .iter()
                .map(|&mu| Ok((mu, recall_noisy(&pats, &weights, mu, noise, trials, seed, max_steps)?)))
                .collect::<Result<Vec<_>>>()?;
            write_table(&output::recall_table(&per_pattern), &out, &mut m)?;
            m.finish_and_write(&manifest_path(&out))
        }
        Command::Sequence {
            model,
            out,
            full_out,
        } => {
            let mut m = ExperimentManifest::start(
                "sequence",
                json!({"model": model.display().to_string()}),
                None,
            );
            let (weights, pats) = load_model(&model)?;
            let run = run_sequence_with(&pats, &weights, full_out.is_some())?;
            m.config["success"] = json!(run.success);
            m.config["first_error_step"] = json!(run.first_error_step);
            write_table(&output::sequence_table(&run), &out, &mut m)?;
            if let (Some(path), Some(rows)) = (full_out, run.full_overlap_matrix.as_ref()) {
                let mut text = String::from("step");
                for mu in 1..=pats.p() {
                    text.push_str(&format!(",m{mu}"));
                }
                text.push('\n');
                for (t, row) in rows.iter().enumerate() {
                    text.push_str(&(t + 1).to_string());
                    for v in row {
                        text.push(',');
                        text.push_str(&output::fmt_f64(*v));
                    }
                    text.push('\n');
                }
                std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
                m.add_output(&path);
            }
            m.finish_and_write(&manifest_path(&out))
        }
        Command::CapacitySweep { sweep, out } => {
            let cfg = sweep.config(TrainingMode::Sequence)?;
            let mut m = ExperimentManifest::start("capacity-sweep", json!(cfg), Some(cfg.master_seed));
            let result = summarize_capacity(run_sweep(&cfg)?);
            for r in &result.records {
                m.add_seed("patterns", &[r.p as u64, r.trial as u64], r.seed);
            }
            m.config["p_c"] = json!(result.p_c);
            write_table(&output::capacity_table(&result), &out, &mut m)?;
            m.finish_and_write(&manifest_path(&out))
        }
        Command::Morph(args) => {
            let cfg = args.config()?;
            let mut m = ExperimentManifest::start(
                "morph",
                json!({"model": args.model.display().to_string(), "a": args.a, "b": args.b, "morph": cfg}),
                Some(args.seed),
            );
            let (weights, pats) = load_model(&args.model)?;
            let result = morph_experiment(args.a, args.b, &pats, &weights, &cfg)?;
            write_table(&output::morph_table(&result), &args.out, &mut m)?;
            m.finish_and_write(&manifest_path(&args.out))
        }
        Command::Potential {
            model,
            a,
            b,
            grid,
            out,
        } => {
            let mut m = ExperimentManifest::start(
                "potential",
                json!({"model": model.display().to_string(), "a": a, "b": b, "grid": grid}),
                None,
            );
            let (weights, pats) = load_model(&model)?;
            let profile = effective_potential_profile(a, b, &pats, &weights, &uniform_grid(grid)?)?;
            write_table(&output::potential_table(&profile), &out, &mut m)?;
            m.finish_and_write(&manifest_path(&out))
        }
        Command::Slowdown(args) => {
            let cfg = args.config()?;
            let mut m = ExperimentManifest::start(
                "slowdown",
                json!({"model": args.model.display().to_string(), "a": args.a, "b": args.b, "morph": cfg}),
                Some(args.seed),
            );
            let (weights, pats) = load_model(&args.model)?;
            let profile = slowdown_profile(args.a, args.b, &pats, &weights, &cfg)?;
            write_table(&output::slowdown_table(&profile), &args.out, &mut m)?;
            m.finish_and_write(&manifest_path(&args.out))
        }
        Command::Snr {
            model,
            mode,
            sweep,
            out,
        } => {
            if let Some(model) = model {
                let mut m = ExperimentManifest::start(
                    "snr",
                    json!({"model": model.display().to_string(), "mode": mode}),
                    None,
                );
                let (weights, pats) = load_model(&model)?;
                let gram = gram_matrix(&pats, weights.kernel())?;
                let r = snr_analysis(&pats, &weights, &gram, mode.unwrap_or(weights.mode()))?;
                let row = SnrRow {
                    p: r.p,
                    signal_mean: r.signal_mean,
                    noise_std: r.noise_std,
                    snr: r.snr,
                };
                write_table(&output::snr_table(&[row]), &out, &mut m)?;
                m.finish_and_write(&manifest_path(&out))
            } else {
                if sweep.p_grid.is_none() {
                    return Err(Error::Config("snr needs --model or --p-grid".into()));
                }
                let mut cfg = sweep.config(mode.unwrap_or(TrainingMode::Sequence))?;
                cfg.with_snr = true;
                let mut m = ExperimentManifest::start("snr", json!(cfg), Some(cfg.master_seed));
                let records = run_sweep(&cfg)?;
                for r in &records {
                    m.add_seed("patterns", &[r.p as u64, r.trial as u64], r.seed);
                }
                write_table(&output::snr_table(&summarize_snr(&records)?), &out, &mut m)?;
                m.finish_and_write(&manifest_path(&out))
            }
        }
        Command::Effdim {
            model,
            patterns,
            gamma,
            eigenvalues_out,
            out,
        } => {
            let (pats, kernel, source) = match (model, patterns) {
                (Some(model), _) => {
                    let (w, p) = load_model(&model)?;
                    (p, *w.kernel(), model)
                }
                (None, Some(path)) => (read_patterns(&path)?, KernelConfig::new(gamma)?, path),
                (None, None) => return Err(Error::Config("effdim needs --model or --patterns".into())),
            };
            let mut m = ExperimentManifest::start(
                "effdim",
                json!({"source": source.display().to_string(), "kernel": kernel}),
                None,
            );
            let spectrum = gram_spectrum(&gram_matrix(&pats, &kernel)?)?;
            write_table(&output::effdim_table(pats.p(), &spectrum), &out, &mut m)?;
            if let Some(path) = eigenvalues_out {
                write_table(&output::eigenvalues_table(&spectrum), &path, &mut m)?;
            }
            m.finish_and_write(&manifest_path(&out))
        }
        Command::Cover { sweep, mode, out } => {
            let mut cfg = sweep.config(mode)?;
            cfg.with_spectrum = true;
            let mut m = ExperimentManifest::start("cover", json!(cfg), Some(cfg.master_seed));
            let records = run_sweep(&cfg)?;
            for r in &records {
                m.add_seed("patterns", &[r.p as u64, r.trial as u64], r.seed);
            }
            write_table(&output::cover_table(&cover_rows(&records)?), &out, &mut m)?;
            m.finish_and_write(&manifest_path(&out))
        }
    }
}

fn error_line(kind: &str, message: &str) -> String {
    format!(
        "error kind={kind} message={}",
        serde_json::to_string(message).unwrap_or_else(|_| "\"\"".into())
    )
}

/// Parses `args` (including the program name) and runs one subcommand.
/// Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", error_line("usage", first.trim_start_matches("error: ")));
            return 2;
        }
    };

    let result = match cli.threads {
        Some(0) => Err(Error::invalid("threads", "must be positive")),
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| run_command(cli.command)),
            Err(e) => Err(Error::Config(format!("thread pool: {e}"))),
        },
        None => run_command(cli.command),
    };

    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_line(e.kind(), &e.to_string()));
            1
        }
    }
}
