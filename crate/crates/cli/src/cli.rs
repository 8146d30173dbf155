//! Command-line front end: combine, score, bench, and gen.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use diacomb::scoring::{compute_der, DerReport, ScoreOptions};
use diacomb::{Hypothesis, Millis, WeightMode};

use crate::bench::{run_bench, BenchMode, BenchParams};
use crate::pipeline::{combine_recording, CombineOptions, Method};
use crate::rttm::{read_rttm_file, write_rttm, write_rttm_all};
use crate::synth::{gen_synthetic, NoiseParams, SynthConfig};

#[derive(Parser)]
#[command(
    name = "diacomb",
    version,
    about = "Combine overlap-aware speaker diarization outputs into a consensus RTTM"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Combine two or more RTTM hypotheses into one consensus RTTM
    Combine(CombineArgs),
    /// Score a system RTTM against a reference RTTM
    Score(ScoreArgs),
    /// Run benchmark studies, CSV on stdout
    Bench(BenchArgs),
    /// Generate a synthetic reference plus noisy hypothesis files
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Greedy,
    Pairwise,
    Rls,
}

impl From<MethodArg> for Method {
    fn from(value: MethodArg) -> Method {
        match value {
            MethodArg::Greedy => Method::Greedy,
            MethodArg::Pairwise => Method::Pairwise,
            MethodArg::Rls => Method::Rls,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WeightArg {
    Relative,
    Absolute,
}

impl From<WeightArg> for WeightMode {
    fn from(value: WeightArg) -> WeightMode {
        match value {
            WeightArg::Relative => WeightMode::Relative,
            WeightArg::Absolute => WeightMode::Absolute,
        }
    }
}

#[derive(Args)]
struct CombineArgs {
    /// Input RTTM files, one hypothesis per file (give at least two)
    #[arg(short = 'i', long = "input", required = true)]
    inputs: Vec<PathBuf>,
    /// Output RTTM path for the combined hypothesis
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Pairwise)]
    method: MethodArg,
    /// Process hypotheses in ascending average-error order (pairwise only)
    #[arg(
        long,
        action = ArgAction::Set,
        default_value_t = true,
        num_args = 0..=1,
        default_missing_value = "true"
    )]
    sort_by_der: bool,
    /// Edge weights: relative (Jaccard) or absolute (overlap seconds)
    #[arg(long = "weight", value_enum, default_value_t = WeightArg::Relative)]
    weight: WeightArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "rls-epochs", default_value_t = 1000)]
    rls_epochs: u32,
    /// Swap iterations per epoch; defaults to 4*C*K
    #[arg(long = "rls-iters")]
    rls_iters: Option<u32>,
    #[arg(long, default_value_t = 100)]
    patience: u32,
    /// Cap on cliques the greedy mapper may enumerate
    #[arg(long = "clique-budget", default_value_t = diacomb::mapping::DEFAULT_CLIQUE_BUDGET)]
    clique_budget: u64,
    /// Weight votes by 1/rank (processing order) instead of uniformly
    #[arg(long)]
    rank_weighting: bool,
}

#[derive(Args)]
struct ScoreArgs {
    /// Reference RTTM
    #[arg(short = 'r', long = "reference")]
    reference: PathBuf,
    /// System RTTM to score
    #[arg(short = 's', long = "system")]
    system: PathBuf,
    /// Forgiveness collar around reference boundaries, in seconds
    #[arg(long, default_value_t = 0.0)]
    collar: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum BenchModeArg {
    Timing,
    WeightVsDer,
    Approx,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    mode: BenchModeArg,
    /// Speakers per hypothesis (C)
    #[arg(long, default_value_t = 4)]
    speakers: usize,
    /// Largest ensemble size (K)
    #[arg(long = "max-k", default_value_t = 8)]
    max_k: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the first instance's edge list (`k.i k'.j weight` lines) here
    #[arg(long = "dump-graph")]
    dump_graph: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 4)]
    speakers: usize,
    /// Number of noisy hypothesis files
    #[arg(long, default_value_t = 3)]
    hyps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for ref.rttm and hyp_XX.rttm
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
    #[arg(long = "duration-s", default_value_t = 120.0)]
    duration_s: f64,
    #[arg(long = "jitter-ms", default_value_t = 250)]
    jitter_ms: u64,
    #[arg(long = "p-delete", default_value_t = 0.08)]
    p_delete: f64,
    #[arg(long = "p-insert", default_value_t = 0.05)]
    p_insert: f64,
    /// Probability that a copy collapses two speakers into one label
    #[arg(long = "p-merge", default_value_t = 0.12)]
    p_merge: f64,
    /// Probability that a copy splits one speaker over two labels
    #[arg(long = "p-split", default_value_t = 0.08)]
    p_split: f64,
    /// Per-hypothesis noise growth (hypothesis k is scaled by 1 + ramp*k)
    #[arg(long = "noise-ramp", default_value_t = 0.5)]
    noise_ramp: f64,
    #[arg(long = "recording-id", default_value = "synthetic")]
    recording_id: String,
}

pub fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Combine(args) => cmd_combine(&args),
        Command::Score(args) => cmd_score(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Gen(args) => cmd_gen(&args),
    }
}

fn cmd_combine(args: &CombineArgs) -> Result<()> {
    if args.inputs.len() < 2 {
        bail!("combine needs at least 2 input files, got {}", args.inputs.len());
    }
    let mut per_recording: BTreeMap<String, Vec<Hypothesis>> = BTreeMap::new();
    for (index, path) in args.inputs.iter().enumerate() {
        let parsed = read_rttm_file(path).with_context(|| format!("{}", path.display()))?;
        if parsed.is_empty() {
            bail!("{} contains no speaker turns", path.display());
        }
        for (recording, hypothesis) in parsed {
            per_recording.entry(recording).or_default().push(hypothesis);
        }
        // every file must cover every recording seen so far
        for (recording, hypotheses) in &per_recording {
            if hypotheses.len() != index + 1 {
                bail!(
                    "recording '{recording}' is missing from {}",
                    path.display()
                );
            }
        }
    }

    let options = CombineOptions {
        method: args.method.into(),
        sort_by_der: args.sort_by_der,
        weight_mode: args.weight.into(),
        seed: args.seed,
        rls_epochs: args.rls_epochs,
        rls_iters: args.rls_iters,
        patience: args.patience,
        clique_budget: args.clique_budget,
        rank_weighting: args.rank_weighting,
    };

    let mut combined = Vec::new();
    let stderr = std::io::stderr();
    for (recording, hypotheses) in &per_recording {
        let outcome = combine_recording(hypotheses, &options)
            .with_context(|| format!("combining recording '{recording}'"))?;
        writeln!(
            stderr.lock(),
            "recording {recording}: weight={:.6} mapping_ms={:.3} method={}",
            outcome.weight,
            outcome.mapping_time.as_secs_f64() * 1e3,
            options.method.name()
        )?;
        combined.push(outcome.combined);
    }

    std::fs::write(&args.output, write_rttm_all(&combined))
        .with_context(|| format!("writing {}", args.output.display()))?;
    Ok(())
}

fn cmd_score(args: &ScoreArgs) -> Result<()> {
    let references =
        read_rttm_file(&args.reference).with_context(|| format!("{}", args.reference.display()))?;
    let systems =
        read_rttm_file(&args.system).with_context(|| format!("{}", args.system.display()))?;
    if references.is_empty() {
        bail!("{} contains no reference turns", args.reference.display());
    }
    if args.collar < 0.0 {
        bail!("collar must be non-negative, got {}", args.collar);
    }
    let options = ScoreOptions {
        collar: Millis::from_seconds(args.collar)
            .with_context(|| format!("bad collar {}", args.collar))?,
    };

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "{:<24} {:>8} {:>8} {:>8} {:>8}", "recording", "MS", "FA", "SE", "DER")?;
    let empty_fallback = |recording: &str| Hypothesis::empty(recording);
    let mut totals = (Millis::ZERO, Millis::ZERO, Millis::ZERO, Millis::ZERO);
    for (recording, reference) in &references {
        let owned;
        let system = match systems.get(recording) {
            Some(system) => system,
            None => {
                eprintln!("warning: recording '{recording}' missing from the system file");
                owned = empty_fallback(recording);
                &owned
            }
        };
        let report = compute_der(reference, system, &options)?;
        write_report_row(&mut out, recording, &report)?;
        totals.0 += report.missed_speech;
        totals.1 += report.false_alarm;
        totals.2 += report.speaker_error;
        totals.3 += report.total_reference_speech;
    }
    if references.len() > 1 {
        let overall = DerReport {
            missed_speech: totals.0,
            false_alarm: totals.1,
            speaker_error: totals.2,
            total_reference_speech: totals.3,
        };
        write_report_row(&mut out, "OVERALL", &overall)?;
    }
    Ok(())
}

fn write_report_row(out: &mut impl Write, name: &str, report: &DerReport) -> Result<()> {
    writeln!(
        out,
        "{:<24} {:>7.2}% {:>7.2}% {:>7.2}% {:>7.2}%",
        name,
        report.missed_ratio() * 100.0,
        report.false_alarm_ratio() * 100.0,
        report.speaker_error_ratio() * 100.0,
        report.der() * 100.0
    )?;
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<()> {
    if args.speakers == 0 || args.max_k < 2 {
        bail!("bench needs --speakers >= 1 and --max-k >= 2");
    }
    let params = BenchParams {
        speakers: args.speakers,
        max_k: args.max_k,
        trials: args.trials,
        seed: args.seed,
    };
    if let Some(path) = &args.dump_graph {
        dump_first_graph(&params, path)?;
    }
    let mode = match args.mode {
        BenchModeArg::Timing => BenchMode::Timing,
        BenchModeArg::WeightVsDer => BenchMode::WeightVsDer,
        BenchModeArg::Approx => BenchMode::Approx,
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_bench(mode, &params, &mut stdout.lock(), &mut stderr.lock())
}

fn dump_first_graph(params: &BenchParams, path: &Path) -> Result<()> {
    let ensemble = gen_synthetic(&SynthConfig::new(params.speakers, params.max_k, params.seed));
    let graph = diacomb::MappingGraph::from_hypotheses(&ensemble.hypotheses, WeightMode::Relative)?;
    std::fs::write(path, graph.edge_list())
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<()> {
    if args.speakers == 0 || args.hyps < 2 {
        bail!("gen needs --speakers >= 1 and --hyps >= 2");
    }
    let duration = Millis::from_seconds(args.duration_s)
        .with_context(|| format!("bad duration {}", args.duration_s))?;
    let config = SynthConfig {
        recording_id: args.recording_id.clone(),
        speakers: args.speakers,
        hypotheses: args.hyps,
        duration,
        seed: args.seed,
        noise: NoiseParams {
            jitter: Millis::from_ms(args.jitter_ms as i64),
            p_delete: args.p_delete,
            p_insert: args.p_insert,
            p_merge: args.p_merge,
            p_split: args.p_split,
            ramp: args.noise_ramp,
        },
    };
    let ensemble = gen_synthetic(&config);

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let reference_path = args.out_dir.join("ref.rttm");
    std::fs::write(&reference_path, write_rttm(&ensemble.reference))?;
    eprintln!("wrote {}", reference_path.display());
    for (index, hypothesis) in ensemble.hypotheses.iter().enumerate() {
        let path = args.out_dir.join(format!("hyp_{:02}.rttm", index + 1));
        std::fs::write(&path, write_rttm(hypothesis))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
