//! Command implementations behind the `mdms` binary.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdms_core::{
    apply_mask, linear_impute, mark_pseudo_missing, mdms_with_threads, parse_series, top_k_motifs, AllMissingPolicy,
    CsvFormat, EngineConfig, LowerBoundMatrixProfile, MaskAmount, MaskSpec, MdmsError, MissingValueSeries, MotifPair,
    PseudoMissingRules,
};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mdms", version, about = "Motif discovery on time series with missing values")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the lower-bound matrix profile.
    Profile(ProfileArgs),
    /// Compute the profile and report the top-k motif pairs.
    Motifs(MotifArgs),
    /// Compare the lower-bound profile with profiles of imputed or oracle data.
    Compare(CompareArgs),
    /// Remove values from a series.
    Mask(MaskArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Zero,
    Flag,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Subsequence length m.
    #[arg(long)]
    pub window: usize,
    /// Exclusion zone half-width is floor(m / N).
    #[arg(long = "exclusion-div", default_value_t = 4)]
    pub exclusion_div: usize,
    /// Global value range LO,HI for missing entries.
    #[arg(long, value_parser = parse_bounds, allow_hyphen_values = true)]
    pub bounds: Option<(f64, f64)>,
    #[arg(long = "all-missing-policy", value_enum, default_value_t = PolicyArg::Zero)]
    pub all_missing_policy: PolicyArg,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Treat spikes, saturated plateaus and variance bursts as missing.
    #[arg(long = "pseudo-missing")]
    pub pseudo_missing: bool,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Profile CSV; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MotifArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long = "top-k", default_value_t = 1)]
    pub top_k: usize,
    /// Profile CSV, written only when given.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Motif CSV; standard output when omitted.
    #[arg(long = "output-motifs")]
    pub output_motifs: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareMode {
    Both,
    Mdms,
    ImputeLinear,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    /// The complete series the input was masked from.
    #[arg(long)]
    pub oracle: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = CompareMode::Both)]
    pub mode: CompareMode,
    /// Side-by-side profile CSV.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MaskModeArg {
    Random,
    Blocks,
    Block,
}

#[derive(Debug, Args)]
pub struct MaskArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: MaskModeArg,
    /// Points (random) or blocks (blocks) to remove.
    #[arg(long, conflicts_with = "fraction")]
    pub count: Option<usize>,
    /// Share of the series length to remove.
    #[arg(long)]
    pub fraction: Option<f64>,
    #[arg(long = "block-len")]
    pub block_len: Option<usize>,
    /// Centre of the block in `block` mode.
    #[arg(long)]
    pub at: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Masked series; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_bounds(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("invalid lower bound {lo:?}"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("invalid upper bound {hi:?}"))?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(format!("bounds must be finite with LO <= HI, got {lo},{hi}"));
    }
    Ok((lo, hi))
}

/// A failed command: message for the error stream and process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INFEASIBLE,
            message: message.into(),
        }
    }
}

impl From<MdmsError> for Failure {
    fn from(e: MdmsError) -> Self {
        match e {
            MdmsError::Parse { .. }
            | MdmsError::NonFinite { .. }
            | MdmsError::TooShort { .. }
            | MdmsError::Config(_) => Failure::usage(e.to_string()),
            MdmsError::InfeasibleWindow { .. }
            | MdmsError::MissingValues(_)
            | MdmsError::AllMissing
            | MdmsError::InfeasibleMask(_)
            | MdmsError::BudgetExceeded { .. } => Failure::infeasible(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::usage(format!("{}: {e}", path.display()))
}

pub fn read_series(path: &Path) -> Result<MissingValueSeries, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    parse_series(&text, CsvFormat::default()).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

/// Formats `v` with 9 significant digits in fixed notation.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0.000000000".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn profile_csv(p: &LowerBoundMatrixProfile) -> String {
    let mut out = String::from("position,value,index,case\n");
    for j in 0..p.len() {
        let value = if p.values[j].is_finite() {
            format_value(p.values[j])
        } else {
            String::new()
        };
        let index = p.index[j].map(|i| i.to_string()).unwrap_or_default();
        let case = p.case[j].map(|c| c.code()).unwrap_or("");
        out.push_str(&format!("{j},{value},{index},{case}\n"));
    }
    out
}

pub fn motifs_csv(motifs: &[MotifPair]) -> String {
    let mut out = String::from("rank,pos_a,pos_b,distance,case\n");
    for p in motifs {
        let case = p.case_label.map(|c| c.code()).unwrap_or("");
        out.push_str(&format!(
            "{},{},{},{},{case}\n",
            p.rank,
            p.pos_a,
            p.pos_b,
            format_value(p.distance)
        ));
    }
    out
}

/// One value per line, missing entries as empty lines. Present values use the
/// shortest representation that parses back to the same number.
pub fn series_csv(s: &MissingValueSeries) -> String {
    let mut out = String::with_capacity(s.len() * 12);
    for v in s.iter() {
        if let Some(v) = v {
            out.push_str(&format!("{v}"));
        }
        out.push('\n');
    }
    out
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            w.write_all(text.as_bytes())
                .and_then(|_| w.flush())
                .map_err(|e| Failure::usage(format!("stdout: {e}")))
        }
    }
}

impl EngineArgs {
    fn config(&self) -> EngineConfig {
        let mut cfg = EngineConfig::new(self.window)
            .with_exclusion_divisor(self.exclusion_div)
            .with_all_missing_policy(match self.all_missing_policy {
                PolicyArg::Zero => AllMissingPolicy::BoundZero,
                PolicyArg::Flag => AllMissingPolicy::FlagInvalid,
            });
        if let Some((lo, hi)) = self.bounds {
            cfg = cfg.with_value_bounds(lo, hi);
        }
        cfg
    }

    fn load(&self) -> Result<MissingValueSeries, Failure> {
        let s = read_series(&self.input)?;
        if self.pseudo_missing {
            Ok(mark_pseudo_missing(&s, &PseudoMissingRules::for_window(self.window))?)
        } else {
            Ok(s)
        }
    }

    fn run(&self, s: &MissingValueSeries) -> Result<LowerBoundMatrixProfile, Failure> {
        if self.threads == 0 {
            return Err(Failure::usage("--threads must be at least 1"));
        }
        Ok(mdms_with_threads(s, &self.config(), self.threads)?)
    }
}

pub fn cmd_profile(args: &ProfileArgs) -> Result<(), Failure> {
    let s = args.engine.load()?;
    let p = args.engine.run(&s)?;
    write_out(args.output.as_deref(), &profile_csv(&p))
}

pub fn cmd_motifs(args: &MotifArgs) -> Result<(), Failure> {
    if args.top_k == 0 {
        return Err(Failure::usage("--top-k must be at least 1"));
    }
    let s = args.engine.load()?;
    let p = args.engine.run(&s)?;
    if let Some(path) = &args.output {
        write_out(Some(path), &profile_csv(&p))?;
    }
    write_out(
        args.output_motifs.as_deref(),
        &motifs_csv(&top_k_motifs(&p, args.top_k)),
    )
}

fn violations(p: &LowerBoundMatrixProfile, oracle: &LowerBoundMatrixProfile) -> usize {
    (0..p.len())
        .filter(|&j| p.values[j].is_finite() && oracle.values[j].is_finite() && p.values[j] > oracle.values[j] + 1e-9)
        .count()
}

fn rank1(p: &LowerBoundMatrixProfile) -> String {
    match top_k_motifs(p, 1).first() {
        Some(m) => format!("{},{},{}", m.pos_a, m.pos_b, format_value(m.distance)),
        None => "none".to_string(),
    }
}

fn cell(p: Option<&LowerBoundMatrixProfile>, j: usize) -> String {
    match p {
        Some(p) => {
            let value = if p.values[j].is_finite() {
                format_value(p.values[j])
            } else {
                String::new()
            };
            let index = p.index[j].map(|i| i.to_string()).unwrap_or_default();
            format!("{value},{index}")
        }
        None => ",".to_string(),
    }
}

pub fn cmd_compare(args: &CompareArgs) -> Result<(), Failure> {
    let s = args.engine.load()?;
    let oracle = match &args.oracle {
        Some(path) => {
            let o = read_series(path)?;
            if o.len() != s.len() {
                return Err(Failure::infeasible(format!(
                    "oracle has {} values but the input has {}",
                    o.len(),
                    s.len()
                )));
            }
            if !o.is_complete() {
                return Err(Failure::infeasible("oracle series must be complete"));
            }
            Some(args.engine.run(&o)?)
        }
        None => None,
    };
    let lb = match args.mode {
        CompareMode::Both | CompareMode::Mdms => Some(args.engine.run(&s)?),
        CompareMode::ImputeLinear => None,
    };
    let imputed = match args.mode {
        CompareMode::Both | CompareMode::ImputeLinear => Some(args.engine.run(&linear_impute(&s)?)?),
        CompareMode::Mdms => None,
    };
    let len = args.engine.config().profile_len(s.len());

    if let Some(path) = &args.output {
        let mut csv = String::from("position,mdms_value,mdms_index,impute_value,impute_index,oracle_value\n");
        for j in 0..len {
            let o = oracle
                .as_ref()
                .filter(|o| o.values[j].is_finite())
                .map(|o| format_value(o.values[j]))
                .unwrap_or_default();
            csv.push_str(&format!(
                "{j},{},{},{o}\n",
                cell(lb.as_ref(), j),
                cell(imputed.as_ref(), j)
            ));
        }
        write_out(Some(path), &csv)?;
    }

    let mut summary = format!("positions={len}\n");
    for (name, p) in [("mdms", lb.as_ref()), ("impute", imputed.as_ref())] {
        let Some(p) = p else { continue };
        summary.push_str(&format!("{name}_rank1={}\n", rank1(p)));
        if let Some(o) = &oracle {
            summary.push_str(&format!("{name}_violations={}\n", violations(p, o)));
        }
    }
    if let (Some(a), Some(b)) = (&lb, &imputed) {
        let diffs: Vec<f64> = (0..len)
            .filter(|&j| a.values[j].is_finite() && b.values[j].is_finite())
            .map(|j| b.values[j] - a.values[j])
            .collect();
        let mean = diffs.iter().sum::<f64>() / diffs.len().max(1) as f64;
        let max_abs = diffs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        summary.push_str(&format!(
            "mean_difference={}\nmax_abs_difference={}\n",
            format_value(mean),
            format_value(max_abs)
        ));
    }
    write_out(None, &summary)
}

pub fn cmd_mask(args: &MaskArgs) -> Result<(), Failure> {
    let s = read_series(&args.input)?;
    let amount = match (args.count, args.fraction) {
        (Some(c), None) => Some(MaskAmount::Count(c)),
        (None, Some(f)) => Some(MaskAmount::Fraction(f)),
        _ => None,
    };
    let spec = match args.mode {
        MaskModeArg::Random => {
            let amount = amount.ok_or_else(|| Failure::usage("random mode needs --count or --fraction"))?;
            MaskSpec::random_points(amount, args.seed)
        }
        MaskModeArg::Blocks => {
            let amount = amount.ok_or_else(|| Failure::usage("blocks mode needs --count or --fraction"))?;
            let p = args
                .block_len
                .ok_or_else(|| Failure::usage("blocks mode needs --block-len"))?;
            MaskSpec::uniform_blocks(p, amount, args.seed)
        }
        MaskModeArg::Block => {
            let p = args
                .block_len
                .ok_or_else(|| Failure::usage("block mode needs --block-len"))?;
            let at = args.at.ok_or_else(|| Failure::usage("block mode needs --at"))?;
            MaskSpec::targeted_block(p, at)
        }
    };
    let masked = apply_mask(&s, &spec)?;
    write_out(args.output.as_deref(), &series_csv(&masked))
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Profile(a) => cmd_profile(a),
        Command::Motifs(a) => cmd_motifs(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Mask(a) => cmd_mask(a),
    }
}
