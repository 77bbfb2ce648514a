//! Command-line front end over the code library: build descriptors, encode
//! and decode codeword files, repair columns with bandwidth transcripts,
//! certify properties, sweep field-size formulas, and replay failure
//! scenarios. Exit code 0 means success (including a passing certificate),
//! 1 means the operation ran and failed (a counterexample, an unrecoverable
//! pattern, a construction error), 2 means the invocation itself was wrong.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use pmds_regen::code::{ArrayCode, ArrayCodeword, ErasurePattern};
use pmds_regen::matrix::CodeMatrix;
use pmds_regen::registry::{self, BuildRequest};
use pmds_regen::sizes::{check_comparison_theorem, emit_csv, Construction, Sweep};
use pmds_regen::verify::{
    certify_msr, certify_pmds, certify_sd, parse_scenario, simulate_cluster, Certificate,
    MsrMode, VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "pmds-regen",
    version,
    about = "Build, verify, and repair regenerating partial-MDS array codes",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and emit its descriptor JSON
    Build(BuildArgs),
    /// Encode a raw message file into a codeword file
    Encode(EncodeArgs),
    /// Rebuild erased columns of a codeword and recover the message
    Decode(DecodeArgs),
    /// Repair one column, reporting the bandwidth transcript
    Repair(RepairArgs),
    /// Certify a property of a code, emitting a certificate JSON
    Verify(VerifyArgs),
    /// Sweep field-size formulas to CSV, or check the comparison relations
    Sizes(SizesArgs),
    /// Replay a failure/repair scenario against a code
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Registered construction name
    #[arg(long)]
    construction: String,
    /// Number of local groups
    #[arg(long)]
    mu: usize,
    /// Columns per group
    #[arg(long)]
    n: usize,
    /// Erasures tolerated inside each group
    #[arg(long)]
    r: usize,
    /// Extra erasures tolerated anywhere
    #[arg(long)]
    s: usize,
    /// In-group helper count where tunable (default n - 1)
    #[arg(long)]
    d: Option<usize>,
    /// Base-field size override (code field for scalar-symbol
    /// constructions, designated subfield elsewhere)
    #[arg(long)]
    q: Option<u64>,
    /// Seed for any randomized search the builder runs
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Descriptor path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    /// Code descriptor JSON
    #[arg(long)]
    descriptor: PathBuf,
    /// Raw message: little-endian u64 field elements, row-major ell x k
    #[arg(long)]
    message: PathBuf,
    /// Codeword JSON path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecodeArgs {
    /// Code descriptor JSON
    #[arg(long)]
    descriptor: PathBuf,
    /// Codeword JSON
    #[arg(long)]
    codeword: PathBuf,
    /// Comma-separated erased column indices, e.g. 0,3,5
    #[arg(long)]
    erasures: Option<String>,
    /// Recovered raw message path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RepairArgs {
    /// Code descriptor JSON
    #[arg(long)]
    descriptor: PathBuf,
    /// Codeword JSON
    #[arg(long)]
    codeword: PathBuf,
    /// Column to rebuild
    #[arg(long)]
    failed: usize,
    /// Comma-separated helper columns for in-group repair
    /// (default: the first d surviving columns of the failed group)
    #[arg(long)]
    helpers: Option<String>,
    /// Comma-separated punctured columns for cross-group repair, r per
    /// group (default: the highest-indexed r columns of each group,
    /// skipping the failed column)
    #[arg(long)]
    punctured: Option<String>,
    /// Repair report path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Code descriptor JSON
    #[arg(long)]
    descriptor: PathBuf,
    /// Certify decodability of every admissible erasure pattern
    #[arg(long)]
    pmds: bool,
    /// Certify decodability of aligned-sector patterns
    #[arg(long)]
    sd: bool,
    /// Certify bandwidth-optimal in-group repair
    #[arg(long)]
    msr_local: bool,
    /// Certify bandwidth-optimal cross-group repair after puncturing
    #[arg(long)]
    msr_global: bool,
    /// Helper count for --msr-local (default: the code's repair degree)
    #[arg(long)]
    d: Option<usize>,
    /// Pattern-row budget before sampling kicks in
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Seed for sampling and codeword draws
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random codewords per repair case
    #[arg(long, default_value_t = 3)]
    codewords: usize,
    /// Certificate path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SizesArgs {
    /// Group length n, a value or inclusive range like 3..12
    #[arg(long)]
    n: String,
    /// Group count mu, a value or inclusive range
    #[arg(long)]
    mu: String,
    /// Per-group tolerance r window (default: all valid)
    #[arg(long)]
    r: Option<String>,
    /// Extra-erasure count s window (default: all valid)
    #[arg(long)]
    s: Option<String>,
    /// Helper count d window (default: all valid)
    #[arg(long)]
    d: Option<String>,
    /// Comma-separated construction names, e.g. A,B,C,D,E,global
    #[arg(long, default_value = "A,B,C,D,E")]
    constructions: String,
    /// Check the cross-construction size relations instead of emitting CSV
    #[arg(long)]
    check: bool,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Code descriptor JSON
    #[arg(long)]
    descriptor: PathBuf,
    /// Scenario JSON: a list of {"event":"fail","node":i} and
    /// {"event":"repair"} entries
    #[arg(long)]
    scenario: PathBuf,
    /// Seed for the codeword the cluster starts from
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// PMDS_REGEN_THREADS caps the worker count; 0 or unset means automatic.
fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("PMDS_REGEN_THREADS") else {
        return Ok(());
    };
    let count: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("PMDS_REGEN_THREADS must be an integer, got {raw:?}"))?;
    if count > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(count)
            .build_global()
            .context("installing the worker pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Repair(a) => cmd_repair(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sizes(a) => cmd_sizes(a),
        Command::Simulate(a) => cmd_simulate(a),
    }
}

fn cmd_build(a: BuildArgs) -> Result<u8> {
    let mut req = BuildRequest::new(a.mu, a.n, a.r, a.s).with_seed(a.seed);
    req.d = a.d;
    req.q = a.q;
    let code = registry::build(&a.construction, &req)?;
    let text = serde_json::to_string_pretty(&code.descriptor())?;
    emit(a.out.as_deref(), &text)?;
    if a.out.is_some() {
        println!(
            "built {} over a field of size {}: {} groups of {}, ell = {}",
            code.name(),
            code.field().size(),
            code.params().mu,
            code.params().n,
            code.ell()
        );
    }
    Ok(0)
}

fn cmd_encode(a: EncodeArgs) -> Result<u8> {
    let code = load_code(&a.descriptor)?;
    let message = read_message(&a.message, code.as_ref())?;
    let word = code.encode(&message)?;
    fs::write(&a.out, word.to_json()?)
        .with_context(|| format!("writing {}", a.out.display()))?;
    println!(
        "encoded {} x {} message into {} columns of {} rows",
        code.ell(),
        code.dimension(),
        code.length(),
        code.ell()
    );
    Ok(0)
}

fn cmd_decode(a: DecodeArgs) -> Result<u8> {
    let code = load_code(&a.descriptor)?;
    let word = read_codeword(&a.codeword)?;
    let erased = match &a.erasures {
        Some(list) => parse_indices(list)?,
        None => Vec::new(),
    };
    let pattern = ErasurePattern::from_columns(code.params(), &erased)?;
    let repaired = code.decode_erased(&word, &pattern)?;
    let message = code.extract_message(&repaired)?;
    write_message(&a.out, &message)?;
    println!(
        "decoded around {} erased columns; message written to {}",
        erased.len(),
        a.out.display()
    );
    Ok(0)
}

fn cmd_repair(a: RepairArgs) -> Result<u8> {
    let code = load_code(&a.descriptor)?;
    let word = read_codeword(&a.codeword)?;
    let params = code.params();
    if a.failed >= params.length() {
        bail!("column {} out of range for {} columns", a.failed, params.length());
    }

    let (column, transcript) = if let Some(local) = code.as_local_msr() {
        if a.punctured.is_some() {
            eprintln!("error: --punctured applies to cross-group repair; this code repairs in-group");
            return Ok(2);
        }
        let helpers = match &a.helpers {
            Some(list) => parse_indices(list)?,
            None => {
                let group = params.group_of(a.failed);
                params
                    .group_columns(group)
                    .filter(|&c| c != a.failed)
                    .take(local.repair_d())
                    .collect()
            }
        };
        local.repair_in_group(&word, a.failed, &helpers)?
    } else if let Some(global) = code.as_global_msr() {
        if a.helpers.is_some() {
            eprintln!("error: --helpers applies to in-group repair; this code derives helpers from the grouping (use --punctured)");
            return Ok(2);
        }
        let punctured = match &a.punctured {
            Some(list) => parse_indices(list)?,
            None => (0..params.mu)
                .flat_map(|g| {
                    params
                        .group_columns(g)
                        .rev()
                        .filter(|&c| c != a.failed)
                        .take(params.r)
                })
                .collect(),
        };
        let pattern = ErasurePattern::from_columns(params, &punctured)?;
        global.global_repair(&word, &pattern, a.failed)?
    } else {
        bail!("the {} construction exposes no repair mechanism", code.name());
    };

    let report = serde_json::json!({
        "failed": a.failed,
        "column": column,
        "transcript": serde_json::to_value(&transcript)?,
    });
    emit(a.out.as_deref(), &serde_json::to_string_pretty(&report)?)?;
    if a.out.is_some() {
        println!(
            "repaired column {} from {} helpers: {} symbols against a bound of {}/{}",
            a.failed,
            transcript.helpers.len(),
            transcript.total,
            transcript.bound_num,
            transcript.bound_den
        );
    }
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let picked = [a.pmds, a.sd, a.msr_local, a.msr_global]
        .iter()
        .filter(|&&f| f)
        .count();
    if picked != 1 {
        eprintln!("error: pick exactly one of --pmds, --sd, --msr-local, --msr-global");
        return Ok(2);
    }
    let code = load_code(&a.descriptor)?;
    let opts = VerifyOptions {
        budget: a.budget,
        seed: a.seed,
        codewords: a.codewords,
    };
    let cert: Certificate = if a.pmds {
        certify_pmds(code.as_ref(), &opts)?
    } else if a.sd {
        certify_sd(code.as_ref(), &opts)?
    } else if a.msr_local {
        let d = match a.d {
            Some(d) => d,
            None => code
                .as_local_msr()
                .ok_or_else(|| anyhow!("the {} construction has no in-group repair", code.name()))?
                .repair_d(),
        };
        certify_msr(code.as_ref(), MsrMode::Local { d }, &opts)?
    } else {
        certify_msr(code.as_ref(), MsrMode::Global, &opts)?
    };

    emit(a.out.as_deref(), &cert.to_json()?)?;
    let verdict = if cert.passed() {
        "pass".to_string()
    } else {
        let detail = cert
            .counterexample
            .as_ref()
            .map(|c| c.reason.clone())
            .unwrap_or_default();
        format!("FAIL ({detail})")
    };
    if a.out.is_some() {
        println!(
            "{} certificate: {} ({} patterns, {} mode)",
            cert.property, verdict, cert.pattern_count, cert.mode
        );
    }
    Ok(if cert.passed() { 0 } else { 1 })
}

fn cmd_sizes(a: SizesArgs) -> Result<u8> {
    let mut sweep = Sweep::over(parse_window(&a.n)?, parse_window(&a.mu)?);
    if let Some(r) = &a.r {
        sweep = sweep.with_r(parse_window(r)?);
    }
    if let Some(s) = &a.s {
        sweep = sweep.with_s(parse_window(s)?);
    }
    if let Some(d) = &a.d {
        sweep = sweep.with_d(parse_window(d)?);
    }
    if a.check {
        let report = check_comparison_theorem(&sweep)?;
        emit(a.out.as_deref(), &report.to_json()?)?;
        if a.out.is_some() {
            println!(
                "checked {} relations over {} points: {} violations",
                report.relations_checked,
                report.points_checked,
                report.violations.len()
            );
        }
        return Ok(if report.passed() { 0 } else { 1 });
    }
    let constructions = parse_constructions(&a.constructions)?;
    let csv = emit_csv(&sweep, &constructions)?;
    emit(a.out.as_deref(), &csv)?;
    if a.out.is_some() {
        println!("wrote {} data rows", csv.lines().count().saturating_sub(1));
    }
    Ok(0)
}

fn cmd_simulate(a: SimulateArgs) -> Result<u8> {
    let code = load_code(&a.descriptor)?;
    let text = fs::read_to_string(&a.scenario)
        .with_context(|| format!("reading {}", a.scenario.display()))?;
    let scenario = parse_scenario(&text)?;
    let report = simulate_cluster(code.as_ref(), &scenario, a.seed)?;
    emit(a.out.as_deref(), &report.to_json()?)?;
    if a.out.is_some() {
        println!(
            "{} events, {} symbols read, {} data-loss events, {} columns down at the end",
            report.events.len(),
            report.total_symbols_read,
            report.data_loss_events.len(),
            report.failed_at_end.len()
        );
    }
    Ok(0)
}

fn load_code(path: &Path) -> Result<Box<dyn ArrayCode>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let desc: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(registry::from_descriptor(&desc)?)
}

fn read_codeword(path: &Path) -> Result<ArrayCodeword> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ArrayCodeword::from_json(&text)?)
}

/// Message files hold ell x k little-endian u64 field elements, row-major.
fn read_message(path: &Path, code: &dyn ArrayCode) -> Result<CodeMatrix> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let (ell, k) = (code.ell(), code.dimension());
    let want = ell * k * 8;
    if bytes.len() != want {
        bail!(
            "message is {} bytes; this code wants {} x {} elements = {} bytes",
            bytes.len(),
            ell,
            k,
            want
        );
    }
    let size = code.field().size();
    let mut message = CodeMatrix::zero(code.field().clone(), ell, k);
    for (idx, chunk) in bytes.chunks_exact(8).enumerate() {
        let v = u64::from_le_bytes(chunk.try_into().expect("chunks_exact yields 8 bytes"));
        if v >= size {
            bail!(
                "element {} at offset {} is outside a field of size {}",
                v,
                idx * 8,
                size
            );
        }
        message.set(idx / k, idx % k, v);
    }
    Ok(message)
}

fn write_message(path: &Path, message: &CodeMatrix) -> Result<()> {
    let mut bytes = Vec::with_capacity(message.rows() * message.cols() * 8);
    for i in 0..message.rows() {
        for &v in message.row(i) {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            let mut owned = text.to_string();
            if !owned.ends_with('\n') {
                owned.push('\n');
            }
            fs::write(path, owned).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_indices(list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .with_context(|| format!("bad column index {t:?}"))
        })
        .collect()
}

/// A single value `7` or an inclusive range `3..12`.
fn parse_window(text: &str) -> Result<(usize, usize)> {
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let lo = lo.trim().parse().with_context(|| format!("bad bound {lo:?}"))?;
        let hi = hi.trim().parse().with_context(|| format!("bad bound {hi:?}"))?;
        Ok((lo, hi))
    } else {
        let v = text.parse().with_context(|| format!("bad value {text:?}"))?;
        Ok((v, v))
    }
}

fn parse_constructions(list: &str) -> Result<Vec<Construction>> {
    list.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<Construction>()
                .map_err(|e| anyhow!("bad construction {t:?}: {e}"))
        })
        .collect()
}
