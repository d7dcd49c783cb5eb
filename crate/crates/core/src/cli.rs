//! Command-line front end. [`run_with`] parses arguments, runs one command,
//! writes its report and a run manifest, and returns the process exit code.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::chords::{self, builtin_config, chord_sum_spectrum, find_spectrum, BuiltinLink, ChordConfig, ManifoldSpec, ParamSubmanifold};
use crate::cord::{builtin_presentation, compare_with_h0, comparison_model, quotient_dims_by_wordcount, CordBuiltin, CordError, CordPresentation};
use crate::exactlin::Rational;
use crate::free_dga::{build_hopf, build_unlink, h0_dims_by_wordcount, homology_dim, Dga, DgaError, DgaSpec, LengthWindow};
use crate::specseq::{convergence_check, pages, pages_to_csv, FilteredComplex, SpecSeqError};

/// Environment variable naming the default output directory.
pub const OUT_DIR_VAR: &str = "STRHOM_OUT_DIR";

/// Largest chord convergence failure rate accepted without exit code 4.
pub const MAX_FAILURE_RATE: f64 = 0.2;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_INVALID_WINDOW: i32 = 2;
pub const EXIT_DGA_INVARIANT: i32 = 3;
pub const EXIT_CHORD_FAILURES: i32 = 4;
pub const EXIT_CORD_UNSTABLE: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "strhom", version, about = "Finite models of string homology for knots and links")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Print the report as CSV.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Also write the report to this file; the manifest goes next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Homology dimensions of a length-truncated DGA.
    DgaHomology(DgaHomologyArgs),
    /// Compare the Hopf link and the unlink in the discriminating degree.
    Distinguish(DistinguishArgs),
    /// Binormal chord length spectrum of a union of round spheres.
    Chords(ChordsArgs),
    /// Word-count slices of a truncated cord algebra.
    Cord(CordArgs),
    /// Pages of the word-count spectral sequence.
    Specseq(SpecseqArgs),
    /// Write a built-in object as a JSON input file.
    Export(ExportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::DgaHomology(_) => "dga-homology",
            Command::Distinguish(_) => "distinguish",
            Command::Chords(_) => "chords",
            Command::Cord(_) => "cord",
            Command::Specseq(_) => "specseq",
            Command::Export(_) => "export",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkKind {
    Hopf,
    Unlink,
}

/// Which DGA to load: a built-in or a JSON spec file.
#[derive(Args, Debug, Serialize)]
pub struct DgaSource {
    #[arg(long, value_enum, conflicts_with = "spec")]
    pub builtin: Option<LinkKind>,
    /// DGA spec file (JSON).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub d: i64,
    /// Offset of the second unlink component.
    #[arg(long, default_value = "3")]
    pub z2star: String,
}

#[derive(Args, Debug, Serialize)]
pub struct DgaHomologyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: DgaSource,
    /// Window bound `a` as a decimal or fraction; defaults to the longest
    /// generator plus 1/2.
    #[arg(long)]
    pub a: Option<String>,
    /// Degree `n` or inclusive range `lo..hi`; repeatable.
    #[arg(long = "degree")]
    pub degrees: Vec<String>,
    /// Also report degree-zero homology by word count.
    #[arg(long)]
    pub h0: bool,
    #[arg(long, default_value_t = 4)]
    pub wmax: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct DistinguishArgs {
    #[arg(long, default_value_t = 2)]
    pub d: i64,
}

#[derive(Args, Debug, Serialize)]
pub struct ChordsArgs {
    #[arg(long, value_enum, conflicts_with = "config")]
    pub builtin: Option<LinkKind>,
    /// Submanifold file (JSON list of sphere components).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 3.0)]
    pub z2star: f64,
    /// Length bound; defaults to the diameter bound of the configuration.
    #[arg(long)]
    pub a: Option<f64>,
    /// Points per broken path.
    #[arg(long, default_value_t = 16)]
    pub nu: usize,
    /// Number of chords summed in the reported spectrum.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Seed parameters per circle component.
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Seed paths per component pair that run the full gradient flow.
    #[arg(long)]
    pub flow_seeds: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct CordArgs {
    #[arg(long, conflicts_with = "spec")]
    pub builtin: Option<String>,
    /// Cord presentation file (JSON).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub wmax: usize,
    /// Meridian-power truncation; defaults to the smallest value valid for
    /// `wmax`.
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Compare with degree-zero homology of the matching DGA.
    #[arg(long)]
    pub compare: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct SpecseqArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: DgaSource,
    /// Filtered complex file (JSON), instead of a DGA.
    #[arg(long, conflicts_with_all = ["builtin", "spec"])]
    pub complex: Option<PathBuf>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub rmax: usize,
    /// Drop the F part of the differential first.
    #[arg(long)]
    pub forget_f: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportKind {
    Dga,
    Cord,
    Manifold,
    Complex,
}

#[derive(Args, Debug, Serialize)]
pub struct ExportArgs {
    #[arg(value_enum)]
    pub kind: ExportKind,
    /// Built-in name: hopf or unlink; for cord also unknot.
    #[arg(long)]
    pub builtin: String,
    #[arg(long, default_value_t = 2)]
    pub d: i64,
    #[arg(long, default_value = "3")]
    pub z2star: String,
    #[arg(long, default_value_t = 2)]
    pub kmax: usize,
    /// Window bound for `complex`.
    #[arg(long)]
    pub a: Option<String>,
}

/// Provenance record written for every run.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub versions: Value,
    pub wall_time: f64,
    pub outputs: Vec<String>,
    pub exit_code: i32,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn other(message: impl Into<String>) -> Self {
        CliError { code: EXIT_OTHER, message: message.into() }
    }
}

impl From<DgaError> for CliError {
    fn from(e: DgaError) -> Self {
        let code = match e {
            DgaError::InvalidWindow { .. } => EXIT_INVALID_WINDOW,
            DgaError::UnknownGenerator(_)
            | DgaError::DuplicateGenerator(_)
            | DgaError::NonPositiveLength(_)
            | DgaError::ZeroWeight(_)
            | DgaError::DegreeViolation { .. }
            | DgaError::FiltrationViolation { .. }
            | DgaError::DSquaredNonzero { .. }
            | DgaError::GradingViolation(_) => EXIT_DGA_INVARIANT,
            _ => EXIT_OTHER,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<SpecSeqError> for CliError {
    fn from(e: SpecSeqError) -> Self {
        match e {
            SpecSeqError::Dga(e) => e.into(),
            e => CliError::other(e.to_string()),
        }
    }
}

impl From<CordError> for CliError {
    fn from(e: CordError) -> Self {
        match e {
            CordError::Dga(e) => e.into(),
            e => CliError::other(e.to_string()),
        }
    }
}

impl From<chords::ChordError> for CliError {
    fn from(e: chords::ChordError) -> Self {
        CliError::other(e.to_string())
    }
}

/// A command's result in all three output formats, plus a nonzero exit
/// code for runs that completed but failed a check.
struct Report {
    text: String,
    json: Value,
    csv: String,
    code: i32,
    warnings: Vec<String>,
}

impl Report {
    fn new(text: String, json: Value, csv: String) -> Self {
        Report { text, json, csv, code: EXIT_OK, warnings: Vec::new() }
    }
}

#[derive(Clone, Copy)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Reports go to `stdout`; warnings, errors and the manifest
/// (when there is no file to put it in) go to `stderr`.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_OTHER } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { write!(stdout, "{rendered}") } else { write!(stderr, "{rendered}") };
            return code;
        }
    };
    run(&cli, stdout, stderr)
}

pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let name = cli.command.name();
    let result = match &cli.command {
        Command::DgaHomology(a) => cmd_dga_homology(a),
        Command::Distinguish(a) => cmd_distinguish(a),
        Command::Chords(a) => cmd_chords(a),
        Command::Cord(a) => cmd_cord(a),
        Command::Specseq(a) => cmd_specseq(a),
        Command::Export(a) => cmd_export(a),
    };
    let mut outputs = Vec::new();
    let code = match result {
        Ok(report) => {
            for w in &report.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            let body = match format {
                Format::Text => report.text.clone(),
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.json).expect("json")),
                Format::Csv => report.csv.clone(),
            };
            let _ = stdout.write_all(body.as_bytes());
            let ext = match format {
                Format::Text => "txt",
                Format::Json => "json",
                Format::Csv => "csv",
            };
            let target = cli
                .out
                .clone()
                .or_else(|| out_dir().map(|d| d.join(format!("{name}.{ext}"))));
            if let Some(path) = target {
                match write_file(&path, &body) {
                    Ok(()) => outputs.push(path.display().to_string()),
                    Err(e) => {
                        let _ = writeln!(stderr, "error: {e}");
                        return finish(cli, start, outputs, EXIT_OTHER, stderr);
                    }
                }
            }
            report.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    };
    finish(cli, start, outputs, code, stderr)
}

fn finish(cli: &Cli, start: Instant, outputs: Vec<String>, code: i32, stderr: &mut dyn Write) -> i32 {
    let manifest = RunManifest {
        command: cli.command.name().to_string(),
        parameters: parameters(cli),
        versions: json!({
            "strhom": env!("CARGO_PKG_VERSION"),
        }),
        wall_time: start.elapsed().as_secs_f64(),
        outputs,
        exit_code: code,
    };
    let text = format!("{}\n", serde_json::to_string_pretty(&manifest).expect("manifest serializes"));
    let path = match &cli.out {
        Some(out) => Some(manifest_next_to(out)),
        None => out_dir().map(|d| d.join(format!("{}.manifest.json", cli.command.name()))),
    };
    match path {
        Some(p) => {
            if let Err(e) = write_file(&p, &text) {
                let _ = writeln!(stderr, "error: {e}");
                return if code == EXIT_OK { EXIT_OTHER } else { code };
            }
        }
        None => {
            let _ = write!(stderr, "{text}");
        }
    }
    code
}

fn parameters(cli: &Cli) -> Value {
    let mut v = serde_json::to_value(&cli.command).expect("arguments serialize");
    if let Value::Object(m) = &mut v {
        if let Some((_, inner)) = m.iter_mut().next() {
            if let Value::Object(inner) = inner {
                inner.insert("json".into(), json!(cli.json));
                inner.insert("csv".into(), json!(cli.csv));
                inner.insert("out".into(), json!(cli.out));
            }
            return inner.clone();
        }
    }
    v
}

fn out_dir() -> Option<PathBuf> {
    std::env::var_os(OUT_DIR_VAR).filter(|s| !s.is_empty()).map(PathBuf::from)
}

fn manifest_next_to(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn write_file(path: &Path, body: &str) -> Result<(), String> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| format!("cannot create {}: {e}", parent.display()))?;
    }
    std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::other(format!("cannot read {}: {e}", path.display())))
}

fn parse_rational(s: &str, what: &str) -> Result<Rational, CliError> {
    s.parse().map_err(|_| CliError::other(format!("{what}: cannot parse `{s}` as a number")))
}

fn load_dga(src: &DgaSource) -> Result<Dga, CliError> {
    match (&src.builtin, &src.spec) {
        (Some(LinkKind::Hopf), None) => Ok(build_hopf(src.d)?),
        (Some(LinkKind::Unlink), None) => Ok(build_unlink(src.d, &parse_rational(&src.z2star, "--z2star")?)?),
        (None, Some(path)) => Ok(DgaSpec::from_json(&read_file(path)?)?.to_dga()?),
        _ => Err(CliError::other("give exactly one of --builtin and --spec")),
    }
}

/// Window for `a`, or the default: the longest generator plus 1/2, moved up
/// in steps of 1/1000 until it clears every realizable length.
fn dga_window(dga: &Dga, a: Option<&str>) -> Result<LengthWindow, CliError> {
    if let Some(a) = a {
        return Ok(dga.window(parse_rational(a, "--a")?)?);
    }
    let longest = dga
        .generators()
        .iter()
        .map(|g| &g.length)
        .max_by(|x, y| x.to_f64().total_cmp(&y.to_f64()));
    let base = match longest {
        None => Rational::one(),
        Some(l) if l.is_rational() => l.rational_part().clone(),
        Some(l) => Rational::new((l.to_f64() * 1000.0).ceil() as i64, 1000),
    };
    let mut a = &base + &Rational::new(1, 2);
    let step = Rational::new(1, 1000);
    for _ in 0..1000 {
        if let Ok(w) = dga.window(a.clone()) {
            return Ok(w);
        }
        a = &a + &step;
    }
    Err(CliError::other("no valid default window bound found; pass --a"))
}

/// Parses `n` or `lo..hi` (inclusive) degree selections.
fn parse_degrees(specs: &[String]) -> Result<Vec<i64>, CliError> {
    let mut out = Vec::new();
    for s in specs {
        let bad = || CliError::other(format!("--degree: expected `n` or `lo..hi`, got `{s}`"));
        if let Some((lo, hi)) = s.split_once("..") {
            let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
            out.extend(lo..=hi);
        } else {
            out.push(s.trim().parse().map_err(|_| bad())?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn format_dims(v: &[usize]) -> String {
    format!("[{}]", v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","))
}

fn cmd_dga_homology(args: &DgaHomologyArgs) -> Result<Report, CliError> {
    let dga = load_dga(&args.source)?;
    let check = dga.d_squared_zero_check();
    if let Some((g, residue)) = check.witness {
        return Err(DgaError::DSquaredNonzero { generator: g, residue: dga.format_element(&residue) }.into());
    }
    let window = dga_window(&dga, args.a.as_deref())?;
    let mut degrees = parse_degrees(&args.degrees)?;
    if degrees.is_empty() && !args.h0 {
        let top = dga.generators().iter().map(|g| g.degree).max().unwrap_or(0);
        degrees = (0..=top).collect();
    }
    let mut text = format!("dga {} window a < {}\n", dga.name(), window.bound());
    let mut csv = String::from("section,index,dim\n");
    let mut rows = Vec::new();
    for &p in &degrees {
        let dim = homology_dim(&dga, p, &window)?;
        let _ = writeln!(text, "H_{p} = {dim}");
        let _ = writeln!(csv, "homology,{p},{dim}");
        rows.push(json!({ "degree": p, "dim": dim }));
    }
    let mut h0 = Value::Null;
    if args.h0 {
        let dims = h0_dims_by_wordcount(&dga, &window, args.wmax)?;
        let _ = writeln!(text, "H_0 by word count (w = 0..{}): {}", args.wmax, format_dims(&dims));
        for (w, d) in dims.iter().enumerate() {
            let _ = writeln!(csv, "h0,{w},{d}");
        }
        h0 = json!(dims);
    }
    let json = json!({
        "dga": dga.name(),
        "a": window.bound().to_string(),
        "homology": rows,
        "wmax": args.h0.then_some(args.wmax),
        "h0_by_wordcount": h0,
    });
    Ok(Report::new(text, json, csv))
}

/// First word count (or `None`) at which two dimension lists differ.
fn first_difference(x: &[usize], y: &[usize]) -> Option<usize> {
    x.iter().zip(y).position(|(a, b)| a != b)
}

fn cmd_distinguish(args: &DistinguishArgs) -> Result<Report, CliError> {
    let d = args.d;
    if d < 2 {
        return Err(CliError::other(format!("d must be at least 2, got {d}")));
    }
    let hopf = build_hopf(d)?;
    let unlink = build_unlink(d, &Rational::from_int(3))?;
    let (text, json, csv) = if d == 2 {
        let wmax = 4;
        let hw = hopf.window(Rational::new(13, 2))?;
        let uw = unlink.window(Rational::new(41, 2))?;
        let h = h0_dims_by_wordcount(&hopf, &hw, wmax)?;
        let u = h0_dims_by_wordcount(&unlink, &uw, wmax)?;
        let diff = first_difference(&h, &u);
        let verdict = if diff.is_some() { "DISTINCT" } else { "SAME" };
        let mut text = format!(
            "H_0 by word count, d = 2\n  hopf   (a < {}): {}\n  unlink (a < {}): {}\n{verdict}",
            hw.bound(),
            format_dims(&h),
            uw.bound(),
            format_dims(&u)
        );
        if let Some(w) = diff {
            let _ = write!(text, " at w = {w}");
        }
        text.push('\n');
        let mut csv = String::from("w,hopf_dim,unlink_dim\n");
        for (w, (a, b)) in h.iter().zip(&u).enumerate() {
            let _ = writeln!(csv, "{w},{a},{b}");
        }
        let json = json!({
            "d": d, "degree": 0, "hopf": h, "unlink": u,
            "hopf_a": hw.bound().to_string(), "unlink_a": uw.bound().to_string(),
            "verdict": verdict, "first_difference_w": diff,
        });
        (text, json, csv)
    } else {
        let p = 2 * d - 4;
        let a = Rational::new(17, 2);
        let h = homology_dim(&hopf, p, &hopf.window(a.clone())?)?;
        let u = homology_dim(&unlink, p, &unlink.window(a.clone())?)?;
        let verdict = if h != u { "DISTINCT" } else { "SAME" };
        let text = format!("H_{p} at a < {a}, d = {d}\n  hopf:   {h}\n  unlink: {u}\n{verdict}\n");
        let csv = format!("degree,hopf_dim,unlink_dim\n{p},{h},{u}\n");
        let json = json!({ "d": d, "degree": p, "a": a.to_string(), "hopf": h, "unlink": u, "verdict": verdict });
        (text, json, csv)
    };
    Ok(Report::new(text, json, csv))
}

fn cmd_chords(args: &ChordsArgs) -> Result<Report, CliError> {
    let k: ParamSubmanifold = match (&args.builtin, &args.config) {
        (Some(b), None) => {
            let which = match b {
                LinkKind::Hopf => BuiltinLink::Hopf,
                LinkKind::Unlink => BuiltinLink::Unlink,
            };
            builtin_config(which, args.d, args.z2star)?
        }
        (None, Some(path)) => {
            let spec: ManifoldSpec = serde_json::from_str(&read_file(path)?)
                .map_err(|e| CliError::other(format!("invalid submanifold file: {e}")))?;
            ParamSubmanifold::from_spec(&spec)?
        }
        _ => return Err(CliError::other("give exactly one of --builtin and --config")),
    };
    if args.m == 0 {
        return Err(CliError::other("--m must be at least 1"));
    }
    // search slightly past the bound so that chords sitting on it are seen
    let guard = 1e-3;
    let mut cfg = ChordConfig { nu: args.nu, length_bound: args.a.map(|a| a + guard), ..ChordConfig::default() };
    if let Some(s) = args.seeds {
        cfg.seeds_per_circle = s;
    }
    if let Some(f) = args.flow_seeds {
        cfg.flow_seeds = f;
    }
    let mut report = find_spectrum(&k, &cfg)?;
    let a = args.a.unwrap_or(report.length_bound);
    let mut warnings = Vec::new();
    // the bound must not sit on a sum of at most m chord lengths
    let near = (1..=args.m)
        .flat_map(|j| chord_sum_spectrum(&report.lengths(), j, a + guard, cfg.dedup_len_tol))
        .find(|s| (s - a).abs() < cfg.dedup_len_tol);
    if let Some(s) = near {
        warnings.push(format!("length bound {a} is within tolerance of the chord length sum {s}"));
    }
    report.chords.retain(|c| c.length < a);
    report.length_bound = a;
    let lengths = report.lengths();
    let sums = chord_sum_spectrum(&lengths, args.m, a, cfg.dedup_len_tol);
    let rate = report.failure_rate();
    let mut text = format!("chords of {} below {a}\n", k.name);
    for c in &report.chords {
        let _ = writeln!(
            text,
            "  length {:.12}  components {}-{}  multiplicity {}  residual {:.1e}",
            c.length, c.components.0, c.components.1, c.multiplicity, c.residual
        );
    }
    let fmt_list = |v: &[f64]| v.iter().map(|l| format!("{l:.12}")).collect::<Vec<_>>().join(", ");
    let _ = writeln!(text, "lengths: {{{}}}", fmt_list(&lengths));
    if args.m > 1 {
        let _ = writeln!(text, "sums of {} lengths below {a}: {{{}}}", args.m, fmt_list(&sums));
    }
    let _ = writeln!(
        text,
        "seeds {}  failures {}  classes {}  failure rate {:.4}  L violations {}  f violations {}",
        report.seeds,
        report.seed_failures + report.chord_failures,
        report.classes,
        rate,
        report.l_violations,
        report.f_violations
    );
    let json = json!({
        "manifold": k.name,
        "a": a,
        "m": args.m,
        "lengths": lengths,
        "sums": sums,
        "failure_rate": rate,
        "report": serde_json::from_str::<Value>(&report.to_json()).expect("report is json"),
    });
    let mut out = Report::new(text, json, report.to_csv());
    if rate > MAX_FAILURE_RATE {
        warnings.push(format!("convergence failure rate {rate:.3} exceeds {MAX_FAILURE_RATE}"));
        out.code = EXIT_CHORD_FAILURES;
    }
    out.warnings = warnings;
    Ok(out)
}

fn cord_builtin(name: &str) -> Result<CordBuiltin, CliError> {
    Ok(name.parse::<CordBuiltin>()?)
}

/// Warning for dimensions that change between `kmax` and `kmax + 2`.
fn stability_failure(kmax: usize, dims: &[usize], bigger: &[usize]) -> Option<String> {
    (dims != bigger).then(|| {
        format!(
            "truncation is unstable: kmax {kmax} gives {}, kmax {} gives {}",
            format_dims(dims),
            kmax + 2,
            format_dims(bigger)
        )
    })
}

fn cmd_cord(args: &CordArgs) -> Result<Report, CliError> {
    let kmax = args.kmax.unwrap_or_else(|| args.wmax.div_ceil(2).max(2));
    let (pres, builtin) = match (&args.builtin, &args.spec) {
        (Some(b), None) => {
            let which = cord_builtin(b)?;
            (builtin_presentation(which, kmax)?, Some(which))
        }
        (None, Some(path)) => (CordPresentation::from_json(&read_file(path)?)?, None),
        _ => return Err(CliError::other("give exactly one of --builtin and --spec")),
    };
    let dims = quotient_dims_by_wordcount(&pres, args.wmax)?;
    let mut text = format!("cord algebra {} (kmax {kmax}), w = 0..{}: {}\n", pres.name, args.wmax, format_dims(&dims));
    let mut json = json!({ "presentation": pres.name, "kmax": kmax, "wmax": args.wmax, "dims": dims });
    let mut csv = String::from("w,cord_dim\n");
    for (w, d) in dims.iter().enumerate() {
        let _ = writeln!(csv, "{w},{d}");
    }
    let mut code = EXIT_OK;
    let mut warnings = Vec::new();
    if let Some(which) = builtin {
        let bigger = quotient_dims_by_wordcount(&builtin_presentation(which, kmax + 2)?, args.wmax)?;
        let stable = bigger == dims;
        let _ = writeln!(text, "kmax {} gives {}: {}", kmax + 2, format_dims(&bigger), if stable { "STABLE" } else { "UNSTABLE" });
        json["stable"] = json!(stable);
        json["dims_kmax_plus_2"] = json!(bigger);
        if let Some(w) = stability_failure(kmax, &dims, &bigger) {
            warnings.push(w);
            code = EXIT_CORD_UNSTABLE;
        }
    }
    if args.compare {
        let which = builtin.ok_or_else(|| CliError::other("--compare needs a built-in presentation"))?;
        let (dga, window) = comparison_model(which, args.wmax)?;
        let c = compare_with_h0(&pres, &dga, &window, args.wmax)?;
        let verdict = if c.matches() { "MATCH" } else { "MISMATCH" };
        let _ = writeln!(text, "H_0 of {} (a < {}): {}", dga.name(), window.bound(), format_dims(&c.h0));
        let _ = writeln!(text, "{verdict}");
        json["comparison"] = json!({ "dga": dga.name(), "a": window.bound().to_string(), "h0": c.h0, "verdict": verdict });
        csv = c.to_csv();
    }
    let mut out = Report::new(text, json, csv);
    out.code = code;
    out.warnings = warnings;
    Ok(out)
}

fn cmd_specseq(args: &SpecseqArgs) -> Result<Report, CliError> {
    let (fc, label) = if let Some(path) = &args.complex {
        (FilteredComplex::from_json(&read_file(path)?)?, path.display().to_string())
    } else {
        let mut dga = load_dga(&args.source)?;
        if args.forget_f {
            dga = dga.forget_f()?;
        }
        let window = dga_window(&dga, args.a.as_deref())?;
        let label = format!("{} a < {}", dga.name(), window.bound());
        (FilteredComplex::from_dga(&dga, &window)?, label)
    };
    let tables = pages(&fc, args.rmax)?;
    let converges = convergence_check(&fc);
    let verdict = if converges { "CONVERGES" } else { "DOES NOT CONVERGE" };
    let mut text = format!("spectral sequence of {label}\n");
    for t in &tables {
        let name = if t.limit { "E^inf".to_string() } else { format!("E^{}", t.r) };
        let _ = writeln!(text, "{name}:");
        let mut ps: Vec<i64> = t.dims.keys().map(|&(p, _)| p).collect();
        ps.dedup();
        for p in ps {
            let col: Vec<String> = t.column(p).iter().map(|(q, d)| format!("q={q}:{d}")).collect();
            let _ = writeln!(text, "  p={p}  {}", col.join(" "));
        }
    }
    let _ = writeln!(text, "{verdict}");
    let json = json!({ "source": label, "pages": tables, "converges": converges });
    Ok(Report::new(text, json, pages_to_csv(&tables)))
}

fn cmd_export(args: &ExportArgs) -> Result<Report, CliError> {
    let link = || match args.builtin.as_str() {
        "hopf" | "hopf_link" => Ok(LinkKind::Hopf),
        "unlink" | "unlink2" => Ok(LinkKind::Unlink),
        other => Err(CliError::other(format!("unknown built-in `{other}` (expected hopf or unlink)"))),
    };
    let source = || -> Result<DgaSource, CliError> {
        Ok(DgaSource { builtin: Some(link()?), spec: None, d: args.d, z2star: args.z2star.clone() })
    };
    let body = match args.kind {
        ExportKind::Dga => DgaSpec::from_dga(&load_dga(&source()?)?).to_json(),
        ExportKind::Cord => builtin_presentation(cord_builtin(&args.builtin)?, args.kmax)?.to_json(),
        ExportKind::Manifold => {
            let which = match link()? {
                LinkKind::Hopf => BuiltinLink::Hopf,
                LinkKind::Unlink => BuiltinLink::Unlink,
            };
            let d = usize::try_from(args.d).map_err(|_| CliError::other("d must be positive"))?;
            let z = parse_rational(&args.z2star, "--z2star")?.to_f64();
            serde_json::to_string_pretty(&builtin_config(which, d, z)?.to_spec()).expect("spec serializes")
        }
        ExportKind::Complex => {
            let dga = load_dga(&source()?)?;
            let window = dga_window(&dga, args.a.as_deref())?;
            FilteredComplex::from_dga(&dga, &window)?.to_json()
        }
    };
    let body = format!("{}\n", body.trim_end());
    let json: Value = serde_json::from_str(&body).expect("export is json");
    Ok(Report::new(body.clone(), json, body))
}
