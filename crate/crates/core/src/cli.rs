//! Command-line front end: `compute`, `sweep` and `verify`.
//!
//! Exit codes: 0 success, 1 bad arguments or parameters, 2 outside the proven
//! domain under `--strict`, 3 I/O failure, 4 self-check or numerical failure.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::record::{compute_record, trace_json, write_csv, RecordOptions, RunRecord, Units};
use crate::states::{FamilyTag, StateFamily, StdForm};
use crate::verify::{run_suite, Suite};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(name = "gielab", version, about = "Gaussian intrinsic entanglement of two-mode Gaussian states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one state and print a JSON record
    Compute(ComputeArgs),
    /// Evaluate a parameter grid and write CSV
    Sweep(SweepArgs),
    /// Run the self-check suite (fast or full)
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Options {
    /// pure, sym-glems, sym-sq-thermal, asym-glems, cv-ghz or generic
    #[arg(long, value_parser = parse_family)]
    pub family: FamilyTag,
    /// Also evaluate the Gaussian Renyi-2 entanglement and its gap to GIE
    #[arg(long)]
    pub with_gr2: bool,
    /// Also run the numerical optimization over Eve's measurements
    #[arg(long)]
    pub numeric: bool,
    /// Coarse grid points per optimizer parameter
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,
    /// Report information in bits instead of nats
    #[arg(long)]
    pub bits: bool,
    /// Exit with code 2 when a value lies outside the proven domain
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub options: Options,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    /// Coupling `k` (sym-sq-thermal) or `kx` (generic)
    #[arg(long, visible_alias = "kx")]
    pub k: Option<f64>,
    #[arg(long)]
    pub kp: Option<f64>,
    /// Squeezing of the CV GHZ state
    #[arg(long)]
    pub r: Option<f64>,
    /// Write the optimizer trace as JSON (needs --numeric)
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
}

/// Parameter values are a number, `start:stop:step`, or another parameter
/// plus or minus a constant (`a-0.7`).
#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub options: Options,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, visible_alias = "kx", allow_hyphen_values = true)]
    pub k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub kp: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    /// CSV destination; stdout when absent
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(default_value = "fast", value_parser = parse_suite)]
    pub suite: Suite,
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,
}

fn parse_family(s: &str) -> std::result::Result<FamilyTag, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Unphysical(_) | Error::ShapeMismatch(_) | Error::WrongFamily(_) => 1,
        Error::DomainNotCovered { .. } => 2,
        Error::Io(_) => 3,
        Error::NotSymplectic { .. } | Error::NumericalDegeneracy(_) | Error::NoConvergence(_) => 4,
    }
}

/// Family parameters as given on the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamValues {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub k: Option<f64>,
    pub kp: Option<f64>,
    pub r: Option<f64>,
}

const PARAM_NAMES: [&str; 5] = ["a", "b", "k", "kp", "r"];

impl ParamValues {
    fn get(&self, name: &str) -> Option<f64> {
        match name {
            "a" => self.a,
            "b" => self.b,
            "k" => self.k,
            "kp" => self.kp,
            _ => self.r,
        }
    }

    fn set(&mut self, name: &str, v: f64) {
        let slot = match name {
            "a" => &mut self.a,
            "b" => &mut self.b,
            "k" => &mut self.k,
            "kp" => &mut self.kp,
            _ => &mut self.r,
        };
        *slot = Some(v);
    }
}

fn family_params(tag: FamilyTag) -> &'static [&'static str] {
    match tag {
        FamilyTag::Pure => &["a"],
        FamilyTag::SymGlems => &["a", "kp"],
        FamilyTag::SymSqThermal => &["a", "k"],
        FamilyTag::AsymGlems => &["a", "b"],
        FamilyTag::CvGhz => &["r"],
        FamilyTag::Generic => &["a", "b", "k", "kp"],
    }
}

/// Builds the family, rejecting missing or unused parameters. For the
/// generic family `b` defaults to `a`.
pub fn build_family(tag: FamilyTag, p: &ParamValues) -> Result<StateFamily> {
    let wanted = family_params(tag);
    for name in PARAM_NAMES {
        if p.get(name).is_some() && !wanted.contains(&name) {
            return Err(Error::InvalidInput(format!("{} does not take --{name}", tag.name())));
        }
    }
    let need = |name: &str| p.get(name).ok_or_else(|| Error::InvalidInput(format!("{} needs --{name}", tag.name())));
    Ok(match tag {
        FamilyTag::Pure => StateFamily::Pure { a: need("a")? },
        FamilyTag::SymGlems => StateFamily::SymGlems { a: need("a")?, kp: need("kp")? },
        FamilyTag::SymSqThermal => StateFamily::SymSqThermal { a: need("a")?, k: need("k")? },
        FamilyTag::AsymGlems => StateFamily::AsymGlems { a: need("a")?, b: need("b")? },
        FamilyTag::CvGhz => StateFamily::CvGhz { r: need("r")? },
        FamilyTag::Generic => {
            let a = need("a")?;
            StateFamily::Generic(StdForm::new(a, p.b.unwrap_or(a), need("k")?, need("kp")?)?)
        }
    })
}

/// One sweep parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamSpec {
    Values(Vec<f64>),
    /// `name + offset`
    Derived {
        name: String,
        offset: f64,
    },
}

fn number(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::InvalidInput(format!("bad number `{s}`")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidInput(format!("`{s}` is not finite")))
    }
}

/// Inclusive range; points are rounded to 12 decimals so `1.05 + 3·0.05`
/// prints as `1.2`.
pub fn range_values(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!("range step must be positive, got {step}")));
    }
    if stop < start {
        return Ok(Vec::new());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if n > 10_000_000 {
        return Err(Error::InvalidInput(format!("range has {n} points")));
    }
    Ok((0..n).map(|i| round12(start + i as f64 * step)).collect())
}

fn round12(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

pub fn parse_param_spec(s: &str) -> Result<ParamSpec> {
    let s = s.trim();
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        3 => return Ok(ParamSpec::Values(range_values(number(parts[0])?, number(parts[1])?, number(parts[2])?)?)),
        1 => {}
        _ => return Err(Error::InvalidInput(format!("expected start:stop:step, got `{s}`"))),
    }
    if let Ok(v) = number(s) {
        return Ok(ParamSpec::Values(vec![v]));
    }
    let split = s.find(['+', '-']).unwrap_or(s.len());
    let (name, rest) = s.split_at(split);
    let name = name.trim();
    if !PARAM_NAMES.contains(&name) {
        return Err(Error::InvalidInput(format!("cannot parse `{s}`: expected a number, a range or e.g. `a-0.7`")));
    }
    let offset = if rest.is_empty() { 0.0 } else { number(rest.replace(' ', "").as_str())? };
    Ok(ParamSpec::Derived { name: name.to_string(), offset })
}

/// Grid points of a sweep: ranges vary as a cartesian product with the
/// first parameter slowest; derived parameters follow their source.
pub fn sweep_points(specs: &[(&str, ParamSpec)]) -> Result<Vec<ParamValues>> {
    let mut points = vec![ParamValues::default()];
    for (name, spec) in specs {
        if let ParamSpec::Values(values) = spec {
            points = points
                .iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = *p;
                        q.set(name, v);
                        q
                    })
                })
                .collect();
        }
    }
    for (name, spec) in specs {
        if let ParamSpec::Derived { name: source, offset } = spec {
            if matches!(specs.iter().find(|(n, _)| n == source), None | Some((_, ParamSpec::Derived { .. }))) {
                return Err(Error::InvalidInput(format!("--{name} refers to `{source}`, which is not a number or range")));
            }
            for p in points.iter_mut() {
                let v = p.get(source).expect("source parameter is set") + offset;
                p.set(name, round12(v));
            }
        }
    }
    Ok(points)
}

fn config_for(grid: Option<usize>) -> Result<Config> {
    let cfg = Config::from_env()?;
    match grid {
        Some(n) => cfg.with_grid(n),
        None => Ok(cfg),
    }
}

fn units(o: &Options) -> Units {
    if o.bits {
        Units::Bits
    } else {
        Units::Nats
    }
}

fn compute(args: &ComputeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let o = &args.options;
    if args.trace.is_some() && !o.numeric {
        return Err(Error::InvalidInput("--trace needs --numeric".into()));
    }
    let cfg = config_for(o.grid)?;
    let params = ParamValues { a: args.a, b: args.b, k: args.k, kp: args.kp, r: args.r };
    let fam = build_family(o.family, &params)?;
    let (mut rec, full) = compute_record(&fam, RecordOptions { numeric: o.numeric, with_gr2: o.with_gr2 }, &cfg)?;
    if let (Some(path), Some(full)) = (&args.trace, &full) {
        let doc = serde_json::json!({
            "family": o.family.name(),
            "eve_optimum": full.eve_optimum,
            "trace": trace_json(&full.trace),
        });
        std::fs::write(path, serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))? + "\n")?;
        rec.trace_path = Some(path.display().to_string());
    }
    writeln!(out, "{}", rec.to_json(units(o)))?;
    if o.strict && !rec.verified {
        writeln!(err, "outside the proven domain: {}", rec.note.as_deref().unwrap_or("unverified"))?;
        return Ok(2);
    }
    Ok(0)
}

fn sweep_row(tag: FamilyTag, p: &ParamValues, opts: RecordOptions, cfg: &Config) -> (RunRecord, Option<Error>) {
    let attempt = build_family(tag, p).and_then(|fam| compute_record(&fam, opts, cfg));
    match attempt {
        Ok((mut rec, _)) => {
            if tag == FamilyTag::CvGhz {
                rec.r = p.r;
            }
            (rec, None)
        }
        Err(e) => {
            let symmetric = !matches!(tag, FamilyTag::AsymGlems | FamilyTag::Generic | FamilyTag::CvGhz);
            let b = if symmetric { p.a } else { p.b.or(if tag == FamilyTag::Generic { p.a } else { None }) };
            let kp = if tag == FamilyTag::SymSqThermal { p.k } else { p.kp };
            let rec = RunRecord::rejected(tag, p.a, b, p.k, kp, e.to_string());
            let fatal = exit_code(&e) != 1;
            (rec, fatal.then_some(e))
        }
    }
}

fn sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let o = &args.options;
    let cfg = config_for(o.grid)?;
    let tag = o.family;
    let mut specs = Vec::new();
    for (name, value) in [("a", &args.a), ("b", &args.b), ("k", &args.k), ("kp", &args.kp), ("r", &args.r)] {
        if let Some(v) = value {
            if !family_params(tag).contains(&name) {
                return Err(Error::InvalidInput(format!("{} does not take --{name}", tag.name())));
            }
            specs.push((name, parse_param_spec(v)?));
        }
    }
    for name in family_params(tag) {
        if !specs.iter().any(|(n, _)| n == name) && !(tag == FamilyTag::Generic && *name == "b") {
            return Err(Error::InvalidInput(format!("{} needs --{name}", tag.name())));
        }
    }
    let points = sweep_points(&specs)?;
    let start = Instant::now();
    let opts = RecordOptions { numeric: o.numeric, with_gr2: o.with_gr2 };
    let rows: Vec<(RunRecord, Option<Error>)> = points.par_iter().map(|p| sweep_row(tag, p, opts, &cfg)).collect();
    let records: Vec<RunRecord> = rows.iter().map(|(r, _)| r.clone()).collect();
    match &args.out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            write_csv(std::io::BufWriter::new(file), &records, units(o))?;
        }
        None => write_csv(&mut *out, &records, units(o))?,
    }
    let rejected = records.iter().filter(|r| r.note.is_some() && r.gie_closed.is_none()).count();
    let unverified = records.iter().filter(|r| !r.verified).count();
    writeln!(
        err,
        "sweep: {} rows, {} unverified, {} rejected, {:.2}s",
        records.len(),
        unverified,
        rejected,
        start.elapsed().as_secs_f64()
    )?;
    for (rec, _) in rows.iter().filter(|(r, _)| r.gie_closed.is_none()) {
        if let Some(note) = &rec.note {
            writeln!(err, "  rejected: {note}")?;
        }
    }
    if rows.iter().any(|(_, e)| e.is_some()) {
        return Ok(4);
    }
    if o.strict && unverified > 0 {
        return Ok(2);
    }
    Ok(0)
}

fn verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = config_for(args.grid)?;
    let report = run_suite(args.suite, &cfg);
    for c in &report.checks {
        writeln!(out, "{c}")?;
    }
    let failed = report.checks.iter().filter(|c| !c.passed()).count();
    writeln!(
        out,
        "{} {}/{} checks passed in {:.2}s",
        if failed == 0 { "ok:" } else { "FAILED:" },
        report.checks.len() - failed,
        report.checks.len(),
        report.elapsed.as_secs_f64()
    )?;
    if failed > 0 {
        write!(err, "{}", report.failure_dump(20))?;
        return Ok(4);
    }
    Ok(0)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => compute(a, out, err),
        Command::Sweep(a) => sweep(a, out, err),
        Command::Verify(a) => verify(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
