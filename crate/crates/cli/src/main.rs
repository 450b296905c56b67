//! `expdiv`: evaluate exponential-divisor functions, tabulate their sums,
//! compute constants, run identity suites and residual fits.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use expdiv_core::analysis::{
    fit_target, maximal_order_report, named_constant, ConstantName, ConstantParams, ConstantResult, ConstantsCache,
    Exponent, FitTarget, MaximalKind,
};
use expdiv_core::checks::{run_suite, Suite};
use expdiv_core::expfun;
use expdiv_core::sieve::{parse_count, summatory_with, SieveConfig, DEFAULT_CAPACITY};
use expdiv_core::{factor, Grid, MultiplicativeSpec, SummatoryGrid};

use output::{Emitter, Format};

#[derive(Parser)]
#[command(name = "expdiv", version, about = "Arithmetic functions of exponential divisors")]
struct Cli {
    /// Leave out the metadata block (tool, version, timestamp).
    #[arg(long, global = true)]
    no_meta: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact value of one function at n.
    Eval {
        /// tau_e, sigma_e, phi_e, sigma_tilde, p_tilde, q<k>e, gcd_e, phi_e_sandor
        #[arg(long = "fn")]
        func: String,
        #[arg(long, value_parser = parse_count_arg)]
        n: u64,
        /// Second argument of gcd_e.
        #[arg(long, value_parser = parse_count_arg)]
        m: Option<u64>,
    },
    /// Exact summatory values on a grid.
    Sum {
        /// A sieve function (phi_e, tau_e, sigma_e, sigma_tilde, p_tilde, q<k>e)
        /// or one of tau13, petermann_wu, phi_e_shifted.
        #[arg(long = "fn")]
        func: String,
        /// start:stop:ratio or a comma-separated list.
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Largest x the sieve may reach.
        #[arg(long, value_parser = parse_count_arg, default_value_t = DEFAULT_CAPACITY)]
        capacity: u64,
    },
    /// Euler-product constants with error bounds.
    Constants {
        /// C1, C2, C3, C4, C5, D<k>; all defaults when omitted.
        #[arg(long)]
        name: Option<String>,
        /// Exponent for C3, as 1, 0.75 or 2/3.
        #[arg(long)]
        u: Option<String>,
        /// Significant digits printed for each value.
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..=90))]
        precision: u32,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Exact identity suites.
    Check {
        /// oracle, lemma1, lemma3, petermann-wu, theorem4-exact, theorem7-exact
        #[arg(long)]
        suite: String,
        #[arg(long = "N", value_parser = parse_count_arg)]
        n: u64,
    },
    /// Residuals of a summatory function against its main term.
    Fit {
        /// 1, 2, 3, 5 or 6.
        #[arg(long)]
        theorem: u32,
        /// k for theorem 5.
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// u for theorem 2.
        #[arg(long, default_value = "1")]
        u: String,
        #[arg(long, default_value = "1e4:1e7:2")]
        grid: String,
        #[arg(long, value_parser = parse_count_arg, default_value_t = DEFAULT_CAPACITY)]
        capacity: u64,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Tables along primorial powers.
    Report {
        /// theorem4, theorem7 or sandor.
        #[arg(long)]
        kind: String,
        /// Number of primes.
        #[arg(long, default_value_t = 100)]
        k: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(clap::Args)]
struct SourceArgs {
    /// Constants cache file; read first, then updated with new values.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Only use cached constants.
    #[arg(long)]
    no_compute: bool,
    /// Primes up to this bound enter the Euler product directly.
    #[arg(long, value_parser = parse_count_arg)]
    prime_cut: Option<u64>,
    /// Largest exponent summed in each local factor.
    #[arg(long)]
    exponent_cut: Option<u32>,
}

fn parse_count_arg(s: &str) -> Result<u64, String> {
    parse_count(s).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Capacity(String),
}

impl From<expdiv_core::Error> for Failure {
    fn from(e: expdiv_core::Error) -> Self {
        match e {
            expdiv_core::Error::CapExceeded { .. } => Failure::Capacity(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Printed output and whether the checked property held.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, passed: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let emit = Emitter { meta: !cli.no_meta };
    match run(cli.command, emit) {
        Ok(out) => {
            print!("{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Capacity(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command, emit: Emitter) -> Result<Outcome, Failure> {
    match command {
        Command::Eval { func, n, m } => eval(&func, n, m).map(|v| Outcome::ok(format!("{v}\n"))),
        Command::Sum { func, grid, format, capacity } => sum(&func, &grid, format, capacity, emit),
        Command::Constants { name, u, precision, source, format } => {
            constants(name.as_deref(), u.as_deref(), precision as usize, &source, format, emit)
        }
        Command::Check { suite, n } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, n)?;
            Ok(Outcome { passed: report.passed, text: emit.json(&report) })
        }
        Command::Fit { theorem, k, u, grid, capacity, source, format } => {
            fit(theorem, k, &u, &grid, capacity, &source, format, emit)
        }
        Command::Report { kind, k, format } => report(&kind, k, format, emit),
    }
}

fn eval(func: &str, n: u64, m: Option<u64>) -> Result<String, Failure> {
    let f = factor(n)?;
    let value = match func {
        "tau_e" => expfun::tau_e(&f).to_string(),
        "sigma_e" => expfun::sigma_e(&f).to_string(),
        "phi_e" => expfun::phi_e(&f).to_string(),
        "sigma_tilde" => expfun::sigma_tilde(&f).to_string(),
        "p_tilde" => expfun::p_tilde(&f).to_string(),
        "phi_e_sandor" => expfun::phi_e_sandor(n)?.to_string(),
        "gcd_e" => {
            let m = m.ok_or_else(|| Failure::Usage("gcd_e needs --m".into()))?;
            expfun::gcd_exponential(&f, &factor(m)?)?.to_string()
        }
        other => match parse_q(other) {
            Some(k) => expfun::q_k_e(&f, k)?.to_string(),
            None => return Err(Failure::Usage(format!("unknown function {other:?}"))),
        },
    };
    Ok(value)
}

/// `q<k>e` -> `k`.
fn parse_q(name: &str) -> Option<u32> {
    name.strip_prefix('q')?.strip_suffix('e')?.parse().ok()
}

fn parse_grid(s: &str) -> Result<Grid, Failure> {
    Ok(s.parse::<Grid>()?)
}

fn sums_for(func: &str, grid: &Grid, capacity: u64) -> Result<SummatoryGrid, Failure> {
    let config = SieveConfig::with_capacity(capacity);
    if let Ok(target) = func.parse::<FitTarget>() {
        return Ok(target.sums(grid, &config)?);
    }
    if let Some(k) = parse_q(func) {
        return Ok(summatory_with(&MultiplicativeSpec::q_e(k)?, grid, &config)?);
    }
    let spec = MultiplicativeSpec::by_name(func).ok_or_else(|| Failure::Usage(format!("unknown function {func:?}")))?;
    Ok(summatory_with(&spec, grid, &config)?)
}

#[derive(Serialize)]
struct SumRow {
    x: u64,
    sum: String,
}

#[derive(Serialize)]
struct SumOutput {
    function: String,
    rows: Vec<SumRow>,
}

fn sum(func: &str, grid: &str, format: Format, capacity: u64, emit: Emitter) -> Result<Outcome, Failure> {
    let sums = sums_for(func, &parse_grid(grid)?, capacity)?;
    let text = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = sums.points.iter().map(|p| vec![p.x.to_string(), p.sum.to_string()]).collect();
            emit.csv(&["x", "sum"], &rows, &[])
        }
        Format::Json => emit.json(&SumOutput {
            function: sums.label.clone(),
            rows: sums.points.iter().map(|p| SumRow { x: p.x, sum: p.sum.to_string() }).collect(),
        }),
    };
    Ok(Outcome::ok(text))
}

/// Constants from a cache file, computed on demand unless `--no-compute`.
struct ConstantSource {
    params: ConstantParams,
    cache: Option<(PathBuf, ConstantsCache)>,
    no_compute: bool,
    dirty: bool,
}

impl ConstantSource {
    fn new(args: &SourceArgs) -> Result<Self, Failure> {
        let mut params = ConstantParams::default();
        if let Some(p) = args.prime_cut {
            params.prime_cut = p;
        }
        if let Some(a) = args.exponent_cut {
            params.exponent_cut = a;
        }
        let cache = match &args.cache {
            Some(path) => Some((path.clone(), ConstantsCache::load(path)?)),
            None => None,
        };
        Ok(Self { params, cache, no_compute: args.no_compute, dirty: false })
    }

    /// The constant and whether it came from the cache.
    fn get(&mut self, name: &ConstantName) -> expdiv_core::Result<(ConstantResult, bool)> {
        if let Some(hit) = self.cache.as_ref().and_then(|(_, c)| c.get(name, &self.params)) {
            return Ok((hit, true));
        }
        if self.no_compute {
            let why = match &self.cache {
                Some((path, _)) => format!("{} has no entry for {}", path.display(), name.label()),
                None => "no constants cache given".into(),
            };
            return Err(expdiv_core::Error::Cache(format!("{why} and --no-compute is set")));
        }
        let r = named_constant(name, &self.params)?;
        if let Some((_, cache)) = self.cache.as_mut() {
            cache.insert(&r);
            self.dirty = true;
        }
        Ok((r, false))
    }

    fn save(&self) -> expdiv_core::Result<()> {
        match &self.cache {
            Some((path, cache)) if self.dirty => cache.save(path),
            _ => Ok(()),
        }
    }
}

#[derive(Serialize)]
struct ConstantRow {
    name: String,
    params: String,
    value: String,
    error_bound: String,
    sign: &'static str,
    prime_cut: u64,
    exponent_cut: u32,
    max_exponent_used: u32,
    precision_bits: usize,
    cached: bool,
}

impl ConstantRow {
    fn new(r: &ConstantResult, cached: bool, digits: usize) -> Self {
        Self {
            name: r.name.clone(),
            params: r.params.clone(),
            value: r.value.to_sci(digits),
            error_bound: r.error_bound.to_sci(3),
            sign: if r.value.is_negative() { "-" } else { "+" },
            prime_cut: r.prime_cut,
            exponent_cut: r.exponent_cut,
            max_exponent_used: r.max_exponent_used,
            precision_bits: r.precision_bits,
            cached,
        }
    }
}

fn parse_u(u: Option<&str>) -> Result<Option<Exponent>, Failure> {
    u.map(|s| s.parse::<Exponent>()).transpose().map_err(Failure::from)
}

fn constants(
    name: Option<&str>,
    u: Option<&str>,
    digits: usize,
    args: &SourceArgs,
    format: Format,
    emit: Emitter,
) -> Result<Outcome, Failure> {
    let names = match name {
        Some(n) => vec![ConstantName::parse(n, parse_u(u)?)?],
        None => ConstantName::all_defaults(),
    };
    let mut source = ConstantSource::new(args)?;
    let mut rows = Vec::new();
    for n in &names {
        let (r, cached) = source.get(n)?;
        rows.push(ConstantRow::new(&r, cached, digits));
    }
    source.save()?;
    let text = match format {
        Format::Json => emit.json(&rows),
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.name.clone(), r.params.clone(), r.value.clone(), r.error_bound.clone()])
                .collect();
            emit.csv(&["name", "params", "value", "error_bound"], &body, &[])
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct FitOutput {
    target: String,
    constants: Vec<ConstantRow>,
    report: expdiv_core::analysis::FitReport,
}

#[allow(clippy::too_many_arguments)]
fn fit(
    theorem: u32,
    k: u32,
    u: &str,
    grid: &str,
    capacity: u64,
    args: &SourceArgs,
    format: Format,
    emit: Emitter,
) -> Result<Outcome, Failure> {
    let u: Exponent = u.parse()?;
    let target = FitTarget::from_theorem(theorem, k, u)?;
    for name in target.constants() {
        if let ConstantName::C3(u) = name {
            ConstantName::parse("C3", Some(u))?;
        }
    }
    let grid = parse_grid(grid)?;
    let mut source = ConstantSource::new(args)?;
    let mut cached_flags = Vec::new();
    let fit = fit_target(&target, &grid, &SieveConfig::with_capacity(capacity), &mut |name| {
        let (r, cached) = source.get(name)?;
        cached_flags.push(cached);
        Ok(r)
    })?;
    source.save()?;
    let passed = fit.report.verdict;
    let constants =
        fit.constants.iter().zip(&cached_flags).map(|(r, &cached)| ConstantRow::new(r, cached, 50)).collect();
    let text = match format {
        Format::Json => emit.json(&FitOutput { target: target.to_string(), constants, report: fit.report }),
        Format::Csv => {
            let rep = &fit.report;
            let rows: Vec<Vec<String>> = rep
                .points
                .iter()
                .map(|p| {
                    vec![
                        p.x.to_string(),
                        p.sum.to_string(),
                        p.main.to_sci(20),
                        p.residual.to_sci(20),
                        p.ratio.to_sci(20),
                    ]
                })
                .collect();
            let fitted = rep.fitted_exponent.map_or("none".to_string(), |e| format!("{e:.6}"));
            let notes = [format!(
                "model={} fitted_exponent={fitted} threshold={:.6} verdict={}",
                rep.model,
                rep.threshold,
                if rep.verdict { "pass" } else { "fail" }
            )];
            emit.csv(&["x", "sum", "main", "residual", "ratio"], &rows, &notes)
        }
    };
    Ok(Outcome { text, passed })
}

fn report(kind: &str, k: usize, format: Format, emit: Emitter) -> Result<Outcome, Failure> {
    let kind: MaximalKind = kind.parse()?;
    let rep = maximal_order_report(kind, k)?;
    let passed = rep.exact_holds != Some(false);
    let text = match format {
        Format::Json => emit.json(&rep),
        Format::Csv => {
            let rows: Vec<Vec<String>> = rep
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.k.to_string(),
                        format!("{:.12e}", r.ln_n),
                        format!("{:.12e}", r.value),
                        format!("{:.12e}", r.target),
                        format!("{:.12e}", r.ratio),
                        r.exact.map_or(String::new(), |b| b.to_string()),
                    ]
                })
                .collect();
            emit.csv(&["k", "ln_n", "value", "target", "ratio", "exact"], &rows, &[])
        }
    };
    Ok(Outcome { text, passed })
}
