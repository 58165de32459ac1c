use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use radsum_cli::record::{ExperimentRecord, FitSummary};
use radsum_cli::{exit_code, init_workers, run_sweep, runs, write_outputs, SweepSpec, WORKERS_ENV};
use radsum_core::decimal::{format_rational, parse_rational};
use radsum_core::fit::reference_exponents;
use radsum_core::oracle::OracleConfig;
use radsum_core::taylor::{
    expand_radical, search_params, solve_cancellation_with, CancellationOptions,
    CancellationSolution, SearchLimits,
};
use radsum_core::{fit_exponent, EvalConfig};

#[derive(Parser)]
#[command(name = "radsum", version, about = "Sums of d-th roots of integers modulo one")]
#[command(after_help = "Set RADSUM_WORKERS to fix the number of worker threads.")]
struct Cli {
    /// Largest working precision, in bits, for adaptive ball evaluation.
    #[arg(long, global = true)]
    precision_cap: Option<u32>,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build radicands p_i c_i^d whose root sum is close to beta modulo one.
    Construct {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: usize,
        #[arg(long = "N")]
        n: u64,
        /// Target as "a/b" or a decimal.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        beta: String,
        /// Comma-separated primes replacing the first k primes.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// Exhaustive minima over all radicand tuples.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Scan min_h h^sigma * max_i ||h p_i^(1/d)|| for h <= H.
    DualScan {
        #[arg(long)]
        d: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long = "H")]
        h: u64,
        #[arg(long)]
        sigma: String,
        /// Also print the minimum of every decade of h.
        #[arg(long)]
        per_decade: bool,
    },
    /// Exact Laurent expansions and cancellation identities.
    Taylor {
        #[command(subcommand)]
        which: TaylorCommand,
    },
    /// Run a parameter grid described by a TOML file.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Directory receiving <name>.csv, <name>.json and <name>.meta.json.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Least-squares exponent of distance against size from a CSV file.
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// Column holding the size parameter.
        #[arg(long, default_value = "n")]
        x: String,
        /// Column holding the distance.
        #[arg(long, default_value = "value_mid")]
        y: String,
        /// Print reference exponents -k/d and -(k-1/d).
        #[arg(long, requires = "d")]
        k: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
    },
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    k: usize,
    #[arg(long = "N")]
    n: u64,
    /// Refuse when more tuples than this would be scanned.
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Minimum nonzero distance of the sum to an integer.
    G(OracleArgs),
    /// Minimum distance of the sum to beta modulo one.
    Inhom {
        #[command(flatten)]
        args: OracleArgs,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
}

#[derive(Subcommand)]
enum TaylorCommand {
    /// Expansion of ((M + u)^d + v)^(1/d) down to M^(-order).
    Expand {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long)]
        order: u32,
    },
    /// Weights cancelling orders d-1 .. dk-2 for the given parameters.
    Solve {
        #[arg(long)]
        d: u32,
        /// Parameters as "u,v;u,v;...".
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        /// Accept mixed-sign weights (exploratory).
        #[arg(long)]
        signed: bool,
    },
    /// Try every k-subset of an integer (u, v) grid.
    Search {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: usize,
        /// Inclusive range "a..b".
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long)]
        max_subsets: Option<u64>,
        /// Subset index printed by an earlier limited run.
        #[arg(long, default_value_t = 0)]
        resume: u64,
        #[arg(long)]
        signed: bool,
    },
    /// Measure a solution's distance to the nearest integer against |lambda| M^(-(dk-1)).
    Verify {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        #[arg(long = "M", value_delimiter = ',', required = true)]
        m: Vec<i64>,
    },
}

/// `println!` that exits quietly once stdout is closed.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    init_workers().with_context(|| format!("reading {WORKERS_ENV}"))?;
    let mut eval = EvalConfig::default();
    if let Some(cap) = cli.precision_cap {
        eval.cap_bits = cap;
    }
    let json = cli.json;
    match cli.command {
        Command::Construct { d, k, n, beta, primes } => {
            let beta = parse_rational(&beta)?;
            let rec = runs::construct_record(d, k, n, &beta, primes, &eval)?;
            emit(&[rec], json)
        }
        Command::Oracle { which } => {
            let (args, beta) = match which {
                OracleCommand::G(a) => (a, None),
                OracleCommand::Inhom { args, beta } => (args, Some(parse_rational(&beta)?)),
            };
            let mut cfg = OracleConfig {
                eval,
                ..Default::default()
            };
            if let Some(b) = args.budget {
                cfg.budget = b;
            }
            let rec = runs::oracle_record(args.d, args.k, args.n, beta.as_ref(), &cfg)?;
            emit(&[rec], json)
        }
        Command::DualScan { d, primes, h, sigma, per_decade } => {
            let sigma = parse_rational(&sigma)?;
            if per_decade {
                let theta = radsum_core::ThetaVector::from_primes(d, &primes, 128)?;
                let r = radsum_core::dual_scan(&theta, h, &sigma, &eval)?;
                if json {
                    out!("{}", serde_json::to_string_pretty(&r.per_decade)?);
                } else {
                    for dm in &r.per_decade {
                        out!(
                            "h in [{}, {}]: min {} at h = {}",
                            dm.start,
                            dm.end,
                            radsum_core::enclose(&dm.quality),
                            dm.witness_h
                        );
                    }
                }
            }
            let rec = runs::dual_scan_record(d, &primes, h, &sigma, &eval)?;
            emit(&[rec], json)
        }
        Command::Taylor { which } => taylor(which, &eval, json),
        Command::Sweep { spec, out_dir } => {
            let spec = SweepSpec::from_path(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let run = run_sweep(&spec)?;
            let paths = write_outputs(&run, &out_dir)?;
            if json {
                out!("{}", serde_json::to_string_pretty(&run.document)?);
            } else {
                print_records(&run.document.records);
                if let Some(f) = &run.document.fit {
                    print_fit(f);
                }
                for p in paths {
                    out!("wrote {}", p.display());
                }
            }
            Ok(())
        }
        Command::Fit { input, x, y, k, d } => {
            let pts = read_points(&input, &x, &y)?;
            let fit = fit_exponent(&pts)?;
            let summary = FitSummary::new(&x, &fit);
            if json {
                out!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                print_fit(&summary);
                if let (Some(k), Some(d)) = (k, d) {
                    let (a, b) = reference_exponents(k, d);
                    out!("reference: -k/d = {}, -(k - 1/d) = {}", format_rational(&a), format_rational(&b));
                }
            }
            Ok(())
        }
    }
}

fn taylor(cmd: TaylorCommand, eval: &EvalConfig, json: bool) -> Result<()> {
    match cmd {
        TaylorCommand::Expand { d, u, v, order } => {
            let p = radsum_core::ExpansionParams::new(d, parse_rational(&u)?, parse_rational(&v)?)?;
            let s = expand_radical(&p, order)?;
            if json {
                let terms: Vec<(i64, String)> = s.terms().map(|(e, c)| (e, c.to_string())).collect();
                out!(
                    "{}",
                    serde_json::json!({ "truncation_order": s.truncation_order(), "terms": terms })
                );
            } else {
                out!("{s}");
            }
            Ok(())
        }
        TaylorCommand::Solve { d, params, signed } => {
            let params = runs::parse_params(d, &params)?;
            let sols = solve_cancellation_with(d, &params, CancellationOptions { allow_signed: signed })?;
            print_solutions(&sols, json);
            Ok(())
        }
        TaylorCommand::Search { d, k, u, v, max_subsets, resume, signed } => {
            let limits = SearchLimits {
                max_subsets,
                resume_from: resume,
                options: CancellationOptions { allow_signed: signed },
            };
            let out = search_params(d, k, parse_range(&u)?, parse_range(&v)?, &limits)?;
            print_solutions(&out.solutions, json);
            eprintln!(
                "examined {} of {} subsets{}",
                out.subsets_examined,
                out.total_subsets,
                out.resume_token
                    .map(|t| format!("; resume with --resume {t}"))
                    .unwrap_or_default()
            );
            Ok(())
        }
        TaylorCommand::Verify { d, params, m } => {
            let params = runs::parse_params(d, &params)?;
            let s = runs::taylor_solution(d, &params)?;
            let recs = runs::taylor_verify_records(&s, &m, eval)?;
            emit(&recs, json)
        }
    }
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<i64>> {
    let (a, b) = s
        .split_once("..")
        .with_context(|| format!("expected a range a..b, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    Ok(a.trim().parse()?..=b.trim().parse()?)
}

fn read_points(path: &PathBuf, x: &str, y: &str) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .with_context(|| format!("no column {name:?} in {}", path.display()))
    };
    let (xi, yi) = (col(x)?, col(y)?);
    let err = headers.iter().position(|h| h == "error");
    let mut pts = Vec::new();
    for row in rdr.records() {
        let row = row?;
        if err.is_some_and(|i| !row.get(i).unwrap_or("").is_empty()) {
            continue;
        }
        let (Some(xs), Some(ys)) = (row.get(xi), row.get(yi)) else { continue };
        if let (Ok(xv), Ok(yv)) = (xs.parse::<f64>(), ys.parse::<f64>()) {
            pts.push((xv, yv));
        }
    }
    Ok(pts)
}

fn emit(records: &[ExperimentRecord], json: bool) -> Result<()> {
    if json {
        if records.len() == 1 {
            out!("{}", serde_json::to_string_pretty(&records[0])?);
        } else {
            out!("{}", serde_json::to_string_pretty(records)?);
        }
    } else {
        print_records(records);
    }
    Ok(())
}

fn print_records(records: &[ExperimentRecord]) {
    for r in records {
        let mut parts = vec![r.method.clone(), format!("d={}", r.d)];
        let mut push = |name: &str, v: Option<String>| {
            if let Some(v) = v {
                parts.push(format!("{name}={v}"));
            }
        };
        push("k", r.k.map(|v| v.to_string()));
        push("N", r.n.map(|v| v.to_string()));
        push("M", r.m.map(|v| v.to_string()));
        push("H", r.h.map(|v| v.to_string()));
        push("beta", r.beta.clone());
        push("sigma", r.sigma.clone());
        out!("{}", parts.join(" "));
        if let Some(e) = &r.error {
            out!("  error: {e}");
            continue;
        }
        if let (Some(m), Some(rad)) = (&r.value_mid, &r.value_rad) {
            out!("  value: {m} ± {rad}");
        }
        if r.exact == Some(true) {
            out!("  exact: the sum is an integer");
        }
        if let Some(w) = &r.witness {
            out!("  witness: {w}");
        }
        if let Some(ratio) = r.ratio {
            out!("  ratio to leading term: {ratio:.6}");
        }
    }
}

fn print_fit(f: &FitSummary) {
    out!(
        "fit over {} points ({}): slope {:.6} ~ {}/{}, intercept {:.6}, residual {:.3e}",
        f.points.len(),
        f.x,
        f.slope,
        f.slope_num,
        f.slope_den,
        f.intercept,
        f.residual_norm
    );
}

fn rat_list(v: &[BigRational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

fn print_solutions(sols: &[CancellationSolution], json: bool) {
    if json {
        let out: Vec<_> = sols
            .iter()
            .map(|s| {
                serde_json::json!({
                    "d": s.d,
                    "params": s.params.iter().map(|p| [p.u.to_string(), p.v.to_string()]).collect::<Vec<_>>(),
                    "weights": s.integer_weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                    "leading_order": s.leading_order,
                    "leading_coefficient": s.leading_coefficient.to_string(),
                    "linear_slope": s.linear_part.slope.to_string(),
                    "linear_constant": s.linear_part.constant.to_string(),
                    "positive": s.positive,
                })
            })
            .collect();
        out!("{}", serde_json::to_string_pretty(&out).expect("json"));
        return;
    }
    if sols.is_empty() {
        out!("no solutions");
    }
    for s in sols {
        let params: Vec<String> = s.params.iter().map(|p| p.to_string()).collect();
        out!("params {}", params.join(" "));
        out!("  weights ({})", rat_list(&s.weights));
        out!(
            "  sum = {} M + {} + ({}) M^-{} + ...",
            format_rational(&s.linear_part.slope),
            format_rational(&s.linear_part.constant),
            s.leading_coefficient,
            s.leading_order
        );
        if !s.positive {
            out!("  note: mixed-sign weights");
        }
    }
}
