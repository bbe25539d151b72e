use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use exceedance_core::bounds::{check_bound, BoundKind};
use exceedance_core::harness::{self, report, ExploreSpec, CATALOG};
use exceedance_core::interval::{PrecisionPolicy, ProbInterval};
use exceedance_core::orders::{
    check_hazard_rate_order, check_likelihood_ratio_order, OrderCheckReport,
};
use exceedance_core::poisson::{self, PoissonParams};
use exceedance_core::rational::{
    parse_rational, render_approx, render_exact, render_fraction, Rational,
};
use exceedance_core::{BinomialLaw, BinomialParams, GridSpec, RunOptions, Verdict};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_VIOLATED: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "exceedance",
    version,
    about = "Exact and certified checks of mean-exceedance bounds"
)]
struct Cli {
    /// Starting precision for enclosures, in fractional bits.
    #[arg(long, global = true, default_value_t = 128)]
    precision_bits: u32,
    /// Highest precision tried before a comparison is reported INCONCLUSIVE.
    #[arg(long, global = true, default_value_t = 2048)]
    precision_cap_bits: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Plain,
}

#[derive(Subcommand)]
enum Command {
    /// Exact binomial functionals: pmf:K, tail:K, mad, tce:K, exceed, median-check.
    Exact {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_rat)]
        p: Rational,
        #[arg(long)]
        quantity: String,
    },
    /// Evaluate one bound and compare it with the exact mean-exceedance probability.
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_rat)]
        p: Rational,
        /// veraar, gm, rt, theorem1, theorem1-sharp.
        #[arg(long)]
        kind: String,
        /// Use the 1-2p form of the main bound.
        #[arg(long)]
        sharp: bool,
    },
    /// Poisson enclosures: pmf:K, tail:K, mad, tce:K, exceed, bound.
    Poisson {
        #[arg(long, value_parser = parse_rat)]
        lambda: Rational,
        #[arg(long)]
        quantity: String,
        /// Target enclosure width (default 2^-64).
        #[arg(long, value_parser = parse_rat)]
        epsilon: Option<Rational>,
    },
    /// Verify one claim (or ALL) over a parameter grid.
    Sweep {
        #[command(flatten)]
        grid: GridArgs,
        /// Claim id from `claims`, or ALL.
        #[arg(long, default_value = "ALL")]
        claim: String,
        /// Poisson means, comma separated (overrides the generated grid).
        #[arg(long, value_delimiter = ',', value_parser = parse_rat)]
        lambda_grid: Option<Vec<Rational>>,
        /// Generated Poisson grid: denominators up to this cap.
        #[arg(long, default_value_t = 6)]
        lambda_den_cap: u64,
        /// Generated Poisson grid: values up to this maximum.
        #[arg(long, default_value_t = 12)]
        lambda_max: u64,
        #[arg(long, default_value_t = 200)]
        stirling_max: u64,
        /// Worker threads; output order does not depend on it.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Multiply every bound by this factor before comparing.
        #[arg(long, hide = true, value_parser = parse_rat)]
        scale_bound: Option<Rational>,
    },
    /// Likelihood-ratio and hazard-rate order between Bin(n,p) and Bin(n,q).
    Orders {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_rat)]
        p: Rational,
        #[arg(long, value_parser = parse_rat)]
        q: Rational,
    },
    /// Exploratory search for small E|S - mean|^2 / Var S over Poisson-binomial laws.
    ExplorePb {
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        #[arg(long, default_value_t = 6)]
        den_cap: u64,
        #[arg(long, default_value_t = 4)]
        perturb_steps: u32,
    },
    /// How close each bound comes to the exact probability across a grid.
    Tightness {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// List the claim catalog.
    Claims,
}

#[derive(clap::Args)]
struct GridArgs {
    #[arg(long, default_value_t = 2)]
    n_min: u64,
    #[arg(long, default_value_t = 30)]
    n_max: u64,
    #[arg(long, default_value_t = 12)]
    p_den_cap: u64,
}

fn parse_rat(text: &str) -> std::result::Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn exit_for(violated: bool, inconclusive: bool) -> u8 {
    if violated {
        EXIT_VIOLATED
    } else if inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

fn exit_for_verdict(verdict: Verdict) -> u8 {
    exit_for(
        verdict == Verdict::Violated,
        verdict == Verdict::Inconclusive,
    )
}

fn run(cli: Cli) -> Result<u8> {
    let policy = PrecisionPolicy::new(cli.precision_bits, cli.precision_cap_bits)?;
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let code = match cli.command {
        Command::Exact { n, p, quantity } => {
            cmd_exact(&mut out, &BinomialParams::new(n, p)?, &quantity)?
        }
        Command::Bound { n, p, kind, sharp } => {
            let mut kind: BoundKind = kind.parse()?;
            if sharp {
                if kind != BoundKind::Theorem1 && kind != BoundKind::Theorem1Sharp {
                    bail!("--sharp applies only to the theorem1 kind");
                }
                kind = BoundKind::Theorem1Sharp;
            }
            let check = check_bound(kind, &BinomialParams::new(n, p)?, &policy)?;
            writeln!(out, "bound {} {}", check.kind, interval_line(&check.bound))?;
            writeln!(out, "tail {}", exact_line(&check.tail))?;
            writeln!(out, "verdict {}", check.verdict)?;
            exit_for_verdict(check.verdict)
        }
        Command::Poisson {
            lambda,
            quantity,
            epsilon,
        } => {
            let params = match epsilon {
                Some(e) => PoissonParams::new(lambda, e)?,
                None => PoissonParams::with_default_epsilon(lambda)?,
            };
            cmd_poisson(&mut out, &params, &quantity)?
        }
        Command::Sweep {
            grid,
            claim,
            lambda_grid,
            lambda_den_cap,
            lambda_max,
            stirling_max,
            jobs,
            scale_bound,
        } => {
            let lambdas = match lambda_grid {
                Some(list) => list,
                None => harness::lambda_grid(lambda_den_cap, lambda_max),
            };
            if lambdas
                .iter()
                .any(|l| l <= &Rational::from_integer(0.into()))
            {
                bail!("--lambda-grid values must be positive");
            }
            let spec = GridSpec::new(grid.n_min, grid.n_max, grid.p_den_cap)?
                .with_lambda_grid(lambdas)
                .with_stirling_max(stirling_max)
                .with_policy(policy);
            let options = RunOptions {
                jobs,
                bound_scale: scale_bound,
            };
            let report = harness::run_claim_sweep(&spec, &claim, &options)?;
            match cli.format {
                Format::Csv => report::write_sweep_csv(&mut out, &report)?,
                Format::Plain => report::write_sweep_plain(&mut out, &report)?,
            }
            report::write_summary(&mut io::stderr().lock(), &report)?;
            exit_for(report.violated() > 0, report.inconclusive() > 0)
        }
        Command::Orders { n, p, q } => {
            let left = BinomialParams::new(n, p)?;
            let right = BinomialParams::new(n, q)?;
            let reports = [
                check_likelihood_ratio_order(&left, &right)?,
                check_hazard_rate_order(&left, &right)?,
            ];
            write_orders(&mut out, cli.format, &reports)?;
            exit_for(reports.iter().any(|r| !r.holds), false)
        }
        Command::ExplorePb {
            max_len,
            den_cap,
            perturb_steps,
        } => {
            let spec = ExploreSpec {
                max_len,
                den_cap,
                perturb_steps,
            };
            let report = harness::explore_mad_ratio(&spec, policy.start_bits)?;
            report::write_explore_csv(&mut out, &report)?;
            if let Some(line) = report::explore_minimum_line(&report) {
                eprintln!("{line}");
            }
            EXIT_OK
        }
        Command::Tightness { grid } => {
            let spec = GridSpec::new(grid.n_min, grid.n_max, grid.p_den_cap)?.with_policy(policy);
            let report = harness::tightness_report(&spec)?;
            report::write_tightness_csv(&mut out, &report)?;
            eprintln!(
                "quarter-threshold mismatches={} inconclusive={}",
                report.quarter_mismatches.len(),
                report.quarter_inconclusive
            );
            exit_for(
                !report.quarter_mismatches.is_empty(),
                report.quarter_inconclusive > 0,
            )
        }
        Command::Claims => {
            match cli.format {
                Format::Csv => {
                    writeln!(out, "claim_id,family,statement")?;
                    for c in CATALOG {
                        writeln!(
                            out,
                            "{},{:?},\"{}\"",
                            c.id,
                            c.family,
                            c.statement.replace('"', "\"\"")
                        )?;
                    }
                }
                Format::Plain => {
                    for c in CATALOG {
                        writeln!(out, "{:<24} {}", c.id, c.statement)?;
                    }
                }
            }
            EXIT_OK
        }
    };
    out.flush()?;
    Ok(code)
}

fn exact_line(q: &Rational) -> String {
    format!("{} ({})", render_fraction(q), render_approx(q))
}

fn interval_line(iv: &ProbInterval) -> String {
    format!(
        "{} ({})",
        report::render_interval(iv),
        render_approx(&iv.midpoint())
    )
}

/// Splits `name:K` into the name and an optional index.
fn split_quantity(quantity: &str) -> Result<(&str, Option<i64>)> {
    match quantity.split_once(':') {
        Some((name, k)) => {
            let k = k
                .parse()
                .with_context(|| format!("--quantity {quantity}: index must be an integer"))?;
            Ok((name, Some(k)))
        }
        None => Ok((quantity, None)),
    }
}

fn need_index(name: &str, k: Option<i64>) -> Result<i64> {
    k.with_context(|| format!("--quantity {name} needs an index, as in {name}:K"))
}

fn cmd_exact(out: &mut dyn Write, params: &BinomialParams, quantity: &str) -> Result<u8> {
    let law = BinomialLaw::new(params);
    let (name, k) = split_quantity(quantity)?;
    let value = match name {
        "pmf" => law.pmf(need_index(name, k)?)?,
        "tail" => law.tail(need_index(name, k)?),
        "tce" => law.tce(need_index(name, k)?)?,
        "mad" => law.mad(),
        "exceed" => law.mean_exceedance_prob(),
        "median-check" => {
            let tail = law.tail(params.floor_mean());
            let holds = law.median_lower_check();
            writeln!(out, "{} P[X >= {}] = {}", if holds { "holds" } else { "fails" }, params.floor_mean(), exact_line(&tail))?;
            return Ok(if holds { EXIT_OK } else { EXIT_VIOLATED });
        }
        other => bail!("unknown --quantity {other}; expected pmf:K, tail:K, mad, tce:K, exceed or median-check"),
    };
    writeln!(out, "{}", exact_line(&value))?;
    Ok(EXIT_OK)
}

fn cmd_poisson(out: &mut dyn Write, params: &PoissonParams, quantity: &str) -> Result<u8> {
    let (name, k) = split_quantity(quantity)?;
    let index = |k: Option<i64>| -> Result<u64> {
        let k = need_index(name, k)?;
        u64::try_from(k)
            .with_context(|| format!("--quantity {quantity}: index must be nonnegative"))
    };
    let value = match name {
        "pmf" => poisson::poisson_pmf(params, index(k)?)?,
        "tail" => poisson::poisson_tail(params, index(k)?)?,
        "tce" => poisson::poisson_tce(params, index(k)?)?,
        "mad" => poisson::poisson_mad(params)?,
        "exceed" => poisson::poisson_tail(params, params.threshold_index())?,
        "bound" => poisson::poisson_theorem_bound(params)?,
        other => {
            bail!("unknown --quantity {other}; expected pmf:K, tail:K, mad, tce:K, exceed or bound")
        }
    };
    writeln!(out, "{}", interval_line(&value))?;
    Ok(EXIT_OK)
}

fn write_orders(out: &mut dyn Write, format: Format, reports: &[OrderCheckReport]) -> Result<()> {
    let opt = |v: Option<u64>| v.map(|k| k.to_string()).unwrap_or_default();
    match format {
        Format::Csv => {
            writeln!(out, "order,n,p,q,holds,witness_k,holds_at_zero")?;
            for r in reports {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.order_kind,
                    r.left.n(),
                    render_exact(r.left.p()),
                    render_exact(r.right.p()),
                    r.holds,
                    opt(r.witness_k),
                    r.holds_at_zero.map(|b| b.to_string()).unwrap_or_default()
                )?;
            }
        }
        Format::Plain => {
            for r in reports {
                let witness = r
                    .witness_k
                    .map(|k| format!(" witness k={k}"))
                    .unwrap_or_default();
                writeln!(
                    out,
                    "{} {}{witness}",
                    r.order_kind,
                    if r.holds { "holds" } else { "fails" }
                )?;
            }
        }
    }
    Ok(())
}
