use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lhsdisc::harness::{
    emit_records_csv, emit_summary_csv, emit_summary_json, run_trials, summarize, theorem1_report,
    theorem2_report, ExperimentConfig,
};
use lhsdisc::points::format_f64;
use lhsdisc::probtools::{
    check_lemma4, check_lemma6, check_theorem3, check_theorem5_binomial, ConditionalBernoulliTree,
};
use lhsdisc::{
    build_witness, compute_slab_constant, lhs_sample, read_pointset, star_discrepancy_exact,
    star_discrepancy_exact_2d, star_discrepancy_lower_estimate, uniform_sample, write_pointset,
    CheckReport, Error, Seed, DEFAULT_GRID_BUDGET,
};

const POINTSET_FORMAT: &str = "\
Point-set files (pointset v1, UTF-8 text):
  line 1:  # pointset v1
  line 2:  <N> <d>
  then N lines of d whitespace-separated reals in [0, 1)
Blank lines and lines starting with '#' after the header are ignored.
A path of '-' means standard input or output.";

const CONFIG_FORMAT: &str = "\
Config files hold one `key = value` per line; '#' starts a comment.
  kind             lhs | uniform                       (required)
  N                number of points                    (required)
  d                dimension                           (required)
  trials           number of trials                    (required)
  master_seed      unsigned 64-bit seed                (default 0)
  c_values         comma-separated thresholds c for D* <= c sqrt(d/N)
  method           exact | exact2d | estimate | none   (default exact)
  estimate_budget  random boxes per estimate           (default 10000)
  strict_witness   true | false, require N >= 1600 d   (default true)
  grid_budget      exact enumeration guard             (default 1000000000)
  timing           true | false, fill runtime_ms       (default false)

Records CSV columns: trial, seed, dstar, method, witness_bound, k_count,
runtime_ms. Reals carry 17 significant digits; missing values are empty.
The summary is written as JSON, or as `field,value` CSV when the path ends
in .csv.";

const EXIT_CODES: &str = "\
Exit status: 0 on success or a passing check, 1 when a check fails,
2 on usage errors and unmet preconditions.";

/// Latin hypercube sampling and star discrepancy tools.
#[derive(Parser)]
#[command(name = "lhsdisc", version, after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a Latin hypercube or uniform sample and write it as a point set.
    #[command(after_help = POINTSET_FORMAT)]
    Sample {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Number of points N.
        #[arg(long)]
        n: usize,
        /// Dimension d.
        #[arg(long)]
        d: usize,
        /// Seed of the random stream; required so that every sample is reproducible.
        #[arg(long)]
        seed: Seed,
        /// Output path.
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Compute the star discrepancy of a point set, exactly or as a lower estimate.
    #[command(after_help = POINTSET_FORMAT)]
    Stardisc {
        /// Input point set.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        method: DiscMethod,
        /// Number of random grid boxes evaluated by `estimate`.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Seed for the random boxes of `estimate`.
        #[arg(long, default_value_t = Seed(0))]
        seed: Seed,
        /// Largest critical grid `exact` will enumerate.
        #[arg(long, default_value_t = DEFAULT_GRID_BUDGET)]
        grid_budget: u64,
    },
    /// Build the recursive witness box of a point set and print its trace.
    ///
    /// The last line is `lower_bound = <value>`, a lower bound on the star
    /// discrepancy.
    #[command(after_help = POINTSET_FORMAT)]
    Witness {
        /// Input point set.
        #[arg(long = "in")]
        input: PathBuf,
        /// Allow N < 1600 d (the slab constant search may still fail).
        #[arg(long)]
        force: bool,
    },
    /// Exact numerical checks of the probability inequalities.
    #[command(subcommand)]
    Prob(ProbCommand),
    /// Run a seeded multi-trial experiment and write records and a summary.
    #[command(after_help = CONFIG_FORMAT)]
    Experiment {
        /// Experiment config file.
        #[arg(long)]
        config: PathBuf,
        /// Per-trial records (CSV).
        #[arg(long)]
        out_records: PathBuf,
        /// Summary (JSON, or CSV for a .csv path).
        #[arg(long)]
        out_summary: PathBuf,
        /// Also check the theorem references and exit 1 if one fails.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Subcommand)]
enum ProbCommand {
    /// Total variation between H(N, W, n) and B(n, W/N) against its two-sided bound.
    Theorem3 {
        /// Population size N.
        #[arg(long = "N")]
        total: u64,
        /// Number of white balls W.
        #[arg(long = "W")]
        white: u64,
        /// Number of draws n.
        #[arg(long)]
        n: u64,
    },
    /// Lower-tail mass of B(n, p) below np - sqrt(np)/2 against 3/160.
    Lemma4 {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: f64,
    },
    /// Exact binomial lower tail against the Hoeffding bound exp(-2 t^2 k).
    Theorem5 {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        t: f64,
    },
    /// Stochastic dominance of dependent Bernoulli sums over random trees.
    Lemma6 {
        /// Tree depth (at most 20).
        #[arg(long)]
        depth: usize,
        /// Lower bound on every conditional probability.
        #[arg(long)]
        q: f64,
        /// Number of random trees.
        #[arg(long, default_value_t = 1)]
        trees: usize,
        #[arg(long, default_value_t = Seed(0))]
        seed: Seed,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Lhs,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiscMethod {
    Exact,
    Exact2d,
    Estimate,
}

enum Outcome {
    Done,
    CheckFailed,
}

fn open_input(path: &Path) -> io::Result<Box<dyn BufRead>> {
    if path == Path::new("-") {
        Ok(Box::new(BufReader::new(io::stdin())))
    } else {
        Ok(Box::new(BufReader::new(File::open(path)?)))
    }
}

fn open_output(path: &Path) -> io::Result<Box<dyn Write>> {
    if path == Path::new("-") {
        Ok(Box::new(BufWriter::new(io::stdout())))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

fn reals(v: &[f64]) -> String {
    v.iter()
        .map(|x| format_f64(*x))
        .collect::<Vec<_>>()
        .join(" ")
}

fn report(r: &CheckReport) -> Outcome {
    println!("{r}");
    if r.pass {
        Outcome::Done
    } else {
        Outcome::CheckFailed
    }
}

fn run(cli: Cli) -> lhsdisc::Result<Outcome> {
    match cli.command {
        Command::Sample {
            kind,
            n,
            d,
            seed,
            out,
        } => {
            if n == 0 || d == 0 {
                return Err(Error::PreconditionViolated(
                    "N and d must be positive".into(),
                ));
            }
            let ps = match kind {
                Kind::Lhs => lhs_sample(n, d, seed),
                Kind::Uniform => uniform_sample(n, d, seed),
            };
            let mut w = open_output(&out)?;
            write_pointset(&ps, &mut w)?;
            w.flush()?;
            Ok(Outcome::Done)
        }
        Command::Stardisc {
            input,
            method,
            budget,
            seed,
            grid_budget,
        } => {
            let ps = read_pointset(open_input(&input)?)?;
            let (name, cert) = match method {
                DiscMethod::Exact => ("exact", star_discrepancy_exact(&ps, grid_budget)?),
                DiscMethod::Exact2d => ("exact2d", star_discrepancy_exact_2d(&ps)?),
                DiscMethod::Estimate => (
                    "estimate",
                    star_discrepancy_lower_estimate(&ps, budget, seed, &[])?,
                ),
            };
            println!("method = {name}");
            println!("N = {}", ps.n_points());
            println!("d = {}", ps.dim());
            println!("argmax_box = {}", reals(cert.argmax_box.upper()));
            println!(
                "side = {}",
                if cert.closed_sided { "closed" } else { "open" }
            );
            println!("dstar = {}", format_f64(cert.value));
            Ok(Outcome::Done)
        }
        Command::Witness { input, force } => {
            let ps = read_pointset(open_input(&input)?)?;
            let sc = compute_slab_constant(ps.n_points(), ps.dim(), !force)?;
            let trace = build_witness(&ps, &sc)?;
            print!("{}", trace.report());
            Ok(Outcome::Done)
        }
        Command::Prob(p) => match p {
            ProbCommand::Theorem3 { total, white, n } => {
                Ok(report(&check_theorem3(total, white, n)?))
            }
            ProbCommand::Lemma4 { n, p } => Ok(report(&check_lemma4(n, p)?)),
            ProbCommand::Theorem5 { k, q, t } => Ok(report(&check_theorem5_binomial(k, q, t)?)),
            ProbCommand::Lemma6 {
                depth,
                q,
                trees,
                seed,
            } => {
                let mut outcome = Outcome::Done;
                for i in 0..trees {
                    let tree = ConditionalBernoulliTree::random(
                        depth,
                        q,
                        &mut seed.derive(i as u64).rng(),
                    )?;
                    println!("[tree {i}]");
                    if let Outcome::CheckFailed = report(&check_lemma6(&tree)?) {
                        outcome = Outcome::CheckFailed;
                    }
                    println!();
                }
                Ok(outcome)
            }
        },
        Command::Experiment {
            config,
            out_records,
            out_summary,
            check,
        } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = ExperimentConfig::parse(&text)?;
            let records = run_trials(&cfg)?;
            let mut w = open_output(&out_records)?;
            emit_records_csv(&records, &mut w)?;
            w.flush()?;

            let summary = summarize(&records, &cfg)?;
            let mut w = open_output(&out_summary)?;
            if out_summary
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
            {
                emit_summary_csv(&summary, &mut w)?;
            } else {
                emit_summary_json(&summary, &mut w)?;
            }
            w.flush()?;
            eprintln!("{} trials, {} succeeded", summary.trials, summary.successes);
            for r in records.iter().filter(|r| !r.succeeded()).take(5) {
                eprintln!(
                    "trial {}: {}",
                    r.trial,
                    r.error.as_deref().unwrap_or_default()
                );
            }

            let mut outcome = Outcome::Done;
            if check {
                let mut reports = Vec::new();
                if !summary.tails.is_empty() {
                    reports.push(theorem1_report(&summary));
                }
                match theorem2_report(&summary, &cfg) {
                    Ok(r) => reports.push(r),
                    Err(e) => eprintln!("witness bound not checked: {e}"),
                }
                for r in &reports {
                    if let Outcome::CheckFailed = report(r) {
                        outcome = Outcome::CheckFailed;
                    }
                    println!();
                }
            }
            Ok(outcome)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_check_failure() { 1 } else { 2 })
        }
    }
}
