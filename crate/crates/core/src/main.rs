use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

use persuade::career::{self, PopulationParams};
use persuade::freeride::{self, FreerideParams};
use persuade::oracle::Oracle;
use persuade::rational::{to_decimal_string, to_fraction_string};
use persuade::sweep::{self, ClosedForms, GridSpec, GridVar, LoadedParams};
use persuade::{attribution, diagnosis, montecarlo, Dim, Error, InformationSet, Result, Signal};

#[derive(Parser)]
#[command(name = "persuade", version, about = "Exact doctor/AI disagreement model: thresholds, verification and sweeps")]
struct Cli {
    /// JSON parameter file; defaults to the reference point.
    #[arg(long, global = true)]
    params: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for Monte Carlo runs.
    #[arg(long, global = true, default_value_t = montecarlo::DEFAULT_SEED)]
    seed: u64,
    /// Sweep as var:start:stop:step.
    #[arg(long, global = true)]
    grid: Option<GridSpec>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Persuasion thresholds over a grid (default pi_doc:0.1:0.9:0.1).
    Thresholds,
    /// Check every closed form against the enumeration over a grid.
    Verify {
        /// Non-hallucinating points in the default grid when --grid is absent.
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Accuracy under both regimes for a population of doctor types.
    Career,
    /// Extra attention signal: gains, cost interval and draw tables.
    Freeride,
    /// Posterior and final diagnosis for one information set.
    Posterior(InfoArgs),
    /// Split a disagreement into attention and comprehension sources.
    Attribution(InfoArgs),
    /// Sampled estimates of exact probabilities.
    Montecarlo {
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
    },
}

#[derive(Args)]
struct InfoArgs {
    /// Doctor's signal, e.g. 01.
    #[arg(long)]
    x_doc: Signal,
    #[arg(long)]
    w_doc: Dim,
    /// Doctor's initial diagnosis (0 or 1).
    #[arg(long, action = ArgAction::Set, value_parser = parse_bit)]
    d: bool,
    /// AI's diagnosis (0 or 1).
    #[arg(long, action = ArgAction::Set, value_parser = parse_bit)]
    a: bool,
    /// AI's signal; with --w-ai makes the AI interpretable.
    #[arg(long, requires = "w_ai")]
    x_ai: Option<Signal>,
    #[arg(long, requires = "x_ai")]
    w_ai: Option<Dim>,
}

impl InfoArgs {
    fn info(&self) -> InformationSet {
        match (self.x_ai, self.w_ai) {
            (Some(x_ai), Some(w_ai)) => InformationSet::interpretable(self.x_doc, self.w_doc, self.d, x_ai, w_ai, self.a),
            _ => InformationSet::uninterpretable(self.x_doc, self.w_doc, self.d, self.a),
        }
    }
}

fn parse_bit(s: &str) -> std::result::Result<bool, String> {
    match s {
        "1" | "true" => Ok(true),
        "0" | "false" => Ok(false),
        _ => Err(format!("expected 0 or 1, got {s}")),
    }
}

/// Failure with an exit code already chosen.
struct Exit(u8);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        eprintln!("error: {e}");
        Exit(e.exit_code() as u8)
    }
}

fn grid_of(cli: &Cli, var: GridVar) -> Result<Option<Vec<persuade::Rational>>> {
    match &cli.grid {
        None => Ok(None),
        Some(g) if g.var == var => Ok(Some(g.points())),
        Some(g) => Err(Error::InvalidArgument(format!("this command sweeps {}, not {}", var.name(), g.var.name()))),
    }
}

fn population(loaded: &LoadedParams) -> Result<PopulationParams> {
    let m = &loaded.model;
    match &loaded.p_doc_low {
        Some(low) => PopulationParams::new(m.clone(), low.clone(), loaded.tau.clone().unwrap_or_default()),
        None => career::construct_prop2_params(m.gamma.clone(), m.lambda.clone(), m.pi_doc.clone(), m.pi_ai.clone()),
    }
}

fn run(cli: &Cli) -> std::result::Result<(), Exit> {
    let loaded = match &cli.params {
        Some(path) => sweep::load_params(path)?,
        None => LoadedParams::reference(),
    };
    let p = &loaded.model;
    match &cli.command {
        Command::Thresholds => {
            let grid = cli.grid.clone().unwrap_or_else(sweep::default_thresholds_grid);
            let result = sweep::cmd_thresholds(p, &grid, &cli.out);
            if let Ok(r) = &result {
                if !r.invalid.is_empty() {
                    eprintln!("{} invalid grid points listed in thresholds_invalid.txt", r.invalid.len());
                }
                println!("{} rows written to {}", r.table.rows.len(), r.path.display());
            }
            result?;
        }
        Command::Verify { points } => {
            let grid = match &cli.grid {
                Some(g) => sweep::grid_from_spec(p, g)?,
                None => sweep::default_verify_grid(*points),
            };
            let report = sweep::cmd_verify(&grid, &ClosedForms::default(), &cli.out)?;
            println!("{} points, {} checks, {:.2}s", report.points, report.checks.len(), report.seconds);
            if !report.all_pass {
                for c in report.failures() {
                    eprintln!("FAIL {} at {}: {}", c.name, report.params[c.point], c.detail);
                }
                return Err(Exit(1));
            }
            println!("all checks pass");
        }
        Command::Career => {
            let pp = population(&loaded)?;
            let taus = grid_of(cli, GridVar::Tau)?;
            let run = sweep::cmd_career(&pp, taus.as_deref(), &cli.out)?;
            let d = &run.delta;
            println!("p_ai = {}  p_doc_low = {}", to_fraction_string(&pp.base.p_ai), to_fraction_string(&pp.p_doc_low));
            println!("delta1 = {}  delta2 = {}  delta = {}", d.delta1, d.delta2, d.delta);
            println!("tau_bar = {} ({})", d.tau_bar, to_decimal_string(&d.tau_bar, 12));
        }
        Command::Freeride => {
            let fp = match &cli.params {
                None => FreerideParams::canonical(),
                Some(_) => {
                    let probe = FreerideParams { base: p.clone(), cost: persuade::rational::int(1) };
                    let cost = match &loaded.cost {
                        Some(c) => c.clone(),
                        None => {
                            let (c1, c2) = freeride::cost_interval(&freeride::freeride_deltas(&probe)?)?;
                            (c1 + c2) / persuade::rational::int(2)
                        }
                    };
                    FreerideParams::new(p.clone(), cost)?
                }
            };
            let costs = grid_of(cli, GridVar::Cost)?;
            let run = sweep::cmd_freeride(&fp, costs.as_deref(), &cli.out)?;
            let names: Vec<String> = run.report.deltas.iter().map(to_fraction_string).collect();
            println!("deltas = [{}]", names.join(", "));
            println!("mix12 = {}  mix34 = {}  branch {}", run.report.mix12, run.report.mix34, run.report.branch());
            println!("interval = ({}, {})", run.interval.0, run.interval.1);
        }
        Command::Posterior(args) => {
            let info = args.info();
            let oracle = Oracle::new(p, false)?;
            if !oracle.is_realizable(&info) {
                return Err(Error::Unrealizable(info.to_string()).into());
            }
            let rec = diagnosis::final_diagnosis(p, &info)?;
            let post = oracle.posterior(&info)?;
            println!("{info}");
            println!("posterior = {} ({})", to_fraction_string(&post), to_decimal_string(&post, 12));
            println!("likelihood ratio = {}", rec.ratio);
            println!("final diagnosis = {}", rec.f as u8);
            if rec.ratio.posterior() != post {
                eprintln!("closed form posterior {} disagrees with enumeration", rec.ratio.posterior());
                return Err(Exit(1));
            }
        }
        Command::Attribution(args) => {
            let info = args.info();
            let rec = attribution::decompose(p, &info)?;
            let show = |v: &Option<persuade::Rational>| v.as_ref().map_or("undefined".to_string(), to_fraction_string);
            println!("{info}");
            println!("w_atten = {}  w_comp = {}", rec.w_atten, rec.w_comp);
            println!("posterior | attention = {}", show(&rec.post_atten));
            println!("posterior | comprehension = {}", show(&rec.post_comp));
            println!("posterior = {}", rec.post_total);
            if rec.recombined() != rec.post_total {
                eprintln!("weighted sources {} do not recombine to the posterior", rec.recombined());
                return Err(Exit(1));
            }
        }
        Command::Montecarlo { n } => {
            if *n == 0 {
                return Err(Error::InvalidArgument("n must be positive".into()).into());
            }
            let estimates = sweep::cmd_montecarlo(p, *n, cli.seed, &cli.out)?;
            for e in &estimates {
                let est = e.estimate.map_or("-".into(), |v| format!("{v:.6}"));
                let flag = if e.within_4se { "" } else { "  OUTSIDE 4se" };
                println!("{:<40} {est:>10} exact {:.6} (n={}){flag}", e.name, e.exact_f64, e.n);
            }
            let cover = sweep::coverage(&estimates);
            println!("coverage {:.1}%", 100.0 * cover);
            if cover < 0.99 {
                return Err(Exit(1));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code)) => ExitCode::from(code),
    }
}
