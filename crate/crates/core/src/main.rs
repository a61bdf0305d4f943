use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use mubent::criteria::{FamilyEvaluator, LabelingMode, WitnessOptions};
use mubent::explore::incomplete::default_settings;
use mubent::explore::output::to_json_string;
use mubent::explore::{
    incomplete_scan_default, multi_compare, optimize_extreme, scan_slice, write_csv,
    write_json, Cut, ExplorerConfig, Slice, SubsetPolicy,
};
use mubent::mub::{build_mub, verify_mub};
use mubent::par::Execution;
use mubent::simplex::{family_rho, multipartite_family, FamilyParams};
use mubent::Result;

#[derive(Parser, Debug)]
#[command(name = "mubent", version, about = "MUB witnesses for bound entanglement in the magic simplex")]
struct Cli {
    /// JSON file with tolerances, grid sizes, search box and seed.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Evaluate grid points on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mutually unbiased bases.
    Mub {
        #[command(subcommand)]
        action: MubAction,
    },
    /// Classify a (q1, q2) slice at fixed (q3, q) and write CSV.
    Scan(ScanArgs),
    /// Minimise 2 − I_{d+1} over positive PPT family states.
    Optimize {
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = LabelingMode::Max)]
        labels: LabelingMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verdicts for one family state.
    Classify {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value_t = LabelingMode::Max)]
        labels: LabelingMode,
    },
    /// Search slices for detection by m < d + 1 bases.
    Incomplete {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_enum, default_value_t = SubsetPolicy::First)]
        subsets: SubsetPolicy,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare positivity and PPT of the family with its n-pair lift.
    Multi {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        pairs: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Test every bipartition instead of B1 against the rest.
        #[arg(long)]
        all_cuts: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the density matrix of a family state as JSON.
    State {
        #[command(flatten)]
        point: PointArgs,
        /// Number of pairs; 1 gives the bipartite state.
        #[arg(long, default_value_t = 1)]
        pairs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum MubAction {
    /// Build the bases for dimension d.
    Gen {
        #[arg(long)]
        d: usize,
        /// Check overlaps and print a report.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    d: usize,
    /// Defaults, with --q, to the slice where the complete-set witness is
    /// extreme.
    #[arg(long, requires = "q", allow_hyphen_values = true)]
    q3: Option<f64>,
    #[arg(long, requires = "q3", allow_hyphen_values = true)]
    q: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Also write the records as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, allow_hyphen_values = true)]
    q1: f64,
    #[arg(long, allow_hyphen_values = true)]
    q2: f64,
    #[arg(long, allow_hyphen_values = true)]
    q3: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    q: f64,
}

impl PointArgs {
    fn params(&self) -> FamilyParams {
        FamilyParams::new(self.d, self.q1, self.q2, self.q3, self.q)
    }
}

#[derive(Serialize)]
struct MatrixJson {
    dim: usize,
    /// Row-major `[re, im]` entries.
    entries: Vec<[f64; 2]>,
}

fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => write_json(value, path),
        None => {
            print!("{}", to_json_string(value)?);
            Ok(())
        }
    }
}

fn evaluator(d: usize, labels: LabelingMode, cfg: &ExplorerConfig) -> Result<FamilyEvaluator> {
    let opts = WitnessOptions {
        labels,
        ..WitnessOptions::default()
    };
    FamilyEvaluator::new(&build_mub(d)?, opts, cfg.tol)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = match &cli.config {
        Some(path) => ExplorerConfig::load(path)?,
        None => ExplorerConfig::default(),
    };
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Mub {
            action: MubAction::Gen { d, verify, tol, out },
        } => {
            let set = build_mub(d)?;
            if let Some(path) = &out {
                set.save(path)?;
            }
            if verify {
                let report = verify_mub(&set, tol.unwrap_or(cfg.mub_tol))?;
                print!("{}", to_json_string(&report)?);
                if !report.pass {
                    return Ok(ExitCode::from(2));
                }
            } else if out.is_none() {
                print!("{}", to_json_string(&set.to_json())?);
            }
        }
        Command::Scan(args) => {
            let ev = evaluator(args.d, LabelingMode::Max, &cfg)?;
            let (q3, q) = match (args.q3, args.q) {
                (Some(q3), Some(q)) => (q3, q),
                _ => {
                    let [q3, q] = default_settings(args.d, &cfg, exec)?[1];
                    (q3, q)
                }
            };
            let bx = cfg.search_box(args.d);
            let slice = Slice {
                q3,
                q,
                grid: args.grid.unwrap_or(cfg.grid),
                q1_range: (bx.lo[0], bx.hi[0]),
                q2_range: (bx.lo[1], bx.hi[1]),
            };
            let records = scan_slice(&ev, &slice, exec)?;
            write_csv(&records, &args.out)?;
            if let Some(path) = &args.json {
                write_json(&records, path)?;
            }
            eprintln!(
                "d={} q3={} q={}: {} points, {} bound entangled",
                args.d,
                q3,
                q,
                records.len(),
                records.iter().filter(|r| r.bound_entangled).count()
            );
        }
        Command::Optimize { d, labels, out } => {
            let r = optimize_extreme(d, labels, &cfg, exec)?;
            emit(&r, out.as_ref())?;
        }
        Command::Classify { point, labels } => {
            let ev = evaluator(point.d, labels, &cfg)?;
            emit(&ev.classify_params(&point.params())?, None)?;
        }
        Command::Incomplete {
            d,
            m,
            grid,
            subsets,
            out,
        } => {
            let mut cfg = cfg.clone();
            if let Some(g) = grid {
                cfg.grid = g;
            }
            cfg.validate()?;
            let report = incomplete_scan_default(d, m, subsets, &cfg, exec)?;
            emit(&report, out.as_ref())?;
        }
        Command::Multi {
            d,
            pairs,
            samples,
            all_cuts,
            out,
        } => {
            let cuts = if all_cuts {
                Cut::all(2 * pairs)
            } else {
                vec![Cut::default_for(2 * pairs)?]
            };
            let report = multi_compare(d, pairs, samples, &cuts, cfg.seed, cfg.tol, exec)?;
            emit(&report, out.as_ref())?;
        }
        Command::State { point, pairs, out } => {
            let p = point.params();
            let rho = if pairs == 1 {
                family_rho(&p)
            } else {
                multipartite_family(&p, pairs)?
            };
            let json = MatrixJson {
                dim: rho.dim(),
                entries: rho.as_slice().iter().map(|z| [z.re, z.im]).collect(),
            };
            emit(&json, out.as_ref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
