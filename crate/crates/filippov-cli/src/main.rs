//! Command line front end. Exit codes are a contract: 0 unique/success,
//! 2 non-unique, 3 inconclusive, 1 operational error.

mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use filippov::dsl::parse_field;
use filippov::envelope::envelope;
use filippov::field::build_field;
use filippov::uniqueness::NonUniquenessCause;
use filippov::{
    classical_select, reachable_funnel, solve_classical, solve_filippov, uniqueness_verdict,
    validate_trajectory, witnesses_condition_a_many, witnesses_condition_b, zero_set, Field,
    FlowError, Trajectory, Window,
};
use filippov::uniqueness::UniquenessStatus;

const EXIT_NONUNIQUE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "filippov",
    version,
    about = "Analyze and solve dX/dt = b(X) for scalar fields with jumps"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Field description file
    field: PathBuf,
    /// Bounded analysis window: lower edge then upper edge
    #[arg(long, num_args = 2, required = true, value_names = ["A", "B"], allow_negative_numbers = true)]
    window: Vec<f64>,
    /// Write output here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify uniqueness and emit the verdict document
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Integrate the flow from x0 on an output grid
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        /// Output sample spacing; defaults to t-end / 100
        #[arg(long)]
        dt_out: Option<f64>,
        /// Integrate the single-valued classical selection instead
        #[arg(long)]
        classical: bool,
        /// Integrate the maximal-delay solution even without a Unique verdict
        #[arg(long, conflicts_with = "classical")]
        force: bool,
        /// csv emits t,x rows (events go to a sidecar next to --out);
        /// json emits one document with samples and events
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Emit distinct solutions witnessing a non-unique verdict
    Witness {
        #[command(flatten)]
        common: Common,
        /// Starting point; defaults to where the verdict fails
        #[arg(long, allow_negative_numbers = true)]
        x0: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        /// Output sample spacing; defaults to t-end / 100
        #[arg(long)]
        dt_out: Option<f64>,
        /// How many witnesses to emit
        #[arg(long, default_value_t = 3)]
        count: usize,
        /// Every witness is checked against the inclusion at this tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Sample the velocity envelope as x,m,M rows
    Envelope {
        #[command(flatten)]
        common: Common,
        /// Uniform sample count; breakpoints are always added as rows
        #[arg(long, default_value_t = 101)]
        count: usize,
    },
    /// Propagate the interval over-approximation of the reachable set
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        /// Funnel time step; defaults to t-end / 1000
        #[arg(long)]
        oracle_dt: Option<f64>,
        /// Spatial inflation of envelope lookups; defaults to the time step
        #[arg(long)]
        oracle_dx: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load(common: &Common) -> Result<Field, String> {
    let w = &common.window;
    if w.len() != 2 || !w[0].is_finite() || !w[1].is_finite() || w[0] >= w[1] {
        return Err("window must be two finite reals, lower edge first".into());
    }
    let src = fs::read_to_string(&common.field)
        .map_err(|e| format!("{}: {e}", common.field.display()))?;
    let spec = parse_field(&src).map_err(|e| e.to_string())?;
    build_field(&spec, Window::new(w[0], w[1])).map_err(|e| e.to_string())
}

fn emit(common: &Common, text: &str) -> Result<(), String> {
    match &common.out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_horizon(t_end: f64) -> Result<(), String> {
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(format!("t-end = {t_end} must be positive"));
    }
    Ok(())
}

fn uniform_grid(t_end: f64, dt_out: Option<f64>) -> Result<Vec<f64>, String> {
    let dt = dt_out.unwrap_or(t_end / 100.0);
    if !dt.is_finite() || dt <= 0.0 {
        return Err(format!("dt-out = {dt} must be positive"));
    }
    let mut grid = Vec::new();
    let mut k = 0u64;
    loop {
        let t = k as f64 * dt;
        if t >= t_end {
            grid.push(t_end);
            return Ok(grid);
        }
        grid.push(t);
        k += 1;
    }
}

fn status_exit(status: UniquenessStatus) -> ExitCode {
    match status {
        UniquenessStatus::Unique => ExitCode::SUCCESS,
        UniquenessStatus::NonUnique => ExitCode::from(EXIT_NONUNIQUE),
        UniquenessStatus::Inconclusive => ExitCode::from(EXIT_INCONCLUSIVE),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("document serializes");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Analyze { common } => {
            let field = load(&common)?;
            let v = uniqueness_verdict(&field);
            let zeros = zero_set(&field);
            emit(&common, &pretty(&report::verdict_document(&v, &zeros)))?;
            Ok(status_exit(v.status))
        }

        Cmd::Solve { common, x0, t_end, dt_out, classical, force, format } => {
            let field = load(&common)?;
            check_horizon(t_end)?;
            let grid = uniform_grid(t_end, dt_out)?;
            let solved = if classical {
                classical_select(&field).and_then(|sf| solve_classical(&sf, x0, t_end, &grid))
            } else {
                solve_filippov(&field, x0, t_end, &grid, force)
            };
            let tr = match solved {
                Ok(tr) => tr,
                Err(FlowError::NotUnique { status }) => {
                    eprintln!("error: {}", FlowError::NotUnique { status });
                    eprintln!(
                        "run `filippov witness` to enumerate distinct solutions, \
                         or pass --classical / --force"
                    );
                    return Ok(status_exit(status));
                }
                Err(e @ FlowError::SelectionUnavailable { .. }) => {
                    eprintln!("error: {e}");
                    eprintln!("the field admits escaping solutions; see `filippov witness`");
                    return Ok(ExitCode::from(EXIT_NONUNIQUE));
                }
                Err(e) => return Err(e.to_string()),
            };
            match format {
                Format::Json => emit(&common, &pretty(&serde_json::json!(tr)))?,
                Format::Csv => {
                    emit(&common, &report::trajectory_csv(&tr))?;
                    if let Some(p) = &common.out {
                        let sidecar = p.with_extension("events.json");
                        fs::write(&sidecar, pretty(&serde_json::json!(tr.events)))
                            .map_err(|e| format!("{}: {e}", sidecar.display()))?;
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Witness { common, x0, t_end, dt_out, count, tol, format } => {
            let field = load(&common)?;
            check_horizon(t_end)?;
            if count == 0 {
                return Err("count must be at least 1".into());
            }
            if !tol.is_finite() || tol <= 0.0 {
                return Err(format!("tol = {tol} must be positive"));
            }
            let grid = uniform_grid(t_end, dt_out)?;
            let v = uniqueness_verdict(&field);
            match v.status {
                UniquenessStatus::Unique => {
                    emit(&common, "no witnesses exist\n")?;
                    return Ok(ExitCode::from(EXIT_NONUNIQUE));
                }
                UniquenessStatus::Inconclusive => {
                    eprintln!("verdict is inconclusive; witnesses cannot be certified");
                    return Ok(ExitCode::from(EXIT_INCONCLUSIVE));
                }
                UniquenessStatus::NonUnique => {}
            }
            let ws: Vec<Trajectory> = match &v.cause {
                Some(NonUniquenessCause::ConditionAFails { .. }) => {
                    witnesses_condition_a_many(&field, x0, count, t_end, &grid)
                        .map_err(|e| e.to_string())?
                }
                Some(NonUniquenessCause::ConditionBFails { point, .. }) => {
                    let z = x0.unwrap_or(*point);
                    let offsets: Vec<f64> =
                        (1..count).map(|k| t_end * k as f64 / count as f64).collect();
                    witnesses_condition_b(&field, z, &offsets, t_end, &grid)
                        .map_err(|e| e.to_string())?
                }
                None => return Err("non-unique verdict carries no cause".into()),
            };
            for (k, w) in ws.iter().enumerate() {
                let rep = validate_trajectory(&field, w, tol).map_err(|e| e.to_string())?;
                if let Some(&(t, gap)) = rep.violations.first() {
                    return Err(format!(
                        "witness {k} violates the inclusion at t = {t} by {gap}"
                    ));
                }
            }
            match format {
                Format::Json => {
                    emit(&common, &pretty(&serde_json::json!({ "witnesses": ws })))?
                }
                Format::Csv => {
                    emit(&common, &report::witness_csv(&ws))?;
                    if let Some(p) = &common.out {
                        let sidecar = p.with_extension("events.json");
                        fs::write(&sidecar, pretty(&report::witness_events(&ws)))
                            .map_err(|e| format!("{}: {e}", sidecar.display()))?;
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Envelope { common, count } => {
            let field = load(&common)?;
            if count < 2 {
                return Err("count must be at least 2".into());
            }
            let win = field.window();
            let mut xs: Vec<f64> = (0..count)
                .map(|i| win.lo + win.width() * i as f64 / (count - 1) as f64)
                .collect();
            xs.extend(field.breakpoints().iter().map(|b| b.x));
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            let rows: Vec<(f64, f64, f64)> = xs
                .iter()
                .filter_map(|&x| envelope(&field, x).map(|e| (x, e.lo, e.hi)))
                .collect();
            emit(&common, &report::envelope_csv(&rows))?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Oracle { common, x0, t_end, oracle_dt, oracle_dx } => {
            let field = load(&common)?;
            check_horizon(t_end)?;
            let dt = oracle_dt.unwrap_or(t_end / 1000.0);
            let dx = oracle_dx.unwrap_or(dt);
            let funnel =
                reachable_funnel(&field, x0, t_end, dt, dx).map_err(|e| e.to_string())?;
            emit(&common, &funnel.to_csv())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
