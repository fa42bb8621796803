use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use hyperrun::engine::{self, Engine};
use hyperrun::reliability::{parse_rational, reliability_poly, CountTable};
use hyperrun::tight::check_conjecture;
use hyperrun::verify::{self, Grid, Theorem};
use hyperrun::{ConjectureReport, Counter, Error, Family, Oracle, StructureSpec, TableDocument};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hyperrun",
    version,
    about = "Count colorings of hypergraph paths and cycles that avoid a blue run"
)]
struct Cli {
    /// Oracle vertex budget (overrides HYPERRUN_ORACLE_BUDGET).
    #[arg(long, global = true)]
    budget: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one count.
    Count {
        #[command(flatten)]
        structure: StructureArgs,
        /// Number of blue vertices, or `sum` for the total over all j.
        #[arg(long, allow_hyphen_values = true)]
        j: String,
        #[arg(long, value_enum, default_value_t = EngineArg::Formula)]
        engine: EngineArg,
    },
    /// Emit the full table over j.
    Table {
        #[command(flatten)]
        structure: StructureArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum, default_value_t = EngineArg::Formula)]
        engine: EngineArg,
    },
    /// Evaluate the survival polynomial.
    Reliability {
        #[command(flatten)]
        structure: StructureArgs,
        /// Failure probability per vertex: `a/b`, an integer, or a decimal.
        #[arg(long, required_unless_present = "sweep", allow_hyphen_values = true)]
        p: Option<String>,
        /// Print CSV rows `p,R(p)` on an even grid instead.
        #[arg(long)]
        sweep: bool,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = EngineArg::Formula)]
        engine: EngineArg,
    },
    /// Compare formulas against exhaustive enumeration.
    Verify {
        /// Theorem identifier; repeatable. Defaults to every non-suspect one.
        #[arg(long)]
        theorem: Vec<String>,
        #[arg(long, default_value = "small")]
        grid: String,
        /// Uniformities, e.g. `2-5` or `2,3`.
        #[arg(long, allow_hyphen_values = true)]
        r: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the overlap monotonicity chain on m-tight paths.
    Conjecture {
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct StructureArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Overlap between consecutive edges (m-tight-path only).
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    LoosePath,
    LooseCycle,
    TightPath,
    TightCycle,
    MTightPath,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::LoosePath => Family::LoosePath,
            FamilyArg::LooseCycle => Family::LooseCycle,
            FamilyArg::TightPath => Family::TightPath,
            FamilyArg::TightCycle => Family::TightCycle,
            FamilyArg::MTightPath => Family::MTightPath,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Formula,
    Oracle,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Formula => Engine::Formula,
            EngineArg::Oracle => Engine::Oracle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Lib(Error),
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type CliResult<T> = Result<T, Failure>;

impl StructureArgs {
    fn spec(&self) -> CliResult<StructureSpec> {
        Ok(StructureSpec::new(
            self.family.into(),
            self.r,
            self.n,
            self.m,
        )?)
    }
}

/// Parses `3`, `2-5` (inclusive; empty if reversed) or `2,3,7`.
fn parse_list(s: &str) -> CliResult<Vec<usize>> {
    let bad = || Failure::Usage(format!("bad range `{s}`: use `a`, `a-b` or `a,b,c`"));
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((a, b)) = s.split_once('-') {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect()
}

fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
        }
    }
    Ok(())
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn table_for(
    counter: &Counter,
    structure: &StructureArgs,
    engine: EngineArg,
) -> CliResult<(StructureSpec, engine::Tabulated)> {
    let spec = structure.spec()?;
    let tab = engine::table(counter, spec, structure.k, engine.into())?;
    Ok((spec, tab))
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let oracle = match cli.budget {
        Some(b) => Oracle::with_budget(b),
        None => Oracle::from_env(),
    };
    let counter = Counter::with_oracle(oracle);
    match cli.command {
        Command::Count {
            structure,
            j,
            engine,
        } => {
            let spec = structure.spec()?;
            let value = if j == "sum" {
                let tab = engine::table(&counter, spec, structure.k, engine.into())?;
                tab.counts.iter().sum::<BigUint>()
            } else {
                let j: i64 = j.parse().map_err(|_| {
                    Failure::Usage(format!("--j must be an integer or `sum`, got `{j}`"))
                })?;
                engine::count(&counter, spec, structure.k, j, engine.into())?.value
            };
            emit(None, &value.to_string())?;
        }
        Command::Table {
            structure,
            format,
            engine,
        } => {
            let (spec, tab) = table_for(&counter, &structure, engine)?;
            let doc = TableDocument::new(spec, structure.k, engine.into(), &tab.counts, tab.notes);
            match format {
                Format::Json => emit(None, &doc.to_json())?,
                Format::Csv => emit(None, doc.to_csv().trim_end())?,
            }
        }
        Command::Reliability {
            structure,
            p,
            sweep,
            steps,
            engine,
        } => {
            let (spec, tab) = table_for(&counter, &structure, engine)?;
            let poly = reliability_poly(&CountTable::new(tab.counts), spec.vertex_count());
            if sweep {
                if steps == 0 {
                    return Err(Failure::Usage("--steps must be positive".into()));
                }
                let mut lines = vec!["p,R".to_string()];
                for i in 0..=steps {
                    let p = i as f64 / steps as f64;
                    lines.push(format!("{p},{}", poly.eval_f64(p)?));
                }
                emit(None, &lines.join("\n"))?;
            } else {
                let p = p.expect("clap requires --p without --sweep");
                let exact_input = !p.contains('.');
                let q = parse_rational(&p)
                    .ok_or_else(|| Failure::Usage(format!("cannot parse probability `{p}`")))?;
                if exact_input {
                    emit(None, &fmt_rational(&poly.eval_exact(&q)?))?;
                } else {
                    let x = q.to_f64().unwrap_or(f64::NAN);
                    emit(None, &poly.eval_f64(x)?.to_string())?;
                }
            }
        }
        Command::Verify {
            theorem,
            grid,
            r,
            n,
            k,
            out,
        } => {
            let theorems = if theorem.is_empty() {
                Theorem::defaults()
            } else {
                theorem
                    .iter()
                    .map(|t| Theorem::from_id(t))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let mut g = Grid::preset(&grid)?;
            if r.is_some() || n.is_some() || k.is_some() {
                g.preset = None;
            }
            if let Some(r) = r {
                g.r = parse_list(&r)?;
            }
            if let Some(n) = n {
                g.n = parse_list(&n)?;
            }
            if let Some(k) = k {
                g.k = parse_list(&k)?;
            }
            let report = verify::run(&counter, &theorems, &g);
            emit(out.as_ref(), &report.to_json())?;
            let s = &report.summary;
            eprintln!(
                "verified {} instance(s): {} mismatch(es), {} skipped",
                s.total, s.mismatches, s.skipped
            );
            if !report.all_matched() {
                return Ok(ExitCode::from(EXIT_MISMATCH));
            }
        }
        Command::Conjecture { r, n, k, out } => {
            let (rs, ns, ks) = (parse_list(&r)?, parse_list(&n)?, parse_list(&k)?);
            let mut reports = Vec::new();
            for &r in &rs {
                for &n in &ns {
                    for &k in &ks {
                        let report = match check_conjecture(&counter, r, n, k) {
                            Ok(rep) => rep,
                            Err(e @ Error::BudgetExceeded { .. }) => ConjectureReport {
                                r,
                                n,
                                k,
                                vertex_counts: vec![],
                                rows: vec![],
                                violations: vec![],
                                skipped: Some(e.to_string()),
                            },
                            Err(e) => return Err(e.into()),
                        };
                        reports.push(report);
                    }
                }
            }
            let violations: usize = reports.iter().map(|r| r.violations.len()).sum();
            let skipped = reports.iter().filter(|r| r.skipped.is_some()).count();
            for rep in reports.iter().filter(|r| !r.violations.is_empty()) {
                for v in &rep.violations {
                    eprintln!(
                        "VIOLATION r={} n={} k={} j={} m={}: {} <= {} <= {} fails",
                        rep.r, rep.n, rep.k, v.j, v.m, v.tight, v.value, v.loose
                    );
                }
            }
            eprintln!(
                "checked {} instance(s): {violations} violation(s), {skipped} skipped",
                reports.len() - skipped
            );
            #[derive(Serialize)]
            struct Sweep {
                reports: Vec<ConjectureReport>,
                violations: usize,
                skipped: usize,
            }
            let doc = Sweep {
                reports,
                violations,
                skipped,
            };
            emit(
                out.as_ref(),
                &serde_json::to_string_pretty(&doc).expect("serializable"),
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Lib(e @ Error::BudgetExceeded { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_BUDGET)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
