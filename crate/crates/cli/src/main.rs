//! `cicert`: bound reports, single-system certification, censuses, pattern
//! landscapes, Chow-ring checks and oracle cross-checks.
//!
//! Exit status: 0 on success, 1 on usage or I/O errors, 2 when a run
//! produces a violated verdict.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cicert_core::bounds::{bounds_report, pattern_landscape, BoundsReport, PatternLandscape};
use cicert_core::census::{
    monte_carlo_trials, run_census, CensusParams, CensusReport, Mode, OracleReport, DEFAULT_EXHAUSTIVE_CAP,
    DEFAULT_SEARCH_CAP, SCHEMA_VERSION,
};
use cicert_core::chow::{chow_table, ChowTable};
use cicert_core::homopoly::parse_system_file;
use cicert_core::macaulay::{certify_verdict, EmptinessVerdict};
use cicert_core::{Certificate, DegreePattern, Field, PolySystem};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "cicert",
    version,
    about = "Complete-intersection certificates over finite fields"
)]
struct Cli {
    /// Directory for JSON and CSV artifacts.
    #[arg(long, global = true, env = "CICERT_OUT_DIR")]
    out: Option<PathBuf>,
    /// Worker threads for census subcommands [default: all cores].
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print CSV instead of JSON on stdout.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
struct CertList(Vec<Certificate>);

fn parse_certs(s: &str) -> Result<CertList, String> {
    Certificate::parse_list(s).map(CertList).map_err(|e| e.to_string())
}

#[derive(Debug, Args, Serialize)]
struct PatternArgs {
    /// Projective dimension of the ambient space.
    #[arg(long)]
    n: usize,
    /// Number of forms.
    #[arg(long)]
    s: usize,
    /// Degrees, comma separated, nonincreasing.
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<u32>,
}

impl PatternArgs {
    fn pattern(&self) -> cicert_core::Result<DegreePattern> {
        if self.d.len() != self.s {
            return Err(cicert_core::Error::PatternViolation(format!(
                "--s {} but {} degrees given",
                self.s,
                self.d.len()
            )));
        }
        DegreePattern::new(self.n, self.d.clone())
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Degree and probability bounds for a pattern.
    Bounds {
        #[command(flatten)]
        #[serde(flatten)]
        pattern: PatternArgs,
        /// Field size for probability bounds.
        #[arg(long)]
        q: Option<u64>,
    },
    /// Run certificates on a system file.
    Test {
        /// `p` or `p^k`; must match the file's field line.
        #[arg(long)]
        field: String,
        #[arg(long)]
        system: PathBuf,
        /// stci, ci, nons, irr, a comma list, or all.
        #[arg(long, default_value = "all", value_parser = parse_certs)]
        cert: CertList,
    },
    /// Monte Carlo census over random systems.
    Sample {
        #[command(flatten)]
        #[serde(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "all", value_parser = parse_certs)]
        cert: CertList,
        /// Count F_q-points of ci-certified systems.
        #[arg(long)]
        points: bool,
        /// Write per-trial records as JSON lines to this file.
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Exact census over every system up to scaling.
    Exhaustive {
        #[command(flatten)]
        #[serde(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "all", value_parser = parse_certs)]
        cert: CertList,
        /// Largest number of systems to enumerate.
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
        cap: u64,
        /// Count F_q-points of ci-certified systems.
        #[arg(long)]
        points: bool,
    },
    /// All degree patterns with a given Bezout number.
    Patterns {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
    },
    /// Chow-ring coefficients next to their closed forms.
    Chow {
        #[command(flatten)]
        #[serde(flatten)]
        pattern: PatternArgs,
        /// nons, irr or both.
        #[arg(long, default_value = "nons,irr", value_parser = parse_certs)]
        cert: CertList,
    },
    /// Macaulay test against brute-force point search.
    OracleCheck {
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Largest point search per instance.
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bounds { .. } => "bounds",
            Command::Test { .. } => "test",
            Command::Sample { .. } => "sample",
            Command::Exhaustive { .. } => "exhaustive",
            Command::Patterns { .. } => "patterns",
            Command::Chow { .. } => "chow",
            Command::OracleCheck { .. } => "oracle-check",
        }
    }
}

#[derive(Debug, Serialize)]
struct CertOutcome {
    cert: Certificate,
    pass: bool,
    /// The guaranteed property on a pass; a failure proves nothing.
    conclusion: String,
    macaulay: EmptinessVerdict,
}

#[derive(Debug, Serialize)]
struct TestReport {
    field: String,
    n: usize,
    s: usize,
    d: Vec<u32>,
    system: String,
    results: Vec<CertOutcome>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum Output {
    Bounds(BoundsReport),
    Test(TestReport),
    Census(CensusReport),
    Patterns(PatternLandscape),
    Chow(Vec<ChowTable>),
    Oracle(OracleReport),
}

impl Output {
    fn violated(&self) -> bool {
        match self {
            Output::Census(r) => r.any_violated(),
            Output::Patterns(l) => !(l.dominance && l.margin_at_least_g),
            Output::Chow(t) => t.iter().any(|t| !t.all_match),
            Output::Oracle(r) => r.disagree > 0,
            Output::Bounds(_) | Output::Test(_) => false,
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        match self {
            Output::Bounds(r) => {
                out.push_str("cert,per_form,concise,macaulay_degree,bound,guard,product,product_guard\n");
                for c in &r.certificates {
                    let (bound, guard, product, pguard) = match &c.probability {
                        Some(p) => (
                            p.concise.exact.clone(),
                            guard_text(p.guard.status),
                            p.product.exact.clone(),
                            guard_text(p.product_guard),
                        ),
                        None => Default::default(),
                    };
                    let _ = writeln!(
                        out,
                        "{},\"{}\",{},{},{bound},{guard},{product},{pguard}",
                        c.cert,
                        c.per_form.join(","),
                        c.concise,
                        c.macaulay_degree
                    );
                }
            }
            Output::Test(r) => {
                out.push_str("cert,pass,degree,rank,cols,conclusion\n");
                for o in &r.results {
                    let m = &o.macaulay;
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},\"{}\"",
                        o.cert, o.pass, m.degree, m.rank, m.cols, o.conclusion
                    );
                }
            }
            Output::Census(r) => out = r.to_csv(),
            Output::Patterns(l) => out = l.to_csv(),
            Output::Chow(tables) => {
                out.push_str("cert,i,coefficient,closed_form,match\n");
                for t in tables {
                    for row in t.rows.iter().chain(std::iter::once(&t.top)) {
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{}",
                            t.cert, row.i, row.coefficient, row.closed_form, row.matches
                        );
                    }
                }
            }
            Output::Oracle(r) => {
                out.push_str("index,system,macaulay_empty,brute\n");
                for d in &r.disagreements {
                    let brute = serde_json::to_string(&d.brute)
                        .expect("serializable")
                        .replace('"', "\"\"");
                    let _ = writeln!(out, "{},\"{}\",{},\"{brute}\"", d.index, d.system, d.macaulay_empty);
                }
            }
        }
        out
    }
}

fn guard_text(g: cicert_core::bounds::Guard) -> String {
    serde_json::to_value(g)
        .expect("serializable")
        .as_str()
        .unwrap_or_default()
        .to_string()
}

#[derive(Serialize)]
struct RunRecord<'a> {
    schema: u32,
    config: &'a Cli,
    result: &'a Output,
    violated: bool,
}

#[derive(Debug)]
enum Failure {
    Core(cicert_core::Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<cicert_core::Error> for Failure {
    fn from(e: cicert_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
            Failure::Usage(msg) => f.write_str(msg),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn census_params(pattern: &PatternArgs, q: u64, certs: &CertList, points: bool) -> Result<CensusParams, Failure> {
    let mut params = CensusParams::new(&pattern.pattern()?, q, certs.0.clone());
    params.count_points = points;
    Ok(params)
}

fn certify_file(field: &str, system: &Path, certs: &[Certificate]) -> Result<TestReport, Failure> {
    let wanted = Field::from_spec(field)?;
    let text = read(system)?;
    let (file_field, nvars, forms) = parse_system_file(&text)?;
    if file_field.characteristic() != wanted.characteristic() || file_field.degree() != wanted.degree() {
        return Err(Failure::Usage(format!(
            "--field {field} does not match the field F_{file_field} declared in {}",
            system.display()
        )));
    }
    if nvars < 2 {
        return Err(Failure::Usage(format!(
            "{}: nvars must be at least 2",
            system.display()
        )));
    }
    let sys = PolySystem::new(nvars - 1, forms)?;
    let mut results = Vec::new();
    for &cert in certs {
        let v = certify_verdict(&sys, cert)?;
        let conclusion = if v.empty {
            cert.guarantee().to_string()
        } else {
            "inconclusive".to_string()
        };
        results.push(CertOutcome {
            cert,
            pass: v.empty,
            conclusion,
            macaulay: v,
        });
    }
    let p = sys.pattern();
    Ok(TestReport {
        field: sys.field().to_string(),
        n: p.n(),
        s: p.s(),
        d: p.degrees().to_vec(),
        system: sys.canonical(),
        results,
    })
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    Ok(match &cli.command {
        Command::Bounds { pattern, q } => Output::Bounds(bounds_report(&pattern.pattern()?, *q)?),
        Command::Test { field, system, cert } => Output::Test(certify_file(field, system, &cert.0)?),
        Command::Sample {
            pattern,
            q,
            trials,
            seed,
            cert,
            points,
            records,
        } => {
            let params = census_params(pattern, *q, cert, *points)?;
            let report = run_census(
                &params,
                Mode::MonteCarlo {
                    trials: *trials,
                    seed: *seed,
                },
            )?;
            if let Some(path) = records {
                let mut text = String::new();
                for r in monte_carlo_trials(&params, *trials, *seed)? {
                    text.push_str(&serde_json::to_string(&r).expect("serializable"));
                    text.push('\n');
                }
                write(path, &text)?;
            }
            Output::Census(report)
        }
        Command::Exhaustive {
            pattern,
            q,
            cert,
            cap,
            points,
        } => {
            let mut params = census_params(pattern, *q, cert, *points)?;
            params.exhaustive_cap = *cap;
            Output::Census(run_census(&params, Mode::Exhaustive)?)
        }
        Command::Patterns { b, n, s } => Output::Patterns(pattern_landscape(*b, *n, *s)?),
        Command::Chow { pattern, cert } => {
            let p = pattern.pattern()?;
            let tables = cert
                .0
                .iter()
                .map(|&c| chow_table(c, &p))
                .collect::<cicert_core::Result<_>>()?;
            Output::Chow(tables)
        }
        Command::OracleCheck { trials, seed, cap } => {
            Output::Oracle(cicert_core::census::oracle_check(*trials, *seed, *cap)?)
        }
    })
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| Failure::Usage(e.to_string()))?;
    let output = pool.install(|| dispatch(cli))?;
    let violated = output.violated();
    let record = RunRecord {
        schema: SCHEMA_VERSION,
        config: cli,
        result: &output,
        violated,
    };
    let json = serde_json::to_string_pretty(&record).expect("serializable");
    let csv = output.csv();
    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Io(dir.clone(), e))?;
        let name = cli.command.name();
        write(&dir.join(format!("{name}.json")), &(json.clone() + "\n"))?;
        write(&dir.join(format!("{name}.csv")), &csv)?;
    }
    if cli.csv {
        print!("{csv}");
    } else {
        println!("{json}");
    }
    Ok(violated)
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
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("cicert: violated verdict");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("cicert: {e}");
            ExitCode::from(1)
        }
    }
}
