use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cubic_euclid::batch::{run_batch, summary_tsv, write_batch, BatchOptions};
use cubic_euclid::catalog::{check_table, report_json, report_text, BUNDLED_TABLE};
use cubic_euclid::certificate::{verify_certificate, Certificate, VerifyOptions};
use cubic_euclid::classnum::{analytic_hr, ClassVerdict};
use cubic_euclid::parse::{format_element, parse_polynomial};
use cubic_euclid::search::{SearchOptions, DEFAULT_Q_MAX};
use cubic_euclid::units::UnitSearch;
use cubic_euclid::verdict::{
    analyze, build_input, verdict_for, FieldInput, PipelineOptions, Verdict,
};
use cubic_euclid::Error;

mod exit;

use exit::Outcome;

#[derive(Parser)]
#[command(
    name = "cubic-euclid",
    version,
    about = "Euclidean certificates for cyclic cubic fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print invariants, units, regulator and class number of a field.
    Field {
        #[command(flatten)]
        input: FieldArgs,
        #[command(flatten)]
        effort: EffortArgs,
        /// Decimal digits for the regulator.
        #[arg(long, default_value_t = 60)]
        precision: u32,
    },
    /// Search for an admissible prime and write a certificate.
    Search {
        #[command(flatten)]
        input: FieldArgs,
        #[command(flatten)]
        effort: EffortArgs,
        #[arg(long, default_value_t = DEFAULT_Q_MAX)]
        qmax: u64,
        /// Certificate path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate from scratch.
    Verify {
        certificate: PathBuf,
        /// Accept the recorded class report digest instead of recomputing h.
        #[arg(long)]
        trust_class_number: bool,
    },
    /// Run the full pipeline over a range of conductors.
    Batch {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = DEFAULT_Q_MAX)]
        qmax: u64,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Directory for summary.tsv, timings.tsv and certificates;
        /// the summary goes to standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every row of a table file (the bundled table by default).
    Table {
        #[arg(long = "table-file", visible_alias = "file")]
        table_file: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_Q_MAX)]
        qmax: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Emit a JSON array instead of text.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FieldArgs {
    #[arg(long)]
    conductor: Option<u64>,
    /// Monic cubic, e.g. "x^3 - x^2 - 24x + 27" or "-1,-24,27".
    #[arg(long)]
    poly: Option<String>,
}

#[derive(Args)]
struct EffortArgs {
    /// Largest log radius scanned for units before giving up.
    #[arg(long, default_value_t = UnitSearch::default().max_radius)]
    unit_radius: f64,
}

impl EffortArgs {
    fn units(&self) -> UnitSearch {
        UnitSearch {
            max_radius: self.unit_radius,
            ..UnitSearch::default()
        }
    }
}

const UNDECIDED_HINT: &str = "hint: raise --unit-radius";

impl FieldArgs {
    fn input(&self) -> Result<FieldInput, Error> {
        match (&self.conductor, &self.poly) {
            (Some(f), _) => Ok(FieldInput::Conductor(*f)),
            (None, Some(p)) => Ok(FieldInput::Polynomial(parse_polynomial(p)?)),
            (None, None) => Err(Error::Internal("no field input".into())),
        }
    }
}

fn fail(e: &Error) -> Outcome {
    eprintln!("error: {e}");
    if matches!(root(e), Error::InsufficientEffort(_)) {
        eprintln!("{UNDECIDED_HINT}");
    }
    Outcome::for_error(e)
}

fn root(e: &Error) -> &Error {
    match e {
        Error::Stage { source, .. } => root(source),
        _ => e,
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => match fs::write(p, text) {
            Ok(()) => Outcome::Ok,
            Err(e) => {
                eprintln!("error: writing {}: {e}", p.display());
                Outcome::Fault
            }
        },
        None => {
            print!("{text}");
            Outcome::Ok
        }
    }
}

fn pool(jobs: usize) -> Option<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .ok()
}

fn cmd_field(input: &FieldArgs, effort: &EffortArgs, precision: u32) -> Outcome {
    let input = match input.input() {
        Ok(i) => i,
        Err(e) => return fail(&e),
    };
    let k = match build_input(&input) {
        Ok(Ok(k)) => k,
        Ok(Err(report)) => {
            println!("conductor\t{}", report.conductor);
            println!("class_number\t{}", report.verdict);
            return Outcome::Ok;
        }
        Err(e) => return fail(&e),
    };
    let opts = PipelineOptions {
        units: effort.units(),
        ..PipelineOptions::default()
    };
    let a = match analyze(k, &opts) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let k = &a.field;
    let mut s = String::new();
    let _ = writeln!(s, "conductor\t{}", k.conductor());
    let _ = writeln!(s, "polynomial\t{}", k.polynomial());
    let _ = writeln!(s, "polynomial_discriminant\t{}", k.poly_discriminant());
    let _ = writeln!(s, "discriminant\t{}", k.discriminant());
    let _ = writeln!(s, "index\t{}", k.index());
    let basis: Vec<String> = k
        .integral_basis_elements()
        .iter()
        .map(format_element)
        .collect();
    let _ = writeln!(s, "integral_basis\t{}", basis.join("; "));
    let [u1, u2] = a.units.units();
    let _ = writeln!(s, "unit_1\t{}", format_element(u1));
    let _ = writeln!(s, "unit_2\t{}", format_element(u2));
    let _ = writeln!(s, "units_fundamental\t{}", a.units.status().as_str());
    match a.units.regulator(k, precision) {
        Ok(r) => {
            let _ = writeln!(s, "regulator\t{}", r.value.to_decimal(precision));
        }
        Err(e) => return fail(&e),
    }
    if let Ok(hr) = analytic_hr(k.conductor()) {
        let _ = writeln!(s, "analytic_hr\t{:.10}", hr.value);
    }
    let _ = writeln!(s, "minkowski_bound\t{}", a.report.minkowski_bound);
    let _ = writeln!(s, "class_number\t{}", a.report.verdict);
    let _ = writeln!(s, "class_report_digest\t{}", a.report.digest());
    print!("{s}");
    match a.report.verdict {
        ClassVerdict::Undecided(_) => {
            eprintln!("{UNDECIDED_HINT}");
            Outcome::Undecided
        }
        _ => Outcome::Ok,
    }
}

fn cmd_search(input: &FieldArgs, effort: &EffortArgs, qmax: u64, out: Option<&Path>) -> Outcome {
    let input = match input.input() {
        Ok(i) => i,
        Err(e) => return fail(&e),
    };
    let opts = PipelineOptions {
        search: SearchOptions {
            q_max: qmax,
            ..SearchOptions::default()
        },
        units: effort.units(),
    };
    let k = match build_input(&input) {
        Ok(Ok(k)) => k,
        Ok(Err(report)) => {
            eprintln!("conductor {}: {}", report.conductor, report.verdict);
            return Outcome::NotClassNumberOne;
        }
        Err(e) => return fail(&e),
    };
    let f = k.conductor();
    let verdict = analyze(k, &opts).and_then(|a| verdict_for(&a, &opts));
    match verdict {
        Ok(Verdict::Euclidean { certificate, .. }) => {
            eprintln!(
                "conductor {f}: Euclidean, admissible prime above q = {}",
                certificate.prime_q
            );
            write_out(out, &certificate.to_json())
        }
        Ok(Verdict::NotClassNumberOne(r)) => {
            eprintln!("conductor {f}: {}", r.verdict);
            Outcome::NotClassNumberOne
        }
        Ok(Verdict::Undecided { reason }) => {
            eprintln!("conductor {f}: {reason}");
            eprintln!("{UNDECIDED_HINT}");
            Outcome::Undecided
        }
        Ok(Verdict::Exhausted { q_max }) => {
            eprintln!("conductor {f}: no admissible prime q <= {q_max}");
            eprintln!("hint: raise --qmax");
            Outcome::Exhausted
        }
        Err(e) => fail(&e),
    }
}

fn cmd_verify(path: &Path, trust: bool) -> Outcome {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: reading {}: {e}", path.display());
            return Outcome::Invalid;
        }
    };
    let text = match String::from_utf8(bytes) {
        Ok(t) => t,
        Err(e) => {
            let at = e.utf8_error().valid_up_to();
            return fail(&Error::Parse {
                offset: at,
                message: "certificate is not UTF-8".into(),
            });
        }
    };
    let cert = match Certificate::from_json(&text) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let opts = VerifyOptions {
        trust_class_number: trust,
        ..VerifyOptions::default()
    };
    let report = verify_certificate(&cert, &opts);
    print!("{}", report.to_text());
    if report.passed() {
        Outcome::Ok
    } else {
        Outcome::VerifyFailed
    }
}

fn cmd_batch(from: u64, to: u64, qmax: u64, jobs: usize, out: Option<&Path>) -> Outcome {
    let opts = BatchOptions {
        from,
        to,
        jobs,
        pipeline: PipelineOptions {
            search: SearchOptions {
                q_max: qmax,
                ..SearchOptions::default()
            },
            ..PipelineOptions::default()
        },
    };
    let entries = match run_batch(&opts) {
        Ok(e) => e,
        Err(e) => return fail(&e),
    };
    let euclid = entries.iter().filter(|e| e.verdict == "euclidean").count();
    eprintln!(
        "{} candidate conductors in [{from}, {to}], {euclid} Euclidean",
        entries.len()
    );
    let faults = entries.iter().filter(|e| e.verdict == "error").count();
    let written = match out {
        Some(dir) => match write_batch(&entries, dir) {
            Ok(()) => Outcome::Ok,
            Err(e) => {
                eprintln!("error: writing {}: {e}", dir.display());
                Outcome::Fault
            }
        },
        None => write_out(None, &summary_tsv(&entries)),
    };
    if faults > 0 {
        eprintln!("{faults} conductors failed with internal errors");
        return Outcome::Fault;
    }
    written
}

fn cmd_table(
    file: Option<&Path>,
    qmax: u64,
    jobs: usize,
    json: bool,
    out: Option<&Path>,
) -> Outcome {
    let text = match file {
        Some(p) => match fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: reading {}: {e}", p.display());
                return Outcome::Invalid;
            }
        },
        None => BUNDLED_TABLE.to_string(),
    };
    let opts = PipelineOptions {
        search: SearchOptions {
            q_max: qmax,
            ..SearchOptions::default()
        },
        ..PipelineOptions::default()
    };
    let rows = match pool(jobs) {
        Some(p) => p.install(|| check_table(&text, &opts)),
        None => return Outcome::Fault,
    };
    let passed = rows.iter().filter(|r| r.passed).count();
    eprintln!("{passed}/{} rows pass", rows.len());
    let body = if json {
        report_json(&rows)
    } else {
        report_text(&rows)
    };
    write_out(out, &body)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Outcome::Invalid.into()
            } else {
                Outcome::Ok.into()
            };
        }
    };
    let outcome = match &cli.command {
        Command::Field {
            input,
            effort,
            precision,
        } => cmd_field(input, effort, *precision),
        Command::Search {
            input,
            effort,
            qmax,
            out,
        } => cmd_search(input, effort, *qmax, out.as_deref()),
        Command::Verify {
            certificate,
            trust_class_number,
        } => cmd_verify(certificate, *trust_class_number),
        Command::Batch {
            from,
            to,
            qmax,
            jobs,
            out,
        } => cmd_batch(*from, *to, *qmax, *jobs, out.as_deref()),
        Command::Table {
            table_file,
            qmax,
            jobs,
            json,
            out,
        } => cmd_table(table_file.as_deref(), *qmax, *jobs, *json, out.as_deref()),
    };
    outcome.into()
}
