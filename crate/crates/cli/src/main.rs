//! `opschmidt`: command-line front end for the operator-Schmidt library.
//!
//! Exit status: 0 when every check passed, 2 on a verification failure,
//! 1 on usage or I/O errors.

mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opschmidt::biunimodular::{self, BjorckSaffariSpec, LineFunction};
use opschmidt::catalog::{full_catalog, impossibility_certificates};
use opschmidt::io::read_json;
use opschmidt::qft::{self, QftSpec};
use opschmidt::schmidt::{
    coefficient_deviation, hartley_strength, is_maximally_entangled, schmidt_decompose, schmidt_strength,
};
use opschmidt::weyl::{self, GridFunction};
use opschmidt::{magic, verify, BipartiteOperator, Error, DEFAULT_REL_TOL};
use serde_json::{json, Value};

use render::Table;

#[derive(Parser, Debug)]
#[command(name = "opschmidt", version, about = "Operator-Schmidt decompositions and their Fourier-analytic constructions")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Relative rank cutoff for Schmidt coefficients.
    #[arg(long, global = true, env = "OPSCHMIDT_TOL", value_parser = positive_tol, allow_hyphen_values = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn positive_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(format!("tolerance must be positive and finite, got {s}"))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Operator-Schmidt decomposition of a bipartite operator read from JSON.
    Schmidt {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Weyl operators, the 2-D DFT and the diagonal-family decomposition.
    #[command(subcommand)]
    Weyl(WeylCommand),
    /// Unitaries on C³⊗C³ with every Schmidt number 1..9.
    Catalog3 {
        /// Also list the 162 support certificates for Schmidt numbers 2 and 4.
        #[arg(long)]
        certificates: bool,
    },
    /// Biunimodular functions and the maximally entangled unitaries they give.
    #[command(subcommand)]
    Biuni(BiuniCommand),
    /// The generalized quantum Fourier transform.
    Qft(QftArgs),
    /// Randomized checks of the determinant gradient.
    Magic {
        #[arg(long, value_name = "N")]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = verify::ACCEPTANCE_SEED)]
        seed: u64,
    },
    /// Run the acceptance suite.
    VerifyAll {
        /// Run a single criterion.
        #[arg(long, value_name = "ID")]
        only: Option<u8>,
        /// Show wall-clock time per criterion (text format only).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand, Debug)]
enum WeylCommand {
    /// Print the shift R and twist T on C^N.
    Pair {
        #[arg(long)]
        n: usize,
    },
    /// 2-D DFT of a grid function.
    Dft {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Closed-form decomposition of the diagonal operator of λ, checked
    /// against the realignment oracle.
    Decompose {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum BiuniCommand {
    /// Gaussian on Z_N (a, b ignored for even N).
    Gaussian {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        b: i64,
    },
    /// Björck–Saffari function, either canonical for N or from a spec file.
    BjorckSaffari {
        #[arg(long, required_unless_present = "spec", conflicts_with = "spec")]
        n: Option<usize>,
        /// Permutation τ, comma separated.
        #[arg(long, value_delimiter = ',', requires = "n")]
        tau: Option<Vec<usize>>,
        /// Exponent l of ρ = e^{2πil/m}.
        #[arg(long, requires = "n")]
        l: Option<i64>,
        /// JSON spec {"N", "tau", "c", "l", "case"}.
        #[arg(long, value_name = "FILE")]
        spec: Option<PathBuf>,
    },
    /// Test a line or grid function from file for biunimodularity.
    Verify {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = biunimodular::BIUNIMODULAR_TOL, value_parser = positive_tol)]
        tolerance: f64,
    },
    /// Lift f ⊗ g to a diagonal unitary and decompose it.
    Lift {
        #[arg(long, value_name = "FILE")]
        f: PathBuf,
        #[arg(long, value_name = "FILE")]
        g: PathBuf,
    },
}

#[derive(Args, Debug)]
struct QftArgs {
    /// M1 M2 N1 N2.
    #[arg(long, num_args = 4, value_names = ["M1", "M2", "N1", "N2"], required_unless_present = "sweep", conflicts_with = "sweep")]
    dims: Option<Vec<usize>>,
    /// List the equivalence classes.
    #[arg(long)]
    classes: bool,
    /// Closed-form decomposition, checked against the oracle.
    #[arg(long)]
    decompose: bool,
    /// Communication-cost bounds.
    #[arg(long)]
    bounds: bool,
    /// Check every factorization M1·M2 = N1·N2 = N.
    #[arg(long, value_name = "N")]
    sweep: Option<usize>,
}

/// What a command produced: a JSON value, its text rendering, and whether
/// every check in it passed.
struct Output {
    json: Value,
    text: String,
    passed: bool,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, passed: true }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Error> {
    Ok(serde_json::to_value(v)?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let tol = cli.tol.unwrap_or(DEFAULT_REL_TOL);
    match run(&cli.command, tol) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
                Format::Text => out.text,
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Verification(_) | Error::CertificationFailure(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(command: &Command, tol: f64) -> Result<Output, Error> {
    match command {
        Command::Schmidt { input } => schmidt(input, tol),
        Command::Weyl(w) => weyl_cmd(w, tol),
        Command::Catalog3 { certificates } => catalog3(*certificates, tol),
        Command::Biuni(b) => biuni(b, tol),
        Command::Qft(q) => qft_cmd(q, tol),
        Command::Magic { dim, trials, seed } => {
            let report = magic::check_properties(*dim, *trials, *seed)?;
            let mut t = Table::new(&["property", "passed", "max residual", "tolerance", "samples", "name"]);
            for p in &report.properties {
                t.row(vec![
                    p.id.clone(),
                    p.passed.to_string(),
                    render::sci(p.max_residual),
                    render::sci(p.tolerance),
                    p.samples.to_string(),
                    p.name.clone(),
                ]);
            }
            let text = format!("N = {}, trials = {}, seed = {}\n{}", report.n, report.trials, report.seed, t.render());
            Ok(Output { json: to_value(&report)?, text, passed: report.passed() })
        }
        Command::VerifyAll { only, timings } => {
            let reports = match only {
                Some(id) => vec![verify::run_one(*id, tol)?],
                None => verify::run_all(tol),
            };
            let passed = reports.iter().all(|r| r.passed);
            let mut text = String::new();
            for r in &reports {
                text.push_str(&r.line());
                if *timings {
                    text.push_str(&format!(" [{:.0} ms]", r.elapsed_ms));
                }
                text.push('\n');
            }
            let count = reports.iter().filter(|r| r.passed).count();
            text.push_str(&format!("{count}/{} criteria passed\n", reports.len()));
            Ok(Output { json: json!({ "passed": passed, "criteria": to_value(&reports)? }), text, passed })
        }
    }
}

fn schmidt(input: &PathBuf, tol: f64) -> Result<Output, Error> {
    let op: BipartiteOperator = read_json(input)?;
    let d = schmidt_decompose(&op, tol)?;
    let text = format!(
        "dims {:?}\nSchmidt number {}\ncoefficients {}\nHartley strength {}\nSchmidt strength {}\nmaximally entangled {}\n",
        op.shape().dims(),
        d.len(),
        render::list(d.coefficients()),
        render::num(hartley_strength(&d)),
        render::num(schmidt_strength(&d)),
        is_maximally_entangled(&d, tol),
    );
    Ok(Output::ok(to_value(&d)?, text))
}

fn weyl_cmd(cmd: &WeylCommand, tol: f64) -> Result<Output, Error> {
    match cmd {
        WeylCommand::Pair { n } => {
            let p = weyl::weyl_pair(*n)?;
            let text = format!("R =\n{}T =\n{}", render::matrix(&p.shift), render::matrix(&p.twist));
            Ok(Output::ok(json!({ "N": n, "R": to_value(&p.shift)?, "T": to_value(&p.twist)? }), text))
        }
        WeylCommand::Dft { input } => {
            let lambda: GridFunction = read_json(input)?;
            let hat = weyl::dft2(&lambda);
            Ok(Output::ok(to_value(&hat)?, render::grid(&hat)))
        }
        WeylCommand::Decompose { input } => {
            let lambda: GridFunction = read_json(input)?;
            let analytic = weyl::analytic_schmidt(&lambda, tol)?;
            let op = weyl::diag_from_lambda(&lambda);
            let oracle = schmidt_decompose(&op, tol)?;
            let deviation = coefficient_deviation(analytic.coefficients(), oracle.coefficients());
            let residual = analytic.reconstruction_residual(&op);
            let passed = deviation.is_some_and(|d| d <= 1e-9) && residual <= 1e-9;
            let text = format!(
                "Schmidt number {} (oracle {})\ncoefficients {}\noracle deviation {}\nreconstruction residual {}\n",
                analytic.len(),
                oracle.len(),
                render::list(analytic.coefficients()),
                deviation.map_or("term counts differ".into(), render::sci),
                render::sci(residual),
            );
            let json = json!({
                "decomposition": to_value(&analytic)?,
                "oracle_coefficients": oracle.coefficients(),
                "oracle_deviation": deviation,
                "reconstruction_residual": residual,
                "passed": passed,
            });
            Ok(Output { json, text, passed })
        }
    }
}

fn catalog3(certificates: bool, tol: f64) -> Result<Output, Error> {
    let entries = full_catalog(tol)?;
    let mut t = Table::new(&["S", "construction", "coefficients", "unitarity residual", "max entangled"]);
    for e in &entries {
        t.row(vec![
            e.s.to_string(),
            to_value(&e.construction)?.as_str().unwrap_or_default().to_string(),
            render::list(&e.coefficients),
            render::sci(e.unitarity_residual),
            e.maximally_entangled.to_string(),
        ]);
    }
    let mut text = t.render();
    let mut json = json!({ "entries": to_value(&entries)? });
    if certificates {
        let certs = impossibility_certificates()?;
        let mut t = Table::new(&["P", "v", "x"]);
        for c in &certs {
            t.row(vec![format!("{:?}", c.p), format!("{:?}", c.v), format!("{:?}", c.x)]);
        }
        text.push_str(&format!("\n{} certificates\n{}", certs.len(), t.render()));
        json["certificates"] = to_value(&certs)?;
    }
    Ok(Output::ok(json, text))
}

fn read_function(input: &PathBuf) -> Result<Result<LineFunction, GridFunction>, Error> {
    let value: Value = read_json(input)?;
    let line = serde_json::from_value::<LineFunction>(value.clone());
    match line {
        Ok(f) => Ok(Ok(f)),
        Err(line_err) => match serde_json::from_value::<GridFunction>(value) {
            Ok(g) => Ok(Err(g)),
            Err(_) => Err(Error::Parse(line_err)),
        },
    }
}

fn biuni(cmd: &BiuniCommand, tol: f64) -> Result<Output, Error> {
    let line_output = |f: &LineFunction, spec: Value| -> Result<Output, Error> {
        let ok = biunimodular::is_biunimodular(f, biunimodular::BIUNIMODULAR_TOL);
        let text = format!("{}biunimodular {ok}\n", render::line(f));
        let json = json!({ "function": to_value(f)?, "parameters": spec, "biunimodular": ok });
        Ok(Output { json, text, passed: ok })
    };
    match cmd {
        BiuniCommand::Gaussian { n, a, b } => {
            let f = biunimodular::gaussian(*n, *a, *b)?;
            line_output(&f, json!({ "family": "gaussian", "N": n, "a": a, "b": b }))
        }
        BiuniCommand::BjorckSaffari { n, tau, l, spec } => {
            let spec = match (spec, n) {
                (Some(path), _) => read_json::<BjorckSaffariSpec>(path)?,
                (None, Some(n)) => {
                    let mut s = BjorckSaffariSpec::canonical(*n);
                    if let Some(tau) = tau {
                        s.tau = tau.clone();
                    }
                    if let Some(l) = l {
                        s.rho_exponent = *l;
                    }
                    s
                }
                (None, None) => unreachable!("clap requires one of --n, --spec"),
            };
            let f = biunimodular::bjorck_saffari(&spec)?;
            line_output(&f, to_value(&spec)?)
        }
        BiuniCommand::Verify { input, tolerance } => {
            let (ok, n, kind) = match read_function(input)? {
                Ok(f) => (biunimodular::is_biunimodular(&f, *tolerance), f.n(), "line"),
                Err(g) => (biunimodular::is_biunimodular(&g, *tolerance), g.n(), "grid"),
            };
            let text = format!("{kind} function on Z_{n}: biunimodular {ok}\n");
            Ok(Output { json: json!({ "kind": kind, "N": n, "biunimodular": ok }), text, passed: ok })
        }
        BiuniCommand::Lift { f, g } => {
            let f: LineFunction = read_json(f)?;
            let g: LineFunction = read_json(g)?;
            let u = biunimodular::max_entangled_unitary(&f, &g)?;
            let d = schmidt_decompose(&u, tol)?;
            let me = is_maximally_entangled(&d, tol);
            let residual = u.matrix().unitarity_residual();
            let passed = me && residual <= 1e-10;
            let text = format!(
                "Schmidt number {}\ncoefficients {}\nunitarity residual {}\nmaximally entangled {me}\n",
                d.len(),
                render::list(d.coefficients()),
                render::sci(residual),
            );
            let json = json!({
                "coefficients": d.coefficients(),
                "unitarity_residual": residual,
                "maximally_entangled": me,
                "operator": to_value(&u)?,
            });
            Ok(Output { json, text, passed })
        }
    }
}

fn qft_cmd(args: &QftArgs, tol: f64) -> Result<Output, Error> {
    if let Some(n) = args.sweep {
        if n == 0 {
            return Err(Error::Domain("sweep needs N ≥ 1".into()));
        }
        let mut t = Table::new(&["M1", "M2", "N1", "N2", "classes", "Sch", "oracle", "deviation", "max ent", "oracle ME", "bits", "passed"]);
        let mut checks = vec![];
        for spec in qft::factorizations(n) {
            let c = qft::check_spec(&spec, tol)?;
            t.row(vec![
                spec.m1.to_string(),
                spec.m2.to_string(),
                spec.n1.to_string(),
                spec.n2.to_string(),
                c.class_count.to_string(),
                c.schmidt_number.to_string(),
                c.oracle_rank.to_string(),
                c.coefficient_deviation.map_or("-".into(), render::sci),
                c.predicate.to_string(),
                c.oracle_max_entangled.to_string(),
                render::num(c.bounds.lower),
                c.passed(1e-9).to_string(),
            ]);
            checks.push(c);
        }
        let passed = checks.iter().all(|c| c.passed(1e-9));
        let json = json!({ "N": n, "passed": passed, "specs": to_value(&checks)? });
        return Ok(Output { json, text: t.render(), passed });
    }
    let dims = args.dims.as_deref().expect("clap requires --dims without --sweep");
    let spec = QftSpec::new(dims[0], dims[1], dims[2], dims[3])?;
    let sch = qft::qft_schmidt_number(&spec)?;
    let me = qft::qft_is_max_entangled(&spec)?;
    let values = qft::qft_coefficient_values(&spec)?;
    let mut text = format!(
        "F_{{{}{}→{}{}}}: N = {}, Schmidt number {sch}, maximally entangled {me}\n",
        spec.m1,
        spec.m2,
        spec.n1,
        spec.n2,
        spec.size()
    );
    for v in &values {
        text.push_str(&format!("  coefficient {} (class size {}) × {}\n", render::num(v.value), v.cardinality, v.multiplicity));
    }
    let mut json = json!({
        "spec": to_value(&spec)?,
        "schmidt_number": sch,
        "maximally_entangled": me,
        "coefficient_values": to_value(&values)?,
    });
    let mut passed = true;
    if args.classes {
        let classes = qft::equiv_classes(&spec)?;
        let mut t = Table::new(&["base", "cardinality", "members"]);
        for c in &classes {
            t.row(vec![format!("{:?}", c.base), c.cardinality.to_string(), format!("{:?}", c.members)]);
        }
        text.push_str(&format!("{} classes\n{}", classes.len(), t.render()));
        json["classes"] = to_value(&classes)?;
    }
    if args.decompose {
        let check = qft::check_spec(&spec, tol)?;
        let d = qft::qft_analytic_schmidt(&spec)?;
        passed &= check.passed(1e-9);
        text.push_str(&format!(
            "coefficients {}\noracle deviation {}\nreconstruction residual {}\n",
            render::list(d.coefficients()),
            check.coefficient_deviation.map_or("term counts differ".into(), render::sci),
            render::sci(check.reconstruction_residual),
        ));
        json["decomposition"] = to_value(&d)?;
        json["check"] = to_value(&check)?;
    }
    if args.bounds {
        let b = qft::comm_cost_bounds(&spec, tol)?;
        passed &= b.maximal;
        text.push_str(&format!("communication cost in [{}, {}] qubits, maximal {}\n", render::num(b.lower), render::num(b.upper), b.maximal));
        json["bounds"] = to_value(&b)?;
    }
    Ok(Output { json, text, passed })
}
