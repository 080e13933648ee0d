use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use lgmirror::numerics::{
    critical_certificate, newton_multistart, quantum_spectrum, NewtonOptions, CERTIFY_MAX_M,
    SPECTRUM_TOL,
};
use lgmirror::quantum::{flatness_check, q_relation_in, qde_system, w_image, QhRing};
use lgmirror::richardson::verify_phi;
use lgmirror::superpotential::{superpotential, verify_identity, Identity, ModelId};
use lgmirror::symbolic::{FormatStyle, Q};
use lgmirror::{Error, VerdictReport};
use num_complex::Complex64;
use serde_json::{json, Value};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "lgmirror",
    version,
    about = "Landau-Ginzburg mirrors of odd quadrics: exact identities and critical-point certificates"
)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a superpotential.
    Superpotential {
        #[arg(long, value_parser = rank)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Form::Pluecker)]
        form: Form,
        #[arg(long, value_enum, default_value_t = TextFormat::Plain)]
        format: TextFormat,
    },
    /// Run exact verification suites, one JSON verdict per line.
    Verify {
        #[arg(long, value_delimiter = ',', value_parser = rank, required = true)]
        m: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Certify the critical points of the Plücker model against the quantum spectrum.
    Certify {
        #[arg(long, value_parser = rank)]
        m: usize,
        #[arg(long, value_parser = complex, default_value = "1", allow_hyphen_values = true)]
        q: Complex64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Include wall time in the verdict.
        #[arg(long)]
        timing: bool,
    },
    /// Find the critical points of one model.
    CriticalPoints {
        #[arg(long, value_parser = rank)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Form::Pluecker)]
        model: Form,
        #[arg(long, value_parser = complex, default_value = "1", allow_hyphen_values = true)]
        q: Complex64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = DataFormat::Json)]
        format: DataFormat,
    },
    /// Eigenvalues of quantum multiplication by c_1 = (2m-1) σ_1.
    Spectrum {
        #[arg(long, value_parser = rank)]
        m: usize,
        #[arg(long, value_parser = complex, default_value = "1", allow_hyphen_values = true)]
        q: Complex64,
    },
    /// Quantum cohomology tables, relations and the quantum differential equation.
    Qh {
        #[arg(long, value_parser = rank)]
        m: usize,
        #[arg(long, value_enum)]
        op: QhOp,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, value_parser = rational, default_value = "1", allow_hyphen_values = true)]
        hbar: Q,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Pluecker,
    Laurent,
    Gs,
    HoriVafa,
}

impl From<Form> for ModelId {
    fn from(f: Form) -> Self {
        match f {
            Form::Pluecker => ModelId::Pluecker,
            Form::Laurent => ModelId::Laurent,
            Form::Gs => ModelId::Gs,
            Form::HoriVafa => ModelId::HoriVafa,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TextFormat {
    Plain,
    Latex,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DataFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Pluecker,
    Gs,
    Matrix,
    Phi,
    Qh,
    Connection,
}

#[derive(Clone, Copy, ValueEnum)]
enum QhOp {
    Table,
    Relation,
    Gamma,
    Qde,
}

fn rank(s: &str) -> Result<usize, String> {
    let m: usize = s.parse().map_err(|_| format!("`{s}` is not a rank"))?;
    if m < 2 {
        return Err(format!("m must be at least 2, got {m}"));
    }
    Ok(m)
}

fn complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| format!("`{t}` is not a number"))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected RE or RE,IM, got `{s}`")),
    }
}

fn rational(s: &str) -> Result<Q, String> {
    s.trim()
        .parse::<Q>()
        .map_err(|_| format!("`{s}` is not a rational number"))
}

fn c_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Where a command failed: verification, usage, or a resource or
/// convergence limit.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceLimit { .. }
            | Error::NonConvergence { .. }
            | Error::RootsDidNotConverge { .. } => EXIT_LIMIT,
            Error::RankTooSmall(_) | Error::IndexOutOfRange { .. } | Error::ZeroHbar => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_FAIL,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(io::BufWriter::new(f)),
            Err(e) => {
                eprintln!("lgmirror: cannot create {}: {e}", path.display());
                return ExitCode::from(EXIT_FAIL);
            }
        },
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    };
    let result = run(cli.command, &mut sink);
    let flushed = sink.flush();
    match (result, flushed) {
        (Ok(code), Ok(())) => ExitCode::from(code),
        (Err(f), _) => {
            eprintln!("lgmirror: {}", f.message);
            ExitCode::from(f.code)
        }
        (Ok(_), Err(e)) => {
            eprintln!("lgmirror: {e}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<u8, Failure> {
    match command {
        Command::Superpotential { m, form, format } => {
            let style = match format {
                TextFormat::Plain => FormatStyle::Plain,
                TextFormat::Latex => FormatStyle::Latex,
                TextFormat::Json => FormatStyle::Json,
            };
            writeln!(out, "{}", superpotential(form.into(), m)?.format(style))?;
            Ok(0)
        }
        Command::Verify { m, suite } => verify(&m, suite, out),
        Command::Certify { m, q, seed, timing } => certify(m, q, seed, timing, out),
        Command::CriticalPoints {
            m,
            model,
            q,
            seed,
            format,
        } => {
            let opts = NewtonOptions::default();
            let report = newton_multistart(&superpotential(model.into(), m)?, q, seed, &opts)?;
            if format == DataFormat::Json {
                let mut v = report.to_json();
                v["options"] = serde_json::to_value(&opts).expect("options serialize");
                writeln!(out, "{v}")?;
            } else {
                writeln!(
                    out,
                    "model {} m={} q={} seed={} points={}",
                    report.model.as_str(),
                    m,
                    q,
                    seed,
                    report.points.len()
                )?;
                for p in &report.points {
                    let coords: Vec<String> = report
                        .variables
                        .iter()
                        .zip(&p.coords)
                        .map(|(n, z)| format!("{n}={z:.12}"))
                        .collect();
                    writeln!(out, "value={:.12} {}", p.value, coords.join(" "))?;
                }
            }
            Ok(0)
        }
        Command::Spectrum { m, q } => {
            let s = quantum_spectrum(m, q)?;
            let values: Vec<Value> = s.values().iter().map(|&z| c_json(z)).collect();
            writeln!(
                out,
                "{}",
                json!({"m": m, "q": c_json(q), "operator": "c1", "eigenvalues": values})
            )?;
            Ok(0)
        }
        Command::Qh { m, op, l, hbar } => qh(m, op, l, &hbar, out),
    }
}

fn emit(out: &mut dyn Write, v: &VerdictReport) -> io::Result<()> {
    writeln!(out, "{}", v.to_json())
}

fn suite_checks(suite: Suite) -> Vec<Suite> {
    match suite {
        Suite::All => vec![
            Suite::Pluecker,
            Suite::Gs,
            Suite::Matrix,
            Suite::Phi,
            Suite::Qh,
            Suite::Connection,
        ],
        s => vec![s],
    }
}

fn verify(ms: &[usize], suite: Suite, out: &mut dyn Write) -> Result<u8, Failure> {
    let (mut failed, mut limited) = (false, false);
    for &m in ms {
        for s in suite_checks(suite) {
            for verdict in run_suite(s, m) {
                let v = match verdict {
                    Ok(v) => v,
                    Err(Error::ResourceLimit { what, m, max }) => {
                        limited = true;
                        VerdictReport::skip(suite_name(s), m, format!("{what} supports m <= {max}"))
                    }
                    Err(e) => return Err(e.into()),
                };
                failed |= v.status == lgmirror::Status::Fail;
                emit(out, &v)?;
            }
        }
        if suite == Suite::All {
            let v = if m <= CERTIFY_MAX_M {
                verify_identity(Identity::HvNote, m)?
            } else {
                VerdictReport::skip(
                    Identity::HvNote.as_str(),
                    m,
                    format!("critical points supported for m <= {CERTIFY_MAX_M}"),
                )
            };
            emit(out, &v)?;
        }
    }
    Ok(if failed {
        EXIT_FAIL
    } else if limited {
        EXIT_LIMIT
    } else {
        0
    })
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::All => "all",
        Suite::Pluecker => Identity::PlueckerEqLaurent.as_str(),
        Suite::Gs => Identity::GsEqPluecker.as_str(),
        Suite::Matrix => Identity::MatrixEqLaurent.as_str(),
        Suite::Phi => "phi",
        Suite::Qh => "qh",
        Suite::Connection => "flatness",
    }
}

fn run_suite(s: Suite, m: usize) -> Vec<Result<VerdictReport, Error>> {
    match s {
        Suite::All => unreachable!("expanded by suite_checks"),
        Suite::Pluecker => vec![verify_identity(Identity::PlueckerEqLaurent, m)],
        Suite::Gs => vec![verify_identity(Identity::GsEqPluecker, m)],
        Suite::Matrix => vec![verify_identity(Identity::MatrixEqLaurent, m)],
        Suite::Phi => vec![verify_phi(m)],
        Suite::Connection => vec![flatness_check(m)],
        Suite::Qh => qh_verdicts(m),
    }
}

fn qh_verdicts(m: usize) -> Vec<Result<VerdictReport, Error>> {
    let ring = match QhRing::new(m) {
        Ok(r) => r,
        Err(e) => return vec![Err(e)],
    };
    let mut out: Vec<Result<VerdictReport, Error>> = (1..m)
        .map(|l| {
            let got = q_relation_in(&ring, l)?;
            Ok(
                VerdictReport::from_check("q_relation", m, got == ring.q_unit(), || {
                    format!("alternating sum is {}", got.to_plain())
                })
                .with("l", l),
            )
        })
        .collect();
    out.push((|| {
        let got = w_image(m)?;
        let want = ring.sigma(1).scale(&lgmirror::symbolic::RatFunc::integer(
            ring.chevalley().registry(),
            2 * m as i64 - 1,
        ));
        Ok(
            VerdictReport::from_check("w_image", m, got == want, || got.to_plain())
                .with("value", got.to_plain()),
        )
    })());
    out
}

fn certify(
    m: usize,
    q: Complex64,
    seed: u64,
    timing: bool,
    out: &mut dyn Write,
) -> Result<u8, Failure> {
    let opts = NewtonOptions::default();
    let start = Instant::now();
    let (mut verdict, report) = critical_certificate(m, q, seed, &opts)?;
    if timing {
        verdict.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    let code = if verdict.passed() { 0 } else { EXIT_FAIL };
    let v = json!({
        "verdict": verdict.to_json(),
        "critical_points": report.to_json(),
        "options": serde_json::to_value(&opts).expect("options serialize"),
        "spectrum_tol": SPECTRUM_TOL,
    });
    writeln!(out, "{v}")?;
    Ok(code)
}

fn qh(m: usize, op: QhOp, l: Option<usize>, hbar: &Q, out: &mut dyn Write) -> Result<u8, Failure> {
    let ring = QhRing::new(m)?;
    let v = match op {
        QhOp::Table => {
            let n = 2 * m;
            let mut rows = Vec::with_capacity(n);
            for i in 0..n {
                let mut row = Vec::with_capacity(n);
                for j in 0..n {
                    row.push(ring.mul(&ring.sigma(i), &ring.sigma(j))?.to_json());
                }
                rows.push(Value::Array(row));
            }
            json!({"m": m, "op": "table", "table": rows})
        }
        QhOp::Relation => {
            let l = l.ok_or_else(|| usage("--op relation needs --l"))?;
            if l == 0 || l >= m {
                return Err(usage(format!("--l must lie in 1..={}", m - 1)));
            }
            let got = q_relation_in(&ring, l)?;
            let holds = got == ring.q_unit();
            writeln!(
                out,
                "{}",
                json!({"m": m, "op": "relation", "l": l, "value": got.to_json(), "plain": got.to_plain(), "equals_q": holds})
            )?;
            return Ok(if holds { 0 } else { EXIT_FAIL });
        }
        QhOp::Gamma => {
            let got = w_image(m)?;
            json!({"m": m, "op": "gamma", "value": got.to_json(), "plain": got.to_plain()})
        }
        QhOp::Qde => {
            let sys = qde_system(m, hbar)?;
            json!({"m": m, "op": "qde", "hbar": hbar.to_string(), "matrix": sys.matrix.to_json()})
        }
    };
    writeln!(out, "{v}")?;
    Ok(0)
}
