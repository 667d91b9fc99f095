//! The `eigvar` command line: argument handling, dispatch and exit codes.

pub mod args;
pub mod report;

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use eigvar::oracle::{exponent_rows, kernel_scan, phase_scan};
use eigvar::{
    classify, gen_complete, gen_power, least_eigenvariety, parse_hypergraph, parse_simple_graph,
    rho_eigenvariety, snf_mod, spectral_radius, structured_tensor, zero_variety_signless,
    EigenOptions, EigenvarietyResult, Error, Hypergraph, PerronOptions, TensorKind,
};
use serde_json::{json, Value};

use crate::args::{Cli, Command, Family, Format, PerronArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;

/// A failed command: exit code, message, and an optional report still worth printing.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    pub report: Option<Value>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
            report: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } => EXIT_USAGE,
            Error::NoConvergence { .. } | Error::ResidualViolation { .. } => EXIT_CONVERGENCE,
            _ => EXIT_PRECONDITION,
        };
        let report = match &e {
            Error::NoConvergence {
                iterations,
                lower,
                upper,
            } => Some(json!({
                "kind": "no_convergence",
                "iterations": iterations,
                "lower": lower,
                "upper": upper,
            })),
            _ => None,
        };
        Self {
            code,
            message: e.to_string(),
            report,
        }
    }
}

fn perron_options(p: &PerronArgs) -> PerronOptions {
    PerronOptions {
        tol: p.perron_tol,
        max_iter: p.max_iter,
    }
}

fn read_hypergraph(path: &Path) -> Result<Hypergraph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    parse_hypergraph(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn require_connected(h: &Hypergraph) -> Result<(), Failure> {
    if h.is_connected() {
        Ok(())
    } else {
        Err(Error::Disconnected.into())
    }
}

/// Eigenvariety at λ_min for Z-tensors and at ρ for nonnegative ones.
fn natural_eigenvariety(
    h: &Hypergraph,
    kind: TensorKind,
    opts: &EigenOptions,
) -> Result<EigenvarietyResult, Failure> {
    let t = structured_tensor(h, kind);
    Ok(match kind {
        TensorKind::Laplacian => least_eigenvariety(&t, opts)?,
        TensorKind::Adjacency | TensorKind::Signless => rho_eigenvariety(&t, opts)?,
    })
}

enum Output {
    Report(Value),
    Text(String),
}

fn execute(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Spectral {
            tensor,
            perron,
            dump_tensor,
            input,
        } => {
            let h = read_hypergraph(&input)?;
            require_connected(&h)?;
            let kind = TensorKind::from(tensor);
            let t = structured_tensor(&h, kind);
            let opts = perron_options(&perron);
            let class = t.m_classify(&opts)?;
            let mut obj = serde_json::Map::new();
            obj.insert("kind".into(), "spectral".into());
            obj.insert("tensor".into(), kind.name().into());
            match kind {
                TensorKind::Laplacian => {
                    let split = t.z_split()?;
                    let p = spectral_radius(&split.nonneg, &opts)?;
                    obj.insert("shift".into(), json!(split.shift));
                    obj.insert("lambda_min".into(), json!(split.shift - p.rho));
                    obj.insert("perron_b".into(), report::perron(&p));
                }
                _ => {
                    let p = spectral_radius(&t, &opts)?;
                    obj.insert("perron".into(), report::perron(&p));
                }
            }
            obj.insert("m_class".into(), report::m_class(&class));
            if dump_tensor {
                obj.insert("tensor_entries".into(), report::tensor(&t));
            }
            Ok(Output::Report(Value::Object(obj)))
        }
        Command::Snf {
            tensor,
            modulus,
            transforms,
            input,
        } => {
            let h = read_hypergraph(&input)?;
            let t = structured_tensor(&h, tensor.into());
            let m = modulus.unwrap_or(h.m() as u64);
            let b = t.incidence(true).matrix();
            let f = if transforms {
                eigvar::smith::reduce_mod(eigvar::integer_snf(&b, true), m)?
            } else {
                snf_mod(&b, m)?
            };
            let certified = f.integer.transforms.as_ref().map(|tr| {
                tr.p.mul(&b)
                    .and_then(|pb| pb.mul(&tr.q))
                    .is_ok_and(|d| d == f.integer.diagonal())
            });
            Ok(Output::Report(report::snf(&f, certified)))
        }
        Command::Eigenvariety {
            tensor,
            at_zero,
            tol,
            perron,
            budget,
            emit_vectors,
            input,
        } => {
            let kind = TensorKind::from(tensor);
            if at_zero && kind != TensorKind::Signless {
                return Err(Failure::usage(
                    "--at-zero applies to the signless Laplacian only",
                ));
            }
            let h = read_hypergraph(&input)?;
            require_connected(&h)?;
            let opts = EigenOptions {
                tol,
                perron: perron_options(&perron),
                budget,
            };
            if at_zero {
                return Ok(Output::Report(match zero_variety_signless(&h, &opts)? {
                    Some(r) => report::eigenvariety(kind.name(), &r, emit_vectors),
                    None => {
                        let b = structured_tensor(&h, kind).incidence(true).matrix();
                        report::empty_zero_variety(h.m(), &snf_mod(&b, h.m() as u64)?)
                    }
                }));
            }
            let r = natural_eigenvariety(&h, kind, &opts)?;
            Ok(Output::Report(report::eigenvariety(
                kind.name(),
                &r,
                emit_vectors,
            )))
        }
        Command::Classify { input } => {
            let h = read_hypergraph(&input)?;
            Ok(Output::Report(report::classification(&h, &classify(&h))))
        }
        Command::Verify {
            tensor,
            tol,
            perron,
            budget,
            timings,
            input,
        } => {
            let h = read_hypergraph(&input)?;
            require_connected(&h)?;
            let kind = TensorKind::from(tensor);
            let opts = EigenOptions {
                tol,
                perron: perron_options(&perron),
                budget,
            };
            let theory = natural_eigenvariety(&h, kind, &opts)?;
            let t = structured_tensor(&h, kind);
            let name = format!("{}:{}", input.display(), kind);

            let phases = phase_scan(&t, &theory.perron, theory.lambda, tol, budget)?
                .compare(name.clone(), exponent_rows(&theory.exponents));
            let inc = t.incidence(true).matrix();
            let mut kernel = kernel_scan(&inc, h.m() as u64, true, budget)?
                .compare(name, exponent_rows(&theory.exponents));
            let formula = theory
                .snf
                .pinned_kernel_size()
                .and_then(|c| num_traits::ToPrimitive::to_u64(&c))
                .unwrap_or(u64::MAX);
            kernel.expected_count = formula;

            let agree = phases.agrees() && kernel.agrees() && formula == theory.count() as u64;
            let value = json!({
                "kind": "verify",
                "tensor": kind.name(),
                "s": theory.count(),
                "reports": [report::oracle(&phases, timings), report::oracle(&kernel, timings)],
                "agree": agree,
            });
            if agree {
                Ok(Output::Report(value))
            } else {
                Err(Failure {
                    code: EXIT_DISAGREEMENT,
                    message: "brute-force scan disagrees with the Smith-form route".into(),
                    report: Some(value),
                })
            }
        }
        Command::Gen { family, output } => {
            let h = match family {
                Family::Complete { n, m } => gen_complete(n, m)?,
                Family::Power { graph, m } => {
                    let text = fs::read_to_string(&graph).map_err(|e| {
                        Failure::usage(format!("cannot read {}: {e}", graph.display()))
                    })?;
                    let g = parse_simple_graph(&text)
                        .map_err(|e| Failure::usage(format!("{}: {e}", graph.display())))?;
                    gen_power(&g, m)?
                }
            };
            let hgf = h.to_hgf();
            match output {
                Some(path) => {
                    fs::write(&path, hgf).map_err(|e| Failure {
                        code: EXIT_USAGE,
                        message: format!("cannot write {}: {e}", path.display()),
                        report: None,
                    })?;
                    Ok(Output::Text(String::new()))
                }
                None => Ok(Output::Text(hgf)),
            }
        }
    }
}

/// Runs one command line (including the program name) and returns the exit code.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let format = cli.format;
    match execute(cli.command) {
        Ok(Output::Report(v)) => {
            let _ = stdout.write_all(report::render(&v, format).as_bytes());
            EXIT_OK
        }
        Ok(Output::Text(s)) => {
            let _ = stdout.write_all(s.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            if let Some(v) = &f.report {
                let _ = stdout.write_all(report::render(v, format).as_bytes());
            }
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Format names, for callers building argument vectors.
pub fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Tsv => "tsv",
        Format::Text => "text",
    }
}
