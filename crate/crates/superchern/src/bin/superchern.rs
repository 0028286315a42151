//! Command-line front end: compute Chern character forms, run transport
//! reports, and verify the algebraic identities on a spec file.
//!
//! Exit codes: 0 success, 1 mathematical or invariant failure, 2 parse or
//! usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::One;

use superchern::error::Error;
use superchern::graded_matrix_forms::MatForm;
use superchern::parser::{lower_to_poly, max_var_index, parse_expression};
use superchern::sampling::Sampler;
use superchern::scalar_poly::Rational;
use superchern::spec_file::{exterior_value_to_json, form_to_json, load_spec};
use superchern::superconnection::{
    chern_character_exact, chern_character_numeric, exp_neg_exact, Superconnection,
};
use superchern::superpath_pullback::{t_star, theta_mul, verify_fdg_contraction};
use superchern::transport::{
    reduce_to_system, solve_exact, validate_step, verify_theorem, VerifyMode,
};

#[derive(Parser)]
#[command(name = "superchern", version, about = "Chern character forms of superconnections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Numeric,
}

#[derive(Subcommand)]
enum Command {
    /// Compute ch = str(exp(-curvature)) for a spec file.
    Chern {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Evaluation point, comma-separated floats (numeric mode).
        #[arg(long)]
        point: Option<String>,
        /// Write machine-readable JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the transport system numerically and report the gaps.
    Transport {
        spec: PathBuf,
        #[arg(long)]
        point: Option<String>,
        /// Uniform step size; must divide the unit interval.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the per-spec property checks and print one line per check.
    Verify {
        spec: PathBuf,
        /// Negative-control hook: corrupt the transport generator.
        #[arg(long, hide = true)]
        inject_bad_generator: bool,
    },
    /// Parse an expression and print its canonical polynomial form.
    Eval {
        expr: String,
        /// Number of chart variables; inferred from the expression if omitted.
        #[arg(long)]
        n_vars: Option<usize>,
        #[arg(long)]
        point: Option<String>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn math_failure(e: Error) -> Failure {
    let code = match e {
        Error::Parse { .. } => 2,
        _ => 1,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn usage_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn parse_point(text: &str, n_vars: usize) -> Result<Vec<f64>, Failure> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse()).collect();
    let values = values.map_err(|_| usage_failure(format!("invalid --point '{text}'")))?;
    if values.len() != n_vars {
        return Err(usage_failure(format!(
            "--point has {} coordinates, spec has {} variables",
            values.len(),
            n_vars
        )));
    }
    Ok(values)
}

fn write_json(out: Option<&PathBuf>, json: &str) -> Result<(), Failure> {
    if let Some(path) = out {
        std::fs::write(path, json)
            .map_err(|e| usage_failure(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_chern(
    spec: &PathBuf,
    mode: Mode,
    point: Option<&String>,
    out: Option<&PathBuf>,
) -> Result<(), Failure> {
    let s = load_spec(spec).map_err(math_failure)?;
    match mode {
        Mode::Exact => {
            let ch = chern_character_exact(&s, 64).map_err(math_failure)?;
            println!("{ch}");
            let mut json = serde_json::json!({ "mode": "exact" });
            let form = serde_json::to_value(form_to_json(&ch)).expect("serializable");
            json.as_object_mut()
                .unwrap()
                .extend(form.as_object().unwrap().clone());
            write_json(out, &(json.to_string() + "\n"))
        }
        Mode::Numeric => {
            let point = point
                .ok_or_else(|| usage_failure("numeric mode requires --point"))
                .and_then(|p| parse_point(p, s.n_vars()))?;
            let ch = chern_character_numeric(&s, &point, 1e-12).map_err(math_failure)?;
            let rendered = exterior_value_to_json(&ch);
            for coord in &rendered.coords {
                let dx: Vec<String> = coord.dx.iter().map(|i| format!("dx{i}")).collect();
                let label = if dx.is_empty() {
                    "1".to_string()
                } else {
                    dx.join("^")
                };
                println!("{label}: {:.12e}", coord.value);
            }
            let mut json = serde_json::json!({ "mode": "numeric", "point": point });
            let value = serde_json::to_value(rendered).expect("serializable");
            json.as_object_mut()
                .unwrap()
                .extend(value.as_object().unwrap().clone());
            write_json(out, &(json.to_string() + "\n"))
        }
    }
}

fn cmd_transport(
    spec: &PathBuf,
    point: Option<&String>,
    step: f64,
    out: Option<&PathBuf>,
) -> Result<(), Failure> {
    let s = load_spec(spec).map_err(math_failure)?;
    validate_step(step).map_err(|e| usage_failure(e.to_string()))?;
    let point = match point {
        Some(p) => parse_point(p, s.n_vars())?,
        None => vec![0.0; s.n_vars()],
    };
    let report = verify_theorem(
        &s,
        &VerifyMode::Numeric {
            point,
            h: step,
            tolerance: 1e-12,
        },
    )
    .map_err(math_failure)?;
    let json = serde_json::to_string(&report).expect("serializable") + "\n";
    print!("{json}");
    write_json(out, &json)
}

fn cmd_eval(expr: &str, n_vars: Option<usize>, point: Option<&String>) -> Result<(), Failure> {
    let ast = parse_expression(expr).map_err(math_failure)?;
    let n_vars = n_vars.unwrap_or_else(|| max_var_index(&ast));
    let poly = lower_to_poly(&ast, n_vars).map_err(math_failure)?;
    println!("{poly}");
    if let Some(p) = point {
        let point = parse_point(p, n_vars)?;
        let value = poly.eval(&point).map_err(math_failure)?;
        println!("{value}");
    }
    Ok(())
}

struct CheckList {
    failed: bool,
}

impl CheckList {
    fn new() -> Self {
        CheckList { failed: false }
    }

    fn report(&mut self, name: &str, outcome: Result<bool, Error>) {
        match outcome {
            Ok(true) => println!("[ ok ] {name}"),
            Ok(false) => {
                println!("[FAIL] {name}");
                self.failed = true;
            }
            Err(e) => {
                println!("[FAIL] {name}: {e}");
                self.failed = true;
            }
        }
    }
}

fn theorem_check(s: &Superconnection, corrupt: bool) -> Result<bool, Error> {
    let mut sys = reduce_to_system(s);
    if corrupt {
        let bad = sys
            .generator()
            .checked_add(&MatForm::identity(s.shape(), s.n_vars()))?;
        sys = sys.with_corrupted_generator(bad);
    }
    let curvature = s.curvature();
    if superchern::superconnection::nilpotency_index(&curvature).is_ok() {
        let (psi0, _) = solve_exact(&sys, &Rational::one())?;
        let expected = exp_neg_exact(&curvature, 64)?;
        Ok(psi0 == expected && psi0.supertrace() == chern_character_exact(s, 64)?)
    } else {
        let mut sampler = Sampler::from_env();
        for _ in 0..3 {
            let point = sampler.point(s.n_vars());
            let report = verify_theorem(
                s,
                &VerifyMode::Numeric {
                    point,
                    h: 1e-2,
                    tolerance: 1e-12,
                },
            )?;
            if report.terminal_gap > 1e-8 || report.ch_gap > 1e-8 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn cmd_verify(spec: &PathBuf, inject_bad_generator: bool) -> Result<(), Failure> {
    let s = load_spec(spec).map_err(math_failure)?;
    let mut checks = CheckList::new();

    let (even, _) = s.a_prime().parity_decompose();
    checks.report("a-prime-odd", Ok(even.is_zero()));

    let (_, odd_curvature) = s.curvature().parity_decompose();
    checks.report("curvature-even-parity", Ok(odd_curvature.is_zero()));

    checks.report("bianchi-residual-zero", Ok(s.bianchi_residual().is_zero()));

    let nilpotent = superchern::superconnection::nilpotency_index(&s.curvature()).is_ok();
    if nilpotent {
        let closed = chern_character_exact(&s, 64).map(|ch| ch.d().is_zero());
        checks.report("chern-character-closed", closed);
    }

    checks.report(
        "transport-reproduces-chern",
        theorem_check(&s, inject_bad_generator),
    );

    let mut sampler = Sampler::from_env();
    let n = s.n_vars().max(1);
    let fdg = (0..25).try_fold(true, |acc, _| {
        let f = sampler.poly(n, 3);
        let g = sampler.poly(n, 3);
        verify_fdg_contraction(&f, &g).map(|ok| acc && ok)
    });
    checks.report("fdg-contraction", fdg);

    let multiplicative = (0..50).try_fold(true, |acc, _| {
        let da = sampler.usize_in(0, n);
        let db = sampler.usize_in(0, n);
        let alpha = sampler.homogeneous_form(n, da, 2);
        let beta = sampler.homogeneous_form(n, db, 2);
        let lhs = t_star(&alpha.wedge(&beta)?);
        let rhs = theta_mul(&t_star(&alpha), &t_star(&beta))?;
        Ok::<bool, Error>(acc && lhs.body == rhs.body && lhs.soul == rhs.soul)
    });
    checks.report("t-star-multiplicative", multiplicative);

    if checks.failed {
        Err(Failure {
            code: 1,
            message: "verification failed".into(),
        })
    } else {
        Ok(())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Chern {
            spec,
            mode,
            point,
            out,
        } => cmd_chern(spec, *mode, point.as_ref(), out.as_ref()),
        Command::Transport {
            spec,
            point,
            step,
            out,
        } => cmd_transport(spec, point.as_ref(), *step, out.as_ref()),
        Command::Verify {
            spec,
            inject_bad_generator,
        } => cmd_verify(spec, *inject_bad_generator),
        Command::Eval {
            expr,
            n_vars,
            point,
        } => cmd_eval(expr, *n_vars, point.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
