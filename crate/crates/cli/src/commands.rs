use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use liouville_core::certify::{certify_well_balanced, degree_bounds, Tolerances};
use liouville_core::complex::from_gaussian;
use liouville_core::io::{
    certificate_out, complex_out, decimal_digits, limit_root_out, parse_params, parse_point, parse_rational,
    parse_system, trace_header, trace_row, SequenceSpec,
};
use liouville_core::series::DEFAULT_LENGTH;
use liouville_core::tracker::{solve, track_from, LimitRoot, PathState, SolveError, TrackerConfig};
use liouville_core::{BigFloat, BigRational, Complex, Error, ExtendedComplex, LiouvilleSequence, PartialSum, PolynomialMap};
use serde_json::{json, Value};

use crate::report::{Failure, Inputs, Outcome, RunReport, Timings, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, EXIT_TRACKING};
use crate::{AuditArgs, BoundsArgs, CertifyArgs, Cli, Command, EvalArgs, SeqCommand, SequenceArgs, SolveArgs, TrackArgs, TrackerArgs};

/// What a command produced, before it is wrapped in a report.
struct Output {
    code: u8,
    config: Value,
    result: Value,
    error_kind: Option<&'static str>,
    error: Option<String>,
    summary: String,
    artifacts: Vec<String>,
}

impl Output {
    fn ok(config: Value, result: Value, summary: String) -> Self {
        Output {
            code: EXIT_OK,
            config,
            result,
            error_kind: None,
            error: None,
            summary,
            artifacts: Vec::new(),
        }
    }
}

pub fn run(cli: &Cli) -> u8 {
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let name = match &cli.command {
        Command::Seq(SeqCommand::Audit(_)) => "seq audit",
        Command::Eval(_) => "eval",
        Command::Certify(_) => "certify",
        Command::Solve(_) => "solve",
        Command::Track(_) => "track",
        Command::Bounds(_) => "bounds",
    };
    let outcome = match &cli.command {
        Command::Seq(SeqCommand::Audit(a)) => audit(cli, a, &mut inputs),
        Command::Eval(a) => eval(cli, a, &mut inputs),
        Command::Certify(a) => certify(cli, a, &mut inputs),
        Command::Solve(a) => solve_cmd(cli, a, &mut inputs),
        Command::Track(a) => track_cmd(cli, a, &mut inputs),
        Command::Bounds(a) => bounds(a),
    };
    let mut out = outcome.unwrap_or_else(|f| Output {
        code: f.code,
        config: json!({ "prec": cli.prec, "seed": cli.seed }),
        result: json!({ "error_kind": f.kind, "error": f.message }),
        error_kind: f.kind,
        error: Some(f.message),
        summary: String::new(),
        artifacts: Vec::new(),
    });
    if let Some(path) = &cli.out {
        let text = serde_json::to_string_pretty(&out.result).expect("serializable") + "\n";
        match std::fs::write(path, text) {
            Ok(()) => out.artifacts.push(path.display().to_string()),
            Err(e) => {
                out.code = EXIT_INPUT;
                out.error = Some(format!("{}: {e}", path.display()));
            }
        }
    }
    if !cli.quiet {
        if !out.summary.is_empty() {
            eprintln!("{}", out.summary.trim_end());
        }
        if let Some(e) = &out.error {
            eprintln!("error: {e}");
        }
    }
    let report = RunReport {
        command: name.to_string(),
        config: out.config,
        inputs: inputs.digests,
        outcome: Outcome::from_code(out.code, out.error_kind, out.error),
        result: out.result,
        timings: Timings {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        artifacts: out.artifacts,
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    out.code
}

fn sequence(args: &SequenceArgs, min_len: usize, inputs: &mut Inputs) -> Result<(LiouvilleSequence, Value), Failure> {
    let spec: SequenceSpec = match &args.file {
        Some(p) => serde_json::from_str(&inputs.read(p)?).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        None => SequenceSpec {
            kind: args.kind.into(),
            values: None,
            length: Some(min_len.max(DEFAULT_LENGTH)),
        },
    };
    let seq = spec.build()?;
    let echo = serde_json::to_value(&spec).expect("serializable");
    Ok((seq, echo))
}

fn audit(cli: &Cli, a: &AuditArgs, inputs: &mut Inputs) -> Result<Output, Failure> {
    let (seq, echo) = sequence(&a.seq, a.max_i + 1, inputs)?;
    let mut results = Vec::new();
    let mut summary = String::new();
    for &l in &a.l {
        let audit = seq.audit_growth(l, a.max_i)?;
        summary.push_str(&format!("l = {l}\n   i  holds\n"));
        for (k, ok) in audit.checks.iter().enumerate() {
            summary.push_str(&format!("{:>4}  {}\n", k + 1, ok));
        }
        summary.push_str(&format!(
            "least all-true index: {}, admissible: {}\n",
            audit.least_all_true_index.map_or("none".into(), |i| i.to_string()),
            audit.admissible()
        ));
        results.push(json!({
            "l": l,
            "rows": audit.checks.iter().enumerate().map(|(k, ok)| json!({"i": k + 1, "holds": ok})).collect::<Vec<_>>(),
            "least_all_true_index": audit.least_all_true_index,
            "first_failing_index": audit.first_failing_index,
            "admissible": audit.admissible(),
        }));
    }
    let config = json!({ "prec": cli.prec, "sequence": echo, "l": a.l, "max_i": a.max_i });
    Ok(Output::ok(config, json!({ "audits": results }), summary))
}

fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn eval(cli: &Cli, a: &EvalArgs, inputs: &mut Inputs) -> Result<Output, Failure> {
    if a.d == 0 {
        return Err(Failure::input("--d must be at least 1"));
    }
    let (seq, echo) = sequence(&a.seq, a.d + 2, inputs)?;
    let x = Complex::new(parse_rational(&a.x)?, parse_rational(&a.x_im)?);
    let eps = Complex::new(parse_rational(&a.eps)?, parse_rational(&a.eps_im)?);
    let prec = cli.prec;
    let digits = decimal_digits(prec);
    let xf: ExtendedComplex = from_gaussian(&x, prec)?;
    let ef: ExtendedComplex = from_gaussian(&eps, prec)?;
    let h = PartialSum::new(&seq, a.d, ef, prec)?;
    let value = h.eval(&xf);
    let derivative = h.derivative(&xf);
    // exact rational value when the coefficients are small enough to materialize
    let exact = PartialSum::<BigRational>::new(&seq, a.d, eps.clone(), 0).ok().map(|hq| {
        let v = hq.eval(&x);
        let dv = hq.derivative(&x);
        json!({
            "value": {"re": rational_string(&v.re), "im": rational_string(&v.im)},
            "derivative": {"re": rational_string(&dv.re), "im": rational_string(&dv.im)},
        })
    });
    let value_out = complex_out(&value, digits);
    let summary = format!(
        "H(x) = {} + {}i\nH'(x) = {} + {}i\n",
        value_out.re,
        value_out.im,
        derivative.re.to_decimal(digits),
        derivative.im.to_decimal(digits)
    );
    let config = json!({ "prec": prec, "sequence": echo, "d": a.d, "x": [a.x, a.x_im], "eps": [a.eps, a.eps_im] });
    let result = json!({
        "value": value_out,
        "derivative": complex_out(&derivative, digits),
        "exact": exact,
    });
    Ok(Output::ok(config, result, summary))
}

fn load_system(path: &Path, inputs: &mut Inputs) -> Result<PolynomialMap, Failure> {
    parse_system(&inputs.read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_params(f: &PolynomialMap, path: Option<&Path>, prec: u32, inputs: &mut Inputs) -> Result<Vec<ExtendedComplex>, Failure> {
    let z = match path {
        Some(p) => parse_params(&inputs.read(p)?).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        None => Vec::new(),
    };
    if z.len() != f.r() {
        return Err(Failure::input(format!("system has {} parameters, {} given", f.r(), z.len())));
    }
    Ok(z.iter().map(|q| from_gaussian(q, prec)).collect::<liouville_core::Result<_>>()?)
}

fn to_ext(v: &[liouville_core::GaussianRational], prec: u32) -> Result<Vec<ExtendedComplex>, Failure> {
    Ok(v.iter().map(|q| from_gaussian(q, prec)).collect::<liouville_core::Result<_>>()?)
}

/// Errors that mean "this point is not a certifiable zero" rather than bad input.
fn is_negative_certification(e: &Error) -> bool {
    matches!(
        e,
        Error::NotAZero { .. } | Error::DistinctnessViolated(_) | Error::PrecisionExhausted { .. } | Error::SingularJacobian
    )
}

/// Run the full certificate chain on a point file; `Err` only for input problems.
fn certify_point(
    f: &PolynomialMap,
    z: &[ExtendedComplex],
    point: &Path,
    prec: u32,
    inputs: &mut Inputs,
) -> Result<(u8, Value, Option<Error>), Failure> {
    let pt = parse_point(&inputs.read(point)?).map_err(|e| Failure::input(format!("{}: {e}", point.display())))?;
    let y = pt
        .y
        .ok_or_else(|| Failure::input(format!("{}: point needs y values", point.display())))?;
    let x = to_ext(&pt.x, prec)?;
    let y = to_ext(&y, prec)?;
    let tol = Tolerances::<BigFloat>::defaults(prec);
    match certify_well_balanced(f, z, &x, &y, &tol, prec) {
        Ok(cert) => {
            let code = if cert.well_balanced { EXIT_OK } else { EXIT_NEGATIVE };
            let out = serde_json::to_value(certificate_out(&cert, decimal_digits(prec))).expect("serializable");
            Ok((code, out, None))
        }
        Err(e) if is_negative_certification(&e) => {
            Ok((EXIT_NEGATIVE, json!({ "error_kind": e.kind(), "error": e.to_string() }), Some(e)))
        }
        Err(e) => Err(Failure::input(e)),
    }
}

fn certify(cli: &Cli, a: &CertifyArgs, inputs: &mut Inputs) -> Result<Output, Failure> {
    let prec = cli.prec;
    let f = load_system(&a.system, inputs)?;
    let z = load_params(&f, a.z.as_deref(), prec, inputs)?;
    let (code, result, error) = certify_point(&f, &z, &a.point, prec, inputs)?;
    let summary = match result.get("flags") {
        Some(flags) => format!("flags: {flags}\nwitness: {}\n", result["witness"]),
        None => String::new(),
    };
    Ok(Output {
        code,
        config: json!({ "prec": prec, "tolerances": "defaults" }),
        result,
        error_kind: error.as_ref().map(Error::kind),
        error: error.map(|e| e.to_string()),
        summary,
        artifacts: Vec::new(),
    })
}

fn tracker_config(cli: &Cli, t: &TrackerArgs, d_start: Option<usize>, budget: usize) -> TrackerConfig {
    TrackerConfig {
        precision_bits: cli.prec,
        d_start,
        d_max: t.d_max,
        residual_tol_log2: t.residual_tol_log2,
        newton_tol_log2: None,
        max_newton_iters: t.max_newton_iters,
        max_substeps_per_epsilon: t.max_substeps,
        r_max: t.r_max,
        multistart_budget: budget,
        rng_seed: cli.seed,
    }
}

fn write_trace(path: &Path, n: usize, states: &[PathState<BigFloat>], digits: usize) -> Result<(), Failure> {
    let mut text = trace_header(n);
    text.push('\n');
    for s in states {
        text.push_str(&trace_row(s, digits));
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Shared tail of `solve` and `track`: result document, trace file, exit code.
fn finish_tracking(
    cli: &Cli,
    t: &TrackerArgs,
    f: &PolynomialMap,
    cfg: &TrackerConfig,
    seq_echo: Value,
    outcome: Result<LimitRoot<BigFloat>, SolveError<BigFloat>>,
    certificate: Option<Value>,
) -> Result<Output, Failure> {
    let digits = decimal_digits(cli.prec);
    let config = json!({ "tracker": cfg, "sequence": seq_echo });
    let mut artifacts = Vec::new();
    let (code, mut result, error, states, summary) = match outcome {
        Ok(limit) => {
            let out = limit_root_out(&limit, digits);
            let code = if limit.certified { EXIT_OK } else { EXIT_TRACKING };
            let summary = format!(
                "a = {}\nfinal degree {}, total residual bound {}\n",
                out.a.iter().map(|c| format!("({}, {})", c.re, c.im)).collect::<Vec<_>>().join(", "),
                out.final_d,
                out.total_residual_bound.clone().unwrap_or_else(|| "unavailable".into())
            );
            let error = (!limit.certified).then(|| (None, format!("stopping rule not met by d_max = {}", cfg.d_max)));
            let result = json!({ "config": config, "limit_root": out });
            (code, result, error, limit.path, summary)
        }
        Err(SolveError { error, partial }) => {
            let code = match error {
                Error::InvalidArgument(_) | Error::DimensionMismatch { .. } | Error::SequenceExhausted { .. } => EXIT_INPUT,
                _ => EXIT_TRACKING,
            };
            let result = json!({
                "config": config,
                "error_kind": error.kind(),
                "error": error.to_string(),
                "accepted_states": partial.len(),
            });
            (code, result, Some((Some(error.kind()), error.to_string())), partial, String::new())
        }
    };
    if let Some(c) = certificate {
        result["certificate"] = c;
    }
    if let Some(path) = &t.trace {
        write_trace(path, f.n(), &states, digits)?;
        artifacts.push(path.display().to_string());
    }
    Ok(Output {
        code,
        config,
        result,
        error_kind: error.as_ref().and_then(|e| e.0),
        error: error.map(|e| e.1),
        summary,
        artifacts,
    })
}

fn solve_cmd(cli: &Cli, a: &SolveArgs, inputs: &mut Inputs) -> Result<Output, Failure> {
    let t = &a.tracker;
    let cfg = tracker_config(cli, t, a.d_start, a.budget);
    cfg.validate()?;
    let (seq, echo) = sequence(&t.seq, t.d_max + 3, inputs)?;
    let f = load_system(&t.system, inputs)?;
    let z = load_params(&f, t.z.as_deref(), cli.prec, inputs)?;
    let certificate = match &a.point {
        Some(p) => {
            let (_, c, _) = certify_point(&f, &z, p, cli.prec, inputs)?;
            Some(c)
        }
        None => None,
    };
    let f = Arc::new(f);
    let outcome = solve(&f, &Arc::new(seq), &z, &cfg);
    finish_tracking(cli, t, &f, &cfg, echo, outcome, certificate)
}

fn track_cmd(cli: &Cli, a: &TrackArgs, inputs: &mut Inputs) -> Result<Output, Failure> {
    let t = &a.tracker;
    let cfg = tracker_config(cli, t, Some(a.d), 0);
    cfg.validate()?;
    let (seq, echo) = sequence(&t.seq, t.d_max + 3, inputs)?;
    let f = load_system(&t.system, inputs)?;
    let z = load_params(&f, t.z.as_deref(), cli.prec, inputs)?;
    let start = parse_point(&inputs.read(&a.start)?).map_err(|e| Failure::input(format!("{}: {e}", a.start.display())))?;
    let x0 = to_ext(&start.x, cli.prec)?;
    let f = Arc::new(f);
    let outcome = track_from(&f, &Arc::new(seq), &z, a.d, &x0, &cfg);
    finish_tracking(cli, t, &f, &cfg, echo, outcome, None)
}

fn bounds(a: &BoundsArgs) -> Result<Output, Failure> {
    let b = degree_bounds(a.n, a.r)?;
    let summary = format!("inductive: {}\nfiniteness: {}\n", b.inductive, b.finiteness);
    Ok(Output::ok(
        json!({ "n": a.n, "r": a.r }),
        json!({ "inductive": b.inductive.to_string(), "finiteness": b.finiteness.to_string() }),
        summary,
    ))
}
