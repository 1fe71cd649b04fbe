use std::fmt::Write as _;

use epistrict_core::epistricted::{enumerate_pure_states, EpistemicState};
use epistrict_core::equivalence::{check_measurement_statistics, covariance_sweep, epistemic_to_quantum, exhaustive_sweep, EquivalenceReport};
use epistrict_core::groupoid::{groupoid_report, AxiomCheck};
use epistrict_core::moyal::{run_moyal_suite, MoyalReport};
use epistrict_core::parse::{parse_functional, parse_state, parse_subspace};
use epistrict_core::qudit::{joint_pvm, quadrature_pvm, DenseOperator, QuditSpace, OPERATOR_TOL};
use epistrict_core::symplectic::{lagrangian_count, Subspace};
use epistrict_core::{Kind, Scalar};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Backend, Format, RunConfig};
use crate::{CliError, Report};

/// Rounds to 12 decimals and clears negative zero.
fn clean(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn format(cfg: &RunConfig, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = cfg.output.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!("{f:?} output is not available for this subcommand")))
    }
}

fn to_json(value: &impl Serialize) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn space(cfg: &RunConfig) -> Result<QuditSpace, CliError> {
    if cfg.n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    Ok(QuditSpace::from_prime(cfg.field()?, cfg.n))
}

fn usage<T>(r: epistrict_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Usage(e.to_string()))
}

/// Row-major `[re, im]` pairs.
fn matrix_json(op: &DenseOperator) -> Value {
    let rows: Vec<Value> = op
        .entries()
        .rows()
        .into_iter()
        .map(|row| Value::Array(row.iter().map(|z| json!([clean(z.re), clean(z.im)])).collect()))
        .collect();
    Value::Array(rows)
}

pub fn enumerate_states(cfg: &RunConfig) -> Result<Report, CliError> {
    format(cfg, Format::Json, &[Format::Json])?;
    let space = space(cfg)?;
    let states = enumerate_pure_states(cfg.n, space.prime())?;
    let body = json!({
        "d": space.d(),
        "n": cfg.n,
        "lagrangian_count": lagrangian_count(cfg.n, space.prime()).to_string(),
        "state_count": states.len(),
        "states": states,
    });
    Ok(Report { body: to_json(&body)?, pass: true })
}

pub fn pvm(cfg: &RunConfig, f: &str) -> Result<Report, CliError> {
    format(cfg, Format::Json, &[Format::Json])?;
    let space = space(cfg)?;
    let functional = usage(parse_functional(f, space.kind(), cfg.n))?;
    let pvm = usage(quadrature_pvm(&space, &functional))?;
    let complete = pvm.is_complete(OPERATOR_TOL);
    let idempotent = pvm.is_idempotent(OPERATOR_TOL);
    let outcomes: Vec<Value> = pvm
        .projectors
        .iter()
        .enumerate()
        .map(|(k, p)| json!({ "k": k, "rank": p.rank(1e-9), "projector": matrix_json(p) }))
        .collect();
    let body = json!({
        "functional": f,
        "coefficients": functional.coeffs().iter().map(Scalar::to_string).collect::<Vec<_>>(),
        "constant": functional.constant().to_string(),
        "d": space.d(),
        "n": cfg.n,
        "dim": space.dim(),
        "complete": complete,
        "idempotent": idempotent,
        "outcomes": outcomes,
    });
    Ok(Report { body: to_json(&body)?, pass: complete && idempotent })
}

fn state(cfg: &RunConfig, space: &QuditSpace, text: &str) -> Result<EpistemicState, CliError> {
    usage(parse_state(text, space.kind(), cfg.n))
}

pub fn wigner(cfg: &RunConfig, text: &str) -> Result<Report, CliError> {
    let fmt = format(cfg, Format::Csv, &[Format::Csv, Format::Json])?;
    let space = space(cfg)?;
    let st = state(cfg, &space, text)?;
    let table = epistrict_core::wigner::wigner(&space, &epistemic_to_quantum(&st)?)?;
    let pass = table.min() > -1e-10 && (table.sum() - 1.0).abs() < 1e-10;
    let body = match fmt {
        Format::Csv => {
            let mut out = String::new();
            let header: Vec<String> =
                (1..=cfg.n).flat_map(|i| if cfg.n == 1 { ["m_q".into(), "m_p".into()] } else { [format!("m_q{i}"), format!("m_p{i}")] }).collect();
            writeln!(out, "{},value", header.join(",")).expect("string write");
            for (m, v) in table.entries() {
                let coords: Vec<String> = m.iter().map(u64::to_string).collect();
                writeln!(out, "{},{}", coords.join(","), clean(v)).expect("string write");
            }
            out
        }
        Format::Json => {
            let entries: Vec<Value> = table.entries().map(|(m, v)| json!({ "m": m, "value": clean(v) })).collect();
            to_json(&json!({
                "d": space.d(),
                "n": cfg.n,
                "state": st,
                "sum": clean(table.sum()),
                "min": clean(table.min()),
                "entries": entries,
            }))?
        }
    };
    Ok(Report { body, pass })
}

pub fn measure(cfg: &RunConfig, text: &str, observables: &[String]) -> Result<Report, CliError> {
    format(cfg, Format::Json, &[Format::Json])?;
    let space = space(cfg)?;
    let st = state(cfg, &space, text)?;
    let observable: Subspace = usage(parse_subspace(observables, space.kind(), cfg.n))?;
    if !observable.is_isotropic() {
        return Err(CliError::Usage("the measured functionals must pairwise commute".into()));
    }
    let report = check_measurement_statistics("measure", &st, &observable)?;
    let measurement = st.measure(&observable)?;
    let dist = measurement.distribution()?;
    let pvm = joint_pvm(&space, &observable)?;
    let kind: Kind = space.kind();
    let mut outcomes = Vec::with_capacity(pvm.outcomes.len());
    for (i, (v, _)) in pvm.outcomes.iter().enumerate() {
        let label: Vec<Scalar> = v.iter().map(|&x| kind.from_i64(x as i64)).collect();
        let post = if measurement.is_possible(&label) { Some(measurement.post_state(&label)?) } else { None };
        outcomes.push(json!({
            "outcome": v,
            "epistricted": dist.probability(&label).to_string(),
            "born": clean(report.quantum[i]),
            "post_state": post,
        }));
    }
    let body = json!({
        "d": space.d(),
        "n": cfg.n,
        "state": st,
        "observable": observable.basis().rows().map(|r| r.iter().map(Scalar::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "outcomes": outcomes,
        "max_deviation": report.max_deviation,
        "luders_deviation": report.luders_deviation,
        "pass": report.pass,
    });
    Ok(Report { body: to_json(&body)?, pass: report.pass })
}

pub fn verify(cfg: &RunConfig, exhaustive: bool, cases: usize) -> Result<Report, CliError> {
    let fmt = format(cfg, Format::Json, &[Format::Json, Format::Csv])?;
    let space = space(cfg)?;
    let mut reports: Vec<EquivalenceReport> = Vec::new();
    if exhaustive {
        reports.extend(usage(exhaustive_sweep(cfg.n, space.prime()))?);
    }
    reports.extend(covariance_sweep(cfg.n, space.prime(), cases, cfg.seed)?);
    let pass = reports.iter().all(|r| r.pass);
    let body = match fmt {
        Format::Json => to_json(&reports)?,
        Format::Csv => {
            let mut out = String::from("case_id,check,max_deviation,luders_deviation,pass\n");
            for r in &reports {
                let luders = r.luders_deviation.map(|x| format!("{x:e}")).unwrap_or_default();
                writeln!(out, "{},{},{:e},{},{}", r.case_id, r.check, r.max_deviation, luders, r.pass).expect("string write");
            }
            out
        }
    };
    Ok(Report { body, pass })
}

fn moyal_csv(report: &MoyalReport) -> String {
    let mut out = String::from("check,f,g,hbar,grid_n,error,ratio,order,pass\n");
    let grid = report.grid;
    let mut row = |check: &str, fg: Option<(usize, usize)>, hbar: f64, n: usize, error: f64, ratio: Option<f64>, pass: bool| {
        let (f, g) = fg.map(|(f, g)| (f.to_string(), g.to_string())).unwrap_or_default();
        let ratio_s = ratio.map(|r| format!("{r:.6}")).unwrap_or_default();
        let order = ratio.map(|r| format!("{:.6}", r.log2())).unwrap_or_default();
        writeln!(out, "{check},{f},{g},{hbar},{n},{error:e},{ratio_s},{order},{pass}").expect("string write");
    };
    let tol = epistrict_core::moyal::PRODUCT_TOL;
    for m in &report.pairs {
        row("two_path", Some((m.f, m.g)), grid.hbar(), grid.n(), m.two_path_relative, None, m.two_path_relative < tol);
    }
    row("unit", None, grid.hbar(), grid.n(), report.unit_error, None, report.unit_pass);
    row("associativity", None, grid.hbar(), grid.n(), report.associativity_error, None, report.associativity_error < tol);
    row(
        "associativity_fourier",
        None,
        grid.hbar(),
        grid.n(),
        report.associativity_error_fourier,
        None,
        report.associativity_error_fourier < tol,
    );
    row("hermitian", None, grid.hbar(), grid.n(), report.hermitian_error, None, report.hermitian_error < tol);
    row("ground_state_idempotence", None, grid.hbar(), grid.n(), report.ground_state_idempotence, None, report.ground_state_idempotence < 1e-6);
    row("ground_state_trace", None, grid.hbar(), grid.n(), report.ground_state_trace_error, None, report.ground_state_trace_error < 1e-6);
    row("q_only_commutator", None, grid.hbar(), grid.n(), report.q_only_commutator, None, report.q_only_commutator < 1e-9);
    for m in &report.pairs {
        row("limit", Some((m.f, m.g)), report.limit_hbar, grid.n(), m.limit_residual, None, m.limit_residual < report.limit_hbar);
    }
    let (lo, hi) = epistrict_core::moyal::RATIO_RANGE;
    for c in &report.convergence {
        let pass = c.ratio.is_none_or(|r| (lo..=hi).contains(&r));
        row("commutator", Some((c.f, c.g)), c.hbar, c.n, c.error, c.ratio, pass);
    }
    out
}

pub fn moyal(cfg: &RunConfig) -> Result<Report, CliError> {
    let fmt = format(cfg, Format::Csv, &[Format::Csv, Format::Json])?;
    let report = usage(run_moyal_suite(&cfg.grid))?;
    let body = match fmt {
        Format::Csv => moyal_csv(&report),
        Format::Json => to_json(&report)?,
    };
    Ok(Report { body, pass: report.pass })
}

#[derive(Serialize)]
struct GroupoidOutput {
    n: usize,
    kind: Kind,
    samples: usize,
    seed: u64,
    checks: Vec<AxiomCheck>,
    pass: bool,
}

pub fn groupoid_check(cfg: &RunConfig, samples: usize) -> Result<Report, CliError> {
    format(cfg, Format::Json, &[Format::Json])?;
    if cfg.n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    let kind = cfg.kind(Backend::Rational)?;
    let checks = groupoid_report(cfg.n, kind, samples, cfg.seed);
    let pass = checks.iter().all(|c| c.pass);
    let out = GroupoidOutput { n: cfg.n, kind, samples, seed: cfg.seed, checks, pass };
    Ok(Report { body: to_json(&out)?, pass })
}
