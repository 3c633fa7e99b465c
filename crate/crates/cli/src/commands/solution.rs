use serde_json::{json, Value};

use jetlie::closedform::{
    apply_flow, family, residual_exact_rational, residual_numeric, soliton_profile, standard_profile_points, traveling_wave_check, tx_chart,
    ClosedFormError, Expr, FamilyKind, FamilyParams, Flow, Grid, SingularPolicy, Variant,
};
use jetlie::jetspace::{JetCoord, PdeSpec};
use jetlie::par;
use jetlie::symkernel::scalar;

use crate::args::{CheckSolution, FlowArgs, Solution};
use crate::report::{code, float, fmt_float, Report};
use crate::{CliError, Ctx};

fn expr(s: &str) -> Result<Expr, CliError> {
    Expr::parse(s).map_err(|e| CliError::Input(format!("'{s}': {e}")))
}

fn key_values(items: &[String]) -> Result<FamilyParams, CliError> {
    items
        .iter()
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Input(format!("expected name=value, got '{kv}'")))?;
            Ok((k.trim().to_string(), expr(v.trim())?))
        })
        .collect()
}

struct Candidate {
    label: String,
    u: Expr,
    kind: Option<FamilyKind>,
    variant: Variant,
    params: FamilyParams,
}

fn candidate(s: &Solution, ctx: &Ctx) -> Result<Candidate, CliError> {
    let variant = Variant::parse(&s.variant).ok_or_else(|| CliError::Input(format!("unknown variant '{}'", s.variant)))?;
    let params = key_values(&s.params)?;
    if let Some(src) = &s.solution {
        let text = ctx.problem.solutions.iter().find(|(n, _)| n == src).map(|(_, e)| e.as_str()).unwrap_or(src);
        return Ok(Candidate { label: text.to_string(), u: expr(text)?, kind: None, variant, params });
    }
    let kind = FamilyKind::parse(&s.family).ok_or_else(|| CliError::Input(format!("unknown family '{}'", s.family)))?;
    let u = family(kind, variant, &params).map_err(CliError::input)?;
    Ok(Candidate { label: format!("{} ({})", kind.name(), variant.name()), u, kind: Some(kind), variant, params })
}

enum Verdict {
    Exact { residual: String },
    Numeric { max: f64, argmax: Option<(f64, f64)>, evaluated: usize, skipped: usize },
    SingularAt(f64, f64),
}

/// Max `|Δ[u]|` for a problem equation in `t` and/or `x` with one dependent variable.
fn equation_residual(u: &Expr, pde: &PdeSpec, grid: &Grid, strict: bool, ctx: &Ctx, tol: f64) -> Result<(bool, Verdict), CliError> {
    let jet = pde.jet();
    if jet.num_dependent() != 1 || jet.independents().iter().any(|n| n != "t" && n != "x") {
        return Err(CliError::Input("residual checks need one dependent variable of t and/or x".into()));
    }
    let coords: Vec<Expr> = jet
        .coords()
        .iter()
        .map(|c| match c {
            JetCoord::Independent(i) => Expr::var(&jet.independents()[*i]),
            JetCoord::Dependent { multi, .. } => multi.iter().fold(u.clone(), |e, &i| e.diff(&jet.independents()[i])),
        })
        .collect();
    let values = par::map(ctx.exec, &grid.points, |&(t, x)| -> Result<f64, ClosedFormError> {
        let env = |n: &str| match n {
            "t" => Some(t),
            "x" => Some(x),
            _ => None,
        };
        let point = coords.iter().map(|e| e.eval(&env)).collect::<Result<Vec<_>, _>>()?;
        Ok(pde.delta().eval_f64(&point))
    });
    let (mut max, mut argmax, mut evaluated, mut skipped) = (0.0f64, None, 0, 0);
    for (&p, v) in grid.points.iter().zip(values) {
        match v {
            Ok(v) if v.is_finite() => {
                evaluated += 1;
                if argmax.is_none() || v.abs() > max {
                    max = v.abs();
                    argmax = Some(p);
                }
            }
            Ok(_) | Err(ClosedFormError::Singular | ClosedFormError::Domain) if !strict => skipped += 1,
            Ok(_) | Err(ClosedFormError::Singular | ClosedFormError::Domain) => return Ok((false, Verdict::SingularAt(p.0, p.1))),
            Err(e) => return Err(CliError::input(e)),
        }
    }
    Ok((evaluated > 0 && max < tol, Verdict::Numeric { max, argmax, evaluated, skipped }))
}

fn residual(u: &Expr, s: &Solution, ctx: &Ctx, tol: f64) -> Result<(bool, Verdict), CliError> {
    if ctx.problem.name != "kdv3" {
        let grid = Grid::parse(&s.grid).map_err(CliError::input)?;
        return equation_residual(u, &ctx.problem.pde, &grid, s.strict, ctx, tol);
    }
    if let Ok(r) = u.to_ratfunc(&tx_chart()) {
        let res = residual_exact_rational(&r).map_err(CliError::input)?;
        return Ok((res.is_zero(), Verdict::Exact { residual: res.render() }));
    }
    let grid = Grid::parse(&s.grid).map_err(CliError::input)?;
    let policy = if s.strict { SingularPolicy::Fail } else { SingularPolicy::Skip };
    match residual_numeric(u, &grid, policy, ctx.exec) {
        Ok(rep) => Ok((rep.passes(tol), Verdict::Numeric { max: rep.max, argmax: rep.argmax, evaluated: rep.evaluated, skipped: rep.skipped })),
        Err(ClosedFormError::SingularAt(t, x)) => Ok((false, Verdict::SingularAt(t, x))),
        Err(e) => Err(CliError::input(e)),
    }
}

fn verdict_text(v: &Verdict, tol: f64) -> String {
    match v {
        Verdict::Exact { residual } => format!("exact residual: {residual}\n"),
        Verdict::Numeric { max, argmax, evaluated, skipped } => {
            let at = argmax.map(|(t, x)| format!(" at (t, x) = ({t}, {x})")).unwrap_or_default();
            format!("max residual: {}{at} over {evaluated} points ({skipped} skipped), tolerance {}\n", fmt_float(*max), fmt_float(tol))
        }
        Verdict::SingularAt(t, x) => format!("singular at (t, x) = ({t}, {x})\n"),
    }
}

fn verdict_json(v: &Verdict, tol: f64) -> Value {
    match v {
        Verdict::Exact { residual } => json!({ "method": "exact", "residual": residual }),
        Verdict::Numeric { max, argmax, evaluated, skipped } => json!({
            "method": "numeric",
            "max_residual": float(*max),
            "argmax": argmax.map(|(t, x)| vec![float(t), float(x)]),
            "evaluated": evaluated,
            "skipped": skipped,
            "tol": float(tol),
        }),
        Verdict::SingularAt(t, x) => json!({ "method": "numeric", "singular_at": [float(*t), float(*x)] }),
    }
}

pub fn check_solution(a: &CheckSolution, ctx: &Ctx) -> Result<Report, CliError> {
    let tol = a.solution.tol.unwrap_or(1e-9);
    let cand = candidate(&a.solution, ctx)?;
    let (mut ok, verdict) = residual(&cand.u, &a.solution, ctx, tol)?;
    let mut text = format!("u = {}\n[{}]\n{}", cand.u.render(), cand.label, verdict_text(&verdict, tol));
    let mut j = json!({ "solution": cand.label, "u": cand.u.render(), "verdict": verdict_json(&verdict, tol) });
    if a.traveling_wave {
        if cand.kind != Some(FamilyKind::Soliton) {
            return Err(CliError::Input("--traveling-wave needs the soliton family".into()));
        }
        let c_expr = cand.params.get("c").cloned().unwrap_or_else(|| Expr::int(4));
        let c = scalar::parse(&c_expr.render()).ok_or_else(|| CliError::Input("--traveling-wave needs a rational c".into()))?;
        let eps = cand.params.get("eps").cloned().unwrap_or_else(Expr::zero);
        let v = soliton_profile(cand.variant, &Expr::scalar(c.clone()), &eps);
        let zero = scalar::zero();
        let tw = traveling_wave_check(&c, &zero, &zero, &v, &standard_profile_points()).map_err(CliError::input)?;
        let pass = tw.passes(tol);
        ok &= pass;
        text.push_str(&format!(
            "traveling wave v(y) = {}: first integral {}, integrated once {}\n",
            v.render(),
            fmt_float(tw.first_integral),
            fmt_float(tw.integrated_once)
        ));
        j.as_object_mut().unwrap().insert(
            "traveling_wave".into(),
            json!({ "profile": v.render(), "first_integral": float(tw.first_integral), "integrated_once": float(tw.integrated_once), "passed": pass }),
        );
    }
    text.push_str(if ok { "verified\n" } else { "FAILED\n" });
    j.as_object_mut().unwrap().insert("verified".into(), json!(ok));
    Ok(Report::new(code(ok), text, j))
}

fn parse_flow(a: &FlowArgs) -> Result<Flow, CliError> {
    let s = expr(&a.s)?;
    Ok(match a.flow.as_str() {
        "theta1" | "translate" => Flow::Translate { s },
        "theta2" | "time-shift" => Flow::TimeShift { s },
        "theta3" | "galilean" => Flow::Galilean { s },
        "theta4" | "scaling" => Flow::Scaling { s },
        "five-param" => {
            let mut p = key_values(&a.flow_params)?;
            for k in p.keys() {
                if !["alpha", "beta", "gamma", "delta", "lambda"].contains(&k.as_str()) {
                    return Err(CliError::Input(format!("unknown flow parameter '{k}'")));
                }
            }
            let mut take = |k: &str, d: i64| p.remove(k).unwrap_or_else(|| Expr::int(d));
            let (alpha, beta, gamma, delta) = (take("alpha", 0), take("beta", 0), take("gamma", 0), take("delta", 1));
            let lambda = p.remove("lambda").unwrap_or_else(|| gamma.clone());
            Flow::FiveParameter { alpha, beta, gamma, delta, lambda }
        }
        other => return Err(CliError::Input(format!("unknown flow '{other}'"))),
    })
}

pub fn flow(a: &FlowArgs, ctx: &Ctx) -> Result<Report, CliError> {
    let tol = a.solution.tol.unwrap_or(1e-8);
    let cand = candidate(&a.solution, ctx)?;
    let f = parse_flow(a)?;
    let moved = apply_flow(&cand.u, &f).map_err(CliError::input)?;
    let (ok, verdict) = residual(&moved, &a.solution, ctx, tol)?;
    let text = format!(
        "{} applied to {}\nu = {}\n{}{}\n",
        f.name(),
        cand.label,
        moved.render(),
        verdict_text(&verdict, tol),
        if ok { "verified" } else { "FAILED" }
    );
    let j = json!({ "flow": f.name(), "solution": cand.label, "u": moved.render(), "verdict": verdict_json(&verdict, tol), "verified": ok });
    Ok(Report::new(code(ok), text, j))
}
