use serde_json::{json, Value};

use jetlie::exterior::{parse_field, parse_form, DiffForm};
use jetlie::integrable::{
    frobenius_1form, involutivity, kdv_first_integral, sym_of_distribution, z_matrix, Branch, Distribution, FirstIntegralSpec,
    IntegrableError, KdvFirstIntegralOptions, PathPlan,
};
use jetlie::symkernel::{scalar, CoordChart, RatFunc, Scalar};

use crate::args::{FirstIntegral, Frobenius};
use crate::report::{code, float, fmt_float, Report};
use crate::{CliError, Ctx};

fn point(s: &str, dim: usize) -> Result<Vec<f64>, CliError> {
    let p: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::Input(format!("bad point '{s}'"))))
        .collect::<Result<_, _>>()?;
    if p.len() != dim {
        return Err(CliError::Input(format!("point '{s}' needs {dim} coordinates")));
    }
    Ok(p)
}

pub fn frobenius(a: &Frobenius, _ctx: &Ctx) -> Result<Report, CliError> {
    let chart = CoordChart::plain(&a.coords).map_err(CliError::input)?;
    let forms: Vec<DiffForm<RatFunc>> = a.form.iter().map(|f| parse_form(f, &chart).map_err(CliError::input)).collect::<Result<_, _>>()?;
    let mut text = String::new();
    let mut j = serde_json::Map::new();
    let integrable = if let [w] = forms.as_slice() {
        let (ok, wedge) = frobenius_1form(w).map_err(CliError::input)?;
        text.push_str(&format!("omega ^ d omega = {}\n", if ok { "0".to_string() } else { wedge.render() }));
        j.insert("witness".into(), json!(if ok { "0".to_string() } else { wedge.render() }));
        ok
    } else {
        let per = involutivity(&forms).map_err(CliError::input)?;
        text.push_str(&format!("involutive per form: {per:?}\n"));
        j.insert("involutive".into(), json!(per));
        per.iter().all(|&b| b)
    };
    text.push_str(&format!("frobenius: {}\n", if integrable { "integrable" } else { "not integrable" }));
    j.insert("frobenius".into(), json!(integrable));
    let mut closed: Vec<bool> = forms.iter().map(|f| f.d().is_zero()).collect();
    let mut integrand = (forms.len() == 1 && closed[0]).then(|| forms[0].clone());
    let mut ok = integrable;
    if !a.field.is_empty() {
        let fields = a.field.iter().map(|f| parse_field(f, &chart).map_err(CliError::input)).collect::<Result<Vec<_>, _>>()?;
        let d = Distribution::from_forms(&chart, forms.clone()).map_err(CliError::input)?;
        let mut sym = Vec::new();
        for v in &fields {
            sym.push(sym_of_distribution(v, &d).map_err(CliError::input)?.is_some());
        }
        let rep = z_matrix(&d, &fields).map_err(|e| match e {
            IntegrableError::SingularZ => CliError::Input("Z is singular for these fields".into()),
            e => CliError::input(e),
        })?;
        let zr: Vec<Vec<String>> = rep.z.iter().map(|r| r.iter().map(RatFunc::render).collect()).collect();
        let barred: Vec<String> = rep.barred.iter().map(DiffForm::render).collect();
        text.push_str(&format!("symmetry: {sym:?}\nZ = {zr:?}\nbarred: {}\n", barred.join(" | ")));
        closed = rep.closed.clone();
        ok &= closed.iter().all(|&c| c);
        integrand = (rep.barred.len() == 1 && closed[0]).then(|| rep.barred[0].clone());
        j.insert("symmetry".into(), json!(sym));
        j.insert("Z".into(), json!(zr));
        j.insert("barred".into(), json!(barred));
    }
    text.push_str(&format!("closed: {closed:?}\n"));
    j.insert("closed".into(), json!(closed.iter().all(|&c| c)));
    if !a.point.is_empty() {
        let Some(form) = integrand else {
            return Err(CliError::Input("points need a single closed 1-form (possibly after --field)".into()));
        };
        let base = a.base.clone().ok_or_else(|| CliError::Input("points need --base".into()))?;
        let spec = FirstIntegralSpec::new(form, base, 1e-10).map_err(CliError::input)?;
        let mut samples = Vec::new();
        for p in &a.point {
            let p = point(p, chart.dim())?;
            let phi = spec.value(&p, &PathPlan::default()).map_err(CliError::input)?;
            text.push_str(&format!("phi({p:?}) = {phi:.12}\n"));
            samples.push(json!({ "point": p.iter().map(|x| float(*x)).collect::<Vec<_>>(), "phi": float(phi) }));
        }
        j.insert("phi_samples".into(), Value::Array(samples));
    }
    Ok(Report::new(code(ok), text, Value::Object(j)))
}

fn rational_arg(name: &str, s: &str) -> Result<Scalar, CliError> {
    scalar::parse(s).ok_or_else(|| CliError::Input(format!("--{name} must be rational, got '{s}'")))
}

pub fn first_integral(a: &FirstIntegral, ctx: &Ctx) -> Result<Report, CliError> {
    let (c, c1, c2) = (rational_arg("c", &a.c)?, rational_arg("c1", &a.c1)?, rational_arg("c2", &a.c2)?);
    let branch = match a.branch.as_str() {
        "ascending" => Branch::Ascending,
        "descending" => Branch::Descending,
        other => return Err(CliError::Input(format!("unknown branch '{other}'"))),
    };
    let opts = KdvFirstIntegralOptions { v0: a.v0, eps: a.eps, y_end: a.y_end, branch, exec: ctx.exec, ..Default::default() };
    let r = kdv_first_integral(&c, &c1, &c2, &opts).map_err(CliError::input)?;
    let (frob, _) = frobenius_1form(&r.omega).map_err(CliError::input)?;
    let ok = r.closed && r.max_drift < a.tol;
    let barred = r.spec.as_ref().map(|s| s.form().render());
    let mut text = format!("omega = {}\nZ = {}\n", r.omega.render(), r.z.render());
    if let Some(b) = &barred {
        text.push_str(&format!("barred = {b}\n"));
    }
    text.push_str(&format!("closed: {}\n", r.closed));
    if r.degenerate {
        text.push_str("equilibrium: constant trajectory\n");
    }
    if let Some(y) = r.truncated_at {
        text.push_str(&format!("turning point near y = {y:.3}, window truncated\n"));
    }
    for (y, v, phi) in &r.samples {
        text.push_str(&format!("  y = {y:.2}  v = {v:.9}  phi = {phi:.12}\n"));
    }
    text.push_str(&format!("max drift: {} (tolerance {})\n{}\n", fmt_float(r.max_drift), fmt_float(a.tol), if ok { "verified" } else { "FAILED" }));
    let samples: Vec<Value> = r.samples.iter().map(|(y, v, p)| json!([float(*y), float(*v), float(*p)])).collect();
    let j = json!({
        "closed": r.closed,
        "frobenius": frob,
        "Z": r.z.render(),
        "barred": barred,
        "phi_samples": samples,
        "max_drift": float(r.max_drift),
        "truncated_at": r.truncated_at.map(float),
        "degenerate": r.degenerate,
        "verified": ok,
    });
    Ok(Report::new(code(ok), text, j))
}
