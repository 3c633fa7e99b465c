use std::fmt::Write;

use serde_json::{json, Value};

use jetlie::detsolve::{
    assemble_classical, assemble_harrison, build_ideal, solve_system, verify_symmetry as verify_generators, ClassicalOptions, ConditionSet,
    ContactIdeal, EquationForm, HarrisonOptions, SymmetryBasis,
};
use jetlie::exterior::VectorField;
use jetlie::jetspace::{apply_to_equation, on_solution_reduce, prolong as prolong_field, Reduction};
use jetlie::symkernel::{parse_poly, Poly};

use crate::args::{Classical, Harrison, Prolong, ReduceCheck, Verify};
use crate::report::{basis_json, code, field_json, field_text, rational, Report};
use crate::{CliError, Ctx};

fn ideal(ctx: &Ctx, alpha7: &str) -> Result<ContactIdeal, CliError> {
    let form = EquationForm::parse(alpha7).ok_or_else(|| CliError::Input(format!("unknown alpha7 form '{alpha7}'")))?;
    build_ideal(&ctx.problem.pde, form).map_err(CliError::input)
}

fn conditions(arg: &Option<String>, ctx: &Ctx) -> Result<ConditionSet, CliError> {
    match arg.as_ref().or(ctx.options.conditions.as_ref()) {
        Some(s) => ConditionSet::parse(s).map_err(CliError::input),
        None => Ok(ConditionSet::default()),
    }
}

fn basis_report(title: &str, basis: &SymmetryBasis, extra: Value) -> Report {
    let mut text = format!("{title}\ndims: {}\n", basis.dim());
    for (i, f) in basis.fields.iter().enumerate() {
        writeln!(text, "  [{}] {}", i + 1, field_text(f)).unwrap();
    }
    let mut j = basis_json(&basis.fields);
    let obj = j.as_object_mut().expect("object");
    obj.insert("nullity".into(), json!(basis.nullity));
    if let Value::Object(m) = extra {
        obj.extend(m);
    }
    Report::new(0, text, j)
}

pub fn solve_harrison(a: &Harrison, ctx: &Ctx) -> Result<Report, CliError> {
    let id = ideal(ctx, &a.alpha7)?;
    let opts = HarrisonOptions {
        degree: a.degree.or(ctx.options.degree).unwrap_or(1),
        mult_degree: a.mult_degree.or(ctx.options.mult_degree).unwrap_or(1),
        conditions: conditions(&a.conditions, ctx)?,
        exec: ctx.exec,
        ..Default::default()
    };
    let sys = assemble_harrison(&id, &opts).map_err(CliError::input)?;
    let basis = solve_system(&sys);
    let multipliers: Vec<Value> = basis
        .multipliers
        .iter()
        .map(|m| Value::Object(m.iter().map(|(k, v)| (k.clone(), rational(v))).collect()))
        .collect();
    let title = format!(
        "harrison: {} unknowns, {} equations, conditions {}, degree {}, multiplier degree {}",
        sys.num_unknowns(),
        sys.matrix.num_rows(),
        opts.conditions,
        opts.degree,
        opts.mult_degree
    );
    let extra = json!({
        "conditions": opts.conditions.to_string(),
        "unknowns": sys.num_unknowns(),
        "equations": sys.matrix.num_rows(),
        "multipliers": multipliers,
    });
    Ok(basis_report(&title, &basis, extra))
}

pub fn solve_classical(a: &Classical, ctx: &Ctx) -> Result<Report, CliError> {
    let opts = ClassicalOptions {
        degree: a.degree.or(ctx.options.degree).unwrap_or(2),
        order: a.order,
        exec: ctx.exec,
        ..Default::default()
    };
    let sys = assemble_classical(&ctx.problem.pde, &opts).map_err(CliError::input)?;
    let basis = solve_system(&sys);
    let title = format!("classical: {} unknowns, {} equations, degree {}", sys.num_unknowns(), sys.matrix.num_rows(), opts.degree);
    Ok(basis_report(&title, &basis, json!({ "unknowns": sys.num_unknowns(), "equations": sys.matrix.num_rows() })))
}

fn reduction_json(r: &Reduction) -> Value {
    json!({
        "vanishes": r.vanishes(),
        "remainder": r.remainder.render(),
        "multiplier": r.multiplier.render(),
        "cofactor": r.cofactor.as_ref().map(Poly::render),
    })
}

fn reduction_text(r: &Reduction) -> String {
    let mut s = format!("remainder: {}\nmultiplier: {}\n", r.remainder.render(), r.multiplier.render());
    if let Some(c) = &r.cofactor {
        writeln!(s, "cofactor: {}", c.render()).unwrap();
    }
    s
}

fn classical_reduction(field: &VectorField<Poly>, ctx: &Ctx) -> Result<Reduction, CliError> {
    let pde = &ctx.problem.pde;
    let base = pde.jet().with_order(0);
    let pr = prolong_field(field, pde.jet().order(), &base).map_err(CliError::input)?;
    let applied = apply_to_equation(&pr, pde).map_err(CliError::input)?;
    on_solution_reduce(&applied, pde).map_err(CliError::input)
}

pub fn verify_symmetry(a: &Verify, ctx: &Ctx) -> Result<Report, CliError> {
    let fields = ctx.problem.fields(&a.field)?;
    let mut text = String::new();
    let mut results = Vec::new();
    let mut all = true;
    match a.method.as_str() {
        "classical" => {
            for (name, f) in &fields {
                let r = classical_reduction(f, ctx)?;
                all &= r.vanishes();
                writeln!(text, "{name}: {}", if r.vanishes() { "symmetry" } else { "not a symmetry" }).unwrap();
                text.push_str(&reduction_text(&r));
                let mut j = reduction_json(&r);
                j.as_object_mut().unwrap().insert("field".into(), json!(name));
                results.push(j);
            }
        }
        "harrison" => {
            let id = ideal(ctx, &a.alpha7)?;
            let conds = conditions(&a.conditions, ctx)?;
            let jet = ctx.problem.pde.jet();
            for (name, f) in &fields {
                let point = f.components().all(|(i, _)| jet.is_base(i));
                let v = if point { prolong_field(f, id.jet().order(), &jet.with_order(0)).map_err(CliError::input)? } else { f.clone() };
                let verdicts = verify_generators(&v, &id, conds.conditions(), a.mult_degree.or(ctx.options.mult_degree).unwrap_or(1))
                    .map_err(CliError::input)?;
                let failed: Vec<usize> = verdicts.iter().filter(|v| !v.passed).map(|v| v.generator).collect();
                all &= failed.is_empty();
                writeln!(text, "{name}: {}", if failed.is_empty() { "symmetry" } else { "not a symmetry" }).unwrap();
                let mut gens = Vec::new();
                for v in &verdicts {
                    let w: Vec<String> = v.witnesses.iter().map(|(k, p)| format!("{k} = {}", p.render())).collect();
                    writeln!(text, "  alpha{} ({}): {}{}", v.generator, v.mode.name(), if v.passed { "ok" } else { "FAIL" }, if w.is_empty() { String::new() } else { format!(" [{}]", w.join(", ")) }).unwrap();
                    gens.push(json!({
                        "generator": v.generator,
                        "mode": v.mode.name(),
                        "passed": v.passed,
                        "witnesses": v.witnesses.iter().map(|(k, p)| (k.clone(), Value::String(p.render()))).collect::<serde_json::Map<_, _>>(),
                    }));
                }
                results.push(json!({ "field": name, "prolonged": field_json(&v), "passed": failed.is_empty(), "failed": failed, "generators": gens }));
            }
        }
        other => return Err(CliError::Input(format!("unknown method '{other}'"))),
    }
    Ok(Report::new(code(all), text, json!({ "method": a.method, "verified": all, "results": results })))
}

pub fn prolong(a: &Prolong, ctx: &Ctx) -> Result<Report, CliError> {
    let jet = ctx.problem.pde.jet();
    let order = a.order.unwrap_or(jet.order());
    let mut text = String::new();
    let mut out = Vec::new();
    for (name, f) in ctx.problem.fields(&a.field)? {
        let pr = prolong_field(&f, order, &jet.with_order(0)).map_err(CliError::input)?;
        writeln!(text, "pr{order} {name} = {}", field_text(&pr)).unwrap();
        out.push(json!({ "field": name, "order": order, "prolonged": field_json(&pr) }));
    }
    Ok(Report::new(0, text, json!({ "results": out })))
}

pub fn reduce_check(a: &ReduceCheck, ctx: &Ctx) -> Result<Report, CliError> {
    let pde = &ctx.problem.pde;
    let (label, r) = match (&a.expr, &a.field) {
        (Some(e), None) => {
            let p = parse_poly(e, pde.jet().chart()).map_err(CliError::input)?;
            (p.render(), on_solution_reduce(&p, pde).map_err(CliError::input)?)
        }
        (None, Some(f)) => {
            let fields = ctx.problem.fields(f)?;
            let [(name, field)] = fields.as_slice() else {
                return Err(CliError::Input("reduce-check takes a single field".into()));
            };
            (format!("pr {name} (equation)"), classical_reduction(field, ctx)?)
        }
        _ => return Err(CliError::Input("give exactly one of --expr or --field".into())),
    };
    let text = format!("reducing {label} modulo {} = 0\n{}", pde.delta().render(), reduction_text(&r));
    Ok(Report::new(code(r.vanishes()), text, reduction_json(&r)))
}
