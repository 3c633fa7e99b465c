use std::fmt::Write;

use serde_json::{json, Value};

use jetlie::exterior::VectorField;
use jetlie::liealg::{derived_series, is_solvable, jacobi_check, render_combination, structure_constants, BracketTable, LieError};
use jetlie::symkernel::Poly;

use crate::args::Basis;
use crate::report::{field_text, rationals, Report};
use crate::{CliError, Ctx};

fn load_basis(a: &Basis, ctx: &Ctx) -> Result<(Vec<String>, Vec<VectorField<Poly>>), CliError> {
    let mut named = Vec::new();
    if let Some(b) = &a.basis {
        named.extend(ctx.problem.fields(b)?);
    }
    for f in &a.field {
        let n = named.len();
        named.extend(ctx.problem.fields(f)?.into_iter().map(|(_, v)| (format!("f{}", n + 1), v)));
    }
    if named.is_empty() {
        return Err(CliError::Input("no basis given (use --basis or --field)".into()));
    }
    Ok(named.into_iter().unzip())
}

/// The inner `Err` carries the pair whose bracket leaves the span.
fn table(fields: &[VectorField<Poly>]) -> Result<Result<BracketTable, (usize, usize)>, CliError> {
    match structure_constants(fields) {
        Ok(t) => Ok(Ok(t)),
        Err(LieError::NotClosed(i, j)) => Ok(Err((i, j))),
        Err(e) => Err(CliError::input(e)),
    }
}

fn not_closed(names: &[String], (i, j): (usize, usize)) -> Report {
    let text = format!("[{}, {}] leaves the span\n", names[i], names[j]);
    Report::new(1, text, json!({ "dims": names.len(), "closed": false, "pair": [names[i], names[j]] }))
}

pub fn brackets(a: &Basis, ctx: &Ctx) -> Result<Report, CliError> {
    let (names, fields) = load_basis(a, ctx)?;
    let t = match table(&fields)? {
        Ok(t) => t,
        Err(pair) => return Ok(not_closed(&names, pair)),
    };
    let jacobi = jacobi_check(&t);
    let mut text = String::new();
    for (n, f) in names.iter().zip(&fields) {
        writeln!(text, "{n} = {}", field_text(f)).unwrap();
    }
    for i in 0..t.dim() {
        for j in i + 1..t.dim() {
            writeln!(text, "[{}, {}] = {}", names[i], names[j], render_combination(&t.get(i, j), &names)).unwrap();
        }
    }
    writeln!(text, "jacobi: {}", if jacobi { "ok" } else { "FAIL" }).unwrap();
    let constants: Vec<Value> = (0..t.dim()).map(|i| Value::Array((0..t.dim()).map(|j| rationals(&t.get(i, j))).collect())).collect();
    let j = json!({
        "dims": t.dim(),
        "names": names,
        "c": t.render_matrix(&names),
        "constants": constants,
        "closed": true,
        "jacobi": jacobi,
    });
    Ok(Report::new(if jacobi { 0 } else { 1 }, text, j))
}

pub fn solvable(a: &Basis, ctx: &Ctx) -> Result<Report, CliError> {
    let (names, fields) = load_basis(a, ctx)?;
    let t = match table(&fields)? {
        Ok(t) => t,
        Err(pair) => return Ok(not_closed(&names, pair)),
    };
    let series = derived_series(&t);
    let ok = is_solvable(&t);
    let dims: Vec<String> = series.iter().map(|d| d.to_string()).collect();
    let text = format!("derived series: {}\nsolvable: {}\n", dims.join(" > "), if ok { "yes" } else { "no" });
    Ok(Report::new(if ok { 0 } else { 1 }, text, json!({ "dims": t.dim(), "derived_series": series, "solvable": ok })))
}
