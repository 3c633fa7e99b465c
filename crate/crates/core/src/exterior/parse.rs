//! Text form of differential forms: `coef dx^dy + coef*dz - dt`.
//!
//! Each term is an optional coefficient expression followed by a wedge of
//! coordinate differentials `d<name>`. Terms are separated by top-level `+`/`-`.

use super::field::VectorField;
use super::form::DiffForm;
use super::ExteriorError;
use crate::symkernel::{parse_ratfunc, Chart, Poly, RatFunc};

fn split_terms(src: &str) -> Result<Vec<(bool, String)>, ExteriorError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let mut last_operand = false;
    for ch in src.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(ExteriorError::Parse("unbalanced ')'".into()));
        }
        if (ch == '+' || ch == '-') && depth == 0 && last_operand {
            out.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
            last_operand = false;
            continue;
        }
        if (ch == '+' || ch == '-') && depth == 0 && cur.trim().is_empty() {
            if ch == '-' {
                neg = !neg;
            }
            continue;
        }
        if !ch.is_whitespace() {
            last_operand = ch.is_ascii_alphanumeric() || ch == '_' || ch == ')';
        }
        cur.push(ch);
    }
    if depth != 0 {
        return Err(ExteriorError::Parse("unbalanced '('".into()));
    }
    out.push((neg, cur));
    Ok(out)
}

/// Strips a trailing `d<a>^d<b>...` from a term, returning the coefficient
/// text and the coordinate indices in written order.
fn split_basis(term: &str, chart: &Chart) -> Result<(String, Vec<usize>), ExteriorError> {
    let mut rest = term.trim_end().to_string();
    let mut idx = Vec::new();
    loop {
        let start = rest
            .char_indices()
            .rev()
            .take_while(|(_, c)| c.is_ascii_alphanumeric() || *c == '_')
            .last()
            .map(|(i, _)| i);
        let Some(start) = start else { break };
        let ident = &rest[start..];
        let coord = ident.strip_prefix('d').and_then(|n| chart.index(n));
        match coord {
            Some(c) => {
                idx.push(c);
                rest.truncate(start);
                let trimmed = rest.trim_end();
                if let Some(before) = trimmed.strip_suffix('^') {
                    rest = before.trim_end().to_string();
                    continue;
                }
                rest = trimmed.to_string();
                break;
            }
            None if idx.is_empty() => break,
            None => return Err(ExteriorError::Parse(format!("`{ident}` is not a differential"))),
        }
    }
    idx.reverse();
    let coef = rest.trim().trim_end_matches('*').trim().to_string();
    Ok((coef, idx))
}

pub fn parse_form(src: &str, chart: &Chart) -> Result<DiffForm<RatFunc>, ExteriorError> {
    let mut form: Option<DiffForm<RatFunc>> = None;
    for (neg, term) in split_terms(src)? {
        if term.trim().is_empty() {
            return Err(ExteriorError::Parse("empty term".into()));
        }
        let (coef_text, idx) = split_basis(&term, chart)?;
        let mut coef = if coef_text.is_empty() {
            RatFunc::one(chart)
        } else {
            parse_ratfunc(&coef_text, chart)?
        };
        if neg {
            coef = -coef;
        }
        let f = form.get_or_insert_with(|| DiffForm::zero(chart, idx.len()));
        if f.grade() != idx.len() {
            return Err(ExteriorError::GradeMismatch(f.grade(), idx.len()));
        }
        f.add_term(&idx, coef);
    }
    form.ok_or_else(|| ExteriorError::Parse("empty form".into()))
}


/// Parses a vector field written as `coord: expr; coord: expr; ...`.
pub fn parse_field(src: &str, chart: &Chart) -> Result<VectorField<RatFunc>, ExteriorError> {
    let mut v = VectorField::zero(chart);
    for part in src.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, expr) = part.split_once(':').ok_or_else(|| ExteriorError::Parse(format!("expected 'coord: expr' in '{part}'")))?;
        let name = name.trim();
        let idx = chart.index(name).ok_or_else(|| ExteriorError::UnknownCoordinate(name.to_string()))?;
        v.add_component(idx, parse_ratfunc(expr, chart)?);
    }
    Ok(v)
}

/// Polynomial-coefficient variant of [`parse_field`].
pub fn parse_poly_field(src: &str, chart: &Chart) -> Result<VectorField<Poly>, ExteriorError> {
    let v = parse_field(src, chart)?;
    let comps = v
        .components()
        .map(|(k, c)| c.as_poly().map(|p| (k, p)).ok_or_else(|| ExteriorError::Parse(format!("non-polynomial coefficient {}", c.render()))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VectorField::from_components(chart, comps))
}
