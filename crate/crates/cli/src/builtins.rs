use jetlie::exterior::{parse_poly_field, VectorField};
use jetlie::jetspace::{JetSpec, PdeSpec};
use jetlie::symkernel::Poly;

use crate::CliError;

pub const PDE_NAMES: [&str; 5] = ["kdv3", "kdv2w", "ode-1.8", "ode-1.10", "ode-1.11"];

pub const KDV_X: [(&str, &str); 4] = [("X1", "x: 1"), ("X2", "t: 1"), ("X3", "x: t; u: 1"), ("X4", "x: x; t: 3*t; u: -2*u")];

pub const KDV_V: [(&str, &str); 4] = [
    ("v1", "x: 1"),
    ("v2", "t: 1"),
    ("v3", "x: t; u: 1; u_t: -u_x; u_tt: -2*u_tx; u_tx: -u_xx"),
    ("v4", "x: x; t: 3*t; u: -2*u; u_t: -5*u_t; u_x: -3*u_x; u_tt: -8*u_tt; u_tx: -6*u_tx; u_xx: -4*u_xx"),
];

/// The solved family `A_1 ... A_8` split along `c_1 ... c_4`.
pub const KDV_A: [(&str, &str); 4] = [
    ("A1", "t: t; x: x/3; u: -2*u/3; u_t: -5*u_t/3; u_x: -u_x; u_tt: -8*u_tt/3; u_tx: -2*u_tx; u_xx: -4*u_xx/3"),
    ("A2", "t: 1"),
    ("A3", "x: t; u: 1; u_t: -u_x; u_tt: -2*u_tx; u_tx: -u_xx"),
    ("A4", "x: 1"),
];

const ODE8: [(&str, &str); 2] = [("X1", "x: 1"), ("X2", "x: x; y: -2*y")];
const ODE10: [(&str, &str); 3] = [("X1", "eta: eta^3"), ("X2", "eta: u*eta^3"), ("X3", "u: 2*u; eta: -3*eta")];
const ODE11: [(&str, &str); 1] = [("X", "t: t*(3 + t^2); xi: -3*(1 + t^2)*xi")];

/// A problem: the equation plus the named fields that ship with it.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub pde: PdeSpec,
    pub fields: Vec<(String, String)>,
    pub solutions: Vec<(String, String)>,
}

fn owned(list: &[(&str, &str)]) -> Vec<(String, String)> {
    list.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

pub fn builtin_pde(name: &str) -> Result<Problem, CliError> {
    let jet = |ind: &[&str], dep: &[&str], order| JetSpec::new(ind, dep, order).map_err(CliError::input);
    let (pde, fields) = match name {
        "kdv3" => (
            PdeSpec::parse(JetSpec::kdv(3), "u_xxx + u*u_x + u_t", "u_xxx"),
            [owned(&KDV_X), owned(&KDV_V), owned(&KDV_A)].concat(),
        ),
        "kdv2w" => (PdeSpec::parse(jet(&["t", "x"], &["u", "w"], 2)?, "w_xx + u*w + u_t", "w_xx"), Vec::new()),
        "ode-1.8" => (PdeSpec::parse(jet(&["x"], &["y"], 3)?, "y_xxx + y*y_x", "y_xxx"), owned(&ODE8)),
        "ode-1.10" => (PdeSpec::parse(jet(&["u"], &["eta"], 2)?, "u*eta^4 + 3*eta_u^2 - eta*eta_uu", "eta_uu"), owned(&ODE10)),
        "ode-1.11" => (
            PdeSpec::parse(jet(&["t"], &["xi"], 1)?, "4*t^4*xi^3 + 3*xi - 10*t*xi^2 + 12*t^2*xi^3 + t*xi_t", "xi_t"),
            owned(&ODE11),
        ),
        other => return Err(CliError::Input(format!("unknown pde '{other}' (known: {})", PDE_NAMES.join(", ")))),
    };
    Ok(Problem { name: name.to_string(), pde: pde.map_err(CliError::input)?, fields, solutions: Vec::new() })
}

/// Expands `v1..v4` or `v1,v3` into names.
fn expand_names(spec: &str) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let split = |s: &str| -> Result<(String, u32), CliError> {
                let pos = s.find(|c: char| c.is_ascii_digit()).ok_or_else(|| CliError::Input(format!("bad range '{part}'")))?;
                let n = s[pos..].parse().map_err(|_| CliError::Input(format!("bad range '{part}'")))?;
                Ok((s[..pos].to_string(), n))
            };
            let ((pa, na), (pb, nb)) = (split(a.trim())?, split(b.trim())?);
            if pa != pb || na > nb {
                return Err(CliError::Input(format!("bad range '{part}'")));
            }
            out.extend((na..=nb).map(|i| format!("{pa}{i}")));
        } else if !part.is_empty() {
            out.push(part.to_string());
        }
    }
    Ok(out)
}

impl Problem {
    pub fn lookup(&self, name: &str) -> Result<&str, CliError> {
        self.fields
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s.as_str())
            .ok_or_else(|| CliError::Input(format!("no field '{name}' for {}", self.name)))
    }

    /// Resolves `builtin:NAMES`, a file path, or inline `coord: expr; ...` text.
    pub fn fields(&self, arg: &str) -> Result<Vec<(String, VectorField<Poly>)>, CliError> {
        let chart = self.pde.jet().chart();
        let parse = |src: &str| parse_poly_field(src, chart).map_err(CliError::input);
        if let Some(rest) = arg.strip_prefix("builtin:") {
            return expand_names(rest)?.into_iter().map(|n| Ok((n.clone(), parse(self.lookup(&n)?)?))).collect();
        }
        let path = std::path::Path::new(arg);
        if !arg.contains(':') && path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
            return text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .enumerate()
                .map(|(i, l)| Ok((format!("f{}", i + 1), parse(l)?)))
                .collect();
        }
        Ok(vec![("f1".to_string(), parse(arg)?)])
    }
}
