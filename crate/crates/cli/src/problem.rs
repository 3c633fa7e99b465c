use std::collections::BTreeMap;

use serde::Deserialize;

use jetlie::jetspace::{JetSpec, PdeSpec};

use crate::builtins::Problem;
use crate::CliError;

/// Problem file layout:
///
/// ```toml
/// name = "kdv"
/// [jet]
/// independents = ["t", "x"]
/// dependents = ["u"]
/// order = 3
/// [equation]
/// expr = "u_xxx + u*u_x + u_t"
/// leading = "u_xxx"
/// [fields]
/// X1 = "x: 1"
/// [solutions]
/// wave = "12*sech(x - 4*t)^2"
/// [options]
/// degree = 2
/// conditions = "1-7:module"
/// ```
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: Option<String>,
    pub jet: JetSection,
    pub equation: EquationSection,
    #[serde(default)]
    pub fields: BTreeMap<String, String>,
    #[serde(default)]
    pub solutions: BTreeMap<String, String>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetSection {
    pub independents: Vec<String>,
    pub dependents: Vec<String>,
    pub order: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationSection {
    pub expr: String,
    pub leading: String,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub degree: Option<u32>,
    pub mult_degree: Option<u32>,
    pub conditions: Option<String>,
    pub mode: Option<String>,
}

pub fn load(path: &str) -> Result<(Problem, Options), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<(Problem, Options), CliError> {
    let file: ProblemFile = toml::from_str(text).map_err(|e| CliError::Input(format!("problem file: {e}")))?;
    let jet = JetSpec::new(&file.jet.independents, &file.jet.dependents, file.jet.order).map_err(CliError::input)?;
    let pde = PdeSpec::parse(jet, &file.equation.expr, &file.equation.leading).map_err(CliError::input)?;
    let problem = Problem {
        name: file.name.unwrap_or_else(|| "problem".to_string()),
        pde,
        fields: file.fields.into_iter().collect(),
        solutions: file.solutions.into_iter().collect(),
    };
    for (name, src) in &problem.fields {
        jetlie::exterior::parse_poly_field(src, problem.pde.jet().chart()).map_err(|e| CliError::Input(format!("field {name}: {e}")))?;
    }
    Ok((problem, file.options))
}
