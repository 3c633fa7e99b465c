use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "jetlie", version, about = "Exact symmetry analysis of differential equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Built-in equation: kdv3, kdv2w, ode-1.8, ode-1.10, ode-1.11
    #[arg(long, default_value = "kdv3")]
    pub pde: String,
    /// TOML problem file; replaces --pde
    #[arg(long)]
    pub problem: Option<String>,
    /// Emit JSON instead of text
    #[arg(long)]
    pub json: bool,
    /// Run sequentially
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the form-ideal determining system
    SolveHarrison(Harrison),
    /// Solve the classical prolongation determining system
    SolveClassical(Classical),
    /// Check that a field is a symmetry
    VerifySymmetry(Verify),
    /// Prolong a point field
    Prolong(Prolong),
    /// Structure constants of a basis
    Brackets(Basis),
    /// Derived series of a basis
    Solvable(Basis),
    /// Residual of an explicit solution
    CheckSolution(CheckSolution),
    /// Residual of a solution transported by a symmetry flow
    Flow(FlowArgs),
    /// Frobenius and integrating-factor checks for 1-forms
    Frobenius(Frobenius),
    /// First integral of the reduced traveling-wave equation
    FirstIntegral(FirstIntegral),
    /// Reduce an expression modulo the equation
    ReduceCheck(ReduceCheck),
}

#[derive(Debug, Args)]
pub struct Harrison {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub degree: Option<u32>,
    #[arg(long)]
    pub mult_degree: Option<u32>,
    /// e.g. `1-7:module`, `1,2,3`, `1-3,4-7:ideal`
    #[arg(long)]
    pub conditions: Option<String>,
    /// printed or equation
    #[arg(long, default_value = "printed")]
    pub alpha7: String,
}

#[derive(Debug, Args)]
pub struct Classical {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub degree: Option<u32>,
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Verify {
    #[command(flatten)]
    pub common: Common,
    /// `builtin:NAME`, a file of fields, or `coord: expr; ...`
    #[arg(long)]
    pub field: String,
    /// classical or harrison
    #[arg(long, default_value = "classical")]
    pub method: String,
    #[arg(long)]
    pub conditions: Option<String>,
    #[arg(long)]
    pub mult_degree: Option<u32>,
    #[arg(long, default_value = "printed")]
    pub alpha7: String,
}

#[derive(Debug, Args)]
pub struct Prolong {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub field: String,
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Basis {
    #[command(flatten)]
    pub common: Common,
    /// `builtin:v1..v4`, a file of fields, or one inline field
    #[arg(long)]
    pub basis: Option<String>,
    /// Extra inline fields appended to the basis
    #[arg(long)]
    pub field: Vec<String>,
}

#[derive(Debug, Args)]
pub struct Solution {
    /// soliton, rational, tanh or constant
    #[arg(long, default_value = "soliton")]
    pub family: String,
    /// corrected or printed
    #[arg(long, default_value = "corrected")]
    pub variant: String,
    /// Family parameter as `name=value`
    #[arg(long = "param")]
    pub params: Vec<String>,
    /// Explicit u(t, x), or a solution name from the problem file
    #[arg(long)]
    pub solution: Option<String>,
    /// `standard` or `t0:t1:dt,x0:x1:dx`
    #[arg(long, default_value = "standard")]
    pub grid: String,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Fail instead of skipping singular grid points
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct CheckSolution {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub solution: Solution,
    /// Also check the reduced traveling-wave equations for a soliton
    #[arg(long)]
    pub traveling_wave: bool,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub solution: Solution,
    /// theta1, theta2, theta3, theta4 or five-param
    #[arg(long = "flow", default_value = "theta1")]
    pub flow: String,
    /// Flow parameter
    #[arg(long, default_value = "1/2")]
    pub s: String,
    /// Five-parameter values as `alpha=..`, `beta=..`, `gamma=..`, `delta=..`, `lambda=..`
    #[arg(long = "flow-param")]
    pub flow_params: Vec<String>,
}

#[derive(Debug, Args)]
pub struct Frobenius {
    #[command(flatten)]
    pub common: Common,
    /// Annihilating 1-form; repeat for several
    #[arg(long, required = true)]
    pub form: Vec<String>,
    /// Coordinate names
    #[arg(long, default_value = "x,y", value_delimiter = ',')]
    pub coords: Vec<String>,
    /// Symmetry field for Z; repeat to match the number of forms
    #[arg(long)]
    pub field: Vec<String>,
    /// Base point for the first integral
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub base: Option<Vec<f64>>,
    /// Evaluation point; repeat for several
    #[arg(long, allow_hyphen_values = true)]
    pub point: Vec<String>,
}

#[derive(Debug, Args)]
pub struct FirstIntegral {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "4")]
    pub c: String,
    #[arg(long, default_value = "0")]
    pub c1: String,
    #[arg(long, default_value = "0")]
    pub c2: String,
    #[arg(long, allow_hyphen_values = true)]
    pub v0: Option<f64>,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long, default_value_t = 2.0)]
    pub y_end: f64,
    /// ascending or descending
    #[arg(long, default_value = "ascending")]
    pub branch: String,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ReduceCheck {
    #[command(flatten)]
    pub common: Common,
    /// Polynomial in the jet coordinates
    #[arg(long)]
    pub expr: Option<String>,
    /// Apply the prolonged field to the equation and reduce that instead
    #[arg(long)]
    pub field: Option<String>,
}
