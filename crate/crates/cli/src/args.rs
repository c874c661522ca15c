use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Environment variable holding the default certification order.
pub const ORDER_ENV: &str = "EQUISING_ORDER";

#[derive(Debug, Clone, Parser)]
#[command(name = "equising", version, about = "Exact equisingularity computations on polynomial germs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Coordinate variables, innermost last.
    #[arg(long, global = true, value_delimiter = ',', default_value = "x1,x2")]
    pub vars: Vec<String>,
    /// Parameter variables.
    #[arg(long, global = true, value_delimiter = ',')]
    pub params: Vec<String>,
    /// Certification order N: jets are known modulo total degree N.
    #[arg(long, global = true, env = ORDER_ENV, default_value_t = equising::DEFAULT_ORDER)]
    pub order: u32,
    /// Seed for the choice of linear changes of coordinates.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Treat the inputs as series known only modulo degree N.
    #[arg(long, global = true)]
    pub truncated: bool,
    /// Print the machine report instead of the summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the machine report to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Weierstrass preparation f = u * W after a generic change if needed.
    Prepare {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Distinguished variable (default: the last coordinate).
        #[arg(long)]
        var: Option<String>,
    },
    /// Weierstrass division g = q * f + r.
    Divide {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        var: Option<String>,
    },
    /// Generalized discriminants of a monic polynomial.
    Gendisc {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        var: Option<String>,
    },
    /// Equisingularity tower of a germ, or of a system given by several germs.
    Tower {
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Equisingularity of a family along its parameters.
    CheckFamily {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Parameter values at which to build slice towers.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        slices: Vec<String>,
    },
    /// Checks that a family y(x, z) solves a system through a witness z(x).
    VerifyFamily {
        /// Names of the unknowns.
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<String>,
        /// Names of the family variables.
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<String>,
        /// Equations in the coordinates and the unknowns.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        system: Vec<String>,
        /// One series per unknown, in the coordinates and z.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        family: Vec<String>,
        /// One series per family variable, in the coordinates.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        witness: Vec<String>,
        /// Expected solution y(x); defaults to the family at the witness.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        target: Vec<String>,
        /// For each unknown, how many leading coordinates it may involve.
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<usize>,
        /// For each unknown, how many leading family variables it may involve.
        #[arg(long, value_delimiter = ',')]
        tau: Vec<usize>,
    },
    /// Family through a solution of y1^2 = y2^3 in one variable.
    Binomial {
        #[arg(allow_hyphen_values = true)]
        y1: String,
        #[arg(allow_hyphen_values = true)]
        y2: String,
    },
    /// Divisors of the 1-form attached to f/g.
    MeroAnalyze(Mero),
    /// The polynomial system attached to f/g and its reference solution.
    EmitSystem(Mero),
    /// Slices of the deformation obtained from a solution family.
    MeroDeform {
        #[command(flatten)]
        mero: Mero,
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<String>,
        /// One series per unknown of the system, in x1, x2 and z.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        family: Vec<String>,
        /// One series per family variable, in x1, x2.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        witness: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1/2,1")]
        grid: Vec<String>,
        /// Degree at which the witness is truncated.
        #[arg(long, default_value_t = 2)]
        k0: u32,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Mero {
    /// Numerator in factored form, e.g. "(x1)*(x2)".
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// Denominator in factored form.
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    /// Candidate divisors to split the 1-form's divisor with.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub candidates: Vec<String>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Prepare { .. } => "prepare",
            Command::Divide { .. } => "divide",
            Command::Gendisc { .. } => "gendisc",
            Command::Tower { .. } => "tower",
            Command::CheckFamily { .. } => "check-family",
            Command::VerifyFamily { .. } => "verify-family",
            Command::Binomial { .. } => "binomial",
            Command::MeroAnalyze(_) => "mero-analyze",
            Command::EmitSystem(_) => "emit-system",
            Command::MeroDeform { .. } => "mero-deform",
        }
    }

    /// Named inputs, in a fixed order, for echoing and hashing.
    pub fn inputs(&self) -> Vec<(&'static str, String)> {
        let list = |v: &[String]| v.join(",");
        let mero = |m: &Mero| {
            vec![("f", m.f.clone()), ("g", m.g.clone()), ("candidates", list(&m.candidates))]
        };
        match self {
            Command::Prepare { expr, var } | Command::Gendisc { expr, var } => {
                vec![("expr", expr.clone()), ("var", var.clone().unwrap_or_default())]
            }
            Command::Divide { g, f, var } => {
                vec![("g", g.clone()), ("f", f.clone()), ("var", var.clone().unwrap_or_default())]
            }
            Command::Tower { exprs } => vec![("exprs", list(exprs))],
            Command::CheckFamily { expr, slices } => vec![("expr", expr.clone()), ("slices", list(slices))],
            Command::VerifyFamily { y, z, system, family, witness, target, sigma, tau } => {
                let nums = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
                vec![
                    ("y", list(y)),
                    ("z", list(z)),
                    ("system", list(system)),
                    ("family", list(family)),
                    ("witness", list(witness)),
                    ("target", list(target)),
                    ("sigma", nums(sigma)),
                    ("tau", nums(tau)),
                ]
            }
            Command::Binomial { y1, y2 } => vec![("y1", y1.clone()), ("y2", y2.clone())],
            Command::MeroAnalyze(m) | Command::EmitSystem(m) => mero(m),
            Command::MeroDeform { mero: m, z, family, witness, grid, k0 } => {
                let mut v = mero(m);
                v.extend([
                    ("z", list(z)),
                    ("family", list(family)),
                    ("witness", list(witness)),
                    ("grid", list(grid)),
                    ("k0", k0.to_string()),
                ]);
                v
            }
        }
    }
}
