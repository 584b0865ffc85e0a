use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "acmoduli",
    version,
    about = "Polygons with an area center: continuants, bracket strings, AC-varieties"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// RNG seed (decimal or 0x-hex).
    #[arg(long, global = true, env = "AC_SEED", default_value = "0xC0FFEE", value_parser = parse_seed)]
    pub seed: u64,

    /// Sample points per string / polynomial set.
    #[arg(long, global = true, default_value_t = 50)]
    pub count: usize,

    /// Bound on numerators and denominators of random rationals.
    #[arg(long, global = true, default_value_t = 12)]
    pub height: i64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|e| format!("invalid seed '{s}': {e}"))
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Continuants: evaluate or expand.
    U {
        #[command(subcommand)]
        action: UCommand,
    },
    /// Verify the continuant identity suite symbolically.
    Identities {
        #[arg(long, default_value_t = 10)]
        nmax: usize,
    },
    /// Classify a bracket string and show its matching.
    Parse { string: String },
    /// Contents of every left bracket and of the special segments.
    Content { string: String },
    /// Rank of every left round bracket, and the height.
    Rank { string: String },
    /// All strings of one kind and size.
    Enumerate {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
    },
    /// Apply one of the string transformations.
    Transform {
        #[arg(long)]
        kind: String,
        string: String,
    },
    /// The polynomial set attached to a string.
    Polyset {
        string: String,
        #[arg(long)]
        style: String,
        #[arg(long = "const", default_value = "0", allow_hyphen_values = true)]
        constant: String,
    },
    /// Exact random points on the zero set of a polynomial set.
    Sample {
        string: String,
        #[arg(long)]
        style: String,
        #[arg(long = "const", default_value = "0", allow_hyphen_values = true)]
        constant: String,
    },
    /// Run an inclusion battery over every string of one size.
    Check {
        /// One of 4.1 5.1 6.1 7.1 7.2 8.1 9.2 9.1 10.1 10.2 11.1.
        #[arg(long)]
        theorem: String,
        /// String size; for 7.2 the dimension of the AC variety.
        #[arg(long)]
        n: usize,
    },
    /// Groebner basis of the AC ideal with its certificates.
    Groebner {
        #[arg(long)]
        n: usize,
    },
    /// A point of AC_n from the values of x_4..x_n.
    Parametrize {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        tail: Vec<String>,
    },
    /// Build a polygon from coefficients and two starting vertices.
    Polygon {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        coeffs: Vec<String>,
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        p0: String,
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        p1: String,
        /// Use 64-bit floats instead of exact rationals.
        #[arg(long)]
        float: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// The regular star {n/k}.
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Decide whether a quadrilateral has an area center.
    Quad {
        /// x0,y0,x1,y1,x2,y2,x3,y3
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_hyphen_values = true, required = true)]
        points: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum UCommand {
    /// u(x_1, ..., x_n) at rational values.
    Eval {
        #[arg(allow_hyphen_values = true)]
        values: Vec<String>,
    },
    /// u[i,j] as a polynomial in n variables.
    Poly {
        #[arg(long, num_args = 2, value_names = ["I", "J"], required = true)]
        range: Vec<usize>,
        #[arg(long)]
        nvars: usize,
    },
}
