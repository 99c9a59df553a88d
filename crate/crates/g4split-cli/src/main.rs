mod commands;
mod parse;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use g4split::locus::SurveyConfig;
use g4split::squares::BatchConfig;
use g4split::Result;

use commands::{Genus4Args, IgusaMode};
use report::RunReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "g4split", version, about = "Split genus-4 Jacobians from points of the Igusa quartic")]
struct Cli {
    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Height bound for rational point searches on conics.
    #[arg(long, global = true, env = "G4SPLIT_HEIGHT_BOUND", default_value_t = 10000)]
    height_bound: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Membership, polar values and Kummer sections on the Igusa quartic.
    Igusa {
        #[command(subcommand)]
        op: IgusaOp,
    },
    Kummer {
        #[command(subcommand)]
        op: KummerOp,
    },
    /// D4 and V4 gluing of genus-2 curves.
    Glue {
        #[command(subcommand)]
        op: GlueOp,
    },
    /// Square-matrix families and the worked examples.
    Squares {
        #[command(subcommand)]
        op: SquaresOp,
    },
    /// Finite-field surveys of the fixed-point locus.
    Locus {
        #[command(subcommand)]
        op: LocusOp,
    },
    Octad {
        #[command(subcommand)]
        op: OctadOp,
    },
    /// Re-check the witnesses in a saved JSON report.
    Verify {
        #[arg(long, short)]
        input: PathBuf,
    },
    /// Same as `squares example`.
    Example(ExampleArgs),
    /// Same as `squares family`.
    Family(FamilyArgs),
    /// Same as `locus survey`.
    Survey(SurveyArgs),
}

#[derive(clap::Args, Debug)]
struct PointArgs {
    /// Coordinates, e.g. -55,-29,49,36,20,-21 (6 classical, 5 symmetroid).
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long, allow_hyphen_values = true)]
    other: Option<String>,
    /// Permutation of the six coordinates in cycle notation, e.g. "(0,1,2)".
    #[arg(long)]
    sigma: Option<String>,
}

#[derive(Subcommand, Debug)]
enum IgusaOp {
    CheckPoint(PointArgs),
    Polar(PointArgs),
    KummerSection(PointArgs),
}

#[derive(Subcommand, Debug)]
enum KummerOp {
    /// Conic, cubic and branch sextic of the genus-2 curve at a point.
    Extract {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Subcommand, Debug)]
enum GlueOp {
    Construct {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Second point, or "auto-sigma" to apply the permutation to a.
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Permutation used with auto-sigma.
        #[arg(value_name = "SIGMA")]
        sigma_pos: Option<String>,
        #[arg(long)]
        sigma: Option<String>,
    },
    Genus4 {
        #[arg(long, value_parser = ["d4", "v4"])]
        case: String,
        /// Sextic f, ascending coefficients.
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        /// Branch quadratic q, ascending coefficients.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Cubic part of a given g = c + d·y, ascending coefficients.
        #[arg(long, allow_hyphen_values = true)]
        g_c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        g_d: Option<String>,
        /// V4 only: the point x = beta moved to infinity.
        #[arg(long, allow_hyphen_values = true, default_value = "2")]
        beta: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        d1: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        d2: String,
    },
}

#[derive(clap::Args, Debug)]
struct ExampleArgs {
    #[arg(value_parser = ["m2-nonhyp", "2dim"], required_unless_present = "name_flag")]
    name: Option<String>,
    #[arg(long = "name", value_parser = ["m2-nonhyp", "2dim"])]
    name_flag: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    u: String,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    v: String,
    /// Also check the octic identity symbolically in u and v.
    #[arg(long)]
    symbolic: bool,
}

#[derive(clap::Args, Debug)]
struct FamilyArgs {
    /// Row label, e.g. "(3,4,5,6*)".
    #[arg(long)]
    row: String,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
}

#[derive(clap::Args, Debug)]
struct TableArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 25)]
    per_row: usize,
    #[arg(long, default_value_t = 10)]
    mu_prime_per_row: usize,
    /// Skip building X at each sample.
    #[arg(long)]
    no_x: bool,
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum SquaresOp {
    Family(FamilyArgs),
    Example(ExampleArgs),
    /// Every table row at random admissible parameters.
    Table(TableArgs),
}

#[derive(clap::Args, Debug)]
struct SurveyArgs {
    #[arg(long, env = "G4SPLIT_PRIME", default_value_t = 10007)]
    p: u64,
    /// Samples per permutation class.
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Survey a single permutation instead of all class representatives.
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long, default_value_t = 64)]
    batch: usize,
    /// Include every sample point in the report.
    #[arg(long)]
    samples: bool,
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum LocusOp {
    Survey(SurveyArgs),
}

#[derive(Subcommand, Debug)]
enum OctadOp {
    /// Eighth point, quartic D and genus-2 curve of the octad through p6, p7.
    Complete {
        #[arg(long, allow_hyphen_values = true)]
        p6: String,
        #[arg(long, allow_hyphen_values = true)]
        p7: String,
    },
}

fn example(a: &ExampleArgs) -> Result<RunReport> {
    let name = a.name.as_deref().or(a.name_flag.as_deref()).unwrap_or_default();
    commands::squares_example(name, &a.u, &a.v, a.symbolic)
}

fn survey(a: &SurveyArgs) -> Result<RunReport> {
    let cfg = SurveyConfig { p: a.p, n: a.n, seed: a.seed, batch: a.batch, max_planes: 0, sequential: a.sequential };
    commands::locus_survey(&cfg, a.sigma.as_deref(), a.samples)
}

fn point(mode: IgusaMode, a: &PointArgs) -> Result<RunReport> {
    commands::igusa(mode, &a.point, a.other.as_deref(), a.sigma.as_deref())
}

fn run(cli: &Cli) -> Result<RunReport> {
    let bound = cli.height_bound;
    match &cli.command {
        Command::Igusa { op } => match op {
            IgusaOp::CheckPoint(a) => point(IgusaMode::CheckPoint, a),
            IgusaOp::Polar(a) => point(IgusaMode::Polar, a),
            IgusaOp::KummerSection(a) => point(IgusaMode::KummerSection, a),
        },
        Command::Kummer { op: KummerOp::Extract { point } } => commands::kummer_extract(point, bound),
        Command::Glue { op } => match op {
            GlueOp::Construct { a, b, sigma_pos, sigma } => {
                commands::glue_construct(a, b, sigma.as_deref().or(sigma_pos.as_deref()), bound)
            }
            GlueOp::Genus4 { case, f, q, lambda, g_c, g_d, beta, d1, d2 } => commands::glue_genus4(&Genus4Args {
                case,
                f: f.as_deref(),
                q: q.as_deref(),
                lambda: lambda.as_deref(),
                g_c: g_c.as_deref(),
                g_d: g_d.as_deref(),
                beta,
                d1,
                d2,
            }),
        },
        Command::Squares { op } => match op {
            SquaresOp::Family(a) => commands::squares_family(&a.row, a.u.as_deref(), a.v.as_deref()),
            SquaresOp::Example(a) => example(a),
            SquaresOp::Table(a) => commands::squares_table(&BatchConfig {
                seed: a.seed,
                per_row: a.per_row,
                mu_prime_per_row: a.mu_prime_per_row,
                build_x: !a.no_x,
                sequential: a.sequential,
            }),
        },
        Command::Locus { op: LocusOp::Survey(a) } | Command::Survey(a) => survey(a),
        Command::Octad { op: OctadOp::Complete { p6, p7 } } => commands::octad_complete(p6, p7, bound),
        Command::Verify { input } => {
            let text = std::fs::read_to_string(input)
                .map_err(|e| g4split::Error::InvalidInput(format!("{}: {e}", input.display())))?;
            let v: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| g4split::Error::InvalidInput(format!("{}: {e}", input.display())))?;
            verify::verify(&v)
        }
        Command::Example(a) => example(a),
        Command::Family(a) => commands::squares_family(&a.row, a.u.as_deref(), a.v.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let start = Instant::now();
    let rep = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    let elapsed = start.elapsed();
    let json = rep.to_json(elapsed);
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&json).expect("serializable")),
        Format::Text => print!("{}", rep.to_text(elapsed)),
    }
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, serde_json::to_string_pretty(&json).expect("serializable") + "\n") {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(3);
        }
    }
    if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
