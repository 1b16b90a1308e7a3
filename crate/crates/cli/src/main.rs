use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::Output;
use quatord::exactnum::DEFAULT_PRIME_BOUND;
use quatord::Error;

/// Quaternion algebras over Q, their orders and ternary quadratic forms.
#[derive(Parser, Debug)]
#[command(name = "quatord", version, about)]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert symbol (a,b) at a place.
    Hilbert {
        #[arg(short, allow_negative_numbers = true)]
        a: String,
        #[arg(short, allow_negative_numbers = true)]
        b: String,
        /// A prime or `inf`.
        #[arg(short, long = "place")]
        p: String,
    },
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    #[command(subcommand)]
    Form(FormCmd),
    #[command(subcommand)]
    Order(OrderCmd),
    #[command(subcommand)]
    Classes(ClassesCmd),
    #[command(subcommand)]
    Genera(GeneraCmd),
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    /// Ramified places and discriminant of (a,b).
    Ram {
        #[arg(short, allow_negative_numbers = true)]
        a: String,
        #[arg(short, allow_negative_numbers = true)]
        b: String,
    },
    /// An algebra with the given discriminant.
    FromDisc(DiscArgs),
}

#[derive(Args, Debug)]
struct DiscArgs {
    /// Squarefree positive discriminant.
    #[arg(short, allow_negative_numbers = true)]
    d: String,
    /// Ramified at infinity (default: whichever parity is admissible).
    #[arg(long, conflicts_with = "indefinite")]
    definite: bool,
    /// Split at infinity.
    #[arg(long)]
    indefinite: bool,
}

#[derive(Args, Debug)]
struct FormArg {
    /// Coefficients "a11 a22 a33 a12 a13 a23".
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
}

#[derive(Subcommand, Debug)]
enum FormCmd {
    /// Canonical local label and Jordan splitting at p.
    Standardize {
        #[command(flatten)]
        form: FormArg,
        #[arg(short, long = "prime")]
        p: String,
    },
    /// Whether two forms are similar over Z_p.
    Similar {
        #[command(flatten)]
        form: FormArg,
        /// The second form, same coefficient order.
        #[arg(long, allow_hyphen_values = true)]
        other: String,
        #[arg(short, long = "prime")]
        p: String,
    },
    /// The even Clifford order of the form.
    Clifford {
        #[command(flatten)]
        form: FormArg,
    },
}

#[derive(Args, Debug)]
struct OrderInput {
    /// Algebra parameters "a,b".
    #[arg(long, allow_hyphen_values = true, requires = "basis", conflicts_with = "file")]
    algebra: Option<String>,
    /// Sixteen rationals: four basis rows in coordinates 1, i, j, ij.
    #[arg(long, allow_hyphen_values = true, requires = "algebra")]
    basis: Option<String>,
    /// JSON file {"algebra": "a,b", "basis": [...]}.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum OrderCmd {
    /// Discriminant, structural predicates, ternary form and local classes.
    Info(OrderInput),
    /// The dual lattice under the trace form.
    Dual(OrderInput),
    /// A maximal order with the given discriminant.
    Maximal(DiscArgs),
    /// Brandt invariant and Gorenstein closure.
    Closure(OrderInput),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct PrimeKind {
    /// Count at p = 2.
    #[arg(long)]
    dyadic: bool,
    /// Count at the given prime.
    #[arg(long)]
    prime: Option<String>,
}

#[derive(Subcommand, Debug)]
enum ClassesCmd {
    /// Number of local classes with discriminant exponent n.
    Count {
        #[command(flatten)]
        kind: PrimeKind,
        #[arg(short)]
        n: u32,
        #[arg(long)]
        side: String,
        #[arg(long, default_value = "all")]
        category: String,
    },
    /// The local classes with discriminant exponent n.
    Enumerate {
        #[command(flatten)]
        kind: PrimeKind,
        #[arg(short)]
        n: u32,
        /// Restrict to one side.
        #[arg(long)]
        side: Option<String>,
        #[arg(long, default_value = "all")]
        category: String,
    },
    /// Class counts for n = 0..=max-n in table form.
    Table {
        #[command(flatten)]
        kind: PrimeKind,
        #[arg(long, default_value_t = 12)]
        max_n: u32,
    },
}

#[derive(Subcommand, Debug)]
enum GeneraCmd {
    /// Genus counts of orders with discriminant d, per algebra discriminant.
    Count {
        #[arg(short, allow_negative_numbers = true)]
        d: String,
    },
}

fn prime_bound() -> Result<u64, Error> {
    match std::env::var("QUATORD_PRIME_BOUND") {
        Ok(v) => {
            v.trim().parse().map_err(|_| Error::Parse(format!("QUATORD_PRIME_BOUND ('{v}') is not a positive integer")))
        }
        Err(_) => Ok(DEFAULT_PRIME_BOUND),
    }
}

fn dispatch(cmd: Command) -> Result<Output, Error> {
    use commands as c;
    match cmd {
        Command::Hilbert { a, b, p } => c::hilbert(&a, &b, &p),
        Command::Algebra(AlgebraCmd::Ram { a, b }) => c::algebra_ram(&a, &b),
        Command::Algebra(AlgebraCmd::FromDisc(d)) => c::algebra_from_disc(&d.d, parity(&d), prime_bound()?),
        Command::Form(FormCmd::Standardize { form, p }) => c::form_standardize(&form.coeffs, &p),
        Command::Form(FormCmd::Similar { form, other, p }) => c::form_similar(&form.coeffs, &other, &p),
        Command::Form(FormCmd::Clifford { form }) => c::form_clifford(&form.coeffs),
        Command::Order(OrderCmd::Info(input)) => c::order_info(&load(&input)?),
        Command::Order(OrderCmd::Dual(input)) => c::order_dual(&load(&input)?),
        Command::Order(OrderCmd::Maximal(d)) => c::order_maximal(&d.d, parity(&d), prime_bound()?),
        Command::Order(OrderCmd::Closure(input)) => c::order_closure(&load(&input)?),
        Command::Classes(ClassesCmd::Count { kind, n, side, category }) => {
            c::classes_count(&kind_of(&kind)?, n, &side, &category)
        }
        Command::Classes(ClassesCmd::Enumerate { kind, n, side, category }) => {
            c::classes_enumerate(&kind_of(&kind)?, n, side.as_deref(), &category)
        }
        Command::Classes(ClassesCmd::Table { kind, max_n }) => c::classes_table(&kind_of(&kind)?, max_n),
        Command::Genera(GeneraCmd::Count { d }) => c::genera_count(&d),
    }
}

fn parity(d: &DiscArgs) -> Option<bool> {
    match (d.definite, d.indefinite) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        _ => None,
    }
}

fn kind_of(k: &PrimeKind) -> Result<String, Error> {
    Ok(match &k.prime {
        Some(p) => p.clone(),
        None => "2".to_string(),
    })
}

fn load(input: &OrderInput) -> Result<quatord::Order, Error> {
    match (&input.algebra, &input.basis, &input.file) {
        (Some(a), Some(b), None) => commands::parse_order(a, b),
        (None, None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
            commands::parse_order_json(&text)
        }
        _ => Err(Error::InvalidArgument("give either --algebra with --basis, or --file".into())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    let result = std::panic::catch_unwind(|| dispatch(cli.command));
    match result {
        Ok(Ok(out)) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON values always serialize"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Ok(Err(e)) if e.is_internal() => {
            eprintln!("internal error: {e}");
            ExitCode::from(1)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(1),
    }
}
