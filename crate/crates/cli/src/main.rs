use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hypoforge::catalog::notation::{parse_one_forms, parse_point};
use hypoforge::catalog::{self, lint_catalog, load_catalog, shipped_catalog, FamilyRecord};
use hypoforge::exterior::Subspace;
use hypoforge::liealg::LieAlgebra;
use hypoforge::obstructions::{self, Hints, Verdict};
use hypoforge::poly::ParamPoint;
use hypoforge::scalar::Scalar;
use hypoforge::search::{search_hypo, SearchOptions};
use hypoforge::splitting::hpq;
use hypoforge::su2hypo::{self, Coframe};
use hypoforge_cli::report::{classify, hints_for, matching_record, Options};

const EXIT_FOUND: u8 = 0;
const EXIT_NOT_FOUND: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hypoforge",
    version,
    about = "Hypo structures on five-dimensional Lie algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an algebra is hypo, or test a given coframe.
    Check {
        constants: String,
        /// Parameter values, e.g. p=1/2,q=-3.
        #[arg(long, default_value = "")]
        params: String,
        /// Five 1-forms f1,...,f5 to test as an adapted coframe.
        #[arg(long)]
        coframe: Option<String>,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Classify every family of the catalog.
    Classify {
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Only report the nilpotent families.
        #[arg(long)]
        nilpotent: bool,
    },
    /// Look for a contact form.
    Contact {
        constants: String,
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Numerical search for hypo coframes.
    Search {
        constants: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// The numbers h^{p,q} for the filtration induced by V1.
    Hpq {
        constants: String,
        #[arg(long, default_value = "")]
        params: String,
        /// Comma-separated 1-forms spanning V1.
        #[arg(long)]
        v1: String,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn algebra(constants: &str, params: &str) -> Result<(LieAlgebra, ParamPoint), Failure> {
    let point = parse_point(params).map_err(|e| Failure(format!("--params: {e}")))?;
    let g = catalog::parse_algebra(constants, &point)?;
    Ok((g, point))
}

fn catalog_records(path: Option<PathBuf>) -> Result<Vec<FamilyRecord>, Failure> {
    match path.or_else(|| std::env::var_os("HYPOFORGE_CATALOG").map(PathBuf::from)) {
        Some(p) => Ok(load_catalog(&p)?),
        None => Ok(shipped_catalog()),
    }
}

fn check(
    constants: &str,
    params: &str,
    coframe: Option<&str>,
    path: Option<PathBuf>,
) -> Result<u8, Failure> {
    let (g, point) = algebra(constants, params)?;
    if let Some(c) = coframe {
        let forms = parse_one_forms::<Scalar>(c, g.dim())
            .map_err(|e| Failure(format!("--coframe: {e}")))?;
        let frame = Coframe::new(forms)?;
        let q = su2hypo::quadruplet_from_coframe(&frame);
        let su2 = su2hypo::is_su2_structure(&q);
        let [r1, r2, r3] = su2hypo::hypo_residues(&g, &q);
        println!("SU(2)-structure: {su2}");
        for (label, r) in [
            ("d(omega1)", &r1),
            ("d(omega2^alpha)", &r2),
            ("d(omega3^alpha)", &r3),
        ] {
            println!(
                "{label} = {}",
                if r.is_zero() {
                    "0".to_string()
                } else {
                    r.to_string()
                }
            );
        }
        let hypo = su2 && r1.is_zero() && r2.is_zero() && r3.is_zero();
        println!(
            "{}",
            if hypo {
                "HYPO confirmed"
            } else {
                "not a hypo coframe"
            }
        );
        return Ok(EXIT_FOUND);
    }
    if g.dim() != 5 {
        return Err(Failure(format!(
            "expected a five-dimensional algebra, got dimension {}",
            g.dim()
        )));
    }
    let records = catalog_records(path)?;
    let hints = match matching_record(&records, &g, &point) {
        Some(r) => {
            println!("catalog family: {}", r.name);
            hints_for(r, &point)
        }
        None => Hints::default(),
    };
    let verdict = obstructions::verdict(&g, &hints);
    println!("{}", verdict.label());
    match &verdict {
        Verdict::Hypo(c) => {
            let forms: Vec<String> = c.forms().iter().map(|f| f.to_string()).collect();
            println!("  witness coframe: {}", forms.join(", "));
        }
        Verdict::NotHypo(t) | Verdict::Undecided(t) => {
            for (i, s) in t.steps.iter().enumerate() {
                println!("  {}. {}", i + 1, s.summary());
            }
            if let Some(r) = &t.undecided {
                println!("  undecided: {r}");
            }
        }
    }
    Ok(match verdict {
        Verdict::Undecided(_) => EXIT_UNDECIDED,
        _ => EXIT_FOUND,
    })
}

fn run_classify(
    path: Option<PathBuf>,
    opts: Options,
    format: Format,
    nilpotent: bool,
) -> Result<u8, Failure> {
    let mut records = catalog_records(path)?;
    let lint = lint_catalog(&records);
    if !lint.is_ok() {
        return Err(Failure(format!(
            "catalog lint failed:\n  {}",
            lint.errors.join("\n  ")
        )));
    }
    if nilpotent {
        records.retain(|r| !r.is_five_dimensional() || r.flags.nilpotent);
    }
    let report = classify(&records, opts)?;
    match format {
        Format::Text => print!("{}", report.render_text()),
        Format::Machine => print!("{}", report.render_machine()),
    }
    let contradictions = report.contradictions();
    for c in &contradictions {
        eprintln!("contradiction: {c}");
    }
    Ok(if contradictions.is_empty() {
        EXIT_FOUND
    } else {
        EXIT_NOT_FOUND
    })
}

fn contact(constants: &str, params: &str) -> Result<u8, Failure> {
    let (g, _) = algebra(constants, params)?;
    if g.dim() != 5 {
        return Err(Failure(format!(
            "expected a five-dimensional algebra, got dimension {}",
            g.dim()
        )));
    }
    Ok(match su2hypo::contact_exists(&g) {
        Some(eta) => {
            println!("true\teta = {eta}");
            EXIT_FOUND
        }
        None => {
            println!("false");
            EXIT_NOT_FOUND
        }
    })
}

fn search(constants: &str, params: &str, opts: SearchOptions) -> Result<u8, Failure> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Failure("--tol must be positive".into()));
    }
    let (g, _) = algebra(constants, params)?;
    let found = search_hypo(&g, opts)?;
    println!(
        "{} candidate(s) with residual < {:e}",
        found.len(),
        opts.tol
    );
    for c in &found {
        println!("restart {}: residual {:e}", c.restart, c.residual);
        for row in c.coframe.chunks(5) {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>12.8}")).collect();
            println!("  {}", cells.join(" "));
        }
    }
    Ok(if found.is_empty() {
        EXIT_NOT_FOUND
    } else {
        EXIT_FOUND
    })
}

fn run_hpq(constants: &str, params: &str, v1: &str) -> Result<u8, Failure> {
    let (g, _) = algebra(constants, params)?;
    let forms =
        parse_one_forms::<Scalar>(v1, g.dim()).map_err(|e| Failure(format!("--v1: {e}")))?;
    let v1 = Subspace::span(g.dim(), 1, &forms)?;
    let basis: Vec<String> = v1.basis().iter().map(|f| f.to_string()).collect();
    println!("V1 = Span{{{}}}", basis.join(", "));
    for k in 0..=g.dim() {
        let row: Vec<String> = (0..=k)
            .map(|p| hpq(&g, &v1, p, k - p).map(|h| format!("h^{{{p},{}}}={h}", k - p)))
            .collect::<Result<_, _>>()?;
        println!("{}", row.join("  "));
    }
    let vanishes = hpq(&g, &v1, 0, 2)? == 0 && hpq(&g, &v1, 0, 3)? == 0;
    println!("h^{{0,2}} = h^{{0,3}} = 0: {vanishes}");
    Ok(if vanishes { EXIT_FOUND } else { EXIT_NOT_FOUND })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check {
            constants,
            params,
            coframe,
            catalog,
        } => check(&constants, &params, coframe.as_deref(), catalog),
        Command::Classify {
            catalog,
            samples,
            seed,
            format,
            nilpotent,
        } => run_classify(catalog, Options { samples, seed }, format, nilpotent),
        Command::Contact { constants, params } => contact(&constants, &params),
        Command::Search {
            constants,
            params,
            restarts,
            seed,
            tol,
        } => search(
            &constants,
            &params,
            SearchOptions {
                restarts,
                seed,
                tol,
                ..SearchOptions::default()
            },
        ),
        Command::Hpq {
            constants,
            params,
            v1,
        } => run_hpq(&constants, &params, &v1),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
