//! `gwdesc`: exact correlators, psi integrals, the phase-space transform,
//! potentials and identity suites from the command line.
//!
//! Exit status: 0 on success, 1 when an identity check fails, 2 on bad
//! input or a failed computation.

mod parse;

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gwdesc::fixtures::{load_fixture, FIXTURE_NAMES};
use gwdesc::geometry::ModelFile;
use gwdesc::moduli::psi_integral_genus0;
use gwdesc::phase::PhaseSpace;
use gwdesc::rational;
use gwdesc::verify::{run_suites, Suite, VerifyOptions};
use gwdesc::{Engine, EngineConfig, Error, GeometryModel, NovikovSeries, PrimaryTable, Result, TautTable, TruncationPolicy};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "gwdesc", version, about = "Exact genus-zero gravitational descendants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Fixture name (P1, P2, point) or path to a model JSON file.
    #[arg(long)]
    model: String,
    /// Three-point primary table; defaults to the fixture's own table, or
    /// an empty table for model files.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Tautological integrals for higher-genus constant maps.
    #[arg(long)]
    taut: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct TruncArgs {
    /// Largest degree of beta against the ample class.
    #[arg(long, default_value_t = 2)]
    qmax: u64,
    /// Largest total degree in the x coordinates.
    #[arg(long, default_value_t = 4)]
    xdeg: u32,
    /// Largest descendant level of the x coordinates.
    #[arg(long, default_value_t = 2)]
    dmax: u32,
}

impl TruncArgs {
    fn policy(&self) -> TruncationPolicy {
        TruncationPolicy {
            max_beta_degree: self.qmax,
            max_x_degree: self.xdeg,
            max_descendant: self.dmax,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    /// Stable-range descendant potential.
    Fst,
    /// Modified-correlator potential.
    G,
    /// Primary potential.
    Phi,
}

#[derive(Subcommand)]
enum Command {
    /// One correlator, or its series over beta when --qmax is given.
    Correlator {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        /// Curve class coordinates, comma separated.
        #[arg(long, conflicts_with = "qmax")]
        beta: Option<String>,
        /// Sum over all beta up to this degree.
        #[arg(long)]
        qmax: Option<u64>,
        /// Insertions such as "tau(1):one,tau(0,1):h,h2".
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        ins: String,
    },
    /// Integral of psi classes over the genus-zero moduli of n-pointed curves.
    Intersect {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        psi: Vec<u32>,
    },
    /// Dump the coordinate change T and its inverse as JSON.
    Transform {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        trunc: TruncArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run identity suites; exits 1 on the first failed identity.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        trunc: TruncArgs,
        /// "all" or a comma separated list of suite names.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Largest number of marks for the point-target oracle.
        #[arg(long, default_value_t = 7)]
        nmax: usize,
    },
    /// Dump a potential as JSON records.
    Potential {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        trunc: TruncArgs,
        #[arg(long, value_enum, default_value = "fst")]
        which: Which,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a model file (and optionally a table) and print the checks.
    Validate {
        #[command(flatten)]
        model: ModelArgs,
    },
}

enum Outcome {
    Ok,
    IdentityFailed,
}

struct Loaded {
    model: GeometryModel,
    table: PrimaryTable,
    taut: TautTable,
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

fn load(args: &ModelArgs) -> Result<Loaded> {
    let (model, mut table) = if FIXTURE_NAMES.contains(&args.model.as_str()) {
        let f = load_fixture(&args.model)?;
        (f.model, f.table)
    } else {
        let text = read(&PathBuf::from(&args.model))?;
        (GeometryModel::from_json(&text)?, PrimaryTable::new())
    };
    if let Some(p) = &args.table {
        table = PrimaryTable::from_json(&model, &read(p)?)?;
    }
    let taut = match &args.taut {
        Some(p) => TautTable::from_json(&read(p)?)?,
        None => TautTable::new(),
    };
    Ok(Loaded { model, table, taut })
}

fn engine(l: Loaded) -> Result<Engine> {
    Ok(Engine::new(l.model, l.table, EngineConfig::default())?.with_taut_table(l.taut))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n"))
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

/// A JSON array with one compact record per line, so dumps diff cleanly.
fn json_lines<T: Serialize>(items: &[T]) -> Result<String> {
    if items.is_empty() {
        return Ok("[]".into());
    }
    let lines = items.iter().map(serde_json::to_string).collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(format!("[\n  {}\n]", lines.join(",\n  ")))
}

fn correlator(args: &ModelArgs, genus: u32, beta: Option<&str>, qmax: Option<u64>, ins: &str) -> Result<()> {
    let raw = parse::parse_insertions(ins)?;
    let l = load(args)?;
    let ins = parse::resolve(&l.model, &raw)?;
    let e = engine(l)?;
    let value = |b: &gwdesc::CurveClass| -> Result<gwdesc::Q> {
        if genus > 0 || ins.iter().all(|x| x.e == 0) {
            let pairs: Vec<(u32, usize)> = ins.iter().map(|x| (x.d + x.e, x.a)).collect();
            e.descendant_correlator(genus, b, &pairs)
        } else {
            e.generalized_correlator(b, &ins)
        }
    };
    match (beta, qmax) {
        (Some(text), _) => {
            let b = parse::parse_beta(e.model(), text)?;
            println!("{}", rational::format(&value(&b)?));
        }
        (None, Some(q)) => {
            let model = e.model();
            let bound = if model.lattice_rank() == 0 {
                gwdesc::QBound::new(Vec::new(), q)?
            } else {
                model.qbound(q)?
            };
            let mut s = NovikovSeries::zero(&bound);
            for b in bound.classes() {
                s.add_term(b.clone(), value(&b)?);
            }
            println!("{s}");
        }
        (None, None) if e.model().lattice_rank() == 0 => {
            println!("{}", rational::format(&value(&gwdesc::CurveClass::zero(0))?));
        }
        (None, None) => return Err(Error::Config("give --beta or --qmax".into())),
    }
    Ok(())
}

fn intersect(n: usize, psi: &[u32]) -> Result<()> {
    if n < 3 {
        return Err(Error::domain("the moduli of n-pointed genus-zero curves needs n >= 3"));
    }
    if psi.len() != n {
        return Err(Error::domain(format!("--psi lists {} exponents for n = {n}", psi.len())));
    }
    println!("{}", rational::format(&psi_integral_genus0(psi)));
    Ok(())
}

fn transform(args: &ModelArgs, trunc: &TruncArgs, out: &Option<PathBuf>) -> Result<Outcome> {
    let e = engine(load(args)?)?;
    let space = PhaseSpace::new(&e, trunc.policy())?;
    let t = space.build_t()?;
    let inv = t.invert()?;
    if !t.try_mul(&inv)?.is_identity() {
        eprintln!("T times its inverse is not the identity at this truncation");
        return Ok(Outcome::IdentityFailed);
    }
    let index: Vec<(u32, usize)> = t.index().iter().map(|i| (i.d, i.a)).collect();
    let doc = format!(
        "{{\n\"model\": {},\n\"policy\": {},\n\"index\": {},\n\"T\": {},\n\"T_inverse\": {}\n}}",
        serde_json::to_string(e.model().name())?,
        serde_json::to_string(&trunc.policy())?,
        serde_json::to_string(&index)?,
        json_lines(&t.to_records())?,
        json_lines(&inv.to_records())?,
    );
    emit(out, &doc)?;
    Ok(Outcome::Ok)
}

fn verify(args: &ModelArgs, trunc: &TruncArgs, suite: &str, opts: VerifyOptions) -> Result<Outcome> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        suite.split(',').map(|s| s.trim().parse()).collect::<Result<_>>()?
    };
    let l = load(args)?;
    let opts = VerifyOptions {
        policy: trunc.policy(),
        ..opts
    };
    let report = run_suites(&suites, &l.model, &l.table, &opts)?;
    println!("{report}");
    if let Some(f) = report.first_failure() {
        eprintln!("first counterexample ({}): {}", f.suite, f.counterexample.as_deref().unwrap_or("?"));
        return Ok(Outcome::IdentityFailed);
    }
    Ok(Outcome::Ok)
}

fn potential(args: &ModelArgs, trunc: &TruncArgs, which: Which, out: &Option<PathBuf>) -> Result<()> {
    let e = engine(load(args)?)?;
    let space = PhaseSpace::new(&e, trunc.policy())?;
    let p = match which {
        Which::Fst => space.potential_f_st()?,
        Which::G => space.potential_g()?,
        Which::Phi => space.primary_potential_phi()?,
    };
    emit(out, &json_lines(&p.to_records())?)
}

fn validate(args: &ModelArgs) -> Result<Outcome> {
    let model = if FIXTURE_NAMES.contains(&args.model.as_str()) {
        load_fixture(&args.model)?.model
    } else {
        let file: ModelFile = serde_json::from_str(&read(&PathBuf::from(&args.model))?)?;
        file.into_model()?
    };
    let report = model.validate();
    print!("{report}");
    if !report.passed() {
        return Err(Error::validation(format!("model {} failed validation", model.name())));
    }
    if let Some(p) = &args.table {
        let t = PrimaryTable::from_json(&model, &read(p)?)?;
        println!("PASS {:<14} {} entries", "table", t.len());
    }
    if let Some(p) = &args.taut {
        let t = TautTable::from_json(&read(p)?)?;
        println!("PASS {:<14} {} entries", "taut-table", t.len());
    }
    Ok(Outcome::Ok)
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Correlator {
            model,
            genus,
            beta,
            qmax,
            ins,
        } => correlator(&model, genus, beta.as_deref(), qmax, &ins).map(|_| Outcome::Ok),
        Command::Intersect { n, psi } => intersect(n, &psi).map(|_| Outcome::Ok),
        Command::Transform { model, trunc, out } => transform(&model, &trunc, &out),
        Command::Verify {
            model,
            trunc,
            suite,
            samples,
            seed,
            nmax,
        } => verify(
            &model,
            &trunc,
            &suite,
            VerifyOptions {
                samples,
                seed,
                nmax,
                ..VerifyOptions::default()
            },
        ),
        Command::Potential { model, trunc, which, out } => potential(&model, &trunc, which, &out).map(|_| Outcome::Ok),
        Command::Validate { model } => validate(&model),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::IdentityFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
