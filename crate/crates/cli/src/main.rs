//! `k3scan`: curves, chambers, series, discriminant forms and template
//! searches for the catalog lattices or a lattice file.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use k3scan_core::classification::{builtin_search, search_template, MatrixTemplate};
use k3scan_core::input::LatticeFile;
use k3scan_core::presets;
use k3scan_core::series::SeriesKind;
use k3scan_core::{vinberg_sieve, CurveSystem, DivisorClass, Error, GramLattice};

#[derive(Parser)]
#[command(name = "k3scan", version, about = "Exact lattice computations for K3 surfaces with finitely many (-2)-curves")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Catalog lattice (S1..S6, L24, L27, or L25, S113, S114).
    #[arg(long)]
    preset: Option<String>,
    /// Lattice file {"rank", "gram", "labels", "ample"}.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct SieveArgs {
    #[command(flatten)]
    source: Source,
    /// Sieve roots up to this degree before checking closure. Without it the
    /// bound is raised until the chamber closes.
    #[arg(long)]
    kmax: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// (-2)-curves, their intersection matrix, relations and the minimal polarization.
    Curves(SieveArgs),
    /// Vertices of the fundamental chamber and its radius.
    Chamber(SieveArgs),
    /// Generating series of big and nef classes.
    Series {
        #[command(flatten)]
        sieve: SieveArgs,
        #[arg(long, value_enum, default_value_t = KindArg::Theta)]
        kind: KindArg,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(i64).range(1..))]
        max_square: i64,
    },
    /// Discriminant group, isotropic elements and their overlattices.
    Disc {
        #[command(flatten)]
        source: Source,
    },
    /// Rank-constrained search over an intersection-matrix template.
    Classify {
        /// Shipped template (S1..S6, L24, L27).
        #[arg(long, group = "tpl")]
        template: Option<String>,
        /// Template file.
        #[arg(long, group = "tpl")]
        custom: Option<PathBuf>,
    },
    /// The catalog as lattice files.
    Presets,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Theta,
    Xi,
}

impl From<KindArg> for SeriesKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Theta => SeriesKind::Theta,
            KindArg::Xi => SeriesKind::Xi,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Core(e) => match e {
                Error::UnknownName(_) => 1,
                Error::IncompleteSieve { .. } => 3,
                Error::NonCompactChamber { .. } => 4,
                _ => 2,
            },
        }
    }
}

/// A lattice with its seed and provenance.
pub struct Loaded {
    pub name: Option<String>,
    pub lattice: GramLattice,
    pub seed: Option<DivisorClass>,
    default_kmax: Option<i64>,
}

fn load(source: &Source) -> Result<Loaded, CliError> {
    if let Some(name) = &source.preset {
        let p = presets::preset(name)?;
        return Ok(Loaded {
            name: Some(p.name.to_string()),
            lattice: p.lattice,
            seed: p.seed,
            default_kmax: (p.default_kmax > 0).then_some(p.default_kmax),
        });
    }
    let path = source.file.as_ref().expect("clap requires a source");
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let (lattice, seed) = LatticeFile::parse(&text)?.into_lattice()?;
    Ok(Loaded {
        name: None,
        lattice,
        seed,
        default_kmax: None,
    })
}

const ESCALATION_LIMIT: i64 = 64;

fn sieve(loaded: &Loaded, kmax: Option<i64>) -> Result<CurveSystem, CliError> {
    let seed = loaded
        .seed
        .as_ref()
        .ok_or_else(|| CliError::Input("the lattice has no ample class".into()))?;
    if let Some(k) = kmax {
        return Ok(vinberg_sieve(&loaded.lattice, seed, k)?);
    }
    let mut k = loaded.default_kmax.unwrap_or(2);
    loop {
        match vinberg_sieve(&loaded.lattice, seed, k) {
            Err(Error::IncompleteSieve { .. }) if k < ESCALATION_LIMIT => k = (2 * k).min(ESCALATION_LIMIT),
            other => return Ok(other?),
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Curves(args) => {
            let loaded = load(&args.source)?;
            let cs = sieve(&loaded, args.kmax)?;
            Ok(report::curves(&loaded, &cs, json)?)
        }
        Command::Chamber(args) => {
            let loaded = load(&args.source)?;
            let cs = sieve(&loaded, args.kmax)?;
            Ok(report::chamber(&loaded, &cs, json)?)
        }
        Command::Series { sieve: args, kind, max_square } => {
            let loaded = load(&args.source)?;
            let cs = sieve(&loaded, args.kmax)?;
            Ok(report::series(&loaded, &cs, (*kind).into(), *max_square, json)?)
        }
        Command::Disc { source } => {
            let loaded = load(source)?;
            Ok(report::disc(&loaded, json)?)
        }
        Command::Classify { template, custom } => {
            let (t, expected) = match (template, custom) {
                (Some(name), _) => {
                    let b = builtin_search(name).ok_or_else(|| CliError::Usage(format!("unknown template {name:?}")))?;
                    let expected: Vec<(Vec<i64>, &str)> = b.expected.into_iter().zip(b.labels).collect();
                    (b.template, Some(expected))
                }
                (None, Some(path)) => {
                    let text =
                        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    (MatrixTemplate::from_json(&text)?, None)
                }
                (None, None) => return Err(CliError::Usage("classify needs --template or --custom".into())),
            };
            let result = search_template(&t)?;
            Ok(report::classify(&result, expected.as_deref(), json))
        }
        Command::Presets => Ok(report::presets(json)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(&cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("k3scan: {e}");
            ExitCode::from(e.code())
        }
    }
}
