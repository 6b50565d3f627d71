use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use covop_core::diagnostics::{self, ExtensibilityReport};
use covop_core::io::{self as cio, fmt_f64};
use covop_core::{gom, moments, reconstruct, BorelSet, Complex64, Error, FiniteVector, StructureMatrix};

#[derive(Parser)]
#[command(name = "covop", version, about = "Covariant operator measures on finite windows")]
struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true, env = "COVOP_SEED", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Family spec, e.g. `ones`, `family=gram vectors=g.csv`.
    #[arg(long)]
    family: String,

    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Window realization of the structure matrix.
    Matrix {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        window: usize,
    },
    /// Matrix of G^C(X).
    Measure {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        set: String,
        #[arg(long)]
        window: usize,
    },
    /// Samples of the density of G^C(X)(φ, ψ), or of its Cesàro mean.
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        cesaro: Option<u32>,
        #[arg(long, default_value_t = 720)]
        grid: usize,
    },
    /// Θ_s or V_k.
    #[command(group(ArgGroup::new("which").required(true).args(["s", "cyclic"])))]
    Moment {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        cyclic: Option<i64>,
        #[arg(long)]
        window: usize,
    },
    /// One of the four norms on the window.
    Norm {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        norm: NormKind,
        #[arg(long)]
        window: usize,
        #[arg(long, default_value_t = diagnostics::DEFAULT_GRID)]
        grid: usize,
    },
    /// Cesàro reconstruction error along a list of orders.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        set: String,
        #[arg(long)]
        window: usize,
        #[arg(long = "M-sweep", alias = "m-sweep", value_delimiter = ',', required = true)]
        m_sweep: Vec<u32>,
        /// Test vectors for the density error (default (φ₀+φ₁)/√2 for both).
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(long)]
        psi: Option<PathBuf>,
        #[arg(long, default_value_t = 720)]
        grid: usize,
    },
    /// Extensibility report over a list of window radii.
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', required = true)]
        sweep: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exponential transform F^C(z).
    Transform {
        #[command(flatten)]
        common: Common,
        /// `re,im`
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        window: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NormKind {
    #[value(name = "1inf")]
    OneInf,
    M,
    O,
    F,
    All,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            if is_usage(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::UnknownFamily(_)
            | Error::UnknownQuantity(_)
            | Error::InvalidArgument(_)
            | Error::EmptyArc { .. }
            | Error::Io(_)
    )
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_vector(path: &PathBuf) -> Result<FiniteVector, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    cio::vector_from_csv(&text)
}

fn parse_z(s: &str) -> Result<Complex64, Error> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let p = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("`{s}` is not of the form re,im")))
    };
    Ok(Complex64::new(p(re)?, p(im)?))
}

fn run(cli: &Cli) -> Result<(), Error> {
    let family = |c: &Common| -> Result<StructureMatrix, Error> { cio::parse_family(&c.family) };
    match &cli.command {
        Command::Matrix { common, window } => {
            let c = family(common)?;
            emit(&common.out, &cio::matrix_to_csv(&c.realize(*window)?))
        }
        Command::Measure { common, set, window } => {
            let c = family(common)?;
            let x: BorelSet = set.parse()?;
            emit(&common.out, &cio::matrix_to_csv(&gom::gom_matrix(&c, &x, *window)?))
        }
        Command::Density {
            common,
            phi,
            psi,
            cesaro,
            grid,
        } => {
            let c = family(common)?;
            let (phi, psi) = (read_vector(phi)?, read_vector(psi)?);
            let p = match cesaro {
                Some(m) => reconstruct::cesaro_density(&c, &phi, &psi, *m)?,
                None => gom::density(&c, &phi, &psi)?,
            };
            emit(&common.out, &cio::density_to_csv(&p, *grid))
        }
        Command::Moment {
            common,
            s,
            cyclic,
            window,
        } => {
            let c = family(common)?;
            let m = match (s, cyclic) {
                (Some(s), _) => moments::moment_matrix(&c, *s, *window)?,
                (None, Some(k)) => moments::cyclic_moment(&c, *k, *window)?,
                (None, None) => unreachable!("clap enforces one of --s / --cyclic"),
            };
            emit(&common.out, &cio::matrix_to_csv(&m))
        }
        Command::Norm {
            common,
            norm,
            window,
            grid,
        } => {
            let c = family(common)?;
            if matches!(norm, NormKind::O | NormKind::All) {
                eprintln!("note: {OBSERVABLE_NOTE}");
            }
            let text = match norm {
                NormKind::OneInf => format!("{}\n", diagnostics::sup_entry(&c, *window)?),
                NormKind::F => format!("{}\n", diagnostics::first_moment_norm(&c, *window)?),
                NormKind::M => {
                    let b = diagnostics::multiplier_bounds(&c, *window, cli.seed)?;
                    format!("{} {}\n", b.lower, b.upper)
                }
                NormKind::O => {
                    let (v, w) = diagnostics::observable_norm_estimate(&c, *window, *grid, cli.seed)?;
                    format!("{v} {w}\n")
                }
                NormKind::All => {
                    let r = diagnostics::norm_report(&c, *window, *grid, cli.seed)?;
                    format!(
                        "norm_1inf={}\nmultiplier_lower={}\nmultiplier_upper={}\nobservable_lower={}\nobservable_witness={}\nfirst_moment={}\n",
                        r.norm_1inf,
                        r.multiplier_lower,
                        r.multiplier_upper,
                        r.observable_lower,
                        r.observable_witness,
                        r.first_moment
                    )
                }
            };
            emit(&common.out, &text)
        }
        Command::Reconstruct {
            common,
            set,
            window,
            m_sweep,
            phi,
            psi,
            grid,
        } => {
            let c = family(common)?;
            let x: BorelSet = set.parse()?;
            let h = Complex64::new(0.5f64.sqrt(), 0.0);
            let default = FiniteVector::from_pairs([(0, h), (1, h)]);
            let phi = phi.as_ref().map(read_vector).transpose()?.unwrap_or_else(|| default.clone());
            let psi = psi.as_ref().map(read_vector).transpose()?.unwrap_or(default);
            let rows = reconstruct::cesaro_sweep(&c, &x, *window, m_sweep, &phi, &psi, *grid)?;
            let mut text = String::from("M,entry_dev,l1_err\n");
            for r in rows {
                let _ = writeln!(text, "{},{},{}", r.order, fmt_f64(r.entry_dev), fmt_f64(r.l1_err));
            }
            emit(&common.out, &text)
        }
        Command::Report { common, sweep, format } => {
            let c = family(common)?;
            let report = diagnostics::extensibility_report(&c, sweep, cli.seed)?;
            let text = match format {
                Format::Text => report_text(&common.family, &report),
                Format::Csv => report_csv(&report),
            };
            emit(&common.out, &text)
        }
        Command::Transform { common, z, window } => {
            let c = family(common)?;
            let z = parse_z(z)?;
            emit(&common.out, &cio::matrix_to_csv(&moments::exp_transform(&c, z, *window)?))
        }
    }
}

const OBSERVABLE_NOTE: &str = "the observable value is a search lower bound; exact values such as 1/π for a single off-diagonal entry are numerical conjectures";

fn report_text(spec: &str, r: &ExtensibilityReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "family: {spec}");
    let _ = writeln!(t, "verdict: {}", r.verdict);
    if r.certificates.is_empty() {
        let _ = writeln!(t, "certificates: none");
    } else {
        let _ = writeln!(t, "certificates:");
        for c in &r.certificates {
            let _ = writeln!(t, "  ({}) N={} value={} {}", c.criterion, c.window, c.value, c.detail);
        }
    }
    for w in &r.warnings {
        let _ = writeln!(t, "warning: {w}");
    }
    let _ = writeln!(t, "sweep:");
    let _ = writeln!(t, "  N theta1 S two_inf");
    for s in &r.sweep {
        let _ = writeln!(t, "  {} {} {} {}", s.radius, s.theta1, s.sup_entry, s.two_inf);
    }
    let _ = writeln!(t, "growth (slope of ln value vs ln(2N+1), divergent above {}):", diagnostics::DIVERGENCE_SLOPE);
    for f in &r.fits {
        let _ = writeln!(t, "  {} {} {}", f.quantity, f.slope, f.growth);
    }
    t
}

fn report_csv(r: &ExtensibilityReport) -> String {
    let mut t = String::from("quantity,N,value\n");
    for f in &r.fits {
        for (n, v) in &f.points {
            let _ = writeln!(t, "{},{n},{}", f.quantity, fmt_f64(*v));
        }
    }
    let _ = writeln!(t, "fit,slope,classification");
    for f in &r.fits {
        let _ = writeln!(t, "{},{},{}", f.quantity, fmt_f64(f.slope), f.growth);
    }
    let _ = writeln!(t, "verdict,{},{}", r.verdict, r.certificates.len());
    t
}
