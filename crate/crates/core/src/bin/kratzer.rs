use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use kratzer::aim::{aim_angular_l, aim_radial_energy};
use kratzer::cli::{
    curve_csv, linear_grid, table_csv, table_rows, NumberFormat, CURVE_THETA_DEG, TABLE_STRENGTHS,
};
use kratzer::closedform::{effective_l, kratzer_energy, Method};
use kratzer::model::{Molecule, NonCentralParams, PhysicalConstants, CONSTANTS_ENV};
use kratzer::oracle::{fd_angular_leff, fd_radial_spectrum, Grid1D};
use kratzer::verify;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;

/// Bound states of diatomic molecules in the modified Kratzer potential with
/// non-central angular terms.
#[derive(Debug, Parser)]
#[command(name = "kratzer", version)]
struct Cli {
    /// Molecule file (`key = value` lines: name, D_eV, a_angstrom, mu_amu).
    /// Defaults to the bundled CO record.
    #[arg(long, global = true)]
    molecule: Option<PathBuf>,

    /// Constants preset (`table2`, `codata2018`) or constants file. Falls back
    /// to $KRATZER_CONSTANTS, then `table2`.
    #[arg(long, global = true)]
    constants: Option<String>,

    /// Print 17 significant digits instead of the fixed layout.
    #[arg(long, global = true)]
    raw: bool,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Write the resolved molecule record to this path.
    #[arg(long, global = true)]
    dump_molecule: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Energy table for n, l = m in 0..=3 at beta = gamma in {0, 0.1, 1, 5}.
    Table2(TableArgs),
    /// Potential curves at fixed theta as CSV.
    Curve(CurveArgs),
    /// One energy level, central (--l) or non-central (--m with --beta/--gamma).
    Energy(EnergyArgs),
    /// Run the acceptance checks and report pass/fail per criterion.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, default_value_t = 3)]
    n_max: u32,
    #[arg(long, default_value_t = 3)]
    l_max: u32,
    /// beta = gamma values, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = TABLE_STRENGTHS.to_vec())]
    strengths: Vec<f64>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    /// Polar angle in degrees.
    #[arg(long, default_value_t = CURVE_THETA_DEG)]
    theta: f64,
    #[arg(long, default_value_t = 0.5)]
    r_min: f64,
    #[arg(long, default_value_t = 5.0)]
    r_max: f64,
    #[arg(long, default_value_t = 451)]
    points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    ClosedForm,
    Aim,
    Fd,
    All,
}

#[derive(Debug, Args)]
struct EnergyArgs {
    /// Radial quantum number.
    #[arg(long)]
    n: u32,
    /// Angular momentum of the central problem (may be non-integer).
    #[arg(long, conflicts_with_all = ["m", "big_n", "beta", "gamma"])]
    l: Option<f64>,
    /// Magnetic quantum number of the non-central problem.
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i64>,
    /// Degree of the polar (Jacobi) factor; defaults to n.
    #[arg(long = "N", id = "big_n")]
    big_n: Option<u32>,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::ClosedForm)]
    method: MethodArg,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Only the toy-scale AIM checks.
    #[arg(long)]
    toy: bool,
}

/// Failures that map to exit code 1 rather than 2.
#[derive(Debug)]
struct VerificationFailed(usize);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} criterion(s) failed", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn constants(cli: &Cli) -> Result<PhysicalConstants> {
    let c = match &cli.constants {
        Some(spec) => PhysicalConstants::resolve(spec),
        None => PhysicalConstants::from_env_or(PhysicalConstants::table2()),
    };
    c.with_context(|| format!("resolving constants (--constants or ${CONSTANTS_ENV})"))
}

fn molecule(cli: &Cli) -> Result<Molecule> {
    match &cli.molecule {
        Some(path) => Molecule::load(path).with_context(|| format!("reading {}", path.display())),
        None => Ok(Molecule::co()),
    }
}

fn energy_report(
    consts: &PhysicalConstants,
    mol: &Molecule,
    args: &EnergyArgs,
    format: NumberFormat,
) -> Result<String> {
    let methods: &[Method] = match args.method {
        MethodArg::ClosedForm => &[Method::ClosedForm],
        MethodArg::Aim => &[Method::AimNumeric],
        MethodArg::Fd => &[Method::FdOracle],
        MethodArg::All => &[Method::ClosedForm, Method::AimNumeric, Method::FdOracle],
    };
    let (label, nc, m, degree) = match (args.l, args.m) {
        (Some(l), _) => {
            if !(l >= 0.0) {
                bail!("--l must be non-negative, got {l}");
            }
            (format!("n={} l={l}", args.n), None, 0, 0)
        }
        (None, Some(m)) => {
            let nc = NonCentralParams::new(args.beta, args.gamma)?;
            let degree = args.big_n.unwrap_or(args.n);
            (
                format!(
                    "n={} N={degree} m={m} beta={} gamma={}",
                    args.n, args.beta, args.gamma
                ),
                Some(nc),
                m,
                degree,
            )
        }
        (None, None) => bail!("give either --l (central) or --m (non-central)"),
    };
    let mut out = String::new();
    for &method in methods {
        let l_eff = match (&nc, method) {
            (None, _) => args.l.unwrap_or(0.0),
            (Some(nc), Method::ClosedForm) => effective_l(consts, mol, nc, m, degree)?,
            (Some(nc), Method::AimNumeric) => aim_angular_l(consts, mol, nc, m, degree)?,
            (Some(nc), Method::FdOracle) => {
                fd_angular_leff(consts, mol, nc, m, 4000, degree as usize + 1, true)?.eigenvalues
                    [degree as usize]
            }
        };
        let energy = match method {
            Method::ClosedForm => kratzer_energy(consts, mol, args.n, l_eff),
            Method::AimNumeric => aim_radial_energy(consts, mol, args.n, l_eff)?.energy,
            Method::FdOracle => {
                let grid = Grid1D::radial(mol, 0.002)?;
                let level = args.n as usize;
                let spectrum =
                    fd_radial_spectrum(consts, mol, l_eff, &grid, level + 1, true, Some(1e-4))?;
                if spectrum.coarse {
                    eprintln!(
                        "warning: finite-difference drift {:.2e} eV exceeds 1e-4 eV",
                        spectrum.drift[level]
                    );
                }
                spectrum.eigenvalues[level]
            }
        };
        out.push_str(&format!(
            "{label} l_eff={} E={} eV [{method}]\n",
            format.energy(l_eff),
            format.energy(energy)
        ));
    }
    Ok(out)
}

fn run(cli: &Cli) -> Result<String> {
    let consts = constants(cli)?;
    let mol = molecule(cli)?;
    if let Some(path) = &cli.dump_molecule {
        fs::write(path, mol.to_file_string())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let format = if cli.raw {
        NumberFormat::Raw
    } else {
        NumberFormat::Fixed
    };
    match &cli.command {
        Command::Table2(args) => {
            if args.strengths.is_empty() {
                bail!("--strengths must not be empty");
            }
            let rows = table_rows(&consts, &mol, args.n_max, args.l_max, &args.strengths)?;
            Ok(table_csv(&rows, &args.strengths, format))
        }
        Command::Curve(args) => {
            let grid = linear_grid(args.r_min, args.r_max, args.points)?;
            Ok(curve_csv(&consts, &mol, args.theta, &grid, format)?)
        }
        Command::Energy(args) => energy_report(&consts, &mol, args, format),
        Command::Verify(args) => {
            let reports = if args.toy {
                verify::run_toy(&consts)
            } else {
                verify::run_all(&consts, &mol)
            };
            let mut out = String::new();
            for r in &reports {
                out.push_str(&format!("{r}\n"));
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            out.push_str(&format!(
                "{} of {} criteria passed\n",
                reports.len() - failed,
                reports.len()
            ));
            if failed > 0 {
                emit(cli, &out)?;
                return Err(VerificationFailed(failed).into());
            }
            Ok(out)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|text| emit(&cli, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<VerificationFailed>().is_some() => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_VERIFY_FAILED)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
