use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use spd_core::configurations::{fcc_with, five_square, hcp_with, perturb, rho_bar, Triangulation};
use spd_core::sweeps::{fmt_sig, tabulate, Curve, ExecMode};
use spd_core::trig::SphericalTriangle;
use spd_core::verify::{full_suite, quick_suite, SuiteOptions, VerificationReport};
use spd_core::{TypeIConfiguration, ALPHA0, GAMMA, GAMMA0};

mod json;

#[derive(Parser)]
#[command(name = "spd", version, about = "Locally averaged density of twelve-neighbour configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants of a single spherical triangle.
    Tri(TriArgs),
    /// Build, load or dump a Type-I configuration and report its density.
    Config(ConfigArgs),
    /// Tabulate a named curve as CSV.
    Curves(CurvesArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct TriArgs {
    /// Three side lengths.
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], allow_hyphen_values = true,
          conflicts_with = "sas", required_unless_present = "sas")]
    sss: Option<Vec<String>>,
    /// Two sides and the included angle.
    #[arg(long, num_args = 3, value_names = ["A", "B", "ANGLE"], allow_hyphen_values = true)]
    sas: Option<Vec<String>>,
    /// Read numeric values in degrees.
    #[arg(long)]
    deg: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Fcc,
    Hcp,
    FiveSquare,
}

#[derive(Args)]
struct ConfigArgs {
    family: Option<Family>,
    /// Central angles for five-square, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    angles: Vec<String>,
    /// Split square faces with a non-icosahedral diagonal.
    #[arg(long)]
    other: bool,
    /// Read numeric angles in degrees.
    #[arg(long)]
    deg: bool,
    /// Load a configuration file instead of building a family member.
    #[arg(long, conflicts_with = "family")]
    load: Option<PathBuf>,
    /// Write the configuration in text form.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Perturb with this seed before reporting.
    #[arg(long, requires = "eps")]
    perturb: Option<u64>,
    /// Perturbation size in radians.
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args)]
struct CurvesArgs {
    /// One of the curve names, see --list.
    #[arg(required_unless_present = "list")]
    name: Option<String>,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    /// Grid step; defaults to 1/100 of the range.
    #[arg(long)]
    step: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the known curve names.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Sampling-free subset.
    #[arg(long, conflicts_with = "full")]
    quick: bool,
    /// Every criterion at full sample counts (the default).
    #[arg(long)]
    full: bool,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Stars per area in the sampling campaign.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    sequential: bool,
}

/// Radians, a named constant, or degrees under `deg`.
fn parse_angle(s: &str, deg: bool) -> Result<f64> {
    let t = s.trim();
    let named = match t {
        "a0" | "alpha0" => Some(ALPHA0),
        "gamma" => Some(GAMMA),
        "gamma0" => Some(GAMMA0),
        "pi/3" => Some(FRAC_PI_3),
        "pi/2" => Some(FRAC_PI_2),
        "pi" => Some(PI),
        _ => None,
    };
    if let Some(v) = named {
        return Ok(v);
    }
    let v: f64 = t.parse().map_err(|_| anyhow!("not an angle: {t:?}"))?;
    Ok(if deg { v.to_radians() } else { v })
}

fn triple(v: &[String], deg: bool) -> Result<[f64; 3]> {
    Ok([parse_angle(&v[0], deg)?, parse_angle(&v[1], deg)?, parse_angle(&v[2], deg)?])
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_tri(a: TriArgs) -> Result<()> {
    let tri = if let Some(s) = &a.sss {
        let [x, y, z] = triple(s, a.deg)?;
        SphericalTriangle::from_sss(x, y, z)?
    } else if let Some(s) = &a.sas {
        let [x, y, c] = triple(s, a.deg)?;
        SphericalTriangle::from_sas(x, y, c)?
    } else {
        bail!("one of --sss or --sas is required");
    };
    emit(&json::to_string(&tri.invariants())?, None)
}

fn cmd_config(a: ConfigArgs) -> Result<()> {
    let tri = if a.other {
        Triangulation::Other
    } else {
        Triangulation::Icosahedral
    };
    let mut config: TypeIConfiguration = if let Some(p) = &a.load {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        TypeIConfiguration::from_text(&text)?
    } else {
        match a.family {
            Some(Family::Fcc) => fcc_with(tri)?,
            Some(Family::Hcp) => hcp_with(tri)?,
            Some(Family::FiveSquare) => {
                if a.angles.len() != 5 {
                    bail!("five-square needs --angles with five values");
                }
                let th: Vec<f64> = a.angles.iter().map(|s| parse_angle(s, a.deg)).collect::<Result<_>>()?;
                five_square([th[0], th[1], th[2], th[3], th[4]], tri)?
            }
            None => bail!("give a family (fcc, hcp, five-square) or --load"),
        }
    };
    if let Some(seed) = a.perturb {
        config = perturb(&config, seed, a.eps.unwrap_or(0.0))?;
    }
    if let Some(p) = &a.dump {
        fs::write(p, config.to_text()).with_context(|| format!("writing {}", p.display()))?;
    }
    emit(&json::to_string(&rho_bar(&config)?)?, None)
}

fn cmd_curves(a: CurvesArgs) -> Result<()> {
    if a.list {
        let names: Vec<&str> = Curve::ALL.iter().map(|c| c.name()).collect();
        return emit(&(names.join("\n") + "\n"), None);
    }
    let name = a.name.unwrap_or_default();
    let curve = Curve::parse(&name).ok_or_else(|| anyhow!("unknown curve {name:?}; try --list"))?;
    let (lo0, hi0) = curve.domain();
    let (lo, hi) = (a.from.unwrap_or(lo0), a.to.unwrap_or(hi0));
    let span = (hi - lo).abs();
    let step = a.step.unwrap_or(if span > 0.0 { span / 100.0 } else { 1.0 });
    let rows = tabulate(curve, (lo, hi), step)?;
    let mut text = String::from("param,value\n");
    for (x, y) in rows {
        text.push_str(&format!("{},{}\n", fmt_sig(x), fmt_sig(y)));
    }
    emit(&text, a.out.as_ref())
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let reports: Vec<VerificationReport> = if a.quick {
        quick_suite()
    } else {
        let mut opts = SuiteOptions::full(a.seed);
        if let Some(n) = a.samples {
            opts.star_samples = n;
        }
        if a.sequential {
            opts.mode = ExecMode::Sequential;
        }
        full_suite(opts)
    };
    let ok = reports.iter().all(|r| r.pass);
    if a.json {
        emit(&json::to_string(&reports)?, None)?;
    } else {
        let mut text = String::new();
        for r in &reports {
            text.push_str(&format!(
                "{:>2} {} {}  value={} expected={} tol={}\n",
                r.criterion,
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                fmt_sig(r.value),
                fmt_sig(r.expected),
                fmt_sig(r.tol),
            ));
        }
        let failed = reports.iter().filter(|r| !r.pass).count();
        text.push_str(&format!("{} checks, {} failed\n", reports.len(), failed));
        emit(&text, None)?;
    }
    Ok(ok)
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("SPD_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| anyhow!("SPD_THREADS must be a count, got {v:?}"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    init_threads()?;
    match cli.command {
        Command::Tri(a) => cmd_tri(a)?,
        Command::Config(a) => cmd_config(a)?,
        Command::Curves(a) => cmd_curves(a)?,
        Command::Verify(a) => {
            if !cmd_verify(a)? {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("spd: {e:#}");
            ExitCode::from(2)
        }
    }
}
