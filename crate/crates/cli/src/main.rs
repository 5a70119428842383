//! `ptgin`: command-line front end for the PT-symmetric generalised
//! Ginocchio potential.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use pt_ginocchio::map::{map_table_with, MapOptions, MapTable};
use pt_ginocchio::output::{fmt_f64, json, map_csv, potential_csv, wave_csv};
use pt_ginocchio::params::{make_params, PotentialParams, QuasiParity, StateLabel};
use pt_ginocchio::potential::potential_table;
use pt_ginocchio::repro::run_golden_suite;
use pt_ginocchio::spectrum::{full_spectrum, mu_nq, SpectralValue};
use pt_ginocchio::susy::{identity_defects, partner_table, IdentityDefects};
use pt_ginocchio::verify::{oracle_agrees, shoot, ShootOptions, ShootingProblem};
use pt_ginocchio::wavefunction::{schrodinger_residual, wave_table, JacobiForm, ResidualReport};
use pt_ginocchio::Error;

#[derive(Parser, Debug)]
#[command(
    name = "ptgin",
    version,
    about = "PT-symmetric generalised Ginocchio potential toolkit"
)]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Config {
    #[arg(long, global = true, default_value_t = 1.75)]
    gamma: f64,
    #[arg(long, global = true, default_value_t = 8.1, allow_hyphen_values = true)]
    s_re: f64,
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    s_im: f64,
    #[arg(long, global = true, default_value_t = 1.25, allow_hyphen_values = true)]
    lambda_re: f64,
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda_im: f64,
    #[arg(long, global = true, default_value_t = 0.3)]
    epsilon: f64,
    #[arg(long, global = true, default_value_t = -5.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, global = true, default_value_t = 5.0, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, global = true, default_value_t = 1001)]
    count: usize,
    /// Output file (stdout if absent); a file prefix for `susy` in CSV format.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Residual bound for polishing the coordinate map.
    #[arg(long, global = true, env = "PTGIN_MAP_TOL")]
    map_tol: Option<f64>,
    /// Convergence bound on the shooting matching function.
    #[arg(long, global = true, env = "PTGIN_SHOOT_TOL")]
    shoot_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coordinate map u(x) and du/dx on the grid.
    Map,
    /// Potential V(x) on the grid.
    Potential {
        /// Also write the four separate terms.
        #[arg(long)]
        terms: bool,
    },
    /// Analytic bound-state spectrum and PT verdict.
    Spectrum,
    /// Bound-state wavefunction; q refers to the λ given on the command line.
    Wavefunction {
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        q: i32,
        #[arg(long, value_enum, default_value_t = FormArg::Cosh2u)]
        form: FormArg,
        /// Write the Schrödinger residual report (JSON) to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Bosonic potential and both SUSY partners on the grid.
    Susy,
    /// Shooting-method check of every analytic eigenvalue.
    Verify {
        /// RK4 step.
        #[arg(long, default_value_t = 2.5e-3)]
        step: f64,
    },
    /// Reference-value suite from the built-in manifest.
    Golden {
        /// Also run the shooting oracle with this RK4 step.
        #[arg(long)]
        oracle_step: Option<f64>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormArg {
    /// Jacobi argument cosh 2u.
    Cosh2u,
    /// Jacobi argument 2 tanh²u − 1.
    Tanh2,
}

impl From<FormArg> for JacobiForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Cosh2u => JacobiForm::CoshTwoU,
            FormArg::Tanh2 => JacobiForm::TanhSquared,
        }
    }
}

enum Failure {
    Usage(String),
    Core(Error),
    Io(PathBuf, std::io::Error),
    Check { code: &'static str, message: String },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Core(e) if e.is_solver_failure() => 2,
            Failure::Core(_) => 1,
            Failure::Check { .. } => 2,
            Failure::Io(..) => 3,
        }
    }

    fn line(&self) -> String {
        let (code, message) = match self {
            Failure::Usage(m) => ("Usage", m.clone()),
            Failure::Core(e) => (e.code(), e.to_string()),
            Failure::Io(path, e) => ("Io", format!("{}: {e}", path.display())),
            Failure::Check { code, message } => (*code, message.clone()),
        };
        format!("error: code={code} message={}", message.replace('\n', " "))
    }
}

type Run = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            let failure = Failure::Usage(first.trim_start_matches("error: ").to_string());
            eprintln!("{}", failure.line());
            return ExitCode::from(failure.exit_code());
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.line());
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Run {
    let cfg = &cli.config;
    if let Command::Golden { oracle_step } = cli.command {
        return cmd_golden(cfg, oracle_step);
    }
    let p = make_params(
        cfg.gamma,
        Complex64::new(cfg.s_re, cfg.s_im),
        Complex64::new(cfg.lambda_re, cfg.lambda_im),
        cfg.epsilon,
    )?;
    match &cli.command {
        Command::Map => {
            let map = grid_map(cfg, &p)?;
            let text = match cfg.format {
                Format::Csv => map_csv(&map),
                Format::Json => json(&map),
            };
            emit(cfg.output.as_deref(), &text)
        }
        Command::Potential { terms } => {
            let table = potential_table(&p, grid_map(cfg, &p)?)?;
            let text = match cfg.format {
                Format::Csv => potential_csv(&table, *terms),
                Format::Json => json(&table),
            };
            emit(cfg.output.as_deref(), &text)
        }
        Command::Spectrum => cmd_spectrum(cfg, &p),
        Command::Wavefunction { n, q, form, report } => {
            cmd_wavefunction(cfg, &p, *n, *q, (*form).into(), report.as_deref())
        }
        Command::Susy => cmd_susy(cfg, &p),
        Command::Verify { step } => cmd_verify(cfg, &p, *step),
        Command::Golden { .. } => unreachable!("handled above"),
    }
}

fn grid_map(cfg: &Config, p: &PotentialParams) -> Result<MapTable, Failure> {
    let mut opts = MapOptions::default();
    if let Some(tol) = cfg.map_tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Failure::Usage(format!("map tolerance must be positive, got {tol}")));
        }
        opts.map_tol = tol;
    }
    Ok(map_table_with(p, cfg.x_min, cfg.x_max, cfg.count, &opts)?)
}

fn emit(path: Option<&Path>, text: &str) -> Run {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e))
        }
    }
}

fn user_label(p: &PotentialParams, n: u32, q: i32) -> Result<StateLabel, Failure> {
    let q = QuasiParity::from_i32(q)?;
    // labels on the command line refer to the λ as given, before mirroring
    Ok(StateLabel::new(n, if p.mirrored() { q.flip() } else { q }))
}

fn state_rows(states: &[SpectralValue]) -> String {
    let mut text = String::from("n,q,re_mu,im_mu,re_e,im_e\n");
    for s in states {
        let values = [s.mu.re, s.mu.im, s.energy.re, s.energy.im].map(fmt_f64);
        text.push_str(&format!("{},{},{}\n", s.label.n, s.label.q.as_i32(), values.join(",")));
    }
    text
}

fn cmd_spectrum(cfg: &Config, p: &PotentialParams) -> Run {
    let report = full_spectrum(p)?;
    let text = match cfg.format {
        Format::Json => json(&report),
        Format::Csv => state_rows(&report.states),
    };
    emit(cfg.output.as_deref(), &text)
}

#[derive(Serialize)]
struct WavefunctionOutput<'a> {
    table: &'a pt_ginocchio::wavefunction::WaveTable,
    residual: &'a ResidualReport,
}

fn cmd_wavefunction(cfg: &Config, p: &PotentialParams, n: u32, q: i32, form: JacobiForm, report: Option<&Path>) -> Run {
    let sv = mu_nq(p, user_label(p, n, q)?);
    let map = grid_map(cfg, p)?;
    let table = wave_table(p, &sv, &map, form)?;
    let residual = schrodinger_residual(p, &sv, &map, form)?;
    if let Some(path) = report {
        emit(Some(path), &json(&residual))?;
    }
    let text = match cfg.format {
        Format::Csv => wave_csv(&table),
        Format::Json => json(&WavefunctionOutput {
            table: &table,
            residual: &residual,
        }),
    };
    emit(cfg.output.as_deref(), &text)
}

#[derive(Serialize)]
struct Partner {
    q: QuasiParity,
    factorization_energy: Complex64,
    identities: IdentityDefects,
    values: Vec<Complex64>,
}

#[derive(Serialize)]
struct SusyOutput {
    x: Vec<f64>,
    bosonic: Vec<Complex64>,
    partners: Vec<Partner>,
}

fn cmd_susy(cfg: &Config, p: &PotentialParams) -> Run {
    let map = grid_map(cfg, p)?;
    let x: Vec<f64> = map.xs().collect();
    let potential = potential_table(p, map.clone())?;
    let bosonic: Vec<Complex64> = potential.samples.iter().map(|s| s.v).collect();
    let mut partners = Vec::new();
    for q in [QuasiParity::Plus, QuasiParity::Minus] {
        // a sector without a normalizable ground state has no partner
        let Ok(values) = partner_table(p, q, &map) else {
            continue;
        };
        partners.push(Partner {
            q,
            factorization_energy: mu_nq(p, StateLabel::new(0, q)).energy,
            identities: identity_defects(p, q, &map)?,
            values,
        });
    }
    if partners.is_empty() {
        return Err(Failure::Core(Error::NotNormalizable {
            n: 0,
            q: QuasiParity::Plus,
        }));
    }
    let out = SusyOutput { x, bosonic, partners };
    match cfg.format {
        Format::Json => emit(cfg.output.as_deref(), &json(&out)),
        Format::Csv => {
            let prefix = cfg
                .output
                .as_deref()
                .ok_or_else(|| Failure::Usage("susy with CSV output needs --output <prefix>".into()))?;
            let file = |suffix: &str| {
                let mut name = prefix.as_os_str().to_owned();
                name.push(format!("_{suffix}.csv"));
                PathBuf::from(name)
            };
            emit(Some(&file("bosonic")), &curve(&out.x, &out.bosonic))?;
            for partner in &out.partners {
                let suffix = match partner.q {
                    QuasiParity::Plus => "partner_plus",
                    QuasiParity::Minus => "partner_minus",
                };
                emit(Some(&file(suffix)), &curve(&out.x, &partner.values))?;
            }
            Ok(())
        }
    }
}

fn curve(x: &[f64], values: &[Complex64]) -> String {
    pt_ginocchio::output::curve_csv(x.iter().copied(), values)
}

#[derive(Serialize)]
struct OracleRow {
    label: StateLabel,
    analytic: Complex64,
    shot: Option<Complex64>,
    relative_deviation: Option<f64>,
    agrees: bool,
    error: Option<String>,
}

#[derive(Serialize)]
struct VerifyOutput {
    step: f64,
    matched: usize,
    total: usize,
    states: Vec<OracleRow>,
}

fn cmd_verify(cfg: &Config, p: &PotentialParams, step: f64) -> Run {
    let spectrum = full_spectrum(p)?;
    let mut options = ShootOptions::default();
    if let Some(tol) = cfg.shoot_tol {
        options.tol = tol;
    }
    let problem = ShootingProblem::for_potential(p, step)?.with_options(options);
    let states: Vec<OracleRow> = spectrum
        .states
        .iter()
        .map(|sv| match shoot(&problem, sv.energy * 1.02) {
            Ok(r) => OracleRow {
                label: sv.label,
                analytic: sv.energy,
                shot: Some(r.energy),
                relative_deviation: Some((r.energy - sv.energy).norm() / sv.energy.norm().max(1.0)),
                agrees: oracle_agrees(r.energy, sv.energy),
                error: None,
            },
            Err(e) => OracleRow {
                label: sv.label,
                analytic: sv.energy,
                shot: None,
                relative_deviation: None,
                agrees: false,
                error: Some(format!("{}: {e}", e.code())),
            },
        })
        .collect();
    let out = VerifyOutput {
        step,
        matched: states.iter().filter(|s| s.agrees).count(),
        total: states.len(),
        states,
    };
    let text = match cfg.format {
        Format::Json => json(&out),
        Format::Csv => {
            let mut text = String::from("n,q,re_analytic,im_analytic,re_shot,im_shot,relative_deviation,agrees\n");
            for s in &out.states {
                let shot = s
                    .shot
                    .map_or(["nan".into(), "nan".into()], |e| [fmt_f64(e.re), fmt_f64(e.im)]);
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    s.label.n,
                    s.label.q.as_i32(),
                    fmt_f64(s.analytic.re),
                    fmt_f64(s.analytic.im),
                    shot[0],
                    shot[1],
                    s.relative_deviation.map_or("nan".into(), fmt_f64),
                    s.agrees
                ));
            }
            text
        }
    };
    emit(cfg.output.as_deref(), &text)?;
    if out.matched != out.total {
        return Err(Failure::Check {
            code: "OracleMismatch",
            message: format!("{}/{} eigenvalues reproduced by shooting", out.matched, out.total),
        });
    }
    Ok(())
}

fn cmd_golden(cfg: &Config, oracle_step: Option<f64>) -> Run {
    let report = run_golden_suite(oracle_step)?;
    emit(cfg.output.as_deref(), &json(&report))?;
    if !report.passed {
        let failed: Vec<&str> = report
            .cases
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        return Err(Failure::Check {
            code: "GoldenMismatch",
            message: format!("failing cases: {}", failed.join(", ")),
        });
    }
    Ok(())
}
