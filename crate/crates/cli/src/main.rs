mod output;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use logwell::perturb::{crossing, first_order, first_order_quadrature, linear_energy, unperturbed_energy};
use logwell::shooting::{
    eigenvalue, mismatch, rect_approx_energy, rect_approx_wavefunction, spectrum, wavefunction,
    wkb_approx_wavefunction, EnergyLevel, ModelParams, Normalization, Parity, DEFAULT_DELTA,
};
use logwell::transformed::conditioning_study;
use output::{Cell, Format, Table};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "logwell", version, about = "Square well with a logarithmic central spike")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// First-order energy coefficients, closed form against quadrature.
    Perturb {
        #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u64).range(0..=50))]
        n_max: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Couplings where first-order levels meet.
    Crossings {
        /// Level pair `m,n` with `m < n`; repeatable.
        #[arg(long = "pair", value_parser = parse_pair)]
        pairs: Vec<(usize, usize)>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Low-lying eigenvalues by shooting.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Eigenfunction of one level on a uniform grid.
    Wavefunction {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rectangular-barrier and WKB approximations next to the shooting solution.
    Approx {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Backward integration in the exponential variable over energies and cutoffs.
    TransformStudy {
        #[arg(long, default_value_t = 1.0, value_parser = parse_nonnegative)]
        g: f64,
        #[arg(long = "energy")]
        energies: Vec<f64>,
        #[arg(long = "lambda-max")]
        lambda_maxes: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, default_value_t = 1.0, value_parser = parse_nonnegative)]
    g: f64,
    #[arg(long, default_value_t = 1e-10)]
    e_tol: f64,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
}

impl ModelArgs {
    fn params(&self) -> logwell::error::Result<ModelParams> {
        ModelParams::with_delta(self.g, self.delta)
    }

    fn record(&self, t: &mut Table) {
        t.param("g", self.g).param("e_tol", self.e_tol).param("delta", self.delta);
    }
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, default_value_t = 0)]
    level: usize,
    #[arg(long, default_value_t = 401)]
    points: usize,
    #[arg(long, value_enum, default_value_t = NormArg::Max)]
    normalization: NormArg,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormArg {
    Max,
    L2,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Max => Normalization::MaxAbsOne,
            NormArg::L2 => Normalization::L2One,
        }
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (m, n) = s.split_once(',').ok_or("expected `m,n`")?;
    let m: usize = m.trim().parse().map_err(|e| format!("{e}"))?;
    let n: usize = n.trim().parse().map_err(|e| format!("{e}"))?;
    if m >= n {
        return Err(format!("need m < n, got {m},{n}"));
    }
    Ok((m, n))
}

fn parse_nonnegative(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(v >= 0.0 && v.is_finite()) {
        return Err(format!("{v} must be finite and non-negative"));
    }
    Ok(v)
}

const DEFAULT_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (2, 3)];
const DEFAULT_ENERGIES: [f64; 2] = [5.55, 5.45];
const DEFAULT_LAMBDA_MAXES: [f64; 4] = [3.5, 3.75, 4.0, 4.25];

fn cmd_perturb(n_max: usize) -> Result<Table> {
    let mut t = Table::new(
        "perturb",
        &["n", "parity", "e0", "e1_closed_form", "e1_quadrature", "abs_difference"],
    );
    t.param("n_max", n_max);
    for n in 0..=n_max {
        let closed = first_order(n);
        let quad = first_order_quadrature(n, 1e-12)?;
        t.push(vec![
            n.into(),
            Parity::of(n).as_str().into(),
            unperturbed_energy(n).into(),
            closed.into(),
            quad.into(),
            (closed - quad).abs().into(),
        ]);
    }
    Ok(t)
}

fn cmd_crossings(pairs: &[(usize, usize)]) -> Result<Table> {
    let mut t = Table::new("crossings", &["m", "n", "g_cross", "spurious"]);
    t.param("pairs", pairs.iter().map(|(m, n)| format!("{m},{n}")).collect::<Vec<_>>());
    for &(m, n) in pairs {
        let est = crossing(m, n)?;
        t.push(vec![
            m.into(),
            n.into(),
            est.map(|c| c.g_cross).into(),
            Cell::Bool(m % 2 == n % 2),
        ]);
    }
    Ok(t)
}

fn level_row(level: &EnergyLevel, params: &ModelParams, g: f64) -> Result<Vec<Cell>> {
    Ok(vec![
        level.n.into(),
        level.parity.as_str().into(),
        level.energy.into(),
        linear_energy(level.n, g).into(),
        mismatch(level.energy, params, level.parity)?.into(),
        "ok".into(),
    ])
}

/// Returns the table and whether every level converged.
fn cmd_spectrum(model: &ModelArgs, n_max: usize) -> Result<(Table, bool)> {
    let params = model.params()?;
    let mut t = Table::new(
        "spectrum",
        &["n", "parity", "energy", "first_order_energy", "residual_mismatch", "status"],
    );
    model.record(&mut t);
    t.param("n_max", n_max);
    match spectrum(&params, n_max, model.e_tol) {
        Ok(levels) => {
            for level in &levels {
                t.push(level_row(level, &params, model.g)?);
            }
            Ok((t, true))
        }
        Err(logwell::error::Error::BracketFailure { .. }) => {
            for n in 0..=n_max {
                match eigenvalue(n, &params, model.e_tol) {
                    Ok(level) => t.push(level_row(&level, &params, model.g)?),
                    Err(e) => {
                        t.push(vec![
                            n.into(),
                            Parity::of(n).as_str().into(),
                            Cell::Missing,
                            linear_energy(n, model.g).into(),
                            Cell::Missing,
                            e.to_string().into(),
                        ]);
                        break;
                    }
                }
            }
            Ok((t, false))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_wavefunction(model: &ModelArgs, grid: &GridArgs) -> Result<Table> {
    let params = model.params()?;
    let level = eigenvalue(grid.level, &params, model.e_tol)?;
    let wave = wavefunction(&level, &params, grid.points, grid.normalization.into())?;
    let mut t = Table::new("wavefunction", &["x", "psi"]);
    model.record(&mut t);
    t.param("level", grid.level)
        .param("points", grid.points)
        .param("normalization", format!("{:?}", grid.normalization).to_lowercase())
        .param("energy", output::format_real(level.energy).parse::<f64>()?)
        .param("nodes", wave.node_count());
    for (x, psi) in &wave.samples {
        t.push(vec![(*x).into(), (*psi).into()]);
    }
    Ok(t)
}

fn cmd_approx(model: &ModelArgs, grid: &GridArgs) -> Result<Table> {
    let params = model.params()?;
    let level = eigenvalue(grid.level, &params, model.e_tol)?;
    let norm: Normalization = grid.normalization.into();
    let exact = wavefunction(&level, &params, grid.points, norm)?;
    let rect = rect_approx_wavefunction(level.energy, model.g, level.parity, grid.points)?;
    let wkb = wkb_approx_wavefunction(level.energy, model.g, level.parity, grid.points)?;
    let mut t = Table::new("approx", &["x", "psi_shooting", "psi_rect", "psi_wkb"]);
    model.record(&mut t);
    let rect_energy = rect_approx_energy(grid.level, model.g, model.e_tol.max(1e-12)).ok();
    t.param("level", grid.level)
        .param("points", grid.points)
        .param("energy", output::format_real(level.energy).parse::<f64>()?)
        .param("rect_energy", rect_energy.map(|e| output::format_real(e).parse::<f64>().unwrap_or(e)))
        .param("rect_max_deviation", output::format_real(rect.max_abs_deviation(&exact)).parse::<f64>()?)
        .param("wkb_max_deviation", output::format_real(wkb.grid.max_abs_deviation(&exact)).parse::<f64>()?)
        .param("wkb_clamped", wkb.clamped);
    for ((e, r), w) in exact.samples.iter().zip(&rect.samples).zip(&wkb.grid.samples) {
        t.push(vec![e.0.into(), e.1.into(), r.1.into(), w.1.into()]);
    }
    Ok(t)
}

fn cmd_transform_study(g: f64, energies: &[f64], lambda_maxes: &[f64]) -> Result<Table> {
    let rows = conditioning_study(energies, lambda_maxes, g)?;
    let mut t = Table::new("transform-study", &["energy", "lambda_max", "phi_at_zero", "difference"]);
    t.param("g", g)
        .param("energies", energies.to_vec())
        .param("lambda_maxes", lambda_maxes.to_vec());
    for r in rows {
        t.push(vec![r.energy.into(), r.lambda_max.into(), r.phi_at_zero.into(), r.difference.into()]);
    }
    Ok(t)
}

fn run(cli: Cli) -> Result<()> {
    let (table, out, complete) = match cli.command {
        Command::Perturb { n_max, out } => (cmd_perturb(n_max as usize)?, out, true),
        Command::Crossings { pairs, out } => {
            let pairs = if pairs.is_empty() { DEFAULT_PAIRS.to_vec() } else { pairs };
            (cmd_crossings(&pairs)?, out, true)
        }
        Command::Spectrum { model, n_max, out } => {
            let (t, ok) = cmd_spectrum(&model, n_max)?;
            (t, out, ok)
        }
        Command::Wavefunction { model, grid, out } => (cmd_wavefunction(&model, &grid)?, out, true),
        Command::Approx { model, grid, out } => (cmd_approx(&model, &grid)?, out, true),
        Command::TransformStudy {
            g,
            energies,
            lambda_maxes,
            out,
        } => {
            let energies = if energies.is_empty() { DEFAULT_ENERGIES.to_vec() } else { energies };
            let lambda_maxes = if lambda_maxes.is_empty() { DEFAULT_LAMBDA_MAXES.to_vec() } else { lambda_maxes };
            (cmd_transform_study(g, &energies, &lambda_maxes)?, out, true)
        }
    };
    table.emit(out.format, out.out.as_deref())?;
    if !complete {
        bail!("spectrum incomplete: a level could not be bracketed");
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
