use crate::{BellArg, GridArgs};
use gkp_core::analysis::{sweep, sweep_csv, BellKind, SweepConfig};
use gkp_core::grid::io::{read_wavefunction, write_wavefunction, write_wigner};
use gkp_core::grid::{
    coherent_state, grid_bell_standard, marginal, peak_fit, sample_2d, sample_comb, simulate_knill_cx,
    simulate_steane, wigner as wigner_fn, Grid1D, GridWavefunction, SupportPolicy,
};
use gkp_core::model::{bell_qunaught, bell_standard, LatticeSpec, LogicalLabel};
use gkp_core::verify::{run_all, VerifyOptions};
use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EQUIVALENCE_TOL: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] gkp_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_)
            | Self::Core(gkp_core::Error::InvalidDelta(_) | gkp_core::Error::InvalidParameter(_)) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn io_at(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(io_at(path))
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be positive, got {v}")))
    }
}

fn make_grid(args: GridArgs) -> Result<Grid1D> {
    let extent = positive("extent", args.extent.unwrap_or(6.0 * PI.sqrt()))?;
    Grid1D::with_extent(args.n_points, extent).map_err(|e| CliError::Usage(e.to_string()))
}

/// Parses `coherent:<alpha>` or `comb:<label>` and samples it on `grid`.
fn input_state(spec: &str, delta: f64, grid: Grid1D) -> Result<GridWavefunction> {
    let bad = || CliError::Usage(format!("input must be coherent:<alpha> or comb:<label>, got {spec:?}"));
    match spec.split_once(':').ok_or_else(bad)? {
        ("coherent", a) => Ok(coherent_state(grid, a.trim().parse().map_err(|_| bad())?)),
        ("comb", label) => {
            let label: LogicalLabel =
                label.parse().map_err(|e: gkp_core::Error| CliError::Usage(e.to_string()))?;
            Ok(sample_comb(label, delta, grid)?)
        }
        _ => Err(bad()),
    }
}

pub fn verify(seed: u64, quick: bool) -> Result<ExitCode> {
    let results = run_all(&VerifyOptions { seed, quick });
    for r in &results {
        println!("{r}");
        if !r.passed {
            eprintln!("criterion {} ({}) failed: {}", r.id, r.name, r.detail);
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Nearest grid index to `s`, reporting the snap.
fn snap(name: &str, s: f64, grid: &Grid1D) -> usize {
    let idx = grid.nearest_index(s);
    println!("{name}: requested {s}, snapped to {:.12} (index {idx})", grid.point(idx));
    idx
}

pub fn equivalence(
    delta: f64,
    input: &str,
    s1: f64,
    s2: f64,
    n_points: usize,
    out: &Path,
) -> Result<ExitCode> {
    positive("delta", delta)?;
    let g = Grid1D::self_dual(n_points).map_err(|e| CliError::Usage(e.to_string()))?;
    let psi = input_state(input, delta, g)?;
    let p = g.momentum_grid();
    let i1 = snap("s1", s1, &p);
    let i2 = snap("s2", s2, &p);
    let steane = simulate_steane(&psi, delta, i1, i2)?.state;
    let bell = grid_bell_standard(g, delta)?;
    let knill = simulate_knill_cx(&psi, &bell, i1, i2)?.state;
    let diff = steane.aligned_diff(&knill)?;

    fs::create_dir_all(out).map_err(io_at(out))?;
    for (name, state) in [("steane", &steane), ("knill", &knill)] {
        let path = out.join(format!("{name}.csv"));
        let mut f = create(&path)?;
        write_wavefunction(state, &mut f)?;
        f.flush().map_err(io_at(&path))?;
        let path = out.join(format!("{name}_wigner.csv"));
        let mut f = create(&path)?;
        write_wigner(&wigner_fn(&state.normalized())?, &mut f)?;
        f.flush().map_err(io_at(&path))?;
    }
    let line = format!("max_abs_diff={diff:.6e}");
    let path = out.join("summary.txt");
    fs::write(&path, format!("{line}\n")).map_err(io_at(&path))?;
    println!("{line}");
    Ok(if diff < EQUIVALENCE_TOL { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn widths(kind: BellArg, deltas: Vec<f64>, ratios: Vec<f64>, out: Option<&Path>) -> Result<ExitCode> {
    let kind = match kind {
        BellArg::Qunaught => BellKind::Qunaught,
        BellArg::Standard => BellKind::Standard,
    };
    let rows = sweep(&SweepConfig { deltas, ratios, kind }).map_err(|e| CliError::Usage(e.to_string()))?;
    let csv = sweep_csv(&rows);
    match out {
        Some(path) => fs::write(path, csv).map_err(io_at(path))?,
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

pub fn state(label: &str, args: GridArgs, out: &Path) -> Result<ExitCode> {
    let label: LogicalLabel = label.parse().map_err(|e: gkp_core::Error| CliError::Usage(e.to_string()))?;
    positive("delta", args.delta)?;
    let psi = sample_comb(label, args.delta, make_grid(args)?)?;
    let mut f = create(out)?;
    write_wavefunction(&psi, &mut f)?;
    f.flush().map_err(io_at(out))?;
    Ok(ExitCode::SUCCESS)
}

pub fn bell(kind: BellArg, args: GridArgs, out: &Path) -> Result<ExitCode> {
    let delta = positive("delta", args.delta)?;
    let g = make_grid(args)?;
    let n_max = (g.hi() / PI.sqrt()).ceil() as usize + 2;
    let (sup, _) = match kind {
        BellArg::Qunaught => bell_qunaught(delta, n_max)?,
        BellArg::Standard => bell_standard(delta, n_max)?,
    };
    let psi = sample_2d(&sup, [g, g], SupportPolicy::Truncate)?;
    fs::create_dir_all(out).map_err(io_at(out))?;
    let path = out.join("bell.csv");
    let mut f = create(&path)?;
    write_wavefunction(&psi, &mut f)?;
    f.flush().map_err(io_at(&path))?;

    let lattice = LatticeSpec::new(PI.sqrt(), 0.0, (g.hi() / PI.sqrt()).floor() as usize)?;
    let mut mean_var = [0.0; 2];
    for (mode, v) in mean_var.iter_mut().enumerate() {
        let peaks = peak_fit(&marginal(&psi, mode)?, &lattice)?;
        let total: f64 = peaks.iter().map(|p| p.weight).sum();
        *v = peaks.iter().map(|p| p.variance * p.weight).sum::<f64>() / total;
        println!("mode {}: weighted peak variance {:.6e} over {} peaks", mode + 1, *v, peaks.len());
    }
    println!("variance ratio q2/q1 = {:.6}", mean_var[1] / mean_var[0]);
    Ok(ExitCode::SUCCESS)
}

pub fn wigner(from: Option<&Path>, input: Option<&str>, args: GridArgs, out: &Path) -> Result<ExitCode> {
    let psi = match (from, input) {
        (Some(path), _) => read_wavefunction(BufReader::new(File::open(path).map_err(io_at(path))?))?,
        (None, Some(spec)) => input_state(spec, positive("delta", args.delta)?, make_grid(args)?)?,
        (None, None) => return Err(CliError::Usage("one of --from or --input is required".into())),
    };
    if psi.rank() != 1 {
        return Err(CliError::Usage(format!(
            "Wigner export needs a one-mode state, got {} modes",
            psi.rank()
        )));
    }
    let w = wigner_fn(&psi.normalized())?;
    let mut f = create(out)?;
    write_wigner(&w, &mut f)?;
    f.flush().map_err(io_at(out))?;
    Ok(ExitCode::SUCCESS)
}
