//! The `conjrot` command line.
//!
//! Subcommands: `sample`, `figure1`, `gram`, `classify`, `fakeuni`.
//! Exit codes: 0 success, 2 usage or configuration error, 3 data error,
//! 4 numerical non-convergence. Randomness comes from ChaCha20 seeded by
//! `--seed`, so every command is byte-for-byte reproducible.

pub mod format;

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::{Matrix3xX, Vector3};

use crate::classifier::{mc_accuracy, mc_class1_accuracy, psi_closed, psi_derivative, ClassPair};
use crate::distributions::{DistributionSpec, Family, RotationSampler};
use crate::error::Error;
use crate::fake_uniformity::{fake_uniformity_roots, initial_slope, scan_curve};
use crate::moments::tau_k;
use crate::radon::{
    expected_projected_gram, gram, mc_projected_gram_with_error, modal_third_row,
    naive_recovery_bias, projected_gram_from_tau2, recover_gram, LandmarkMatrix,
};
use crate::rng::seeded_rng;
use crate::so3::{Rotation, UnitVector3};
use format::{block_header, num, write_block, write_header, write_row};

/// Tolerance for hand-entered rotation matrices before re-orthonormalizing.
pub const MODAL_TOL: f64 = 1e-8;

/// Step used for the slope at κ = 0 in `fakeuni`.
const SLOPE_STEP: f64 = 1e-3;

/// Points written to the `fakeuni` curve file.
const CURVE_POINTS: usize = 101;

#[derive(Debug, Parser)]
#[command(name = "conjrot", version, about = "Conjugation-invariant random rotations on SO(3)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw rotations and write them as CSV.
    Sample {
        #[command(flatten)]
        law: LawArgs,
        /// Modal rotation: "ux,uy,uz,angle" or nine row-major entries.
        #[arg(long)]
        modal: Option<String>,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write τ₂(κ) − 1/3 for both families as CSV.
    Figure1 {
        #[arg(long, default_value_t = 1.0)]
        kappa_max: f64,
        #[arg(long, default_value_t = 101)]
        n_points: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare the closed-form expected projected Gram with Monte Carlo.
    Gram {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long)]
        modal: Option<String>,
        /// Headerless CSV with three rows and one column per landmark.
        #[arg(long)]
        landmarks: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        n_mc: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Accuracy of the Bayes rule separating two modal rotations.
    Classify {
        #[command(flatten)]
        law: LawArgs,
        /// Class-1 modal; defaults to the identity.
        #[arg(long)]
        m1: Option<String>,
        /// Class-2 modal.
        #[arg(long)]
        m2: String,
        #[arg(long, default_value_t = 100_000)]
        n_mc: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Search for κ > 0 with τ₂(κ) = 1/3 and report the slope at 0.
    Fakeuni {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 5.0)]
        kappa_max: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Where to write the curve; defaults to `fakeuni_<family>.csv`.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct LawArgs {
    #[arg(long, default_value = "haar")]
    pub family: String,
    #[arg(long, default_value_t = 0.0)]
    pub kappa: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Everything a run depends on, after parsing.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub family: Family,
    pub kappa: f64,
    pub modal: Rotation,
    pub tol: f64,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(law: &LawArgs, modal: Option<&str>, run: &RunArgs) -> Result<Self, CliError> {
        let family: Family = law.family.parse()?;
        let modal = match modal {
            Some(m) => parse_modal(m)?,
            None => Rotation::identity(),
        };
        let config = Self {
            seed: run.seed,
            family,
            kappa: law.kappa,
            modal,
            tol: MODAL_TOL,
            output_path: run.output.clone(),
        };
        config.spec()?;
        Ok(config)
    }

    pub fn spec(&self) -> Result<DistributionSpec, CliError> {
        Ok(DistributionSpec::new(self.family, self.modal, self.kappa)?)
    }
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoConvergence { .. } => 4,
            Error::InvalidMatrix(_) => 3,
            Error::DegenerateRotation { .. }
            | Error::OutOfRange { .. }
            | Error::DomainError { .. }
            | Error::InvalidSpec(_)
            | Error::NotARotation(_) => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::data(e.to_string())
    }
}

/// Parses "ux,uy,uz,angle" (axis normalized, angle in radians) or nine
/// row-major entries, which must form a rotation within 1e-8 and are then
/// re-orthonormalized.
pub fn parse_modal(s: &str) -> Result<Rotation, CliError> {
    let values = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::usage(format!("modal '{s}': {e}")))?;
    match values.len() {
        4 => {
            if !values[3].is_finite() {
                return Err(CliError::usage(format!("modal '{s}': angle is not finite")));
            }
            let axis = UnitVector3::normalize(Vector3::new(values[0], values[1], values[2]))?;
            Ok(Rotation::from_axis_angle_raw(&axis, values[3]))
        }
        9 => {
            let mut entries = [0.0; 9];
            entries.copy_from_slice(&values);
            Ok(Rotation::from_row_major(&entries, MODAL_TOL)?)
        }
        n => Err(CliError::usage(format!(
            "modal '{s}' has {n} numbers; expected 4 (axis, angle) or 9 (row-major)"
        ))),
    }
}

/// Reads a headerless CSV with three rows of equal length.
pub fn read_landmarks(path: &Path) -> Result<LandmarkMatrix, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        let row = record
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        rows.push(row);
    }
    if rows.len() != 3 {
        return Err(CliError::data(format!(
            "{}: expected 3 rows, found {}",
            path.display(),
            rows.len()
        )));
    }
    let k = rows[0].len();
    if k == 0 || rows.iter().any(|r| r.len() != k) {
        return Err(CliError::data(format!("{}: rows must have equal, nonzero length", path.display())));
    }
    let m = Matrix3xX::from_fn(k, |i, j| rows[i][j]);
    LandmarkMatrix::new(m).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::data(format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

/// `n` draws: nine row-major entries, then theta, u1, u2, u3, x.
pub fn cmd_sample<W: Write + ?Sized>(config: &RunConfig, n: usize, out: &mut W) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    let sampler = RotationSampler::new(&config.spec()?);
    let mut rng = seeded_rng(config.seed);
    write_header(
        out,
        &["r11", "r12", "r13", "r21", "r22", "r23", "r31", "r32", "r33", "theta", "u1", "u2", "u3", "x"],
    )?;
    for _ in 0..n {
        let s = sampler.sample_detailed(&mut rng);
        let mut fields: Vec<String> = s.rotation.to_row_major().iter().map(|v| num(*v)).collect();
        fields.push(num(s.theta));
        fields.extend([s.axis.x(), s.axis.y(), s.axis.z()].iter().map(|v| num(*v)));
        fields.push(num(s.x));
        write_row(out, &fields)?;
    }
    Ok(())
}

/// Columns kappa, cayley, fvm on a uniform grid over `[0, κ_max]`.
pub fn cmd_figure1<W: Write + ?Sized>(kappa_max: f64, n_points: usize, out: &mut W) -> Result<(), CliError> {
    let cayley = scan_curve(Family::CayleyLmr, kappa_max, n_points)?;
    let fvm = scan_curve(Family::FisherVonMises, kappa_max, n_points)?;
    write_header(out, &["kappa", "cayley", "fvm"])?;
    for (c, f) in cayley.iter().zip(&fvm) {
        write_row(out, &[num(c.kappa), num(c.tau2_minus_third), num(f.tau2_minus_third)])?;
    }
    Ok(())
}

/// Text report on `report`; the blocks closed, mc, se and bias as CSV on
/// `csv_out` when given.
pub fn cmd_gram<W: Write + ?Sized>(
    config: &RunConfig,
    v: &LandmarkMatrix,
    n_mc: usize,
    report: &mut W,
    csv_out: Option<&mut dyn Write>,
) -> Result<(), CliError> {
    let spec = config.spec()?;
    let tau2 = tau_k(&spec, 2)?;
    let closed = expected_projected_gram(&spec, v)?;
    let mut rng = seeded_rng(config.seed);
    let mc = mc_projected_gram_with_error(&spec, v, n_mc, &mut rng)?;
    let haar = projected_gram_from_tau2(1.0 / 3.0, &config.modal, v);
    let bias = naive_recovery_bias(&spec, v)?;
    let true_gram = gram(v);

    writeln!(report, "family {} kappa {}", config.family, num(config.kappa))?;
    writeln!(report, "landmarks {}", v.ncols())?;
    writeln!(report, "tau2 {}", num(tau2))?;
    writeln!(report, "mc samples {}", n_mc)?;
    writeln!(report, "closed vs mc max abs deviation {}", num(closed.max_abs_diff(&mc.mean)))?;
    writeln!(report, "closed vs mc max z score {}", num(mc.max_z_score(&closed)))?;
    writeln!(report, "closed vs haar max abs difference {}", num(closed.max_abs_diff(&haar)))?;
    writeln!(report, "naive haar recovery bias max abs {}", num(bias.amax()))?;
    if tau2 > 0.0 && tau2 < 1.0 {
        let w = modal_third_row(&config.modal, v);
        let back = recover_gram(&closed, tau2, &w)?;
        writeln!(report, "exact recovery max abs error {}", num(back.max_abs_diff(&true_gram)))?;
    }
    if let Some(out) = csv_out {
        let k = v.ncols();
        let header = block_header(k);
        write_row(out, &header)?;
        write_block(out, "closed", closed.matrix())?;
        write_block(out, "mc", mc.mean.matrix())?;
        write_block(out, "se", &mc.std_error)?;
        write_block(out, "bias", &bias)?;
    }
    Ok(())
}

/// α, ψ, ψ′ and the Monte Carlo accuracy for two modals.
pub fn cmd_classify<W: Write + ?Sized>(
    common: &DistributionSpec,
    m1: Rotation,
    m2: Rotation,
    n_mc: usize,
    seed: u64,
    out: &mut W,
) -> Result<(), CliError> {
    let pair = ClassPair::new(m1, m2, *common).map_err(|e| match e {
        Error::DegenerateRotation { angle } => CliError::usage(format!(
            "the modal rotations are separated by α = {angle}; α must lie in (0, π)"
        )),
        other => other.into(),
    })?;
    let psi = psi_closed(&pair)?;
    let dpsi = psi_derivative(&pair)?;
    let mut rng = seeded_rng(seed);
    let mc = mc_accuracy(&pair, n_mc, &mut rng)?;
    let class1 = mc_class1_accuracy(&pair, n_mc, &mut rng)?;
    writeln!(out, "family {} kappa {}", common.family(), num(common.kappa()))?;
    writeln!(out, "alpha {}", num(pair.alpha()))?;
    writeln!(out, "psi {}", num(psi))?;
    writeln!(out, "psi_derivative {}", num(dpsi))?;
    writeln!(out, "mc accuracy {}", num(mc.mean))?;
    writeln!(out, "mc std error {}", num(mc.std_error))?;
    writeln!(out, "mc samples {}", mc.n)?;
    writeln!(out, "gap {}", num((psi - mc.mean).abs()))?;
    writeln!(out, "gap in std errors {}", num(mc.z_score(psi)))?;
    writeln!(out, "mc class1 accuracy {}", num(class1.mean))?;
    writeln!(out, "mc class1 std error {}", num(class1.std_error))?;
    Ok(())
}

/// Slope at 0, roots in `(κ_max/1000, κ_max)`, and the curve written to
/// `curve_path`.
pub fn cmd_fakeuni<W: Write + ?Sized>(
    family: Family,
    kappa_max: f64,
    tol: f64,
    curve_path: &Path,
    out: &mut W,
) -> Result<(), CliError> {
    if !(kappa_max > 0.0 && kappa_max.is_finite()) {
        return Err(CliError::usage(format!("--kappa-max must be positive, got {kappa_max}")));
    }
    let slope = initial_slope(family, SLOPE_STEP)?;
    let roots = fake_uniformity_roots(family, kappa_max * 1e-3, kappa_max, tol)?;
    let curve = scan_curve(family, kappa_max, CURVE_POINTS)?;
    let mut file = open_output(Some(curve_path))?;
    write_header(&mut file, &["kappa", "tau2_minus_third"])?;
    for p in &curve {
        write_row(&mut file, &[num(p.kappa), num(p.tau2_minus_third)])?;
    }
    file.flush()?;
    writeln!(out, "family {family}")?;
    writeln!(out, "initial slope {}", num(slope))?;
    let listed: Vec<String> = roots.iter().map(|r| num(*r)).collect();
    writeln!(out, "roots {}", if listed.is_empty() { "none".to_string() } else { listed.join(" ") })?;
    writeln!(out, "curve {}", curve_path.display())?;
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sample { law, modal, n, run } => {
            let config = RunConfig::new(&law, modal.as_deref(), &run)?;
            let mut out = open_output(config.output_path.as_deref())?;
            cmd_sample(&config, n, &mut out)?;
            out.flush()?;
        }
        Command::Figure1 {
            kappa_max,
            n_points,
            output,
        } => {
            let mut out = open_output(output.as_deref())?;
            cmd_figure1(kappa_max, n_points, &mut out)?;
            out.flush()?;
        }
        Command::Gram {
            law,
            modal,
            landmarks,
            n_mc,
            run,
        } => {
            let config = RunConfig::new(&law, modal.as_deref(), &run)?;
            let v = read_landmarks(&landmarks)?;
            let mut report = BufWriter::new(io::stdout().lock());
            match config.output_path.as_deref() {
                Some(p) => {
                    let mut csv_out = open_output(Some(p))?;
                    cmd_gram(&config, &v, n_mc, &mut report, Some(&mut csv_out))?;
                    csv_out.flush()?;
                }
                None => cmd_gram(&config, &v, n_mc, &mut report, None)?,
            }
            report.flush()?;
        }
        Command::Classify {
            law,
            m1,
            m2,
            n_mc,
            run,
        } => {
            let config = RunConfig::new(&law, None, &run)?;
            let m1 = match m1 {
                Some(m) => parse_modal(&m)?,
                None => Rotation::identity(),
            };
            let m2 = parse_modal(&m2)?;
            let mut out = open_output(config.output_path.as_deref())?;
            cmd_classify(&config.spec()?, m1, m2, n_mc, config.seed, &mut out)?;
            out.flush()?;
        }
        Command::Fakeuni {
            family,
            kappa_max,
            tol,
            output,
        } => {
            let family: Family = family.parse()?;
            let path = output.unwrap_or_else(|| PathBuf::from(format!("fakeuni_{family}.csv")));
            let mut out = BufWriter::new(io::stdout().lock());
            cmd_fakeuni(family, kappa_max, tol, &path, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Errors go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("conjrot: {e}");
            e.code
        }
    }
}
