use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use mmds_core::circle::{self, CircleConfig};
use mmds_core::convergence::{self, embedding_discrepancy};
use mmds_core::matio::{self, MatrixFile, ReportDocument};
use mmds_core::mds::{self, DissimilarityMatrix, SimilarityMatrix};
use mmds_core::mmspace::{self, DiscreteMetricMeasureSpace};
use mmds_core::nalgebra::DMatrix;
use mmds_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::{
    CircleArgs, CircleMode, ClassicArgs, Command, ConvergeCircleArgs, ConvergeMeasureArgs,
    EuclideanTestArgs, MmMdsArgs, NystromArgs, PlotArgs, ReportArg, Sim2disArgs, WeightArgs,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Classic(args) => classic(args),
        Command::EuclideanTest(args) => euclidean_test(args),
        Command::Sim2dis(args) => sim2dis(args),
        Command::MmMds(args) => mm_mds(args),
        Command::Nystrom(args) => nystrom(args),
        Command::Circle(args) => circle(args),
        Command::ConvergeCircle(args) => converge_circle(args),
        Command::ConvergeMeasure(args) => converge_measure(args),
        Command::Plot(args) => plot(args),
    }
}

/// Contents of an input file together with its SHA-256 digest.
struct Input {
    text: String,
    sha256: String,
}

fn load(path: &Path) -> Result<Input> {
    let bytes = fs::read(path).map_err(|source| match source.kind() {
        ErrorKind::NotFound => Error::FileMissing {
            path: path.to_path_buf(),
        },
        _ => Error::Io {
            path: path.to_path_buf(),
            source,
        },
    })?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: std::io::Error::new(ErrorKind::InvalidData, e),
    })?;
    Ok(Input { text, sha256 })
}

/// Records a file parameter and its checksum in the report.
fn record(report: &mut ReportDocument, key: &str, path: &Path, input: &Input) -> Result<()> {
    report.parameter(key, path.display().to_string())?;
    report.parameter(&format!("{key}_sha256"), &input.sha256)?;
    Ok(())
}

fn load_matrix(report: &mut ReportDocument, key: &str, path: &Path) -> Result<MatrixFile> {
    let input = load(path)?;
    record(report, key, path, &input)?;
    matio::parse_matrix(&input.text)
}

fn load_dissimilarities(report: &mut ReportDocument, path: &Path) -> Result<DissimilarityMatrix> {
    DissimilarityMatrix::new(load_matrix(report, "input", path)?.to_dmatrix())
}

fn load_weights(
    report: &mut ReportDocument,
    key: &str,
    path: Option<&PathBuf>,
    n: usize,
    normalize: bool,
) -> Result<Vec<f64>> {
    match path {
        Some(path) => {
            let input = load(path)?;
            record(report, key, path, &input)?;
            report.parameter("normalize_weights", normalize)?;
            matio::parse_weights(&input.text, n, normalize)
        }
        None => Ok(vec![1.0 / n as f64; n]),
    }
}

fn load_space(
    report: &mut ReportDocument,
    input: &Path,
    w: &WeightArgs,
) -> Result<DiscreteMetricMeasureSpace> {
    let d = load_dissimilarities(report, input)?;
    let weights = load_weights(
        report,
        "weights",
        w.weights.as_ref(),
        d.n(),
        w.normalize_weights,
    )?;
    DiscreteMetricMeasureSpace::new(d, weights)
}

fn write_coords(path: Option<&PathBuf>, coords: &DMatrix<f64>) -> Result<()> {
    match path {
        Some(path) => matio::write_matrix(&MatrixFile::from_dmatrix(coords), path),
        None => Ok(()),
    }
}

fn emit(report: &ReportDocument, target: &ReportArg) -> Result<()> {
    match &target.report {
        Some(path) => matio::write_report(report, path),
        None => {
            print!("{}", report.to_json()?);
            Ok(())
        }
    }
}

fn classic(args: ClassicArgs) -> Result<()> {
    let mut report = ReportDocument::new("classic");
    let d = load_dissimilarities(&mut report, &args.input)?;
    let m = args.dim as usize;
    report.parameter("dim", m)?;
    let b = mds::double_center(&d);
    let eigen = mds::symmetric_eigen(&b)?;
    let e = mds::classical_mds(&d, m)?;
    let fit = mds::embedding_distance_matrix(&e).max_abs_diff(&d)?;
    let strain = mds::strain(&b, &mds::mds_truncation(&b, m)?)?;
    report
        .numbers("eigenvalues", &eigen.values)?
        .numbers("retained_eigenvalues", &e.retained_eigenvalues)?
        .number("clipped_negative_mass", e.clipped_negative_mass)?
        .number("strain", strain.strain_value)?
        .number("max_distance_error", fit)?
        .result("axes", &e.axes)?;
    write_coords(args.out.as_ref(), &e.coords)?;
    emit(&report, &args.report)
}

fn euclidean_test(args: EuclideanTestArgs) -> Result<()> {
    let mut report = ReportDocument::new("euclidean-test");
    let d = load_dissimilarities(&mut report, &args.input)?;
    report.parameter("tol", args.tol)?;
    let t = mds::euclidean_test(&d, args.tol)?;
    report
        .result("is_euclidean", t.is_euclidean)?
        .result("min_dimension", t.min_dimension)?
        .number("min_eigenvalue", t.min_eigenvalue)?
        .number("tolerance", t.tolerance)?
        .numbers("eigenvalues", &t.eigenvalues)?;
    emit(&report, &args.report)
}

fn sim2dis(args: Sim2disArgs) -> Result<()> {
    let mut report = ReportDocument::new("sim2dis");
    let c = load_matrix(&mut report, "input", &args.input)?;
    let d = mds::similarity_to_dissimilarity(&SimilarityMatrix::new(c.to_dmatrix())?)?;
    matio::write_matrix(&MatrixFile::from_dmatrix(d.as_matrix()), &args.out)?;
    report.result("n", d.n())?;
    emit(&report, &args.report)
}

fn mm_mds(args: MmMdsArgs) -> Result<()> {
    let mut report = ReportDocument::new("mm-mds");
    let space = load_space(&mut report, &args.input, &args.weights)?;
    let m = args.dim as usize;
    report.parameter("dim", m)?;
    let k = mmspace::kernel_b(&space);
    let sys = mmspace::weighted_eigensystem(&k)?;
    let e = mmspace::mm_mds_embedding(&sys, m)?;
    let hs = mmspace::hs_strain(&k, &mmspace::kernel_truncation(&sys, m)?)?;
    report
        .numbers("eigenvalues", &sys.values)?
        .numbers("clipped_eigenvalues", &e.clipped)?
        .number("hs_strain", hs)?
        .number(
            "distance_identity_error",
            mmspace::check_distance_identity(&space, &k)?,
        )?
        .result("axes", &e.axes)?;
    write_coords(args.out.as_ref(), &e.coords)?;
    emit(&report, &args.report)
}

fn nystrom(args: NystromArgs) -> Result<()> {
    let mut report = ReportDocument::new("nystrom");
    let space = load_space(&mut report, &args.input, &args.weights)?;
    let cross = load_matrix(&mut report, "cross", &args.cross)?.to_dmatrix();
    let sys = mmspace::weighted_eigensystem(&mmspace::kernel_b(&space))?;
    let components = match args.components {
        Some(c) => c,
        None => (0..sys.len())
            .filter(|&k| sys.values[k] > sys.tolerance())
            .collect(),
    };
    report.parameter("components", &components)?;
    let values = mmspace::nystrom_extend(&sys, &space, &cross, &components)?;
    let lambdas: Vec<f64> = components.iter().map(|&k| sys.values[k]).collect();
    report
        .numbers("eigenvalues", &lambdas)?
        .result("new_points", values.nrows())?;
    write_coords(args.out.as_ref(), &values)?;
    emit(&report, &args.report)
}

fn circle(args: CircleArgs) -> Result<()> {
    let mut report = ReportDocument::new("circle");
    let (n, m) = (args.n as usize, args.dim as usize);
    report
        .parameter("n", n)?
        .parameter("dim", m)?
        .parameter("mode", format!("{:?}", args.mode).to_lowercase())?;
    let config = CircleConfig::new(n, m)?;
    let spectrum = circle::circulant_eigenvalues(n)?;
    report
        .numbers("eigenvalues", &spectrum.sorted())?
        .number("row_constant", spectrum.row_constant)?;
    let coefficients = circle::curve_coefficients(&config)?;
    report.result("curve_coefficients", &coefficients)?;
    let e = match args.mode {
        CircleMode::Analytic => circle::analytic_embedding(&config)?,
        CircleMode::Numeric => circle::numeric_embedding(&config)?,
        CircleMode::Compare => {
            let analytic = circle::analytic_embedding(&config)?;
            let numeric = circle::numeric_embedding(&config)?;
            let dense =
                mds::symmetric_eigen(&mds::double_center(&circle::circle_distance_matrix(n)?))?;
            let spectrum_error = spectrum
                .sorted()
                .iter()
                .zip(&dense.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let distance_error = mds::embedding_distance_matrix(&analytic)
                .max_abs_diff(&mds::embedding_distance_matrix(&numeric))?;
            report
                .number("spectrum_max_error", spectrum_error)?
                .number("distance_max_error", distance_error)?
                .number(
                    "embedding_discrepancy",
                    embedding_discrepancy(&analytic, &numeric)?,
                )?;
            analytic
        }
    };
    report
        .numbers("retained_eigenvalues", &e.retained_eigenvalues)?
        .result("axes", &e.axes)?;
    write_coords(args.out.as_ref(), &e.coords)?;
    emit(&report, &args.report)
}

fn converge_circle(args: ConvergeCircleArgs) -> Result<()> {
    let mut report = ReportDocument::new("converge-circle");
    report
        .parameter("ns", &args.ns)?
        .parameter("reference", args.reference)?
        .parameter("top_k", args.top_k)?;
    let trace = convergence::run_circle_refinement(&args.ns, args.reference, args.top_k)?;
    report
        .numbers("distances", &trace.distances)?
        .result("normalization", &trace.normalization)?;
    emit(&report, &args.report)
}

/// Straight-line path from `start` to `end` in `steps` equal steps,
/// including both endpoints.
fn interpolate(start: &[f64], end: &[f64], steps: usize) -> Vec<Vec<f64>> {
    (0..=steps)
        .map(|s| {
            let t = s as f64 / steps as f64;
            start
                .iter()
                .zip(end)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect()
        })
        .collect()
}

fn converge_measure(args: ConvergeMeasureArgs) -> Result<()> {
    let mut report = ReportDocument::new("converge-measure");
    let d = load_dissimilarities(&mut report, &args.input)?;
    let n = d.n();
    let reference = load_weights(
        &mut report,
        "reference_weights",
        args.reference_weights.as_ref(),
        n,
        args.normalize_weights,
    )?;
    report.parameter("top_k", args.top_k)?;
    let sequence = match (&args.sequence, args.steps) {
        (Some(path), _) => {
            let rows = load_matrix(&mut report, "sequence", path)?;
            if rows.cols != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: rows.cols,
                });
            }
            rows.entries
                .chunks(n)
                .map(|row| matio::check_weights(row.to_vec(), n, args.normalize_weights))
                .collect::<Result<Vec<_>>>()?
        }
        (None, Some(steps)) => {
            report
                .parameter("steps", steps)?
                .parameter("seed", args.seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let start: Vec<f64> = raw.iter().map(|x| x / total).collect();
            interpolate(&start, &reference, steps as usize)
        }
        (None, None) => unreachable!("clap requires --sequence or --steps"),
    };
    let trace = convergence::run_measure_perturbation(&d, &sequence, &reference, args.top_k)?;
    report
        .numbers("tv_distances", &trace.tv_distances)?
        .numbers("spectrum_distances", &trace.spectrum_distances)?
        .result("eigenfunction_deviations", &trace.eigenfunction_deviations)?
        .result("compared_k", &trace.compared_k)?
        .result("skipped_k", &trace.skipped_k)?
        .result("normalization", &trace.normalization)?;
    emit(&report, &args.report)
}

fn plot(args: PlotArgs) -> Result<()> {
    let mut report = ReportDocument::new("plot");
    let coords = load_matrix(&mut report, "input", &args.input)?.to_dmatrix();
    let axes = match args.axes[..] {
        [i, j] => (i, j),
        _ => {
            return Err(Error::InvalidReport(format!(
                "--axes takes exactly two indices, got {}",
                args.axes.len()
            )))
        }
    };
    report.parameter("axes", [axes.0, axes.1])?;
    matio::render_scatter_svg(&coords, axes, &args.out)?;
    report.result("points", coords.nrows())?;
    emit(&report, &args.report)
}
