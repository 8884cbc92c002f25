//! Batch front end for depth-based scenario set computations: parse a law
//! specification, run one job, emit machine-readable results. One job per
//! invocation; outputs are deterministic for identical inputs (seeds
//! included), numbers carry 12 significant digits.

mod lawspec;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;

use skewdepth::approx::{d2_sweep, ellipsoid_approx, misclassification, GridSpec, SweepFamily};
use skewdepth::depth::{
    d1, d2, half_space_median, hd, hd_contour, reverse_stress, ContourPolyline, DepthOptions,
};
use skewdepth::expectile::{ed, ed_contour};
use skewdepth::MultivariateLaw;

#[derive(Parser)]
#[command(
    name = "skewdepth",
    about = "Half-space and expectile depth scenario sets for skew-t and generalized hyperbolic laws",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Law specification file (TOML).
    #[arg(long)]
    spec: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Contour tolerance on |depth − alpha| at traced vertices.
    #[arg(long)]
    tolerance: Option<f64>,
}

/// Comma-separated coordinate list, e.g. "1.5,-0.25".
#[derive(Clone, Debug)]
struct Coords(Vec<f64>);

fn parse_coords(s: &str) -> Result<Coords, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<Vec<f64>, String>>()
        .map(Coords)
}

#[derive(Args)]
struct DepthArgs {
    #[command(flatten)]
    common: Common,
    /// Evaluation point "x1,x2,..."; repeatable.
    #[arg(long = "point", value_parser = parse_coords, required = true)]
    points: Vec<Coords>,
}

#[derive(Args)]
struct ContourArgs {
    #[command(flatten)]
    common: Common,
    /// Depth levels, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    /// Vertices per contour.
    #[arg(long, default_value_t = 360)]
    vertices: usize,
}

#[derive(Args)]
struct EllipsoidArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
}

#[derive(Args)]
struct SkewnessArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct MisclassArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    /// Starting grid resolution (cells per axis).
    #[arg(long, default_value_t = 600)]
    grid: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// Family: st | ghst | nig.
    #[arg(long)]
    family: String,
    /// Skewness values, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    skew: Vec<f64>,
    /// Shape values (dof for st/ghst, psi for nig), comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    shape: Vec<f64>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    common: Common,
    /// Number of draws.
    #[arg(short = 'n', long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct StressArgs {
    #[command(flatten)]
    common: Common,
    /// Loss direction "w1,w2,...": the ruin set is {x : wᵀx ≥ threshold}.
    #[arg(long = "loss-w", value_parser = parse_coords)]
    loss_w: Coords,
    #[arg(long = "loss-threshold")]
    loss_threshold: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Half-space depth at given points.
    Depth(DepthArgs),
    /// Expectile depth at given points.
    Ed(DepthArgs),
    /// Trace half-space depth contours (bivariate laws).
    Contour(ContourArgs),
    /// Trace expectile depth contours (bivariate laws).
    EdContour(ContourArgs),
    /// Ellipsoidal approximations of depth sets.
    Ellipsoid(EllipsoidArgs),
    /// Canonical skewness, half-space median and the indices d1, d2.
    Skewness(SkewnessArgs),
    /// Misclassification probabilities of the ellipsoidal approximation.
    Misclass(MisclassArgs),
    /// d2 over a grid of skewness and shape values.
    Sweep(SweepArgs),
    /// Draw samples (deterministic for a fixed seed).
    Sample(SampleArgs),
    /// Maximal-depth scenario in a ruin half-space.
    ReverseStress(StressArgs),
}

/// Format with 12 significant digits for platform-stable output files.
fn f12(v: f64) -> String {
    format!("{v:.11e}")
}

fn vec12(v: &DVector<f64>) -> String {
    v.iter().map(|&x| f12(x)).collect::<Vec<_>>().join(" ")
}

struct OutputSet {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputSet {
    fn new(dir: &Path) -> Result<OutputSet, String> {
        std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        Ok(OutputSet { dir: dir.to_path_buf(), written: Vec::new() })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), String> {
        let path = self.dir.join(name);
        match std::fs::write(&path, contents) {
            Ok(()) => {
                self.written.push(path);
                Ok(())
            }
            Err(e) => {
                // Remove partial outputs so a failed job leaves nothing behind.
                let _ = std::fs::remove_file(&path);
                for earlier in &self.written {
                    let _ = std::fs::remove_file(earlier);
                }
                Err(format!("cannot write {}: {e}", path.display()))
            }
        }
    }
}

fn load_law(common: &Common) -> Result<MultivariateLaw, String> {
    let text = std::fs::read_to_string(&common.spec)
        .map_err(|e| format!("cannot read {}: {e}", common.spec.display()))?;
    let parsed = lawspec::parse_law(&text)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.law)
}

fn depth_options(common: &Common) -> DepthOptions {
    let mut opts = DepthOptions::default();
    if let Some(tol) = common.tolerance {
        opts.contour_tol = tol;
    }
    opts
}

fn contour_csv(contours: &[ContourPolyline]) -> String {
    let mut out = String::from("alpha,index,x1,x2\n");
    for c in contours {
        for (i, v) in c.vertices.iter().enumerate() {
            out.push_str(&format!("{},{},{},{}\n", f12(c.alpha), i, f12(v[0]), f12(v[1])));
        }
    }
    out
}

fn check_alphas(alphas: &[f64]) -> Result<(), String> {
    if alphas.is_empty() {
        return Err("alpha: at least one level is required".into());
    }
    for &a in alphas {
        if !(a > 0.0 && a <= 0.5) {
            return Err(format!("alpha: {a} outside (0, 0.5]"));
        }
    }
    Ok(())
}

/// Runs the job; Ok(true) means every sub-computation converged.
fn run(command: &Command) -> Result<bool, String> {
    match command {
        Command::Depth(args) | Command::Ed(args) => {
            let expectile = matches!(command, Command::Ed(_));
            let law = load_law(&args.common)?;
            let opts = depth_options(&args.common);
            let mut report = String::new();
            let key = if expectile { "ed" } else { "hd" };
            report.push_str(&format!("command={key}\n"));
            report.push_str(&format!("points={}\n", args.points.len()));
            let mut all_converged = true;
            for (i, p) in args.points.iter().enumerate() {
                if p.0.len() != law.dim() {
                    return Err(format!("point {i}: expected {} coordinates", law.dim()));
                }
                let x = DVector::from_vec(p.0.clone());
                let r = if expectile {
                    ed(&law, &x, &opts).map_err(|e| e.to_string())?
                } else {
                    hd(&law, &x, &opts).map_err(|e| e.to_string())?
                };
                all_converged &= r.converged;
                report.push_str(&format!("point.{i}={}\n", vec12(&x)));
                report.push_str(&format!("{key}.{i}={}\n", f12(r.depth)));
                report.push_str(&format!("direction.{i}={}\n", vec12(&r.direction)));
                report.push_str(&format!("converged.{i}={}\n", r.converged));
            }
            let mut out = OutputSet::new(&args.common.out)?;
            out.write("report.txt", &report)?;
            Ok(all_converged)
        }
        Command::Contour(args) | Command::EdContour(args) => {
            let expectile = matches!(command, Command::EdContour(_));
            check_alphas(&args.alpha)?;
            let law = load_law(&args.common)?;
            let opts = depth_options(&args.common);
            let mut contours = Vec::new();
            let mut all_converged = true;
            for &alpha in &args.alpha {
                let c = if expectile {
                    ed_contour(&law, alpha, args.vertices, &opts).map_err(|e| e.to_string())?
                } else {
                    hd_contour(&law, alpha, args.vertices, &opts).map_err(|e| e.to_string())?
                };
                all_converged &= c.converged;
                contours.push(c);
            }
            let mut out = OutputSet::new(&args.common.out)?;
            out.write("contour.csv", &contour_csv(&contours))?;
            Ok(all_converged)
        }
        Command::Ellipsoid(args) => {
            check_alphas(&args.alpha)?;
            let law = load_law(&args.common)?;
            let opts = depth_options(&args.common);
            let mut report = String::from("command=ellipsoid\n");
            for (j, &alpha) in args.alpha.iter().enumerate() {
                if alpha >= 0.5 {
                    return Err(format!("alpha: {alpha} outside (0, 0.5) for the ellipsoid"));
                }
                let e = ellipsoid_approx(&law, alpha, &opts).map_err(|e| e.to_string())?;
                report.push_str(&format!("alpha.{j}={}\n", f12(alpha)));
                report.push_str(&format!("center.{j}={}\n", vec12(&e.center)));
                let shape = e
                    .shape
                    .row_iter()
                    .flat_map(|r| r.iter().map(|&v| f12(v)).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
                    .join(" ");
                report.push_str(&format!("shape.{j}={shape}\n"));
            }
            let mut out = OutputSet::new(&args.common.out)?;
            out.write("report.txt", &report)?;
            Ok(true)
        }
        Command::Skewness(args) => {
            let law = load_law(&args.common)?;
            let opts = depth_options(&args.common);
            let red = law.canonicalize().map_err(|e| e.to_string())?;
            let median = half_space_median(&law, &opts).map_err(|e| e.to_string())?;
            let d1v = d1(&law, &opts).map_err(|e| e.to_string())?;
            let d2v = d2(&law, &opts).map_err(|e| e.to_string())?;
            let mut report = String::from("command=skewness\n");
            report.push_str(&format!("canonical_skew={}\n", f12(red.canonical_skew)));
            report.push_str(&format!("d1={}\n", f12(d1v)));
            report.push_str(&format!("d2={}\n", f12(d2v)));
            report.push_str(&format!("median={}\n", vec12(&median.point)));
            report.push_str(&format!("median_depth={}\n", f12(median.depth)));
            report.push_str(&format!("median_multiple={}\n", median.multiple));
            let mut out = OutputSet::new(&args.common.out)?;
            out.write("report.txt", &report)?;
            Ok(median.converged)
        }
        Command::Misclass(args) => {
            check_alphas(&args.alpha)?;
            let law = load_law(&args.common)?;
            let opts = depth_options(&args.common);
            let grid = GridSpec { resolution: args.grid, ..GridSpec::default() };
            let mut report = String::from("command=misclass\n");
            let mut all_stable = true;
            for (j, &alpha) in args.alpha.iter().enumerate() {
                if alpha >= 0.5 {
                    return Err(format!("alpha: {alpha} outside (0, 0.5) for misclassification"));
                }
                let r = misclassification(&law, alpha, &grid, &opts).map_err(|e| e.to_string())?;
                all_stable &= r.stable;
                report.push_str(&format!("alpha.{j}={}\n", f12(r.alpha)));
                report.push_str(&format!("p_false_negative.{j}={}\n", f12(r.p_false_negative)));
                report.push_str(&format!("p_false_positive.{j}={}\n", f12(r.p_false_positive)));
                report.push_str(&format!("grid_resolution.{j}={}\n", r.resolution));
                report.push_str(&format!("grid_cell_area.{j}={}\n", f12(r.cell_area)));
                report.push_str(&format!(
                    "grid_bounds_x.{j}={} {}\n",
                    f12(r.bounds[0][0]),
                    f12(r.bounds[0][1])
                ));
                report.push_str(&format!(
                    "grid_bounds_y.{j}={} {}\n",
                    f12(r.bounds[1][0]),
                    f12(r.bounds[1][1])
                ));
                report.push_str(&format!("grid_stable.{j}={}\n", r.stable));
            }
            let mut out = OutputSet::new(&args.common.out)?;
            out.write("report.txt", &report)?;
            Ok(all_stable)
        }
        Command::Sweep(args) => {
            let family = match args.family.as_str() {
                "st" => SweepFamily::SkewT,
                "ghst" => SweepFamily::HyperbolicSkewT,
                "nig" => SweepFamily::Nig,
                other => return Err(format!("family: unknown sweep family `{other}`")),
            };
            if args.skew.is_empty() || args.shape.is_empty() {
                return Err("sweep: skew and shape lists must be nonempty".into());
            }
            let points = d2_sweep(family, &args.skew, &args.shape, &DepthOptions::default())
                .map_err(|e| e.to_string())?;
            let mut csv = String::from("family,skew,shape,d2\n");
            for p in &points {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    args.family,
                    f12(p.skew),
                    f12(p.shape),
                    f12(p.d2)
                ));
            }
            let mut out = OutputSet::new(&args.out)?;
            out.write("sweep.csv", &csv)?;
            Ok(true)
        }
        Command::Sample(args) => {
            let law = load_law(&args.common)?;
            if args.count == 0 {
                return Err("count: must be positive".into());
            }
            let draws = law.sample(args.count, args.seed).map_err(|e| e.to_string())?;
            let d = law.dim();
            let mut csv = (0..d).map(|j| format!("x{}", j + 1)).collect::<Vec<_>>().join(",");
            csv.push('\n');
            for i in 0..args.count {
                let row = (0..d).map(|j| f12(draws[(i, j)])).collect::<Vec<_>>().join(",");
                csv.push_str(&row);
                csv.push('\n');
            }
            let mut out = OutputSet::new(&args.common.out)?;
            out.write("sample.csv", &csv)?;
            Ok(true)
        }
        Command::ReverseStress(args) => {
            let law = load_law(&args.common)?;
            let opts = depth_options(&args.common);
            if args.loss_w.0.len() != law.dim() {
                return Err(format!("loss-w: expected {} coordinates", law.dim()));
            }
            let w = DVector::from_vec(args.loss_w.0.clone());
            let r = reverse_stress(&law, &w, args.loss_threshold, &opts).map_err(|e| e.to_string())?;
            let mut report = String::from("command=reverse-stress\n");
            report.push_str(&format!("loss_w={}\n", vec12(&w)));
            report.push_str(&format!("loss_threshold={}\n", f12(args.loss_threshold)));
            report.push_str(&format!("scenario={}\n", vec12(&r.scenario)));
            report.push_str(&format!("depth={}\n", f12(r.depth)));
            report.push_str(&format!("converged={}\n", r.converged));
            let mut out = OutputSet::new(&args.common.out)?;
            out.write("report.txt", &report)?;
            Ok(r.converged)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("warning: a sub-computation flagged non-convergence; outputs were written");
            ExitCode::from(1)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
