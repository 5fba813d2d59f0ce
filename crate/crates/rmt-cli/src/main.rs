//! `rmt` — command-line front end for the rmt-core library.
//!
//! Every computation is a subcommand with a reproducible seed and
//! machine-readable output (CSV with `#` metadata comments, or JSON).
//! Exit codes: 0 success, 1 numeric/validation failure, 2 usage error.

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rmt_core::ensembles::{empirical_density, mc_ratio, sample_spectra, EnsembleSpec};
use rmt_core::hiz::{series_by_recursion, HizParams};
use rmt_core::output::CsvTable;
use rmt_core::source::{pastur_density, SourceProfile};
use rmt_core::spacing::{spacing_density, KernelConvention, Route, SpacingCurve, SpacingEnsemble};
use rmt_core::RmtError;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "rmt",
    version,
    about = "Random-matrix spectral statistics: densities, ratios, kernels, spacings"
)]
struct Cli {
    /// JSON config file whose keys mirror the subcommand's flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (falls back to the RMT_SEED environment variable, then 0)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker pool size (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Output file (stdout when omitted)
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnsembleArg {
    Gue,
    Goe,
    Gse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Nystrom,
    Ode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    /// sin(pi x)/(pi x): unit mean density
    Unit,
    /// sin(x)/x
    PiLess,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelKind {
    Rho2Gue,
    Rho2Goe,
    Rho2Gse,
    F2,
    Airy,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Monte Carlo eigenvalue histogram with the self-consistent analytic overlay
    Density {
        #[arg(long, default_value_t = 2)]
        beta: u8,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 40)]
        bins: usize,
        /// weight scale c in exp(-(cN/2) Tr X^2)
        #[arg(long, default_value_t = 1.0)]
        weight_scale: f64,
        /// JSON source profile {"atoms": [{"a": .., "w": ..}]}
        #[arg(long)]
        source: Option<PathBuf>,
    },
    /// Characteristic-polynomial ratio: Monte Carlo plus exact finite-N where available
    Ratio {
        #[arg(long, default_value_t = 2)]
        beta: u8,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
        mu_re: f64,
        #[arg(long, default_value_t = 0.1)]
        mu_im: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Exact-rational heat-kernel series coefficients
    HizSeries {
        #[arg(long, default_value_t = 1)]
        beta: u32,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 5)]
        order: usize,
    },
    /// Scaling-limit correlation kernels on a grid
    Kernel {
        #[arg(long, value_enum)]
        kind: KernelKind,
        /// Dyson index for --kind f2 (any positive value)
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
        xmin: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        xmax: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Gap probability E(s) and spacing density p(s)
    Spacing {
        #[arg(long, value_enum, default_value_t = EnsembleArg::Gue)]
        ensemble: EnsembleArg,
        #[arg(long, value_enum, default_value_t = RouteArg::Ode)]
        route: RouteArg,
        #[arg(long, value_enum, default_value_t = ConventionArg::Unit)]
        convention: ConventionArg,
        #[arg(long, default_value_t = 3.0)]
        smax: f64,
        #[arg(long, default_value_t = 60)]
        points: usize,
    },
    /// Density of states for an external source via the Pastur equation
    Pastur {
        /// JSON source profile {"atoms": [{"a": .., "w": ..}]}
        #[arg(long)]
        source: Option<PathBuf>,
        /// shorthand: symmetric two-atom source at +/- a
        #[arg(long, allow_hyphen_values = true)]
        two_atom: Option<f64>,
        #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
        xmin: f64,
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        xmax: f64,
        #[arg(long, default_value_t = 241)]
        points: usize,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
    },
    /// Run the acceptance suite and print a pass/fail table
    Validate {
        /// run a single criterion (1..=14) instead of the full suite
        #[arg(long)]
        criterion: Option<u32>,
    },
}

fn main() {
    // Merge --config JSON into argv before clap parses it: each config key
    // becomes --key value unless the flag is already given explicitly.
    let argv = match merge_config(std::env::args().collect()) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };
    let cli = Cli::parse_from(argv);
    if cli.workers > 0 {
        // Results are worker-count independent by construction (per-task
        // seeding); the pool size only affects throughput.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global();
    }
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    std::process::exit(code);
}

fn merge_config(mut argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = argv.iter().position(|a| a == "--config") else {
        return Ok(argv);
    };
    let path = argv
        .get(pos + 1)
        .cloned()
        .ok_or("--config requires a path")?;
    let text = std::fs::read_to_string(&path).map_err(|e| format!("--config {path}: {e}"))?;
    let json: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("--config {path}: {e}"))?;
    let obj = json
        .as_object()
        .ok_or_else(|| format!("--config {path}: expected a JSON object"))?;
    for (key, value) in obj {
        let flag = format!("--{}", key.replace('_', "-"));
        if argv.iter().any(|a| *a == flag) {
            continue; // explicit flags win
        }
        let rendered = match value {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        argv.push(flag);
        argv.push(rendered);
    }
    Ok(argv)
}

fn run(cli: Cli) -> Result<i32, RmtError> {
    let seed = cli.seed.unwrap_or_else(|| {
        std::env::var("RMT_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    });
    match &cli.cmd {
        Cmd::Density {
            beta,
            n,
            samples,
            bins,
            weight_scale,
            source,
        } => {
            let profile = source.as_deref().map(load_profile).transpose()?;
            let table = density_table(*beta, *n, *samples, *bins, *weight_scale, profile, seed)?;
            emit(&cli, &table)?;
            Ok(0)
        }
        Cmd::Ratio {
            beta,
            n,
            lambda,
            mu_re,
            mu_im,
            samples,
        } => {
            let table = ratio_table(*beta, *n, *lambda, *mu_re, *mu_im, *samples, seed)?;
            emit(&cli, &table)?;
            Ok(0)
        }
        Cmd::HizSeries { beta, k, order } => {
            let params = HizParams::classical(*beta, *k)?;
            let series = series_by_recursion(&params, *order);
            let text = match cli.format {
                Format::Json => {
                    format!("{:#}\n", series.to_json())
                }
                Format::Csv => {
                    let mut out = format!("# beta = {beta}\n# k = {k}\np,coefficient\n");
                    for (p, c) in series.coefficients.iter().enumerate() {
                        if c.denom() == &num::BigInt::from(1) {
                            out.push_str(&format!("{p},{}\n", c.numer()));
                        } else {
                            out.push_str(&format!("{p},{}/{}\n", c.numer(), c.denom()));
                        }
                    }
                    out
                }
            };
            write_text(&cli, &text)?;
            Ok(0)
        }
        Cmd::Kernel {
            kind,
            beta,
            xmin,
            xmax,
            points,
        } => {
            let table = kernel_table(*kind, *beta, *xmin, *xmax, *points)?;
            emit(&cli, &table)?;
            Ok(0)
        }
        Cmd::Spacing {
            ensemble,
            route,
            convention,
            smax,
            points,
        } => {
            let table = spacing_table(*ensemble, *route, *convention, *smax, *points)?;
            emit(&cli, &table)?;
            Ok(0)
        }
        Cmd::Pastur {
            source,
            two_atom,
            xmin,
            xmax,
            points,
            epsilon,
        } => {
            let profile = match (source, two_atom) {
                (Some(path), None) => load_profile(path)?,
                (None, Some(a)) => SourceProfile::two_atom(*a),
                (None, None) => SourceProfile::zero(),
                (Some(_), Some(_)) => {
                    return Err(RmtError::InvalidParameter(
                        "--source and --two-atom are mutually exclusive".into(),
                    ))
                }
            };
            let table = pastur_table(&profile, *xmin, *xmax, *points, *epsilon)?;
            emit(&cli, &table)?;
            Ok(0)
        }
        Cmd::Validate { criterion } => {
            let reports = match criterion {
                Some(id) => vec![rmt_core::validate::run_criterion(*id)],
                None => rmt_core::validate::run_all(),
            };
            let mut all = true;
            for r in &reports {
                println!("{}", r.line());
                all &= r.passed;
            }
            println!(
                "{}: {} of {} criteria passed",
                if all { "OK" } else { "FAILURE" },
                reports.iter().filter(|r| r.passed).count(),
                reports.len()
            );
            Ok(if all { 0 } else { 1 })
        }
    }
}

fn load_profile(path: &std::path::Path) -> Result<SourceProfile, RmtError> {
    SourceProfile::from_json(&std::fs::read_to_string(path)?)
}

/// Zero-source spectral edge for the `(beta, weight_scale)` convention.
fn spectral_edge(beta: u8, c: f64) -> f64 {
    match beta {
        1 => (2.0 / c).sqrt(),
        2 => 2.0 / c.sqrt(),
        _ => 2.0 * (2.0 / c).sqrt(),
    }
}

fn density_table(
    beta: u8,
    n: usize,
    samples: usize,
    bins: usize,
    weight_scale: f64,
    profile: Option<SourceProfile>,
    seed: u64,
) -> Result<CsvTable, RmtError> {
    let spec = EnsembleSpec::new(beta, n, weight_scale, profile.clone())?;
    let draws = sample_spectra(&spec, samples, seed);
    let (lo, hi) = draws
        .iter()
        .flat_map(|s| s.eigenvalues.iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        });
    let pad = 0.02 * (hi - lo);
    let hist = empirical_density(&draws, bins, (lo - pad, hi + pad))?;

    // Analytic overlay: rescale to the edge-2 normalization in which the
    // self-consistent (Pastur) solver works, solve there, and map back.
    // The scale factor acts on eigenvalues and source locations alike.
    let sigma = 2.0 / spectral_edge(beta, weight_scale);
    let scaled = match &profile {
        Some(p) => SourceProfile::new(p.atoms.iter().map(|&(a, w)| (sigma * a, w)).collect())?,
        None => SourceProfile::zero(),
    };
    let grid: Vec<f64> = hist.centers.iter().map(|&x| sigma * x).collect();
    let overlay = pastur_density(&scaled, &grid, 1e-6)?;

    let mut t = CsvTable::new(vec!["lambda", "mc_density", "analytic_density"]);
    t.comment("beta", beta)
        .comment("n", n)
        .comment("samples", samples)
        .comment("weight_scale", weight_scale)
        .comment("seed", seed)
        .comment("overlay", "self-consistent resolvent (edge-2 rescale)");
    for ((&x, &d), &a) in hist.centers.iter().zip(&hist.densities).zip(&overlay) {
        t.push_row(vec![x, d, sigma * a])?;
    }
    Ok(t)
}

fn ratio_table(
    beta: u8,
    n: usize,
    lambda: f64,
    mu_re: f64,
    mu_im: f64,
    samples: usize,
    seed: u64,
) -> Result<CsvTable, RmtError> {
    let mu = Complex64::new(mu_re, mu_im);
    let spec = EnsembleSpec::new(beta, n, 1.0, None)?;
    let est = mc_ratio(&spec, lambda, mu, samples, seed)?;
    // Exact finite-N references exist (at weight scale 1) for beta = 2 at
    // any N and beta = 1 at even N; otherwise NaN is emitted.
    let exact: Complex64 = match beta {
        2 => rmt_core::exactfn::gue_ratio(lambda, mu, n as u32)?,
        1 if n % 2 == 0 => rmt_core::exactfn::goe_ratio_quadrature(lambda, mu, n as u32)?,
        _ => Complex64::new(f64::NAN, f64::NAN),
    };
    let mut t = CsvTable::new(vec![
        "mc_re", "mc_im", "std_error", "exact_re", "exact_im",
    ]);
    t.comment("beta", beta)
        .comment("n", n)
        .comment("lambda", lambda)
        .comment("mu", format!("{mu_re}+{mu_im}i"))
        .comment("samples", samples)
        .comment("seed", seed)
        .comment("weight_scale", 1.0);
    t.push_row(vec![
        est.mean.re,
        est.mean.im,
        est.std_error,
        exact.re,
        exact.im,
    ])?;
    Ok(t)
}

fn kernel_table(
    kind: KernelKind,
    beta: f64,
    xmin: f64,
    xmax: f64,
    points: usize,
) -> Result<CsvTable, RmtError> {
    if points < 2 || !(xmax > xmin) {
        return Err(RmtError::InvalidParameter(
            "kernel: need points >= 2 and xmax > xmin".into(),
        ));
    }
    use rmt_core::kernels as k;
    let grid: Vec<f64> = (0..points)
        .map(|i| xmin + (xmax - xmin) * i as f64 / (points - 1) as f64)
        .collect();
    let mut t = match kind {
        KernelKind::Airy => CsvTable::new(vec!["x", "kernel_diag", "edge_f_diag"]),
        _ => CsvTable::new(vec!["x", "value"]),
    };
    t.comment("kind", format!("{kind:?}"));
    if kind == KernelKind::F2 {
        t.comment("beta", beta);
    }
    for &x in &grid {
        let row = match kind {
            KernelKind::Rho2Gue => vec![x, k::rho2_gue(x)],
            KernelKind::Rho2Goe => vec![x, k::rho2_goe(x)],
            KernelKind::Rho2Gse => vec![x, k::rho2_gse(x)],
            KernelKind::F2 => vec![x, k::f2_general_beta(x, beta)?],
            KernelKind::Airy => vec![x, k::airy_kernel(x, x), k::airy_edge_f(x, x)],
        };
        t.push_row(row)?;
    }
    Ok(t)
}

fn spacing_table(
    ensemble: EnsembleArg,
    route: RouteArg,
    convention: ConventionArg,
    smax: f64,
    points: usize,
) -> Result<CsvTable, RmtError> {
    if points < 5 {
        return Err(RmtError::InvalidParameter(
            "spacing: need at least 5 points".into(),
        ));
    }
    let h = smax / points as f64;
    let grid: Vec<f64> = (1..=points).map(|i| h * i as f64).collect();
    let ens = match ensemble {
        EnsembleArg::Gue => SpacingEnsemble::Gue,
        EnsembleArg::Goe => SpacingEnsemble::Goe,
        EnsembleArg::Gse => SpacingEnsemble::Gse,
    };
    let rt = match route {
        RouteArg::Nystrom => Route::Nystrom,
        RouteArg::Ode => Route::Hamiltonian,
    };
    let conv = match convention {
        ConventionArg::Unit => KernelConvention::UnitDensity,
        ConventionArg::PiLess => KernelConvention::PiLess,
    };
    let curve = SpacingCurve::compute(ens, rt, conv, &grid)?;
    let p = spacing_density(&curve)?;
    let mut t = CsvTable::new(vec!["s", "e", "p"]);
    t.comment("ensemble", format!("{ensemble:?}"))
        .comment("route", format!("{route:?}"))
        .comment("convention", format!("{convention:?}"));
    for ((&s, &e), &pi) in curve.s_grid.iter().zip(&curve.e_values).zip(&p) {
        t.push_row(vec![s, e, pi])?;
    }
    Ok(t)
}

fn pastur_table(
    profile: &SourceProfile,
    xmin: f64,
    xmax: f64,
    points: usize,
    epsilon: f64,
) -> Result<CsvTable, RmtError> {
    if points < 2 || !(xmax > xmin) {
        return Err(RmtError::InvalidParameter(
            "pastur: need points >= 2 and xmax > xmin".into(),
        ));
    }
    let grid: Vec<f64> = (0..points)
        .map(|i| xmin + (xmax - xmin) * i as f64 / (points - 1) as f64)
        .collect();
    let rho = pastur_density(profile, &grid, epsilon)?;
    let mut t = CsvTable::new(vec!["lambda", "rho"]);
    t.comment("epsilon", epsilon).comment(
        "atoms",
        profile
            .atoms
            .iter()
            .map(|(a, w)| format!("({a},{w})"))
            .collect::<Vec<_>>()
            .join(" "),
    );
    for (&x, &r) in grid.iter().zip(&rho) {
        t.push_row(vec![x, r])?;
    }
    Ok(t)
}

fn emit(cli: &Cli, table: &CsvTable) -> Result<(), RmtError> {
    let text = match cli.format {
        Format::Csv => table.render(),
        Format::Json => {
            let mut s = table.render_json();
            s.push('\n');
            s
        }
    };
    write_text(cli, &text)
}

fn write_text(cli: &Cli, text: &str) -> Result<(), RmtError> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
