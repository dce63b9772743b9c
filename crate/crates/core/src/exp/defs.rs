//! The experiment registry: parameter schemas and run functions.
//!
//! Random data inside an experiment comes from the counter-based
//! `(seed, trial)` stream rule, so results never depend on execution order.
//! Where an experiment also seeds library objects that take their own seed
//! (sketch operators, coordinate streams), it derives those seeds from the
//! trial index by fixed arithmetic, keeping reruns bit-identical.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::pde::{
    classify_matrix, gen_convdiff_2d, gen_diffusion_2d, gen_helmholtz, poly_bounded_check,
    CoefficientField, ConvectionScheme, DominanceClass, Grid2D,
};
use crate::rng::{haar_orthogonal, normal_vec, spd_with_spectrum, trial_rng};
use crate::select::{
    brute_cssp, cpqr_select, gecp_cross, hilbert_matrix, kahan_matrix, nystrom_error,
    pivoted_cholesky, rbf_kernel_1d, trace_cssp_worst_vs_volume, CsspNorm, KernelGrid,
    NystromNorm,
};
use crate::sketch::{
    make_sketch, measure_embedding, osi_scan, randomized_svd, sketch_and_solve_ls, FamilyKind,
};
use crate::solvers::{
    cg, forsythe_iteration, gmres, power_method, rcd, relative_residual,
    stopping_time_experiment, two_grid_contraction, IterOptions, Smoother, TwoGridSetup,
};
use crate::sparse::SparseMatrix;
use crate::spectral::{
    minami_gap_experiment, shattering_experiment, sign_error, CompositionScheme,
    NoiseDistribution,
};
use crate::tt::{tt_quasi_opt_probe, DenseTensor};

use super::config::{ExperimentSpec, ParamKind, ParamSpec, ResolvedConfig};
use super::plot;
use super::ExperimentOutput;

const fn param(
    key: &'static str,
    kind: ParamKind,
    default: &'static str,
    help: &'static str,
) -> ParamSpec {
    ParamSpec {
        key,
        kind,
        default,
        help,
    }
}

static REGISTRY: &[ExperimentSpec] = &[
    ExperimentSpec {
        name: "generate",
        summary: "assemble a 2D convection-diffusion matrix and dump its nonzeros",
        params: &[
            param("nx", ParamKind::UInt, "8", "interior unknowns in x"),
            param("ny", ParamKind::UInt, "8", "interior unknowns in y"),
            param("ax", ParamKind::Float, "1", "diffusion coefficient in x"),
            param("ay", ParamKind::Float, "1", "diffusion coefficient in y"),
            param("bx", ParamKind::Float, "0", "convection velocity in x"),
            param("by", ParamKind::Float, "0", "convection velocity in y"),
            param("scheme", ParamKind::Text, "centered", "convection scheme: centered or upwind"),
        ],
    },
    ExperimentSpec {
        name: "classify",
        summary: "diagonal-dominance class and per-row margins of a generated operator",
        params: &[
            param(
                "generator",
                ParamKind::Text,
                "helmholtz",
                "operator: diffusion, convdiff, or helmholtz",
            ),
            param("nx", ParamKind::UInt, "8", "interior unknowns in x"),
            param("ny", ParamKind::UInt, "8", "interior unknowns in y"),
            param("ax", ParamKind::Float, "1", "diffusion coefficient in x"),
            param("ay", ParamKind::Float, "1", "diffusion coefficient in y"),
            param("bx", ParamKind::Float, "0", "convection velocity in x (convdiff)"),
            param("by", ParamKind::Float, "0", "convection velocity in y (convdiff)"),
            param("wavenumber", ParamKind::Float, "1.5", "Helmholtz shift k in A - k^2 I"),
            param("scheme", ParamKind::Text, "centered", "convection scheme: centered or upwind"),
            param("c", ParamKind::Float, "2", "constant for the polynomial-boundedness check"),
        ],
    },
    ExperimentSpec {
        name: "stopping_times",
        summary: "paired CG/RCD epoch counts to a common energy-error target",
        params: &[
            param("p", ParamKind::Float, "1", "eigenvalue decay exponent (lambda_k = k^-p)"),
            param("n", ParamKind::UInt, "64", "system dimension (at most 512)"),
            param("eps", ParamKind::Float, "1e-3", "relative squared energy-error target"),
            param("trials", ParamKind::UInt, "20", "independent draws"),
        ],
    },
    ExperimentSpec {
        name: "cg_bound",
        summary: "CG energy-error decay against the square-root-condition-number bound",
        params: &[
            param("n", ParamKind::UInt, "48", "system dimension"),
            param("kappa", ParamKind::Float, "100", "condition number of the test spectrum"),
            param("steps", ParamKind::UInt, "40", "iterations to record"),
        ],
    },
    ExperimentSpec {
        name: "rcd_contraction",
        summary: "mean RCD energy-error contraction against the spectral rate",
        params: &[
            param("n", ParamKind::UInt, "8", "system dimension"),
            param("kappa", ParamKind::Float, "50", "condition number of the test spectrum"),
            param("epochs", ParamKind::UInt, "30", "epochs (n coordinate steps each)"),
            param("trials", ParamKind::UInt, "100", "independent runs averaged"),
        ],
    },
    ExperimentSpec {
        name: "two_grid",
        summary: "two-grid contraction norm for 1D Poisson across mesh widths",
        params: &[
            param("m_list", ParamKind::UIntList, "3,7,15", "coarse sizes (fine n = 2m+1)"),
            param("omega", ParamKind::Float, "0.6666666666666666", "Jacobi damping weight"),
            param("nu", ParamKind::UInt, "2", "pre-smoothing steps"),
            param("smoother", ParamKind::Text, "jacobi", "smoother: jacobi or gauss_seidel"),
        ],
    },
    ExperimentSpec {
        name: "forsythe",
        summary: "restarted-CG residuals and the Cauchy increments of the two alternating subsequences",
        params: &[
            param("n", ParamKind::UInt, "6", "diagonal test dimension (spectrum 1..n)"),
            param("s", ParamKind::UInt, "1", "inner steps per restart"),
            param("big_k", ParamKind::UInt, "60", "number of restarts"),
        ],
    },
    ExperimentSpec {
        name: "gmres_restart",
        summary: "GMRES iteration counts across restart lengths on an upwind operator",
        params: &[
            param("nx", ParamKind::UInt, "8", "interior unknowns in x"),
            param("ny", ParamKind::UInt, "8", "interior unknowns in y"),
            param("bx", ParamKind::Float, "10", "convection velocity in x"),
            param("by", ParamKind::Float, "0", "convection velocity in y"),
            param("scheme", ParamKind::Text, "upwind", "convection scheme: centered or upwind"),
            param("restarts", ParamKind::UIntList, "0,5,10,20", "restart lengths (0 = full method)"),
            param("tol", ParamKind::Float, "1e-8", "relative residual target"),
            param("maxit", ParamKind::UInt, "400", "iteration budget"),
        ],
    },
    ExperimentSpec {
        name: "power_method",
        summary: "Rayleigh-quotient trace of power iteration on a 2D diffusion operator",
        params: &[
            param("nx", ParamKind::UInt, "8", "interior unknowns in x"),
            param("ny", ParamKind::UInt, "8", "interior unknowns in y"),
            param("maxit", ParamKind::UInt, "200", "iteration budget"),
            param("tol", ParamKind::Float, "1e-10", "relative agreement of consecutive estimates"),
        ],
    },
    ExperimentSpec {
        name: "sketch_isotropy",
        summary: "Monte Carlo defect of the identity-covariance property for each sketch family",
        params: &[
            param("n", ParamKind::UInt, "64", "ambient dimension (power of two)"),
            param("k", ParamKind::UInt, "32", "sketch dimension"),
            param("zeta", ParamKind::UInt, "4", "blocks per row for the sparse-stack family"),
            param("trials", ParamKind::UInt, "50", "operators averaged"),
        ],
    },
    ExperimentSpec {
        name: "osi_scan",
        summary: "failure rate of subspace injectivity over a sketch-size grid",
        params: &[
            param(
                "family",
                ParamKind::Text,
                "sparsestack",
                "gaussian, sparsestack, srht, rerand_srht, or identity",
            ),
            param("n", ParamKind::UInt, "1024", "ambient dimension"),
            param("r", ParamKind::UInt, "8", "subspace dimension"),
            param("k", ParamKind::UIntList, "16,32", "sketch dimensions to scan"),
            param("zeta", ParamKind::UIntList, "4", "sparse-stack block counts to scan"),
            param("alpha", ParamKind::Float, "0.5", "injectivity threshold on sigma_min^2"),
            param("delta", ParamKind::Float, "0.01", "target failure probability"),
            param("trials", ParamKind::UInt, "50", "trials per grid cell"),
        ],
    },
    ExperimentSpec {
        name: "embedding",
        summary: "subspace-embedding distortion bounds across sketch sizes",
        params: &[
            param(
                "family",
                ParamKind::Text,
                "gaussian",
                "gaussian, sparsestack, srht, rerand_srht, or identity",
            ),
            param("n", ParamKind::UInt, "256", "ambient dimension"),
            param("r", ParamKind::UInt, "8", "subspace dimension"),
            param("k_list", ParamKind::UIntList, "16,32,64,128", "sketch dimensions"),
            param("zeta", ParamKind::UInt, "4", "blocks per row for the sparse-stack family"),
            param("trials", ParamKind::UInt, "20", "subspace/operator draws per size"),
        ],
    },
    ExperimentSpec {
        name: "sketch_solve",
        summary: "sketch-and-solve least-squares residual ratio across sketch sizes",
        params: &[
            param(
                "family",
                ParamKind::Text,
                "gaussian",
                "gaussian, sparsestack, srht, rerand_srht, or identity",
            ),
            param("n", ParamKind::UInt, "128", "rows of the overdetermined system"),
            param("d", ParamKind::UInt, "8", "unknowns"),
            param("k_list", ParamKind::UIntList, "16,32,64", "sketch dimensions"),
            param("zeta", ParamKind::UInt, "4", "blocks per row for the sparse-stack family"),
            param("trials", ParamKind::UInt, "20", "draws per size"),
            param("noise", ParamKind::Float, "0.1", "residual noise level in the data model"),
        ],
    },
    ExperimentSpec {
        name: "randomized_svd",
        summary: "projection-based low-rank error against the best truncation",
        params: &[
            param(
                "family",
                ParamKind::Text,
                "gaussian",
                "gaussian, sparsestack, srht, rerand_srht, or identity",
            ),
            param("n", ParamKind::UInt, "96", "rows of the test matrix"),
            param("m", ParamKind::UInt, "64", "columns of the test matrix (power of two)"),
            param("decay", ParamKind::Float, "1", "singular-value decay exponent"),
            param("r_list", ParamKind::UIntList, "5,10,20", "target ranks"),
            param("extra", ParamKind::UInt, "5", "sketch oversampling beyond the rank"),
            param("zeta", ParamKind::UInt, "4", "blocks per row for the sparse-stack family"),
        ],
    },
    ExperimentSpec {
        name: "cssp_quasi",
        summary: "pivoted-QR column selection against the exhaustive optimum",
        params: &[
            param("fixture", ParamKind::Text, "hilbert", "matrix: hilbert, kahan, or rbf"),
            param("n", ParamKind::UInt, "8", "matrix dimension (at most 12 for the oracle)"),
            param("k_list", ParamKind::UIntList, "1,2,3", "selection sizes"),
            param("norm", ParamKind::Text, "fro", "comparison norm: fro or spectral"),
            param("theta", ParamKind::Float, "0.9", "Kahan rotation angle"),
            param("stagger", ParamKind::Float, "0.99", "Kahan diagonal stagger"),
            param("lengthscale", ParamKind::Float, "0.5", "RBF kernel lengthscale"),
        ],
    },
    ExperimentSpec {
        name: "dlr_kernel",
        summary: "cross-approximation error decay on the fermionic integration kernel",
        params: &[
            param("cutoff", ParamKind::Float, "100", "frequency cutoff of the kernel grid"),
            param("k_list", ParamKind::UIntList, "2,4,6,8,10,12,14,16,18", "cross ranks"),
        ],
    },
    ExperimentSpec {
        name: "nystrom_submod",
        summary: "nuclear Nystrom error and marginal gains along a greedy pivot path",
        params: &[
            param("n", ParamKind::UInt, "6", "kernel dimension (path-graph Laplacian)"),
            param("gamma", ParamKind::Float, "0.1", "regularization in K = (L + gamma I)^-1"),
            param("steps", ParamKind::UInt, "6", "path length (clipped to n)"),
        ],
    },
    ExperimentSpec {
        name: "volume_gap",
        summary: "worst-case subset trace against the volume-sampling objective",
        params: &[
            param("n", ParamKind::UInt, "6", "spectrum size (at most 8)"),
            param("p", ParamKind::Float, "1", "eigenvalue decay exponent (lambda_i = i^-p)"),
            param("k_list", ParamKind::UIntList, "1,2,3,4,5", "subset sizes (below n)"),
            param("trials", ParamKind::UInt, "60", "rotation search evaluations per size"),
        ],
    },
    ExperimentSpec {
        name: "shattering",
        summary: "eigenvalue-condition distribution of a randomly perturbed matrix",
        params: &[
            param("matrix", ParamKind::Text, "jordan", "base matrix: jordan or diag"),
            param("n", ParamKind::UInt, "16", "matrix dimension"),
            param("delta", ParamKind::Float, "1e-2", "perturbation norm"),
            param("trials", ParamKind::UInt, "100", "independent perturbations"),
        ],
    },
    ExperimentSpec {
        name: "minami_gap",
        summary: "smallest-gap distribution of a noised tridiagonal operator",
        params: &[
            param("n", ParamKind::UInt, "32", "matrix dimension"),
            param("delta", ParamKind::Float, "1e-3", "diagonal noise amplitude"),
            param("dist", ParamKind::Text, "uniform", "noise law: uniform or gaussian"),
            param("trials", ParamKind::UInt, "200", "independent draws"),
        ],
    },
    ExperimentSpec {
        name: "sign_error",
        summary: "sign-approximation error of a repeated polynomial composition scheme",
        params: &[
            param(
                "scheme",
                ParamKind::Text,
                "newton_schulz",
                "stage list, e.g. square,purify or newton_schulz or cubic(1.5,-0.5)",
            ),
            param("delta", ParamKind::Float, "0.1", "spectral-gap parameter (0 < delta < 1)"),
            param("reps", ParamKind::UInt, "10", "largest repetition count"),
            param("grid", ParamKind::UInt, "2001", "evaluation grid points per side"),
        ],
    },
    ExperimentSpec {
        name: "tt_quasi",
        summary: "tensor-train sweep error against the rank-constrained lower bound",
        params: &[
            param("dims", ParamKind::UIntList, "6,6,6", "tensor mode sizes"),
            param("ranks", ParamKind::UIntList, "3,3", "internal ranks, one per edge"),
            param("trials", ParamKind::UInt, "20", "random tensors probed"),
        ],
    },
];

pub fn registry() -> &'static [ExperimentSpec] {
    REGISTRY
}

pub(super) fn find_spec(name: &str) -> Option<&'static ExperimentSpec> {
    REGISTRY.iter().find(|s| s.name == name)
}

pub(super) fn run(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    match cfg.name() {
        "generate" => run_generate(cfg),
        "classify" => run_classify(cfg),
        "stopping_times" => run_stopping_times(cfg),
        "cg_bound" => run_cg_bound(cfg),
        "rcd_contraction" => run_rcd_contraction(cfg),
        "two_grid" => run_two_grid(cfg),
        "forsythe" => run_forsythe(cfg),
        "gmres_restart" => run_gmres_restart(cfg),
        "power_method" => run_power_method(cfg),
        "sketch_isotropy" => run_sketch_isotropy(cfg),
        "osi_scan" => run_osi_scan(cfg),
        "embedding" => run_embedding(cfg),
        "sketch_solve" => run_sketch_solve(cfg),
        "randomized_svd" => run_randomized_svd(cfg),
        "cssp_quasi" => run_cssp_quasi(cfg),
        "dlr_kernel" => run_dlr_kernel(cfg),
        "nystrom_submod" => run_nystrom_submod(cfg),
        "volume_gap" => run_volume_gap(cfg),
        "shattering" => run_shattering(cfg),
        "minami_gap" => run_minami_gap(cfg),
        "sign_error" => run_sign_error(cfg),
        "tt_quasi" => run_tt_quasi(cfg),
        other => Err(Error::UnknownExperiment(other.to_string())),
    }
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn log10_clamped(v: f64) -> f64 {
    v.max(1e-300).log10()
}

fn parse_scheme(v: &str) -> Result<ConvectionScheme> {
    match v {
        "centered" => Ok(ConvectionScheme::Centered),
        "upwind" => Ok(ConvectionScheme::Upwind),
        other => Err(Error::InvalidArgument(format!(
            "unknown convection scheme '{other}' (use centered or upwind)"
        ))),
    }
}

fn parse_family(v: &str) -> Result<FamilyKind> {
    match v {
        "gaussian" => Ok(FamilyKind::Gaussian),
        "sparsestack" | "sparse_stack" => Ok(FamilyKind::SparseStack),
        "srht" => Ok(FamilyKind::Srht),
        "rerand_srht" | "rerandsrht" => Ok(FamilyKind::RerandSrht),
        "identity" => Ok(FamilyKind::Identity),
        other => Err(Error::InvalidArgument(format!(
            "unknown sketch family '{other}' \
             (use gaussian, sparsestack, srht, rerand_srht, or identity)"
        ))),
    }
}

fn parse_smoother(v: &str, omega: f64) -> Result<Smoother> {
    match v {
        "jacobi" => Ok(Smoother::Jacobi(omega)),
        "gauss_seidel" | "gs" => Ok(Smoother::GaussSeidel),
        other => Err(Error::InvalidArgument(format!(
            "unknown smoother '{other}' (use jacobi or gauss_seidel)"
        ))),
    }
}

fn class_name(c: DominanceClass) -> &'static str {
    match c {
        DominanceClass::None => "none",
        DominanceClass::Sdd => "sdd",
        DominanceClass::Sddm => "sddm",
        DominanceClass::Swcddm => "swcddm",
    }
}

fn decaying_spectrum(n: usize, kappa: f64) -> Vec<f64> {
    // Log-uniform eigenvalues in [1, kappa].
    (0..n)
        .map(|i| {
            if n == 1 {
                1.0
            } else {
                kappa.powf(i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

fn constant_field(vx: f64, vy: f64) -> CoefficientField {
    CoefficientField::from_fn(move |_, _| (vx, vy))
}

fn run_generate(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let grid = Grid2D::unit(cfg.get_usize("nx"), cfg.get_usize("ny"))?;
    let a = constant_field(cfg.get_f64("ax"), cfg.get_f64("ay"));
    let b = constant_field(cfg.get_f64("bx"), cfg.get_f64("by"));
    let scheme = parse_scheme(cfg.get_str("scheme"))?;
    let m = gen_convdiff_2d(&grid, &a, &b, scheme)?.to_dense();

    let mut rows = Vec::new();
    let mut diag = Vec::new();
    for i in 0..m.nrows() {
        diag.push((i as f64, m.get(i, i)));
        for j in 0..m.ncols() {
            let v = m.get(i, j);
            if v != 0.0 {
                rows.push(vec![i.to_string(), j.to_string(), fmt(v)]);
            }
        }
    }
    Ok(ExperimentOutput {
        header: vec!["row", "col", "value"],
        rows,
        plots: vec![(
            "diagonal",
            plot::line_plot("diagonal profile", "row", "value", &[("diag", diag)]),
        )],
    })
}

fn run_classify(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let grid = Grid2D::unit(cfg.get_usize("nx"), cfg.get_usize("ny"))?;
    let a = constant_field(cfg.get_f64("ax"), cfg.get_f64("ay"));
    let m = match cfg.get_str("generator") {
        "diffusion" => gen_diffusion_2d(&grid, &a)?,
        "convdiff" => {
            let b = constant_field(cfg.get_f64("bx"), cfg.get_f64("by"));
            gen_convdiff_2d(&grid, &a, &b, parse_scheme(cfg.get_str("scheme"))?)?
        }
        "helmholtz" => {
            let base = gen_diffusion_2d(&grid, &a)?;
            gen_helmholtz(&base, cfg.get_f64("wavenumber"))?
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown generator '{other}' (use diffusion, convdiff, or helmholtz)"
            )))
        }
    };
    let report = classify_matrix(&m)?;
    let bounded = poly_bounded_check(&m, cfg.get_f64("c"));
    let name = class_name(report.class);

    let margins: Vec<(f64, f64)> = report
        .row_margins
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64, v))
        .collect();
    let rows = report
        .row_margins
        .iter()
        .enumerate()
        .map(|(i, &v)| vec![i.to_string(), fmt(v), name.to_string(), bounded.to_string()])
        .collect();
    Ok(ExperimentOutput {
        header: vec!["row", "margin", "class", "poly_bounded"],
        rows,
        plots: vec![(
            "margins",
            plot::line_plot("dominance margins", "row", "margin", &[("margin", margins)]),
        )],
    })
}

fn run_stopping_times(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let times = stopping_time_experiment(
        cfg.get_f64("p"),
        cfg.get_usize("n"),
        cfg.get_f64("eps"),
        cfg.get_usize("trials"),
        cfg.seed,
    )?;
    let rows = times
        .iter()
        .map(|t| vec![t.trial.to_string(), t.t_cg.to_string(), t.t_rcd.to_string()])
        .collect();

    let mut cg_sorted: Vec<f64> = times.iter().map(|t| t.t_cg as f64).collect();
    let mut rcd_sorted: Vec<f64> = times.iter().map(|t| t.t_rcd as f64).collect();
    cg_sorted.sort_by(f64::total_cmp);
    rcd_sorted.sort_by(f64::total_cmp);
    let series = |v: &[f64]| -> Vec<(f64, f64)> {
        v.iter().enumerate().map(|(i, &t)| (i as f64, t)).collect()
    };
    Ok(ExperimentOutput {
        header: vec!["trial", "t_cg", "t_rcd"],
        rows,
        plots: vec![(
            "profile",
            plot::line_plot(
                "sorted stopping times",
                "rank",
                "epochs",
                &[("t_cg", series(&cg_sorted)), ("t_rcd", series(&rcd_sorted))],
            ),
        )],
    })
}

fn run_cg_bound(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let n = cfg.get_usize("n");
    let kappa = cfg.get_f64("kappa");
    let steps = cfg.get_usize("steps");
    if !(kappa >= 1.0) {
        return Err(Error::InvalidArgument("condition number must be at least 1".into()));
    }

    let mut rng = trial_rng(cfg.seed, 0);
    let a = spd_with_spectrum(&mut rng, &decaying_spectrum(n, kappa));
    let x_star = normal_vec(&mut rng, n);
    let b = a.matvec(&x_star);
    let sp = SparseMatrix::from_dense(&a, 0.0);
    let opts = IterOptions::anorm(1e-30, steps, &x_star);
    let trace = cg(&sp, &b, &vec![0.0; n], &opts)?;
    let errs = trace.anorm_errors.expect("energy stopping records errors");

    let rho = (kappa.sqrt() - 1.0) / (kappa.sqrt() + 1.0);
    let e0 = errs[0].max(f64::MIN_POSITIVE);
    let mut rows = Vec::new();
    let mut measured = Vec::new();
    let mut bound_pts = Vec::new();
    for (k, &e) in errs.iter().enumerate() {
        let rel = e / e0;
        let bound = 2.0 * rho.powi(k as i32);
        rows.push(vec![k.to_string(), fmt(rel), fmt(bound)]);
        measured.push((k as f64, log10_clamped(rel)));
        bound_pts.push((k as f64, log10_clamped(bound)));
    }
    Ok(ExperimentOutput {
        header: vec!["k", "rel_anorm_error", "bound"],
        rows,
        plots: vec![(
            "decay",
            plot::line_plot(
                "energy error vs bound (log10)",
                "iteration",
                "log10 error",
                &[("measured", measured), ("bound", bound_pts)],
            ),
        )],
    })
}

fn run_rcd_contraction(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let n = cfg.get_usize("n");
    let kappa = cfg.get_f64("kappa");
    let epochs = cfg.get_usize("epochs");
    let trials = cfg.get_usize("trials");
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }

    let lambda = decaying_spectrum(n, kappa);
    let rate = 1.0 - lambda[0] / lambda.iter().sum::<f64>();
    let mut mean_sq = vec![0.0; epochs + 1];
    for t in 0..trials {
        let mut rng = trial_rng(cfg.seed, t as u64);
        let a = spd_with_spectrum(&mut rng, &lambda);
        let x_star = normal_vec(&mut rng, n);
        let b = a.matvec(&x_star);
        let sp = SparseMatrix::from_dense(&a, 0.0);
        let opts = IterOptions::anorm(1e-30, epochs, &x_star);
        // The coordinate stream gets its own derived seed per trial.
        let trace = rcd(&sp, &b, &vec![0.0; n], &opts, cfg.seed.wrapping_add(t as u64))?;
        let errs = trace.anorm_errors.expect("energy stopping records errors");
        let e0_sq = (errs[0] * errs[0]).max(f64::MIN_POSITIVE);
        for (k, slot) in mean_sq.iter_mut().enumerate() {
            // One recorded entry per step; epoch k sits n*k steps in.
            let idx = (k * n).min(errs.len() - 1);
            *slot += errs[idx] * errs[idx] / e0_sq / trials as f64;
        }
    }

    let mut rows = Vec::new();
    let mut measured = Vec::new();
    let mut bound_pts = Vec::new();
    for (k, &m) in mean_sq.iter().enumerate() {
        let bound = rate.powi((n * k) as i32);
        rows.push(vec![k.to_string(), fmt(m), fmt(bound)]);
        measured.push((k as f64, log10_clamped(m)));
        bound_pts.push((k as f64, log10_clamped(bound)));
    }
    Ok(ExperimentOutput {
        header: vec!["epoch", "mean_sq_error_ratio", "bound"],
        rows,
        plots: vec![(
            "decay",
            plot::line_plot(
                "mean contraction vs spectral rate (log10)",
                "epoch",
                "log10 ratio",
                &[("measured", measured), ("bound", bound_pts)],
            ),
        )],
    })
}

fn run_two_grid(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let smoother = parse_smoother(cfg.get_str("smoother"), cfg.get_f64("omega"))?;
    let nu = cfg.get_usize("nu");
    let mut rows = Vec::new();
    let mut contraction = Vec::new();
    for m in cfg.get_usize_list("m_list") {
        let setup = TwoGridSetup::poisson_1d(m, smoother, nu)?;
        let report = two_grid_contraction(&setup)?;
        let n = 2 * m + 1;
        let h = 1.0 / (n + 1) as f64;
        rows.push(vec![
            m.to_string(),
            n.to_string(),
            fmt(h),
            fmt(report.q_norm),
            fmt(report.smoothing_quantity),
            fmt(report.approximation_quantity),
            fmt(report.galerkin_defect),
        ]);
        contraction.push((h, report.q_norm));
    }
    Ok(ExperimentOutput {
        header: vec![
            "m",
            "n",
            "h",
            "q_norm",
            "smoothing",
            "approximation",
            "galerkin_defect",
        ],
        rows,
        plots: vec![(
            "contraction",
            plot::line_plot(
                "two-grid contraction",
                "mesh width",
                "||Q||",
                &[("q_norm", contraction)],
            ),
        )],
    })
}

fn run_forsythe(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let n = cfg.get_usize("n");
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let spectrum: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    let a = DenseMatrix::diag_from(&spectrum);
    let mut rng = trial_rng(cfg.seed, 0);
    let b = normal_vec(&mut rng, n);
    let x0 = normal_vec(&mut rng, n);
    let run = forsythe_iteration(&a, &b, &x0, cfg.get_usize("s"), cfg.get_usize("big_k"))?;

    let mut rows = Vec::new();
    let mut resid = Vec::new();
    for (k, &r) in run.residual_norms.iter().enumerate() {
        let increment = if k % 2 == 0 {
            run.even_increments.get(k / 2)
        } else {
            run.odd_increments.get(k / 2)
        };
        rows.push(vec![
            k.to_string(),
            fmt(r),
            increment.map(|&v| fmt(v)).unwrap_or_default(),
        ]);
        resid.push((k as f64, log10_clamped(r)));
    }
    let pair_series = |v: &[f64]| -> Vec<(f64, f64)> {
        v.iter().enumerate().map(|(i, &x)| (i as f64, log10_clamped(x))).collect()
    };
    Ok(ExperimentOutput {
        header: vec!["k", "residual", "step_increment"],
        rows,
        plots: vec![
            (
                "residual",
                plot::line_plot(
                    "restart residuals (log10)",
                    "restart",
                    "log10 residual",
                    &[("residual", resid)],
                ),
            ),
            (
                "increments",
                plot::line_plot(
                    "alternating-subsequence increments (log10)",
                    "pair",
                    "log10 increment",
                    &[
                        ("even", pair_series(&run.even_increments)),
                        ("odd", pair_series(&run.odd_increments)),
                    ],
                ),
            ),
        ],
    })
}

fn run_gmres_restart(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let grid = Grid2D::unit(cfg.get_usize("nx"), cfg.get_usize("ny"))?;
    let a = constant_field(1.0, 1.0);
    let b = constant_field(cfg.get_f64("bx"), cfg.get_f64("by"));
    let m = gen_convdiff_2d(&grid, &a, &b, parse_scheme(cfg.get_str("scheme"))?)?;
    let n = m.nrows();
    let rhs = vec![1.0; n];
    let x0 = vec![0.0; n];
    let opts = IterOptions::residual(cfg.get_f64("tol"), cfg.get_usize("maxit"));

    let mut rows = Vec::new();
    let mut iters = Vec::new();
    for r in cfg.get_usize_list("restarts") {
        let restart = if r == 0 { None } else { Some(r) };
        let trace = gmres(&m, &rhs, &x0, restart, &opts)?;
        let final_rel = relative_residual(&m, &rhs, &trace.solution);
        rows.push(vec![
            r.to_string(),
            trace.iterations.to_string(),
            trace.converged.to_string(),
            fmt(final_rel),
        ]);
        iters.push((r as f64, trace.iterations as f64));
    }
    Ok(ExperimentOutput {
        header: vec!["restart", "iterations", "converged", "final_relres"],
        rows,
        plots: vec![(
            "iterations",
            plot::line_plot(
                "iterations by restart length",
                "restart (0 = full)",
                "iterations",
                &[("iterations", iters)],
            ),
        )],
    })
}

fn run_power_method(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let grid = Grid2D::unit(cfg.get_usize("nx"), cfg.get_usize("ny"))?;
    let m = gen_diffusion_2d(&grid, &constant_field(1.0, 1.0))?;
    let n = m.nrows();
    let v0 = normal_vec(&mut trial_rng(cfg.seed, 0), n);
    let (_, trace) = power_method(&m, &v0, cfg.get_usize("maxit"), cfg.get_f64("tol"))?;

    let rows = trace
        .estimates
        .iter()
        .enumerate()
        .map(|(i, &e)| vec![i.to_string(), fmt(e)])
        .collect();
    let pts: Vec<(f64, f64)> = trace
        .estimates
        .iter()
        .enumerate()
        .map(|(i, &e)| (i as f64, e))
        .collect();
    Ok(ExperimentOutput {
        header: vec!["iteration", "estimate"],
        rows,
        plots: vec![(
            "estimates",
            plot::line_plot(
                "Rayleigh-quotient estimates",
                "iteration",
                "estimate",
                &[("estimate", pts)],
            ),
        )],
    })
}

fn run_sketch_isotropy(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let n = cfg.get_usize("n");
    let k = cfg.get_usize("k");
    let zeta = cfg.get_usize("zeta");
    let trials = cfg.get_usize("trials");
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }

    let families = [
        FamilyKind::Gaussian,
        FamilyKind::SparseStack,
        FamilyKind::Srht,
        FamilyKind::RerandSrht,
    ];
    let eye = DenseMatrix::identity(n);
    let mut rows = Vec::new();
    let mut defects = Vec::new();
    for (fi, kind) in families.iter().enumerate() {
        let mut acc = DenseMatrix::zeros(n, n);
        for t in 0..trials {
            let op = make_sketch(*kind, n, k, zeta, cfg.seed.wrapping_add(t as u64))?;
            let g = op.apply(&eye)?;
            acc = acc.add_scaled(1.0 / trials as f64, &g.matmul_transa(&g));
        }
        let dev = acc.shift_identity(-1.0);
        rows.push(vec![
            kind.name().to_string(),
            trials.to_string(),
            fmt(dev.frobenius_norm()),
            fmt(dev.max_abs()),
        ]);
        defects.push((fi as f64, dev.frobenius_norm()));
    }
    Ok(ExperimentOutput {
        header: vec!["family", "trials", "fro_defect", "max_abs_dev"],
        rows,
        plots: vec![(
            "defect",
            plot::line_plot(
                "covariance defect by family",
                "family index",
                "Frobenius defect",
                &[("defect", defects)],
            ),
        )],
    })
}

fn run_osi_scan(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let scan = osi_scan(
        parse_family(cfg.get_str("family"))?,
        cfg.get_usize("n"),
        cfg.get_usize("r"),
        &cfg.get_usize_list("k"),
        &cfg.get_usize_list("zeta"),
        cfg.get_f64("alpha"),
        cfg.get_f64("delta"),
        cfg.get_usize("trials"),
        cfg.seed,
    )?;
    let rows = scan
        .cells
        .iter()
        .map(|c| {
            vec![
                c.family.clone(),
                c.n.to_string(),
                c.r.to_string(),
                c.k.to_string(),
                c.zeta.to_string(),
                fmt(c.threshold),
                c.trials.to_string(),
                c.failures.to_string(),
                fmt(c.failure_fraction()),
            ]
        })
        .collect();
    let pts: Vec<(f64, f64)> = scan
        .cells
        .iter()
        .map(|c| (c.k as f64, c.failure_fraction()))
        .collect();
    Ok(ExperimentOutput {
        header: vec![
            "family",
            "n",
            "r",
            "k",
            "zeta",
            "threshold",
            "trials",
            "failures",
            "failure_rate",
        ],
        rows,
        plots: vec![(
            "failures",
            plot::line_plot(
                "injectivity failure rate",
                "sketch dimension",
                "failure rate",
                &[("rate", pts)],
            ),
        )],
    })
}

fn run_embedding(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let kind = parse_family(cfg.get_str("family"))?;
    let n = cfg.get_usize("n");
    let r = cfg.get_usize("r");
    let zeta = cfg.get_usize("zeta");
    let trials = cfg.get_usize("trials");
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let k_list = cfg.get_usize_list("k_list");

    // The same trial index reuses its subspace across sketch sizes, so the
    // columns of the table are paired comparisons.
    let subspaces: Vec<DenseMatrix> = (0..trials)
        .map(|t| crate::rng::haar_subspace(&mut trial_rng(cfg.seed, t as u64), n, r))
        .collect();

    let mut rows = Vec::new();
    let mut alpha_pts = Vec::new();
    let mut beta_pts = Vec::new();
    for (ki, &k) in k_list.iter().enumerate() {
        let mut alphas = Vec::with_capacity(trials);
        let mut betas = Vec::with_capacity(trials);
        for (t, q) in subspaces.iter().enumerate() {
            let op_seed = cfg.seed.wrapping_add((ki * trials + t) as u64);
            let op = make_sketch(kind, n, k, zeta, op_seed)?;
            let rep = measure_embedding(&op, q)?;
            alphas.push(rep.alpha);
            betas.push(rep.beta);
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        rows.push(vec![
            kind.name().to_string(),
            k.to_string(),
            fmt(mean(&alphas)),
            fmt(min(&alphas)),
            fmt(mean(&betas)),
            fmt(max(&betas)),
        ]);
        alpha_pts.push((k as f64, mean(&alphas)));
        beta_pts.push((k as f64, mean(&betas)));
    }
    Ok(ExperimentOutput {
        header: vec!["family", "k", "mean_alpha", "min_alpha", "mean_beta", "max_beta"],
        rows,
        plots: vec![(
            "distortion",
            plot::line_plot(
                "embedding distortion",
                "sketch dimension",
                "squared singular value",
                &[("mean alpha", alpha_pts), ("mean beta", beta_pts)],
            ),
        )],
    })
}

fn run_sketch_solve(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let kind = parse_family(cfg.get_str("family"))?;
    let n = cfg.get_usize("n");
    let d = cfg.get_usize("d");
    let zeta = cfg.get_usize("zeta");
    let trials = cfg.get_usize("trials");
    let noise = cfg.get_f64("noise");
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }

    let mut rows = Vec::new();
    let mut ratio_pts = Vec::new();
    for (ki, &k) in cfg.get_usize_list("k_list").iter().enumerate() {
        let mut ratios = Vec::with_capacity(trials);
        for t in 0..trials {
            let mut rng = trial_rng(cfg.seed, t as u64);
            let a = crate::rng::gaussian_matrix(&mut rng, n, d);
            let x_true = normal_vec(&mut rng, d);
            let mut b = DenseMatrix::zeros(n, 1);
            let ax = a.matvec(&x_true);
            let e = normal_vec(&mut rng, n);
            for i in 0..n {
                b.set(i, 0, ax[i] + noise * e[i]);
            }
            let op_seed = cfg.seed.wrapping_add((ki * trials + t) as u64);
            let op = make_sketch(kind, n, k, zeta, op_seed)?;
            let solve = sketch_and_solve_ls(&a, &b, &op)?;
            ratios.push(solve.ratio);
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let worst = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        rows.push(vec![k.to_string(), fmt(mean), fmt(worst)]);
        ratio_pts.push((k as f64, mean));
    }
    Ok(ExperimentOutput {
        header: vec!["k", "mean_ratio", "max_ratio"],
        rows,
        plots: vec![(
            "ratio",
            plot::line_plot(
                "sketched over optimal residual",
                "sketch dimension",
                "ratio",
                &[("mean ratio", ratio_pts)],
            ),
        )],
    })
}

fn run_randomized_svd(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let kind = parse_family(cfg.get_str("family"))?;
    let n = cfg.get_usize("n");
    let m = cfg.get_usize("m");
    let decay = cfg.get_f64("decay");
    let extra = cfg.get_usize("extra");
    let zeta = cfg.get_usize("zeta");

    let mut rng = trial_rng(cfg.seed, 0);
    let u = haar_orthogonal(&mut rng, n);
    let v = haar_orthogonal(&mut rng, m);
    let p = n.min(m);
    // A = U diag(j^-decay) V^T restricted to the leading p directions.
    let mut us = DenseMatrix::zeros(n, p);
    for j in 0..p {
        let sigma = ((j + 1) as f64).powf(-decay);
        let col: Vec<f64> = (0..n).map(|i| sigma * u.get(i, j)).collect();
        us.set_col(j, &col);
    }
    let vp = v.select_columns(&(0..p).collect::<Vec<_>>());
    let a = us.matmul(&vp.transpose());

    let mut rows = Vec::new();
    let mut err_pts = Vec::new();
    for r in cfg.get_usize_list("r_list") {
        let k = r + extra;
        let op = make_sketch(kind, m, k, zeta, cfg.seed.wrapping_add(r as u64))?;
        let res = randomized_svd(&a, &op, r)?;
        rows.push(vec![
            r.to_string(),
            k.to_string(),
            fmt(res.absolute_error),
            fmt(res.error_ratio),
        ]);
        err_pts.push((r as f64, log10_clamped(res.absolute_error)));
    }
    Ok(ExperimentOutput {
        header: vec!["r", "k", "absolute_error", "error_ratio"],
        rows,
        plots: vec![(
            "error",
            plot::line_plot(
                "low-rank approximation error (log10)",
                "target rank",
                "log10 error",
                &[("error", err_pts)],
            ),
        )],
    })
}

fn run_cssp_quasi(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let n = cfg.get_usize("n");
    if n > 12 {
        return Err(Error::InvalidArgument(
            "exhaustive oracle limited to n <= 12".into(),
        ));
    }
    let a = match cfg.get_str("fixture") {
        "hilbert" => hilbert_matrix(n),
        "kahan" => kahan_matrix(n, cfg.get_f64("theta"), cfg.get_f64("stagger")),
        "rbf" => rbf_kernel_1d(n, cfg.get_f64("lengthscale")),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown fixture '{other}' (use hilbert, kahan, or rbf)"
            )))
        }
    };
    let norm = match cfg.get_str("norm") {
        "fro" => CsspNorm::Frobenius,
        "spectral" => CsspNorm::Spectral,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown norm '{other}' (use fro or spectral)"
            )))
        }
    };

    let mut rows = Vec::new();
    let mut ratio_pts = Vec::new();
    for k in cfg.get_usize_list("k_list") {
        let selected = cpqr_select(&a, k)?;
        let best = brute_cssp(&a, k, norm)?;
        let (sel_res, best_res) = match norm {
            CsspNorm::Frobenius => (selected.residual_fro, best.residual_fro),
            CsspNorm::Spectral => (selected.residual_spectral, best.residual_spectral),
        };
        let ratio = if best_res > 1e-14 * a.max_abs() {
            sel_res / best_res
        } else {
            1.0
        };
        rows.push(vec![k.to_string(), fmt(sel_res), fmt(best_res), fmt(ratio)]);
        ratio_pts.push((k as f64, ratio));
    }
    Ok(ExperimentOutput {
        header: vec!["k", "selected_residual", "optimal_residual", "ratio"],
        rows,
        plots: vec![(
            "ratio",
            plot::line_plot(
                "selection quasi-optimality",
                "selection size",
                "ratio",
                &[("ratio", ratio_pts)],
            ),
        )],
    })
}

fn run_dlr_kernel(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let grid = KernelGrid::fermionic_default(cfg.get_f64("cutoff"))?;
    let scale = grid.matrix.max_abs().max(f64::MIN_POSITIVE);

    let mut rows = Vec::new();
    let mut decay_pts = Vec::new();
    for k in cfg.get_usize_list("k_list") {
        let cross = gecp_cross(&grid.matrix, k)?;
        let resid = grid.matrix.add_scaled(-1.0, &cross.dense());
        rows.push(vec![
            k.to_string(),
            cross.achieved_rank.to_string(),
            fmt(cross.max_residual),
            fmt(cross.max_residual / scale),
            fmt(resid.frobenius_norm()),
        ]);
        decay_pts.push((k as f64, log10_clamped(cross.max_residual / scale)));
    }
    Ok(ExperimentOutput {
        header: vec![
            "k",
            "achieved_rank",
            "max_residual",
            "relative_residual",
            "fro_residual",
        ],
        rows,
        plots: vec![(
            "decay",
            plot::line_plot(
                "cross-approximation error (log10)",
                "rank",
                "log10 relative error",
                &[("max residual", decay_pts)],
            ),
        )],
    })
}

fn run_nystrom_submod(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let n = cfg.get_usize("n");
    let gamma = cfg.get_f64("gamma");
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    // Path-graph Laplacian, regularized and inverted.
    let lap = DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            if i == 0 || i == n - 1 {
                1.0
            } else {
                2.0
            }
        } else if i.abs_diff(j) == 1 {
            -1.0
        } else {
            0.0
        }
    });
    let kmat = crate::qr::inverse(&lap.shift_identity(gamma))?;

    let order = pivoted_cholesky(&kmat, n)?.selection.indices;
    let steps = cfg.get_usize("steps").min(order.len());
    let mut prev = (0..n).map(|i| kmat.get(i, i)).sum::<f64>();
    let mut rows = Vec::new();
    let mut gain_pts = Vec::new();
    for s in 1..=steps {
        let err = nystrom_error(&kmat, &order[..s], NystromNorm::Nuclear)?;
        let gain = prev - err;
        rows.push(vec![
            s.to_string(),
            order[s - 1].to_string(),
            fmt(err),
            fmt(gain),
        ]);
        gain_pts.push((s as f64, gain));
        prev = err;
    }
    Ok(ExperimentOutput {
        header: vec!["step", "index", "nuclear_error", "marginal_gain"],
        rows,
        plots: vec![(
            "gains",
            plot::line_plot(
                "marginal gains along the pivot path",
                "step",
                "gain",
                &[("gain", gain_pts)],
            ),
        )],
    })
}

fn run_volume_gap(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let n = cfg.get_usize("n");
    let p = cfg.get_f64("p");
    let trials = cfg.get_usize("trials");
    let lambda: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-p)).collect();

    let mut rows = Vec::new();
    let mut worst_pts = Vec::new();
    let mut volume_pts = Vec::new();
    for k in cfg.get_usize_list("k_list") {
        let gap = trace_cssp_worst_vs_volume(&lambda, k, trials, cfg.seed)?;
        rows.push(vec![
            k.to_string(),
            fmt(gap.x_hat),
            fmt(gap.y_k),
            fmt(gap.gap),
        ]);
        worst_pts.push((k as f64, gap.x_hat));
        volume_pts.push((k as f64, gap.y_k));
    }
    Ok(ExperimentOutput {
        header: vec!["k", "worst_case", "volume_objective", "gap"],
        rows,
        plots: vec![(
            "objectives",
            plot::line_plot(
                "worst-case trace vs volume objective",
                "subset size",
                "value",
                &[("worst case", worst_pts), ("volume", volume_pts)],
            ),
        )],
    })
}

fn run_shattering(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let n = cfg.get_usize("n");
    let delta = cfg.get_f64("delta");
    let a = match cfg.get_str("matrix") {
        "jordan" => DenseMatrix::from_fn(n, n, |i, j| if j == i + 1 { 1.0 } else { 0.0 }),
        "diag" => DenseMatrix::diag_from(&(1..=n).map(|i| i as f64).collect::<Vec<_>>()),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown base matrix '{other}' (use jordan or diag)"
            )))
        }
    };
    let report = shattering_experiment(&a, delta, cfg.get_usize("trials"), cfg.seed)?;

    let log_ratio = if delta > 0.0 {
        (n as f64 / delta).ln()
    } else {
        0.0
    };
    let rows = report
        .kappa_values
        .iter()
        .enumerate()
        .map(|(i, &kappa)| {
            let exponent = if kappa.is_finite() && kappa >= 1.0 && log_ratio > 0.0 {
                fmt(kappa.ln() / log_ratio)
            } else {
                String::new()
            };
            vec![i.to_string(), fmt(kappa), exponent]
        })
        .collect();
    let finite: Vec<f64> = report
        .kappa_values
        .iter()
        .filter(|v| v.is_finite())
        .map(|&v| log10_clamped(v))
        .collect();
    Ok(ExperimentOutput {
        header: vec!["rank", "kappa", "exponent"],
        rows,
        plots: vec![(
            "spread",
            plot::histogram("eigenvalue condition spread", "log10 kappa", &finite, 20),
        )],
    })
}

fn run_minami_gap(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let n = cfg.get_usize("n");
    let delta = cfg.get_f64("delta");
    let dist = match cfg.get_str("dist") {
        "uniform" => NoiseDistribution::Uniform,
        "gaussian" => NoiseDistribution::Gaussian,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown noise law '{other}' (use uniform or gaussian)"
            )))
        }
    };
    let t = DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0
        } else if i.abs_diff(j) == 1 {
            -1.0
        } else {
            0.0
        }
    });
    let report = minami_gap_experiment(&t, delta, dist, cfg.get_usize("trials"), cfg.seed)?;

    let log_ratio = if delta > 0.0 && n > 0 {
        (delta / n as f64).ln()
    } else {
        0.0
    };
    let rows = report
        .gaps
        .iter()
        .enumerate()
        .map(|(i, &gap)| {
            let exponent = if gap > 0.0 && log_ratio < 0.0 && gap < 1.0 {
                fmt(gap.ln() / log_ratio)
            } else {
                String::new()
            };
            vec![i.to_string(), fmt(gap), exponent]
        })
        .collect();
    Ok(ExperimentOutput {
        header: vec!["rank", "gap", "exponent"],
        rows,
        plots: vec![(
            "gaps",
            plot::histogram("smallest-gap distribution", "gap", &report.gaps, 20),
        )],
    })
}

fn run_sign_error(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let base = CompositionScheme::parse(cfg.get_str("scheme"))?;
    if base.stages.is_empty() {
        return Err(Error::InvalidArgument("scheme must have at least one stage".into()));
    }
    let delta = cfg.get_f64("delta");
    let reps = cfg.get_usize("reps");
    let grid = cfg.get_usize("grid");

    let mut rows = Vec::new();
    let mut sup_pts = Vec::new();
    let mut pos_pts = Vec::new();
    for t in 1..=reps {
        let comp = CompositionScheme::repeated(&base.stages, t);
        let report = sign_error(&comp, delta, grid)?;
        let cost = comp.cost();
        rows.push(vec![
            t.to_string(),
            cost.to_string(),
            fmt(report.sup_error),
            fmt(report.positive_error),
            fmt(report.negative_error),
            report.alternations.to_string(),
        ]);
        sup_pts.push((cost as f64, log10_clamped(report.sup_error)));
        pos_pts.push((cost as f64, log10_clamped(report.positive_error)));
    }
    Ok(ExperimentOutput {
        header: vec![
            "reps",
            "cost",
            "sup_error",
            "positive_error",
            "negative_error",
            "alternations",
        ],
        rows,
        plots: vec![(
            "convergence",
            plot::line_plot(
                "sign-approximation error (log10)",
                "matrix-multiplication cost",
                "log10 error",
                &[("sup", sup_pts), ("positive side", pos_pts)],
            ),
        )],
    })
}

fn run_tt_quasi(cfg: &ResolvedConfig) -> Result<ExperimentOutput> {
    let dims = cfg.get_usize_list("dims");
    let ranks = cfg.get_usize_list("ranks");
    if dims.len() < 2 {
        return Err(Error::InvalidArgument("need at least two tensor modes".into()));
    }
    if ranks.len() != dims.len() - 1 {
        return Err(Error::InvalidArgument(format!(
            "{} modes need {} ranks, got {}",
            dims.len(),
            dims.len() - 1,
            ranks.len()
        )));
    }
    let trials = cfg.get_usize("trials");
    let total: usize = dims.iter().product();

    let mut rows = Vec::new();
    let mut sweep_pts = Vec::new();
    let mut refined_pts = Vec::new();
    for t in 0..trials {
        let mut rng = trial_rng(cfg.seed, t as u64);
        let x = DenseTensor::from_values(dims.clone(), normal_vec(&mut rng, total))?;
        let probe = tt_quasi_opt_probe(&x, &ranks)?;
        rows.push(vec![
            t.to_string(),
            fmt(probe.sweep_ratio),
            fmt(probe.refined_ratio),
            probe.sweeps_used.to_string(),
        ]);
        sweep_pts.push((t as f64, probe.sweep_ratio));
        refined_pts.push((t as f64, probe.refined_ratio));
    }
    Ok(ExperimentOutput {
        header: vec!["trial", "sweep_ratio", "refined_ratio", "sweeps_used"],
        rows,
        plots: vec![(
            "ratios",
            plot::line_plot(
                "error over rank-constrained lower bound",
                "trial",
                "ratio",
                &[("sweep", sweep_pts), ("refined", refined_pts)],
            ),
        )],
    })
}
