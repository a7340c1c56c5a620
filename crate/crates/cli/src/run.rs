//! Experiment runners for the `deconv` and `ct` commands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use priorkryl::diagnostics::{
    c_orthogonality_angles, nullspace_projector, priorconditioned_matrix, DiagnosticsInputs, DiagnosticsReport,
    NullspaceProjector, SpectralData,
};
use priorkryl::metrics::{ssim, SsimParams};
use priorkryl::operators::{DenseMatrix, LinearOperator, SparseMatrix};
use priorkryl::priors::{build_second_order_prior, build_whittle_matern_prior, GaussianPrior};
use priorkryl::problems::{
    build_ct_matrix, build_deconv_problem, pgm, sinogram_image, synthesize_sinogram, CtGeometry, DeconvSpec, Phantom,
};
use priorkryl::solvers::{cgls_solve, pcgls_solve, IterationTrace, ObservationModel, SolveOptions};

use crate::config::{ExperimentConfig, ProblemKind};
use crate::error::{lib_err, CliError};
use crate::output::{create_dir, real, write_csv, write_image_csv, write_json};
use crate::report::{OrthIndex, RunReport, Timings};

/// Problems above this many unknowns skip the principal-angle computation.
pub const ORTH_INDEX_LIMIT: usize = 1000;

/// Forward operator of either experiment.
#[derive(Debug, Clone)]
pub enum ForwardOp {
    Dense(DenseMatrix<f64>),
    Sparse(SparseMatrix<f64>),
}

impl ForwardOp {
    pub fn to_dense(&self) -> DenseMatrix<f64> {
        match self {
            Self::Dense(a) => a.clone(),
            Self::Sparse(a) => a.to_dense(),
        }
    }
}

impl LinearOperator<f64> for ForwardOp {
    fn nrows(&self) -> usize {
        match self {
            Self::Dense(a) => a.nrows(),
            Self::Sparse(a) => a.nrows(),
        }
    }
    fn ncols(&self) -> usize {
        match self {
            Self::Dense(a) => a.ncols(),
            Self::Sparse(a) => a.ncols(),
        }
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        match self {
            Self::Dense(a) => a.apply_into(x, y),
            Self::Sparse(a) => a.apply_into(x, y),
        }
    }
    fn apply_adjoint_into(&self, u: &[f64], y: &mut [f64]) {
        match self {
            Self::Dense(a) => a.apply_adjoint_into(u, y),
            Self::Sparse(a) => a.apply_adjoint_into(u, y),
        }
    }
}

/// CT-specific pieces of an instance.
#[derive(Debug, Clone)]
pub struct CtData {
    pub geometry: CtGeometry,
    pub phantom: Phantom<f64>,
    pub clean: Vec<f64>,
}

/// A fully built experiment: data, operator, prior and ground truth.
#[derive(Debug, Clone)]
pub struct Instance {
    pub model: ObservationModel<f64, ForwardOp>,
    pub prior: GaussianPrior<f64>,
    pub truth: Vec<f64>,
    pub ct: Option<CtData>,
    /// Values derived while building, echoed as comments in `resolved_config`.
    pub notes: Vec<String>,
}

/// Noise-free data still needs a positive model σ; this one makes the threshold vanish.
const NOISE_FREE_SIGMA: f64 = f64::MIN_POSITIVE;

fn model_sigma(sigma: f64) -> f64 {
    if sigma == 0.0 {
        NOISE_FREE_SIGMA
    } else {
        sigma
    }
}

/// Builds the problem described by `cfg`; deterministic in `(cfg, seed)`.
pub fn build_instance(cfg: &ExperimentConfig) -> Result<Instance, CliError> {
    cfg.validate()?;
    match cfg.problem {
        ProblemKind::Deconv => build_deconv(cfg),
        ProblemKind::Ct => build_ct(cfg),
    }
}

fn build_deconv(cfg: &ExperimentConfig) -> Result<Instance, CliError> {
    let sigma = cfg.sigma.unwrap_or(5e-5);
    let spec = DeconvSpec {
        n: cfg.n,
        m: cfg.m,
        kappa: cfg.kappa,
        t_points: cfg.t_points.clone(),
        truth: cfg.truth.clone(),
        sigma,
        seed: cfg.seed,
    };
    let (problem, model) = build_deconv_problem::<f64>(&DeconvSpec {
        sigma: model_sigma(sigma),
        ..spec
    })
    .map_err(lib_err("problems"))?;
    let b = if sigma == 0.0 { problem.clean_data.clone() } else { model.b };
    let (p1d, prior) = build_second_order_prior(cfg.n, cfg.beta, cfg.alpha).map_err(lib_err("priors"))?;
    let model = ObservationModel::new(ForwardOp::Dense(model.op), b, model.sigma).map_err(lib_err("solvers"))?;
    Ok(Instance {
        model,
        prior,
        truth: problem.truth,
        ct: None,
        notes: vec![format!("alpha in use: {}", p1d.alpha)],
    })
}

fn load_phantom(cfg: &ExperimentConfig) -> Result<Phantom<f64>, CliError> {
    let Some(path) = &cfg.phantom_path else {
        return Ok(Phantom::synthetic(cfg.n));
    };
    let img = pgm::read_pgm(path).map_err(|e| CliError::Input(e.to_string()))?;
    if img.width != cfg.n || img.height != cfg.n {
        return Err(CliError::Input(format!(
            "phantom {} is {}×{}, expected {n}×{n}",
            path.display(),
            img.width,
            img.height,
            n = cfg.n
        )));
    }
    Phantom::new(cfg.n, img.data).map_err(|e| CliError::Input(e.to_string()))
}

fn build_ct(cfg: &ExperimentConfig) -> Result<Instance, CliError> {
    let geometry = cfg.geometry()?;
    let phantom = load_phantom(cfg)?;
    let a = build_ct_matrix::<f64>(&geometry, cfg.ct_scale).map_err(lib_err("problems"))?;
    let clean = a.apply(phantom.pixels()).map_err(lib_err("problems"))?;
    let peak = clean.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let sigma = cfg.sigma.unwrap_or(cfg.sigma_rel * peak);
    let mut notes = vec![format!("sigma in use: {sigma}")];
    if cfg.phantom_path.is_none() {
        notes.push("phantom: built-in synthetic disc and bars".into());
    }
    let (op, b, model_sigma) = if sigma == 0.0 {
        (a, clean.clone(), NOISE_FREE_SIGMA)
    } else {
        let sino = synthesize_sinogram(&phantom, &geometry, a, sigma, cfg.seed).map_err(lib_err("problems"))?;
        (sino.model.op, sino.model.b, sigma)
    };
    let (_, prior) =
        build_whittle_matern_prior(cfg.n, cfg.lambda, cfg.laplacian_scaling).map_err(lib_err("priors"))?;
    let model = ObservationModel::new(ForwardOp::Sparse(op), b, model_sigma).map_err(lib_err("solvers"))?;
    Ok(Instance {
        model,
        prior,
        truth: phantom.pixels().to_vec(),
        ct: Some(CtData {
            geometry,
            phantom,
            clean,
        }),
        notes,
    })
}

/// Solver options used by every run.
pub fn solve_options(cfg: &ExperimentConfig) -> SolveOptions {
    SolveOptions {
        tau: cfg.tau,
        max_iter: cfg.max_iter,
        record_basis: cfg.diagnostics,
        record_iterates: true,
    }
}

/// Runs the named solver (`cgls` or `pcgls`).
pub fn solve(inst: &Instance, name: &str, opts: &SolveOptions) -> Result<(Vec<f64>, IterationTrace<f64>), CliError> {
    match name {
        "cgls" => cgls_solve(&inst.model, opts),
        "pcgls" => pcgls_solve(&inst.model, &inst.prior, opts),
        other => unreachable!("unknown solver {other}"),
    }
    .map_err(lib_err("solvers"))
}

/// Dense spectral data shared by the diagnostics of both solvers.
pub struct Analysis {
    pub dense: DenseMatrix<f64>,
    pub projector: NullspaceProjector<f64>,
    pub spectral_plain: SpectralData<f64>,
    pub spectral_prior: SpectralData<f64>,
    pub orth_plain: Option<(f64, f64)>,
    pub orth_prior: Option<(f64, f64)>,
}

impl Analysis {
    pub fn new(inst: &Instance) -> Result<Self, CliError> {
        let dense = inst.model.op.to_dense();
        let projector = nullspace_projector(&dense).map_err(lib_err("diagnostics"))?;
        let spectral_plain = SpectralData::from_matrix(&dense).map_err(lib_err("diagnostics"))?;
        let tilde = priorconditioned_matrix(&dense, &inst.prior).map_err(lib_err("diagnostics"))?;
        let spectral_prior = SpectralData::from_matrix(&tilde).map_err(lib_err("diagnostics"))?;
        let (orth_plain, orth_prior) = if dense.cols() <= ORTH_INDEX_LIMIT {
            let identity = GaussianPrior::identity(dense.cols());
            (
                c_orthogonality_angles(&dense, &identity).ok(),
                c_orthogonality_angles(&dense, &inst.prior).ok(),
            )
        } else {
            (None, None)
        };
        Ok(Self {
            dense,
            projector,
            spectral_plain,
            spectral_prior,
            orth_plain,
            orth_prior,
        })
    }

    pub fn for_solver(&self, name: &str) -> (&SpectralData<f64>, Option<(f64, f64)>) {
        if name == "pcgls" {
            (&self.spectral_prior, self.orth_prior)
        } else {
            (&self.spectral_plain, self.orth_plain)
        }
    }

    pub fn report(&self, name: &str, trace: &IterationTrace<f64>) -> Result<DiagnosticsReport<f64>, CliError> {
        let (spectral, orth) = self.for_solver(name);
        DiagnosticsReport::build(
            trace,
            &DiagnosticsInputs {
                spectral,
                projector: Some(&self.projector),
                orth_index: orth,
            },
        )
        .map_err(lib_err("diagnostics"))
    }
}

/// Output of one solver.
#[derive(Debug, Clone)]
pub struct SolverRun {
    pub name: &'static str,
    pub solution: Vec<f64>,
    pub trace: IterationTrace<f64>,
    pub report: RunReport,
}

/// Result of a `deconv` or `ct` command.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub runs: Vec<SolverRun>,
}

impl RunOutcome {
    pub fn get(&self, name: &str) -> Option<&SolverRun> {
        self.runs.iter().find(|r| r.name == name)
    }
}

fn base_report(trace: &IterationTrace<f64>) -> RunReport {
    RunReport {
        stop_index: trace.iterations(),
        stop_reason: trace.stop_reason.as_str().to_string(),
        discrepancy_history: trace.discrepancy_norms.clone(),
        nullspace_fractions: None,
        ritz_history: None,
        eigen_projections: None,
        xi_history: None,
        bound_margins: None,
        ssim_mean: None,
        orth_index: None,
        timings: None,
    }
}

fn attach(report: &mut RunReport, d: DiagnosticsReport<f64>) {
    let mut ritz = vec![Vec::new()];
    ritz.extend(d.ritz_history);
    report.nullspace_fractions = Some(d.nullspace_fractions);
    report.ritz_history = Some(ritz);
    report.eigen_projections = Some(d.eigen_projections);
    report.xi_history = Some(d.xi_history);
    report.bound_margins = Some(d.bound_margins);
    report.orth_index = d.orth_index_min.zip(d.orth_index_max).map(|(min, max)| OrthIndex { min, max });
}

fn write_trace(dir: &Path, trace: &IterationTrace<f64>) -> Result<(), CliError> {
    write_csv(
        &dir.join("iterates.csv"),
        &["iter", "index", "value"],
        trace.iterates.iter().enumerate().flat_map(|(k, x)| {
            x.iter()
                .enumerate()
                .map(move |(i, &v)| vec![k.to_string(), i.to_string(), real(v)])
        }),
    )?;
    write_csv(
        &dir.join("residuals.csv"),
        &["iter", "discrepancy", "normal_residual", "threshold"],
        trace
            .discrepancy_norms
            .iter()
            .zip(&trace.nres_norms)
            .enumerate()
            .map(|(k, (&d, &r))| vec![k.to_string(), real(d), real(r), real(trace.threshold)]),
    )
}

/// Runs the experiment in `cfg` and writes every artifact below `cfg.output_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let start = Instant::now();
    let inst = build_instance(cfg)?;
    let out = cfg.output_dir.clone();
    create_dir(&out)?;
    std::fs::write(out.join("resolved_config"), cfg.to_resolved(&inst.notes))
        .map_err(crate::error::out_err(&out))?;

    let mut pgm_bounds = serde_json::Map::new();
    if cfg.problem == ProblemKind::Deconv {
        write_csv(
            &out.join("truth.csv"),
            &["index", "value"],
            inst.truth.iter().enumerate().map(|(i, &v)| vec![i.to_string(), real(v)]),
        )?;
    }
    if let Some(ct) = &inst.ct {
        let g = &ct.geometry;
        write_pgm_recorded(&out, "phantom.pgm", g.n, g.n, ct.phantom.pixels(), &mut pgm_bounds)?;
        let sino = sinogram_image(g, &inst.model.b).map_err(lib_err("problems"))?;
        write_pgm_recorded(&out, "sinogram.pgm", g.n_theta, g.n_s, sino.as_slice(), &mut pgm_bounds)?;
        write_csv(
            &out.join("sinogram.csv"),
            &["offset_index", "angle_index", "value"],
            (0..g.n_s).flat_map(|k| {
                let sino = &sino;
                (0..g.n_theta).map(move |j| vec![k.to_string(), j.to_string(), real(sino[(k, j)])])
            }),
        )?;
    }
    let setup = start.elapsed().as_secs_f64();

    let analysis_start = Instant::now();
    let analysis = cfg.diagnostics.then(|| Analysis::new(&inst)).transpose()?;
    let analysis_time = analysis_start.elapsed().as_secs_f64();

    let opts = solve_options(cfg);
    let mut runs = Vec::new();
    for &name in cfg.solver.names() {
        let t = Instant::now();
        let (x, trace) = solve(&inst, name, &opts)?;
        let solve_time = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let mut report = base_report(&trace);
        if let Some(a) = &analysis {
            attach(&mut report, a.report(name, &trace)?);
        }
        let dir = out.join(name);
        create_dir(&dir)?;
        write_trace(&dir, &trace)?;
        if let Some(ct) = &inst.ct {
            let n = ct.geometry.n;
            let original = DenseMatrix::from_row_major(n, n, ct.phantom.pixels().to_vec()).map_err(lib_err("metrics"))?;
            let rec = DenseMatrix::from_row_major(n, n, x.clone()).map_err(lib_err("metrics"))?;
            let params = SsimParams {
                dynamic_range: cfg.ssim_range,
                ..SsimParams::default()
            };
            match ssim(&original, &rec, &params) {
                Ok(s) => {
                    report.ssim_mean = Some(s.mean);
                    write_pgm_recorded(&out, &format!("{name}/ssim_map.pgm"), n, n, s.map.as_slice(), &mut pgm_bounds)?;
                    write_image_csv(&dir.join("ssim_map.csv"), n, s.map.as_slice())?;
                }
                // A constant phantom has no dynamic range; SSIM is then undefined.
                Err(priorkryl::Error::InvalidArgument(_)) => {}
                Err(e) => return Err(lib_err("metrics")(e)),
            }
            write_pgm_recorded(&out, &format!("{name}/reconstruction.pgm"), n, n, &x, &mut pgm_bounds)?;
            write_image_csv(&dir.join("reconstruction.csv"), n, &x)?;
        }
        if cfg.timings {
            report.timings = Some(Timings {
                setup,
                solve: solve_time,
                diagnostics: t.elapsed().as_secs_f64() + analysis_time,
            });
        }
        write_json(&dir.join("report.json"), &report)?;
        runs.push(SolverRun {
            name,
            solution: x,
            trace,
            report,
        });
    }
    if !pgm_bounds.is_empty() {
        write_json(&out.join("pgm_scaling.json"), &pgm_bounds)?;
    }
    Ok(RunOutcome { out_dir: out, runs })
}

fn write_pgm_recorded(
    out: &Path,
    rel: &str,
    width: usize,
    height: usize,
    data: &[f64],
    bounds: &mut serde_json::Map<String, serde_json::Value>,
) -> Result<(), CliError> {
    let (lo, hi) = pgm::write_pgm(&out.join(rel), width, height, data).map_err(|e| CliError::Output(e.to_string()))?;
    bounds.insert(rel.to_string(), serde_json::json!({ "min": lo, "max": hi }));
    Ok(())
}
