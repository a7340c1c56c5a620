//! Flat `key = value` experiment configuration.
//!
//! Blank lines and text after `#` are ignored. Every key may appear once; keys that do not
//! belong to the selected problem are errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use priorkryl::metrics::DynamicRange;
use priorkryl::priors::{AlphaChoice, LaplacianScaling};
use priorkryl::problems::{CtEntryScale, CtGeometry, KernelPreset, TruthSpec};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Deconv,
    Ct,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Deconv => "deconv",
            Self::Ct => "ct",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    Cgls,
    Pcgls,
    Both,
}

impl SolverChoice {
    pub fn names(self) -> &'static [&'static str] {
        match self {
            Self::Cgls => &["cgls"],
            Self::Pcgls => &["pcgls"],
            Self::Both => &["cgls", "pcgls"],
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Self::Cgls => "cgls",
            Self::Pcgls => "pcgls",
            Self::Both => "both",
        }
    }
}

/// Settings of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    pub solver: SolverChoice,
    pub n: usize,
    pub m: usize,
    pub preset: KernelPreset,
    pub kappa: f64,
    pub t_points: Option<Vec<f64>>,
    pub truth: TruthSpec,
    pub n_theta: usize,
    pub n_s: usize,
    pub lambda: f64,
    pub laplacian_scaling: LaplacianScaling,
    pub ct_scale: CtEntryScale,
    pub phantom_path: Option<PathBuf>,
    /// Absolute noise level; for CT, `None` means `sigma_rel` times the largest clean datum.
    pub sigma: Option<f64>,
    pub sigma_rel: f64,
    pub tau: f64,
    pub seed: u64,
    pub max_iter: usize,
    pub alpha: AlphaChoice,
    pub beta: f64,
    pub output_dir: PathBuf,
    pub diagnostics: bool,
    pub timings: bool,
    pub ssim_range: DynamicRange,
}

const COMMON_KEYS: &[&str] = &[
    "problem",
    "solver",
    "n",
    "sigma",
    "tau",
    "seed",
    "max_iter",
    "output_dir",
    "diagnostics",
    "timings",
];
const DECONV_KEYS: &[&str] = &[
    "m",
    "preset",
    "kappa",
    "t_points",
    "truth",
    "truth_center",
    "truth_steepness",
    "truth_value",
    "alpha",
    "beta",
];
const CT_KEYS: &[&str] = &[
    "n_theta",
    "n_s",
    "lambda",
    "laplacian_scaling",
    "ct_scale",
    "phantom_path",
    "sigma_rel",
    "ssim_range",
];

/// Problem sizes above which dense diagnostics are refused (`m·n` entries).
pub const DENSE_DIAGNOSTICS_LIMIT: usize = 4_000_000;

impl ExperimentConfig {
    pub fn defaults(problem: ProblemKind) -> Self {
        let deconv = problem == ProblemKind::Deconv;
        Self {
            problem,
            solver: SolverChoice::Both,
            n: if deconv { 150 } else { 64 },
            m: 6,
            preset: KernelPreset::Paper,
            kappa: KernelPreset::Paper.kappa(),
            t_points: None,
            truth: TruthSpec::default(),
            n_theta: 10,
            n_s: 24,
            lambda: 4.0,
            laplacian_scaling: LaplacianScaling::Pixel,
            ct_scale: CtEntryScale::Paper,
            phantom_path: None,
            sigma: deconv.then_some(5e-5),
            sigma_rel: 0.01,
            tau: 1.2,
            seed: 0,
            max_iter: 500,
            alpha: AlphaChoice::Auto,
            beta: 1.0,
            output_dir: PathBuf::from(format!("priorkryl-{}", problem.as_str())),
            diagnostics: true,
            timings: false,
            ssim_range: DynamicRange::MaxMinusMin,
        }
    }

    /// Switches the CT geometry to 160×160 pixels, 20 angles and 60 offsets. Dense
    /// diagnostics are turned off unless the config requested them.
    pub fn apply_full_preset(&mut self, diagnostics_explicit: bool) {
        let g = CtGeometry::full();
        self.n = g.n;
        self.n_theta = g.n_theta;
        self.n_s = g.n_s;
        if !diagnostics_explicit {
            self.diagnostics = false;
        }
    }

    pub fn geometry(&self) -> Result<CtGeometry, CliError> {
        CtGeometry::new(self.n, self.n_theta, self.n_s).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if !(self.tau >= 1.0) || !self.tau.is_finite() {
            return bad(format!("tau must be at least 1, got {}", self.tau));
        }
        if self.max_iter == 0 {
            return bad("max_iter must be positive".into());
        }
        if let Some(s) = self.sigma {
            if !(s >= 0.0) || !s.is_finite() {
                return bad(format!("sigma must be nonnegative, got {s}"));
            }
        }
        match self.problem {
            ProblemKind::Deconv => {
                if self.m == 0 || self.m >= self.n {
                    return bad(format!("need 0 < m < n, got m = {}, n = {}", self.m, self.n));
                }
                if !(self.kappa > 0.0) || !self.kappa.is_finite() {
                    return bad(format!("kappa must be positive, got {}", self.kappa));
                }
                if !(self.beta > 0.0) || !self.beta.is_finite() {
                    return bad(format!("beta must be positive, got {}", self.beta));
                }
                if let AlphaChoice::Value(a) = self.alpha {
                    if !(a > 0.0) || !a.is_finite() {
                        return bad(format!("alpha must be positive, got {a}"));
                    }
                }
                if let Some(t) = &self.t_points {
                    if t.len() != self.m {
                        return bad(format!("t_points has {} entries, m = {}", t.len(), self.m));
                    }
                    if let Some(v) = t.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                        return bad(format!("t_points entry {v} outside [0, 1]"));
                    }
                }
                if self.n < 3 {
                    return bad("the second-order prior needs n ≥ 3".into());
                }
            }
            ProblemKind::Ct => {
                self.geometry()?;
                if !(self.lambda > 0.0) || !self.lambda.is_finite() {
                    return bad(format!("lambda must be positive, got {}", self.lambda));
                }
                if !(self.sigma_rel >= 0.0) || !self.sigma_rel.is_finite() {
                    return bad(format!("sigma_rel must be nonnegative, got {}", self.sigma_rel));
                }
            }
        }
        let (m, n) = match self.problem {
            ProblemKind::Deconv => (self.m, self.n),
            ProblemKind::Ct => (self.n_theta * self.n_s, self.n * self.n),
        };
        if self.diagnostics && m * n > DENSE_DIAGNOSTICS_LIMIT {
            return bad(format!(
                "diagnostics need a dense {m}×{n} matrix, above the limit of {DENSE_DIAGNOSTICS_LIMIT} entries; set diagnostics = false"
            ));
        }
        Ok(())
    }

    /// `key = value` lines that reproduce this configuration when parsed again.
    pub fn to_resolved(&self, notes: &[String]) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| writeln!(s, "{k} = {v}").expect("string write");
        kv("problem", self.problem.as_str().into());
        kv("solver", self.solver.as_str().into());
        kv("n", self.n.to_string());
        match self.problem {
            ProblemKind::Deconv => {
                kv("m", self.m.to_string());
                kv(
                    "preset",
                    match self.preset {
                        KernelPreset::Paper => "paper",
                        KernelPreset::Beams => "beams",
                    }
                    .into(),
                );
                kv("kappa", self.kappa.to_string());
                let t = self
                    .t_points
                    .clone()
                    .unwrap_or_else(|| priorkryl::problems::default_t_points(self.m));
                kv("t_points", t.iter().map(f64::to_string).collect::<Vec<_>>().join(", "));
                match &self.truth {
                    TruthSpec::Sigmoid { center, steepness } => {
                        kv("truth", "sigmoid".into());
                        kv("truth_center", center.to_string());
                        kv("truth_steepness", steepness.to_string());
                    }
                    TruthSpec::Constant(c) => {
                        kv("truth", "constant".into());
                        kv("truth_value", c.to_string());
                    }
                    TruthSpec::Values(_) => unreachable!("not expressible in config files"),
                }
                kv(
                    "alpha",
                    match self.alpha {
                        AlphaChoice::Auto => "auto".into(),
                        AlphaChoice::Value(a) => a.to_string(),
                    },
                );
                kv("beta", self.beta.to_string());
            }
            ProblemKind::Ct => {
                kv("n_theta", self.n_theta.to_string());
                kv("n_s", self.n_s.to_string());
                kv("lambda", self.lambda.to_string());
                kv(
                    "laplacian_scaling",
                    match self.laplacian_scaling {
                        LaplacianScaling::Paper => "paper",
                        LaplacianScaling::Standard => "standard",
                        LaplacianScaling::Pixel => "pixel",
                    }
                    .into(),
                );
                kv(
                    "ct_scale",
                    match self.ct_scale {
                        CtEntryScale::Paper => "paper",
                        CtEntryScale::Geometric => "geometric",
                    }
                    .into(),
                );
                if let Some(p) = &self.phantom_path {
                    kv("phantom_path", p.display().to_string());
                }
                kv("sigma_rel", self.sigma_rel.to_string());
                kv(
                    "ssim_range",
                    match self.ssim_range {
                        DynamicRange::MaxMinusMin => "max_minus_min".into(),
                        DynamicRange::Ratio => "ratio".into(),
                        DynamicRange::Fixed(l) => l.to_string(),
                    },
                );
            }
        }
        if let Some(sigma) = self.sigma {
            kv("sigma", sigma.to_string());
        }
        kv("tau", self.tau.to_string());
        kv("seed", self.seed.to_string());
        kv("max_iter", self.max_iter.to_string());
        kv("output_dir", self.output_dir.display().to_string());
        kv("diagnostics", self.diagnostics.to_string());
        kv("timings", self.timings.to_string());
        for note in notes {
            writeln!(s, "# {note}").expect("string write");
        }
        s
    }
}

/// Splits the text into `key → (line, value)`, rejecting malformed lines and duplicates.
fn entries(text: &str) -> Result<BTreeMap<String, (usize, String)>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(CliError::Config(format!("line {}: empty key or value", i + 1)));
        }
        if map.insert(k.to_string(), (i + 1, v.to_string())).is_some() {
            return Err(CliError::Config(format!("line {}: duplicate key `{k}`", i + 1)));
        }
    }
    Ok(map)
}

fn parse_num<V: std::str::FromStr>(key: &str, line: usize, v: &str) -> Result<V, CliError> {
    v.parse()
        .map_err(|_| CliError::Config(format!("line {line}: invalid value `{v}` for `{key}`")))
}

fn parse_bool(key: &str, line: usize, v: &str) -> Result<bool, CliError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(CliError::Config(format!("line {line}: `{key}` must be true or false, got `{v}`"))),
    }
}

fn choice<V: Copy>(key: &str, line: usize, v: &str, options: &[(&str, V)]) -> Result<V, CliError> {
    options.iter().find(|(name, _)| *name == v).map(|(_, o)| *o).ok_or_else(|| {
        let names: Vec<_> = options.iter().map(|(n, _)| *n).collect();
        CliError::Config(format!("line {line}: `{key}` must be one of {}, got `{v}`", names.join(", ")))
    })
}

/// The parsed configuration and the set of keys given explicitly.
pub struct ParsedConfig {
    pub config: ExperimentConfig,
    pub explicit: Vec<String>,
}

/// Parses configuration text for `problem`, filling unspecified keys with defaults.
pub fn parse_config(text: &str, problem: ProblemKind) -> Result<ParsedConfig, CliError> {
    let map = entries(text)?;
    let specific = match problem {
        ProblemKind::Deconv => DECONV_KEYS,
        ProblemKind::Ct => CT_KEYS,
    };
    if let Some((k, (line, _))) = map
        .iter()
        .find(|(k, _)| !COMMON_KEYS.contains(&k.as_str()) && !specific.contains(&k.as_str()))
    {
        return Err(CliError::Config(format!(
            "line {line}: unknown key `{k}` for problem `{}`",
            problem.as_str()
        )));
    }

    let mut c = ExperimentConfig::defaults(problem);
    let get = |k: &str| map.get(k).map(|(l, v)| (*l, v.as_str()));

    if let Some((l, v)) = get("problem") {
        let p = choice("problem", l, v, &[("deconv", ProblemKind::Deconv), ("ct", ProblemKind::Ct)])?;
        if p != problem {
            return Err(CliError::Config(format!(
                "line {l}: config is for `{v}` but the `{}` command was used",
                problem.as_str()
            )));
        }
    }
    if let Some((l, v)) = get("solver") {
        c.solver = choice(
            "solver",
            l,
            v,
            &[("cgls", SolverChoice::Cgls), ("pcgls", SolverChoice::Pcgls), ("both", SolverChoice::Both)],
        )?;
    }
    if let Some((l, v)) = get("n") {
        c.n = parse_num("n", l, v)?;
    }
    if let Some((l, v)) = get("m") {
        c.m = parse_num("m", l, v)?;
    }
    if let Some((l, v)) = get("preset") {
        c.preset = choice("preset", l, v, &[("paper", KernelPreset::Paper), ("beams", KernelPreset::Beams)])?;
        c.kappa = c.preset.kappa();
    }
    if let Some((l, v)) = get("kappa") {
        c.kappa = parse_num("kappa", l, v)?;
    }
    if let Some((l, v)) = get("t_points") {
        c.t_points = Some(
            v.split(',')
                .map(|t| parse_num("t_points", l, t.trim()))
                .collect::<Result<_, _>>()?,
        );
    }
    let truth_kind = get("truth").map(|(l, v)| choice("truth", l, v, &[("sigmoid", 0), ("constant", 1)]));
    match truth_kind.transpose()? {
        Some(1) => {
            let (l, v) = get("truth_value")
                .ok_or_else(|| CliError::Config("`truth = constant` needs `truth_value`".into()))?;
            c.truth = TruthSpec::Constant(parse_num("truth_value", l, v)?);
            if let Some((l, _)) = get("truth_center").or(get("truth_steepness")) {
                return Err(CliError::Config(format!("line {l}: sigmoid parameters given for a constant truth")));
            }
        }
        _ => {
            if let Some((l, _)) = get("truth_value") {
                return Err(CliError::Config(format!("line {l}: `truth_value` needs `truth = constant`")));
            }
            let mut center = 0.5;
            let mut steepness = 15.0;
            if let Some((l, v)) = get("truth_center") {
                center = parse_num("truth_center", l, v)?;
            }
            if let Some((l, v)) = get("truth_steepness") {
                steepness = parse_num("truth_steepness", l, v)?;
            }
            c.truth = TruthSpec::Sigmoid { center, steepness };
        }
    }
    if let Some((l, v)) = get("n_theta") {
        c.n_theta = parse_num("n_theta", l, v)?;
    }
    if let Some((l, v)) = get("n_s") {
        c.n_s = parse_num("n_s", l, v)?;
    }
    if let Some((l, v)) = get("lambda") {
        c.lambda = parse_num("lambda", l, v)?;
    }
    if let Some((l, v)) = get("laplacian_scaling") {
        c.laplacian_scaling = choice(
            "laplacian_scaling",
            l,
            v,
            &[
                ("paper", LaplacianScaling::Paper),
                ("standard", LaplacianScaling::Standard),
                ("pixel", LaplacianScaling::Pixel),
            ],
        )?;
    }
    if let Some((l, v)) = get("ct_scale") {
        c.ct_scale = choice(
            "ct_scale",
            l,
            v,
            &[("paper", CtEntryScale::Paper), ("geometric", CtEntryScale::Geometric)],
        )?;
    }
    if let Some((_, v)) = get("phantom_path") {
        c.phantom_path = Some(PathBuf::from(v));
    }
    if let Some((l, v)) = get("sigma") {
        c.sigma = Some(parse_num("sigma", l, v)?);
    }
    if let Some((l, v)) = get("sigma_rel") {
        c.sigma_rel = parse_num("sigma_rel", l, v)?;
    }
    if let Some((l, v)) = get("tau") {
        c.tau = parse_num("tau", l, v)?;
    }
    if let Some((l, v)) = get("seed") {
        c.seed = parse_num("seed", l, v)?;
    }
    if let Some((l, v)) = get("max_iter") {
        c.max_iter = parse_num("max_iter", l, v)?;
    }
    if let Some((l, v)) = get("alpha") {
        c.alpha = if v.eq_ignore_ascii_case("auto") {
            AlphaChoice::Auto
        } else {
            AlphaChoice::Value(parse_num("alpha", l, v)?)
        };
    }
    if let Some((l, v)) = get("beta") {
        c.beta = parse_num("beta", l, v)?;
    }
    if let Some((_, v)) = get("output_dir") {
        c.output_dir = PathBuf::from(v);
    }
    if let Some((l, v)) = get("diagnostics") {
        c.diagnostics = parse_bool("diagnostics", l, v)?;
    }
    if let Some((l, v)) = get("timings") {
        c.timings = parse_bool("timings", l, v)?;
    }
    if let Some((l, v)) = get("ssim_range") {
        c.ssim_range = match v {
            "max_minus_min" => DynamicRange::MaxMinusMin,
            "ratio" => DynamicRange::Ratio,
            _ => DynamicRange::Fixed(parse_num("ssim_range", l, v)?),
        };
    }
    Ok(ParsedConfig {
        config: c,
        explicit: map.into_keys().collect(),
    })
}
