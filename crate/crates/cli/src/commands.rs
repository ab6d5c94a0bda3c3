use std::path::PathBuf;

use clap::Args;
use diffnorm::halfspace::log_grid;
use diffnorm::symbols::{dilation_conditions, hoelder_conditions, mihlin_norm, tauberian_constant, RadialSampling};
use diffnorm::{
    bessel_norm, boundary_profile, continuous_profile_constant, difference_seminorm, full_difference_norm, inclusion_condition,
    lp_norm, make_grid, multiplier_sweep, randomized_lp_norm, sample, square_difference_norm, strichartz_norm, triebel_norm,
    FunctionDesc, GridSpec, HalfspaceExperiment, Kernel, Levels, MRange, MeanMode, NormMode, NormReport, PhiSequence,
    SampledFunction, SeminormRequest, Symbol, TLevels, TargetSpace, Weight,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::output::{num, Format, Report};
use crate::CliError;

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct GridArgs {
    /// Dimension (1 or 2)
    #[arg(long)]
    pub d: Option<usize>,
    /// Points per axis (power of two)
    #[arg(long)]
    pub n: Option<usize>,
    /// Torus period L
    #[arg(long = "period", short = 'L')]
    pub period: Option<f64>,
}

impl GridArgs {
    fn grid(&self, d: usize, n: usize, period: f64) -> Result<GridSpec, CliError> {
        Ok(make_grid(self.d.unwrap_or(d), self.n.unwrap_or(n), self.period.unwrap_or(period))?)
    }
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputArgs {
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Output file (default: $DIFFNORM_OUT_DIR/<command>.<ext>, else stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl OutputArgs {
    fn format(&self, default: Format) -> Result<Format, CliError> {
        self.format.as_deref().map(Format::parse).unwrap_or(Ok(default))
    }
}

fn parse<T: std::str::FromStr<Err = diffnorm::Error>>(s: &str) -> Result<T, CliError> {
    Ok(s.parse::<T>()?)
}

fn default_kernel(w: &Weight) -> Kernel {
    if w.is_unit() {
        Kernel::IndicatorCube
    } else {
        Kernel::gauss()
    }
}

fn parse_levels(name: &str, j_max: usize) -> Result<Levels, CliError> {
    match name {
        "natural" | "n" => Ok(Levels::Natural { j_max }),
        "integer" | "z" => Ok(Levels::Integer { j_max }),
        _ => Err(CliError::Config(format!("unknown level family '{name}' (expected natural or integer)"))),
    }
}

fn parse_mode(name: &str, trials: usize, seed: u64) -> Result<NormMode, CliError> {
    match name {
        "rademacher" => Ok(NormMode::Rademacher { trials, seed }),
        "square" => Ok(NormMode::Square),
        _ => Err(CliError::Config(format!("unknown estimator '{name}' (expected rademacher or square)"))),
    }
}

fn parse_mean_mode(name: &str) -> Result<MeanMode, CliError> {
    match name {
        "spectral" => Ok(MeanMode::Spectral),
        "spatial" => Ok(MeanMode::Spatial),
        _ => Err(CliError::Config(format!("unknown mean mode '{name}' (expected spectral or spatial)"))),
    }
}

fn report_config<T: Serialize>(args: &T, resolved: Value) -> Value {
    json!({ "args": args, "resolved": resolved })
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct NormArgs {
    /// lp, bessel, triebel, difference, seminorm, square, strichartz, randomized-lp
    #[arg(long)]
    pub norm: Option<String>,
    /// Function descriptor, e.g. gauss, modgauss:1,3, bump:1,0, vec[gauss;gauss:2]
    #[arg(long)]
    pub f: Option<String>,
    /// Sampled function in CSV form (overrides --f)
    #[arg(long)]
    pub f_file: Option<PathBuf>,
    /// scalar or lq:q,M
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Inner exponent of the Triebel-Lizorkin norm
    #[arg(long)]
    pub q: Option<f64>,
    /// Weight descriptor: const:c, power:g, vpow:a,b, bar(s,p)<w>, mod(s,p)<w>, dilate(l)<w>
    #[arg(long)]
    pub w: Option<String>,
    /// Difference order m
    #[arg(long)]
    pub m: Option<usize>,
    /// gauss[:sigma], modgauss:sigma,omega, indicator_cube, plateau, custom:<file>
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long)]
    pub j_max: Option<usize>,
    /// natural or integer
    #[arg(long)]
    pub levels: Option<String>,
    /// rademacher or square
    #[arg(long)]
    pub estimator: Option<String>,
    /// spectral or spatial
    #[arg(long)]
    pub mean_mode: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Plateau radii A < B of the Littlewood-Paley generator
    #[arg(long)]
    pub phi_a: Option<f64>,
    #[arg(long)]
    pub phi_b: Option<f64>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

pub fn norm(a: NormArgs) -> Result<(), CliError> {
    let format = a.output.format(Format::Csv)?;
    let grid = a.grid.grid(1, 1024, 32.0)?;
    let space: TargetSpace = parse(a.space.as_deref().unwrap_or("scalar"))?;
    let which = a.norm.clone().unwrap_or_else(|| "bessel".into());
    let s = a.s.unwrap_or(0.5);
    let p = a.p.unwrap_or(2.0);
    let q = a.q.unwrap_or(2.0);
    let w: Weight = parse(a.w.as_deref().unwrap_or("const:1"))?;
    let m = a.m.unwrap_or(2);
    let kernel = match &a.kernel {
        Some(k) => parse::<Kernel>(k)?,
        None => default_kernel(&w),
    };
    let j_max = a.j_max.unwrap_or(16);
    let trials = a.trials.unwrap_or(1024);
    let seed = a.seed.unwrap_or(0);
    let levels = parse_levels(a.levels.as_deref().unwrap_or("natural"), j_max)?;
    let estimator = parse_mode(a.estimator.as_deref().unwrap_or("rademacher"), trials, seed)?;
    let mean_mode = parse_mean_mode(a.mean_mode.as_deref().unwrap_or("spectral"))?;
    let phi = PhiSequence { a: a.phi_a.unwrap_or(1.0), b: a.phi_b.unwrap_or(1.5), n_max: a.n_max.unwrap_or(16) };
    let phi = diffnorm::make_phi(phi.a, phi.b, phi.n_max)?;
    let (f, source): (SampledFunction, String) = match &a.f_file {
        Some(path) => {
            let file = std::fs::File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            (SampledFunction::read_csv(std::io::BufReader::new(file))?, format!("file:{}", path.display()))
        }
        None => {
            let desc: FunctionDesc = parse(a.f.as_deref().unwrap_or("gauss"))?;
            (sample(&grid, &desc, space)?, desc.to_string())
        }
    };
    let resolved = json!({
        "norm": which, "function": source, "grid": f.grid(), "space": f.space().to_string(), "s": s, "p": p, "q": q,
        "w": w.to_string(), "m": m, "kernel": kernel.to_string(), "levels": levels, "estimator": estimator,
        "mean_mode": mean_mode, "phi": phi,
    });
    let mut req = SeminormRequest::new(s, p, m, w.clone(), kernel.clone());
    req.levels = levels;
    req.estimator = estimator;
    req.mean_mode = mean_mode;
    let report: NormReport = match which.as_str() {
        "lp" => {
            let v = lp_norm(&f, p, &w)?;
            NormReport::new(v, diffnorm::EstimatorKind::ExactSpectral, json!({ "norm": "lp", "p": p, "w": w }))
        }
        "bessel" => bessel_norm(&f, s, p, &w)?,
        "triebel" => triebel_norm(&f, s, p, q, &w, &phi)?,
        "difference" => full_difference_norm(&f, &req)?,
        "seminorm" => difference_seminorm(&f, &req)?,
        "square" => square_difference_norm(&f, s, p, &w, m, &kernel, j_max)?,
        "strichartz" => strichartz_norm(&f, s, p, &w, TLevels::for_grid(f.grid()))?,
        "randomized-lp" => randomized_lp_norm(&f, s, p, &w, &phi, phi.n_max, trials, seed)?,
        other => return Err(CliError::Config(format!("unknown norm '{other}'"))),
    };
    let mut out = Report::new(
        "norm",
        report_config(&a, resolved),
        vec!["norm", "value", "estimator", "std_error", "excluded_levels"],
    );
    out.meta.push(("params".into(), report.params.clone()));
    out.meta.push(("curve".into(), Value::Array(report.curve.iter().map(|&v| num(v)).collect())));
    out.rows.push(vec![
        json!(which),
        num(report.value),
        serde_json::to_value(report.estimator).expect("estimator"),
        report.std_error.map(num).unwrap_or(Value::Null),
        json!(report.excluded_levels.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(" ")),
    ]);
    out.detail = Some(serde_json::to_value(&report).map_err(|e| CliError::Io(e.to_string()))?);
    out.emit(format, a.output.out.clone())
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepArgs {
    /// Smoothness values, comma separated
    #[arg(long, value_delimiter = ',')]
    pub s: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Weight descriptors (repeat the flag)
    #[arg(long)]
    pub w: Option<Vec<String>>,
    /// Kernels (repeat the flag); default indicator_cube for w = 1, gauss otherwise
    #[arg(long)]
    pub kernel: Option<Vec<String>>,
    /// Base corpus functions (repeat the flag; an empty string gives an empty corpus)
    #[arg(long)]
    pub corpus: Option<Vec<String>>,
    /// Dilation factors applied to every corpus member
    #[arg(long, value_delimiter = ',')]
    pub dilations: Option<Vec<f64>>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub j_max: Option<usize>,
    #[arg(long)]
    pub levels: Option<String>,
    #[arg(long)]
    pub estimator: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

pub fn default_corpus(seed: u64) -> Vec<String> {
    vec!["gauss:1".into(), "modgauss:0.5,3".into(), "bump:2,0".into(), format!("randband:{seed},6,2")]
}

pub fn equiv_sweep(a: SweepArgs) -> Result<(), CliError> {
    let format = a.output.format(Format::Csv)?;
    let grid = a.grid.grid(1, 1024, 32.0)?;
    let seed = a.seed.unwrap_or(0);
    let trials = a.trials.unwrap_or(512);
    let ss = a.s.clone().unwrap_or_else(|| vec![0.25, 0.5, 0.75]);
    let ps = a.p.clone().unwrap_or_else(|| vec![1.5, 2.0, 3.0]);
    let ws: Vec<Weight> =
        a.w.clone().unwrap_or_else(|| vec!["const:1".into(), "power:0.5".into()]).iter().map(|s| parse(s)).collect::<Result<_, _>>()?;
    let kernels: Option<Vec<Kernel>> = a.kernel.as_ref().map(|ks| ks.iter().map(|k| parse(k)).collect()).transpose()?;
    let bases: Vec<FunctionDesc> = a
        .corpus
        .clone()
        .unwrap_or_else(|| default_corpus(seed))
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse(s))
        .collect::<Result<_, _>>()?;
    let dilations = a.dilations.clone().unwrap_or_else(|| vec![0.5, 1.0, 2.0]);
    let corpus: Vec<FunctionDesc> =
        bases.iter().flat_map(|b| dilations.iter().map(move |&l| if l == 1.0 { b.clone() } else { b.clone().dilate(l) })).collect();
    let m = a.m.unwrap_or(2);
    let j_max = a.j_max.unwrap_or(16);
    let levels = parse_levels(a.levels.as_deref().unwrap_or("natural"), j_max)?;
    let mode = parse_mode(a.estimator.as_deref().unwrap_or("rademacher"), trials, seed)?;
    let resolved = json!({
        "grid": grid, "s": ss, "p": ps, "w": ws.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "kernel": kernels.as_ref().map(|ks| ks.iter().map(|k| k.to_string()).collect::<Vec<_>>()),
        "corpus": corpus.iter().map(|f| f.to_string()).collect::<Vec<_>>(), "m": m, "levels": levels, "estimator": mode,
    });
    let mut out = Report::new(
        "equiv-sweep",
        report_config(&a, resolved),
        vec!["function", "s", "p", "w", "kernel", "mode", "bessel_norm", "difference_norm", "ratio", "min_ratio", "max_ratio", "error"],
    );
    let sampled: Vec<Result<SampledFunction, diffnorm::Error>> =
        corpus.iter().map(|f| sample(&grid, f, TargetSpace::Scalar)).collect();
    let mode_name = match mode {
        NormMode::Square => "square",
        NormMode::Rademacher { .. } => "rademacher",
    };
    for &s in &ss {
        for &p in &ps {
            for w in &ws {
                let ks = kernels.clone().unwrap_or_else(|| vec![default_kernel(w)]);
                for k in &ks {
                    let mut req = SeminormRequest::new(s, p, m, w.clone(), k.clone());
                    req.levels = levels;
                    req.estimator = mode;
                    let mut ratios = vec![];
                    for (desc, f) in corpus.iter().zip(&sampled) {
                        let head = vec![json!(desc.to_string()), num(s), num(p), json!(w.to_string()), json!(k.to_string()), json!(mode_name)];
                        let row = f.clone().and_then(|f| Ok((bessel_norm(&f, s, p, w)?.value, full_difference_norm(&f, &req)?.value)));
                        let mut cells = head;
                        match row {
                            Ok((b, dn)) => {
                                ratios.push(dn / b);
                                cells.extend([num(b), num(dn), num(dn / b), Value::Null, Value::Null, Value::Null]);
                            }
                            Err(e) => cells.extend([Value::Null, Value::Null, Value::Null, Value::Null, Value::Null, json!(e.kind())]),
                        }
                        out.rows.push(cells);
                    }
                    if !ratios.is_empty() {
                        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
                        let hi = ratios.iter().cloned().fold(0.0, f64::max);
                        out.rows.push(vec![
                            json!("summary"),
                            num(s),
                            num(p),
                            json!(w.to_string()),
                            json!(k.to_string()),
                            json!(mode_name),
                            Value::Null,
                            Value::Null,
                            num(hi / lo),
                            num(lo),
                            num(hi),
                            Value::Null,
                        ]);
                    }
                }
            }
        }
    }
    out.emit(format, a.output.out.clone())
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ConditionsArgs {
    /// Symbol descriptor, e.g. sinc, const:1, bessel(0.5), dilate(2)gauss
    #[arg(long)]
    pub symbol: Option<String>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Derivative order (default d + 2)
    #[arg(long)]
    pub order: Option<usize>,
    /// Hölder exponent; selects the Hölder-type conditions (d = 1)
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta0: Option<f64>,
    #[arg(long)]
    pub delta_inf: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Annulus radius for the Tauberian constant
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub per_decade: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

pub fn conditions(a: ConditionsArgs) -> Result<(), CliError> {
    let format = a.output.format(Format::Json)?;
    let name = a.symbol.clone().ok_or_else(|| CliError::Config("--symbol is required".into()))?;
    let symbol: Symbol = parse(&name)?;
    let d = a.d.unwrap_or(1);
    let order = a.order.unwrap_or(d + 2);
    let delta0 = a.delta0.unwrap_or(1.0);
    let delta_inf = a.delta_inf.unwrap_or(0.05);
    let theta = a.theta.unwrap_or(0.9);
    let eps = a.eps.unwrap_or(1.0);
    let base = RadialSampling::default();
    let sampling = RadialSampling {
        r_min: a.r_min.unwrap_or(base.r_min),
        r_max: a.r_max.unwrap_or(base.r_max),
        per_decade: a.per_decade.unwrap_or(base.per_decade),
        ..base
    };
    let report = match a.gamma {
        Some(g) => {
            if d != 1 {
                return Err(CliError::Config("Hölder-type conditions are one-dimensional; use --d 1".into()));
            }
            hoelder_conditions(&symbol, g, delta0, delta_inf, theta, &sampling)?
        }
        None => dilation_conditions(&symbol, d, delta0, delta_inf, order, &sampling)?,
    };
    let mihlin = mihlin_norm(&symbol, d, order, &sampling)?;
    let tauber = tauberian_constant(&symbol, d, eps)?;
    let resolved = json!({
        "symbol": symbol.to_string(), "d": d, "order": order, "gamma": a.gamma, "delta0": delta0, "delta_inf": delta_inf,
        "theta": theta, "eps": eps, "sampling": sampling,
    });
    let mut out = Report::new("conditions", report_config(&a, resolved), vec!["quantity", "value", "diverging"]);
    out.meta.push(("symbol".into(), json!(symbol.to_string())));
    out.meta.push(("mihlin_norm".into(), num(mihlin)));
    out.meta.push(("tauberian_constant".into(), num(tauber)));
    for q in &report.quantities {
        out.rows.push(vec![json!(q.name), num(q.value), json!(q.diverging)]);
    }
    out.detail = Some(serde_json::to_value(&report).map_err(|e| CliError::Io(e.to_string()))?);
    out.emit(format, a.output.out.clone())
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct MultiplierArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub beta: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// s = factor·(1+α)/p
    #[arg(long, value_delimiter = ',')]
    pub factors: Option<Vec<f64>>,
    /// Coarsest refinement grid size
    #[arg(long)]
    pub n0: Option<usize>,
    /// Number of refinement levels
    #[arg(long)]
    pub refinements: Option<usize>,
    #[arg(long)]
    pub period: Option<f64>,
    /// Witness functions (repeat the flag)
    #[arg(long)]
    pub corpus: Option<Vec<String>>,
    /// ν range of the dyadic inclusion scan
    #[arg(long)]
    pub nu_max: Option<u32>,
    /// Smoothness values of the boundary-profile table
    #[arg(long, value_delimiter = ',')]
    pub profile_s: Option<Vec<f64>>,
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

pub fn multiplier(a: MultiplierArgs) -> Result<(), CliError> {
    let format = a.output.format(Format::Csv)?;
    let alphas = a.alpha.clone().unwrap_or_else(|| vec![-0.5, 0.0, 0.5]);
    let betas = a.beta.clone().unwrap_or_else(|| vec![-0.5, 0.0, 0.5]);
    let ps = a.p.clone().unwrap_or_else(|| vec![1.5, 2.0, 3.0]);
    let factors = a.factors.clone().unwrap_or_else(|| diffnorm::halfspace::SWEEP_FACTORS.to_vec());
    let n0 = a.n0.unwrap_or(512);
    let refinements = a.refinements.unwrap_or(10);
    let period = a.period.unwrap_or(16.0);
    let seed = a.seed.unwrap_or(0);
    let nu_max = a.nu_max.unwrap_or(40);
    let corpus: Vec<FunctionDesc> =
        a.corpus.clone().unwrap_or_else(|| vec!["gauss:1".into()]).iter().map(|s| parse(s)).collect::<Result<_, _>>()?;
    let profile_s = a.profile_s.clone().unwrap_or_else(|| vec![0.25, 0.5, 0.75]);
    let kernel: Kernel = parse(a.kernel.as_deref().unwrap_or("plateau"))?;
    let points = diffnorm::halfspace::threshold_grid(&alphas, &betas, &ps, &factors);
    let resolved = json!({
        "alpha": alphas, "beta": betas, "p": ps, "factors": factors, "n0": n0, "refinements": refinements, "period": period,
        "corpus": corpus.iter().map(|f| f.to_string()).collect::<Vec<_>>(), "nu_max": nu_max, "profile_s": profile_s,
        "kernel": kernel.to_string(), "seed": seed,
    });
    let mut out = Report::new(
        "multiplier",
        report_config(&a, resolved),
        vec!["alpha", "beta", "p", "s", "threshold", "inclusion", "inclusion_sup", "sweep", "sweep_slope", "agreement"],
    );
    let sweeps = points
        .par_iter()
        .map(|&(alpha, beta, p, s)| -> Result<_, diffnorm::Error> {
            let w = Weight::vpow(alpha, beta);
            let exp = HalfspaceExperiment { s, p, weight: w.clone(), corpus: corpus.clone(), period, n0, levels: refinements, seed };
            let mut sweep = multiplier_sweep(&exp)?;
            if nu_max != 40 {
                let inc = inclusion_condition(1, &w, s, p, nu_max, &MRange::boundary(0))?;
                sweep.inclusion = inc.verdict;
                sweep.inclusion_sup = inc.sup;
                sweep.agreement = sweep.inclusion == sweep.verdict;
            }
            Ok(sweep)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut agree = 0usize;
    for (&(alpha, beta, p, s), sweep) in points.iter().zip(&sweeps) {
        let slope = sweep.members.iter().map(|m| m.slope).fold(f64::NEG_INFINITY, f64::max);
        agree += sweep.agreement as usize;
        out.rows.push(vec![
            num(alpha),
            num(beta),
            num(p),
            num(s),
            num((1.0 + alpha) / p),
            json!(sweep.inclusion.to_string()),
            num(sweep.inclusion_sup),
            json!(sweep.verdict.to_string()),
            num(slope),
            json!(sweep.agreement),
        ]);
    }
    out.meta.push(("agreement".into(), json!(format!("{agree}/{}", points.len()))));
    let y = log_grid(-8, 0, 8);
    let mut profiles = vec![];
    for &s in &profile_s {
        let bp = boundary_profile(&kernel, s, 1, &y, None)?;
        let c = continuous_profile_constant(s)?;
        out.meta.push((format!("profile s={s}"), json!({ "slope": num(bp.slope), "continuous_constant": num(c) })));
        profiles.push(bp);
    }
    out.detail = Some(json!({ "profiles": profiles }));
    out.emit(format, a.output.out.clone())
}
