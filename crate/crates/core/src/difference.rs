//! Differences Δ^m_h, kernel means K_m(t, f) (spectral and spatial), the randomized,
//! square-function and Z-indexed difference seminorms, the ball-average (Strichartz)
//! norm and cube averages A_r.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{check_p, Error, Result};
use crate::fft::transform_plane;
use crate::grid::{apply_multiplier, lp_norm, weighted_lp, GridSpec, SampledFunction, TargetSpace};
use crate::kernels::Kernel;
use crate::quad::{composite_edges, gl_rule};
use crate::rademacher::{square_function_norm, sup_partial, NormMode};
use crate::report::{EstimatorKind, NormReport};
use crate::symbols::{apply_symbol, binomial, Symbol};
use crate::weights::Weight;

/// Upper bound on (h-nodes × grid points) for spatial quadrature.
pub const SPATIAL_WORK_LIMIT: usize = 1 << 31;
/// Largest kernel mass allowed outside the spatial quadrature box.
pub const TRUNCATION_BUDGET: f64 = 1e-10;

/// Off-lattice translations f ↦ f(· + a) from one stored spectrum.
pub(crate) struct Translator {
    grid: GridSpec,
    space: TargetSpace,
    spectrum: Vec<Complex64>,
    freqs: Vec<[f64; 2]>,
}

impl Translator {
    pub(crate) fn new(f: &SampledFunction) -> Self {
        let g = *f.grid();
        let n = g.len();
        let inv = 1.0 / n as f64;
        let mut spectrum = f.values().to_vec();
        for plane in spectrum.chunks_mut(n) {
            transform_plane(plane, g.n(), g.d(), true);
            for v in plane.iter_mut() {
                *v *= inv;
            }
        }
        Translator { grid: g, space: *f.space(), spectrum, freqs: g.frequencies() }
    }

    /// Values of f(x + a) at every node, component-planar.
    pub(crate) fn shifted(&self, a: [f64; 2]) -> Vec<Complex64> {
        let n = self.grid.len();
        let mut out = self.spectrum.clone();
        for plane in out.chunks_mut(n) {
            for (v, xi) in plane.iter_mut().zip(&self.freqs) {
                *v *= Complex64::from_polar(1.0, a[0] * xi[0] + a[1] * xi[1]);
            }
            transform_plane(plane, self.grid.n(), self.grid.d(), false);
        }
        out
    }

    /// Largest |ξ| carrying spectral mass above 10^{−15} of the peak.
    pub(crate) fn extent(&self) -> f64 {
        let peak = self.spectrum.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.grid.len();
        let mut top = 0.0f64;
        for (k, z) in self.spectrum.iter().enumerate() {
            if z.norm() > 1e-15 * peak {
                let xi = self.freqs[k % n];
                top = top.max((xi[0] * xi[0] + xi[1] * xi[1]).sqrt());
            }
        }
        top
    }

    pub(crate) fn to_function(&self, values: Vec<Complex64>) -> SampledFunction {
        SampledFunction::new(self.grid, self.space, values).expect("translator shape")
    }
}

fn check_order(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("difference order m must be at least 1".into()));
    }
    Ok(())
}

/// e^{ih·ξ} on R^d.
pub fn translation(h: [f64; 2]) -> Symbol {
    Symbol::Translation { h }
}

/// f(· + h), realized spectrally.
pub fn translate(f: &SampledFunction, h: [f64; 2]) -> Result<SampledFunction> {
    apply_symbol(&translation(h), f)
}

/// Δ^m_h f = Σ_{j=0}^m (−1)^j C(m,j) f(· + (m−j)h).
pub fn difference(f: &SampledFunction, m: usize, h: [f64; 2]) -> Result<SampledFunction> {
    check_order(m)?;
    let g = f.grid();
    let multiplier: Vec<Complex64> = g
        .frequencies()
        .iter()
        .map(|xi| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=m {
                let c = binomial(m, j) * if j % 2 == 0 { 1.0 } else { -1.0 };
                let phase = (m - j) as f64 * (h[0] * xi[0] + h[1] * xi[1]);
                acc += Complex64::from_polar(c, phase);
            }
            acc
        })
        .collect();
    apply_multiplier(f, &multiplier)
}

/// Θ_{K,m,t}(ξ) = Σ_{j<m} (−1)^j C(m,j) [K̂(−(m−j)tξ) − K̂(0)], which equals
/// Σ_{j≤m} (−1)^j C(m,j) K̂(−(m−j)tξ) and vanishes at ξ = 0 by construction.
pub fn kdelta_symbol(k: &Kernel, d: usize, m: usize, t: f64) -> Result<Symbol> {
    check_order(m)?;
    let khat = k.transform();
    let k0 = khat.eval(&[0.0, 0.0][..d]);
    let terms = (0..m)
        .map(|j| {
            let c = binomial(m, j) * if j % 2 == 0 { 1.0 } else { -1.0 };
            Symbol::Sum(vec![khat.clone().dilate(-((m - j) as f64) * t), Symbol::Const(-k0)]).scaled(c)
        })
        .collect();
    Ok(Symbol::Sum(terms))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanMode {
    Spectral,
    Spatial,
}

/// Tensor Gauss–Legendre nodes (h, weight·K(h)) over the kernel's quadrature box, with
/// panels short enough for the phase m·t·ξ_eff·len ≤ `phase` per panel.
fn kernel_nodes(k: &Kernel, d: usize, scale: f64, nodes: usize, phase: f64) -> Vec<([f64; 2], f64)> {
    let axes: Vec<Vec<(f64, f64)>> = (0..d)
        .map(|ax| {
            let cap = if scale > 0.0 { phase / scale } else { f64::INFINITY };
            let len = k.panel_scale(ax).min(cap);
            composite_edges(&k.breakpoints(ax), len, nodes).iter().flat_map(|p| p.points()).collect()
        })
        .collect();
    let mut out = Vec::new();
    if d == 1 {
        for &(h, w) in &axes[0] {
            let kv = k.eval(&[h]);
            if kv != 0.0 {
                out.push(([h, 0.0], w * kv));
            }
        }
    } else {
        for &(h0, w0) in &axes[0] {
            for &(h1, w1) in &axes[1] {
                let kv = k.eval(&[h0, h1]);
                if kv != 0.0 {
                    out.push(([h0, h1], w0 * w1 * kv));
                }
            }
        }
    }
    out
}

/// K_m(t, f)(x) = ∫ K(h) Δ^m_{th} f(x) dh.
pub fn kernel_mean(f: &SampledFunction, k: &Kernel, m: usize, t: f64, mode: MeanMode) -> Result<SampledFunction> {
    check_order(m)?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("scale t must be positive, got {t}")));
    }
    let d = f.grid().d();
    match mode {
        MeanMode::Spectral => apply_symbol(&kdelta_symbol(k, d, m, t)?, f),
        MeanMode::Spatial => spatial_mean(f, k, m, t),
    }
}

fn spatial_mean(f: &SampledFunction, k: &Kernel, m: usize, t: f64) -> Result<SampledFunction> {
    let d = f.grid().d();
    let lost = k.truncation_mass(d);
    if lost > TRUNCATION_BUDGET {
        return Err(Error::QuadratureBudget(format!("kernel {k} loses mass {lost:e} outside the quadrature box")));
    }
    let tr = Translator::new(f);
    let xi = tr.extent();
    let (per_panel, phase) = if d == 1 { (64, 32.0) } else { (24, 10.0) };
    let nodes = kernel_nodes(k, d, m as f64 * t * xi, per_panel, phase);
    let work = nodes.len().saturating_mul(f.grid().len()).saturating_mul(m);
    if work > SPATIAL_WORK_LIMIT {
        return Err(Error::QuadratureBudget(format!("{} kernel nodes exceed the spatial work limit", nodes.len())));
    }
    let coef: Vec<f64> = (0..=m).map(|j| binomial(m, j) * if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let len = f.values().len();
    let chunk = 32;
    let partials: Vec<Vec<Complex64>> = nodes
        .par_chunks(chunk)
        .map(|block| {
            let mut acc = vec![Complex64::new(0.0, 0.0); len];
            for &(h, wk) in block {
                for (j, &c) in coef.iter().enumerate().take(m) {
                    let a = (m - j) as f64 * t;
                    let shifted = tr.shifted([a * h[0], a * h[1]]);
                    for (s, v) in acc.iter_mut().zip(shifted) {
                        *s += v * (wk * c);
                    }
                }
                // j = m term: (−1)^m f(x)
                for (s, v) in acc.iter_mut().zip(f.values()) {
                    *s += v * (wk * coef[m]);
                }
            }
            acc
        })
        .collect();
    let mut total = vec![Complex64::new(0.0, 0.0); len];
    for p in partials {
        for (s, v) in total.iter_mut().zip(p) {
            *s += v;
        }
    }
    Ok(tr.to_function(total))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "index", rename_all = "snake_case")]
pub enum Levels {
    /// j = 1..=j_max
    Natural { j_max: usize },
    /// j = 0, 1, −1, 2, −2, …, ±j_max
    Integer { j_max: usize },
}

#[derive(Debug, Clone)]
pub struct SeminormRequest {
    pub s: f64,
    pub p: f64,
    pub m: usize,
    pub weight: Weight,
    pub kernel: Kernel,
    pub levels: Levels,
    pub estimator: NormMode,
    pub mean_mode: MeanMode,
}

impl SeminormRequest {
    pub fn new(s: f64, p: f64, m: usize, weight: Weight, kernel: Kernel) -> Self {
        SeminormRequest {
            s,
            p,
            m,
            weight,
            kernel,
            levels: Levels::Natural { j_max: 16 },
            estimator: NormMode::Square,
            mean_mode: MeanMode::Spectral,
        }
    }

    fn validate(&self) -> Result<()> {
        check_p(self.p)?;
        check_order(self.m)?;
        if !(self.s > 0.0) {
            return Err(Error::InvalidParameter(format!("smoothness s must be positive, got {}", self.s)));
        }
        Ok(())
    }

    fn params(&self, grid: &GridSpec, levels: &[i64]) -> serde_json::Value {
        json!({
            "grid": grid, "s": self.s, "p": self.p, "m": self.m, "w": self.weight,
            "kernel": self.kernel.to_string(), "levels": self.levels, "estimator": self.estimator,
            "mean_mode": self.mean_mode, "used_levels": levels,
        })
    }
}

/// Splits the requested levels into admissible and excluded ones. Level j uses
/// t = 2^{−j}; j ≥ 0 needs 2^j ≤ Nyquist, j < 0 needs m·2^{|j|}·r_K ≤ L/2.
pub fn level_plan(grid: &GridSpec, k: &Kernel, m: usize, levels: Levels) -> (Vec<i64>, Vec<i64>) {
    let nyq = grid.nyquist();
    let r = k.effective_radius(grid.d());
    let ok = |j: i64| {
        if j >= 0 {
            2f64.powi(j as i32) <= nyq
        } else {
            m as f64 * 2f64.powi((-j) as i32) * r <= 0.5 * grid.period()
        }
    };
    let order: Vec<i64> = match levels {
        Levels::Natural { j_max } => (1..=j_max as i64).collect(),
        Levels::Integer { j_max } => {
            let mut v = vec![0];
            for j in 1..=j_max as i64 {
                v.push(j);
                v.push(-j);
            }
            v
        }
    };
    order.into_iter().partition(|&j| ok(j))
}

fn level_means(f: &SampledFunction, req: &SeminormRequest, levels: &[i64]) -> Result<Vec<SampledFunction>> {
    levels
        .par_iter()
        .map(|&j| kernel_mean(f, &req.kernel, req.m, 2f64.powi(-(j as i32)), req.mean_mode))
        .collect()
}

/// sup_J ‖Σ_j ε_j 2^{js} K_m(2^{−j}, f)‖ over the admissible levels. For the Z-indexed
/// family the sup is taken over symmetric windows |j| ≤ J.
pub fn difference_seminorm(f: &SampledFunction, req: &SeminormRequest) -> Result<NormReport> {
    req.validate()?;
    let (levels, excluded) = level_plan(f.grid(), &req.kernel, req.m, req.levels);
    let params = req.params(f.grid(), &levels);
    if levels.is_empty() {
        let mut r = NormReport::new(0.0, EstimatorKind::ExactSpectral, params);
        r.excluded_levels = excluded;
        return Ok(r);
    }
    let means = level_means(f, req, &levels)?;
    let coeffs: Vec<f64> = levels.iter().map(|&j| 2f64.powf(j as f64 * req.s)).collect();
    let sp = sup_partial(&means, &coeffs, req.p, &req.weight, req.estimator)?;
    let ends: Vec<usize> = match req.levels {
        Levels::Natural { .. } => (0..levels.len()).collect(),
        Levels::Integer { .. } => (0..levels.len())
            .filter(|&i| i + 1 == levels.len() || levels[i + 1] > 0 || levels[i] == 0)
            .collect(),
    };
    let (mut sup, mut arg) = (0.0, 0);
    for &i in &ends {
        if sp.curve[i] >= sup {
            sup = sp.curve[i];
            arg = i;
        }
    }
    let kind = match req.estimator {
        NormMode::Square => EstimatorKind::ExactSpectral,
        NormMode::Rademacher { .. } if sp.exhaustive => EstimatorKind::ExactSpectral,
        NormMode::Rademacher { .. } => EstimatorKind::MonteCarlo,
    };
    let mut r = NormReport::new(sup, kind, params);
    if matches!(req.estimator, NormMode::Rademacher { .. }) {
        r.std_error = Some(sp.std_errors[arg]);
    }
    r.curve = sp.curve;
    r.excluded_levels = excluded;
    Ok(r)
}

/// ‖f‖_{L^p(w;X)} + [f]^{(m,K)}.
pub fn full_difference_norm(f: &SampledFunction, req: &SeminormRequest) -> Result<NormReport> {
    let semi = difference_seminorm(f, req)?;
    let base = lp_norm(f, req.p, &req.weight)?;
    let mut r = semi.clone();
    r.value = base + semi.value;
    if let serde_json::Value::Object(map) = &mut r.params {
        map.insert("lp_norm".into(), json!(base));
        map.insert("seminorm".into(), json!(semi.value));
    }
    Ok(r)
}

/// ‖f‖ + ‖(Σ_{j=1}^{J} |2^{js} K_m(2^{−j}, f)|²)^{1/2}‖_{L^p(w;X)}.
pub fn square_difference_norm(
    f: &SampledFunction,
    s: f64,
    p: f64,
    w: &Weight,
    m: usize,
    k: &Kernel,
    j_max: usize,
) -> Result<NormReport> {
    let mut req = SeminormRequest::new(s, p, m, w.clone(), k.clone());
    req.levels = Levels::Natural { j_max };
    req.validate()?;
    let (levels, excluded) = level_plan(f.grid(), k, m, req.levels);
    let base = lp_norm(f, p, w)?;
    let square = if levels.is_empty() {
        0.0
    } else {
        let means = level_means(f, &req, &levels)?;
        let coeffs: Vec<f64> = levels.iter().map(|&j| 2f64.powf(j as f64 * s)).collect();
        square_function_norm(&means, &coeffs, p, w)?
    };
    let mut params = req.params(f.grid(), &levels);
    if let serde_json::Value::Object(map) = &mut params {
        map.insert("lp_norm".into(), json!(base));
        map.insert("square_function".into(), json!(square));
    }
    let mut r = NormReport::new(base + square, EstimatorKind::ExactSpectral, params);
    r.excluded_levels = excluded;
    Ok(r)
}

/// Dyadic t-levels for the ball-average norm: t = 2^{−j}, j_lo ≤ j ≤ j_hi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TLevels {
    pub j_lo: i32,
    pub j_hi: i32,
}

impl TLevels {
    /// From the largest t ≤ L/4 down to t ≈ 2^{−3}/Nyquist.
    pub fn for_grid(grid: &GridSpec) -> Self {
        let j_lo = -((grid.period() / 4.0).log2().floor() as i32);
        let j_hi = grid.nyquist().log2().ceil() as i32 + 3;
        TLevels { j_lo, j_hi }
    }
}

/// Nodes and weights for ∫_{B(0,t)} g(h) dh.
fn ball_rule(d: usize, t: f64) -> Vec<([f64; 2], f64)> {
    if d == 1 {
        let rule = gl_rule(32);
        let mut out = Vec::with_capacity(64);
        for &(u, w) in rule.iter() {
            let h = 0.5 * t * (u + 1.0);
            out.push(([h, 0.0], 0.5 * t * w));
            out.push(([-h, 0.0], 0.5 * t * w));
        }
        out
    } else {
        let rule = gl_rule(24);
        let angles = 32;
        let mut out = Vec::with_capacity(24 * angles);
        for &(u, w) in rule.iter() {
            let r = 0.5 * t * (u + 1.0);
            for k in 0..angles {
                let a = 2.0 * PI * (k as f64 + 0.5) / angles as f64;
                out.push(([r * a.cos(), r * a.sin()], 0.5 * t * w * r * 2.0 * PI / angles as f64));
            }
        }
        out
    }
}

/// ‖f‖_{L^p(w;X)} + ‖(∫_0^∞ t^{−2s} [t^{−d} ∫_{B(0,t)} ‖Δ_h f‖ dh]² dt/t)^{1/2}‖_{L^p(w)}.
/// The t-integral uses dyadic trapezoid nodes with weight ln 2 and analytic tails
/// beyond the sampled range.
pub fn strichartz_norm(f: &SampledFunction, s: f64, p: f64, w: &Weight, levels: TLevels) -> Result<NormReport> {
    check_p(p)?;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParameter(format!("s must lie in (0,1), got {s}")));
    }
    let g = *f.grid();
    let d = g.d();
    if levels.j_hi < levels.j_lo {
        return Err(Error::InvalidParameter("empty t-level range".into()));
    }
    let t_max = 2f64.powi(-levels.j_lo);
    if t_max > 0.25 * g.period() {
        return Err(Error::QuadratureBudget(format!("t = {t_max} exceeds a quarter of the period")));
    }
    let tr = Translator::new(f);
    let n = g.len();
    let space = *f.space();
    let base_norms = f.pointwise_norms();
    let js: Vec<i32> = (levels.j_lo..=levels.j_hi).collect();
    // A_t(x) = t^{−d} ∫_{B(0,t)} ‖f(x+h) − f(x)‖ dh per level
    let averages: Vec<Vec<f64>> = js
        .par_iter()
        .map(|&j| {
            let t = 2f64.powi(-j);
            let mut acc = vec![0.0; n];
            for (h, wt) in ball_rule(d, t) {
                let shifted = tr.shifted(h);
                let diff: Vec<Complex64> = shifted.iter().zip(f.values()).map(|(a, b)| a - b).collect();
                let norms = component_norms(&space, &diff, n);
                for (a, v) in acc.iter_mut().zip(norms) {
                    *a += wt * v;
                }
            }
            let scale = t.powi(-(d as i32));
            acc.iter_mut().for_each(|a| *a *= scale);
            acc
        })
        .collect();
    let ball = if d == 1 { 2.0 } else { PI };
    let last = js.len() - 1;
    let mut g2 = vec![0.0; n];
    for (i, &j) in js.iter().enumerate() {
        let t = 2f64.powi(-j);
        let wt = if i == 0 || i == last { 0.5 * LN_2 } else { LN_2 };
        for (acc, a) in g2.iter_mut().zip(&averages[i]) {
            *acc += wt * t.powf(-2.0 * s) * a * a;
        }
    }
    let t_min = 2f64.powi(-levels.j_hi);
    let (s2, df) = (2.0 * s, d as f64);
    for x in 0..n {
        let a = averages[0][x];
        let b = ball * base_norms[x];
        let large = t_max.powf(-s2) * (b * b / s2 + 2.0 * b * (a - b) / (s2 + df) + (a - b).powi(2) / (s2 + 2.0 * df));
        let small = averages[last][x].powi(2) * t_min.powf(-s2) / (2.0 - s2);
        g2[x] += large.max(0.0) + small;
    }
    let cells = w.cell_weights(&g)?;
    let gfun: Vec<f64> = g2.iter().map(|v| v.sqrt()).collect();
    let semi = weighted_lp(&gfun, &cells, p);
    let base = weighted_lp(&base_norms, &cells, p);
    let mut r = NormReport::new(
        base + semi,
        EstimatorKind::Quadrature,
        json!({ "norm": "strichartz", "grid": g, "space": space.to_string(), "s": s, "p": p, "w": w,
                "t_levels": levels, "lp_norm": base, "seminorm": semi }),
    );
    r.curve = js
        .iter()
        .zip(&averages)
        .map(|(&j, a)| {
            let t = 2f64.powi(-j);
            let v: Vec<f64> = a.iter().map(|x| x * t.powf(-s)).collect();
            weighted_lp(&v, &cells, p)
        })
        .collect();
    Ok(r)
}

fn component_norms(space: &TargetSpace, values: &[Complex64], n: usize) -> Vec<f64> {
    let m = space.components();
    if m == 1 {
        return values.iter().map(|z| z.norm()).collect();
    }
    (0..n).map(|idx| space.norm((0..m).map(|c| values[c * n + idx]))).collect()
}

/// A_r f(x) = average of f over the cube Q[x, r] (symbol Π_i sinc(r ξ_i)).
pub fn averaging(f: &SampledFunction, r: f64) -> Result<SampledFunction> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("averaging radius must be positive, got {r}")));
    }
    apply_symbol(&Symbol::Sinc.dilate(r), f)
}
