//! The half-space indicator as a pointwise multiplier: restriction, half-space kernel
//! means, the boundary profile and the grid-refinement multiplier sweep.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::difference::Translator;
use crate::error::{check_p, Error, Result};
use crate::functions::{sample, FunctionDesc};
use crate::grid::{GridSpec, SampledFunction, TargetSpace};
use crate::kernels::Kernel;
use crate::littlewood_paley::bessel_norm;
use crate::quad::{composite_edges, gl_rule, ls_slope, Panel};
use crate::rademacher::{sup_partial, NormMode};
use crate::report::{EstimatorKind, NormReport};
use crate::weights::{inclusion_condition, MRange, Verdict, Weight};

/// 1_{x_1 > 0} f; nodes on x_1 = 0 are set to zero.
pub fn halfspace_restrict(f: &SampledFunction) -> SampledFunction {
    let g = *f.grid();
    let n = g.len();
    let mut out = f.clone();
    for (k, v) in out.values_mut().iter_mut().enumerate() {
        if g.point(k % n)[0] <= 0.0 {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    out
}

/// 1_{x_1 > 0} f − 1_{x_1 < 0} f, the odd companion of the restriction:
/// 1_{R^d_+} f = (f + this)/2 away from x_1 = 0.
pub fn halfspace_sign_part(f: &SampledFunction) -> SampledFunction {
    let g = *f.grid();
    let n = g.len();
    let mut out = f.clone();
    for (k, v) in out.values_mut().iter_mut().enumerate() {
        let x1 = g.point(k % n)[0];
        if x1 == 0.0 {
            *v = Complex64::new(0.0, 0.0);
        } else if x1 < 0.0 {
            *v = -*v;
        }
    }
    out
}

/// ∫_{h_1 ≤ −y/t} K(h) dh.
pub fn boundary_mass(k: &Kernel, y: f64, t: f64, d: usize) -> Result<f64> {
    if !(y > 0.0 && t > 0.0) {
        return Err(Error::InvalidParameter(format!("need y > 0 and t > 0, got y={y}, t={t}")));
    }
    Ok(k.lower_tail(y / t, d))
}

const HALFSPACE_NODES: usize = 16;
const HALFSPACE_PHASE: f64 = 8.0;

/// K_{R^d_+}(t, f)(x) = ∫_{h_1 ≥ −x_1/t} K(h) (f(x + th) − f(x)) dh for x_1 > 0, and 0
/// elsewhere. The panel cut by h_1 = −x_1/t is integrated with partial-panel weights.
pub fn halfspace_kernel_mean(f: &SampledFunction, k: &Kernel, t: f64) -> Result<SampledFunction> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("scale t must be positive, got {t}")));
    }
    let g = *f.grid();
    let d = g.d();
    let lost = k.truncation_mass(d);
    if lost > crate::difference::TRUNCATION_BUDGET {
        return Err(Error::QuadratureBudget(format!("kernel {k} loses mass {lost:e} outside the quadrature box")));
    }
    let tr = Translator::new(f);
    let xi = tr.extent();
    let cap = |ax: usize| {
        let phase = if xi * t > 0.0 { HALFSPACE_PHASE / (xi * t) } else { f64::INFINITY };
        k.panel_scale(ax).min(phase)
    };
    let panels0 = composite_edges(&k.breakpoints(0), cap(0), HALFSPACE_NODES);
    let rule1: Vec<(f64, f64)> = if d == 2 {
        composite_edges(&k.breakpoints(1), cap(1), HALFSPACE_NODES).iter().flat_map(|p| p.points()).collect()
    } else {
        vec![(0.0, 1.0)]
    };
    let n = g.len();
    let comps = f.space().components();
    let work = panels0.len() * HALFSPACE_NODES * rule1.len() * n;
    if work > crate::difference::SPATIAL_WORK_LIMIT {
        return Err(Error::QuadratureBudget(format!("{work} node evaluations exceed the spatial work limit")));
    }
    let cut: Vec<f64> = (0..n).map(|i| -g.point(i)[0] / t).collect();
    let partials: Vec<Vec<Complex64>> = panels0
        .par_iter()
        .map(|panel| panel_contribution(panel, &rule1, &cut, k, t, d, &tr, f, comps))
        .collect();
    let mut total = vec![Complex64::new(0.0, 0.0); n * comps];
    for p in partials {
        for (s, v) in total.iter_mut().zip(p) {
            *s += v;
        }
    }
    for c in 0..comps {
        for i in 0..n {
            if g.point(i)[0] <= 0.0 {
                total[c * n + i] = Complex64::new(0.0, 0.0);
            }
        }
    }
    Ok(tr.to_function(total))
}

#[allow(clippy::too_many_arguments)]
fn panel_contribution(
    panel: &Panel,
    rule1: &[(f64, f64)],
    cut: &[f64],
    k: &Kernel,
    t: f64,
    d: usize,
    tr: &Translator,
    f: &SampledFunction,
    comps: usize,
) -> Vec<Complex64> {
    let n = cut.len();
    let mut acc = vec![Complex64::new(0.0, 0.0); n * comps];
    if cut.iter().all(|&a| a >= panel.hi) {
        return acc;
    }
    let full: Vec<f64> = panel.points().iter().map(|p| p.1).collect();
    // per-node weights along h_1 for every x
    let weights: Vec<Option<Vec<f64>>> = cut
        .iter()
        .map(|&a| {
            if a >= panel.hi {
                None
            } else if a <= panel.lo {
                Some(full.clone())
            } else {
                Some(panel.tail_weights(a))
            }
        })
        .collect();
    for (q, &(h0, _)) in panel.points().iter().enumerate() {
        for &(h1, w1) in rule1 {
            let h = [h0, h1];
            let kv = k.eval(&h[..d]) * w1;
            if kv == 0.0 {
                continue;
            }
            let shifted = tr.shifted([t * h0, t * h1]);
            for c in 0..comps {
                for i in 0..n {
                    if let Some(w) = &weights[i] {
                        let idx = c * n + i;
                        acc[idx] += (shifted[idx] - f.values()[idx]) * (w[q] * kv);
                    }
                }
            }
        }
    }
    acc
}

/// sup_J ‖Σ_{j≤J} ε_j 2^{js} K_{R^d_+}(2^{−j}, f)‖_{L^p(w;X)}, j = 1..=j_max.
pub fn halfspace_seminorm(
    f: &SampledFunction,
    s: f64,
    p: f64,
    w: &Weight,
    k: &Kernel,
    j_max: usize,
    mode: NormMode,
) -> Result<NormReport> {
    check_p(p)?;
    let nyq = f.grid().nyquist();
    let levels: Vec<usize> = (1..=j_max).filter(|&j| 2f64.powi(j as i32) <= nyq).collect();
    let means = levels
        .par_iter()
        .map(|&j| halfspace_kernel_mean(f, k, 2f64.powi(-(j as i32))))
        .collect::<Result<Vec<_>>>()?;
    let coeffs: Vec<f64> = levels.iter().map(|&j| 2f64.powf(s * j as f64)).collect();
    let params = json!({ "norm": "halfspace-seminorm", "grid": f.grid(), "s": s, "p": p, "w": w,
                         "kernel": k.to_string(), "levels": levels, "estimator": mode });
    if means.is_empty() {
        return Ok(NormReport::new(0.0, EstimatorKind::Quadrature, params));
    }
    let sp = sup_partial(&means, &coeffs, p, w, mode)?;
    let kind = if sp.exhaustive || matches!(mode, NormMode::Square) { EstimatorKind::Quadrature } else { EstimatorKind::MonteCarlo };
    let mut r = NormReport::new(sp.sup, kind, params);
    r.curve = sp.curve;
    r.excluded_levels = (1..=j_max as i64).filter(|j| !levels.contains(&(*j as usize))).collect();
    Ok(r)
}

/// Profile g(y) = (Σ_j 4^{js} T(y 2^j)²)^{1/2}, T(a) = ∫_{h_1 ≤ −a} K, on a y grid, with
/// the least-squares slope of log g against log y.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryProfile {
    pub s: f64,
    pub y: Vec<f64>,
    pub g: Vec<f64>,
    pub slope: f64,
    pub j_range: (i32, i32),
}

/// Default dyadic range: 2^{js} ≤ 2^{−48} at j_lo for every s, and a far upper end where
/// T vanishes for the built-in kernels.
pub fn default_j_range(s: f64) -> (i32, i32) {
    (-(48.0 / s).ceil() as i32, 64)
}

pub fn boundary_profile(k: &Kernel, s: f64, d: usize, y_grid: &[f64], j_range: Option<(i32, i32)>) -> Result<BoundaryProfile> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParameter(format!("s must lie in (0,1), got {s}")));
    }
    if y_grid.iter().any(|&y| !(y > 0.0)) {
        return Err(Error::InvalidParameter("y grid must be positive".into()));
    }
    let (lo, hi) = j_range.unwrap_or_else(|| default_j_range(s));
    if lo > hi {
        return Err(Error::InvalidParameter(format!("empty j range ({lo}, {hi})")));
    }
    let mut g = Vec::with_capacity(y_grid.len());
    for &y in y_grid {
        let term = |j: i32| 2f64.powf(j as f64 * s) * k.lower_tail(y * 2f64.powi(j), d);
        let sum: f64 = (lo..=hi).map(|j| term(j).powi(2)).sum();
        let gy = sum.sqrt();
        let edge = term(lo).abs().max(term(hi).abs());
        if !(edge <= 1e-12 * gy) {
            return Err(Error::QuadratureBudget(format!(
                "j range ({lo}, {hi}) too narrow at y = {y}: edge term {edge:e} against g = {gy:e}"
            )));
        }
        g.push(gy);
    }
    let pts: Vec<(f64, f64)> = y_grid.iter().zip(&g).map(|(y, v)| (y.ln(), v.ln())).collect();
    Ok(BoundaryProfile { s, y: y_grid.to_vec(), g, slope: ls_slope(&pts), j_range: (lo, hi) })
}

/// y_i = 2^{lo + i/per_octave} covering [2^lo, 2^hi].
pub fn log_grid(lo: i32, hi: i32, per_octave: usize) -> Vec<f64> {
    let count = (hi - lo) as usize * per_octave;
    (0..=count).map(|i| 2f64.powf(lo as f64 + i as f64 / per_octave as f64)).collect()
}

/// ∫_1^∞ τ^{−2s−2} (τ − 1)² dτ/τ, computed as (1/2s) ∫_0^1 (1 − v^{1/(2s)})² dv on
/// panels graded geometrically towards v = 0.
pub fn continuous_profile_constant(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParameter(format!("s must lie in (0,1), got {s}")));
    }
    let e = 1.0 / (2.0 * s);
    let rule = gl_rule(20);
    let mut total = 0.0;
    let mut hi = 1.0f64;
    for _ in 0..60 {
        let lo = 0.5 * hi;
        let (mid, half) = (0.5 * (hi + lo), 0.5 * (hi - lo));
        total += rule.iter().map(|&(u, w)| w * half * (1.0 - (mid + half * u).powf(e)).powi(2)).sum::<f64>();
        hi = lo;
    }
    // [0, 2^{−60}]: integrand ≤ 1
    total += hi;
    Ok(e * total)
}

#[derive(Debug, Clone, Serialize)]
pub struct HalfspaceExperiment {
    pub s: f64,
    pub p: f64,
    pub weight: Weight,
    pub corpus: Vec<FunctionDesc>,
    /// Torus period, fixed under refinement.
    pub period: f64,
    /// Coarsest grid size; level k uses n0·2^k points.
    pub n0: usize,
    pub levels: usize,
    pub seed: u64,
}

impl HalfspaceExperiment {
    /// One-dimensional sweep with the even Gaussian witness straddling the boundary.
    pub fn new(s: f64, p: f64, weight: Weight) -> Self {
        HalfspaceExperiment { s, p, weight, corpus: vec![FunctionDesc::gauss()], period: 16.0, n0: 512, levels: 10, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberSweep {
    pub function: String,
    pub n: Vec<usize>,
    /// ‖1_{R_+} f‖_{H^s_p(w)} / ‖f‖_{H^s_p(w)} per level.
    pub ratios: Vec<f64>,
    /// ‖(1_{R_+} − 1_{R_−}) f‖_{H^s_p(w)} / ‖f‖_{H^s_p(w)} per level; drives the verdict.
    pub sign_ratios: Vec<f64>,
    /// log2-slope of |ρ_k^p − ρ_{k−1}^p| over the finer half of the levels, ρ the sign ratio.
    pub slope: f64,
    pub converged: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSweep {
    pub s: f64,
    pub p: f64,
    pub weight: String,
    pub members: Vec<MemberSweep>,
    pub verdict: Verdict,
    pub inclusion: Verdict,
    pub inclusion_sup: f64,
    pub agreement: bool,
}

/// Increment slope above which the refinement sequence is declared divergent.
pub const INCREMENT_SLOPE: f64 = -0.01;
/// Relative increment size below which the sequence counts as converged.
pub const INCREMENT_FLOOR: f64 = 1e-9;

fn member_verdict(ratios: &[f64], p: f64) -> (f64, bool, Verdict) {
    let pw: Vec<f64> = ratios.iter().map(|r| r.powf(p)).collect();
    let inc: Vec<f64> = pw.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let last = *pw.last().unwrap_or(&1.0);
    let converged = inc.last().map(|&v| v < INCREMENT_FLOOR * last).unwrap_or(true);
    let start = inc.len() / 2;
    let pts: Vec<(f64, f64)> =
        inc.iter().enumerate().skip(start).filter(|(_, v)| **v > 0.0).map(|(i, v)| (i as f64, v.log2())).collect();
    let slope = ls_slope(&pts);
    let verdict = if !converged && slope > INCREMENT_SLOPE { Verdict::Diverging } else { Verdict::Bounded };
    (slope, converged, verdict)
}

/// Refines the grid n_k = n0·2^k at fixed period and tracks the H^s_p(w) ratio of the
/// restricted witness. The verdict reads the increments of the sign-split ratio, whose
/// p-th power grows like Σ_k 2^{kp(s − (1+α)/p)} near a power weight: a non-summable
/// increment sequence signals an unbounded multiplier. The result is cross-reported
/// with the dyadic inclusion test.
pub fn multiplier_sweep(exp: &HalfspaceExperiment) -> Result<MultiplierSweep> {
    check_p(exp.p)?;
    if exp.levels < 3 {
        return Err(Error::InvalidParameter("multiplier sweep needs at least 3 levels".into()));
    }
    let sizes: Vec<usize> = (0..exp.levels).map(|k| exp.n0 << k).collect();
    let members = exp
        .corpus
        .iter()
        .map(|desc| -> Result<MemberSweep> {
            let pairs = sizes
                .par_iter()
                .map(|&n| -> Result<(f64, f64)> {
                    let grid = GridSpec::new(1, n, exp.period)?;
                    let f = sample(&grid, desc, TargetSpace::Scalar)?;
                    let den = bessel_norm(&f, exp.s, exp.p, &exp.weight)?.value;
                    if den == 0.0 {
                        return Err(Error::InvalidParameter(format!("corpus member {desc} vanishes")));
                    }
                    let r = bessel_norm(&halfspace_restrict(&f), exp.s, exp.p, &exp.weight)?.value / den;
                    let o = bessel_norm(&halfspace_sign_part(&f), exp.s, exp.p, &exp.weight)?.value / den;
                    Ok((r, o))
                })
                .collect::<Result<Vec<_>>>()?;
            let (ratios, sign_ratios): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let (slope, converged, verdict) = member_verdict(&sign_ratios, exp.p);
            Ok(MemberSweep { function: desc.to_string(), n: sizes.clone(), ratios, sign_ratios, slope, converged, verdict })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict =
        if members.iter().any(|m| m.verdict == Verdict::Diverging) { Verdict::Diverging } else { Verdict::Bounded };
    let inc = inclusion_condition(1, &exp.weight, exp.s, exp.p, 40, &MRange::boundary(0))?;
    Ok(MultiplierSweep {
        s: exp.s,
        p: exp.p,
        weight: exp.weight.to_string(),
        members,
        verdict,
        inclusion: inc.verdict,
        inclusion_sup: inc.sup,
        agreement: verdict == inc.verdict,
    })
}

/// s/threshold factors of the default sweep: {0.2, 0.4, 0.6, 0.8}·{0.8, 1.2}, the threshold, and one point above.
pub const SWEEP_FACTORS: [f64; 9] = [0.16, 0.24, 0.32, 0.48, 0.64, 0.72, 0.96, 1.0, 1.2];

/// (α, β, p, s) points of the threshold sweep: s = c·(1+α)/p for each factor c, kept
/// when s ∈ (0, 1) and v_{α,β} ∈ A_p.
pub fn threshold_grid(alphas: &[f64], betas: &[f64], ps: &[f64], factors: &[f64]) -> Vec<(f64, f64, f64, f64)> {
    let mut out = Vec::new();
    for &a in alphas {
        for &b in betas {
            for &p in ps {
                if !(a > -1.0 && a < p - 1.0 && b > -1.0 && b < p - 1.0) {
                    continue;
                }
                for &c in factors {
                    let s = c * (1.0 + a) / p;
                    if s > 0.0 && s < 1.0 {
                        out.push((a, b, p, s));
                    }
                }
            }
        }
    }
    out
}
