//! Rademacher sums ‖Σ_j ε_j c_j g_j‖ in L^p(Ω; L^p(w; X)) by seeded sign sampling,
//! and the pointwise square function that replaces them in Banach function spaces.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_p, Error, Result};
use crate::grid::{weighted_lp_pow, SampledFunction, TargetSpace};
use crate::weights::Weight;

/// Families up to this length are averaged over every sign pattern when the trial
/// budget covers all 2^{J−1} patterns (ε and −ε give the same norm).
pub const EXHAUSTIVE_MAX_TERMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignDraw {
    pub seed: u64,
    pub trial_index: u64,
    pub signs: Vec<f64>,
}

impl SignDraw {
    /// Signs of trial `trial_index`: ChaCha8 keyed by `seed`, stream `trial_index`.
    pub fn new(seed: u64, trial_index: u64, terms: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial_index);
        let signs = (0..terms).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
        SignDraw { seed, trial_index, signs }
    }

    /// Sign pattern number `k` of the exhaustive enumeration, first sign fixed to +1.
    fn pattern(k: u64, terms: usize) -> Vec<f64> {
        (0..terms)
            .map(|j| if j == 0 || (k >> (j - 1)) & 1 == 0 { 1.0 } else { -1.0 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum NormMode {
    Rademacher { trials: usize, seed: u64 },
    Square,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RademacherEstimate {
    pub value: f64,
    pub trials: usize,
    /// Standard error of the estimate of value^p.
    pub std_error: f64,
    pub seed: u64,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupPartial {
    pub sup: f64,
    /// Prefix length J (1-based) attaining the sup.
    pub argmax: usize,
    pub curve: Vec<f64>,
    /// Per-prefix standard errors of value^p; zeros in square mode.
    pub std_errors: Vec<f64>,
    pub trials: usize,
    pub exhaustive: bool,
}

fn check_family(family: &[SampledFunction], coeffs: &[f64]) -> Result<()> {
    let first = family.first().ok_or_else(|| Error::InvalidParameter("family is empty".into()))?;
    if coeffs.len() != family.len() {
        return Err(Error::ShapeMismatch(format!("{} coefficients for {} functions", coeffs.len(), family.len())));
    }
    for g in &family[1..] {
        first.same_shape(g)?;
    }
    Ok(())
}

fn node_norms(space: &TargetSpace, values: &[Complex64], n: usize) -> Vec<f64> {
    let m = space.components();
    if m == 1 {
        return values.iter().map(|z| z.norm()).collect();
    }
    (0..n).map(|idx| space.norm((0..m).map(|c| values[c * n + idx]))).collect()
}

struct Prepared {
    scaled: Vec<Vec<Complex64>>,
    cells: Vec<f64>,
    space: TargetSpace,
    n: usize,
}

fn prepare(family: &[SampledFunction], coeffs: &[f64], w: &Weight) -> Result<Prepared> {
    let grid = *family[0].grid();
    let cells = w.cell_weights(&grid)?;
    let scaled = family
        .iter()
        .zip(coeffs)
        .map(|(g, &c)| g.values().iter().map(|v| v * c).collect())
        .collect();
    Ok(Prepared { scaled, cells, space: *family[0].space(), n: grid.len() })
}

impl Prepared {
    /// ‖Σ_{j<J} ε_j c_j g_j‖^p for every prefix J, or only for the full sum.
    fn prefix_pows(&self, signs: &[f64], p: f64, prefixes: bool) -> Vec<f64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.scaled[0].len()];
        let mut out = Vec::with_capacity(self.scaled.len());
        let last = self.scaled.len() - 1;
        for (j, (g, &e)) in self.scaled.iter().zip(signs).enumerate() {
            for (a, v) in acc.iter_mut().zip(g) {
                *a += v * e;
            }
            if prefixes || j == last {
                out.push(weighted_lp_pow(&node_norms(&self.space, &acc, self.n), &self.cells, p));
            }
        }
        out
    }

    /// Per-trial prefix p-th powers, in trial order.
    fn sample(&self, p: f64, trials: usize, seed: u64, prefixes: bool) -> (Vec<Vec<f64>>, bool) {
        let terms = self.scaled.len();
        if terms <= EXHAUSTIVE_MAX_TERMS && (1usize << (terms - 1)) <= trials {
            let patterns = 1u64 << (terms - 1);
            let rows = (0..patterns)
                .into_par_iter()
                .map(|k| self.prefix_pows(&SignDraw::pattern(k, terms), p, prefixes))
                .collect();
            (rows, true)
        } else {
            let rows = (0..trials as u64)
                .into_par_iter()
                .map(|t| self.prefix_pows(&SignDraw::new(seed, t, terms).signs, p, prefixes))
                .collect();
            (rows, false)
        }
    }
}

fn mean_and_error(rows: &[Vec<f64>], col: usize, exhaustive: bool) -> (f64, f64) {
    let t = rows.len() as f64;
    let mean = rows.iter().map(|r| r[col]).sum::<f64>() / t;
    if exhaustive || rows.len() < 2 {
        return (mean, 0.0);
    }
    let var = rows.iter().map(|r| (r[col] - mean).powi(2)).sum::<f64>() / (t - 1.0);
    (mean, (var / t).sqrt())
}

/// (E‖Σ_j ε_j c_j g_j‖^p_{L^p(w;X)})^{1/p} estimated from `trials` sign draws.
pub fn rademacher_norm(
    family: &[SampledFunction],
    coeffs: &[f64],
    p: f64,
    w: &Weight,
    trials: usize,
    seed: u64,
) -> Result<RademacherEstimate> {
    check_p(p)?;
    check_family(family, coeffs)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let prep = prepare(family, coeffs, w)?;
    let (rows, exhaustive) = prep.sample(p, trials, seed, false);
    let (mean, se) = mean_and_error(&rows, 0, exhaustive);
    Ok(RademacherEstimate { value: mean.powf(1.0 / p), trials: rows.len(), std_error: se, seed, exhaustive })
}

/// ‖(Σ_j |c_j g_j|²)^{1/2}‖_{L^p(w;X)}, square sum taken per node and component.
pub fn square_function_norm(family: &[SampledFunction], coeffs: &[f64], p: f64, w: &Weight) -> Result<f64> {
    check_p(p)?;
    check_family(family, coeffs)?;
    let prep = prepare(family, coeffs, w)?;
    Ok(square_prefixes(&prep, p).last().copied().unwrap_or(0.0).powf(1.0 / p))
}

fn square_prefixes(prep: &Prepared, p: f64) -> Vec<f64> {
    let mut acc = vec![0.0f64; prep.scaled[0].len()];
    let mut out = Vec::with_capacity(prep.scaled.len());
    for g in &prep.scaled {
        for (a, v) in acc.iter_mut().zip(g) {
            *a += v.norm_sqr();
        }
        let roots: Vec<Complex64> = acc.iter().map(|a| Complex64::new(a.sqrt(), 0.0)).collect();
        out.push(weighted_lp_pow(&node_norms(&prep.space, &roots, prep.n), &prep.cells, p));
    }
    out
}

/// The chosen norm on every prefix {1..J} and its running maximum.
pub fn sup_partial(family: &[SampledFunction], coeffs: &[f64], p: f64, w: &Weight, mode: NormMode) -> Result<SupPartial> {
    check_p(p)?;
    check_family(family, coeffs)?;
    let prep = prepare(family, coeffs, w)?;
    let (curve, std_errors, trials, exhaustive) = match mode {
        NormMode::Square => {
            let pows = square_prefixes(&prep, p);
            let curve: Vec<f64> = pows.iter().map(|v| v.powf(1.0 / p)).collect();
            (curve, vec![0.0; family.len()], 0, false)
        }
        NormMode::Rademacher { trials, seed } => {
            if trials == 0 {
                return Err(Error::InvalidParameter("trials must be at least 1".into()));
            }
            let (rows, exhaustive) = prep.sample(p, trials, seed, true);
            let mut curve = Vec::with_capacity(family.len());
            let mut errs = Vec::with_capacity(family.len());
            for col in 0..family.len() {
                let (m, se) = mean_and_error(&rows, col, exhaustive);
                curve.push(m.powf(1.0 / p));
                errs.push(se);
            }
            (curve, errs, rows.len(), exhaustive)
        }
    };
    let (mut sup, mut argmax) = (0.0, 0);
    for (j, &v) in curve.iter().enumerate() {
        if v > sup {
            sup = v;
            argmax = j + 1;
        }
    }
    Ok(SupPartial { sup, argmax, curve, std_errors, trials, exhaustive })
}
