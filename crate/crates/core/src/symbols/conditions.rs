//! Sampled evaluators for multiplier conditions: the Mihlin norm, the Tauberian annulus
//! constant, the dilation-family constants C_0/C_∞ (Mihlin and Hölder variants) and the
//! dyadic Hölder seminorm [M]_γ. Every value is a sampled supremum, hence a lower bound.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Symbol;
use crate::error::{Error, Result};
use crate::quad::ls_slope;

/// Envelope slopes (in log2 r) beyond this tolerance flag a diverging supremum.
pub const DIVERGENCE_SLOPE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialSampling {
    pub r_min: f64,
    pub r_max: f64,
    pub per_decade: usize,
    /// Angular samples on the circle (d = 2 only).
    pub angles: usize,
}

impl Default for RadialSampling {
    fn default() -> Self {
        RadialSampling { r_min: 2f64.powi(-12), r_max: 2f64.powi(12), per_decade: 64, angles: 32 }
    }
}

impl RadialSampling {
    /// Sampling matched to m(λ·): radii divided by λ.
    pub fn dilated(&self, lambda: f64) -> Self {
        RadialSampling { r_min: self.r_min / lambda, r_max: self.r_max / lambda, ..*self }
    }

    /// Log-uniform radii in [lo, hi] at this density (endpoints included).
    fn radii_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let decades = (hi / lo).log10();
        let k = ((decades * self.per_decade as f64).ceil() as usize).max(1);
        (0..=k).map(|i| lo * (hi / lo).powf(i as f64 / k as f64)).collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.radii_in(self.r_min, self.r_max)
    }

    /// Unit directions: ±1 in d = 1, `angles` points on the circle in d = 2.
    pub fn directions(&self, d: usize) -> Vec<[f64; 2]> {
        if d == 1 {
            vec![[1.0, 0.0], [-1.0, 0.0]]
        } else {
            (0..self.angles).map(|k| {
                let a = 2.0 * PI * k as f64 / self.angles as f64;
                [a.cos(), a.sin()]
            }).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    pub value: f64,
    pub diverging: bool,
    /// (radius or dyadic index, envelope value) pairs.
    pub curve: Vec<(f64, f64)>,
}

impl Quantity {
    pub fn finite(&self) -> bool {
        self.value.is_finite() && !self.diverging
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub symbol: String,
    pub quantities: Vec<Quantity>,
    pub sampling: RadialSampling,
    /// "analytic" or the finite-difference step rule.
    pub derivatives: String,
}

impl ConditionReport {
    pub fn get(&self, name: &str) -> Option<&Quantity> {
        self.quantities.iter().find(|q| q.name == name)
    }
    pub fn value(&self, name: &str) -> Option<f64> {
        self.get(name).map(|q| q.value)
    }
    pub fn all_finite(&self) -> bool {
        self.quantities.iter().all(|q| q.finite())
    }
}

fn derivative_label(m: &Symbol) -> String {
    if m.has_analytic_derivatives() {
        "analytic".into()
    } else {
        "central differences, h = |xi|*1e-5 (order 1), |xi|*eps^(1/(k+2)) (order k)".into()
    }
}

/// Multi-indices with |α| in [lo, hi] for dimension d.
fn multi_indices(d: usize, lo: usize, hi: usize) -> Vec<[usize; 2]> {
    let mut out = Vec::new();
    for t in lo..=hi {
        if d == 1 {
            out.push([t, 0]);
        } else {
            for b in 0..=t {
                out.push([t - b, b]);
            }
        }
    }
    out
}

fn check_dim(d: usize) -> Result<()> {
    if d == 1 || d == 2 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("dimension must be 1 or 2, got {d}")))
    }
}

/// max over directions and α of `|ξ|^{|α|+shift} |D^α m(ξ)|` at radius r; all orders up to N
/// are obtained from one jet for analytic symbols.
fn envelope_at(m: &Symbol, d: usize, r: f64, idx: &[[usize; 2]], shift: f64, dirs: &[[f64; 2]]) -> Result<f64> {
    let order = idx.iter().map(|a| a[0] + a[1]).max().unwrap_or(0);
    let mut best = 0.0f64;
    for u in dirs {
        let xi = [r * u[0], r * u[1]];
        let jet = m.jet(&xi[..d], order);
        for a in idx {
            let k = a[0] + a[1];
            let v = match &jet {
                Some(j) => j.derivative(a[0], a[1]),
                None => m.fd_derivative(&xi[..d], *a),
            };
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite(format!("derivative {a:?} of {m} at {xi:?}")));
            }
            let scale = if shift == 0.0 { r.powi(k as i32) } else { r.powi(k as i32) * r.powf(shift) };
            best = best.max(scale * v.norm());
        }
    }
    Ok(best)
}

/// Sampled 𝓜_N norm sup_{|α|≤N} sup_{ξ≠0} |ξ|^{|α|}|D^α m(ξ)|.
pub fn mihlin_norm(m: &Symbol, d: usize, order: usize, sampling: &RadialSampling) -> Result<f64> {
    check_dim(d)?;
    let idx = multi_indices(d, 0, order);
    let dirs = sampling.directions(d);
    let mut best = 0.0f64;
    for r in sampling.radii() {
        best = best.max(envelope_at(m, d, r, &idx, 0.0, &dirs)?);
    }
    Ok(best)
}

/// Minimum of |m| over the closed annulus ε/2 ≤ |ξ| ≤ 2ε (512 radii, 64 angles in d = 2).
pub fn tauberian_constant(m: &Symbol, d: usize, eps: f64) -> Result<f64> {
    check_dim(d)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("annulus radius must be positive, got {eps}")));
    }
    let radial = 512;
    let dirs: Vec<[f64; 2]> = if d == 1 {
        vec![[1.0, 0.0], [-1.0, 0.0]]
    } else {
        (0..64).map(|k| {
            let a = 2.0 * PI * k as f64 / 64.0;
            [a.cos(), a.sin()]
        }).collect()
    };
    let mut best = f64::INFINITY;
    for i in 0..radial {
        let r = 0.5 * eps + 1.5 * eps * i as f64 / (radial - 1) as f64;
        for u in &dirs {
            let xi = [r * u[0], r * u[1]];
            best = best.min(m.eval(&xi[..d]).norm());
        }
    }
    Ok(best)
}

/// Per-octave maxima of a radial curve, keyed by the octave's lower edge in log2 r.
fn octave_maxima(curve: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for &(r, v) in curve {
        let key = r.log2().floor();
        match out.last_mut() {
            Some(last) if last.0 == key => last.1 = last.1.max(v),
            _ => out.push((key, v)),
        }
    }
    out
}

/// log2-slope of the octave envelope over the outer half of the samples (`tail_high`)
/// or the inner half. Positive slope at large radii / negative at small radii means growth.
fn growth(curve: &[(f64, f64)], tail_high: bool) -> bool {
    let oct = octave_maxima(curve);
    if oct.iter().any(|p| !p.1.is_finite()) {
        return true;
    }
    let pts: Vec<(f64, f64)> = oct.iter().filter(|p| p.1 > 0.0).map(|p| (p.0, p.1.log2())).collect();
    if pts.len() < 4 {
        return false;
    }
    let half = pts.len() / 2;
    let slice = if tail_high { &pts[half..] } else { &pts[..half] };
    let slope = ls_slope(slice);
    if tail_high {
        slope > DIVERGENCE_SLOPE
    } else {
        slope < -DIVERGENCE_SLOPE
    }
}

fn sup_of(curve: &[(f64, f64)]) -> f64 {
    curve.iter().map(|p| p.1).fold(0.0, f64::max)
}

fn quantity(name: &str, curve: Vec<(f64, f64)>, tail_high: bool) -> Quantity {
    let diverging = growth(&curve, tail_high);
    Quantity { name: name.into(), value: sup_of(&curve), diverging, curve }
}

/// Combines two radial curves pointwise by max (same radii).
fn merge(a: Vec<(f64, f64)>, b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    a.into_iter().zip(b).map(|(x, y)| (x.0, x.1.max(y.1))).collect()
}

/// C_0 and C_∞ of the Mihlin-type dilation theorem with derivatives up to `order`
/// (d + 2 in the theorem).
pub fn dilation_conditions(
    m: &Symbol,
    d: usize,
    delta0: f64,
    delta_inf: f64,
    order: usize,
    sampling: &RadialSampling,
) -> Result<ConditionReport> {
    check_dim(d)?;
    let m0 = m.eval(&[0.0, 0.0][..d]);
    if !m0.re.is_finite() || !m0.im.is_finite() {
        return Err(Error::NonFinite(format!("{m} is undefined at the origin")));
    }
    let dirs = sampling.directions(d);
    let inner = sampling.radii_in(sampling.r_min, 1.0);
    let outer = sampling.radii_in(1.0, sampling.r_max);

    let mut c0_value = Vec::with_capacity(inner.len());
    let mut c0_deriv = Vec::with_capacity(inner.len());
    let idx_hi = multi_indices(d, 1, order);
    for &r in &inner {
        let mut v = 0.0f64;
        for u in &dirs {
            let xi = [r * u[0], r * u[1]];
            v = v.max(r.powf(-delta0) * (m.eval(&xi[..d]) - m0).norm());
        }
        c0_value.push((r, v));
        c0_deriv.push((r, envelope_at(m, d, r, &idx_hi, -delta0, &dirs)?));
    }
    let idx_all = multi_indices(d, 0, order);
    let mut cinf = Vec::with_capacity(outer.len());
    for &r in &outer {
        cinf.push((r, envelope_at(m, d, r, &idx_all, delta_inf, &dirs)?));
    }
    let c0 = quantity("C_0", merge(c0_value, &c0_deriv), false);
    let ci = quantity("C_inf", cinf, true);
    Ok(ConditionReport { symbol: m.to_string(), quantities: vec![c0, ci], sampling: *sampling, derivatives: derivative_label(m) })
}

/// Sampled C^γ seminorm of M on [lo, hi] (same sign): max pairwise |M(x)−M(y)|/|x−y|^γ
/// over log-uniform nodes with `per_octave` points per octave.
pub fn interval_hoelder(m: &Symbol, lo: f64, hi: f64, gamma: f64, per_octave: usize) -> f64 {
    let (a, b) = (lo.abs().min(hi.abs()), lo.abs().max(hi.abs()));
    let sign = if lo < 0.0 { -1.0 } else { 1.0 };
    let k = (((b / a).log2() * per_octave as f64).round() as usize).max(1);
    let xs: Vec<f64> = (0..=k).map(|i| sign * a * 2f64.powf((b / a).log2() * i as f64 / k as f64)).collect();
    let vals: Vec<_> = xs.iter().map(|&x| m.eval(&[x])).collect();
    let mut best = 0.0f64;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let q = (vals[i] - vals[j]).norm() / (xs[i] - xs[j]).abs().powf(gamma);
            best = best.max(q);
        }
    }
    best
}

/// [M]_γ = sup_{k, j=±1} 2^{kγ} [M|_{I_{k,j}}]_{C^γ}, I_{k,j} = j·[2^{k−2}, 2^{k+2}],
/// with per-k values (max over j) for k in `k_range`.
pub fn hoelder_seminorm(m: &Symbol, gamma: f64, k_range: (i32, i32), per_octave: usize) -> Result<(f64, Vec<(i32, f64)>)> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!("Hölder exponent must lie in (0,1), got {gamma}")));
    }
    let mut curve = Vec::new();
    for k in k_range.0..=k_range.1 {
        let lo = 2f64.powi(k - 2);
        let hi = 2f64.powi(k + 2);
        let v = interval_hoelder(m, lo, hi, gamma, per_octave).max(interval_hoelder(m, -lo, -hi, gamma, per_octave));
        curve.push((k, 2f64.powf(k as f64 * gamma) * v));
    }
    let sup = curve.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok((sup, curve))
}

/// Hölder-type conditions in d = 1: the seminorm [M]_γ, the derivative form (C_0, C_∞)
/// with interpolation parameter θ, and the seminorm form (C_0^γ, C_∞^γ).
pub fn hoelder_conditions(
    m: &Symbol,
    gamma: f64,
    delta0: f64,
    delta_inf: f64,
    theta: f64,
    sampling: &RadialSampling,
) -> Result<ConditionReport> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!("Hölder exponent must lie in (0,1), got {gamma}")));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidParameter(format!("theta must lie in [0,1], got {theta}")));
    }
    let m0 = m.eval(&[0.0]);
    if !m0.re.is_finite() || !m0.im.is_finite() {
        return Err(Error::NonFinite(format!("{m} is undefined at the origin")));
    }
    let deriv = |x: f64| -> Result<f64> {
        let v = m.derivative(&[x], [1, 0]);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v.norm())
        } else {
            Err(Error::NonFinite(format!("derivative of {m} at {x}")))
        }
    };
    let inner = sampling.radii_in(sampling.r_min, 1.0);
    let outer = sampling.radii_in(1.0, sampling.r_max);

    let mut c0 = Vec::with_capacity(inner.len());
    for &r in &inner {
        let mut v = 0.0f64;
        for x in [r, -r] {
            v = v.max(r.powf(-delta0) * (m.eval(&[x]) - m0).norm());
            v = v.max(r.powf(1.0 - delta0) * deriv(x)?);
        }
        c0.push((r, v));
    }
    let e_val = delta_inf.max((gamma + delta_inf) * (1.0 - theta) / (1.0 - gamma));
    let e_der = (gamma + delta_inf) * theta / gamma;
    let mut ci = Vec::with_capacity(outer.len());
    for &r in &outer {
        let mut v = 0.0f64;
        for x in [r, -r] {
            v = v.max(r.powf(e_val) * m.eval(&[x]).norm());
            v = v.max(r.powf(e_der) * deriv(x)?);
        }
        ci.push((r, v));
    }

    let k_lo = sampling.r_min.log2().round() as i32;
    let k_hi = sampling.r_max.log2().round() as i32;
    let per_octave = 32;
    let (_, hcurve) = hoelder_seminorm(m, gamma, (k_lo, k_hi), per_octave)?;
    // 2^{kγ}[M]_{I_k} rescaled by 2^{−kδ_0} (k ≤ −1) and 2^{kδ_∞} (k ≥ 0)
    let mut h0 = Vec::new();
    let mut hi = Vec::new();
    for &(k, v) in &hcurve {
        let r = 2f64.powi(k);
        if k <= -1 {
            h0.push((r, v * r.powf(-delta0)));
        } else {
            hi.push((r, v * r.powf(delta_inf)));
        }
    }
    let mut sup_val0 = Vec::with_capacity(inner.len());
    for &r in &inner {
        let v = [r, -r].iter().map(|&x| r.powf(-delta0) * (m.eval(&[x]) - m0).norm()).fold(0.0, f64::max);
        sup_val0.push((r, v));
    }
    let mut sup_vali = Vec::with_capacity(outer.len());
    for &r in &outer {
        let v = [r, -r].iter().map(|&x| r.powf(delta_inf) * m.eval(&[x]).norm()).fold(0.0, f64::max);
        sup_vali.push((r, v));
    }
    let hs = hcurve.iter().map(|p| (2f64.powi(p.0), p.1)).collect::<Vec<_>>();
    let seminorm = Quantity { name: "holder_seminorm".into(), value: sup_of(&hs), diverging: growth(&hs, true) || growth(&hs, false), curve: hs };

    let g0 = combine_dyadic("C_0_holder", sup_val0, h0, false);
    let gi = combine_dyadic("C_inf_holder", sup_vali, hi, true);
    Ok(ConditionReport {
        symbol: m.to_string(),
        quantities: vec![seminorm, quantity("C_0", c0, false), quantity("C_inf", ci, true), g0, gi],
        sampling: *sampling,
        derivatives: derivative_label(m),
    })
}

/// Max of a radial value curve and a per-octave seminorm curve, each tested for growth.
fn combine_dyadic(name: &str, values: Vec<(f64, f64)>, dyadic: Vec<(f64, f64)>, tail_high: bool) -> Quantity {
    let a = quantity(name, values, tail_high);
    let b = quantity(name, dyadic.clone(), tail_high);
    let mut curve = a.curve;
    curve.extend(dyadic);
    curve.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let diverging = a.diverging || b.diverging;
    Quantity { name: name.into(), value: a.value.max(b.value), diverging, curve }
}
