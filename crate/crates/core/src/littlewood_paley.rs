//! Littlewood–Paley systems Φ_{A,B}, dyadic blocks S_n, the Bessel potential J_s and
//! the norms built on them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{check_p, Error, Result};
use crate::grid::{lp_norm, weighted_lp, SampledFunction};
use crate::rademacher::{sup_partial, NormMode};
use crate::report::{EstimatorKind, NormReport};
use crate::symbols::{apply_symbol, Symbol};
use crate::weights::Weight;

/// φ̂_0 = radial order-7 smoothstep plateau (1 on |ξ| ≤ A, 0 on |ξ| ≥ B) and
/// φ̂_n = φ̂_0(2^{−n}·) − φ̂_0(2^{−n+1}·).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiSequence {
    pub a: f64,
    pub b: f64,
    pub n_max: usize,
}

impl Default for PhiSequence {
    fn default() -> Self {
        PhiSequence { a: 1.0, b: 1.5, n_max: 16 }
    }
}

pub fn make_phi(a: f64, b: f64, n_max: usize) -> Result<PhiSequence> {
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(Error::InvalidParameter(format!("need 0 < A < B, got A={a}, B={b}")));
    }
    Ok(PhiSequence { a, b, n_max })
}

impl PhiSequence {
    pub fn generator(&self) -> Symbol {
        Symbol::Plateau { a: self.a, b: self.b }
    }

    pub fn band(&self, n: usize) -> Symbol {
        let g = self.generator();
        if n == 0 {
            return g;
        }
        Symbol::Sum(vec![
            g.clone().dilate(2f64.powi(-(n as i32))),
            g.dilate(2f64.powi(1 - n as i32)).scaled(-1.0),
        ])
    }

    /// Largest n ≤ n_max with 2^n B at or below the Nyquist frequency.
    pub fn admissible(&self, nyquist: f64) -> Option<usize> {
        if self.b > nyquist {
            return None;
        }
        let mut n = 0;
        while n < self.n_max && 2f64.powi(n as i32 + 1) * self.b <= nyquist {
            n += 1;
        }
        Some(n)
    }
}

fn check_band(f: &SampledFunction, phi: &PhiSequence, n: usize) -> Result<()> {
    let nyq = f.grid().nyquist();
    if n > phi.n_max {
        return Err(Error::InvalidParameter(format!("band {n} beyond n_max = {}", phi.n_max)));
    }
    let top = 2f64.powi(n as i32) * phi.b;
    if top > nyq {
        return Err(Error::Nyquist(format!("band {n} reaches |xi| = {top}, grid Nyquist is {nyq}")));
    }
    Ok(())
}

/// S_n f = F^{−1}[φ̂_n f̂].
pub fn lp_block(f: &SampledFunction, phi: &PhiSequence, n: usize) -> Result<SampledFunction> {
    check_band(f, phi, n)?;
    apply_symbol(&phi.band(n), f)
}

fn blocks(f: &SampledFunction, phi: &PhiSequence) -> Result<Vec<SampledFunction>> {
    let top = phi
        .admissible(f.grid().nyquist())
        .ok_or_else(|| Error::Nyquist(format!("B = {} exceeds the grid Nyquist frequency", phi.b)))?;
    (0..=top).into_par_iter().map(|n| lp_block(f, phi, n)).collect()
}

/// J_s f = F^{−1}[(1+|ξ|²)^{s/2} f̂].
pub fn bessel_potential(f: &SampledFunction, s: f64) -> Result<SampledFunction> {
    if s == 0.0 {
        return Ok(f.clone());
    }
    apply_symbol(&Symbol::bessel(s), f)
}

/// ‖J_s f‖_{L^p(w;X)}.
pub fn bessel_norm(f: &SampledFunction, s: f64, p: f64, w: &Weight) -> Result<NormReport> {
    check_p(p)?;
    let value = lp_norm(&bessel_potential(f, s)?, p, w)?;
    Ok(NormReport::new(
        value,
        EstimatorKind::ExactSpectral,
        json!({ "norm": "bessel", "grid": f.grid(), "space": f.space().to_string(), "s": s, "p": p, "w": w }),
    ))
}

/// ‖(2^{sn} S_n f)_n‖_{L^p(w)[ℓ^q](X)} over the admissible bands.
pub fn triebel_norm(f: &SampledFunction, s: f64, p: f64, q: f64, w: &Weight, phi: &PhiSequence) -> Result<NormReport> {
    check_p(p)?;
    if !(q >= 1.0) {
        return Err(Error::InvalidParameter(format!("q must be in [1, inf], got {q}")));
    }
    let bl = blocks(f, phi)?;
    let norms: Vec<Vec<f64>> = bl.iter().map(|b| b.pointwise_norms()).collect();
    let nodes = f.grid().len();
    let point: Vec<f64> = (0..nodes)
        .map(|i| {
            let terms = norms.iter().enumerate().map(|(n, v)| 2f64.powf(s * n as f64) * v[i]);
            if q.is_infinite() {
                terms.fold(0.0, f64::max)
            } else {
                terms.map(|t| t.powf(q)).sum::<f64>().powf(1.0 / q)
            }
        })
        .collect();
    let cells = w.cell_weights(f.grid())?;
    let mut r = NormReport::new(
        weighted_lp(&point, &cells, p),
        EstimatorKind::ExactSpectral,
        json!({ "norm": "triebel", "grid": f.grid(), "space": f.space().to_string(), "s": s, "p": p, "q": q, "w": w, "phi": phi, "bands": bl.len() }),
    );
    r.excluded_levels = ((bl.len())..=phi.n_max).map(|n| n as i64).collect();
    Ok(r)
}

/// sup_N ‖Σ_{n≤N} ε_n 2^{ns} S_n f‖_{L^p(Ω; L^p(w;X))} with N up to `n_max` and the
/// admissible band count.
#[allow(clippy::too_many_arguments)]
pub fn randomized_lp_norm(
    f: &SampledFunction,
    s: f64,
    p: f64,
    w: &Weight,
    phi: &PhiSequence,
    n_max: usize,
    trials: usize,
    seed: u64,
) -> Result<NormReport> {
    check_p(p)?;
    let mut bl = blocks(f, phi)?;
    let available = bl.len();
    bl.truncate(n_max + 1);
    let coeffs: Vec<f64> = (0..bl.len()).map(|n| 2f64.powf(s * n as f64)).collect();
    let sp = sup_partial(&bl, &coeffs, p, w, NormMode::Rademacher { trials, seed })?;
    let mut r = NormReport::new(
        sp.sup,
        if sp.exhaustive { EstimatorKind::ExactSpectral } else { EstimatorKind::MonteCarlo },
        json!({ "norm": "randomized-lp", "grid": f.grid(), "space": f.space().to_string(), "s": s, "p": p, "w": w, "phi": phi,
                "n_max": n_max, "trials": sp.trials, "seed": seed, "exhaustive": sp.exhaustive }),
    );
    r.std_error = Some(sp.std_errors[sp.argmax.max(1) - 1]);
    r.curve = sp.curve;
    r.excluded_levels = (available..=phi.n_max.max(n_max)).map(|n| n as i64).collect();
    Ok(r)
}
