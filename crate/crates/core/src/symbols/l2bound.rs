//! Empirical ℓ²-bound of a multiplier family: the largest observed ratio
//! ‖(Σ_j |T_{m_j} f_j|²)^{1/2}‖ / ‖(Σ_j |f_j|²)^{1/2}‖ over random test families.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Symbol;
use crate::error::{check_p, Error, Result};
use crate::grid::{inverse, GridSpec, SampledFunction, SpectralFunction, TargetSpace};
use crate::rademacher::square_function_norm;
use crate::weights::Weight;

pub const FAMILY_MIN: usize = 8;
pub const FAMILY_MAX: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L2BoundReport {
    pub value: f64,
    /// Distinct symbols after canonicalization.
    pub symbols: usize,
    pub families: usize,
    pub seed: u64,
    /// Ratio per random family, then one per symbol for the single-member draws.
    pub ratios: Vec<f64>,
}

/// Random function with Gaussian spectrum windowed around a log-uniform radius.
pub fn random_family_member(grid: &GridSpec, space: TargetSpace, rng: &mut ChaCha8Rng) -> Result<SampledFunction> {
    let dk = grid.freq_spacing();
    let top = grid.nyquist();
    let radius = dk * (top / dk).powf(rng.random::<f64>());
    let width = 0.5 * radius + dk;
    let n = grid.len();
    let d = grid.d();
    let mut coefficients = Vec::with_capacity(n * space.components());
    for _ in 0..space.components() {
        for idx in 0..n {
            let xi = grid.frequency(idx);
            let r = xi[..d].iter().map(|v| v * v).sum::<f64>().sqrt();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let window = (-0.5 * ((r - radius) / width).powi(2)).exp();
            coefficients.push(Complex64::new(re, im) * window);
        }
    }
    Ok(inverse(&SpectralFunction::new(*grid, space, coefficients)?))
}

/// A family of `size` random members drawn from stream `stream` of `seed`.
pub fn random_family(grid: &GridSpec, space: TargetSpace, size: usize, seed: u64, stream: u64) -> Result<Vec<SampledFunction>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..size).map(|_| random_family_member(grid, space, &mut rng)).collect()
}

/// Sorts symbols by their grid values and removes exact duplicates, so the estimate
/// does not depend on list order.
fn canonical(symbols: &[Symbol], grid: &GridSpec) -> Vec<Vec<Complex64>> {
    let mut vals: Vec<Vec<Complex64>> = symbols.iter().map(|m| m.grid_values(grid)).collect();
    let key = |v: &Vec<Complex64>| v.iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect::<Vec<u64>>();
    vals.sort_by_key(key);
    vals.dedup();
    vals
}

fn ratio(values: &[&Vec<Complex64>], fs: &[SampledFunction], p: f64, w: &Weight) -> Result<f64> {
    let ones = vec![1.0; fs.len()];
    let den = square_function_norm(fs, &ones, p, w)?;
    if den == 0.0 {
        return Err(Error::NonFinite("zero test family".into()));
    }
    let images = fs
        .iter()
        .zip(values)
        .map(|(f, m)| crate::grid::apply_multiplier(f, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(square_function_norm(&images, &ones, p, w)? / den)
}

/// Lower bound for the ℓ²-bound of {T_{m_j}}: `families` random families of 8–32
/// members (each member paired with a random symbol of the set), plus one single-member
/// draw per symbol.
pub fn l2_bound_estimate(
    symbols: &[Symbol],
    grid: &GridSpec,
    space: TargetSpace,
    p: f64,
    w: &Weight,
    families: usize,
    seed: u64,
) -> Result<L2BoundReport> {
    check_p(p)?;
    if symbols.is_empty() {
        return Err(Error::InvalidParameter("symbol list is empty".into()));
    }
    let vals = canonical(symbols, grid);
    let fam: Vec<f64> = (0..families as u64)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(2 * k);
            let size = rng.random_range(FAMILY_MIN..=FAMILY_MAX);
            let picks: Vec<&Vec<Complex64>> = (0..size).map(|_| &vals[rng.random_range(0..vals.len())]).collect();
            let fs = (0..size).map(|_| random_family_member(grid, space, &mut rng)).collect::<Result<Vec<_>>>()?;
            ratio(&picks, &fs, p, w)
        })
        .collect::<Result<Vec<_>>>()?;
    let singles: Vec<f64> = (0..vals.len())
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(2 * i as u64 + 1);
            let f = random_family_member(grid, space, &mut rng)?;
            ratio(&[&vals[i]], &[f], p, w)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut ratios = fam;
    ratios.extend(singles);
    let value = ratios.iter().copied().fold(0.0, f64::max);
    Ok(L2BoundReport { value, symbols: vals.len(), families, seed, ratios })
}
