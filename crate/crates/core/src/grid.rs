//! Periodic grids on the torus [-L/2, L/2)^d, sampled X-valued functions and the
//! discrete Fourier transform.
//!
//! Transform convention: the continuous transform is `f̂(ξ) = ∫ f(x) e^{-ix·ξ} dx`,
//! approximated on the grid by
//!
//! ```text
//! f̂_k = h^d Σ_j f(x_j) e^{-i x_j·ξ_k},   f(x_j) = L^{-d} Σ_k f̂_k e^{i x_j·ξ_k}
//! ```
//!
//! with `h = L/n`, `x_j = -L/2 + j h` and `ξ_k = 2πk/L`. Parseval then reads
//! `Σ_j |f(x_j)|² h^d = L^{-d} Σ_k |f̂_k|²`. Translation `f(· + a)` has symbol `e^{ia·ξ}`.

use std::f64::consts::PI;
use std::fmt;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_p, Error, Result};
use crate::fft::transform_plane;
use crate::weights::Weight;

/// A validated periodic grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    d: usize,
    n: usize,
    period: f64,
}

impl GridSpec {
    pub fn new(d: usize, n: usize, period: f64) -> Result<Self> {
        if d != 1 && d != 2 {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 2, got {d}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n must be a power of two >= 8, got {n}")));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidGrid(format!("period must be positive, got {period}")));
        }
        Ok(GridSpec { d, n, period })
    }

    pub fn d(&self) -> usize {
        self.d
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn period(&self) -> f64 {
        self.period
    }
    /// Spatial spacing L/n.
    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }
    /// Frequency spacing 2π/L.
    pub fn freq_spacing(&self) -> f64 {
        2.0 * PI / self.period
    }
    /// Largest representable frequency magnitude per axis, πn/L.
    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / self.period
    }
    /// Number of grid points n^d.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.d as i32)
    }
    /// Coordinate of node index `k` along one axis.
    pub fn coord(&self, k: usize) -> f64 {
        -0.5 * self.period + k as f64 * self.spacing()
    }
    /// Signed frequency index of FFT slot `k`.
    pub fn freq_index(&self, k: usize) -> i64 {
        if k < self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }
    /// Slot of a signed frequency index (periodic).
    pub fn freq_slot(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }
    pub fn freq(&self, k: usize) -> f64 {
        self.freq_index(k) as f64 * self.freq_spacing()
    }
    /// Axis indices of a flat index (axis 0 slowest).
    pub fn axes(&self, idx: usize) -> [usize; 2] {
        if self.d == 1 {
            [idx, 0]
        } else {
            [idx / self.n, idx % self.n]
        }
    }
    /// Node position; the second entry is 0 when d = 1.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let a = self.axes(idx);
        if self.d == 1 {
            [self.coord(a[0]), 0.0]
        } else {
            [self.coord(a[0]), self.coord(a[1])]
        }
    }
    /// Frequency vector of FFT slot `idx`; the second entry is 0 when d = 1.
    pub fn frequency(&self, idx: usize) -> [f64; 2] {
        let a = self.axes(idx);
        if self.d == 1 {
            [self.freq(a[0]), 0.0]
        } else {
            [self.freq(a[0]), self.freq(a[1])]
        }
    }
    pub fn frequencies(&self) -> Vec<[f64; 2]> {
        (0..self.len()).map(|i| self.frequency(i)).collect()
    }
    pub fn points(&self) -> Vec<[f64; 2]> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
    fn sign(&self, idx: usize) -> f64 {
        let a = self.axes(idx);
        let s = if self.d == 1 { a[0] } else { a[0] + a[1] };
        if s % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Convenience constructor matching the module contract.
pub fn make_grid(d: usize, n: usize, period: f64) -> Result<GridSpec> {
    GridSpec::new(d, n, period)
}

/// Target space X: scalars or finite ℓ^q_M.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TargetSpace {
    Scalar,
    Sequence { q: f64, dim: usize },
}

impl TargetSpace {
    pub fn sequence(q: f64, dim: usize) -> Result<Self> {
        if !(q >= 1.0) || dim == 0 {
            return Err(Error::InvalidParameter(format!("sequence space needs q >= 1 and M >= 1, got q={q}, M={dim}")));
        }
        Ok(TargetSpace::Sequence { q, dim })
    }

    pub fn components(&self) -> usize {
        match self {
            TargetSpace::Scalar => 1,
            TargetSpace::Sequence { dim, .. } => *dim,
        }
    }

    /// ‖x‖_X for a vector of per-component values.
    pub fn norm<I: IntoIterator<Item = Complex64>>(&self, x: I) -> f64 {
        match self {
            TargetSpace::Scalar => x.into_iter().next().map(|z| z.norm()).unwrap_or(0.0),
            TargetSpace::Sequence { q, .. } => norm_q(x.into_iter().map(|z| z.norm()), *q),
        }
    }

    /// ‖x‖_X for nonnegative component magnitudes.
    pub fn norm_abs<I: IntoIterator<Item = f64>>(&self, x: I) -> f64 {
        match self {
            TargetSpace::Scalar => x.into_iter().next().unwrap_or(0.0),
            TargetSpace::Sequence { q, .. } => norm_q(x.into_iter(), *q),
        }
    }
}

impl fmt::Display for TargetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpace::Scalar => write!(f, "scalar"),
            TargetSpace::Sequence { q, dim } => write!(f, "lq:{q},{dim}"),
        }
    }
}

impl std::str::FromStr for TargetSpace {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "scalar" {
            return Ok(TargetSpace::Scalar);
        }
        let rest = s
            .strip_prefix("lq:")
            .ok_or_else(|| Error::Parse(format!("unknown space '{s}' (expected scalar or lq:q,M)")))?;
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!("space '{s}': expected lq:q,M")));
        }
        let q = if parts[0].trim() == "inf" {
            f64::INFINITY
        } else {
            parts[0].trim().parse::<f64>().map_err(|e| Error::Parse(format!("q in '{s}': {e}")))?
        };
        let dim = parts[1].trim().parse::<usize>().map_err(|e| Error::Parse(format!("M in '{s}': {e}")))?;
        TargetSpace::sequence(q, dim)
    }
}

pub(crate) fn norm_q<I: Iterator<Item = f64>>(x: I, q: f64) -> f64 {
    if q.is_infinite() {
        x.fold(0.0, f64::max)
    } else if q == 2.0 {
        x.map(|a| a * a).sum::<f64>().sqrt()
    } else if q == 1.0 {
        x.sum()
    } else {
        x.map(|a| a.powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

/// Values of an X-valued function on the grid. Storage is component-planar:
/// `values[c * n^d + idx]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: GridSpec,
    space: TargetSpace,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: GridSpec, space: TargetSpace, values: Vec<Complex64>) -> Result<Self> {
        let want = grid.len() * space.components();
        if values.len() != want {
            return Err(Error::ShapeMismatch(format!("expected {want} values, got {}", values.len())));
        }
        Ok(SampledFunction { grid, space, values })
    }

    pub fn zeros(grid: GridSpec, space: TargetSpace) -> Self {
        SampledFunction { grid, space, values: vec![Complex64::new(0.0, 0.0); grid.len() * space.components()] }
    }

    /// Builds a function from a per-node closure that fills all components.
    pub fn from_fn<F: Fn([f64; 2], usize) -> Complex64>(grid: GridSpec, space: TargetSpace, f: F) -> Self {
        let n = grid.len();
        let mut values = Vec::with_capacity(n * space.components());
        for c in 0..space.components() {
            for idx in 0..n {
                values.push(f(grid.point(idx), c));
            }
        }
        SampledFunction { grid, space, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
    pub fn space(&self) -> &TargetSpace {
        &self.space
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }
    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
    pub fn component(&self, c: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.values[c * n..(c + 1) * n]
    }
    pub fn value(&self, idx: usize, c: usize) -> Complex64 {
        self.values[c * self.grid.len() + idx]
    }

    /// ‖f(x)‖_X at every node.
    pub fn pointwise_norms(&self) -> Vec<f64> {
        let n = self.grid.len();
        let m = self.space.components();
        if m == 1 {
            return self.values.iter().map(|z| z.norm()).collect();
        }
        (0..n).map(|idx| self.space.norm((0..m).map(|c| self.values[c * n + idx]))).collect()
    }

    pub fn same_shape(&self, other: &SampledFunction) -> Result<()> {
        if self.grid != other.grid || self.space != other.space {
            return Err(Error::ShapeMismatch("functions live on different grids or spaces".into()));
        }
        Ok(())
    }

    pub fn scaled(&self, c: Complex64) -> SampledFunction {
        SampledFunction { grid: self.grid, space: self.space, values: self.values.iter().map(|v| v * c).collect() }
    }

    /// self + c·other
    pub fn axpy(&mut self, c: Complex64, other: &SampledFunction) -> Result<()> {
        self.same_shape(other)?;
        for (a, b) in self.values.iter_mut().zip(other.values.iter()) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum |self − other| over all entries.
    pub fn max_abs_diff(&self, other: &SampledFunction) -> f64 {
        self.values.iter().zip(other.values.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Writes the CSV layout: one `#` header line with (d, n, L, space), then one row
    /// per node with `re,im` pairs per component.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# sampled d={} n={} period={} space={}", self.grid.d, self.grid.n, self.grid.period, self.space)?;
        let n = self.grid.len();
        let m = self.space.components();
        for idx in 0..n {
            let mut row = String::new();
            for c in 0..m {
                let v = self.values[c * n + idx];
                if c > 0 {
                    row.push(',');
                }
                row.push_str(&format!("{:e},{:e}", v.re, v.im));
            }
            writeln!(out, "{row}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty sampled-function file".into()))??;
        let header = header
            .strip_prefix("# sampled")
            .ok_or_else(|| Error::Parse("missing '# sampled' header".into()))?;
        let (mut d, mut n, mut period, mut space) = (None, None, None, None);
        for tok in header.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse(format!("bad header token '{tok}'")))?;
            match k {
                "d" => d = v.parse::<usize>().ok(),
                "n" => n = v.parse::<usize>().ok(),
                "period" => period = v.parse::<f64>().ok(),
                "space" => space = Some(v.parse::<TargetSpace>()?),
                _ => return Err(Error::Parse(format!("unknown header key '{k}'"))),
            }
        }
        let grid = GridSpec::new(
            d.ok_or_else(|| Error::Parse("header lacks d".into()))?,
            n.ok_or_else(|| Error::Parse("header lacks n".into()))?,
            period.ok_or_else(|| Error::Parse("header lacks period".into()))?,
        )?;
        let space = space.ok_or_else(|| Error::Parse("header lacks space".into()))?;
        let m = space.components();
        let len = grid.len();
        let mut values = vec![Complex64::new(0.0, 0.0); len * m];
        let mut count = 0usize;
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if count >= len {
                return Err(Error::ShapeMismatch("too many rows".into()));
            }
            let nums: Vec<f64> = line
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("row {count}: {e}"))))
                .collect::<Result<_>>()?;
            if nums.len() != 2 * m {
                return Err(Error::ShapeMismatch(format!("row {count}: expected {} numbers", 2 * m)));
            }
            for c in 0..m {
                values[c * len + count] = Complex64::new(nums[2 * c], nums[2 * c + 1]);
            }
            count += 1;
        }
        if count != len {
            return Err(Error::ShapeMismatch(format!("expected {len} rows, got {count}")));
        }
        SampledFunction::new(grid, space, values)
    }
}

/// Fourier coefficients f̂_k in FFT slot order, same component layout as [`SampledFunction`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    grid: GridSpec,
    space: TargetSpace,
    coefficients: Vec<Complex64>,
}

impl SpectralFunction {
    pub fn new(grid: GridSpec, space: TargetSpace, coefficients: Vec<Complex64>) -> Result<Self> {
        let want = grid.len() * space.components();
        if coefficients.len() != want {
            return Err(Error::ShapeMismatch(format!("expected {want} coefficients, got {}", coefficients.len())));
        }
        Ok(SpectralFunction { grid, space, coefficients })
    }
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
    pub fn space(&self) -> &TargetSpace {
        &self.space
    }
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }
    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coefficients
    }
    pub fn component(&self, c: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.coefficients[c * n..(c + 1) * n]
    }
    /// The Parseval normalization constant L^{-d}.
    pub fn parseval_constant(&self) -> f64 {
        self.grid.period.powi(-(self.grid.d as i32))
    }
}

pub fn forward(f: &SampledFunction) -> SpectralFunction {
    let g = f.grid;
    let n = g.len();
    let scale = g.cell_volume();
    let mut coefficients = f.values.clone();
    for plane in coefficients.chunks_mut(n) {
        transform_plane(plane, g.n, g.d, true);
        for (idx, v) in plane.iter_mut().enumerate() {
            *v *= scale * g.sign(idx);
        }
    }
    SpectralFunction { grid: g, space: f.space, coefficients }
}

pub fn inverse(spec: &SpectralFunction) -> SampledFunction {
    let g = spec.grid;
    let n = g.len();
    let scale = g.period.powi(-(g.d as i32));
    let mut values = spec.coefficients.clone();
    for plane in values.chunks_mut(n) {
        for (idx, v) in plane.iter_mut().enumerate() {
            *v *= g.sign(idx);
        }
        transform_plane(plane, g.n, g.d, false);
        for v in plane.iter_mut() {
            *v *= scale;
        }
    }
    SampledFunction { grid: g, space: spec.space, values }
}

/// Applies a multiplier given by its values at the grid frequencies (FFT slot order).
/// The sign factors of the centred convention cancel, so raw FFTs suffice.
pub fn apply_multiplier(f: &SampledFunction, multiplier: &[Complex64]) -> Result<SampledFunction> {
    let g = f.grid;
    let n = g.len();
    if multiplier.len() != n {
        return Err(Error::ShapeMismatch(format!("multiplier has {} values, grid has {n}", multiplier.len())));
    }
    if let Some(k) = multiplier.iter().position(|m| !m.re.is_finite() || !m.im.is_finite()) {
        return Err(Error::NonFinite(format!("symbol is not finite at frequency {:?}", g.frequency(k))));
    }
    let inv_n = 1.0 / n as f64;
    let mut values = f.values.clone();
    for plane in values.chunks_mut(n) {
        transform_plane(plane, g.n, g.d, true);
        for (v, m) in plane.iter_mut().zip(multiplier.iter()) {
            *v *= m * inv_n;
        }
        transform_plane(plane, g.n, g.d, false);
    }
    Ok(SampledFunction { grid: g, space: f.space, values })
}

/// Weighted L^p norm `(Σ_cells ‖f(x_cell)‖_X^p w(cell))^{1/p}`.
pub fn lp_norm(f: &SampledFunction, p: f64, w: &Weight) -> Result<f64> {
    check_p(p)?;
    let cells = w.cell_weights(&f.grid)?;
    Ok(weighted_lp(&f.pointwise_norms(), &cells, p))
}

/// `(Σ a_i^p c_i)^{1/p}` for nonnegative pointwise norms `a` and cell weights `c`.
pub fn weighted_lp(a: &[f64], cells: &[f64], p: f64) -> f64 {
    weighted_lp_pow(a, cells, p).powf(1.0 / p)
}

/// `Σ a_i^p c_i`.
pub fn weighted_lp_pow(a: &[f64], cells: &[f64], p: f64) -> f64 {
    if p == 2.0 {
        a.iter().zip(cells).map(|(x, c)| x * x * c).sum()
    } else {
        a.iter().zip(cells).map(|(x, c)| if *x == 0.0 { 0.0 } else { x.powf(p) * c }).sum()
    }
}
