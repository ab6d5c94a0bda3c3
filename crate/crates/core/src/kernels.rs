//! Kernels K for the difference means K_m(t, f): spatial evaluators, transforms as
//! symbols, per-axis breakpoints for quadrature, and first-coordinate tail masses.
//!
//! Registry names: `gauss[:σ]` (normalized Gaussian), `modgauss:σ,ω` (Gaussian times
//! cos(ω h_1)), `indicator_cube` (2^{−d} 1_{[−1,1]^d}), `plateau` (order-7 smoothstep plateau
//! in h_1, 1 on [−1,1] and 0 outside [−2,2], tensored with a unit Gaussian), and sampled
//! tensor kernels loaded from a two-column file.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{composite, composite_edges};
use crate::symbols::{smoothstep7, Symbol};

/// Gaussian kernels are truncated at this many standard deviations in spatial quadrature.
pub const GAUSS_TRUNCATION: f64 = 8.0;

/// Piecewise-linear 1D profile k, zero outside its nodes; the kernel is Π_i k(h_i).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    pub name: String,
    pub nodes: Vec<(f64, f64)>,
}

impl SampledProfile {
    pub fn new(name: &str, mut nodes: Vec<(f64, f64)>) -> Result<Self> {
        nodes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if nodes.len() < 2 || nodes.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(Error::InvalidParameter(format!("kernel profile '{name}' needs at least two finite nodes")));
        }
        Ok(SampledProfile { name: name.into(), nodes })
    }

    /// Reads `h value` pairs (whitespace or comma separated, `#` comments).
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut nodes = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: Vec<f64> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{}: '{t}': {e}", path.display()))))
                .collect::<Result<_>>()?;
            if nums.len() != 2 {
                return Err(Error::Parse(format!("{}: expected two columns, got '{line}'", path.display())));
            }
            nodes.push((nums[0], nums[1]));
        }
        SampledProfile::new(&path.display().to_string(), nodes)
    }

    pub fn eval(&self, h: f64) -> f64 {
        let n = &self.nodes;
        if h < n[0].0 || h > n[n.len() - 1].0 {
            return 0.0;
        }
        let k = n.partition_point(|p| p.0 <= h).clamp(1, n.len() - 1);
        let (a, b) = (n[k - 1], n[k]);
        if b.0 == a.0 {
            return b.1;
        }
        a.1 + (b.1 - a.1) * (h - a.0) / (b.0 - a.0)
    }

    /// ∫_{−∞}^{x} k.
    pub fn cumulative(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for w in self.nodes.windows(2) {
            let (a, b) = (w[0], w[1]);
            if x <= a.0 {
                break;
            }
            let hi = x.min(b.0);
            let vh = self.eval(hi);
            acc += 0.5 * (a.1 + vh) * (hi - a.0);
        }
        acc
    }

    pub fn mass(&self) -> f64 {
        self.cumulative(f64::INFINITY)
    }

    /// ∫ k(h) e^{−ihξ} dh, exact per linear segment up to Gauss–Legendre round-off.
    pub fn transform(&self, xi: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for w in self.nodes.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b.0 <= a.0 {
                continue;
            }
            let panels = ((xi.abs() * (b.0 - a.0) / 8.0).ceil() as usize).max(1);
            for (h, wt) in composite(a.0, b.0, panels, 16) {
                let v = a.1 + (b.1 - a.1) * (h - a.0) / (b.0 - a.0);
                acc += Complex64::from_polar(wt * v, -h * xi);
            }
        }
        acc
    }

    pub fn extent(&self) -> (f64, f64) {
        (self.nodes[0].0, self.nodes[self.nodes.len() - 1].0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    /// (2πσ²)^{−d/2} e^{−|h|²/(2σ²)}
    Gauss { sigma: f64 },
    /// Gaussian times cos(ω h_1)
    ModGauss { sigma: f64, omega: f64 },
    /// 2^{−d} 1_{[−1,1]^d}
    IndicatorCube,
    /// K^{[1]}(h_1) ⊗ (2π)^{−(d−1)/2} e^{−|h'|²/2} with K^{[1]} the smoothstep plateau
    Plateau,
    Sampled(Arc<SampledProfile>),
}

/// First-marginal plateau profile: 1 on [−1,1], 1 − S(|h|−1) on 1 ≤ |h| ≤ 2.
pub fn plateau_profile(h: f64) -> f64 {
    let a = h.abs();
    if a <= 1.0 {
        1.0
    } else if a >= 2.0 {
        0.0
    } else {
        1.0 - smoothstep7(a - 1.0)
    }
}

/// ∫_0^u S with S the order-7 smoothstep.
fn smoothstep7_integral(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u.powi(5) * (7.0 + u * (-14.0 + u * (10.0 - 2.5 * u)))
}

/// ∫_a^∞ K^{[1]} for a ≥ 0.
fn plateau_upper_tail(a: f64) -> f64 {
    if a >= 2.0 {
        0.0
    } else if a >= 1.0 {
        let u = a - 1.0;
        (1.0 - u) - (0.5 - smoothstep7_integral(u))
    } else {
        (1.0 - a) + 0.5
    }
}

/// K̂^{[1]}(ξ) by composite Gauss–Legendre on [1, 2] plus the exact plateau part.
fn plateau_transform(xi: f64) -> f64 {
    let core = if xi == 0.0 { 2.0 } else { 2.0 * xi.sin() / xi };
    let panels = ((xi.abs() / 4.0).ceil() as usize).max(1);
    let ramp: f64 = composite(1.0, 2.0, panels, 24).into_iter().map(|(h, w)| w * plateau_profile(h) * (h * xi).cos()).sum();
    core + 2.0 * ramp
}

impl Kernel {
    pub fn gauss() -> Self {
        Kernel::Gauss { sigma: 1.0 }
    }

    pub fn eval(&self, h: &[f64]) -> f64 {
        let d = h.len() as i32;
        let r2: f64 = h.iter().map(|v| v * v).sum();
        match self {
            Kernel::Gauss { sigma } => (2.0 * PI * sigma * sigma).powf(-0.5 * d as f64) * (-r2 / (2.0 * sigma * sigma)).exp(),
            Kernel::ModGauss { sigma, omega } => {
                Kernel::Gauss { sigma: *sigma }.eval(h) * (omega * h[0]).cos()
            }
            Kernel::IndicatorCube => {
                if h.iter().all(|v| v.abs() <= 1.0) {
                    2f64.powi(-d)
                } else {
                    0.0
                }
            }
            Kernel::Plateau => {
                let rest: f64 = h[1..].iter().map(|v| v * v).sum();
                plateau_profile(h[0]) * (2.0 * PI).powf(-0.5 * (d - 1) as f64) * (-0.5 * rest).exp()
            }
            Kernel::Sampled(p) => h.iter().map(|&v| p.eval(v)).product(),
        }
    }

    /// K̂(ξ) = ∫ K(h) e^{−ih·ξ} dh as a symbol on R^d.
    pub fn transform(&self) -> Symbol {
        match self {
            Kernel::Gauss { sigma } => Symbol::gauss(0.5 * sigma * sigma),
            Kernel::ModGauss { sigma, omega } => {
                let (a, w) = (0.5 * sigma * sigma, *omega);
                Symbol::custom(&self.to_string(), move |xi: &[f64]| {
                    let rest: f64 = xi[1..].iter().map(|v| v * v).sum();
                    let g = |x: f64| (-a * (x * x + rest)).exp();
                    Complex64::new(0.5 * (g(xi[0] - w) + g(xi[0] + w)), 0.0)
                })
            }
            Kernel::IndicatorCube => Symbol::Sinc,
            Kernel::Plateau => Symbol::custom("plateau", |xi: &[f64]| {
                let rest: f64 = xi[1..].iter().map(|v| v * v).sum();
                Complex64::new(plateau_transform(xi[0]) * (-0.5 * rest).exp(), 0.0)
            }),
            Kernel::Sampled(p) => {
                let p = p.clone();
                Symbol::custom(&self.to_string(), move |xi: &[f64]| xi.iter().map(|&x| p.transform(x)).product())
            }
        }
    }

    /// K̂(0) = ∫ K in dimension d.
    pub fn mass(&self, d: usize) -> f64 {
        match self {
            Kernel::Gauss { .. } | Kernel::IndicatorCube => 1.0,
            Kernel::ModGauss { sigma, omega } => (-0.5 * sigma * sigma * omega * omega).exp(),
            Kernel::Plateau => 3.0,
            Kernel::Sampled(p) => p.mass().powi(d as i32),
        }
    }

    /// Quadrature breakpoints of the (truncated) support along `axis`; consecutive
    /// breakpoints bound intervals where K is smooth.
    pub fn breakpoints(&self, axis: usize) -> Vec<f64> {
        let g = |s: f64| vec![-GAUSS_TRUNCATION * s, GAUSS_TRUNCATION * s];
        match self {
            Kernel::Gauss { sigma } | Kernel::ModGauss { sigma, .. } => g(*sigma),
            Kernel::IndicatorCube => vec![-1.0, 1.0],
            Kernel::Plateau if axis == 0 => vec![-2.0, -1.0, 1.0, 2.0],
            Kernel::Plateau => g(1.0),
            Kernel::Sampled(p) => p.nodes.iter().map(|n| n.0).collect(),
        }
    }

    /// Longest panel that resolves K itself along `axis` with 16-point rules.
    pub fn panel_scale(&self, axis: usize) -> f64 {
        match self {
            Kernel::Gauss { sigma } => 2.0 * sigma,
            Kernel::ModGauss { sigma, omega } => (2.0 * sigma).min(2.0 / omega.abs().max(1e-300)),
            Kernel::IndicatorCube => f64::INFINITY,
            Kernel::Plateau if axis == 0 => f64::INFINITY,
            Kernel::Plateau => 2.0,
            Kernel::Sampled(_) => f64::INFINITY,
        }
    }

    /// Radius beyond which K is zero or negligible, used for torus guards.
    pub fn effective_radius(&self, d: usize) -> f64 {
        let a: f64 = match self {
            Kernel::Gauss { sigma } | Kernel::ModGauss { sigma, .. } => 4.0 * sigma,
            Kernel::IndicatorCube => 1.0,
            Kernel::Plateau => 2.0,
            Kernel::Sampled(p) => {
                let (lo, hi) = p.extent();
                lo.abs().max(hi.abs())
            }
        };
        a * (d as f64).sqrt()
    }

    /// Mass of K outside the quadrature box (zero for compactly supported kernels).
    pub fn truncation_mass(&self, d: usize) -> f64 {
        match self {
            Kernel::Gauss { .. } | Kernel::ModGauss { .. } => {
                let inside = 1.0 - libm::erfc(GAUSS_TRUNCATION / 2f64.sqrt());
                1.0 - inside.powi(d as i32)
            }
            Kernel::Plateau if d == 2 => libm::erfc(GAUSS_TRUNCATION / 2f64.sqrt()) * 3.0,
            _ => 0.0,
        }
    }

    /// ∫_{h_1 ≤ −a} K(h) dh over R^d.
    pub fn lower_tail(&self, a: f64, d: usize) -> f64 {
        match self {
            Kernel::Gauss { sigma } => 0.5 * libm::erfc(a / (sigma * 2f64.sqrt())),
            Kernel::ModGauss { sigma, omega } => {
                let lo = -GAUSS_TRUNCATION * sigma;
                let hi = -a;
                if hi <= lo {
                    return 0.0;
                }
                let hi = hi.min(-lo);
                let panels = (((hi - lo) / sigma.min(1.0 / omega.abs().max(1e-300))).ceil() as usize).max(1);
                composite(lo, hi, panels, 16)
                    .into_iter()
                    .map(|(h, w)| w * (2.0 * PI * sigma * sigma).powf(-0.5) * (-h * h / (2.0 * sigma * sigma)).exp() * (omega * h).cos())
                    .sum()
            }
            Kernel::IndicatorCube => 0.5 * (1.0 - a).clamp(0.0, 2.0),
            Kernel::Plateau => {
                if a >= 0.0 {
                    plateau_upper_tail(a)
                } else {
                    3.0 - plateau_upper_tail(-a)
                }
            }
            Kernel::Sampled(p) => p.cumulative(-a) * p.mass().powi(d as i32 - 1),
        }
    }

    /// ∫ |K(h)| (1 + |h|)^r dh, the moment certificate for membership in the kernel class.
    pub fn moment(&self, r: f64, d: usize) -> f64 {
        let rule: Vec<Vec<(f64, f64)>> = (0..d)
            .map(|ax| composite_edges(&self.breakpoints(ax), self.panel_scale(ax).min(0.5), 16).iter().flat_map(|p| p.points()).collect())
            .collect();
        let mut acc = 0.0;
        if d == 1 {
            for &(h, w) in &rule[0] {
                acc += w * self.eval(&[h]).abs() * (1.0 + h.abs()).powf(r);
            }
        } else {
            for &(h0, w0) in &rule[0] {
                for &(h1, w1) in &rule[1] {
                    let h = [h0, h1];
                    acc += w0 * w1 * self.eval(&h).abs() * (1.0 + (h0 * h0 + h1 * h1).sqrt()).powf(r);
                }
            }
        }
        acc
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::Gauss { sigma } => write!(f, "gauss:{sigma}"),
            Kernel::ModGauss { sigma, omega } => write!(f, "modgauss:{sigma},{omega}"),
            Kernel::IndicatorCube => write!(f, "indicator_cube"),
            Kernel::Plateau => write!(f, "plateau"),
            Kernel::Sampled(p) => write!(f, "custom:{}", p.name),
        }
    }
}

impl std::str::FromStr for Kernel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix("custom:") {
            return Ok(Kernel::Sampled(Arc::new(SampledProfile::from_file(Path::new(path))?)));
        }
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<f64> = if args.is_empty() {
            vec![]
        } else {
            args.split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("kernel '{s}': {e}"))))
                .collect::<Result<_>>()?
        };
        let bad = || Error::Parse(format!("kernel '{s}': wrong parameter count"));
        match name {
            "gauss" | "gaussian" => match nums.as_slice() {
                [] => Ok(Kernel::gauss()),
                [sg] if *sg > 0.0 => Ok(Kernel::Gauss { sigma: *sg }),
                _ => Err(bad()),
            },
            "modgauss" => match nums.as_slice() {
                [sg, w] if *sg > 0.0 => Ok(Kernel::ModGauss { sigma: *sg, omega: *w }),
                _ => Err(bad()),
            },
            "indicator_cube" if nums.is_empty() => Ok(Kernel::IndicatorCube),
            "plateau" if nums.is_empty() => Ok(Kernel::Plateau),
            _ => Err(Error::UnknownName(format!("kernel '{name}'"))),
        }
    }
}
