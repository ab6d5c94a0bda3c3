//! Analytic function descriptors and grid sampling.
//!
//! Registry syntax (used by the CLI):
//! `gauss[:a]`, `modgauss:a,omega`, `mode:k[,k2]`, `bump:r[,c]`, `randband:seed,band,width`,
//! prefix operators `dilate(λ)<f>`, `shift(a)<f>`, `scale(c)<f>`, and `vec[f1;f2;...]`
//! for ℓ^q_M-valued functions.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSpec, SampledFunction, TargetSpace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FunctionDesc {
    /// e^{-a|x|²}
    Gauss { a: f64 },
    /// e^{-a|x|²} cos(ω x_1)
    ModGauss { a: f64, omega: f64 },
    /// Lattice mode e^{iξ_k·x}, ξ_k = 2πk/L.
    Mode { k: [i64; 2] },
    /// exp(1 − 1/(1 − |x−c e_1|²/r²)) inside the ball, 0 outside.
    Bump { radius: f64, center: f64 },
    /// Gaussian-windowed random trigonometric sum, deterministic in `seed`.
    RandBand { seed: u64, band: f64, width: f64 },
    /// f(λx)
    Dilate(f64, Box<FunctionDesc>),
    /// f(x − a e_1)
    Shift(f64, Box<FunctionDesc>),
    /// c·f
    Scale(f64, Box<FunctionDesc>),
    /// component-wise descriptor for Sequence targets
    Vector(Vec<FunctionDesc>),
}

const RANDBAND_TERMS: usize = 8;

impl FunctionDesc {
    pub fn gauss() -> Self {
        FunctionDesc::Gauss { a: 1.0 }
    }

    pub fn dilate(self, lambda: f64) -> Self {
        FunctionDesc::Dilate(lambda, Box::new(self))
    }

    pub fn shift(self, a: f64) -> Self {
        FunctionDesc::Shift(a, Box::new(self))
    }

    /// Evaluates component `c` at point `x` on `grid` (the grid fixes d and the mode lattice).
    pub fn eval(&self, grid: &GridSpec, x: [f64; 2], c: usize) -> Complex64 {
        let d = grid.d();
        let r2 = |y: [f64; 2]| if d == 1 { y[0] * y[0] } else { y[0] * y[0] + y[1] * y[1] };
        match self {
            FunctionDesc::Gauss { a } => Complex64::new((-a * r2(x)).exp(), 0.0),
            FunctionDesc::ModGauss { a, omega } => Complex64::new((-a * r2(x)).exp() * (omega * x[0]).cos(), 0.0),
            FunctionDesc::Mode { k } => {
                let dk = grid.freq_spacing();
                let phase = dk * (k[0] as f64 * x[0] + if d == 2 { k[1] as f64 * x[1] } else { 0.0 });
                Complex64::from_polar(1.0, phase)
            }
            FunctionDesc::Bump { radius, center } => {
                let y = [x[0] - center, x[1]];
                let rho2 = r2(y) / (radius * radius);
                if rho2 >= 1.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new((1.0 - 1.0 / (1.0 - rho2)).exp(), 0.0)
                }
            }
            FunctionDesc::RandBand { seed, band, width } => {
                let window = (-r2(x) / (2.0 * width * width)).exp();
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut sum = 0.0;
                for _ in 0..RANDBAND_TERMS {
                    let w0: f64 = rng.random_range(-*band..*band);
                    let w1: f64 = rng.random_range(-*band..*band);
                    let phase: f64 = rng.random_range(0.0..2.0 * PI);
                    let amp: f64 = rng.random_range(0.5..1.0);
                    let arg = w0 * x[0] + if d == 2 { w1 * x[1] } else { 0.0 } + phase;
                    sum += amp * arg.cos();
                }
                Complex64::new(window * sum / (RANDBAND_TERMS as f64).sqrt(), 0.0)
            }
            FunctionDesc::Dilate(l, inner) => inner.eval(grid, [l * x[0], l * x[1]], c),
            FunctionDesc::Shift(a, inner) => inner.eval(grid, [x[0] - a, x[1]], c),
            FunctionDesc::Scale(s, inner) => inner.eval(grid, x, c) * *s,
            FunctionDesc::Vector(parts) => parts.get(c).map(|f| f.eval(grid, x, 0)).unwrap_or(Complex64::new(0.0, 0.0)),
        }
    }
}

/// Samples a descriptor at every grid node. Scalar descriptors sampled into a Sequence
/// space are replicated into each component.
pub fn sample(grid: &GridSpec, f: &FunctionDesc, space: TargetSpace) -> Result<SampledFunction> {
    if let FunctionDesc::Vector(parts) = f {
        if parts.len() != space.components() {
            return Err(Error::ShapeMismatch(format!(
                "vector descriptor has {} components, space has {}",
                parts.len(),
                space.components()
            )));
        }
    }
    let vector = matches!(f, FunctionDesc::Vector(_));
    let out = SampledFunction::from_fn(*grid, space, |x, c| f.eval(grid, x, if vector { c } else { 0 }));
    if let Some(k) = out.values().iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite(format!("descriptor {f} is singular at node {}", k % grid.len())));
    }
    Ok(out)
}

impl fmt::Display for FunctionDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionDesc::Gauss { a } => write!(f, "gauss:{a}"),
            FunctionDesc::ModGauss { a, omega } => write!(f, "modgauss:{a},{omega}"),
            FunctionDesc::Mode { k } => write!(f, "mode:{},{}", k[0], k[1]),
            FunctionDesc::Bump { radius, center } => write!(f, "bump:{radius},{center}"),
            FunctionDesc::RandBand { seed, band, width } => write!(f, "randband:{seed},{band},{width}"),
            FunctionDesc::Dilate(l, inner) => write!(f, "dilate({l}){inner}"),
            FunctionDesc::Shift(a, inner) => write!(f, "shift({a}){inner}"),
            FunctionDesc::Scale(c, inner) => write!(f, "scale({c}){inner}"),
            FunctionDesc::Vector(parts) => {
                write!(f, "vec[")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "]")
            }
        }
    }
}

fn parse_nums(s: &str, what: &str) -> Result<Vec<f64>> {
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{what}: '{t}': {e}"))))
        .collect()
}

impl std::str::FromStr for FunctionDesc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        for (op, ctor) in [
            ("dilate(", FunctionDesc::Dilate as fn(f64, Box<FunctionDesc>) -> FunctionDesc),
            ("shift(", FunctionDesc::Shift),
            ("scale(", FunctionDesc::Scale),
        ] {
            if let Some(rest) = s.strip_prefix(op) {
                let close = rest.find(')').ok_or_else(|| Error::Parse(format!("unclosed '(' in '{s}'")))?;
                let v = rest[..close].trim().parse::<f64>().map_err(|e| Error::Parse(format!("'{s}': {e}")))?;
                let inner: FunctionDesc = rest[close + 1..].parse()?;
                return Ok(ctor(v, Box::new(inner)));
            }
        }
        if let Some(rest) = s.strip_prefix("vec[") {
            let body = rest.strip_suffix(']').ok_or_else(|| Error::Parse(format!("unclosed '[' in '{s}'")))?;
            let parts = body.split(';').map(|p| p.parse()).collect::<Result<Vec<FunctionDesc>>>()?;
            return Ok(FunctionDesc::Vector(parts));
        }
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums = parse_nums(args, name)?;
        let bad = || Error::Parse(format!("wrong parameter count for '{s}'"));
        match name {
            "gauss" => match nums.as_slice() {
                [] => Ok(FunctionDesc::Gauss { a: 1.0 }),
                [a] => Ok(FunctionDesc::Gauss { a: *a }),
                _ => Err(bad()),
            },
            "modgauss" => match nums.as_slice() {
                [a, omega] => Ok(FunctionDesc::ModGauss { a: *a, omega: *omega }),
                _ => Err(bad()),
            },
            "mode" => match nums.as_slice() {
                [k] => Ok(FunctionDesc::Mode { k: [*k as i64, 0] }),
                [k0, k1] => Ok(FunctionDesc::Mode { k: [*k0 as i64, *k1 as i64] }),
                _ => Err(bad()),
            },
            "bump" => match nums.as_slice() {
                [] => Ok(FunctionDesc::Bump { radius: 1.0, center: 0.0 }),
                [r] => Ok(FunctionDesc::Bump { radius: *r, center: 0.0 }),
                [r, c] => Ok(FunctionDesc::Bump { radius: *r, center: *c }),
                _ => Err(bad()),
            },
            "randband" => match nums.as_slice() {
                [seed, band, width] => Ok(FunctionDesc::RandBand { seed: *seed as u64, band: *band, width: *width }),
                _ => Err(bad()),
            },
            _ => Err(Error::UnknownName(format!("function '{name}'"))),
        }
    }
}
