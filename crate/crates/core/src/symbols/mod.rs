//! Fourier multiplier symbols as expression trees, with exact derivatives for the
//! built-ins (via [`jet::Jet`]) and central finite differences for custom symbols.
//!
//! Registry names: `const:c`, `sign`, `gauss[:a]` (e^{−a|ξ|²}), `sinc`
//! (also `indicator_cube_d1`; Π_i sin ξ_i/ξ_i), `bessel(s)` ((1+|ξ|²)^{s/2}),
//! `plateau:A,B` (radial smoothstep, 1 below A and 0 above B), `translate:h[,h2]`
//! (e^{ih·ξ}), `minabs` (min(1,|ξ|)), and the prefix operator `dilate(λ)<symbol>` for m(λ·).

pub mod conditions;
pub mod jet;
pub mod l2bound;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{apply_multiplier, GridSpec, SampledFunction};
use jet::Jet;

pub use conditions::{
    dilation_conditions, hoelder_conditions, hoelder_seminorm, mihlin_norm, tauberian_constant, ConditionReport,
    RadialSampling,
};
pub use l2bound::{l2_bound_estimate, random_family, L2BoundReport};

type CustomFn = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// Symbol given by an evaluator only; derivatives come from finite differences.
#[derive(Clone)]
pub struct CustomSymbol {
    pub name: String,
    pub eval: CustomFn,
}

impl fmt::Debug for CustomSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomSymbol({})", self.name)
    }
}

#[derive(Debug, Clone)]
pub enum Symbol {
    Const(Complex64),
    /// sign(ξ_1)
    Sign,
    /// e^{−a|ξ|²}
    Gauss { a: f64 },
    /// Π_i sinc(ξ_i)
    Sinc,
    /// (1+|ξ|²)^{s/2}
    Bessel { s: f64 },
    /// 1 − S((|ξ|−A)/(B−A)) with the order-7 smoothstep S
    Plateau { a: f64, b: f64 },
    /// e^{ih·ξ}
    Translation { h: [f64; 2] },
    /// m(λξ)
    Dilate(Box<Symbol>, f64),
    Scaled(Complex64, Box<Symbol>),
    Sum(Vec<Symbol>),
    Product(Vec<Symbol>),
    Custom(CustomSymbol),
}

/// Order-7 smoothstep 35t⁴ − 84t⁵ + 70t⁶ − 20t⁷ on [0, 1].
pub const SMOOTHSTEP7: [f64; 8] = [0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0];

pub fn smoothstep7(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)))
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn norm2(xi: &[f64]) -> f64 {
    xi.iter().map(|v| v * v).sum()
}

fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        t.sin() / t
    }
}

impl Symbol {
    pub fn constant(v: f64) -> Self {
        Symbol::Const(c(v))
    }
    pub fn bessel(s: f64) -> Self {
        Symbol::Bessel { s }
    }
    pub fn gauss(a: f64) -> Self {
        Symbol::Gauss { a }
    }
    pub fn dilate(self, lambda: f64) -> Self {
        Symbol::Dilate(Box::new(self), lambda)
    }
    pub fn scaled(self, s: f64) -> Self {
        Symbol::Scaled(c(s), Box::new(self))
    }
    pub fn custom<F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static>(name: &str, f: F) -> Self {
        Symbol::Custom(CustomSymbol { name: name.to_string(), eval: Arc::new(f) })
    }
    /// min(1, |ξ|), available for Hölder-seminorm checks.
    pub fn min_abs() -> Self {
        Symbol::custom("minabs", |xi: &[f64]| c(norm2(xi).sqrt().min(1.0)))
    }

    /// Value at ξ (length d).
    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        match self {
            Symbol::Const(v) => *v,
            Symbol::Sign => c(if xi[0] > 0.0 {
                1.0
            } else if xi[0] < 0.0 {
                -1.0
            } else {
                0.0
            }),
            Symbol::Gauss { a } => c((-a * norm2(xi)).exp()),
            Symbol::Sinc => c(xi.iter().map(|&t| sinc(t)).product()),
            Symbol::Bessel { s } => {
                if *s == 0.0 {
                    c(1.0)
                } else {
                    c((1.0 + norm2(xi)).powf(0.5 * s))
                }
            }
            Symbol::Plateau { a, b } => c(1.0 - smoothstep7((norm2(xi).sqrt() - a) / (b - a))),
            Symbol::Translation { h } => {
                let phase: f64 = xi.iter().zip(h.iter()).map(|(x, y)| x * y).sum();
                Complex64::from_polar(1.0, phase)
            }
            Symbol::Dilate(inner, l) => {
                let y: Vec<f64> = xi.iter().map(|v| v * l).collect();
                inner.eval(&y)
            }
            Symbol::Scaled(s, inner) => s * inner.eval(xi),
            Symbol::Sum(parts) => parts.iter().map(|p| p.eval(xi)).sum(),
            Symbol::Product(parts) => parts.iter().fold(c(1.0), |acc, p| acc * p.eval(xi)),
            Symbol::Custom(cs) => (cs.eval)(xi),
        }
    }

    /// True when every node has analytic derivatives.
    pub fn has_analytic_derivatives(&self) -> bool {
        match self {
            Symbol::Custom(_) => false,
            Symbol::Dilate(inner, _) | Symbol::Scaled(_, inner) => inner.has_analytic_derivatives(),
            Symbol::Sum(parts) | Symbol::Product(parts) => parts.iter().all(|p| p.has_analytic_derivatives()),
            _ => true,
        }
    }

    fn jet_of(&self, vars: &[Jet]) -> Option<Jet> {
        let d = vars[0].dim();
        let order = vars[0].order();
        let konst = |v: Complex64| Jet::constant(d, order, v);
        let r2 = || {
            let mut acc = &vars[0] * &vars[0];
            for v in &vars[1..] {
                acc = &acc + &(v * v);
            }
            acc
        };
        Some(match self {
            Symbol::Const(v) => konst(*v),
            Symbol::Sign => {
                let x = vars[0].value().re;
                konst(c(if x > 0.0 {
                    1.0
                } else if x < 0.0 {
                    -1.0
                } else {
                    0.0
                }))
            }
            Symbol::Gauss { a } => r2().scale(c(-a)).exp(),
            Symbol::Sinc => {
                let mut acc = vars[0].sinc();
                for v in &vars[1..] {
                    acc = &acc * &v.sinc();
                }
                acc
            }
            Symbol::Bessel { s } => {
                if *s == 0.0 {
                    konst(c(1.0))
                } else {
                    r2().add_const(c(1.0)).powf(0.5 * s)
                }
            }
            Symbol::Plateau { a, b } => {
                let r = r2();
                let rv = r.value().re.sqrt();
                let t = (rv - a) / (b - a);
                if t <= 0.0 {
                    konst(c(1.0))
                } else if t >= 1.0 {
                    konst(c(0.0))
                } else {
                    let u = r.sqrt().add_const(c(-a)).scale(c(1.0 / (b - a)));
                    let s = u.poly(&SMOOTHSTEP7);
                    (&konst(c(1.0))) - &s
                }
            }
            Symbol::Translation { h } => {
                let mut phase = vars[0].scale(c(h[0]));
                for (v, hh) in vars[1..].iter().zip(h[1..].iter()) {
                    phase = &phase + &v.scale(c(*hh));
                }
                phase.scale(Complex64::new(0.0, 1.0)).exp()
            }
            Symbol::Dilate(inner, l) => {
                let scaled: Vec<Jet> = vars.iter().map(|v| v.scale(c(*l))).collect();
                inner.jet_of(&scaled)?
            }
            Symbol::Scaled(s, inner) => inner.jet_of(vars)?.scale(*s),
            Symbol::Sum(parts) => {
                let mut acc = konst(c(0.0));
                for p in parts {
                    acc = &acc + &p.jet_of(vars)?;
                }
                acc
            }
            Symbol::Product(parts) => {
                let mut acc = konst(c(1.0));
                for p in parts {
                    acc = &acc * &p.jet_of(vars)?;
                }
                acc
            }
            Symbol::Custom(_) => return None,
        })
    }

    /// Taylor jet of order `order` at ξ, or `None` for symbols without analytic derivatives.
    pub fn jet(&self, xi: &[f64], order: usize) -> Option<Jet> {
        let d = xi.len();
        let vars: Vec<Jet> = (0..d).map(|k| Jet::variable(d, order, k, xi[k])).collect();
        self.jet_of(&vars)
    }

    /// D^α m(ξ) by central finite differences with step |ξ|·10^{−5} for first order
    /// and |ξ|·ε^{1/(k+2)} for order k ≥ 2.
    pub fn fd_derivative(&self, xi: &[f64], alpha: [usize; 2]) -> Complex64 {
        let r = norm2(xi).sqrt().max(f64::MIN_POSITIVE);
        let steps: Vec<f64> = alpha
            .iter()
            .map(|&k| match k {
                0 => 0.0,
                1 => r * 1e-5,
                _ => r * f64::EPSILON.powf(1.0 / (k as f64 + 2.0)),
            })
            .collect();
        let stencil = |k: usize| -> Vec<(f64, f64)> {
            (0..=k)
                .map(|i| {
                    let coef = binomial(k, i) * if i % 2 == 0 { 1.0 } else { -1.0 };
                    (0.5 * k as f64 - i as f64, coef)
                })
                .collect()
        };
        let s0 = stencil(alpha[0]);
        let s1 = if xi.len() > 1 { stencil(alpha[1]) } else { vec![(0.0, 1.0)] };
        let mut acc = c(0.0);
        for &(o0, c0) in &s0 {
            for &(o1, c1) in &s1 {
                let mut y = xi.to_vec();
                y[0] += o0 * steps[0];
                if y.len() > 1 {
                    y[1] += o1 * steps[1];
                }
                acc += self.eval(&y) * (c0 * c1);
            }
        }
        let mut denom = 1.0;
        for (k, &a) in alpha.iter().enumerate().take(xi.len()) {
            if a > 0 {
                denom *= steps[k].powi(a as i32);
            }
        }
        acc / denom
    }

    /// D^α m(ξ): analytic when available, finite differences otherwise.
    pub fn derivative(&self, xi: &[f64], alpha: [usize; 2]) -> Complex64 {
        let order = alpha[0] + alpha[1];
        match self.jet(xi, order) {
            Some(j) => j.derivative(alpha[0], alpha[1]),
            None => self.fd_derivative(xi, alpha),
        }
    }

    /// Values at the grid frequencies, FFT slot order.
    pub fn grid_values(&self, grid: &GridSpec) -> Vec<Complex64> {
        let d = grid.d();
        (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let xi = grid.frequency(idx);
                self.eval(&xi[..d])
            })
            .collect()
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

/// T_m f = F^{−1}[m f̂], componentwise.
pub fn apply_symbol(m: &Symbol, f: &SampledFunction) -> Result<SampledFunction> {
    apply_multiplier(f, &m.grid_values(f.grid()))
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Const(v) if v.im == 0.0 => write!(f, "const:{}", v.re),
            Symbol::Const(v) => write!(f, "const:{},{}", v.re, v.im),
            Symbol::Sign => write!(f, "sign"),
            Symbol::Gauss { a } => write!(f, "gauss:{a}"),
            Symbol::Sinc => write!(f, "sinc"),
            Symbol::Bessel { s } => write!(f, "bessel({s})"),
            Symbol::Plateau { a, b } => write!(f, "plateau:{a},{b}"),
            Symbol::Translation { h } => write!(f, "translate:{},{}", h[0], h[1]),
            Symbol::Dilate(inner, l) => write!(f, "dilate({l}){inner}"),
            Symbol::Scaled(s, inner) => write!(f, "scale({}){inner}", s.re),
            Symbol::Sum(parts) => {
                write!(f, "sum[")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "]")
            }
            Symbol::Product(parts) => {
                write!(f, "prod[")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "]")
            }
            Symbol::Custom(cs) => write!(f, "{}", cs.name),
        }
    }
}

impl std::str::FromStr for Symbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("dilate(") {
            let close = rest.find(')').ok_or_else(|| Error::Parse(format!("unclosed '(' in '{s}'")))?;
            let l = rest[..close].trim().parse::<f64>().map_err(|e| Error::Parse(format!("'{s}': {e}")))?;
            return Ok(rest[close + 1..].parse::<Symbol>()?.dilate(l));
        }
        if let Some(rest) = s.strip_prefix("scale(") {
            let close = rest.find(')').ok_or_else(|| Error::Parse(format!("unclosed '(' in '{s}'")))?;
            let l = rest[..close].trim().parse::<f64>().map_err(|e| Error::Parse(format!("'{s}': {e}")))?;
            return Ok(rest[close + 1..].parse::<Symbol>()?.scaled(l));
        }
        if let Some(rest) = s.strip_prefix("bessel(") {
            let body = rest.strip_suffix(')').ok_or_else(|| Error::Parse(format!("unclosed '(' in '{s}'")))?;
            let v = body.trim().parse::<f64>().map_err(|e| Error::Parse(format!("'{s}': {e}")))?;
            return Ok(Symbol::Bessel { s: v });
        }
        for (prefix, is_sum) in [("sum[", true), ("prod[", false)] {
            if let Some(rest) = s.strip_prefix(prefix) {
                let body = rest.strip_suffix(']').ok_or_else(|| Error::Parse(format!("unclosed '[' in '{s}'")))?;
                let parts = body.split(';').map(|p| p.parse()).collect::<Result<Vec<Symbol>>>()?;
                return Ok(if is_sum { Symbol::Sum(parts) } else { Symbol::Product(parts) });
            }
        }
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<f64> = if args.is_empty() {
            vec![]
        } else {
            args.split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("symbol '{s}': {e}"))))
                .collect::<Result<_>>()?
        };
        let bad = || Error::Parse(format!("symbol '{s}': wrong parameter count"));
        match name {
            "const" => match nums.as_slice() {
                [v] => Ok(Symbol::constant(*v)),
                [re, im] => Ok(Symbol::Const(Complex64::new(*re, *im))),
                _ => Err(bad()),
            },
            "sign" if nums.is_empty() => Ok(Symbol::Sign),
            "sinc" | "indicator_cube_d1" | "indicator_cube" if nums.is_empty() => Ok(Symbol::Sinc),
            "gauss" => match nums.as_slice() {
                [] => Ok(Symbol::Gauss { a: 1.0 }),
                [a] => Ok(Symbol::Gauss { a: *a }),
                _ => Err(bad()),
            },
            "bessel" => match nums.as_slice() {
                [v] => Ok(Symbol::Bessel { s: *v }),
                _ => Err(bad()),
            },
            "plateau" => match nums.as_slice() {
                [] => Ok(Symbol::Plateau { a: 1.0, b: 1.5 }),
                [a, b] if a < b => Ok(Symbol::Plateau { a: *a, b: *b }),
                _ => Err(bad()),
            },
            "translate" => match nums.as_slice() {
                [h] => Ok(Symbol::Translation { h: [*h, 0.0] }),
                [h0, h1] => Ok(Symbol::Translation { h: [*h0, *h1] }),
                _ => Err(bad()),
            },
            "minabs" if nums.is_empty() => Ok(Symbol::min_abs()),
            "sign" | "sinc" | "indicator_cube_d1" | "indicator_cube" | "minabs" => Err(bad()),
            _ => Err(Error::UnknownName(format!("symbol '{name}'"))),
        }
    }
}
