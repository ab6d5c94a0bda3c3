//! Weights on R^d, exact cube integrals for first-coordinate power-type weights,
//! A_p characteristic estimates and the dyadic-cube conditions for embeddings.
//!
//! All analytic kinds reduce to a piecewise power profile in |x_1|,
//! `w(x) = c_i |x_1|^{e_i}` for `|x_1| ∈ [r_i, r_{i+1})`, integrated with the
//! antiderivative `sign(t)|t|^{e+1}/(e+1)` (and `ln|t|` for `e = −1`).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_p, Error, Result};
use crate::grid::GridSpec;
use crate::quad;

/// Exponents within this distance of −1 are treated as exactly −1, so that a
/// threshold such as s = (1+α)/p computed in floating point is still recognised
/// as non-integrable.
const EXPONENT_SNAP: f64 = 1e-12;

/// Custom weight given by an evaluator on points of R^d.
#[derive(Clone)]
pub struct CustomWeight {
    pub name: String,
    pub eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    /// Gauss–Legendre panels per axis for cube integrals.
    pub panels: usize,
}

impl fmt::Debug for CustomWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomWeight({})", self.name)
    }
}

#[derive(Debug, Clone)]
pub enum Weight {
    Constant(f64),
    /// |x_1|^γ
    PowerFirstCoord(f64),
    /// |x_1|^α for |x_1| ≤ 1, |x_1|^β for |x_1| > 1
    PiecewisePower { alpha: f64, beta: f64 },
    /// |x_1|^{−sp} w for |x_1| ≤ 1, w for |x_1| > 1
    ModifiedMultiplier { base: Box<Weight>, s: f64, p: f64 },
    /// |x_1|^{−sp} w
    Bar { base: Box<Weight>, s: f64, p: f64 },
    /// w(λ ·)
    Dilated { base: Box<Weight>, lambda: f64 },
    Custom(CustomWeight),
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Piece {
    lo: f64,
    hi: f64,
    coef: f64,
    exp: f64,
}

/// Piecewise power profile in |x_1|; pieces are sorted and cover [0, ∞).
#[derive(Debug, Clone, PartialEq)]
struct Profile {
    pieces: Vec<Piece>,
}

impl Profile {
    fn single(coef: f64, exp: f64) -> Self {
        Profile { pieces: vec![Piece { lo: 0.0, hi: f64::INFINITY, coef, exp }] }
    }

    fn split_at(&self, r: f64) -> Profile {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            if p.lo < r && r < p.hi {
                pieces.push(Piece { hi: r, ..*p });
                pieces.push(Piece { lo: r, ..*p });
            } else {
                pieces.push(*p);
            }
        }
        Profile { pieces }
    }

    fn dual(&self, p: f64) -> Profile {
        let k = -1.0 / (p - 1.0);
        Profile { pieces: self.pieces.iter().map(|q| Piece { coef: q.coef.powf(k), exp: q.exp * k, ..*q }).collect() }
    }

    fn eval(&self, t: f64) -> f64 {
        let a = t.abs();
        let piece = self.pieces.iter().find(|q| a < q.hi).unwrap_or(self.pieces.last().unwrap());
        if piece.exp == 0.0 {
            piece.coef
        } else {
            piece.coef * a.powf(piece.exp)
        }
    }

    /// Constant on [a, b]? Returns the constant.
    fn constant_on(&self, a: f64, b: f64) -> Option<f64> {
        let mut val = None;
        for seg in self.segments(a, b) {
            let q = seg.2;
            if q.exp != 0.0 {
                return None;
            }
            match val {
                None => val = Some(q.coef),
                Some(v) if v == q.coef => {}
                Some(_) => return None,
            }
        }
        val
    }

    /// Segments (u, v, piece) of [a, b] on which the profile is one power of |t| and
    /// which do not straddle 0.
    fn segments(&self, a: f64, b: f64) -> Vec<(f64, f64, Piece)> {
        let mut cuts = vec![a, b];
        if a < 0.0 && b > 0.0 {
            cuts.push(0.0);
        }
        for q in &self.pieces {
            for r in [q.lo, -q.lo] {
                if r > a && r < b {
                    cuts.push(r);
                }
            }
        }
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cuts.dedup();
        let mut out = Vec::new();
        for w in cuts.windows(2) {
            let (u, v) = (w[0], w[1]);
            if v <= u {
                continue;
            }
            let mid = (0.5 * (u + v)).abs();
            let piece = *self.pieces.iter().find(|q| mid < q.hi).unwrap_or(self.pieces.last().unwrap());
            out.push((u, v, piece));
        }
        out
    }

    /// ∫_a^b profile(t) dt, exact.
    fn integrate(&self, a: f64, b: f64) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        let mut total = 0.0;
        for (u, v, q) in self.segments(a, b) {
            // map to [lo, hi] ⊂ [0, ∞)
            let (lo, hi) = if u >= 0.0 { (u, v) } else { (-v, -u) };
            total += q.coef * power_integral(q.exp, lo, hi)?;
        }
        Ok(total)
    }
}

/// ∫_lo^hi t^e dt for 0 ≤ lo < hi.
fn power_integral(e: f64, lo: f64, hi: f64) -> Result<f64> {
    let e = if (e + 1.0).abs() < EXPONENT_SNAP { -1.0 } else { e };
    if e == 0.0 {
        return Ok(hi - lo);
    }
    if lo == 0.0 {
        if e <= -1.0 {
            return Err(Error::NonIntegrableWeight(format!("|t|^{e} is not integrable at 0")));
        }
        return Ok(hi.powf(e + 1.0) / (e + 1.0));
    }
    if hi.is_infinite() {
        if e >= -1.0 {
            return Ok(f64::INFINITY);
        }
        return Ok(-lo.powf(e + 1.0) / (e + 1.0));
    }
    let ratio_log = (hi / lo).ln();
    if e == -1.0 {
        return Ok(ratio_log);
    }
    let k = e + 1.0;
    Ok(lo.powf(k) * (k * ratio_log).exp_m1() / k)
}

impl Weight {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("constant weight must be positive, got {c}")));
        }
        Ok(Weight::Constant(c))
    }
    pub fn one() -> Self {
        Weight::Constant(1.0)
    }
    pub fn power(gamma: f64) -> Self {
        Weight::PowerFirstCoord(gamma)
    }
    pub fn vpow(alpha: f64, beta: f64) -> Self {
        Weight::PiecewisePower { alpha, beta }
    }
    pub fn bar(self, s: f64, p: f64) -> Self {
        Weight::Bar { base: Box::new(self), s, p }
    }
    pub fn modified(self, s: f64, p: f64) -> Self {
        Weight::ModifiedMultiplier { base: Box::new(self), s, p }
    }
    pub fn dilated(self, lambda: f64) -> Self {
        Weight::Dilated { base: Box::new(self), lambda }
    }
    pub fn custom<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(name: &str, f: F) -> Self {
        Weight::Custom(CustomWeight { name: name.to_string(), eval: Arc::new(f), panels: 8 })
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Weight::Constant(c) if *c == 1.0)
    }

    fn profile(&self) -> Option<Profile> {
        match self {
            Weight::Constant(c) => Some(Profile::single(*c, 0.0)),
            Weight::PowerFirstCoord(g) => Some(Profile::single(1.0, *g)),
            Weight::PiecewisePower { alpha, beta } => Some(Profile {
                pieces: vec![
                    Piece { lo: 0.0, hi: 1.0, coef: 1.0, exp: *alpha },
                    Piece { lo: 1.0, hi: f64::INFINITY, coef: 1.0, exp: *beta },
                ],
            }),
            Weight::Bar { base, s, p } => {
                let mut pr = base.profile()?;
                for q in &mut pr.pieces {
                    q.exp -= s * p;
                }
                Some(pr)
            }
            Weight::ModifiedMultiplier { base, s, p } => {
                let mut pr = base.profile()?.split_at(1.0);
                for q in &mut pr.pieces {
                    if q.hi <= 1.0 {
                        q.exp -= s * p;
                    }
                }
                Some(pr)
            }
            Weight::Dilated { base, lambda } => {
                let l = lambda.abs();
                let pr = base.profile()?;
                Some(Profile {
                    pieces: pr
                        .pieces
                        .iter()
                        .map(|q| Piece { lo: q.lo / l, hi: q.hi / l, coef: q.coef * l.powf(q.exp), exp: q.exp })
                        .collect(),
                })
            }
            Weight::Custom(_) => None,
        }
    }

    /// Pointwise value at x (length d).
    pub fn eval(&self, x: &[f64]) -> f64 {
        if let Some(pr) = self.profile() {
            return pr.eval(x[0]);
        }
        match self {
            Weight::Custom(c) => (c.eval)(x),
            Weight::Bar { base, s, p } => x[0].abs().powf(-s * p) * base.eval(x),
            Weight::ModifiedMultiplier { base, s, p } => {
                if x[0].abs() <= 1.0 {
                    x[0].abs().powf(-s * p) * base.eval(x)
                } else {
                    base.eval(x)
                }
            }
            Weight::Dilated { base, lambda } => {
                let y: Vec<f64> = x.iter().map(|v| v * lambda).collect();
                base.eval(&y)
            }
            _ => unreachable!("analytic kinds have a profile"),
        }
    }

    /// Per-cell weights w(cell) for the left-endpoint cells [x_k, x_k + h)^d of `grid`:
    /// exact integrals for analytic kinds, midpoint value × volume for custom kinds.
    pub fn cell_weights(&self, grid: &GridSpec) -> Result<Vec<f64>> {
        let h = grid.spacing();
        let n = grid.n();
        if let Some(pr) = self.profile() {
            let mut axis = Vec::with_capacity(n);
            for k in 0..n {
                let a = grid.coord(k);
                let val = pr.integrate(a, a + h).map_err(|e| match e {
                    Error::NonIntegrableWeight(m) => {
                        Error::NonIntegrableWeight(format!("{m} (cell [{a}, {}) on the grid)", a + h))
                    }
                    other => other,
                })?;
                axis.push(val);
            }
            if grid.d() == 1 {
                return Ok(axis);
            }
            let mut out = Vec::with_capacity(grid.len());
            for v in &axis {
                for _ in 0..n {
                    out.push(v * h);
                }
            }
            return Ok(out);
        }
        let vol = grid.cell_volume();
        let mut out = Vec::with_capacity(grid.len());
        for idx in 0..grid.len() {
            let p = grid.point(idx);
            let mid = [p[0] + 0.5 * h, p[1] + 0.5 * h];
            let v = self.eval(&mid[..grid.d()]) * vol;
            if !v.is_finite() {
                return Err(Error::NonIntegrableWeight(format!("custom weight not finite at {mid:?}")));
            }
            out.push(v);
        }
        Ok(out)
    }

    /// w(Q) = ∫_Q w.
    pub fn cube_mass(&self, q: &Cube) -> Result<f64> {
        if let Some(pr) = self.profile() {
            let c = q.center[0];
            let side = 2.0 * q.half;
            let m = pr.integrate(c - q.half, c + q.half)?;
            return Ok(m * side.powi(q.d() as i32 - 1));
        }
        self.custom_mass(q, |x| self.eval(x))
    }

    fn custom_mass<F: Fn(&[f64]) -> f64>(&self, q: &Cube, f: F) -> Result<f64> {
        let panels = match self {
            Weight::Custom(c) => c.panels.max(1),
            _ => 8,
        };
        let rule = quad::composite(-q.half, q.half, panels, 16);
        let d = q.d();
        let mut total = 0.0;
        if d == 1 {
            for &(t, wt) in rule.iter() {
                total += wt * f(&[q.center[0] + t]);
            }
        } else {
            for &(t0, w0) in rule.iter() {
                for &(t1, w1) in rule.iter() {
                    total += w0 * w1 * f(&[q.center[0] + t0, q.center[1] + t1]);
                }
            }
        }
        if !total.is_finite() {
            return Err(Error::NonIntegrableWeight(format!("custom weight integral not finite on {q:?}")));
        }
        Ok(total)
    }

    /// (avg_Q w)(avg_Q w^{−1/(p−1)})^{p−1}; exactly 1 when w is constant on Q.
    fn ap_on_cube(&self, p: f64, q: &Cube) -> Result<f64> {
        let vol = q.volume();
        if let Some(pr) = self.profile() {
            let c = q.center[0];
            if pr.constant_on(c - q.half, c + q.half).is_some() {
                return Ok(1.0);
            }
            let side_rest = (2.0 * q.half).powi(q.d() as i32 - 1);
            let mw = pr.integrate(c - q.half, c + q.half)? * side_rest;
            let ms = pr.dual(p).integrate(c - q.half, c + q.half).map_err(|_| {
                Error::NonIntegrableWeight(format!("dual weight w^(-1/(p-1)) not integrable on cube {q:?} (p={p})"))
            })? * side_rest;
            return Ok((mw / vol) * (ms / vol).powf(p - 1.0));
        }
        let k = -1.0 / (p - 1.0);
        let mw = self.custom_mass(q, |x| self.eval(x))?;
        let ms = self.custom_mass(q, |x| self.eval(x).powf(k))?;
        Ok((mw / vol) * (ms / vol).powf(p - 1.0))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Constant(c) => write!(f, "const:{c}"),
            Weight::PowerFirstCoord(g) => write!(f, "power:{g}"),
            Weight::PiecewisePower { alpha, beta } => write!(f, "vpow:{alpha},{beta}"),
            Weight::ModifiedMultiplier { base, s, p } => write!(f, "mod({s},{p}){base}"),
            Weight::Bar { base, s, p } => write!(f, "bar({s},{p}){base}"),
            Weight::Dilated { base, lambda } => write!(f, "dilate({lambda}){base}"),
            Weight::Custom(c) => write!(f, "custom:{}", c.name),
        }
    }
}

impl std::str::FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let two = |body: &str| -> Result<(f64, f64, String)> {
            let close = body.find(')').ok_or_else(|| Error::Parse(format!("unclosed '(' in weight '{s}'")))?;
            let nums: Vec<f64> = body[..close]
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("weight '{s}': {e}"))))
                .collect::<Result<_>>()?;
            let rest = body[close + 1..].to_string();
            match nums.as_slice() {
                [a, b] => Ok((*a, *b, rest)),
                [a] => Ok((*a, f64::NAN, rest)),
                _ => Err(Error::Parse(format!("weight '{s}': wrong parameter count"))),
            }
        };
        if let Some(body) = s.strip_prefix("mod(") {
            let (sv, p, rest) = two(body)?;
            return Ok(rest.parse::<Weight>()?.modified(sv, p));
        }
        if let Some(body) = s.strip_prefix("bar(") {
            let (sv, p, rest) = two(body)?;
            return Ok(rest.parse::<Weight>()?.bar(sv, p));
        }
        if let Some(body) = s.strip_prefix("dilate(") {
            let (l, _, rest) = two(body)?;
            return Ok(rest.parse::<Weight>()?.dilated(l));
        }
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<f64> = if args.is_empty() {
            vec![]
        } else {
            args.split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("weight '{s}': {e}"))))
                .collect::<Result<_>>()?
        };
        match (name, nums.as_slice()) {
            ("const", []) | ("one", []) => Ok(Weight::one()),
            ("const", [c]) => Weight::constant(*c),
            ("power", [g]) => Ok(Weight::power(*g)),
            ("vpow", [a, b]) => Ok(Weight::vpow(*a, *b)),
            ("const" | "power" | "vpow", _) => Err(Error::Parse(format!("weight '{s}': wrong parameter count"))),
            _ => Err(Error::UnknownName(format!("weight '{name}'"))),
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Axis-aligned cube Q[center, half] = center + [−half, half]^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cube {
    pub center: Vec<f64>,
    pub half: f64,
}

impl Cube {
    pub fn new(center: Vec<f64>, half: f64) -> Result<Self> {
        if center.is_empty() || center.len() > 2 || !(half > 0.0) {
            return Err(Error::InvalidParameter(format!("cube needs d in {{1,2}} and positive size, got {center:?}, {half}")));
        }
        Ok(Cube { center, half })
    }
    pub fn d(&self) -> usize {
        self.center.len()
    }
    pub fn volume(&self) -> f64 {
        (2.0 * self.half).powi(self.d() as i32)
    }
    /// Origin-centred cubes [−r, r]^d.
    pub fn origin_family(d: usize, radii: &[f64]) -> Vec<Cube> {
        radii.iter().map(|&r| Cube { center: vec![0.0; d], half: r }).collect()
    }
}

/// Dyadic cube Q_{ν,m}: centre 2^{−ν}m, side length 2^{−ν}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicCube {
    pub nu: u32,
    pub m: Vec<i64>,
}

impl DyadicCube {
    pub fn cube(&self) -> Cube {
        let side = (-(self.nu as f64)).exp2();
        Cube { center: self.m.iter().map(|&k| k as f64 * side).collect(), half: 0.5 * side }
    }
}

pub fn cube_mass(w: &Weight, q: &Cube) -> Result<f64> {
    w.cube_mass(q)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApEstimate {
    pub value: f64,
    /// Index of the maximizing cube in the family.
    pub argmax: usize,
}

/// max_Q (avg_Q w)(avg_Q w^{−1/(p−1)})^{p−1} over the family: a lower bound for [w]_{A_p}.
/// Non-integrability of w or of the dual weight on some cube is reported as
/// [`Error::NonIntegrableWeight`], which is evidence that w ∉ A_p.
pub fn ap_characteristic_estimate(w: &Weight, p: f64, cubes: &[Cube]) -> Result<ApEstimate> {
    check_p(p)?;
    let mut best = ApEstimate { value: 1.0, argmax: 0 };
    for (i, q) in cubes.iter().enumerate() {
        // Hölder gives ≥ 1; anything below is round-off.
        let v = w.ap_on_cube(p, q)?.max(1.0);
        if v > best.value {
            best = ApEstimate { value: v, argmax: i };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Bounded,
    Diverging,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Bounded => write!(f, "bounded"),
            Verdict::Diverging => write!(f, "diverging"),
        }
    }
}

/// Window of translation indices m scanned at every scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MRange {
    /// Range of m_1 (the distinguished coordinate).
    pub first: (i64, i64),
    /// |m_i| ≤ others for i ≥ 2.
    pub others: i64,
}

impl MRange {
    pub fn full(radius: i64) -> Self {
        MRange { first: (-radius, radius), others: radius }
    }
    pub fn boundary(radius: i64) -> Self {
        MRange { first: (0, 0), others: radius }
    }
    fn iter(&self, d: usize) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for m1 in self.first.0..=self.first.1 {
            if d == 1 {
                out.push(vec![m1]);
            } else {
                for m2 in -self.others..=self.others {
                    out.push(vec![m1, m2]);
                }
            }
        }
        out
    }
}

/// Result of a dyadic-cube supremum scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicReport {
    pub sup: f64,
    pub per_nu: Vec<f64>,
    /// Fitted slope of log2(per-ν max) over the last half of the ν range.
    pub slope: f64,
    pub verdict: Verdict,
}

/// Growth threshold: log2(1.05) per level.
pub const GROWTH_SLOPE: f64 = 0.07;

fn dyadic_verdict(per_nu: &[f64]) -> (f64, Verdict) {
    if per_nu.iter().any(|v| !v.is_finite()) {
        return (f64::INFINITY, Verdict::Diverging);
    }
    let start = per_nu.len() / 2;
    let pts: Vec<(f64, f64)> = per_nu[start..]
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0.0)
        .map(|(i, v)| ((start + i) as f64, v.log2()))
        .collect();
    let slope = quad::ls_slope(&pts);
    let verdict = if slope > GROWTH_SLOPE { Verdict::Diverging } else { Verdict::Bounded };
    (slope, verdict)
}

fn mass_or_inf(w: &Weight, q: &Cube) -> Result<f64> {
    match w.cube_mass(q) {
        Ok(v) => Ok(v),
        Err(Error::NonIntegrableWeight(_)) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Scans `2^{−ν(s0−s1)} w0(Q)^{−1/p0} w1(Q)^{1/p1}` over dyadic cubes Q_{ν,m},
/// ν = 0..=ν_max, m in the window.
#[allow(clippy::too_many_arguments)]
pub fn embedding_condition(
    d: usize,
    w0: &Weight,
    p0: f64,
    s0: f64,
    w1: &Weight,
    p1: f64,
    s1: f64,
    nu_max: u32,
    m_range: &MRange,
) -> Result<DyadicReport> {
    if !(s0 > s1) || !(p0 > 0.0 && p0 <= p1) {
        return Err(Error::InvalidParameter(format!("embedding needs s0 > s1 and 0 < p0 <= p1 (s0={s0}, s1={s1}, p0={p0}, p1={p1})")));
    }
    if d != 1 && d != 2 {
        return Err(Error::InvalidParameter(format!("dimension must be 1 or 2, got {d}")));
    }
    let ms = m_range.iter(d);
    let mut per_nu = Vec::with_capacity(nu_max as usize + 1);
    for nu in 0..=nu_max {
        let mut best: f64 = 0.0;
        for m in &ms {
            let q = DyadicCube { nu, m: m.clone() }.cube();
            let a = mass_or_inf(w0, &q)?;
            let b = mass_or_inf(w1, &q)?;
            let v = if b.is_infinite() {
                f64::INFINITY
            } else if a.is_infinite() {
                0.0
            } else {
                (-(nu as f64) * (s0 - s1)).exp2() * a.powf(-1.0 / p0) * b.powf(1.0 / p1)
            };
            best = best.max(v);
        }
        per_nu.push(best);
    }
    let sup = per_nu.iter().cloned().fold(0.0, f64::max);
    let (slope, verdict) = dyadic_verdict(&per_nu);
    Ok(DyadicReport { sup, per_nu, slope, verdict })
}

/// Scans `2^{−νsp} w̄_{s,p}(Q)/w(Q)` over boundary-touching dyadic cubes (m_1 = 0).
pub fn inclusion_condition(d: usize, w: &Weight, s: f64, p: f64, nu_max: u32, m_range: &MRange) -> Result<DyadicReport> {
    check_p(p)?;
    if !(s > 0.0) {
        return Err(Error::InvalidParameter(format!("s must be positive, got {s}")));
    }
    let bar = w.clone().bar(s, p);
    let ms = m_range.iter(d);
    let mut per_nu = Vec::with_capacity(nu_max as usize + 1);
    for nu in 0..=nu_max {
        let mut best: f64 = 0.0;
        for m in &ms {
            let q = DyadicCube { nu, m: m.clone() }.cube();
            let num = mass_or_inf(&bar, &q)?;
            let den = mass_or_inf(w, &q)?;
            let v = if num.is_infinite() { f64::INFINITY } else { (-(nu as f64) * s * p).exp2() * num / den };
            best = best.max(v);
        }
        per_nu.push(best);
    }
    let sup = per_nu.iter().cloned().fold(0.0, f64::max);
    let (slope, verdict) = dyadic_verdict(&per_nu);
    Ok(DyadicReport { sup, per_nu, slope, verdict })
}
