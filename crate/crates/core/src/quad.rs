//! Quadrature helpers on top of `gauss-quad`: cached Gauss–Legendre rules,
//! composite rules, partial-panel weights and a least-squares slope.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::GaussLegendre;

/// Gauss–Legendre nodes and weights on [−1, 1], sorted by node.
pub fn gl_rule(n: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let rule = GaussLegendre::new(n.max(2)).expect("Gauss-Legendre degree >= 2");
            let mut pairs: Vec<(f64, f64)> = rule.iter().map(|&(x, w)| (x, w)).collect();
            pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            Arc::new(pairs)
        })
        .clone()
}

/// Composite Gauss–Legendre rule on [a, b] with equal panels.
pub fn composite(a: f64, b: f64, panels: usize, nodes: usize) -> Vec<(f64, f64)> {
    let rule = gl_rule(nodes);
    let panels = panels.max(1);
    let len = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * nodes);
    for k in 0..panels {
        let lo = a + k as f64 * len;
        let mid = lo + 0.5 * len;
        for &(x, w) in rule.iter() {
            out.push((mid + 0.5 * len * x, 0.5 * len * w));
        }
    }
    out
}

/// Composite rule over consecutive breakpoints `edges`, each interval split into
/// panels of length at most `max_len`.
pub fn composite_edges(edges: &[f64], max_len: f64, nodes: usize) -> Vec<Panel> {
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let k = ((b - a) / max_len).ceil().max(1.0) as usize;
        let len = (b - a) / k as f64;
        for i in 0..k {
            out.push(Panel { lo: a + i as f64 * len, hi: a + (i + 1) as f64 * len, nodes });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub lo: f64,
    pub hi: f64,
    pub nodes: usize,
}

impl Panel {
    pub fn points(&self) -> Vec<(f64, f64)> {
        let rule = gl_rule(self.nodes);
        let half = 0.5 * (self.hi - self.lo);
        let mid = 0.5 * (self.hi + self.lo);
        rule.iter().map(|&(x, w)| (mid + half * x, half * w)).collect()
    }

    /// Weights w_q with Σ_q w_q g(t_q) = ∫_{max(a,lo)}^{hi} P g, where P g is the
    /// polynomial interpolant of g at this panel's nodes.
    pub fn tail_weights(&self, a: f64) -> Vec<f64> {
        let half = 0.5 * (self.hi - self.lo);
        if a <= self.lo {
            return self.points().into_iter().map(|p| p.1).collect();
        }
        if a >= self.hi {
            return vec![0.0; self.nodes];
        }
        let tau = (a - 0.5 * (self.hi + self.lo)) / half;
        partial_weights(self.nodes, tau).into_iter().map(|w| w * half).collect()
    }
}

/// Legendre values P_0..=P_n at u.
fn legendre_all(n: usize, u: f64) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    if n >= 1 {
        p[1] = u;
    }
    for k in 1..n {
        p[k + 1] = ((2 * k + 1) as f64 * u * p[k] - k as f64 * p[k - 1]) / (k + 1) as f64;
    }
    p
}

/// Reference weights on [−1, 1]: ∫_τ^1 ℓ_q(u) du for the Lagrange basis ℓ_q at the
/// n-point Gauss–Legendre nodes. Uses ℓ_q = W_q Σ_{k<n} (k+½) P_k(u_q) P_k and
/// ∫_τ^1 P_k = (P_{k−1}(τ) − P_{k+1}(τ))/(2k+1).
pub fn partial_weights(n: usize, tau: f64) -> Vec<f64> {
    let rule = gl_rule(n);
    let pt = legendre_all(n, tau);
    let mut integrals = vec![0.0; n];
    integrals[0] = 1.0 - tau;
    for k in 1..n {
        integrals[k] = (pt[k - 1] - pt[k + 1]) / (2 * k + 1) as f64;
    }
    rule.iter()
        .map(|&(uq, wq)| {
            let pq = legendre_all(n - 1, uq);
            let mut acc = 0.0;
            for k in 0..n {
                acc += (k as f64 + 0.5) * pq[k] * integrals[k];
            }
            wq * acc
        })
        .collect()
}

/// Least-squares slope of y on x; 0 for fewer than two points.
pub fn ls_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_weights_integrate_polynomials() {
        let n = 12;
        for &tau in &[-1.0, -0.3, 0.0, 0.77, 1.0] {
            let w = partial_weights(n, tau);
            let rule = gl_rule(n);
            for deg in 0..n {
                let approx: f64 = rule.iter().zip(&w).map(|(&(u, _), wq)| wq * u.powi(deg as i32)).sum();
                let e = (deg + 1) as i32;
                let exact = (1.0 - tau.powi(e)) / e as f64;
                assert!((approx - exact).abs() < 1e-13, "deg {deg} tau {tau}: {approx} vs {exact}");
            }
        }
    }

    #[test]
    fn composite_rule_integrates_smooth_function() {
        let r = composite(0.0, std::f64::consts::PI, 4, 16);
        let v: f64 = r.iter().map(|&(x, w)| w * x.sin()).sum();
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn slope_of_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 3.0 - 0.5 * i as f64)).collect();
        assert!((ls_slope(&pts) + 0.5).abs() < 1e-14);
    }
}
