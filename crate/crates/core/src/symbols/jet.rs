//! Truncated multivariate Taylor polynomials ("jets") in one or two variables with
//! complex coefficients. A jet of order N at ξ stores c_α = D^α f(ξ)/α! for |α| ≤ N.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    d: usize,
    order: usize,
    c: Vec<Complex64>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl Jet {
    fn size(d: usize, order: usize) -> usize {
        if d == 1 {
            order + 1
        } else {
            (order + 1) * (order + 2) / 2
        }
    }

    fn index(&self, a: usize, b: usize) -> usize {
        if self.d == 1 {
            a
        } else {
            let t = a + b;
            t * (t + 1) / 2 + b
        }
    }

    /// All multi-indices (a, b) with a + b ≤ order, in storage order.
    fn indices(d: usize, order: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for t in 0..=order {
            if d == 1 {
                out.push((t, 0));
            } else {
                for b in 0..=t {
                    out.push((t - b, b));
                }
            }
        }
        out
    }

    pub fn constant(d: usize, order: usize, v: Complex64) -> Self {
        let mut c = vec![zero(); Self::size(d, order)];
        c[0] = v;
        Jet { d, order, c }
    }

    /// The coordinate function ξ_axis expanded at x0.
    pub fn variable(d: usize, order: usize, axis: usize, x0: f64) -> Self {
        let mut j = Jet::constant(d, order, Complex64::new(x0, 0.0));
        if order >= 1 {
            let idx = if axis == 0 { j.index(1, 0) } else { j.index(0, 1) };
            j.c[idx] = Complex64::new(1.0, 0.0);
        }
        j
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// D^α f = α! c_α.
    pub fn derivative(&self, a: usize, b: usize) -> Complex64 {
        if a + b > self.order || (self.d == 1 && b > 0) {
            return zero();
        }
        self.c[self.index(a, b)] * factorial(a) * factorial(b)
    }

    pub fn scale(&self, s: Complex64) -> Jet {
        Jet { d: self.d, order: self.order, c: self.c.iter().map(|v| v * s).collect() }
    }

    pub fn add_const(&self, s: Complex64) -> Jet {
        let mut j = self.clone();
        j.c[0] += s;
        j
    }

    /// Σ_k g_k (self − self(0))^k with g_k = g^{(k)}(a0)/k!.
    pub fn compose(&self, g: &[Complex64]) -> Jet {
        let mut delta = self.clone();
        delta.c[0] = zero();
        let mut out = Jet::constant(self.d, self.order, *g.first().unwrap_or(&zero()));
        let mut power = Jet::constant(self.d, self.order, Complex64::new(1.0, 0.0));
        for gk in g.iter().take(self.order + 1).skip(1) {
            power = &power * &delta;
            out = &out + &power.scale(*gk);
        }
        out
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        let g: Vec<Complex64> = (0..=self.order).map(|k| e / factorial(k)).collect();
        self.compose(&g)
    }

    /// self^s for a real exponent (principal branch).
    pub fn powf(&self, s: f64) -> Jet {
        let a = self.value();
        let mut g = Vec::with_capacity(self.order + 1);
        let mut falling = 1.0;
        for k in 0..=self.order {
            g.push(a.powf(s - k as f64) * falling / factorial(k));
            falling *= s - k as f64;
        }
        self.compose(&g)
    }

    pub fn recip(&self) -> Jet {
        let a = self.value();
        let g: Vec<Complex64> = (0..=self.order)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign / a.powi(k as i32 + 1)
            })
            .collect();
        self.compose(&g)
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    pub fn sin(&self) -> Jet {
        let a = self.value();
        let (s, c) = (a.sin(), a.cos());
        let cycle = [s, c, -s, -c];
        let g: Vec<Complex64> = (0..=self.order).map(|k| cycle[k % 4] / factorial(k)).collect();
        self.compose(&g)
    }

    pub fn cos(&self) -> Jet {
        let a = self.value();
        let (s, c) = (a.sin(), a.cos());
        let cycle = [c, -s, -c, s];
        let g: Vec<Complex64> = (0..=self.order).map(|k| cycle[k % 4] / factorial(k)).collect();
        self.compose(&g)
    }

    /// sin(t)/t with sinc(0) = 1; power series for |t| < 1.
    pub fn sinc(&self) -> Jet {
        if self.value().norm() < 1.0 {
            let u = self * self;
            // Σ_k (−1)^k u^k/(2k+1)!, Horner in u
            let terms = 14;
            let mut acc = Jet::constant(self.d, self.order, Complex64::new(0.0, 0.0));
            for k in (0..terms).rev() {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                acc = (&acc * &u).add_const(Complex64::new(sign / factorial(2 * k + 1), 0.0));
            }
            acc
        } else {
            &self.sin() * &self.recip()
        }
    }

    /// Polynomial Σ_k a_k self^k (real coefficients).
    pub fn poly(&self, a: &[f64]) -> Jet {
        let mut acc = Jet::constant(self.d, self.order, zero());
        for &ak in a.iter().rev() {
            acc = (&acc * self).add_const(Complex64::new(ak, 0.0));
        }
        acc
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        Jet { d: self.d, order: self.order, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        Jet { d: self.d, order: self.order, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let idx = Jet::indices(self.d, self.order);
        let mut c = vec![zero(); self.c.len()];
        for (i, &(a1, b1)) in idx.iter().enumerate() {
            let x = self.c[i];
            if x == zero() {
                continue;
            }
            for &(a2, b2) in &idx {
                if a1 + a2 + b1 + b2 > self.order {
                    continue;
                }
                let y = o.c[o.index(a2, b2)];
                let k = self.index(a1 + a2, b1 + b2);
                c[k] += x * y;
            }
        }
        Jet { d: self.d, order: self.order, c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_variable_has_unit_derivatives() {
        let x = Jet::variable(1, 5, 0, 0.3);
        let e = x.exp();
        for k in 0..=5 {
            assert!((e.derivative(k, 0).re - 0.3f64.exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn mixed_partial_of_product() {
        // f = ξ1² ξ2³ at (1.5, -0.5): ∂1∂2 f = 2ξ1·3ξ2² = 2.25
        let x = Jet::variable(2, 5, 0, 1.5);
        let y = Jet::variable(2, 5, 1, -0.5);
        let f = &(&x * &x) * &(&(&y * &y) * &y);
        assert!((f.derivative(1, 1).re - 2.25).abs() < 1e-14);
        assert!((f.derivative(2, 3).re - 12.0).abs() < 1e-13);
    }

    #[test]
    fn sinc_branches_agree() {
        // derivatives of sinc near |t| = 1 from both representations
        for &t in &[0.999_999, 1.000_001] {
            let j = Jet::variable(1, 4, 0, t).sinc();
            let v = t.sin() / t;
            assert!((j.value().re - v).abs() < 1e-14);
            let d1 = (t * t.cos() - t.sin()) / (t * t);
            assert!((j.derivative(1, 0).re - d1).abs() < 1e-12);
        }
    }
}
