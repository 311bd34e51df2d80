//! Gauss–Legendre rules.

use crate::error::{invalid, Result};
use crate::Real;

/// Nodes and weights of an n-point Gauss–Legendre rule on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Rule on `[-1, 1]`. Roots of P_n by Newton iteration from the
    /// Chebyshev-like initial guess, weights `2 / ((1 - x²) P_n'(x)²)`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("Gauss-Legendre rule needs at least one node");
        }
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = T::lit(-x);
            nodes[n - 1 - i] = T::lit(x);
            weights[i] = T::lit(w);
            weights[n - 1 - i] = T::lit(w);
        }
        Ok(Self { nodes, weights })
    }

    /// Rule on `[lo, hi]`.
    pub fn on_interval(n: usize, lo: T, hi: T) -> Result<Self> {
        if !(hi > lo) {
            return invalid("integration interval must have hi > lo");
        }
        let base = Self::new(n)?;
        let half = (hi - lo) * T::lit(0.5);
        let mid = (hi + lo) * T::lit(0.5);
        Ok(Self {
            nodes: base.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: base.weights.iter().map(|&w| w * half).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 2, 7, 64, 128] {
            let r = GaussLegendre::<f64>::on_interval(n, -0.5, 2.0).unwrap();
            let total: f64 = r.weights.iter().sum();
            assert!((total - 2.5).abs() < 1e-13, "n={n}: {total}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let r = GaussLegendre::<f64>::new(5).unwrap();
        // ∫ x^8 over [-1, 1] = 2/9
        let got = r.integrate(|x| x.powi(8));
        assert!((got - 2.0 / 9.0).abs() < 1e-14);
        let odd = r.integrate(|x| x.powi(9));
        assert!(odd.abs() < 1e-15);
    }

    #[test]
    fn integrates_cosine() {
        let r = GaussLegendre::<f64>::on_interval(32, 0.0, std::f64::consts::PI).unwrap();
        assert!((r.integrate(f64::sin) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_empty_rule() {
        assert!(GaussLegendre::<f64>::new(0).is_err());
        assert!(GaussLegendre::<f64>::on_interval(4, 1.0, 1.0).is_err());
    }
}
