//! Natural cubic spline on non-uniform nodes.

use crate::error::{Error, Result};
use crate::quadrature::Integrand;

#[derive(Debug, Clone)]
pub struct CubicSpline<T> {
    x: Vec<f64>,
    y: Vec<T>,
    // second derivatives at the nodes
    m: Vec<T>,
}

impl<T: Integrand> CubicSpline<T> {
    pub fn new(x: Vec<f64>, y: Vec<T>) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(Error::Configuration(format!(
                "spline needs at least 3 nodes with matching values (got {} nodes, {} values)",
                n,
                y.len()
            )));
        }
        if x.windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::Configuration(
                "spline nodes must be strictly increasing".into(),
            ));
        }

        // Thomas algorithm for the interior second derivatives.
        let mut diag = vec![0.0; n];
        let mut rhs = vec![T::zero(); n];
        let mut upper = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let lower = h0 / 6.0;
            diag[i] = (h0 + h1) / 3.0;
            upper[i] = h1 / 6.0;
            rhs[i] = (y[i + 1] - y[i]) * (1.0 / h1) - (y[i] - y[i - 1]) * (1.0 / h0);
            if i > 1 {
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] = rhs[i] - rhs[i - 1] * w;
            }
        }
        let mut m = vec![T::zero(); n];
        for i in (1..n - 1).rev() {
            let next = if i + 1 < n - 1 { m[i + 1] } else { T::zero() };
            m[i] = (rhs[i] - next * upper[i]) * (1.0 / diag[i]);
        }
        Ok(CubicSpline { x, y, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    /// Evaluates the spline; outside the node range the end cubic is continued.
    pub fn eval(&self, t: f64) -> T {
        let n = self.x.len();
        let k = self.x.partition_point(|&xi| xi <= t).clamp(1, n - 1);
        let (x0, x1) = (self.x[k - 1], self.x[k]);
        let h = x1 - x0;
        let a = (x1 - t) / h;
        let b = (t - x0) / h;
        self.y[k - 1] * a
            + self.y[k] * b
            + (self.m[k - 1] * (a * a * a - a) + self.m[k] * (b * b * b - b)) * (h * h / 6.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn reproduces_nodes_and_smooth_functions() {
        let x: Vec<f64> = (0..200).map(|i| (i as f64 / 199.0).powi(2) * 3.0).collect();
        let y: Vec<Complex64> = x
            .iter()
            .map(|&t| Complex64::new(t.sin(), (-t * t).exp()))
            .collect();
        let s = CubicSpline::new(x.clone(), y.clone()).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((s.eval(*xi) - yi).norm() < 1e-14);
        }
        for i in 0..500 {
            let t = 0.1 + 2.8 * i as f64 / 499.0;
            let exact = Complex64::new(t.sin(), (-t * t).exp());
            assert!((s.eval(t) - exact).norm() < 1e-6, "t = {t}");
        }
    }

    #[test]
    fn linear_data_is_exact() {
        let x = vec![0.0, 0.5, 2.0, 2.1, 7.0];
        let y: Vec<f64> = x.iter().map(|t| 3.0 * t - 1.0).collect();
        let s = CubicSpline::new(x, y).unwrap();
        assert!((s.eval(1.3) - 2.9).abs() < 1e-14);
        assert!((s.eval(8.0) - 23.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unsorted_nodes() {
        assert!(CubicSpline::new(vec![0.0, 2.0, 1.0], vec![0.0; 3]).is_err());
        assert!(CubicSpline::new(vec![0.0, 1.0], vec![0.0; 2]).is_err());
    }
}
