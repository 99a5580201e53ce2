use alloc::sync::Arc;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::spectral::FourierCoefficients;

/// Φ(z) = Σ aₙ zⁿ truncated at the coefficient order.
#[derive(Debug, Clone)]
pub struct ConformalMap {
    coeffs: Arc<FourierCoefficients>,
}

impl ConformalMap {
    pub fn new(coeffs: impl Into<Arc<FourierCoefficients>>) -> Self {
        Self { coeffs: coeffs.into() }
    }

    pub fn coefficients(&self) -> &FourierCoefficients {
        &self.coeffs
    }

    /// Φ(z) by Horner's rule. Points further than 1e-12 outside the unit
    /// circle are rejected.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let r = z.norm();
        if !(r <= 1.0 + 1e-12) {
            return Err(Error::Domain { value: r, domain: "closed unit disc" });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for &a in self.coeffs.as_slice().iter().rev() {
            acc = acc * z + a;
        }
        Ok(acc * z)
    }

    /// Root-mean-square truncation error on |z| = 1, from the estimated
    /// coefficient energy beyond the last order.
    pub fn tail_bound(&self) -> f64 {
        (2.0 * self.coeffs.tail_estimate()).sqrt()
    }

    /// Φ(e^{iθ}).
    pub fn boundary_value(&self, theta: f64) -> Complex64 {
        let (s, c) = theta.sin_cos();
        self.eval(Complex64::new(c, s)).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

/// Φ(z) for |z| ≤ 1.
pub fn eval_map(m: &ConformalMap, z: Complex64) -> Result<Complex64> {
    m.eval(z)
}
