use serde::Serialize;

use crate::error::{MorreyError, Result};

/// Exponent pair `(p, q)` with `1 <= p <= q < inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MorreyParams {
    p: f64,
    q: f64,
}

impl MorreyParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite() && p >= 1.0 && p <= q) {
            return Err(MorreyError::InvalidExponents { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The window-size exponent `1/q - 1/p`, always in `(-1, 0]`.
    pub fn alpha(&self) -> f64 {
        1.0 / self.q - 1.0 / self.p
    }

    pub fn inv_p(&self) -> f64 {
        1.0 / self.p
    }

    /// `1/p - 1/q`, the exponent carried by the equivalence constants.
    pub fn gap(&self) -> f64 {
        -self.alpha()
    }

    pub fn is_degenerate(&self) -> bool {
        self.p == self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(MorreyParams::new(0.5, 2.0).is_err());
        assert!(MorreyParams::new(3.0, 2.0).is_err());
        assert!(MorreyParams::new(1.0, f64::INFINITY).is_err());
        assert!(MorreyParams::new(f64::NAN, 2.0).is_err());
    }

    #[test]
    fn alpha_range() {
        for (p, q) in [(1.0, 1.0), (1.0, 8.0), (2.0, 3.0), (7.5, 8.0)] {
            let m = MorreyParams::new(p, q).unwrap();
            let a = m.alpha();
            assert!(a > -1.0 && a <= 0.0);
            assert!((a + m.inv_p() - 1.0 / q).abs() < 1e-15);
        }
    }
}
