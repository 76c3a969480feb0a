//! Piecewise-cubic interpolation of angular profiles.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Interpolation {
    /// C² cubic spline with zero second derivative at both ends.
    #[default]
    NaturalCubic,
    /// C¹ cubic Hermite with centered-difference slopes.
    CatmullRom,
}

/// A piecewise cubic in Hermite form: values and slopes at the knots.
/// Outside the knot range the end pieces are continued.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl CubicSpline {
    pub fn new(knots: &[f64], values: &[f64], kind: Interpolation) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::InvalidProfile("knot/value length mismatch".into()));
        }
        if knots.len() < 2 {
            return Err(Error::InvalidProfile("need at least two knots".into()));
        }
        if !knots.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidProfile("knots must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("non-finite value".into()));
        }
        let slopes = match kind {
            Interpolation::NaturalCubic => natural_slopes(knots, values),
            Interpolation::CatmullRom => catmull_rom_slopes(knots, values),
        };
        Ok(Self {
            knots: knots.to_vec(),
            values: values.to_vec(),
            slopes,
        })
    }

    /// Hermite interpolant with prescribed slopes.
    pub fn hermite(knots: &[f64], values: &[f64], slopes: &[f64]) -> Result<Self> {
        if slopes.len() != knots.len() || slopes.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("slopes must be finite, one per knot".into()));
        }
        let mut s = Self::new(knots, values, Interpolation::CatmullRom)?;
        s.slopes = slopes.to_vec();
        Ok(s)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.knots.len();
        match self
            .knots
            .binary_search_by(|k| k.partial_cmp(&x).expect("finite abscissa"))
        {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    /// Value and first derivative.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let i = self.segment(x);
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let v = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
        let d00 = 6.0 * t2 - 6.0 * t;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = -6.0 * t2 + 6.0 * t;
        let d11 = 3.0 * t2 - 2.0 * t;
        let d = (d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1) / h;
        (v, d)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.eval(x).0
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            knots: self.knots.clone(),
            values: self.values.iter().map(|v| v * t).collect(),
            slopes: self.slopes.iter().map(|v| v * t).collect(),
        }
    }
}

fn natural_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 2 {
        let s = (y[1] - y[0]) / (x[1] - x[0]);
        return alloc::vec![s, s];
    }
    // Tridiagonal system for second derivatives M_i, M_0 = M_{n-1} = 0.
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let m = n - 2;
    let mut diag = alloc::vec![0.0; m];
    let mut upper = alloc::vec![0.0; m];
    let mut rhs = alloc::vec![0.0; m];
    for j in 0..m {
        let i = j + 1;
        diag[j] = 2.0 * (h[i - 1] + h[i]);
        upper[j] = h[i];
        rhs[j] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
    }
    // Thomas algorithm; the lower diagonal equals h[i-1] = upper[j-1].
    for j in 1..m {
        let w = upper[j - 1] / diag[j - 1];
        diag[j] -= w * upper[j - 1];
        rhs[j] -= w * rhs[j - 1];
    }
    let mut second = alloc::vec![0.0; n];
    for j in (0..m).rev() {
        let next = if j + 1 < m { second[j + 2] } else { 0.0 };
        second[j + 1] = (rhs[j] - upper[j] * next) / diag[j];
    }
    let mut slopes = alloc::vec![0.0; n];
    for i in 0..n - 1 {
        slopes[i] = (y[i + 1] - y[i]) / h[i] - h[i] * (2.0 * second[i] + second[i + 1]) / 6.0;
    }
    let last = n - 2;
    slopes[n - 1] =
        (y[n - 1] - y[last]) / h[last] + h[last] * (second[last] + 2.0 * second[n - 1]) / 6.0;
    slopes
}

fn catmull_rom_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let (a, b) = if i == 0 {
                (0, 1)
            } else if i == n - 1 {
                (n - 2, n - 1)
            } else {
                (i - 1, i + 1)
            };
            (y[b] - y[a]) / (x[b] - x[a])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reproduces_constants_and_lines() {
        let x = [0.0, 0.3, 1.0, 1.7, 3.0];
        for kind in [Interpolation::NaturalCubic, Interpolation::CatmullRom] {
            let s = CubicSpline::new(&x, &[2.0; 5], kind).unwrap();
            for t in [0.0, 0.1, 1.3, 2.9, 3.0] {
                let (v, d) = s.eval(t);
                assert_relative_eq!(v, 2.0, max_relative = 1e-15);
                assert!(d.abs() < 1e-14);
            }
            let y: alloc::vec::Vec<f64> = x.iter().map(|t| 1.0 + 0.5 * t).collect();
            let s = CubicSpline::new(&x, &y, kind).unwrap();
            let (v, d) = s.eval(2.2);
            assert_relative_eq!(v, 2.1, max_relative = 1e-14);
            assert_relative_eq!(d, 0.5, max_relative = 1e-13);
        }
    }

    #[test]
    fn natural_spline_interpolates_smooth_function() {
        let n = 65;
        let x: alloc::vec::Vec<f64> = (0..n).map(|i| 3.0 * i as f64 / (n - 1) as f64).collect();
        let y: alloc::vec::Vec<f64> = x.iter().map(|t| t.sin()).collect();
        let s = CubicSpline::new(&x, &y, Interpolation::NaturalCubic).unwrap();
        for i in 0..n {
            assert_relative_eq!(s.value(x[i]), y[i], epsilon = 1e-14);
        }
        // interior accuracy, away from the natural end conditions
        for t in [0.77, 1.51, 2.23] {
            let (v, d) = s.eval(t);
            assert!((v - t.sin()).abs() < 1e-6);
            assert!((d - t.cos()).abs() < 1e-4);
        }
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(CubicSpline::new(&[0.0, 0.0], &[1.0, 1.0], Interpolation::NaturalCubic).is_err());
        assert!(CubicSpline::new(&[0.0], &[1.0], Interpolation::NaturalCubic).is_err());
    }
}
