//! Weight parameters `(N, k, l, alpha)` and the closed-form constants built
//! from them.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::special::{beta_fn, gamma_fn};

/// The exponents of the density `|x|^k x_N^alpha` on the boundary and
/// `|x|^l x_N^alpha` in the volume, together with the dimension.
///
/// Validated once at construction: `N >= 2`, `alpha > 0`, `l + N + alpha > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    dim: usize,
    k: f64,
    l: f64,
    alpha: f64,
}

impl WeightParams {
    pub fn new(dim: usize, k: f64, l: f64, alpha: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParams(alloc::format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        if !k.is_finite() || !l.is_finite() || !alpha.is_finite() {
            return Err(Error::InvalidParams("non-finite exponent".into()));
        }
        if !(alpha > 0.0) {
            return Err(Error::InvalidParams(alloc::format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if !(l + dim as f64 + alpha > 0.0) {
            return Err(Error::InvalidParams(alloc::format!(
                "l + N + alpha must be positive, got {}",
                l + dim as f64 + alpha
            )));
        }
        Ok(Self { dim, k, l, alpha })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Energy exponent `m = 2k - l`.
    pub fn m(&self) -> f64 {
        2.0 * self.k - self.l
    }

    /// `l + N + alpha`, the scaling exponent of the volume.
    pub fn volume_exponent(&self) -> f64 {
        self.l + self.dim as f64 + self.alpha
    }

    /// `k + N + alpha - 1`, the scaling exponent of the perimeter.
    pub fn perimeter_exponent(&self) -> f64 {
        self.k + self.dim as f64 + self.alpha - 1.0
    }

    /// Exponent applied to the measure in the isoperimetric quotient.
    pub fn quotient_exponent(&self) -> f64 {
        self.perimeter_exponent() / self.volume_exponent()
    }

    /// Same dimension and alpha, different `k` and `l`.
    pub fn with_kl(&self, k: f64, l: f64) -> Result<Self> {
        Self::new(self.dim, k, l, self.alpha)
    }

    pub fn regime(&self) -> RegimeFlags {
        RegimeFlags {
            k_ge_l_plus_1: self.k >= self.l + 1.0,
            strict: self.k > self.l + 1.0,
            l1_value: l1_threshold(self.k, self.dim, self.alpha).ok(),
        }
    }
}

impl Serialize for WeightParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("WeightParams", 5)?;
        st.serialize_field("N", &self.dim)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("l", &self.l)?;
        st.serialize_field("alpha", &self.alpha)?;
        st.serialize_field("m", &self.m())?;
        st.end()
    }
}

/// Which side of `k = l + 1` the parameters fall on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeFlags {
    pub k_ge_l_plus_1: bool,
    pub strict: bool,
    pub l1_value: Option<f64>,
}

/// Weighted area of the unit half-sphere, `∫_{∂B_1^+} x_N^alpha dH_{N-1}`.
pub fn kappa(dim: usize, alpha: f64) -> Result<f64> {
    if dim < 2 {
        return Err(Error::Domain(alloc::format!("kappa needs N >= 2, got {dim}")));
    }
    let h = (dim as f64 - 1.0) / 2.0;
    Ok(beta_fn(h, (alpha + 1.0) / 2.0)? * PI.powf(h) / gamma_fn(h)?)
}

/// Area of the unit sphere `S^{n}` embedded in `R^{n+1}`.
pub fn sphere_area(n: usize) -> f64 {
    let h = (n as f64 + 1.0) / 2.0;
    2.0 * PI.powf(h) / gamma_fn(h).expect("positive argument")
}

/// `mu_{l,alpha}(B_R^+) = kappa R^{l+alpha+N} / (l+alpha+N)`.
pub fn mu_half_ball(p: &WeightParams, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::Domain(alloc::format!("radius must be positive, got {radius}")));
    }
    let d = p.volume_exponent();
    Ok(kappa(p.dim, p.alpha)? * radius.powf(d) / d)
}

/// Isoperimetric quotient of the unit half-ball in closed form.
pub fn c_rad(p: &WeightParams) -> Result<f64> {
    let d = p.volume_exponent();
    let kap = kappa(p.dim, p.alpha)?;
    Ok(d.powf(p.perimeter_exponent() / d) * kap.powf((p.l - p.k + 1.0) / d))
}

/// The threshold `l_1(k, N, alpha)` separating the regimes handled by the
/// rearrangement methods for `0 <= k <= l + 1`.
pub fn l1_threshold(k: f64, dim: usize, alpha: f64) -> Result<f64> {
    let n = dim as f64;
    let a = k + n + alpha - 1.0;
    let b = n + alpha - 1.0;
    let denom = a * a - b * b / (n + alpha);
    if denom.abs() <= 1e-14 * (a * a).max(1.0) {
        return Err(Error::SingularDenominator("l1_threshold"));
    }
    Ok(a * a * a / denom - n - alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent angular quadrature of kappa: for N = 2 the integral of
    /// sin^alpha over (0, pi); for N >= 3 the polar reduction with the
    /// S^{N-2} factor. Midpoint rule on a substitution that removes the
    /// endpoint behaviour, refined until stable.
    fn kappa_quadrature(dim: usize, alpha: f64) -> f64 {
        // theta = pi/2 * (1 - cos(t)) style substitution does not remove the
        // x^alpha cusp for alpha < 1; use t^(2) clustering and many points.
        let n = 400_000;
        let (span, f): (f64, &dyn Fn(f64) -> f64) = if dim == 2 {
            (PI, &|t: f64| t.sin().powf(alpha))
        } else {
            (PI / 2.0, &|t: f64| t.cos().powf(alpha) * t.sin().powi(dim as i32 - 2))
        };
        let factor = if dim == 2 { 1.0 } else { sphere_area(dim - 2) };
        // substitution theta = span * s^3 (3 - 2 s) clusters at both ends
        let mut acc = 0.0;
        for i in 0..n {
            let s = (i as f64 + 0.5) / n as f64;
            let th = span * s * s * (3.0 - 2.0 * s);
            let jac = span * 6.0 * s * (1.0 - s);
            acc += f(th) * jac;
        }
        factor * acc / n as f64
    }

    #[test]
    fn kappa_examples() {
        assert_relative_eq!(kappa(2, 1.0).unwrap(), 2.0, max_relative = 1e-13);
        assert_relative_eq!(kappa(3, 1.0).unwrap(), PI, max_relative = 1e-13);
        // alpha -> 0 limit approaches the half-circle length
        assert_relative_eq!(kappa(2, 1e-9).unwrap(), PI, max_relative = 1e-8);
    }

    #[test]
    fn kappa_agrees_with_angular_quadrature() {
        for dim in [2usize, 3] {
            for alpha in [0.5, 1.0, 2.0, 3.7] {
                let closed = kappa(dim, alpha).unwrap();
                let quad = kappa_quadrature(dim, alpha);
                assert_relative_eq!(closed, quad, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn half_ball_measures() {
        let p = WeightParams::new(2, 0.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(mu_half_ball(&p, 1.0).unwrap(), 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(mu_half_ball(&p, 2.0).unwrap(), 16.0 / 3.0, max_relative = 1e-14);
        let p3 = WeightParams::new(3, 0.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(mu_half_ball(&p3, 1.0).unwrap(), PI / 4.0, max_relative = 1e-14);
    }

    #[test]
    fn c_rad_examples() {
        let p = WeightParams::new(2, 1.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(c_rad(&p).unwrap(), 3.0, max_relative = 1e-14);
        let p = WeightParams::new(2, 2.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(c_rad(&p).unwrap(), 2.0 * 1.5f64.powf(4.0 / 3.0), max_relative = 1e-13);
        assert_relative_eq!(c_rad(&p).unwrap(), 3.434_143, max_relative = 1e-6);
        let p = WeightParams::new(2, 0.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(
            c_rad(&p).unwrap(),
            3f64.powf(2.0 / 3.0) * 2f64.powf(1.0 / 3.0),
            max_relative = 1e-13
        );
        assert_relative_eq!(c_rad(&p).unwrap(), 2.620_741, max_relative = 1e-6);
    }

    #[test]
    fn l1_examples() {
        assert!(l1_threshold(0.0, 2, 1.0).unwrap().abs() < 1e-13);
        assert!(l1_threshold(0.0, 3, 1.0).unwrap().abs() < 1e-13);
        assert_relative_eq!(l1_threshold(1.0, 2, 1.0).unwrap(), 12.0 / 23.0, max_relative = 1e-13);
        for dim in 2..6 {
            for alpha in [0.3, 1.0, 2.5, 7.0] {
                assert!(l1_threshold(0.0, dim, alpha).unwrap().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn l1_singular_denominator() {
        // (k+N+a-1)^2 = (N+a-1)^2/(N+a): N=2, a=1 gives k = 2/sqrt(3) - 2
        let k = 2.0 / 3f64.sqrt() - 2.0;
        assert_eq!(
            l1_threshold(k, 2, 1.0),
            Err(Error::SingularDenominator("l1_threshold"))
        );
    }

    #[test]
    fn params_validation() {
        assert!(WeightParams::new(1, 0.0, 0.0, 1.0).is_err());
        assert!(WeightParams::new(2, 0.0, 0.0, 0.0).is_err());
        assert!(WeightParams::new(2, 0.0, -3.0, 1.0).is_err());
        assert!(WeightParams::new(2, 0.0, -2.9, 1.0).is_ok());
        let p = WeightParams::new(2, 1.5, 0.25, 1.0).unwrap();
        assert_eq!(p.m(), 2.75);
        let r = p.regime();
        assert!(r.k_ge_l_plus_1 && r.strict);
        let r = WeightParams::new(2, 1.0, 0.0, 1.0).unwrap().regime();
        assert!(r.k_ge_l_plus_1 && !r.strict);
    }
}
