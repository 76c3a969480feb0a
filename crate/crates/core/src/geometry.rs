//! Bounded axisymmetric star-shaped subsets of the half-space.
//!
//! A set is `{ r ω : 0 < r < ρ(ω) }` with the profile `ρ` given on a grid of
//! angles and interpolated by a cubic rule. For `N = 2` the angle `θ` runs
//! over `[0, π]` measured from the positive `x_1` axis, so `x_2 = r sin θ`.
//! For `N >= 3` the angle `φ` is the polar angle from the `x_N` axis on
//! `[0, π/2]`, so `x_N = r cos φ`, and the set is rotationally symmetric
//! about that axis. The radial integrals are done in closed form; only the
//! angular integral is computed by quadrature.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{graded_breaks, GaussLegendre};
use crate::spline::{CubicSpline, Interpolation};
use crate::weights::{kappa, sphere_area};

/// Composite Gauss–Legendre settings for angular integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// `>= 1`; larger values cluster panels toward the angular endpoints.
    pub grading_exponent: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panels: 48,
            nodes_per_panel: 12,
            grading_exponent: 3.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.panels < 1 || self.nodes_per_panel < 2 || !(self.grading_exponent >= 1.0) {
            return Err(Error::InvalidParams(alloc::format!(
                "quadrature spec needs panels >= 1, nodes >= 2, grading >= 1: {self:?}"
            )));
        }
        Ok(())
    }

    /// Same rule with twice the panels.
    pub fn refined(&self) -> Self {
        Self {
            panels: self.panels * 2,
            ..*self
        }
    }
}

/// A quadrature value together with a (pessimistic) error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Radial profile of an axisymmetric star-shaped set in the half-space.
#[derive(Debug, Clone, PartialEq)]
pub struct StarProfile {
    dim: usize,
    angles: Vec<f64>,
    radii: Vec<f64>,
    interpolation: Interpolation,
    spline: CubicSpline,
}

/// Angular extent of the profile: `π` for the plane, `π/2` otherwise.
pub fn angular_span(dim: usize) -> f64 {
    if dim == 2 {
        PI
    } else {
        PI / 2.0
    }
}

impl StarProfile {
    pub fn new(
        dim: usize,
        angles: Vec<f64>,
        radii: Vec<f64>,
        interpolation: Interpolation,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidProfile(alloc::format!("dimension {dim} < 2")));
        }
        let span = angular_span(dim);
        if angles.iter().any(|&a| !(a >= 0.0 && a <= span)) {
            return Err(Error::InvalidProfile(alloc::format!(
                "angles must lie in [0, {span}]"
            )));
        }
        if let Some(i) = radii.iter().position(|&r| !(r > 0.0) || !r.is_finite()) {
            return Err(Error::InvalidProfile(alloc::format!(
                "radius at index {i} is not positive: {}",
                radii[i]
            )));
        }
        let spline = CubicSpline::new(&angles, &radii, interpolation)?;
        let profile = Self {
            dim,
            angles,
            radii,
            interpolation,
            spline,
        };
        let min = profile.sampled_min();
        if !(min > 0.0) {
            return Err(Error::InvalidProfile(alloc::format!(
                "interpolated profile is not positive (min {min})"
            )));
        }
        Ok(profile)
    }

    /// Half-ball `B_R^+` on a uniform grid.
    pub fn half_ball(dim: usize, radius: f64) -> Result<Self> {
        Self::from_fn(dim, 9, Interpolation::NaturalCubic, |_| radius)
    }

    /// Samples `f` on `knots` uniform angles covering the whole span.
    pub fn from_fn(
        dim: usize,
        knots: usize,
        interpolation: Interpolation,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let span = angular_span(dim);
        let knots = knots.max(2);
        let angles: Vec<f64> = (0..knots)
            .map(|i| span * i as f64 / (knots - 1) as f64)
            .collect();
        let radii = angles.iter().map(|&a| f(a)).collect();
        Self::new(dim, angles, radii, interpolation)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// `(ρ(θ), ρ'(θ))`.
    pub fn eval(&self, theta: f64) -> (f64, f64) {
        self.spline.eval(theta)
    }

    /// Minimum of the interpolant over a fine sampling of the full span.
    pub fn sampled_min(&self) -> f64 {
        self.sample_extreme(f64::min, f64::INFINITY)
    }

    pub fn sampled_max(&self) -> f64 {
        self.sample_extreme(f64::max, f64::NEG_INFINITY)
    }

    fn sample_extreme(&self, pick: fn(f64, f64) -> f64, init: f64) -> f64 {
        let span = angular_span(self.dim);
        let mut breaks: Vec<f64> = Vec::with_capacity(self.angles.len() + 2);
        breaks.push(0.0);
        breaks.extend(self.angles.iter().copied().filter(|&a| a > 0.0 && a < span));
        breaks.push(span);
        let mut acc = init;
        for w in breaks.windows(2) {
            for j in 0..=32 {
                let t = w[0] + (w[1] - w[0]) * j as f64 / 32.0;
                acc = pick(acc, self.spline.value(t));
            }
        }
        acc
    }

    /// Angular density: the Jacobian of the polar reduction times
    /// `(x_N / |x|)^alpha`.
    fn angular_density(&self, theta: f64, alpha: f64) -> f64 {
        if self.dim == 2 {
            theta.sin().max(0.0).powf(alpha)
        } else {
            sphere_area(self.dim - 2)
                * theta.sin().max(0.0).powi(self.dim as i32 - 2)
                * theta.cos().max(0.0).powf(alpha)
        }
    }

    fn angular_integral(
        &self,
        q: &QuadratureSpec,
        f: impl Fn(f64, f64, f64) -> f64,
    ) -> Result<Estimate> {
        q.validate()?;
        let span = angular_span(self.dim);
        let breaks = graded_breaks(0.0, span, q.panels, q.grading_exponent, &self.angles);
        let fine = GaussLegendre::new(q.nodes_per_panel);
        let coarse = GaussLegendre::new((q.nodes_per_panel / 2).max(2));
        let integrand = |t: f64| {
            let (r, dr) = self.spline.eval(t);
            f(t, r, dr)
        };
        let mut value = 0.0;
        let mut lower = 0.0;
        for w in breaks.windows(2) {
            value += fine.integrate(w[0], w[1], integrand);
            lower += coarse.integrate(w[0], w[1], integrand);
        }
        if !value.is_finite() {
            return Err(Error::InvalidParams("non-finite angular integral".into()));
        }
        // the floor accounts for summation rounding over all panels
        Ok(Estimate {
            value,
            error: (value - lower).abs() + 100.0 * f64::EPSILON * value.abs(),
        })
    }

    /// `mu_{l,alpha}(M)` with error estimate.
    pub fn measure_estimate(&self, l: f64, alpha: f64, q: &QuadratureSpec) -> Result<Estimate> {
        let d = l + alpha + self.dim as f64;
        if !(d > 0.0) || !(alpha > 0.0) {
            return Err(Error::InvalidParams(alloc::format!(
                "measure needs alpha > 0 and l + alpha + N > 0 (l={l}, alpha={alpha})"
            )));
        }
        self.angular_integral(q, |t, r, _| self.angular_density(t, alpha) * r.powf(d) / d)
    }

    pub fn measure(&self, l: f64, alpha: f64, q: &QuadratureSpec) -> Result<f64> {
        Ok(self.measure_estimate(l, alpha, q)?.value)
    }

    /// `∫_{∂M} |x|^k x_N^alpha dH_{N-1}` over the curved part of the
    /// boundary; the flat part on `x_N = 0` carries zero weight.
    pub fn perimeter_estimate(&self, k: f64, alpha: f64, q: &QuadratureSpec) -> Result<Estimate> {
        if !(alpha > 0.0) || !k.is_finite() {
            return Err(Error::InvalidParams(alloc::format!(
                "perimeter needs alpha > 0 and finite k (k={k}, alpha={alpha})"
            )));
        }
        let e = k + alpha + self.dim as f64 - 2.0;
        self.angular_integral(q, |t, r, dr| {
            self.angular_density(t, alpha) * r.powf(e) * (r * r + dr * dr).sqrt()
        })
    }

    pub fn perimeter(&self, k: f64, alpha: f64, q: &QuadratureSpec) -> Result<f64> {
        Ok(self.perimeter_estimate(k, alpha, q)?.value)
    }

    /// Radius of the half-ball with the same `mu_{l,alpha}` measure.
    pub fn symmetrized_radius(&self, l: f64, alpha: f64, q: &QuadratureSpec) -> Result<f64> {
        let m = self.measure(l, alpha, q)?;
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::Degenerate("set has no finite positive measure".into()));
        }
        let d = l + alpha + self.dim as f64;
        let unit = kappa(self.dim, alpha)? / d;
        Ok((m / unit).powf(1.0 / d))
    }

    /// The dilated set `tM`.
    pub fn scale(&self, t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(alloc::format!("scale factor must be positive, got {t}")));
        }
        Ok(Self {
            dim: self.dim,
            angles: self.angles.clone(),
            radii: self.radii.iter().map(|r| r * t).collect(),
            interpolation: self.interpolation,
            spline: self.spline.scaled(t),
        })
    }
}

/// Parameters of a seeded random profile `base (1 + Σ c_j T_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomProfileSpec {
    pub dim: usize,
    pub mode_count: usize,
    /// Bound on `|Σ c_j T_j|`; must be below one.
    pub amplitude: f64,
    pub base: f64,
}

/// Seeded smooth perturbation of a half-ball.
///
/// For `N = 2` the modes are `cos(jθ)` on `[0, π]`, which mixes shapes that
/// are symmetric and antisymmetric about the `x_2` axis. For `N >= 3` they
/// are `cos(2jφ)`, flat at the axis. Coefficients are drawn from the seed and
/// normalized so that `Σ |c_j| = amplitude`.
pub fn random_profile(seed: u64, spec: &RandomProfileSpec) -> Result<StarProfile> {
    if !(spec.amplitude >= 0.0 && spec.amplitude < 1.0) {
        return Err(Error::InvalidProfile(alloc::format!(
            "amplitude must lie in [0, 1), got {}",
            spec.amplitude
        )));
    }
    if !(spec.base > 0.0) {
        return Err(Error::InvalidProfile("base radius must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs: Vec<f64> = (1..=spec.mode_count)
        .map(|j| rng.gen_range(-1.0..1.0) / j as f64)
        .collect();
    let total: f64 = coeffs.iter().map(|c| c.abs()).sum();
    if total > 0.0 {
        for c in &mut coeffs {
            *c *= spec.amplitude / total;
        }
    }
    let freq = if spec.dim == 2 { 1.0 } else { 2.0 };
    let knots = (8 * spec.mode_count + 1).max(17);
    StarProfile::from_fn(spec.dim, knots, Interpolation::NaturalCubic, |t| {
        let s: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * (freq * (j + 1) as f64 * t).cos())
            .sum();
        spec.base * (1.0 + s)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{mu_half_ball, WeightParams};
    use approx::assert_relative_eq;

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn half_ball_measure_and_perimeter() {
        let s = StarProfile::half_ball(2, 1.0).unwrap();
        assert_relative_eq!(s.measure(0.0, 1.0, &q()).unwrap(), 2.0 / 3.0, max_relative = 1e-13);
        assert_relative_eq!(s.perimeter(1.0, 1.0, &q()).unwrap(), 2.0, max_relative = 1e-13);
        let s2 = StarProfile::half_ball(2, 2.0).unwrap();
        assert_relative_eq!(s2.perimeter(0.0, 1.0, &q()).unwrap(), 8.0, max_relative = 1e-13);
    }

    #[test]
    fn unit_half_ball_perimeter_is_kappa_for_every_k() {
        for dim in [2usize, 3, 4] {
            let s = StarProfile::half_ball(dim, 1.0).unwrap();
            for alpha in [0.5, 1.0, 2.0] {
                let kap = kappa(dim, alpha).unwrap();
                for k in [-1.0, 0.0, 2.0] {
                    let p = s.perimeter(k, alpha, &q()).unwrap();
                    assert_relative_eq!(p, kap, max_relative = 1e-10);
                }
            }
        }
    }

    #[test]
    fn half_ball_measure_matches_closed_form() {
        for dim in [2usize, 3] {
            for (l, alpha) in [(0.0, 1.0), (-0.5, 0.5), (1.0, 2.0), (-2.0, 1.0)] {
                let p = WeightParams::new(dim, 0.0, l, alpha).unwrap();
                let s = StarProfile::half_ball(dim, 1.3).unwrap();
                let m = s.measure(l, alpha, &q()).unwrap();
                assert_relative_eq!(m, mu_half_ball(&p, 1.3).unwrap(), max_relative = 1e-10);
                assert_relative_eq!(
                    s.symmetrized_radius(l, alpha, &q()).unwrap(),
                    1.3,
                    max_relative = 1e-10
                );
            }
        }
    }

    #[test]
    fn measure_matches_trapezoid_oracle() {
        // rho = 1 + 0.3 sin 2θ, N = 2, l = 0, alpha = 1: the integrand
        // sinθ ρ³ / 3 is smooth and periodic-friendly; a 10^6-panel
        // trapezoid on the interpolated profile is the oracle.
        let s = StarProfile::from_fn(2, 129, Interpolation::NaturalCubic, |t| {
            1.0 + 0.3 * (2.0 * t).sin()
        })
        .unwrap();
        let n = 1_000_000;
        let h = PI / n as f64;
        let f = |t: f64| t.sin() * s.eval(t).0.powi(3) / 3.0;
        let mut trap = 0.5 * (f(0.0) + f(PI));
        for i in 1..n {
            trap += f(i as f64 * h);
        }
        trap *= h;
        assert_relative_eq!(s.measure(0.0, 1.0, &q()).unwrap(), trap, max_relative = 1e-9);
    }

    #[test]
    fn scaling_laws() {
        let spec = RandomProfileSpec {
            dim: 2,
            mode_count: 4,
            amplitude: 0.35,
            base: 1.0,
        };
        for dim in [2usize, 3] {
            let s = random_profile(11, &RandomProfileSpec { dim, ..spec }).unwrap();
            for (k, l, alpha) in [(1.0, 0.0, 1.0), (0.5, -0.5, 0.5), (3.0, 1.0, 2.0)] {
                for t in [0.5, 1.7, 2.0] {
                    let st = s.scale(t).unwrap();
                    let d = l + alpha + dim as f64;
                    let e = k + alpha + dim as f64 - 1.0;
                    assert_relative_eq!(
                        st.measure(l, alpha, &q()).unwrap(),
                        t.powf(d) * s.measure(l, alpha, &q()).unwrap(),
                        max_relative = 1e-12
                    );
                    assert_relative_eq!(
                        st.perimeter(k, alpha, &q()).unwrap(),
                        t.powf(e) * s.perimeter(k, alpha, &q()).unwrap(),
                        max_relative = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn scale_composes() {
        let s = StarProfile::half_ball(2, 1.0).unwrap();
        let a = s.scale(2.0).unwrap();
        assert!(a.radii().iter().all(|&r| r == 2.0));
        let ab = a.scale(1.5).unwrap();
        let direct = s.scale(3.0).unwrap();
        assert_eq!(ab.radii(), direct.radii());
        assert!(s.scale(0.0).is_err());
        assert!(s.scale(-1.0).is_err());
    }

    #[test]
    fn refinement_change_within_error_estimate() {
        for dim in [2usize, 3] {
            let s = random_profile(
                5,
                &RandomProfileSpec {
                    dim,
                    mode_count: 3,
                    amplitude: 0.4,
                    base: 1.2,
                },
            )
            .unwrap();
            for (k, l, alpha) in [(1.0, 0.0, 1.0), (0.5, -0.5, 0.5)] {
                let m = s.measure_estimate(l, alpha, &q()).unwrap();
                let m2 = s.measure_estimate(l, alpha, &q().refined()).unwrap();
                assert!((m.value - m2.value).abs() <= m.error.max(1e-15));
                let p = s.perimeter_estimate(k, alpha, &q()).unwrap();
                let p2 = s.perimeter_estimate(k, alpha, &q().refined()).unwrap();
                assert!((p.value - p2.value).abs() <= p.error.max(1e-15), "{p:?} {p2:?}");
                assert!(p.error < 1e-6 * p.value);
            }
        }
    }

    #[test]
    fn symmetrized_radius_inverts_power_law() {
        // measure 2 mu(B_1^+) for N=2, l=0, alpha=1 -> R* = 2^{1/3}
        let s = StarProfile::half_ball(2, 2f64.powf(1.0 / 3.0)).unwrap();
        assert_relative_eq!(
            s.symmetrized_radius(0.0, 1.0, &q()).unwrap(),
            1.259_921_049_894_873,
            max_relative = 1e-12
        );
        let p = WeightParams::new(2, 0.0, 0.0, 1.0).unwrap();
        let r = random_profile(
            3,
            &RandomProfileSpec {
                dim: 2,
                mode_count: 5,
                amplitude: 0.5,
                base: 0.8,
            },
        )
        .unwrap();
        let rs = r.symmetrized_radius(0.0, 1.0, &q()).unwrap();
        let m = r.measure(0.0, 1.0, &q()).unwrap();
        assert_relative_eq!(mu_half_ball(&p, rs).unwrap(), m, max_relative = 1e-10);
    }

    #[test]
    fn random_profiles() {
        let spec = RandomProfileSpec {
            dim: 2,
            mode_count: 3,
            amplitude: 0.0,
            base: 1.5,
        };
        let flat = random_profile(1, &spec).unwrap();
        assert!(flat.radii().iter().all(|&r| r == 1.5));
        let spec = RandomProfileSpec {
            amplitude: 0.4,
            base: 1.0,
            ..spec
        };
        let a = random_profile(42, &spec).unwrap();
        let b = random_profile(42, &spec).unwrap();
        assert_eq!(a, b);
        assert!(a.sampled_min() >= 0.6);
        assert!(a.sampled_max() <= 1.4);
        let c = random_profile(43, &spec).unwrap();
        assert_ne!(a, c);
        assert!(random_profile(1, &RandomProfileSpec { amplitude: 1.0, ..spec }).is_err());
    }

    #[test]
    fn rejects_invalid_profiles() {
        assert!(StarProfile::new(2, alloc::vec![0.0, 1.0], alloc::vec![1.0, -1.0], Interpolation::NaturalCubic).is_err());
        assert!(StarProfile::new(2, alloc::vec![0.0, 4.0], alloc::vec![1.0, 1.0], Interpolation::NaturalCubic).is_err());
        assert!(StarProfile::new(3, alloc::vec![0.0, 2.0], alloc::vec![1.0, 1.0], Interpolation::NaturalCubic).is_err());
        let s = StarProfile::half_ball(2, 1.0).unwrap();
        assert!(s.measure(-3.5, 1.0, &q()).is_err());
    }
}
