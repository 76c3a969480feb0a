//! Gamma and Beta functions for real positive arguments.
//!
//! Lanczos approximation with `g = 7` and nine coefficients; arguments below
//! one half go through the reflection formula.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    // z is the shifted argument x - 1
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Gamma function on `(0, inf)`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(alloc::format!("gamma_fn requires x > 0, got {x}")));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    if x == x.floor() && x <= 21.0 {
        // exact factorials keep Γ(n) bit-exact for small integers
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return f;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z)
}

/// Natural logarithm of the Gamma function on `(0, inf)`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(alloc::format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(domain(alloc::format!(
            "beta_fn requires a, b > 0, got ({a}, {b})"
        )));
    }
    if a + b < 150.0 {
        Ok(gamma_fn(a)? * gamma_fn(b)? / gamma_fn(a + b)?)
    } else {
        Ok((ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trivial_values() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert_eq!(gamma_fn(5.0).unwrap(), 24.0);
        assert_relative_eq!(gamma_fn(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn factorials_and_half_integers() {
        // Γ(n+1) = n!, Γ(n+1/2) = (2n)! sqrt(pi) / (4^n n!)
        let mut fact = 1.0_f64;
        for n in 1..45u32 {
            fact *= n as f64;
            let g = gamma_fn(n as f64 + 1.0).unwrap();
            assert_relative_eq!(g, fact, max_relative = 1e-13);
        }
        for n in 0..40u32 {
            let mut num = 1.0_f64;
            // (2n)! / (4^n n!) = prod_{j=1}^{n} (2j-1)/2
            for j in 1..=n {
                num *= (2.0 * j as f64 - 1.0) / 2.0;
            }
            let g = gamma_fn(n as f64 + 0.5).unwrap();
            assert_relative_eq!(g, num * PI.sqrt(), max_relative = 1e-13);
        }
    }

    #[test]
    fn recurrence_holds_on_grid() {
        let mut x = 0.5;
        while x < 49.0 {
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
            x += 0.173;
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.1, 0.5, 1.3, 7.7, 33.3, 49.9] {
            assert_relative_eq!(
                ln_gamma(x).unwrap(),
                gamma_fn(x).unwrap().ln(),
                max_relative = 1e-12,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn beta_values() {
        assert_relative_eq!(beta_fn(1.0, 1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(beta_fn(0.5, 0.5).unwrap(), PI, max_relative = 1e-14);
        assert_relative_eq!(beta_fn(0.5, 1.0).unwrap(), 2.0, max_relative = 1e-14);
        // large arguments go through ln_gamma
        let direct = beta_fn(80.0, 80.5).unwrap();
        let sym = beta_fn(80.5, 80.0).unwrap();
        assert_relative_eq!(direct, sym, max_relative = 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
        assert!(beta_fn(0.0, 1.0).is_err());
        assert!(beta_fn(1.0, -2.0).is_err());
    }
}
