//! Gauss–Legendre rules, graded composite panels, and an interpolatory
//! product rule for `∫_0^1 s^alpha g(s) ds`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;


/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre needs at least one node");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(c + h * x);
        }
        acc * h
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (c + h * x, w * h))
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Breakpoints of `panels` panels on `[a, b]`, clustered toward both ends
/// with `t -> t^g / (t^g + (1-t)^g)`, merged with `extra` interior points.
pub fn graded_breaks(a: f64, b: f64, panels: usize, grading: f64, extra: &[f64]) -> Vec<f64> {
    let panels = panels.max(1);
    let mut out: Vec<f64> = (0..=panels)
        .map(|i| {
            let t = i as f64 / panels as f64;
            let g = if grading == 1.0 {
                t
            } else {
                let p = t.powf(grading);
                let q = (1.0 - t).powf(grading);
                p / (p + q)
            };
            a + (b - a) * g
        })
        .collect();
    out.extend(extra.iter().copied().filter(|&x| x > a && x < b));
    out.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
    let tol = 1e-13 * (b - a).abs();
    out.dedup_by(|x, y| (*x - *y).abs() <= tol);
    *out.first_mut().expect("nonempty") = a;
    *out.last_mut().expect("nonempty") = b;
    out
}

/// Composite integral over consecutive breakpoints.
pub fn composite(rule: &GaussLegendre, breaks: &[f64], mut f: impl FnMut(f64) -> f64) -> f64 {
    breaks
        .windows(2)
        .map(|w| rule.integrate(w[0], w[1], &mut f))
        .sum()
}

/// Interpolatory rule for `∫_0^1 s^alpha g(s) ds` on Gauss–Legendre nodes,
/// exact when `g` is a polynomial of degree below the node count.
#[derive(Debug, Clone)]
pub struct PowerWeightRule {
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PowerWeightRule {
    pub fn new(n: usize, alpha: f64) -> Self {
        assert!(alpha > -1.0, "s^alpha must be integrable");
        let gl = GaussLegendre::new(n);
        let nodes: Vec<f64> = gl.nodes().iter().map(|x| 0.5 * (x + 1.0)).collect();
        // Solve V^T w = moments, V_ij = s_i^j, by Gaussian elimination.
        let mut a = alloc::vec![0.0; n * n];
        let mut rhs: Vec<f64> = (0..n).map(|j| 1.0 / (alpha + 1.0 + j as f64)).collect();
        for j in 0..n {
            for (i, s) in nodes.iter().enumerate() {
                a[j * n + i] = s.powi(j as i32);
            }
        }
        solve_dense(&mut a, &mut rhs, n);
        Self {
            alpha,
            nodes,
            weights: rhs,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `∫_0^c y^alpha g(y) dy`.
    pub fn integrate_from_zero(&self, c: f64, mut g: impl FnMut(f64) -> f64) -> f64 {
        if c == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for (s, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * g(c * s);
        }
        acc * c.powf(self.alpha + 1.0)
    }

    /// Vector-valued variant of [`Self::integrate_from_zero`].
    pub fn integrate_from_zero_n<const K: usize>(
        &self,
        c: f64,
        mut g: impl FnMut(f64) -> [f64; K],
    ) -> [f64; K] {
        let mut acc = [0.0; K];
        if c == 0.0 {
            return acc;
        }
        for (s, w) in self.nodes.iter().zip(&self.weights) {
            let v = g(c * s);
            for (a, x) in acc.iter_mut().zip(v) {
                *a += w * x;
            }
        }
        let scale = c.powf(self.alpha + 1.0);
        for a in &mut acc {
            *a *= scale;
        }
        acc
    }
}

/// In-place Gaussian elimination with partial pivoting; `a` is row-major.
fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) {
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[piv * n + col].abs() {
                piv = r;
            }
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f != 0.0 {
                for c in col..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for c in col + 1..n {
            s -= a[col * n + c] * b[c];
        }
        b[col] = s / a[col * n + col];
    }
}
