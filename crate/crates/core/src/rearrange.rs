//! Distribution functions, decreasing rearrangements and Schwarz
//! symmetrization of piecewise-linear functions on planar meshes.
//!
//! Everything is taken in absolute value: the rearrangement of `u` is the
//! rearrangement of `|u|`.

use alloc::sync::Arc;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::{signed_area, Point, TriMesh, WeightedTriangleRule};
use crate::weights::kappa;

/// Quadrature used on each element (and on clipped pieces of elements).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ElementRule {
    /// Horizontal strips with Gauss–Legendre chords and a product rule for
    /// the vanishing weight; see [`WeightedTriangleRule`].
    Strip { chord_points: usize, height_points: usize },
}

impl Default for ElementRule {
    fn default() -> Self {
        ElementRule::Strip {
            chord_points: 3,
            height_points: 6,
        }
    }
}

impl ElementRule {
    pub fn build(&self, alpha: f64, l: f64) -> WeightedTriangleRule {
        match *self {
            ElementRule::Strip {
                chord_points,
                height_points,
            } => WeightedTriangleRule::with_orders(alpha, l, chord_points, height_points),
        }
    }
}

/// A continuous piecewise-linear function: one value per mesh node.
#[derive(Debug, Clone)]
pub struct MeshFunction {
    mesh: Arc<TriMesh>,
    values: Vec<f64>,
    rule: ElementRule,
}

impl MeshFunction {
    pub fn new(mesh: Arc<TriMesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.nodes().len() {
            return Err(Error::InvalidMesh(alloc::format!(
                "{} values for {} nodes",
                values.len(),
                mesh.nodes().len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMesh("non-finite nodal value".into()));
        }
        Ok(Self {
            mesh,
            values,
            rule: ElementRule::default(),
        })
    }

    /// Nodal interpolant of `f`.
    pub fn from_fn(mesh: Arc<TriMesh>, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = mesh.nodes().iter().map(|p| f(p[0], p[1])).collect();
        Self::new(mesh, values)
    }

    pub fn with_rule(mut self, rule: ElementRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn mesh(&self) -> &Arc<TriMesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rule(&self) -> ElementRule {
        self.rule
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            mesh: self.mesh.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            rule: self.rule,
        }
    }

    fn element_values(&self, e: usize) -> [f64; 3] {
        let el = self.mesh.elements()[e];
        [self.values[el[0]], self.values[el[1]], self.values[el[2]]]
    }

    /// Constant gradient on element `e`.
    pub fn gradient(&self, e: usize) -> [f64; 2] {
        gradient(&self.mesh.triangle(e), &self.element_values(e))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub(crate) fn gradient(p: &[Point; 3], v: &[f64; 3]) -> [f64; 2] {
    let (x1, y1) = (p[1][0] - p[0][0], p[1][1] - p[0][1]);
    let (x2, y2) = (p[2][0] - p[0][0], p[2][1] - p[0][1]);
    let det = x1 * y2 - x2 * y1;
    let (d1, d2) = (v[1] - v[0], v[2] - v[0]);
    [(d1 * y2 - d2 * y1) / det, (x1 * d2 - x2 * d1) / det]
}

/// Piece of an element where `sign * u > t`, with the interpolated values
/// of `u` at its corners (at most four).
fn clip_above(p: &[Point; 3], v: &[f64; 3], sign: f64, t: f64) -> Vec<(Point, f64)> {
    let mut out = Vec::with_capacity(4);
    for i in 0..3 {
        let j = (i + 1) % 3;
        let (fi, fj) = (sign * v[i] - t, sign * v[j] - t);
        if fi > 0.0 {
            out.push((p[i], v[i]));
        }
        if (fi > 0.0) != (fj > 0.0) {
            let s = fi / (fi - fj);
            let q = [p[i][0] + s * (p[j][0] - p[i][0]), p[i][1] + s * (p[j][1] - p[i][1])];
            out.push((q, v[i] + s * (v[j] - v[i])));
        }
    }
    out
}

/// Weighted measure of `{sign * u > t}` within one triangle.
fn clipped_measure(rule: &WeightedTriangleRule, p: &[Point; 3], v: &[f64; 3], sign: f64, t: f64) -> f64 {
    let mut poly = [[0.0; 2]; 4];
    let mut n = 0;
    for i in 0..3 {
        let j = (i + 1) % 3;
        let (fi, fj) = (sign * v[i] - t, sign * v[j] - t);
        if fi > 0.0 {
            poly[n] = p[i];
            n += 1;
        }
        if (fi > 0.0) != (fj > 0.0) {
            let s = fi / (fi - fj);
            poly[n] = [p[i][0] + s * (p[j][0] - p[i][0]), p[i][1] + s * (p[j][1] - p[i][1])];
            n += 1;
        }
    }
    (1..n.saturating_sub(1))
        .map(|i| {
            let tri = [poly[0], poly[i], poly[i + 1]];
            if signed_area(&tri).abs() > 0.0 {
                rule.measure(&tri)
            } else {
                0.0
            }
        })
        .sum()
}

/// `∫ g(u) w` over a convex polygon with affine `u`, by fan triangulation.
fn integrate_polygon(
    rule: &WeightedTriangleRule,
    poly: &[(Point, f64)],
    g: &impl Fn(f64) -> f64,
) -> f64 {
    let mut acc = 0.0;
    for i in 1..poly.len().saturating_sub(1) {
        let tri = [poly[0].0, poly[i].0, poly[i + 1].0];
        let vals = [poly[0].1, poly[i].1, poly[i + 1].1];
        let grad = gradient(&tri, &vals);
        if !grad[0].is_finite() || !grad[1].is_finite() {
            continue;
        }
        let base = tri[0];
        acc += rule.integrate(&tri, |x, y| {
            [g(vals[0] + grad[0] * (x - base[0]) + grad[1] * (y - base[1]))]
        })[0];
    }
    acc
}

/// `mu_{l,alpha}({|u| > t})` for `t >= 0`.
pub fn distribution(f: &MeshFunction, t: f64, l: f64, alpha: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(alloc::format!("distribution needs t >= 0, got {t}")));
    }
    let rule = f.rule.build(alpha, l);
    let mut acc = 0.0;
    for e in 0..f.mesh.elements().len() {
        let v = f.element_values(e);
        if v.iter().all(|x| x.abs() <= t) {
            continue;
        }
        let tri = f.mesh.triangle(e);
        if v.iter().all(|x| x.abs() > t) && (v.iter().all(|&x| x > 0.0) || v.iter().all(|&x| x < 0.0)) {
            acc += rule.measure(&tri);
            continue;
        }
        for sign in [1.0, -1.0] {
            acc += clipped_measure(&rule, &tri, &v, sign, t);
        }
    }
    Ok(acc)
}

/// `∫ |u|^p dmu_{l,alpha}` for any `p > 0`; elements are split along the
/// zero set so that `|u|^p` is smooth on each piece.
pub fn power_integral(f: &MeshFunction, p: f64, l: f64, alpha: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Domain(alloc::format!("power must be positive, got {p}")));
    }
    let rule = f.rule.build(alpha, l);
    let g = |u: f64| u.abs().powf(p);
    let mut acc = 0.0;
    for e in 0..f.mesh.elements().len() {
        let v = f.element_values(e);
        let tri = f.mesh.triangle(e);
        if v.iter().all(|&x| x >= 0.0) || v.iter().all(|&x| x <= 0.0) {
            if v.iter().any(|&x| x != 0.0) {
                acc += integrate_polygon(&rule, &[(tri[0], v[0]), (tri[1], v[1]), (tri[2], v[2])], &g);
            }
            continue;
        }
        for sign in [1.0, -1.0] {
            acc += integrate_polygon(&rule, &clip_above(&tri, &v, sign, 0.0), &g);
        }
    }
    Ok(acc)
}

/// Weighted `L^p` norm on the mesh, `p >= 1`.
pub fn lp_norm(f: &MeshFunction, p: f64, l: f64, alpha: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain(alloc::format!("lp_norm needs p >= 1, got {p}")));
    }
    Ok(power_integral(f, p, l, alpha)?.powf(1.0 / p))
}

/// A non-increasing, piecewise-linear function of weighted volume `s` on
/// `[0, total_measure]`.
///
/// Repeated breakpoints encode jumps; at a jump the lower value is taken,
/// so the profile is right-continuous.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecreasingProfile {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    total_measure: f64,
}

impl DecreasingProfile {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidProfile(alloc::format!("decreasing profile: {m}")));
        if breakpoints.len() != values.len() || breakpoints.len() < 2 {
            return bad("need matching breakpoints and values, at least two");
        }
        if breakpoints[0] != 0.0 {
            return bad("first breakpoint must be 0");
        }
        if !breakpoints.windows(2).all(|w| w[1] >= w[0]) {
            return bad("breakpoints must be non-decreasing");
        }
        if !values.windows(2).all(|w| w[1] <= w[0]) {
            return bad("values must be non-increasing");
        }
        if values.iter().chain(&breakpoints).any(|v| !v.is_finite()) {
            return bad("non-finite entry");
        }
        let total_measure = *breakpoints.last().expect("nonempty");
        Ok(Self {
            breakpoints,
            values,
            total_measure,
        })
    }

    /// The constant `c` on `[0, total)`.
    pub fn constant(c: f64, total: f64) -> Result<Self> {
        Self::new(alloc::vec![0.0, total], alloc::vec![c, c])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    pub fn max_value(&self) -> f64 {
        self.values[0]
    }

    /// `u*(s)`; outside `[0, total]` the end values are continued.
    pub fn eval(&self, s: f64) -> f64 {
        let n = self.breakpoints.len();
        let i = self.breakpoints.partition_point(|&b| b <= s);
        if i == 0 {
            return self.values[0];
        }
        let i = i - 1;
        if i + 1 >= n {
            return self.values[n - 1];
        }
        let (s0, s1) = (self.breakpoints[i], self.breakpoints[i + 1]);
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        v0 + (v1 - v0) * (s - s0) / (s1 - s0)
    }

    /// `|{s : u*(s) > t}|`.
    pub fn distribution(&self, t: f64) -> f64 {
        let n = self.values.len();
        if self.values[0] <= t {
            return 0.0;
        }
        let i = self.values.partition_point(|&v| v > t);
        if i == n {
            return self.total_measure;
        }
        let (s0, s1) = (self.breakpoints[i - 1], self.breakpoints[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        s0 + (s1 - s0) * (v0 - t) / (v0 - v1)
    }

    /// `∫_0^total |u*|^p ds`, exact for the piecewise-linear profile.
    pub fn power_integral(&self, p: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.values.len() - 1 {
            let ds = self.breakpoints[i + 1] - self.breakpoints[i];
            if ds <= 0.0 {
                continue;
            }
            acc += ds * segment_power_mean(self.values[i].abs(), self.values[i + 1].abs(), p);
        }
        acc
    }

    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::Domain(alloc::format!("lp_norm needs p >= 1, got {p}")));
        }
        Ok(self.power_integral(p).powf(1.0 / p))
    }

    /// `self <= other + tol` at every breakpoint of either profile.
    pub fn dominated_by(&self, other: &Self, tol: f64) -> bool {
        self.breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .all(|&s| self.eval(s) <= other.eval(s) + tol)
    }
}

/// Mean of `x^p` along the segment from `a` to `b` (both non-negative) when
/// `x` runs linearly.
fn segment_power_mean(a: f64, b: f64, p: f64) -> f64 {
    let d = b - a;
    if d.abs() <= 1e-12 * a.max(b) {
        return (0.5 * (a + b)).powf(p);
    }
    (b.powf(p + 1.0) - a.powf(p + 1.0)) / ((p + 1.0) * d)
}

/// Resolution of the level sweep in [`decreasing_rearrangement`].
pub const DEFAULT_LEVELS: usize = 4096;

/// Decreasing rearrangement of `|u|` with respect to `mu_{l,alpha}`.
pub fn decreasing_rearrangement(f: &MeshFunction, l: f64, alpha: f64) -> Result<DecreasingProfile> {
    decreasing_rearrangement_with(f, l, alpha, DEFAULT_LEVELS)
}

/// Level sweep: the distribution function is evaluated exactly (for the
/// piecewise-linear `u`) at `levels` uniform thresholds, `levels` quantiles
/// of the nodal values and the values of flat elements, and inverted by
/// linear interpolation. The quantiles keep flat stretches of `u*` resolved
/// as the mesh is refined.
pub fn decreasing_rearrangement_with(
    f: &MeshFunction,
    l: f64,
    alpha: f64,
    levels: usize,
) -> Result<DecreasingProfile> {
    let rule = f.rule.build(alpha, l);
    let ne = f.mesh.elements().len();
    let measures: Vec<f64> = (0..ne)
        .map(|e| rule.measure(&f.mesh.triangle(e)))
        .collect();
    let total: f64 = measures.iter().sum();
    let top = f.max_abs();
    if top == 0.0 {
        return DecreasingProfile::constant(0.0, total);
    }
    let levels = levels.max(2);
    let mut grid: Vec<f64> = (0..=levels).map(|j| top * j as f64 / levels as f64).collect();
    let mut nodal: Vec<f64> = f.values.iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
    nodal.sort_by(f64::total_cmp);
    if nodal.len() > 1 {
        let last = nodal.len() - 1;
        grid.extend((0..=levels).map(|j| nodal[j * last / levels]));
    }
    let mut plateaus: Vec<(f64, f64)> = Vec::new();
    for (e, mu) in measures.iter().enumerate() {
        let v = f.element_values(e);
        if v[0] == v[1] && v[1] == v[2] && v[0] != 0.0 {
            plateaus.push((v[0].abs(), *mu));
        }
    }
    plateaus.sort_by(|a, b| a.0.total_cmp(&b.0));
    plateaus.dedup_by(|b, a| {
        let same = a.0 == b.0;
        if same {
            a.1 += b.1;
        }
        same
    });
    grid.extend(plateaus.iter().map(|p| p.0));
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite levels"));
    grid.dedup();
    let nl = grid.len();
    let index_of = |t: f64| grid.partition_point(|&g| g < t);
    // full[j] accumulates elements lying entirely above level j
    let mut full = alloc::vec![0.0; nl + 1];
    let mut partial = alloc::vec![0.0; nl];
    for (e, mu) in measures.iter().enumerate() {
        let v = f.element_values(e);
        let sign_change = v.iter().any(|&x| x > 0.0) && v.iter().any(|&x| x < 0.0);
        let lo = if sign_change {
            0.0
        } else {
            v.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()))
        };
        let hi = v.iter().fold(0.0, |m, x| m.max(x.abs()));
        // levels t < lo see the whole element, unless it is split by sign
        let j_lo = index_of(lo);
        let j_hi = index_of(hi);
        full[0] += mu;
        full[j_lo] -= mu;
        let tri = f.mesh.triangle(e);
        for j in j_lo..j_hi {
            let t = grid[j];
            let mut m = 0.0;
            for sign in [1.0, -1.0] {
                if v.iter().any(|&x| sign * x > t) {
                    m += clipped_measure(&rule, &tri, &v, sign, t);
                }
            }
            partial[j] += m;
        }
    }
    let mut lambda = alloc::vec![0.0; nl];
    let mut run = 0.0;
    for j in 0..nl {
        run += full[j];
        lambda[j] = run + partial[j];
    }
    let plateau_at = |t: f64| -> f64 {
        plateaus
            .binary_search_by(|p| p.0.total_cmp(&t))
            .map_or(0.0, |i| plateaus[i].1)
    };
    let mut s = Vec::with_capacity(nl + plateaus.len() + 2);
    let mut u = Vec::with_capacity(s.capacity());
    let mut last = 0.0f64;
    let mut push = |si: f64, ui: f64, s: &mut Vec<f64>, u: &mut Vec<f64>| {
        let si = si.max(last).min(total);
        last = si;
        s.push(si);
        u.push(ui);
    };
    for j in (0..nl).rev() {
        let t = grid[j];
        if j == nl - 1 {
            push(0.0, t, &mut s, &mut u);
        } else {
            push(lambda[j], t, &mut s, &mut u);
        }
        let pm = plateau_at(t);
        if pm > 0.0 {
            push(lambda[j] + pm, t, &mut s, &mut u);
        }
    }
    push(total, 0.0, &mut s, &mut u);
    DecreasingProfile::new(s, u)
}

/// `U(r) = u*(kappa r^d / d)` on the half-ball `B_{r*}^+` carrying the same
/// weighted volume, `d = l + N + alpha`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialFunction {
    profile: DecreasingProfile,
    dim: usize,
    exponent: f64,
    kappa: f64,
    r_star: f64,
}

impl RadialFunction {
    pub fn new(profile: DecreasingProfile, dim: usize, l: f64, alpha: f64) -> Result<Self> {
        let exponent = l + dim as f64 + alpha;
        if !(exponent > 0.0) {
            return Err(Error::InvalidParams(alloc::format!(
                "l + N + alpha must be positive, got {exponent}"
            )));
        }
        let kappa = kappa(dim, alpha)?;
        let r_star = (exponent * profile.total_measure() / kappa).powf(1.0 / exponent);
        Ok(Self {
            profile,
            dim,
            exponent,
            kappa,
            r_star,
        })
    }

    pub fn profile(&self) -> &DecreasingProfile {
        &self.profile
    }

    pub fn r_star(&self) -> f64 {
        self.r_star
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `l + N + alpha`.
    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Weighted volume of `B_r^+`.
    pub fn volume(&self, r: f64) -> f64 {
        self.kappa * r.powf(self.exponent) / self.exponent
    }

    /// Radius of the half-ball with weighted volume `s`.
    pub fn radius(&self, s: f64) -> f64 {
        (self.exponent * s / self.kappa).powf(1.0 / self.exponent)
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.profile.eval(self.volume(r))
    }

    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        self.profile.lp_norm(p)
    }

    /// `∫ |∇U|^q dmu`, exact for the piecewise-linear profile in `s`.
    ///
    /// With `s = kappa r^d / d`, `|U'(r)| = |u*'(s)| kappa r^{d-1}` and
    /// `dmu = ds`.
    pub fn gradient_moment(&self, q: f64) -> f64 {
        let d = self.exponent;
        let beta = q * (d - 1.0) / d;
        let c = self.kappa.powf(q) * (d / self.kappa).powf(beta);
        let bp = self.profile.breakpoints();
        let vals = self.profile.values();
        let mut acc = 0.0;
        for i in 0..bp.len() - 1 {
            let (s0, s1) = (bp[i], bp[i + 1]);
            if s1 <= s0 {
                continue;
            }
            let slope = (vals[i + 1] - vals[i]).abs() / (s1 - s0);
            if slope == 0.0 {
                continue;
            }
            acc += slope.powf(q) * c * (s1.powf(beta + 1.0) - s0.powf(beta + 1.0)) / (beta + 1.0);
        }
        acc
    }
}

/// Schwarz symmetrization of `u` with respect to `mu_{l,alpha}` in the plane.
pub fn schwarz_symmetrization(f: &MeshFunction, l: f64, alpha: f64) -> Result<RadialFunction> {
    RadialFunction::new(decreasing_rearrangement(f, l, alpha)?, 2, l, alpha)
}
