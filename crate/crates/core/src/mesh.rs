//! Conforming triangulations of planar domains in the closed half-plane
//! `x_2 >= 0`, and integration of `g(x) x_2^alpha |x|^l` over triangles.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::StarProfile;
use crate::quadrature::{GaussLegendre, PowerWeightRule};

pub type Point = [f64; 2];

/// Which part of the boundary an edge belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryTag {
    /// Curved part inside the open half-plane; Dirichlet data lives here.
    GammaPlus,
    /// Flat part on `x_2 = 0`; natural boundary condition.
    GammaZero,
}

impl BoundaryTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundaryTag::GammaPlus => "gamma_plus",
            BoundaryTag::GammaZero => "gamma_zero",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gamma_plus" => Some(BoundaryTag::GammaPlus),
            "gamma_zero" => Some(BoundaryTag::GammaZero),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub a: usize,
    pub b: usize,
    pub tag: BoundaryTag,
}

const RING_EDGE_RATIO: f64 = 1.75;

/// Nodes strictly this close to `x_2 = 0` are snapped onto it.
const AXIS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    nodes: Vec<Point>,
    elements: Vec<[usize; 3]>,
    boundary: Vec<BoundaryEdge>,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn signed_area(p: &[Point; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]))
}

impl TriMesh {
    /// Validates and normalizes a mesh: elements are reoriented
    /// counter-clockwise, degenerate elements and non-conforming edges are
    /// rejected. Without explicit boundary tags, boundary edges lying on
    /// `x_2 = 0` become `gamma_zero` and all others `gamma_plus`.
    pub fn new(
        mut nodes: Vec<Point>,
        mut elements: Vec<[usize; 3]>,
        boundary: Option<Vec<BoundaryEdge>>,
    ) -> Result<Self> {
        if nodes.is_empty() || elements.is_empty() {
            return Err(Error::InvalidMesh("mesh has no nodes or no elements".into()));
        }
        for (i, p) in nodes.iter_mut().enumerate() {
            if !p[0].is_finite() || !p[1].is_finite() {
                return Err(Error::InvalidMesh(alloc::format!("node {i} is not finite")));
            }
            if p[1] < -AXIS_TOL {
                return Err(Error::InvalidMesh(alloc::format!(
                    "node {i} lies below the half-plane (x2 = {})",
                    p[1]
                )));
            }
            if p[1] < AXIS_TOL {
                p[1] = 0.0;
            }
        }
        let mut edges: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (e, el) in elements.iter_mut().enumerate() {
            if el.iter().any(|&v| v >= nodes.len()) {
                return Err(Error::InvalidMesh(alloc::format!(
                    "element {e} references a missing node"
                )));
            }
            let pts = [nodes[el[0]], nodes[el[1]], nodes[el[2]]];
            let a = signed_area(&pts);
            let scale = diameter(&pts);
            if !(a.abs() > 1e-14 * scale * scale) {
                return Err(Error::InvalidMesh(alloc::format!(
                    "element {e} has zero area"
                )));
            }
            if a < 0.0 {
                el.swap(1, 2);
            }
            for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                *edges.entry(edge_key(el[i], el[j])).or_insert(0) += 1;
            }
        }
        if let Some((&(a, b), _)) = edges.iter().find(|(_, &c)| c > 2) {
            return Err(Error::InvalidMesh(alloc::format!(
                "edge ({a}, {b}) is shared by more than two elements"
            )));
        }
        let free: Vec<(usize, usize)> = edges
            .iter()
            .filter(|(_, &c)| c == 1)
            .map(|(&k, _)| k)
            .collect();
        let on_axis = |a: usize, b: usize| nodes[a][1] == 0.0 && nodes[b][1] == 0.0;
        let boundary = match boundary {
            None => free
                .iter()
                .map(|&(a, b)| BoundaryEdge {
                    a,
                    b,
                    tag: if on_axis(a, b) {
                        BoundaryTag::GammaZero
                    } else {
                        BoundaryTag::GammaPlus
                    },
                })
                .collect(),
            Some(given) => {
                let mut seen: BTreeMap<(usize, usize), BoundaryTag> = BTreeMap::new();
                for e in &given {
                    if e.a >= nodes.len() || e.b >= nodes.len() {
                        return Err(Error::InvalidMesh("boundary edge references a missing node".into()));
                    }
                    if e.tag == BoundaryTag::GammaZero && !on_axis(e.a, e.b) {
                        return Err(Error::InvalidMesh(alloc::format!(
                            "gamma_zero edge ({}, {}) is not on x2 = 0",
                            e.a,
                            e.b
                        )));
                    }
                    if e.tag == BoundaryTag::GammaPlus && on_axis(e.a, e.b) {
                        return Err(Error::InvalidMesh(alloc::format!(
                            "gamma_plus edge ({}, {}) lies on x2 = 0",
                            e.a,
                            e.b
                        )));
                    }
                    if seen.insert(edge_key(e.a, e.b), e.tag).is_some() {
                        return Err(Error::InvalidMesh(alloc::format!(
                            "boundary edge ({}, {}) listed twice",
                            e.a,
                            e.b
                        )));
                    }
                }
                if seen.len() != free.len() || free.iter().any(|k| !seen.contains_key(k)) {
                    return Err(Error::InvalidMesh(
                        "boundary section does not match the free edges of the mesh".into(),
                    ));
                }
                given
            }
        };
        Ok(Self {
            nodes,
            elements,
            boundary,
        })
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn elements(&self) -> &[[usize; 3]] {
        &self.elements
    }

    pub fn boundary(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    pub fn triangle(&self, e: usize) -> [Point; 3] {
        let el = self.elements[e];
        [self.nodes[el[0]], self.nodes[el[1]], self.nodes[el[2]]]
    }

    /// Nodes touching a `gamma_plus` edge.
    pub fn dirichlet_mask(&self) -> Vec<bool> {
        let mut mask = alloc::vec![false; self.nodes.len()];
        for e in self.boundary.iter().filter(|e| e.tag == BoundaryTag::GammaPlus) {
            mask[e.a] = true;
            mask[e.b] = true;
        }
        mask
    }

    /// Longest edge.
    pub fn h(&self) -> f64 {
        (0..self.elements.len())
            .map(|e| diameter(&self.triangle(e)))
            .fold(0.0, f64::max)
    }

    /// Per-element `mu_{l,alpha}` measure.
    pub fn element_measures(&self, l: f64, alpha: f64) -> Vec<f64> {
        let rule = WeightedTriangleRule::new(alpha, l);
        (0..self.elements.len())
            .map(|e| rule.measure(&self.triangle(e)))
            .collect()
    }

    pub fn measure(&self, l: f64, alpha: f64) -> f64 {
        self.element_measures(l, alpha).iter().sum()
    }

    /// The dilation `x -> t x` of the domain.
    pub fn scaled(&self, t: f64) -> Self {
        Self {
            nodes: self.nodes.iter().map(|p| [p[0] * t, p[1] * t]).collect(),
            elements: self.elements.clone(),
            boundary: self.boundary.clone(),
        }
    }

    /// Quasi-uniform ring mesh of the half-disc `B_R^+`.
    pub fn half_disc(radius: f64, h: f64) -> Result<Self> {
        let profile = StarProfile::half_ball(2, radius)?;
        Self::star_domain(&profile, h, 1.0)
    }

    /// Ring mesh of the planar star-shaped set described by `profile`.
    ///
    /// `h` is the target longest edge for a half-disc. Ring `i` of `n` sits
    /// at relative radius `(i/n)^grading`; a grading above one concentrates
    /// rings toward the origin. Rings are joined by
    /// advancing along both rings in angle order.
    pub fn star_domain(profile: &StarProfile, h: f64, grading: f64) -> Result<Self> {
        if profile.dim() != 2 {
            return Err(Error::InvalidMesh("star domains are meshed in the plane only".into()));
        }
        if !(h > 0.0) || !(grading >= 1.0) {
            return Err(Error::InvalidMesh(alloc::format!(
                "need h > 0 and grading >= 1 (h={h}, grading={grading})"
            )));
        }
        let rmax = profile.sampled_max();
        // longest edges are ring-to-ring diagonals, about sqrt(3) ring gaps
        let rings = ((RING_EDGE_RATIO * rmax / h).ceil() as usize).max(2);
        let rel: Vec<f64> = (0..=rings)
            .map(|i| (i as f64 / rings as f64).powf(grading))
            .collect();
        let mut nodes: Vec<Point> = alloc::vec![[0.0, 0.0]];
        let mut ring_nodes: Vec<Vec<(usize, f64)>> = alloc::vec![alloc::vec![(0, 0.0)]];
        for i in 1..=rings {
            let dr = rel[i] - rel[i - 1];
            let segs = ((PI * rel[i] / dr).round() as usize).max(2);
            let mut ring = Vec::with_capacity(segs + 1);
            for j in 0..=segs {
                let th = if j == segs { PI } else { PI * j as f64 / segs as f64 };
                let r = rel[i] * profile.eval(th).0;
                let y = if j == 0 || j == segs { 0.0 } else { r * th.sin() };
                let x = if j == 0 {
                    r
                } else if j == segs {
                    -r
                } else {
                    r * th.cos()
                };
                ring.push((nodes.len(), th));
                nodes.push([x, y]);
            }
            ring_nodes.push(ring);
        }
        let mut elements: Vec<[usize; 3]> = Vec::new();
        for i in 1..=rings {
            let inner = &ring_nodes[i - 1];
            let outer = &ring_nodes[i];
            if i == 1 {
                for w in outer.windows(2) {
                    elements.push([0, w[0].0, w[1].0]);
                }
                continue;
            }
            let (mut a, mut b) = (0usize, 0usize);
            let (p, q) = (inner.len() - 1, outer.len() - 1);
            while a < p || b < q {
                let advance_outer = if a == p {
                    true
                } else if b == q {
                    false
                } else {
                    outer[b + 1].1 <= inner[a + 1].1
                };
                if advance_outer {
                    elements.push([inner[a].0, outer[b].0, outer[b + 1].0]);
                    b += 1;
                } else {
                    elements.push([inner[a].0, outer[b].0, inner[a + 1].0]);
                    a += 1;
                }
            }
        }
        Self::new(nodes, elements, None)
    }
}

fn diameter(p: &[Point; 3]) -> f64 {
    let d = |a: Point, b: Point| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    d(p[0], p[1]).max(d(p[1], p[2])).max(d(p[2], p[0]))
}

/// Integrates `g(x) x_2^alpha |x|^l` over triangles in the closed
/// half-plane.
///
/// The triangle is cut into horizontal strips between its vertex heights.
/// Each chord is integrated by Gauss–Legendre in `x_1`; in `x_2` the factor
/// `x_2^alpha` is carried by a product rule on intervals starting at the
/// axis and by Gauss–Legendre elsewhere. For `l = 0` and polynomial `g` of
/// degree at most two the result is exact up to rounding, including on
/// elements touching `x_2 = 0` where the weight vanishes.
///
/// For `l != 0`, triangles with a vertex at the origin are integrated in
/// polar coordinates around it, with product rules for `r^{l+alpha+1}` and
/// for `sin^alpha` near the axis. Triangles close to the origin relative to
/// their size are subdivided first.
#[derive(Debug, Clone)]
pub struct WeightedTriangleRule {
    alpha: f64,
    l: f64,
    chord: GaussLegendre,
    height: GaussLegendre,
    axis: PowerWeightRule,
    radial: PowerWeightRule,
    angle: GaussLegendre,
    angle_axis: PowerWeightRule,
}

const ORIGIN_REFINEMENT: usize = 6;
const ANGLE_POINTS: usize = 12;

impl WeightedTriangleRule {
    pub fn new(alpha: f64, l: f64) -> Self {
        Self::with_orders(alpha, l, 3, 6)
    }

    pub fn with_orders(alpha: f64, l: f64, chord_points: usize, height_points: usize) -> Self {
        Self {
            alpha,
            l,
            chord: GaussLegendre::new(chord_points),
            height: GaussLegendre::new(height_points),
            axis: PowerWeightRule::new(height_points, alpha),
            radial: PowerWeightRule::new(height_points, l + alpha + 1.0),
            angle: GaussLegendre::new(ANGLE_POINTS),
            angle_axis: PowerWeightRule::new(ANGLE_POINTS, alpha),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn integrate<const K: usize>(
        &self,
        tri: &[Point; 3],
        g: impl Fn(f64, f64) -> [f64; K],
    ) -> [f64; K] {
        if self.l != 0.0 {
            self.integrate_near_origin(tri, &g, ORIGIN_REFINEMENT)
        } else {
            self.integrate_strips(tri, &g)
        }
    }

    /// `∫_T |x|^l x_2^alpha dx`; in closed form when `l = 0`.
    pub fn measure(&self, tri: &[Point; 3]) -> f64 {
        if self.l != 0.0 {
            return self.integrate(tri, |_, _| [1.0])[0];
        }
        let mut p = *tri;
        for q in &mut p {
            q[1] = q[1].max(0.0);
        }
        p.sort_by(|a, b| a[1].total_cmp(&b[1]));
        let [p0, p1, p2] = p;
        if !(p2[1] > p0[1]) {
            return 0.0;
        }
        let long = |y: f64| p0[0] + (p2[0] - p0[0]) * (y - p0[1]) / (p2[1] - p0[1]);
        let a = self.alpha;
        // ∫ over [ya, yb] of a chord whose width runs linearly from wa to wb
        let strip = |ya: f64, yb: f64, wa: f64, wb: f64| {
            let d = yb - ya;
            let diff = |e: f64| {
                if ya > 0.0 {
                    ya.powf(e) * (e * (d / ya).ln_1p()).exp_m1()
                } else {
                    yb.powf(e)
                }
            };
            let m0 = diff(a + 1.0) / (a + 1.0);
            let m1 = diff(a + 2.0) / (a + 2.0) - ya * m0;
            wa * m0 + (wb - wa) * m1 / d
        };
        let mut acc = 0.0;
        if p1[1] > p0[1] {
            acc += strip(p0[1], p1[1], 0.0, (long(p1[1]) - p1[0]).abs());
        }
        if p2[1] > p1[1] {
            acc += strip(p1[1], p2[1], (long(p1[1]) - p1[0]).abs(), 0.0);
        }
        acc
    }

    fn integrate_near_origin<const K: usize>(
        &self,
        tri: &[Point; 3],
        g: &impl Fn(f64, f64) -> [f64; K],
        depth: usize,
    ) -> [f64; K] {
        let diam = diameter(tri);
        let norm = |p: &Point| (p[0] * p[0] + p[1] * p[1]).sqrt();
        let tol = 1e-12 * diam;
        if let Some(i) = tri.iter().position(|p| norm(p) <= tol) {
            return self.integrate_polar(tri[(i + 1) % 3], tri[(i + 2) % 3], g);
        }
        // origin inside an axis edge: split there
        for i in 0..3 {
            let (a, b) = (tri[i], tri[(i + 1) % 3]);
            if a[1] <= tol && b[1] <= tol && a[0] * b[0] < 0.0 {
                let c = tri[(i + 2) % 3];
                let mut acc = self.integrate_polar(c, a, g);
                add(&mut acc, self.integrate_polar(b, c, g));
                return acc;
            }
        }
        let closest = tri.iter().map(norm).fold(f64::INFINITY, f64::min);
        if closest >= diam || depth == 0 {
            return self.integrate_strips(tri, g);
        }
        let mid = |a: Point, b: Point| [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        let (a, b, c) = (tri[0], tri[1], tri[2]);
        let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
        let mut acc = [0.0; K];
        for sub in [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]] {
            add(&mut acc, self.integrate_near_origin(&sub, g, depth - 1));
        }
        acc
    }

    /// Triangle `(0, p, q)` in polar coordinates about the origin.
    fn integrate_polar<const K: usize>(
        &self,
        p: Point,
        q: Point,
        g: &impl Fn(f64, f64) -> [f64; K],
    ) -> [f64; K] {
        let mut t1 = p[1].max(0.0).atan2(p[0]);
        let mut t2 = q[1].max(0.0).atan2(q[0]);
        if t1 > t2 {
            core::mem::swap(&mut t1, &mut t2);
        }
        // ray at angle t meets the line through p, q at n.x = c
        let n = [q[1] - p[1], p[0] - q[0]];
        let c = n[0] * p[0] + n[1] * p[1];
        let inner = |t: f64| -> [f64; K] {
            let (s, co) = t.sin_cos();
            let reach = c / (n[0] * co + n[1] * s);
            self.radial.integrate_from_zero_n(reach, |r| g(r * co, r * s))
        };
        let span = t2 - t1;
        let panels = ((span / (PI / 8.0)).ceil() as usize).max(2);
        let mut acc = [0.0; K];
        let axis_tol = 1e-14;
        for j in 0..panels {
            let a = t1 + span * j as f64 / panels as f64;
            let b = t1 + span * (j + 1) as f64 / panels as f64;
            let v = if j == 0 && a <= axis_tol {
                // sin^alpha t = t^alpha (sin t / t)^alpha
                self.angle_axis.integrate_from_zero_n(b, |t| {
                    let f = (t.sin() / t).powf(self.alpha);
                    inner(t).map(|x| x * f)
                })
            } else if j + 1 == panels && b >= PI - axis_tol {
                self.angle_axis.integrate_from_zero_n(PI - a, |u| {
                    let f = (u.sin() / u).powf(self.alpha);
                    inner(PI - u).map(|x| x * f)
                })
            } else {
                let mut acc = [0.0; K];
                for (t, w) in self.angle.mapped(a, b) {
                    let f = w * t.sin().powf(self.alpha);
                    for (o, x) in acc.iter_mut().zip(inner(t)) {
                        *o += f * x;
                    }
                }
                acc
            };
            add(&mut acc, v);
        }
        acc
    }

    fn integrate_strips<const K: usize>(
        &self,
        tri: &[Point; 3],
        g: &impl Fn(f64, f64) -> [f64; K],
    ) -> [f64; K] {
        let mut p = *tri;
        for q in &mut p {
            q[1] = q[1].max(0.0);
        }
        p.sort_by(|a, b| a[1].partial_cmp(&b[1]).expect("finite coordinates"));
        let [p0, p1, p2] = p;
        let mut acc = [0.0; K];
        if !(p2[1] > p0[1]) {
            return acc;
        }
        let line = |a: Point, b: Point| {
            move |y: f64| a[0] + (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1])
        };
        let long = line(p0, p2);
        if p1[1] > p0[1] {
            let v = self.strip(p0[1], p1[1], &long, &line(p0, p1), g);
            add(&mut acc, v);
        }
        if p2[1] > p1[1] {
            let v = self.strip(p1[1], p2[1], &long, &line(p1, p2), g);
            add(&mut acc, v);
        }
        acc
    }

    /// `∫_{ya}^{yb} y^alpha ∫_{left(y)}^{right(y)} g |x|^l dx_1 dy` with the
    /// orientation of the chord fixed at mid-height, so the chord integral
    /// extends polynomially below `ya`.
    fn strip<const K: usize>(
        &self,
        ya: f64,
        yb: f64,
        left: &impl Fn(f64) -> f64,
        right: &impl Fn(f64) -> f64,
        g: &impl Fn(f64, f64) -> [f64; K],
    ) -> [f64; K] {
        let ym = 0.5 * (ya + yb);
        let sign = if right(ym) >= left(ym) { 1.0 } else { -1.0 };
        let l = self.l;
        let chord = |y: f64| -> [f64; K] {
            let (xa, xb) = (left(y), right(y));
            let mut out = [0.0; K];
            for (x, w) in self.chord.mapped(xa, xb) {
                let v = g(x, y);
                let radial = if l == 0.0 { 1.0 } else { (x * x + y * y).sqrt().powf(l) };
                for (o, vi) in out.iter_mut().zip(v) {
                    *o += w * vi * radial;
                }
            }
            for o in &mut out {
                *o *= sign;
            }
            out
        };
        let width = yb - ya;
        if ya <= 0.0 {
            self.axis.integrate_from_zero_n(yb, chord)
        } else if ya >= width {
            let mut acc = [0.0; K];
            for (y, w) in self.height.mapped(ya, yb) {
                let wy = w * y.powf(self.alpha);
                for (a, v) in acc.iter_mut().zip(chord(y)) {
                    *a += wy * v;
                }
            }
            acc
        } else if self.l != 0.0 {
            // |x|^l spoils the polynomial extension below ya
            let mut acc = [0.0; K];
            let (mut a, mut b) = (ya, (2.0 * ya).min(yb));
            while a < yb {
                for (y, w) in self.height.mapped(a, b) {
                    let wy = w * y.powf(self.alpha);
                    for (s, v) in acc.iter_mut().zip(chord(y)) {
                        *s += wy * v;
                    }
                }
                a = b;
                b = (2.0 * b).min(yb);
            }
            acc
        } else {
            let upper = self.axis.integrate_from_zero_n(yb, chord);
            let lower = self.axis.integrate_from_zero_n(ya, chord);
            let mut acc = upper;
            for (a, v) in acc.iter_mut().zip(lower) {
                *a -= v;
            }
            acc
        }
    }
}

fn add<const K: usize>(acc: &mut [f64; K], v: [f64; K]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += x;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Brute-force oracle: midpoint rule on a uniform refinement of the
    /// triangle into n^2 congruent sub-triangles.
    fn refined_midpoint(tri: &[Point; 3], n: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
        let [a, b, c] = *tri;
        let area = signed_area(tri).abs();
        let sub = area / (n * n) as f64;
        let pt = |i: f64, j: f64| {
            [
                a[0] + (b[0] - a[0]) * i / n as f64 + (c[0] - a[0]) * j / n as f64,
                a[1] + (b[1] - a[1]) * i / n as f64 + (c[1] - a[1]) * j / n as f64,
            ]
        };
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n - i {
                let (fi, fj) = (i as f64, j as f64);
                let c1 = [pt(fi, fj), pt(fi + 1.0, fj), pt(fi, fj + 1.0)];
                let m = [(c1[0][0] + c1[1][0] + c1[2][0]) / 3.0, (c1[0][1] + c1[1][1] + c1[2][1]) / 3.0];
                acc += f(m[0], m[1]) * sub;
                if i + j + 1 < n {
                    let c2 = [pt(fi + 1.0, fj), pt(fi + 1.0, fj + 1.0), pt(fi, fj + 1.0)];
                    let m = [(c2[0][0] + c2[1][0] + c2[2][0]) / 3.0, (c2[0][1] + c2[1][1] + c2[2][1]) / 3.0];
                    acc += f(m[0], m[1]) * sub;
                }
            }
        }
        acc
    }

    #[test]
    fn exact_for_polynomial_weight_alpha_one() {
        // alpha = 1, l = 0: ∫_T y dA = area * mean(y)
        let rule = WeightedTriangleRule::new(1.0, 0.0);
        let tri = [[0.0, 0.0], [1.0, 0.0], [0.3, 0.7]];
        let v = rule.integrate(&tri, |_, _| [1.0])[0];
        assert_relative_eq!(v, 0.35 * 0.7 / 3.0, max_relative = 1e-14);
        // horizontal top edge, vertex on the axis
        let tri = [[0.2, 0.0], [1.0, 0.5], [-0.4, 0.5]];
        let area = signed_area(&tri).abs();
        let v = rule.integrate(&tri, |_, _| [1.0])[0];
        assert_relative_eq!(v, area * (0.0 + 0.5 + 0.5) / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn fractional_alpha_matches_closed_form() {
        // ∫ over the triangle (0,0),(1,0),(0,1) of y^a = ∫_0^1 (1-y) y^a dy
        for alpha in [0.3, 0.5, 1.7] {
            let rule = WeightedTriangleRule::new(alpha, 0.0);
            let tri = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
            let exact = 1.0 / (alpha + 1.0) - 1.0 / (alpha + 2.0);
            assert_relative_eq!(rule.integrate(&tri, |_, _| [1.0])[0], exact, max_relative = 1e-13);
            // quadratic integrand x*y: ∫_0^1 y^{a+1} (1-y)^2/2 dy
            let a = alpha + 1.0;
            let exact = 0.5 * (1.0 / (a + 1.0) - 2.0 / (a + 2.0) + 1.0 / (a + 3.0));
            assert_relative_eq!(
                rule.integrate(&tri, |x, y| [x * y])[0],
                exact,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn closed_form_measure_matches_quadrature() {
        let tris = [
            [[0.0, 0.0], [1.0, 0.0], [0.3, 0.7]],
            [[0.1, 0.02], [0.5, 0.3], [-0.2, 0.11]],
            [[2.0, 5.0], [2.01, 5.003], [1.995, 5.01]],
            [[-1.0, 0.0], [0.0, 0.0], [-0.5, 1e-3]],
        ];
        for alpha in [0.3, 1.0, 2.5] {
            let rule = WeightedTriangleRule::new(alpha, 0.0);
            for tri in &tris {
                let q = rule.integrate(tri, |_, _| [1.0])[0];
                assert_relative_eq!(rule.measure(tri), q, max_relative = 1e-12);
            }
        }
        let rule = WeightedTriangleRule::new(1.0, -1.0);
        let tri = [[0.0, 0.0], [1.0, 0.0], [0.3, 0.7]];
        assert_eq!(rule.measure(&tri), rule.integrate(&tri, |_, _| [1.0])[0]);
    }

    #[test]
    fn floating_triangles_match_oracle() {
        let tri = [[0.1, 0.02], [0.5, 0.3], [-0.2, 0.11]];
        for (alpha, l) in [(0.5, 0.0), (1.0, 0.0), (0.5, 1.0), (1.0, -1.0)] {
            let rule = WeightedTriangleRule::new(alpha, l);
            let f = |x: f64, y: f64| (1.0 + x) * y.powf(alpha) * (x * x + y * y).sqrt().powf(l);
            let v = rule.integrate(&tri, |x, _| [1.0 + x])[0];
            let o = refined_midpoint(&tri, 800, f);
            assert_relative_eq!(v, o, max_relative = 2e-6);
        }
    }

    #[test]
    fn origin_vertex_uses_polar_rule() {
        // ∫ over the sector-free triangle (0,0),(1,0),(0,1) of y |x|^{-1}:
        // polar: ∫_0^{π/2} sinθ ∫_0^{1/(cosθ+sinθ)} r dr dθ
        let rule = WeightedTriangleRule::new(1.0, -1.0);
        let tri = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let v = rule.integrate(&tri, |_, _| [1.0])[0];
        let gl = GaussLegendre::new(40);
        let exact = gl.integrate(0.0, PI / 2.0, |t| {
            let r = 1.0 / (t.cos() + t.sin());
            t.sin() * r * r / 2.0
        });
        assert_relative_eq!(v, exact, max_relative = 1e-9);
    }

    #[test]
    fn half_disc_mesh() {
        let m = TriMesh::half_disc(1.0, 0.05).unwrap();
        assert!(m.h() <= 0.05 && m.h() > 0.04);
        // polygonal area converges to pi/2, weighted measure to 2/3
        assert!((m.measure(0.0, 1.0) - 2.0 / 3.0).abs() < 2e-3);
        // kappa / (l + alpha + 2) with kappa = 2
        assert!((m.measure(-1.0, 1.0) - 1.0).abs() < 3e-3);
        assert!((m.measure(1.5, 0.5) - 2.396_280_469_471_184 / 4.0).abs() < 3e-3);
        let area: f64 = (0..m.elements().len()).map(|e| signed_area(&m.triangle(e))).sum();
        assert!(area > 0.0 && (area - PI / 2.0).abs() < 5e-3);
        let mask = m.dirichlet_mask();
        for (p, d) in m.nodes().iter().zip(&mask) {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert_eq!(*d, (r - 1.0).abs() < 1e-12);
        }
        let zero = m.boundary().iter().filter(|e| e.tag == BoundaryTag::GammaZero).count();
        assert_eq!(zero, 2 * 35);
    }

    #[test]
    fn rejects_broken_meshes() {
        let nodes = alloc::vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
        assert!(TriMesh::new(nodes.clone(), alloc::vec![[0, 1, 2], [1, 3, 2]], None).is_ok());
        assert!(TriMesh::new(nodes.clone(), alloc::vec![[0, 1, 1]], None).is_err());
        assert!(TriMesh::new(nodes.clone(), alloc::vec![[0, 1, 9]], None).is_err());
        let below = alloc::vec![[0.0, -0.5], [1.0, 0.0], [0.0, 1.0]];
        assert!(TriMesh::new(below, alloc::vec![[0, 1, 2]], None).is_err());
        let wrong_tag = alloc::vec![BoundaryEdge { a: 0, b: 2, tag: BoundaryTag::GammaZero }];
        assert!(TriMesh::new(nodes.clone(), alloc::vec![[0, 1, 2]], Some(wrong_tag)).is_err());
        let on_axis = alloc::vec![
            BoundaryEdge { a: 0, b: 1, tag: BoundaryTag::GammaPlus },
            BoundaryEdge { a: 1, b: 2, tag: BoundaryTag::GammaPlus },
            BoundaryEdge { a: 2, b: 0, tag: BoundaryTag::GammaPlus },
        ];
        assert!(TriMesh::new(nodes, alloc::vec![[0, 1, 2]], Some(on_axis)).is_err());
    }
}
