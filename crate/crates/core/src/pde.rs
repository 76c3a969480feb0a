//! Piecewise-linear finite elements for
//! `-div(A ∇u) = f x_2^alpha |x|^m` in a planar domain of the half-plane,
//! `u = 0` on `gamma_plus`, natural condition on `gamma_zero`, where
//! `A = x_2^alpha |x|^m B` with `B` symmetric and `I <= B <= Λ I`.
//!
//! Also the explicit radial solution built from the rearranged data and
//! the comparison between the two.

use alloc::sync::Arc;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::TriMesh;
use crate::quadrature::GaussLegendre;
use crate::rearrange::{
    decreasing_rearrangement, gradient, schwarz_symmetrization, DecreasingProfile, ElementRule,
    MeshFunction,
};
use crate::sparse::{solve_spd, CsrMatrix};
use crate::spline::CubicSpline;
use crate::weights::{kappa, WeightParams};

/// The matrix `B` multiplying the weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixField {
    /// `c I`.
    Isotropic(f64),
    /// `diag(a, b)`.
    Diagonal(f64, f64),
    /// `[b11, b12, b22]` per element.
    PerElement(Vec<[f64; 3]>),
}

impl MatrixField {
    fn entries(&self, e: usize) -> [f64; 3] {
        match self {
            MatrixField::Isotropic(c) => [*c, 0.0, *c],
            MatrixField::Diagonal(a, b) => [*a, 0.0, *b],
            MatrixField::PerElement(v) => v[e],
        }
    }
}

fn sym_eigenvalues(b: [f64; 3]) -> (f64, f64) {
    let mean = 0.5 * (b[0] + b[2]);
    let rad = (0.25 * (b[0] - b[2]).powi(2) + b[1] * b[1]).sqrt();
    (mean - rad, mean + rad)
}

const ELLIPTICITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct EllipticProblem {
    mesh: Arc<TriMesh>,
    params: WeightParams,
    matrix: MatrixField,
    lambda: f64,
    rhs: Vec<f64>,
}

impl EllipticProblem {
    /// Checks the dimension, the right-hand side length and the ellipticity
    /// bounds `1 <= eig(B) <= Λ` on every element.
    pub fn new(
        mesh: Arc<TriMesh>,
        params: WeightParams,
        matrix: MatrixField,
        lambda: f64,
        rhs: Vec<f64>,
    ) -> Result<Self> {
        if params.dim() != 2 {
            return Err(Error::InvalidParams("the finite element solver is planar (N = 2)".into()));
        }
        if !(params.dim() as f64 + params.m() + params.alpha() > 0.0) {
            return Err(Error::InvalidParams(alloc::format!(
                "N + m + alpha must be positive, got {}",
                params.dim() as f64 + params.m() + params.alpha()
            )));
        }
        if !(lambda >= 1.0) || !lambda.is_finite() {
            return Err(Error::InvalidParams(alloc::format!("need Λ >= 1, got {lambda}")));
        }
        if rhs.len() != mesh.nodes().len() || rhs.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams(alloc::format!(
                "right-hand side needs {} finite nodal values, got {}",
                mesh.nodes().len(),
                rhs.len()
            )));
        }
        if let MatrixField::PerElement(v) = &matrix {
            if v.len() != mesh.elements().len() {
                return Err(Error::InvalidParams(alloc::format!(
                    "matrix field has {} entries for {} elements",
                    v.len(),
                    mesh.elements().len()
                )));
            }
        }
        for e in 0..mesh.elements().len() {
            let (min, max) = sym_eigenvalues(matrix.entries(e));
            if !(min >= 1.0 - ELLIPTICITY_TOL && max <= lambda * (1.0 + ELLIPTICITY_TOL)) {
                return Err(Error::Ellipticity {
                    element: e,
                    min,
                    max,
                    lambda,
                });
            }
            if matches!(matrix, MatrixField::Isotropic(_) | MatrixField::Diagonal(..)) {
                break;
            }
        }
        Ok(Self {
            mesh,
            params,
            matrix,
            lambda,
            rhs,
        })
    }

    pub fn mesh(&self) -> &Arc<TriMesh> {
        &self.mesh
    }

    pub fn params(&self) -> &WeightParams {
        &self.params
    }

    pub fn matrix(&self) -> &MatrixField {
        &self.matrix
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn rhs_function(&self) -> Result<MeshFunction> {
        MeshFunction::new(self.mesh.clone(), self.rhs.clone())
    }

    /// Same problem with a different right-hand side.
    pub fn with_rhs(&self, rhs: Vec<f64>) -> Result<Self> {
        Self::new(self.mesh.clone(), self.params, self.matrix.clone(), self.lambda, rhs)
    }
}

/// Full stiffness and weighted mass matrices, before boundary conditions.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    /// `mu_{m,alpha}` of each element.
    pub element_measures: Vec<f64>,
}

/// Weighted integrals of products of barycentric coordinates, in the
/// order `00, 01, 02, 11, 12, 22`.
fn weighted_products(rule: &crate::mesh::WeightedTriangleRule, p: &[[f64; 2]; 3]) -> [f64; 6] {
    let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    rule.integrate(p, |x, y| {
        let l1 = ((x - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (y - p[0][1])) / det;
        let l2 = ((p[1][0] - p[0][0]) * (y - p[0][1]) - (x - p[0][0]) * (p[1][1] - p[0][1])) / det;
        let l0 = 1.0 - l1 - l2;
        [l0 * l0, l0 * l1, l0 * l2, l1 * l1, l1 * l2, l2 * l2]
    })
}

pub fn assemble(prob: &EllipticProblem) -> Assembly {
    let mesh = &prob.mesh;
    let rule = ElementRule::default().build(prob.params.alpha(), prob.params.m());
    let ne = mesh.elements().len();
    let mut k = Vec::with_capacity(9 * ne);
    let mut m = Vec::with_capacity(9 * ne);
    let mut measures = Vec::with_capacity(ne);
    let idx = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    for (e, el) in mesh.elements().iter().enumerate() {
        let p = mesh.triangle(e);
        let prod = weighted_products(&rule, &p);
        let mu: f64 = prod[0] + prod[3] + prod[5] + 2.0 * (prod[1] + prod[2] + prod[4]);
        measures.push(mu);
        let b = prob.matrix.entries(e);
        let grads = [
            gradient(&p, &[1.0, 0.0, 0.0]),
            gradient(&p, &[0.0, 1.0, 0.0]),
            gradient(&p, &[0.0, 0.0, 1.0]),
        ];
        for i in 0..3 {
            let bg = [
                b[0] * grads[i][0] + b[1] * grads[i][1],
                b[1] * grads[i][0] + b[2] * grads[i][1],
            ];
            for j in 0..3 {
                k.push((el[i], el[j], mu * (bg[0] * grads[j][0] + bg[1] * grads[j][1])));
                m.push((el[i], el[j], prod[idx[i][j]]));
            }
        }
    }
    let n = mesh.nodes().len();
    Assembly {
        stiffness: CsrMatrix::from_triplets(n, k),
        mass: CsrMatrix::from_triplets(n, m),
        element_measures: measures,
    }
}

/// Discrete weak solution; Dirichlet nodes are eliminated.
pub fn assemble_and_solve(prob: &EllipticProblem) -> Result<MeshFunction> {
    let asm = assemble(prob);
    solve_assembled(prob, &asm)
}

pub fn solve_assembled(prob: &EllipticProblem, asm: &Assembly) -> Result<MeshFunction> {
    let mesh = &prob.mesh;
    let n = mesh.nodes().len();
    let fixed = mesh.dirichlet_mask();
    if !fixed.iter().any(|&d| d) {
        return Err(Error::BoundaryCondition(
            "no gamma_plus nodes: the pure natural problem is singular".into(),
        ));
    }
    let mut map = alloc::vec![usize::MAX; n];
    let mut free = 0;
    for i in 0..n {
        if !fixed[i] {
            map[i] = free;
            free += 1;
        }
    }
    let load = asm.mass.mul_vec(&prob.rhs);
    let mut values = alloc::vec![0.0; n];
    if free > 0 {
        let mut trip = Vec::new();
        for i in 0..n {
            if fixed[i] {
                continue;
            }
            for (j, v) in asm.stiffness.row(i) {
                if !fixed[j] {
                    trip.push((map[i], map[j], v));
                }
            }
        }
        let a = CsrMatrix::from_triplets(free, trip);
        let b: Vec<f64> = (0..n).filter(|&i| !fixed[i]).map(|i| load[i]).collect();
        let x = if b.iter().all(|&v| v == 0.0) {
            alloc::vec![0.0; free]
        } else {
            solve_spd(&a, &b)?
        };
        for i in 0..n {
            if !fixed[i] {
                values[i] = x[map[i]];
            }
        }
    }
    MeshFunction::new(mesh.clone(), values)
}

/// `Σ_T |∇u_T|^q mu_{m,alpha}(T)`.
pub fn gradient_moment(u: &MeshFunction, element_measures: &[f64], q: f64) -> f64 {
    element_measures
        .iter()
        .enumerate()
        .map(|(e, mu)| {
            let g = u.gradient(e);
            (g[0] * g[0] + g[1] * g[1]).sqrt().powf(q) * mu
        })
        .sum()
}

/// The radial function
/// `w(r) = ∫_r^{r*} (∫_0^ρ f*(σ) σ^{d-1} dσ) ρ^{1-d} dρ`, `d = N + m + alpha`,
/// where `f*` is read as a function of the radius of the half-ball with the
/// same `mu_{m,alpha}` volume.
#[derive(Debug, Clone, Serialize)]
pub struct RadialSolution {
    r_star: f64,
    exponent: f64,
    kappa: f64,
    grid: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    #[serde(skip)]
    spline: CubicSpline,
    #[serde(skip)]
    f_star: DecreasingProfile,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

const RADIAL_GRID: usize = 1024;
const ADAPTIVE_TOL: f64 = 1e-13;

pub fn symmetrized_solution(
    f_star: &DecreasingProfile,
    params: &WeightParams,
    r_star: f64,
) -> Result<RadialSolution> {
    let d = params.dim() as f64 + params.m() + params.alpha();
    if !(d > 0.0) {
        return Err(Error::InvalidParams(alloc::format!("N + m + alpha must be positive, got {d}")));
    }
    if !(r_star > 0.0) || !r_star.is_finite() {
        return Err(Error::Domain(alloc::format!("r_star must be positive, got {r_star}")));
    }
    let kap = kappa(params.dim(), params.alpha())?;
    // S(s) = ∫_0^s f* at the breakpoints of f*
    let bp = f_star.breakpoints();
    let fv = f_star.values();
    let mut cumulative = Vec::with_capacity(bp.len());
    cumulative.push(0.0);
    for i in 0..bp.len() - 1 {
        let prev = *cumulative.last().expect("nonempty");
        cumulative.push(prev + 0.5 * (bp[i + 1] - bp[i]) * (fv[i] + fv[i + 1]));
    }
    let mut sol = RadialSolution {
        r_star,
        exponent: d,
        kappa: kap,
        grid: Vec::new(),
        values: Vec::new(),
        slopes: Vec::new(),
        spline: CubicSpline::hermite(&[0.0, 1.0], &[0.0, 0.0], &[0.0, 0.0])?,
        f_star: f_star.clone(),
        cumulative,
    };
    let mut grid: Vec<f64> = (0..=RADIAL_GRID)
        .map(|i| r_star * i as f64 / RADIAL_GRID as f64)
        .collect();
    grid.extend(
        bp.iter()
            .map(|&s| sol.radius(s))
            .filter(|&r| r > 0.0 && r < r_star),
    );
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * r_star);
    let n = grid.len();
    let gl8 = GaussLegendre::new(8);
    let gl16 = GaussLegendre::new(16);
    let mut values = alloc::vec![0.0; n];
    for i in (0..n - 1).rev() {
        let piece = sol.adaptive(&gl8, &gl16, grid[i], grid[i + 1], 20);
        values[i] = values[i + 1] + piece;
    }
    let slopes: Vec<f64> = grid.iter().map(|&r| sol.derivative(r)).collect();
    sol.spline = CubicSpline::hermite(&grid, &values, &slopes)?;
    sol.grid = grid;
    sol.values = values;
    sol.slopes = slopes;
    Ok(sol)
}

impl RadialSolution {
    fn radius(&self, s: f64) -> f64 {
        (self.exponent * s / self.kappa).powf(1.0 / self.exponent)
    }

    /// `∫_0^s f*`.
    fn cumulative_at(&self, s: f64) -> f64 {
        let bp = self.f_star.breakpoints();
        let fv = self.f_star.values();
        let total = self.f_star.total_measure();
        if s >= total {
            return self.cumulative[bp.len() - 1] + (s - total) * fv[fv.len() - 1];
        }
        let i = bp.partition_point(|&b| b <= s).max(1) - 1;
        let ds = s - bp[i];
        let f_here = self.f_star.eval(s);
        let f_left = if bp[i + 1] > bp[i] { fv[i] } else { f_here };
        self.cumulative[i] + 0.5 * ds * (f_left + f_here)
    }

    /// `∫_0^ρ f*(σ) σ^{d-1} dσ`.
    pub fn inner(&self, rho: f64) -> f64 {
        let s = self.kappa * rho.powf(self.exponent) / self.exponent;
        self.cumulative_at(s) / self.kappa
    }

    /// `w'(r) = -inner(r) r^{1-d}`.
    pub fn derivative(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        -self.inner(r) * r.powf(1.0 - self.exponent)
    }

    fn adaptive(&self, lo: &GaussLegendre, hi: &GaussLegendre, a: f64, b: f64, depth: usize) -> f64 {
        let f = |r: f64| -self.derivative(r);
        let coarse = lo.integrate(a, b, f);
        let fine = hi.integrate(a, b, f);
        if depth == 0 || (fine - coarse).abs() <= ADAPTIVE_TOL * fine.abs().max(1e-300) {
            return fine;
        }
        let m = 0.5 * (a + b);
        self.adaptive(lo, hi, a, m, depth - 1) + self.adaptive(lo, hi, m, b, depth - 1)
    }

    pub fn r_star(&self) -> f64 {
        self.r_star
    }

    /// `N + m + alpha`.
    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `w(r)`; zero beyond `r*`.
    pub fn eval(&self, r: f64) -> f64 {
        if r >= self.r_star {
            return 0.0;
        }
        self.spline.value(r.max(0.0))
    }

    /// `f*` as a function of the radius.
    pub fn f_star_at(&self, r: f64) -> f64 {
        self.f_star.eval(self.kappa * r.powf(self.exponent) / self.exponent)
    }

    /// `∫ |∇w|^q dmu_{m,alpha} = kappa ∫_0^{r*} |w'|^q r^{d-1} dr`.
    pub fn gradient_moment(&self, q: f64) -> f64 {
        let gl = GaussLegendre::new(8);
        let d = self.exponent;
        self.grid
            .windows(2)
            .map(|w| {
                gl.integrate(w[0], w[1], |r| {
                    self.derivative(r).abs().powf(q) * r.powf(d - 1.0)
                })
            })
            .sum::<f64>()
            * self.kappa
    }
}

/// Multipliers of the mesh size in the pass thresholds of
/// [`verify_comparison`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonTolerance {
    pub pointwise: f64,
    pub gradient: f64,
}

impl Default for ComparisonTolerance {
    fn default() -> Self {
        Self {
            pointwise: 0.05,
            gradient: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GradientRow {
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub r_star: f64,
    /// `max (U - w)` over the radial grid.
    pub max_pointwise_slack: f64,
    pub gradient_q_table: Vec<GradientRow>,
    pub mesh_h: f64,
    pub tolerance: ComparisonTolerance,
    pub verdict: crate::lab::Verdict,
}

pub const COMPARISON_EXPONENTS: [f64; 3] = [0.5, 1.0, 2.0];
const COMPARISON_GRID: usize = 400;

/// Solves the problem, symmetrizes the solution and the data under
/// `mu_{m,alpha}` and compares with the radial solution.
///
/// Passes when `max(U - w) <= pointwise * h` and, for every `q`,
/// `∫|∇u|^q <= ∫|∇w|^q + gradient * h`.
pub fn verify_comparison(prob: &EllipticProblem, tol: &ComparisonTolerance) -> Result<ComparisonReport> {
    let asm = assemble(prob);
    let u = solve_assembled(prob, &asm)?;
    let (m, alpha) = (prob.params.m(), prob.params.alpha());
    let sym = schwarz_symmetrization(&u, m, alpha)?;
    let f_star = decreasing_rearrangement(&prob.rhs_function()?, m, alpha)?;
    let r_star = sym.r_star();
    let w = symmetrized_solution(&f_star, &prob.params, r_star)?;
    let max_slack = (0..=COMPARISON_GRID)
        .map(|i| {
            let r = r_star * i as f64 / COMPARISON_GRID as f64;
            sym.eval(r) - w.eval(r)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let h = prob.mesh.h();
    let rows: Vec<GradientRow> = COMPARISON_EXPONENTS
        .iter()
        .map(|&q| {
            let lhs = gradient_moment(&u, &asm.element_measures, q);
            let rhs = w.gradient_moment(q);
            GradientRow {
                q,
                lhs,
                rhs,
                slack: rhs - lhs,
            }
        })
        .collect();
    let pass = max_slack <= tol.pointwise * h && rows.iter().all(|r| r.slack >= -tol.gradient * h);
    Ok(ComparisonReport {
        r_star,
        max_pointwise_slack: max_slack,
        gradient_q_table: rows,
        mesh_h: h,
        tolerance: *tol,
        verdict: if pass {
            crate::lab::Verdict::Pass
        } else {
            crate::lab::Verdict::Fail
        },
    })
}
