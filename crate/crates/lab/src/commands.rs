//! One function per subcommand. Each returns the JSON and CSV renderings
//! of its report and whether the run passed.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use weiso_core::geometry::Estimate;
use weiso_core::lab::{
    self, CaseResult, IsoCase, PolyaSzego, TestFunction, Verdict, VerificationReport, QUADRATURE_TOL, TEST_FUNCTIONS,
};
use weiso_core::pde::{self, ComparisonTolerance, EllipticProblem, MatrixField};
use weiso_core::rearrange::{self, decreasing_rearrangement};
use weiso_core::weights::{self, RegimeFlags};
use weiso_core::{MeshFunction, QuadratureSpec, StarProfile, TriMesh, WeightParams};

use crate::config::Resolved;
use crate::io::{self, InputError};
use crate::CommandKind;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    File { path: String, source: InputError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] weiso_core::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

type Result<T> = std::result::Result<T, CliError>;

pub struct Outcome {
    pub json: String,
    pub csv: String,
    pub passed: bool,
}

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_LEMMA_SAMPLES: usize = 100;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_H: f64 = 0.05;
/// Default `C` in the Pólya–Szegő acceptance `gap >= -C h`.
pub const DEFAULT_PS_CONSTANT: f64 = 0.05;
/// `(k, l, alpha)` triples of the default sweep, each run for `N = 2, 3`.
pub const SWEEP_GRID: [(f64, f64, f64); 4] = [(1.0, 0.0, 1.0), (2.0, 0.0, 1.0), (0.5, -0.5, 0.5), (3.0, 1.0, 2.0)];
pub const SWEEP_DIMS: [usize; 2] = [2, 3];

pub fn execute(kind: CommandKind, r: &Resolved) -> Result<Outcome> {
    let mut r = r.clone();
    let r = &mut r;
    match kind {
        CommandKind::Constants => constants(r),
        CommandKind::Measure => measure(r),
        CommandKind::Perimeter => perimeter(r),
        CommandKind::Quotient => quotient(r),
        CommandKind::Rearrange => rearrange(r),
        CommandKind::VerifyIsoperimetric => verify_isoperimetric(r),
        CommandKind::VerifyHl => verify_hl(r),
        CommandKind::VerifyGauss => verify_gauss(r),
        CommandKind::VerifyPs => verify_ps(r),
        CommandKind::Poincare => poincare(r),
        CommandKind::Solve => solve(r),
        CommandKind::Compare => compare(r),
        CommandKind::Sweep => sweep(r),
    }
    .map(|(json, csv, passed)| Outcome { json, csv, passed })
}

type Rendered = (String, String, bool);

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    command: &'static str,
    inputs: &'a Resolved,
    #[serde(flatten)]
    result: T,
}

fn render<T: Serialize>(kind: CommandKind, r: &Resolved, result: T) -> String {
    let mut s = serde_json::to_string_pretty(&Report {
        command: kind.name(),
        inputs: r,
        result,
    })
    .expect("reports serialize");
    s.push('\n');
    s
}

fn require<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Usage(format!("missing required parameter --{name} (or '{name}' in the config file)")))
}

fn params(r: &Resolved) -> Result<WeightParams> {
    Ok(WeightParams::new(
        require(r.dim, "N")?,
        require(r.k, "k")?,
        require(r.l, "l")?,
        require(r.alpha, "alpha")?,
    )?)
}

/// Parameters for planar commands that do not use every exponent.
fn planar_params(r: &mut Resolved, k: f64) -> Result<WeightParams> {
    let dim = *r.dim.get_or_insert(2);
    if dim != 2 {
        return Err(CliError::Usage(format!("this command works in the plane, got --N {dim}")));
    }
    Ok(WeightParams::new(2, k, require(r.l, "l")?, require(r.alpha, "alpha")?)?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn in_file<T>(path: &Path, res: std::result::Result<T, InputError>) -> Result<T> {
    res.map_err(|source| CliError::File {
        path: path.display().to_string(),
        source,
    })
}

fn pool(r: &Resolved) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = r.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

/// The set named by `--profile`, else the half-ball of `--radius`.
fn load_profile(r: &mut Resolved, dim: usize) -> Result<StarProfile> {
    match &r.profile {
        Some(path) => {
            let p = in_file(path, io::parse_profile(&read(path)?))?;
            if p.dim() != dim {
                return Err(CliError::Usage(format!("profile has N = {}, parameters have N = {dim}", p.dim())));
            }
            Ok(p)
        }
        None => Ok(StarProfile::half_ball(dim, *r.radius.get_or_insert(1.0))?),
    }
}

/// Nodal data from `--mesh` (needs a VALUES section), else `--function` on
/// the half-disc of `--radius` with mesh size `--h`.
fn load_function(r: &mut Resolved) -> Result<MeshFunction> {
    if let Some(path) = &r.mesh {
        let file = in_file(path, io::parse_mesh(&read(path)?))?;
        let values = file
            .values
            .ok_or_else(|| CliError::Usage(format!("{}: mesh has no VALUES section", path.display())))?;
        return Ok(MeshFunction::new(file.mesh, values)?);
    }
    let name = r.function.get_or_insert_with(|| "cone".into()).clone();
    let f = named_function(&name)?;
    let mesh = TriMesh::half_disc(*r.radius.get_or_insert(1.0), *r.h.get_or_insert(DEFAULT_H))?;
    Ok(MeshFunction::from_fn(Arc::new(mesh), f)?)
}

fn named_function(name: &str) -> Result<TestFunction> {
    lab::test_function(name).ok_or_else(|| {
        let known: Vec<&str> = TEST_FUNCTIONS.iter().map(|(n, _)| *n).collect();
        CliError::Usage(format!("unknown function '{name}' (known: {})", known.join(", ")))
    })
}

fn key_value_csv(rows: &[(&str, f64)]) -> String {
    let mut out = String::from("quantity,value\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{k},{v:?}");
    }
    out
}

fn cases_csv(cases: &[CaseResult]) -> String {
    let mut out = String::from("case_id,lhs,rhs,slack\n");
    for c in cases {
        let _ = writeln!(out, "{},{:?},{:?},{:?}", c.id, c.lhs, c.rhs, c.slack);
    }
    out
}

#[derive(Serialize)]
struct Constants {
    kappa: f64,
    c_rad: Option<f64>,
    volume_exponent: Option<f64>,
    perimeter_exponent: Option<f64>,
    m: Option<f64>,
    regime: Option<RegimeFlags>,
}

fn constants(r: &mut Resolved) -> Result<Rendered> {
    let dim = require(r.dim, "N")?;
    let alpha = require(r.alpha, "alpha")?;
    let kappa = weights::kappa(dim, alpha)?;
    let mut c = Constants {
        kappa,
        c_rad: None,
        volume_exponent: None,
        perimeter_exponent: None,
        m: None,
        regime: None,
    };
    let mut rows = vec![("kappa", kappa)];
    if let (Some(k), Some(l)) = (r.k, r.l) {
        let p = WeightParams::new(dim, k, l, alpha)?;
        let crad = weights::c_rad(&p)?;
        c.c_rad = Some(crad);
        c.volume_exponent = Some(p.volume_exponent());
        c.perimeter_exponent = Some(p.perimeter_exponent());
        c.m = Some(p.m());
        c.regime = Some(p.regime());
        rows.extend([
            ("c_rad", crad),
            ("volume_exponent", p.volume_exponent()),
            ("perimeter_exponent", p.perimeter_exponent()),
            ("m", p.m()),
        ]);
    }
    Ok((render(CommandKind::Constants, r, c), key_value_csv(&rows), true))
}

#[derive(Serialize)]
struct Scalar {
    value: f64,
    error_estimate: f64,
}

impl From<Estimate> for Scalar {
    fn from(e: Estimate) -> Self {
        Self {
            value: e.value,
            error_estimate: e.error,
        }
    }
}

fn measure(r: &mut Resolved) -> Result<Rendered> {
    let dim = require(r.dim, "N")?;
    let (l, alpha) = (require(r.l, "l")?, require(r.alpha, "alpha")?);
    let profile = load_profile(r, dim)?;
    let est = profile.measure_estimate(l, alpha, &QuadratureSpec::default())?;
    let csv = key_value_csv(&[("measure", est.value), ("error_estimate", est.error)]);
    Ok((render(CommandKind::Measure, r, Scalar::from(est)), csv, true))
}

fn perimeter(r: &mut Resolved) -> Result<Rendered> {
    let dim = require(r.dim, "N")?;
    let (k, alpha) = (require(r.k, "k")?, require(r.alpha, "alpha")?);
    let profile = load_profile(r, dim)?;
    let est = profile.perimeter_estimate(k, alpha, &QuadratureSpec::default())?;
    let csv = key_value_csv(&[("perimeter", est.value), ("error_estimate", est.error)]);
    Ok((render(CommandKind::Perimeter, r, Scalar::from(est)), csv, true))
}

#[derive(Serialize)]
#[serde(tag = "quotient")]
enum QuotientResult {
    /// Set quotient against the half-ball constant.
    R { value: f64, c_rad: f64, slack: f64 },
    /// Functional quotient of nodal data.
    Q { value: f64, c_rad: f64 },
}

fn quotient(r: &mut Resolved) -> Result<Rendered> {
    let p = params(r)?;
    let crad = weights::c_rad(&p)?;
    let result = if r.mesh.is_some() || r.function.is_some() {
        let u = load_function(r)?;
        QuotientResult::Q {
            value: lab::quotient_q(&u, &p)?,
            c_rad: crad,
        }
    } else {
        let s = load_profile(r, p.dim())?;
        let value = lab::quotient_r(&s, &p, &QuadratureSpec::default())?;
        QuotientResult::R {
            value,
            c_rad: crad,
            slack: value - crad,
        }
    };
    let csv = match &result {
        QuotientResult::R { value, c_rad, slack } => key_value_csv(&[("R", *value), ("c_rad", *c_rad), ("slack", *slack)]),
        QuotientResult::Q { value, c_rad } => key_value_csv(&[("Q", *value), ("c_rad", *c_rad)]),
    };
    Ok((render(CommandKind::Quotient, r, result), csv, true))
}

#[derive(Serialize)]
struct Norm {
    p: f64,
    of_u: f64,
    of_u_star: f64,
}

#[derive(Serialize)]
struct Rearranged {
    total_measure: f64,
    max_value: f64,
    norms: Vec<Norm>,
    s: Vec<f64>,
    u_star: Vec<f64>,
}

fn rearrange(r: &mut Resolved) -> Result<Rendered> {
    let p = planar_params(r, 0.0)?;
    let u = load_function(r)?;
    let (l, alpha) = (p.l(), p.alpha());
    let star = decreasing_rearrangement(&u, l, alpha)?;
    let norms = [1.0, 2.0]
        .iter()
        .map(|&q| {
            Ok(Norm {
                p: q,
                of_u: rearrange::lp_norm(&u, q, l, alpha)?,
                of_u_star: star.lp_norm(q)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let csv = io::profile_csv(&star);
    let result = Rearranged {
        total_measure: star.total_measure(),
        max_value: star.max_value(),
        norms,
        s: star.breakpoints().to_vec(),
        u_star: star.values().to_vec(),
    };
    Ok((render(CommandKind::Rearrange, r, result), csv, true))
}

fn iso_report(p: &WeightParams, samples: usize, seed: u64, tol: f64, pool: &rayon::ThreadPool) -> Result<VerificationReport> {
    let crad = weights::c_rad(p)?;
    let q = QuadratureSpec::default();
    let cases = lab::isoperimetric_cases(p.dim(), samples, seed);
    let results = pool.install(|| {
        cases
            .par_iter()
            .enumerate()
            .map(|(i, c)| lab::evaluate_iso_case(c, i, p, crad, &q))
            .collect::<std::result::Result<Vec<_>, _>>()
    })?;
    Ok(VerificationReport::from_cases(*p, results, tol))
}

/// Exploratory runs (`k < l + 1`) report violations without failing.
fn iso_passed(rep: &VerificationReport) -> bool {
    rep.exploratory || rep.verdict.is_pass()
}

fn verify_isoperimetric(r: &mut Resolved) -> Result<Rendered> {
    let p = params(r)?;
    let samples = *r.samples.get_or_insert(DEFAULT_SAMPLES);
    let seed = *r.seed.get_or_insert(DEFAULT_SEED);
    let tol = *r.tolerance.get_or_insert(QUADRATURE_TOL);
    let rep = iso_report(&p, samples, seed, tol, &pool(r)?)?;
    let csv = cases_csv(&rep.cases);
    let passed = iso_passed(&rep);
    Ok((render(CommandKind::VerifyIsoperimetric, r, rep), csv, passed))
}

/// Inequality with equality on half-balls.
#[derive(Serialize)]
struct LemmaReport {
    case_count: usize,
    tolerance: f64,
    min_slack: f64,
    worst_case_id: String,
    half_ball_max_abs_slack: f64,
    verdict: Verdict,
    cases: Vec<CaseResult>,
}

impl LemmaReport {
    fn new(cases: Vec<CaseResult>, tol: f64) -> Self {
        let worst = cases
            .iter()
            .min_by(|a, b| a.slack.total_cmp(&b.slack))
            .expect("half-balls are always present");
        let half_ball_max_abs_slack = cases
            .iter()
            .filter(|c| c.id.starts_with("half_ball"))
            .map(|c| c.slack.abs())
            .fold(0.0, f64::max);
        Self {
            case_count: cases.len(),
            tolerance: tol,
            min_slack: worst.slack,
            worst_case_id: worst.id.clone(),
            half_ball_max_abs_slack,
            verdict: Verdict::from_pass(worst.slack >= -tol && half_ball_max_abs_slack <= tol),
            cases,
        }
    }
}

fn lemma_cases(
    r: &mut Resolved,
    dim: usize,
    eval: impl Fn(&StarProfile) -> weiso_core::Result<lab::Comparison> + Sync,
) -> Result<Vec<CaseResult>> {
    let samples = *r.samples.get_or_insert(DEFAULT_LEMMA_SAMPLES);
    let seed = *r.seed.get_or_insert(DEFAULT_SEED);
    let cases: Vec<(String, IsoCase)> = if let Some(path) = &r.profile {
        let s = in_file(path, io::parse_profile(&read(path)?))?;
        let c = eval(&s)?;
        return Ok(vec![CaseResult {
            id: "profile".into(),
            lhs: c.lhs,
            rhs: c.rhs,
            slack: c.slack,
        }]);
    } else {
        lab::isoperimetric_cases(dim, samples, seed)
            .into_iter()
            .enumerate()
            .map(|(i, c)| (c.id(i), c))
            .collect()
    };
    let pool = pool(r)?;
    pool.install(|| {
        cases
            .par_iter()
            .map(|(id, case)| {
                let c = eval(&case.profile(dim)?)?;
                Ok(CaseResult {
                    id: id.clone(),
                    lhs: c.lhs,
                    rhs: c.rhs,
                    slack: c.slack,
                })
            })
            .collect()
    })
}

fn verify_gauss(r: &mut Resolved) -> Result<Rendered> {
    let dim = require(r.dim, "N")?;
    let (l, alpha) = (require(r.l, "l")?, require(r.alpha, "alpha")?);
    WeightParams::new(dim, l + 1.0, l, alpha)?;
    let tol = *r.tolerance.get_or_insert(QUADRATURE_TOL);
    let q = QuadratureSpec::default();
    let cases = lemma_cases(r, dim, |s| lab::verify_gauss_identity(s, l, alpha, &q))?;
    let rep = LemmaReport::new(cases, tol);
    let csv = cases_csv(&rep.cases);
    let passed = rep.verdict.is_pass();
    Ok((render(CommandKind::VerifyGauss, r, rep), csv, passed))
}

fn verify_hl(r: &mut Resolved) -> Result<Rendered> {
    let dim = require(r.dim, "N")?;
    let (l, lp, alpha) = (require(r.l, "l")?, require(r.l_prime, "l-prime")?, require(r.alpha, "alpha")?);
    let tol = *r.tolerance.get_or_insert(QUADRATURE_TOL);
    let q = QuadratureSpec::default();
    let cases = lemma_cases(r, dim, |s| lab::verify_hardy_littlewood(s, l, lp, alpha, &q))?;
    let rep = LemmaReport::new(cases, tol);
    let csv = cases_csv(&rep.cases);
    let passed = rep.verdict.is_pass();
    Ok((render(CommandKind::VerifyHl, r, rep), csv, passed))
}

#[derive(Serialize)]
struct PsCase {
    id: String,
    #[serde(flatten)]
    result: PolyaSzego,
}

#[derive(Serialize)]
struct PsReport {
    m: f64,
    mesh_h: f64,
    /// Accepted when every gap is at least `-constant * mesh_h`.
    constant: f64,
    min_gap: f64,
    worst_case_id: String,
    verdict: Verdict,
    cases: Vec<PsCase>,
}

fn verify_ps(r: &mut Resolved) -> Result<Rendered> {
    let p = params(r)?;
    if p.dim() != 2 {
        return Err(CliError::Usage(format!("verify-ps works in the plane, got --N {}", p.dim())));
    }
    let constant = *r.tolerance.get_or_insert(DEFAULT_PS_CONSTANT);
    let functions: Vec<(String, MeshFunction)> = if r.mesh.is_some() {
        vec![("mesh".into(), load_function(r)?)]
    } else {
        let mesh = Arc::new(TriMesh::half_disc(*r.radius.get_or_insert(1.0), *r.h.get_or_insert(DEFAULT_H))?);
        let chosen: Vec<(&str, TestFunction)> = match &r.function {
            Some(name) => vec![(name.as_str(), named_function(name)?)],
            None => TEST_FUNCTIONS.to_vec(),
        };
        chosen
            .into_iter()
            .map(|(n, f)| Ok((n.to_string(), MeshFunction::from_fn(mesh.clone(), f)?)))
            .collect::<Result<_>>()?
    };
    let mesh_h = functions[0].1.mesh().h();
    let cases = pool(r)?.install(|| {
        functions
            .par_iter()
            .map(|(id, u)| {
                Ok(PsCase {
                    id: id.clone(),
                    result: lab::verify_polya_szego(u, &p)?,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let worst = cases
        .iter()
        .min_by(|a, b| a.result.gap.total_cmp(&b.result.gap))
        .expect("at least one function");
    let min_gap = worst.result.gap;
    let mut csv = String::from("case_id,dirichlet_u,dirichlet_u_star,gap\n");
    for c in &cases {
        let _ = writeln!(
            csv,
            "{},{:?},{:?},{:?}",
            c.id, c.result.dirichlet_u, c.result.dirichlet_u_star, c.result.gap
        );
    }
    let rep = PsReport {
        m: p.m(),
        mesh_h,
        constant,
        min_gap,
        worst_case_id: worst.id.clone(),
        verdict: Verdict::from_pass(min_gap >= -constant * mesh_h),
        cases,
    };
    let passed = rep.verdict.is_pass();
    Ok((render(CommandKind::VerifyPs, r, rep), csv, passed))
}

#[derive(Serialize)]
struct Poincare {
    d: f64,
    #[serde(flatten)]
    result: lab::PoincareResult,
}

fn poincare(r: &mut Resolved) -> Result<Rendered> {
    let p = params(r)?;
    let radius = *r.radius.get_or_insert(1.0);
    let result = lab::poincare_constant(&p, radius)?;
    let d = p.dim() as f64 + p.m() + p.alpha();
    let csv = key_value_csv(&[("d", d), ("constant", result.constant), ("lambda", result.lambda)]);
    Ok((render(CommandKind::Poincare, r, Poincare { d, result }), csv, true))
}

/// `--problem`, else the half-disc benchmark with `A = weight * I` and the
/// catalog right-hand side `--rhs`.
fn load_problem(r: &mut Resolved) -> Result<EllipticProblem> {
    if let Some(path) = &r.problem {
        let prob = in_file(path, io::parse_problem(&read(path)?))?;
        let fp = prob.params();
        for (flag, given, file) in [
            ("k", r.k, fp.k()),
            ("l", r.l, fp.l()),
            ("alpha", r.alpha, fp.alpha()),
            ("N", r.dim.map(|n| n as f64), fp.dim() as f64),
        ] {
            if given.is_some_and(|g| g != file) {
                return Err(CliError::Usage(format!(
                    "--{flag} conflicts with the PARAMS section of {}",
                    path.display()
                )));
            }
        }
        r.dim = Some(fp.dim());
        r.k = Some(fp.k());
        r.l = Some(fp.l());
        r.alpha = Some(fp.alpha());
        return Ok(prob);
    }
    let p = params(r)?;
    let name = r.rhs.get_or_insert_with(|| "one".into()).clone();
    let f = io::rhs_expression(&name).ok_or_else(|| {
        let known: Vec<&str> = io::RHS_CATALOG.iter().map(|(n, _)| *n).collect();
        CliError::Usage(format!("unknown rhs '{name}' (known: {})", known.join(", ")))
    })?;
    let mesh = Arc::new(TriMesh::half_disc(*r.radius.get_or_insert(1.0), *r.h.get_or_insert(DEFAULT_H))?);
    let rhs = mesh.nodes().iter().map(|x| f(x[0], x[1])).collect();
    Ok(EllipticProblem::new(mesh, p, MatrixField::Isotropic(1.0), 1.0, rhs)?)
}

#[derive(Serialize)]
struct Solved {
    node_count: usize,
    element_count: usize,
    mesh_h: f64,
    min_u: f64,
    max_u: f64,
    /// `∫ A∇u·∇u dx`.
    energy: f64,
}

fn solve(r: &mut Resolved) -> Result<Rendered> {
    let prob = load_problem(r)?;
    let asm = pde::assemble(&prob);
    let u = pde::solve_assembled(&prob, &asm)?;
    let ku = asm.stiffness.mul_vec(u.values());
    let energy = ku.iter().zip(u.values()).map(|(a, b)| a * b).sum();
    let mesh = prob.mesh();
    let result = Solved {
        node_count: mesh.nodes().len(),
        element_count: mesh.elements().len(),
        mesh_h: mesh.h(),
        min_u: u.values().iter().copied().fold(f64::INFINITY, f64::min),
        max_u: u.values().iter().copied().fold(f64::NEG_INFINITY, f64::max),
        energy,
    };
    Ok((render(CommandKind::Solve, r, result), io::solution_csv(&u), true))
}

fn compare(r: &mut Resolved) -> Result<Rendered> {
    let prob = load_problem(r)?;
    let tol = ComparisonTolerance {
        pointwise: *r.tolerance.get_or_insert(ComparisonTolerance::default().pointwise),
        ..Default::default()
    };
    let rep = pde::verify_comparison(&prob, &tol)?;
    let mut csv = String::from("q,lhs,rhs,slack\n");
    for row in &rep.gradient_q_table {
        let _ = writeln!(csv, "{:?},{:?},{:?},{:?}", row.q, row.lhs, row.rhs, row.slack);
    }
    let passed = rep.verdict.is_pass();
    Ok((render(CommandKind::Compare, r, rep), csv, passed))
}

#[derive(Serialize)]
struct SweepEntry {
    params: WeightParams,
    case_count: usize,
    min_slack: f64,
    worst_case_id: String,
    verdict: Verdict,
    exploratory: bool,
    strict_positive: Option<bool>,
}

#[derive(Serialize)]
struct SweepReport {
    tolerance: f64,
    verdict: Verdict,
    configs: Vec<SweepEntry>,
}

fn sweep(r: &mut Resolved) -> Result<Rendered> {
    let samples = *r.samples.get_or_insert(DEFAULT_SAMPLES);
    let seed = *r.seed.get_or_insert(DEFAULT_SEED);
    let tol = *r.tolerance.get_or_insert(QUADRATURE_TOL);
    let triples: Vec<(f64, f64, f64)> = match (r.k, r.l, r.alpha) {
        (Some(k), Some(l), Some(a)) => vec![(k, l, a)],
        (None, None, None) => SWEEP_GRID.to_vec(),
        _ => return Err(CliError::Usage("give all of --k, --l, --alpha or none of them".into())),
    };
    let dims: Vec<usize> = r.dim.map_or(SWEEP_DIMS.to_vec(), |n| vec![n]);
    let pool = pool(r)?;
    let mut configs = Vec::new();
    let mut csv = String::from("N,k,l,alpha,case_id,lhs,rhs,slack\n");
    let mut passed = true;
    for &dim in &dims {
        for &(k, l, alpha) in &triples {
            let p = WeightParams::new(dim, k, l, alpha)?;
            let rep = iso_report(&p, samples, seed, tol, &pool)?;
            passed &= iso_passed(&rep);
            for c in &rep.cases {
                let _ = writeln!(csv, "{dim},{k:?},{l:?},{alpha:?},{},{:?},{:?},{:?}", c.id, c.lhs, c.rhs, c.slack);
            }
            configs.push(SweepEntry {
                params: p,
                case_count: rep.case_count,
                min_slack: rep.min_slack,
                worst_case_id: rep.worst_case_id,
                verdict: rep.verdict,
                exploratory: rep.exploratory,
                strict_positive: rep.strict_positive,
            });
        }
    }
    let rep = SweepReport {
        tolerance: tol,
        verdict: Verdict::from_pass(passed),
        configs,
    };
    Ok((render(CommandKind::Sweep, r, rep), csv, passed))
}
