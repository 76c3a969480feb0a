//! Text formats: star profiles, meshes (with optional nodal values),
//! problem files, and CSV exports.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use weiso_core::lab::TestFunction;
use weiso_core::mesh::BoundaryEdge;
use weiso_core::pde::{EllipticProblem, MatrixField};
use weiso_core::spline::Interpolation;
use weiso_core::{BoundaryTag, DecreasingProfile, MeshFunction, StarProfile, TriMesh, WeightParams};

/// A malformed input file. `line` is 1-based; 0 means the problem is not
/// tied to a single line.
#[derive(Debug, thiserror::Error)]
#[error("{}", if *.line > 0 { format!("line {}: {}", .line, .message) } else { .message.clone() })]
pub struct InputError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> InputError {
    InputError {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments (`#`) stripped, numbered from one.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, InputError> {
    tok.parse()
        .map_err(|_| err(line, format!("cannot parse {what} from '{tok}'")))
}

fn fields<'a, const K: usize>(l: &'a str, line: usize, what: &str) -> Result<[&'a str; K], InputError> {
    let toks: Vec<&str> = l.split_whitespace().collect();
    toks.as_slice()
        .try_into()
        .map_err(|_| err(line, format!("expected {K} fields for {what}, found {}", toks.len())))
}

/// Profile file: a header `N count [natural-cubic|catmull-rom]` followed by
/// `count` lines `theta rho` with increasing angles.
pub fn parse_profile(text: &str) -> Result<StarProfile, InputError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| err(0, "empty profile file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() < 2 || toks.len() > 3 {
        return Err(err(hline, "header must be 'N count [interpolation]'"));
    }
    let dim: usize = parse_num(toks[0], hline, "N")?;
    let count: usize = parse_num(toks[1], hline, "point count")?;
    let interpolation = match toks.get(2) {
        None | Some(&"natural-cubic") => Interpolation::NaturalCubic,
        Some(&"catmull-rom") => Interpolation::CatmullRom,
        Some(other) => return Err(err(hline, format!("unknown interpolation '{other}'"))),
    };
    let mut angles = Vec::with_capacity(count);
    let mut radii = Vec::with_capacity(count);
    let mut last_line = hline;
    for (ln, l) in lines {
        let [t, r] = fields::<2>(l, ln, "a profile point")?;
        let t: f64 = parse_num(t, ln, "angle")?;
        let r: f64 = parse_num(r, ln, "radius")?;
        if let Some(&prev) = angles.last() {
            if !(t > prev) {
                return Err(err(ln, "angles must be strictly increasing"));
            }
        }
        if !(r > 0.0) {
            return Err(err(ln, format!("radius must be positive, got {r}")));
        }
        angles.push(t);
        radii.push(r);
        last_line = ln;
    }
    if angles.len() != count {
        return Err(err(
            last_line,
            format!("header announces {count} points, found {}", angles.len()),
        ));
    }
    StarProfile::new(dim, angles, radii, interpolation).map_err(|e| err(0, e.to_string()))
}

pub fn write_profile(p: &StarProfile) -> String {
    let kind = match p.interpolation() {
        Interpolation::NaturalCubic => "natural-cubic",
        Interpolation::CatmullRom => "catmull-rom",
    };
    let mut out = format!("{} {} {kind}\n", p.dim(), p.angles().len());
    for (t, r) in p.angles().iter().zip(p.radii()) {
        let _ = writeln!(out, "{t:?} {r:?}");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Section {
    Nodes,
    Elements,
    Boundary,
    Values,
    Params,
    Matrix,
    Rhs,
}

fn section_of(l: &str) -> Option<Section> {
    Some(match l {
        "NODES" => Section::Nodes,
        "ELEMENTS" => Section::Elements,
        "BOUNDARY" => Section::Boundary,
        "VALUES" => Section::Values,
        "PARAMS" => Section::Params,
        "MATRIX" => Section::Matrix,
        "RHS" => Section::Rhs,
        _ => return None,
    })
}

/// Lines grouped by section header, in file order.
type Sections<'a> = HashMap<Section, Vec<(usize, &'a str)>>;

fn split_sections(text: &str) -> Result<Sections<'_>, InputError> {
    let mut out: HashMap<Section, Vec<(usize, &str)>> = HashMap::new();
    let mut current: Option<Section> = None;
    for (ln, l) in content_lines(text) {
        if let Some(s) = section_of(l) {
            if out.contains_key(&s) {
                return Err(err(ln, format!("section {l} appears twice")));
            }
            out.insert(s, Vec::new());
            current = Some(s);
            continue;
        }
        match current {
            Some(s) => out.get_mut(&s).expect("section inserted").push((ln, l)),
            None => return Err(err(ln, format!("data before any section header: '{l}'"))),
        }
    }
    Ok(out)
}

/// A mesh read from text, with optional nodal values.
#[derive(Debug, Clone)]
pub struct MeshFile {
    pub mesh: Arc<TriMesh>,
    pub values: Option<Vec<f64>>,
    /// File ids in node order, for mapping nodal data back.
    pub node_ids: Vec<i64>,
}

fn parse_mesh_sections(
    sections: &Sections<'_>,
) -> Result<MeshFile, InputError> {
    let nodes_sec = sections.get(&Section::Nodes).ok_or_else(|| err(0, "missing NODES section"))?;
    let elems_sec = sections
        .get(&Section::Elements)
        .ok_or_else(|| err(0, "missing ELEMENTS section"))?;
    let mut index: HashMap<i64, usize> = HashMap::new();
    let mut nodes = Vec::with_capacity(nodes_sec.len());
    let mut node_ids = Vec::with_capacity(nodes_sec.len());
    for &(ln, l) in nodes_sec {
        let [id, x, y] = fields::<3>(l, ln, "a node")?;
        let id: i64 = parse_num(id, ln, "node id")?;
        let x: f64 = parse_num(x, ln, "x1")?;
        let y: f64 = parse_num(y, ln, "x2")?;
        if index.insert(id, nodes.len()).is_some() {
            return Err(err(ln, format!("duplicate node id {id}")));
        }
        nodes.push([x, y]);
        node_ids.push(id);
    }
    let lookup = |id: &str, ln: usize| -> Result<usize, InputError> {
        let id: i64 = parse_num(id, ln, "node id")?;
        index
            .get(&id)
            .copied()
            .ok_or_else(|| err(ln, format!("unknown node id {id}")))
    };
    let mut elements = Vec::with_capacity(elems_sec.len());
    for &(ln, l) in elems_sec {
        let [_, a, b, c] = fields::<4>(l, ln, "an element")?;
        elements.push([lookup(a, ln)?, lookup(b, ln)?, lookup(c, ln)?]);
    }
    let boundary = match sections.get(&Section::Boundary) {
        None => None,
        Some(sec) => {
            let mut edges = Vec::with_capacity(sec.len());
            for &(ln, l) in sec {
                let [a, b, tag] = fields::<3>(l, ln, "a boundary edge")?;
                let tag = BoundaryTag::parse(tag)
                    .ok_or_else(|| err(ln, format!("unknown boundary tag '{tag}'")))?;
                edges.push(BoundaryEdge {
                    a: lookup(a, ln)?,
                    b: lookup(b, ln)?,
                    tag,
                });
            }
            Some(edges)
        }
    };
    let mesh = TriMesh::new(nodes, elements, boundary).map_err(|e| err(0, e.to_string()))?;
    let values = match sections.get(&Section::Values) {
        None => None,
        Some(sec) => Some(nodal_values(sec, &index, mesh.nodes().len())?),
    };
    Ok(MeshFile {
        mesh: Arc::new(mesh),
        values,
        node_ids,
    })
}

fn nodal_values(
    sec: &[(usize, &str)],
    index: &HashMap<i64, usize>,
    n: usize,
) -> Result<Vec<f64>, InputError> {
    let mut vals = vec![f64::NAN; n];
    for &(ln, l) in sec {
        let [id, v] = fields::<2>(l, ln, "a nodal value")?;
        let id: i64 = parse_num(id, ln, "node id")?;
        let i = *index
            .get(&id)
            .ok_or_else(|| err(ln, format!("unknown node id {id}")))?;
        vals[i] = parse_num(v, ln, "value")?;
    }
    if let Some(i) = vals.iter().position(|v| v.is_nan()) {
        return Err(err(0, format!("no value given for node index {i}")));
    }
    Ok(vals)
}

/// Mesh file: sections `NODES` (`id x1 x2`), `ELEMENTS` (`id n1 n2 n3`),
/// optional `BOUNDARY` (`n1 n2 gamma_plus|gamma_zero`) and optional
/// `VALUES` (`id value`).
pub fn parse_mesh(text: &str) -> Result<MeshFile, InputError> {
    let sections = split_sections(text)?;
    for s in [Section::Params, Section::Matrix, Section::Rhs] {
        if sections.contains_key(&s) {
            return Err(err(0, format!("section {s:?} belongs in problem files")));
        }
    }
    parse_mesh_sections(&sections)
}

pub fn write_mesh(mesh: &TriMesh, values: Option<&[f64]>) -> String {
    let mut out = String::from("NODES\n");
    for (i, p) in mesh.nodes().iter().enumerate() {
        let _ = writeln!(out, "{i} {:?} {:?}", p[0], p[1]);
    }
    out.push_str("ELEMENTS\n");
    for (i, e) in mesh.elements().iter().enumerate() {
        let _ = writeln!(out, "{i} {} {} {}", e[0], e[1], e[2]);
    }
    out.push_str("BOUNDARY\n");
    for e in mesh.boundary() {
        let _ = writeln!(out, "{} {} {}", e.a, e.b, e.tag.as_str());
    }
    if let Some(v) = values {
        out.push_str("VALUES\n");
        for (i, x) in v.iter().enumerate() {
            let _ = writeln!(out, "{i} {x:?}");
        }
    }
    out
}

/// Right-hand sides available by name in problem files and on the command
/// line.
pub const RHS_CATALOG: [(&str, TestFunction); 4] = [
    ("one", |_, _| 1.0),
    ("one_plus_x1", |x, _| 1.0 + x),
    ("zero", |_, _| 0.0),
    ("bump", |x, y| (1.0 - 4.0 * ((x - 0.3).powi(2) + (y - 0.3).powi(2))).max(0.0)),
];

pub fn rhs_expression(name: &str) -> Option<TestFunction> {
    RHS_CATALOG.iter().find(|(n, _)| *n == name).map(|(_, f)| *f)
}

/// Problem file: a mesh plus `PARAMS` (`N k l alpha`), `MATRIX` and `RHS`.
///
/// `MATRIX` holds one of `iso c`, `diag a b` or `elements` followed by one
/// line `id b11 b12 b22` per element in order, and optionally `lambda Λ`
/// (defaults to the largest eigenvalue of the field, at least one). `RHS`
/// holds `expr NAME` or `nodal` followed by `id value` lines.
pub fn parse_problem(text: &str) -> Result<EllipticProblem, InputError> {
    let sections = split_sections(text)?;
    let mesh_file = parse_mesh_sections(&sections)?;
    if mesh_file.values.is_some() {
        return Err(err(0, "problem files take nodal data in RHS, not VALUES"));
    }
    let mesh = mesh_file.mesh;
    let params_sec = sections.get(&Section::Params).ok_or_else(|| err(0, "missing PARAMS section"))?;
    let &(pln, pl) = params_sec
        .first()
        .filter(|_| params_sec.len() == 1)
        .ok_or_else(|| err(0, "PARAMS must hold exactly one line 'N k l alpha'"))?;
    let [n, k, l, a] = fields::<4>(pl, pln, "PARAMS")?;
    let params = WeightParams::new(
        parse_num(n, pln, "N")?,
        parse_num(k, pln, "k")?,
        parse_num(l, pln, "l")?,
        parse_num(a, pln, "alpha")?,
    )
    .map_err(|e| err(pln, e.to_string()))?;

    let matrix_sec = sections.get(&Section::Matrix).ok_or_else(|| err(0, "missing MATRIX section"))?;
    let mut matrix: Option<MatrixField> = None;
    let mut lambda: Option<f64> = None;
    let mut rows: Vec<[f64; 3]> = Vec::new();
    let mut per_element = false;
    for &(ln, l) in matrix_sec {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["iso", c] => matrix = Some(MatrixField::Isotropic(parse_num(c, ln, "iso factor")?)),
            ["diag", a, b] => {
                matrix = Some(MatrixField::Diagonal(
                    parse_num(a, ln, "diagonal entry")?,
                    parse_num(b, ln, "diagonal entry")?,
                ))
            }
            ["lambda", v] => lambda = Some(parse_num(v, ln, "lambda")?),
            ["elements"] => per_element = true,
            [_, b11, b12, b22] if per_element => rows.push([
                parse_num(b11, ln, "b11")?,
                parse_num(b12, ln, "b12")?,
                parse_num(b22, ln, "b22")?,
            ]),
            _ => return Err(err(ln, format!("unrecognized MATRIX line '{l}'"))),
        }
    }
    if per_element {
        if matrix.is_some() {
            return Err(err(0, "MATRIX mixes 'elements' with 'iso'/'diag'"));
        }
        matrix = Some(MatrixField::PerElement(rows));
    }
    let matrix = matrix.ok_or_else(|| err(0, "MATRIX needs 'iso', 'diag' or 'elements'"))?;
    let lambda = lambda.unwrap_or_else(|| largest_eigenvalue(&matrix).max(1.0));

    let rhs_sec = sections.get(&Section::Rhs).ok_or_else(|| err(0, "missing RHS section"))?;
    let (&(rln, rl), rest) = rhs_sec.split_first().ok_or_else(|| err(0, "empty RHS section"))?;
    let toks: Vec<&str> = rl.split_whitespace().collect();
    let rhs = match toks.as_slice() {
        ["expr", name] => {
            if !rest.is_empty() {
                return Err(err(rest[0].0, "unexpected line after 'expr'"));
            }
            let f = rhs_expression(name).ok_or_else(|| {
                let known: Vec<&str> = RHS_CATALOG.iter().map(|(n, _)| *n).collect();
                err(rln, format!("unknown expression '{name}' (known: {})", known.join(", ")))
            })?;
            mesh.nodes().iter().map(|p| f(p[0], p[1])).collect()
        }
        ["nodal"] => {
            let index: HashMap<i64, usize> =
                mesh_file.node_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
            nodal_values(rest, &index, mesh.nodes().len())?
        }
        _ => return Err(err(rln, "RHS must start with 'expr NAME' or 'nodal'")),
    };
    EllipticProblem::new(mesh, params, matrix, lambda, rhs).map_err(|e| err(0, e.to_string()))
}

fn largest_eigenvalue(m: &MatrixField) -> f64 {
    let eig = |b: &[f64; 3]| {
        let mean = 0.5 * (b[0] + b[2]);
        mean + (0.25 * (b[0] - b[2]).powi(2) + b[1] * b[1]).sqrt()
    };
    match m {
        MatrixField::Isotropic(c) => *c,
        MatrixField::Diagonal(a, b) => a.max(*b),
        MatrixField::PerElement(v) => v.iter().map(eig).fold(f64::NEG_INFINITY, f64::max),
    }
}

pub fn write_problem(prob: &EllipticProblem) -> String {
    let mut out = write_mesh(prob.mesh(), None);
    let p = prob.params();
    let _ = writeln!(out, "PARAMS\n{} {:?} {:?} {:?}", p.dim(), p.k(), p.l(), p.alpha());
    out.push_str("MATRIX\n");
    match prob.matrix() {
        MatrixField::Isotropic(c) => {
            let _ = writeln!(out, "iso {c:?}");
        }
        MatrixField::Diagonal(a, b) => {
            let _ = writeln!(out, "diag {a:?} {b:?}");
        }
        MatrixField::PerElement(v) => {
            out.push_str("elements\n");
            for (i, b) in v.iter().enumerate() {
                let _ = writeln!(out, "{i} {:?} {:?} {:?}", b[0], b[1], b[2]);
            }
        }
    }
    let _ = writeln!(out, "lambda {:?}", prob.lambda());
    out.push_str("RHS\nnodal\n");
    for (i, v) in prob.rhs().iter().enumerate() {
        let _ = writeln!(out, "{i} {v:?}");
    }
    out
}

/// `s,u_star` rows at the profile breakpoints.
pub fn profile_csv(p: &DecreasingProfile) -> String {
    let mut out = String::from("s,u_star\n");
    for (s, u) in p.breakpoints().iter().zip(p.values()) {
        let _ = writeln!(out, "{s:?},{u:?}");
    }
    out
}

/// `node_id,x1,x2,u` rows.
pub fn solution_csv(u: &MeshFunction) -> String {
    let mut out = String::from("node_id,x1,x2,u\n");
    for (i, (p, v)) in u.mesh().nodes().iter().zip(u.values()).enumerate() {
        let _ = writeln!(out, "{i},{:?},{:?},{v:?}", p[0], p[1]);
    }
    out
}
