//! Sparse symmetric positive definite systems: CSR assembly, reverse
//! Cuthill–McKee ordering and an envelope Cholesky factorization.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Compressed sparse rows with sorted, duplicate-free column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Sums duplicate entries.
    pub fn from_triplets(n: usize, mut entries: Vec<(usize, usize, f64)>) -> Self {
        entries.sort_unstable_by_key(|e| (e.0, e.1));
        let mut row_ptr = alloc::vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in entries {
            assert!(i < n && j < n, "triplet index out of range");
            if last == Some((i, j)) {
                *values.last_mut().expect("previous entry") += v;
            } else {
                cols.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            n,
            row_ptr,
            cols,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }
}

/// Reverse Cuthill–McKee permutation, `perm[new] = old`. Each connected
/// component starts from a node of minimum degree.
pub fn rcm_ordering(a: &CsrMatrix) -> Vec<usize> {
    let n = a.dim();
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).filter(|&(j, _)| j != i).count()).collect();
    let mut visited = alloc::vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&i| (degree[i], i));
    let mut queue = VecDeque::new();
    let mut nbrs = Vec::new();
    for &start in &by_degree {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            nbrs.clear();
            nbrs.extend(a.row(v).map(|(j, _)| j).filter(|&j| !visited[j]));
            nbrs.sort_by_key(|&j| (degree[j], j));
            for &j in &nbrs {
                visited[j] = true;
                queue.push_back(j);
            }
        }
    }
    order.reverse();
    order
}

/// `L L^T` factor stored row by row over each row's envelope.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factors a symmetric matrix after RCM reordering. Only the lower
    /// triangle is read.
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.dim();
        let perm = rcm_ordering(a);
        let mut inv = alloc::vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (old, &i) in inv.iter().enumerate() {
            for (j_old, _) in a.row(old) {
                let j = inv[j_old];
                if j < i {
                    first[i] = first[i].min(j);
                }
            }
        }
        let mut start = alloc::vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut data = alloc::vec![0.0; start[n]];
        for (old, &i) in inv.iter().enumerate() {
            for (j_old, v) in a.row(old) {
                let j = inv[j_old];
                if j <= i {
                    data[start[i] + j - first[i]] = v;
                }
            }
        }
        let mut scale = 0.0f64;
        for i in 0..n {
            scale = scale.max(data[start[i + 1] - 1].abs());
        }
        for i in 0..n {
            let fi = first[i];
            let (done, rest) = data.split_at_mut(start[i]);
            let row = &mut rest[..i - fi + 1];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let rj = &done[start[j]..start[j + 1]];
                let mut s = row[j - fi];
                for k in lo..j {
                    s -= row[k - fi] * rj[k - fj];
                }
                row[j - fi] = s / rj[j - fj];
            }
            let mut d = row[i - fi];
            for k in fi..i {
                d -= row[k - fi] * row[k - fi];
            }
            if !(d > 1e-14 * scale) {
                return Err(Error::SingularSystem(alloc::format!(
                    "nonpositive pivot {d:e} at row {} of {n}",
                    perm[i]
                )));
            }
            row[i - fi] = d.sqrt();
        }
        Ok(Self {
            perm,
            first,
            start,
            data,
        })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let mut s = y[i];
            for k in fi..i {
                s -= row[k - fi] * y[k];
            }
            y[i] = s / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let yi = y[i];
            for k in fi..i {
                y[k] -= row[k - fi] * yi;
            }
        }
        let mut x = alloc::vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }

    /// Stored entries of the factor.
    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }
}

/// Relative residual `|Ax - b| / |b|` accepted without complaint.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Solves `Ax = b` for symmetric positive definite `A`, with up to three
/// steps of iterative refinement.
pub fn solve_spd(a: &CsrMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let chol = EnvelopeCholesky::factor(a)?;
    let mut x = chol.solve(b);
    let bnorm = norm(b).max(f64::MIN_POSITIVE);
    for _ in 0..3 {
        let ax = a.mul_vec(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(b, ax)| b - ax).collect();
        if norm(&r) <= RESIDUAL_TOL * bnorm {
            return Ok(x);
        }
        let dx = chol.solve(&r);
        for (xi, d) in x.iter_mut().zip(dx) {
            *xi += d;
        }
    }
    let ax = a.mul_vec(&x);
    let res = b.iter().zip(&ax).map(|(b, ax)| (b - ax) * (b - ax)).sum::<f64>().sqrt();
    if res <= RESIDUAL_TOL * bnorm {
        Ok(x)
    } else {
        Err(Error::SingularSystem(alloc::format!(
            "relative residual {:e} after refinement",
            res / bnorm
        )))
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
