//! Exact linear algebra over `Q(i)`: dense matrices for small systems and a
//! sparse echelon accumulator for the large graded-piece computations.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use super::gaussian::GaussianRational as Q;
use super::zielim;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("linear system has no solution")]
pub struct NoSolution;

/// Dense matrix over `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

/// A particular solution of `m x = b`. `nullity > 0` flags that the
/// solution is one witness out of an affine family of that dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSolution {
    pub x: Vec<Q>,
    pub nullity: usize,
}

impl ExactSolution {
    pub fn is_unique(&self) -> bool {
        self.nullity == 0
    }
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Self { rows: r, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| Q::from_int(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in QMatrix product");
        let mut out = QMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let p = a * b;
                        out.data[i * rhs.cols + j] += &p;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for (a, b) in self.row(r).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let k = m.get(i, c).clone();
                for j in c..m.cols {
                    let pr = m.get(r, j);
                    if pr.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&k * pr);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Q::zero(); self.cols];
                v[fc] = Q::one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(i, fc);
                }
                v
            })
            .collect()
    }

    /// Inverse of a square nonsingular matrix.
    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = QMatrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Q::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = QMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// Solves `m x = b` exactly. Free variables of the witness are set to zero.
pub fn solve_exact(m: &QMatrix, b: &[Q]) -> Result<ExactSolution, NoSolution> {
    assert_eq!(b.len(), m.rows(), "right-hand side length");
    let mut aug = QMatrix::zero(m.rows(), m.cols() + 1);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, m.cols(), b[r].clone());
    }
    let (red, pivots) = aug.rref();
    if pivots.last() == Some(&m.cols()) {
        return Err(NoSolution);
    }
    let mut x = vec![Q::zero(); m.cols()];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = red.get(i, m.cols()).clone();
    }
    Ok(ExactSolution { x, nullity: m.cols() - pivots.len() })
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Sparse vector: strictly increasing indices, nonzero values.
pub type SparseVec = Vec<(usize, Q)>;

pub fn sparse_from_dense(v: &[Q]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn sparse_to_dense(v: &SparseVec, len: usize) -> Vec<Q> {
    let mut d = vec![Q::zero(); len];
    for (i, x) in v {
        d[*i] = x.clone();
    }
    d
}

/// `a - k * b`
fn sparse_axpy(a: &SparseVec, k: &Q, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ai = a.get(i).map(|e| e.0);
        let bj = b.get(j).map(|e| e.0);
        match (ai, bj) {
            (Some(x), Some(y)) if x == y => {
                let v = &a[i].1 - &(k * &b[j].1);
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(a[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(a[i].clone());
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, -(k * &b[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Row-echelon accumulator: vectors are inserted one at a time and
/// reduced against the stored pivots.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Residue of `v` with every pivot column cleared.
    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        self.reduce_from(v, 0)
    }

    fn reduce_from(&self, mut v: SparseVec, mut start: usize) -> SparseVec {
        loop {
            let Some(pos) = v.iter().position(|(c, _)| *c >= start && self.pivots.contains_key(c))
            else {
                return v;
            };
            let (c, k) = v[pos].clone();
            v = sparse_axpy(&v, &k, &self.pivots[&c]);
            start = c + 1;
        }
    }

    /// Inserts `v`; returns its new pivot column if it was independent.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let r = self.reduce(v);
        let (c, lead) = r.first()?.clone();
        let inv = lead.inv().expect("nonzero lead");
        let normalized = r.into_iter().map(|(i, x)| (i, &x * &inv)).collect();
        self.pivots.insert(c, normalized);
        Some(c)
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Kernel of the map whose images of the standard basis vectors are
/// `columns` (each a sparse vector in a space of dimension `target_dim`).
pub fn sparse_kernel(columns: &[SparseVec], target_dim: usize) -> Vec<SparseVec> {
    if let Some(k) = zielim::kernel(columns, target_dim) {
        return k;
    }
    let mut ech = SparseEchelon::new();
    let mut kernel = Vec::new();
    for (i, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        v.push((target_dim + i, Q::one()));
        let r = ech.reduce(v);
        match r.first() {
            Some((c, _)) if *c < target_dim => {
                ech.insert(r);
            }
            Some(_) => {
                kernel.push(r.into_iter().map(|(c, x)| (c - target_dim, x)).collect());
            }
            None => unreachable!("tracking coordinate keeps the vector nonzero"),
        }
    }
    kernel
}

/// Rank of a list of sparse vectors.
pub fn sparse_rank(vectors: &[SparseVec]) -> usize {
    let dim = vectors.iter().filter_map(|v| v.last().map(|e| e.0 + 1)).max().unwrap_or(0);
    if let Some(r) = zielim::rank(vectors, dim) {
        return r;
    }
    let mut ech = SparseEchelon::new();
    for v in vectors {
        ech.insert(v.clone());
    }
    ech.rank()
}
