//! Sparse exact matrices over the Gaussian rationals.
//!
//! Rows are stored as ordered maps from column index to a nonzero entry. All
//! rank and null-space computations are exact Gaussian elimination.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::GaussRat;
use crate::error::{Error, Result};

pub type SparseRow = BTreeMap<usize, GaussRat>;

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![SparseRow::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].insert(i, GaussRat::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<GaussRat>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    /// Builds a matrix whose columns are the given dense vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<GaussRat>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> GaussRat {
        self.data[i].get(&j).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussRat) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add_to(&mut self, i: usize, j: usize, v: &GaussRat) {
        if v.is_zero() {
            return;
        }
        let row = &mut self.data[i];
        let remove = match row.get_mut(&j) {
            Some(e) => {
                *e += v;
                e.is_zero()
            }
            None => {
                row.insert(j, v.clone());
                false
            }
        };
        if remove {
            row.remove(&j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (&j, v) in row {
                t.data[j].insert(i, v.clone());
            }
        }
        t
    }

    /// Entrywise complex conjugate of the transpose.
    pub fn adjoint(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (&j, v) in row {
                t.data[j].insert(i, v.conj());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = SparseRow::new();
            for (&k, a) in row {
                for (&j, b) in &rhs.data[k] {
                    let p = a * b;
                    acc.entry(j)
                        .and_modify(|e| *e += &p)
                        .or_insert(p);
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[i] = acc;
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &ExactMatrix) -> Result<Self> {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &ExactMatrix) -> Result<Self> {
        self.combine(rhs, true)
    }

    fn combine(&self, rhs: &ExactMatrix, subtract: bool) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape(format!(
                "cannot combine {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = self.clone();
        for (i, row) in rhs.data.iter().enumerate() {
            for (&j, v) in row {
                if subtract {
                    out.add_to(i, j, &-v);
                } else {
                    out.add_to(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &GaussRat) -> Self {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let mut out = self.clone();
        for row in &mut out.data {
            for v in row.values_mut() {
                *v = &*v * s;
            }
        }
        out
    }

    pub fn apply(&self, x: &[GaussRat]) -> Result<Vec<GaussRat>> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} for {}x{} matrix",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .map(|row| {
                let mut acc = GaussRat::zero();
                for (&j, v) in row {
                    if !x[j].is_zero() {
                        acc += &(v * &x[j]);
                    }
                }
                acc
            })
            .collect())
    }

    /// Columns side by side: `[self | rhs]`.
    pub fn hstack(&self, rhs: &ExactMatrix) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::Shape(format!(
                "hstack of {} and {} rows",
                self.rows, rhs.rows
            )));
        }
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            out.data[i] = self.data[i].clone();
            for (&j, v) in &rhs.data[i] {
                out.data[i].insert(self.cols + j, v.clone());
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ rhs`, with `self` indexing the outer blocks.
    pub fn kron(&self, rhs: &ExactMatrix) -> Self {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (&j, a) in row {
                for (k, rrow) in rhs.data.iter().enumerate() {
                    let target = &mut out.data[i * rhs.rows + k];
                    for (&l, b) in rrow {
                        target.insert(j * rhs.cols + l, a * b);
                    }
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<GaussRat> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (&j, v) in row {
                m[(i, j)] = v.to_complex();
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        // Eliminate along the shorter side.
        if self.rows <= self.cols {
            echelon(self.data.clone()).len()
        } else {
            echelon(self.transpose().data).len()
        }
    }

    /// Exact inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let augmented: Vec<SparseRow> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.insert(n + i, GaussRat::one());
                r
            })
            .collect();
        let pivots = reduced_echelon(augmented);
        if (0..n).any(|c| !pivots.contains_key(&c)) {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for (i, row) in pivots.range(..n).map(|(_, r)| r).enumerate() {
            for (&j, v) in row.range(n..) {
                inv.data[i].insert(j - n, v.clone());
            }
        }
        Some(inv)
    }

    /// `self^k` for a square matrix.
    pub fn pow(&self, k: usize) -> Result<ExactMatrix> {
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Basis of `{x : self * x = 0}` as dense column vectors.
    pub fn nullspace(&self) -> Vec<Vec<GaussRat>> {
        let pivots = reduced_echelon(self.data.clone());
        let pivot_cols: Vec<usize> = pivots.keys().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains_key(&free) {
                continue;
            }
            let mut v = vec![GaussRat::zero(); self.cols];
            v[free] = GaussRat::one();
            for &p in &pivot_cols {
                if let Some(e) = pivots[&p].get(&free) {
                    v[p] = -e;
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Row echelon form keyed by pivot column; every stored row has leading entry 1.
fn echelon(rows: Vec<SparseRow>) -> BTreeMap<usize, SparseRow> {
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for mut row in rows {
        loop {
            let Some((&lead, lead_val)) = row.iter().next() else {
                break;
            };
            match pivots.get(&lead) {
                Some(p) => {
                    let factor = lead_val.clone();
                    for (&j, v) in p {
                        let delta = &factor * v;
                        let remove = match row.get_mut(&j) {
                            Some(e) => {
                                *e -= &delta;
                                e.is_zero()
                            }
                            None => {
                                row.insert(j, -delta);
                                false
                            }
                        };
                        if remove {
                            row.remove(&j);
                        }
                    }
                }
                None => {
                    let inv = lead_val.inv().expect("nonzero pivot");
                    for v in row.values_mut() {
                        *v = &*v * &inv;
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots
}

fn reduced_echelon(rows: Vec<SparseRow>) -> BTreeMap<usize, SparseRow> {
    let mut pivots = echelon(rows);
    let cols: Vec<usize> = pivots.keys().rev().copied().collect();
    for &c in &cols {
        let pivot = pivots[&c].clone();
        for (&other, row) in pivots.range_mut(..c) {
            debug_assert!(other < c);
            if let Some(factor) = row.get(&c).cloned() {
                for (&j, v) in &pivot {
                    let delta = &factor * v;
                    let remove = match row.get_mut(&j) {
                        Some(e) => {
                            *e -= &delta;
                            e.is_zero()
                        }
                        None => {
                            row.insert(j, -delta);
                            false
                        }
                    };
                    if remove {
                        row.remove(&j);
                    }
                }
            }
        }
    }
    pivots
}

/// Rank of the span of a set of dense vectors.
pub fn span_rank(vectors: &[Vec<GaussRat>]) -> usize {
    let rows: Vec<SparseRow> = vectors
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| (j, x.clone()))
                .collect()
        })
        .collect();
    echelon(rows).len()
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(16) {
            let row: Vec<String> = (0..self.cols.min(16))
                .map(|j| self.get(i, j).to_string())
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}
