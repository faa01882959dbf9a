use std::fmt;

use super::rat::Rat;
use super::sparse::{self, Accum, SVec};

/// A rational matrix stored as sparse rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    nrows: usize,
    ncols: usize,
    rows: Vec<SVec>,
}

impl Mat {
    pub fn zeros(nrows: usize, ncols: usize) -> Mat {
        Mat { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity(n: usize) -> Mat {
        Mat::diag(&vec![Rat::one(); n])
    }

    pub fn diag(d: &[Rat]) -> Mat {
        let mut m = Mat::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            if !x.is_zero() {
                m.rows[i].push((i, x.clone()));
            }
        }
        m
    }

    pub fn from_rows(ncols: usize, rows: Vec<SVec>) -> Mat {
        debug_assert!(rows.iter().all(|r| r.iter().all(|(c, x)| *c < ncols && !x.is_zero())));
        Mat { nrows: rows.len(), ncols, rows }
    }

    /// Builds a matrix whose columns are the given sparse vectors.
    pub fn from_cols(nrows: usize, cols: &[SVec]) -> Mat {
        let mut rows = vec![Vec::new(); nrows];
        for (c, col) in cols.iter().enumerate() {
            for (r, x) in col {
                rows[*r].push((c, x.clone()));
            }
        }
        Mat { nrows, ncols: cols.len(), rows }
    }

    pub fn from_dense(d: &[Vec<Rat>]) -> Mat {
        let ncols = d.first().map_or(0, |r| r.len());
        let rows = d.iter().map(|r| sparse::from_dense(r)).collect();
        Mat { nrows: d.len(), ncols, rows }
    }

    pub fn from_ints(d: &[&[i64]]) -> Mat {
        let dense: Vec<Vec<Rat>> = d.iter().map(|r| r.iter().map(|&x| Rat::int(x)).collect()).collect();
        Mat::from_dense(&dense)
    }

    pub fn to_dense(&self) -> Vec<Vec<Rat>> {
        self.rows.iter().map(|r| sparse::to_dense(r, self.ncols)).collect()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SVec] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> &SVec {
        &self.rows[r]
    }

    pub fn into_rows(self) -> Vec<SVec> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        sparse::get(&self.rows[r], c)
    }

    pub fn set(&mut self, r: usize, c: usize, x: Rat) {
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |(j, _)| *j) {
            Ok(k) => {
                if x.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = x;
                }
            }
            Err(k) => {
                if !x.is_zero() {
                    row.insert(k, (c, x));
                }
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn density(&self) -> f64 {
        if self.nrows == 0 || self.ncols == 0 {
            return 0.0;
        }
        self.nnz() as f64 / (self.nrows as f64 * self.ncols as f64)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn transpose(&self) -> Mat {
        let mut rows = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, x) in row {
                rows[*c].push((r, x.clone()));
            }
        }
        Mat { nrows: self.ncols, ncols: self.nrows, rows }
    }

    /// Column `c` as a sparse vector.
    pub fn col(&self, c: usize) -> SVec {
        self.rows.iter().enumerate().filter_map(|(r, row)| sparse::get_ref(row, c).map(|x| (r, x.clone()))).collect()
    }

    pub fn cols(&self) -> Vec<SVec> {
        self.transpose().rows
    }

    pub fn mul_vec(&self, v: &[(usize, Rat)]) -> SVec {
        let mut out = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            let x = sparse::dot(row, v);
            if !x.is_zero() {
                out.push((r, x));
            }
        }
        out
    }

    pub fn mul_dense_vec(&self, v: &[Rat]) -> Vec<Rat> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = Rat::zero();
                for (c, x) in row {
                    acc.add_mul(x, &v[*c]);
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let mut acc = Accum::new(other.ncols);
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for (k, x) in row {
                    acc.add_scaled(x, &other.rows[*k]);
                }
                acc.take()
            })
            .collect();
        Mat { nrows: self.nrows, ncols: other.ncols, rows }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.axpy(&Rat::one(), other)
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.axpy(&Rat::int(-1), other)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: &Rat, other: &Mat) -> Mat {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| sparse::axpy(a, s, b)).collect();
        Mat { nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        let rows = self.rows.iter().map(|r| sparse::scale(r, s)).collect();
        Mat { nrows: self.nrows, ncols: self.ncols, rows }
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Mat) -> Mat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Rat {
        let mut t = Rat::zero();
        for (r, row) in self.rows.iter().enumerate() {
            if let Some(x) = sparse::get_ref(row, r) {
                t += x;
            }
        }
        t
    }

    /// Row-major flattening (`r * ncols + c`).
    pub fn flatten(&self) -> SVec {
        let mut out = Vec::with_capacity(self.nnz());
        for (r, row) in self.rows.iter().enumerate() {
            for (c, x) in row {
                out.push((r * self.ncols + c, x.clone()));
            }
        }
        out
    }

    pub fn unflatten(nrows: usize, ncols: usize, v: &[(usize, Rat)]) -> Mat {
        let mut rows = vec![Vec::new(); nrows];
        for (k, x) in v {
            rows[k / ncols].push((k % ncols, x.clone()));
        }
        Mat { nrows, ncols, rows }
    }

    /// Stacks matrices with equal column counts.
    pub fn vstack(parts: &[Mat]) -> Mat {
        let ncols = parts.first().map_or(0, |m| m.ncols);
        let mut rows = Vec::new();
        for p in parts {
            assert_eq!(p.ncols, ncols);
            rows.extend(p.rows.iter().cloned());
        }
        Mat { nrows: rows.len(), ncols, rows }
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> Mat {
        let mut pos = vec![usize::MAX; self.ncols];
        for (k, &c) in col_idx.iter().enumerate() {
            pos[c] = k;
        }
        let rows = row_idx
            .iter()
            .map(|&r| {
                let mut v: SVec = self.rows[r]
                    .iter()
                    .filter(|(c, _)| pos[*c] != usize::MAX)
                    .map(|(c, x)| (pos[*c], x.clone()))
                    .collect();
                v.sort_by_key(|(c, _)| *c);
                v
            })
            .collect();
        Mat { nrows: row_idx.len(), ncols: col_idx.len(), rows }
    }

    pub fn pow(&self, e: u32) -> Mat {
        let mut acc = Mat::identity(self.nrows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse, if the matrix is square and nonsingular.
    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.nrows;
        // Row-reduce [A | I].
        let aug: Vec<SVec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut v = row.clone();
                v.push((n + r, Rat::one()));
                v
            })
            .collect();
        let rref = super::elim::rref(&Mat::from_rows(2 * n, aug));
        if rref.pivots.len() != n || rref.pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let rows = rref
            .rows
            .into_iter()
            .map(|r| r.into_iter().filter(|(c, _)| *c >= n).map(|(c, x)| (c - n, x)).collect())
            .collect();
        Some(Mat { nrows: n, ncols: n, rows })
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.nrows, self.ncols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_inverse() {
        let a = Mat::from_ints(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert!(Mat::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn flatten_roundtrip_and_commutator() {
        let a = Mat::from_ints(&[&[0, 1], &[0, 0]]);
        let b = Mat::from_ints(&[&[0, 0], &[1, 0]]);
        let h = a.commutator(&b);
        assert_eq!(h, Mat::from_ints(&[&[1, 0], &[0, -1]]));
        assert_eq!(Mat::unflatten(2, 2, &h.flatten()), h);
        assert_eq!(h.trace(), Rat::zero());
    }
}
