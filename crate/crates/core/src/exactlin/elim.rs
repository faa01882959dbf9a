//! Exact elimination: reduced row echelon form, kernels, ranks and solving.
//!
//! Two paths produce the same canonical RREF (pivots on leading columns):
//! a sparse incremental row reduction over `Rat`, and a dense
//! fraction-free (Bareiss) elimination over integers for matrices with
//! more than [`SPARSE_THRESHOLD`] nonzeros.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::mat::Mat;
use super::rat::{common_denominator, Rat};
use super::sparse::{self, Accum, SVec};

pub const SPARSE_THRESHOLD: f64 = 0.10;

/// Reduced row echelon form: row `k` has a 1 at column `pivots[k]` and every
/// other row is zero there. Pivots are strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub ncols: usize,
    pub rows: Vec<SVec>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel basis: one vector per free column `f`, with 1 at `f` and 0 at
    /// every other free column.
    pub fn kernel(&self) -> Vec<SVec> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut slot = vec![usize::MAX; self.ncols];
        let mut out: Vec<SVec> = Vec::new();
        for f in 0..self.ncols {
            if !is_pivot[f] {
                slot[f] = out.len();
                out.push(Vec::new());
            }
        }
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            for (c, x) in row {
                if *c != p {
                    out[slot[*c]].push((p, -x));
                }
            }
        }
        for f in 0..self.ncols {
            if !is_pivot[f] {
                let v = &mut out[slot[f]];
                v.push((f, Rat::one()));
                v.sort_by_key(|(i, _)| *i);
            }
        }
        out
    }
}

/// Incremental sparse row echelon builder with leading-column pivots.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SVec>,
    pivot_row: Vec<usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivot_row: vec![usize::MAX; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces until the leading column is not a pivot column.
    fn reduce_leading(&self, mut v: SVec) -> SVec {
        while let Some((c, x)) = v.first() {
            let r = self.pivot_row[*c];
            if r == usize::MAX {
                break;
            }
            let f = -x;
            v = sparse::axpy(&v, &f, &self.rows[r]);
        }
        v
    }

    /// Full reduction: the result has no entries in pivot columns.
    pub fn reduce(&self, v: &[(usize, Rat)]) -> SVec {
        let mut v = v.to_vec();
        let mut start = 0;
        loop {
            let hit = v[start..].iter().position(|(c, _)| self.pivot_row[*c] != usize::MAX).map(|k| k + start);
            match hit {
                None => return v,
                Some(k) => {
                    let (c, x) = (v[k].0, v[k].1.clone());
                    v = sparse::axpy(&v, &-x, &self.rows[self.pivot_row[c]]);
                    start = v.partition_point(|(i, _)| *i <= c);
                }
            }
        }
    }

    pub fn contains(&self, v: &[(usize, Rat)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts a row; returns true if it was independent of earlier rows.
    pub fn insert(&mut self, v: SVec) -> bool {
        let v = self.reduce_leading(v);
        let Some((lead, x)) = v.first() else {
            return false;
        };
        let lead = *lead;
        let s = x.recip();
        let v = if s.is_one() { v } else { sparse::scale(&v, &s) };
        self.pivot_row[lead] = self.rows.len();
        self.rows.push(v);
        true
    }

    pub fn finish(self) -> Rref {
        back_substitute(self.ncols, self.rows)
    }
}

/// Turns echelon rows (leading entry 1, distinct leading columns) into RREF.
fn back_substitute(ncols: usize, mut rows: Vec<SVec>) -> Rref {
    rows.sort_by_key(|r| r[0].0);
    let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
    let mut pivot_row = vec![usize::MAX; ncols];
    for (k, &p) in pivots.iter().enumerate() {
        pivot_row[p] = k;
    }
    let mut acc = Accum::new(ncols);
    for k in (0..rows.len()).rev() {
        let coeffs: Vec<(usize, Rat)> = rows[k][1..]
            .iter()
            .filter(|(c, _)| pivot_row[*c] != usize::MAX)
            .map(|(c, x)| (pivot_row[*c], x.clone()))
            .collect();
        if coeffs.is_empty() {
            continue;
        }
        acc.add_scaled(&Rat::one(), &rows[k]);
        for (j, x) in &coeffs {
            acc.add_scaled(&-x, &rows[*j]);
        }
        rows[k] = acc.take();
    }
    Rref { ncols, rows, pivots }
}

fn rref_sparse(m: &Mat) -> Rref {
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    // Sparsest rows first keeps fill-in low; ties by index for determinism.
    order.sort_by_key(|&r| (m.row(r).len(), r));
    let mut e = Echelon::new(m.ncols());
    for r in order {
        if !m.row(r).is_empty() {
            e.insert(m.row(r).clone());
        }
        if e.rank() == m.ncols() {
            break;
        }
    }
    e.finish()
}

/// Fraction-free elimination to integer row echelon form.
fn bareiss_echelon(m: &Mat) -> Vec<SVec> {
    let n = m.ncols();
    let mut a: Vec<Vec<BigInt>> = m
        .rows()
        .iter()
        .filter(|r| !r.is_empty())
        .map(|row| {
            let l = common_denominator(row.iter().map(|(_, x)| x));
            let mut d = vec![BigInt::zero(); n];
            for (c, x) in row {
                d[*c] = x.numer() * (&l / x.denom());
            }
            d
        })
        .collect();
    let nr = a.len();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..n {
        if r == nr {
            break;
        }
        // Smallest-magnitude pivot, ties broken by row index.
        let mut best: Option<usize> = None;
        for i in r..nr {
            if !a[i][c].is_zero() {
                match best {
                    Some(b) if a[b][c].abs() <= a[i][c].abs() => {}
                    _ => best = Some(i),
                }
            }
        }
        let Some(b) = best else { continue };
        a.swap(r, b);
        let p = a[r][c].clone();
        let (top, rest) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in rest.iter_mut() {
            let f = row[c].clone();
            for k in c..n {
                let v = &p * &row[k] - &f * &prow[k];
                row[k] = if prev == BigInt::from(1) { v } else { v.div_floor(&prev) };
            }
            debug_assert!(row[c].is_zero());
        }
        prev = p;
        r += 1;
    }
    a.truncate(r);
    a.into_iter()
        .map(|row| {
            let lead = row.iter().find(|x| !x.is_zero()).unwrap().clone();
            row.into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, x)| (c, Rat::from_bigints(x, lead.clone())))
                .collect()
        })
        .collect()
}

fn rref_dense(m: &Mat) -> Rref {
    back_substitute(m.ncols(), bareiss_echelon(m))
}

/// Canonical RREF; picks the dense or sparse path by density.
pub fn rref(m: &Mat) -> Rref {
    if m.density() > SPARSE_THRESHOLD && m.nrows() * m.ncols() <= 250_000 {
        rref_dense(m)
    } else {
        rref_sparse(m)
    }
}

#[doc(hidden)]
pub fn rref_with_path(m: &Mat, dense: bool) -> Rref {
    if dense {
        rref_dense(m)
    } else {
        rref_sparse(m)
    }
}

pub fn kernel_basis(m: &Mat) -> Vec<SVec> {
    rref(m).kernel()
}

pub fn rank(m: &Mat) -> usize {
    rref(m).rank()
}

/// Some solution of `m x = b`, or `None` when the system is inconsistent.
pub fn solve_linear(m: &Mat, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(b.len(), m.nrows(), "right-hand side length must equal row count");
    let n = m.ncols();
    let aug: Vec<SVec> = m
        .rows()
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut v = row.clone();
            if !x.is_zero() {
                v.push((n, x.clone()));
            }
            v
        })
        .collect();
    let r = rref(&Mat::from_rows(n + 1, aug));
    if r.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &p) in r.rows.iter().zip(&r.pivots) {
        x[p] = sparse::get(row, n);
    }
    debug_assert_eq!(m.mul_dense_vec(&x), b);
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Mat::identity(5)).is_empty());
        assert_eq!(kernel_basis(&Mat::zeros(3, 4)).len(), 4);
        let k = kernel_basis(&Mat::from_ints(&[&[1, 2, 3]]));
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(Mat::from_ints(&[&[1, 2, 3]]).mul_vec(v).is_empty());
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Mat::identity(4)), 4);
        assert_eq!(rank(&Mat::zeros(3, 3)), 0);
        assert_eq!(rank(&Mat::from_ints(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn solve_examples() {
        let b = vec![Rat::int(3), Rat::new(1, 2)];
        assert_eq!(solve_linear(&Mat::identity(2), &b), Some(b.clone()));
        assert_eq!(solve_linear(&Mat::zeros(2, 2), &b), None);
        let d = Mat::from_ints(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve_linear(&d, &[Rat::one(), Rat::one()]), Some(vec![Rat::new(1, 2), Rat::new(1, 3)]));
    }

    fn arb_mat() -> impl Strategy<Value = Mat> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r).prop_map(|d| {
                let dense: Vec<Vec<Rat>> =
                    d.iter().map(|row| row.iter().map(|&x| Rat::new(x, 1 + x.abs() % 2)).collect()).collect();
                Mat::from_dense(&dense)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity_and_path_agreement(m in arb_mat()) {
            let k = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + k.len(), m.ncols());
            for v in &k {
                prop_assert!(m.mul_vec(v).is_empty());
            }
            prop_assert_eq!(rref_with_path(&m, true), rref_with_path(&m, false));
        }

        #[test]
        fn solve_returns_exact_solutions(m in arb_mat(), seed in proptest::collection::vec(-2i64..3, 7)) {
            let x: Vec<Rat> = (0..m.ncols()).map(|i| Rat::int(seed[i])).collect();
            let b = m.mul_dense_vec(&x);
            let sol = solve_linear(&m, &b).expect("consistent by construction");
            prop_assert_eq!(m.mul_dense_vec(&sol), b);
        }
    }
}
