//! Arithmetic modulo the Mersenne prime 2^61 - 1.
//!
//! Used only for one-sided certificates: vectors independent modulo `P`
//! are independent over Q.

use super::rat::Rat;

pub const P: u64 = (1 << 61) - 1;

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue (Fermat).
pub fn inv(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero mod p");
    pow(a, p - 2, p)
}

/// Incremental row echelon form over GF(P) for rank certificates.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    ncols: usize,
    rows: Vec<Vec<u64>>,
    pivot_row: Vec<Option<usize>>,
}

impl ModEchelon {
    pub fn new(ncols: usize) -> Self {
        ModEchelon { ncols, rows: Vec::new(), pivot_row: vec![None; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces a sparse rational vector. `None` when a denominator vanishes mod P.
    pub fn reduce(&self, v: &[(usize, Rat)]) -> Option<Vec<u64>> {
        let mut dense = vec![0u64; self.ncols];
        for (i, r) in v {
            dense[*i] = r.mod_p(P)?;
        }
        for c in 0..self.ncols {
            if dense[c] == 0 {
                continue;
            }
            if let Some(ri) = self.pivot_row[c] {
                let f = dense[c];
                let row = &self.rows[ri];
                for k in c..self.ncols {
                    if row[k] != 0 {
                        dense[k] = sub(dense[k], mul(f, row[k], P), P);
                    }
                }
            }
        }
        Some(dense)
    }

    /// Inserts the vector; returns `Some(true)` when it was independent.
    pub fn insert(&mut self, v: &[(usize, Rat)]) -> Option<bool> {
        let dense = self.reduce(v)?;
        Some(self.insert_reduced(dense))
    }

    fn insert_reduced(&mut self, mut dense: Vec<u64>) -> bool {
        let lead = match dense.iter().position(|&x| x != 0) {
            Some(c) => c,
            None => return false,
        };
        let s = inv(dense[lead], P);
        for x in dense.iter_mut() {
            *x = mul(*x, s, P);
        }
        // Keep earlier rows reduced at the new pivot so `reduce` stays single-pass.
        for r in self.rows.iter_mut() {
            let f = r[lead];
            if f != 0 {
                for k in lead..self.ncols {
                    if dense[k] != 0 {
                        r[k] = sub(r[k], mul(f, dense[k], P), P);
                    }
                }
            }
        }
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(dense);
        true
    }
}
