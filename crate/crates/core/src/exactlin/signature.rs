use std::fmt;

use serde::{Deserialize, Serialize};

use super::mat::Mat;
use super::rat::Rat;

/// Inertia of a real symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Signature {
    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }

    /// The character `n_plus - n_minus`.
    pub fn delta(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.n_zero == 0
    }

    pub fn is_definite(&self) -> bool {
        self.n_zero == 0 && (self.n_plus == 0 || self.n_minus == 0)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n_plus, self.n_minus, self.n_zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
}

/// Signature over R by exact congruence diagonalization.
///
/// The form is first split into connected components of its nonzero
/// pattern; each component is diagonalized by symmetric elimination.
pub fn symmetric_signature(s: &Mat) -> Result<Signature, SignatureError> {
    if !s.is_square() {
        return Err(SignatureError::NotSquare(s.nrows(), s.ncols()));
    }
    let n = s.nrows();
    for (r, row) in s.rows().iter().enumerate() {
        for (c, x) in row {
            if s.get(*c, r) != *x {
                return Err(SignatureError::NotSymmetric(r, *c));
            }
        }
    }
    let mut sig = Signature { n_plus: 0, n_minus: 0, n_zero: 0 };
    for comp in components(s) {
        if comp.len() == 1 {
            match s.get(comp[0], comp[0]).signum() {
                1 => sig.n_plus += 1,
                -1 => sig.n_minus += 1,
                _ => sig.n_zero += 1,
            }
            continue;
        }
        let block = s.select(&comp, &comp).to_dense();
        let (p, m, z) = dense_inertia(block);
        sig.n_plus += p;
        sig.n_minus += m;
        sig.n_zero += z;
    }
    debug_assert_eq!(sig.dim(), n);
    Ok(sig)
}

fn components(s: &Mat) -> Vec<Vec<usize>> {
    let n = s.nrows();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut k = 0;
        while k < comp.len() {
            for (c, _) in s.row(comp[k]) {
                if !seen[*c] {
                    seen[*c] = true;
                    comp.push(*c);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn dense_inertia(mut a: Vec<Vec<Rat>>) -> (usize, usize, usize) {
    let n = a.len();
    let mut live: Vec<usize> = (0..n).collect();
    let (mut plus, mut minus) = (0, 0);
    while !live.is_empty() {
        // Cheapest nonzero diagonal pivot: fewest live nonzeros, then smallest height.
        let mut best: Option<(usize, u64, usize)> = None;
        for &k in &live {
            if a[k][k].is_zero() {
                continue;
            }
            let nnz = live.iter().filter(|&&l| !a[k][l].is_zero()).count();
            let key = (nnz, a[k][k].height(), k);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let k = match best {
            Some((_, _, k)) => k,
            None => {
                let pair =
                    live.iter().find_map(|&k| live.iter().find(|&&l| l != k && !a[k][l].is_zero()).map(|&l| (k, l)));
                let Some((k, l)) = pair else { break };
                // x_k <- x_k + x_l makes a_kk = 2 a_kl.
                for &m in &live {
                    let v = a[l][m].clone();
                    a[k][m] += v;
                }
                for &m in &live {
                    let v = a[m][l].clone();
                    a[m][k] += v;
                }
                debug_assert!(!a[k][k].is_zero());
                k
            }
        };
        let p = a[k][k].clone();
        if p.signum() > 0 {
            plus += 1;
        } else {
            minus += 1;
        }
        live.retain(|&l| l != k);
        let pinv = p.recip();
        let col: Vec<(usize, Rat)> =
            live.iter().filter(|&&l| !a[l][k].is_zero()).map(|&l| (l, &a[l][k] * &pinv)).collect();
        for (l, f) in &col {
            for &m in &live {
                if a[k][m].is_zero() {
                    continue;
                }
                let d = f * &a[k][m];
                a[*l][m] -= d;
            }
        }
    }
    (plus, minus, n - plus - minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(d: &[&[i64]]) -> Signature {
        symmetric_signature(&Mat::from_ints(d)).unwrap()
    }

    #[test]
    fn diagonal_cases() {
        assert_eq!(sig(&[&[1, 0], &[0, -1]]), Signature { n_plus: 1, n_minus: 1, n_zero: 0 });
        let d = Mat::diag(&[Rat::zero(), Rat::int(5), Rat::int(-2), Rat::int(-3)]);
        assert_eq!(symmetric_signature(&d).unwrap(), Signature { n_plus: 1, n_minus: 2, n_zero: 1 });
    }

    #[test]
    fn zero_diagonal_block() {
        assert_eq!(sig(&[&[0, 1], &[1, 0]]), Signature { n_plus: 1, n_minus: 1, n_zero: 0 });
        assert_eq!(sig(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]), Signature { n_plus: 1, n_minus: 2, n_zero: 0 });
        assert_eq!(sig(&[&[1, 1], &[1, 1]]), Signature { n_plus: 1, n_minus: 0, n_zero: 1 });
    }

    #[test]
    fn rejects_nonsymmetric() {
        let m = Mat::from_ints(&[&[1, 2], &[3, 4]]);
        assert!(matches!(symmetric_signature(&m), Err(SignatureError::NotSymmetric(..))));
    }
}
