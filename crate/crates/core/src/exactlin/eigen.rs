//! Rational eigenvalues and eigenspaces.
//!
//! The matrix is scaled to an integer matrix `A = s m`, whose rational
//! eigenvalues are integers bounded by the largest absolute row sum.
//! Candidates are the roots in F_P of Krylov minimal polynomials of seeded
//! random vectors, lifted to the symmetric range; every candidate is then
//! confirmed exactly by a kernel computation, so no reported eigenvalue is
//! spurious.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::elim::kernel_basis;
use super::mat::Mat;
use super::modp::{self, P};
use super::rat::{common_denominator, Rat};
use super::sparse::SVec;

const KRYLOV_TRIES: u64 = 4;

pub fn rational_eigenspaces(m: &Mat) -> Vec<(Rat, Vec<SVec>)> {
    rational_eigenspaces_seeded(m, 0x5eed)
}

struct Scaled {
    s: Rat,
    a: Mat,
    a_mod: Vec<Vec<(usize, u64)>>,
    bound: u64,
}

fn scaled(m: &Mat) -> Scaled {
    let s = Rat::from_bigint(common_denominator(m.rows().iter().flatten().map(|(_, x)| x)));
    let a = m.scale(&s);
    let half = (P - 1) / 2;
    let bound = a.rows().iter().map(|r| r.iter().map(|(_, x)| x.abs()).sum::<Rat>()).max().unwrap_or_else(Rat::zero);
    let bound = match bound.as_small() {
        Some((b, 1)) if (b as u64) < half => b as u64,
        _ => half,
    };
    let a_mod =
        a.rows().iter().map(|r| r.iter().map(|(c, x)| (*c, x.mod_p(P).expect("integer entries"))).collect()).collect();
    Scaled { s, a, a_mod, bound }
}

fn lift(r: u64, bound: u64) -> Option<i64> {
    if r <= bound {
        Some(r as i64)
    } else if P - r <= bound {
        Some(-((P - r) as i64))
    } else {
        None
    }
}

pub fn rational_eigenspaces_seeded(m: &Mat, seed: u64) -> Vec<(Rat, Vec<SVec>)> {
    assert!(m.is_square(), "eigenspaces need a square matrix");
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let sc = scaled(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<(i64, Vec<SVec>)> = Vec::new();
    let mut rejected: Vec<i64> = Vec::new();
    let mut total = 0;
    for _ in 0..KRYLOV_TRIES {
        let v: Vec<u64> = (0..n).map(|_| rng.random_range(1..P)).collect();
        let poly = krylov_minpoly(&sc.a_mod, v);
        for r in roots_mod_p(&poly, &mut rng) {
            let Some(lam) = lift(r, sc.bound) else { continue };
            if found.iter().any(|(l, _)| *l == lam) || rejected.contains(&lam) {
                continue;
            }
            let shifted = sc.a.axpy(&Rat::int(-lam), &Mat::identity(n));
            let k = kernel_basis(&shifted);
            if k.is_empty() {
                rejected.push(lam);
            } else {
                total += k.len();
                found.push((lam, k));
            }
        }
        if total == n {
            break;
        }
    }
    found.sort_by_key(|(l, _)| *l);
    let sinv = sc.s.recip();
    found.into_iter().map(|(l, k)| (&Rat::int(l) * &sinv, k)).collect()
}

/// Whether `m` is diagonalizable with rational eigenvalues: the minimal
/// polynomial of a random vector, modulo P, is squarefree and splits into
/// distinct lifts of integer roots. Probabilistic; a `true` answer is
/// wrong only if the random vector or the prime is unlucky.
pub fn rationally_diagonalizable(m: &Mat, seed: u64) -> bool {
    assert!(m.is_square(), "need a square matrix");
    if m.nrows() == 0 {
        return true;
    }
    let sc = scaled(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<u64> = (0..m.nrows()).map(|_| rng.random_range(1..P)).collect();
    let poly = krylov_minpoly(&sc.a_mod, v);
    let roots = roots_mod_p(&poly, &mut rng);
    roots.len() == poly.len() - 1 && roots.iter().all(|r| lift(*r, sc.bound).is_some())
}

// Polynomials modulo P, low degree first, without trailing zeros.

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn monic(f: Vec<u64>) -> Vec<u64> {
    let f = trim(f);
    match f.last() {
        Some(&l) if l != 1 => {
            let i = modp::inv(l, P);
            f.into_iter().map(|x| modp::mul(x, i, P)).collect()
        }
        _ => f,
    }
}

/// Quotient and remainder of `f` by monic `g`.
fn divrem(f: &[u64], g: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut r = trim(f.to_vec());
    let dg = g.len() - 1;
    if r.len() < g.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - dg];
    while r.len() >= g.len() {
        let c = *r.last().unwrap();
        let shift = r.len() - g.len();
        q[shift] = c;
        for (i, gi) in g.iter().enumerate() {
            r[shift + i] = modp::sub(r[shift + i], modp::mul(c, *gi, P), P);
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn mulmod(a: &[u64], b: &[u64], g: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = modp::add(out[i + j], modp::mul(*x, *y, P), P);
        }
    }
    divrem(&out, g).1
}

fn powmod(base: &[u64], mut e: u64, g: &[u64]) -> Vec<u64> {
    let mut result = divrem(&[1], g).1;
    let mut b = divrem(base, g).1;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, g);
        }
        b = mulmod(&b, &b, g);
        e >>= 1;
    }
    result
}

fn gcd(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut a, mut b) = (monic(a.to_vec()), monic(b.to_vec()));
    while !b.is_empty() {
        let r = divrem(&a, &b).1;
        a = b;
        b = monic(r);
    }
    a
}

fn sub_poly(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = *x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = modp::sub(out[i], *y, P);
    }
    trim(out)
}

/// Distinct roots in F_P of `f`.
fn roots_mod_p(f: &[u64], rng: &mut ChaCha8Rng) -> Vec<u64> {
    let f = monic(f.to_vec());
    if f.len() < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if f[0] == 0 {
        out.push(0);
    }
    // Product of the distinct linear factors with nonzero root: gcd(f, x^(P-1) - 1).
    let xp = powmod(&[0, 1], P - 1, &f);
    let g = gcd(&f, &sub_poly(&xp, &[1]));
    split(g, rng, &mut out);
    out.sort_unstable();
    out
}

fn split(g: Vec<u64>, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(modp::sub(0, g[0], P)),
        _ => loop {
            let a = rng.random_range(0..P);
            let w = powmod(&[a, 1], (P - 1) / 2, &g);
            let d = gcd(&g, &sub_poly(&w, &[1]));
            if d.len() > 1 && d.len() < g.len() {
                let q = monic(divrem(&g, &d).0);
                split(d, rng, out);
                split(q, rng, out);
                return;
            }
        },
    }
}

/// Monic minimal polynomial of `v` under `a`, modulo P, low degree first.
fn krylov_minpoly(a: &[Vec<(usize, u64)>], v: Vec<u64>) -> Vec<u64> {
    let n = a.len();
    // Echelon rows paired with the Krylov combination that produced them.
    let mut rows: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut cur = v;
    for k in 0..=n {
        let mut r = cur.clone();
        let mut comb = vec![0u64; k + 1];
        comb[k] = 1;
        for ((row, rc), &p) in rows.iter().zip(&pivots) {
            let f = r[p];
            if f == 0 {
                continue;
            }
            for i in 0..n {
                if row[i] != 0 {
                    r[i] = modp::sub(r[i], modp::mul(f, row[i], P), P);
                }
            }
            for (i, c) in rc.iter().enumerate() {
                comb[i] = modp::sub(comb[i], modp::mul(f, *c, P), P);
            }
        }
        match r.iter().position(|&x| x != 0) {
            None => return comb,
            Some(p) => {
                let inv = modp::inv(r[p], P);
                r.iter_mut().for_each(|x| *x = modp::mul(*x, inv, P));
                comb.iter_mut().for_each(|x| *x = modp::mul(*x, inv, P));
                rows.push((r, comb));
                pivots.push(p);
            }
        }
        let mut next = vec![0u64; n];
        for (i, row) in a.iter().enumerate() {
            let mut acc = 0u64;
            for (c, x) in row {
                acc = modp::add(acc, modp::mul(*x, cur[*c], P), P);
            }
            next[i] = acc;
        }
        cur = next;
    }
    unreachable!("Krylov sequence must become dependent within n+1 steps")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let m = Mat::diag(&[Rat::int(2), Rat::int(2), Rat::int(3)]);
        let e = rational_eigenspaces(&m);
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].0.clone(), e[0].1.len()), (Rat::int(2), 2));
        assert_eq!((e[1].0.clone(), e[1].1.len()), (Rat::int(3), 1));
    }

    #[test]
    fn roots_of_split_polynomial() {
        // (x - 3)(x + 5)(x - 7) = x³ - 5x² - 29x + 105
        let f: Vec<u64> = [105i64, -29, -5, 1].iter().map(|c| Rat::int(*c).mod_p(P).unwrap()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r: Vec<i64> = roots_mod_p(&f, &mut rng).into_iter().map(|r| lift(r, 100).unwrap()).collect();
        let mut r = r;
        r.sort();
        assert_eq!(r, vec![-5, 3, 7]);
    }

    #[test]
    fn diagonalizability() {
        assert!(rationally_diagonalizable(&Mat::diag(&[Rat::int(2), Rat::int(2), Rat::new(1, 3)]), 1));
        assert!(!rationally_diagonalizable(&Mat::from_ints(&[&[1, 1], &[0, 1]]), 1));
        assert!(!rationally_diagonalizable(&Mat::from_ints(&[&[0, -1], &[1, 0]]), 1));
    }

    #[test]
    fn rotation_has_no_rational_eigenvalues() {
        assert!(rational_eigenspaces(&Mat::from_ints(&[&[0, -1], &[1, 0]])).is_empty());
    }

    #[test]
    fn fractional_and_defective() {
        let m = Mat::from_dense(&[vec![Rat::new(1, 2), Rat::one()], vec![Rat::zero(), Rat::new(1, 2)]]);
        let e = rational_eigenspaces(&m);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].0, Rat::new(1, 2));
        assert_eq!(e[0].1.len(), 1);
    }
}
