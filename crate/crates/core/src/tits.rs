//! The Tits construction `g(O, J) = Der(O) ⊕ Der(J) ⊕ O₀⊗J₀`.
//!
//! Tensor brackets:
//! `[a⊗x, b⊗y] = μ₁ T(x,y) D_{a,b} + μ₂ [a,b]⊗(x*y) + μ₃ ⟨a,b⟩ [L_x,L_y]`.
//! The weights are solved from the Jacobi identity with `μ₂ = 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::composition::{inner_derivation, CompositionAlgebra};
use crate::exactlin::sparse::{self, Accum, SVec};
use crate::exactlin::{rank, solve_linear, Mat, Rat};
use crate::jordan::JordanAlgebra;
use crate::liealg::{centralizer, derivations, pair_index, verify_lie, Derivations, JacobiMode, LieAlgebra, Subspace};
use crate::report::Report;

pub const SOLVER_TRIPLES: usize = 64;
pub const POST_VERIFY_SAMPLES: usize = 100_000;
pub const SOLVER_SEED: u64 = 0x7175;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TitsCoefficients {
    pub mu1: Rat,
    pub mu2: Rat,
    pub mu3: Rat,
}

impl TitsCoefficients {
    /// Coefficients of the algebra rescaled by `a⊗x ↦ s·a⊗x`.
    pub fn rescaled(&self, s: &Rat) -> TitsCoefficients {
        let s2 = s * s;
        TitsCoefficients { mu1: &self.mu1 * &s2, mu2: &self.mu2 * s, mu3: &self.mu3 * &s2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Summand {
    DerO,
    DerJ,
    Tensor,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TitsError {
    #[error("the first argument must be an octonion algebra (dimension 8), got dimension {0}")]
    NotOctonion(usize),
    #[error("bracket weight {0} is zero")]
    ZeroWeight(&'static str),
    #[error("coefficient system is inconsistent")]
    Inconsistent,
    #[error("coefficient system is under-determined (rank {0})")]
    Underdetermined(usize),
    #[error("derivation components of the Jacobiator do not vanish at triple {0:?}")]
    DerivationComponent([usize; 3]),
    #[error("solved algebra fails verification: {0}")]
    Verification(String),
    #[error("{0}")]
    NotAutomorphism(String),
}

/// Bracket tables of the construction with the weights left free.
struct Tables {
    dim: usize,
    tensor_start: usize,
    /// Brackets involving `Der(O) ⊕ Der(J)`; tensor pairs are empty.
    base: LieAlgebra,
    p1: LieAlgebra,
    p2: LieAlgebra,
    p3: LieAlgebra,
}

impl Tables {
    fn combine(&self, mu: &TitsCoefficients) -> LieAlgebra {
        let n = self.dim;
        let mut brackets = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        let mut acc = Accum::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if i < self.tensor_start {
                    brackets.push(self.base.bracket_ref(i, j).0.clone());
                } else {
                    acc.add_scaled(&mu.mu1, self.p1.bracket_ref(i, j).0);
                    acc.add_scaled(&mu.mu2, self.p2.bracket_ref(i, j).0);
                    acc.add_scaled(&mu.mu3, self.p3.bracket_ref(i, j).0);
                    brackets.push(acc.take());
                }
            }
        }
        LieAlgebra::new(n, self.base.basis_names().to_vec(), brackets)
    }
}

pub struct TitsAlgebra {
    pub lie: LieAlgebra,
    pub summand_tags: Vec<Summand>,
    pub octonion: CompositionAlgebra,
    pub jordan: JordanAlgebra,
    pub coeffs: TitsCoefficients,
    pub der_o: Subspace,
    pub der_j: Subspace,
    pub der_o_data: Derivations,
    pub der_j_data: Derivations,
}

impl TitsAlgebra {
    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn tensor_start(&self) -> usize {
        self.der_o.dim() + self.der_j.dim()
    }

    pub fn tensor_index(&self, a: usize, x: usize) -> usize {
        self.tensor_start() + (a - 1) * (self.jordan.dim() - 1) + x
    }

    pub fn h(&self) -> Subspace {
        self.der_o.sum(&self.der_j)
    }
}

impl std::fmt::Debug for TitsAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TitsAlgebra(dim {}, mu {:?})", self.dim(), self.coeffs)
    }
}

struct Parts {
    der_o: Derivations,
    der_j: Derivations,
    tables: Tables,
    tags: Vec<Summand>,
}

fn build_parts(o: &CompositionAlgebra, j: &JordanAlgebra) -> Result<Parts, TitsError> {
    if o.dim() != 8 {
        return Err(TitsError::NotOctonion(o.dim()));
    }
    let (der_o, der_j) = rayon::join(|| derivations(&o.alg), || derivations(&j.alg));
    let (no, nj) = (der_o.lie.dim(), der_j.lie.dim());
    let j0 = j.traceless_basis();
    let nj0 = j0.len();
    let ts = no + nj;
    let n = ts + 7 * nj0;
    let tidx = |a: usize, x: usize| ts + (a - 1) * nj0 + x;

    let mut names: Vec<String> = Vec::with_capacity(n);
    names.extend((1..=no).map(|i| format!("DO{i}")));
    names.extend((1..=nj).map(|i| format!("DJ{i}")));
    let j0_names: Vec<String> = std::iter::once("E1-E2".to_string())
        .chain(std::iter::once("E2-E3".to_string()))
        .chain(j.alg.basis_names[3..].iter().cloned())
        .collect();
    for a in 1..8 {
        for x in &j0_names {
            names.push(format!("{}*{}", o.alg.basis_names[a], x));
        }
    }
    let mut tags = vec![Summand::DerO; no];
    tags.extend(std::iter::repeat_n(Summand::DerJ, nj));
    tags.extend(std::iter::repeat_n(Summand::Tensor, 7 * nj0));

    // Brackets involving h.
    let pairs = n * (n - 1) / 2;
    let mut base = vec![Vec::new(); pairs];
    for (i, jj, k, c) in der_o.lie.entries() {
        base[pair_index(n, i, jj)].push((k, c.clone()));
    }
    for (i, jj, k, c) in der_j.lie.entries() {
        base[pair_index(n, no + i, no + jj)].push((no + k, c.clone()));
    }
    let tensor_of = |oa: &SVec, jx: &SVec| -> SVec {
        let mut v = Vec::new();
        for (a, p) in oa {
            debug_assert!(*a > 0);
            for (x, q) in jx {
                v.push((tidx(*a, *x), p * q));
            }
        }
        sparse::normalize(v)
    };
    for (d, dm) in der_o.action.iter().enumerate() {
        for a in 1..8 {
            let da = dm.col(a);
            for x in 0..nj0 {
                base[pair_index(n, d, tidx(a, x))] = tensor_of(&da, &sparse::unit(x));
            }
        }
    }
    for (d, dm) in der_j.action.iter().enumerate() {
        let images: Vec<SVec> = j0.iter().map(|x| j.traceless_coords(&dm.mul_vec(x))).collect();
        for a in 1..8 {
            for (x, img) in images.iter().enumerate() {
                base[pair_index(n, no + d, tidx(a, x))] = tensor_of(&sparse::unit(a), img);
            }
        }
    }

    // Ingredients of the tensor-tensor bracket.
    let mut dab: Vec<Vec<SVec>> = vec![vec![Vec::new(); 8]; 8];
    for a in 1..8 {
        for b in a + 1..8 {
            let d = inner_derivation(o, &sparse::unit(a), &sparse::unit(b));
            let c = der_o.coords(&d).expect("inner derivation lies in Der(O)");
            dab[b][a] = sparse::scale(&c, &Rat::int(-1));
            dab[a][b] = c;
        }
    }
    let comm_o: Vec<Vec<SVec>> = (0..8)
        .map(|a| (0..8).map(|b| sparse::sub(o.alg.basis_product(a, b), o.alg.basis_product(b, a))).collect())
        .collect();
    let inner_o: Vec<Vec<Rat>> =
        (0..8).map(|a| (0..8).map(|b| o.inner(&sparse::unit(a), &sparse::unit(b))).collect()).collect();
    let lmult: Vec<Mat> = j0.iter().map(|x| j.left_mult(x)).collect();
    let jdata: Vec<(Rat, SVec, SVec)> = (0..nj0 * nj0)
        .into_par_iter()
        .map(|xy| {
            let (x, y) = (xy / nj0, xy % nj0);
            let t = j.trace_pairing(&j0[x], &j0[y]);
            let star = j.traceless_coords(&j.star(&j0[x], &j0[y]));
            let lxy = if x == y {
                Vec::new()
            } else {
                let c = lmult[x].commutator(&lmult[y]);
                der_j.coords(&c).expect("[L_x, L_y] lies in Der(J)")
            };
            (t, star, lxy)
        })
        .collect();

    let tpairs: Vec<(usize, usize)> = (ts..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let computed: Vec<(SVec, SVec, SVec)> = tpairs
        .par_iter()
        .map(|&(u, v)| {
            let (a, x) = ((u - ts) / nj0 + 1, (u - ts) % nj0);
            let (b, y) = ((v - ts) / nj0 + 1, (v - ts) % nj0);
            let (t, star, lxy) = &jdata[x * nj0 + y];
            let p1 = if t.is_zero() { Vec::new() } else { sparse::scale(&dab[a][b], t) };
            let p2 = tensor_of(&comm_o[a][b], star);
            let g = &inner_o[a][b];
            let p3: SVec = if g.is_zero() { Vec::new() } else { lxy.iter().map(|(k, c)| (no + k, c * g)).collect() };
            (p1, p2, p3)
        })
        .collect();
    let mut p1 = vec![Vec::new(); pairs];
    let mut p2 = vec![Vec::new(); pairs];
    let mut p3 = vec![Vec::new(); pairs];
    for (&(u, v), (a, b, c)) in tpairs.iter().zip(computed) {
        let k = pair_index(n, u, v);
        p1[k] = a;
        p2[k] = b;
        p3[k] = c;
    }
    let mk = |b: Vec<SVec>| LieAlgebra::new(n, names.clone(), b);
    let tables = Tables { dim: n, tensor_start: ts, base: mk(base), p1: mk(p1), p2: mk(p2), p3: mk(p3) };
    Ok(Parts { der_o, der_j, tables, tags })
}

fn finish(o: &CompositionAlgebra, j: &JordanAlgebra, parts: Parts, mu: TitsCoefficients) -> TitsAlgebra {
    let lie = parts.tables.combine(&mu);
    let n = lie.dim();
    let no = parts.der_o.lie.dim();
    let ts = parts.tables.tensor_start;
    TitsAlgebra {
        lie,
        summand_tags: parts.tags,
        octonion: o.clone(),
        jordan: j.clone(),
        coeffs: mu,
        der_o: Subspace::coordinate(n, 0..no),
        der_j: Subspace::coordinate(n, no..ts),
        der_o_data: parts.der_o,
        der_j_data: parts.der_j,
    }
}

fn check_mu(mu: &TitsCoefficients) -> Result<(), TitsError> {
    for (name, v) in [("mu1", &mu.mu1), ("mu2", &mu.mu2), ("mu3", &mu.mu3)] {
        if v.is_zero() {
            return Err(TitsError::ZeroWeight(name));
        }
    }
    Ok(())
}

pub fn assemble_tits(
    o: &CompositionAlgebra,
    j: &JordanAlgebra,
    mu: &TitsCoefficients,
) -> Result<TitsAlgebra, TitsError> {
    check_mu(mu)?;
    let parts = build_parts(o, j)?;
    Ok(finish(o, j, parts, mu.clone()))
}

/// Linear system in `(μ₁, μ₃)` from the tensor component of Jacobiators.
fn coefficient_system(t: &Tables, seed: u64) -> Result<(Mat, Vec<Rat>), TitsError> {
    let n = t.dim;
    let ts = t.tensor_start;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<[usize; 3]> = (0..SOLVER_TRIPLES).map(|_| [0; 3].map(|_| rng.random_range(ts..n))).collect();
    let per: Vec<Result<Vec<(SVec, Rat)>, TitsError>> = triples
        .par_iter()
        .map(|&[u, v, w]| {
            let mut a = Accum::new(n);
            let mut b = Accum::new(n);
            let mut c = Accum::new(n);
            let mut der = Accum::new(n);
            let one = Rat::one();
            for (x, y, z) in [(u, v, w), (v, w, u), (w, u, v)] {
                let ez = sparse::unit(z);
                a.add_scaled(&one, &t.base.bracket(&t.p1.bracket_basis(x, y), &ez));
                b.add_scaled(&one, &t.base.bracket(&t.p3.bracket_basis(x, y), &ez));
                let p2 = t.p2.bracket_basis(x, y);
                c.add_scaled(&one, &t.p2.bracket(&p2, &ez));
                der.add_scaled(&one, &t.p1.bracket(&p2, &ez));
                der.add_scaled(&one, &t.p3.bracket(&p2, &ez));
            }
            if !der.take().is_empty() {
                return Err(TitsError::DerivationComponent([u, v, w]));
            }
            let (a, b, c) = (a.take(), b.take(), c.take());
            let mut idx: Vec<usize> = a.iter().chain(&b).chain(&c).map(|(k, _)| *k).collect();
            idx.sort_unstable();
            idx.dedup();
            Ok(idx
                .into_iter()
                .map(|k| {
                    let mut row = Vec::new();
                    let (ak, bk) = (sparse::get(&a, k), sparse::get(&b, k));
                    if !ak.is_zero() {
                        row.push((0, ak));
                    }
                    if !bk.is_zero() {
                        row.push((1, bk));
                    }
                    (row, -sparse::get(&c, k))
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for r in per {
        for (row, x) in r? {
            rows.push(row);
            rhs.push(x);
        }
    }
    Ok((Mat::from_rows(2, rows), rhs))
}

fn solve_from_tables(t: &Tables) -> Result<TitsCoefficients, TitsError> {
    let (m, b) = coefficient_system(t, SOLVER_SEED)?;
    let r = rank(&m);
    if r < 2 {
        return Err(TitsError::Underdetermined(r));
    }
    let x = solve_linear(&m, &b).ok_or(TitsError::Inconsistent)?;
    let mu = TitsCoefficients { mu1: x[0].clone(), mu2: Rat::one(), mu3: x[1].clone() };
    check_mu(&mu)?;
    Ok(mu)
}

/// Solves for `(μ₁, μ₃)` with `μ₂ = 1` and post-verifies the assembled algebra.
pub fn solve_tits_coefficients(o: &CompositionAlgebra, j: &JordanAlgebra) -> Result<TitsCoefficients, TitsError> {
    Ok(construct(o, j)?.coeffs)
}

/// Solves the weights, assembles the algebra, and runs the sampled Jacobi check.
pub fn construct(o: &CompositionAlgebra, j: &JordanAlgebra) -> Result<TitsAlgebra, TitsError> {
    let parts = build_parts(o, j)?;
    let mu = solve_from_tables(&parts.tables)?;
    let g = finish(o, j, parts, mu);
    let r = verify_lie(&g.lie, JacobiMode::Sample { n: POST_VERIFY_SAMPLES, seed: SOLVER_SEED });
    if !r.passed() {
        return Err(TitsError::Verification(r.to_string()));
    }
    Ok(g)
}

/// Rank of the coefficient system; 2 means a unique solution.
pub fn coefficient_system_rank(o: &CompositionAlgebra, j: &JordanAlgebra) -> Result<usize, TitsError> {
    let parts = build_parts(o, j)?;
    let (m, _) = coefficient_system(&parts.tables, SOLVER_SEED)?;
    Ok(rank(&m))
}

pub fn dual_pair_check(g: &TitsAlgebra) -> Report {
    dual_pair_report(&g.lie, &g.der_o, &g.der_j)
}

/// Checks that `der_o` and `der_j` are each other's centralizers in `l` and
/// that their sum has zero centralizer.
pub fn dual_pair_report(l: &LieAlgebra, der_o: &Subspace, der_j: &Subspace) -> Report {
    let mut r = Report::new(format!("dual pair (dim {})", l.dim()));
    let (co, cj) = rayon::join(|| centralizer(l, der_o), || centralizer(l, der_j));
    r.check("centralizer of Der(O) is Der(J)", co == *der_j, format!("dim {} vs {}", co.dim(), der_j.dim()));
    r.check("centralizer of Der(J) is Der(O)", cj == *der_o, format!("dim {} vs {}", cj.dim(), der_o.dim()));
    let ch = centralizer(l, &der_o.sum(der_j));
    r.check("centralizer of h is zero", ch.dim() == 0, format!("dim {}", ch.dim()));
    r.info("centralizer of Der(O) is nonzero", co.dim() > 0, format!("dim {}", co.dim()));
    r
}

pub const AUTOMORPHISM_FULL_MAX_DIM: usize = 80;
pub const AUTOMORPHISM_SAMPLES: usize = 20_000;

/// The automorphism of `g` induced by automorphisms of `O` and `J`.
pub fn induced_automorphism(g: &TitsAlgebra, phi_o: &Mat, phi_j: &Mat) -> Result<(Mat, Report), TitsError> {
    induced_automorphism_seeded(g, phi_o, phi_j, 1)
}

pub fn induced_automorphism_seeded(
    g: &TitsAlgebra,
    phi_o: &Mat,
    phi_j: &Mat,
    seed: u64,
) -> Result<(Mat, Report), TitsError> {
    let o = &g.octonion.alg;
    let j = &g.jordan;
    if let Some((a, b)) = o.automorphism_violation(phi_o) {
        return Err(TitsError::NotAutomorphism(format!("octonion map does not preserve the product e{a}·e{b}")));
    }
    if let Some((a, b)) = j.alg.automorphism_violation(phi_j) {
        return Err(TitsError::NotAutomorphism(format!(
            "Jordan map does not preserve the product of basis elements {a} and {b}"
        )));
    }
    let inv_o = phi_o.inverse().ok_or_else(|| TitsError::NotAutomorphism("octonion map is singular".into()))?;
    let inv_j = phi_j.inverse().ok_or_else(|| TitsError::NotAutomorphism("Jordan map is singular".into()))?;
    let n = g.dim();
    let no = g.der_o.dim();
    let mut cols: Vec<SVec> = Vec::with_capacity(n);
    for d in &g.der_o_data.action {
        let c = g.der_o_data.coords(&phi_o.mul(d).mul(&inv_o)).expect("conjugate derivation");
        cols.push(c);
    }
    for d in &g.der_j_data.action {
        let c = g.der_j_data.coords(&phi_j.mul(d).mul(&inv_j)).expect("conjugate derivation");
        cols.push(c.into_iter().map(|(k, x)| (no + k, x)).collect());
    }
    let j0 = j.traceless_basis();
    let jimg: Vec<SVec> = j0.iter().map(|x| j.traceless_coords(&phi_j.mul_vec(x))).collect();
    for a in 1..8 {
        let oa = phi_o.col(a);
        for img in &jimg {
            let mut v = Vec::new();
            for (b, p) in &oa {
                for (y, q) in img {
                    v.push((g.tensor_index(*b, *y), p * q));
                }
            }
            cols.push(sparse::normalize(v));
        }
    }
    debug_assert_eq!(cols.len(), n);
    let m = Mat::from_cols(n, &cols);
    let mut r = Report::new("induced automorphism");
    let images = m.cols();
    let check =
        |i: usize, k: usize| -> bool { m.mul_vec(&g.lie.bracket_basis(i, k)) == g.lie.bracket(&images[i], &images[k]) };
    if n <= AUTOMORPHISM_FULL_MAX_DIM {
        let bad = (0..n).into_par_iter().find_map_first(|i| (i + 1..n).find(|&k| !check(i, k)).map(|k| (i, k)));
        r.check(
            "bracket preservation (all basis pairs)",
            bad.is_none(),
            bad.map(|p| format!("basis pair {p:?}")).unwrap_or_default(),
        );
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<(usize, usize)> =
            (0..AUTOMORPHISM_SAMPLES).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
        let bad = pairs.par_iter().find_map_first(|&(i, k)| (!check(i, k)).then_some((i, k)));
        r.check(
            "bracket preservation (sampled basis pairs)",
            bad.is_none(),
            bad.map(|p| format!("basis pair {p:?}"))
                .unwrap_or_else(|| format!("{AUTOMORPHISM_SAMPLES} pairs, seed {seed}")),
        );
    }
    r.info("involutive", m.mul(&m) == Mat::identity(n), "");
    Ok((m, r))
}

/// Kernel of the stacked action of `h` on the tensor summand.
pub fn tensor_invariants(g: &TitsAlgebra) -> usize {
    let ts = g.tensor_start();
    let n = g.dim();
    let idx: Vec<usize> = (ts..n).collect();
    let parts: Vec<Mat> = (0..ts).map(|i| g.lie.ad_basis(i).select(&idx, &idx)).collect();
    crate::exactlin::kernel_basis(&Mat::vstack(&parts)).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::build_composition;
    use crate::jordan::build_catalog_jordan;

    fn os() -> CompositionAlgebra {
        build_composition(&[Rat::int(-1), Rat::int(-1), Rat::int(1)]).unwrap()
    }

    #[test]
    fn f4_split_model() {
        let j = build_catalog_jordan("Js1").unwrap();
        let g = construct(&os(), &j).unwrap();
        assert_eq!(g.dim(), 52);
        assert!(verify_lie(&g.lie, JacobiMode::Full).passed());
        assert!(dual_pair_check(&g).passed());
        assert_eq!(tensor_invariants(&g), 0);
        let resc = assemble_tits(&os(), &j, &g.coeffs.rescaled(&Rat::int(2))).unwrap();
        assert!(verify_lie(&resc.lie, JacobiMode::Sample { n: 20_000, seed: 5 }).passed());
        let (m, r) = induced_automorphism(&g, &Mat::identity(8), &Mat::identity(j.dim())).unwrap();
        assert_eq!(m, Mat::identity(52));
        assert!(r.passed());
    }

    #[test]
    fn rejects_bad_inputs() {
        let j = build_catalog_jordan("Jc1").unwrap();
        let q = build_composition(&[Rat::int(-1), Rat::int(-1)]).unwrap();
        assert!(matches!(construct(&q, &j), Err(TitsError::NotOctonion(4))));
        let mu = TitsCoefficients { mu1: Rat::zero(), mu2: Rat::one(), mu3: Rat::one() };
        assert!(matches!(assemble_tits(&os(), &j, &mu), Err(TitsError::ZeroWeight("mu1"))));
    }
}
