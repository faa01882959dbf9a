//! Identification of constructed algebras: Cartan subalgebras and root
//! systems of split forms, real forms from the Killing signature, and the
//! Cartan-involution cross-check `trace θ = −δ`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, JORDAN_COLUMNS, OCTONION_NAMES};
use crate::composition::AlgebraError;
use crate::exactlin::modp::{self, P};
use crate::exactlin::sparse::{self, Accum, SVec};
use crate::exactlin::{
    kernel_basis, rational_eigenspaces, rationally_diagonalizable, solve_linear, symmetric_signature, Mat, Rat,
    Signature,
};
use crate::liealg::{
    centralizer, centroid_dimension, derivation_algebra, ideal_generated, is_abelian_subspace, is_self_normalizing,
    verify_lie, JacobiMode, LieAlgebra, Subspace, CENTROID_MAX_DIM,
};
use crate::report::{Check, Report};
use crate::tits::{construct, dual_pair_check, induced_automorphism, TitsAlgebra, TitsError};

pub const CARTAN_RETRIES: u64 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComplexType {
    F4,
    E6,
    E7,
    E8,
}

impl ComplexType {
    pub const ALL: [ComplexType; 4] = [ComplexType::F4, ComplexType::E6, ComplexType::E7, ComplexType::E8];

    pub fn from_dim(n: usize) -> Option<ComplexType> {
        ComplexType::ALL.into_iter().find(|t| t.dim() == n)
    }

    pub fn dim(self) -> usize {
        match self {
            ComplexType::F4 => 52,
            ComplexType::E6 => 78,
            ComplexType::E7 => 133,
            ComplexType::E8 => 248,
        }
    }

    pub fn rank(self) -> usize {
        match self {
            ComplexType::F4 => 4,
            ComplexType::E6 => 6,
            ComplexType::E7 => 7,
            ComplexType::E8 => 8,
        }
    }

    pub fn root_count(self) -> usize {
        self.dim() - self.rank()
    }

    /// Cartan matrix in Bourbaki numbering.
    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let mut a = vec![vec![0; r]; r];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let edges: &[(usize, usize)] = match self {
            ComplexType::F4 => &[(0, 1), (1, 2), (2, 3)],
            ComplexType::E6 => &[(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)],
            ComplexType::E7 => &[(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 3)],
            ComplexType::E8 => &[(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)],
        };
        for &(i, j) in edges {
            a[i][j] = -1;
            a[j][i] = -1;
        }
        if self == ComplexType::F4 {
            a[1][2] = -2;
        }
        a
    }
}

impl fmt::Display for ComplexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error(
        "no abelian self-normalizing centralizer after {tries} attempts from seed {seed}; \
         the algebra may not be split-friendly for this routine (split torus dimension {split_rank})"
    )]
    CartanNotFound { seed: u64, tries: u64, split_rank: usize },
    #[error("Killing form is degenerate: signature {0}")]
    Degenerate(Signature),
    #[error("no real form of type {0} has character {1}")]
    UnknownCharacter(ComplexType, i64),
    #[error("dimension {0} is not that of F4, E6, E7 or E8")]
    UnknownType(usize),
    #[error("{0}")]
    NotInvolution(String),
    #[error(transparent)]
    Tits(#[from] TitsError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

// ---------------------------------------------------------------------------
// Tori and Cartan subalgebras

fn random_combination(basis: &[SVec], n: usize, rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> SVec {
    let mut acc = Accum::new(n);
    for b in basis {
        acc.add_scaled(&Rat::int(rng.random_range(lo..=hi)), b);
    }
    acc.take()
}

/// Whether `ad` is nilpotent, tested modulo P on a random vector.
fn probably_nilpotent(ad: &Mat, rng: &mut ChaCha8Rng) -> bool {
    let n = ad.nrows();
    let Some(rows): Option<Vec<Vec<(usize, u64)>>> =
        ad.rows().iter().map(|r| r.iter().map(|(c, x)| x.mod_p(P).map(|m| (*c, m))).collect()).collect()
    else {
        return false;
    };
    let mut v: Vec<u64> = (0..n).map(|_| rng.random_range(1..P)).collect();
    for _ in 0..=n {
        let w: Vec<u64> =
            rows.iter().map(|r| r.iter().fold(0, |s, (c, x)| modp::add(s, modp::mul(*x, v[*c], P), P))).collect();
        if w.iter().all(|x| *x == 0) {
            return true;
        }
        v = w;
    }
    false
}

/// Neutral element `h = [e, f]` of an sl₂-triple with `f` in `fspace`, if
/// `[[e, f], e] = 2e` is solvable there.
fn sl2_neutral(l: &LieAlgebra, e: &SVec, fspace: &[SVec]) -> Option<SVec> {
    let n = l.dim();
    let cols: Vec<SVec> = fspace.iter().map(|w| l.bracket(&l.bracket(e, w), e)).collect();
    let m = Mat::from_cols(n, &cols);
    let rhs = sparse::to_dense(&sparse::scale(e, &Rat::int(2)), n);
    let c = solve_linear(&m, &rhs)?;
    let mut f = Accum::new(n);
    for (w, x) in fspace.iter().zip(&c) {
        if !x.is_zero() {
            f.add_scaled(x, w);
        }
    }
    let h = l.bracket(e, &f.take());
    (!h.is_empty()).then_some(h)
}

/// A split torus grown one element at a time.
///
/// New elements are neutral elements of sl₂-triples whose nilpotent part lies
/// in a nonzero weight space of a generic torus element, or else basis
/// vectors of the centralizer that are ad-diagonalizable over Q or
/// ad-nilpotent. Every added element commutes with the torus.
pub fn split_torus(l: &LieAlgebra, seed: u64) -> Subspace {
    let n = l.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut torus = Subspace::zero(n);
    'grow: loop {
        let c = centralizer(l, &torus);
        if c.dim() == torus.dim() {
            break;
        }
        if torus.dim() > 0 {
            let t = random_combination(torus.basis(), n, &mut rng, 1, 9);
            let spaces = rational_eigenspaces(&l.ad(&t));
            let by_value: HashMap<&Rat, &Vec<SVec>> = spaces.iter().map(|(v, b)| (v, b)).collect();
            for (lam, vecs) in &spaces {
                if lam.signum() <= 0 {
                    continue;
                }
                let Some(neg) = by_value.get(&-lam) else { continue };
                for e in vecs {
                    if let Some(h) = sl2_neutral(l, e, neg) {
                        if !torus.contains(&h) {
                            torus = torus.sum(&Subspace::span(n, &[h]));
                            continue 'grow;
                        }
                    }
                }
            }
        }
        let mut candidates: Vec<SVec> = (0..n).map(sparse::unit).filter(|e| c.contains(e)).collect();
        if c.dim() < n {
            candidates.extend(c.basis().iter().cloned());
        }
        for e in candidates {
            if torus.contains(&e) {
                continue;
            }
            let ad = l.ad(&e);
            if ad.is_zero() {
                continue;
            }
            if !probably_nilpotent(&ad, &mut rng) {
                if rationally_diagonalizable(&ad, rng.random()) {
                    torus = torus.sum(&Subspace::span(n, &[e]));
                    continue 'grow;
                }
                continue;
            }
            if let Some(h) = sl2_neutral(l, &e, c.basis()) {
                if !torus.contains(&h) {
                    torus = torus.sum(&Subspace::span(n, &[h]));
                    continue 'grow;
                }
            }
        }
        break;
    }
    torus
}

/// A Cartan subalgebra: the centralizer of a random element `x` with entries
/// in `{−3..3}`, taken inside the centralizer of a split torus so that split
/// algebras yield split Cartan subalgebras. Accepted only if abelian and
/// self-normalizing; retried with the next seed otherwise.
pub fn cartan_subalgebra(l: &LieAlgebra, seed: u64) -> Result<Subspace, ClassifyError> {
    cartan_containing(l, &split_torus(l, seed), seed)
}

pub fn cartan_containing(l: &LieAlgebra, torus: &Subspace, seed: u64) -> Result<Subspace, ClassifyError> {
    let n = l.dim();
    let c = centralizer(l, torus);
    for attempt in 0..CARTAN_RETRIES {
        let h = if c.dim() == torus.dim() {
            c.clone()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
            let x = random_combination(c.basis(), n, &mut rng, -3, 3);
            if x.is_empty() {
                continue;
            }
            let inside: Vec<SVec> = c.basis().iter().map(|v| l.bracket(&x, v)).collect();
            let k = kernel_basis(&Mat::from_cols(n, &inside));
            let vecs: Vec<SVec> = k
                .iter()
                .map(|coef| {
                    let mut acc = Accum::new(n);
                    for (q, a) in coef {
                        acc.add_scaled(a, &c.basis()[*q]);
                    }
                    acc.take()
                })
                .collect();
            Subspace::span(n, &vecs)
        };
        if is_abelian_subspace(l, &h) && is_self_normalizing(l, &h) {
            return Ok(h);
        }
    }
    Err(ClassifyError::CartanNotFound { seed, tries: CARTAN_RETRIES, split_rank: torus.dim() })
}

// ---------------------------------------------------------------------------
// Roots

#[derive(Clone, Debug)]
pub struct Root {
    /// Values on the basis of the Cartan subalgebra.
    pub values: Vec<Rat>,
    pub space: Subspace,
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub cartan: Subspace,
    pub roots: Vec<Root>,
    /// Indices into `roots`.
    pub simple_roots: Vec<usize>,
    pub cartan_matrix: Vec<Vec<i64>>,
    /// `None` stands for an unknown type.
    pub type_label: Option<ComplexType>,
    pub diagnostics: Vec<String>,
}

impl RootDatum {
    pub fn type_name(&self) -> String {
        self.type_label.map(|t| t.to_string()).unwrap_or_else(|| "unknown".into())
    }
}

/// Scalar by which `ad_t` acts on `v`, if `v` is an eigenvector.
fn eigenvalue_on(l: &LieAlgebra, t: &SVec, v: &SVec) -> Option<Rat> {
    let w = l.bracket(t, v);
    let (p, x) = v.first()?;
    let c = &sparse::get(&w, *p) / x;
    (sparse::scale(v, &c) == w).then_some(c)
}

/// Splits `v` into joint eigenspaces of `ts`; pieces without rational
/// eigenvalues are dropped.
fn refine(l: &LieAlgebra, ts: &[SVec], v: Subspace, out: &mut Vec<(Vec<Rat>, Subspace)>) {
    let n = l.dim();
    let scalars: Vec<Option<Rat>> = ts
        .iter()
        .map(|t| {
            let c = eigenvalue_on(l, t, &v.basis()[0])?;
            v.basis()[1..].iter().all(|b| eigenvalue_on(l, t, b).as_ref() == Some(&c)).then_some(c)
        })
        .collect();
    let Some(k) = scalars.iter().position(|s| s.is_none()) else {
        out.push((scalars.into_iter().map(Option::unwrap).collect(), v));
        return;
    };
    let cols: Vec<SVec> = v
        .basis()
        .iter()
        .map(|b| v.coordinates(&l.bracket(&ts[k], b)).expect("torus preserves its weight spaces"))
        .collect();
    let m = Mat::from_cols(v.dim(), &cols);
    for (_, coords) in rational_eigenspaces(&m) {
        let vecs: Vec<SVec> = coords
            .iter()
            .map(|c| {
                let mut acc = Accum::new(n);
                for (q, a) in c {
                    acc.add_scaled(a, &v.basis()[*q]);
                }
                acc.take()
            })
            .collect();
        refine(l, ts, Subspace::span(n, &vecs), out);
    }
}

/// Joint rational eigenspaces of `ad` on the commuting elements `ts`.
pub fn weight_spaces(l: &LieAlgebra, ts: &[SVec], seed: u64) -> Vec<(Vec<Rat>, Subspace)> {
    let n = l.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = random_combination(ts, n, &mut rng, 1, 9);
    let pieces: Vec<Subspace> =
        rational_eigenspaces(&l.ad(&t)).into_iter().map(|(_, b)| Subspace::span(n, &b)).collect();
    let mut out = Vec::new();
    for v in pieces {
        refine(l, ts, v, &mut out);
    }
    out
}

/// Root decomposition relative to a Cartan subalgebra, with simple roots,
/// Cartan matrix and type. Non-split input yields an unknown type.
pub fn root_decomposition(l: &LieAlgebra, cartan: &Subspace) -> RootDatum {
    root_decomposition_seeded(l, cartan, 0x2007)
}

pub fn root_decomposition_seeded(l: &LieAlgebra, cartan: &Subspace, seed: u64) -> RootDatum {
    let n = l.dim();
    let r = cartan.dim();
    let mut datum = RootDatum {
        cartan: cartan.clone(),
        roots: Vec::new(),
        simple_roots: Vec::new(),
        cartan_matrix: Vec::new(),
        type_label: None,
        diagnostics: Vec::new(),
    };
    if r == 0 {
        datum.diagnostics.push("Cartan subalgebra is zero".into());
        return datum;
    }
    let spaces = weight_spaces(l, cartan.basis(), seed);
    let total: usize = spaces.iter().map(|(_, s)| s.dim()).sum();
    let mut zero_dim = 0;
    for (w, s) in spaces {
        if w.iter().all(Rat::is_zero) {
            zero_dim = s.dim();
            if s != *cartan {
                datum.diagnostics.push("zero weight space differs from the Cartan subalgebra".into());
            }
        } else {
            datum.roots.push(Root { values: w, space: s });
        }
    }
    if total != n {
        datum.diagnostics.push(format!(
            "rational weight spaces cover {total} of {n} dimensions; the Cartan subalgebra is not split"
        ));
        return datum;
    }
    if zero_dim != r {
        datum.diagnostics.push(format!("zero weight space has dimension {zero_dim}, rank is {r}"));
        return datum;
    }
    if let Some(bad) = datum.roots.iter().find(|x| x.space.dim() != 1) {
        datum.diagnostics.push(format!("root space of dimension {}", bad.space.dim()));
        return datum;
    }

    // Simple roots for a generic positivity functional.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positive: Vec<usize> = loop {
        let phi: Vec<Rat> = (0..r).map(|_| Rat::int(rng.random_range(1..=1000))).collect();
        let vals: Vec<Rat> = datum.roots.iter().map(|x| x.values.iter().zip(&phi).map(|(a, b)| a * b).sum()).collect();
        if vals.iter().all(|v| !v.is_zero()) {
            break (0..datum.roots.len()).filter(|&i| vals[i].signum() > 0).collect();
        }
    };
    let pos_set: HashSet<&Vec<Rat>> = positive.iter().map(|&i| &datum.roots[i].values).collect();
    let simple: Vec<usize> = positive
        .iter()
        .copied()
        .filter(|&i| {
            let a = &datum.roots[i].values;
            !positive.iter().any(|&j| {
                let d: Vec<Rat> = a.iter().zip(&datum.roots[j].values).map(|(x, y)| x - y).collect();
                pos_set.contains(&d)
            })
        })
        .collect();
    datum.simple_roots = simple.clone();
    if simple.len() != r {
        datum.diagnostics.push(format!("{} simple roots for rank {r}", simple.len()));
        return datum;
    }

    // Pairing on h* dual to the Killing form on h.
    let hb = cartan.basis();
    let gram = Mat::from_dense(
        &(0..r).map(|i| (0..r).map(|j| l.killing_value(&hb[i], &hb[j])).collect()).collect::<Vec<Vec<Rat>>>(),
    );
    let Some(ginv) = gram.inverse() else {
        datum.diagnostics.push("Killing form is degenerate on the Cartan subalgebra".into());
        return datum;
    };
    let pair = |a: &[Rat], b: &[Rat]| -> Rat {
        let gb = ginv.mul_dense_vec(b);
        a.iter().zip(&gb).map(|(x, y)| x * y).sum()
    };
    let mut cm = vec![vec![0i64; r]; r];
    for (i, &si) in simple.iter().enumerate() {
        for (j, &sj) in simple.iter().enumerate() {
            let a = &datum.roots[si].values;
            let b = &datum.roots[sj].values;
            let v = &(&Rat::int(2) * &pair(a, b)) / &pair(b, b);
            match v.as_small() {
                Some((x, 1)) => cm[i][j] = x,
                _ => {
                    datum.diagnostics.push(format!("non-integral Cartan integer {v}"));
                    return datum;
                }
            }
        }
    }
    datum.type_label = ComplexType::ALL.into_iter().find(|t| same_cartan_type(&cm, &t.cartan_matrix()));
    if datum.type_label.is_none() {
        datum.diagnostics.push("Cartan matrix matches none of F4, E6, E7, E8".into());
    }
    datum.cartan_matrix = cm;
    datum
}

fn cartan_graph(a: &[Vec<i64>]) -> DiGraph<(), i64> {
    let mut g = DiGraph::new();
    let nodes: Vec<_> = (0..a.len()).map(|_| g.add_node(())).collect();
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if i != j && x != 0 {
                g.add_edge(nodes[i], nodes[j], x);
            }
        }
    }
    g
}

/// Equality of Cartan matrices up to a permutation of the simple roots.
pub fn same_cartan_type(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    a.len() == b.len()
        && a.iter().all(|r| r.len() == a.len())
        && is_isomorphic_matching(&cartan_graph(a), &cartan_graph(b), |_, _| true, |x, y| x == y)
}

/// `α + β` is a root iff `[g_α, g_β] ≠ 0`, for all pairs with `α + β ≠ 0`.
pub fn root_string_check(l: &LieAlgebra, datum: &RootDatum) -> Report {
    let mut rep = Report::new("root strings");
    let index: HashSet<&Vec<Rat>> = datum.roots.iter().map(|x| &x.values).collect();
    let m = datum.roots.len();
    let bad = (0..m).into_par_iter().find_map_first(|i| {
        (i + 1..m).find_map(|j| {
            let (a, b) = (&datum.roots[i], &datum.roots[j]);
            let s: Vec<Rat> = a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect();
            if s.iter().all(Rat::is_zero) {
                return None;
            }
            let nonzero = !l.bracket(&a.space.basis()[0], &b.space.basis()[0]).is_empty();
            (nonzero != index.contains(&s)).then_some((i, j))
        })
    });
    rep.check(
        "sum of roots is a root iff the bracket is nonzero",
        bad.is_none(),
        bad.map(|p| format!("root pair {p:?}")).unwrap_or_else(|| format!("{m} roots")),
    );
    rep
}

// ---------------------------------------------------------------------------
// Real forms

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealFormLabel {
    pub complex_type: ComplexType,
    /// `δ = n₊ − n₋` of the Killing form.
    pub character: i64,
    pub label: String,
}

/// Characters `δ = dim g − 2 dim k`, with `k` a maximal compact subalgebra.
pub const LABEL_TABLE: [(ComplexType, i64, &str); 15] = [
    (ComplexType::F4, -52, "f4c"),
    (ComplexType::F4, 4, "f4s"),
    (ComplexType::F4, -20, "f4,1"),
    (ComplexType::E6, -78, "e6c"),
    (ComplexType::E6, 6, "e6s"),
    (ComplexType::E6, 2, "e6,4"),
    (ComplexType::E6, -14, "e6(-14)"),
    (ComplexType::E6, -26, "e6(-26)"),
    (ComplexType::E7, -133, "e7c"),
    (ComplexType::E7, 7, "e7s"),
    (ComplexType::E7, -5, "e7,4"),
    (ComplexType::E7, -25, "e7,3"),
    (ComplexType::E8, -248, "e8c"),
    (ComplexType::E8, 8, "e8s"),
    (ComplexType::E8, -24, "e8,4"),
];

pub fn real_form_label(ty: ComplexType, sig: &Signature) -> Result<RealFormLabel, ClassifyError> {
    if !sig.is_nondegenerate() {
        return Err(ClassifyError::Degenerate(*sig));
    }
    let d = sig.delta();
    LABEL_TABLE
        .iter()
        .find(|(t, c, _)| *t == ty && *c == d)
        .map(|(t, c, s)| RealFormLabel { complex_type: *t, character: *c, label: s.to_string() })
        .ok_or(ClassifyError::UnknownCharacter(ty, d))
}

/// Identification summary of a Lie algebra.
#[derive(Clone, Debug, Serialize)]
pub struct Identification {
    pub dim: usize,
    pub complex_type: Option<ComplexType>,
    pub signature: Signature,
    pub delta: i64,
    pub label: Option<String>,
    pub seed: u64,
    pub split_torus_dim: usize,
    pub rank: Option<usize>,
    pub root_count: Option<usize>,
    pub dynkin_type: Option<String>,
    pub diagnostics: Vec<String>,
}

pub fn identify(l: &LieAlgebra, seed: u64) -> Identification {
    let sig = l.signature();
    let ty = ComplexType::from_dim(l.dim());
    let mut out = Identification {
        dim: l.dim(),
        complex_type: ty,
        signature: sig,
        delta: sig.delta(),
        label: None,
        seed,
        split_torus_dim: 0,
        rank: None,
        root_count: None,
        dynkin_type: None,
        diagnostics: Vec::new(),
    };
    if !sig.is_nondegenerate() {
        out.diagnostics.push(format!("Killing form is degenerate (signature {sig}); the algebra is not semisimple"));
        return out;
    }
    match ty {
        Some(t) => match real_form_label(t, &sig) {
            Ok(lab) => out.label = Some(lab.label),
            Err(e) => out.diagnostics.push(e.to_string()),
        },
        None => out.diagnostics.push(ClassifyError::UnknownType(l.dim()).to_string()),
    }
    let torus = split_torus(l, seed);
    out.split_torus_dim = torus.dim();
    let split = match ty {
        Some(t) => torus.dim() == t.rank(),
        None => l.dim() <= CENTROID_MAX_DIM,
    };
    if !split {
        out.diagnostics.push(format!(
            "split torus has dimension {}; root decomposition is only attempted for split forms",
            torus.dim()
        ));
        return out;
    }
    match cartan_containing(l, &torus, seed) {
        Ok(h) => {
            out.rank = Some(h.dim());
            let d = root_decomposition(l, &h);
            if d.type_label.is_some() {
                out.root_count = Some(d.roots.len());
                out.dynkin_type = Some(d.type_name());
            }
            out.diagnostics.extend(d.diagnostics);
        }
        Err(e) => out.diagnostics.push(e.to_string()),
    }
    out
}

// ---------------------------------------------------------------------------
// Cartan involutions

/// Builds `θ_G` from involutions of `O` and `J`, checks `θ_G² = 1`, tests
/// whether `B_θ(x,y) = −κ(x, θ_G y)` is positive definite, and compares
/// `trace θ_G` with `−δ`.
pub fn cartan_involution_check(g: &TitsAlgebra, theta_o: &Mat, theta_j: &Mat) -> Result<Report, ClassifyError> {
    if theta_o.mul(theta_o) != Mat::identity(theta_o.nrows()) {
        return Err(ClassifyError::NotInvolution("octonion map is not an involution".into()));
    }
    if theta_j.mul(theta_j) != Mat::identity(theta_j.nrows()) {
        return Err(ClassifyError::NotInvolution("Jordan map is not an involution".into()));
    }
    let (theta, auto) = induced_automorphism(g, theta_o, theta_j)?;
    let n = g.dim();
    let mut rep = Report::new("Cartan involution");
    for c in auto.checks.into_iter().filter(|c| !c.informational) {
        rep.checks.push(c);
    }
    rep.check("involutive", theta.mul(&theta) == Mat::identity(n), "");
    let b = g.lie.killing().mul(&theta).scale(&Rat::int(-1));
    let sig = symmetric_signature(&b).ok();
    let delta = g.lie.signature().delta();
    let tr = theta.trace();
    let cartan = sig.map(|s| s.n_plus == n).unwrap_or(false);
    rep.check(
        "B_theta positive definite",
        cartan,
        match sig {
            Some(s) => format!("signature {s}"),
            None => "B_theta is not symmetric".into(),
        },
    );
    rep.check("trace(theta) = -delta", tr == Rat::int(-delta), format!("trace {tr}, delta {delta}"));
    Ok(rep)
}

/// Standard involutions for a Tits algebra: the norm-sign map on `O` and
/// the entrywise norm-sign map conjugated by ϱ on `J`.
pub fn standard_involutions(g: &TitsAlgebra) -> (Mat, Mat) {
    (g.octonion.norm_sign_map(), g.jordan.cartan_candidate())
}

// ---------------------------------------------------------------------------
// Tables

pub const TABLE1_EXPECTED: [(usize, usize, i64, &str); 4] =
    [(1, 3, 1, "so(1,2)"), (2, 8, 0, "su(1,2;C)"), (4, 21, -5, "su(1,2;H)"), (8, 52, -20, "f4,1")];

#[derive(Clone, Debug, Serialize)]
pub struct Table1Row {
    pub d: usize,
    pub algebra: String,
    pub dim: usize,
    pub signature: Signature,
    pub delta: i64,
    pub passed: bool,
}

pub fn table1() -> Result<(Vec<Table1Row>, Report), ClassifyError> {
    let mut rows = Vec::new();
    let mut rep = Report::new("Der(JII(d)) for d = 1, 2, 4, 8");
    for (d, dim, delta, name) in TABLE1_EXPECTED {
        let j = catalog::jordan(&format!("JII{d}"))?;
        let (der, _) = derivation_algebra(&j.alg);
        let sig = der.signature();
        let ok = der.dim() == dim && sig.delta() == delta && sig.is_nondegenerate();
        rep.check(
            format!("d={d} {name}"),
            ok,
            format!("dim {} (expected {dim}), delta {} (expected {delta})", der.dim(), sig.delta()),
        );
        rows.push(Table1Row {
            d,
            algebra: name.into(),
            dim: der.dim(),
            signature: sig,
            delta: sig.delta(),
            passed: ok,
        });
    }
    Ok((rows, rep))
}

/// Expected labels, row `Oc` then row `Os`, columns as in [`JORDAN_COLUMNS`].
pub const TABLE2_EXPECTED: [[&str; 11]; 2] = [
    ["f4c", "f4,1", "e6c", "e6(-14)", "e6(-26)", "e7c", "e7,4", "e7,3", "e8c", "e8s", "e8,4"],
    ["f4s", "f4s", "e6,4", "e6,4", "e6s", "e7,4", "e7,4", "e7s", "e8,4", "e8,4", "e8s"],
];

#[derive(Clone, Debug)]
pub struct Table2Options {
    pub jacobi_samples: usize,
    pub seed: u64,
    pub dual_pair: bool,
    pub cartan_involution: bool,
}

impl Default for Table2Options {
    fn default() -> Self {
        Table2Options { jacobi_samples: 20_000, seed: 1, dual_pair: true, cartan_involution: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub cell: String,
    pub dim: usize,
    pub signature: Signature,
    pub delta: i64,
    pub label: String,
    pub expected: String,
    pub checks: Vec<Check>,
}

impl CellReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.informational)
    }
}

pub fn table2_cell(
    o_name: &str,
    j_name: &str,
    expected: &str,
    opts: &Table2Options,
) -> Result<CellReport, ClassifyError> {
    let o = catalog::octonion(o_name)?;
    let j = catalog::jordan(j_name)?;
    let g = construct(&o, &j)?;
    let mut rep = Report::new("");
    let jac = verify_lie(&g.lie, JacobiMode::Sample { n: opts.jacobi_samples, seed: opts.seed });
    rep.checks.extend(jac.checks);
    let sig = g.lie.signature();
    rep.check("Killing form nondegenerate", sig.is_nondegenerate(), format!("signature {sig}"));
    let ty = ComplexType::from_dim(g.dim()).ok_or(ClassifyError::UnknownType(g.dim()))?;
    let label = real_form_label(ty, &sig).map(|l| l.label).unwrap_or_else(|e| e.to_string());
    rep.check("label", label == expected, format!("{label} (expected {expected})"));
    if opts.dual_pair {
        rep.merge(dual_pair_check(&g));
    }
    if opts.cartan_involution {
        let (to, tj) = standard_involutions(&g);
        rep.merge(cartan_involution_check(&g, &to, &tj)?);
    }
    Ok(CellReport {
        cell: format!("{o_name}/{j_name}"),
        dim: g.dim(),
        signature: sig,
        delta: sig.delta(),
        label,
        expected: expected.into(),
        checks: rep.checks,
    })
}

/// All 22 cells in row-major order.
pub fn table2(opts: &Table2Options) -> Result<Vec<CellReport>, ClassifyError> {
    let cells: Vec<(usize, usize)> = (0..2).flat_map(|r| (0..11).map(move |c| (r, c))).collect();
    cells
        .par_iter()
        .map(|&(r, c)| table2_cell(OCTONION_NAMES[r], JORDAN_COLUMNS[c], TABLE2_EXPECTED[r][c], opts))
        .collect()
}

/// Simplicity certificate: centroid dimension 1 up to the centroid size
/// limit, otherwise five seeded random elements each generating everything,
/// together with a nondegenerate Killing form.
pub fn simplicity_certificate(l: &LieAlgebra, seed: u64) -> Report {
    let mut rep = Report::new("simplicity");
    let n = l.dim();
    let sig = l.signature();
    rep.check("Killing form nondegenerate", sig.is_nondegenerate(), format!("signature {sig}"));
    if n <= CENTROID_MAX_DIM {
        match centroid_dimension(l) {
            Ok(d) => rep.check("centroid dimension 1", d == 1, format!("dimension {d}")),
            Err(e) => rep.check("centroid dimension 1", false, e.to_string()),
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis: Vec<SVec> = (0..n).map(sparse::unit).collect();
        let mut ok = 0;
        for _ in 0..5 {
            let x = loop {
                let x = random_combination(&basis, n, &mut rng, -3, 3);
                if !x.is_empty() {
                    break x;
                }
            };
            if ideal_generated(l, &x).map(|s| s.dim() == n).unwrap_or(false) {
                ok += 1;
            }
        }
        rep.check("ideals of 5 random elements are everything", ok == 5, format!("{ok}/5, seed {seed}"));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{abelian, so3_compact};

    fn model(o: &str, j: &str) -> TitsAlgebra {
        construct(&catalog::octonion(o).unwrap(), &catalog::jordan(j).unwrap()).unwrap()
    }

    /// `dim g − 2 dim k` from the dimensions of maximal compact subalgebras.
    fn character_oracle(label: &str) -> i64 {
        let (dim, k): (i64, i64) = match label {
            "f4c" => (52, 52),
            "f4s" => (52, 21 + 3),
            "f4,1" => (52, 36),
            "e6c" => (78, 78),
            "e6s" => (78, 36),
            "e6,4" => (78, 35 + 3),
            "e6(-14)" => (78, 45 + 1),
            "e6(-26)" => (78, 52),
            "e7c" => (133, 133),
            "e7s" => (133, 63),
            "e7,4" => (133, 66 + 3),
            "e7,3" => (133, 78 + 1),
            "e8c" => (248, 248),
            "e8s" => (248, 120),
            "e8,4" => (248, 133 + 3),
            _ => unreachable!(),
        };
        dim - 2 * k
    }

    #[test]
    fn label_table_matches_compact_dimensions() {
        for (ty, d, label) in LABEL_TABLE {
            assert_eq!(d, character_oracle(label), "{label}");
            assert!(label.starts_with(&ty.to_string().to_lowercase()));
        }
    }

    #[test]
    fn labels_from_signatures() {
        let f4c = Signature { n_plus: 0, n_minus: 52, n_zero: 0 };
        assert_eq!(real_form_label(ComplexType::F4, &f4c).unwrap().label, "f4c");
        let e6 = Signature { n_plus: 32, n_minus: 46, n_zero: 0 };
        assert_eq!(real_form_label(ComplexType::E6, &e6).unwrap().label, "e6(-14)");
        let e8 = Signature { n_plus: 112, n_minus: 136, n_zero: 0 };
        assert_eq!(real_form_label(ComplexType::E8, &e8).unwrap().label, "e8,4");
        let deg = Signature { n_plus: 0, n_minus: 51, n_zero: 1 };
        assert!(matches!(real_form_label(ComplexType::F4, &deg), Err(ClassifyError::Degenerate(_))));
        let odd = Signature { n_plus: 26, n_minus: 26, n_zero: 0 };
        assert!(matches!(real_form_label(ComplexType::F4, &odd), Err(ClassifyError::UnknownCharacter(_, 0))));
    }

    #[test]
    fn cartan_matrices_up_to_permutation() {
        let f4 = ComplexType::F4.cartan_matrix();
        let perm = [3, 2, 1, 0];
        let t: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| f4[perm[j]][perm[i]]).collect()).collect();
        assert!(same_cartan_type(&t, &f4));
        assert!(!same_cartan_type(&ComplexType::E6.cartan_matrix(), &ComplexType::E7.cartan_matrix()));
        let mut a5 = vec![vec![0i64; 6]; 6];
        for i in 0..6 {
            a5[i][i] = 2;
            if i + 1 < 6 {
                a5[i][i + 1] = -1;
                a5[i + 1][i] = -1;
            }
        }
        assert!(!same_cartan_type(&a5, &ComplexType::E6.cartan_matrix()));
    }

    #[test]
    fn so3_cartan_and_no_roots() {
        let l = so3_compact();
        let h = cartan_subalgebra(&l, 7).unwrap();
        assert_eq!(h.dim(), 1);
        let d = root_decomposition(&l, &h);
        assert_eq!(d.type_label, None);
        assert!(d.roots.is_empty());
    }

    #[test]
    fn split_f4_roots() {
        let g = model("Os", "Js1");
        let h = cartan_subalgebra(&g.lie, 3).unwrap();
        assert_eq!(h.dim(), 4);
        let d = root_decomposition(&g.lie, &h);
        assert_eq!(d.roots.len(), 48);
        assert_eq!(d.type_label, Some(ComplexType::F4));
        let total: usize = h.dim() + d.roots.iter().map(|r| r.space.dim()).sum::<usize>();
        assert_eq!(total, 52);
        assert!(root_string_check(&g.lie, &d).passed());
    }

    #[test]
    fn compact_f4_has_no_split_roots() {
        let g = model("Oc", "Jc1");
        let h = cartan_subalgebra(&g.lie, 3).unwrap();
        assert_eq!(h.dim(), 4);
        assert_eq!(root_decomposition(&g.lie, &h).type_label, None);
        assert_eq!(identify(&g.lie, 3).label.as_deref(), Some("f4c"));
    }

    #[test]
    fn label_survives_basis_change() {
        let g = model("Oc", "Js1");
        let n = g.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = loop {
            let mut p = Mat::identity(n);
            for _ in 0..3 * n {
                let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
                if i != j {
                    p.set(i, j, Rat::int(rng.random_range(-2..=2)));
                }
            }
            if p.inverse().is_some() {
                break p;
            }
        };
        let moved = g.lie.change_basis(&p);
        assert_eq!(moved.signature(), g.lie.signature());
        assert_eq!(identify(&moved, 1).label.as_deref(), Some("f4,1"));
    }

    #[test]
    fn degenerate_killing_form_is_diagnosed() {
        let id = identify(&abelian(3), 1);
        assert!(id.label.is_none());
        assert!(id.diagnostics[0].contains("degenerate"));
    }

    #[test]
    fn cartan_involution_and_negative_control() {
        let g = model("Oc", "Jc1");
        let id8 = Mat::identity(8);
        let r = cartan_involution_check(&g, &id8, &Mat::identity(g.jordan.dim())).unwrap();
        assert!(r.passed(), "{r}");
        let rho = g.jordan.rho.clone();
        let flipped = [-rho[0].clone(), rho[1].clone(), rho[2].clone()];
        let bad = g.jordan.coordinate_map(&g.jordan.coord.norm_sign_map(), &flipped);
        let r = cartan_involution_check(&g, &id8, &bad).unwrap();
        assert!(!r.get("B_theta positive definite").unwrap().passed);
        let not_inv = Mat::identity(8).scale(&Rat::int(2));
        assert!(matches!(
            cartan_involution_check(&g, &not_inv, &Mat::identity(g.jordan.dim())),
            Err(ClassifyError::NotInvolution(_))
        ));
    }

    #[test]
    fn split_cell_involution_trace() {
        let g = model("Os", "Js1");
        let (to, tj) = standard_involutions(&g);
        let r = cartan_involution_check(&g, &to, &tj).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn table1_rows() {
        let (rows, rep) = table1().unwrap();
        assert!(rep.passed(), "{rep}");
        let dims: Vec<usize> = rows.iter().map(|r| r.dim).collect();
        assert_eq!(dims, vec![3, 8, 21, 52]);
        let deltas: Vec<i64> = rows.iter().map(|r| r.delta).collect();
        assert_eq!(deltas, vec![1, 0, -5, -20]);
    }
}
