//! Lie algebras given by structure constants.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::composition::StructureAlgebra;
use crate::exactlin::modp::ModEchelon;
use crate::exactlin::sparse::{self, Accum, SVec};
use crate::exactlin::{kernel_basis, rref, symmetric_signature, Echelon, Mat, Rat, Signature};
use crate::report::Report;

pub const CENTROID_MAX_DIM: usize = 80;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("centroid computation is limited to dimension {CENTROID_MAX_DIM} (got {0}); use the ideal_generated certificate instead")]
    TooLarge(usize),
    #[error("the zero vector generates the zero ideal")]
    ZeroVector,
    #[error("invalid structure constants: {0}")]
    Invalid(String),
}

/// Structure constants `[e_i, e_j] = Σ c_ij^k e_k`, stored for `i < j`.
pub struct LieAlgebra {
    dim: usize,
    basis_names: Vec<String>,
    brackets: Vec<SVec>,
    killing: OnceLock<Mat>,
    signature: OnceLock<Signature>,
}

impl Clone for LieAlgebra {
    fn clone(&self) -> Self {
        LieAlgebra {
            dim: self.dim,
            basis_names: self.basis_names.clone(),
            brackets: self.brackets.clone(),
            killing: self.killing.clone(),
            signature: self.signature.clone(),
        }
    }
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.basis_names == other.basis_names && self.brackets == other.brackets
    }
}

impl Eq for LieAlgebra {}

impl std::fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LieAlgebra(dim {}, {} nonzero constants)", self.dim, self.num_constants())
    }
}

#[inline]
pub fn pair_index(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < dim);
    i * dim - i * (i + 1) / 2 + (j - i - 1)
}

static EMPTY: SVec = Vec::new();

impl LieAlgebra {
    /// `brackets[pair_index(i, j)]` must hold `[e_i, e_j]` for `i < j`.
    pub fn new(dim: usize, basis_names: Vec<String>, brackets: Vec<SVec>) -> Self {
        assert_eq!(basis_names.len(), dim);
        assert_eq!(brackets.len(), dim * dim.saturating_sub(1) / 2);
        LieAlgebra { dim, basis_names, brackets, killing: OnceLock::new(), signature: OnceLock::new() }
    }

    /// Builds from `(i, j, k, c)` entries with `i < j`; duplicates are rejected.
    pub fn from_entries(
        dim: usize,
        basis_names: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Rat)>,
    ) -> Result<Self, LieError> {
        let mut brackets = vec![Vec::new(); dim * dim.saturating_sub(1) / 2];
        for (i, j, k, c) in entries {
            if i >= j || j >= dim || k >= dim {
                return Err(LieError::Invalid(format!("bad index triple ({i}, {j}, {k})")));
            }
            if c.is_zero() {
                return Err(LieError::Invalid(format!("zero constant at ({i}, {j}, {k})")));
            }
            brackets[pair_index(dim, i, j)].push((k, c));
        }
        for (p, b) in brackets.iter_mut().enumerate() {
            b.sort_by_key(|(k, _)| *k);
            if b.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(LieError::Invalid(format!("duplicate entry in bracket pair {p}")));
            }
        }
        Ok(LieAlgebra::new(dim, basis_names, brackets))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn num_constants(&self) -> usize {
        self.brackets.iter().map(|b| b.len()).sum()
    }

    /// All nonzero constants `(i, j, k, c)` with `i < j`, sorted.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rat)> + '_ {
        (0..self.dim).flat_map(move |i| {
            (i + 1..self.dim)
                .flat_map(move |j| self.brackets[pair_index(self.dim, i, j)].iter().map(move |(k, c)| (i, j, *k, c)))
        })
    }

    /// `[e_i, e_j]` as a stored vector and a sign.
    #[inline]
    pub fn bracket_ref(&self, i: usize, j: usize) -> (&SVec, bool) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => (&self.brackets[pair_index(self.dim, i, j)], false),
            std::cmp::Ordering::Greater => (&self.brackets[pair_index(self.dim, j, i)], true),
            std::cmp::Ordering::Equal => (&EMPTY, false),
        }
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> SVec {
        let (v, neg) = self.bracket_ref(i, j);
        if neg {
            sparse::scale(v, &Rat::int(-1))
        } else {
            v.clone()
        }
    }

    #[inline]
    fn add_bracket_basis(&self, acc: &mut Accum, s: &Rat, i: usize, j: usize) {
        let (v, neg) = self.bracket_ref(i, j);
        if v.is_empty() {
            return;
        }
        if neg {
            acc.add_scaled(&-s, v);
        } else {
            acc.add_scaled(s, v);
        }
    }

    fn add_bracket(&self, acc: &mut Accum, s: &Rat, x: &[(usize, Rat)], y: &[(usize, Rat)]) {
        for (i, a) in x {
            let sa = s * a;
            for (j, b) in y {
                self.add_bracket_basis(acc, &(&sa * b), *i, *j);
            }
        }
    }

    pub fn bracket(&self, x: &[(usize, Rat)], y: &[(usize, Rat)]) -> SVec {
        let mut acc = Accum::new(self.dim);
        self.add_bracket(&mut acc, &Rat::one(), x, y);
        acc.take()
    }

    /// Matrix of `ad_x = [x, ·]`.
    pub fn ad(&self, x: &[(usize, Rat)]) -> Mat {
        let mut acc = Accum::new(self.dim);
        let cols: Vec<SVec> = (0..self.dim)
            .map(|j| {
                for (i, a) in x {
                    self.add_bracket_basis(&mut acc, a, *i, j);
                }
                acc.take()
            })
            .collect();
        Mat::from_cols(self.dim, &cols)
    }

    pub fn ad_basis(&self, i: usize) -> Mat {
        self.ad(&sparse::unit(i))
    }

    /// Jacobiator of three basis elements.
    pub fn jacobiator_basis(&self, acc: &mut Accum, i: usize, j: usize, k: usize) -> SVec {
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            let (v, neg) = self.bracket_ref(a, b);
            for (m, x) in v {
                let s = if neg { -x } else { x.clone() };
                self.add_bracket_basis(acc, &s, *m, c);
            }
        }
        acc.take()
    }

    /// Killing form `κ(e_i, e_j) = tr(ad_i ad_j)`, cached.
    pub fn killing(&self) -> &Mat {
        self.killing.get_or_init(|| killing_matrix(self))
    }

    pub fn signature(&self) -> Signature {
        *self.signature.get_or_init(|| symmetric_signature(self.killing()).expect("Killing form is symmetric"))
    }

    pub fn killing_value(&self, x: &[(usize, Rat)], y: &[(usize, Rat)]) -> Rat {
        sparse::dot(x, &self.killing().mul_vec(y))
    }

    /// Structure constants in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Mat) -> LieAlgebra {
        let pinv = p.inverse().expect("basis change must be invertible");
        let cols = p.cols();
        let n = self.dim;
        let mut brackets = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                brackets.push(pinv.mul_vec(&self.bracket(&cols[a], &cols[b])));
            }
        }
        LieAlgebra::new(n, (0..n).map(|i| format!("f{i}")).collect(), brackets)
    }

    /// Replaces one structure constant; for negative controls.
    pub fn with_constant(&self, i: usize, j: usize, k: usize, c: Rat) -> LieAlgebra {
        let mut out = LieAlgebra::new(self.dim, self.basis_names.clone(), self.brackets.clone());
        let b = &mut out.brackets[pair_index(self.dim, i, j)];
        b.retain(|(m, _)| *m != k);
        if !c.is_zero() {
            b.push((k, c));
            b.sort_by_key(|(m, _)| *m);
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().all(|b| b.is_empty())
    }
}

fn killing_matrix(l: &LieAlgebra) -> Mat {
    let n = l.dim;
    let ads: Vec<Mat> = (0..n).into_par_iter().map(|i| l.ad_basis(i)).collect();
    let rows: Vec<SVec> = (0..n)
        .into_par_iter()
        .map(|j| {
            // table[l * n + k] = (ad_j)_{l,k}
            let mut table = vec![Rat::zero(); n * n];
            for (r, row) in ads[j].rows().iter().enumerate() {
                for (c, x) in row {
                    table[r * n + c] = x.clone();
                }
            }
            let mut out = Vec::new();
            for (i, ad_i) in ads.iter().enumerate() {
                let mut acc = Rat::zero();
                for (k, row) in ad_i.rows().iter().enumerate() {
                    for (l, x) in row {
                        acc.add_mul(x, &table[l * n + k]);
                    }
                }
                if !acc.is_zero() {
                    out.push((i, acc));
                }
            }
            out
        })
        .collect();
    Mat::from_rows(n, rows)
}

pub fn killing_form(l: &LieAlgebra) -> Mat {
    l.killing().clone()
}

/// A subspace stored as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[SVec]) -> Subspace {
        let r = rref(&Mat::from_rows(ambient, vectors.to_vec()));
        Subspace { ambient, basis: r.rows, pivots: r.pivots }
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace { ambient, basis: (0..ambient).map(sparse::unit).collect(), pivots: (0..ambient).collect() }
    }

    /// Span of the given coordinate axes.
    pub fn coordinate(ambient: usize, axes: impl IntoIterator<Item = usize>) -> Subspace {
        let v: Vec<SVec> = axes.into_iter().map(sparse::unit).collect();
        Subspace::span(ambient, &v)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SVec] {
        &self.basis
    }

    /// Component of `v` off the pivot columns; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[(usize, Rat)]) -> SVec {
        let mut acc = Accum::new(self.ambient);
        acc.add_scaled(&Rat::one(), v);
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = sparse::get(v, p);
            if !c.is_zero() {
                acc.add_scaled(&-c, row);
            }
        }
        acc.take()
    }

    pub fn contains(&self, v: &[(usize, Rat)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coordinates in [`Self::basis`], if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[(usize, Rat)]) -> Option<SVec> {
        if !self.contains(v) {
            return None;
        }
        Some(
            self.pivots
                .iter()
                .enumerate()
                .filter_map(|(k, &p)| {
                    let c = sparse::get(v, p);
                    (!c.is_zero()).then_some((k, c))
                })
                .collect(),
        )
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Matrix whose rows map `x` to the reduction of `x` modulo this subspace.
    fn reduction_matrix(&self) -> Mat {
        let cols: Vec<SVec> = (0..self.ambient).map(|j| self.reduce(&sparse::unit(j))).collect();
        Mat::from_cols(self.ambient, &cols)
    }
}

/// `{x : [x, v] = 0 for all v in s}`.
pub fn centralizer(l: &LieAlgebra, s: &Subspace) -> Subspace {
    if s.dim() == 0 {
        return Subspace::full(l.dim());
    }
    let parts: Vec<Mat> = s.basis().par_iter().map(|v| l.ad(v)).collect();
    let k = kernel_basis(&Mat::vstack(&parts));
    Subspace::span(l.dim(), &k)
}

/// `{x : [x, s] ⊆ s}`.
pub fn normalizer(l: &LieAlgebra, s: &Subspace) -> Subspace {
    if s.dim() == 0 {
        return Subspace::full(l.dim());
    }
    let red = s.reduction_matrix();
    let parts: Vec<Mat> = s.basis().par_iter().map(|v| red.mul(&l.ad(v))).collect();
    let k = kernel_basis(&Mat::vstack(&parts));
    Subspace::span(l.dim(), &k)
}

/// Whether `s` equals its normalizer. The normalizer always contains `s`,
/// so reaching rank `n − dim s` modulo P certifies equality over Q; the
/// exact computation is the fallback.
pub fn is_self_normalizing(l: &LieAlgebra, s: &Subspace) -> bool {
    let n = l.dim();
    let k = s.dim();
    if k == 0 {
        return n == 0;
    }
    let target = n - k;
    let cols: Vec<SVec> = (0..n)
        .into_par_iter()
        .map(|j| {
            let ej = sparse::unit(j);
            let mut v = Vec::new();
            for (i, b) in s.basis().iter().enumerate() {
                v.extend(s.reduce(&l.bracket(b, &ej)).into_iter().map(|(c, x)| (i * n + c, x)));
            }
            v
        })
        .collect();
    let mut ech = ModEchelon::new(k * n);
    for c in &cols {
        if ech.insert(c).is_none() {
            return normalizer(l, s) == *s;
        }
        if ech.rank() == target {
            return true;
        }
    }
    normalizer(l, s) == *s
}

pub fn is_abelian_subspace(l: &LieAlgebra, s: &Subspace) -> bool {
    let b = s.basis();
    (0..b.len()).all(|i| (i + 1..b.len()).all(|j| l.bracket(&b[i], &b[j]).is_empty()))
}

pub fn center(l: &LieAlgebra) -> Subspace {
    centralizer(l, &Subspace::full(l.dim()))
}

/// Smallest ideal containing `x`.
///
/// Growth is tracked modulo a large prime first: vectors independent mod p
/// are independent over Q, so reaching full rank certifies the whole
/// algebra. Otherwise the span is recomputed exactly.
pub fn ideal_generated(l: &LieAlgebra, x: &[(usize, Rat)]) -> Result<Subspace, LieError> {
    if x.is_empty() {
        return Err(LieError::ZeroVector);
    }
    let n = l.dim();
    let mut modp = ModEchelon::new(n);
    let mut found: Vec<SVec> = Vec::new();
    let mut certain = modp.insert(x) == Some(true);
    if certain {
        found.push(x.to_vec());
        let mut head = 0;
        'bfs: while head < found.len() {
            let u = found[head].clone();
            head += 1;
            for i in 0..n {
                let w = l.bracket(&sparse::unit(i), &u);
                if w.is_empty() {
                    continue;
                }
                match modp.insert(&w) {
                    Some(true) => {
                        found.push(w);
                        if found.len() == n {
                            break 'bfs;
                        }
                    }
                    Some(false) => {}
                    None => {
                        certain = false;
                        break 'bfs;
                    }
                }
            }
        }
        if certain && found.len() == n {
            return Ok(Subspace::full(n));
        }
    }
    let mut ech = Echelon::new(n);
    let mut queue: Vec<SVec> = Vec::new();
    ech.insert(x.to_vec());
    queue.push(x.to_vec());
    let mut head = 0;
    while head < queue.len() && ech.rank() < n {
        let u = queue[head].clone();
        head += 1;
        for i in 0..n {
            let w = l.bracket(&sparse::unit(i), &u);
            if !w.is_empty() && ech.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    let r = ech.finish();
    Ok(Subspace { ambient: n, basis: r.rows, pivots: r.pivots })
}

/// Dimension of `{φ ∈ End(l) : φ ad_y = ad_y φ for all y}`.
///
/// A centroid element is determined by its values on a set of seeds whose
/// ideals cover `l`, so it is parametrized by those values and the
/// commuting conditions are imposed one basis element at a time.
pub fn centroid_dimension(l: &LieAlgebra) -> Result<usize, LieError> {
    let n = l.dim();
    if n > CENTROID_MAX_DIM {
        return Err(LieError::TooLarge(n));
    }
    if n == 0 {
        return Ok(0);
    }
    let ads: Vec<Mat> = (0..n).map(|i| l.ad_basis(i)).collect();
    // Spanning tree: vectors u = ad_{e_i} u', with φ(u) = M_u w_t.
    let mut basis_vecs: Vec<SVec> = Vec::new();
    let mut transfer: Vec<(usize, Mat)> = Vec::new();
    let mut ech = Echelon::new(n);
    let mut seeds = 0usize;
    for s in 0..n {
        let v = sparse::unit(s);
        if !ech.insert(v.clone()) {
            continue;
        }
        let t = seeds;
        seeds += 1;
        let start = basis_vecs.len();
        basis_vecs.push(v);
        transfer.push((t, Mat::identity(n)));
        let mut head = start;
        while head < basis_vecs.len() && ech.rank() < n {
            let u = basis_vecs[head].clone();
            let m = transfer[head].1.clone();
            head += 1;
            for (i, ad) in ads.iter().enumerate() {
                let w = l.bracket(&sparse::unit(i), &u);
                if !w.is_empty() && ech.insert(w.clone()) {
                    basis_vecs.push(w);
                    transfer.push((t, ad.mul(&m)));
                }
            }
        }
        if ech.rank() == n {
            break;
        }
    }
    let u = Mat::from_cols(n, &basis_vecs);
    let uinv = u.inverse().expect("spanning tree vectors are independent");
    let unknowns = n * seeds;
    // Φ_q = [A_1 e_q, ..., A_n e_q] U⁻¹ for each unknown q = t*n + r.
    let mut phis: Vec<Mat> = (0..unknowns)
        .into_par_iter()
        .map(|q| {
            let (t, r) = (q / n, q % n);
            let cols: Vec<SVec> = transfer.iter().map(|(tt, m)| if *tt == t { m.col(r) } else { Vec::new() }).collect();
            Mat::from_cols(n, &cols).mul(&uinv)
        })
        .collect();
    for ad in &ads {
        if phis.is_empty() {
            break;
        }
        let cols: Vec<SVec> = phis.par_iter().map(|p| p.mul(ad).sub(&ad.mul(p)).flatten()).collect();
        let k = kernel_basis(&Mat::from_cols(n * n, &cols));
        if k.len() == phis.len() {
            continue;
        }
        phis = k
            .iter()
            .map(|z| {
                let mut acc = Mat::zeros(n, n);
                for (q, c) in z {
                    acc = acc.axpy(c, &phis[*q]);
                }
                acc
            })
            .collect();
    }
    Ok(phis.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobiMode {
    Full,
    Sample { n: usize, seed: u64 },
}

const SAMPLE_CHUNK: usize = 4096;

/// Exact Jacobi identity over all or sampled basis triples.
pub fn verify_lie(l: &LieAlgebra, mode: JacobiMode) -> Report {
    let n = l.dim();
    let mut r = Report::new(format!("lie algebra dim {n}"));
    match mode {
        JacobiMode::Full => {
            let bad = (0..n).into_par_iter().find_map_first(|i| {
                let mut acc = Accum::new(n);
                for j in i + 1..n {
                    for k in j + 1..n {
                        if !l.jacobiator_basis(&mut acc, i, j, k).is_empty() {
                            return Some([i, j, k]);
                        }
                    }
                }
                None
            });
            let total = n * n.saturating_sub(1) * n.saturating_sub(2) / 6;
            r.check(
                "jacobi identity (all basis triples)",
                bad.is_none(),
                bad.map(|t| format!("basis triple {t:?}")).unwrap_or_else(|| format!("{total} triples")),
            );
        }
        JacobiMode::Sample { n: count, seed } => {
            let chunks = count.div_ceil(SAMPLE_CHUNK);
            let bad = (0..chunks).into_par_iter().find_map_first(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                let mut acc = Accum::new(n);
                let len = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
                for _ in 0..len {
                    let t = [0; 3].map(|_| rng.random_range(0..n));
                    if !l.jacobiator_basis(&mut acc, t[0], t[1], t[2]).is_empty() {
                        return Some(t);
                    }
                }
                None
            });
            r.check(
                "jacobi identity (sampled basis triples)",
                bad.is_none(),
                bad.map(|t| format!("basis triple {t:?}")).unwrap_or_else(|| format!("{count} triples, seed {seed}")),
            );
        }
    }
    r
}

/// `Der(a)` as a Lie algebra under commutator, with its action matrices.
pub fn derivation_algebra(a: &StructureAlgebra) -> (LieAlgebra, Vec<Mat>) {
    let d = derivations(a);
    (d.lie, d.action)
}

/// Derivations of a structure algebra with the data needed to express any
/// derivation in the kernel basis.
#[derive(Clone, Debug)]
pub struct Derivations {
    pub lie: LieAlgebra,
    pub action: Vec<Mat>,
    /// The kernel basis vector `q` is 1 at `free[q]` and 0 at every other entry of `free`.
    pub free: Vec<usize>,
}

impl Derivations {
    /// Coordinates of a derivation matrix in the kernel basis, if it lies in the span.
    pub fn coords(&self, d: &Mat) -> Option<SVec> {
        let flat = d.flatten();
        let coords: SVec = self
            .free
            .iter()
            .enumerate()
            .filter_map(|(q, &f)| {
                let x = sparse::get(&flat, f);
                (!x.is_zero()).then_some((q, x))
            })
            .collect();
        let n = d.nrows();
        let mut acc = Mat::zeros(n, n);
        for (q, x) in &coords {
            acc = acc.axpy(x, &self.action[*q]);
        }
        (acc == *d).then_some(coords)
    }
}

pub fn derivations(a: &StructureAlgebra) -> Derivations {
    let n = a.dim;
    // Unknown D[r][c] at column r*n + c; one equation per (i, j, k).
    let rows: Vec<SVec> = (0..n * n)
        .into_par_iter()
        .flat_map_iter(|ij| {
            let (i, j) = (ij / n, ij % n);
            let mut acc = Accum::new(n * n * n);
            for (m, x) in a.basis_product(i, j) {
                for k in 0..n {
                    acc.add_at(k * n * n + k * n + m, x);
                }
            }
            for r in 0..n {
                let neg_rj: SVec = sparse::scale(a.basis_product(r, j), &Rat::int(-1));
                for (k, x) in &neg_rj {
                    acc.add_at(k * n * n + r * n + i, x);
                }
                let neg_ir: SVec = sparse::scale(a.basis_product(i, r), &Rat::int(-1));
                for (k, x) in &neg_ir {
                    acc.add_at(k * n * n + r * n + j, x);
                }
            }
            let flat = acc.take();
            let mut per_k: Vec<SVec> = vec![Vec::new(); n];
            for (idx, x) in flat {
                per_k[idx / (n * n)].push((idx % (n * n), x));
            }
            per_k.into_iter().filter(|v| !v.is_empty())
        })
        .collect();
    let r = rref(&Mat::from_rows(n * n, rows));
    let kernel = r.kernel();
    let free: Vec<usize> = kernel.iter().map(|v| free_column(v, &r.pivots)).collect();
    let mats: Vec<Mat> = kernel.iter().map(|v| Mat::unflatten(n, n, v)).collect();
    let dim = mats.len();
    let brackets: Vec<SVec> = (0..dim)
        .into_par_iter()
        .flat_map_iter(|s| (s + 1..dim).map(move |t| (s, t)))
        .map(|(s, t)| {
            let c = mats[s].commutator(&mats[t]).flatten();
            let coords: SVec = free
                .iter()
                .enumerate()
                .filter_map(|(q, &f)| {
                    let x = sparse::get(&c, f);
                    (!x.is_zero()).then_some((q, x))
                })
                .collect();
            let mut acc = Accum::new(n * n);
            for (q, x) in &coords {
                acc.add_scaled(x, &kernel[*q]);
            }
            assert_eq!(acc.take(), c, "derivations are not closed under commutator");
            coords
        })
        .collect();
    let names = (1..=dim).map(|i| format!("D{i}")).collect();
    Derivations { lie: LieAlgebra::new(dim, names, brackets), action: mats, free }
}

fn free_column(v: &[(usize, Rat)], pivots: &[usize]) -> usize {
    v.iter().find(|(c, x)| x.is_one() && pivots.binary_search(c).is_err()).map(|(c, _)| *c).unwrap()
}

/// Compact `so₃`: `[e0,e1] = e2`, `[e1,e2] = e0`, `[e2,e0] = e1`.
pub fn so3_compact() -> LieAlgebra {
    let one = Rat::one();
    LieAlgebra::from_entries(
        3,
        vec!["e0".into(), "e1".into(), "e2".into()],
        [(0, 1, 2, one.clone()), (1, 2, 0, one.clone()), (0, 2, 1, -one)],
    )
    .unwrap()
}

pub fn abelian(n: usize) -> LieAlgebra {
    LieAlgebra::new(n, (0..n).map(|i| format!("e{i}")).collect(), vec![Vec::new(); n * n.saturating_sub(1) / 2])
}

pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> LieAlgebra {
    let off = a.dim();
    let mut entries: Vec<(usize, usize, usize, Rat)> = a.entries().map(|(i, j, k, c)| (i, j, k, c.clone())).collect();
    entries.extend(b.entries().map(|(i, j, k, c)| (i + off, j + off, k + off, c.clone())));
    let mut names = a.basis_names().to_vec();
    names.extend(b.basis_names().iter().map(|s| format!("{s}'")));
    LieAlgebra::from_entries(off + b.dim(), names, entries).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::build_composition;

    fn oct() -> StructureAlgebra {
        build_composition(&[Rat::int(-1), Rat::int(-1), Rat::int(-1)]).unwrap().alg
    }

    #[test]
    fn pair_index_is_dense() {
        let n = 7;
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(pair_index(n, i, j), k);
                k += 1;
            }
        }
    }

    #[test]
    fn so3_invariants() {
        let l = so3_compact();
        assert!(verify_lie(&l, JacobiMode::Full).passed());
        let s = l.signature();
        assert_eq!((s.n_plus, s.n_minus, s.n_zero), (0, 3, 0));
        assert_eq!(center(&l).dim(), 0);
        assert_eq!(centroid_dimension(&l), Ok(1));
        assert_eq!(ideal_generated(&l, &sparse::unit(0)).unwrap().dim(), 3);
    }

    #[test]
    fn direct_sum_and_abelian() {
        let l = direct_sum(&so3_compact(), &so3_compact());
        assert_eq!(centroid_dimension(&l), Ok(2));
        let i = ideal_generated(&l, &sparse::unit(1)).unwrap();
        assert_eq!(i, Subspace::coordinate(6, 0..3));
        let a = abelian(4);
        assert!(a.killing().is_zero());
        let x = vec![(1, Rat::int(2)), (3, Rat::one())];
        assert_eq!(ideal_generated(&a, &x).unwrap().dim(), 1);
        assert_eq!(ideal_generated(&a, &[]), Err(LieError::ZeroVector));
        assert_eq!(centralizer(&a, &Subspace::zero(4)).dim(), 4);
    }

    #[test]
    fn octonion_derivations() {
        let (g2, action) = derivation_algebra(&oct());
        assert_eq!(g2.dim(), 14);
        assert!(verify_lie(&g2, JacobiMode::Full).passed());
        assert_eq!(centroid_dimension(&g2), Ok(1));
        let s = g2.signature();
        assert_eq!((s.n_plus, s.n_minus, s.n_zero), (0, 14, 0));
        for d in &action {
            assert_eq!(oct().derivation_violation(d), None);
        }
    }

    #[test]
    fn corrupted_constant_detected() {
        let l = so3_compact().with_constant(0, 1, 0, Rat::one());
        let r = verify_lie(&l, JacobiMode::Full);
        assert!(!r.passed());
        assert!(r.checks[0].detail.contains("[0, 1, 2]"));
        assert!(!verify_lie(&l, JacobiMode::Sample { n: 1000, seed: 3 }).passed());
    }

    #[test]
    fn killing_is_ad_invariant_and_basis_independent() {
        let (g2, _) = derivation_algebra(&oct());
        let n = g2.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let [a, b, c] = [0; 3].map(|_| rng.random_range(0..n));
            let lhs = g2.killing_value(&g2.bracket_basis(a, b), &sparse::unit(c));
            let rhs = g2.killing_value(&sparse::unit(a), &g2.bracket_basis(b, c));
            assert_eq!(lhs, rhs);
        }
        let mut p = Mat::identity(n);
        for i in 0..n - 1 {
            p.set(i, i + 1, Rat::int(rng.random_range(-2..3)));
        }
        assert_eq!(g2.change_basis(&p).signature(), g2.signature());
    }

    #[test]
    fn subspace_operations() {
        let s = Subspace::span(3, &[vec![(0, Rat::one()), (1, Rat::one())]]);
        assert!(s.contains(&[(0, Rat::int(2)), (1, Rat::int(2))]));
        assert!(!s.contains(&sparse::unit(0)));
        assert_eq!(s.coordinates(&[(0, Rat::int(3)), (1, Rat::int(3))]), Some(vec![(0, Rat::int(3))]));
        assert_eq!(s.sum(&Subspace::coordinate(3, [2])).dim(), 2);
    }
}
