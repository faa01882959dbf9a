//! Cubic Jordan algebras `H₃(C, ϱ)` of ϱ-hermitian 3×3 matrices over a
//! composition algebra `C`, with product `x∘y = ½(xy + yx)`.
//!
//! Basis: `E1, E2, E3`, then for each pair `(0,1), (0,2), (1,2)` and each
//! coordinate basis element `c` the element `X_ij(c)` with `c` in slot
//! `(i,j)` and `(ϱ_i/ϱ_j) c̄` in slot `(j,i)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::composition::{build_composition, AlgebraError, CompositionAlgebra, StructureAlgebra};
use crate::exactlin::sparse::{self, SVec};
use crate::exactlin::{Mat, Rat};
use crate::report::Report;

pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

pub const FULL_CHECK_MAX_DIM: usize = 15;
pub const JORDAN_SAMPLES: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanAlgebra {
    pub alg: StructureAlgebra,
    pub coord: CompositionAlgebra,
    pub rho: [Rat; 3],
    /// Coefficients of the linear functional `Tr`.
    pub trace_vec: SVec,
    /// Gram matrix of `T(x,y) = Tr(x∘y)`.
    pub trace_form: Mat,
    pub label: Option<String>,
}

type M3 = [[SVec; 3]; 3];

fn zero_m3() -> M3 {
    Default::default()
}

pub fn hermitian_jordan(c: &CompositionAlgebra, rho: [Rat; 3]) -> Result<JordanAlgebra, AlgebraError> {
    if let Some(k) = rho.iter().position(|r| r.is_zero()) {
        return Err(AlgebraError::Invalid(format!("rho[{k}] is zero")));
    }
    let d = c.dim();
    let n = 3 + 3 * d;
    let mut names: Vec<String> = (1..=3).map(|i| format!("E{i}")).collect();
    for (i, j) in PAIRS {
        for k in 0..d {
            names.push(format!("X{}{}({})", i + 1, j + 1, c.alg.basis_names[k]));
        }
    }
    let mut j = JordanAlgebra {
        alg: StructureAlgebra { dim: n, basis_names: names, unit: Vec::new(), mult: Vec::new() },
        coord: c.clone(),
        rho,
        trace_vec: (0..3).map(|i| (i, Rat::one())).collect(),
        trace_form: Mat::zeros(n, n),
        label: None,
    };
    j.alg.unit = (0..3).map(|i| (i, Rat::one())).collect();
    let mats: Vec<M3> = (0..n).map(|b| j.to_matrix(&sparse::unit(b))).collect();
    let half = Rat::new(1, 2);
    let mut mult: Vec<SVec> = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            if b < a {
                mult.push(mult[b * n + a].clone());
                continue;
            }
            let xy = j.mat_mul(&mats[a], &mats[b]);
            let yx = j.mat_mul(&mats[b], &mats[a]);
            let mut s = zero_m3();
            for r in 0..3 {
                for t in 0..3 {
                    s[r][t] = sparse::scale(&sparse::add(&xy[r][t], &yx[r][t]), &half);
                }
            }
            mult.push(j.from_matrix(&s));
        }
    }
    j.alg.mult = mult;
    let mut tf = Vec::with_capacity(n);
    for a in 0..n {
        let row: SVec = (0..n)
            .filter_map(|b| {
                let t = j.trace(j.alg.basis_product(a, b));
                (!t.is_zero()).then_some((b, t))
            })
            .collect();
        tf.push(row);
    }
    j.trace_form = Mat::from_rows(n, tf);
    Ok(j)
}

impl JordanAlgebra {
    pub fn dim(&self) -> usize {
        self.alg.dim
    }

    pub fn coord_dim(&self) -> usize {
        self.coord.dim()
    }

    /// Index of `X_ij(e_k)` for the `p`-th pair in [`PAIRS`].
    pub fn off_index(&self, p: usize, k: usize) -> usize {
        3 + p * self.coord_dim() + k
    }

    pub fn mul(&self, x: &[(usize, Rat)], y: &[(usize, Rat)]) -> SVec {
        self.alg.mul(x, y)
    }

    pub fn unit(&self) -> &SVec {
        &self.alg.unit
    }

    pub fn trace(&self, x: &[(usize, Rat)]) -> Rat {
        sparse::dot(&self.trace_vec, x)
    }

    pub fn trace_pairing(&self, x: &[(usize, Rat)], y: &[(usize, Rat)]) -> Rat {
        sparse::dot(x, &self.trace_form.mul_vec(y))
    }

    fn to_matrix(&self, x: &[(usize, Rat)]) -> M3 {
        let d = self.coord_dim();
        let mut m = zero_m3();
        for (b, v) in x {
            if *b < 3 {
                m[*b][*b] = sparse::axpy(&m[*b][*b], v, &sparse::unit(0));
            } else {
                let p = (b - 3) / d;
                let k = (b - 3) % d;
                let (i, jj) = PAIRS[p];
                let e = sparse::unit(k);
                m[i][jj] = sparse::axpy(&m[i][jj], v, &e);
                let f = &(&self.rho[i] / &self.rho[jj]) * v;
                m[jj][i] = sparse::axpy(&m[jj][i], &f, &self.coord.conjugate(&e));
            }
        }
        m
    }

    fn from_matrix(&self, m: &M3) -> SVec {
        let mut out: SVec = Vec::new();
        for (i, row) in m.iter().enumerate() {
            let e = &row[i];
            assert!(e.iter().all(|(k, _)| *k == 0), "diagonal entry outside Q·1");
            if let Some((_, x)) = e.first() {
                out.push((i, x.clone()));
            }
        }
        for (p, (i, jj)) in PAIRS.iter().enumerate() {
            for (k, x) in &m[*i][*jj] {
                out.push((self.off_index(p, *k), x.clone()));
            }
        }
        debug_assert!(self.to_matrix(&out) == *m, "matrix is not ϱ-hermitian");
        out
    }

    fn mat_mul(&self, x: &M3, y: &M3) -> M3 {
        let mut z = zero_m3();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc: SVec = Vec::new();
                for k in 0..3 {
                    if x[i][k].is_empty() || y[k][j].is_empty() {
                        continue;
                    }
                    acc = sparse::add(&acc, &self.coord.mul(&x[i][k], &y[k][j]));
                }
                z[i][j] = acc;
            }
        }
        z
    }

    /// Matrix of `y ↦ x∘y`.
    pub fn left_mult(&self, x: &[(usize, Rat)]) -> Mat {
        self.alg.left_mult(x)
    }

    /// Traceless projection onto `J₀`.
    pub fn traceless(&self, x: &[(usize, Rat)]) -> SVec {
        traceless_projection(self, x)
    }

    /// `x*y = x∘y − ⅓T(x,y)·1`.
    pub fn star(&self, x: &[(usize, Rat)], y: &[(usize, Rat)]) -> SVec {
        let p = self.mul(x, y);
        let t = &self.trace(&p) * &Rat::new(-1, 3);
        sparse::axpy(&p, &t, &self.alg.unit)
    }

    /// Basis of `J₀`: `E1−E2`, `E2−E3`, then the off-diagonal elements.
    pub fn traceless_basis(&self) -> Vec<SVec> {
        let mut b = vec![vec![(0, Rat::one()), (1, Rat::int(-1))], vec![(1, Rat::one()), (2, Rat::int(-1))]];
        b.extend((3..self.dim()).map(sparse::unit));
        b
    }

    /// Coordinates of a traceless element in [`Self::traceless_basis`].
    pub fn traceless_coords(&self, x: &[(usize, Rat)]) -> SVec {
        debug_assert!(self.trace(x).is_zero());
        let d1 = sparse::get(x, 0);
        let d2 = sparse::get(x, 1);
        let mut out = Vec::with_capacity(x.len());
        if !d1.is_zero() {
            out.push((0, d1.clone()));
        }
        let s = &d1 + &d2;
        if !s.is_zero() {
            out.push((1, s));
        }
        out.extend(x.iter().filter(|(i, _)| *i >= 3).map(|(i, v)| (i - 1, v.clone())));
        out
    }

    /// The map `x ↦ s·φ(x)·s⁻¹` applied entrywise, for `φ` an automorphism
    /// of the coordinate algebra commuting with conjugation and `s` diagonal.
    pub fn coordinate_map(&self, phi: &Mat, s: &[Rat; 3]) -> Mat {
        let n = self.dim();
        let mut cols: Vec<SVec> = (0..3).map(sparse::unit).collect();
        for (p, (i, j)) in PAIRS.iter().enumerate() {
            let f = &s[*i] / &s[*j];
            for k in 0..self.coord_dim() {
                let img = phi.mul_vec(&sparse::unit(k));
                cols.push(img.iter().map(|(c, x)| (self.off_index(p, *c), x * &f)).collect());
            }
        }
        Mat::from_cols(n, &cols)
    }

    /// Entrywise involution `x ↦ ϱ·θ_C(x)·ϱ⁻¹` with `θ_C` the norm-sign map.
    pub fn cartan_candidate(&self) -> Mat {
        self.coordinate_map(&self.coord.norm_sign_map(), &self.rho)
    }
}

pub fn traceless_projection(j: &JordanAlgebra, x: &[(usize, Rat)]) -> SVec {
    let t = &j.trace(x) * &Rat::new(-1, 3);
    sparse::axpy(x, &t, &j.alg.unit)
}

/// `[L_x, L_y]`; panics if it fails the derivation identity.
pub fn jordan_inner_derivation(j: &JordanAlgebra, x: &[(usize, Rat)], y: &[(usize, Rat)]) -> Mat {
    let d = j.left_mult(x).commutator(&j.left_mult(y));
    if let Some((a, b)) = j.alg.derivation_violation(&d) {
        panic!("[L_x, L_y] fails the derivation identity on basis pair ({a}, {b})");
    }
    d
}

fn jordan_defect(alg: &StructureAlgebra, a: usize, b: usize, c: usize, d: usize) -> SVec {
    let m = |x: &SVec, y: &SVec| alg.mul(x, y);
    let (ea, eb, ec, ed) = (sparse::unit(a), sparse::unit(b), sparse::unit(c), sparse::unit(d));
    let ab = alg.basis_product(a, b).clone();
    let bc = alg.basis_product(b, c).clone();
    let ca = alg.basis_product(c, a).clone();
    let lhs = sparse::add(&sparse::add(&m(&m(&ab, &ed), &ec), &m(&m(&bc, &ed), &ea)), &m(&m(&ca, &ed), &eb));
    let dc = alg.basis_product(d, c).clone();
    let da = alg.basis_product(d, a).clone();
    let db = alg.basis_product(d, b).clone();
    let rhs = sparse::add(&sparse::add(&m(&ab, &dc), &m(&bc, &da)), &m(&ca, &db));
    sparse::sub(&lhs, &rhs)
}

/// Commutativity plus the linearized Jordan identity
/// `((ab)d)c + ((bc)d)a + ((ca)d)b = (ab)(dc) + (bc)(da) + (ca)(db)`.
pub fn verify_jordan(j: &JordanAlgebra, seed: u64) -> Report {
    verify_jordan_algebra(&j.alg, seed)
}

pub fn verify_jordan_algebra(alg: &StructureAlgebra, seed: u64) -> Report {
    let n = alg.dim;
    let mut r = Report::new(format!("jordan algebra dim {n}"));
    let mut comm = None;
    'c: for a in 0..n {
        for b in a + 1..n {
            if alg.basis_product(a, b) != alg.basis_product(b, a) {
                comm = Some((a, b));
                break 'c;
            }
        }
    }
    r.check("commutativity", comm.is_none(), comm.map(|(a, b)| format!("basis pair ({a}, {b})")).unwrap_or_default());
    let unit = alg.unit_violation();
    r.check("unit laws", unit.is_none(), unit.map(|i| format!("basis {i}")).unwrap_or_default());

    let mut bad = None;
    let mut count = 0usize;
    if n <= FULL_CHECK_MAX_DIM {
        'f: for a in 0..n {
            for b in a..n {
                for c in b..n {
                    for d in 0..n {
                        count += 1;
                        if !jordan_defect(alg, a, b, c, d).is_empty() {
                            bad = Some([a, b, c, d]);
                            break 'f;
                        }
                    }
                }
            }
        }
        r.check(
            "jordan identity (all basis quadruples)",
            bad.is_none(),
            bad.map(|q| format!("basis quadruple {q:?}")).unwrap_or_else(|| format!("{count} quadruples")),
        );
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..JORDAN_SAMPLES {
            let q = [0; 4].map(|_| rng.random_range(0..n));
            count += 1;
            if !jordan_defect(alg, q[0], q[1], q[2], q[3]).is_empty() {
                bad = Some(q);
                break;
            }
        }
        r.check(
            "jordan identity (sampled basis quadruples)",
            bad.is_none(),
            bad.map(|q| format!("basis quadruple {q:?}")).unwrap_or_else(|| format!("{count} quadruples, seed {seed}")),
        );
    }
    r
}

/// A named Jordan algebra: coordinate-algebra parameters and ϱ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanCatalogEntry {
    pub label: String,
    pub coord_gammas: Vec<Rat>,
    pub rho: [Rat; 3],
}

pub fn definite_gammas(d: usize) -> Vec<Rat> {
    vec![Rat::int(-1); d.trailing_zeros() as usize]
}

pub fn split_gammas(d: usize) -> Vec<Rat> {
    match d {
        1 => vec![],
        2 => vec![Rat::int(1)],
        4 => vec![Rat::int(-1), Rat::int(1)],
        8 => vec![Rat::int(-1), Rat::int(-1), Rat::int(1)],
        _ => panic!("composition algebras have dimension 1, 2, 4 or 8"),
    }
}

fn rho_plain() -> [Rat; 3] {
    [Rat::one(), Rat::one(), Rat::one()]
}

fn rho_indefinite() -> [Rat; 3] {
    [Rat::one(), Rat::int(-1), Rat::one()]
}

/// Real Jordan algebras in table-column order, followed by `JII1`.
///
/// `Js1` has no indefinite coordinate algebra of dimension 1 and is read as
/// `H₃(Q, (1,−1,1))`, which therefore coincides with `JII1`.
pub fn jordan_catalog() -> Vec<JordanCatalogEntry> {
    let mut out = Vec::new();
    let e = |label: String, coord_gammas: Vec<Rat>, rho: [Rat; 3]| JordanCatalogEntry { label, coord_gammas, rho };
    for d in [1usize, 2, 4, 8] {
        out.push(e(format!("Jc{d}"), definite_gammas(d), rho_plain()));
        if d > 1 {
            out.push(e(format!("JII{d}"), definite_gammas(d), rho_indefinite()));
            out.push(e(format!("Js{d}"), split_gammas(d), rho_plain()));
        } else {
            out.push(e("Js1".into(), vec![], rho_indefinite()));
        }
    }
    out.push(e("JII1".into(), vec![], rho_indefinite()));
    out
}

pub fn jordan_entry(label: &str) -> Option<JordanCatalogEntry> {
    jordan_catalog().into_iter().find(|e| e.label == label)
}

impl JordanCatalogEntry {
    pub fn build(&self) -> Result<JordanAlgebra, AlgebraError> {
        let c = build_composition(&self.coord_gammas)?;
        let mut j = hermitian_jordan(&c, self.rho.clone())?;
        j.label = Some(self.label.clone());
        Ok(j)
    }
}

pub fn build_catalog_jordan(label: &str) -> Result<JordanAlgebra, AlgebraError> {
    jordan_entry(label).ok_or_else(|| AlgebraError::Invalid(format!("unknown Jordan algebra label {label:?}")))?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jc(label: &str) -> JordanAlgebra {
        build_catalog_jordan(label).unwrap()
    }

    #[test]
    fn dimensions() {
        for (l, d) in [("Jc1", 6), ("Js2", 9), ("JII4", 15), ("Js8", 27), ("Jc8", 27)] {
            assert_eq!(jc(l).dim(), d, "{l}");
        }
    }

    #[test]
    fn unit_and_trace() {
        let j = jc("JII2");
        assert_eq!(j.alg.unit_violation(), None);
        assert_eq!(j.trace(j.unit()), Rat::int(3));
        assert!(j.trace_form.is_symmetric());
        assert!(traceless_projection(&j, j.unit()).is_empty());
        let x = sparse::unit(5);
        assert_eq!(traceless_projection(&j, &x), x);
        let e1 = traceless_projection(&j, &sparse::unit(0));
        let third = Rat::new(1, 3);
        assert_eq!(e1, vec![(0, Rat::new(2, 3)), (1, -&third), (2, -third)]);
    }

    #[test]
    fn small_algebras_verify_fully() {
        for l in ["Jc1", "Js1", "Jc2", "JII2", "Js2", "Jc4", "JII4", "Js4"] {
            let r = verify_jordan(&jc(l), 1);
            assert!(r.passed(), "{l}: {r}");
        }
    }

    #[test]
    fn trace_form_is_associative() {
        let j = jc("JII4");
        let n = j.dim();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = j.trace_pairing(j.alg.basis_product(a, b), &sparse::unit(c));
                    let rhs = j.trace_pairing(&sparse::unit(a), j.alg.basis_product(b, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn corrupted_constant_detected() {
        let mut j = jc("Jc1");
        let n = j.dim();
        j.alg.mult[3 * n + 4] = sparse::scale(&j.alg.mult[3 * n + 4], &Rat::int(2));
        assert!(!verify_jordan(&j, 1).passed());
    }

    #[test]
    fn inner_derivations() {
        let j = jc("Jc1");
        let u = j.unit().clone();
        let x = sparse::unit(3);
        assert!(jordan_inner_derivation(&j, &x, &x).is_zero());
        assert!(jordan_inner_derivation(&j, &u, &x).is_zero());
        assert!(!jordan_inner_derivation(&j, &sparse::unit(0), &x).is_zero());
    }

    #[test]
    fn traceless_coordinates_roundtrip() {
        let j = jc("Js2");
        let basis = j.traceless_basis();
        for (k, b) in basis.iter().enumerate() {
            assert_eq!(j.traceless_coords(b), sparse::unit(k));
        }
    }

    #[test]
    fn coordinate_maps_are_automorphisms() {
        for l in ["JII2", "Js4", "Js2", "JII4"] {
            let j = jc(l);
            let t = j.cartan_candidate();
            assert_eq!(j.alg.automorphism_violation(&t), None, "{l}");
            assert_eq!(t.mul(&t), Mat::identity(j.dim()));
        }
        let j = jc("Jc2");
        let tau = j.coordinate_map(&j.coord.conj, &j.rho);
        assert_eq!(j.alg.automorphism_violation(&tau), None);
    }
}
