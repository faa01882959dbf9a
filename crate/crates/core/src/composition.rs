//! Structure-constant algebras and composition algebras by Cayley–Dickson
//! doubling.
//!
//! Doubling convention: on pairs `(a, b)` over `C`,
//! `(a,b)(c,d) = (ac + γ d̄b, da + bc̄)` and `(a,b)‾ = (ā, −b)`.
//! The basis of the double is `(e_i, 0)` followed by `(0, e_i)`.

use crate::exactlin::sparse::{self, Accum, SVec};
use crate::exactlin::{Mat, Rat};
use crate::report::Report;

/// A finite-dimensional algebra over Q given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureAlgebra {
    pub dim: usize,
    pub basis_names: Vec<String>,
    pub unit: SVec,
    /// `mult[i * dim + j]` is the product `e_i e_j`.
    pub mult: Vec<SVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("at most three doubling parameters are allowed, got {0}")]
    TooManyGammas(usize),
    #[error("doubling parameter {0} is zero")]
    ZeroGamma(usize),
    #[error("{0}")]
    Invalid(String),
}

impl StructureAlgebra {
    pub fn basis_product(&self, i: usize, j: usize) -> &SVec {
        &self.mult[i * self.dim + j]
    }

    pub fn mul(&self, x: &[(usize, Rat)], y: &[(usize, Rat)]) -> SVec {
        let mut acc = Accum::new(self.dim);
        for (i, a) in x {
            for (j, b) in y {
                acc.add_scaled(&(a * b), self.basis_product(*i, *j));
            }
        }
        acc.take()
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_mult(&self, x: &[(usize, Rat)]) -> Mat {
        let cols: Vec<SVec> = (0..self.dim).map(|j| self.mul(x, &sparse::unit(j))).collect();
        Mat::from_cols(self.dim, &cols)
    }

    /// Matrix of `y ↦ y x`.
    pub fn right_mult(&self, x: &[(usize, Rat)]) -> Mat {
        let cols: Vec<SVec> = (0..self.dim).map(|j| self.mul(&sparse::unit(j), x)).collect();
        Mat::from_cols(self.dim, &cols)
    }

    /// `(xy)z − x(yz)`.
    pub fn associator(&self, x: &[(usize, Rat)], y: &[(usize, Rat)], z: &[(usize, Rat)]) -> SVec {
        sparse::sub(&self.mul(&self.mul(x, y), z), &self.mul(x, &self.mul(y, z)))
    }

    /// First basis pair `(i, j)` where `d(e_i e_j) ≠ d(e_i) e_j + e_i d(e_j)`.
    pub fn derivation_violation(&self, d: &Mat) -> Option<(usize, usize)> {
        let images: Vec<SVec> = d.cols();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = d.mul_vec(self.basis_product(i, j));
                let rhs = sparse::add(&self.mul(&images[i], &sparse::unit(j)), &self.mul(&sparse::unit(i), &images[j]));
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// First basis pair `(i, j)` where `φ(e_i e_j) ≠ φ(e_i) φ(e_j)`.
    pub fn automorphism_violation(&self, phi: &Mat) -> Option<(usize, usize)> {
        let images: Vec<SVec> = phi.cols();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if phi.mul_vec(self.basis_product(i, j)) != self.mul(&images[i], &images[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn unit_violation(&self) -> Option<usize> {
        (0..self.dim).find(|&i| {
            let e = sparse::unit(i);
            self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e
        })
    }
}

/// A composition algebra of dimension 1, 2, 4 or 8 over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionAlgebra {
    pub alg: StructureAlgebra,
    pub gammas: Vec<Rat>,
    pub conj: Mat,
    /// Gram matrix of `⟨a,b⟩ = t(a b̄)`, diagonal with entries `2 N(e_i)`.
    pub norm: Mat,
}

/// Monomial Cayley–Dickson table: `e_i e_j = c · e_k`.
struct Monomial {
    n: usize,
    table: Vec<(usize, Rat)>,
    norms: Vec<Rat>,
}

impl Monomial {
    fn field() -> Self {
        Monomial { n: 1, table: vec![(0, Rat::one())], norms: vec![Rat::one()] }
    }

    fn get(&self, i: usize, j: usize) -> &(usize, Rat) {
        &self.table[i * self.n + j]
    }

    fn conj_sign(i: usize) -> Rat {
        if i == 0 {
            Rat::one()
        } else {
            Rat::int(-1)
        }
    }

    fn double(&self, gamma: &Rat) -> Self {
        let n = self.n;
        let m = 2 * n;
        let mut table = vec![(0, Rat::zero()); m * m];
        for i in 0..n {
            for j in 0..n {
                // (e_i,0)(e_j,0) = (e_i e_j, 0)
                let (k, c) = self.get(i, j).clone();
                table[i * m + j] = (k, c);
                // (e_i,0)(0,e_j) = (0, e_j e_i)
                let (k, c) = self.get(j, i).clone();
                table[i * m + n + j] = (n + k, c);
                // (0,e_i)(e_j,0) = (0, e_i ē_j)
                let (k, c) = self.get(i, j).clone();
                table[(n + i) * m + j] = (n + k, c * Self::conj_sign(j));
                // (0,e_i)(0,e_j) = (γ ē_j e_i, 0)
                let (k, c) = self.get(j, i).clone();
                table[(n + i) * m + n + j] = (k, c * Self::conj_sign(j) * gamma);
            }
        }
        let mut norms = self.norms.clone();
        norms.extend(self.norms.iter().map(|x| -(x * gamma)));
        Monomial { n: m, table, norms }
    }
}

pub fn build_composition(gammas: &[Rat]) -> Result<CompositionAlgebra, AlgebraError> {
    if gammas.len() > 3 {
        return Err(AlgebraError::TooManyGammas(gammas.len()));
    }
    if let Some(k) = gammas.iter().position(|g| g.is_zero()) {
        return Err(AlgebraError::ZeroGamma(k));
    }
    let mut m = Monomial::field();
    for g in gammas {
        m = m.double(g);
    }
    let n = m.n;
    let mult = m.table.into_iter().map(|(k, c)| vec![(k, c)]).collect();
    let basis_names = (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("e{i}") }).collect();
    let alg = StructureAlgebra { dim: n, basis_names, unit: sparse::unit(0), mult };
    let conj = Mat::diag(&(0..n).map(Monomial::conj_sign).collect::<Vec<_>>());
    let norm = Mat::diag(&m.norms.iter().map(|x| x * &Rat::int(2)).collect::<Vec<_>>());
    Ok(CompositionAlgebra { alg, gammas: gammas.to_vec(), conj, norm })
}

impl CompositionAlgebra {
    pub fn dim(&self) -> usize {
        self.alg.dim
    }

    pub fn mul(&self, x: &[(usize, Rat)], y: &[(usize, Rat)]) -> SVec {
        self.alg.mul(x, y)
    }

    pub fn conjugate(&self, x: &[(usize, Rat)]) -> SVec {
        self.conj.mul_vec(x)
    }

    /// Scalar `t(x)` with `x + x̄ = t(x)·1`.
    pub fn trace(&self, x: &[(usize, Rat)]) -> Rat {
        let s = sparse::add(x, &self.conjugate(x));
        sparse::get(&s, 0)
    }

    /// `⟨x, y⟩ = t(x ȳ)`.
    pub fn inner(&self, x: &[(usize, Rat)], y: &[(usize, Rat)]) -> Rat {
        sparse::dot(x, &self.norm.mul_vec(y))
    }

    /// `N(e_i)`.
    pub fn basis_norm(&self, i: usize) -> Rat {
        &self.norm.get(i, i) * &Rat::new(1, 2)
    }

    /// Definite means every doubling parameter is −1.
    pub fn is_definite(&self) -> bool {
        self.gammas.iter().all(|g| *g == Rat::int(-1))
    }

    /// Basis-diagonal involution `e_i ↦ sign(N(e_i)) e_i`; an automorphism
    /// for the doubling parameters used in the catalog.
    pub fn norm_sign_map(&self) -> Mat {
        Mat::diag(&(0..self.dim()).map(|i| Rat::int(self.basis_norm(i).signum() as i64)).collect::<Vec<_>>())
    }
}

pub fn trace_zero_basis(c: &CompositionAlgebra) -> Vec<SVec> {
    (1..c.dim()).map(sparse::unit).collect()
}

/// `D_{a,b} = [L_a,L_b] + [L_a,R_b] + [R_a,R_b]`.
///
/// Panics if the result is not a derivation, which would mean the
/// multiplication table is broken.
pub fn inner_derivation(c: &CompositionAlgebra, a: &[(usize, Rat)], b: &[(usize, Rat)]) -> Mat {
    let d = inner_derivation_unchecked(&c.alg, a, b);
    if let Some((i, j)) = c.alg.derivation_violation(&d) {
        panic!("D_(a,b) fails the derivation identity on basis pair ({i}, {j})");
    }
    d
}

pub(crate) fn inner_derivation_unchecked(alg: &StructureAlgebra, a: &[(usize, Rat)], b: &[(usize, Rat)]) -> Mat {
    let (la, lb) = (alg.left_mult(a), alg.left_mult(b));
    let (ra, rb) = (alg.right_mult(a), alg.right_mult(b));
    la.commutator(&lb).add(&la.commutator(&rb)).add(&ra.commutator(&rb))
}

pub fn verify_composition(c: &CompositionAlgebra) -> Report {
    let n = c.dim();
    let alg = &c.alg;
    let e = sparse::unit;
    let mut r = Report::new(format!("composition algebra dim {n}"));

    let dim_ok = matches!(n, 1 | 2 | 4 | 8);
    r.check("dimension in {1,2,4,8}", dim_ok, n.to_string());

    let unit = alg.unit_violation();
    r.check("unit laws", unit.is_none(), unit.map(|i| format!("basis {i}")).unwrap_or_default());

    let conj_sq = c.conj.mul(&c.conj) == Mat::identity(n) && c.conjugate(&alg.unit) == alg.unit;
    r.check("conjugation is an involution fixing 1", conj_sq, "");

    let mut anti = None;
    'anti: for i in 0..n {
        for j in 0..n {
            let lhs = c.conjugate(alg.basis_product(i, j));
            let rhs = c.mul(&c.conjugate(&e(j)), &c.conjugate(&e(i)));
            if lhs != rhs {
                anti = Some((i, j));
                break 'anti;
            }
        }
    }
    r.check("conjugation is an anti-automorphism", anti.is_none(), pair_detail(anti));

    let mut trace_bad = None;
    'tr: for i in 0..n {
        let s = sparse::add(&e(i), &c.conjugate(&e(i)));
        if s.iter().any(|(k, _)| *k != 0) {
            trace_bad = Some((i, i));
            break 'tr;
        }
        for j in 0..n {
            if c.trace(alg.basis_product(i, j)) != c.trace(alg.basis_product(j, i)) {
                trace_bad = Some((i, j));
                break 'tr;
            }
        }
    }
    r.check("trace is scalar and t(ab) = t(ba)", trace_bad.is_none(), pair_detail(trace_bad));

    // Linearized multiplicativity: ⟨ac,bd⟩ + ⟨ad,bc⟩ = ⟨a,b⟩⟨c,d⟩.
    let mut mult_bad = None;
    'nm: for a in 0..n {
        for b in 0..n {
            let ab = c.inner(&e(a), &e(b));
            for cc in 0..n {
                for d in 0..n {
                    let lhs = c.inner(alg.basis_product(a, cc), alg.basis_product(b, d))
                        + c.inner(alg.basis_product(a, d), alg.basis_product(b, cc));
                    if lhs != &ab * &c.inner(&e(cc), &e(d)) {
                        mult_bad = Some([a, b, cc, d]);
                        break 'nm;
                    }
                }
            }
        }
    }
    r.check(
        "norm multiplicativity",
        mult_bad.is_none(),
        mult_bad.map(|q| format!("basis quadruple {q:?}")).unwrap_or_default(),
    );

    // Linearized alternativity: (x,z,y) + (z,x,y) = 0 and (y,x,z) + (y,z,x) = 0.
    let mut alt_bad = None;
    let mut assoc_bad = None;
    'alt: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (ex, ey, ez) = (e(x), e(y), e(z));
                let left = sparse::add(&alg.associator(&ex, &ez, &ey), &alg.associator(&ez, &ex, &ey));
                let right = sparse::add(&alg.associator(&ey, &ex, &ez), &alg.associator(&ey, &ez, &ex));
                if !left.is_empty() || !right.is_empty() {
                    alt_bad = Some([x, y, z]);
                    break 'alt;
                }
                if assoc_bad.is_none() && !alg.associator(&ex, &ey, &ez).is_empty() {
                    assoc_bad = Some([x, y, z]);
                }
            }
        }
    }
    r.check("alternativity", alt_bad.is_none(), alt_bad.map(|t| format!("basis triple {t:?}")).unwrap_or_default());
    r.info("associativity", assoc_bad.is_none(), assoc_bad.map(|t| format!("basis triple {t:?}")).unwrap_or_default());
    r
}

fn pair_detail(p: Option<(usize, usize)>) -> String {
    p.map(|(i, j)| format!("basis pair ({i}, {j})")).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::symmetric_signature;

    fn g(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| Rat::int(x)).collect()
    }

    #[test]
    fn field_and_doubles() {
        let q = build_composition(&[]).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.conj, Mat::identity(1));
        let k = build_composition(&g(&[1])).unwrap();
        assert_eq!(k.mul(&sparse::unit(1), &sparse::unit(1)), sparse::unit(0));
        assert_eq!(trace_zero_basis(&k), vec![sparse::unit(1)]);
        assert!(trace_zero_basis(&q).is_empty());
    }

    #[test]
    fn octonion_norm_signatures() {
        let oc = build_composition(&g(&[-1, -1, -1])).unwrap();
        let s = symmetric_signature(&oc.norm).unwrap();
        assert_eq!((s.n_plus, s.n_minus), (8, 0));
        let os = build_composition(&g(&[-1, -1, 1])).unwrap();
        let s = symmetric_signature(&os.norm).unwrap();
        assert_eq!((s.n_plus, s.n_minus), (4, 4));
        assert_eq!(trace_zero_basis(&oc).len(), 7);
    }

    #[test]
    fn all_catalog_parameters_verify() {
        for gs in [&[][..], &[-1], &[1], &[-1, -1], &[-1, 1], &[-1, -1, -1], &[-1, -1, 1], &[2, -3, 5]] {
            let c = build_composition(&g(gs)).unwrap();
            let r = verify_composition(&c);
            assert!(r.passed(), "{gs:?}: {r}");
        }
        let h = build_composition(&g(&[-1, -1])).unwrap();
        assert!(verify_composition(&h).get("associativity").unwrap().passed);
        let o = build_composition(&g(&[-1, -1, -1])).unwrap();
        assert!(!verify_composition(&o).get("associativity").unwrap().passed);
    }

    #[test]
    fn corrupted_sign_breaks_multiplicativity() {
        let mut o = build_composition(&g(&[-1, -1, -1])).unwrap();
        let k = 3 * 8 + 5;
        o.alg.mult[k] = sparse::scale(&o.alg.mult[k], &Rat::int(-1));
        let r = verify_composition(&o);
        assert!(!r.get("norm multiplicativity").unwrap().passed);
    }

    #[test]
    fn zero_gamma_rejected() {
        assert_eq!(build_composition(&g(&[-1, 0])), Err(AlgebraError::ZeroGamma(1)));
    }

    #[test]
    fn inner_derivations() {
        let o = build_composition(&g(&[-1, -1, -1])).unwrap();
        let e = sparse::unit;
        assert!(inner_derivation(&o, &e(2), &e(2)).is_zero());
        assert!(inner_derivation(&o, &e(0), &e(3)).is_zero());
        let d = inner_derivation(&o, &e(1), &e(2));
        assert!(!d.is_zero());
        assert!(d.mul_vec(&e(0)).is_empty());
        // Skew for the norm form.
        let skew = d.transpose().mul(&o.norm).add(&o.norm.mul(&d));
        assert!(skew.is_zero());
    }

    #[test]
    fn norm_sign_map_is_automorphism() {
        let os = build_composition(&g(&[-1, -1, 1])).unwrap();
        let t = os.norm_sign_map();
        assert_eq!(os.alg.automorphism_violation(&t), None);
        assert_ne!(t, Mat::identity(8));
    }
}
