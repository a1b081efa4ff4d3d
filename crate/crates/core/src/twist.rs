//! Twisting maps `τ: B⊗A → A⊗B` generated by an Ore relation and the
//! twisted tensor product algebras they induce.
//!
//! Basis conventions: `A⊗B` is A-major, `index(a_k ⊗ b_i) = k·dim(B) + i`;
//! the domain `B⊗A` is B-major, `index(b_r ⊗ a_k) = r·dim(A) + k`.

use std::sync::Arc;

use crate::algebra::{check_associativity, truncated_poly_algebra_in, Algebra, SparseVec};
use crate::error::{CoreError, Result};
use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::operator::LinearOperator;
use crate::report::{Report, Witness};
use crate::shuffle::{verify_truncation_conditions, ShuffleTable};

/// Sparse columns of a square matrix.
pub(crate) fn sparse_columns(m: &Matrix) -> Vec<SparseVec> {
    (0..m.cols())
        .map(|c| {
            (0..m.rows())
                .filter_map(|r| {
                    let v = m.get(r, c);
                    (!v.is_zero()).then(|| (r, v.clone()))
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct TwistingMap {
    a: Arc<Algebra>,
    b: Arc<Algebra>,
    matrix: Matrix,
    inverse: Matrix,
    columns: Vec<SparseVec>,
}

impl TwistingMap {
    /// Wraps an arbitrary bijective matrix. The axioms are not checked
    /// here; see [`verify_twisting_axioms`].
    pub fn from_matrix(a: Arc<Algebra>, b: Arc<Algebra>, matrix: Matrix) -> Result<Self> {
        let n = a.dim() * b.dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(CoreError::Domain(format!(
                "twisting matrix must be {n}x{n}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if a.field() != b.field() || matrix.field() != a.field() {
            return Err(CoreError::Domain("twisting data over different fields".into()));
        }
        let inverse = matrix
            .inverse()
            .ok_or_else(|| CoreError::TwistAxioms("twisting matrix is singular".into()))?;
        let columns = sparse_columns(&matrix);
        Ok(Self {
            a,
            b,
            matrix,
            inverse,
            columns,
        })
    }

    /// Copy with one matrix entry replaced.
    pub fn with_entry(&self, row: usize, col: usize, value: Scalar) -> Result<Self> {
        let mut m = self.matrix.clone();
        m.set(row, col, value);
        Self::from_matrix(self.a.clone(), self.b.clone(), m)
    }

    pub fn a(&self) -> &Arc<Algebra> {
        &self.a
    }

    pub fn b(&self) -> &Arc<Algebra> {
        &self.b
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inverse
    }

    /// Index of `a_k ⊗ b_i` in `A⊗B`.
    pub fn ab_index(&self, k: usize, i: usize) -> usize {
        k * self.b.dim() + i
    }

    /// Index of `b_r ⊗ a_k` in `B⊗A`.
    pub fn ba_index(&self, r: usize, k: usize) -> usize {
        r * self.a.dim() + k
    }

    /// `τ(b_r ⊗ a_k)` as sparse `(A-index, B-index, coefficient)` terms.
    pub fn image(&self, r: usize, k: usize) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        let db = self.b.dim();
        self.columns[self.ba_index(r, k)]
            .iter()
            .map(move |(t, c)| (t / db, t % db, c))
    }

    /// `τ(b_r ⊗ a_k)` as a dense A-major vector.
    pub fn apply_basis(&self, r: usize, k: usize) -> Vec<Scalar> {
        self.matrix.column(self.ba_index(r, k))
    }

    /// Reads `σ` and `δ` back from `τ(y ⊗ a) = σ(a)⊗y + δ(a)⊗1`, where `y`
    /// is basis element 1 of B.
    pub fn sigma_delta(&self) -> (LinearOperator, LinearOperator) {
        let (da, db) = (self.a.dim(), self.b.dim());
        let field = self.a.field();
        let mut s = Matrix::zeros(field, da, da);
        let mut d = Matrix::zeros(field, da, da);
        let y = 1.min(db - 1);
        for k in 0..da {
            for (m, i, c) in self.image(y, k) {
                if i == y {
                    s.set(m, k, c.clone());
                } else if i == self.b.unit_index() {
                    d.set(m, k, c.clone());
                }
            }
        }
        (LinearOperator::new(s), LinearOperator::new(d))
    }
}

/// `τ` from `(σ, δ)` with `B = k[y]/(y^n)`, gated on the truncation conditions.
pub fn build_tau(a: Arc<Algebra>, sigma: &LinearOperator, delta: &LinearOperator, n: usize) -> Result<TwistingMap> {
    let b = Arc::new(truncated_poly_algebra_in(a.field(), n, "y")?);
    build_tau_over(a, b, sigma, delta)
}

/// Same as [`build_tau`] with a caller-supplied `B`, which must be a
/// truncated polynomial algebra.
pub fn build_tau_over(
    a: Arc<Algebra>,
    b: Arc<Algebra>,
    sigma: &LinearOperator,
    delta: &LinearOperator,
) -> Result<TwistingMap> {
    let n = b
        .truncation()
        .ok_or_else(|| CoreError::Domain("B must be a truncated polynomial algebra".into()))?;
    if sigma.domain_dim() != a.dim() || delta.domain_dim() != a.dim() {
        return Err(CoreError::Domain("operators do not act on A".into()));
    }
    let gate = verify_truncation_conditions(sigma, delta, n)?;
    if !gate.passed {
        let Some(Witness::ShuffleIndex { i, j, .. }) = gate.witness else {
            return Err(CoreError::InvariantBreach("gate failed without a witness".into()));
        };
        return Err(CoreError::RejectedTwist { i, j });
    }
    let matrix = ore_tau_matrix(&a, n, sigma.matrix(), delta.matrix());
    TwistingMap::from_matrix(a, b, matrix).map_err(|e| match e {
        CoreError::TwistAxioms(m) => CoreError::InvariantBreach(m),
        other => other,
    })
}

fn ore_tau_matrix(a: &Algebra, n: usize, f: &Matrix, g: &Matrix) -> Matrix {
    shuffle_expansion(a.dim(), n, f, g)
}

/// `y^r ⊗ v ↦ Σ_{i+j=r} s_(i,j)(f, g)(v) ⊗ y^i` for operators on a space
/// of dimension `dim`; source index `r·dim + k`, target index `m·n + i`.
pub(crate) fn shuffle_expansion(dim: usize, n: usize, f: &Matrix, g: &Matrix) -> Matrix {
    let table = ShuffleTable::from_matrices(f, g, n.saturating_sub(1));
    let field = f.field();
    let total = dim * n;
    let mut m = Matrix::zeros(field, total, total);
    for r in 0..n {
        for i in 0..=r {
            let s = table.get(i, r - i);
            for k in 0..dim {
                for row in 0..dim {
                    let c = s.get(row, k);
                    if !c.is_zero() {
                        m.set(row * n + i, r * dim + k, c.clone());
                    }
                }
            }
        }
    }
    m
}

/// Expands `Σ c · (a_m ⊗ b_u)` products into a dense A-major accumulator.
fn accumulate(out: &mut [Scalar], idx: usize, c: &Scalar) {
    if !c.is_zero() {
        out[idx] += c;
    }
}

/// Unit conditions and the hexagon relation on all basis 4-tuples.
pub fn verify_twisting_axioms(tau: &TwistingMap) -> Report {
    let (a, b) = (tau.a(), tau.b());
    let (da, db) = (a.dim(), b.dim());
    let field = a.field();
    let mut children = Vec::new();

    let mut unit_fail = None;
    'outer: for k in 0..da {
        let expected = a.basis_vector(k);
        let got = tau.apply_basis(b.unit_index(), k);
        for (t, c) in got.iter().enumerate() {
            let want = if t % db == b.unit_index() { &expected[t / db] } else { &field.zero() };
            if c != want {
                unit_fail = Some(format!("tau(1 ⊗ {}) != {} ⊗ 1", a.labels()[k], a.labels()[k]));
                break 'outer;
            }
        }
    }
    if unit_fail.is_none() {
        for r in 0..db {
            let mut want = vec![field.zero(); da * db];
            want[tau.ab_index(a.unit_index(), r)] = field.one();
            if tau.apply_basis(r, a.unit_index()) != want {
                unit_fail = Some(format!("tau({} ⊗ 1) != 1 ⊗ {}", b.labels()[r], b.labels()[r]));
                break;
            }
        }
    }
    children.push(match unit_fail {
        None => Report::pass("unit-conditions", format!("{} basis elements", da + db)),
        Some(msg) => Report::fail("unit-conditions", msg, None),
    });

    children.push(check_hexagon(tau));
    Report::all("twisting-axioms", children)
}

fn check_hexagon(tau: &TwistingMap) -> Report {
    let (a, b) = (tau.a(), tau.b());
    let (da, db) = (a.dim(), b.dim());
    let field = a.field();
    let total = da * db;
    for b1 in 0..db {
        for b2 in 0..db {
            let bb = b.product(b1, b2);
            for a1 in 0..da {
                for a2 in 0..da {
                    // left side: τ(b1 b2 ⊗ a1 a2)
                    let mut lhs = vec![field.zero(); total];
                    let aa = a.product(a1, a2);
                    for (r, c) in bb {
                        for (k, d) in aa {
                            let cd = c * d;
                            for (m, u, e) in tau.image(*r, *k) {
                                accumulate(&mut lhs, tau.ab_index(m, u), &(&cd * e));
                            }
                        }
                    }
                    // right side, read from the innermost map outwards
                    let mut rhs = vec![field.zero(); total];
                    for (am, bu, c1) in tau.image(b2, a1) {
                        for (an, bv, c2) in tau.image(b1, am) {
                            for (ap, bw, c3) in tau.image(bu, a2) {
                                let c123 = &(c1 * c2) * c3;
                                for (aq, bz, c4) in tau.image(bv, ap) {
                                    let coeff = &c123 * c4;
                                    for (ak, ca) in a.product(an, aq) {
                                        for (bi, cb) in b.product(bz, bw) {
                                            let v = &(&coeff * ca) * cb;
                                            accumulate(&mut rhs, tau.ab_index(*ak, *bi), &v);
                                        }
                                    }
                                }
                            }
                        }
                    }
                    if lhs != rhs {
                        return Report::fail(
                            "hexagon",
                            format!(
                                "hexagon relation fails on {} ⊗ {} ⊗ {} ⊗ {}",
                                b.labels()[b1],
                                b.labels()[b2],
                                a.labels()[a1],
                                a.labels()[a2]
                            ),
                            Some(Witness::Tuple {
                                indices: vec![b1, b2, a1, a2],
                            }),
                        );
                    }
                }
            }
        }
    }
    Report::pass("hexagon", format!("{} basis 4-tuples", db * db * da * da))
}

/// `A ⊗_τ B` realized as an ordinary algebra over the A-major basis.
#[derive(Clone, Debug)]
pub struct TwistedAlgebra {
    tau: Arc<TwistingMap>,
    algebra: Arc<Algebra>,
    certificate: Report,
}

impl TwistedAlgebra {
    pub fn tau(&self) -> &Arc<TwistingMap> {
        &self.tau
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn a(&self) -> &Arc<Algebra> {
        self.tau.a()
    }

    pub fn b(&self) -> &Arc<Algebra> {
        self.tau.b()
    }

    pub fn certificate(&self) -> &Report {
        &self.certificate
    }

    pub fn index(&self, k: usize, i: usize) -> usize {
        self.tau.ab_index(k, i)
    }

    /// Index of `a_k ⊗ 1`.
    pub fn a_index(&self, k: usize) -> usize {
        self.index(k, self.b().unit_index())
    }

    /// Index of `1 ⊗ b_i`.
    pub fn b_index(&self, i: usize) -> usize {
        self.index(self.a().unit_index(), i)
    }
}

/// Structure constants of `(m_A ⊗ m_B)(1 ⊗ τ ⊗ 1)`, certified associative.
pub fn twisted_algebra(tau: Arc<TwistingMap>) -> Result<TwistedAlgebra> {
    let axioms = verify_twisting_axioms(&tau);
    if !axioms.passed {
        let failure = axioms.first_failure().map(|r| r.summary.clone()).unwrap_or_default();
        return Err(CoreError::TwistAxioms(failure));
    }
    let algebra = twisted_product_unchecked(&tau)?;
    let assoc = check_associativity(&algebra);
    if !assoc.passed {
        return Err(CoreError::InvariantBreach(format!(
            "twisted product is not associative: {}",
            assoc.summary
        )));
    }
    Ok(TwistedAlgebra {
        tau,
        algebra: Arc::new(algebra),
        certificate: Report::all("twisted-algebra", vec![axioms, assoc]),
    })
}

/// The product induced by `tau` without any certification.
pub fn twisted_product_unchecked(tau: &TwistingMap) -> Result<Algebra> {
    let (a, b) = (tau.a(), tau.b());
    let (da, db) = (a.dim(), b.dim());
    let field = a.field();
    let total = da * db;
    let mut labels = Vec::with_capacity(total);
    for k in 0..da {
        for i in 0..db {
            labels.push(format!("{}⊗{}", a.labels()[k], b.labels()[i]));
        }
    }
    let mut products = Vec::with_capacity(total * total);
    for k in 0..da {
        for r in 0..db {
            for l in 0..da {
                for s in 0..db {
                    let mut out = vec![field.zero(); total];
                    for (m, u, c) in tau.image(r, l) {
                        for (ak, ca) in a.product(k, m) {
                            for (bi, cb) in b.product(u, s) {
                                accumulate(&mut out, tau.ab_index(*ak, *bi), &(&(c * ca) * cb));
                            }
                        }
                    }
                    products.push(
                        out.into_iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .collect(),
                    );
                }
            }
        }
    }
    Algebra::from_sparse(field, labels, products, tau.ab_index(a.unit_index(), b.unit_index()))
}

/// `τ⁻¹: A⊗B → B⊗A`, certified as a two-sided inverse.
#[derive(Clone, Debug)]
pub struct TwistingMapInverse {
    a: Arc<Algebra>,
    b: Arc<Algebra>,
    matrix: Matrix,
}

impl TwistingMapInverse {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `τ⁻¹(a_k ⊗ b_i)` as a dense B-major vector.
    pub fn apply_basis(&self, k: usize, i: usize) -> Vec<Scalar> {
        self.matrix.column(k * self.b.dim() + i)
    }

    pub fn a(&self) -> &Arc<Algebra> {
        &self.a
    }

    pub fn b(&self) -> &Arc<Algebra> {
        &self.b
    }
}

pub fn invert_tau(tau: &TwistingMap) -> Result<TwistingMapInverse> {
    let inv = tau.inverse_matrix().clone();
    if !inv.mul(tau.matrix()).is_identity() || !tau.matrix().mul(&inv).is_identity() {
        return Err(CoreError::InvariantBreach("stored inverse is not two-sided".into()));
    }
    Ok(TwistingMapInverse {
        a: tau.a().clone(),
        b: tau.b().clone(),
        matrix: inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::truncated_poly_algebra_in;
    use crate::field::FieldSpec;
    use crate::operator::{
        automorphism_from_generator, derivation_from_generator, verify_automorphism,
        verify_sigma_derivation,
    };

    struct Setup {
        a: Arc<Algebra>,
        sigma: LinearOperator,
        delta: LinearOperator,
    }

    /// `A = F_p[x]/(x^p)`, `σ = id`, `δ(x) = α x^t`.
    fn ore_setup(p: u64, t: usize, alpha: i64) -> Setup {
        let f = FieldSpec::new(p).unwrap();
        let n = p as usize;
        let a = Arc::new(truncated_poly_algebra_in(f, n, "x").unwrap());
        let sigma = verify_automorphism(&a, &LinearOperator::identity(f, n)).unwrap().value.unwrap();
        let mut img = vec![f.zero(); n];
        img[t] = f.from_i64(alpha);
        let delta = derivation_from_generator(&a, &sigma, &img).unwrap();
        let delta = verify_sigma_derivation(&a, &sigma, &delta).unwrap().value.unwrap();
        Setup { a, sigma, delta }
    }

    fn coeff(v: &[Scalar], tau: &TwistingMap, k: usize, i: usize) -> Scalar {
        v[tau.ab_index(k, i)].clone()
    }

    #[test]
    fn zero_derivation_gives_the_flip() {
        let f = FieldSpec::new(3).unwrap();
        let a = Arc::new(truncated_poly_algebra_in(f, 3, "x").unwrap());
        let id = verify_automorphism(&a, &LinearOperator::identity(f, 3)).unwrap().value.unwrap();
        let zero = verify_sigma_derivation(&a, &id, &LinearOperator::zero(f, 3)).unwrap().value.unwrap();
        let tau = build_tau(a, &id, &zero, 3).unwrap();
        for r in 0..3 {
            for k in 0..3 {
                let v = tau.apply_basis(r, k);
                let mut want = vec![f.zero(); 9];
                want[tau.ab_index(k, r)] = f.one();
                assert_eq!(v, want);
            }
        }
        assert!(verify_twisting_axioms(&tau).passed);
        let inv = invert_tau(&tau).unwrap();
        assert_eq!(inv.matrix(), tau.matrix());
    }

    #[test]
    fn ore_relation_in_degree_one() {
        let s = ore_setup(5, 2, 1);
        let tau = build_tau(s.a, &s.sigma, &s.delta, 5).unwrap();
        let v = tau.apply_basis(1, 1);
        let f = FieldSpec::new(5).unwrap();
        assert_eq!(coeff(&v, &tau, 1, 1), f.one());
        assert_eq!(coeff(&v, &tau, 2, 0), f.one());
        assert_eq!(v.iter().filter(|c| !c.is_zero()).count(), 2);
    }

    #[test]
    fn ore_relation_in_degree_two_matches_hand_rewriting() {
        // y^2 x = y (x y + x^2) = (x y + x^2) y + (2 x^3 + x^2 y)
        //       = x y^2 + 2 x^2 y + 2 x^3
        let s = ore_setup(5, 2, 1);
        let tau = build_tau(s.a, &s.sigma, &s.delta, 5).unwrap();
        let f = FieldSpec::new(5).unwrap();
        let v = tau.apply_basis(2, 1);
        assert_eq!(coeff(&v, &tau, 1, 2), f.one());
        assert_eq!(coeff(&v, &tau, 2, 1), f.from_i64(2));
        assert_eq!(coeff(&v, &tau, 3, 0), f.from_i64(2));
        assert_eq!(v.iter().filter(|c| !c.is_zero()).count(), 3);
    }

    #[test]
    fn twisted_product_reads_off_table() {
        let s = ore_setup(5, 2, 3);
        let tau = Arc::new(build_tau(s.a, &s.sigma, &s.delta, 5).unwrap());
        let tw = twisted_algebra(tau).unwrap();
        let f = FieldSpec::new(5).unwrap();
        let prod = tw.algebra().product(tw.b_index(1), tw.a_index(1));
        let mut got: Vec<(usize, Scalar)> = prod.clone();
        got.sort_by_key(|(i, _)| *i);
        assert_eq!(got, vec![(tw.index(1, 1), f.one()), (tw.index(2, 0), f.from_i64(3))]);
    }

    #[test]
    fn quantum_plane_relation() {
        let f = FieldSpec::new(7).unwrap();
        let q = f.from_i64(3);
        let a = Arc::new(truncated_poly_algebra_in(f, 2, "x").unwrap());
        let sigma = automorphism_from_generator(&a, &[f.zero(), q.clone()]).unwrap();
        let sigma = verify_automorphism(&a, &sigma).unwrap().value.unwrap();
        let delta = verify_sigma_derivation(&a, &sigma, &LinearOperator::zero(f, 2)).unwrap().value.unwrap();
        let tau = Arc::new(build_tau(a, &sigma, &delta, 2).unwrap());
        let tw = twisted_algebra(tau).unwrap();
        let prod = tw.algebra().product(tw.b_index(1), tw.a_index(1));
        assert_eq!(prod, &vec![(tw.index(1, 1), q)]);
    }

    #[test]
    fn linear_derivation_fails_the_gate() {
        // δ(x) = x on k[x]/(x^2) over Q: s_(0,2) = δ^2 sends x to x
        let f = FieldSpec::rationals();
        let a = Arc::new(truncated_poly_algebra_in(f, 2, "x").unwrap());
        let id = verify_automorphism(&a, &LinearOperator::identity(f, 2)).unwrap().value.unwrap();
        let delta = derivation_from_generator(&a, &id, &[f.zero(), f.one()]).unwrap();
        let delta = verify_sigma_derivation(&a, &id, &delta).unwrap().value.unwrap();
        let err = build_tau(a, &id, &delta, 2).unwrap_err();
        assert_eq!(err, CoreError::RejectedTwist { i: 0, j: 2 });
    }

    #[test]
    fn corrupted_entry_breaks_the_hexagon() {
        let s = ore_setup(3, 2, 1);
        let tau = build_tau(s.a, &s.sigma, &s.delta, 3).unwrap();
        assert!(verify_twisting_axioms(&tau).passed);
        let col = tau.ba_index(1, 1);
        let row = tau.ab_index(2, 0);
        let bad = tau.with_entry(row, col, FieldSpec::new(3).unwrap().from_i64(2)).unwrap();
        let r = verify_twisting_axioms(&bad);
        assert!(!r.passed);
        assert!(matches!(r.witness, Some(Witness::Tuple { .. })));
        assert!(twisted_algebra(Arc::new(bad)).is_err());
    }

    #[test]
    fn inverse_of_x_tensor_y() {
        let s = ore_setup(5, 2, 1);
        let tau = build_tau(s.a, &s.sigma, &s.delta, 5).unwrap();
        let inv = invert_tau(&tau).unwrap();
        let f = FieldSpec::new(5).unwrap();
        let v = inv.apply_basis(1, 1);
        // y ⊗ x - 1 ⊗ x^2, B-major indices r·5 + k
        let mut want = vec![f.zero(); 25];
        want[5 + 1] = f.one();
        want[2] = f.from_i64(-1);
        assert_eq!(v, want);
        // and τ sends it back
        assert_eq!(tau.matrix().mul_vec(&v), {
            let mut e = vec![f.zero(); 25];
            e[tau.ab_index(1, 1)] = f.one();
            e
        });
    }

    #[test]
    fn sigma_delta_round_trip() {
        let s = ore_setup(5, 3, 2);
        let tau = build_tau(s.a, &s.sigma, &s.delta, 5).unwrap();
        let (sig, del) = tau.sigma_delta();
        assert_eq!(sig.matrix(), s.sigma.matrix());
        assert_eq!(del.matrix(), s.delta.matrix());
    }
}
