//! Modules over a twisted tensor product and compatibility maps
//! `τ_{B,M}: B⊗M → M⊗B`.
//!
//! Index conventions follow [`crate::twist`]: `B⊗M` is B-major
//! (`r·dim(M) + m`), `M⊗B` and `M⊗N` are M-major (`m·dim(B) + i`).

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{CoreError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;
use crate::operator::{LinearOperator, OperatorTag};
use crate::report::{Report, Verdict, Witness};
use crate::shuffle::ShuffleTable;
use crate::twist::{shuffle_expansion, TwistedAlgebra};

/// Block-diagonal `rank` copies of `m`.
pub(crate) fn block_diagonal(m: &Matrix, rank: usize) -> Matrix {
    Matrix::identity(m.field(), rank).kron(m)
}

/// Checks `ρ(1) = id` and `ρ(e_s)ρ(e_t) = Σ c_{st}^u ρ(e_u)` on all pairs.
fn check_representation(alg: &Algebra, dim: usize, actions: &[Matrix]) -> Report {
    let field = alg.field();
    if actions.len() != alg.dim() || actions.iter().any(|m| m.rows() != dim || m.cols() != dim) {
        return Report::fail("module-axioms", "action matrices have the wrong shape", None);
    }
    if !actions[alg.unit_index()].is_identity() {
        return Report::fail(
            "module-axioms",
            "unit does not act as the identity",
            Some(Witness::Basis { index: alg.unit_index() }),
        );
    }
    for s in 0..alg.dim() {
        for t in 0..alg.dim() {
            let lhs = actions[s].mul(&actions[t]);
            let mut rhs = Matrix::zeros(field, dim, dim);
            for (u, c) in alg.product(s, t) {
                rhs = rhs.add(&actions[*u].scale(c));
            }
            if lhs != rhs {
                return Report::fail(
                    "module-axioms",
                    format!(
                        "(e_s e_t)·m != e_s·(e_t·m) for ({}, {})",
                        alg.labels()[s],
                        alg.labels()[t]
                    ),
                    Some(Witness::Pair { first: s, second: t }),
                );
            }
        }
    }
    Report::pass(
        "module-axioms",
        format!("{} algebra basis pairs on a {dim}-dimensional module", alg.dim() * alg.dim()),
    )
}

/// A left module over `A ⊗_τ B`, with the action of every basis element
/// stored as a matrix.
#[derive(Clone, Debug)]
pub struct TTPModule {
    algebra: Arc<TwistedAlgebra>,
    dim: usize,
    actions: Vec<Matrix>,
}

impl TTPModule {
    /// Takes the action of every basis element of the twisted algebra and
    /// certifies the module axioms.
    pub fn from_actions(algebra: Arc<TwistedAlgebra>, dim: usize, actions: Vec<Matrix>) -> Result<Self> {
        let report = check_representation(algebra.algebra(), dim, &actions);
        if !report.passed {
            return Err(CoreError::ModuleAxiom(report.summary));
        }
        Ok(Self { algebra, dim, actions })
    }

    /// Builds the action of `a_k ⊗ y^i` as `ρ_A(a_k)·f^i` from the action of
    /// the A-basis and the action `f` of `1 ⊗ y`.
    pub fn from_a_action(algebra: Arc<TwistedAlgebra>, a_actions: Vec<Matrix>, f: Matrix) -> Result<Self> {
        let dim = f.rows();
        let (da, db) = (algebra.a().dim(), algebra.b().dim());
        if a_actions.len() != da {
            return Err(CoreError::Domain("need one action matrix per basis element of A".into()));
        }
        if algebra.b().truncation() != Some(db) {
            return Err(CoreError::Domain("B must be a truncated polynomial algebra".into()));
        }
        let mut f_powers = vec![Matrix::identity(f.field(), dim)];
        for i in 1..db {
            f_powers.push(f_powers[i - 1].mul(&f));
        }
        let mut actions = Vec::with_capacity(da * db);
        for rho in &a_actions {
            for fp in &f_powers {
                actions.push(rho.mul(fp));
            }
        }
        Self::from_actions(algebra, dim, actions)
    }

    /// Derives every action from the generators `x ⊗ 1` and `1 ⊗ y`; A must
    /// also be a truncated polynomial algebra.
    pub fn from_generator_actions(algebra: Arc<TwistedAlgebra>, x: Matrix, y: Matrix) -> Result<Self> {
        let da = algebra.a().dim();
        if algebra.a().truncation() != Some(da) {
            return Err(CoreError::Domain("A must be a truncated polynomial algebra".into()));
        }
        let dim = x.rows();
        let mut powers = vec![Matrix::identity(x.field(), dim)];
        for k in 1..da {
            powers.push(powers[k - 1].mul(&x));
        }
        Self::from_a_action(algebra, powers, y)
    }

    /// The ground field with every non-unit basis element acting as zero.
    pub fn trivial(algebra: Arc<TwistedAlgebra>) -> Result<Self> {
        let field = algebra.algebra().field();
        let unit = algebra.algebra().unit_index();
        let actions = (0..algebra.algebra().dim())
            .map(|s| {
                if s == unit {
                    Matrix::identity(field, 1)
                } else {
                    Matrix::zeros(field, 1, 1)
                }
            })
            .collect();
        Self::from_actions(algebra, 1, actions)
    }

    pub fn algebra(&self) -> &Arc<TwistedAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.algebra().field()
    }

    pub fn action(&self, s: usize) -> &Matrix {
        &self.actions[s]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.actions
    }

    /// `ρ_{A,M}(a_k)`, the action of `a_k ⊗ 1`.
    pub fn a_action(&self, k: usize) -> &Matrix {
        &self.actions[self.algebra.a_index(k)]
    }

    /// The action of `1 ⊗ y`.
    pub fn x_action(&self) -> &Matrix {
        let y = 1.min(self.algebra.b().dim() - 1);
        &self.actions[self.algebra.b_index(y)]
    }

    /// Action of an arbitrary element of A.
    pub fn a_element_action(&self, a: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.field(), self.dim, self.dim);
        for (k, c) in a.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.a_action(k).scale(c));
            }
        }
        m
    }

    pub fn check_axioms(&self) -> Report {
        check_representation(self.algebra.algebra(), self.dim, &self.actions)
    }
}

/// A left module over a (typically truncated polynomial) algebra B.
#[derive(Clone, Debug)]
pub struct BModule {
    b: Arc<Algebra>,
    dim: usize,
    actions: Vec<Matrix>,
}

impl BModule {
    pub fn from_actions(b: Arc<Algebra>, dim: usize, actions: Vec<Matrix>) -> Result<Self> {
        let report = check_representation(&b, dim, &actions);
        if !report.passed {
            return Err(CoreError::ModuleAxiom(report.summary));
        }
        Ok(Self { b, dim, actions })
    }

    /// `B^rank` with basis `slot·dim(B) + c`.
    pub fn free(b: Arc<Algebra>, rank: usize) -> Self {
        let actions = (0..b.dim()).map(|i| block_diagonal(&b.left_mult_matrix(i), rank)).collect();
        let dim = rank * b.dim();
        Self { b, dim, actions }
    }

    pub fn trivial(b: Arc<Algebra>) -> Result<Self> {
        let field = b.field();
        let actions = (0..b.dim())
            .map(|i| {
                if i == b.unit_index() {
                    Matrix::identity(field, 1)
                } else {
                    Matrix::zeros(field, 1, 1)
                }
            })
            .collect();
        Self::from_actions(b, 1, actions)
    }

    /// Action of `y^i` as `g^i` for a truncated polynomial algebra.
    pub fn from_generator(b: Arc<Algebra>, g: Matrix) -> Result<Self> {
        let n = b
            .truncation()
            .ok_or_else(|| CoreError::Domain("B must be a truncated polynomial algebra".into()))?;
        let dim = g.rows();
        let mut actions = vec![Matrix::identity(g.field(), dim)];
        for i in 1..n {
            actions.push(actions[i - 1].mul(&g));
        }
        Self::from_actions(b, dim, actions)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.actions[i]
    }
}

/// `φ` invertible with `φ(a·m) = σ(a)·φ(m)` for every A-basis element.
pub fn verify_phi(module: &TTPModule, phi: &LinearOperator) -> Verdict<LinearOperator> {
    let check = "phi";
    let fail = |summary: String, witness| Verdict {
        report: Report::fail(check, summary, witness),
        value: None,
    };
    let dim = module.dim();
    if phi.domain_dim() != dim || phi.codomain_dim() != dim {
        return fail(format!("phi must be {dim}x{dim}"), None);
    }
    if phi.matrix().rank() != dim {
        return fail("phi is not invertible".into(), None);
    }
    let (sigma, _) = module.algebra().tau().sigma_delta();
    let a = module.algebra().a();
    for k in 0..a.dim() {
        let sigma_a = sigma.apply(&a.basis_vector(k));
        let lhs = phi.matrix().mul(module.a_action(k));
        let rhs = module.a_element_action(&sigma_a).mul(phi.matrix());
        if lhs != rhs {
            let col = lhs.sub(&rhs).first_nonzero_column().unwrap_or(0);
            return fail(
                format!("phi({}·m) != sigma({})·phi(m)", a.labels()[k], a.labels()[k]),
                Some(Witness::Pair { first: k, second: col }),
            );
        }
    }
    Verdict {
        report: Report::pass(check, format!("invertible and sigma-semilinear on {} pairs", a.dim() * dim)),
        value: Some(LinearOperator::tagged(phi.matrix().clone(), OperatorTag::ModuleMap)),
    }
}

/// A compatibility map `τ_{B,M}`; `certified` is set only by
/// [`verify_compatibility`].
#[derive(Clone, Debug)]
pub struct CompatMap {
    module: Arc<TTPModule>,
    phi: LinearOperator,
    matrix: Matrix,
    inverse: Matrix,
    certified: bool,
}

impl CompatMap {
    /// Wraps an explicit table (e.g. a closed form). Not certified.
    pub fn from_matrix(module: Arc<TTPModule>, phi: LinearOperator, matrix: Matrix) -> Result<Self> {
        let n = module.dim() * module.algebra().b().dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(CoreError::Domain(format!("compatibility matrix must be {n}x{n}")));
        }
        let inverse = matrix
            .inverse()
            .ok_or_else(|| CoreError::Domain("compatibility map is not bijective".into()))?;
        Ok(Self {
            module,
            phi,
            matrix,
            inverse,
            certified: false,
        })
    }

    pub fn with_entry(&self, row: usize, col: usize, value: Scalar) -> Result<Self> {
        let mut m = self.matrix.clone();
        m.set(row, col, value);
        Self::from_matrix(self.module.clone(), self.phi.clone(), m)
    }

    pub fn module(&self) -> &Arc<TTPModule> {
        &self.module
    }

    pub fn phi(&self) -> &LinearOperator {
        &self.phi
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    fn n(&self) -> usize {
        self.module.algebra().b().dim()
    }

    /// Index of `b_r ⊗ m` in `B⊗M`.
    pub fn bm_index(&self, r: usize, m: usize) -> usize {
        r * self.module.dim() + m
    }

    /// Index of `m ⊗ b_i` in `M⊗B`.
    pub fn mb_index(&self, m: usize, i: usize) -> usize {
        m * self.n() + i
    }

    /// Sparse `τ_{B,M}(b_r ⊗ m)` as `(M-index, B-index, coefficient)`.
    pub fn image(&self, r: usize, m: usize) -> Vec<(usize, usize, Scalar)> {
        let n = self.n();
        let col = self.bm_index(r, m);
        (0..self.matrix.rows())
            .filter_map(|t| {
                let c = self.matrix.get(t, col);
                (!c.is_zero()).then(|| (t / n, t % n, c.clone()))
            })
            .collect()
    }
}

/// `τ_{B,M}(y^r ⊗ m) = Σ_{i+j=r} s_(i,j)(φ, f)(m) ⊗ y^i`, gated on the
/// vanishing of `s_(i,j)(φ, f)` for `i + j = n`, `1 <= i <= n-1`.
pub fn build_tau_bm(module: Arc<TTPModule>, phi: &LinearOperator) -> Result<CompatMap> {
    let verdict = verify_phi(&module, phi);
    let Some(phi) = verdict.value else {
        return Err(CoreError::Precondition(format!("phi rejected: {}", verdict.report.summary)));
    };
    let n = module
        .algebra()
        .b()
        .truncation()
        .ok_or_else(|| CoreError::Domain("B must be a truncated polynomial algebra".into()))?;
    let f = module.x_action().clone();
    if n >= 2 {
        let table = ShuffleTable::from_matrices(phi.matrix(), &f, n);
        if let Some((i, j, _)) = table.first_nonvanishing(n, 1..=n - 1) {
            return Err(CoreError::RejectedCompat { i, j });
        }
    }
    let matrix = shuffle_expansion(module.dim(), n, phi.matrix(), &f);
    CompatMap::from_matrix(module, phi, matrix)
        .map_err(|e| CoreError::InvariantBreach(format!("shuffle expansion not bijective: {e}")))
}

/// Report on the vanishing conditions alone, with the exact index ranges.
pub fn compat_conditions_report(module: &TTPModule, phi: &LinearOperator) -> Report {
    let n = module.algebra().b().dim();
    let check = "compat-conditions";
    let notes = [
        format!("checked s_(i,j)(phi, f) for i + j = {n}, 1 <= i <= {}", n.saturating_sub(1)),
        format!("s_(0,{n}) = f^{n} and s_({n},0) lands on y^{n}: automatic"),
    ];
    let table = ShuffleTable::from_matrices(phi.matrix(), module.x_action(), n);
    let r = match (n >= 2).then(|| table.first_nonvanishing(n, 1..=n - 1)).flatten() {
        None => Report::pass(check, format!("s_(i,j)(phi, f) vanishes in total degree {n}")),
        Some((i, j, basis)) => Report::fail(
            check,
            format!("s_({i},{j})(phi, f) is nonzero"),
            Some(Witness::ShuffleIndex { i, j, basis }),
        ),
    };
    notes.into_iter().fold(r, Report::with_note)
}

fn accumulate(out: &mut [Scalar], idx: usize, c: &Scalar) {
    if !c.is_zero() {
        out[idx] += c;
    }
}

/// Unit condition, bijectivity and both compatibility relations
/// (multiplicativity in B on `B⊗B⊗M`, A-equivariance on `B⊗A⊗M`).
pub fn verify_compatibility(cm: &CompatMap) -> Verdict<CompatMap> {
    let module = cm.module();
    let tw = module.algebra();
    let (a, b, tau) = (tw.a(), tw.b(), tw.tau());
    let field = module.field();
    let (dm, n) = (module.dim(), b.dim());
    let total = dm * n;
    let mut children = Vec::new();

    // τ_{B,M}(1 ⊗ m) = m ⊗ 1
    let mut unit = Report::pass("compat-unit", format!("{dm} module basis elements"));
    for m in 0..dm {
        let got = cm.matrix().column(cm.bm_index(b.unit_index(), m));
        let mut want = vec![field.zero(); total];
        want[cm.mb_index(m, b.unit_index())] = field.one();
        if got != want {
            unit = Report::fail("compat-unit", "tau_BM(1 ⊗ m) != m ⊗ 1", Some(Witness::Basis { index: m }));
            break;
        }
    }
    children.push(unit);

    let bij = cm.inverse().mul(cm.matrix()).is_identity() && cm.matrix().mul(cm.inverse()).is_identity();
    children.push(if bij {
        Report::pass("compat-bijective", "two-sided inverse certified")
    } else {
        Report::fail("compat-bijective", "stored inverse is not two-sided", None)
    });

    let images: Vec<Vec<Vec<(usize, usize, Scalar)>>> =
        (0..n).map(|r| (0..dm).map(|m| cm.image(r, m)).collect()).collect();

    // multiplicativity: τ(b1 b2 ⊗ m) = (1 ⊗ m_B)(τ ⊗ 1)(1 ⊗ τ)(b1 ⊗ b2 ⊗ m)
    let mut mult = Report::pass("compat-multiplicative", format!("{} basis tuples of B⊗B⊗M", n * n * dm));
    'mult: for b1 in 0..n {
        for b2 in 0..n {
            for m in 0..dm {
                let mut lhs = vec![field.zero(); total];
                for (r, c) in b.product(b1, b2) {
                    for (m2, i, d) in &images[*r][m] {
                        accumulate(&mut lhs, cm.mb_index(*m2, *i), &(c * d));
                    }
                }
                let mut rhs = vec![field.zero(); total];
                for (m1, u, c1) in &images[b2][m] {
                    for (m2, v, c2) in &images[b1][*m1] {
                        let c12 = c1 * c2;
                        for (i, c3) in b.product(*v, *u) {
                            accumulate(&mut rhs, cm.mb_index(*m2, *i), &(&c12 * c3));
                        }
                    }
                }
                if lhs != rhs {
                    mult = Report::fail(
                        "compat-multiplicative",
                        format!("relation fails on {} ⊗ {} ⊗ m_{m}", b.labels()[b1], b.labels()[b2]),
                        Some(Witness::Triple { i: b1, j: b2, k: m }),
                    );
                    break 'mult;
                }
            }
        }
    }
    children.push(mult);

    // A-equivariance: τ(b ⊗ a·m) = (ρ ⊗ 1)(1 ⊗ τ_{B,M})(τ ⊗ 1)(b ⊗ a ⊗ m)
    let a_cols: Vec<Vec<Vec<(usize, Scalar)>>> = (0..a.dim())
        .map(|k| {
            let act = module.a_action(k);
            (0..dm)
                .map(|m| {
                    (0..dm)
                        .filter_map(|r| {
                            let c = act.get(r, m);
                            (!c.is_zero()).then(|| (r, c.clone()))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut equi = Report::pass("compat-equivariant", format!("{} basis tuples of B⊗A⊗M", n * a.dim() * dm));
    'equi: for r in 0..n {
        for k in 0..a.dim() {
            for m in 0..dm {
                let mut lhs = vec![field.zero(); total];
                for (m1, c) in &a_cols[k][m] {
                    for (m2, i, d) in &images[r][*m1] {
                        accumulate(&mut lhs, cm.mb_index(*m2, *i), &(c * d));
                    }
                }
                let mut rhs = vec![field.zero(); total];
                for (ak, bu, c1) in tau.image(r, k) {
                    for (m1, i, c2) in &images[bu][m] {
                        let c12 = c1 * c2;
                        for (m2, c3) in &a_cols[ak][*m1] {
                            accumulate(&mut rhs, cm.mb_index(*m2, *i), &(&c12 * c3));
                        }
                    }
                }
                if lhs != rhs {
                    equi = Report::fail(
                        "compat-equivariant",
                        format!("relation fails on {} ⊗ {} ⊗ m_{m}", b.labels()[r], a.labels()[k]),
                        Some(Witness::Triple { i: r, j: k, k: m }),
                    );
                    break 'equi;
                }
            }
        }
    }
    children.push(equi);

    let report = Report::all("compatibility", children);
    let value = report.passed.then(|| CompatMap {
        certified: true,
        ..cm.clone()
    });
    Verdict { report, value }
}

/// `M⊗N` as a module over `A ⊗_τ B` via
/// `(a⊗b)(m⊗n) = Σ a·m' ⊗ b'·n` where `τ_{B,M}(b⊗m) = Σ m' ⊗ b'`.
pub fn tensor_module_action(cm: &CompatMap, n_mod: &BModule) -> Result<TTPModule> {
    if !cm.is_certified() {
        return Err(CoreError::Precondition("compatibility map has not been certified".into()));
    }
    let module = cm.module();
    let tw = module.algebra().clone();
    let (a, b) = (tw.a(), tw.b());
    if !Arc::ptr_eq(n_mod.algebra(), b) && **n_mod.algebra() != **b {
        return Err(CoreError::Domain("N is not a module over B".into()));
    }
    let field = module.field();
    let (dm, dn) = (module.dim(), n_mod.dim());
    let dim = dm * dn;
    let images: Vec<Vec<Vec<(usize, usize, Scalar)>>> =
        (0..b.dim()).map(|r| (0..dm).map(|m| cm.image(r, m)).collect()).collect();
    let mut actions = Vec::with_capacity(a.dim() * b.dim());
    for k in 0..a.dim() {
        let ak = module.a_action(k);
        for row in &images {
            let mut act = Matrix::zeros(field, dim, dim);
            for (m, image) in row.iter().enumerate() {
                for (m1, u, c) in image {
                    let bu = n_mod.action(*u);
                    for m2 in 0..dm {
                        let am = ak.get(m2, *m1);
                        if am.is_zero() {
                            continue;
                        }
                        let cam = c * am;
                        for q in 0..dn {
                            for q2 in 0..dn {
                                let bn = bu.get(q2, q);
                                if !bn.is_zero() {
                                    act.add_to(m2 * dn + q2, m * dn + q, &(&cam * bn));
                                }
                            }
                        }
                    }
                }
            }
            actions.push(act);
        }
    }
    TTPModule::from_actions(tw, dim, actions)
}
