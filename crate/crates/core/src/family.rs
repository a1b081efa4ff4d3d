//! The Ore family `A = F_p[x]/(x^p)`, `σ = id`, `δ(x) = α x^t` with
//! `2 <= t <= p-1`, and `B = F_p[y]/(y^p)`, implemented from closed forms
//! and cross-checked against the generic machinery.
//!
//! Closed forms use the rising factorial `(s)^[j] = ∏_{i<j} (s + i(t-1))`.
//! Integer combinatorics are done over Z and reduced mod p at the end.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{truncated_poly_algebra_in, Algebra};
use crate::error::{CoreError, Result};
use crate::field::{binomial, is_prime, FieldSpec, Scalar};
use crate::homology::{
    certify_tau_chain, check_exactness, degree_module, lift_through, standard_resolution_over, twisted_product_complex,
    build_tau_b_chain, verify_lift, ChainContract, ChainMap, Equivariance, FreeComplex, TauChain,
    TwistedProductComplex,
};
use crate::matrix::Matrix;
use crate::modules::{verify_compatibility, BModule, CompatMap, TTPModule};
use crate::operator::{
    automorphism_from_generator, derivation_from_generator, verify_automorphism, verify_sigma_derivation,
    LinearOperator,
};
use crate::pipeline::{resolve_ground_field, Resolution};
use crate::report::{Report, Witness};
use crate::twist::{build_tau, build_tau_over, twisted_algebra, TwistedAlgebra, TwistingMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Example4Params {
    p: u64,
    t: usize,
    alpha: Scalar,
}

impl Example4Params {
    pub fn new(p: u64, t: usize, alpha: Scalar) -> Result<Self> {
        if !is_prime(p) {
            return Err(CoreError::InvalidField(p));
        }
        if t < 2 || t as u64 > p - 1 {
            return Err(CoreError::Domain(format!("t = {t} is outside 2..={}", p - 1)));
        }
        if alpha.field() != FieldSpec::new(p)? {
            return Err(CoreError::Domain(format!("alpha must lie in F_{p}")));
        }
        if alpha.is_zero() {
            return Err(CoreError::Domain("alpha must be nonzero".into()));
        }
        Ok(Self { p, t, alpha })
    }

    pub fn from_i64(p: u64, t: usize, alpha: i64) -> Result<Self> {
        let f = FieldSpec::prime(p)?;
        Self::new(p, t, f.from_i64(alpha))
    }

    /// `t = 2`, `α = 1/2`.
    pub fn nichols(p: u64) -> Result<Self> {
        let f = FieldSpec::prime(p)?;
        let half = f
            .from_i64(2)
            .inv()
            .ok_or_else(|| CoreError::Domain("2 is not invertible in characteristic 2".into()))?;
        Self::new(p, 2, half)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn beta(&self) -> usize {
        self.t - 1
    }

    pub fn field(&self) -> FieldSpec {
        self.alpha.field()
    }

    /// Dimension of A and of B.
    pub fn n(&self) -> usize {
        self.p as usize
    }
}

impl std::fmt::Display for Example4Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "p={}, t={}, alpha={}", self.p, self.t, self.alpha)
    }
}

/// `(s)^[j]` over the integers.
pub fn rising_factorial_int(s: i64, j: usize, t: usize) -> BigInt {
    let beta = t as i64 - 1;
    (0..j as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(s + i * beta))
}

pub fn rising_factorial(s: i64, j: usize, t: usize, field: FieldSpec) -> Scalar {
    field.from_bigint(&rising_factorial_int(s, j, t))
}

/// Degree parity of a compatibility map in the periodic resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(deg: usize) -> Self {
        if deg.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn shift(self) -> i64 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// Terms `(x-exponent, y-exponent, coefficient)` of
/// `Σ_j C(r,j) (s+shift)^[j] c^j x^{s+j(t-1)} y^{r-j}`, truncated.
fn closed_terms(r: usize, s: usize, shift: i64, c: &Scalar, params: &Example4Params) -> Vec<(usize, usize, Scalar)> {
    let f = params.field();
    let mut out = Vec::new();
    for j in 0..=r {
        let x_exp = s + j * params.beta();
        if x_exp >= params.n() {
            break;
        }
        let int = binomial(r as u64, j as u64) * rising_factorial_int(s as i64 + shift, j, params.t());
        let coeff = f.from_bigint(&int) * c.pow(j as u64);
        if !coeff.is_zero() {
            out.push((x_exp, r - j, coeff));
        }
    }
    out
}

/// `τ(y^r ⊗ x^s)` as an A-major vector of `A ⊗ B` (index `a·p + b`).
pub fn tau_closed_form(r: usize, s: usize, params: &Example4Params) -> Vec<Scalar> {
    tau_bi_closed_form(Parity::Even, r, s, params)
}

/// `τ_{B,i}(y^r ⊗ x^s)` in the periodic resolution; the odd case uses
/// `(s+1)^[j]`.
pub fn tau_bi_closed_form(parity: Parity, r: usize, s: usize, params: &Example4Params) -> Vec<Scalar> {
    let n = params.n();
    let mut v = vec![params.field().zero(); n * n];
    for (a, b, c) in closed_terms(r, s, parity.shift(), params.alpha(), params) {
        v[a * n + b] += &c;
    }
    v
}

/// `τ_{B,i}⁻¹(x^s ⊗ y^r)` as a B-major vector of `B ⊗ A` (index `b·p + a`).
pub fn tau_bi_inverse_closed_form(parity: Parity, s: usize, r: usize, params: &Example4Params) -> Vec<Scalar> {
    let n = params.n();
    let minus_alpha = -params.alpha();
    let mut v = vec![params.field().zero(); n * n];
    for (a, b, c) in closed_terms(r, s, parity.shift(), &minus_alpha, params) {
        v[b * n + a] += &c;
    }
    v
}

/// Matrix of `τ_{B,i}` with columns `r·p + s` and rows `a·p + b`.
pub fn closed_form_matrix(parity: Parity, params: &Example4Params) -> Matrix {
    let n = params.n();
    let mut cols = Vec::with_capacity(n * n);
    for r in 0..n {
        for s in 0..n {
            cols.push(tau_bi_closed_form(parity, r, s, params));
        }
    }
    Matrix::from_columns(params.field(), n * n, &cols)
}

/// Matrix of `τ_{B,i}⁻¹` with columns `s·p + r` and rows `b·p + a`.
pub fn closed_form_inverse_matrix(parity: Parity, params: &Example4Params) -> Matrix {
    let n = params.n();
    let mut cols = Vec::with_capacity(n * n);
    for s in 0..n {
        for r in 0..n {
            cols.push(tau_bi_inverse_closed_form(parity, s, r, params));
        }
    }
    Matrix::from_columns(params.field(), n * n, &cols)
}

/// `δ_i(x^k) = (k + shift) α x^{t+k-1}`: `δ` itself in even degrees and
/// the lifted operator in odd degrees.
pub fn closed_delta_matrix(parity: Parity, params: &Example4Params) -> Matrix {
    let (n, f) = (params.n(), params.field());
    let mut m = Matrix::zeros(f, n, n);
    for k in 0..n {
        let target = params.t() + k - 1;
        if target < n {
            m.set(target, k, f.from_i64(k as i64 + parity.shift()) * params.alpha());
        }
    }
    m
}

/// `A = F_p[x]/(x^p)`.
pub fn family_algebra(params: &Example4Params) -> Result<Arc<Algebra>> {
    Ok(Arc::new(truncated_poly_algebra_in(params.field(), params.n(), "x")?))
}

fn y_algebra(params: &Example4Params) -> Result<Arc<Algebra>> {
    Ok(Arc::new(truncated_poly_algebra_in(params.field(), params.n(), "y")?))
}

/// `σ = id` and `δ(x) = α x^t` built generically (Leibniz extension) and
/// verified.
pub fn family_operators(params: &Example4Params, a: &Algebra) -> Result<(LinearOperator, LinearOperator)> {
    let f = params.field();
    let sigma = verify_automorphism(a, &LinearOperator::identity(f, params.n()))?
        .into_value()
        .ok_or_else(|| CoreError::InvariantBreach("identity is not an automorphism".into()))?;
    let mut img = vec![f.zero(); params.n()];
    img[params.t()] = params.alpha().clone();
    let delta = derivation_from_generator(a, &sigma, &img)?;
    let delta = verify_sigma_derivation(a, &sigma, &delta)?
        .into_value()
        .ok_or_else(|| CoreError::InvariantBreach("Leibniz extension is not a sigma-derivation".into()))?;
    Ok((sigma, delta))
}

/// The twisted algebra from the closed-form `τ`, axioms certified.
pub fn family_twisted_algebra(params: &Example4Params) -> Result<Arc<TwistedAlgebra>> {
    let tau = TwistingMap::from_matrix(
        family_algebra(params)?,
        y_algebra(params)?,
        closed_form_matrix(Parity::Even, params),
    )?;
    Ok(Arc::new(twisted_algebra(Arc::new(tau))?))
}

/// The twisted algebra from `build_tau` on the generically built operators.
pub fn generic_twisted_algebra(params: &Example4Params) -> Result<Arc<TwistedAlgebra>> {
    let a = family_algebra(params)?;
    let (sigma, delta) = family_operators(params, &a)?;
    let tau = build_tau_over(a, y_algebra(params)?, &sigma, &delta)?;
    Ok(Arc::new(twisted_algebra(Arc::new(tau))?))
}

/// `A = B = k[x]/(x^2)`, `σ(x) = q x`, `δ = 0`.
pub fn quantum_twisted_algebra(field: FieldSpec, q: &Scalar) -> Result<Arc<TwistedAlgebra>> {
    if q.is_zero() {
        return Err(CoreError::Domain("q must be nonzero".into()));
    }
    let a = Arc::new(truncated_poly_algebra_in(field, 2, "x")?);
    let sigma = automorphism_from_generator(&a, &[field.zero(), q.clone()])?;
    let sigma = verify_automorphism(&a, &sigma)?
        .into_value()
        .ok_or_else(|| CoreError::Domain("x -> q x is not an automorphism".into()))?;
    let zero = verify_sigma_derivation(&a, &sigma, &LinearOperator::zero(field, 2))?
        .into_value()
        .ok_or_else(|| CoreError::InvariantBreach("zero is not a sigma-derivation".into()))?;
    let tau = build_tau(a, &sigma, &zero, 2)?;
    Ok(Arc::new(twisted_algebra(Arc::new(tau))?))
}

fn trivial_module_base(f: FieldSpec) -> Matrix {
    Matrix::zeros(f, 1, 1)
}

fn skew_identity(params: &Example4Params) -> Equivariance {
    Equivariance::Skew {
        sigma: Matrix::identity(params.field(), params.n()),
        delta: closed_delta_matrix(Parity::Even, params),
    }
}

/// `δ_•` on the standard resolution of k over A, period 2, certified
/// against the lift contracts.
pub fn closed_delta_chain(params: &Example4Params, resolution: &FreeComplex) -> Result<ChainMap> {
    let maps: Vec<LinearOperator> = (0..=resolution.top())
        .map(|deg| LinearOperator::new(closed_delta_matrix(Parity::of(deg), params)))
        .collect();
    let base = trivial_module_base(params.field());
    let certificate = verify_lift(resolution, resolution, &base, &skew_identity(params), &maps);
    if !certificate.passed {
        return Err(CoreError::InvariantBreach(format!(
            "closed-form delta chain fails: {}",
            certificate.first_failure().map(|r| r.summary.clone()).unwrap_or_default()
        )));
    }
    Ok(ChainMap::from_maps(ChainContract::LiftsXAction, maps, certificate))
}

/// `σ_• = id`, certified as a lift of the identity.
pub fn identity_sigma_chain(params: &Example4Params, resolution: &FreeComplex) -> Result<ChainMap> {
    let f = params.field();
    let maps: Vec<LinearOperator> = (0..=resolution.top())
        .map(|deg| LinearOperator::identity(f, resolution.k_dim(deg)))
        .collect();
    let eq = Equivariance::Linear {
        sigma: Matrix::identity(f, params.n()),
    };
    let certificate = verify_lift(resolution, resolution, &Matrix::identity(f, 1), &eq, &maps);
    if !certificate.passed {
        return Err(CoreError::InvariantBreach("identity chain map fails its contract".into()));
    }
    Ok(ChainMap::from_maps(ChainContract::LiftsIdentityToSigma, maps, certificate))
}

/// The flip `y^r ⊗ 1 ↦ 1 ⊗ y^r` on the trivial module, certified.
fn closed_trivial_compat(tw: &Arc<TwistedAlgebra>) -> Result<CompatMap> {
    let m = Arc::new(TTPModule::trivial(tw.clone())?);
    let f = tw.algebra().field();
    let cm = CompatMap::from_matrix(m, LinearOperator::identity(f, 1), Matrix::identity(f, tw.b().dim()))?;
    let v = verify_compatibility(&cm);
    v.value
        .ok_or_else(|| CoreError::InvariantBreach("flip on the ground field is not compatible".into()))
}

/// `x^e` acting on `F_p[x]/(x^p)`, written out directly.
fn power_shift(params: &Example4Params, e: usize) -> Matrix {
    let (n, f) = (params.n(), params.field());
    let mut m = Matrix::zeros(f, n, n);
    for c in 0..n.saturating_sub(e) {
        m.set(c + e, c, f.one());
    }
    m
}

/// Exponent of the degree-`i` differential of the periodic resolution.
fn resolution_exponent(params: &Example4Params, i: usize) -> usize {
    if i % 2 == 1 {
        1
    } else {
        params.n() - 1
    }
}

/// `d_k` of the product complex in tensor coordinates, written out from
/// its block description: `x^{e(i)}·⊗1` to `(i-1, j)` and
/// `(-1)^i 1⊗y^{e(j)}·` to `(i, j-1)`, summands ordered by `i` descending.
pub fn displayed_differential(params: &Example4Params, k: usize) -> Matrix {
    let (n, f) = (params.n(), params.field());
    let block = n * n;
    let mut d = Matrix::zeros(f, k * block, (k + 1) * block);
    let id = Matrix::identity(f, n);
    for i in 0..=k {
        let j = k - i;
        let col = (k - i) * block;
        if i >= 1 {
            let row = (k - i) * block;
            d.set_block(row, col, &power_shift(params, resolution_exponent(params, i)).kron(&id));
        }
        if j >= 1 {
            let row = (k - 1 - i) * block;
            let mut v = id.kron(&power_shift(params, resolution_exponent(params, j)));
            if i % 2 == 1 {
                v = v.neg();
            }
            d.set_block(row, col, &v);
        }
    }
    d
}

/// `τ_{B,•}` from the closed forms on every degree of `pa`, certified as a
/// chain map lifting the flip on the ground field.
pub fn closed_tau_chain(
    params: &Example4Params,
    tw: &Arc<TwistedAlgebra>,
    pa: &FreeComplex,
) -> Result<(CompatMap, TauChain)> {
    let m_compat = closed_trivial_compat(tw)?;
    let phi = LinearOperator::identity(params.field(), params.n());
    let maps = (0..=pa.top())
        .map(|deg| {
            let parity = Parity::of(deg);
            let module = Arc::new(degree_module(tw, pa, deg, &closed_delta_matrix(parity, params))?);
            CompatMap::from_matrix(module, phi.clone(), closed_form_matrix(parity, params))
        })
        .collect::<Result<Vec<_>>>()?;
    let chain = certify_tau_chain(pa, maps, &m_compat)?;
    Ok((m_compat, chain))
}

#[derive(Clone, Debug)]
pub struct ExampleResolution {
    pub params: Example4Params,
    pub twisted: Arc<TwistedAlgebra>,
    pub resolution_a: FreeComplex,
    pub module_compat: CompatMap,
    pub delta_chain: ChainMap,
    pub tau_chain: TauChain,
    pub product: TwistedProductComplex,
    pub exactness: Report,
    pub report: Report,
}

impl ExampleResolution {
    pub fn complex(&self) -> &FreeComplex {
        self.product.complex()
    }

    pub fn passed(&self) -> bool {
        self.report.passed
    }
}

/// Assembles the resolution of k over `A ⊗_τ B` from the closed forms
/// through degree `length` and certifies it, with exactness at degrees
/// `0..length`.
pub fn build_example_resolution(params: &Example4Params, length: usize) -> Result<ExampleResolution> {
    if length < 1 {
        return Err(CoreError::InvalidDimension("resolution length must be at least 1".into()));
    }
    let tw = family_twisted_algebra(params)?;
    let pa = standard_resolution_over(tw.a().clone(), length)?;
    let pb = standard_resolution_over(tw.b().clone(), length)?;
    let delta_chain = closed_delta_chain(params, &pa)?;
    let (m_compat, tau_chain) = closed_tau_chain(params, &tw, &pa)?;
    let n_module = BModule::trivial(tw.b().clone())?;
    let product = twisted_product_complex(&pa, &pb, &tau_chain, &m_compat, &n_module, length)?;

    let mut display = Report::pass("displayed-differentials", format!("degrees 1..={length}"));
    for k in 1..=length {
        if let Some((row, col)) = product.tensor_differential(k).first_difference(&displayed_differential(params, k)) {
            display = Report::fail(
                "displayed-differentials",
                format!("d_{k} differs from its block description"),
                Some(Witness::Entry { degree: k, row, col }),
            );
            break;
        }
    }
    let exactness = check_exactness(product.complex(), length)?;
    let report = Report::all(
        "example-resolution",
        vec![
            delta_chain.certificate().clone().renamed("delta-chain"),
            tau_chain.certificate().clone(),
            product.certificate().clone(),
            display,
            exactness.clone(),
        ],
    )
    .with_note(format!("{params}; ranks {:?}", product.complex().ranks()));
    Ok(ExampleResolution {
        params: params.clone(),
        twisted: tw,
        resolution_a: pa,
        module_compat: m_compat,
        delta_chain,
        tau_chain,
        product,
        exactness,
        report,
    })
}

/// `τ_{B,i} ∘ τ_{B,i}⁻¹ = id` and `τ_{B,i}⁻¹ ∘ τ_{B,i} = id` from the closed
/// forms, both parities.
pub fn verify_closed_inverses(params: &Example4Params) -> Report {
    let children = [Parity::Even, Parity::Odd]
        .into_iter()
        .map(|parity| {
            let name = format!("inverse-{}", if parity == Parity::Even { "even" } else { "odd" });
            let (m, inv) = (closed_form_matrix(parity, params), closed_form_inverse_matrix(parity, params));
            let id = Matrix::identity(params.field(), m.rows());
            for prod in [m.mul(&inv), inv.mul(&m)] {
                if let Some((_, col)) = prod.first_difference(&id) {
                    return Report::fail(name, "closed-form inverse is not two-sided", Some(Witness::Basis { index: col }));
                }
            }
            Report::pass(name, format!("{} basis elements each way", m.rows()))
        })
        .collect();
    Report::all("closed-form-inverses", children)
}

fn compare_matrices(check: &str, degree: usize, lhs: &Matrix, rhs: &Matrix) -> Option<Report> {
    lhs.first_difference(rhs).map(|(row, col)| {
        Report::fail(
            check,
            format!("first difference in degree {degree}"),
            Some(Witness::Entry { degree, row, col }),
        )
    })
}

fn compare_complexes(lhs: &FreeComplex, rhs: &FreeComplex) -> Report {
    let check = "resolution-agreement";
    if lhs.ranks() != rhs.ranks() {
        return Report::fail(check, format!("ranks {:?} vs {:?}", lhs.ranks(), rhs.ranks()), None);
    }
    if let Some(r) = compare_matrices(check, 0, lhs.augmentation(), rhs.augmentation()) {
        return r;
    }
    for k in 1..=lhs.top() {
        let (a, b) = (lhs.differential(k), rhs.differential(k));
        for t in 0..a.rows() {
            for s in 0..a.cols() {
                if a.entry(t, s) != b.entry(t, s) {
                    return Report::fail(
                        check,
                        format!("d_{k} entry ({t},{s}) differs"),
                        Some(Witness::Entry { degree: k, row: t, col: s }),
                    );
                }
            }
        }
    }
    Report::pass(check, format!("ranks {:?}, every entry equal", lhs.ranks()))
}

#[derive(Clone, Debug)]
pub struct CrossValidation {
    pub report: Report,
    pub closed: ExampleResolution,
    pub generic: Resolution,
}

/// Closed forms against the generic pipeline: `τ` against `build_tau`,
/// `τ_{B,•}` against the chain built from `σ_• = id` and the closed `δ_•`,
/// solver `δ_•` against the lift contracts, and the two resolutions entry
/// by entry.
pub fn cross_validate(params: &Example4Params, length: usize) -> Result<CrossValidation> {
    let closed = build_example_resolution(params, length)?;
    let generic_tw = generic_twisted_algebra(params)?;
    let generic = resolve_ground_field(&generic_tw, length)?;
    let mut children = Vec::new();

    children.push(
        compare_matrices("closed-form-tau", 0, generic_tw.tau().matrix(), closed.twisted.tau().matrix())
            .unwrap_or_else(|| Report::pass("closed-form-tau", format!("all {} pairs (r,s)", params.n() * params.n()))),
    );

    let pa = &closed.resolution_a;
    let sigma_chain = identity_sigma_chain(params, pa)?;
    let built = build_tau_b_chain(&closed.twisted, pa, &sigma_chain, &closed.delta_chain, &closed.module_compat);
    children.push(match built {
        Err(e) => Report::fail("closed-form-tau-chain", e.to_string(), None),
        Ok(chain) => (0..=length)
            .find_map(|deg| compare_matrices("closed-form-tau-chain", deg, chain.map(deg).matrix(), closed.tau_chain.map(deg).matrix()))
            .unwrap_or_else(|| Report::pass("closed-form-tau-chain", format!("degrees 0..={length}"))),
    });

    let eq = skew_identity(params);
    let base = trivial_module_base(params.field());
    let solver = verify_lift(pa, pa, &base, &eq, generic.delta_chain.maps()).renamed("solver-delta");
    let closed_form = verify_lift(pa, pa, &base, &eq, closed.delta_chain.maps()).renamed("closed-form-delta");
    let same = generic
        .delta_chain
        .maps()
        .iter()
        .zip(closed.delta_chain.maps())
        .all(|(a, b)| a.matrix() == b.matrix());
    children.push(
        Report::all("delta-lift-contracts", vec![solver, closed_form])
            .with_note(format!("solver output coincides with the closed form: {same}")),
    );

    children.push(compare_complexes(closed.complex(), generic.complex()));
    children.push(verify_closed_inverses(params));

    let delta = closed_delta_matrix(Parity::Even, params);
    children.push(if delta.pow(params.n()).is_zero() {
        Report::pass("delta-nilpotent", format!("delta^{} = 0", params.p()))
    } else {
        Report::fail("delta-nilpotent", format!("delta^{} != 0", params.p()), None)
    });

    let report = Report::all("cross-validation", children).with_note(format!("{params}, length {length}"));
    Ok(CrossValidation {
        report,
        closed,
        generic,
    })
}

/// Solves for `δ_•` from scratch; exposed for comparison with
/// [`closed_delta_chain`].
pub fn solver_delta_chain(params: &Example4Params, resolution: &FreeComplex) -> Result<ChainMap> {
    lift_through(
        resolution,
        resolution,
        &trivial_module_base(params.field()),
        &skew_identity(params),
        ChainContract::LiftsXAction,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p5() -> Example4Params {
        Example4Params::from_i64(5, 2, 1).unwrap()
    }

    #[test]
    fn parameter_range() {
        assert!(Example4Params::from_i64(2, 2, 1).is_err());
        assert!(Example4Params::from_i64(5, 1, 1).is_err());
        assert!(Example4Params::from_i64(5, 5, 1).is_err());
        assert!(Example4Params::from_i64(5, 2, 5).is_err());
        assert!(matches!(Example4Params::from_i64(9, 2, 1), Err(CoreError::InvalidField(9))));
        assert_eq!(Example4Params::nichols(5).unwrap().alpha(), &FieldSpec::new(5).unwrap().from_i64(3));
    }

    #[test]
    fn rising_factorial_values() {
        let f = FieldSpec::new(5).unwrap();
        assert!(rising_factorial(3, 0, 4, f).is_one());
        assert_eq!(rising_factorial(1, 2, 2, f), f.from_i64(2));
        assert!(rising_factorial(1, 5, 2, f).is_zero());
        assert_eq!(rising_factorial_int(2, 3, 3), BigInt::from(2 * 4 * 6));
    }

    #[test]
    fn degree_one_and_two_values() {
        let params = p5();
        let f = params.field();
        // y x = x y + x^2
        let v = tau_closed_form(1, 1, &params);
        assert!(v[5 + 1].is_one() && v[2 * 5].is_one());
        assert_eq!(v.iter().filter(|c| !c.is_zero()).count(), 2);
        // y^2 x = x y^2 + 2 x^2 y + 2 x^3
        let v = tau_closed_form(2, 1, &params);
        assert_eq!((v[5 + 2].clone(), v[10 + 1].clone(), v[15].clone()), (f.one(), f.from_i64(2), f.from_i64(2)));
        // odd degree: y x = x y + 2 x^2
        let v = tau_bi_closed_form(Parity::Odd, 1, 1, &params);
        assert_eq!((v[5 + 1].clone(), v[10].clone()), (f.one(), f.from_i64(2)));
    }

    #[test]
    fn inverse_of_x_tensor_y() {
        let params = p5();
        let v = tau_bi_inverse_closed_form(Parity::Even, 1, 1, &params);
        // y ⊗ x − 1 ⊗ x^2 in B-major coordinates
        assert!(v[5 + 1].is_one());
        assert_eq!(v[2], -params.field().one());
        assert!(verify_closed_inverses(&params).passed);
    }

    #[test]
    fn closed_delta_values() {
        let params = p5();
        let f = params.field();
        let d1 = closed_delta_matrix(Parity::Odd, &params);
        assert_eq!(d1.get(2, 1), &f.from_i64(2));
        // coefficient p vanishes on x^{p-1}
        assert!(d1.column(4).iter().all(Scalar::is_zero));
        let d0 = closed_delta_matrix(Parity::Even, &params);
        let a = family_algebra(&params).unwrap();
        assert_eq!(&d0, family_operators(&params, &a).unwrap().1.matrix());
    }

    #[test]
    fn small_cross_validation() {
        let params = Example4Params::from_i64(3, 2, 1).unwrap();
        let cv = cross_validate(&params, 3).unwrap();
        assert!(cv.report.passed, "{}", cv.report);
        assert_eq!(cv.closed.complex().ranks(), &[1, 2, 3, 4]);
    }

    #[test]
    fn solver_matches_closed_delta_chain() {
        let params = p5();
        let pa = standard_resolution_over(family_algebra(&params).unwrap(), 3).unwrap();
        let solved = solver_delta_chain(&params, &pa).unwrap();
        let closed = closed_delta_chain(&params, &pa).unwrap();
        for deg in 0..=3 {
            assert_eq!(solved.map(deg).matrix(), closed.map(deg).matrix());
        }
    }
}
