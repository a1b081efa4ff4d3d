//! Periodic resolutions of the ground field over `k[x]/(x^n)` and the
//! summand-wise extension of a σ-derivation to them.

use std::sync::Arc;

use crate::algebra::{truncated_poly_algebra, Algebra};
use crate::error::{CoreError, Result};
use crate::field::FieldSpec;
use crate::homology::complex::{FreeComplex, FreeMatrix};
use crate::matrix::Matrix;
use crate::operator::{LinearOperator, OperatorTag};

/// `… → A --x^{n-1}--> A --x--> A --ε--> k` through degree `length`.
pub fn standard_truncated_resolution(field: FieldSpec, n: usize, length: usize) -> Result<FreeComplex> {
    standard_resolution_over(Arc::new(truncated_poly_algebra(field, n)?), length)
}

/// Same as [`standard_truncated_resolution`] over an existing truncated
/// polynomial algebra (keeps its generator label).
pub fn standard_resolution_over(alg: Arc<Algebra>, length: usize) -> Result<FreeComplex> {
    let n = alg
        .truncation()
        .ok_or_else(|| CoreError::Domain("resolution needs a truncated polynomial algebra".into()))?;
    if length < 1 {
        return Err(CoreError::InvalidDimension("resolution length must be at least 1".into()));
    }
    if n < 2 {
        return Err(CoreError::InvalidDimension("k[x]/(x) has no generator to resolve by".into()));
    }
    let ds = (1..=length)
        .map(|deg| {
            let power = if deg % 2 == 1 { 1 } else { n - 1 };
            FreeMatrix::from_entries(&alg, 1, 1, vec![alg.basis_vector(power)])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut eps = Matrix::zeros(alg.field(), 1, n);
    eps.set(0, alg.unit_index(), alg.field().one());
    FreeComplex::new(alg, vec![1; length + 1], ds, eps)
}

/// Applies `δ` in every free summand of every degree. Certifies
/// `δ_i(a·z) = σ(a)δ_i(z) + δ(a)z` on all basis pairs and rejects `δ`
/// unless `δ^n = 0` for `n` the truncation order of the acting variable.
pub fn extend_x_action(
    p: &FreeComplex,
    sigma: &LinearOperator,
    delta: &LinearOperator,
    n: usize,
) -> Result<Vec<LinearOperator>> {
    if delta.tag() != OperatorTag::Derivation {
        return Err(CoreError::Precondition("delta has not been verified as a sigma-derivation".into()));
    }
    let alg = p.algebra();
    if !delta.matrix().pow(n).is_zero() {
        return Err(CoreError::Precondition(format!(
            "delta^{n} != 0, so the action does not factor through y^{n} = 0"
        )));
    }
    let mut out = Vec::with_capacity(p.top() + 1);
    for deg in 0..=p.top() {
        let op = crate::modules::block_diagonal(delta.matrix(), p.rank(deg));
        for c in 0..alg.dim() {
            let lhs = op.mul(&p.action(deg, c));
            let sigma_c = sigma.apply(&alg.basis_vector(c));
            let delta_c = delta.apply(&alg.basis_vector(c));
            let rhs = element_action(p, deg, &sigma_c)
                .mul(&op)
                .add(&element_action(p, deg, &delta_c));
            if lhs != rhs {
                return Err(CoreError::InvariantBreach(format!(
                    "summand-wise delta fails the skew relation in degree {deg}"
                )));
            }
        }
        out.push(LinearOperator::new(op));
    }
    Ok(out)
}

pub(crate) fn element_action(p: &FreeComplex, deg: usize, a: &[crate::field::Scalar]) -> Matrix {
    let m = p.algebra().left_mult_by(a);
    crate::modules::block_diagonal(&m, p.rank(deg))
}
