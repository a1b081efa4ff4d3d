//! Linear operators on algebras and modules, with verification-gated tags.

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{CoreError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;
use crate::report::{Report, Verdict, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorTag {
    Untagged,
    Automorphism,
    Derivation,
    ModuleMap,
}

/// A matrix in the fixed basis of its domain and codomain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearOperator {
    matrix: Matrix,
    tag: OperatorTag,
}

impl LinearOperator {
    pub fn new(matrix: Matrix) -> Self {
        Self {
            matrix,
            tag: OperatorTag::Untagged,
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        Self::new(Matrix::identity(field, n))
    }

    pub fn zero(field: FieldSpec, n: usize) -> Self {
        Self::new(Matrix::zeros(field, n, n))
    }

    pub(crate) fn tagged(matrix: Matrix, tag: OperatorTag) -> Self {
        Self { matrix, tag }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn tag(&self) -> OperatorTag {
        self.tag
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.matrix.field()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearOperator) -> LinearOperator {
        LinearOperator::new(self.matrix.mul(&other.matrix))
    }

    /// Drops any tag, e.g. before handing a modified copy to a verifier.
    pub fn untagged(&self) -> LinearOperator {
        LinearOperator::new(self.matrix.clone())
    }
}

fn check_square(alg: &Algebra, op: &LinearOperator, what: &str) -> Result<()> {
    let n = alg.dim();
    if op.domain_dim() != n || op.codomain_dim() != n {
        return Err(CoreError::Domain(format!(
            "{what} is {}x{}, algebra has dimension {n}",
            op.codomain_dim(),
            op.domain_dim()
        )));
    }
    if op.field() != alg.field() {
        return Err(CoreError::Domain(format!("{what} is over a different field")));
    }
    Ok(())
}

/// Automorphism of `k[x]/(x^n)` determined by the image of `x`, extended
/// multiplicatively. The result is untagged until verified.
pub fn automorphism_from_generator(alg: &Algebra, image: &[Scalar]) -> Result<LinearOperator> {
    let n = truncated_order(alg)?;
    if image.len() != n {
        return Err(CoreError::Domain("generator image has the wrong length".into()));
    }
    let mut cols = Vec::with_capacity(n);
    let mut power = alg.unit_vector();
    for _ in 0..n {
        cols.push(power.clone());
        power = alg.mul_vectors(&power, image);
    }
    Ok(LinearOperator::new(Matrix::from_columns(alg.field(), n, &cols)))
}

/// σ-derivation of `k[x]/(x^n)` determined by `δ(x)`, extended by
/// `δ(x^k) = δ(x)x^{k-1} + σ(x)δ(x^{k-1})`. The result is untagged; the
/// extension is only a σ-derivation when it is compatible with `x^n = 0`,
/// which [`verify_sigma_derivation`] decides.
pub fn derivation_from_generator(
    alg: &Algebra,
    sigma: &LinearOperator,
    image: &[Scalar],
) -> Result<LinearOperator> {
    let n = truncated_order(alg)?;
    check_square(alg, sigma, "sigma")?;
    if image.len() != n {
        return Err(CoreError::Domain("generator image has the wrong length".into()));
    }
    let field = alg.field();
    let x = alg.basis_vector(1.min(n - 1));
    let sigma_x = sigma.apply(&x);
    let mut cols: Vec<Vec<Scalar>> = vec![vec![field.zero(); n]];
    let mut x_power = alg.unit_vector();
    for _ in 1..n {
        let prev = cols.last().unwrap();
        let first = alg.mul_vectors(image, &x_power);
        let second = alg.mul_vectors(&sigma_x, prev);
        cols.push(first.iter().zip(&second).map(|(a, b)| a + b).collect());
        x_power = alg.mul_vectors(&x_power, &x);
    }
    Ok(LinearOperator::new(Matrix::from_columns(field, n, &cols)))
}

fn truncated_order(alg: &Algebra) -> Result<usize> {
    alg.truncation().ok_or_else(|| {
        CoreError::Domain("generator-based construction needs a truncated polynomial algebra".into())
    })
}

/// Invertible, unital and multiplicative on all basis pairs.
pub fn verify_automorphism(alg: &Algebra, sigma: &LinearOperator) -> Result<Verdict<LinearOperator>> {
    check_square(alg, sigma, "sigma")?;
    let check = "automorphism";
    let fail = |summary: String, witness| Verdict {
        report: Report::fail(check, summary, witness),
        value: None,
    };
    if sigma.matrix().rank() != alg.dim() {
        return Ok(fail("operator is not invertible".into(), None));
    }
    let unit = alg.unit_vector();
    if sigma.apply(&unit) != unit {
        return Ok(fail("sigma(1) != 1".into(), Some(Witness::Basis { index: alg.unit_index() })));
    }
    let images: Vec<Vec<Scalar>> = (0..alg.dim()).map(|i| sigma.apply(&alg.basis_vector(i))).collect();
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let lhs = sigma.apply(&alg.mul_vectors(&alg.basis_vector(i), &alg.basis_vector(j)));
            let rhs = alg.mul_vectors(&images[i], &images[j]);
            if lhs != rhs {
                return Ok(fail(
                    format!(
                        "sigma({a}*{b}) != sigma({a})*sigma({b})",
                        a = alg.labels()[i],
                        b = alg.labels()[j]
                    ),
                    Some(Witness::Pair { first: i, second: j }),
                ));
            }
        }
    }
    let n = alg.dim();
    Ok(Verdict {
        report: Report::pass(check, format!("invertible, unital, multiplicative on {} pairs", n * n)),
        value: Some(LinearOperator::tagged(sigma.matrix().clone(), OperatorTag::Automorphism)),
    })
}

/// `δ(1) = 0` and `δ(ab) = δ(a)b + σ(a)δ(b)` on all basis pairs.
pub fn verify_sigma_derivation(
    alg: &Algebra,
    sigma: &LinearOperator,
    delta: &LinearOperator,
) -> Result<Verdict<LinearOperator>> {
    check_square(alg, sigma, "sigma")?;
    check_square(alg, delta, "delta")?;
    if sigma.tag() != OperatorTag::Automorphism {
        return Err(CoreError::Precondition("sigma has not been verified as an automorphism".into()));
    }
    let check = "sigma-derivation";
    let unit = alg.unit_vector();
    if delta.apply(&unit).iter().any(|c| !c.is_zero()) {
        return Ok(Verdict {
            report: Report::fail(check, "delta(1) != 0", Some(Witness::Basis { index: alg.unit_index() })),
            value: None,
        });
    }
    let n = alg.dim();
    let basis: Vec<Vec<Scalar>> = (0..n).map(|i| alg.basis_vector(i)).collect();
    let d: Vec<Vec<Scalar>> = basis.iter().map(|b| delta.apply(b)).collect();
    let s: Vec<Vec<Scalar>> = basis.iter().map(|b| sigma.apply(b)).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = delta.apply(&alg.mul_vectors(&basis[i], &basis[j]));
            let a = alg.mul_vectors(&d[i], &basis[j]);
            let b = alg.mul_vectors(&s[i], &d[j]);
            let rhs: Vec<Scalar> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            if lhs != rhs {
                return Ok(Verdict {
                    report: Report::fail(
                        check,
                        format!(
                            "Leibniz rule fails on ({}, {}): {} != {}",
                            alg.labels()[i],
                            alg.labels()[j],
                            alg.render(&lhs),
                            alg.render(&rhs)
                        ),
                        Some(Witness::Pair { first: i, second: j }),
                    ),
                    value: None,
                });
            }
        }
    }
    Ok(Verdict {
        report: Report::pass(check, format!("delta(1) = 0 and Leibniz holds on {} pairs", n * n)),
        value: Some(LinearOperator::tagged(delta.matrix().clone(), OperatorTag::Derivation)),
    })
}
