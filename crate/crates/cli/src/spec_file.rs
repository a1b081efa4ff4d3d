//! Input description of an Ore-type twisting: ground field, the two
//! truncated polynomial algebras, σ, δ and an optional module.
//!
//! ```json
//! {
//!   "field": { "char": 5 },
//!   "A": { "type": "truncated_poly", "n": 5 },
//!   "B": { "type": "truncated_poly", "n": 5 },
//!   "sigma": { "type": "identity" },
//!   "delta": { "type": "monomial", "alpha": "1", "t": 2 }
//! }
//! ```
//!
//! Scalars are strings ("3", "-1/2"). Matrices are lists of rows and act on
//! column vectors in the monomial basis `1, x, …, x^{n-1}`.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use serde::Deserialize;
use twisted_ore::algebra::{truncated_poly_algebra_in, Algebra};
use twisted_ore::field::{FieldSpec, Scalar};
use twisted_ore::matrix::Matrix;
use twisted_ore::operator::{automorphism_from_generator, derivation_from_generator, LinearOperator};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub field: FieldBlock,
    #[serde(rename = "A")]
    pub a: AlgebraBlock,
    #[serde(rename = "B")]
    pub b: AlgebraBlock,
    pub sigma: SigmaBlock,
    pub delta: DeltaBlock,
    #[serde(default)]
    pub module: Option<ModuleBlock>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldBlock {
    #[serde(rename = "char")]
    pub characteristic: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraBlock {
    TruncatedPoly { n: usize },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SigmaBlock {
    Identity,
    /// `σ(x) = q x`.
    Scalar { q: String },
    Matrix { rows: Vec<Vec<String>> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DeltaBlock {
    Zero,
    /// `δ(x) = α x^t`, extended by the σ-Leibniz rule.
    Monomial { alpha: String, t: usize },
    Matrix { rows: Vec<Vec<String>> },
}

/// A module over the twisted algebra given by the actions of `x ⊗ 1` and
/// `1 ⊗ y`, with the map `φ` of the compatibility construction.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleBlock {
    pub dim: usize,
    pub x: Vec<Vec<String>>,
    pub y: Vec<Vec<String>>,
    pub phi: Vec<Vec<String>>,
}

/// Parsed and type-checked inputs. Operators are not yet verified.
#[derive(Clone, Debug)]
pub struct Inputs {
    pub field: FieldSpec,
    pub a: Arc<Algebra>,
    pub b: Arc<Algebra>,
    pub sigma: LinearOperator,
    pub delta: LinearOperator,
    pub module: Option<ModuleInputs>,
}

#[derive(Clone, Debug)]
pub struct ModuleInputs {
    pub x: Matrix,
    pub y: Matrix,
    pub phi: LinearOperator,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("spec file is not valid")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn inputs(&self) -> Result<Inputs> {
        let field = FieldSpec::new(self.field.characteristic).context("field.char")?;
        let AlgebraBlock::TruncatedPoly { n: na } = self.a;
        let AlgebraBlock::TruncatedPoly { n: nb } = self.b;
        ensure!(na >= 2, "A.n: need n >= 2, got {na}");
        ensure!(nb >= 2, "B.n: need n >= 2, got {nb}");
        let a = Arc::new(truncated_poly_algebra_in(field, na, "x").context("A")?);
        let b = Arc::new(truncated_poly_algebra_in(field, nb, "y").context("B")?);

        let sigma = match &self.sigma {
            SigmaBlock::Identity => LinearOperator::identity(field, na),
            SigmaBlock::Scalar { q } => {
                let q = scalar(field, q, "sigma.q")?;
                let mut img = vec![field.zero(); na];
                img[1] = q;
                automorphism_from_generator(&a, &img).context("sigma")?
            }
            SigmaBlock::Matrix { rows } => LinearOperator::new(matrix(field, rows, na, na, "sigma.rows")?),
        };
        let delta = match &self.delta {
            DeltaBlock::Zero => LinearOperator::zero(field, na),
            DeltaBlock::Monomial { alpha, t } => {
                ensure!(*t < na, "delta.t: x^{t} is zero in A (n = {na})");
                let mut img = vec![field.zero(); na];
                img[*t] = scalar(field, alpha, "delta.alpha")?;
                derivation_from_generator(&a, &sigma, &img).context("delta")?
            }
            DeltaBlock::Matrix { rows } => LinearOperator::new(matrix(field, rows, na, na, "delta.rows")?),
        };
        let module = self
            .module
            .as_ref()
            .map(|m| -> Result<ModuleInputs> {
                Ok(ModuleInputs {
                    x: matrix(field, &m.x, m.dim, m.dim, "module.x")?,
                    y: matrix(field, &m.y, m.dim, m.dim, "module.y")?,
                    phi: LinearOperator::new(matrix(field, &m.phi, m.dim, m.dim, "module.phi")?),
                })
            })
            .transpose()?;
        Ok(Inputs {
            field,
            a,
            b,
            sigma,
            delta,
            module,
        })
    }
}

fn scalar(field: FieldSpec, text: &str, location: &str) -> Result<Scalar> {
    field.parse(text).with_context(|| format!("{location}: {text:?}"))
}

fn matrix(field: FieldSpec, rows: &[Vec<String>], r: usize, c: usize, location: &str) -> Result<Matrix> {
    if rows.len() != r {
        bail!("{location}: expected {r} rows, got {}", rows.len());
    }
    let mut out = Vec::with_capacity(r);
    for (i, row) in rows.iter().enumerate() {
        ensure!(row.len() == c, "{location}[{i}]: expected {c} entries, got {}", row.len());
        out.push(
            row.iter()
                .enumerate()
                .map(|(j, s)| scalar(field, s, &format!("{location}[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(Matrix::from_rows(field, out)?)
}
