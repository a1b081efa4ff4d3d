//! Exported free complexes over a twisted tensor product.
//!
//! The file carries the structure constants of the algebra so that `check`
//! can re-certify it without rebuilding anything. Basis vectors of `A ⊗ B`
//! are ordered A-major (`a_k ⊗ b_i` at `k·dim(B) + i`); the header must
//! declare this. Canonical output is pretty-printed JSON with a trailing
//! newline, and reading then writing a canonical file reproduces it byte
//! for byte.

use std::path::Path;
use std::sync::Arc;

use anyhow::{ensure, Context, Result};
use serde::{Deserialize, Serialize};
use twisted_ore::algebra::Algebra;
use twisted_ore::field::{FieldSpec, Scalar};
use twisted_ore::homology::{FreeComplex, FreeMatrix};
use twisted_ore::matrix::Matrix;

pub const FORMAT: &str = "twisted-ore-complex";
pub const VERSION: u32 = 1;
pub const BASIS_ORDER: &str = "A-major";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub header: Header,
    pub algebra: AlgebraTable,
    pub ranks: Vec<usize>,
    pub differentials: Vec<Differential>,
    /// Rows of the augmentation, one per basis vector of the module.
    pub augmentation: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub field_char: u64,
    pub dim_a: usize,
    pub dim_b: usize,
    pub basis_order: String,
}

/// `(i, j, [(k, c), …])` for `e_i e_j = Σ c e_k`.
pub type ProductEntry = (usize, usize, Vec<(usize, String)>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraTable {
    pub labels: Vec<String>,
    pub unit: usize,
    /// Nonzero products `e_i e_j = Σ c e_k` as `[i, j, [[k, c], …]]`.
    pub products: Vec<ProductEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Differential {
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    /// `entries[t][s]` is the coefficient vector of `D[t][s]`.
    pub entries: Vec<Vec<Vec<String>>>,
}

fn render(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::render).collect()
}

impl ComplexFile {
    pub fn from_complex(complex: &FreeComplex, dim_a: usize, dim_b: usize) -> Self {
        let alg = complex.algebra();
        let dim = alg.dim();
        let mut products = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let p = alg.product(i, j);
                if !p.is_empty() {
                    products.push((i, j, p.iter().map(|(k, c)| (*k, c.render())).collect()));
                }
            }
        }
        let differentials = (1..=complex.top())
            .map(|deg| {
                let d = complex.differential(deg);
                Differential {
                    degree: deg,
                    rows: d.rows(),
                    cols: d.cols(),
                    entries: (0..d.rows())
                        .map(|t| (0..d.cols()).map(|s| render(d.entry(t, s))).collect())
                        .collect(),
                }
            })
            .collect();
        let aug = complex.augmentation();
        Self {
            header: Header {
                format: FORMAT.into(),
                version: VERSION,
                field_char: alg.field().characteristic(),
                dim_a,
                dim_b,
                basis_order: BASIS_ORDER.into(),
            },
            algebra: AlgebraTable {
                labels: alg.labels().to_vec(),
                unit: alg.unit_index(),
                products,
            },
            ranks: complex.ranks().to_vec(),
            differentials,
            augmentation: (0..aug.rows()).map(|r| render(aug.row(r))).collect(),
        }
    }

    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("complex file serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("complex file is not valid")
    }

    pub fn read(path: &Path) -> Result<(Self, String)> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let file = Self::parse(&text).with_context(|| format!("in {}", path.display()))?;
        Ok((file, text))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_canonical_string()).with_context(|| format!("cannot write {}", path.display()))
    }

    /// Rebuilds the algebra and the complex, validating every shape.
    pub fn to_complex(&self) -> Result<FreeComplex> {
        let h = &self.header;
        ensure!(h.format == FORMAT, "header.format: expected {FORMAT:?}, got {:?}", h.format);
        ensure!(h.version == VERSION, "header.version: unsupported version {}", h.version);
        ensure!(
            h.basis_order == BASIS_ORDER,
            "header.basis_order: expected {BASIS_ORDER:?}, got {:?}",
            h.basis_order
        );
        let field = FieldSpec::new(h.field_char).context("header.field_char")?;
        let dim = h.dim_a * h.dim_b;
        ensure!(
            self.algebra.labels.len() == dim,
            "algebra.labels: expected {dim} labels for dim_a * dim_b, got {}",
            self.algebra.labels.len()
        );
        let scalar = |s: &str, loc: &dyn Fn() -> String| field.parse(s).with_context(loc);

        let mut products = vec![Vec::new(); dim * dim];
        for (n, (i, j, terms)) in self.algebra.products.iter().enumerate() {
            ensure!(*i < dim && *j < dim, "algebra.products[{n}]: index out of range");
            for (k, c) in terms {
                let c = scalar(c, &|| format!("algebra.products[{n}]"))?;
                products[i * dim + j].push((*k, c));
            }
        }
        let alg = Arc::new(
            Algebra::from_sparse(field, self.algebra.labels.clone(), products, self.algebra.unit)
                .context("algebra")?,
        );

        ensure!(!self.ranks.is_empty(), "ranks: need at least degree 0");
        ensure!(
            self.differentials.len() + 1 == self.ranks.len(),
            "differentials: {} ranks need {} differentials, got {}",
            self.ranks.len(),
            self.ranks.len() - 1,
            self.differentials.len()
        );
        let mut ds = Vec::with_capacity(self.differentials.len());
        for (n, d) in self.differentials.iter().enumerate() {
            let loc = format!("differentials[{n}]");
            ensure!(d.degree == n + 1, "{loc}.degree: expected {}, got {}", n + 1, d.degree);
            ensure!(d.entries.len() == d.rows, "{loc}.entries: expected {} rows", d.rows);
            let mut entries = Vec::with_capacity(d.rows * d.cols);
            for (t, row) in d.entries.iter().enumerate() {
                ensure!(row.len() == d.cols, "{loc}.entries[{t}]: expected {} entries", d.cols);
                for (s, v) in row.iter().enumerate() {
                    ensure!(v.len() == dim, "{loc}.entries[{t}][{s}]: expected {dim} coefficients");
                    entries.push(
                        v.iter()
                            .map(|c| scalar(c, &|| format!("{loc}.entries[{t}][{s}]")))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
            }
            ds.push(FreeMatrix::from_entries(&alg, d.rows, d.cols, entries).with_context(|| loc.clone())?);
        }
        let k0 = self.ranks[0] * dim;
        let mut aug_rows = Vec::with_capacity(self.augmentation.len());
        for (r, row) in self.augmentation.iter().enumerate() {
            ensure!(row.len() == k0, "augmentation[{r}]: expected {k0} entries, got {}", row.len());
            aug_rows.push(
                row.iter()
                    .map(|c| scalar(c, &|| format!("augmentation[{r}]")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        ensure!(!aug_rows.is_empty(), "augmentation: needs at least one row");
        let aug = Matrix::from_rows(field, aug_rows).context("augmentation")?;
        FreeComplex::new(alg, self.ranks.clone(), ds, aug).context("complex")
    }
}
