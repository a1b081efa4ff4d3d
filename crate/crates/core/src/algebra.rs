//! Finite-dimensional associative unital algebras given by structure constants.

use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;
use crate::report::{Report, Witness};

/// Sparse product table entry: `e_i · e_j = Σ c · e_k` stored as `(k, c)`.
pub type SparseVec = Vec<(usize, Scalar)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: FieldSpec,
    dim: usize,
    labels: Vec<String>,
    products: Vec<SparseVec>,
    unit: usize,
    truncation: Option<usize>,
}

impl Algebra {
    /// Builds an algebra from sparse products indexed by `i * dim + j`.
    /// The unit must act as a two-sided identity on every basis element;
    /// associativity is a separate certification ([`check_associativity`]).
    pub fn from_sparse(
        field: FieldSpec,
        labels: Vec<String>,
        products: Vec<SparseVec>,
        unit: usize,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(CoreError::InvalidDimension("algebra must have positive dimension".into()));
        }
        if products.len() != dim * dim {
            return Err(CoreError::Domain(format!(
                "expected {} product entries, got {}",
                dim * dim,
                products.len()
            )));
        }
        if unit >= dim {
            return Err(CoreError::Domain(format!("unit index {unit} out of range")));
        }
        let mut products = products;
        for entry in products.iter_mut() {
            *entry = normalize(field, std::mem::take(entry), dim)?;
        }
        let alg = Self {
            field,
            dim,
            labels,
            products,
            unit,
            truncation: None,
        };
        if let Some(i) = (0..dim).find(|&i| !alg.unit_acts_on(i)) {
            return Err(CoreError::Domain(format!(
                "basis element {} does not absorb the unit",
                alg.labels[i]
            )));
        }
        Ok(alg)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    /// `Some(n)` when this is the truncated polynomial algebra `k[x]/(x^n)`
    /// with basis `1, x, …, x^{n-1}`.
    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.products[i * self.dim + j]
    }

    /// Dense structure constant `c_{ij}^k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.product(i, j)
            .iter()
            .find(|(idx, _)| *idx == k)
            .map_or_else(|| self.field.zero(), |(_, c)| c.clone())
    }

    /// Copy of this algebra with one structure constant replaced. Used to
    /// build deliberately broken inputs for the certifiers.
    pub fn with_structure_constant(&self, i: usize, j: usize, k: usize, value: Scalar) -> Result<Self> {
        let mut products = self.products.clone();
        let entry = &mut products[i * self.dim + j];
        entry.retain(|(idx, _)| *idx != k);
        entry.push((k, value));
        let mut alg = Self::from_sparse(self.field, self.labels.clone(), products, self.unit)?;
        alg.truncation = None;
        Ok(alg)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    pub fn unit_vector(&self) -> Vec<Scalar> {
        self.basis_vector(self.unit)
    }

    /// Bilinear product of coefficient vectors.
    pub fn mul_vectors(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.product(i, j) {
                    out[*k] += &(&xy * c);
                }
            }
        }
        out
    }

    /// Matrix of `v ↦ e_i · v`.
    pub fn left_mult_matrix(&self, i: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim, self.dim);
        for j in 0..self.dim {
            for (k, c) in self.product(i, j) {
                m.set(*k, j, c.clone());
            }
        }
        m
    }

    /// Matrix of `v ↦ v · e_j`.
    pub fn right_mult_matrix(&self, j: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim, self.dim);
        for i in 0..self.dim {
            for (k, c) in self.product(i, j) {
                m.set(*k, i, c.clone());
            }
        }
        m
    }

    /// Matrix of left multiplication by an arbitrary element.
    pub fn left_mult_by(&self, a: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim, self.dim);
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for (k, c) in self.product(i, j) {
                    m.add_to(*k, j, &(x * c));
                }
            }
        }
        m
    }

    fn unit_acts_on(&self, i: usize) -> bool {
        let e = |v: &SparseVec| v.len() == 1 && v[0].0 == i && v[0].1.is_one();
        e(self.product(self.unit, i)) && e(self.product(i, self.unit))
    }

    /// Human-readable rendering of a coefficient vector.
    pub fn render(&self, v: &[Scalar]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                if i == self.unit {
                    c.to_string()
                } else if c.is_one() {
                    self.labels[i].clone()
                } else {
                    format!("{c}*{}", self.labels[i])
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn normalize(field: FieldSpec, entry: SparseVec, dim: usize) -> Result<SparseVec> {
    let mut dense: Vec<Scalar> = vec![field.zero(); dim];
    for (k, c) in entry {
        if k >= dim {
            return Err(CoreError::Domain(format!("product index {k} out of range")));
        }
        if c.field() != field {
            return Err(CoreError::Domain("structure constant from a different field".into()));
        }
        dense[k] += &c;
    }
    Ok(dense
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

/// Label for `var^k` in the monomial basis.
pub fn monomial_label(var: &str, k: usize) -> String {
    match k {
        0 => "1".into(),
        1 => var.into(),
        _ => format!("{var}^{k}"),
    }
}

/// `k[x]/(x^n)` in the monomial basis `1, x, …, x^{n-1}`.
pub fn truncated_poly_algebra(field: FieldSpec, n: usize) -> Result<Algebra> {
    truncated_poly_algebra_in(field, n, "x")
}

pub fn truncated_poly_algebra_in(field: FieldSpec, n: usize, var: &str) -> Result<Algebra> {
    if n < 1 {
        return Err(CoreError::InvalidDimension(format!("truncation order must be at least 1, got {n}")));
    }
    if n == 1 {
        log::warn!("k[{var}]/({var}^1) is the ground field itself");
    }
    let labels = (0..n).map(|k| monomial_label(var, k)).collect();
    let mut products = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            if i + j < n {
                products.push(vec![(i + j, field.one())]);
            } else {
                products.push(Vec::new());
            }
        }
    }
    let mut alg = Algebra::from_sparse(field, labels, products, 0)?;
    alg.truncation = Some(n);
    Ok(alg)
}

/// Checks `(e_i e_j) e_k = e_i (e_j e_k)` on every basis triple.
pub fn check_associativity(alg: &Algebra) -> Report {
    let dim = alg.dim();
    let field = alg.field();
    for i in 0..dim {
        for j in 0..dim {
            let ij = alg.product(i, j);
            for k in 0..dim {
                let mut lhs = vec![field.zero(); dim];
                for (m, c) in ij {
                    for (l, d) in alg.product(*m, k) {
                        lhs[*l] += &(c * d);
                    }
                }
                let mut rhs = vec![field.zero(); dim];
                for (m, c) in alg.product(j, k) {
                    for (l, d) in alg.product(i, *m) {
                        rhs[*l] += &(c * d);
                    }
                }
                if lhs != rhs {
                    return Report::fail(
                        "associativity",
                        format!(
                            "({a}*{b})*{c} != {a}*({b}*{c})",
                            a = alg.labels[i],
                            b = alg.labels[j],
                            c = alg.labels[k]
                        ),
                        Some(Witness::Triple { i, j, k }),
                    );
                }
            }
        }
    }
    Report::pass("associativity", format!("{} basis triples", dim * dim * dim))
}

/// An element of a specific algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    algebra: Arc<Algebra>,
    coeffs: Vec<Scalar>,
}

impl Element {
    pub fn new(algebra: Arc<Algebra>, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(CoreError::Domain(format!(
                "element has {} coefficients, algebra has dimension {}",
                coeffs.len(),
                algebra.dim()
            )));
        }
        Ok(Self { algebra, coeffs })
    }

    pub fn basis(algebra: Arc<Algebra>, i: usize) -> Self {
        let coeffs = algebra.basis_vector(i);
        Self { algebra, coeffs }
    }

    pub fn one(algebra: Arc<Algebra>) -> Self {
        let u = algebra.unit_index();
        Self::basis(algebra, u)
    }

    pub fn zero(algebra: Arc<Algebra>) -> Self {
        let coeffs = vec![algebra.field().zero(); algebra.dim()];
        Self { algebra, coeffs }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        same_algebra(self, other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Element {
            algebra: self.algebra.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        Element {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.algebra.render(&self.coeffs))
    }
}

fn same_algebra(a: &Element, b: &Element) -> Result<()> {
    if Arc::ptr_eq(&a.algebra, &b.algebra) || a.algebra == b.algebra {
        Ok(())
    } else {
        Err(CoreError::Domain("elements belong to different algebras".into()))
    }
}

pub fn multiply(a: &Element, b: &Element) -> Result<Element> {
    same_algebra(a, b)?;
    Ok(Element {
        algebra: a.algebra.clone(),
        coeffs: a.algebra.mul_vectors(&a.coeffs, &b.coeffs),
    })
}
