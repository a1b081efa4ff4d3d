//! Finite windows of free complexes over a finite-dimensional algebra.
//!
//! A differential `d_deg` is stored as an `r_{deg-1} × r_deg` matrix of
//! algebra elements with `d(e_s) = Σ_t D[t][s] e_t`. A general element
//! `Σ_s z_s e_s` maps to `Σ_t (Σ_s z_s D[t][s]) e_t`, so coordinates
//! multiply the entries from the left and `d` is a left-module map.
//! The underlying vector space of `A^r` uses the index `slot·dim(A) + c`.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{CoreError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;
use crate::report::{Report, Witness};

/// A matrix whose entries are elements of an algebra, stored as dense
/// coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Scalar>>,
}

impl FreeMatrix {
    pub fn zeros(alg: &Algebra, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![vec![alg.field().zero(); alg.dim()]; rows * cols],
        }
    }

    pub fn from_entries(alg: &Algebra, rows: usize, cols: usize, entries: Vec<Vec<Scalar>>) -> Result<Self> {
        if entries.len() != rows * cols || entries.iter().any(|e| e.len() != alg.dim()) {
            return Err(CoreError::Domain(format!(
                "free matrix needs {rows}x{cols} entries of length {}",
                alg.dim()
            )));
        }
        if entries.iter().flatten().any(|s| s.field() != alg.field()) {
            return Err(CoreError::Domain("free matrix entry from a different field".into()));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, t: usize, s: usize) -> &[Scalar] {
        &self.entries[t * self.cols + s]
    }

    pub fn set_entry(&mut self, t: usize, s: usize, v: Vec<Scalar>) {
        self.entries[t * self.cols + s] = v;
    }

    pub fn entries(&self) -> &[Vec<Scalar>] {
        &self.entries
    }

    /// The k-linear map on underlying vector spaces:
    /// column `(s, c)` is `Σ_t (e_c · D[t][s])` placed in slot `t`.
    pub fn expand(&self, alg: &Algebra) -> Matrix {
        let n = alg.dim();
        let mut m = Matrix::zeros(alg.field(), self.rows * n, self.cols * n);
        for s in 0..self.cols {
            for t in 0..self.rows {
                let d = self.entry(t, s);
                if d.iter().all(Scalar::is_zero) {
                    continue;
                }
                for c in 0..n {
                    for (l, coeff) in d.iter().enumerate() {
                        if coeff.is_zero() {
                            continue;
                        }
                        for (k, e) in alg.product(c, l) {
                            m.add_to(t * n + k, s * n + c, &(coeff * e));
                        }
                    }
                }
            }
        }
        m
    }

    /// The composite `prev ∘ self` (apply `self`, then `prev`):
    /// `C[u][s] = Σ_t D_self[t][s] · D_prev[u][t]`.
    pub fn then(&self, prev: &FreeMatrix, alg: &Algebra) -> Result<FreeMatrix> {
        if prev.cols != self.rows {
            return Err(CoreError::Domain("free matrices do not compose".into()));
        }
        let mut out = FreeMatrix::zeros(alg, prev.rows, self.cols);
        for u in 0..prev.rows {
            for s in 0..self.cols {
                let mut acc = vec![alg.field().zero(); alg.dim()];
                for t in 0..self.rows {
                    let prod = alg.mul_vectors(self.entry(t, s), prev.entry(u, t));
                    for (a, b) in acc.iter_mut().zip(&prod) {
                        *a += b;
                    }
                }
                out.set_entry(u, s, acc);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Scalar::is_zero)
    }
}

/// `P_top → … → P_1 → P_0 → M` with free modules of finite rank.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    algebra: Arc<Algebra>,
    ranks: Vec<usize>,
    differentials: Vec<FreeMatrix>,
    augmentation: Matrix,
}

impl FreeComplex {
    /// `differentials[k]` is `d_{k+1}: P_{k+1} → P_k`. The augmentation is a
    /// k-linear map from the underlying space of `P_0` to the module.
    pub fn new(
        algebra: Arc<Algebra>,
        ranks: Vec<usize>,
        differentials: Vec<FreeMatrix>,
        augmentation: Matrix,
    ) -> Result<Self> {
        if ranks.is_empty() {
            return Err(CoreError::InvalidDimension("complex needs at least degree 0".into()));
        }
        if differentials.len() + 1 != ranks.len() {
            return Err(CoreError::Domain(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.rows() != ranks[k] || d.cols() != ranks[k + 1] {
                return Err(CoreError::Domain(format!(
                    "d_{} is {}x{}, expected {}x{}",
                    k + 1,
                    d.rows(),
                    d.cols(),
                    ranks[k],
                    ranks[k + 1]
                )));
            }
        }
        if augmentation.cols() != ranks[0] * algebra.dim() {
            return Err(CoreError::Domain("augmentation does not start at P_0".into()));
        }
        Ok(Self {
            algebra,
            ranks,
            differentials,
            augmentation,
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, deg: usize) -> usize {
        self.ranks[deg]
    }

    pub fn top(&self) -> usize {
        self.ranks.len() - 1
    }

    /// Underlying dimension of `P_deg`.
    pub fn k_dim(&self, deg: usize) -> usize {
        self.ranks[deg] * self.algebra.dim()
    }

    pub fn module_dim(&self) -> usize {
        self.augmentation.rows()
    }

    /// `d_deg` for `1 <= deg <= top`.
    pub fn differential(&self, deg: usize) -> &FreeMatrix {
        &self.differentials[deg - 1]
    }

    pub fn differentials(&self) -> &[FreeMatrix] {
        &self.differentials
    }

    pub fn augmentation(&self) -> &Matrix {
        &self.augmentation
    }

    /// `d_deg` on underlying vector spaces.
    pub fn expanded(&self, deg: usize) -> Matrix {
        self.differential(deg).expand(&self.algebra)
    }

    /// Action of `e_c` on the underlying space of `P_deg`.
    pub fn action(&self, deg: usize, c: usize) -> Matrix {
        crate::modules::block_diagonal(&self.algebra.left_mult_matrix(c), self.ranks[deg])
    }

    /// Copy with one differential entry replaced; used to damage complexes
    /// for negative tests.
    pub fn with_entry(&self, deg: usize, t: usize, s: usize, value: Vec<Scalar>) -> Result<Self> {
        let mut ds = self.differentials.clone();
        ds[deg - 1].set_entry(t, s, value);
        Self::new(self.algebra.clone(), self.ranks.clone(), ds, self.augmentation.clone())
    }

    /// Truncation to degrees `0..=top`.
    pub fn truncated(&self, top: usize) -> Result<Self> {
        if top > self.top() {
            return Err(CoreError::Range {
                requested: top,
                available: self.top(),
            });
        }
        Self::new(
            self.algebra.clone(),
            self.ranks[..=top].to_vec(),
            self.differentials[..top].to_vec(),
            self.augmentation.clone(),
        )
    }
}

/// `d_{k-1} ∘ d_k = 0` on every generator and `ε ∘ d_1 = 0`.
pub fn check_d_squared(c: &FreeComplex) -> Report {
    let alg = c.algebra();
    for k in 2..=c.top() {
        let comp = match c.differential(k).then(c.differential(k - 1), alg) {
            Ok(m) => m,
            Err(e) => return Report::fail("d-squared", e.to_string(), Some(Witness::Degree { degree: k })),
        };
        for u in 0..comp.rows() {
            for s in 0..comp.cols() {
                if comp.entry(u, s).iter().any(|x| !x.is_zero()) {
                    return Report::fail(
                        "d-squared",
                        format!("d_{} ∘ d_{k} is nonzero on generator {s}", k - 1),
                        Some(Witness::Entry { degree: k, row: u, col: s }),
                    );
                }
            }
        }
    }
    if c.top() >= 1 {
        let e = c.augmentation().mul(&c.expanded(1));
        if let Some(col) = e.first_nonzero_column() {
            return Report::fail(
                "d-squared",
                "augmentation ∘ d_1 is nonzero",
                Some(Witness::Entry { degree: 1, row: 0, col }),
            );
        }
    }
    Report::pass("d-squared", format!("degrees 1..={}", c.top()))
}
