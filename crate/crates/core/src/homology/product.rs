//! The twisted product complex `X_k = ⊕_{i+j=k} P_i(M) ⊗ P_j(N)` with
//! differential `d'_i ⊗ 1 + (−1)^i 1 ⊗ d''_j`.
//!
//! Each summand `Y_{i,j}` is a module over `A ⊗_τ B` through `τ_{B,i}`, and
//! is free on the generators `e_α ⊗ f_β`. The complex is returned both in
//! tensor coordinates (index `m·dim(P_j(N)) + q` inside a summand) and in
//! free coordinates over the twisted algebra. Summands are ordered by `i`
//! descending within each total degree.

use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::homology::complex::{check_d_squared, FreeComplex, FreeMatrix};
use crate::homology::tau_chain::TauChain;
use crate::matrix::Matrix;
use crate::modules::{tensor_module_action, BModule, CompatMap, TTPModule};
use crate::report::{Report, Witness};
use crate::twist::TwistedAlgebra;

#[derive(Clone, Debug)]
pub struct TwistedProductComplex {
    algebra: Arc<TwistedAlgebra>,
    complex: FreeComplex,
    blocks: Vec<Vec<(usize, usize)>>,
    tensor_differentials: Vec<Matrix>,
    to_tensor: Vec<Matrix>,
    certificate: Report,
}

impl TwistedProductComplex {
    pub fn algebra(&self) -> &Arc<TwistedAlgebra> {
        &self.algebra
    }

    /// Free coordinates over the twisted algebra.
    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    pub fn into_complex(self) -> FreeComplex {
        self.complex
    }

    /// `(i, j)` summands of degree `k`, `i` descending.
    pub fn blocks(&self, k: usize) -> &[(usize, usize)] {
        &self.blocks[k]
    }

    /// `d_k` in tensor coordinates.
    pub fn tensor_differential(&self, k: usize) -> &Matrix {
        &self.tensor_differentials[k - 1]
    }

    /// Change of basis from free to tensor coordinates in degree `k`.
    pub fn to_tensor(&self, k: usize) -> &Matrix {
        &self.to_tensor[k]
    }

    pub fn certificate(&self) -> &Report {
        &self.certificate
    }

    pub fn top(&self) -> usize {
        self.complex.top()
    }
}

struct Degree {
    blocks: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    dim: usize,
    modules: Vec<TTPModule>,
    /// Free-to-tensor change of basis, block diagonal.
    phi: Matrix,
    phi_inv: Matrix,
    rank: usize,
}

fn generators_of_tw(tw: &TwistedAlgebra, detailed: bool) -> Vec<usize> {
    let (a, b) = (tw.a(), tw.b());
    let y = 1.min(b.dim() - 1);
    if a.truncation() == Some(a.dim()) && !detailed {
        let x = 1.min(a.dim() - 1);
        vec![tw.a_index(x), tw.b_index(y)]
    } else {
        let mut g: Vec<usize> = (0..a.dim()).map(|k| tw.a_index(k)).collect();
        g.push(tw.b_index(y));
        g
    }
}

fn block_sum(field: crate::field::FieldSpec, blocks: &[Matrix]) -> Matrix {
    let dim: usize = blocks.iter().map(|b| b.rows()).sum();
    let cols: usize = blocks.iter().map(|b| b.cols()).sum();
    let mut m = Matrix::zeros(field, dim, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        m.set_block(r, c, b);
        r += b.rows();
        c += b.cols();
    }
    m
}

/// Assembles and certifies the twisted product complex through `top`.
pub fn twisted_product_complex(
    pm: &FreeComplex,
    pn: &FreeComplex,
    chain: &TauChain,
    m_compat: &CompatMap,
    n_module: &BModule,
    top: usize,
) -> Result<TwistedProductComplex> {
    let tw = m_compat.module().algebra().clone();
    let available = pm.top().min(pn.top()).min(chain.top());
    if top > available {
        return Err(CoreError::Range {
            requested: top,
            available,
        });
    }
    let field = tw.algebra().field();
    let (a, b) = (tw.a().clone(), tw.b().clone());
    let dtw = tw.algebra().dim();

    let mut degrees: Vec<Degree> = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let blocks: Vec<(usize, usize)> = (0..=k).rev().map(|i| (i, k - i)).collect();
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        let mut modules = Vec::with_capacity(blocks.len());
        let mut phis = Vec::with_capacity(blocks.len());
        let mut rank = 0;
        for &(i, j) in &blocks {
            offsets.push(dim);
            let (dp, dq) = (pm.k_dim(i), pn.k_dim(j));
            dim += dp * dq;
            let q_j = BModule::free(b.clone(), pn.rank(j));
            let y = tensor_module_action(chain.map(i), &q_j).map_err(|e| CoreError::Construction {
                degree: k,
                detail: format!("summand ({i},{j}): {e}"),
            })?;
            let (ri, sj) = (pm.rank(i), pn.rank(j));
            let mut cols = Vec::with_capacity(ri * sj * dtw);
            for alpha in 0..ri {
                for beta in 0..sj {
                    let mut v = vec![field.zero(); dp * dq];
                    v[(alpha * a.dim() + a.unit_index()) * dq + beta * b.dim() + b.unit_index()] = field.one();
                    for w in 0..dtw {
                        cols.push(y.action(w).mul_vec(&v));
                    }
                }
            }
            phis.push(Matrix::from_columns(field, dp * dq, &cols));
            rank += ri * sj;
            modules.push(y);
        }
        let phi = block_sum(field, &phis);
        if phi.rows() != phi.cols() {
            return Err(CoreError::Construction {
                degree: k,
                detail: "summand dimension is not a multiple of the algebra dimension".into(),
            });
        }
        let phi_inv = phi.inverse().ok_or_else(|| CoreError::Construction {
            degree: k,
            detail: "summands are not free on the expected generators".into(),
        })?;
        degrees.push(Degree {
            blocks,
            offsets,
            dim,
            modules,
            phi,
            phi_inv,
            rank,
        });
    }

    let mut tensor_ds = Vec::with_capacity(top);
    for k in 1..=top {
        let (src, dst) = (&degrees[k], &degrees[k - 1]);
        let mut d = Matrix::zeros(field, dst.dim, src.dim);
        for (bi, &(i, j)) in src.blocks.iter().enumerate() {
            let col0 = src.offsets[bi];
            let (dp, dq) = (pm.k_dim(i), pn.k_dim(j));
            if i >= 1 {
                let target = (k - 1) - (i - 1);
                let block = pm.expanded(i).kron(&Matrix::identity(field, dq));
                d.set_block(dst.offsets[target], col0, &block);
            }
            if j >= 1 {
                let target = (k - 1) - i;
                let mut block = Matrix::identity(field, dp).kron(&pn.expanded(j));
                if i % 2 == 1 {
                    block = block.neg();
                }
                d.set_block(dst.offsets[target], col0, &block);
            }
        }
        tensor_ds.push(d);
    }

    // free coordinates: d(g) read in the basis {e_w · g_t} of the target
    let mut free_ds = Vec::with_capacity(top);
    for k in 1..=top {
        let (src, dst) = (&degrees[k], &degrees[k - 1]);
        let coords = dst.phi_inv.mul(&tensor_ds[k - 1]).mul(&src.phi);
        let mut fm = FreeMatrix::zeros(tw.algebra(), dst.rank, src.rank);
        let unit = tw.algebra().unit_index();
        for g in 0..src.rank {
            let col = coords.column(g * dtw + unit);
            for t in 0..dst.rank {
                fm.set_entry(t, g, col[t * dtw..(t + 1) * dtw].to_vec());
            }
        }
        free_ds.push(fm);
    }

    let e_tensor = pm.augmentation().kron(pn.augmentation());
    let aug_free = e_tensor.mul(&degrees[0].phi);
    let complex = FreeComplex::new(
        tw.algebra().clone(),
        degrees.iter().map(|d| d.rank).collect(),
        free_ds,
        aug_free,
    )?;

    let mut children = Vec::new();

    let mut tensor_sq = Report::pass("tensor-d-squared", format!("degrees 2..={top}"));
    for k in 2..=top {
        let comp = tensor_ds[k - 2].mul(&tensor_ds[k - 1]);
        if let Some(col) = comp.first_nonzero_column() {
            tensor_sq = Report::fail(
                "tensor-d-squared",
                format!("d_{} ∘ d_{k} is nonzero", k - 1),
                Some(Witness::Entry { degree: k, row: 0, col }),
            );
            break;
        }
    }
    children.push(tensor_sq);
    children.push(check_d_squared(&complex));

    // the free-coordinate matrices must reproduce the tensor differential
    // on every basis vector, which holds iff d is a module map
    let mut linear = Report::pass("free-coordinates", format!("degrees 1..={top}"));
    for k in 1..=top {
        let lhs = complex.expanded(k);
        let rhs = degrees[k - 1].phi_inv.mul(&tensor_ds[k - 1]).mul(&degrees[k].phi);
        if let Some((row, col)) = lhs.first_difference(&rhs) {
            linear = Report::fail(
                "free-coordinates",
                format!("d_{k} is not a module map over the twisted algebra"),
                Some(Witness::Entry { degree: k, row, col }),
            );
            break;
        }
    }
    children.push(linear);

    let gens = generators_of_tw(&tw, false);
    let act = |deg: &Degree, s: usize| block_sum(field, &deg.modules.iter().map(|m| m.action(s).clone()).collect::<Vec<_>>());
    let mut equi = Report::pass(
        "generator-equivariance",
        format!("{} algebra generators on degrees 1..={top}", gens.len()),
    );
    'equi: for k in 1..=top {
        for &s in &gens {
            let lhs = act(&degrees[k - 1], s).mul(&tensor_ds[k - 1]);
            let rhs = tensor_ds[k - 1].mul(&act(&degrees[k], s));
            if let Some((row, col)) = lhs.first_difference(&rhs) {
                equi = Report::fail(
                    "generator-equivariance",
                    format!("d_{k} does not commute with {}", tw.algebra().labels()[s]),
                    Some(Witness::Entry { degree: k, row, col }),
                );
                break 'equi;
            }
        }
    }
    children.push(equi);

    let mn = tensor_module_action(m_compat, n_module)?;
    let y00 = &degrees[0].modules[0];
    let mut aug = Report::pass("augmentation-equivariance", "augmentation is a module map");
    for s in 0..dtw {
        let lhs = e_tensor.mul(y00.action(s));
        let rhs = mn.action(s).mul(&e_tensor);
        if let Some((row, col)) = lhs.first_difference(&rhs) {
            aug = Report::fail(
                "augmentation-equivariance",
                format!("augmentation does not commute with {}", tw.algebra().labels()[s]),
                Some(Witness::Entry { degree: 0, row, col }),
            );
            break;
        }
    }
    children.push(aug);

    let certificate = Report::all("twisted-product-complex", children);
    if !certificate.passed {
        let failure = certificate.first_failure().cloned().unwrap();
        let degree = match failure.witness {
            Some(Witness::Entry { degree, .. }) | Some(Witness::Degree { degree }) => degree,
            _ => 0,
        };
        return Err(CoreError::Construction {
            degree,
            detail: failure.summary,
        });
    }
    Ok(TwistedProductComplex {
        algebra: tw,
        complex,
        blocks: degrees.iter().map(|d| d.blocks.clone()).collect(),
        tensor_differentials: tensor_ds,
        to_tensor: degrees.into_iter().map(|d| d.phi).collect(),
        certificate,
    })
}
