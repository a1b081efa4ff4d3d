//! Compatibility maps `τ_{B,i}: B⊗P_i → P_i⊗B` for every degree of a free
//! resolution over A, certified as a chain map lifting `τ_{B,M}`.

use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::homology::complex::FreeComplex;
use crate::homology::lift::ChainMap;
use crate::matrix::Matrix;
use crate::modules::{block_diagonal, build_tau_bm, verify_compatibility, CompatMap, TTPModule};
use crate::operator::LinearOperator;
use crate::report::{Report, Witness};
use crate::shuffle::ShuffleTable;
use crate::twist::TwistedAlgebra;

#[derive(Clone, Debug)]
pub struct TauChain {
    maps: Vec<CompatMap>,
    certificate: Report,
}

impl TauChain {
    pub fn maps(&self) -> &[CompatMap] {
        &self.maps
    }

    pub fn map(&self, deg: usize) -> &CompatMap {
        &self.maps[deg]
    }

    pub fn top(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn certificate(&self) -> &Report {
        &self.certificate
    }
}

/// `P_deg` as a module over the twisted algebra: A acts coordinatewise and
/// `1 ⊗ y` acts by `delta_map`.
pub fn degree_module(tw: &Arc<TwistedAlgebra>, p: &FreeComplex, deg: usize, delta_map: &Matrix) -> Result<TTPModule> {
    let a = tw.a();
    let acts = (0..a.dim())
        .map(|k| block_diagonal(&a.left_mult_matrix(k), p.rank(deg)))
        .collect();
    TTPModule::from_a_action(tw.clone(), acts, delta_map.clone())
}

/// Builds `τ_{B,i}` from `s_(k,j)(σ_i, δ_i)` in every degree of `p` and
/// certifies the result.
pub fn build_tau_b_chain(
    tw: &Arc<TwistedAlgebra>,
    p: &FreeComplex,
    sigma_chain: &ChainMap,
    delta_chain: &ChainMap,
    m_compat: &CompatMap,
) -> Result<TauChain> {
    let n = tw
        .b()
        .truncation()
        .ok_or_else(|| CoreError::Domain("B must be a truncated polynomial algebra".into()))?;
    let top = p.top().min(sigma_chain.top()).min(delta_chain.top());
    let mut maps = Vec::with_capacity(top + 1);
    for deg in 0..=top {
        let s = sigma_chain.map(deg).matrix();
        let d = delta_chain.map(deg).matrix();
        let table = ShuffleTable::from_matrices(s, d, n);
        if let Some((i, j, _)) = table.first_nonvanishing(n, 0..=n - 1) {
            return Err(CoreError::RejectedTauChain { degree: deg, i, j });
        }
        if s.rank() != s.rows() {
            return Err(CoreError::Construction {
                degree: deg,
                detail: "sigma lift is not bijective; refusing to build the compatibility map".into(),
            });
        }
        let module = Arc::new(degree_module(tw, p, deg, d).map_err(|e| CoreError::Construction {
            degree: deg,
            detail: e.to_string(),
        })?);
        let cm = build_tau_bm(module, &LinearOperator::new(s.clone())).map_err(|e| match e {
            CoreError::RejectedCompat { i, j } => CoreError::RejectedTauChain { degree: deg, i, j },
            other => CoreError::Construction {
                degree: deg,
                detail: other.to_string(),
            },
        })?;
        maps.push(cm);
    }
    certify_tau_chain(p, maps, m_compat)
}

/// Certifies per-degree compatibility and the chain-map squares
/// `τ_{B,i-1}(1⊗d_i) = (d_i⊗1)τ_{B,i}` and `(ε⊗1)τ_{B,0} = τ_{B,M}(1⊗ε)`.
pub fn certify_tau_chain(p: &FreeComplex, maps: Vec<CompatMap>, m_compat: &CompatMap) -> Result<TauChain> {
    if maps.is_empty() {
        return Err(CoreError::Domain("compatibility chain needs degree 0".into()));
    }
    let field = p.field();
    let mut children = Vec::new();
    let mut certified = Vec::with_capacity(maps.len());
    for (deg, cm) in maps.into_iter().enumerate() {
        let v = verify_compatibility(&cm);
        let mut r = v.report;
        r.check = format!("compatibility-degree-{deg}");
        let Some(cm) = v.value else {
            return Err(CoreError::Construction {
                degree: deg,
                detail: format!("compatibility relations fail: {}", r.first_failure().map(|f| f.summary.clone()).unwrap_or_default()),
            });
        };
        children.push(r);
        certified.push(cm);
    }
    let n = m_compat.module().algebra().b().dim();
    let id_b = Matrix::identity(field, n);

    let eps = p.augmentation();
    let lhs = eps.kron(&id_b).mul(certified[0].matrix());
    let rhs = m_compat.matrix().mul(&id_b.kron(eps));
    children.push(match lhs.first_difference(&rhs) {
        None => Report::pass("tau-chain-augmentation", "lifts the compatibility map of the module"),
        Some((row, col)) => Report::fail(
            "tau-chain-augmentation",
            "augmentation square does not commute",
            Some(Witness::Entry { degree: 0, row, col }),
        ),
    });

    let mut squares = Report::pass("tau-chain-squares", format!("degrees 1..={}", certified.len() - 1));
    for deg in 1..certified.len() {
        let d = p.expanded(deg);
        let lhs = certified[deg - 1].matrix().mul(&id_b.kron(&d));
        let rhs = d.kron(&id_b).mul(certified[deg].matrix());
        if let Some((row, col)) = lhs.first_difference(&rhs) {
            squares = Report::fail(
                "tau-chain-squares",
                format!("square at degree {deg} does not commute"),
                Some(Witness::Entry { degree: deg, row, col }),
            );
            break;
        }
    }
    children.push(squares);
    let certificate = Report::all("tau-chain", children);
    if !certificate.passed {
        let degree = match certificate.witness {
            Some(Witness::Entry { degree, .. }) => degree,
            _ => 0,
        };
        return Err(CoreError::Construction {
            degree,
            detail: certificate.first_failure().map(|f| f.summary.clone()).unwrap_or_default(),
        });
    }
    Ok(TauChain {
        maps: certified,
        certificate,
    })
}
