//! End-to-end resolution of the ground field over `A ⊗_τ B` from a
//! certified twisting map: lifts σ and δ to the standard resolution of k
//! over A, builds the compatibility chain, assembles the twisted product
//! complex with the standard resolution over B, and certifies exactness.

use std::sync::Arc;

use log::info;

use crate::error::{CoreError, Result};
use crate::homology::{
    build_tau_b_chain, check_exactness, lift_through, standard_resolution_over, twisted_product_complex,
    ChainContract, ChainMap, Equivariance, FreeComplex, TauChain, TwistedProductComplex,
};
use crate::matrix::Matrix;
use crate::modules::{build_tau_bm, verify_compatibility, BModule, CompatMap, TTPModule};
use crate::operator::{verify_automorphism, verify_sigma_derivation, LinearOperator};
use crate::report::Report;
use crate::twist::TwistedAlgebra;

/// Everything built on the way to a resolution of k, kept for inspection
/// and cross-checks.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub sigma: LinearOperator,
    pub delta: LinearOperator,
    pub resolution_a: FreeComplex,
    pub resolution_b: FreeComplex,
    pub module_compat: CompatMap,
    pub sigma_chain: ChainMap,
    pub delta_chain: ChainMap,
    pub tau_chain: TauChain,
    pub product: TwistedProductComplex,
    pub exactness: Report,
    pub report: Report,
}

impl Resolution {
    pub fn complex(&self) -> &FreeComplex {
        self.product.complex()
    }

    pub fn passed(&self) -> bool {
        self.report.passed
    }
}

/// `τ_{B,k}` for the trivial module, certified.
pub fn trivial_compat(tw: &Arc<TwistedAlgebra>) -> Result<CompatMap> {
    let m = Arc::new(TTPModule::trivial(tw.clone())?);
    let cm = build_tau_bm(m, &LinearOperator::identity(tw.algebra().field(), 1))?;
    let v = verify_compatibility(&cm);
    v.value.ok_or_else(|| {
        CoreError::InvariantBreach(format!(
            "compatibility map of the ground field fails: {}",
            v.report.first_failure().map(|f| f.summary.clone()).unwrap_or_default()
        ))
    })
}

/// Resolves k over the twisted algebra through degree `top` and certifies
/// exactness at degrees `0..top`. Construction failures are errors; a
/// failed exactness check is reported in the returned value.
pub fn resolve_ground_field(tw: &Arc<TwistedAlgebra>, top: usize) -> Result<Resolution> {
    if top < 1 {
        return Err(CoreError::InvalidDimension("resolution degree must be at least 1".into()));
    }
    let a = tw.a().clone();
    let (sigma, delta) = tw.tau().sigma_delta();
    let sigma = verify_automorphism(&a, &sigma)?
        .into_value()
        .ok_or_else(|| CoreError::Precondition("sigma read off the twisting map is not an automorphism".into()))?;
    let delta = verify_sigma_derivation(&a, &sigma, &delta)?
        .into_value()
        .ok_or_else(|| CoreError::Precondition("delta read off the twisting map is not a sigma-derivation".into()))?;

    let resolution_a = standard_resolution_over(a.clone(), top)?;
    let resolution_b = standard_resolution_over(tw.b().clone(), top)?;
    let module_compat = trivial_compat(tw)?;
    let m = module_compat.module();
    let one = Matrix::identity(a.field(), 1);
    let f = m.action(tw.b_index(1.min(tw.b().dim() - 1))).clone();

    info!("lifting sigma and delta through degree {top}");
    let sigma_chain = lift_through(
        &resolution_a,
        &resolution_a,
        &one,
        &Equivariance::Linear {
            sigma: sigma.matrix().clone(),
        },
        ChainContract::LiftsIdentityToSigma,
    )?;
    let delta_chain = lift_through(
        &resolution_a,
        &resolution_a,
        &f,
        &Equivariance::Skew {
            sigma: sigma.matrix().clone(),
            delta: delta.matrix().clone(),
        },
        ChainContract::LiftsXAction,
    )?;
    info!("building compatibility chain");
    let tau_chain = build_tau_b_chain(tw, &resolution_a, &sigma_chain, &delta_chain, &module_compat)?;
    info!("assembling twisted product complex");
    let n_module = BModule::trivial(tw.b().clone())?;
    let product = twisted_product_complex(&resolution_a, &resolution_b, &tau_chain, &module_compat, &n_module, top)?;
    let exactness = check_exactness(product.complex(), top)?;

    let report = Report::all(
        "resolution",
        vec![
            sigma_chain.certificate().clone().renamed("sigma-lift"),
            delta_chain.certificate().clone().renamed("delta-lift"),
            tau_chain.certificate().clone(),
            product.certificate().clone(),
            exactness.clone(),
        ],
    )
    .with_note(format!("ranks {:?}", product.complex().ranks()));
    Ok(Resolution {
        sigma,
        delta,
        resolution_a,
        resolution_b,
        module_compat,
        sigma_chain,
        delta_chain,
        tau_chain,
        product,
        exactness,
        report,
    })
}
