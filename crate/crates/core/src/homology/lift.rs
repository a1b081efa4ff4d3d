//! Comparison-theorem lifts of module maps to free complexes.
//!
//! Two equivariance classes occur: σ-semilinear maps (`u(az) = σ(a)u(z)`)
//! and (σ,δ)-skew maps (`u(az) = σ(a)u(z) + δ(a)z`). A lift is written as
//! `u = u' − u''` where `u'` applies the defining operator in each free
//! summand and the correction `u''` is σ-semilinear, hence determined by
//! its values on generators. Those values solve a linear system degree by
//! degree; the canonical (free variables zero) solution is returned.

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::field::Scalar;
use crate::homology::complex::FreeComplex;
use crate::homology::resolution::element_action;
use crate::matrix::{solve, solve_many, Matrix};
use crate::modules::block_diagonal;
use crate::operator::LinearOperator;
use crate::report::{Report, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivariance {
    /// `u(a·z) = σ(a)·u(z)`.
    Linear { sigma: Matrix },
    /// `u(a·z) = σ(a)·u(z) + δ(a)·z`; source and target must coincide.
    Skew { sigma: Matrix, delta: Matrix },
}

impl Equivariance {
    fn sigma(&self) -> &Matrix {
        match self {
            Equivariance::Linear { sigma } | Equivariance::Skew { sigma, .. } => sigma,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainContract {
    LiftsIdentityToSigma,
    LiftsXAction,
    CompatTau,
}

/// Per-degree k-linear maps between the underlying spaces of two complexes.
#[derive(Clone, Debug)]
pub struct ChainMap {
    contract: ChainContract,
    maps: Vec<LinearOperator>,
    certificate: Report,
}

impl ChainMap {
    /// Wraps explicit maps. The certificate is filled by [`verify_lift`].
    pub fn from_maps(contract: ChainContract, maps: Vec<LinearOperator>, certificate: Report) -> Self {
        Self {
            contract,
            maps,
            certificate,
        }
    }

    pub fn contract(&self) -> ChainContract {
        self.contract
    }

    pub fn maps(&self) -> &[LinearOperator] {
        &self.maps
    }

    pub fn map(&self, deg: usize) -> &LinearOperator {
        &self.maps[deg]
    }

    pub fn top(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn certificate(&self) -> &Report {
        &self.certificate
    }
}

fn generator_vector(c: &FreeComplex, deg: usize, alpha: usize) -> Vec<Scalar> {
    let alg = c.algebra();
    let mut v = vec![c.field().zero(); c.k_dim(deg)];
    v[alpha * alg.dim() + alg.unit_index()] = c.field().one();
    v
}

/// Solves the lifting problem for `base: M → M'` through
/// `min(source.top, target.top)` and certifies the result.
pub fn lift_through(
    source: &FreeComplex,
    target: &FreeComplex,
    base: &Matrix,
    equivariance: &Equivariance,
    contract: ChainContract,
) -> Result<ChainMap> {
    let alg = source.algebra();
    if alg != target.algebra() && **alg != **target.algebra() {
        return Err(CoreError::Domain("complexes are over different algebras".into()));
    }
    if base.cols() != source.module_dim() || base.rows() != target.module_dim() {
        return Err(CoreError::Domain("base map does not match the augmented modules".into()));
    }
    let top = source.top().min(target.top());
    if let Equivariance::Skew { .. } = equivariance {
        if (0..=top).any(|d| source.rank(d) != target.rank(d)) || base.rows() != base.cols() {
            return Err(CoreError::Domain("skew lifts need identical source and target".into()));
        }
    }
    let dim = alg.dim();
    let sigma = equivariance.sigma();
    let sigma_images: Vec<Vec<Scalar>> = (0..dim).map(|c| sigma.mul_vec(&alg.basis_vector(c))).collect();

    let mut maps: Vec<Matrix> = Vec::with_capacity(top + 1);
    for deg in 0..=top {
        let (rs, rt) = (source.rank(deg), target.rank(deg));
        let coordinatewise = match equivariance {
            Equivariance::Linear { sigma } if rs == rt => block_diagonal(sigma, rs),
            Equivariance::Linear { .. } => Matrix::zeros(alg.field(), target.k_dim(deg), source.k_dim(deg)),
            Equivariance::Skew { delta, .. } => block_diagonal(delta, rs),
        };
        // system: target_map · w_α = target_map · u'(e_α) − (previous)(e_α)
        let (system, previous) = if deg == 0 {
            (target.augmentation().clone(), base.mul(source.augmentation()))
        } else {
            (target.expanded(deg), maps[deg - 1].mul(&source.expanded(deg)))
        };
        let columns: Vec<Vec<Scalar>> = (0..rs)
            .map(|alpha| {
                let e = generator_vector(source, deg, alpha);
                let lhs = system.mul_vec(&coordinatewise.mul_vec(&e));
                let rhs = previous.mul_vec(&e);
                lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect()
            })
            .collect();
        let rhs = Matrix::from_columns(alg.field(), system.rows(), &columns);
        let w = match solve_many(&system, &rhs) {
            Some(w) => w,
            None => {
                let generator = (0..rs).find(|&a| solve(&system, &columns[a]).is_none()).unwrap_or(0);
                return Err(CoreError::NoLift { degree: deg, generator });
            }
        };
        let mut u = coordinatewise.clone();
        for alpha in 0..rs {
            let w_alpha = w.column(alpha);
            for (c, sc) in sigma_images.iter().enumerate() {
                let correction = element_action(target, deg, sc).mul_vec(&w_alpha);
                let col = alpha * dim + c;
                for (row, v) in correction.iter().enumerate() {
                    if !v.is_zero() {
                        let cur = u.get(row, col) - v;
                        u.set(row, col, cur);
                    }
                }
            }
        }
        maps.push(u);
    }
    let maps: Vec<LinearOperator> = maps.into_iter().map(LinearOperator::new).collect();
    let certificate = verify_lift(source, target, base, equivariance, &maps);
    if !certificate.passed {
        return Err(CoreError::InvariantBreach(format!(
            "solver output fails its own contract: {}",
            certificate.first_failure().map(|r| r.summary.clone()).unwrap_or_default()
        )));
    }
    Ok(ChainMap::from_maps(contract, maps, certificate))
}

/// The three lift contracts: augmentation square, commuting squares with
/// the differentials, and equivariance on every basis pair.
pub fn verify_lift(
    source: &FreeComplex,
    target: &FreeComplex,
    base: &Matrix,
    equivariance: &Equivariance,
    maps: &[LinearOperator],
) -> Report {
    let alg = source.algebra();
    let top = maps.len().saturating_sub(1);
    let mut children = Vec::new();
    if maps.is_empty() || top > source.top() || top > target.top() {
        return Report::fail("lift", "chain map length does not fit the complexes", None);
    }
    for (deg, u) in maps.iter().enumerate() {
        if u.domain_dim() != source.k_dim(deg) || u.codomain_dim() != target.k_dim(deg) {
            return Report::fail("lift", format!("map in degree {deg} has the wrong shape"), Some(Witness::Degree { degree: deg }));
        }
    }

    let aug_l = target.augmentation().mul(maps[0].matrix());
    let aug_r = base.mul(source.augmentation());
    children.push(match aug_l.first_difference(&aug_r) {
        None => Report::pass("lift-augmentation", "augmentation square commutes"),
        Some((row, col)) => Report::fail(
            "lift-augmentation",
            "augmentation square does not commute",
            Some(Witness::Entry { degree: 0, row, col }),
        ),
    });

    let mut squares = Report::pass("lift-squares", format!("degrees 1..={top}"));
    for deg in 1..=top {
        let l = target.expanded(deg).mul(maps[deg].matrix());
        let r = maps[deg - 1].matrix().mul(&source.expanded(deg));
        if let Some((row, col)) = l.first_difference(&r) {
            squares = Report::fail(
                "lift-squares",
                format!("square at degree {deg} does not commute"),
                Some(Witness::Entry { degree: deg, row, col }),
            );
            break;
        }
    }
    children.push(squares);

    let sigma = equivariance.sigma();
    let mut equi = Report::pass(
        "lift-equivariance",
        format!("all algebra basis elements on degrees 0..={top}"),
    );
    'deg: for (deg, u) in maps.iter().enumerate() {
        for c in 0..alg.dim() {
            let e = alg.basis_vector(c);
            let lhs = u.matrix().mul(&source.action(deg, c));
            let mut rhs = element_action(target, deg, &sigma.mul_vec(&e)).mul(u.matrix());
            if let Equivariance::Skew { delta, .. } = equivariance {
                rhs = rhs.add(&element_action(source, deg, &delta.mul_vec(&e)));
            }
            if let Some((_, col)) = lhs.first_difference(&rhs) {
                equi = Report::fail(
                    "lift-equivariance",
                    format!("u_{deg}({}·z) breaks the equivariance rule", alg.labels()[c]),
                    Some(Witness::Pair { first: c, second: col }),
                );
                break 'deg;
            }
        }
    }
    children.push(equi);
    Report::all("lift", children)
}
