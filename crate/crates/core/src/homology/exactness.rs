//! Exactness of an augmented complex through a given degree, decided by
//! exact ranks of the differentials on underlying vector spaces.

use rayon::prelude::*;

use crate::error::{CoreError, Result};
use crate::homology::complex::FreeComplex;
use crate::report::{Report, Witness};

/// Checks `X_through → … → X_0 → M → 0` for exactness: `ε` is onto,
/// `ker ε = im d_1`, and `ker d_n = im d_{n+1}` for `1 <= n < through`.
/// Degree `through` itself is only used as a source of boundaries.
pub fn check_exactness(x: &FreeComplex, through: usize) -> Result<Report> {
    if through > x.top() {
        return Err(CoreError::Range {
            requested: through,
            available: x.top(),
        });
    }
    let ranks: Vec<usize> = (1..=through).into_par_iter().map(|k| x.expanded(k).rank()).collect();
    let rank_d = |k: usize| ranks[k - 1];
    let eps = x.augmentation();
    let eps_rank = eps.rank();
    let mut children = Vec::new();

    children.push(if eps_rank == x.module_dim() {
        Report::pass("augmentation-onto", format!("rank {eps_rank}"))
    } else {
        Report::fail(
            "augmentation-onto",
            format!("augmentation has rank {eps_rank} onto a module of dimension {}", x.module_dim()),
            Some(Witness::Degree { degree: 0 }),
        )
    });

    if through >= 1 {
        let kernel = x.k_dim(0) - eps_rank;
        let composite_zero = eps.mul(&x.expanded(1)).is_zero();
        children.push(if composite_zero && rank_d(1) == kernel {
            Report::pass("exact-at-0", format!("dim ker ε = rank d_1 = {kernel}"))
        } else {
            Report::fail(
                "exact-at-0",
                format!("dim ker ε = {kernel}, rank d_1 = {}, ε∘d_1 = 0: {composite_zero}", rank_d(1)),
                Some(Witness::Degree { degree: 0 }),
            )
        });
    }
    for n in 1..through {
        let (a, b, dim) = (rank_d(n), rank_d(n + 1), x.k_dim(n));
        children.push(if a + b == dim {
            Report::pass(format!("exact-at-{n}"), format!("rank d_{n} + rank d_{} = {dim}", n + 1))
        } else {
            Report::fail(
                format!("exact-at-{n}"),
                format!("rank d_{n} + rank d_{} = {} but dim X_{n} = {dim}", n + 1, a + b),
                Some(Witness::Degree { degree: n }),
            )
        });
    }
    let mut report = Report::all("exactness", children);
    report.summary = format!("through degree {through}: {}", report.summary);
    Ok(report.with_note(format!(
        "ranks of d_1..d_{through}: {}",
        ranks.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::homology::resolution::standard_truncated_resolution;

    #[test]
    fn standard_resolution_is_exact() {
        let c = standard_truncated_resolution(FieldSpec::new(5).unwrap(), 5, 6).unwrap();
        let r = check_exactness(&c, 5).unwrap();
        assert!(r.passed, "{r}");
        assert_eq!(r.children.len(), 6);
    }

    #[test]
    fn broken_differential_is_caught_at_its_degree() {
        let c = standard_truncated_resolution(FieldSpec::new(3).unwrap(), 3, 4).unwrap();
        let a = c.algebra().clone();
        let damaged = c.with_entry(2, 0, 0, a.basis_vector(1)).unwrap();
        let r = check_exactness(&damaged, 3).unwrap();
        assert!(!r.passed);
        assert!(matches!(r.witness, Some(Witness::Degree { degree: 1 })));
    }

    #[test]
    fn through_beyond_top_is_a_range_error() {
        let c = standard_truncated_resolution(FieldSpec::new(3).unwrap(), 3, 2).unwrap();
        assert_eq!(
            check_exactness(&c, 3).unwrap_err(),
            CoreError::Range { requested: 3, available: 2 }
        );
    }
}
