use std::sync::Arc;
use std::time::Instant;

use twisted_ore::algebra::{check_associativity, truncated_poly_algebra};
use twisted_ore::error::CoreError;
use twisted_ore::family::{family_algebra, family_operators, generic_twisted_algebra, quantum_twisted_algebra, Example4Params};
use twisted_ore::field::FieldSpec;
use twisted_ore::operator::{derivation_from_generator, verify_automorphism, verify_sigma_derivation, LinearOperator};
use twisted_ore::report::Witness;
use twisted_ore::shuffle::verify_truncation_conditions;
use twisted_ore::twist::{build_tau, twisted_algebra, verify_twisting_axioms};

#[test]
fn gate_axioms_and_associativity_for_small_family() {
    for (p, t, alpha) in [(3, 2, 1), (3, 2, 2), (5, 3, 4)] {
        let params = Example4Params::from_i64(p, t, alpha).unwrap();
        let a = family_algebra(&params).unwrap();
        let (sigma, delta) = family_operators(&params, &a).unwrap();
        assert!(verify_truncation_conditions(&sigma, &delta, p as usize).unwrap().passed);
        let start = Instant::now();
        let tw = generic_twisted_algebra(&params).unwrap();
        assert!(verify_twisting_axioms(tw.tau()).passed);
        assert!(check_associativity(tw.algebra()).passed);
        assert!(start.elapsed().as_secs() < 10, "{params}");
    }
}

#[test]
fn char_zero_derivation_fails_at_one_one() {
    let f = FieldSpec::rationals();
    let a = Arc::new(truncated_poly_algebra(f, 3).unwrap());
    let id = verify_automorphism(&a, &LinearOperator::identity(f, 3)).unwrap().value.unwrap();
    // δ(x) = x^2 squares to zero, so s_(0,2) vanishes, but s_(1,1) = 2δ ≠ 0
    let d = derivation_from_generator(&a, &id, &a.basis_vector(2)).unwrap();
    let d = verify_sigma_derivation(&a, &id, &d).unwrap().value.unwrap();
    let r = verify_truncation_conditions(&id, &d, 2).unwrap();
    assert!(!r.passed);
    assert!(matches!(r.witness, Some(Witness::ShuffleIndex { i: 1, j: 1, .. })));
    assert_eq!(build_tau(a, &id, &d, 2).unwrap_err(), CoreError::RejectedTwist { i: 1, j: 1 });
}

#[test]
fn quantum_plane_relation() {
    let f = FieldSpec::new(7).unwrap();
    let q = f.from_i64(3);
    let tw = quantum_twisted_algebra(f, &q).unwrap();
    // (1⊗y)(x⊗1) = q x⊗y
    let prod = tw.algebra().product(tw.b_index(1), tw.a_index(1));
    assert_eq!(prod, &vec![(tw.index(1, 1), q)]);
    assert!(twisted_algebra(tw.tau().clone()).is_ok());
}
