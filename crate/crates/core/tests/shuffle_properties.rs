use num_traits::ToPrimitive;
use proptest::prelude::*;
use twisted_ore::field::{binomial, FieldSpec};
use twisted_ore::matrix::Matrix;
use twisted_ore::operator::LinearOperator;
use twisted_ore::shuffle::{shuffle_by_words, words, ShuffleIndex, ShuffleTable};

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::new(2).unwrap()),
        Just(FieldSpec::new(3).unwrap()),
        Just(FieldSpec::new(5).unwrap()),
        Just(FieldSpec::new(7).unwrap()),
        Just(FieldSpec::rationals()),
    ]
}

fn matrix(field: FieldSpec, n: usize, entries: &[(i64, i64)]) -> Matrix {
    let rows = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let (num, den) = entries[r * n + c];
                    if field.is_rational() {
                        field.parse(&format!("{num}/{den}")).unwrap()
                    } else {
                        field.from_i64(num)
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(field, rows).unwrap()
}

prop_compose! {
    fn operator_pair()(field in field_strategy(), n in 1usize..4)
        (field in Just(field), n in Just(n),
         f in prop::collection::vec((-4i64..5, 1i64..4), n * n),
         g in prop::collection::vec((-4i64..5, 1i64..4), n * n)) -> (Matrix, Matrix) {
        (matrix(field, n, &f), matrix(field, n, &g))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn recursion_holds_on_both_sides((f, g) in operator_pair(), i in 0usize..=6, j in 0usize..=6) {
        prop_assume!(i + j <= 6 && i + j >= 1);
        let (fo, go) = (LinearOperator::new(f.clone()), LinearOperator::new(g.clone()));
        let s = shuffle_by_words(i, j, &fo, &go).unwrap().into_matrix();
        let prev = |a: usize, b: usize| shuffle_by_words(a, b, &fo, &go).unwrap().into_matrix();
        let zero = Matrix::zeros(f.field(), f.rows(), f.cols());
        // outermost letter first
        let left = (if i > 0 { f.mul(&prev(i - 1, j)) } else { zero.clone() })
            .add(&if j > 0 { g.mul(&prev(i, j - 1)) } else { zero.clone() });
        // innermost letter first
        let right = (if i > 0 { prev(i - 1, j).mul(&f) } else { zero.clone() })
            .add(&if j > 0 { prev(i, j - 1).mul(&g) } else { zero });
        prop_assert_eq!(&s, &left);
        prop_assert_eq!(&s, &right);
        let table = ShuffleTable::from_matrices(&f, &g, 6);
        prop_assert_eq!(table.get(i, j), &s);
    }

    #[test]
    fn term_count_matches_binomial((f, _g) in operator_pair(), i in 0usize..=6, j in 0usize..=6) {
        prop_assume!(i + j <= 6);
        let expected = binomial((i + j) as u64, i as u64).to_u64().unwrap();
        prop_assert_eq!(words(i, j).len() as u64, expected);
        prop_assert_eq!(ShuffleIndex { i, j }.term_count(), expected);
        // with both letters equal to the same operator every word agrees
        let fo = LinearOperator::new(f.clone());
        let s = shuffle_by_words(i, j, &fo, &fo).unwrap().into_matrix();
        let power = f.pow(i + j).scale(&f.field().from_i64(expected as i64));
        prop_assert_eq!(s, power);
    }
}

#[test]
fn words_are_distinct_and_balanced() {
    let w = words(3, 2);
    assert_eq!(w.len(), 10);
    let mut sorted = w.clone();
    sorted.dedup();
    assert_eq!(sorted.len(), 10);
    assert!(w.iter().all(|x| x.iter().filter(|b| **b).count() == 3));
}
