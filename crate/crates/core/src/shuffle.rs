//! Shuffle polynomials `s_(i,j)(F, G)`: the sum over all words with `i`
//! letters `F` and `j` letters `G`, each word read as a composition.

use crate::error::{CoreError, Result};
use crate::field::binomial;
use crate::matrix::Matrix;
use crate::operator::{LinearOperator, OperatorTag};
use crate::report::{Report, Witness};

/// Above this total length the words are no longer enumerated explicitly.
pub const WORD_ENUMERATION_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShuffleIndex {
    pub i: usize,
    pub j: usize,
}

impl ShuffleIndex {
    pub fn term_count(&self) -> u64 {
        use num_traits::ToPrimitive;
        binomial((self.i + self.j) as u64, self.i as u64)
            .to_u64()
            .expect("term count fits in u64")
    }
}

/// All words with `i` ones (first operator) and `j` zeros (second
/// operator), in lexicographic order of the bit strings.
pub fn words(i: usize, j: usize) -> Vec<Vec<bool>> {
    fn rec(i: usize, j: usize, prefix: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if i == 0 && j == 0 {
            out.push(prefix.clone());
            return;
        }
        if j > 0 {
            prefix.push(false);
            rec(i, j - 1, prefix, out);
            prefix.pop();
        }
        if i > 0 {
            prefix.push(true);
            rec(i - 1, j, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(i, j, &mut Vec::with_capacity(i + j), &mut out);
    out
}

/// Composite of the operators named by `word`, leftmost letter outermost.
pub fn evaluate_word(word: &[bool], f: &Matrix, g: &Matrix) -> Matrix {
    let mut acc = Matrix::identity(f.field(), f.rows());
    for &letter in word.iter().rev() {
        acc = if letter { f.mul(&acc) } else { g.mul(&acc) };
    }
    acc
}

fn check_pair(f: &LinearOperator, g: &LinearOperator) -> Result<()> {
    let n = f.domain_dim();
    if f.codomain_dim() != n || g.domain_dim() != n || g.codomain_dim() != n {
        return Err(CoreError::Domain("shuffle operands must be square of equal size".into()));
    }
    if f.field() != g.field() {
        return Err(CoreError::Domain("shuffle operands over different fields".into()));
    }
    Ok(())
}

/// Explicit word enumeration. Kept as an independent route for testing the
/// recursion.
pub fn shuffle_by_words(i: usize, j: usize, f: &LinearOperator, g: &LinearOperator) -> Result<LinearOperator> {
    check_pair(f, g)?;
    let n = f.domain_dim();
    let mut sum = Matrix::zeros(f.field(), n, n);
    for w in words(i, j) {
        sum = sum.add(&evaluate_word(&w, f.matrix(), g.matrix()));
    }
    Ok(LinearOperator::new(sum))
}

/// `s_(i,j)(F, G)`, with `s_(0,0)` the identity.
pub fn shuffle_operator(i: usize, j: usize, f: &LinearOperator, g: &LinearOperator) -> Result<LinearOperator> {
    if i + j <= WORD_ENUMERATION_LIMIT {
        shuffle_by_words(i, j, f, g)
    } else {
        let table = ShuffleTable::new(f, g, i + j)?;
        Ok(LinearOperator::new(table.get(i, j).clone()))
    }
}

/// All `s_(i,j)` with `i + j <= max_total`, filled by
/// `s_(i,j) = F s_(i-1,j) + G s_(i,j-1)`.
#[derive(Clone, Debug)]
pub struct ShuffleTable {
    max_total: usize,
    entries: Vec<Vec<Matrix>>,
}

impl ShuffleTable {
    pub fn new(f: &LinearOperator, g: &LinearOperator, max_total: usize) -> Result<Self> {
        check_pair(f, g)?;
        Ok(Self::from_matrices(f.matrix(), g.matrix(), max_total))
    }

    pub fn from_matrices(f: &Matrix, g: &Matrix, max_total: usize) -> Self {
        let field = f.field();
        let n = f.rows();
        let mut entries: Vec<Vec<Matrix>> = Vec::with_capacity(max_total + 1);
        for i in 0..=max_total {
            let mut row = Vec::with_capacity(max_total + 1 - i);
            for j in 0..=(max_total - i) {
                let m = if i == 0 && j == 0 {
                    Matrix::identity(field, n)
                } else {
                    let mut acc = Matrix::zeros(field, n, n);
                    if i > 0 {
                        acc = acc.add(&f.mul(&entries[i - 1][j]));
                    }
                    if j > 0 {
                        acc = acc.add(&g.mul(&row[j - 1]));
                    }
                    acc
                };
                row.push(m);
            }
            entries.push(row);
        }
        Self { max_total, entries }
    }

    pub fn max_total(&self) -> usize {
        self.max_total
    }

    pub fn get(&self, i: usize, j: usize) -> &Matrix {
        &self.entries[i][j]
    }

    /// First `(i, j)` with `i + j = total`, `i` ascending over `i_range`,
    /// whose operator is nonzero, together with a basis vector it does not
    /// kill.
    pub fn first_nonvanishing(
        &self,
        total: usize,
        i_range: std::ops::RangeInclusive<usize>,
    ) -> Option<(usize, usize, usize)> {
        for i in i_range {
            if i > total {
                break;
            }
            let j = total - i;
            if let Some(col) = self.get(i, j).first_nonzero_column() {
                return Some((i, j, col));
            }
        }
        None
    }
}

/// `s_(i,j)(σ, δ) = 0` for all `i + j = n` with `0 <= i <= n-1`.
pub fn verify_truncation_conditions(
    sigma: &LinearOperator,
    delta: &LinearOperator,
    n: usize,
) -> Result<Report> {
    if sigma.tag() != OperatorTag::Automorphism {
        return Err(CoreError::Precondition("sigma has not been verified as an automorphism".into()));
    }
    if delta.tag() != OperatorTag::Derivation {
        return Err(CoreError::Precondition("delta has not been verified as a sigma-derivation".into()));
    }
    if n == 0 {
        return Err(CoreError::InvalidDimension("truncation order must be positive".into()));
    }
    let table = ShuffleTable::new(sigma, delta, n)?;
    let check = "truncation-conditions";
    let range = format!("checked s_(i,j)(sigma, delta) for i + j = {n}, 0 <= i <= {}, 1 <= j <= {n}", n - 1);
    Ok(match table.first_nonvanishing(n, 0..=n - 1) {
        None => Report::pass(check, format!("all {n} operators vanish")).with_note(range),
        Some((i, j, basis)) => Report::fail(
            check,
            format!("s_({i},{j})(sigma, delta) is nonzero"),
            Some(Witness::ShuffleIndex { i, j, basis }),
        )
        .with_note(range),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn op(field: FieldSpec, rows: &[&[i64]]) -> LinearOperator {
        LinearOperator::new(
            Matrix::from_rows(
                field,
                rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn words_are_lexicographic() {
        let w = words(1, 2);
        assert_eq!(
            w,
            vec![vec![false, false, true], vec![false, true, false], vec![true, false, false]]
        );
        assert_eq!(words(2, 2).len(), 6);
        assert_eq!(words(0, 0), vec![Vec::<bool>::new()]);
    }

    #[test]
    fn one_two_shuffle_matches_three_words() {
        let f = FieldSpec::rationals();
        let s = op(f, &[&[1, 2], &[0, 3]]);
        let d = op(f, &[&[0, 1], &[5, 0]]);
        let (sm, dm) = (s.matrix(), d.matrix());
        let expected = sm
            .mul(&dm.mul(dm))
            .add(&dm.mul(&sm.mul(dm)))
            .add(&dm.mul(&dm.mul(sm)));
        assert_eq!(shuffle_operator(1, 2, &s, &d).unwrap().matrix(), &expected);
    }

    #[test]
    fn empty_word_is_identity() {
        let f = FieldSpec::new(3).unwrap();
        let s = op(f, &[&[1, 2], &[0, 1]]);
        assert!(shuffle_operator(0, 0, &s, &s).unwrap().matrix().is_identity());
    }

    #[test]
    fn recursion_route_beyond_enumeration_limit() {
        let f = FieldSpec::new(7).unwrap();
        let s = op(f, &[&[1, 1], &[0, 1]]);
        let d = op(f, &[&[0, 0], &[1, 0]]);
        let by_table = shuffle_operator(7, 7, &s, &d).unwrap();
        assert_eq!(by_table, shuffle_by_words(7, 7, &s, &d).unwrap());
    }

    #[test]
    fn mismatched_sizes_rejected() {
        let f = FieldSpec::rationals();
        let a = LinearOperator::identity(f, 2);
        let b = LinearOperator::identity(f, 3);
        assert!(matches!(shuffle_operator(1, 1, &a, &b), Err(CoreError::Domain(_))));
    }
}
