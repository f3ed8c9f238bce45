//! Smith normal form over `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::intmatrix::IntMatrix;

/// Result of [`smith_normal_form`]: `u * m * v == d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
    }
}

/// Diagonalizes `m` by unimodular row and column operations, always
/// pivoting on a nonzero entry of smallest absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = smallest_entry(&d, t) else {
                return SmithForm { u, d, v };
            };
            d.swap_rows(t, pr);
            u.swap_rows(t, pr);
            d.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = d.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    let k = -q;
                    d.add_row_multiple(i, t, &k);
                    u.add_row_multiple(i, t, &k);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = d.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    let k = -q;
                    d.add_col_multiple(j, t, &k);
                    v.add_col_multiple(j, t, &k);
                }
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // Pivot must divide the remaining block; otherwise fold the bad row in.
            let bad_row = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match bad_row {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

fn smallest_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for r in t..d.rows() {
        for c in t..d.cols() {
            let x = d.get(r, c);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((r, c, a));
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

/// Rank over `Q` of an integer matrix.
pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).invariant_factors().len()
}

/// Rank of the integer kernel of `m: Z^cols -> Z^rows`.
pub fn kernel_rank(m: &IntMatrix) -> usize {
    m.cols() - rank(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        assert_eq!(s.u, IntMatrix::identity(3));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let s = check(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.d, IntMatrix::from_rows(&[[1, 0], [0, 6]]));
    }

    #[test]
    fn rectangular_case() {
        let s = check(&IntMatrix::from_rows(&[[-1, 0], [0, -2], [1, 2]]));
        assert_eq!(s.d, IntMatrix::from_rows(&[[1, 0], [0, 2], [0, 0]]));
        assert_eq!(kernel_rank(&IntMatrix::from_rows(&[[-1, 0], [0, -2], [1, 2]])), 0);
    }

    #[test]
    fn zero_matrix_kernel() {
        assert_eq!(kernel_rank(&IntMatrix::zero(2, 3)), 3);
        assert_eq!(kernel_rank(&IntMatrix::identity(4)), 0);
    }
}
