//! Push-forward along the zero section of `[C^n/μ_2]` and the K-groups of
//! the complement.
//!
//! Classes in `K0` of the quotient stack are Laurent polynomials via
//! `[O(-i)] ↦ t^i`; the target basis `[O(-n+1)], ..., [O]` therefore
//! indexes rows by `t^(n-1), ..., t^0`.

use num_bigint::BigInt;
use serde::Serialize;

use super::laurent::LaurentElement;
use crate::exactalg::{cokernel, kernel_rank, FGAbelianGroup, IntMatrix};
use crate::mf::standard::quadric_generators;
use crate::mf::MatrixFactorization;

/// `Σ_{F0} [O(a)] - Σ_{F1} [O(b)]`, anchored so that the top twist of `F0`
/// sits at `[O]`.
pub fn generator_class(mf: &MatrixFactorization) -> LaurentElement {
    let anchor = mf.f0().twists().iter().copied().max().unwrap_or(0);
    let plus = mf.f0().twists().iter().map(|&a| (anchor - a, 1));
    let minus = mf.f1().twists().iter().map(|&b| (anchor - b, -1));
    LaurentElement::from_terms(plus.chain(minus))
}

/// `[O(l)] - [O(l-2)]`.
pub fn zero_section_class(l: i64) -> LaurentElement {
    LaurentElement::one_minus_t_pow(2).shift(-l)
}

pub fn window_column(n: usize, x: &LaurentElement) -> Vec<i64> {
    (0..n).map(|row| x.coeff((n - 1 - row) as i64)).collect()
}

/// Source columns `[O_Z(-n+3)], ..., [O_Z]` followed by the generator classes.
pub fn pushforward_columns(n: usize) -> Vec<LaurentElement> {
    assert!(n >= 3, "push-forward table needs n >= 3");
    let mut cols: Vec<LaurentElement> = (-(n as i64) + 3..=0).map(zero_section_class).collect();
    cols.extend(quadric_generators(n).iter().map(generator_class));
    cols
}

pub fn pushforward_matrix(n: usize) -> IntMatrix {
    let cols = pushforward_columns(n);
    let mut m = IntMatrix::zero(n, cols.len());
    for (c, x) in cols.iter().enumerate() {
        assert!(
            x.low_degree().unwrap_or(0) >= 0 && x.high_degree().unwrap_or(0) < n as i64,
            "class {x} leaves the window"
        );
        for (r, v) in window_column(n, x).into_iter().enumerate() {
            m.set(r, c, BigInt::from(v));
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KuTable {
    pub n: usize,
    pub k0: FGAbelianGroup,
    pub k1: FGAbelianGroup,
}

/// `K0 = coker i_*`, `K1 = ker i_*`.
pub fn ku_table(n: usize) -> KuTable {
    let p = pushforward_matrix(n);
    KuTable { n, k0: cokernel(&p), k1: FGAbelianGroup::free(kernel_rank(&p)) }
}

/// `K(RP^(n-1))`, read off the same sequence.
pub fn rp_ktheory(n: usize) -> KuTable {
    ku_table(n)
}

/// True when `K0` is `Z ⊕ Z/2^⌊(n-1)/2⌋` and `K1` is `Z` exactly for even `n`.
pub fn rp_consistent(t: &KuTable) -> bool {
    let e = (t.n - 1) / 2;
    let torsion = if e == 0 { vec![] } else { vec![BigInt::from(1) << e] };
    t.k0.rank() == 1 && t.k0.torsion() == torsion.as_slice() && t.k1 == FGAbelianGroup::free((t.n % 2 == 0) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_three_and_four() {
        assert_eq!(pushforward_matrix(3).to_i64_rows().unwrap(), vec![vec![-1, 0], vec![0, -2], vec![1, 2]]);
        assert_eq!(
            pushforward_matrix(4).to_i64_rows().unwrap(),
            vec![vec![-1, 0, 0, 0], vec![0, -1, 0, 0], vec![1, 0, -2, -2], vec![0, 1, 2, 2]]
        );
        let t = ku_table(3);
        assert_eq!(t.k0.to_string(), "Z + Z/2");
        assert!(t.k1.is_trivial());
    }

    #[test]
    fn columns_vanish_at_one() {
        for n in 3..=8 {
            assert!(pushforward_columns(n).iter().all(|c| c.augmentation() == 0));
        }
    }
}
