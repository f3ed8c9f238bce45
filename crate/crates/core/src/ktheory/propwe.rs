//! The Koszul-lattice comparison for weighted complete intersections:
//! the window presentation `coker α` against `Z[t, t^-1] / Π (1 - t^{m_j})`.

use num_bigint::BigInt;
use serde::Serialize;

use super::laurent::{LaurentElement, LaurentQuotient};
use super::KError;
use crate::exactalg::{cokernel, kernel_rank, smith_normal_form, FGAbelianGroup, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropWeReport {
    pub weights: Vec<i64>,
    pub degrees: Vec<i64>,
    pub factors: Vec<i64>,
    pub m: Vec<i64>,
    /// `Σ w - Σ d - 1`
    pub a: i64,
    /// `a + Σ m`
    pub b: i64,
    pub koszul: LaurentElement,
    /// `α: Z^(a+1) -> Z^(b+1)`, rows `[O(-b)], ..., [O]`
    pub alpha: Vec<Vec<i64>>,
    pub alpha_injective: bool,
    /// the window map kills the image of `α`
    pub well_defined: bool,
    /// invariant factors of the window map onto the quotient
    pub window_map_factors: Vec<String>,
    pub coker_alpha: FGAbelianGroup,
    pub quotient_rank: usize,
    pub passed: bool,
}

fn check_inputs(w: &[i64], d: &[i64], k: &[i64]) -> Result<Vec<i64>, KError> {
    if w.is_empty() || d.len() != k.len() {
        return Err(KError::Precondition("need weights, and one factor per degree".into()));
    }
    if w.iter().chain(d).chain(k).any(|&x| x <= 0) {
        return Err(KError::Precondition("weights, degrees and factors must be positive".into()));
    }
    if d.iter().sum::<i64>() > w.iter().sum::<i64>() {
        return Err(KError::Precondition("need Σd <= Σw".into()));
    }
    d.iter()
        .zip(k)
        .map(|(&dj, &kj)| {
            if dj % kj == 0 {
                Ok(dj / kj)
            } else {
                Err(KError::Precondition(format!("factor {kj} does not divide degree {dj}")))
            }
        })
        .collect()
}

pub fn prop_we_verify(weights: &[i64], degrees: &[i64], factors: &[i64]) -> Result<PropWeReport, KError> {
    let m = check_inputs(weights, degrees, factors)?;
    let a = weights.iter().sum::<i64>() - degrees.iter().sum::<i64>() - 1;
    let total: i64 = m.iter().sum();
    let b = a + total;
    let koszul = m.iter().fold(LaurentElement::one(), |acc, &mj| &acc * &LaurentElement::one_minus_t_pow(mj));
    let quotient = LaurentQuotient::new(koszul.clone()).map_err(|e| KError::Precondition(e.to_string()))?;
    let (rows, cols) = ((b + 1) as usize, (a + 1) as usize);
    // row r holds [O(-(b - r))] = t^(b - r)
    let row_of = |e: i64| (b - e) as usize;
    let mut alpha = IntMatrix::zero(rows, cols);
    for i in 0..=a {
        for (e, c) in koszul.shift(i).terms() {
            alpha.set(row_of(e), i as usize, BigInt::from(c));
        }
    }
    let r = quotient.rank();
    let mut window = IntMatrix::zero(r, rows);
    for e in 0..=b {
        for (q, c) in quotient.reduce(&LaurentElement::monomial(e, 1)).into_iter().enumerate() {
            window.set(q, row_of(e), BigInt::from(c));
        }
    }
    let alpha_injective = kernel_rank(&alpha) == 0;
    let well_defined = (0..cols).all(|i| {
        let col = LaurentElement::from_terms((0..rows).map(|row| (b - row as i64, to_i64(alpha.get(row, i)))));
        quotient.contains_zero(&col)
    });
    let factors_of_window = smith_normal_form(&window).invariant_factors();
    let surjective = factors_of_window.len() == r && factors_of_window.iter().all(|f| f == &BigInt::from(1) || f == &BigInt::from(-1));
    let coker_alpha = cokernel(&alpha);
    // a surjection with kernel containing the saturated lattice im α of the
    // same rank as the kernel is an isomorphism coker α -> quotient
    let saturated = coker_alpha.torsion().is_empty();
    let ranks_match = coker_alpha.rank() == r && rows - r == cols;
    let passed = alpha_injective && well_defined && surjective && saturated && ranks_match;
    Ok(PropWeReport {
        weights: weights.to_vec(),
        degrees: degrees.to_vec(),
        factors: factors.to_vec(),
        m,
        a,
        b,
        koszul,
        alpha: alpha.to_i64_rows().expect("small entries"),
        alpha_injective,
        well_defined,
        window_map_factors: factors_of_window.iter().map(|f| f.to_string()).collect(),
        coker_alpha,
        quotient_rank: r,
        passed,
    })
}

fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x).expect("small entries")
}

/// Parameter tuples with at most `max_vars` weights in `1..=max_weight`,
/// `c <= 2` degrees in `1..=6` with `Σd <= Σw`, and `k_j ∈ {1, 2, d_j}`
/// dividing `d_j`.
pub fn prop_we_grid(max_vars: usize, max_weight: i64) -> Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> {
    let mut weight_lists = Vec::new();
    for n in 1..=max_vars {
        nondecreasing(n, 1, max_weight, &mut Vec::new(), &mut weight_lists);
    }
    let mut degree_lists = Vec::new();
    for c in 1..=2 {
        nondecreasing(c, 1, 6, &mut Vec::new(), &mut degree_lists);
    }
    let mut out = Vec::new();
    for w in &weight_lists {
        let sw: i64 = w.iter().sum();
        for d in degree_lists.iter().filter(|d| d.iter().sum::<i64>() <= sw) {
            let choices: Vec<Vec<i64>> = d
                .iter()
                .map(|&dj| {
                    let mut ks: Vec<i64> = [1, 2, dj].into_iter().filter(|k| dj % k == 0).collect();
                    ks.sort_unstable();
                    ks.dedup();
                    ks
                })
                .collect();
            for k in product(&choices) {
                out.push((w.clone(), d.clone(), k));
            }
        }
    }
    out
}

fn nondecreasing(len: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    for x in lo..=hi {
        cur.push(x);
        nondecreasing(len, x, hi, cur, out);
        cur.pop();
    }
}

fn product(choices: &[Vec<i64>]) -> Vec<Vec<i64>> {
    choices.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conic() {
        let r = prop_we_verify(&[1, 1, 1], &[2], &[1]).unwrap();
        assert_eq!((r.a, r.b), (0, 2));
        assert_eq!(r.alpha, vec![vec![-1], vec![0], vec![1]]);
        assert_eq!(r.coker_alpha, FGAbelianGroup::free(2));
        assert!(r.passed);
    }

    #[test]
    fn complete_intersection_and_root() {
        let r = prop_we_verify(&[1, 1, 1, 1], &[2, 2], &[1, 1]).unwrap();
        assert!(r.passed);
        assert_eq!(r.quotient_rank, 4);
        let r = prop_we_verify(&[1, 1, 1, 1], &[4], &[2]).unwrap();
        assert!(r.passed);
        assert_eq!((r.m.clone(), r.quotient_rank), (vec![2], 2));
    }

    #[test]
    fn bad_inputs() {
        assert!(prop_we_verify(&[1, 1], &[3], &[1]).is_err());
        assert!(prop_we_verify(&[1, 1, 1], &[3], &[2]).is_err());
        assert!(prop_we_verify(&[1, 1, 1], &[2], &[]).is_err());
    }

    #[test]
    fn grid_is_large_enough() {
        let g = prop_we_grid(5, 2);
        assert!(g.len() >= 30);
        assert!(g.iter().all(|(w, d, _)| d.iter().sum::<i64>() <= w.iter().sum::<i64>()));
    }
}
