//! Laurent polynomials over `Z` and their quotients by polynomials with
//! unit extreme coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::IntMatrix;

/// An element of `Z[t, t^-1]`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LaurentElement {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c t^e`.
    pub fn monomial(e: i64, c: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(e, c);
        out
    }

    /// `Σ coeffs[i] t^(low + i)`.
    pub fn from_coeffs(low: i64, coeffs: &[i64]) -> Self {
        let mut out = Self::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            out.add_term(low + i as i64, c);
        }
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    /// `1 - t^m`.
    pub fn one_minus_t_pow(m: i64) -> Self {
        Self::from_terms([(0, 1), (m, -1)])
    }

    fn add_term(&mut self, e: i64, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn low_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn high_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }

    /// Value at `t = 1`.
    pub fn augmentation(&self) -> i64 {
        self.coeffs.values().sum()
    }
}

impl Add for &LaurentElement {
    type Output = LaurentElement;
    fn add(self, rhs: &LaurentElement) -> LaurentElement {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Neg for &LaurentElement {
    type Output = LaurentElement;
    fn neg(self) -> LaurentElement {
        self.scale(-1)
    }
}

impl Sub for &LaurentElement {
    type Output = LaurentElement;
    fn sub(self, rhs: &LaurentElement) -> LaurentElement {
        self + &(-rhs)
    }
}

impl Mul for &LaurentElement {
    type Output = LaurentElement;
    fn mul(self, rhs: &LaurentElement) -> LaurentElement {
        let mut out = LaurentElement::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            match (i, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (e, 1) => write_power(f, e)?,
                (e, m) => {
                    write!(f, "{m}*")?;
                    write_power(f, e)?
                }
            }
        }
        Ok(())
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, e: i64) -> fmt::Result {
    if e == 1 { write!(f, "t") } else { write!(f, "t^{e}") }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("modulus {0} must have unit lowest and highest coefficients")]
    BadModulus(String),
    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
}

/// `Z[t, t^-1] / (p)`, free over `Z` on the window `1, t, ..., t^(r-1)`
/// with `r = deg p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaurentQuotient {
    modulus: LaurentElement,
    /// modulus shifted to start at `t^0`
    #[serde(skip)]
    normalized: LaurentElement,
    rank: usize,
}

impl LaurentQuotient {
    pub fn new(modulus: LaurentElement) -> Result<Self, LaurentError> {
        let (Some(low), Some(high)) = (modulus.low_degree(), modulus.high_degree()) else {
            return Err(LaurentError::BadModulus(modulus.to_string()));
        };
        if modulus.coeff(low).abs() != 1 || modulus.coeff(high).abs() != 1 {
            return Err(LaurentError::BadModulus(modulus.to_string()));
        }
        let normalized = modulus.shift(-low);
        Ok(Self { modulus, normalized, rank: (high - low) as usize })
    }

    /// `R(μ_d) = Z[t] / (t^d - 1)`.
    pub fn cyclic(d: i64) -> Self {
        Self::new(LaurentElement::from_terms([(0, -1), (d, 1)])).expect("t^d - 1 has unit ends")
    }

    pub fn modulus(&self) -> &LaurentElement {
        &self.modulus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Canonical remainder of `x` on the window `[0, rank)`.
    pub fn reduce(&self, x: &LaurentElement) -> Vec<i64> {
        let r = self.rank as i64;
        let p = &self.normalized;
        let (top, bottom) = (p.coeff(r), p.coeff(0));
        let mut x = x.clone();
        while let Some(e) = x.high_degree().filter(|&e| e >= r) {
            // top is a unit, so c / top = c * top
            let c = x.coeff(e) * top;
            x = &x - &p.shift(e - r).scale(c);
        }
        while let Some(e) = x.low_degree().filter(|&e| e < 0) {
            let c = x.coeff(e) * bottom;
            x = &x - &p.shift(e).scale(c);
        }
        (0..r).map(|e| x.coeff(e)).collect()
    }

    pub fn element(&self, coords: &[i64]) -> Result<LaurentElement, LaurentError> {
        if coords.len() != self.rank {
            return Err(LaurentError::WrongLength { expected: self.rank, got: coords.len() });
        }
        Ok(LaurentElement::from_coeffs(0, coords))
    }

    pub fn contains_zero(&self, x: &LaurentElement) -> bool {
        self.reduce(x).iter().all(|&c| c == 0)
    }

    /// Matrix of multiplication by `x` on the window basis.
    pub fn multiplication_matrix(&self, x: &LaurentElement) -> IntMatrix {
        let r = self.rank;
        let mut m = IntMatrix::zero(r, r);
        for j in 0..r {
            let image = self.reduce(&(x * &LaurentElement::monomial(j as i64, 1)));
            for (i, c) in image.into_iter().enumerate() {
                m.set(i, j, BigInt::from(c));
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let a = LaurentElement::one_minus_t_pow(2);
        let b = LaurentElement::from_terms([(-1, 2), (0, 1)]);
        assert_eq!((&a * &b).to_string(), "2*t^-1 + 1 - 2*t - t^2");
        assert!((&a - &a).is_zero());
        assert_eq!(a.augmentation(), 0);
    }

    #[test]
    fn cyclic_reduction() {
        let q = LaurentQuotient::cyclic(3);
        assert_eq!(q.reduce(&LaurentElement::monomial(4, 1)), vec![0, 1, 0]);
        assert_eq!(q.reduce(&LaurentElement::monomial(-1, 5)), vec![0, 0, 5]);
        let m = q.multiplication_matrix(&LaurentElement::monomial(1, 1));
        assert_eq!(m.to_i64_rows().unwrap(), vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
    }

    #[test]
    fn modulus_must_have_unit_ends() {
        assert!(LaurentQuotient::new(LaurentElement::from_terms([(0, 2), (1, 1)])).is_err());
        assert!(LaurentQuotient::new(LaurentElement::zero()).is_err());
        let q = LaurentQuotient::new(LaurentElement::from_terms([(-2, 1), (0, -1)])).unwrap();
        assert_eq!(q.rank(), 2);
        assert!(q.contains_zero(q.modulus()));
    }
}
