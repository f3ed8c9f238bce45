use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::ring::{Exponent, WeightedRing};
use super::PolyError;
use crate::exactalg::GaussianRational as Q;

/// Polynomial over `Q(i)` in a [`WeightedRing`]. No zero coefficients are stored.
///
/// The arithmetic operators panic when the rings differ; the `checked_*`
/// methods report that as [`PolyError::RingMismatch`] instead.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedPoly {
    ring: WeightedRing,
    terms: BTreeMap<Exponent, Q>,
}

impl GradedPoly {
    pub fn zero(ring: &WeightedRing) -> Self {
        Self { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &WeightedRing, c: Q) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(vec![0; ring.nvars()], c);
        }
        p
    }

    pub fn one(ring: &WeightedRing) -> Self {
        Self::constant(ring, Q::one())
    }

    pub fn monomial(ring: &WeightedRing, exp: Exponent, c: Q) -> Self {
        assert_eq!(exp.len(), ring.nvars(), "exponent length");
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn var(ring: &WeightedRing, name: &str) -> Result<Self, PolyError> {
        let idx = ring.index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; ring.nvars()];
        e[idx] = 1;
        Ok(Self::monomial(ring, e, Q::one()))
    }

    /// Builds from (exponent, coefficient) pairs, summing duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Exponent, Q)>>(ring: &WeightedRing, terms: I) -> Self {
        let mut p = Self::zero(ring);
        for (e, c) in terms {
            assert_eq!(e.len(), ring.nvars(), "exponent length");
            p.add_term(e, &c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: &Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant, i.e. a unit.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().is_some_and(|e| e.iter().all(|&a| a == 0))
    }

    pub fn constant_term(&self) -> Q {
        self.coefficient(&vec![0; self.ring.nvars()])
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| self.ring.exponent_degree(e));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Common weighted degree of all monomials.
    pub fn weighted_degree(&self) -> Result<i64, PolyError> {
        let mut degs = self.terms.keys().map(|e| self.ring.exponent_degree(e));
        let d = degs.next().ok_or(PolyError::ZeroPolynomial)?;
        if degs.all(|x| x == d) {
            Ok(d)
        } else {
            Err(PolyError::NotHomogeneous)
        }
    }

    /// True when zero or homogeneous of degree `d`.
    pub fn is_zero_or_of_degree(&self, d: i64) -> bool {
        self.terms.keys().all(|e| self.ring.exponent_degree(e) == d)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Self {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn same_ring(&self, other: &Self) -> Result<(), PolyError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    /// Sets `name` to zero; the result lives in the ring without `name`.
    pub fn substitute_zero(&self, name: &str) -> Result<Self, PolyError> {
        let (small, idx) = self.ring.without(name)?;
        Ok(self.substitute_zero_into(idx, &small))
    }

    pub(crate) fn substitute_zero_into(&self, idx: usize, small: &WeightedRing) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[idx] == 0)
            .map(|(e, c)| {
                let mut e = e.clone();
                e.remove(idx);
                (e, c.clone())
            })
            .collect();
        Self { ring: small.clone(), terms }
    }

    /// Re-expresses the polynomial in `target`, which must contain every
    /// variable that occurs (matched by name, with equal weight).
    pub fn embed(&self, target: &WeightedRing) -> Result<Self, PolyError> {
        let map = variable_map(&self.ring, target)?;
        Ok(self.embed_with(&map, target))
    }

    pub(crate) fn embed_with(&self, map: &[Option<usize>], target: &WeightedRing) -> Self {
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.nvars()];
            for (i, &a) in e.iter().enumerate() {
                if a > 0 {
                    ne[map[i].expect("variable occurs but is unmapped")] = a;
                }
            }
            out.terms.insert(ne, c.clone());
        }
        out
    }

    /// True when no monomial involves variable `idx`.
    pub fn is_free_of(&self, idx: usize) -> bool {
        self.terms.keys().all(|e| e[idx] == 0)
    }

    /// Coefficient matrix of the linear part in each variable: returns
    /// `None` unless the polynomial is zero or homogeneous linear with all
    /// variables of weight one.
    pub fn linear_coefficients(&self) -> Option<Vec<Q>> {
        let mut out = vec![Q::zero(); self.ring.nvars()];
        for (e, c) in &self.terms {
            let total: u32 = e.iter().sum();
            if total != 1 {
                return None;
            }
            let i = e.iter().position(|&a| a == 1)?;
            out[i] = c.clone();
        }
        Some(out)
    }
}

/// Index map from the variables of `from` into `to`, by name. Variables of
/// `from` missing from `to` map to `None`; a weight disagreement is an error.
pub fn variable_map(from: &WeightedRing, to: &WeightedRing) -> Result<Vec<Option<usize>>, PolyError> {
    from.names()
        .iter()
        .zip(from.weights())
        .map(|(n, &w)| match to.index_of(n) {
            Some(j) if to.weights()[j] == w => Ok(Some(j)),
            Some(_) => Err(PolyError::WeightMismatch(n.clone())),
            None => Ok(None),
        })
        .collect()
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        self.checked_add(rhs).expect("ring mismatch in polynomial addition")
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        self.checked_sub(rhs).expect("ring mismatch in polynomial subtraction")
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        self.checked_mul(rhs).expect("ring mismatch in polynomial multiplication")
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        -&self
    }
}

fn fmt_monomial(ring: &WeightedRing, e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(ring.names())
        .filter(|(&a, _)| a > 0)
        .map(|(&a, n)| if a == 1 { n.clone() } else { format!("{n}^{a}") })
        .collect();
    parts.join("*")
}

impl fmt::Display for GradedPoly {
    /// Terms in descending lex order; parses back to the same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono = fmt_monomial(&self.ring, e);
            let term = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else {
                format!("{c}*{mono}")
            };
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, term),
            };
            match (k, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
