//! Exact fraction-free sparse elimination over the Gaussian integers with
//! machine-word coefficients. Overflow aborts and the caller falls back to
//! the arbitrary-precision engine.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_traits::ToPrimitive;

use super::gaussian::GaussianRational as Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Zi {
    re: i64,
    im: i64,
}

#[derive(Debug)]
pub(crate) struct Abort;

impl Zi {
    const ZERO: Zi = Zi { re: 0, im: 0 };

    pub(crate) fn from_q(q: &Q) -> Option<Zi> {
        if !q.re.is_integer() || !q.im.is_integer() {
            return None;
        }
        Some(Zi { re: q.re.to_integer().to_i64()?, im: q.im.to_integer().to_i64()? })
    }

    pub(crate) fn to_q(self) -> Q {
        Q::from_parts(self.re, self.im)
    }

    fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn mul(self, o: Zi) -> Result<Zi, Abort> {
        let re = self.re.checked_mul(o.re).zip(self.im.checked_mul(o.im)).and_then(|(a, b)| a.checked_sub(b));
        let im = self.re.checked_mul(o.im).zip(self.im.checked_mul(o.re)).and_then(|(a, b)| a.checked_add(b));
        Ok(Zi { re: re.ok_or(Abort)?, im: im.ok_or(Abort)? })
    }

    fn sub(self, o: Zi) -> Result<Zi, Abort> {
        Ok(Zi { re: self.re.checked_sub(o.re).ok_or(Abort)?, im: self.im.checked_sub(o.im).ok_or(Abort)? })
    }

    fn unit_inverse(self) -> Option<Zi> {
        match (self.re, self.im) {
            (1, 0) => Some(Zi { re: 1, im: 0 }),
            (-1, 0) => Some(Zi { re: -1, im: 0 }),
            (0, 1) => Some(Zi { re: 0, im: -1 }),
            (0, -1) => Some(Zi { re: 0, im: 1 }),
            _ => None,
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

pub(crate) type ZiVec = Vec<(usize, Zi)>;

pub(crate) fn convert(v: &[(usize, Q)]) -> Option<ZiVec> {
    v.iter().map(|(i, q)| Zi::from_q(q).map(|z| (*i, z))).collect()
}

pub(crate) struct ZiEchelon {
    pivots: Vec<Option<ZiVec>>,
    rank: usize,
    acc: Vec<Zi>,
    heap: BinaryHeap<Reverse<usize>>,
    touched: Vec<usize>,
    is_touched: Vec<bool>,
}

impl ZiEchelon {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            pivots: vec![None; dim],
            rank: 0,
            acc: vec![Zi::ZERO; dim],
            heap: BinaryHeap::new(),
            touched: Vec::new(),
            is_touched: vec![false; dim],
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rank
    }

    pub(crate) fn reduce(&mut self, v: &[(usize, Zi)]) -> Result<ZiVec, Abort> {
        let result = self.reduce_inner(v);
        for &c in &self.touched {
            self.acc[c] = Zi::ZERO;
            self.is_touched[c] = false;
        }
        self.touched.clear();
        self.heap.clear();
        result
    }

    fn reduce_inner(&mut self, v: &[(usize, Zi)]) -> Result<ZiVec, Abort> {
        for &(c, x) in v {
            self.acc[c] = x;
            self.is_touched[c] = true;
            self.touched.push(c);
            self.heap.push(Reverse(c));
        }
        let mut last = None;
        while let Some(Reverse(c)) = self.heap.pop() {
            if last == Some(c) {
                continue;
            }
            last = Some(c);
            let k = self.acc[c];
            if k.is_zero() {
                continue;
            }
            let Some(row) = &self.pivots[c] else {
                continue;
            };
            let lead = row[0].1;
            let factor = match lead.unit_inverse() {
                Some(inv) => k.mul(inv)?,
                None => {
                    // scale the accumulator by the lead so the division is exact
                    for &t in &self.touched {
                        self.acc[t] = self.acc[t].mul(lead)?;
                    }
                    k
                }
            };
            for &(j, p) in row {
                let before = self.acc[j];
                let after = before.sub(factor.mul(p)?)?;
                self.acc[j] = after;
                if before.is_zero() && j != c {
                    if !self.is_touched[j] {
                        self.is_touched[j] = true;
                        self.touched.push(j);
                    }
                    self.heap.push(Reverse(j));
                }
            }
            debug_assert!(self.acc[c].is_zero());
        }
        let mut cols: Vec<usize> = self.touched.iter().copied().filter(|&c| !self.acc[c].is_zero()).collect();
        cols.sort_unstable();
        let g = cols.iter().fold(0i64, |g, &c| gcd(gcd(g, self.acc[c].re), self.acc[c].im));
        Ok(cols.into_iter().map(|c| (c, Zi { re: self.acc[c].re / g, im: self.acc[c].im / g })).collect())
    }

    /// Stores an already reduced vector; `Ok(Some(col))` if it was nonzero.
    pub(crate) fn insert_reduced(&mut self, r: ZiVec) -> Result<Option<usize>, Abort> {
        let Some(&(c, lead)) = r.first() else {
            return Ok(None);
        };
        let row = match lead.unit_inverse() {
            Some(inv) => r.into_iter().map(|(j, x)| x.mul(inv).map(|y| (j, y))).collect::<Result<ZiVec, Abort>>()?,
            None => r,
        };
        self.pivots[c] = Some(row);
        self.rank += 1;
        Ok(Some(c))
    }
}

/// Rank of `vectors` (entries below `dim`), or `None` if the fast path aborts.
pub(crate) fn rank(vectors: &[Vec<(usize, Q)>], dim: usize) -> Option<usize> {
    let mut ech = ZiEchelon::new(dim);
    for v in vectors {
        let z = convert(v)?;
        let r = ech.reduce(&z).ok()?;
        ech.insert_reduced(r).ok()?;
    }
    Some(ech.rank())
}

/// Kernel basis as in [`super::linalg::sparse_kernel`], or `None` on abort.
pub(crate) fn kernel(columns: &[Vec<(usize, Q)>], target_dim: usize) -> Option<Vec<Vec<(usize, Q)>>> {
    let mut ech = ZiEchelon::new(target_dim + columns.len());
    let mut out = Vec::new();
    for (i, col) in columns.iter().enumerate() {
        let mut z = convert(col)?;
        z.push((target_dim + i, Zi { re: 1, im: 0 }));
        let r = ech.reduce(&z).ok()?;
        match r.first() {
            Some(&(c, _)) if c < target_dim => {
                ech.insert_reduced(r).ok()?;
            }
            Some(_) => out.push(r.into_iter().map(|(c, x)| (c - target_dim, x.to_q())).collect()),
            None => unreachable!("tracking coordinate keeps the vector nonzero"),
        }
    }
    Some(out)
}
