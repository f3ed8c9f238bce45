//! Graded free modules `⊕ Q(a_j)` and degree-tracked maps between them.
//!
//! Convention: `Q(a)_d = Q_{d+a}`, so the generator of `Q(a)` has degree
//! `-a`. An entry `(j, i)` of a map of degree `delta` from `⊕ Q(a_i)` to
//! `⊕ Q(b_j)` is zero or homogeneous of degree `delta + b_j - a_i`.

use num_traits::Zero;
use thiserror::Error;

use crate::exactalg::GaussianRational as Q;
use crate::polyring::{variable_map, GradedPoly, PolyError, WeightedRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrModError {
    #[error("modules are over different rings")]
    RingMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("entry ({row}, {col}) = {entry} should be homogeneous of degree {expected}")]
    DegreeViolation { row: usize, col: usize, expected: i64, entry: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedFreeModule {
    ring: WeightedRing,
    twists: Vec<i64>,
}

impl GradedFreeModule {
    pub fn new(ring: &WeightedRing, twists: Vec<i64>) -> Self {
        Self { ring: ring.clone(), twists }
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn twist(&self, l: i64) -> Self {
        Self { ring: self.ring.clone(), twists: self.twists.iter().map(|a| a + l).collect() }
    }

    /// `Hom(M, Q)` as a graded free module: twists negated.
    pub fn dual(&self) -> Self {
        Self { ring: self.ring.clone(), twists: self.twists.iter().map(|a| -a).collect() }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring, "direct sum over different rings");
        let mut twists = self.twists.clone();
        twists.extend_from_slice(&other.twists);
        Self { ring: self.ring.clone(), twists }
    }

    /// `M ⊗ N` over `ring`, summand `(i, j)` at position `i * rank N + j`.
    pub fn tensor(&self, other: &Self, ring: &WeightedRing) -> Self {
        let twists =
            self.twists.iter().flat_map(|a| other.twists.iter().map(move |b| a + b)).collect();
        Self { ring: ring.clone(), twists }
    }

    /// Same twists over another ring.
    pub fn with_ring(&self, ring: &WeightedRing) -> Self {
        Self { ring: ring.clone(), twists: self.twists.clone() }
    }

    /// Dimension of the degree-`d` piece of the module.
    pub fn piece_dim(&self, d: i64) -> usize {
        self.twists.iter().map(|a| self.ring.graded_piece_dim(d + a)).sum()
    }
}

/// Dimension over `Q(i)` of degree-`delta` maps `m -> n`.
pub fn graded_hom_dimension(m: &GradedFreeModule, n: &GradedFreeModule, delta: i64) -> usize {
    let ring = m.ring();
    m.twists()
        .iter()
        .flat_map(|a| n.twists().iter().map(move |b| ring.graded_piece_dim(delta + b - a)))
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedMap {
    source: GradedFreeModule,
    target: GradedFreeModule,
    delta: i64,
    entries: Vec<GradedPoly>,
}

impl GradedMap {
    /// Builds a map from a row-major matrix (`target.rank()` rows), checking
    /// the entry-degree rule.
    pub fn new(
        source: GradedFreeModule,
        target: GradedFreeModule,
        delta: i64,
        rows: Vec<Vec<GradedPoly>>,
    ) -> Result<Self, GrModError> {
        if source.ring != target.ring {
            return Err(GrModError::RingMismatch);
        }
        if rows.len() != target.rank() || rows.iter().any(|r| r.len() != source.rank()) {
            return Err(GrModError::ShapeMismatch(format!(
                "expected {}x{} matrix",
                target.rank(),
                source.rank()
            )));
        }
        let entries: Vec<GradedPoly> = rows.into_iter().flatten().collect();
        if entries.iter().any(|p| p.ring() != &source.ring) {
            return Err(GrModError::RingMismatch);
        }
        let m = Self { source, target, delta, entries };
        m.check_degrees()?;
        Ok(m)
    }

    fn from_parts(source: GradedFreeModule, target: GradedFreeModule, delta: i64, entries: Vec<GradedPoly>) -> Self {
        debug_assert_eq!(entries.len(), source.rank() * target.rank());
        Self { source, target, delta, entries }
    }

    pub fn check_degrees(&self) -> Result<(), GrModError> {
        for j in 0..self.target.rank() {
            for i in 0..self.source.rank() {
                let expected = self.expected_degree(j, i);
                let e = self.entry(j, i);
                if !e.is_zero_or_of_degree(expected) {
                    return Err(GrModError::DegreeViolation {
                        row: j,
                        col: i,
                        expected,
                        entry: e.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn expected_degree(&self, row: usize, col: usize) -> i64 {
        self.delta + self.target.twists[row] - self.source.twists[col]
    }

    pub fn zero(source: &GradedFreeModule, target: &GradedFreeModule, delta: i64) -> Self {
        let z = GradedPoly::zero(source.ring());
        Self::from_parts(source.clone(), target.clone(), delta, vec![z; source.rank() * target.rank()])
    }

    /// `p * id_M` for a homogeneous `p` (or zero) of degree `delta`.
    pub fn scalar(m: &GradedFreeModule, p: &GradedPoly, delta: i64) -> Self {
        assert!(p.is_zero_or_of_degree(delta), "scalar of wrong degree");
        let mut out = Self::zero(m, m, delta);
        for k in 0..m.rank() {
            out.entries[k * m.rank() + k] = p.clone();
        }
        out
    }

    pub fn identity(m: &GradedFreeModule) -> Self {
        Self::scalar(m, &GradedPoly::one(m.ring()), 0)
    }

    pub fn source(&self) -> &GradedFreeModule {
        &self.source
    }

    pub fn target(&self) -> &GradedFreeModule {
        &self.target
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn ring(&self) -> &WeightedRing {
        self.source.ring()
    }

    pub fn rows(&self) -> usize {
        self.target.rank()
    }

    pub fn cols(&self) -> usize {
        self.source.rank()
    }

    pub fn entry(&self, row: usize, col: usize) -> &GradedPoly {
        &self.entries[row * self.source.rank() + col]
    }

    pub fn entries(&self) -> &[GradedPoly] {
        &self.entries
    }

    pub fn matrix(&self) -> Vec<Vec<GradedPoly>> {
        (0..self.rows()).map(|r| (0..self.cols()).map(|c| self.entry(r, c).clone()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GradedPoly::is_zero)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap, GrModError> {
        if self.ring() != other.ring() {
            return Err(GrModError::RingMismatch);
        }
        if other.target != self.source {
            return Err(GrModError::ShapeMismatch("inner modules differ".into()));
        }
        let (n, k, m) = (self.rows(), self.cols(), other.cols());
        let mut entries = Vec::with_capacity(n * m);
        for r in 0..n {
            for c in 0..m {
                let mut acc = GradedPoly::zero(self.ring());
                for t in 0..k {
                    let a = self.entry(r, t);
                    let b = other.entry(t, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        let out = Self::from_parts(other.source.clone(), self.target.clone(), self.delta + other.delta, entries);
        debug_assert!(out.check_degrees().is_ok());
        Ok(out)
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap, GrModError> {
        if self.source != other.source || self.target != other.target || self.delta != other.delta {
            return Err(GrModError::ShapeMismatch("summands have different shapes".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(self.source.clone(), self.target.clone(), self.delta, entries))
    }

    pub fn neg(&self) -> GradedMap {
        let entries = self.entries.iter().map(|a| -a).collect();
        Self::from_parts(self.source.clone(), self.target.clone(), self.delta, entries)
    }

    pub fn scale(&self, c: &Q) -> GradedMap {
        if c.is_zero() {
            return Self::zero(&self.source, &self.target, self.delta);
        }
        let entries = self.entries.iter().map(|a| a.scale(c)).collect();
        Self::from_parts(self.source.clone(), self.target.clone(), self.delta, entries)
    }

    /// Same matrix between `M(l) -> N(l)`.
    pub fn twist(&self, l: i64) -> GradedMap {
        Self::from_parts(self.source.twist(l), self.target.twist(l), self.delta, self.entries.clone())
    }

    /// Graded transpose `N* -> M*`.
    pub fn dual(&self) -> GradedMap {
        let (n, m) = (self.rows(), self.cols());
        let mut entries = Vec::with_capacity(n * m);
        for c in 0..m {
            for r in 0..n {
                entries.push(self.entry(r, c).clone());
            }
        }
        Self::from_parts(self.target.dual(), self.source.dual(), self.delta, entries)
    }

    /// Same matrix with replaced source and target modules; degree rule rechecked.
    pub fn retarget(&self, source: GradedFreeModule, target: GradedFreeModule, delta: i64) -> Result<GradedMap, GrModError> {
        GradedMap::new(source, target, delta, self.matrix())
    }

    /// Block matrix: `blocks[r][c]` maps `sources[c]` to `targets[r]`.
    pub fn block(blocks: Vec<Vec<GradedMap>>) -> Result<GradedMap, GrModError> {
        let nr = blocks.len();
        let nc = blocks.first().map_or(0, Vec::len);
        if nr == 0 || nc == 0 || blocks.iter().any(|r| r.len() != nc) {
            return Err(GrModError::ShapeMismatch("empty or ragged block matrix".into()));
        }
        let delta = blocks[0][0].delta;
        let ring = blocks[0][0].ring().clone();
        for (r, row) in blocks.iter().enumerate() {
            for (c, b) in row.iter().enumerate() {
                if b.delta != delta
                    || b.target != blocks[r][0].target
                    || b.source != blocks[0][c].source
                    || b.ring() != &ring
                {
                    return Err(GrModError::ShapeMismatch(format!("block ({r}, {c}) does not fit")));
                }
            }
        }
        let source = blocks[0].iter().skip(1).fold(blocks[0][0].source.clone(), |m, b| m.direct_sum(&b.source));
        let target = blocks.iter().skip(1).fold(blocks[0][0].target.clone(), |m, row| m.direct_sum(&row[0].target));
        let mut rows = Vec::with_capacity(target.rank());
        for brow in &blocks {
            for r in 0..brow[0].rows() {
                let mut row = Vec::with_capacity(source.rank());
                for b in brow {
                    for c in 0..b.cols() {
                        row.push(b.entry(r, c).clone());
                    }
                }
                rows.push(row);
            }
        }
        Ok(Self::from_parts(source, target, delta, rows.into_iter().flatten().collect()))
    }

    /// Kronecker product `self ⊗ other` over `ring`, which must contain
    /// the variables of both factors.
    pub fn kron(&self, other: &GradedMap, ring: &WeightedRing) -> Result<GradedMap, GrModError> {
        let a = self.embed(ring)?;
        let b = other.embed(ring)?;
        let source = a.source.tensor(&b.source, ring);
        let target = a.target.tensor(&b.target, ring);
        let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
        let mut entries = vec![GradedPoly::zero(ring); ar * br * ac * bc];
        let cols = ac * bc;
        for r1 in 0..ar {
            for c1 in 0..ac {
                let x = a.entry(r1, c1);
                if x.is_zero() {
                    continue;
                }
                for r2 in 0..br {
                    for c2 in 0..bc {
                        let y = b.entry(r2, c2);
                        if !y.is_zero() {
                            entries[(r1 * br + r2) * cols + c1 * bc + c2] = x * y;
                        }
                    }
                }
            }
        }
        Ok(Self::from_parts(source, target, a.delta + b.delta, entries))
    }

    /// Re-expresses the map over a ring containing its variables.
    pub fn embed(&self, ring: &WeightedRing) -> Result<GradedMap, GrModError> {
        if ring == self.ring() {
            return Ok(self.clone());
        }
        let map = variable_map(self.ring(), ring)?;
        for (i, m) in map.iter().enumerate() {
            if m.is_none() && self.entries.iter().any(|p| !p.is_free_of(i)) {
                return Err(PolyError::UnknownVariable(self.ring().names()[i].clone()).into());
            }
        }
        let entries = self.entries.iter().map(|p| p.embed_with(&map, ring)).collect();
        Ok(Self::from_parts(self.source.with_ring(ring), self.target.with_ring(ring), self.delta, entries))
    }

    /// Sets a variable to zero in every entry.
    pub fn substitute_zero(&self, name: &str) -> Result<GradedMap, GrModError> {
        let (small, idx) = self.ring().without(name)?;
        let entries = self.entries.iter().map(|p| p.substitute_zero_into(idx, &small)).collect();
        Ok(Self::from_parts(self.source.with_ring(&small), self.target.with_ring(&small), self.delta, entries))
    }

    /// Keeps the listed rows and columns (in the given order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> GradedMap {
        let source = GradedFreeModule::new(self.ring(), cols.iter().map(|&c| self.source.twists[c]).collect());
        let target = GradedFreeModule::new(self.ring(), rows.iter().map(|&r| self.target.twists[r]).collect());
        let entries = rows.iter().flat_map(|&r| cols.iter().map(move |&c| self.entry(r, c).clone())).collect();
        Self::from_parts(source, target, self.delta, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn ring_x() -> WeightedRing {
        WeightedRing::new(&[("x", 1)]).unwrap()
    }

    fn p(r: &WeightedRing, s: &str) -> GradedPoly {
        parse_poly(r, s).unwrap()
    }

    #[test]
    fn power_example_composes_to_square() {
        let r = ring_x();
        let f0 = GradedFreeModule::new(&r, vec![0]);
        let f1 = GradedFreeModule::new(&r, vec![-1]);
        let s0 = GradedMap::new(f0.clone(), f1.clone(), 2, vec![vec![p(&r, "x")]]).unwrap();
        let s1 = GradedMap::new(f1.clone(), f0.clone(), 0, vec![vec![p(&r, "x")]]).unwrap();
        let c = s0.compose(&s1).unwrap();
        assert_eq!(c, GradedMap::scalar(&f1, &p(&r, "x^2"), 2));
        assert_eq!(GradedMap::identity(&f0).compose(&s1).unwrap(), s1);
        let z = GradedMap::zero(&f0, &f1, 2);
        assert!(z.compose(&s1).unwrap().is_zero());
    }

    #[test]
    fn degree_rule_is_enforced() {
        let r = ring_x();
        let f0 = GradedFreeModule::new(&r, vec![0]);
        let err = GradedMap::new(f0.clone(), f0.clone(), 0, vec![vec![p(&r, "x")]]).unwrap_err();
        assert!(matches!(err, GrModError::DegreeViolation { expected: 0, .. }));
    }

    #[test]
    fn twist_and_dual() {
        let r = ring_x();
        let f0 = GradedFreeModule::new(&r, vec![0]);
        let f1 = GradedFreeModule::new(&r, vec![-1]);
        assert_eq!(f1.twist(1).twists(), &[0]);
        let s1 = GradedMap::new(f1, f0, 0, vec![vec![p(&r, "x")]]).unwrap();
        let t = s1.twist(5);
        assert!(t.check_degrees().is_ok());
        assert_eq!(t.entries(), s1.entries());
        assert_eq!(s1.twist(0), s1);
        let d = s1.dual();
        assert_eq!(d.source().twists(), &[0]);
        assert_eq!(d.target().twists(), &[1]);
        assert!(d.check_degrees().is_ok());
        assert_eq!(d.dual(), s1);
        let id = GradedMap::identity(&GradedFreeModule::new(&r, vec![2, 3]));
        assert_eq!(id.dual(), GradedMap::identity(&GradedFreeModule::new(&r, vec![-2, -3])));
    }

    #[test]
    fn hom_dimensions() {
        let r = ring_x();
        let q = GradedFreeModule::new(&r, vec![0]);
        assert_eq!(graded_hom_dimension(&q, &q, 0), 1);
        assert_eq!(graded_hom_dimension(&GradedFreeModule::new(&r, vec![-1]), &q, 0), 1);
        assert_eq!(graded_hom_dimension(&q, &GradedFreeModule::new(&r, vec![-2]), 0), 0);
    }
}
