//! Graded matrix factorizations `F0 ⇄ F1` of a homogeneous polynomial.

mod hom;

use thiserror::Error;

pub use hom::{euler_pairing, hom_cohomology, hom_complex_dim, HomCohomology, DEFAULT_WINDOW};

use crate::exactalg::GaussianRational as Q;
use crate::grmod::{GrModError, GradedFreeModule, GradedMap};
use crate::polyring::{parse_poly, GradedPoly, PolyError, WeightedRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MfError {
    #[error("{composite} differs from f*id at entry ({row}, {col}): got {got}")]
    NotAFactorization { composite: &'static str, row: usize, col: usize, got: String },
    #[error("degree violation in {map}: {source}")]
    DegreeViolation { map: &'static str, source: GrModError },
    #[error("F0 has rank {f0} but F1 has rank {f1}")]
    RankMismatch { f0: usize, f1: usize },
    #[error("f must be homogeneous of positive degree: {0}")]
    BadPotential(String),
    #[error("potentials have degrees {0} and {1}")]
    DegreeMismatch(i64, i64),
    #[error("factorizations are over different rings or potentials")]
    Mismatch,
    #[error("variable '{0}' already present in the ring")]
    VariableCollision(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("Hom cohomology does not vanish at the ends of the window [-{0}, {0}]")]
    UncertifiedWindow(i64),
    #[error(transparent)]
    Module(#[from] GrModError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl MfError {
    fn from_ring(e: PolyError) -> Self {
        match e {
            PolyError::VariableCollision(v) | PolyError::DuplicateVariable(v) => MfError::VariableCollision(v),
            e => MfError::Poly(e),
        }
    }
}

/// A validated graded matrix factorization. `s0: F0 -> F1` has degree `d`,
/// `s1: F1 -> F0` degree 0, and both composites are `f * id`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixFactorization {
    f: GradedPoly,
    d: i64,
    s0: GradedMap,
    s1: GradedMap,
}

impl MatrixFactorization {
    /// Validates raw data: twists, row-major matrices (rows indexed by the target).
    pub fn validate(
        f: GradedPoly,
        f0: Vec<i64>,
        f1: Vec<i64>,
        s0: Vec<Vec<GradedPoly>>,
        s1: Vec<Vec<GradedPoly>>,
    ) -> Result<Self, MfError> {
        let d = potential_degree(&f)?;
        let ring = f.ring().clone();
        let m0 = GradedFreeModule::new(&ring, f0);
        let m1 = GradedFreeModule::new(&ring, f1);
        let s0 = GradedMap::new(m0.clone(), m1.clone(), d, s0)
            .map_err(|e| wrap_degree("s0", e))?;
        let s1 = GradedMap::new(m1, m0, 0, s1).map_err(|e| wrap_degree("s1", e))?;
        Self::from_maps(f, s0, s1)
    }

    /// Validates a pair of maps.
    pub fn from_maps(f: GradedPoly, s0: GradedMap, s1: GradedMap) -> Result<Self, MfError> {
        let d = potential_degree(&f)?;
        if s0.ring() != f.ring() || s1.ring() != f.ring() {
            return Err(MfError::Mismatch);
        }
        if s0.delta() != d || s1.delta() != 0 {
            return Err(MfError::Precondition(format!(
                "s0 must have degree {d} and s1 degree 0, got {} and {}",
                s0.delta(),
                s1.delta()
            )));
        }
        if s0.source() != s1.target() || s0.target() != s1.source() {
            return Err(MfError::Precondition("s0 and s1 do not form a cycle F0 -> F1 -> F0".into()));
        }
        s0.check_degrees().map_err(|e| wrap_degree("s0", e))?;
        s1.check_degrees().map_err(|e| wrap_degree("s1", e))?;
        if s0.source().rank() != s0.target().rank() {
            return Err(MfError::RankMismatch { f0: s0.source().rank(), f1: s0.target().rank() });
        }
        let mf = Self { f, d, s0, s1 };
        mf.check_composites()?;
        Ok(mf)
    }

    fn check_composites(&self) -> Result<(), MfError> {
        for (name, comp) in [("s0*s1", self.s0.compose(&self.s1)?), ("s1*s0", self.s1.compose(&self.s0)?)] {
            for r in 0..comp.rows() {
                for c in 0..comp.cols() {
                    let want = if r == c { self.f.clone() } else { GradedPoly::zero(self.ring()) };
                    if comp.entry(r, c) != &want {
                        return Err(MfError::NotAFactorization {
                            composite: name,
                            row: r,
                            col: c,
                            got: comp.entry(r, c).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Convenience constructor from polynomial strings.
    pub fn from_strings(
        ring: &WeightedRing,
        f: &str,
        f0: Vec<i64>,
        f1: Vec<i64>,
        s0: &[&[&str]],
        s1: &[&[&str]],
    ) -> Result<Self, MfError> {
        let parse = |rows: &[&[&str]]| -> Result<Vec<Vec<GradedPoly>>, PolyError> {
            rows.iter().map(|r| r.iter().map(|s| parse_poly(ring, s)).collect()).collect()
        };
        Self::validate(parse_poly(ring, f)?, f0, f1, parse(s0)?, parse(s1)?)
    }

    pub fn ring(&self) -> &WeightedRing {
        self.f.ring()
    }

    pub fn potential(&self) -> &GradedPoly {
        &self.f
    }

    pub fn degree(&self) -> i64 {
        self.d
    }

    pub fn f0(&self) -> &GradedFreeModule {
        self.s0.source()
    }

    pub fn f1(&self) -> &GradedFreeModule {
        self.s0.target()
    }

    pub fn s0(&self) -> &GradedMap {
        &self.s0
    }

    pub fn s1(&self) -> &GradedMap {
        &self.s1
    }

    pub fn rank(&self) -> usize {
        self.f0().rank()
    }

    /// Rank-0 factorization of `f`.
    pub fn zero_object(f: &GradedPoly) -> Result<Self, MfError> {
        let d = potential_degree(f)?;
        let e = GradedFreeModule::new(f.ring(), vec![]);
        Self::from_maps(f.clone(), GradedMap::zero(&e, &e, d), GradedMap::zero(&e, &e, 0))
    }

    /// `F[1] = (F1(d) ⇄ F0, -s1, -s0)`.
    pub fn shift(&self) -> Self {
        let d = self.d;
        let s0 = self.s1.neg().retarget(self.f1().twist(d), self.f0().clone(), d).expect("shift keeps degrees");
        let s1 = self.s0.neg().retarget(self.f0().clone(), self.f1().twist(d), 0).expect("shift keeps degrees");
        Self { f: self.f.clone(), d, s0, s1 }
    }

    /// `F[k]` for any integer `k`.
    pub fn shift_by(&self, k: i64) -> Self {
        let mut out = self.twist(self.d * k.div_euclid(2));
        if k.rem_euclid(2) == 1 {
            out = out.shift();
        }
        out
    }

    /// `F(l) = (F0(l) ⇄ F1(l))`.
    pub fn twist(&self, l: i64) -> Self {
        Self { f: self.f.clone(), d: self.d, s0: self.s0.twist(l), s1: self.s1.twist(l) }
    }

    /// `(F1*(-d) ⇄ F0*(-d), s0*, s1*)`.
    pub fn dual(&self) -> Self {
        Self { f: self.f.clone(), d: self.d, s0: self.s0.dual().twist(-self.d), s1: self.s1.dual().twist(-self.d) }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, MfError> {
        if self.f != other.f {
            return Err(MfError::Mismatch);
        }
        let zero01 = GradedMap::zero(other.f0(), self.f1(), self.d);
        let zero10 = GradedMap::zero(self.f0(), other.f1(), self.d);
        let s0 = GradedMap::block(vec![vec![self.s0.clone(), zero01], vec![zero10, other.s0.clone()]])?;
        let s1 = GradedMap::block(vec![
            vec![self.s1.clone(), GradedMap::zero(other.f1(), self.f0(), 0)],
            vec![GradedMap::zero(self.f1(), other.f0(), 0), other.s1.clone()],
        ])?;
        Ok(Self { f: self.f.clone(), d: self.d, s0, s1 })
    }

    /// Tensor product over the union ring (variables of `self` first):
    /// `T0 = F0⊗G0 ⊕ (F1⊗G1)(d)`, `T1 = F0⊗G1 ⊕ F1⊗G0`.
    pub fn tensor(&self, other: &Self) -> Result<Self, MfError> {
        if self.d != other.d {
            return Err(MfError::DegreeMismatch(self.d, other.d));
        }
        let d = self.d;
        let ring = self.ring().union(other.ring()).map_err(MfError::from_ring)?;
        let f = &self.f.embed(&ring)? + &other.f.embed(&ring)?;

        let (f0, f1) = (self.f0().with_ring(&ring), self.f1().with_ring(&ring));
        let (g0, g1) = (other.f0().with_ring(&ring), other.f1().with_ring(&ring));
        let t00 = f0.tensor(&g0, &ring);
        let t11 = f1.tensor(&g1, &ring).twist(d);
        let t01 = f0.tensor(&g1, &ring);
        let t10 = f1.tensor(&g0, &ring);

        let id_f0 = GradedMap::identity(self.f0());
        let id_f1 = GradedMap::identity(self.f1());
        let id_g0 = GradedMap::identity(other.f0());
        let id_g1 = GradedMap::identity(other.f1());
        let kron = |a: &GradedMap, b: &GradedMap, src: &GradedFreeModule, tgt: &GradedFreeModule, delta: i64, neg: bool| {
            let m = a.kron(b, &ring)?;
            let m = if neg { m.neg() } else { m };
            m.retarget(src.clone(), tgt.clone(), delta)
        };
        let s0 = GradedMap::block(vec![
            vec![kron(&id_f0, &other.s0, &t00, &t01, d, false)?, kron(&self.s1, &id_g1, &t11, &t01, d, false)?],
            vec![kron(&self.s0, &id_g0, &t00, &t10, d, true)?, kron(&id_f1, &other.s1, &t11, &t10, d, false)?],
        ])?;
        let s1 = GradedMap::block(vec![
            vec![kron(&id_f0, &other.s1, &t01, &t00, 0, false)?, kron(&self.s1, &id_g0, &t10, &t00, 0, true)?],
            vec![kron(&self.s0, &id_g1, &t01, &t11, 0, false)?, kron(&id_f1, &other.s0, &t10, &t11, 0, false)?],
        ])?;
        Self::from_maps(f, s0, s1)
    }

    /// Tensor with `(Q ⇄ Q(l - d), u, v)` where `|u| = l`, `|v| = d - l`.
    pub fn knorrer(&self, l: i64, u: &str, v: &str) -> Result<Self, MfError> {
        let d = self.d;
        if l < 1 || l >= d {
            return Err(MfError::Precondition(format!("need 1 <= l < d = {d}, got l = {l}")));
        }
        let ring = WeightedRing::new(&[(u, l as u32), (v, (d - l) as u32)]).map_err(MfError::from_ring)?;
        let f = &GradedPoly::var(&ring, u)? * &GradedPoly::var(&ring, v)?;
        let k = Self::validate(
            f,
            vec![0],
            vec![l - d],
            vec![vec![GradedPoly::var(&ring, u)?]],
            vec![vec![GradedPoly::var(&ring, v)?]],
        )?;
        self.tensor(&k)
    }

    /// Tensor with `(Q ⇄ Q(-d/2), u + iv, u - iv)`, `|u| = |v| = d/2`.
    pub fn knorrer_pm_i(&self, u: &str, v: &str) -> Result<Self, MfError> {
        let d = self.d;
        if d % 2 != 0 {
            return Err(MfError::Precondition(format!("the u ± iv variant needs even degree, got {d}")));
        }
        let w = (d / 2) as u32;
        let ring = WeightedRing::new(&[(u, w), (v, w)]).map_err(MfError::from_ring)?;
        let (pu, pv) = (GradedPoly::var(&ring, u)?, GradedPoly::var(&ring, v)?);
        let iv = pv.scale(&Q::i());
        let k = Self::validate(&pu.pow(2) + &pv.pow(2), vec![0], vec![-d / 2], vec![vec![&pu + &iv]], vec![vec![&pu - &iv]])?;
        self.tensor(&k)
    }

    /// Tensor with `(Q ⇄ Q(-m), u^(k-1), u)`, `|u| = m`, `k m = d`.
    pub fn suspend_by_u(&self, k: u32, m: i64, u: &str) -> Result<Self, MfError> {
        if k == 0 || m <= 0 || k as i64 * m != self.d {
            return Err(MfError::Precondition(format!("need k*m = {} with k, m positive", self.d)));
        }
        let ring = WeightedRing::new(&[(u, m as u32)]).map_err(MfError::from_ring)?;
        let pu = GradedPoly::var(&ring, u)?;
        let t = Self::validate(pu.pow(k), vec![0], vec![-m], vec![vec![pu.pow(k - 1)]], vec![vec![pu]])?;
        self.tensor(&t)
    }

    /// Sets `x` to zero, for `f = g + x^2` with `g` free of `x`.
    pub fn restrict_var(&self, x: &str) -> Result<Self, MfError> {
        let idx = self.ring().index_of(x).ok_or_else(|| PolyError::UnknownVariable(x.to_string()))?;
        let w = self.ring().weights()[idx] as i64;
        if 2 * w != self.d {
            return Err(MfError::Precondition(format!("need 2|{x}| = deg f, got 2*{w} != {}", self.d)));
        }
        let xp = GradedPoly::var(self.ring(), x)?;
        let g = &self.f - &xp.pow(2);
        if !g.is_free_of(idx) {
            return Err(MfError::Precondition(format!("f - {x}^2 must not involve {x}")));
        }
        self.restrict_vars(&[x])
    }

    /// Sets every listed variable to zero.
    pub fn restrict_vars(&self, vars: &[&str]) -> Result<Self, MfError> {
        let mut f = self.f.clone();
        let (mut s0, mut s1) = (self.s0.clone(), self.s1.clone());
        for x in vars {
            f = f.substitute_zero(x)?;
            s0 = s0.substitute_zero(x)?;
            s1 = s1.substitute_zero(x)?;
        }
        if f.is_zero() {
            return Err(MfError::Precondition("restriction kills the potential".into()));
        }
        Self::from_maps(f, s0, s1)
    }

    /// Re-expresses the factorization over a ring with the same variables
    /// and weights, possibly in another order.
    pub fn reorder(&self, ring: &WeightedRing) -> Result<Self, MfError> {
        if ring.nvars() != self.ring().nvars() {
            return Err(MfError::Mismatch);
        }
        let f = self.f.embed(ring)?;
        Self::from_maps(f, self.s0.embed(ring)?, self.s1.embed(ring)?)
    }

    /// Same matrices with renamed variables (positionally); the new ring
    /// must have the same weights.
    pub fn rename(&self, ring: &WeightedRing) -> Result<Self, MfError> {
        if ring.weights() != self.ring().weights() {
            return Err(MfError::Mismatch);
        }
        let conv = |p: &GradedPoly| GradedPoly::from_terms(ring, p.terms().map(|(e, c)| (e.clone(), c.clone())));
        let conv_map = |m: &GradedMap| -> Result<GradedMap, MfError> {
            Ok(GradedMap::new(
                m.source().with_ring(ring),
                m.target().with_ring(ring),
                m.delta(),
                m.matrix().iter().map(|r| r.iter().map(conv).collect()).collect(),
            )?)
        };
        Self::from_maps(conv(&self.f), conv_map(&self.s0)?, conv_map(&self.s1)?)
    }

    /// True when every entry of `s0` and `s1` is zero or linear.
    pub fn has_linear_entries(&self) -> bool {
        self.s0.entries().iter().chain(self.s1.entries()).all(|p| p.is_zero() || p.linear_coefficients().is_some())
    }
}

fn wrap_degree(map: &'static str, e: GrModError) -> MfError {
    match e {
        e @ GrModError::DegreeViolation { .. } => MfError::DegreeViolation { map, source: e },
        e => MfError::Module(e),
    }
}

fn potential_degree(f: &GradedPoly) -> Result<i64, MfError> {
    match f.weighted_degree() {
        Ok(d) if d > 0 => Ok(d),
        _ => Err(MfError::BadPotential(f.to_string())),
    }
}

/// Standard objects over sums of squares.
pub mod standard {
    use super::*;

    /// `L = (Q ⇄ Q(-1), x, x)` over `Q(i)[x]`, weight 1.
    pub fn l_object(x: &str) -> MatrixFactorization {
        let ring = WeightedRing::new(&[(x, 1)]).expect("valid ring");
        MatrixFactorization::from_strings(&ring, &format!("{x}^2"), vec![0], vec![-1], &[&[x]], &[&[x]])
            .expect("L is a factorization")
    }

    /// `X = (Q(-1) ⇄ Q(-2), a + ib, a - ib)`; with `swapped`, the entries
    /// are exchanged, giving `X'`.
    pub fn x_object(a: &str, b: &str, swapped: bool) -> MatrixFactorization {
        let ring = WeightedRing::new(&[(a, 1), (b, 1)]).expect("valid ring");
        let plus = format!("{a} + i*{b}");
        let minus = format!("{a} - i*{b}");
        let (e0, e1) = if swapped { (minus, plus) } else { (plus, minus) };
        MatrixFactorization::from_strings(&ring, &format!("{a}^2 + {b}^2"), vec![-1], vec![-2], &[&[&e0]], &[&[&e1]])
            .expect("X is a factorization")
    }

    /// `q_n` in variables `x1, ..., xn` of weight one.
    pub fn quadric_ring(n: usize) -> WeightedRing {
        let names: Vec<(String, u32)> = (1..=n).map(|i| (format!("x{i}"), 1)).collect();
        WeightedRing::new(&names).expect("valid ring")
    }

    pub fn quadric(n: usize) -> GradedPoly {
        let ring = quadric_ring(n);
        let mut f = GradedPoly::zero(&ring);
        for name in ring.names() {
            f = &f + &GradedPoly::var(&ring, name).expect("variable").pow(2);
        }
        f
    }

    /// The declared generators of `K0(MF(q_n))` in variables `x1..xn`:
    /// `K^((n-1)/2)(L)` for odd `n`, `K^((n-2)/2)(X)` and `K^((n-2)/2)(X')`
    /// for even `n`, each Knörrer step using `u ± iv` on the next two variables.
    pub fn quadric_generators(n: usize) -> Vec<MatrixFactorization> {
        assert!(n >= 1, "q_n needs at least one variable");
        let name = |i: usize| format!("x{i}");
        let seeds = if n % 2 == 1 {
            vec![l_object(&name(1))]
        } else {
            vec![x_object(&name(1), &name(2), false), x_object(&name(1), &name(2), true)]
        };
        let start = if n % 2 == 1 { 2 } else { 3 };
        seeds
            .into_iter()
            .map(|mut g| {
                let mut i = start;
                while i < n {
                    g = g.knorrer_pm_i(&name(i), &name(i + 1)).expect("fresh variables");
                    i += 2;
                }
                g
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;

    #[test]
    fn standard_objects_validate() {
        let l = l_object("x");
        assert_eq!(l.rank(), 1);
        let x = x_object("x1", "x2", false);
        assert_eq!(x.f0().twists(), &[-1]);
        let xp = x_object("x1", "x2", true);
        assert_ne!(x, xp);
    }

    #[test]
    fn wrong_twist_is_a_degree_violation() {
        let ring = WeightedRing::new(&[("x", 1)]).unwrap();
        let err = MatrixFactorization::from_strings(&ring, "x^2", vec![0], vec![0], &[&["x"]], &[&["x"]]).unwrap_err();
        assert!(matches!(err, MfError::DegreeViolation { map: "s0", .. }), "{err:?}");
    }

    #[test]
    fn corrupted_entry_is_reported() {
        let ring = WeightedRing::new(&[("x", 1)]).unwrap();
        let err = MatrixFactorization::from_strings(&ring, "x^2", vec![0], vec![-1], &[&["2*x"]], &[&["x"]]).unwrap_err();
        assert!(matches!(err, MfError::NotAFactorization { row: 0, col: 0, .. }));
    }

    #[test]
    fn shift_of_l() {
        let l = l_object("x");
        let s = l.shift();
        assert_eq!(s.f0().twists(), &[1]);
        assert_eq!(s.f1().twists(), &[0]);
        assert_eq!(s.s0().entry(0, 0).to_string(), "-x");
        assert_eq!(s.shift(), l.twist(2));
        assert_eq!(l.shift_by(-1).shift(), l);
    }

    #[test]
    fn dual_is_involutive() {
        let x = x_object("x1", "x2", false);
        let d = x.dual();
        assert!(MatrixFactorization::from_maps(d.potential().clone(), d.s0().clone(), d.s1().clone()).is_ok());
        assert_eq!(d.dual(), x);
    }

    #[test]
    fn tensor_and_knorrer() {
        let t = l_object("x").tensor(&l_object("y")).unwrap();
        assert_eq!(t.rank(), 2);
        assert_eq!(t.potential().to_string(), "x^2 + y^2");
        let k = l_object("x").knorrer(1, "u", "v").unwrap();
        assert_eq!(k.rank(), 2);
        assert!(l_object("x").tensor(&l_object("x")).is_err());
        let z = MatrixFactorization::zero_object(l_object("y").potential()).unwrap();
        assert_eq!(l_object("x").tensor(&z).unwrap().rank(), 0);
    }

    #[test]
    fn restriction_of_x() {
        let r = x_object("x1", "x2", false).restrict_var("x2").unwrap();
        assert_eq!(r.potential().to_string(), "x1^2");
        assert_eq!(r.s0().entry(0, 0).to_string(), "x1");
        assert!(l_object("x").knorrer(1, "u", "v").unwrap().restrict_var("u").is_err());
    }

    #[test]
    fn generator_ranks() {
        for n in 1..=7usize {
            for g in quadric_generators(n) {
                assert_eq!(g.ring().nvars(), n);
                assert_eq!(g.potential(), &quadric(n));
                assert_eq!(2 * g.rank(), 1 << ((n + 1) / 2));
            }
        }
    }
}
