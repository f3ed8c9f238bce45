//! Minimal graded free resolutions over `Q` or over a hypersurface
//! `S = Q/(f)`, computed degree by degree with exact linear algebra on
//! graded pieces, and recovery of matrix factorizations from periodic tails.
//!
//! Elements of `S` are stored as normal forms in `Q`: the leading variable
//! `v` of `f` (highest weight among the variables occurring as a pure power
//! `c v^k`, ties broken towards the last variable) never appears with
//! exponent `k` or more.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::linalg::{sparse_kernel, sparse_rank, SparseEchelon, SparseVec};
use crate::exactalg::{GaussianRational as Q, QMatrix};
use crate::grmod::{GrModError, GradedFreeModule, GradedMap};
use crate::mf::standard::{quadric, quadric_ring};
use crate::mf::{MatrixFactorization, MfError};
use crate::polyring::{Exponent, GradedPoly, WeightedRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("modulus {0} has no variable occurring as a pure power; cannot form normal forms")]
    NonMonic(String),
    #[error("modulus must be homogeneous of positive degree: {0}")]
    BadModulus(String),
    #[error("syzygies of step {step} may lie beyond the degree bound {bound}")]
    DegreeBoundTooSmall { step: usize, bound: i64 },
    #[error("no periodicity observed in {0} steps")]
    NotPeriodic(usize),
    #[error("lifted differentials do not form a matrix factorization: {0}")]
    LiftFailure(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Module(#[from] GrModError),
    #[error(transparent)]
    Mf(#[from] MfError),
}

/// Monomial basis of a graded piece of `S`.
struct Basis {
    monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

struct Modulus {
    f: GradedPoly,
    degree: i64,
    var: usize,
    power: u32,
    /// `v^k = tail` in `S`
    tail: Vec<(Exponent, Q)>,
}

/// Arithmetic in `S = Q/(f)`, or in `Q` itself.
struct Quotient {
    ring: WeightedRing,
    modulus: Option<Modulus>,
    bases: RefCell<HashMap<i64, Arc<Basis>>>,
    nf_cache: RefCell<HashMap<Exponent, Arc<Vec<(Exponent, Q)>>>>,
}

impl Quotient {
    fn new(ring: &WeightedRing, f: Option<&GradedPoly>) -> Result<Self, ResolveError> {
        let modulus = match f {
            None => None,
            Some(f) => Some(Self::modulus(ring, f)?),
        };
        Ok(Self { ring: ring.clone(), modulus, bases: RefCell::default(), nf_cache: RefCell::default() })
    }

    fn modulus(ring: &WeightedRing, f: &GradedPoly) -> Result<Modulus, ResolveError> {
        if f.ring() != ring {
            return Err(ResolveError::Module(GrModError::RingMismatch));
        }
        let degree = match f.weighted_degree() {
            Ok(d) if d > 0 => d,
            _ => return Err(ResolveError::BadModulus(f.to_string())),
        };
        let weights = ring.weights();
        let mut best: Option<(usize, u32, Q)> = None;
        for (e, c) in f.terms() {
            let nz: Vec<usize> = (0..e.len()).filter(|&i| e[i] > 0).collect();
            if let [var] = nz[..] {
                let better = match &best {
                    None => true,
                    Some((b, _, _)) => weights[var] > weights[*b] || (weights[var] == weights[*b] && var > *b),
                };
                if better {
                    best = Some((var, e[var], c.clone()));
                }
            }
        }
        let Some((var, power, c)) = best else {
            return Err(ResolveError::NonMonic(f.to_string()));
        };
        let inv = c.inv().expect("nonzero coefficient");
        let tail = f
            .terms()
            .filter(|(e, _)| e[var] != power)
            .map(|(e, x)| (e.clone(), -(x * &inv)))
            .collect();
        Ok(Modulus { f: f.clone(), degree, var, power, tail })
    }

    fn degree_of_modulus(&self) -> Option<i64> {
        self.modulus.as_ref().map(|m| m.degree)
    }

    fn basis(&self, d: i64) -> Arc<Basis> {
        if let Some(b) = self.bases.borrow().get(&d) {
            return Arc::clone(b);
        }
        let piece = self.ring.graded_piece(d);
        let monomials: Vec<Exponent> = match &self.modulus {
            None => piece.monomials.clone(),
            Some(m) => piece.monomials.iter().filter(|e| e[m.var] < m.power).cloned().collect(),
        };
        let index = monomials.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let b = Arc::new(Basis { monomials, index });
        self.bases.borrow_mut().insert(d, Arc::clone(&b));
        b
    }

    fn nf_monomial(&self, e: &Exponent) -> Arc<Vec<(Exponent, Q)>> {
        let Some(m) = &self.modulus else {
            return Arc::new(vec![(e.clone(), Q::one())]);
        };
        if e[m.var] < m.power {
            return Arc::new(vec![(e.clone(), Q::one())]);
        }
        if let Some(r) = self.nf_cache.borrow().get(e) {
            return Arc::clone(r);
        }
        let mut rest = e.clone();
        rest[m.var] -= m.power;
        let mut acc: BTreeMap<Exponent, Q> = BTreeMap::new();
        for (t, c) in &m.tail {
            let prod: Exponent = rest.iter().zip(t).map(|(a, b)| a + b).collect();
            for (g, x) in self.nf_monomial(&prod).iter() {
                *acc.entry(g.clone()).or_insert_with(Q::zero) += &(c * x);
            }
        }
        let out: Arc<Vec<(Exponent, Q)>> = Arc::new(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect());
        self.nf_cache.borrow_mut().insert(e.clone(), Arc::clone(&out));
        out
    }

    /// Normal form of `p * x^mu` as a term map.
    fn nf_times(&self, p: &GradedPoly, mu: &[u32], acc: &mut BTreeMap<Exponent, Q>) {
        for (e, c) in p.terms() {
            let prod: Exponent = e.iter().zip(mu).map(|(a, b)| a + b).collect();
            for (g, x) in self.nf_monomial(&prod).iter() {
                *acc.entry(g.clone()).or_insert_with(Q::zero) += &(c * x);
            }
        }
    }

    fn nf(&self, p: &GradedPoly) -> GradedPoly {
        let zero = vec![0; self.ring.nvars()];
        let mut acc = BTreeMap::new();
        self.nf_times(p, &zero, &mut acc);
        GradedPoly::from_terms(&self.ring, acc.into_iter().filter(|(_, x)| !x.is_zero()))
    }

    fn nf_map(&self, m: &GradedMap) -> Result<GradedMap, GrModError> {
        let rows = m.matrix().iter().map(|r| r.iter().map(|p| self.nf(p)).collect()).collect();
        GradedMap::new(m.source().clone(), m.target().clone(), m.delta(), rows)
    }

    fn is_zero_map(&self, m: &GradedMap) -> bool {
        m.entries().iter().all(|p| self.nf(p).is_zero())
    }
}

/// Coordinates of degree `e` elements of a free module `⊕ S(a_j)`.
struct Layout {
    offsets: Vec<usize>,
    bases: Vec<Arc<Basis>>,
    dim: usize,
}

impl Layout {
    fn new(q: &Quotient, twists: &[i64], e: i64) -> Self {
        let mut offsets = Vec::with_capacity(twists.len());
        let mut bases = Vec::with_capacity(twists.len());
        let mut dim = 0;
        for a in twists {
            let b = q.basis(e + a);
            offsets.push(dim);
            dim += b.monomials.len();
            bases.push(b);
        }
        Self { offsets, bases, dim }
    }

    /// Coordinates of `column * x^mu`.
    fn coords(&self, q: &Quotient, column: &[GradedPoly], mu: &[u32]) -> SparseVec {
        let mut out = Vec::new();
        for (j, p) in column.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let mut acc = BTreeMap::new();
            q.nf_times(p, mu, &mut acc);
            let mut block: Vec<(usize, Q)> = acc
                .into_iter()
                .filter(|(_, x)| !x.is_zero())
                .map(|(g, x)| {
                    let k = self.bases[j].index.get(&g).copied().expect("product lands in the expected piece");
                    (self.offsets[j] + k, x)
                })
                .collect();
            block.sort_by_key(|(k, _)| *k);
            out.extend(block);
        }
        out
    }

    /// The column of polynomials with coordinates `v`, scaled to a monic lead.
    fn decode(&self, q: &Quotient, v: &SparseVec) -> Vec<GradedPoly> {
        let inv = v.first().and_then(|(_, x)| x.inv()).unwrap_or_else(Q::one);
        let mut terms: Vec<Vec<(Exponent, Q)>> = vec![Vec::new(); self.bases.len()];
        for (idx, x) in v {
            let j = self.offsets.partition_point(|&o| o <= *idx) - 1;
            let e = self.bases[j].monomials[idx - self.offsets[j]].clone();
            terms[j].push((e, x * &inv));
        }
        terms.into_iter().map(|t| GradedPoly::from_terms(&q.ring, t)).collect()
    }
}

/// A graded module presented as the cokernel of `relations`, over `Q`
/// (no modulus) or over `Q/(f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule {
    modulus: Option<GradedPoly>,
    relations: GradedMap,
}

impl PresentedModule {
    pub fn new(modulus: Option<GradedPoly>, relations: GradedMap) -> Result<Self, ResolveError> {
        relations.check_degrees()?;
        if relations.delta() != 0 {
            return Err(ResolveError::Precondition("relations must have degree 0".into()));
        }
        if let Some(f) = &modulus {
            Quotient::modulus(relations.ring(), f)?;
        }
        Ok(Self { modulus, relations })
    }

    /// The residue field `S/(x_1, ..., x_n)` in degree 0.
    pub fn residue_field(ring: &WeightedRing, modulus: Option<GradedPoly>) -> Result<Self, ResolveError> {
        let gens = GradedFreeModule::new(ring, vec![0]);
        let src = GradedFreeModule::new(ring, ring.weights().iter().map(|w| -(*w as i64)).collect());
        let row = ring.names().iter().map(|x| GradedPoly::var(ring, x).expect("ring variable")).collect();
        Self::new(modulus, GradedMap::new(src, gens, 0, vec![row])?)
    }

    /// `coker(s1)` over `Q/(f)`, the module corresponding to `F`.
    pub fn cokernel_of(mf: &MatrixFactorization) -> Result<Self, ResolveError> {
        Self::new(Some(mf.potential().clone()), mf.s1().clone())
    }

    pub fn ring(&self) -> &WeightedRing {
        self.relations.ring()
    }

    pub fn modulus(&self) -> Option<&GradedPoly> {
        self.modulus.as_ref()
    }

    pub fn generators(&self) -> &GradedFreeModule {
        self.relations.target()
    }

    pub fn relations(&self) -> &GradedMap {
        &self.relations
    }
}

/// How the generators of one step were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepSource {
    /// chosen from a kernel basis
    Computed,
    /// a caller-supplied candidate, certified degree by degree
    Hint,
    /// the twist of the differential two steps back, certified degree by degree
    Twisted,
    /// forced by the periodicity of the two previous differentials
    Propagated,
}

/// Rank accounting in one internal degree: `image_dim` is the dimension of
/// the span of the new generators' multiples, `kernel_dim` that of the
/// kernel (or, at step 1, of the image of the relations).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: i64,
    pub kernel_dim: usize,
    pub image_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub step: usize,
    pub source: StepSource,
    pub degrees: Vec<DegreeCheck>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Periodicity {
    pub start: usize,
    pub twist: i64,
}

/// `P_0 <- P_1 <- ...` with `differentials[k - 1] = d_k : P_k -> P_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    modulus: Option<GradedPoly>,
    modules: Vec<GradedFreeModule>,
    differentials: Vec<GradedMap>,
    periodicity: Option<Periodicity>,
    reports: Vec<StepReport>,
    degree_bound: i64,
}

impl Resolution {
    /// Number of differentials.
    pub fn length(&self) -> usize {
        self.differentials.len()
    }

    pub fn module(&self, k: usize) -> &GradedFreeModule {
        &self.modules[k]
    }

    pub fn modules(&self) -> &[GradedFreeModule] {
        &self.modules
    }

    /// `d_k : P_k -> P_{k-1}` for `k >= 1`.
    pub fn differential(&self, k: usize) -> &GradedMap {
        &self.differentials[k - 1]
    }

    pub fn differentials(&self) -> &[GradedMap] {
        &self.differentials
    }

    pub fn modulus(&self) -> Option<&GradedPoly> {
        self.modulus.as_ref()
    }

    pub fn periodicity(&self) -> Option<Periodicity> {
        self.periodicity
    }

    pub fn reports(&self) -> &[StepReport] {
        &self.reports
    }

    pub fn degree_bound(&self) -> i64 {
        self.degree_bound
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(GradedFreeModule::rank).collect()
    }

    pub fn betti_table(&self) -> BettiTable {
        let mut entries = BTreeMap::new();
        for (k, m) in self.modules.iter().enumerate() {
            for a in m.twists() {
                *entries.entry((k, -a)).or_insert(0usize) += 1;
            }
        }
        BettiTable {
            ranks: self.ranks(),
            entries: entries.into_iter().map(|((step, degree), count)| BettiEntry { step, degree, count }).collect(),
            periodicity: self.periodicity,
            degree_bound: self.degree_bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiEntry {
    pub step: usize,
    pub degree: i64,
    pub count: usize,
}

/// Graded Betti numbers `β_{k, j}`: `count` generators of `P_k` in degree `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub ranks: Vec<usize>,
    pub entries: Vec<BettiEntry>,
    pub periodicity: Option<Periodicity>,
    pub degree_bound: i64,
}

impl fmt::Display for BettiTable {
    /// Rows are indexed by `j - k`, columns by the step `k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps = self.ranks.len();
        let rows: Vec<i64> = {
            let mut r: Vec<i64> = self.entries.iter().map(|e| e.degree - e.step as i64).collect();
            r.sort_unstable();
            r.dedup();
            r
        };
        let width = self.ranks.iter().map(|r| r.to_string().len()).max().unwrap_or(1).max(steps.to_string().len()) + 1;
        write!(f, "{:>7}", "")?;
        for k in 0..steps {
            write!(f, "{k:>width$}")?;
        }
        writeln!(f)?;
        write!(f, "{:>7}", "total:")?;
        for r in &self.ranks {
            write!(f, "{r:>width$}")?;
        }
        writeln!(f)?;
        for row in rows {
            write!(f, "{:>7}", format!("{row}:"))?;
            for k in 0..steps {
                let c = self
                    .entries
                    .iter()
                    .find(|e| e.step == k && e.degree - k as i64 == row)
                    .map_or(0, |e| e.count);
                if c == 0 {
                    write!(f, "{:>width$}", "-")?;
                } else {
                    write!(f, "{c:>width$}")?;
                }
            }
            writeln!(f)?;
        }
        if let Some(p) = self.periodicity {
            writeln!(f, "periodic from d_{} with twist {}", p.start, p.twist)?;
        }
        Ok(())
    }
}

/// `2 deg f + (max twist - min twist) + 4`, relative to the top generator
/// degree of the previous module at each step.
pub fn default_degree_bound(m: &PresentedModule) -> i64 {
    let d = m.modulus().map_or(0, |f| f.weighted_degree().unwrap_or(0));
    let twists: Vec<i64> = m.generators().twists().iter().chain(m.relations().source().twists()).copied().collect();
    let spread = twists.iter().max().zip(twists.iter().min()).map_or(0, |(a, b)| a - b);
    2 * d + spread + 4
}

struct Column {
    degree: i64,
    entries: Vec<GradedPoly>,
}

fn columns_of(m: &GradedMap) -> Vec<Column> {
    (0..m.cols())
        .map(|i| Column {
            degree: -m.source().twists()[i],
            entries: (0..m.rows()).map(|j| m.entry(j, i).clone()).collect(),
        })
        .collect()
}

fn map_from_columns(q: &Quotient, target: &GradedFreeModule, cols: &[Column]) -> Result<GradedMap, GrModError> {
    let source = GradedFreeModule::new(&q.ring, cols.iter().map(|c| -c.degree).collect());
    let rows = (0..target.rank()).map(|j| cols.iter().map(|c| c.entries[j].clone()).collect()).collect();
    GradedMap::new(source, target.clone(), 0, rows)
}

/// Spanning vectors, in degree `e`, of the multiples `x^mu * g` with
/// `deg mu > 0` of already chosen generators.
fn multiples(q: &Quotient, layout: &Layout, chosen: &[Column], e: i64) -> Vec<SparseVec> {
    let mut out = Vec::new();
    for g in chosen.iter().filter(|g| g.degree < e) {
        for mu in &q.basis(e - g.degree).monomials {
            out.push(layout.coords(q, &g.entries, mu));
        }
    }
    out
}

/// Removes generators hit by a unit entry of the relations (Schur complement).
fn prune(q: &Quotient, rel: &GradedMap) -> Result<GradedMap, GrModError> {
    let mut rel = q.nf_map(rel)?;
    loop {
        let unit = (0..rel.rows())
            .flat_map(|j| (0..rel.cols()).map(move |i| (j, i)))
            .find(|&(j, i)| rel.entry(j, i).is_unit());
        let Some((j0, i0)) = unit else {
            return Ok(rel);
        };
        let inv = rel.entry(j0, i0).constant_term().inv().expect("unit");
        let rows: Vec<usize> = (0..rel.rows()).filter(|&j| j != j0).collect();
        let cols: Vec<usize> = (0..rel.cols()).filter(|&i| i != i0).collect();
        let mut m = Vec::with_capacity(rows.len());
        for &j in &rows {
            let mut row = Vec::with_capacity(cols.len());
            for &i in &cols {
                let corr = (rel.entry(j, i0) * rel.entry(j0, i)).scale(&inv);
                row.push(q.nf(&(rel.entry(j, i) - &corr)));
            }
            m.push(row);
        }
        let pick = |module: &GradedFreeModule, keep: &[usize]| {
            GradedFreeModule::new(module.ring(), keep.iter().map(|&k| module.twists()[k]).collect())
        };
        rel = GradedMap::new(pick(rel.source(), &cols), pick(rel.target(), &rows), 0, m)?;
    }
}

/// Step 1: a minimal subset of the relation columns generating their image,
/// kept in the original column order.
fn image_step(q: &Quotient, rel: &GradedMap) -> (Vec<Column>, Vec<DegreeCheck>) {
    let gens = rel.target().twists().to_vec();
    let mut cols: Vec<(usize, Column)> = columns_of(rel)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| c.entries.iter().any(|p| !p.is_zero()))
        .collect();
    cols.sort_by_key(|(_, c)| c.degree);
    let zero = vec![0; q.ring.nvars()];
    let mut chosen: Vec<(usize, Column)> = Vec::new();
    let mut checks = Vec::new();
    let mut degrees: Vec<i64> = cols.iter().map(|(_, c)| c.degree).collect();
    degrees.dedup();
    for e in degrees {
        let layout = Layout::new(q, &gens, e);
        let mut ech = SparseEchelon::new();
        let lower: Vec<Column> =
            chosen.iter().map(|(_, c)| Column { degree: c.degree, entries: c.entries.clone() }).collect();
        for v in multiples(q, &layout, &lower, e) {
            ech.insert(v);
        }
        let before = ech.rank();
        let mut fresh = Vec::new();
        for (i, c) in cols.iter().filter(|(_, c)| c.degree == e) {
            if ech.insert(layout.coords(q, &c.entries, &zero)).is_some() {
                fresh.push((*i, Column { degree: e, entries: c.entries.clone() }));
            }
        }
        checks.push(DegreeCheck { degree: e, kernel_dim: ech.rank(), image_dim: before + fresh.len() });
        chosen.extend(fresh);
    }
    chosen.sort_by_key(|(i, _)| *i);
    (chosen.into_iter().map(|(_, c)| c).collect(), checks)
}

struct KernelStep {
    columns: Vec<Column>,
    checks: Vec<DegreeCheck>,
}

/// Minimal generators of `ker(phi)`. With a candidate, succeeds only if the
/// candidate columns are exactly a minimal generating set.
fn kernel_step(
    q: &Quotient,
    phi: &GradedMap,
    candidate: Option<&GradedMap>,
    bound: i64,
    step: usize,
) -> Result<Option<KernelStep>, ResolveError> {
    let src = phi.source().twists().to_vec();
    let tgt = phi.target().twists().to_vec();
    if src.is_empty() {
        return Ok(Some(KernelStep { columns: Vec::new(), checks: Vec::new() }));
    }
    let gen_lo = src.iter().map(|a| -a).min().expect("nonempty");
    let gen_hi = src.iter().map(|a| -a).max().expect("nonempty");
    let entry_deg = phi.entries().iter().filter_map(|p| p.weighted_degree().ok()).max().unwrap_or(0);
    let quiet = entry_deg.max(q.degree_of_modulus().unwrap_or(0)).max(1);
    let cap = gen_hi + bound;

    let cand_cols = match candidate {
        None => None,
        Some(c) => {
            if c.target() != phi.source() || c.delta() != 0 || !q.is_zero_map(&phi.compose(c)?) {
                return Ok(None);
            }
            let cols = columns_of(&q.nf_map(c)?);
            if cols.iter().any(|c| c.degree > cap || c.entries.iter().all(GradedPoly::is_zero)) {
                return Ok(None);
            }
            Some(cols)
        }
    };
    let cand_hi = cand_cols.as_ref().and_then(|c| c.iter().map(|c| c.degree).max()).unwrap_or(gen_lo);

    let phi_cols = columns_of(phi);
    let mut chosen: Vec<Column> = Vec::new();
    let mut checks = Vec::new();
    let mut last_event = gen_hi.max(cand_hi);
    let mut e = gen_lo;
    loop {
        if e > cap {
            return Err(ResolveError::DegreeBoundTooSmall { step, bound });
        }
        let sl = Layout::new(q, &src, e);
        let tl = Layout::new(q, &tgt, e);
        if sl.dim > 0 {
            let mut images = Vec::with_capacity(sl.dim);
            for (j, b) in sl.bases.iter().enumerate() {
                for mu in &b.monomials {
                    images.push(tl.coords(q, &phi_cols[j].entries, mu));
                }
            }
            let kernel_dim = sl.dim - if tl.dim == 0 { 0 } else { sparse_rank(&images) };
            let mult = multiples(q, &sl, &chosen, e);
            let w_dim = sparse_rank(&mult);
            let here: Vec<&Column> = cand_cols.iter().flatten().filter(|c| c.degree == e).collect();
            let needed = kernel_dim - w_dim;
            if needed > 0 || !here.is_empty() {
                if cand_cols.is_some() && here.len() != needed {
                    return Ok(None);
                }
                let mut ech = SparseEchelon::new();
                for v in mult {
                    ech.insert(v);
                }
                let zero = vec![0; q.ring.nvars()];
                let mut fresh = Vec::new();
                if cand_cols.is_some() {
                    for c in here {
                        if ech.insert(sl.coords(q, &c.entries, &zero)).is_none() {
                            return Ok(None);
                        }
                        fresh.push(Column { degree: e, entries: c.entries.clone() });
                    }
                } else {
                    for v in sparse_kernel(&images, tl.dim) {
                        if fresh.len() == needed {
                            break;
                        }
                        if ech.insert(v.clone()).is_some() {
                            fresh.push(Column { degree: e, entries: sl.decode(q, &v) });
                        }
                    }
                }
                debug_assert_eq!(fresh.len(), needed);
                checks.push(DegreeCheck { degree: e, kernel_dim, image_dim: ech.rank() });
                chosen.extend(fresh);
                last_event = last_event.max(e);
            } else {
                checks.push(DegreeCheck { degree: e, kernel_dim, image_dim: w_dim });
            }
        }
        if e >= last_event + quiet {
            break;
        }
        e += 1;
    }
    if let Some(cols) = cand_cols {
        return Ok(Some(KernelStep { columns: cols, checks }));
    }
    Ok(Some(KernelStep { columns: chosen, checks }))
}

/// Minimal resolution with `steps` differentials (fewer if it terminates).
pub fn resolve(m: &PresentedModule, steps: usize, degree_bound: i64) -> Result<Resolution, ResolveError> {
    resolve_with_hints(m, steps, degree_bound, &BTreeMap::new())
}

/// As [`resolve`], trying `hints[k]` (for `k >= 2`) as `d_k` first; a hint
/// is used only if it is certified as a minimal generating set of the
/// syzygies.
pub fn resolve_with_hints(
    m: &PresentedModule,
    steps: usize,
    degree_bound: i64,
    hints: &BTreeMap<usize, GradedMap>,
) -> Result<Resolution, ResolveError> {
    let q = Quotient::new(m.ring(), m.modulus())?;
    let d = q.degree_of_modulus();
    let rel = prune(&q, m.relations())?;
    let mut modules = vec![rel.target().clone()];
    let mut differentials: Vec<GradedMap> = Vec::new();
    let mut reports = Vec::new();
    if steps > 0 {
        let (cols, checks) = image_step(&q, &rel);
        let d1 = map_from_columns(&q, rel.target(), &cols)?;
        if d1.cols() > 0 {
            modules.push(d1.source().clone());
            differentials.push(d1);
            reports.push(StepReport { step: 1, source: StepSource::Computed, degrees: checks });
        }
    }
    while !differentials.is_empty() && differentials.len() < steps {
        let k = differentials.len() + 1;
        let phi = differentials[k - 2].clone();
        let back = |j: usize| d.map(|d| differentials[j - 1].twist(-d));
        if k >= 4 && back(k - 3).as_ref() == Some(&phi) {
            let next = back(k - 2).expect("modulus present");
            modules.push(next.source().clone());
            differentials.push(next);
            reports.push(StepReport { step: k, source: StepSource::Propagated, degrees: Vec::new() });
            continue;
        }
        let mut attempts: Vec<(GradedMap, StepSource)> = Vec::new();
        if let Some(h) = hints.get(&k) {
            attempts.push((h.clone(), StepSource::Hint));
        }
        if k >= 3 {
            if let Some(t) = back(k - 2) {
                if t.target() == phi.source() {
                    attempts.push((t, StepSource::Twisted));
                }
            }
        }
        let mut done = None;
        for (cand, source) in attempts {
            if let Some(step) = kernel_step(&q, &phi, Some(&cand), degree_bound, k)? {
                done = Some((q.nf_map(&cand)?, source, step.checks));
                break;
            }
        }
        let (next, source, checks) = match done {
            Some(x) => x,
            None => {
                let step = kernel_step(&q, &phi, None, degree_bound, k)?.expect("no candidate");
                let mut next = map_from_columns(&q, phi.source(), &step.columns)?;
                if k >= 2 && d.is_some_and(|d| next.source() == &modules[k - 2].twist(-d)) {
                    if let Some(h_inv) = factorization_normalizer(&q, &phi, &next) {
                        next = next.compose(&h_inv)?;
                    }
                }
                (next, StepSource::Computed, step.checks)
            }
        };
        if next.cols() == 0 {
            break;
        }
        modules.push(next.source().clone());
        differentials.push(next);
        reports.push(StepReport { step: k, source, degrees: checks });
    }
    let mut res = Resolution {
        modulus: m.modulus().cloned(),
        modules,
        differentials,
        periodicity: None,
        reports,
        degree_bound,
    };
    res.periodicity = detect_periodicity(&res);
    Ok(res)
}

/// For `prev: P_{k-1} -> P_{k-2}` and `next: P_k -> P_{k-1}` with
/// `P_k = P_{k-2}(-d)`, the lifted product is `f H`; when `H` is an invertible
/// constant matrix this returns `H^{-1}` as an automorphism of `P_k`, so that
/// `prev * next * H^{-1} = f`.
fn factorization_normalizer(q: &Quotient, prev: &GradedMap, next: &GradedMap) -> Option<GradedMap> {
    let f = &q.modulus.as_ref()?.f;
    let h = constant_quotient(&prev.compose(next).ok()?, f)?;
    let h_inv = h.inverse()?;
    let n = h_inv.rows();
    let rows = (0..n).map(|r| (0..n).map(|c| GradedPoly::constant(&q.ring, h_inv.get(r, c).clone())).collect()).collect();
    GradedMap::new(next.source().clone(), next.source().clone(), 0, rows).ok()
}

/// `H` with `m = f H` entrywise, if `H` is constant.
fn constant_quotient(m: &GradedMap, f: &GradedPoly) -> Option<QMatrix> {
    let (lead_e, lead_c) = f.terms().next()?;
    let mut h = QMatrix::zero(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let p = m.entry(r, c);
            let k = &p.coefficient(lead_e) / lead_c;
            if p != &f.scale(&k) {
                return None;
            }
            h.set(r, c, k);
        }
    }
    Some(h)
}

/// Smallest `s` with `d_{k+2} = d_k(-deg f)` for every computed `k >= s`.
pub fn detect_periodicity(res: &Resolution) -> Option<Periodicity> {
    let d = res.modulus()?.weighted_degree().ok()?;
    let n = res.length();
    let periodic_from = |s: usize| (s..=n - 2).all(|k| res.differential(k + 2) == &res.differential(k).twist(-d));
    (1..n.saturating_sub(1)).find(|&s| periodic_from(s)).map(|start| Periodicity { start, twist: -d })
}

/// The factorization `(P_{j-1} ⇄ P_j)` with `s1 = d_j` and `s0 = d_{j+1}`
/// read as a map `P_{j-1} -> P_j` of degree `deg f`, normalized so that
/// `s1 s0 = f`.
pub fn mf_from_tail(res: &Resolution, j: usize) -> Result<MatrixFactorization, ResolveError> {
    let f = res.modulus().ok_or_else(|| ResolveError::Precondition("resolution over Q has no tail".into()))?;
    let d = f.weighted_degree().map_err(|_| ResolveError::BadModulus(f.to_string()))?;
    if j == 0 || j + 1 > res.length() {
        return Err(ResolveError::Precondition(format!("need differentials d_{j} and d_{}", j + 1)));
    }
    let (f0, f1) = (res.module(j - 1).clone(), res.module(j).clone());
    if res.module(j + 1) != &f0.twist(-d) || f0.rank() != f1.rank() {
        return Err(ResolveError::LiftFailure(format!("P_{} is not P_{}(-{d})", j + 1, j - 1)));
    }
    let s1 = res.differential(j).clone();
    let s0 = GradedMap::new(f0.clone(), f1.clone(), d, res.differential(j + 1).matrix())?;
    let h = constant_quotient(&s1.compose(&s0)?, f).ok_or_else(|| {
        ResolveError::LiftFailure(format!("d_{j} d_{} is not f times a constant matrix", j + 1))
    })?;
    let n = f0.rank();
    let hinv = h.inverse().ok_or_else(|| ResolveError::LiftFailure("d_j d_(j+1) = f H with H singular".into()))?;
    let rows = (0..n)
        .map(|r| (0..n).map(|c| GradedPoly::constant(f.ring(), hinv.get(r, c).clone())).collect())
        .collect();
    let hinv = GradedMap::new(f0.clone(), f0, 0, rows)
        .map_err(|_| ResolveError::LiftFailure("H mixes generators of different degrees".into()))?;
    let s0 = s0.compose(&hinv)?;
    MatrixFactorization::from_maps(f.clone(), s0, s1).map_err(|e| ResolveError::LiftFailure(e.to_string()))
}

/// The factorization attached to the periodic tail of the resolution of `m`.
pub fn stable_mf(m: &PresentedModule) -> Result<MatrixFactorization, ResolveError> {
    if m.modulus().is_none() {
        return Err(ResolveError::Precondition("stable_mf needs a hypersurface".into()));
    }
    let steps = m.ring().nvars() + 4;
    let res = resolve(m, steps, default_degree_bound(m))?;
    let p = res.periodicity().ok_or(ResolveError::NotPeriodic(res.length()))?;
    mf_from_tail(&res, p.start)
}

/// Resolution of the residue field of `R_n = Q(i)[x_1..x_n]/(q_n)`.
pub fn residue_field_resolution(n: usize, steps: usize) -> Result<Resolution, ResolveError> {
    let m = PresentedModule::residue_field(&quadric_ring(n), Some(quadric(n)))?;
    resolve(&m, steps, default_degree_bound(&m))
}

/// `b(k)` for the residue field `k` of `R_n`: the factorization of
/// `N = coker(d_n)` twisted by `n - 2`, then dualized, giving
/// `Q^{2^{n-1}} ⇄ Q(-1)^{2^{n-1}}`.
pub fn adjoint_b_quadric(n: usize) -> Result<MatrixFactorization, ResolveError> {
    if n < 2 {
        return Err(ResolveError::Precondition("adjoint_b_quadric needs n >= 2".into()));
    }
    let res = residue_field_resolution(n, n + 1)?;
    let tail = mf_from_tail(&res, n)?;
    Ok(tail.twist(n as i64 - 2).dual())
}

/// Outcome of comparing the resolution of `res(coker s1)` over
/// `Q[u]/(f + u^k)` with the displayed two-periodic block pattern
/// `(u  s1)`, `[[u^(k-1), -s1], [s0, u]]`, `[[u, s1], [-s0, u^(k-1)]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushTensorReport {
    /// `d_1` is literally `(u  s1)`
    pub first_matches: bool,
    /// the two block matrices were certified as `d_2` and `d_3`
    pub blocks_certified: bool,
    /// `d_4 = d_2(-d)` and `d_5 = d_3(-d)` literally
    pub periodic: bool,
    /// the unhinted resolution has the same ranks and also becomes periodic
    pub unhinted_agrees: bool,
    pub ranks: Vec<usize>,
}

impl PushTensorReport {
    pub fn passed(&self) -> bool {
        self.first_matches && self.blocks_certified && self.periodic && self.unhinted_agrees
    }
}

/// The block pattern for `F`, `f + u^k`, `|u| = m`, `k m = deg f`.
pub fn pushtensor_blocks(
    mf: &MatrixFactorization,
    k: u32,
    m: i64,
    u: &str,
) -> Result<(PresentedModule, [GradedMap; 3]), ResolveError> {
    let d = mf.degree();
    if k < 2 || m <= 0 || k as i64 * m != d {
        return Err(ResolveError::Precondition(format!("need k >= 2 and k*m = {d}")));
    }
    let ring = mf.ring().extended(&[(u, m as u32)]).map_err(MfError::Poly)?;
    let pu = GradedPoly::var(&ring, u).map_err(MfError::Poly)?;
    let f = &mf.potential().embed(&ring).map_err(MfError::Poly)? + &pu.pow(k);
    let (f0, f1) = (mf.f0().with_ring(&ring), mf.f1().with_ring(&ring));
    let (s0, s1) = (mf.s0().embed(&ring)?, mf.s1().embed(&ring)?);
    let scalar = |module: &GradedFreeModule, p: &GradedPoly, src_twist: i64, tgt_twist: i64| {
        let deg = p.weighted_degree().unwrap_or(0);
        GradedMap::scalar(module, p, deg).retarget(module.twist(src_twist), module.twist(tgt_twist), 0)
    };
    let uk1 = pu.pow(k - 1);
    let d1 = GradedMap::block(vec![vec![scalar(&f0, &pu, -m, 0)?, s1.clone()]])?;
    let d2 = GradedMap::block(vec![
        vec![scalar(&f0, &uk1, -d, -m)?, s1.neg().retarget(f1.twist(-m), f0.twist(-m), 0)?],
        vec![s0.retarget(f0.twist(-d), f1.clone(), 0)?, scalar(&f1, &pu, -m, 0)?],
    ])?;
    let d3 = GradedMap::block(vec![
        vec![scalar(&f0, &pu, -d - m, -d)?, s1.retarget(f1.twist(-d), f0.twist(-d), 0)?],
        vec![s0.neg().retarget(f0.twist(-d - m), f1.twist(-m), 0)?, scalar(&f1, &uk1, -d, -m)?],
    ])?;
    let module = PresentedModule::new(Some(f), d1.clone())?;
    Ok((module, [d1, d2, d3]))
}

/// Checks the block pattern literally (see [`PushTensorReport`]).
pub fn pushtensor_check(mf: &MatrixFactorization, k: u32, m: i64, u: &str) -> Result<PushTensorReport, ResolveError> {
    let (module, [d1, d2, d3]) = pushtensor_blocks(mf, k, m, u)?;
    let q = Quotient::new(module.ring(), module.modulus())?;
    let (d2, d3) = (q.nf_map(&d2)?, q.nf_map(&d3)?);
    let steps = 5;
    let bound = default_degree_bound(&module);
    let hints = BTreeMap::from([(2, d2.clone()), (3, d3.clone())]);
    let res = resolve_with_hints(&module, steps, bound, &hints)?;
    let d = mf.degree();
    let get = |k: usize| (k <= res.length()).then(|| res.differential(k));
    let first_matches = get(1) == Some(&q.nf_map(&d1)?);
    let blocks_certified = res.reports().iter().filter(|r| r.step == 2 || r.step == 3).all(|r| r.source == StepSource::Hint)
        && get(2) == Some(&d2)
        && get(3) == Some(&d3);
    let periodic = get(4) == Some(&d2.twist(-d)) && get(5) == Some(&d3.twist(-d));
    let plain = resolve(&module, steps, bound)?;
    let unhinted_agrees = plain.ranks() == res.ranks() && plain.periodicity().is_some();
    Ok(PushTensorReport { first_matches, blocks_certified, periodic, unhinted_agrees, ranks: res.ranks() })
}
