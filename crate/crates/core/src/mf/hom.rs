//! Cohomology of the morphism complex `Hom(F, G)`.
//!
//! In cohomological degree `m`, the component `(a, b)` (maps `F_a -> G_b`)
//! is present when `a + b = m (mod 2)` and consists of maps of degree
//! `k d` with `k = (m - a + b) / 2`. The differential is
//! `α ↦ t α - (-1)^m α s` with `s = s0 + s1` on `F` and `t` on `G`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use super::{MatrixFactorization, MfError};
use crate::exactalg::linalg::{sparse_rank, SparseVec};
use crate::exactalg::GaussianRational as Q;
use crate::polyring::{Exponent, GradedPiece};

pub const DEFAULT_WINDOW: i64 = 6;

/// Dimensions of `H^m Hom(F, G)` for `m` in `[-window, window]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomCohomology {
    pub window: i64,
    pub dims: BTreeMap<i64, usize>,
    /// `H` vanishes in degrees `-window` and `-window + 1`.
    pub certified_low: bool,
    /// `H` vanishes in degrees `window - 1` and `window`.
    pub certified_high: bool,
}

impl HomCohomology {
    pub fn dim(&self, m: i64) -> usize {
        self.dims.get(&m).copied().unwrap_or(0)
    }

    pub fn is_certified(&self) -> bool {
        self.certified_low && self.certified_high
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().map(|(&m, &d)| if m.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    /// Degrees with nonzero cohomology.
    pub fn support(&self) -> Vec<i64> {
        self.dims.iter().filter(|(_, &d)| d > 0).map(|(&m, _)| m).collect()
    }
}

type Entries = Vec<Vec<Vec<(Exponent, Q)>>>;

fn entry_terms(m: &crate::grmod::GradedMap) -> Entries {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.entry(r, c).terms().map(|(e, x)| (e.clone(), x.clone())).collect()).collect())
        .collect()
}

struct Component {
    a: usize,
    b: usize,
    start: usize,
    /// offsets[j * cols + i] within the component, for entry (j, i)
    offsets: Vec<usize>,
    pieces: Vec<Arc<GradedPiece>>,
    cols: usize,
}

/// Basis layout of `Hom^m(F, G)`.
struct Layout {
    components: Vec<Component>,
    dim: usize,
}

struct Complex<'a> {
    f: &'a MatrixFactorization,
    g: &'a MatrixFactorization,
    /// F's s_a as term lists; s[0] = s0, s[1] = s1
    fs: [Entries; 2],
    gs: [Entries; 2],
}

impl<'a> Complex<'a> {
    fn new(f: &'a MatrixFactorization, g: &'a MatrixFactorization) -> Self {
        Self {
            f,
            g,
            fs: [entry_terms(f.s0()), entry_terms(f.s1())],
            gs: [entry_terms(g.s0()), entry_terms(g.s1())],
        }
    }

    fn f_twists(&self, a: usize) -> &[i64] {
        if a == 0 { self.f.f0().twists() } else { self.f.f1().twists() }
    }

    fn g_twists(&self, b: usize) -> &[i64] {
        if b == 0 { self.g.f0().twists() } else { self.g.f1().twists() }
    }

    fn layout(&self, m: i64) -> Layout {
        let ring = self.f.ring();
        let d = self.f.degree();
        let mut components = Vec::new();
        let mut start = 0;
        for a in 0..2usize {
            for b in 0..2usize {
                if (a as i64 + b as i64 - m).rem_euclid(2) != 0 {
                    continue;
                }
                let k = (m - a as i64 + b as i64) / 2;
                let (ft, gt) = (self.f_twists(a), self.g_twists(b));
                let mut offsets = Vec::with_capacity(ft.len() * gt.len());
                let mut pieces = Vec::with_capacity(ft.len() * gt.len());
                let mut size = 0;
                for bj in gt {
                    for ai in ft {
                        let piece = ring.graded_piece(k * d + bj - ai);
                        offsets.push(size);
                        size += piece.len();
                        pieces.push(piece);
                    }
                }
                components.push(Component { a, b, start, offsets, pieces, cols: ft.len() });
                start += size;
            }
        }
        Layout { components, dim: start }
    }

    /// Images of the basis of `C^m` in `C^{m+1}`.
    fn differential_images(&self, m: i64, src: &Layout, dst: &Layout) -> Vec<SparseVec> {
        let sign = if m.rem_euclid(2) == 0 { -Q::from_int(1) } else { Q::from_int(1) };
        let find = |a: usize, b: usize| dst.components.iter().find(|c| c.a == a && c.b == b);
        let mut out = Vec::with_capacity(src.dim);
        for comp in &src.components {
            let (a, b) = (comp.a, comp.b);
            let t_b = &self.gs[b];
            let s_other = &self.fs[1 - a];
            let left = find(a, 1 - b);
            let right = find(1 - a, b);
            let rows_g = self.g_twists(b).len();
            for j in 0..rows_g {
                for i in 0..comp.cols {
                    let piece = &comp.pieces[j * comp.cols + i];
                    for e in &piece.monomials {
                        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                        if let Some(tc) = left {
                            // (t_b α)_(r, i) = t_b[r][j] x^e
                            for (r, row) in t_b.iter().enumerate() {
                                for (te, tx) in &row[j] {
                                    let idx = locate(tc, r, i, &add_exp(e, te));
                                    add_into(&mut acc, idx, tx);
                                }
                            }
                        }
                        if let Some(tc) = right {
                            // (α s_{1-a})_(j, c) = x^e s_{1-a}[i][c]
                            for (c, terms) in s_other[i].iter().enumerate() {
                                for (se, sx) in terms {
                                    let idx = locate(tc, j, c, &add_exp(e, se));
                                    add_into(&mut acc, idx, &(sx * &sign));
                                }
                            }
                        }
                        out.push(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect());
                    }
                }
            }
        }
        out
    }

    fn differential_rank(&self, m: i64) -> usize {
        let src = self.layout(m);
        let dst = self.layout(m + 1);
        if src.dim == 0 || dst.dim == 0 {
            return 0;
        }
        sparse_rank(&self.differential_images(m, &src, &dst))
    }
}

fn add_exp(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn locate(c: &Component, row: usize, col: usize, e: &Exponent) -> usize {
    let cell = row * c.cols + col;
    let within = c.pieces[cell].index_of(e).expect("product lands in the expected graded piece");
    c.start + c.offsets[cell] + within
}

fn add_into(acc: &mut BTreeMap<usize, Q>, idx: usize, x: &Q) {
    *acc.entry(idx).or_insert_with(Q::zero) += x;
}

fn check_compatible(f: &MatrixFactorization, g: &MatrixFactorization) -> Result<(), MfError> {
    if f.ring() != g.ring() || f.potential() != g.potential() {
        return Err(MfError::Mismatch);
    }
    Ok(())
}

/// Dimension of the degree-`m` part of the morphism complex.
pub fn hom_complex_dim(f: &MatrixFactorization, g: &MatrixFactorization, m: i64) -> Result<usize, MfError> {
    check_compatible(f, g)?;
    Ok(Complex::new(f, g).layout(m).dim)
}

/// `dim H^m Hom(F, G)` for `m` in `[-window, window]`.
pub fn hom_cohomology(f: &MatrixFactorization, g: &MatrixFactorization, window: i64) -> Result<HomCohomology, MfError> {
    check_compatible(f, g)?;
    if window < 1 {
        return Err(MfError::Precondition("window must be at least 1".into()));
    }
    let cx = Complex::new(f, g);
    let mut prev_rank = cx.differential_rank(-window - 1);
    let mut dims = BTreeMap::new();
    for m in -window..=window {
        let dim = cx.layout(m).dim;
        let rank = cx.differential_rank(m);
        dims.insert(m, dim - rank - prev_rank);
        prev_rank = rank;
    }
    let zero = |m: i64| dims[&m] == 0;
    Ok(HomCohomology {
        window,
        certified_low: zero(-window) && zero(-window + 1),
        certified_high: zero(window) && zero(window - 1),
        dims,
    })
}

/// `Σ (-1)^m dim H^m Hom(F, G)`, provided the window certificate holds.
pub fn euler_pairing(f: &MatrixFactorization, g: &MatrixFactorization, window: i64) -> Result<i64, MfError> {
    let h = hom_cohomology(f, g, window)?;
    if !h.is_certified() {
        return Err(MfError::UncertifiedWindow(window));
    }
    Ok(h.euler_characteristic())
}
