//! Representation-ring models of the `μ_d`-equivariant K-theory of Milnor
//! fibres and the relative groups of the pair `(C^n, F_f)`.
//!
//! With `K^1_{μ_d}(C^n) = 0` and restriction `r: R(μ_d) -> K^0(F)`, the
//! six-term sequence gives `0 -> K^1(F) -> K^0_rel -> ker r -> 0` and
//! `K^1_rel = coker r`. Since `ker r` is free, `K^0_rel = K^1(F) ⊕ ker r`.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::laurent::{LaurentElement, LaurentQuotient};
use super::tables::ku_table;
use super::KError;
use crate::exactalg::{cokernel, kernel_rank, FGAbelianGroup, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MilnorModel {
    /// `x^d`: `d` points permuted freely by `μ_d`
    Monomial { d: i64 },
    /// `vw` with `|v| = a`, `|w| = b`: a circle rotated with weight `a`
    Product { a: i64, b: i64 },
    /// `q_n` with weight-one variables and the free antipodal `μ_2` action
    Quadric { n: usize },
    /// `f + vw` for the inner `f`, with `a + b` equal to its degree
    Suspended { inner: Box<MilnorModel>, a: i64, b: i64 },
}

impl MilnorModel {
    /// Order `d` of the acting group `μ_d`.
    pub fn order(&self) -> i64 {
        match self {
            MilnorModel::Monomial { d } => *d,
            MilnorModel::Product { a, b } => a + b,
            MilnorModel::Quadric { .. } => 2,
            MilnorModel::Suspended { inner, .. } => inner.order(),
        }
    }

    pub fn validate(&self) -> Result<(), KError> {
        let bad = |msg: String| Err(KError::Unsupported(msg));
        match self {
            MilnorModel::Monomial { d } if *d < 2 => bad(format!("x^d needs d >= 2, got {d}")),
            MilnorModel::Product { a, b } if *a < 1 || *b < 1 => bad(format!("weights must be positive, got ({a}, {b})")),
            MilnorModel::Quadric { n } if *n < 3 => bad(format!("quadric model needs n >= 3, got {n}")),
            MilnorModel::Suspended { inner, a, b } => {
                inner.validate()?;
                if *a < 1 || *b < 1 || a + b != inner.order() {
                    return bad(format!("suspension weights ({a}, {b}) must be positive with sum {}", inner.order()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorK {
    pub model: MilnorModel,
    /// `R(μ_d)`
    pub representation_ring: LaurentQuotient,
    /// `K^0_{μ_d}(F)` and `K^1_{μ_d}(F)`
    pub fibre: (FGAbelianGroup, FGAbelianGroup),
    /// matrix of `r` (rows: generators of the `K^0(F)` presentation)
    pub restriction: Vec<Vec<i64>>,
    pub krel0: FGAbelianGroup,
    pub krel1: FGAbelianGroup,
    /// Bott classes `1 - t^a` of the suspensions applied, innermost first
    pub bott_classes: Vec<LaurentElement>,
}

/// `r` given as a map `Z^d -> Z^k` together with relations `rel` presenting
/// `K^0(F) = coker rel`.
struct Restriction {
    map: IntMatrix,
    relations: IntMatrix,
}

impl Restriction {
    fn kernel_rank(&self) -> usize {
        kernel_rank(&self.map.hconcat(&self.relations)) - kernel_rank(&self.relations)
    }

    fn cokernel(&self) -> FGAbelianGroup {
        cokernel(&self.map.hconcat(&self.relations))
    }
}

fn matrix(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> IntMatrix {
    let mut m = IntMatrix::zero(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, BigInt::from(f(r, c)));
        }
    }
    m
}

/// `K^0` and `K^1` of the circle rotated with weight `a` by `μ_d`: kernel and
/// cokernel of `1 - t^a` on `R(μ_d)`.
pub fn circle_groups(a: i64, d: i64) -> (FGAbelianGroup, FGAbelianGroup) {
    let ring = LaurentQuotient::cyclic(d);
    let m = ring.multiplication_matrix(&LaurentElement::one_minus_t_pow(a));
    (FGAbelianGroup::free(kernel_rank(&m)), cokernel(&m))
}

pub fn milnor_relative_k(model: &MilnorModel) -> Result<MilnorK, KError> {
    model.validate()?;
    if let MilnorModel::Suspended { inner, a, .. } = model {
        let mut out = milnor_relative_k(inner)?;
        out.model = model.clone();
        out.bott_classes.push(LaurentElement::one_minus_t_pow(*a));
        return Ok(out);
    }
    let d = model.order();
    let du = d as usize;
    let (fibre, r) = match model {
        MilnorModel::Monomial { .. } => {
            // one free orbit: K(F) = K(pt), r is the rank
            let r = Restriction { map: matrix(1, du, |_, _| 1), relations: IntMatrix::zero(1, 0) };
            ((FGAbelianGroup::free(1), FGAbelianGroup::trivial()), r)
        }
        MilnorModel::Product { a, .. } => {
            // stabilizer μ_g; restriction to an orbit is t -> s in R(μ_g)
            let g = a.gcd(&d) as usize;
            let r = Restriction { map: matrix(g, du, |row, col| (col % g == row) as i64), relations: IntMatrix::zero(g, 0) };
            (circle_groups(*a, d), r)
        }
        MilnorModel::Quadric { n } => {
            // K^0(F) = coker i_* in the basis [O(-n+1)], ..., [O]; 1 -> [O], t -> [O(-1)]
            let table = ku_table(*n);
            let p = super::tables::pushforward_matrix(*n);
            let map = matrix(*n, 2, |row, col| (row + 1 + col == *n) as i64);
            ((table.k0, table.k1), Restriction { map, relations: p })
        }
        MilnorModel::Suspended { .. } => unreachable!("handled above"),
    };
    let krel0 = fibre_plus_free(&fibre.1, r.kernel_rank());
    let krel1 = r.cokernel();
    Ok(MilnorK {
        model: model.clone(),
        representation_ring: LaurentQuotient::cyclic(d),
        restriction: r.map.to_i64_rows().expect("0/1 entries"),
        fibre,
        krel0,
        krel1,
        bott_classes: Vec::new(),
    })
}

fn fibre_plus_free(k1: &FGAbelianGroup, rank: usize) -> FGAbelianGroup {
    FGAbelianGroup::from_invariants(k1.rank() + rank, k1.torsion()).expect("torsion of a group is a chain")
}
