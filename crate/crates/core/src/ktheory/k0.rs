//! K0 classes of factorizations of `q_n` by Euler pairing against the
//! declared generators.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::ToPrimitive;
use serde::Serialize;

use super::KError;
use crate::exactalg::{solve_exact, GaussianRational as Q, QMatrix};
use crate::mf::standard::{quadric, quadric_generators, quadric_ring};
use crate::mf::{euler_pairing, MatrixFactorization, MfError, DEFAULT_WINDOW};
use crate::polyring::{GradedPoly, WeightedRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisTag {
    /// `{K^((n-1)/2)(L)}`
    OddQuadric,
    /// `{K^((n-2)/2)(X), K^((n-2)/2)(X')}`
    EvenQuadric,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct K0Class {
    pub n: usize,
    pub basis: BasisTag,
    pub coords: Vec<i64>,
}

impl K0Class {
    pub fn basis_for(n: usize) -> BasisTag {
        if n % 2 == 1 { BasisTag::OddQuadric } else { BasisTag::EvenQuadric }
    }
}

type GramKey = (usize, i64);

fn gram_cache() -> &'static Mutex<HashMap<GramKey, Vec<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<GramKey, Vec<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn pairing(a: &MatrixFactorization, b: &MatrixFactorization, window: i64) -> Result<i64, KError> {
    euler_pairing(a, b, window).map_err(|e| match e {
        MfError::UncertifiedWindow(w) => KError::UncertifiedWindow(w),
        e => KError::Mf(e),
    })
}

/// `gram[i][j] = χ(B_i, B_j)` for the generators of `q_n`.
pub fn gram_matrix(n: usize, window: i64) -> Result<Vec<Vec<i64>>, KError> {
    if let Some(g) = gram_cache().lock().expect("gram cache").get(&(n, window)) {
        return Ok(g.clone());
    }
    let basis = quadric_generators(n);
    let mut g = Vec::with_capacity(basis.len());
    for a in &basis {
        g.push(basis.iter().map(|b| pairing(a, b, window)).collect::<Result<Vec<_>, _>>()?);
    }
    gram_cache().lock().expect("gram cache").insert((n, window), g.clone());
    Ok(g)
}

/// Re-expresses `F` over `quadric_ring(n)` when its potential is the sum of
/// the squares of all its weight-one variables.
pub fn as_quadric(mf: &MatrixFactorization) -> Result<(usize, MatrixFactorization), KError> {
    let ring = mf.ring();
    let n = ring.nvars();
    if n == 0 || ring.weights().iter().any(|&w| w != 1) {
        return Err(KError::Precondition("expected weight-one variables".into()));
    }
    let squares = ring
        .names()
        .iter()
        .map(|x| GradedPoly::var(ring, x).map(|p| p.pow(2)))
        .try_fold(GradedPoly::zero(ring), |acc, p| p.map(|p| &acc + &p))
        .map_err(MfError::Poly)?;
    if mf.potential() != &squares {
        return Err(KError::Precondition(format!("potential {} is not the sum of squares of all variables", mf.potential())));
    }
    let target: WeightedRing = quadric_ring(n);
    let renamed = mf.rename(&target)?;
    debug_assert_eq!(renamed.potential(), &quadric(n));
    Ok((n, renamed))
}

pub fn k0_class(mf: &MatrixFactorization) -> Result<K0Class, KError> {
    k0_class_with_window(mf, DEFAULT_WINDOW)
}

/// Solves `Σ_i c_i χ(B_i, B_j) = χ(F, B_j)` and certifies the answer
/// against the pairings in the other order as well.
pub fn k0_class_with_window(mf: &MatrixFactorization, window: i64) -> Result<K0Class, KError> {
    let (n, f) = as_quadric(mf)?;
    let gram = gram_matrix(n, window)?;
    let basis = quadric_generators(n);
    let right: Vec<i64> = basis.iter().map(|b| pairing(&f, b, window)).collect::<Result<_, _>>()?;
    let left: Vec<i64> = basis.iter().map(|b| pairing(b, &f, window)).collect::<Result<_, _>>()?;
    let k = basis.len();
    let transposed = QMatrix::from_rows((0..k).map(|j| (0..k).map(|i| Q::from_int(gram[i][j])).collect()).collect());
    let rhs: Vec<Q> = right.iter().map(|&x| Q::from_int(x)).collect();
    let sol = solve_exact(&transposed, &rhs).map_err(|_| KError::NonIntegralSolution(format!("{right:?}")))?;
    if !sol.is_unique() {
        return Err(KError::Precondition(format!("Gram matrix of q_{n} is singular")));
    }
    let coords: Vec<i64> = sol
        .x
        .iter()
        .map(|q| q.to_integer().and_then(|z| z.to_i64()))
        .collect::<Option<_>>()
        .ok_or_else(|| KError::NonIntegralSolution(format!("{:?}", sol.x)))?;
    let predicted: Vec<i64> = (0..k).map(|j| (0..k).map(|i| gram[j][i] * coords[i]).sum()).collect();
    if predicted != left {
        return Err(KError::NonIntegralSolution(format!("left pairings {left:?} disagree with {predicted:?}")));
    }
    Ok(K0Class { n, basis: K0Class::basis_for(n), coords })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KnorrerVariant {
    /// `u + i x_n`, `u - i x_n` as in the restriction triangle
    Plus,
    /// `x_n + i u`, `x_n - i u`
    Swapped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleRow {
    pub generator: usize,
    /// class of `G ⊗ (u ⇄ u)`
    pub suspended: K0Class,
    /// class of the Knörrer image of `G|_{x_n = 0}`
    pub restricted: K0Class,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleReport {
    pub n: usize,
    pub variant: KnorrerVariant,
    pub window: i64,
    pub rows: Vec<TriangleRow>,
}

impl TriangleReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }
}

/// Compares `T(G)` and `K(R(G))` in `K0(MF(q_n + u^2))` for every generator `G` of `q_n`.
pub fn restriction_triangle_check(n: usize, variant: KnorrerVariant) -> Result<TriangleReport, KError> {
    restriction_triangle_check_with_window(n, variant, DEFAULT_WINDOW)
}

pub fn restriction_triangle_check_with_window(
    n: usize,
    variant: KnorrerVariant,
    window: i64,
) -> Result<TriangleReport, KError> {
    if !(2..=6).contains(&n) {
        return Err(KError::Precondition(format!("n must lie in 2..=6, got {n}")));
    }
    let xn = format!("x{n}");
    let mut rows = Vec::new();
    for (idx, g) in quadric_generators(n).iter().enumerate() {
        let t = g.suspend_by_u(2, 1, "u")?;
        let r = g.restrict_var(&xn)?;
        let k = match variant {
            KnorrerVariant::Plus => r.knorrer_pm_i("u", &xn)?,
            KnorrerVariant::Swapped => r.knorrer_pm_i(&xn, "u")?,
        };
        let k = k.reorder(t.ring())?;
        let suspended = k0_class_with_window(&t, window)?;
        let restricted = k0_class_with_window(&k, window)?;
        let equal = suspended == restricted;
        rows.push(TriangleRow { generator: idx, suspended, restricted, equal });
    }
    Ok(TriangleReport { n, variant, window, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mf::standard::{l_object, x_object};

    #[test]
    fn generators_are_orthonormal_for_small_n() {
        for n in 1..=4 {
            let g = gram_matrix(n, DEFAULT_WINDOW).unwrap();
            let k = g.len();
            for (i, row) in g.iter().enumerate() {
                assert_eq!(row, &(0..k).map(|j| (i == j) as i64).collect::<Vec<_>>(), "n = {n}");
            }
        }
    }

    #[test]
    fn basis_elements_and_shifts() {
        let l = l_object("y");
        assert_eq!(k0_class(&l).unwrap().coords, vec![1]);
        assert_eq!(k0_class(&l.shift()).unwrap().coords, vec![-1]);
        let x = x_object("a", "b", false);
        assert_eq!(k0_class(&x).unwrap(), K0Class { n: 2, basis: BasisTag::EvenQuadric, coords: vec![1, 0] });
        assert_eq!(k0_class(&x.twist(1)).unwrap().coords, vec![0, -1]);
        assert_eq!(k0_class(&x.twist(2)).unwrap().coords, vec![1, 0]);
    }

    #[test]
    fn rejects_other_potentials() {
        let m = MatrixFactorization::from_strings(
            &WeightedRing::new(&[("x", 1)]).unwrap(),
            "x^3",
            vec![0],
            vec![-1],
            &[&["x^2"]],
            &[&["x"]],
        )
        .unwrap();
        assert!(matches!(k0_class(&m), Err(KError::Precondition(_))));
    }

    #[test]
    fn triangle_commutes_for_small_n() {
        for n in 2..=3 {
            let r = restriction_triangle_check(n, KnorrerVariant::Plus).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert!(restriction_triangle_check(1, KnorrerVariant::Plus).is_err());
    }
}
