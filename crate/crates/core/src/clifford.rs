//! Graded complex Clifford algebras `C_n` (`e_i^2 = 1`), their graded
//! modules, restriction along `C_n -> C_(n+1)`, and the comparison with
//! linear matrix factorizations of `q_n`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::linalg::{sparse_rank, SparseVec};
use crate::exactalg::{cokernel, FGAbelianGroup, GaussianRational as Q, IntMatrix, QMatrix};
use crate::ktheory::{as_quadric, KError};
use crate::mf::standard::quadric_generators;
use crate::mf::{MatrixFactorization, MfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("Clifford relation fails: {0}")]
    Relation(String),
    #[error("basis does not account for the module: multiplicities cover dimension {covered} of {dim}")]
    IncompleteBasis { covered: usize, dim: usize },
    #[error("entries of the factorization are not all linear")]
    NonlinearEntries,
    #[error("module is over C_{got}, expected C_{expected}")]
    WrongAlgebra { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    K(#[from] KError),
    #[error(transparent)]
    Mf(#[from] MfError),
}

/// A `Z/2`-graded module over `C_n`: odd generators `e_i` and the grading `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordModule {
    n: usize,
    dim: usize,
    generators: Vec<QMatrix>,
    grading: QMatrix,
}

fn mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.mul(b)
}

fn add(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let mut out = a.clone();
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            out.set(r, c, a.get(r, c).clone() + b.get(r, c).clone());
        }
    }
    out
}

fn neg(a: &QMatrix) -> QMatrix {
    let mut out = a.clone();
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            out.set(r, c, -a.get(r, c).clone());
        }
    }
    out
}

fn kron(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let mut out = QMatrix::zero(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out.set(i * b.rows() + k, j * b.cols() + l, x.clone() * b.get(k, l).clone());
                }
            }
        }
    }
    out
}

fn pauli() -> [QMatrix; 3] {
    let (o, z, i) = (Q::one(), Q::zero(), Q::i());
    [
        QMatrix::from_rows(vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]]),
        QMatrix::from_rows(vec![vec![z.clone(), -i.clone()], vec![i, z.clone()]]),
        QMatrix::from_rows(vec![vec![o.clone(), z.clone()], vec![z, -o]]),
    ]
}

/// `m` pairwise anticommuting involutions of size `2^⌊m/2⌋`.
fn gamma_matrices(m: usize) -> Vec<QMatrix> {
    let k = m / 2;
    let [sx, sy, sz] = pauli();
    let id = QMatrix::identity(2);
    let chain = |parts: Vec<&QMatrix>| parts.into_iter().fold(QMatrix::identity(1), |acc, p| kron(&acc, p));
    let mut out = Vec::with_capacity(m);
    for j in 0..k {
        for s in [&sx, &sy] {
            let mut parts = vec![&sz; j];
            parts.push(s);
            parts.extend(std::iter::repeat_n(&id, k - j - 1));
            out.push(chain(parts));
        }
    }
    if m % 2 == 1 {
        out.push(chain(vec![&sz; k]));
    }
    out
}

impl CliffordModule {
    pub fn new(n: usize, generators: Vec<QMatrix>, grading: QMatrix) -> Result<Self, CliffordError> {
        let dim = grading.rows();
        let m = Self { n, dim, generators, grading };
        m.validate()?;
        Ok(m)
    }

    /// Checks `e_i^2 = 1`, `e_i e_j = -e_j e_i`, `ε^2 = 1` and `ε e_i = -e_i ε`.
    pub fn validate(&self) -> Result<(), CliffordError> {
        let id = QMatrix::identity(self.dim);
        let square = |a: &QMatrix| a.rows() == self.dim && a.cols() == self.dim && mul(a, a) == id;
        if self.generators.len() != self.n {
            return Err(CliffordError::Relation(format!("expected {} generators", self.n)));
        }
        if !square(&self.grading) {
            return Err(CliffordError::Relation("grading is not an involution".into()));
        }
        for (i, e) in self.generators.iter().enumerate() {
            if !square(e) {
                return Err(CliffordError::Relation(format!("e_{} does not square to 1", i + 1)));
            }
            if !add(&mul(&self.grading, e), &mul(e, &self.grading)).is_zero() {
                return Err(CliffordError::Relation(format!("e_{} is not odd", i + 1)));
            }
            for (j, f) in self.generators.iter().enumerate().skip(i + 1) {
                if !add(&mul(e, f), &mul(f, e)).is_zero() {
                    return Err(CliffordError::Relation(format!("e_{} and e_{} do not anticommute", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[QMatrix] {
        &self.generators
    }

    pub fn grading(&self) -> &QMatrix {
        &self.grading
    }

    /// The same module with even and odd parts exchanged.
    pub fn flip(&self) -> Self {
        Self { grading: neg(&self.grading), ..self.clone() }
    }

    /// Restriction of scalars along `C_(n-1) -> C_n`, forgetting `e_n`.
    pub fn restrict(&self) -> Result<Self, CliffordError> {
        if self.n == 0 {
            return Err(CliffordError::Precondition("C_0 has nothing to restrict to".into()));
        }
        Ok(Self { n: self.n - 1, generators: self.generators[..self.n - 1].to_vec(), ..self.clone() })
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, CliffordError> {
        if self.n != other.n {
            return Err(CliffordError::WrongAlgebra { expected: self.n, got: other.n });
        }
        let block = |a: &QMatrix, b: &QMatrix| {
            let (p, q) = (a.rows(), b.rows());
            let mut out = QMatrix::zero(p + q, p + q);
            for r in 0..p {
                for c in 0..p {
                    out.set(r, c, a.get(r, c).clone());
                }
            }
            for r in 0..q {
                for c in 0..q {
                    out.set(p + r, p + c, b.get(r, c).clone());
                }
            }
            out
        };
        let generators = self.generators.iter().zip(&other.generators).map(|(a, b)| block(a, b)).collect();
        Ok(Self { n: self.n, dim: self.dim + other.dim, generators, grading: block(&self.grading, &other.grading) })
    }
}

/// Dimension of the space of grading-preserving module maps `a -> b`.
pub fn intertwiner_dim(a: &CliffordModule, b: &CliffordModule) -> Result<usize, CliffordError> {
    if a.n != b.n {
        return Err(CliffordError::WrongAlgebra { expected: a.n, got: b.n });
    }
    // unknown T (b.dim x a.dim), entry (r, c) at index r * a.dim + c;
    // equations T x_a - x_b T = 0 for x in {ε, e_1, ..., e_n}
    let (p, q) = (a.dim, b.dim);
    let unknowns = p * q;
    let mut rows: Vec<SparseVec> = Vec::new();
    for (xa, xb) in std::iter::once((&a.grading, &b.grading)).chain(a.generators.iter().zip(&b.generators)) {
        for r in 0..q {
            for c in 0..p {
                let mut eq: Vec<(usize, Q)> = Vec::new();
                for k in 0..p {
                    let v = xa.get(k, c);
                    if !v.is_zero() {
                        eq.push((r * p + k, v.clone()));
                    }
                }
                for k in 0..q {
                    let v = xb.get(r, k);
                    if !v.is_zero() {
                        eq.push((k * p + c, -v.clone()));
                    }
                }
                eq.sort_by_key(|(i, _)| *i);
                let mut merged: SparseVec = Vec::with_capacity(eq.len());
                for (i, v) in eq {
                    match merged.last_mut() {
                        Some((j, w)) if *j == i => *w += &v,
                        _ => merged.push((i, v)),
                    }
                }
                merged.retain(|(_, v)| !v.is_zero());
                if !merged.is_empty() {
                    rows.push(merged);
                }
            }
        }
    }
    Ok(unknowns - sparse_rank(&rows))
}

/// Graded irreducibles of `C_n`: one for odd `n`, a module and its grading
/// flip for even `n`. Built from `n + 1` anticommuting involutions with the
/// last one as the grading.
pub fn build_irreducibles(n: usize) -> Vec<CliffordModule> {
    let mut g = gamma_matrices(n + 1);
    let grading = g.pop().expect("at least one matrix");
    let m = CliffordModule::new(n, g, grading).expect("gamma matrices satisfy the relations");
    if n % 2 == 0 { vec![m.clone(), m.flip()] } else { vec![m] }
}

/// Multiplicities of each basis module in `m`, from intertwiner dimensions.
pub fn decompose(m: &CliffordModule, basis: &[CliffordModule]) -> Result<Vec<i64>, CliffordError> {
    let mut mult = Vec::with_capacity(basis.len());
    for b in basis {
        let hom = intertwiner_dim(b, m)?;
        let end = intertwiner_dim(b, b)?;
        if end == 0 || hom % end != 0 {
            return Err(CliffordError::Precondition("basis module is not simple".into()));
        }
        mult.push((hom / end) as i64);
    }
    let covered: usize = mult.iter().zip(basis).map(|(&k, b)| k as usize * b.dim).sum();
    if covered != m.dim {
        return Err(CliffordError::IncompleteBasis { covered, dim: m.dim });
    }
    Ok(mult)
}

/// Matrix of `i_n^*: M(C_(n+1)) -> M(C_n)` in the irreducible bases.
pub fn restriction_matrix(n: usize) -> Result<IntMatrix, CliffordError> {
    let small = build_irreducibles(n);
    let big = build_irreducibles(n + 1);
    let mut out = IntMatrix::zero(small.len(), big.len());
    for (c, b) in big.iter().enumerate() {
        for (r, k) in decompose(&b.restrict()?, &small)?.into_iter().enumerate() {
            out.set(r, c, BigInt::from(k));
        }
    }
    Ok(out)
}

/// `A_n = M(C_n) / i_n^* M(C_(n+1))`.
pub fn abs_group(n: usize) -> Result<FGAbelianGroup, CliffordError> {
    Ok(cokernel(&restriction_matrix(n)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliffordClass {
    pub n: usize,
    pub coords: Vec<i64>,
}

/// The Clifford module on `F0 ⊕ F1` with `e_i` the coefficient of `x_i` in
/// `(0, s1; s0, 0)` and grading `+1` on `F0`, `-1` on `F1`.
pub fn clifford_module_of(mf: &MatrixFactorization) -> Result<CliffordModule, CliffordError> {
    if !mf.has_linear_entries() {
        return Err(CliffordError::NonlinearEntries);
    }
    let (n, f) = as_quadric(mf)?;
    let r = f.f0().rank();
    let dim = 2 * r;
    let mut generators = vec![QMatrix::zero(dim, dim); n];
    let mut place = |map: &crate::grmod::GradedMap, row0: usize, col0: usize| -> Result<(), CliffordError> {
        for i in 0..map.rows() {
            for j in 0..map.cols() {
                let coeffs = map.entry(i, j).linear_coefficients().ok_or(CliffordError::NonlinearEntries)?;
                for (v, c) in coeffs.into_iter().enumerate() {
                    generators[v].set(row0 + i, col0 + j, c);
                }
            }
        }
        Ok(())
    };
    place(f.s1(), 0, r)?;
    place(f.s0(), r, 0)?;
    let mut grading = QMatrix::identity(dim);
    for k in r..dim {
        grading.set(k, k, -Q::one());
    }
    CliffordModule::new(n, generators, grading)
}

pub fn beh_class(mf: &MatrixFactorization) -> Result<CliffordClass, CliffordError> {
    let m = clifford_module_of(mf)?;
    let coords = decompose(&m, &build_irreducibles(m.n))?;
    Ok(CliffordClass { n: m.n, coords })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareRow {
    pub generator: usize,
    /// `beh_class(G|_{x_n = 0})`
    pub restricted: Vec<i64>,
    /// `i^* beh_class(G)`
    pub pulled_back: Vec<i64>,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub n: usize,
    pub rows: Vec<SquareRow>,
}

impl SquareReport {
    pub fn passed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.equal)
    }
}

/// Compares setting `x_n = 0` on the factorization side with `i_(n-1)^*`
/// on the Clifford side, for each generator of `q_n`.
pub fn abs_square_check(n: usize) -> Result<SquareReport, CliffordError> {
    if !(2..=6).contains(&n) {
        return Err(CliffordError::Precondition(format!("n must lie in 2..=6, got {n}")));
    }
    let i_star = restriction_matrix(n - 1)?;
    let xn = format!("x{n}");
    let mut rows = Vec::new();
    for (idx, g) in quadric_generators(n).iter().enumerate() {
        let upstairs = beh_class(g)?.coords;
        let restricted = beh_class(&g.restrict_var(&xn)?)?.coords;
        let pulled_back: Vec<i64> = (0..i_star.rows())
            .map(|r| {
                (0..i_star.cols()).map(|c| i_star.get(r, c).to_i64().expect("small entries") * upstairs[c]).sum()
            })
            .collect();
        let equal = restricted == pulled_back;
        rows.push(SquareRow { generator: idx, restricted, pulled_back, equal });
    }
    Ok(SquareReport { n, rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsRow {
    pub n: usize,
    pub m_rank: usize,
    pub restriction: Vec<Vec<i64>>,
    pub a_n: FGAbelianGroup,
}

pub fn abs_table(max_n: usize) -> Result<Vec<AbsRow>, CliffordError> {
    (0..=max_n)
        .map(|n| {
            let r = restriction_matrix(n)?;
            Ok(AbsRow { n, m_rank: r.rows(), restriction: r.to_i64_rows().expect("small entries"), a_n: cokernel(&r) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mf::standard::{l_object, x_object};

    #[test]
    fn irreducible_dimensions() {
        for n in 0..=6 {
            let irr = build_irreducibles(n);
            assert_eq!(irr.len(), if n % 2 == 0 { 2 } else { 1 });
            for m in &irr {
                assert_eq!(m.dim(), 1 << n.div_ceil(2));
                assert_eq!(intertwiner_dim(m, m).unwrap(), 1);
            }
            if n % 2 == 0 {
                assert_eq!(intertwiner_dim(&irr[0], &irr[1]).unwrap(), 0);
            }
        }
        assert_eq!(build_irreducibles(0)[0].grading(), &QMatrix::identity(1));
    }

    #[test]
    fn small_restrictions() {
        assert_eq!(restriction_matrix(0).unwrap().to_i64_rows().unwrap(), vec![vec![1], vec![1]]);
        assert_eq!(restriction_matrix(1).unwrap().to_i64_rows().unwrap(), vec![vec![1, 1]]);
        assert_eq!(abs_group(0).unwrap(), FGAbelianGroup::free(1));
        assert!(abs_group(1).unwrap().is_trivial());
        assert_eq!(abs_group(2).unwrap(), FGAbelianGroup::free(1));
        let c3 = &build_irreducibles(3)[0];
        assert_eq!(decompose(&c3.restrict().unwrap(), &build_irreducibles(2)).unwrap(), vec![1, 1]);
    }

    #[test]
    fn decompose_sums_and_detects_gaps() {
        let b = build_irreducibles(2);
        let s = b[0].direct_sum(&b[1]).unwrap();
        assert_eq!(decompose(&s, &b).unwrap(), vec![1, 1]);
        assert!(matches!(decompose(&s, &b[..1]), Err(CliffordError::IncompleteBasis { .. })));
    }

    #[test]
    fn bad_relations_are_caught() {
        let [sx, _, sz] = pauli();
        assert!(CliffordModule::new(1, vec![sz.clone()], sz.clone()).is_err());
        assert!(CliffordModule::new(1, vec![sx], sz).is_ok());
    }

    #[test]
    fn classes_of_generators() {
        assert_eq!(beh_class(&l_object("x")).unwrap().coords, vec![1]);
        let x = beh_class(&x_object("a", "b", false)).unwrap().coords;
        let xp = beh_class(&x_object("a", "b", true)).unwrap().coords;
        assert_ne!(x, xp);
        assert_eq!(x.iter().sum::<i64>(), 1);
        let both = x_object("a", "b", false).direct_sum(&x_object("a", "b", true)).unwrap();
        assert_eq!(beh_class(&both).unwrap().coords, vec![1, 1]);
    }

    #[test]
    fn square_commutes_for_small_n() {
        for n in 2..=4 {
            assert!(abs_square_check(n).unwrap().passed(), "n = {n}");
        }
    }
}
