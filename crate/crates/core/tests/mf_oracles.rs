//! Euler pairings and K0 classes against a dense recomputation of the
//! morphism complex.

use mfk_core::exactalg::{GaussianRational as Q, QMatrix};
use mfk_core::ktheory::{k0_class, k0_class_with_window, BasisTag};
use mfk_core::mf::standard::{l_object, quadric_generators, x_object};
use mfk_core::mf::{euler_pairing, hom_cohomology, MatrixFactorization, DEFAULT_WINDOW};
use mfk_core::polyring::{Exponent, GradedPoly};
use num_traits::Zero;
use proptest::prelude::*;

type PolyMatrix = Vec<Vec<GradedPoly>>;

fn matmul(a: &PolyMatrix, b: &PolyMatrix, ring: &mfk_core::polyring::WeightedRing) -> PolyMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).fold(GradedPoly::zero(ring), |acc, k| &acc + &(&row[k] * &b[k][c])))
                .collect()
        })
        .collect()
}

/// One basis vector of `Hom^m(F, G)`: a single monomial in entry `(j, i)` of
/// a map `F_a -> G_b`.
struct BasisElt {
    a: usize,
    b: usize,
    j: usize,
    i: usize,
    mono: Exponent,
}

struct Dense<'a> {
    f: &'a MatrixFactorization,
    g: &'a MatrixFactorization,
}

impl Dense<'_> {
    fn twists(mf: &MatrixFactorization, a: usize) -> Vec<i64> {
        if a == 0 { mf.f0().twists().to_vec() } else { mf.f1().twists().to_vec() }
    }

    fn maps(mf: &MatrixFactorization, a: usize) -> PolyMatrix {
        // s_a : F_a -> F_{1-a}
        if a == 0 { mf.s0().matrix() } else { mf.s1().matrix() }
    }

    fn basis(&self, m: i64) -> Vec<BasisElt> {
        let ring = self.f.ring();
        let d = self.f.degree();
        let mut out = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                if (a as i64 + b as i64 - m).rem_euclid(2) != 0 {
                    continue;
                }
                let k = (m - a as i64 + b as i64) / 2;
                for (j, tb) in Self::twists(self.g, b).iter().enumerate() {
                    for (i, ta) in Self::twists(self.f, a).iter().enumerate() {
                        for mono in ring.graded_piece_basis(k * d + tb - ta) {
                            out.push(BasisElt { a, b, j, i, mono });
                        }
                    }
                }
            }
        }
        out
    }

    fn coordinates(&self, m: i64, parts: &[(usize, usize, PolyMatrix)]) -> Vec<Q> {
        let basis = self.basis(m);
        let mut v = vec![Q::zero(); basis.len()];
        for (pos, e) in basis.iter().enumerate() {
            for (a, b, mat) in parts {
                if *a == e.a && *b == e.b {
                    v[pos] = &v[pos] + &mat[e.j][e.i].coefficient(&e.mono);
                }
            }
        }
        v
    }

    /// Matrix of `α ↦ t α - (-1)^m α s` from degree `m` to `m + 1`.
    fn differential(&self, m: i64) -> QMatrix {
        let ring = self.f.ring();
        let src = self.basis(m);
        let rows = self.basis(m + 1).len();
        let mut mat = QMatrix::zero(rows, src.len());
        let sign = if m.rem_euclid(2) == 0 { Q::from_int(-1) } else { Q::from_int(1) };
        for (col, e) in src.iter().enumerate() {
            let fa = Self::twists(self.f, e.a).len();
            let gb = Self::twists(self.g, e.b).len();
            let mut alpha = vec![vec![GradedPoly::zero(ring); fa]; gb];
            alpha[e.j][e.i] = GradedPoly::monomial(ring, e.mono.clone(), Q::from_int(1));
            let t_alpha = matmul(&Self::maps(self.g, e.b), &alpha, ring);
            let alpha_s: PolyMatrix = matmul(&alpha, &Self::maps(self.f, 1 - e.a), ring)
                .into_iter()
                .map(|r| r.into_iter().map(|p| p.scale(&sign)).collect())
                .collect();
            let v = self.coordinates(m + 1, &[(e.a, 1 - e.b, t_alpha), (1 - e.a, e.b, alpha_s)]);
            for (r, x) in v.into_iter().enumerate() {
                mat.set(r, col, x);
            }
        }
        mat
    }

    fn cohomology(&self, m: i64) -> usize {
        let dim = self.basis(m).len();
        let out = self.differential(m);
        let inc = self.differential(m - 1);
        assert!(out.mul(&inc).is_zero(), "dense differential does not square to zero");
        dim - out.rank() - inc.rank()
    }
}

fn assert_agrees(f: &MatrixFactorization, g: &MatrixFactorization, window: i64) {
    let h = hom_cohomology(f, g, window).unwrap();
    let dense = Dense { f, g };
    for m in -window..=window {
        assert_eq!(h.dim(m), dense.cohomology(m), "H^{m} mismatch");
    }
}

#[test]
fn dense_oracle_matches_small_pairs() {
    let l = l_object("x");
    for (a, b) in [(l.clone(), l.clone()), (l.clone(), l.shift()), (l.twist(1), l.clone()), (l.dual(), l.twist(-1))] {
        assert_agrees(&a, &b, 4);
    }
    let x = x_object("x1", "x2", false);
    let xp = x_object("x1", "x2", true);
    for (a, b) in [(&x, &x), (&x, &xp), (&xp, &x.twist(1)), (&x, &x.shift())] {
        assert_agrees(a, b, 3);
    }
}

#[test]
fn dense_oracle_matches_q3() {
    let g = &quadric_generators(3)[0];
    assert_agrees(g, g, 2);
    assert_agrees(g, &g.twist(1), 2);
}

#[test]
fn gram_values_from_dense_oracle() {
    // Both sides certified at the default window and equal to the identity Gram.
    let l = l_object("x");
    let h = hom_cohomology(&l, &l, DEFAULT_WINDOW).unwrap();
    assert!(h.is_certified());
    let dense = Dense { f: &l, g: &l };
    let chi: i64 = (-DEFAULT_WINDOW..=DEFAULT_WINDOW)
        .map(|m| if m % 2 == 0 { dense.cohomology(m) as i64 } else { -(dense.cohomology(m) as i64) })
        .sum();
    assert_eq!(chi, 1);
    assert_eq!(h.euler_characteristic(), 1);
}

/// Objects over `q_3` built from the declared generator.
fn q3_object() -> impl Strategy<Value = MatrixFactorization> {
    let leaf = Just(quadric_generators(3).remove(0));
    leaf.prop_recursive(3, 4, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|x| x.shift()),
            (inner.clone(), -2i64..=2).prop_map(|(x, l)| x.twist(l)),
            inner.clone().prop_map(|x| x.dual()),
            (inner.clone(), inner).prop_map(|(a, b)| a.direct_sum(&b).unwrap()),
        ]
    })
}

/// A window wide enough to certify: cohomology of `Hom(F, G)` sits near the
/// relative twists, and twisting by `d` is a double shift.
fn window_for(objs: &[&MatrixFactorization]) -> i64 {
    let twists: Vec<i64> = objs.iter().flat_map(|x| x.f0().twists().iter().chain(x.f1().twists())).copied().collect();
    let spread = twists.iter().max().unwrap_or(&0) - twists.iter().min().unwrap_or(&0);
    DEFAULT_WINDOW + spread.max(twists.iter().map(|t| t.abs()).max().unwrap_or(0))
}

fn chi(a: &MatrixFactorization, b: &MatrixFactorization) -> i64 {
    euler_pairing(a, b, window_for(&[a, b])).unwrap()
}

fn class(x: &MatrixFactorization) -> Vec<i64> {
    k0_class_with_window(x, window_for(&[x])).unwrap().coords
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derived_objects_validate(x in q3_object()) {
        let again = MatrixFactorization::validate(
            x.potential().clone(),
            x.f0().twists().to_vec(),
            x.f1().twists().to_vec(),
            x.s0().matrix(),
            x.s1().matrix(),
        );
        prop_assert!(again.is_ok());
        prop_assert_eq!(x.shift().shift(), x.twist(x.degree()));
        prop_assert_eq!(x.shift_by(-1).shift(), x.clone());
    }

    #[test]
    fn euler_pairing_laws(a in q3_object(), b in q3_object(), c in q3_object()) {
        let ab = a.direct_sum(&b).unwrap();
        prop_assert_eq!(chi(&ab, &c), chi(&a, &c) + chi(&b, &c));
        prop_assert_eq!(chi(&c, &ab), chi(&c, &a) + chi(&c, &b));
        prop_assert_eq!(chi(&a.shift(), &c), -chi(&a, &c));
        prop_assert_eq!(chi(&a, &c.shift()), -chi(&a, &c));
        prop_assert_eq!(chi(&a.twist(2), &c), chi(&a, &c));
        prop_assert_eq!(chi(&a.twist(1), &c.twist(1)), chi(&a, &c));
    }

    #[test]
    fn k0_class_laws(a in q3_object(), b in q3_object()) {
        let ka = class(&a);
        let kb = class(&b);
        let sum: Vec<i64> = ka.iter().zip(&kb).map(|(x, y)| x + y).collect();
        prop_assert_eq!(class(&a.direct_sum(&b).unwrap()), sum);
        prop_assert_eq!(class(&a.shift()), ka.iter().map(|x| -x).collect::<Vec<_>>());
        prop_assert_eq!(class(&a.twist(2)), ka.clone());
        // twisting by 1 acts as -1 on the odd quadric basis
        prop_assert_eq!(class(&a.twist(1)), ka.iter().map(|x| -x).collect::<Vec<_>>());
    }
}

#[test]
fn tensor_pairs_into_the_sum() {
    let t = l_object("x").tensor(&l_object("y")).unwrap();
    assert_eq!(t.rank(), 2);
    let c = k0_class(&t).unwrap();
    assert_eq!(c.basis, BasisTag::EvenQuadric);
    assert_eq!(c.coords, vec![-1, -1]);
    assert_eq!(k0_class(&t.twist(-1)).unwrap().coords, vec![1, 1]);
}

#[test]
fn twist_by_one_swaps_x_and_x_prime() {
    let gens = quadric_generators(2);
    assert_eq!(k0_class(&gens[0]).unwrap().coords, vec![1, 0]);
    assert_eq!(k0_class(&gens[0].twist(1)).unwrap().coords, vec![0, -1]);
    assert_eq!(k0_class(&gens[1].twist(1)).unwrap().coords, vec![-1, 0]);
}

#[test]
fn knorrer_preserves_pairings() {
    for n in [1usize, 2] {
        let gens = quadric_generators(n);
        let objs: Vec<MatrixFactorization> =
            gens.iter().flat_map(|g| [g.clone(), g.twist(1), g.shift().direct_sum(g).unwrap()]).collect();
        let (u, v) = (format!("x{}", n + 1), format!("x{}", n + 2));
        let lifted: Vec<MatrixFactorization> = objs.iter().map(|o| o.knorrer_pm_i(&u, &v).unwrap()).collect();
        for (i, a) in objs.iter().enumerate() {
            for (j, b) in objs.iter().enumerate() {
                assert_eq!(chi(&lifted[i], &lifted[j]), chi(a, b), "n = {n}, pair ({i}, {j})");
            }
        }
        let plain = objs[0].knorrer(1, "u", "v").unwrap();
        assert_eq!(chi(&plain, &plain), chi(&objs[0], &objs[0]));
    }
}
