use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use super::intmatrix::IntMatrix;
use super::snf::smith_normal_form;

/// `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k` with `t_1 | t_2 | ... | t_k` and each `t_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FGAbelianGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FGAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { rank, torsion: Vec::new() }
    }

    /// Builds a group from invariant factors. Units are dropped, zeros
    /// contribute free rank; the divisibility chain is checked.
    pub fn from_invariants(rank: usize, factors: &[BigInt]) -> Option<Self> {
        let mut rank = rank;
        let mut torsion = Vec::new();
        for f in factors {
            let f = f.abs();
            if f == BigInt::from(0) {
                rank += 1;
            } else if !f.is_one() {
                torsion.push(f);
            }
        }
        torsion.sort();
        if torsion.windows(2).any(|w| &w[1] % &w[0] != BigInt::from(0)) {
            return None;
        }
        Some(Self { rank, torsion })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

/// Cokernel of `m: Z^cols -> Z^rows`.
pub fn cokernel(m: &IntMatrix) -> FGAbelianGroup {
    let s = smith_normal_form(m);
    let factors = s.invariant_factors();
    let rank = m.rows() - factors.len();
    FGAbelianGroup::from_invariants(rank, &factors).expect("SNF yields a divisibility chain")
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Serialize)]
struct GroupRepr {
    rank: usize,
    torsion: Vec<String>,
    display: String,
}

impl Serialize for FGAbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GroupRepr {
            rank: self.rank,
            torsion: self.torsion.iter().map(ToString::to_string).collect(),
            display: self.to_string(),
        }
        .serialize(s)
    }
}
