use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::PolyError;

/// Exponent vector, one entry per ring variable.
pub type Exponent = Vec<u32>;

/// Monomials of one weighted degree, in descending lexicographic order,
/// with a reverse index.
#[derive(Debug)]
pub struct GradedPiece {
    pub monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl GradedPiece {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, e: &Exponent) -> Option<usize> {
        self.index.get(e).copied()
    }
}

struct RingData {
    names: Vec<String>,
    weights: Vec<u32>,
    pieces: Mutex<HashMap<i64, Arc<GradedPiece>>>,
}

/// Polynomial ring `Q(i)[x_1, ..., x_n]` with positive integer weights.
/// Cheap to clone; equality compares names and weights.
#[derive(Clone)]
pub struct WeightedRing(Arc<RingData>);

impl WeightedRing {
    pub fn new<S: AsRef<str>>(vars: &[(S, u32)]) -> Result<Self, PolyError> {
        let mut names = Vec::with_capacity(vars.len());
        let mut weights = Vec::with_capacity(vars.len());
        for (name, w) in vars {
            let name = name.as_ref();
            if !is_valid_name(name) {
                return Err(PolyError::InvalidVariableName(name.to_string()));
            }
            if names.iter().any(|n: &String| n == name) {
                return Err(PolyError::DuplicateVariable(name.to_string()));
            }
            if *w == 0 {
                return Err(PolyError::NonPositiveWeight(name.to_string()));
            }
            names.push(name.to_string());
            weights.push(*w);
        }
        Ok(Self(Arc::new(RingData { names, weights, pieces: Mutex::new(HashMap::new()) })))
    }

    /// Ring with no variables (the base field).
    pub fn point() -> Self {
        Self::new::<&str>(&[]).expect("empty ring is valid")
    }

    pub fn nvars(&self) -> usize {
        self.0.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.0.weights
    }

    pub fn weight_of(&self, name: &str) -> Option<u32> {
        self.index_of(name).map(|i| self.0.weights[i])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn exponent_degree(&self, e: &[u32]) -> i64 {
        e.iter().zip(&self.0.weights).map(|(&a, &w)| a as i64 * w as i64).sum()
    }

    /// The ring without `name`, together with the removed index.
    pub fn without(&self, name: &str) -> Result<(WeightedRing, usize), PolyError> {
        let idx = self.index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let vars: Vec<(&str, u32)> = self
            .names()
            .iter()
            .zip(self.weights())
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, (n, &w))| (n.as_str(), w))
            .collect();
        Ok((WeightedRing::new(&vars)?, idx))
    }

    /// This ring followed by the variables of `other`; names must be disjoint.
    pub fn union(&self, other: &WeightedRing) -> Result<WeightedRing, PolyError> {
        let vars: Vec<(&str, u32)> = self
            .names()
            .iter()
            .zip(self.weights())
            .chain(other.names().iter().zip(other.weights()))
            .map(|(n, &w)| (n.as_str(), w))
            .collect();
        WeightedRing::new(&vars).map_err(|e| match e {
            PolyError::DuplicateVariable(v) => PolyError::VariableCollision(v),
            e => e,
        })
    }

    /// This ring with extra variables appended.
    pub fn extended(&self, extra: &[(&str, u32)]) -> Result<WeightedRing, PolyError> {
        self.union(&WeightedRing::new(extra)?)
    }

    /// Monomials of weighted degree exactly `d`, descending lex; empty for `d < 0`.
    pub fn graded_piece(&self, d: i64) -> Arc<GradedPiece> {
        let mut cache = self.0.pieces.lock().expect("piece cache poisoned");
        if let Some(p) = cache.get(&d) {
            return Arc::clone(p);
        }
        let mut monomials = Vec::new();
        if d >= 0 {
            let mut cur = vec![0u32; self.nvars()];
            enumerate(&self.0.weights, 0, d, &mut cur, &mut monomials);
        }
        let index = monomials.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let piece = Arc::new(GradedPiece { monomials, index });
        cache.insert(d, Arc::clone(&piece));
        piece
    }

    pub fn graded_piece_basis(&self, d: i64) -> Vec<Exponent> {
        self.graded_piece(d).monomials.clone()
    }

    pub fn graded_piece_dim(&self, d: i64) -> usize {
        self.graded_piece(d).len()
    }
}

fn enumerate(weights: &[u32], i: usize, remaining: i64, cur: &mut Exponent, out: &mut Vec<Exponent>) {
    if i == weights.len() {
        if remaining == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let w = weights[i] as i64;
    let mut e = remaining / w;
    loop {
        cur[i] = e as u32;
        enumerate(weights, i + 1, remaining - e * w, cur, out);
        if e == 0 {
            break;
        }
        e -= 1;
    }
    cur[i] = 0;
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    (first.is_ascii_alphabetic() || first == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "i"
}

impl PartialEq for WeightedRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.names == other.0.names && self.0.weights == other.0.weights)
    }
}

impl Eq for WeightedRing {}

impl std::hash::Hash for WeightedRing {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.names.hash(state);
        self.0.weights.hash(state);
    }
}

impl fmt::Debug for WeightedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(i)[")?;
        for (k, (n, w)) in self.names().iter().zip(self.weights()).enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}:{w}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piece_examples() {
        let r = WeightedRing::new(&[("x1", 1), ("x2", 1)]).unwrap();
        assert_eq!(r.graded_piece_basis(2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let r = WeightedRing::new(&[("x1", 1), ("x2", 2)]).unwrap();
        assert_eq!(r.graded_piece_basis(2), vec![vec![2, 0], vec![0, 1]]);
        assert!(r.graded_piece_basis(-1).is_empty());
        assert_eq!(WeightedRing::point().graded_piece_dim(0), 1);
        assert_eq!(WeightedRing::point().graded_piece_dim(3), 0);
    }

    #[test]
    fn rejects_bad_rings() {
        assert!(matches!(WeightedRing::new(&[("x", 0)]), Err(PolyError::NonPositiveWeight(_))));
        assert!(matches!(
            WeightedRing::new(&[("x", 1), ("x", 2)]),
            Err(PolyError::DuplicateVariable(_))
        ));
        assert!(WeightedRing::new(&[("i", 1)]).is_err());
    }
}
