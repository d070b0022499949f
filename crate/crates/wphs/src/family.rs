//! Domain types for weighted hypersurface data and the structural
//! predicates on them: well-formedness of the ambient space, the Fano
//! index, linear cones, the necessary conditions for smoothness, and the
//! self-intersection number of the fundamental divisor.

use serde::Serialize;
use thiserror::Error;

use crate::rational::{gcd_u64, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("the family is a linear cone (degree equals a weight)")]
    LinearCone,
    #[error("Fano index must be {expected}, found {found}")]
    WrongIndex { expected: i64, found: i64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid bounds: {0}")]
    Bounds(String),
    #[error("weight index {index} out of range (ambient has {len} weights)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("parse error at row {row}: {reason}")]
    Parse { row: usize, reason: String },
    #[error("validation error at row {row}, field `{field}`: {reason}")]
    Validation {
        row: usize,
        field: &'static str,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Ambient weights a_0 <= a_1 <= ... stored ascending.
///
/// Every index convention in the criteria (a_n, a_{n+1}, the witness r)
/// refers to this ascending order. The permutation that restores the
/// caller's input order is kept for display only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeightSystem {
    weights: Vec<u64>,
    original_order: Vec<usize>,
}

impl WeightSystem {
    pub fn new(input: Vec<u64>) -> Result<WeightSystem> {
        if input.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "need at least 3 weights, got {}",
                input.len()
            )));
        }
        if input.contains(&0) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        let mut order: Vec<usize> = (0..input.len()).collect();
        order.sort_by_key(|&i| input[i]);
        let weights = order.iter().map(|&i| input[i]).collect();
        Ok(WeightSystem {
            weights,
            original_order: order,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> Result<u64> {
        self.weights.get(i).copied().ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.weights.len(),
        })
    }

    /// Positions of the sorted weights in the caller's original input.
    pub fn original_order(&self) -> &[usize] {
        &self.original_order
    }

    pub fn sum(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn product(&self) -> u128 {
        self.weights.iter().map(|&w| w as u128).product()
    }

    /// Number of unit weights, c_1.
    pub fn c1_count(&self) -> usize {
        self.weights.iter().filter(|&&w| w == 1).count()
    }

    /// Whether every (len-1)-subset of the weights has gcd 1.
    pub fn is_wellformed_ambient(&self) -> bool {
        (0..self.weights.len()).all(|skip| {
            self.weights
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .fold(0u64, |g, (_, &w)| gcd_u64(g, w))
                == 1
        })
    }
}

/// A family of weighted hypersurfaces X_d in P(a_0, ..., a_{n+1}).
///
/// The quasi-smoothness and terminality of the general member are data
/// ingested with the family, not computed here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypersurfaceFamily {
    ambient: WeightSystem,
    degree: u64,
    pub id: Option<u64>,
    pub quasi_smooth: Option<bool>,
    pub terminal: Option<bool>,
}

impl HypersurfaceFamily {
    pub fn new(weights: Vec<u64>, degree: u64) -> Result<HypersurfaceFamily> {
        if degree == 0 {
            return Err(Error::InvalidInput("degree must be positive".into()));
        }
        let ambient = WeightSystem::new(weights)?;
        Ok(HypersurfaceFamily {
            ambient,
            degree,
            id: None,
            quasi_smooth: None,
            terminal: None,
        })
    }

    pub fn with_id(mut self, id: u64) -> Self {
        self.id = Some(id);
        self
    }

    pub fn with_flags(mut self, quasi_smooth: bool, terminal: bool) -> Self {
        self.quasi_smooth = Some(quasi_smooth);
        self.terminal = Some(terminal);
        self
    }

    pub fn ambient(&self) -> &WeightSystem {
        &self.ambient
    }

    pub fn weights(&self) -> &[u64] {
        self.ambient.weights()
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Dimension n of the hypersurface: number of weights minus 2.
    pub fn dim(&self) -> usize {
        self.ambient.len() - 2
    }

    /// Fano index: sum of the weights minus the degree. Positive iff Fano.
    pub fn fano_index(&self) -> i64 {
        self.ambient.sum() as i64 - self.degree as i64
    }

    /// Whether the degree equals one of the weights.
    pub fn is_linear_cone(&self) -> bool {
        self.ambient.weights().contains(&self.degree)
    }

    /// Necessary conditions for smoothness of the general member: every
    /// weight divides d, and weights above 1 are pairwise coprime (so two
    /// equal weights above 1 fail).
    pub fn smoothness_necessary(&self) -> bool {
        let w = self.ambient.weights();
        if w.iter().any(|&a| !self.degree.is_multiple_of(a)) {
            return false;
        }
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if gcd_u64(w[i], w[j]) > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Self-intersection of the fundamental divisor: d over the product of
    /// the weights, as a reduced fraction.
    pub fn fundamental_degree(&self) -> Rational {
        Rational::new(self.degree as i128, self.ambient.product() as i128)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(w: &[u64], d: u64) -> HypersurfaceFamily {
        HypersurfaceFamily::new(w.to_vec(), d).unwrap()
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(HypersurfaceFamily::new(vec![1, 1, 2], 0).is_err());
        assert!(HypersurfaceFamily::new(vec![1, 2], 5).is_err());
        assert!(HypersurfaceFamily::new(vec![1, 0, 2], 5).is_err());
    }

    #[test]
    fn weights_normalize_ascending() {
        let f = fam(&[5, 1, 3, 2, 2], 12);
        assert_eq!(f.weights(), &[1, 2, 2, 3, 5]);
    }

    #[test]
    fn wellformed_ambient_examples() {
        assert!(WeightSystem::new(vec![1, 1, 2])
            .unwrap()
            .is_wellformed_ambient());
        assert!(!WeightSystem::new(vec![2, 2, 3])
            .unwrap()
            .is_wellformed_ambient());
        // the X_90 ambient: all five-element subset gcds are 1
        assert!(WeightSystem::new(vec![5, 15, 17, 18, 18, 18])
            .unwrap()
            .is_wellformed_ambient());
    }

    #[test]
    fn c1_count_examples() {
        assert_eq!(
            WeightSystem::new(vec![1, 1, 1, 2, 2]).unwrap().c1_count(),
            3
        );
        assert_eq!(WeightSystem::new(vec![2, 3, 5]).unwrap().c1_count(), 0);
        assert_eq!(
            WeightSystem::new(vec![1, 1, 1, 1, 1]).unwrap().c1_count(),
            5
        );
    }

    #[test]
    fn fano_index_examples() {
        assert_eq!(fam(&[1, 1, 1, 2, 2], 6).fano_index(), 1);
        assert_eq!(fam(&[1, 1, 1, 1, 1], 4).fano_index(), 1);
        assert_eq!(fam(&[5, 15, 17, 18, 18, 18], 90).fano_index(), 1);
    }

    #[test]
    fn linear_cone_examples() {
        assert!(fam(&[1, 1, 2, 3], 3).is_linear_cone());
        assert!(!fam(&[1, 1, 1, 2, 2], 6).is_linear_cone());
        assert!(fam(&[1, 1, 1, 1, 1], 1).is_linear_cone());
    }

    #[test]
    fn smoothness_necessary_examples() {
        assert!(fam(&[1, 1, 1, 2, 3], 6).smoothness_necessary());
        assert!(!fam(&[1, 1, 1, 2, 2], 6).smoothness_necessary());
        assert!(!fam(&[1, 1, 2, 3, 5], 12).smoothness_necessary());
    }

    #[test]
    fn fundamental_degree_examples() {
        assert_eq!(
            fam(&[1, 1, 1, 1, 1], 4).fundamental_degree(),
            Rational::from_integer(4)
        );
        assert_eq!(
            fam(&[1, 1, 1, 2, 2], 6).fundamental_degree(),
            Rational::new(3, 2)
        );
        assert_eq!(
            fam(&[1, 1, 2, 3, 5], 12).fundamental_degree(),
            Rational::new(2, 5)
        );
    }

    #[test]
    fn index_plus_degree_is_weight_sum() {
        let f = fam(&[1, 2, 4, 7], 9);
        assert_eq!(f.fano_index() + f.degree() as i64, f.ambient().sum() as i64);
    }
}
