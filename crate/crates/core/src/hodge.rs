//! CM Hodge structures as integer type-functions.
//!
//! A rational Hodge structure of weight `n` whose endomorphisms contain a CM
//! field is determined by a single function `phi` from embeddings to
//! integers with `phi(sigma) + phi(conj sigma) = n`: the embedding `sigma`
//! contributes a line of Hodge type `(phi(sigma), n - phi(sigma))`. All
//! structure-level operations (Hodge numbers, Tate twists, tensor products,
//! the Galois action) become pointwise arithmetic on `phi`.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::cmfield::{CMGaloisDatum, CMType};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HodgeError {
    #[error("expected {expected} values (one per embedding), got {got}")]
    ValueCountMismatch { expected: usize, got: usize },
    #[error(
        "weight relation violated at embedding {sigma}: {value} + {conj_value} != weight {weight}"
    )]
    WeightRelationViolated {
        sigma: usize,
        value: i64,
        conj_value: i64,
        weight: i64,
    },
    #[error("operands belong to different Galois data")]
    DatumMismatch,
}

/// A CM Hodge structure: weight plus one integer per embedding, with
/// conjugate embeddings summing to the weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeTypeFn {
    datum: Arc<CMGaloisDatum>,
    weight: i64,
    values: Vec<i64>,
}

impl HodgeTypeFn {
    /// Validates the weight relation `phi(sigma) + phi(conj sigma) = weight`
    /// for every embedding; reports the first violated pair.
    pub fn new(
        datum: &Arc<CMGaloisDatum>,
        weight: i64,
        values: &[i64],
    ) -> Result<Self, HodgeError> {
        if values.len() != datum.degree() {
            return Err(HodgeError::ValueCountMismatch {
                expected: datum.degree(),
                got: values.len(),
            });
        }
        for sigma in 0..datum.degree() {
            let conj_value = values[datum.conj(sigma)];
            if values[sigma] + conj_value != weight {
                return Err(HodgeError::WeightRelationViolated {
                    sigma,
                    value: values[sigma],
                    conj_value,
                    weight,
                });
            }
        }
        Ok(Self {
            datum: Arc::clone(datum),
            weight,
            values: values.to_vec(),
        })
    }

    /// The weight-1 structure attached to a CM type: indicator of its
    /// members. This is the first cohomology of the corresponding abelian
    /// variety.
    pub fn from_cm_type(cm_type: &CMType) -> Self {
        Self {
            datum: Arc::clone(cm_type.datum()),
            weight: 1,
            values: cm_type.indicator(),
        }
    }

    /// The weight-0 structure with `phi` identically zero.
    pub fn zero(datum: &Arc<CMGaloisDatum>) -> Self {
        Self {
            datum: Arc::clone(datum),
            weight: 0,
            values: vec![0; datum.degree()],
        }
    }

    pub fn datum(&self) -> &Arc<CMGaloisDatum> {
        &self.datum
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, sigma: usize) -> i64 {
        self.values[sigma]
    }

    /// Multiplicity of each Hodge type `(p, q)`, `p + q = weight`. Symmetric
    /// in `p` and `q`, and the multiplicities total the degree.
    pub fn hodge_numbers(&self) -> BTreeMap<(i64, i64), usize> {
        let mut counts = BTreeMap::new();
        for &v in &self.values {
            *counts.entry((v, self.weight - v)).or_insert(0) += 1;
        }
        counts
    }

    /// Shifts the bigrading down by `(m, m)`: subtracts `m` pointwise and
    /// lowers the weight by `2m`.
    pub fn tate_twist(&self, m: i64) -> Self {
        Self {
            datum: Arc::clone(&self.datum),
            weight: self.weight - 2 * m,
            values: self.values.iter().map(|&v| v - m).collect(),
        }
    }

    /// Whether every Hodge type has nonnegative `p` (and then nonnegative
    /// `q`, by the weight relation).
    pub fn is_effective(&self) -> bool {
        self.values.iter().all(|&v| v >= 0)
    }

    /// The largest `m` for which the twist by `m` is still effective: the
    /// pointwise minimum. The twist by it always has a zero value.
    pub fn max_effective_twist(&self) -> i64 {
        *self.values.iter().min().expect("degree is positive")
    }

    /// Tensor product: pointwise sum of values, sum of weights.
    pub fn tensor(&self, other: &HodgeTypeFn) -> Result<Self, HodgeError> {
        if self.datum != other.datum {
            return Err(HodgeError::DatumMismatch);
        }
        Ok(Self {
            datum: Arc::clone(&self.datum),
            weight: self.weight + other.weight,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    /// Galois translate: `(g . phi)(sigma) = phi(g^{-1} sigma)`.
    pub fn translate(&self, g: usize) -> Self {
        let g_inv = self.datum.group().inverse(g);
        let values: Vec<i64> = (0..self.values.len())
            .map(|sigma| self.values[self.datum.act(g_inv, sigma)])
            .collect();
        Self {
            datum: Arc::clone(&self.datum),
            weight: self.weight,
            values,
        }
    }
}
