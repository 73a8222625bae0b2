//! Realizing effective CM Hodge structures inside abelian-variety
//! cohomology.
//!
//! An effective structure of weight `n` is split into `n` weight-1 layers by
//! repeatedly peeling off a CM type whose indicator stays below `phi`. Each
//! layer names a CM abelian variety up to isogeny, and the original structure
//! embeds in the degree-`n` part of the product of those varieties, inside
//! the component where every factor contributes degree 1. The recipe records
//! the layers; an independent verifier re-checks them against the target.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cmfield::{CMGaloisDatum, CMType};
use crate::hodge::HodgeTypeFn;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("the structure is not effective: value {value} at embedding {sigma}")]
    NotEffective { sigma: usize, value: i64 },
    #[error("cannot peel a layer off a weight-0 structure")]
    WeightZero,
}

/// Where a recipe's target lives: the degree-`n` cohomology of the product
/// of the layer varieties, with every factor contributing degree 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethPlacement {
    pub degrees: Vec<u32>,
}

/// A verified plan realizing `target` as a substructure of the cohomology of
/// a product of CM abelian varieties, one per layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionRecipe {
    target: HodgeTypeFn,
    layers: Vec<CMType>,
    kunneth: KunnethPlacement,
}

impl ConstructionRecipe {
    pub fn target(&self) -> &HodgeTypeFn {
        &self.target
    }

    pub fn layers(&self) -> &[CMType] {
        &self.layers
    }

    pub fn kunneth(&self) -> &KunnethPlacement {
        &self.kunneth
    }
}

/// Splits one CM type off an effective structure of positive weight.
///
/// The layer takes every embedding where `phi(sigma) > phi(conj sigma)`,
/// breaking ties toward the smaller index. On the layer
/// `phi(sigma) >= ceil(n/2) >= 1` and off it the value is untouched, so the
/// remainder `phi - chi` is again effective, of weight `n - 1`.
pub fn peel_cm_type(phi: &HodgeTypeFn) -> Result<(CMType, HodgeTypeFn), ConstructError> {
    if let Some(sigma) = (0..phi.values().len()).find(|&s| phi.value(s) < 0) {
        return Err(ConstructError::NotEffective {
            sigma,
            value: phi.value(sigma),
        });
    }
    if phi.weight() < 1 {
        return Err(ConstructError::WeightZero);
    }
    let datum = phi.datum();
    let members: Vec<usize> = (0..datum.degree())
        .filter(|&s| {
            let c = datum.conj(s);
            phi.value(s) > phi.value(c) || (phi.value(s) == phi.value(c) && s < c)
        })
        .collect();
    let layer = CMType::new(datum, &members).expect("majority rule picks one per pair");
    let chi = HodgeTypeFn::from_cm_type(&layer);
    let remainder_values: Vec<i64> = phi
        .values()
        .iter()
        .zip(chi.values())
        .map(|(&a, &b)| a - b)
        .collect();
    let remainder = HodgeTypeFn::new(datum, phi.weight() - 1, &remainder_values)
        .expect("peeling preserves the weight relation");
    debug_assert!(remainder.is_effective());
    Ok((layer, remainder))
}

/// Peels layers until weight 0, producing one CM type per unit of weight.
/// The result is deterministic and passes [`verify_recipe`] by construction.
pub fn decompose(phi: &HodgeTypeFn) -> Result<ConstructionRecipe, ConstructError> {
    if let Some(sigma) = (0..phi.values().len()).find(|&s| phi.value(s) < 0) {
        return Err(ConstructError::NotEffective {
            sigma,
            value: phi.value(sigma),
        });
    }
    let mut layers = Vec::new();
    let mut rest = phi.clone();
    while rest.weight() > 0 {
        let (layer, next) = peel_cm_type(&rest)?;
        layers.push(layer);
        rest = next;
    }
    debug_assert!(rest.values().iter().all(|&v| v == 0));
    let kunneth = KunnethPlacement {
        degrees: vec![1; layers.len()],
    };
    Ok(ConstructionRecipe {
        target: phi.clone(),
        layers,
        kunneth,
    })
}

/// Outcome of an independent re-check, with one line per failed condition.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub(crate) fn require(&mut self, condition: bool, message: impl Into<String>) {
        if !condition {
            self.failures.push(message.into());
        }
    }
}

/// Re-checks a recipe against a target from scratch: every layer must be a
/// CM type of the same datum, the layer count must equal the weight, the
/// indicators must sum pointwise to the target, and the placement degrees
/// must be all ones.
pub fn verify_recipe(phi: &HodgeTypeFn, recipe: &ConstructionRecipe) -> VerificationReport {
    let mut report = VerificationReport::default();
    let datum: &std::sync::Arc<CMGaloisDatum> = phi.datum();
    report.require(
        recipe.target == *phi,
        "recipe target differs from the structure being verified",
    );
    report.require(
        recipe.layers.len() as i64 == phi.weight(),
        format!(
            "layer count {} does not equal the weight {}",
            recipe.layers.len(),
            phi.weight()
        ),
    );
    let mut sum = vec![0i64; datum.degree()];
    for (i, layer) in recipe.layers.iter().enumerate() {
        if layer.datum() != datum {
            report.require(false, format!("layer {i} belongs to a different datum"));
            continue;
        }
        match CMType::new(datum, layer.members()) {
            Ok(_) => {
                for &s in layer.members() {
                    sum[s] += 1;
                }
            }
            Err(_) => report.require(false, format!("layer {i} is not a CM type")),
        }
    }
    report.require(
        sum == phi.values(),
        format!("layer indicators sum to {sum:?}, target values are {:?}", phi.values()),
    );
    report.require(
        recipe.kunneth.degrees.len() == recipe.layers.len()
            && recipe.kunneth.degrees.iter().all(|&d| d == 1),
        "placement degrees must be one per layer, all equal to 1",
    );
    report
}

/// Builds a recipe from raw parts without checking it; pair with
/// [`verify_recipe`] when the parts come from outside.
pub fn recipe_from_parts(
    target: HodgeTypeFn,
    layers: Vec<CMType>,
    kunneth: KunnethPlacement,
) -> ConstructionRecipe {
    ConstructionRecipe {
        target,
        layers,
        kunneth,
    }
}
