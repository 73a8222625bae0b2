//! JSON forms of the domain objects and conversions in both directions.
//!
//! Serialized shapes are stable: struct fields serialize in declaration
//! order, lists are canonically ordered by construction, and multiplicities
//! are decimal strings so arbitrarily large counts survive the trip.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cmfield::{CMGaloisDatum, CMType, CmFieldError};
use crate::construct::{recipe_from_parts, ConstructionRecipe, KunnethPlacement};
use crate::groups::{FiniteGroup, GroupError, Subgroup};
use crate::hodge::{HodgeError, HodgeTypeFn};
use crate::spectrum::{
    verify_certificate, Constituent, ConstituentPhi, DominationCertificate, ExponentClass,
};

#[derive(Debug, Error)]
pub enum WireError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    CmField(#[from] CmFieldError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error("multiplicity {0:?} is not a decimal integer")]
    BadMultiplicity(String),
    #[error("a constituent needs a nonempty orbit")]
    EmptyOrbit,
    #[error("a full-group constituent serializes its type function as a single value, got {0} values")]
    MalformedTateMarker(usize),
}

/// A finite group, either as a full multiplication table or as permutation
/// generators (images of `0..degree-1`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupWire {
    Table {
        order: usize,
        table: Vec<Vec<usize>>,
    },
    Permutations {
        degree: usize,
        perm_gens: Vec<Vec<usize>>,
    },
}

impl GroupWire {
    pub fn to_group(&self) -> Result<Arc<FiniteGroup>, GroupError> {
        match self {
            GroupWire::Table { order, table } => {
                if table.len() != *order {
                    return Err(GroupError::BadShape(format!(
                        "declared order {} but the table has {} rows",
                        order,
                        table.len()
                    )));
                }
                FiniteGroup::from_table(table)
            }
            GroupWire::Permutations { degree, perm_gens } => {
                FiniteGroup::from_permutations(*degree, perm_gens)
            }
        }
    }
}

/// A CM Galois datum: group, fixing-subgroup members, conjugation element.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatumWire {
    pub group: GroupWire,
    pub fixing: Vec<usize>,
    pub rho: usize,
}

impl DatumWire {
    pub fn to_datum(&self) -> Result<Arc<CMGaloisDatum>, WireError> {
        let group = self.group.to_group()?;
        let fixing = Subgroup::from_members(&group, &self.fixing)?;
        Ok(CMGaloisDatum::new(&group, fixing, self.rho)?)
    }
}

/// A type function: weight plus one value per embedding in canonical order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhiWire {
    pub weight: i64,
    pub values: Vec<i64>,
}

impl PhiWire {
    pub fn from_phi(phi: &HodgeTypeFn) -> Self {
        Self {
            weight: phi.weight(),
            values: phi.values().to_vec(),
        }
    }

    pub fn to_phi(&self, datum: &Arc<CMGaloisDatum>) -> Result<HodgeTypeFn, HodgeError> {
        HodgeTypeFn::new(datum, self.weight, &self.values)
    }
}

/// A construction recipe: target, layer member lists, placement degrees.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecipeWire {
    pub target: PhiWire,
    pub layers: Vec<Vec<usize>>,
    pub kunneth: KunnethPlacement,
}

impl RecipeWire {
    pub fn from_recipe(recipe: &ConstructionRecipe) -> Self {
        Self {
            target: PhiWire::from_phi(recipe.target()),
            layers: recipe
                .layers()
                .iter()
                .map(|t| t.members().to_vec())
                .collect(),
            kunneth: recipe.kunneth().clone(),
        }
    }

    pub fn to_recipe(&self, datum: &Arc<CMGaloisDatum>) -> Result<ConstructionRecipe, WireError> {
        let target = self.target.to_phi(datum)?;
        let layers: Result<Vec<CMType>, CmFieldError> = self
            .layers
            .iter()
            .map(|members| CMType::new(datum, members))
            .collect();
        Ok(recipe_from_parts(target, layers?, self.kunneth.clone()))
    }
}

/// An exponent class with its multiplicity as a decimal string.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassWire {
    pub representative: Vec<u32>,
    pub signature: Vec<i64>,
    pub multiplicity: String,
    pub p: i64,
}

impl ClassWire {
    pub fn from_class(class: &ExponentClass) -> Self {
        Self {
            representative: class.representative.clone(),
            signature: class.signature.clone(),
            multiplicity: class.multiplicity.to_string(),
            p: class.p,
        }
    }
}

/// A constituent: orbit of class representatives, its field, and its type
/// function over that field. A constituent fixed by the whole group is a
/// Tate piece; its `phiF` is the single-value list `[weight/2]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstituentWire {
    pub orbit: Vec<Vec<u32>>,
    pub field_fixing: Vec<usize>,
    #[serde(rename = "phiF")]
    pub phi_f: Vec<i64>,
    pub weight: i64,
    pub multiplicity: String,
}

impl ConstituentWire {
    pub fn from_constituent(constituent: &Constituent) -> Self {
        let phi_f = match constituent.phi() {
            ConstituentPhi::Field(phi) => phi.values().to_vec(),
            ConstituentPhi::Tate { p } => vec![*p],
        };
        Self {
            orbit: constituent.orbit().to_vec(),
            field_fixing: constituent.field_fixing().members().to_vec(),
            phi_f,
            weight: constituent.weight(),
            multiplicity: constituent.multiplicity().to_string(),
        }
    }

    pub fn to_constituent(&self, base: &Arc<CMGaloisDatum>) -> Result<Constituent, WireError> {
        let group = base.group();
        let field_fixing = Subgroup::from_members(group, &self.field_fixing)?;
        let phi = if field_fixing.len() == group.order() {
            if self.phi_f.len() != 1 {
                return Err(WireError::MalformedTateMarker(self.phi_f.len()));
            }
            ConstituentPhi::Tate { p: self.phi_f[0] }
        } else {
            let sub_datum = CMGaloisDatum::new(group, field_fixing.clone(), base.rho())?;
            ConstituentPhi::Field(HodgeTypeFn::new(&sub_datum, self.weight, &self.phi_f)?)
        };
        let multiplicity = BigUint::from_str(&self.multiplicity)
            .map_err(|_| WireError::BadMultiplicity(self.multiplicity.clone()))?;
        let representative = self
            .orbit
            .iter()
            .max()
            .cloned()
            .ok_or(WireError::EmptyOrbit)?;
        Ok(Constituent::from_parts(
            base,
            self.orbit.clone(),
            representative,
            field_fixing,
            phi,
            self.weight,
            multiplicity,
        ))
    }
}

/// A domination certificate. `recipe` is over the constituent's own field
/// and is absent for Tate pieces; `lifted_layers` are over the base field
/// and are present only when the constituent field sits inside it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateWire {
    pub constituent: ConstituentWire,
    pub twist: i64,
    pub recipe: Option<RecipeWire>,
    pub lifted_layers: Option<Vec<Vec<usize>>>,
    pub verified: bool,
}

impl CertificateWire {
    pub fn from_certificate(cert: &DominationCertificate) -> Self {
        Self {
            constituent: ConstituentWire::from_constituent(cert.constituent()),
            twist: cert.twist(),
            recipe: cert.recipe().map(RecipeWire::from_recipe),
            lifted_layers: cert.lifted_layers().map(|layers| {
                layers.iter().map(|t| t.members().to_vec()).collect()
            }),
            verified: verify_certificate(cert).ok(),
        }
    }

    pub fn to_certificate(
        &self,
        base: &Arc<CMGaloisDatum>,
    ) -> Result<DominationCertificate, WireError> {
        let constituent = self.constituent.to_constituent(base)?;
        let recipe = match (&self.recipe, constituent.phi()) {
            (Some(wire), ConstituentPhi::Field(phi)) => Some(wire.to_recipe(phi.datum())?),
            (Some(wire), ConstituentPhi::Tate { .. }) => {
                // A recipe attached to a Tate piece has no field to live
                // over; reconstruct it over the base so the verifier can
                // reject it rather than this parser.
                Some(wire.to_recipe(base)?)
            }
            (None, _) => None,
        };
        let lifted_layers = self
            .lifted_layers
            .as_ref()
            .map(|layers| {
                layers
                    .iter()
                    .map(|members| CMType::new(base, members))
                    .collect::<Result<Vec<CMType>, CmFieldError>>()
            })
            .transpose()?;
        Ok(DominationCertificate::from_parts(
            constituent,
            self.twist,
            recipe,
            lifted_layers,
        ))
    }
}
