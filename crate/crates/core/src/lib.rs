//! Combinatorial calculator for rational Hodge structures with complex
//! multiplication.
//!
//! Everything is finite and exact. A CM field is presented through its
//! Galois data (group, fixing subgroup, conjugation element); Hodge
//! structures with CM become integer type-functions on embeddings; the
//! provided operations enumerate CM types, split effective structures into
//! weight-1 layers realizable by abelian varieties, compute Mumford–Tate
//! and Hodge torus dimensions by exact lattice ranks, decompose the
//! cohomology of powers into irreducible constituents, and emit
//! independently checkable realization certificates for each constituent.

pub mod cmfield;
pub mod construct;
pub mod groups;
pub mod hodge;
pub mod spectrum;
pub mod torus;
pub mod wire;

#[cfg(test)]
pub(crate) mod testutil;

pub use cmfield::{
    cm_type_classes, enumerate_cm_types, galois_orbits_of_cm_types, is_transitive_on_cm_types,
    lift_cm_type, product_datum, CMGaloisDatum, CMType, CmFieldError, ProductDatum,
    MAX_ENUMERATION_DEGREE,
};
pub use construct::{
    decompose, peel_cm_type, recipe_from_parts, verify_recipe, ConstructError,
    ConstructionRecipe, KunnethPlacement, VerificationReport,
};
pub use groups::{CosetSpace, FiniteGroup, GroupError, Subgroup, MAX_GROUP_ORDER};
pub use hodge::{HodgeError, HodgeTypeFn};
pub use spectrum::{
    binomial, constituent_field, constituent_phi, dominate, enumerate_constituents, spectrum,
    verify_certificate, Constituent, ConstituentPhi, DominationCertificate, ExponentClass,
    Spectrum, SpectrumError, DEFAULT_BUDGET,
};
pub use torus::{
    hodge_dimension, hodge_lattice, is_nondegenerate, mt_dimension, mt_lattice,
    product_factorization_check, product_hodge_dimension, OrbitLattice,
};
pub use wire::{
    CertificateWire, ClassWire, ConstituentWire, DatumWire, GroupWire, PhiWire, RecipeWire,
    WireError,
};
