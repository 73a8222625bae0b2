//! Decomposing the cohomology of powers of a CM abelian variety.
//!
//! For a CM abelian variety `A` given by a datum and CM type, the degree-`n`
//! cohomology of `A^k` is acted on by the Mumford–Tate torus through
//! exponent vectors `m` over the embeddings, with `sum m = n` and each entry
//! at most `k`. Two vectors land in the same irreducible constituent exactly
//! when they restrict equally to the Hodge group, i.e. when they pair
//! equally against every generator of the Hodge cocharacter orbit lattice.
//! Classes group into Galois orbits (the rational constituents); each orbit
//! carries a CM field of its own (the stabilizer of its signature), a type
//! function over that field, and — after a maximal Tate twist — a
//! construction recipe realizing it in abelian-variety cohomology. The
//! certificate bundles all of that and is checked by an independent
//! verifier.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cmfield::{lift_cm_type, CMGaloisDatum, CMType, CmFieldError};
use crate::construct::{
    decompose, verify_recipe, ConstructError, ConstructionRecipe, VerificationReport,
};
use crate::groups::Subgroup;
use crate::hodge::{HodgeError, HodgeTypeFn};
use crate::torus::hodge_lattice;

/// Refuse to enumerate more exponent vectors than this unless the caller
/// raises the limit explicitly.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("enumeration would visit {count} exponent vectors, over the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u64 },
    #[error("the power k must be at least 1")]
    PowerZero,
    #[error("a full-group constituent needs even weight, got {weight}")]
    TateOddWeight { weight: i64 },
    #[error("internal certificate verification failed: {}", failures.join("; "))]
    CertificateInvalid { failures: Vec<String> },
    #[error(transparent)]
    CmField(#[from] CmFieldError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// An isotypic piece of the torus action: all exponent vectors with one
/// common signature against the Hodge cocharacter lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentClass {
    /// Lexicographically smallest member vector.
    pub representative: Vec<u32>,
    /// Pairings of any member against the sorted lattice generators.
    pub signature: Vec<i64>,
    /// Total multiplicity of the class in the exterior power.
    pub multiplicity: BigUint,
    /// Holomorphic degree `p` shared by every member.
    pub p: i64,
}

impl ExponentClass {
    pub fn is_tate(&self) -> bool {
        self.signature.iter().all(|&s| s == 0)
    }
}

/// Type function of a constituent over its own CM field, or the marker for
/// a trivial (full-group) constituent, which is a pure Tate piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstituentPhi {
    Field(HodgeTypeFn),
    Tate { p: i64 },
}

/// A Galois orbit of exponent classes: one irreducible piece of the
/// rational decomposition, together with its field and type function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constituent {
    base: Arc<CMGaloisDatum>,
    orbit: Vec<Vec<u32>>,
    representative: Vec<u32>,
    field_fixing: Subgroup,
    phi: ConstituentPhi,
    weight: i64,
    multiplicity: BigUint,
}

impl Constituent {
    /// The datum of the variety whose cohomology is being decomposed.
    pub fn base(&self) -> &Arc<CMGaloisDatum> {
        &self.base
    }

    /// Representatives of the classes in the orbit, ascending.
    pub fn orbit(&self) -> &[Vec<u32>] {
        &self.orbit
    }

    /// The exponent vector the field and type function are computed from:
    /// the class representative maximizing `(p, vector)`.
    pub fn representative(&self) -> &[u32] {
        &self.representative
    }

    /// Fixing subgroup of the constituent's CM field inside the base group.
    pub fn field_fixing(&self) -> &Subgroup {
        &self.field_fixing
    }

    pub fn phi(&self) -> &ConstituentPhi {
        &self.phi
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn multiplicity(&self) -> &BigUint {
        &self.multiplicity
    }

    pub fn is_tate(&self) -> bool {
        matches!(self.phi, ConstituentPhi::Tate { .. })
    }

    /// Reassembles a constituent from serialized parts. The caller vouches
    /// for coherence; pass the result through [`verify_certificate`].
    pub fn from_parts(
        base: &Arc<CMGaloisDatum>,
        orbit: Vec<Vec<u32>>,
        representative: Vec<u32>,
        field_fixing: Subgroup,
        phi: ConstituentPhi,
        weight: i64,
        multiplicity: BigUint,
    ) -> Self {
        Self {
            base: Arc::clone(base),
            orbit,
            representative,
            field_fixing,
            phi,
            weight,
            multiplicity,
        }
    }
}

/// Full decomposition of the degree-`n` cohomology of the `k`-th power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    cm_type: CMType,
    weight: u32,
    power: u32,
    classes: Vec<ExponentClass>,
    constituents: Vec<Constituent>,
    total_multiplicity: BigUint,
}

impl Spectrum {
    pub fn cm_type(&self) -> &CMType {
        &self.cm_type
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    /// All exponent classes, sorted by representative vector.
    pub fn classes(&self) -> &[ExponentClass] {
        &self.classes
    }

    /// Galois orbits of classes, ordered by smallest class index.
    pub fn constituents(&self) -> &[Constituent] {
        &self.constituents
    }

    /// Sum of all class multiplicities; equals the binomial dimension of
    /// the exterior power.
    pub fn total_multiplicity(&self) -> &BigUint {
        &self.total_multiplicity
    }

    /// Dimension the total must come out to: `C(k * degree, n)`.
    pub fn expected_dimension(&self) -> BigUint {
        binomial(
            (self.power as usize * self.cm_type.datum().degree()) as u64,
            self.weight as u64,
        )
    }

    /// Combined multiplicity of all classes of holomorphic degree `p`: the
    /// Hodge number `h^{p, n-p}` of the power.
    pub fn hodge_multiplicity(&self, p: i64) -> BigUint {
        self.classes
            .iter()
            .filter(|c| c.p == p)
            .fold(BigUint::zero(), |acc, c| acc + &c.multiplicity)
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for i in 0..k {
        result = result * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    result
}

/// Number of exponent vectors with the given sum and per-entry cap,
/// saturating at `u128::MAX`.
fn vector_count(length: usize, total: u32, cap: u32) -> u128 {
    let total = total as usize;
    let cap = cap as usize;
    let mut ways = vec![0u128; total + 1];
    ways[0] = 1;
    for _ in 0..length {
        let mut next = vec![0u128; total + 1];
        for (sum, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for add in 0..=cap.min(total - sum) {
                let slot = &mut next[sum + add];
                *slot = slot.saturating_add(w);
            }
        }
        ways = next;
    }
    ways[total]
}

struct ClassAccum {
    representative: Vec<u32>,
    multiplicity: BigUint,
    p: i64,
}

/// Computes the full spectrum: enumerate exponent vectors, group them into
/// classes by signature, group classes into Galois orbits, and attach the
/// field and type function of each orbit.
pub fn spectrum(cm_type: &CMType, n: u32, k: u32, budget: u64) -> Result<Spectrum, SpectrumError> {
    if k == 0 {
        return Err(SpectrumError::PowerZero);
    }
    let datum = cm_type.datum();
    let degree = datum.degree();
    let count = vector_count(degree, n, k);
    if count > budget as u128 {
        return Err(SpectrumError::BudgetExceeded { count, budget });
    }

    let chi = HodgeTypeFn::from_cm_type(cm_type);
    let generators = hodge_lattice(&chi).generators().to_vec();
    let pair = |m: &[u32], w: &[i64]| -> i64 { m.iter().zip(w).map(|(&a, &b)| a as i64 * b).sum() };
    let signature_of =
        |m: &[u32]| -> Vec<i64> { generators.iter().map(|w| pair(m, w)).collect() };
    let per_entry_choices: Vec<BigUint> = (0..=k.min(n))
        .map(|m| binomial(k as u64, m as u64))
        .collect();

    let mut accum: BTreeMap<Vec<i64>, ClassAccum> = BTreeMap::new();
    let mut stack: Vec<u32> = Vec::with_capacity(degree);
    enumerate(&mut stack, degree, n, k, &mut |m: &[u32]| {
        let signature = signature_of(m);
        let multiplicity = m
            .iter()
            .fold(BigUint::one(), |acc, &e| acc * &per_entry_choices[e as usize]);
        match accum.entry(signature) {
            Entry::Occupied(mut entry) => entry.get_mut().multiplicity += multiplicity,
            Entry::Vacant(entry) => {
                let p: i64 = cm_type.members().iter().map(|&s| m[s] as i64).sum();
                entry.insert(ClassAccum {
                    representative: m.to_vec(),
                    multiplicity,
                    p,
                });
            }
        }
    });

    let mut class_list: Vec<(Vec<i64>, ClassAccum)> = accum.into_iter().collect();
    class_list.sort_by(|a, b| a.1.representative.cmp(&b.1.representative));
    let signature_index: BTreeMap<Vec<i64>, usize> = class_list
        .iter()
        .enumerate()
        .map(|(i, (sig, _))| (sig.clone(), i))
        .collect();
    let classes: Vec<ExponentClass> = class_list
        .into_iter()
        .map(|(signature, acc)| ExponentClass {
            representative: acc.representative,
            signature,
            multiplicity: acc.multiplicity,
            p: acc.p,
        })
        .collect();

    let group = datum.group();
    let translate_vec = |g: usize, m: &[u32]| -> Vec<u32> {
        let g_inv = group.inverse(g);
        (0..m.len()).map(|s| m[datum.act(g_inv, s)]).collect()
    };

    let mut claimed = vec![false; classes.len()];
    let mut constituents = Vec::new();
    for start in 0..classes.len() {
        if claimed[start] {
            continue;
        }
        let mut orbit_indices = std::collections::BTreeSet::new();
        for g in 0..group.order() {
            let moved = translate_vec(g, &classes[start].representative);
            orbit_indices.insert(signature_index[&signature_of(&moved)]);
        }
        let orbit_indices: Vec<usize> = orbit_indices.into_iter().collect();
        for &i in &orbit_indices {
            claimed[i] = true;
        }
        let orbit: Vec<Vec<u32>> = orbit_indices
            .iter()
            .map(|&i| classes[i].representative.clone())
            .collect();
        let rep_class = orbit_indices
            .iter()
            .map(|&i| &classes[i])
            .max_by(|a, b| (a.p, &a.representative).cmp(&(b.p, &b.representative)))
            .expect("orbit is nonempty");
        let representative = rep_class.representative.clone();
        let field_fixing = constituent_field_from_parts(datum, &generators, &representative);
        let phi = constituent_phi_from_parts(cm_type, rep_class, &field_fixing, n as i64)?;
        let multiplicity = orbit_indices
            .iter()
            .fold(BigUint::zero(), |acc, &i| acc + &classes[i].multiplicity);
        constituents.push(Constituent {
            base: Arc::clone(datum),
            orbit,
            representative,
            field_fixing,
            phi,
            weight: n as i64,
            multiplicity,
        });
    }

    let total_multiplicity = classes
        .iter()
        .fold(BigUint::zero(), |acc, c| acc + &c.multiplicity);
    Ok(Spectrum {
        cm_type: cm_type.clone(),
        weight: n,
        power: k,
        classes,
        constituents,
        total_multiplicity,
    })
}

fn enumerate(
    stack: &mut Vec<u32>,
    length: usize,
    remaining: u32,
    cap: u32,
    visit: &mut impl FnMut(&[u32]),
) {
    if stack.len() == length {
        if remaining == 0 {
            visit(stack);
        }
        return;
    }
    let slots_left = (length - stack.len() - 1) as u64;
    for value in 0..=cap.min(remaining) {
        // The rest of the vector must be able to absorb what remains.
        if (remaining - value) as u64 > slots_left * cap as u64 {
            continue;
        }
        stack.push(value);
        enumerate(stack, length, remaining - value, cap, visit);
        stack.pop();
    }
}

/// The constituents of the spectrum, in canonical order.
pub fn enumerate_constituents(
    cm_type: &CMType,
    n: u32,
    k: u32,
    budget: u64,
) -> Result<Vec<Constituent>, SpectrumError> {
    Ok(spectrum(cm_type, n, k, budget)?.constituents().to_vec())
}

fn constituent_field_from_parts(
    datum: &Arc<CMGaloisDatum>,
    generators: &[Vec<i64>],
    m: &[u32],
) -> Subgroup {
    let group = datum.group();
    let pair = |v: &[u32], w: &[i64]| -> i64 { v.iter().zip(w).map(|(&a, &b)| a as i64 * b).sum() };
    let base_sig: Vec<i64> = generators.iter().map(|w| pair(m, w)).collect();
    let members: Vec<usize> = (0..group.order())
        .filter(|&g| {
            let g_inv = group.inverse(g);
            let moved: Vec<u32> = (0..m.len()).map(|s| m[datum.act(g_inv, s)]).collect();
            generators
                .iter()
                .zip(&base_sig)
                .all(|(w, &expect)| pair(&moved, w) == expect)
        })
        .collect();
    Subgroup::from_members(group, &members).expect("a stabilizer is a subgroup")
}

/// Fixing subgroup of the CM field of a class: the stabilizer of its
/// signature under the Galois action.
pub fn constituent_field(cm_type: &CMType, class: &ExponentClass) -> Subgroup {
    let chi = HodgeTypeFn::from_cm_type(cm_type);
    let generators = hodge_lattice(&chi).generators().to_vec();
    constituent_field_from_parts(cm_type.datum(), &generators, &class.representative)
}

fn constituent_phi_from_parts(
    cm_type: &CMType,
    class: &ExponentClass,
    field: &Subgroup,
    weight: i64,
) -> Result<ConstituentPhi, SpectrumError> {
    let datum = cm_type.datum();
    let group = datum.group();
    if class.is_tate() {
        if weight % 2 != 0 {
            return Err(SpectrumError::TateOddWeight { weight });
        }
        return Ok(ConstituentPhi::Tate { p: weight / 2 });
    }
    let sub_datum = CMGaloisDatum::new(group, field.clone(), datum.rho())?;
    let m = &class.representative;
    let values: Vec<i64> = (0..sub_datum.degree())
        .map(|c| {
            let g = sub_datum.embeddings().representative(c);
            let g_inv = group.inverse(g);
            cm_type
                .members()
                .iter()
                .map(|&s| m[datum.act(g_inv, s)] as i64)
                .sum()
        })
        .collect();
    let phi = HodgeTypeFn::new(&sub_datum, weight, &values)
        .expect("signature-stable pairing satisfies the weight relation");
    Ok(ConstituentPhi::Field(phi))
}

/// Type function of a class over its field, or the Tate marker when the
/// class is fixed by the whole group (signature zero).
pub fn constituent_phi(
    cm_type: &CMType,
    class: &ExponentClass,
    field: &Subgroup,
) -> Result<ConstituentPhi, SpectrumError> {
    let weight: i64 = class.representative.iter().map(|&e| e as i64).sum();
    constituent_phi_from_parts(cm_type, class, field, weight)
}

/// A checkable witness that one constituent is realized, after its maximal
/// Tate twist, inside the cohomology of a product of CM abelian varieties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationCertificate {
    constituent: Constituent,
    twist: i64,
    recipe: Option<ConstructionRecipe>,
    lifted_layers: Option<Vec<CMType>>,
}

impl DominationCertificate {
    pub fn constituent(&self) -> &Constituent {
        &self.constituent
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    /// Recipe over the constituent's own field; absent for Tate pieces.
    pub fn recipe(&self) -> Option<&ConstructionRecipe> {
        self.recipe.as_ref()
    }

    /// Recipe layers lifted back to the base field, when the constituent's
    /// field sits inside it (it need not, and for some non-normal base
    /// fields it does not).
    pub fn lifted_layers(&self) -> Option<&[CMType]> {
        self.lifted_layers.as_deref()
    }

    /// Reassembles a certificate from serialized parts. The caller vouches
    /// for nothing; pass the result through [`verify_certificate`].
    pub fn from_parts(
        constituent: Constituent,
        twist: i64,
        recipe: Option<ConstructionRecipe>,
        lifted_layers: Option<Vec<CMType>>,
    ) -> Self {
        Self {
            constituent,
            twist,
            recipe,
            lifted_layers,
        }
    }
}

/// Produces one verified certificate per constituent of `H^n(A^k)`.
///
/// Non-Tate constituents are twisted by their maximal effective twist and
/// decomposed over their own field; when that field sits inside the base
/// field the layers are lifted back up. Tate constituents get the trivial
/// certificate (twist `n/2`, nothing to construct). Every certificate passes
/// [`verify_certificate`] before being returned.
pub fn dominate(
    cm_type: &CMType,
    n: u32,
    k: u32,
    budget: u64,
) -> Result<Vec<DominationCertificate>, SpectrumError> {
    let spec = spectrum(cm_type, n, k, budget)?;
    let base = cm_type.datum();
    let mut certificates = Vec::with_capacity(spec.constituents().len());
    for constituent in spec.constituents() {
        let cert = match constituent.phi() {
            ConstituentPhi::Tate { p } => DominationCertificate {
                constituent: constituent.clone(),
                twist: *p,
                recipe: None,
                lifted_layers: None,
            },
            ConstituentPhi::Field(phi_f) => {
                let twist = phi_f.max_effective_twist();
                let twisted = phi_f.tate_twist(twist);
                let recipe = decompose(&twisted)?;
                let lifted = if base.fixing().is_subset_of(constituent.field_fixing()) {
                    let layers: Result<Vec<CMType>, CmFieldError> = recipe
                        .layers()
                        .iter()
                        .map(|layer| lift_cm_type(base, constituent.field_fixing(), layer.members()))
                        .collect();
                    Some(layers?)
                } else {
                    None
                };
                DominationCertificate {
                    constituent: constituent.clone(),
                    twist,
                    recipe: Some(recipe),
                    lifted_layers: lifted,
                }
            }
        };
        let report = verify_certificate(&cert);
        if !report.ok() {
            return Err(SpectrumError::CertificateInvalid {
                failures: report.failures,
            });
        }
        certificates.push(cert);
    }
    Ok(certificates)
}

/// Re-checks every promise a certificate makes, from scratch, reporting each
/// violated condition. Used on everything `dominate` emits and on anything
/// read back from disk.
pub fn verify_certificate(cert: &DominationCertificate) -> VerificationReport {
    let mut report = VerificationReport::default();
    let constituent = &cert.constituent;
    let base = &constituent.base;
    let group = base.group();
    match &constituent.phi {
        ConstituentPhi::Tate { p } => {
            report.require(
                constituent.field_fixing.len() == group.order(),
                "a Tate constituent must be fixed by the whole group",
            );
            report.require(
                constituent.weight % 2 == 0,
                "a Tate constituent must have even weight",
            );
            report.require(
                *p * 2 == constituent.weight && cert.twist == *p,
                "a Tate certificate must twist by half the weight",
            );
            report.require(
                cert.recipe.is_none() && cert.lifted_layers.is_none(),
                "a Tate certificate carries no recipe",
            );
        }
        ConstituentPhi::Field(phi_f) => {
            report.require(
                !constituent.field_fixing.contains(base.rho()),
                "the constituent field must not be fixed by conjugation",
            );
            let sub_datum =
                match CMGaloisDatum::new(group, constituent.field_fixing.clone(), base.rho()) {
                    Ok(d) => d,
                    Err(e) => {
                        report.require(false, format!("constituent field datum is invalid: {e}"));
                        return report;
                    }
                };
            report.require(
                phi_f.weight() == constituent.weight,
                "type function weight must match the constituent weight",
            );
            report.require(
                HodgeTypeFn::new(&sub_datum, phi_f.weight(), phi_f.values()).is_ok(),
                "type function must satisfy the weight relation over the constituent field",
            );
            report.require(
                cert.twist == phi_f.max_effective_twist(),
                "twist must be the maximal effective twist",
            );
            let twisted = phi_f.tate_twist(cert.twist);
            report.require(
                twisted.is_effective() && twisted.max_effective_twist() == 0,
                "twisted type function must be effective with a zero value",
            );
            match &cert.recipe {
                Some(recipe) => {
                    let sub = verify_recipe(&twisted, recipe);
                    for failure in sub.failures {
                        report.require(false, failure);
                    }
                    if let Some(lifted) = &cert.lifted_layers {
                        verify_lifted_layers(&mut report, base, &sub_datum, recipe, lifted);
                    }
                }
                None => report.require(false, "a field constituent needs a recipe"),
            }
        }
    }
    report
}

fn verify_lifted_layers(
    report: &mut VerificationReport,
    base: &Arc<CMGaloisDatum>,
    sub_datum: &Arc<CMGaloisDatum>,
    recipe: &ConstructionRecipe,
    lifted: &[CMType],
) {
    report.require(
        base.fixing().is_subset_of(sub_datum.fixing()),
        "lifting needs the constituent field to sit inside the base field",
    );
    report.require(
        lifted.len() == recipe.layers().len(),
        "lifted layer count must match the recipe",
    );
    let sub_space = sub_datum.embeddings();
    for (i, (up, down)) in lifted.iter().zip(recipe.layers()).enumerate() {
        if CMType::new(base, up.members()).is_err() {
            report.require(
                false,
                format!("lifted layer {i} is not a CM type of the base field"),
            );
            continue;
        }
        let mut projected: Vec<usize> = up
            .members()
            .iter()
            .map(|&c| sub_space.coset_of(base.embeddings().representative(c)))
            .collect();
        projected.sort_unstable();
        projected.dedup();
        report.require(
            projected == down.members(),
            format!("lifted layer {i} does not project back onto its recipe layer"),
        );
    }
}
