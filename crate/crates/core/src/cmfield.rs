//! CM-field combinatorics.
//!
//! A CM field is modeled entirely through Galois data: a finite group `G`
//! (the Galois group of a normal closure), the subgroup `H` fixing the field,
//! and a central order-2 element `rho` playing the role of complex
//! conjugation. Embeddings of the field are the left cosets `G/H`, the Galois
//! action is left translation, and conjugation sends a coset to `rho` times
//! it. A CM type picks one embedding from each conjugate pair.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::groups::{CosetSpace, FiniteGroup, GroupError, Subgroup, MAX_GROUP_ORDER};

/// Largest embedding count for which CM types may be enumerated
/// (`2^(degree/2)` of them).
pub const MAX_ENUMERATION_DEGREE: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CmFieldError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("rho (element {0}) does not have order 2")]
    RhoNotOrder2(usize),
    #[error("rho (element {0}) is not central")]
    RhoNotCentral(usize),
    #[error("rho (element {0}) lies in the fixing subgroup, so conjugation would fix the field")]
    RhoFixesE(usize),
    #[error("degree {degree} exceeds the enumeration limit {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("embedding set {0:?} does not pick exactly one embedding from each conjugate pair")]
    NotACmType(Vec<usize>),
    #[error("value belongs to a different Galois datum")]
    DatumMismatch,
    #[error("the fixing subgroups do not form a chain: the base subgroup is not contained in the given one")]
    NotASubfieldChain,
    #[error("the subfield is not CM: its fixing subgroup contains rho")]
    SubfieldNotCM,
    #[error("factor data disagree on conjugation: componentwise rho is not a central order-2 element")]
    IncompatibleRho,
    #[error("expected {expected} CM types, one per factor, got {got}")]
    FactorCountMismatch { expected: usize, got: usize },
}

/// Galois-theoretic description of a CM field: `(G, H, rho)` together with
/// the derived coset space of embeddings and the conjugation involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMGaloisDatum {
    group: Arc<FiniteGroup>,
    fixing: Subgroup,
    rho: usize,
    embeddings: CosetSpace,
    conj: Vec<usize>,
}

impl CMGaloisDatum {
    /// Validates `(G, H, rho)` and derives the embedding space.
    ///
    /// Requirements: `rho` has order 2, is central, and is not in `H`.
    /// These force the conjugation involution on `G/H` to be fixed-point
    /// free, so the degree is even.
    pub fn new(
        group: &Arc<FiniteGroup>,
        fixing: Subgroup,
        rho: usize,
    ) -> Result<Arc<Self>, CmFieldError> {
        if !Arc::ptr_eq(fixing.parent(), group) && fixing.parent() != group {
            return Err(CmFieldError::Group(GroupError::ForeignSubgroup));
        }
        if rho >= group.order() {
            return Err(CmFieldError::Group(GroupError::GeneratorOutOfRange(rho)));
        }
        if rho == 0 || group.mul(rho, rho) != 0 {
            return Err(CmFieldError::RhoNotOrder2(rho));
        }
        if !group.is_central(rho) {
            return Err(CmFieldError::RhoNotCentral(rho));
        }
        if fixing.contains(rho) {
            return Err(CmFieldError::RhoFixesE(rho));
        }
        let embeddings = CosetSpace::left_cosets(&fixing);
        let conj: Vec<usize> = (0..embeddings.len())
            .map(|c| embeddings.act(rho, c))
            .collect();
        // Centrality of rho and rho not in H make this involution
        // fixed-point free; anything else is a bug above.
        debug_assert!(conj.iter().enumerate().all(|(c, &cc)| c != cc));
        Ok(Arc::new(Self {
            group: Arc::clone(group),
            fixing,
            rho,
            embeddings,
            conj,
        }))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn fixing(&self) -> &Subgroup {
        &self.fixing
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn embeddings(&self) -> &CosetSpace {
        &self.embeddings
    }

    /// Number of embeddings (the field degree). Always even.
    pub fn degree(&self) -> usize {
        self.embeddings.len()
    }

    /// The conjugate embedding.
    pub fn conj(&self, sigma: usize) -> usize {
        self.conj[sigma]
    }

    /// Galois action of `g` on an embedding.
    pub fn act(&self, g: usize, sigma: usize) -> usize {
        self.embeddings.act(g, sigma)
    }

    /// The conjugate pairs `(sigma, conj sigma)` with `sigma < conj sigma`,
    /// one per orbit of conjugation.
    pub fn conjugate_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.degree())
            .filter(|&s| s < self.conj[s])
            .map(|s| (s, self.conj[s]))
            .collect()
    }
}

/// A CM type: a set of embeddings containing exactly one of each conjugate
/// pair. Stored sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMType {
    datum: Arc<CMGaloisDatum>,
    members: Vec<usize>,
}

impl CMType {
    pub fn new(datum: &Arc<CMGaloisDatum>, members: &[usize]) -> Result<Self, CmFieldError> {
        let mut sorted: Vec<usize> = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let degree = datum.degree();
        let ok = sorted.len() == degree / 2
            && sorted.iter().all(|&s| s < degree)
            && sorted
                .iter()
                .all(|&s| sorted.binary_search(&datum.conj(s)).is_err());
        if !ok {
            return Err(CmFieldError::NotACmType(sorted));
        }
        Ok(Self {
            datum: Arc::clone(datum),
            members: sorted,
        })
    }

    pub fn datum(&self) -> &Arc<CMGaloisDatum> {
        &self.datum
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, sigma: usize) -> bool {
        self.members.binary_search(&sigma).is_ok()
    }

    /// Image under the Galois action of `g`; always again a CM type.
    pub fn translate(&self, g: usize) -> CMType {
        let mut members: Vec<usize> = self.members.iter().map(|&s| self.datum.act(g, s)).collect();
        members.sort_unstable();
        Self {
            datum: Arc::clone(&self.datum),
            members,
        }
    }

    /// 0/1 indicator vector over the embeddings.
    pub fn indicator(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.datum.degree()];
        for &s in &self.members {
            v[s] = 1;
        }
        v
    }
}

/// All CM types of a datum in lexicographic order of their member lists.
///
/// There are `2^(degree/2)` of them; refuses degrees above
/// [`MAX_ENUMERATION_DEGREE`].
pub fn enumerate_cm_types(datum: &Arc<CMGaloisDatum>) -> Result<Vec<CMType>, CmFieldError> {
    let degree = datum.degree();
    if degree > MAX_ENUMERATION_DEGREE {
        return Err(CmFieldError::DegreeTooLarge {
            degree,
            max: MAX_ENUMERATION_DEGREE,
        });
    }
    let pairs = datum.conjugate_pairs();
    let g = pairs.len();
    let mut all = Vec::with_capacity(1usize << g);
    for mask in 0usize..(1 << g) {
        let members: Vec<usize> = pairs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if mask & (1 << i) == 0 { a } else { b })
            .collect();
        all.push(CMType::new(datum, &members).expect("pair selection is a CM type"));
    }
    all.sort_by(|a, b| a.members.cmp(&b.members));
    Ok(all)
}

/// Orbits of the full Galois action `T -> gT` on the canonical CM-type list.
///
/// Returns sorted index lists into [`enumerate_cm_types`], ordered by first
/// element. The action is transitive exactly when there is a single orbit.
pub fn galois_orbits_of_cm_types(
    datum: &Arc<CMGaloisDatum>,
) -> Result<Vec<Vec<usize>>, CmFieldError> {
    let types = enumerate_cm_types(datum)?;
    let index: BTreeMap<&[usize], usize> = types
        .iter()
        .enumerate()
        .map(|(i, t)| (t.members(), i))
        .collect();
    let mut orbit_of = vec![usize::MAX; types.len()];
    let mut orbits = Vec::new();
    for start in 0..types.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let mut orbit = BTreeSet::new();
        for g in 0..datum.group().order() {
            let image = types[start].translate(g);
            orbit.insert(index[image.members()]);
        }
        let orbit: Vec<usize> = orbit.into_iter().collect();
        for &i in &orbit {
            orbit_of[i] = orbits.len();
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// Whether the Galois action on CM types has a single orbit.
pub fn is_transitive_on_cm_types(datum: &Arc<CMGaloisDatum>) -> Result<bool, CmFieldError> {
    Ok(galois_orbits_of_cm_types(datum)?.len() == 1)
}

/// Orbits of CM types under the right action of `N_G(H)/H`, the automorphism
/// group of the field. Two CM types in the same orbit present the same
/// abstract pair (field, type), so these orbits are the isogeny classes of
/// the corresponding abelian varieties.
pub fn cm_type_classes(datum: &Arc<CMGaloisDatum>) -> Result<Vec<Vec<usize>>, CmFieldError> {
    let types = enumerate_cm_types(datum)?;
    let index: BTreeMap<&[usize], usize> = types
        .iter()
        .enumerate()
        .map(|(i, t)| (t.members(), i))
        .collect();
    let normalizer = datum.fixing().normalizer();
    let group = datum.group();
    let space = datum.embeddings();
    let mut class_of = vec![usize::MAX; types.len()];
    let mut classes = Vec::new();
    for start in 0..types.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let mut class = BTreeSet::new();
        for &n in normalizer.members() {
            // Right translation sigma = xH -> xnH, well defined because n
            // normalizes H.
            let mut members: Vec<usize> = types[start]
                .members()
                .iter()
                .map(|&c| space.coset_of(group.mul(space.representative(c), n)))
                .collect();
            members.sort_unstable();
            class.insert(index[members.as_slice()]);
        }
        let class: Vec<usize> = class.into_iter().collect();
        for &i in &class {
            class_of[i] = classes.len();
        }
        classes.push(class);
    }
    Ok(classes)
}

/// Lifts a CM type along a subfield chain.
///
/// `sub_fixing` must contain the fixing subgroup of `datum` (so it fixes a
/// subfield) and must not contain `rho` (so the subfield is itself CM).
/// `sub_type` is a CM type of the subfield datum `(G, sub_fixing, rho)`; the
/// lift is its full preimage under the projection of embedding spaces, and is
/// always a CM type of `datum`.
pub fn lift_cm_type(
    datum: &Arc<CMGaloisDatum>,
    sub_fixing: &Subgroup,
    sub_type: &[usize],
) -> Result<CMType, CmFieldError> {
    if !datum.fixing().is_subset_of(sub_fixing) {
        return Err(CmFieldError::NotASubfieldChain);
    }
    if sub_fixing.contains(datum.rho()) {
        return Err(CmFieldError::SubfieldNotCM);
    }
    let sub_datum = CMGaloisDatum::new(datum.group(), sub_fixing.clone(), datum.rho())?;
    let sub_type = CMType::new(&sub_datum, sub_type)?;
    let sub_space = sub_datum.embeddings();
    let members: Vec<usize> = (0..datum.degree())
        .filter(|&c| {
            let rep = datum.embeddings().representative(c);
            sub_type.contains(sub_space.coset_of(rep))
        })
        .collect();
    CMType::new(datum, &members)
}

/// Several CM fields combined over the direct product of their Galois groups.
///
/// This models a product of CM abelian varieties: the embedding sets of the
/// factors stay disjoint (the total space is their disjoint union, not a
/// coset space of the product), and the product group acts blockwise through
/// its projections. Whether the factor fields are actually independent is the
/// caller's hypothesis; the product group encodes exactly that assumption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductDatum {
    group: Arc<FiniteGroup>,
    factors: Vec<Arc<CMGaloisDatum>>,
    rho: usize,
    strides: Vec<usize>,
    offsets: Vec<usize>,
}

impl ProductDatum {
    pub fn new(factors: &[Arc<CMGaloisDatum>]) -> Result<Self, CmFieldError> {
        assert!(!factors.is_empty(), "a product needs at least one factor");
        let wide: u128 = factors.iter().map(|f| f.group().order() as u128).product();
        if wide > MAX_GROUP_ORDER as u128 {
            return Err(CmFieldError::Group(GroupError::TooLarge {
                order: wide.min(usize::MAX as u128) as usize,
                max: MAX_GROUP_ORDER,
            }));
        }
        let order = wide as usize;
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1].group().order();
        }
        let factor_orders: Vec<usize> = factors.iter().map(|f| f.group().order()).collect();
        let decode = |x: usize| -> Vec<usize> {
            strides
                .iter()
                .zip(&factor_orders)
                .map(|(&s, &o)| (x / s) % o)
                .collect()
        };
        // Componentwise products of validated groups satisfy the axioms, so
        // skip the O(order^3) re-validation.
        let mut flat = Vec::with_capacity(order * order);
        for a in 0..order {
            let ac = decode(a);
            for b in 0..order {
                let bc = decode(b);
                let product: usize = ac
                    .iter()
                    .zip(&bc)
                    .zip(factors)
                    .zip(&strides)
                    .map(|(((&x, &y), f), &s)| f.group().mul(x, y) * s)
                    .sum();
                flat.push(product as u32);
            }
        }
        let group = Arc::new(FiniteGroup::from_flat_unchecked(order, flat));
        let rho: usize = factors
            .iter()
            .zip(&strides)
            .map(|(f, &s)| f.rho() * s)
            .sum();
        // Each factor rho is central of order 2, so the tuple is too; checked
        // defensively because everything downstream relies on it.
        if rho == 0 || group.mul(rho, rho) != 0 || !group.is_central(rho) {
            return Err(CmFieldError::IncompatibleRho);
        }
        let mut offsets = Vec::with_capacity(factors.len());
        let mut total = 0usize;
        for f in factors {
            offsets.push(total);
            total += f.degree();
        }
        Ok(Self {
            group,
            factors: factors.to_vec(),
            rho,
            strides,
            offsets,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn factors(&self) -> &[Arc<CMGaloisDatum>] {
        &self.factors
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    /// Component of a product element in the given factor.
    pub fn project(&self, g: usize, factor: usize) -> usize {
        (g / self.strides[factor]) % self.factors[factor].group().order()
    }

    /// Total number of embeddings across all factors.
    pub fn total_embeddings(&self) -> usize {
        self.offsets.last().unwrap() + self.factors.last().unwrap().degree()
    }

    /// Start of each factor's block in the combined embedding indexing.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Blockwise Galois action of a product element on a combined embedding
    /// index.
    pub fn act(&self, g: usize, index: usize) -> usize {
        let factor = match self.offsets.binary_search(&index) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let local = index - self.offsets[factor];
        self.offsets[factor] + self.factors[factor].act(self.project(g, factor), local)
    }

    /// Concatenated indicator vector of one CM type per factor.
    pub fn combined_indicator(&self, types: &[CMType]) -> Result<Vec<i64>, CmFieldError> {
        if types.len() != self.factors.len() {
            return Err(CmFieldError::FactorCountMismatch {
                expected: self.factors.len(),
                got: types.len(),
            });
        }
        let mut v = Vec::with_capacity(self.total_embeddings());
        for (ty, f) in types.iter().zip(&self.factors) {
            if ty.datum() != f {
                return Err(CmFieldError::DatumMismatch);
            }
            v.extend(ty.indicator());
        }
        Ok(v)
    }
}

/// Builds the product datum for a list of factors; see [`ProductDatum`].
pub fn product_datum(factors: &[Arc<CMGaloisDatum>]) -> Result<ProductDatum, CmFieldError> {
    ProductDatum::new(factors)
}
