//! Finite groups given by explicit multiplication tables, their subgroups,
//! and left coset spaces.
//!
//! Elements are the indices `0..order`, with `0` always the identity. A group
//! can be built directly from a Cayley table or generated from a set of
//! permutations; in the latter case the elements are the generated
//! permutations in lexicographic order (which puts the identity first).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

/// Largest group order accepted by the constructors. Cayley tables are stored
/// densely, so this bounds memory at roughly `order * order * 4` bytes.
pub const MAX_GROUP_ORDER: usize = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is malformed: {0}")]
    BadShape(String),
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("row or column {index} of the table is not a permutation, so element {index} has no inverse")]
    NotInvertible { index: usize },
    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group order {order} exceeds the supported maximum {max}")]
    TooLarge { order: usize, max: usize },
    #[error("generator {0} is out of range")]
    GeneratorOutOfRange(usize),
    #[error("permutation generator {index} is not a permutation of 0..{degree}")]
    BadPermutation { index: usize, degree: usize },
    #[error("subgroup members are not closed under multiplication")]
    NotClosed,
    #[error("subgroup does not belong to this group")]
    ForeignSubgroup,
}

/// A finite group presented by its full multiplication table.
///
/// `table[a][b]` is the product `a * b`; element `0` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

impl FiniteGroup {
    /// Builds a group from an explicit Cayley table, checking every group
    /// axiom. Checks run cheapest first: shape, identity, invertibility,
    /// associativity.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Arc<Self>, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::BadShape("table is empty".into()));
        }
        if order > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge {
                order,
                max: MAX_GROUP_ORDER,
            });
        }
        let mut flat = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::BadShape(format!(
                    "row {i} has length {} but the table has {order} rows",
                    row.len()
                )));
            }
            for (j, &entry) in row.iter().enumerate() {
                if entry >= order {
                    return Err(GroupError::BadShape(format!(
                        "entry at ({i},{j}) is {entry}, outside 0..{order}"
                    )));
                }
                flat.push(entry as u32);
            }
        }

        // Identity: table[0][j] == j and table[i][0] == i.
        for j in 0..order {
            if flat[j] as usize != j || flat[j * order] as usize != j {
                return Err(GroupError::NoIdentity);
            }
        }

        // Invertibility: every row and every column is a permutation.
        for i in 0..order {
            let mut row_seen = vec![false; order];
            let mut col_seen = vec![false; order];
            for j in 0..order {
                let r = flat[i * order + j] as usize;
                let c = flat[j * order + i] as usize;
                if row_seen[r] || col_seen[c] {
                    return Err(GroupError::NotInvertible { index: i });
                }
                row_seen[r] = true;
                col_seen[c] = true;
            }
        }

        // Associativity.
        for a in 0..order {
            for b in 0..order {
                let ab = flat[a * order + b] as usize;
                for c in 0..order {
                    let bc = flat[b * order + c] as usize;
                    if flat[ab * order + c] != flat[a * order + bc] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }

        Ok(Arc::new(Self::from_flat_unchecked(order, flat)))
    }

    /// Builds the group generated by a set of permutations of `0..degree`.
    ///
    /// The generated permutations become the elements, ordered
    /// lexicographically as vectors; the identity is always lexicographically
    /// least, so it lands at index 0. Products come from composition:
    /// `(p * q)(x) = p(q(x))`.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<Arc<Self>, GroupError> {
        if degree == 0 {
            return Err(GroupError::BadShape("permutation degree is zero".into()));
        }
        for (index, g) in gens.iter().enumerate() {
            let mut seen = vec![false; degree];
            if g.len() != degree {
                return Err(GroupError::BadPermutation { index, degree });
            }
            for &img in g {
                if img >= degree || seen[img] {
                    return Err(GroupError::BadPermutation { index, degree });
                }
                seen[img] = true;
            }
        }

        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = BTreeSet::new();
        elements.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                // p * g, i.e. apply g first.
                let prod: Vec<usize> = (0..degree).map(|x| p[g[x]]).collect();
                if elements.insert(prod.clone()) {
                    if elements.len() > MAX_GROUP_ORDER {
                        return Err(GroupError::TooLarge {
                            order: elements.len(),
                            max: MAX_GROUP_ORDER,
                        });
                    }
                    queue.push_back(prod);
                }
            }
        }

        let elements: Vec<Vec<usize>> = elements.into_iter().collect();
        let index: BTreeMap<&[usize], usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let order = elements.len();
        let mut flat = Vec::with_capacity(order * order);
        for p in &elements {
            for q in &elements {
                let prod: Vec<usize> = (0..degree).map(|x| p[q[x]]).collect();
                flat.push(index[prod.as_slice()] as u32);
            }
        }
        Ok(Arc::new(Self::from_flat_unchecked(order, flat)))
    }

    /// Wraps a flat row-major table that is already known to satisfy the
    /// group axioms, e.g. one built componentwise from validated groups.
    pub(crate) fn from_flat_unchecked(order: usize, flat: Vec<u32>) -> Self {
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            for b in 0..order {
                if flat[a * order + b] == 0 {
                    inverse[a] = b as u32;
                    break;
                }
            }
        }
        Self {
            order,
            table: flat,
            inverse,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The product `a * b`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// Multiplicative order of an element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Whether `a` commutes with every element.
    pub fn is_central(&self, a: usize) -> bool {
        (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a))
    }

    /// The multiplication table, row-major: entry `(a, b)` is `a * b`.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }
}

/// A subgroup, stored as the sorted list of its member elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
}

impl Subgroup {
    /// Checks that `members` really form a subgroup (identity, closure;
    /// inverses follow by finiteness) and returns it with members sorted.
    pub fn from_members(
        parent: &Arc<FiniteGroup>,
        members: &[usize],
    ) -> Result<Self, GroupError> {
        let mut sorted: Vec<usize> = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &m in &sorted {
            if m >= parent.order() {
                return Err(GroupError::GeneratorOutOfRange(m));
            }
        }
        if sorted.binary_search(&0).is_err() {
            return Err(GroupError::NotClosed);
        }
        for &a in &sorted {
            for &b in &sorted {
                if sorted.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(GroupError::NotClosed);
                }
            }
        }
        Ok(Self {
            parent: Arc::clone(parent),
            members: sorted,
        })
    }

    /// The subgroup generated by `gens`: closure under multiplication.
    pub fn closure(parent: &Arc<FiniteGroup>, gens: &[usize]) -> Result<Self, GroupError> {
        for &g in gens {
            if g >= parent.order() {
                return Err(GroupError::GeneratorOutOfRange(g));
            }
        }
        let mut members = BTreeSet::from([0usize]);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = parent.mul(x, g);
                if members.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Ok(Self {
            parent: Arc::clone(parent),
            members: members.into_iter().collect(),
        })
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        Self {
            parent: Arc::clone(parent),
            members: vec![0],
        }
    }

    pub fn full(parent: &Arc<FiniteGroup>) -> Self {
        Self {
            parent: Arc::clone(parent),
            members: (0..parent.order()).collect(),
        }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    /// The normalizer `{ g : g H g^-1 = H }`.
    pub fn normalizer(&self) -> Subgroup {
        let g = &self.parent;
        let members: Vec<usize> = (0..g.order())
            .filter(|&x| {
                let xi = g.inverse(x);
                self.members
                    .iter()
                    .all(|&h| self.contains(g.mul(g.mul(x, h), xi)))
            })
            .collect();
        Subgroup {
            parent: Arc::clone(&self.parent),
            members,
        }
    }
}

/// The left coset space `G/H`.
///
/// Cosets are listed with their members sorted, ordered by smallest member;
/// since the identity is element 0, the coset `H` itself is always index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSpace {
    parent: Arc<FiniteGroup>,
    subgroup: Subgroup,
    cosets: Vec<Vec<usize>>,
    rep: Vec<usize>,
}

impl CosetSpace {
    pub fn left_cosets(subgroup: &Subgroup) -> Self {
        let parent = Arc::clone(subgroup.parent());
        let order = parent.order();
        let mut rep = vec![usize::MAX; order];
        let mut cosets = Vec::new();
        for g in 0..order {
            if rep[g] != usize::MAX {
                continue;
            }
            let idx = cosets.len();
            let mut coset: Vec<usize> = subgroup.members().iter().map(|&h| parent.mul(g, h)).collect();
            coset.sort_unstable();
            for &x in &coset {
                rep[x] = idx;
            }
            cosets.push(coset);
        }
        Self {
            parent,
            subgroup: subgroup.clone(),
            cosets,
            rep,
        }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Number of cosets.
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    /// Index of the coset containing element `g`.
    pub fn coset_of(&self, g: usize) -> usize {
        self.rep[g]
    }

    /// The canonical (smallest) member of coset `c`.
    pub fn representative(&self, c: usize) -> usize {
        self.cosets[c][0]
    }

    /// Left translation: the index of the coset `g * (coset c)`.
    pub fn act(&self, g: usize, c: usize) -> usize {
        self.rep[self.parent.mul(g, self.cosets[c][0])]
    }
}
