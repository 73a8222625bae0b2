//! Torus dimensions attached to a CM Hodge structure.
//!
//! The Mumford–Tate and Hodge groups of a CM structure are subtori of the
//! norm torus of the field, and their dimensions are ranks of explicit
//! integer lattices: the span of the Galois orbit of `phi` (Mumford–Tate)
//! and of `2 phi - n 1` (Hodge, the exponent vector of the circle action).
//! Ranks are computed in exact integer arithmetic; no floating point.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cmfield::{CMType, CmFieldError, ProductDatum};
use crate::hodge::HodgeTypeFn;

/// The integer span of a full Galois orbit of vectors, with its exact rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitLattice {
    generators: Vec<Vec<i64>>,
    rank: usize,
}

impl OrbitLattice {
    /// Deduplicated, lexicographically sorted generators.
    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// Orbit `{g . v}` of an integer vector under a position action, where
/// `(g . v)(s) = v(g^{-1} s)`; deduplicated and sorted.
fn vector_orbit(
    order: usize,
    inverse: impl Fn(usize) -> usize,
    act: impl Fn(usize, usize) -> usize,
    v: &[i64],
) -> Vec<Vec<i64>> {
    let mut orbit = BTreeSet::new();
    for g in 0..order {
        let g_inv = inverse(g);
        let moved: Vec<i64> = (0..v.len()).map(|s| v[act(g_inv, s)]).collect();
        orbit.insert(moved);
    }
    orbit.into_iter().collect()
}

/// Exact rank over the rationals by fraction-free (Bareiss) elimination.
fn exact_rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let nrows = m.len();
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Orbit lattice of the values of `phi` under the Galois action; its rank is
/// the Mumford–Tate dimension.
pub fn mt_lattice(phi: &HodgeTypeFn) -> OrbitLattice {
    let datum = phi.datum();
    let group = datum.group();
    let generators = vector_orbit(
        group.order(),
        |g| group.inverse(g),
        |g, s| datum.act(g, s),
        phi.values(),
    );
    let rank = exact_rank(&generators);
    OrbitLattice { generators, rank }
}

/// Orbit lattice of `2 phi - n 1`, the exponent vector of the circle action;
/// its rank is the Hodge-group dimension.
pub fn hodge_lattice(phi: &HodgeTypeFn) -> OrbitLattice {
    let datum = phi.datum();
    let group = datum.group();
    let circle: Vec<i64> = phi.values().iter().map(|&v| 2 * v - phi.weight()).collect();
    let generators = vector_orbit(
        group.order(),
        |g| group.inverse(g),
        |g, s| datum.act(g, s),
        &circle,
    );
    let rank = exact_rank(&generators);
    OrbitLattice { generators, rank }
}

/// Dimension of the Mumford–Tate group of the structure.
pub fn mt_dimension(phi: &HodgeTypeFn) -> usize {
    mt_lattice(phi).rank()
}

/// Dimension of the Hodge group of the structure.
pub fn hodge_dimension(phi: &HodgeTypeFn) -> usize {
    hodge_lattice(phi).rank()
}

/// A CM abelian variety is nondegenerate when its Hodge group is as large as
/// possible: dimension equal to half the field degree.
pub fn is_nondegenerate(cm_type: &CMType) -> bool {
    let chi = HodgeTypeFn::from_cm_type(cm_type);
    hodge_dimension(&chi) == cm_type.datum().degree() / 2
}

/// Hodge dimension of a product of CM abelian varieties, one CM type per
/// factor, computed over the product Galois group acting blockwise.
pub fn product_hodge_dimension(
    product: &ProductDatum,
    types: &[CMType],
) -> Result<usize, CmFieldError> {
    let indicator = product.combined_indicator(types)?;
    let circle: Vec<i64> = indicator.iter().map(|&v| 2 * v - 1).collect();
    let group = product.group();
    let generators = vector_orbit(
        group.order(),
        |g| group.inverse(g),
        |g, s| product.act(g, s),
        &circle,
    );
    Ok(exact_rank(&generators))
}

/// Whether the Hodge group of the product splits as the product of the
/// factor Hodge groups: combined dimension equal to the sum of factor
/// dimensions. Under the linear-disjointness hypothesis encoded by the
/// product datum this always holds.
pub fn product_factorization_check(
    product: &ProductDatum,
    types: &[CMType],
) -> Result<bool, CmFieldError> {
    let combined = product_hodge_dimension(product, types)?;
    let separate: usize = types
        .iter()
        .map(|t| hodge_dimension(&HodgeTypeFn::from_cm_type(t)))
        .sum();
    Ok(combined == separate)
}
