//! Shared fixtures for unit tests: small groups and Galois data that the
//! worked examples keep coming back to.

use std::sync::Arc;

use crate::cmfield::CMGaloisDatum;
use crate::groups::{FiniteGroup, Subgroup};

pub(crate) fn cyclic(n: usize) -> Arc<FiniteGroup> {
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect();
    FiniteGroup::from_table(&table).unwrap()
}

/// Degree-2 datum: Galois group C2, trivial fixing subgroup, conjugation the
/// nonidentity element.
pub(crate) fn imaginary_quadratic() -> Arc<CMGaloisDatum> {
    let g = cyclic(2);
    let h = Subgroup::trivial(&g);
    CMGaloisDatum::new(&g, h, 1).unwrap()
}

/// Degree-4 datum with cyclic Galois group C4 and conjugation the square of
/// the generator.
pub(crate) fn cyclic_quartic() -> Arc<CMGaloisDatum> {
    let g = cyclic(4);
    let h = Subgroup::trivial(&g);
    CMGaloisDatum::new(&g, h, 2).unwrap()
}

/// Degree-6 datum over C6 with conjugation the order-2 element.
pub(crate) fn cyclic_sextic() -> Arc<CMGaloisDatum> {
    let g = cyclic(6);
    let h = Subgroup::trivial(&g);
    CMGaloisDatum::new(&g, h, 3).unwrap()
}

/// Dihedral group of order 8 with elements ordered
/// `e, r, r^2, r^3, s, rs, r^2 s, r^3 s`.
pub(crate) fn d4_group() -> Arc<FiniteGroup> {
    let idx = |rot: usize, refl: usize| refl * 4 + rot % 4;
    let table: Vec<Vec<usize>> = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (ar, af) = (a % 4, a / 4);
                    let (br, bf) = (b % 4, b / 4);
                    if af == 0 {
                        idx(ar + br, bf)
                    } else {
                        idx(ar + 4 - br, (af + bf) % 2)
                    }
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&table).unwrap()
}

/// Degree-4 datum whose Galois closure has group D4: fixing subgroup
/// `{e, s}`, conjugation `r^2`.
pub(crate) fn d4_quartic() -> Arc<CMGaloisDatum> {
    let g = d4_group();
    let h = Subgroup::from_members(&g, &[0, 4]).unwrap();
    CMGaloisDatum::new(&g, h, 2).unwrap()
}

/// Degree-4 datum over the Klein four-group (elements xor-composed), with
/// conjugation the element 1.
pub(crate) fn biquadratic() -> Arc<CMGaloisDatum> {
    let table: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    let g = FiniteGroup::from_table(&table).unwrap();
    let h = Subgroup::trivial(&g);
    CMGaloisDatum::new(&g, h, 1).unwrap()
}
