//! Helpers shared by the integration suites: a pool of small Galois data,
//! deterministic primality testing, and an independent rank-mod-p oracle for
//! cross-checking the exact lattice ranks.

#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;

use cmhodge::{CMGaloisDatum, FiniteGroup, Subgroup};

/// Cyclic group of even order `n` presented by its addition table, with
/// trivial fixing subgroup and conjugation by the unique order-2 element.
pub fn cyclic_datum(n: usize) -> Arc<CMGaloisDatum> {
    assert!(n >= 2 && n % 2 == 0);
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect();
    let group = FiniteGroup::from_table(&table).expect("cyclic tables are groups");
    let fixing = Subgroup::trivial(&group);
    CMGaloisDatum::new(&group, fixing, n / 2).expect("half-turn is a valid conjugation")
}

/// Cyclic datum with a nontrivial fixing subgroup, e.g. order 12 fixed by
/// `{0, 4, 8}` giving a quartic field inside a degree-12 closure.
pub fn cyclic_datum_with_fixing(n: usize, members: &[usize]) -> Arc<CMGaloisDatum> {
    assert!(n >= 2 && n % 2 == 0);
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect();
    let group = FiniteGroup::from_table(&table).expect("cyclic tables are groups");
    let fixing = Subgroup::from_members(&group, members).expect("members form a subgroup");
    CMGaloisDatum::new(&group, fixing, n / 2).expect("half-turn avoids the fixing subgroup")
}

/// Klein four-group (xor on two bits) with conjugation by element 1:
/// the biquadratic field, whose standard CM type is degenerate.
pub fn biquadratic_datum() -> Arc<CMGaloisDatum> {
    let table = vec![
        vec![0, 1, 2, 3],
        vec![1, 0, 3, 2],
        vec![2, 3, 0, 1],
        vec![3, 2, 1, 0],
    ];
    let group = FiniteGroup::from_table(&table).expect("xor table is a group");
    let fixing = Subgroup::trivial(&group);
    CMGaloisDatum::new(&group, fixing, 1).expect("any involution works in an elementary group")
}

/// Elementary abelian group of order 8 (xor on three bits), conjugation by
/// element 1, fixing subgroup given by `members`.
pub fn elementary_datum(members: &[usize]) -> Arc<CMGaloisDatum> {
    let table: Vec<Vec<usize>> = (0..8).map(|a| (0..8).map(|b| a ^ b).collect()).collect();
    let group = FiniteGroup::from_table(&table).expect("xor table is a group");
    let fixing = Subgroup::from_members(&group, members).expect("members form a subgroup");
    CMGaloisDatum::new(&group, fixing, 1).expect("element 1 is central of order 2")
}

/// Dihedral group of order 8 in the ordering e, r, r^2, r^3, s, rs, r^2 s,
/// r^3 s; fixed by {e, s}, conjugation by the half-turn r^2. The resulting
/// quartic field is not normal and its Galois closure has degree 8.
pub fn d4_datum() -> Arc<CMGaloisDatum> {
    let rot = |a: usize, b: usize| (a + b) % 4;
    let mut table = vec![vec![0usize; 8]; 8];
    for a in 0..8 {
        for b in 0..8 {
            let (ar, af) = (a % 4, a / 4);
            let (br, bf) = (b % 4, b / 4);
            table[a][b] = if af == 0 {
                bf * 4 + rot(ar, br)
            } else {
                ((af + bf) % 2) * 4 + rot(ar, 4 - br)
            };
        }
    }
    let group = FiniteGroup::from_table(&table).expect("dihedral table is a group");
    let fixing = Subgroup::from_members(&group, &[0, 4]).expect("{e, s} is a subgroup");
    CMGaloisDatum::new(&group, fixing, 2).expect("the half-turn is central and misses {e, s}")
}

/// Quaternion group of order 8: indices 2*basis + sign with basis order
/// 1, i, j, k; conjugation by -1 (index 1), trivial fixing subgroup.
pub fn quaternion_datum() -> Arc<CMGaloisDatum> {
    // basis_mul[b1][b2] and sign_mul[b1][b2] encode (b1)(b2) = ±basis.
    const BASIS: [[usize; 4]; 4] = [
        [0, 1, 2, 3],
        [1, 0, 3, 2],
        [2, 3, 0, 1],
        [3, 2, 1, 0],
    ];
    const SIGN: [[usize; 4]; 4] = [
        [0, 0, 0, 0],
        [0, 1, 0, 1],
        [0, 1, 1, 0],
        [0, 0, 1, 1],
    ];
    let mut table = vec![vec![0usize; 8]; 8];
    for a in 0..8 {
        for b in 0..8 {
            let (b1, s1) = (a / 2, a % 2);
            let (b2, s2) = (b / 2, b % 2);
            let basis = BASIS[b1][b2];
            let sign = (s1 + s2 + SIGN[b1][b2]) % 2;
            table[a][b] = 2 * basis + sign;
        }
    }
    let group = FiniteGroup::from_table(&table).expect("quaternion table is a group");
    let fixing = Subgroup::trivial(&group);
    CMGaloisDatum::new(&group, fixing, 1).expect("-1 is central of order 2")
}

/// A pool of small data covering degrees 2 through 12, abelian and not,
/// with trivial and nontrivial fixing subgroups.
pub fn datum_pool() -> Vec<Arc<CMGaloisDatum>> {
    vec![
        cyclic_datum(2),
        cyclic_datum(4),
        biquadratic_datum(),
        cyclic_datum(6),
        d4_datum(),
        quaternion_datum(),
        elementary_datum(&[0]),
        elementary_datum(&[0, 2]),
        cyclic_datum(8),
        cyclic_datum(10),
        cyclic_datum(12),
        cyclic_datum_with_fixing(12, &[0, 4, 8]),
    ]
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniformly sampled prime strictly above one million.
pub fn random_large_prime(rng: &mut impl Rng) -> u64 {
    loop {
        let candidate: u64 = rng.gen_range(1_000_001..(1u64 << 31)) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

/// Rank of an integer matrix over the field with `p` elements, by plain
/// Gaussian elimination. Independent of the exact fraction-free elimination
/// used by the library.
pub fn rank_mod_p(rows: &[Vec<i64>], p: u64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| v.rem_euclid(p as i64) as u64)
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot_row) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let inv = powmod(m[rank][col], p - 2, p);
        for c in col..cols {
            m[rank][c] = mulmod(m[rank][c], inv, p);
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for c in col..cols {
                    let sub = mulmod(factor, m[rank][c], p);
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn primality_matches_small_sieve() {
        let primes: Vec<u64> = (2..200).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            &primes[..10],
            &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29],
            "first primes"
        );
        assert!(is_prime_u64(1_000_003));
        assert!(!is_prime_u64(1_000_001));
        assert!(is_prime_u64((1 << 31) - 1));
    }

    #[test]
    fn modular_rank_of_identity_and_singular() {
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(rank_mod_p(&id, 1_000_003), 2);
        let singular = vec![vec![2, 4], vec![1, 2]];
        assert_eq!(rank_mod_p(&singular, 1_000_003), 1);
        let zero = vec![vec![0, 0]];
        assert_eq!(rank_mod_p(&zero, 1_000_003), 0);
    }
}
