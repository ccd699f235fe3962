use num_traits::{ToPrimitive, Zero};

use super::group::factorize;
use super::lattice::LatticeMap;
use super::matrix::{Int, IntMatrix};
use super::rational::{rat_matrix, rational_rank};
use super::snf::snf_factors;
use crate::error::Error;

/// Coefficient ring for a reduced computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Rationals,
    Prime(u64),
    PrimePower { p: u64, k: u32 },
}

impl Ring {
    /// Classifies a modulus: 0 is Q, p is F_p, p^k (k ≥ 2) is Z/p^k.
    pub fn from_modulus(modulus: u64) -> Result<Ring, Error> {
        if modulus == 0 {
            return Ok(Ring::Rationals);
        }
        let f = factorize(&Int::from(modulus));
        match f.as_slice() {
            [(p, 1)] => Ok(Ring::Prime(p.to_u64().unwrap())),
            [(p, k)] => Ok(Ring::PrimePower {
                p: p.to_u64().unwrap(),
                k: *k,
            }),
            _ => Err(Error::BadModulus(modulus)),
        }
    }

    pub fn modulus(&self) -> u64 {
        match *self {
            Ring::Rationals => 0,
            Ring::Prime(p) => p,
            Ring::PrimePower { p, k } => p.pow(k),
        }
    }
}

/// Result of reducing a map to a quotient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    /// Matrix rank over the field (`None` over `Z/p^k`, k ≥ 2).
    pub rank: Option<usize>,
    /// `log_p` of the number of elements of the cokernel over `Z/p^k`.
    pub coker_log_order: Option<u64>,
}

/// Rank over Q or F_p, or the cokernel size over `Z/p^k`.
pub fn reduce_ring(f: &LatticeMap, modulus: u64) -> Result<Reduced, Error> {
    match Ring::from_modulus(modulus)? {
        Ring::Rationals => Ok(Reduced {
            rank: Some(rational_rank(&rat_matrix(&f.matrix))),
            coker_log_order: None,
        }),
        Ring::Prime(p) => {
            let r = rank_mod_p(&f.matrix, p);
            Ok(Reduced {
                rank: Some(r),
                coker_log_order: Some((f.target_rank() - r) as u64),
            })
        }
        Ring::PrimePower { p, k } => Ok(Reduced {
            rank: None,
            coker_log_order: Some(coker_log_order_mod(&f.matrix, p, k)),
        }),
    }
}

/// `log_p |coker(m ⊗ Z/p^k)|` from the SNF factors reduced mod p^k.
pub fn coker_log_order_mod(m: &IntMatrix, p: u64, k: u32) -> u64 {
    let factors = snf_factors(m);
    let zero_cols = m.cols() - factors.len();
    let mut total = zero_cols as u64 * k as u64;
    for d in &factors {
        total += valuation(d, p).min(k) as u64;
    }
    total
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(d: &Int, p: u64) -> u32 {
    let p = Int::from(p);
    let mut d = d.clone();
    let mut v = 0;
    while !d.is_zero() && (&d % &p).is_zero() {
        d /= &p;
        v += 1;
    }
    v
}

fn reduce_entries(m: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    let pb = Int::from(p);
    (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .map(|x| {
                    let y = ((x % &pb) + &pb) % &pb;
                    y.to_u64().unwrap()
                })
                .collect()
        })
        .collect()
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime: a^(p-2)
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

/// Row echelon form over F_p; returns (reduced rows, pivot columns).
fn rref_mod_p(mut a: Vec<Vec<u64>>, cols: usize, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        let Some(s) = (pr..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(s, pr);
        let inv = inv_mod(a[pr][c], p);
        for x in a[pr].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        let prow = a[pr].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == pr || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, y) in row.iter_mut().zip(&prow) {
                if *y != 0 {
                    *x = (*x + p - mulmod(f, *y, p)) % p;
                }
            }
        }
        pivots.push(c);
        pr += 1;
    }
    a.truncate(pr);
    (a, pivots)
}

pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    rref_mod_p(reduce_entries(m, p), m.cols(), p).1.len()
}

/// Basis of `{x ∈ F_p^rows : x·m = 0}`, lifted to integer rows in `[0, p)`.
pub fn left_nullspace_mod_p(m: &IntMatrix, p: u64) -> IntMatrix {
    let t = reduce_entries(&m.transpose(), p);
    let n = m.rows();
    let (r, piv) = rref_mod_p(t, n, p);
    let mut out = Vec::new();
    for f in (0..n).filter(|c| !piv.contains(c)) {
        let mut v = vec![0u64; n];
        v[f] = 1;
        for (i, &pc) in piv.iter().enumerate() {
            v[pc] = (p - r[i][f]) % p;
        }
        out.push(v.into_iter().map(Int::from).collect());
    }
    IntMatrix::from_rows(n, out)
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && factorize(&Int::from(p)) == vec![(Int::from(p), 1)]
}
