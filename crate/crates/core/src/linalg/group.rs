use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::Int;
use crate::error::Error;

/// A finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with
/// `1 < d_1 | d_2 | … | d_k`. The canonical form makes `==` an isomorphism test.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    #[serde(with = "bigint_list")]
    pub invariant_factors: Vec<Int>,
}

impl FgAbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    /// Builds the group `Z^free_rank ⊕ ⊕ Z/c` from arbitrary cyclic orders.
    /// Orders 1 are dropped; 0 contributes a free summand.
    pub fn from_cyclic<I: IntoIterator<Item = Int>>(free_rank: usize, orders: I) -> Self {
        let mut free = free_rank;
        let mut prime_powers: BTreeMap<Int, Vec<u32>> = BTreeMap::new();
        for c in orders {
            let c = c.abs();
            if c.is_zero() {
                free += 1;
                continue;
            }
            for (p, e) in factorize(&c) {
                prime_powers.entry(p).or_default().push(e);
            }
        }
        Self::from_primary(free, prime_powers)
    }

    /// Builds the group from its primary decomposition: for each prime, the
    /// list of exponents of its cyclic `p^e` summands.
    pub fn from_primary(free_rank: usize, primary: BTreeMap<Int, Vec<u32>>) -> Self {
        let len = primary.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![Int::one(); len];
        for (p, mut exps) in primary {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            // largest exponents go to the last (largest) factors
            for (i, e) in exps.into_iter().enumerate() {
                let slot = len - 1 - i;
                factors[slot] *= num_traits::pow(p.clone(), e as usize);
            }
        }
        factors.retain(|f| !f.is_one());
        Self {
            free_rank,
            invariant_factors: factors,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn torsion(&self) -> Self {
        Self {
            free_rank: 0,
            invariant_factors: self.invariant_factors.clone(),
        }
    }

    pub fn torsion_order(&self) -> Int {
        self.invariant_factors.iter().product()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_cyclic(
            self.free_rank + other.free_rank,
            self.invariant_factors
                .iter()
                .chain(&other.invariant_factors)
                .cloned(),
        )
    }

    /// Primary decomposition: prime → exponents in decreasing order.
    pub fn primary(&self) -> BTreeMap<Int, Vec<u32>> {
        let mut out: BTreeMap<Int, Vec<u32>> = BTreeMap::new();
        for f in &self.invariant_factors {
            for (p, e) in factorize(f) {
                out.entry(p).or_default().push(e);
            }
        }
        for v in out.values_mut() {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
        out
    }

    /// Exponents of the `p`-primary part, decreasing.
    pub fn p_part(&self, p: u64) -> Vec<u32> {
        let p = Int::from(p);
        self.primary().remove(&p).unwrap_or_default()
    }

    /// Dimension of `G ⊗ F_p`.
    pub fn rank_mod(&self, p: u64) -> usize {
        self.free_rank + self.invariant_factors.iter().filter(|f| f.is_multiple_of(&Int::from(p))).count()
    }

    /// Primes dividing the torsion order.
    pub fn torsion_primes(&self) -> Vec<u64> {
        self.primary().keys().filter_map(|p| p.to_u64()).collect()
    }

    /// Paper-style primary rendering, e.g. `Z^331 + Z_2^26 + Z_4`.
    pub fn primary_string(&self) -> String {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(power("Z", self.free_rank));
        }
        for (p, exps) in self.primary() {
            let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
            for e in exps {
                *counts.entry(e).or_default() += 1;
            }
            for (e, k) in counts {
                let q = num_traits::pow(p.clone(), e as usize);
                parts.push(power(&format!("Z_{q}"), k));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Invariant-factor rendering, e.g. `Z^2 + Z/2 + Z/6`.
    pub fn invariant_string(&self) -> String {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(power("Z", self.free_rank));
        }
        parts.extend(self.invariant_factors.iter().map(|f| format!("Z/{f}")));
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn power(base: &str, k: usize) -> String {
    if k == 1 {
        base.to_string()
    } else {
        format!("{base}^{k}")
    }
}

/// Trial-division factorization. Torsion orders met in practice are small.
pub fn factorize(n: &Int) -> Vec<(Int, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2u32);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

impl FromStr for FgAbelianGroup {
    type Err = Error;

    /// Parses `0`, `Z`, `Z^k`, `Z_q`, `Z_q^k` joined by `+`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad group `{s}`"));
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut free = 0;
        let mut cyclic = Vec::new();
        for term in s.split('+').map(str::trim) {
            let (base, exp) = match term.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<usize>().map_err(|_| bad())?),
                None => (term, 1),
            };
            if base == "Z" {
                free += exp;
            } else if let Some(q) = base.strip_prefix("Z_").or_else(|| base.strip_prefix("Z/")) {
                let q: Int = q.parse().map_err(|_| bad())?;
                if q < Int::from(2) {
                    return Err(bad());
                }
                cyclic.extend(std::iter::repeat_n(q, exp));
            } else {
                return Err(bad());
            }
        }
        Ok(Self::from_cyclic(free, cyclic))
    }
}

impl fmt::Debug for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.primary_string())
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.primary_string())
    }
}

pub(crate) mod bigint_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(free: usize, cyc: &[i64]) -> FgAbelianGroup {
        FgAbelianGroup::from_cyclic(free, cyc.iter().map(|&c| Int::from(c)))
    }

    #[test]
    fn canonical_form() {
        let a = g(0, &[2, 3]);
        assert_eq!(a.invariant_factors, vec![Int::from(6)]);
        let b = g(1, &[4, 2, 1, 6]);
        assert_eq!(b.invariant_factors, vec![Int::from(2), Int::from(2), Int::from(12)]);
        assert_eq!(b.free_rank, 1);
        assert_eq!(g(0, &[0, 5]), g(1, &[5]));
    }

    #[test]
    fn rendering() {
        let mut cyc = vec![2; 26];
        cyc.push(4);
        let h = g(331, &cyc);
        assert_eq!(h.primary_string(), "Z^331 + Z_2^26 + Z_4");
        assert_eq!(g(0, &[]).primary_string(), "0");
        assert_eq!(g(2, &[2, 6]).invariant_string(), "Z^2 + Z/2 + Z/6");
    }

    #[test]
    fn mod_p_rank() {
        let h = g(24, &[5, 5]);
        assert_eq!(h.rank_mod(5), 26);
        assert_eq!(h.rank_mod(2), 24);
        assert_eq!(h.torsion_primes(), vec![5]);
    }

    #[test]
    fn parse_rendered() {
        let h: FgAbelianGroup = "Z^331 + Z_2^26 + Z_4".parse().unwrap();
        assert_eq!(h.free_rank, 331);
        assert_eq!(h.primary_string(), "Z^331 + Z_2^26 + Z_4");
        assert_eq!("0".parse::<FgAbelianGroup>().unwrap(), FgAbelianGroup::zero());
        assert_eq!("Z".parse::<FgAbelianGroup>().unwrap(), FgAbelianGroup::free(1));
        assert!("Q^2".parse::<FgAbelianGroup>().is_err());
        assert!("Z_1".parse::<FgAbelianGroup>().is_err());
    }

    #[test]
    fn serde_round_trip() {
        let h = g(3, &[2, 4]);
        let s = serde_json::to_string(&h).unwrap();
        let back: FgAbelianGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(h, back);
    }
}
