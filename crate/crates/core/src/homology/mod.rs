//! Integral homology `H_k(Γ; C^n)` of the singular complex, its reductions
//! mod p, Euler characteristic and K-theory.

pub mod codim2;
pub mod codim3;
pub mod corrected;
pub mod extension;
pub mod maps;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ring::is_prime;
use crate::linalg::{binomial, FgAbelianGroup};
pub use crate::scheme::catalog::ModularCount;
use crate::singular::SingularComplex;

pub use codim2::Codim2;
pub use codim3::Codim3;
pub use corrected::{corrected_ranks, euler_count, CorrectedRanks};
pub use extension::{resolve_extension, ExtensionProblem, ExtensionTrace, Resolution};
pub use maps::{build_epsilon, Epsilon};

/// Primes always checked besides those dividing a computed torsion order.
pub const DEFAULT_PRIMES: [u64; 4] = [2, 3, 5, 7];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Complete,
    /// `H_0` is one of `candidates`; `groups[0]` holds the first.
    Partial { candidates: Vec<FgAbelianGroup> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t1_prime: Option<FgAbelianGroup>,
    pub t1_double_prime: Option<FgAbelianGroup>,
    pub t0_prime: Option<FgAbelianGroup>,
    /// `coker β^α_1` for each plane class (codimension 3).
    pub plane_cokers: Vec<FgAbelianGroup>,
    pub coker_gamma1: Option<FgAbelianGroup>,
    /// `log_p |coker φ''_1 ⊗ Z/p^k|` for each count used by the extension search.
    pub modular_counts: Vec<ModularCount>,
    pub extension: Option<ExtensionTrace>,
    pub corrected: Option<CorrectedRanks>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyResult {
    pub d: usize,
    pub n: usize,
    /// `H_0 … H_d`.
    pub groups: Vec<FgAbelianGroup>,
    /// `D_k`.
    pub ranks: Vec<usize>,
    /// `D_k^p`.
    pub modp_ranks: BTreeMap<u64, Vec<usize>>,
    /// `T_k^p`.
    pub torsion_ranks: BTreeMap<u64, Vec<usize>>,
    pub euler: i64,
    pub ktheory: Option<(FgAbelianGroup, FgAbelianGroup)>,
    pub status: Status,
    pub diagnostics: Diagnostics,
}

/// The codimension-specific assembly.
#[derive(Clone, Debug)]
pub enum MapAssembly {
    Codim1 { d: usize, points: usize },
    Codim2(Box<Codim2>),
    Codim3(Box<Codim3>),
}

impl MapAssembly {
    pub fn new(complex: &SingularComplex, d: usize) -> Result<Self> {
        match complex.n {
            1 => Ok(MapAssembly::Codim1 {
                d,
                points: complex.count(0),
            }),
            2 => Ok(MapAssembly::Codim2(Box::new(Codim2::assemble(complex, d)?))),
            3 if d == 3 => Ok(MapAssembly::Codim3(Box::new(Codim3::assemble(complex)?))),
            n => Err(Error::Unsupported(format!("codimension {n} with d = {d}"))),
        }
    }

    /// `dim_{F_p} H_k`.
    pub fn modp_ranks(&self, p: u64) -> Vec<usize> {
        match self {
            MapAssembly::Codim1 { d, points } => codim1_ranks(*d, *points),
            MapAssembly::Codim2(a) => a.modp_ranks(p),
            MapAssembly::Codim3(a) => a.modp_ranks(p),
        }
    }
}

fn codim1_ranks(d: usize, points: usize) -> Vec<usize> {
    (0..=d)
        .map(|k| if k == 0 { points + d } else { binomial(d + 1, k + 1) })
        .collect()
}

/// Options for [`compute`].
#[derive(Clone, Debug, Default)]
pub struct ComputeOptions {
    /// Extra primes for `D_k^p`; [`DEFAULT_PRIMES`] and torsion primes are always added.
    pub primes: Vec<u64>,
}

/// `T_k^p = D_k^p − D_k − T_{k−1}^p`.
pub fn torsion_ranks(d: &[usize], dp: &[usize], p: u64) -> Result<Vec<usize>> {
    if d.len() != dp.len() {
        return Err(Error::Consistency("rank lists of different length".into()));
    }
    let mut out = Vec::with_capacity(d.len());
    let mut prev = 0i64;
    for (k, (&a, &b)) in d.iter().zip(dp).enumerate() {
        let t = b as i64 - a as i64 - prev;
        if t < 0 {
            return Err(Error::NegativeTorsionRank { k, p });
        }
        out.push(t as usize);
        prev = t;
    }
    Ok(out)
}

/// `K⁰ = ⊕ H_{d−2r}`, `K¹ = ⊕ H_{d−2r−1}`.
pub fn ktheory(groups: &[FgAbelianGroup], d: usize) -> Result<(FgAbelianGroup, FgAbelianGroup)> {
    if d > 3 {
        return Err(Error::KTheoryDimension(d));
    }
    let mut k0 = FgAbelianGroup::zero();
    let mut k1 = FgAbelianGroup::zero();
    for (i, g) in groups.iter().enumerate().take(d + 1) {
        // H_i = H^{d−i}
        if (d - i).is_multiple_of(2) {
            k0 = k0.direct_sum(g);
        } else {
            k1 = k1.direct_sum(g);
        }
    }
    Ok((k0, k1))
}

/// Violations of the torsion band: no torsion for `s ≥ (n−1)d/n` and
/// `H_s = Z^{C(n+d, d−s)}` for `s > (n−1)d/n`. Empty when all hold.
pub fn torsion_band_check(groups: &[FgAbelianGroup], d: usize, n: usize) -> Vec<String> {
    let mut out = Vec::new();
    let bound = (n - 1) * d; // compare s·n against (n−1)d
    for (s, g) in groups.iter().enumerate() {
        if s * n >= bound && !g.torsion().is_trivial() {
            out.push(format!("H_{s} = {g} has torsion at or above the band"));
        }
        if s * n > bound {
            let expected = FgAbelianGroup::free(binomial(n + d, d - s));
            if *g != expected {
                out.push(format!("H_{s} = {g}, expected {expected}"));
            }
        }
    }
    out
}

/// Runs the full computation for a singular complex of a `d`-dimensional tiling.
pub fn compute(complex: &SingularComplex, d: usize, opts: &ComputeOptions) -> Result<HomologyResult> {
    let assembly = MapAssembly::new(complex, d)?;
    let mut diagnostics = Diagnostics::default();
    let mut status = Status::Complete;

    let groups: Vec<FgAbelianGroup> = match &assembly {
        MapAssembly::Codim1 { d, points } => codim1_ranks(*d, *points).into_iter().map(FgAbelianGroup::free).collect(),
        MapAssembly::Codim2(a) => a.groups(),
        MapAssembly::Codim3(a) => {
            let int = a.integral()?;
            diagnostics.t1_prime = Some(int.t1_prime.clone());
            diagnostics.t1_double_prime = Some(int.t1_double_prime.clone());
            diagnostics.t0_prime = Some(int.t0_prime.clone());
            diagnostics.plane_cokers = int.plane_cokers.clone();
            diagnostics.coker_gamma1 = Some(int.coker_gamma1.clone());
            diagnostics.corrected = Some(corrected_ranks(complex)?);

            let sub = int.t1_prime.direct_sum(&int.t1_double_prime);
            let torsion = if int.t0_prime.is_trivial() {
                sub
            } else {
                let torsion_rank = int
                    .t0_prime
                    .torsion_primes()
                    .into_iter()
                    .map(|p| {
                        let dp = a.modp_ranks(p)[0];
                        (p, dp.saturating_sub(int.d0))
                    })
                    .collect();
                let problem = ExtensionProblem {
                    sub_torsion: sub,
                    sub_free_rank: int.coker_phi1_free,
                    quotient_torsion: int.t0_prime.clone(),
                    torsion_rank,
                };
                let mut counts = Vec::new();
                let (res, trace) = resolve_extension(&problem, |p, k| {
                    let c = a.modular_count(p, k);
                    if c.is_some() {
                        counts.push(ModularCount {
                            p,
                            k,
                            log: a.modular_double_prime(p, k),
                        });
                    }
                    Ok(c)
                })?;
                diagnostics.modular_counts = counts;
                diagnostics.extension = Some(trace);
                match res {
                    Resolution::Resolved(t) => t,
                    Resolution::Partial(cands) => {
                        let free = FgAbelianGroup::free(int.d0);
                        let cands: Vec<_> = cands.iter().map(|t| free.direct_sum(t)).collect();
                        let first = cands[0].torsion();
                        status = Status::Partial { candidates: cands };
                        first
                    }
                }
            };
            let mut g = vec![FgAbelianGroup::free(int.d0).direct_sum(&torsion)];
            g.extend(int.groups_above_zero);
            g
        }
    };

    let ranks: Vec<usize> = groups.iter().map(|g| g.free_rank).collect();
    let euler = ranks
        .iter()
        .enumerate()
        .map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) })
        .sum();

    let mut primes: BTreeSet<u64> = DEFAULT_PRIMES.into_iter().collect();
    primes.extend(opts.primes.iter().copied());
    for g in &groups {
        primes.extend(g.torsion_primes());
    }
    if let Some(bad) = primes.iter().find(|p| !is_prime(**p)) {
        return Err(Error::BadModulus(*bad));
    }
    let modp: Vec<(u64, Vec<usize>)> = primes
        .into_par_iter()
        .map(|p| (p, assembly.modp_ranks(p)))
        .collect();
    let mut modp_ranks = BTreeMap::new();
    let mut torsion = BTreeMap::new();
    for (p, dp) in modp {
        torsion.insert(p, torsion_ranks(&ranks, &dp, p)?);
        modp_ranks.insert(p, dp);
    }

    let ktheory = if d <= 3 { Some(ktheory(&groups, d)?) } else { None };
    Ok(HomologyResult {
        d,
        n: complex.n,
        groups,
        ranks,
        modp_ranks,
        torsion_ranks: torsion,
        euler,
        ktheory,
        status,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn torsion_ranks_recursion() {
        assert_eq!(torsion_ranks(&[3, 4], &[3, 4], 2).unwrap(), vec![0, 0]);
        assert_eq!(torsion_ranks(&[24, 5, 1], &[26, 7, 1], 5).unwrap(), vec![2, 0, 0]);
        assert!(matches!(
            torsion_ranks(&[2, 2], &[1, 2], 3),
            Err(Error::NegativeTorsionRank { k: 0, p: 3 })
        ));
    }

    #[test]
    fn ktheory_of_ttt_and_fibonacci() {
        let ttt = [g("Z^24 + Z_5^2"), g("Z^5"), g("Z")];
        assert_eq!(ktheory(&ttt, 2).unwrap(), (g("Z^25 + Z_5^2"), g("Z^5")));
        let fib = [g("Z^2"), g("Z")];
        assert_eq!(ktheory(&fib, 1).unwrap(), (g("Z"), g("Z^2")));
        assert!(matches!(ktheory(&ttt, 4), Err(Error::KTheoryDimension(4))));
    }

    #[test]
    fn codim1_formula() {
        assert_eq!(codim1_ranks(1, 1), vec![2, 1]);
        assert_eq!(codim1_ranks(1, 3), vec![4, 1]);
        assert_eq!(codim1_ranks(2, 1), vec![3, 3, 1]);
    }

    #[test]
    fn band_detects_violations() {
        assert!(torsion_band_check(&[g("Z^8"), g("Z^5"), g("Z")], 2, 2).is_empty());
        assert_eq!(torsion_band_check(&[g("Z^8"), g("Z^5 + Z_2"), g("Z")], 2, 2).len(), 1);
        assert_eq!(torsion_band_check(&[g("Z^8"), g("Z^5"), g("Z^2")], 2, 2).len(), 1);
        assert!(torsion_band_check(&[g("Z^2 + Z_2"), g("Z")], 1, 1).len() == 1);
    }
}
