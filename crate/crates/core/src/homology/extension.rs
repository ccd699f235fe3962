//! Resolving `0 → coker φ_1 → H_0 → ker φ_0 → 0` one prime at a time.
//!
//! The p-part `T` of `Torsion(H_0)` contains `A = Torsion(coker φ_1)_p`, maps
//! onto a subgroup of `C = Torsion(ker φ_0)_p` with kernel `A`, and has as
//! many cyclic summands as `H_0 ⊗ F_p` has beyond the free rank. Candidates
//! are then separated by counting `coker φ_1` over `Z/p^k`:
//!
//! `log_p |coker_{Z/p^k} φ_1| = k·l + Σ min(t_i, k) − Σ min(c_i, k)`.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{FgAbelianGroup, Int};

/// The data of one extension problem.
#[derive(Clone, Debug)]
pub struct ExtensionProblem {
    /// `Torsion(coker φ_1)`.
    pub sub_torsion: FgAbelianGroup,
    /// Free rank `l` of `coker φ_1`.
    pub sub_free_rank: usize,
    /// `Torsion(ker φ_0)`.
    pub quotient_torsion: FgAbelianGroup,
    /// Number of cyclic `p`-summands of `Torsion(H_0)` where known.
    pub torsion_rank: BTreeMap<u64, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionStep {
    pub p: u64,
    pub k: u32,
    pub observed: u64,
    pub candidates_before: usize,
    pub candidates_after: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionTrace {
    pub steps: Vec<ExtensionStep>,
    /// Surviving p-parts (exponent lists) for primes left ambiguous.
    pub unresolved: BTreeMap<u64, Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolution {
    Resolved(FgAbelianGroup),
    /// Every combination of the surviving p-parts is still possible.
    Partial(Vec<FgAbelianGroup>),
}

/// Prediction of `log_p |coker_{Z/p^k} φ_1|` for the candidate `t`.
pub fn predicted_count(t: &[u32], c: &[u32], l: usize, k: u32) -> i64 {
    let m = |xs: &[u32]| xs.iter().map(|&x| x.min(k) as i64).sum::<i64>();
    k as i64 * l as i64 + m(t) - m(c)
}

/// Decreasing exponent lists `t` that contain `a`, have `len` parts and
/// respect the order and exponent bounds.
pub fn candidates(a: &[u32], c: &[u32], l: usize, len: Option<usize>) -> Vec<Vec<u32>> {
    let size_a: u32 = a.iter().sum();
    let size_c: u32 = c.iter().sum();
    let top = a.first().copied().unwrap_or(0) + c.first().copied().unwrap_or(0);
    let lens: Vec<usize> = match len {
        Some(r) => vec![r],
        None => (a.len()..=a.len() + c.len()).collect(),
    };
    let mut out = Vec::new();
    for r in lens {
        if r < a.len() || r > a.len() + c.len() {
            continue;
        }
        let mut cur = Vec::with_capacity(r);
        fill(&mut cur, r, a, top, &mut |t| {
            let s: u32 = t.iter().sum();
            let ok = if l == 0 { s == size_a + size_c } else { s >= size_a && s <= size_a + size_c };
            if ok {
                out.push(t.to_vec());
            }
        });
    }
    out
}

fn fill(cur: &mut Vec<u32>, r: usize, a: &[u32], top: u32, emit: &mut dyn FnMut(&[u32])) {
    let i = cur.len();
    if i == r {
        emit(cur);
        return;
    }
    let hi = cur.last().copied().unwrap_or(top).min(top);
    let lo = a.get(i).copied().unwrap_or(0).max(1);
    for e in (lo..=hi).rev() {
        cur.push(e);
        fill(cur, r, a, top, emit);
        cur.pop();
    }
}

fn group_of(parts: &BTreeMap<u64, Vec<u32>>) -> FgAbelianGroup {
    FgAbelianGroup::from_primary(0, parts.iter().map(|(p, e)| (Int::from(*p), e.clone())).collect())
}

/// Determines `Torsion(H_0)`. `count(p, k)` returns the observed
/// `log_p |coker_{Z/p^k} φ_1|`, or `None` when it cannot be computed.
pub fn resolve_extension(
    problem: &ExtensionProblem,
    mut count: impl FnMut(u64, u32) -> Result<Option<u64>>,
) -> Result<(Resolution, ExtensionTrace)> {
    let a_all = problem.sub_torsion.primary();
    let c_all = problem.quotient_torsion.primary();
    let mut primes: Vec<u64> = a_all.keys().chain(c_all.keys()).map(|p| p.to_u64().expect("small prime")).collect();
    primes.sort_unstable();
    primes.dedup();

    let mut trace = ExtensionTrace::default();
    let mut fixed: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    let mut open: BTreeMap<u64, Vec<Vec<u32>>> = BTreeMap::new();
    for p in primes {
        let a = a_all.get(&Int::from(p)).cloned().unwrap_or_default();
        let c = c_all.get(&Int::from(p)).cloned().unwrap_or_default();
        if c.is_empty() {
            fixed.insert(p, a);
            continue;
        }
        let l = problem.sub_free_rank;
        let mut cands = candidates(&a, &c, l, problem.torsion_rank.get(&p).copied());
        if cands.is_empty() {
            return Err(Error::Consistency(format!("no p-group fits the extension at p = {p}")));
        }
        let top = a.first().copied().unwrap_or(0) + c[0];
        let mut k = 1;
        while cands.len() > 1 && k <= top {
            let Some(obs) = count(p, k)? else { break };
            let before = cands.len();
            cands.retain(|t| predicted_count(t, &c, l, k) == obs as i64);
            trace.steps.push(ExtensionStep {
                p,
                k,
                observed: obs,
                candidates_before: before,
                candidates_after: cands.len(),
            });
            if cands.is_empty() {
                return Err(Error::Consistency(format!(
                    "no candidate matches the Z/{p}^{k} count {obs}"
                )));
            }
            k += 1;
        }
        if cands.len() == 1 {
            fixed.insert(p, cands.pop().unwrap());
        } else {
            open.insert(p, cands);
        }
    }

    if open.is_empty() {
        return Ok((Resolution::Resolved(group_of(&fixed)), trace));
    }
    trace.unresolved = open.clone();
    let mut combos = vec![fixed];
    for (p, cands) in open {
        combos = combos
            .into_iter()
            .flat_map(|base| {
                cands.iter().map(move |t| {
                    let mut m = base.clone();
                    m.insert(p, t.clone());
                    m
                })
            })
            .collect();
    }
    Ok((Resolution::Partial(combos.iter().map(group_of).collect()), trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbelianGroup {
        s.parse().unwrap()
    }

    /// `log_p |E ⊗ Z/p^k|` by listing the elements of `E / p^k E`.
    fn brute_tensor_log(exps: &[u32], p: u64, k: u32) -> u64 {
        let q = p.pow(k);
        let mut size = 1u64;
        for &e in exps {
            let order = p.pow(e);
            let sub: std::collections::BTreeSet<u64> = (0..order).map(|y| q * y % order).collect();
            size *= order / sub.len() as u64;
        }
        let mut log = 0;
        while size > 1 {
            size /= p;
            log += 1;
        }
        log
    }

    /// Both extensions of `Z_2` by `Z_2`, with `φ_1 = ×2` on `Z`.
    fn synthetic() -> ExtensionProblem {
        ExtensionProblem {
            sub_torsion: g("Z_2"),
            sub_free_rank: 0,
            quotient_torsion: g("Z_2"),
            torsion_rank: BTreeMap::new(),
        }
    }

    #[test]
    fn both_extensions_are_candidates() {
        let c = candidates(&[1], &[1], 0, None);
        assert_eq!(c, vec![vec![2], vec![1, 1]]);
    }

    #[test]
    fn prediction_matches_brute_force() {
        for t in [vec![2u32], vec![1, 1], vec![3, 1], vec![2, 2, 1]] {
            for k in 1..=3 {
                let brute = brute_tensor_log(&t, 2, k) as i64 - brute_tensor_log(&[1], 2, k) as i64;
                assert_eq!(predicted_count(&t, &[1], 0, k), brute, "{t:?} k={k}");
            }
        }
    }

    #[test]
    fn synthetic_extension_selects_by_count() {
        // coker(×2 ⊗ Z/2) = Z/2 has one F_2 dimension.
        let (res, trace) = resolve_extension(&synthetic(), |_, _| Ok(Some(1))).unwrap();
        assert_eq!(res, Resolution::Resolved(g("Z_2^2")));
        assert_eq!(trace.steps.len(), 1);
        let (res, _) = resolve_extension(&synthetic(), |_, _| Ok(Some(0))).unwrap();
        assert_eq!(res, Resolution::Resolved(g("Z_4")));
    }

    #[test]
    fn missing_counts_leave_it_partial() {
        let (res, trace) = resolve_extension(&synthetic(), |_, _| Ok(None)).unwrap();
        assert_eq!(res, Resolution::Partial(vec![g("Z_4"), g("Z_2^2")]));
        assert_eq!(trace.unresolved[&2].len(), 2);
    }

    #[test]
    fn known_rank_prunes_candidates() {
        let mut p = synthetic();
        p.torsion_rank.insert(2, 1);
        let (res, trace) = resolve_extension(&p, |_, _| panic!("not needed")).unwrap();
        assert_eq!(res, Resolution::Resolved(g("Z_4")));
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn dual_shape_needs_the_z4_count() {
        // A = Z_2^13, C = Z_2^15, 27 summands: Z_2^26 + Z_4 or Z_2^27.
        let p = ExtensionProblem {
            sub_torsion: g("Z_2^13"),
            sub_free_rank: 5,
            quotient_torsion: g("Z_2^15"),
            torsion_rank: [(2, 27)].into_iter().collect(),
        };
        let c = vec![1u32; 15];
        let truth = {
            let mut t = vec![2u32];
            t.extend(vec![1; 26]);
            t
        };
        let (res, trace) =
            resolve_extension(&p, |_, k| Ok(Some(predicted_count(&truth, &c, 5, k) as u64))).unwrap();
        assert_eq!(res, Resolution::Resolved(g("Z_2^26 + Z_4")));
        assert_eq!(trace.steps.last().unwrap().k, 2);
    }

    #[test]
    fn coprime_parts_split_off() {
        let p = ExtensionProblem {
            sub_torsion: g("Z_3"),
            sub_free_rank: 0,
            quotient_torsion: FgAbelianGroup::zero(),
            torsion_rank: BTreeMap::new(),
        };
        let (res, _) = resolve_extension(&p, |_, _| unreachable!()).unwrap();
        assert_eq!(res, Resolution::Resolved(g("Z_3")));
    }
}
