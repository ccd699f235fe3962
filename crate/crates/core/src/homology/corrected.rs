//! Closed-form rational ranks for codimension 3, evaluated from orbit counts
//! and three lattice rank terms, without assembling the homology.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{binomial, compound, kernel_matrix, IntMatrix, Lattice};
use crate::singular::SingularComplex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectedRanks {
    /// `D_0 … D_3`.
    pub ranks: Vec<usize>,
    /// The combinatorial Euler characteristic.
    pub euler: i64,
}

fn span_rank(rows: &IntMatrix) -> usize {
    if rows.rows() == 0 {
        0
    } else {
        Lattice::span(rows).rank()
    }
}

/// `R_s` for the complex.
fn r_term(complex: &SingularComplex, s: usize) -> usize {
    let n = complex.lattice_rank;
    let nu = complex.nu;
    let lines = &complex.levels[1];
    let planes = &complex.levels[2];

    let mut planes_rows = IntMatrix::zeros(0, binomial(n, s + 2));
    for a in planes {
        planes_rows = planes_rows.vstack(&compound(a.stabilizer.basis(), s + 2));
    }
    let first = span_rank(&planes_rows);

    let line_block = |t: usize| compound(lines[t].stabilizer.basis(), s + 1);
    let mut second = 0;
    for a in 0..planes.len() {
        let mut rows = IntMatrix::zeros(0, binomial(n, s + 1));
        for &t in complex.inside(1, 2, a) {
            rows = rows.vstack(&line_block(t));
        }
        second += span_rank(&rows);
    }

    // (⊕_{θ ⊂ α} Λ_{s+1}Γ^θ) ∩ ker γ_s inside ⊕_θ Λ_{s+1}Γ^θ
    let w = binomial(nu, s + 1);
    let total = w * lines.len();
    if total == 0 {
        return first + second;
    }
    let mut gamma = IntMatrix::zeros(0, binomial(n, s + 1));
    for t in 0..lines.len() {
        gamma = gamma.vstack(&line_block(t));
    }
    let ker = Lattice::span(&kernel_matrix(&gamma));
    let mut third = IntMatrix::zeros(0, total);
    for a in 0..planes.len() {
        let mut coord = IntMatrix::zeros(0, total);
        for &t in complex.inside(1, 2, a) {
            let mut block = IntMatrix::zeros(w, total);
            for i in 0..w {
                block.set(i, t * w + i, 1.into());
            }
            coord = coord.vstack(&block);
        }
        if coord.rows() == 0 || ker.rank() == 0 {
            continue;
        }
        let meet = Lattice::span(&coord).intersection(&ker);
        third = third.vstack(meet.basis());
    }
    first + second + span_rank(&third)
}

/// `Σ_{j=0}^{top} (−1)^j C(m, top − j)`.
fn alternating(m: usize, top: usize) -> i64 {
    (0..=top)
        .map(|j| {
            let b = binomial(m, top - j) as i64;
            if j % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .sum()
}

/// `L_0 − Σ_α L_0^α + Σ_α Σ_{θ ⊂ α} L_0^θ − Σ_θ L_0^θ`.
pub fn euler_count(complex: &SingularComplex) -> i64 {
    let planes = complex.count(2);
    let lines = complex.count(1);
    let in_planes: i64 = (0..planes).map(|a| complex.count_inside(0, 2, a) as i64).sum();
    let nested: i64 = (0..planes)
        .flat_map(|a| complex.inside(1, 2, a).iter().map(|&t| complex.count_inside(0, 1, t) as i64))
        .sum();
    let in_lines: i64 = (0..lines).map(|t| complex.count_inside(0, 1, t) as i64).sum();
    complex.count(0) as i64 - in_planes + nested - in_lines
}

pub fn corrected_ranks(complex: &SingularComplex) -> Result<CorrectedRanks> {
    if complex.n != 3 || complex.nu != 2 {
        return Err(Error::Unsupported("corrected ranks are for n = d = 3".into()));
    }
    let nu = complex.nu;
    let l2 = complex.count(2) as i64;
    let l1 = complex.count(1) as i64;
    let sum_l1a: i64 = (0..complex.count(2)).map(|a| complex.count_inside(1, 2, a) as i64).sum();
    let r: Vec<i64> = (0..=4).map(|s| if s == 0 { 0 } else { r_term(complex, s) as i64 }).collect();
    let b = |m: usize, k: usize| binomial(m, k) as i64;

    let e = euler_count(complex);
    let mut ranks = Vec::with_capacity(4);
    let d0 = alternating(3 * nu, 3)
        + l2 * alternating(2 * nu, 2)
        + sum_l1a * alternating(nu, 1)
        + l1 * alternating(nu, 2)
        + e
        - r[1];
    ranks.push(d0);
    for s in 1..=3 {
        let ds = b(3 * nu, s + 3) + l2 * b(2 * nu, s + 2) + sum_l1a * b(nu, s + 1) + l1 * b(nu, s + 2)
            - r[s]
            - r[s + 1];
        ranks.push(ds);
    }
    if ranks.iter().any(|&x| x < 0) {
        return Err(Error::Consistency(format!("negative corrected rank {ranks:?}")));
    }
    Ok(CorrectedRanks {
        ranks: ranks.into_iter().map(|x| x as usize).collect(),
        euler: e,
    })
}
