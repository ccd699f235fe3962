use itertools::Itertools;

use super::lattice::LatticeMap;
use super::matrix::{bareiss_det, Int, IntMatrix};

/// k-subsets of `0..n` in lexicographic order; the basis of `Λ^k Z^n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    (0..n).combinations(k).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// k-th compound matrix: all k×k minors, rows and columns indexed by
/// lexicographically ordered k-subsets.
pub fn compound(m: &IntMatrix, k: usize) -> IntMatrix {
    let rs = subsets(m.rows(), k);
    let cs = subsets(m.cols(), k);
    let mut out = IntMatrix::zeros(rs.len(), cs.len());
    for (i, r) in rs.iter().enumerate() {
        for (j, c) in cs.iter().enumerate() {
            let sub: Vec<Vec<Int>> = r
                .iter()
                .map(|&ri| c.iter().map(|&cj| m.get(ri, cj).clone()).collect())
                .collect();
            out.set(i, j, bareiss_det(sub));
        }
    }
    out
}

pub fn exterior_power(k: usize, f: &LatticeMap) -> LatticeMap {
    LatticeMap::new(
        compound(&f.matrix, k),
        format!("Λ{k}({})", f.source_label),
        format!("Λ{k}({})", f.target_label),
    )
}

/// Coordinates of the wedge `v_1 ∧ … ∧ v_k` of the rows of `m` in the
/// lexicographic basis of `Λ^k Z^n`. Equals the single row of the compound
/// of `m` when `m` has exactly k rows.
pub fn wedge_rows(m: &IntMatrix) -> Vec<Int> {
    let c = compound(m, m.rows());
    c.row(0).to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_and_one() {
        let m = IntMatrix::from_i64_rows(3, &[vec![1, 2, 3], vec![4, 5, 6]]);
        assert_eq!(compound(&m, 0), IntMatrix::identity(1));
        assert_eq!(compound(&m, 1), m);
        assert_eq!(compound(&m, 3).rows(), 0);
    }

    #[test]
    fn top_degree_is_determinant() {
        let m = IntMatrix::from_i64_rows(2, &[vec![3, 1], vec![4, 2]]);
        assert_eq!(compound(&m, 2), IntMatrix::from_i64_rows(1, &[vec![2]]));
    }

    #[test]
    fn identity_is_preserved() {
        assert_eq!(compound(&IntMatrix::identity(4), 2), IntMatrix::identity(6));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(6, 7), 0);
        assert_eq!(subsets(4, 2).len(), binomial(4, 2));
    }
}
