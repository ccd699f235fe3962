use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::hnf::hnf_basis;
use super::matrix::{Int, IntMatrix};

/// Smith normal form with transforms: `left · m · right` is diagonal with
/// `factors` on the diagonal followed by zeros.
#[derive(Clone, Debug)]
pub struct Snf {
    pub factors: Vec<Int>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

pub fn snf(m: &IntMatrix) -> Snf {
    let mut a = m.row_vecs();
    let mut left = ident(m.rows());
    let mut right = ident(m.cols());
    let factors = diagonalize(&mut a, m.rows(), m.cols(), Some((&mut left, &mut right)));
    Snf {
        factors,
        left: IntMatrix::from_rows(m.rows(), left),
        right: IntMatrix::from_rows(m.cols(), right),
    }
}

/// Nonzero invariant factors only. Cheaper than [`snf`]: the matrix is first
/// cut down to a basis of its row lattice.
pub fn snf_factors(m: &IntMatrix) -> Vec<Int> {
    let (b, _) = hnf_basis(m);
    if b.rows() == 0 {
        return Vec::new();
    }
    let (r, c) = (b.rows(), b.cols());
    let mut a = b.row_vecs();
    diagonalize(&mut a, r, c, None)
}

fn ident(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

type Transforms<'a> = (&'a mut Vec<Vec<Int>>, &'a mut Vec<Vec<Int>>);

fn add_row(a: &mut [Vec<Int>], dst: usize, q: &Int, src: usize) {
    // row dst -= q * row src
    let s = a[src].clone();
    for (d, x) in a[dst].iter_mut().zip(&s) {
        if !x.is_zero() {
            *d -= q * x;
        }
    }
}

fn add_col(a: &mut [Vec<Int>], dst: usize, q: &Int, src: usize) {
    for row in a.iter_mut() {
        if !row[src].is_zero() {
            let v = q * &row[src];
            row[dst] -= v;
        }
    }
}

fn swap_cols(a: &mut [Vec<Int>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn diagonalize(a: &mut [Vec<Int>], rows: usize, cols: usize, mut tr: Option<Transforms>) -> Vec<Int> {
    let mut factors = Vec::new();
    let n = rows.min(cols);
    for t in 0..n {
        // pivot = smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        move_pivot(a, &mut tr, t, pi, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                add_row(a, i, &q, t);
                if let Some((l, _)) = tr.as_mut() {
                    add_row(l, i, &q, t);
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                add_col(a, j, &q, t);
                if let Some((_, r)) = tr.as_mut() {
                    add_col(r, j, &q, t);
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // divisibility: fold an offending row into the pivot row
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let m1 = -Int::one();
                        add_row(a, t, &m1, i);
                        if let Some((l, _)) = tr.as_mut() {
                            add_row(l, t, &m1, i);
                        }
                        continue;
                    }
                }
            }
            // re-pick the smallest entry in row t / column t
            let candidates = (t + 1..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
            let (mut bi, mut bj) = (t, t);
            let mut bv = a[t][t].abs();
            for (i, j) in candidates {
                if !a[i][j].is_zero() && (bv.is_zero() || a[i][j].abs() < bv) {
                    bv = a[i][j].abs();
                    (bi, bj) = (i, j);
                }
            }
            move_pivot(a, &mut tr, t, bi, bj);
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -std::mem::take(x);
            }
            if let Some((l, _)) = tr.as_mut() {
                for x in l[t].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
        }
        factors.push(a[t][t].clone());
    }
    factors
}

fn move_pivot(a: &mut [Vec<Int>], tr: &mut Option<Transforms>, t: usize, i: usize, j: usize) {
    if i != t {
        a.swap(i, t);
        if let Some((l, _)) = tr.as_mut() {
            l.swap(i, t);
        }
    }
    if j != t {
        swap_cols(a, j, t);
        if let Some((_, r)) = tr.as_mut() {
            swap_cols(r, j, t);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    fn check(m: &IntMatrix, expect: &[i64]) {
        let s = snf(m);
        assert_eq!(s.factors, ints(expect));
        let d = &(&s.left * m) * &s.right;
        assert_eq!(d, IntMatrix::diagonal(m.rows(), m.cols(), &s.factors));
        assert_eq!(s.left.det().abs(), Int::one());
        assert_eq!(s.right.det().abs(), Int::one());
        assert_eq!(snf_factors(m), ints(expect));
    }

    #[test]
    fn zero_matrix() {
        check(&IntMatrix::zeros(2, 3), &[]);
    }

    #[test]
    fn coprime_diagonal() {
        check(&IntMatrix::from_i64_rows(2, &[vec![2, 0], vec![0, 3]]), &[1, 6]);
    }

    #[test]
    fn small_square() {
        check(&IntMatrix::from_i64_rows(2, &[vec![2, 4], vec![6, 8]]), &[2, 4]);
    }

    #[test]
    fn rectangular() {
        check(
            &IntMatrix::from_i64_rows(3, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16], vec![0, 0, 0]]),
            &[2, 6, 12],
        );
    }
}
