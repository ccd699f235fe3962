use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::{Int, IntMatrix};

/// Row-style Hermite normal form together with the unimodular transform.
#[derive(Clone, Debug)]
pub struct Hnf {
    /// `u · m`, in Hermite normal form.
    pub h: IntMatrix,
    /// Unimodular, square of size `m.rows()`.
    pub u: IntMatrix,
    pub rank: usize,
    /// Column index of the pivot in each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

/// Computes `(h, u)` with `u` unimodular and `u·m = h` in row-style HNF.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let r = hnf_full(m);
    (r.h, r.u)
}

pub fn hnf_full(m: &IntMatrix) -> Hnf {
    let mut rows = m.row_vecs();
    let mut u = Some(identity_rows(m.rows()));
    let pivots = reduce(&mut rows, m.cols(), u.as_mut());
    Hnf {
        h: IntMatrix::from_rows(m.cols(), rows),
        u: IntMatrix::from_rows(m.rows(), u.unwrap()),
        rank: pivots.len(),
        pivots,
    }
}

/// HNF without tracking the transform. Zero rows are dropped, so the result
/// is a basis of the row lattice.
pub fn hnf_basis(m: &IntMatrix) -> (IntMatrix, Vec<usize>) {
    let mut rows = m.row_vecs();
    let pivots = reduce(&mut rows, m.cols(), None);
    rows.truncate(pivots.len());
    (IntMatrix::from_rows(m.cols(), rows), pivots)
}

fn identity_rows(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| {
            let mut r = vec![Int::zero(); n];
            r[i] = Int::from(1);
            r
        })
        .collect()
}

fn axpy(dst: &mut [Int], q: &Int, src: &[Int]) {
    // dst -= q * src
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

fn row_op(rows: &mut [Vec<Int>], t: Option<&mut Vec<Vec<Int>>>, dst: usize, q: &Int, src: usize) {
    let (a, b) = split_pair(rows, dst, src);
    axpy(a, q, b);
    if let Some(t) = t {
        let (a, b) = split_pair(t, dst, src);
        axpy(a, q, b);
    }
}

fn split_pair(v: &mut [Vec<Int>], dst: usize, src: usize) -> (&mut [Int], &[Int]) {
    assert_ne!(dst, src);
    if dst < src {
        let (lo, hi) = v.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    }
}

fn negate(row: &mut [Int]) {
    for x in row.iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// In-place row reduction to HNF; returns pivot columns.
fn reduce(rows: &mut [Vec<Int>], cols: usize, mut t: Option<&mut Vec<Vec<Int>>>) -> Vec<usize> {
    let n = rows.len();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == n {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c at or below pr
            let best = (pr..n)
                .filter(|&r| !rows[r][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(b) = best else { break };
            if b != pr {
                rows.swap(b, pr);
                if let Some(t) = t.as_deref_mut() {
                    t.swap(b, pr);
                }
            }
            let mut done = true;
            for r in pr + 1..n {
                if rows[r][c].is_zero() {
                    continue;
                }
                let q = rows[r][c].div_floor(&rows[pr][c]);
                row_op(rows, t.as_deref_mut(), r, &q, pr);
                if !rows[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows.get(pr).is_none_or(|row| row[c].is_zero()) {
            continue;
        }
        if rows[pr][c].is_negative() {
            negate(&mut rows[pr]);
            if let Some(t) = t.as_deref_mut() {
                negate(&mut t[pr]);
            }
        }
        for r in 0..pr {
            if rows[r][c].is_zero() {
                continue;
            }
            let q = rows[r][c].div_floor(&rows[pr][c]);
            if !q.is_zero() {
                row_op(rows, t.as_deref_mut(), r, &q, pr);
            }
        }
        pivots.push(c);
        pr += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, r: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(cols, r)
    }

    #[test]
    fn identity_is_fixed() {
        let (h, u) = hnf(&IntMatrix::identity(2));
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn diagonal_already_reduced() {
        let a = m(2, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(hnf(&a).0, a);
    }

    #[test]
    fn two_by_two() {
        let a = m(2, &[vec![2, 4], vec![6, 8]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, m(2, &[vec![2, 0], vec![0, 4]]));
        assert_eq!(&u * &a, h);
        assert_eq!(u.det().abs(), Int::from(1));
    }

    #[test]
    fn zero_rows_last_and_dropped_in_basis() {
        let a = m(3, &[vec![0, 0, 0], vec![1, 2, 3], vec![2, 4, 6]]);
        let r = hnf_full(&a);
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert!(r.h.select_rows(&[1, 2]).is_zero());
        let (b, _) = hnf_basis(&a);
        assert_eq!(b, m(3, &[vec![1, 2, 3]]));
    }

    #[test]
    fn empty_shapes() {
        let r = hnf_full(&IntMatrix::zeros(0, 3));
        assert_eq!(r.rank, 0);
        let r = hnf_full(&IntMatrix::zeros(2, 0));
        assert_eq!(r.u, IntMatrix::identity(2));
    }
}
