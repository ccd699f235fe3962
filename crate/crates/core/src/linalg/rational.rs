use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{Int, IntMatrix};

pub type Rat = BigRational;

/// Dense rational matrix, row-major, row-vector convention like [`IntMatrix`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Rat>>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![vec![Rat::zero(); cols]; rows],
        }
    }

    pub fn from_rows(cols: usize, data: Vec<Vec<Rat>>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged rational rows");
        Self {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Rat::one();
        }
        m
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "rational product: shape mismatch");
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix::from_rows(self.cols, data)
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn select_cols(&self, idx: &[usize]) -> RatMatrix {
        RatMatrix::from_rows(
            idx.len(),
            self.data.iter().map(|r| idx.iter().map(|&c| r[c].clone()).collect()).collect(),
        )
    }
}

pub fn rat_matrix(m: &IntMatrix) -> RatMatrix {
    RatMatrix::from_rows(
        m.cols(),
        (0..m.rows())
            .map(|r| m.row(r).iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect(),
    )
}

pub fn vec_apply(v: &[Rat], m: &RatMatrix) -> Vec<Rat> {
    assert_eq!(v.len(), m.rows);
    let mut out = vec![Rat::zero(); m.cols];
    for (x, row) in v.iter().zip(&m.data) {
        if x.is_zero() {
            continue;
        }
        for (o, e) in out.iter_mut().zip(row) {
            if !e.is_zero() {
                *o += x * e;
            }
        }
    }
    out
}

/// Reduced row echelon form. Zero rows are removed; returns pivot columns.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.data.clone();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..m.cols {
        let Some(p) = (pr..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(p, pr);
        let inv = a[pr][c].recip();
        for x in a[pr].iter_mut() {
            *x *= &inv;
        }
        let prow = a[pr].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == pr || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        pr += 1;
    }
    a.truncate(pr);
    (RatMatrix::from_rows(m.cols, a), pivots)
}

pub fn rational_rank(m: &RatMatrix) -> usize {
    rref(m).1.len()
}

/// Basis (in RREF) of `{x : x·m = 0}`.
pub fn left_nullspace(m: &RatMatrix) -> RatMatrix {
    // x·m = 0  ⇔  mᵀ·xᵀ = 0: right nullspace of mᵀ
    right_nullspace(&m.transpose())
}

/// Basis (in RREF) of `{y : m·yᵀ = 0}`, vectors as rows.
pub fn right_nullspace(m: &RatMatrix) -> RatMatrix {
    let (r, piv) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !piv.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rat::zero(); m.cols];
        v[f] = Rat::one();
        for (i, &p) in piv.iter().enumerate() {
            v[p] = -r.data[i][f].clone();
        }
        out.push(v);
    }
    rref(&RatMatrix::from_rows(m.cols, out)).0
}

/// One solution `x` of `x·m = b`, if any.
pub fn solve_left(m: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(b.len(), m.cols);
    // augmented system on mᵀ: mᵀ xᵀ = bᵀ
    let t = m.transpose();
    let mut aug = t.data.clone();
    for (row, bi) in aug.iter_mut().zip(b) {
        row.push(bi.clone());
    }
    let (r, piv) = rref(&RatMatrix::from_rows(m.rows + 1, aug));
    if piv.last() == Some(&m.rows) {
        return None;
    }
    let mut x = vec![Rat::zero(); m.rows];
    for (i, &p) in piv.iter().enumerate() {
        x[p] = r.data[i][m.rows].clone();
    }
    Some(x)
}

/// Inverse of a square matrix, if it is invertible.
pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    assert_eq!(m.rows, m.cols, "inverse of a non-square matrix");
    let n = m.rows;
    let mut aug = m.data.clone();
    for (i, row) in aug.iter_mut().enumerate() {
        row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
    }
    let (r, piv) = rref(&RatMatrix::from_rows(2 * n, aug));
    if piv.len() < n || piv.get(n.wrapping_sub(1)).is_some_and(|&c| c >= n) {
        return None;
    }
    Some(RatMatrix::from_rows(n, r.data.into_iter().map(|row| row[n..].to_vec()).collect()))
}

/// A rational subspace of `Q^dim` stored by its RREF basis, so equality of
/// subspaces is equality of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: RatMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(gens: &RatMatrix) -> Self {
        let (basis, pivots) = rref(gens);
        Self { basis, pivots }
    }

    pub fn zero(dim: usize) -> Self {
        Self::span(&RatMatrix::zeros(0, dim))
    }

    pub fn full(dim: usize) -> Self {
        Self::span(&RatMatrix::identity(dim))
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that are not pivots; coordinates on these identify `Q^dim / U`.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient_dim()).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// `x − Σ x[p_i]·u_i`: the representative of `x + U` vanishing on pivots.
    pub fn reduce(&self, x: &[Rat]) -> Vec<Rat> {
        let mut v = x.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (y, b) in v.iter_mut().zip(&self.basis.data[i]) {
                if !b.is_zero() {
                    *y -= &f * b;
                }
            }
        }
        v
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.reduce(x).iter().all(Zero::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.data.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(&self.basis.vstack(&other.basis))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // x·A = y·B: left nullspace of [A; B], keep the A-part
        let n = left_nullspace(&self.basis.vstack(&other.basis));
        let xs = n.select_cols(&(0..self.dim()).collect::<Vec<_>>());
        Subspace::span(&xs.mul(&self.basis))
    }

    /// Image under a linear map (row convention).
    pub fn image(&self, m: &RatMatrix) -> Subspace {
        Subspace::span(&self.basis.mul(m))
    }
}

/// Scales each column by the lcm of its denominators, giving an integer
/// matrix with the same integer left kernel.
pub fn clear_denominators(m: &RatMatrix) -> IntMatrix {
    let mut out = IntMatrix::zeros(m.rows, m.cols);
    for c in 0..m.cols {
        let l = (0..m.rows).fold(Int::one(), |acc, r| acc.lcm(m.data[r][c].denom()));
        for r in 0..m.rows {
            let v = &m.data[r][c] * Rat::from_integer(l.clone());
            out.set(r, c, v.to_integer());
        }
    }
    out
}

/// Common denominator of all entries of a vector.
pub fn common_denominator(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rm(cols: usize, rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect())
    }

    #[test]
    fn rank_and_nullspace() {
        let m = rm(3, &[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rational_rank(&m), 2);
        let n = left_nullspace(&m);
        assert_eq!(n.rows, 1);
        let z = vec_apply(&n.data[0], &m);
        assert!(z.iter().all(Zero::is_zero));
    }

    #[test]
    fn solve_and_fail() {
        let m = rm(2, &[vec![1, 1], vec![0, 2]]);
        let x = solve_left(&m, &[rat(3, 1), rat(7, 1)]).unwrap();
        assert_eq!(vec_apply(&x, &m), vec![rat(3, 1), rat(7, 1)]);
        let s = rm(2, &[vec![1, 1]]);
        assert!(solve_left(&s, &[rat(1, 1), rat(2, 1)]).is_none());
    }

    #[test]
    fn subspace_ops() {
        let a = Subspace::span(&rm(3, &[vec![1, 0, 0], vec![0, 1, 0]]));
        let b = Subspace::span(&rm(3, &[vec![0, 1, 0], vec![0, 0, 1]]));
        let i = a.intersection(&b);
        assert_eq!(i, Subspace::span(&rm(3, &[vec![0, 1, 0]])));
        assert_eq!(a.sum(&b), Subspace::full(3));
        assert_eq!(a.reduce(&[rat(1, 2), rat(3, 1), rat(5, 1)]), vec![rat(0, 1), rat(0, 1), rat(5, 1)]);
        assert!(i.is_subspace_of(&a));
    }

    #[test]
    fn denominators_cleared_per_column() {
        let m = RatMatrix::from_rows(2, vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(0, 1)]]);
        let im = clear_denominators(&m);
        assert_eq!(im, IntMatrix::from_i64_rows(2, &[vec![2, 1], vec![1, 0]]));
    }
}
