use num_traits::{One, Zero};

use super::group::FgAbelianGroup;
use super::hnf::{hnf_basis, hnf_full};
use super::matrix::{Int, IntMatrix};
use super::rational::{rat_matrix, rational_rank, RatMatrix};
use super::snf::snf_factors;

/// A subgroup of `Z^ambient` given by a basis in row-style HNF.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
}

impl Lattice {
    /// Lattice spanned by the rows of `gens` (not necessarily independent).
    pub fn span(gens: &IntMatrix) -> Self {
        let (basis, _) = hnf_basis(gens);
        Self {
            ambient: gens.cols(),
            basis,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: IntMatrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: IntMatrix::identity(ambient),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let row = IntMatrix::from_rows(self.ambient, vec![v.to_vec()]);
        coordinates(&self.basis, &row).is_some()
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        (0..self.rank()).all(|r| other.contains(self.basis.row(r)))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::span(&self.basis.vstack(&other.basis))
    }

    pub fn intersection(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient, other.ambient);
        // x·A = y·B  ⇔  (x, −y) ∈ ker [A; B]; the intersection is x·A.
        let stacked = self.basis.vstack(&other.basis);
        let k = kernel_matrix(&stacked);
        let xs = k.select_cols(&(0..self.rank()).collect::<Vec<_>>());
        Lattice::span(&(&xs * &self.basis))
    }

    /// Smallest saturated lattice containing `self`: `(Q·self) ∩ Z^ambient`.
    pub fn saturation(&self) -> Lattice {
        if self.rank() == 0 {
            return self.clone();
        }
        // The saturation is the kernel of any integer map whose kernel over Q
        // is the Q-span; take the integer kernel of the orthogonal complement.
        let orth = kernel_matrix(&self.basis.transpose());
        kernel(&LatticeMap::new(orth.transpose(), "Z^n", "Z^k"))
    }

    /// `self / other` as an abelian group; requires `other ⊆ self`.
    pub fn quotient_by(&self, other: &Lattice) -> FgAbelianGroup {
        debug_assert!(other.is_sublattice_of(self));
        // coordinates of other's basis in self's basis
        let coords = coordinates(&self.basis, &other.basis).expect("quotient_by: not a sublattice");
        cokernel(&LatticeMap::new(coords, "sub", "lattice"))
    }

    /// Coordinates of the rows of `v` in this lattice's basis, if they lie in it.
    pub fn coordinates_of(&self, v: &IntMatrix) -> Option<IntMatrix> {
        coordinates(&self.basis, v)
    }
}

fn pivots_of(h: &IntMatrix) -> Vec<usize> {
    (0..h.rows())
        .map(|r| (0..h.cols()).find(|&c| !h.get(r, c).is_zero()).expect("zero row in basis"))
        .collect()
}

/// Solves `x·basis = v` row by row for an HNF basis.
fn coordinates(basis: &IntMatrix, v: &IntMatrix) -> Option<IntMatrix> {
    let piv = pivots_of(basis);
    let mut out = Vec::with_capacity(v.rows());
    for i in 0..v.rows() {
        let mut rest = v.row(i).to_vec();
        let mut x = vec![Int::zero(); basis.rows()];
        for (r, &c) in piv.iter().enumerate() {
            if rest[c].is_zero() {
                continue;
            }
            let p = basis.get(r, c);
            if !(&rest[c] % p).is_zero() {
                return None;
            }
            let q = &rest[c] / p;
            for (j, y) in rest.iter_mut().enumerate() {
                let b = basis.get(r, j);
                if !b.is_zero() {
                    *y -= &q * b;
                }
            }
            x[r] = q;
        }
        if !rest.iter().all(Zero::is_zero) {
            return None;
        }
        out.push(x);
    }
    Some(IntMatrix::from_rows(basis.rows(), out))
}

/// An integer matrix between based free modules, acting on row vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    pub matrix: IntMatrix,
    pub source_label: String,
    pub target_label: String,
}

impl LatticeMap {
    pub fn new(matrix: IntMatrix, source: impl Into<String>, target: impl Into<String>) -> Self {
        Self {
            matrix,
            source_label: source.into(),
            target_label: target.into(),
        }
    }

    pub fn source_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn target_rank(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rank(&self) -> usize {
        rational_rank(&rat_matrix(&self.matrix))
    }

    pub fn compose(&self, then: &LatticeMap) -> LatticeMap {
        LatticeMap::new(
            &self.matrix * &then.matrix,
            self.source_label.clone(),
            then.target_label.clone(),
        )
    }
}

/// Basis rows of `{x : x·m = 0}` taken from the HNF transform (not yet canonical).
pub fn kernel_matrix(m: &IntMatrix) -> IntMatrix {
    let h = hnf_full(m);
    let idx: Vec<usize> = (h.rank..m.rows()).collect();
    h.u.select_rows(&idx)
}

/// `{x : x·f = 0}` in canonical form. Always saturated.
pub fn kernel(f: &LatticeMap) -> Lattice {
    Lattice::span(&kernel_matrix(&f.matrix))
}

/// `target / image(f)`.
pub fn cokernel(f: &LatticeMap) -> FgAbelianGroup {
    let factors = snf_factors(&f.matrix);
    let rank = factors.len();
    FgAbelianGroup::from_cyclic(
        f.target_rank() - rank,
        factors.into_iter().filter(|d| !d.is_one()),
    )
}

/// Results of [`lattice_ops`].
#[derive(Clone, Debug)]
pub struct LatticeOps {
    pub intersection: Lattice,
    pub sum: Lattice,
    /// `(a + b) / b`.
    pub quotient: FgAbelianGroup,
    /// Saturation of `a`.
    pub saturation: Lattice,
}

pub fn lattice_ops(a: &Lattice, b: &Lattice) -> LatticeOps {
    assert_eq!(a.ambient_rank(), b.ambient_rank(), "lattice_ops: ambient mismatch");
    let sum = a.sum(b);
    LatticeOps {
        intersection: a.intersection(b),
        quotient: sum.quotient_by(b),
        saturation: a.saturation(),
        sum,
    }
}

/// Integer kernel of a rational matrix, with the rational matrix scaled to
/// integers first.
pub fn integer_kernel_of_rational(m: &RatMatrix) -> Lattice {
    let im = super::rational::clear_denominators(m);
    kernel(&LatticeMap::new(im, "Z^n", "Q^m"))
}
