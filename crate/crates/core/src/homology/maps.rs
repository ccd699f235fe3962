//! Integer matrices for the maps induced by stabilizer inclusions.

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::rational::{rat_matrix, rational_rank};
use crate::linalg::{compound, Int, IntMatrix, Lattice, LatticeMap};
use crate::singular::SingularComplex;

/// The augmentation on point classes inside a container (or globally) and a
/// basis of its kernel.
#[derive(Clone, Debug)]
pub struct Epsilon {
    /// Global ids of the point classes, increasing.
    pub classes: Vec<usize>,
    /// `Z^L → Z`, all ones.
    pub map: LatticeMap,
    /// Rows `e_i − e_{i+1}`.
    pub kernel_basis: IntMatrix,
}

/// `ε` for the `k`-orbit `id`, or for the whole space when `container` is `None`.
pub fn build_epsilon(complex: &SingularComplex, container: Option<(usize, usize)>) -> Epsilon {
    let classes: Vec<usize> = match container {
        Some((k, id)) => complex.inside(0, k, id).to_vec(),
        None => (0..complex.count(0)).collect(),
    };
    let l = classes.len();
    let map = LatticeMap::new(IntMatrix::new(l, 1, vec![Int::one(); l]), "Z^L0", "Z");
    let mut kb = IntMatrix::zeros(l.saturating_sub(1), l);
    for i in 0..l.saturating_sub(1) {
        kb.set(i, i, Int::one());
        kb.set(i, i + 1, -Int::one());
    }
    Epsilon {
        classes,
        map,
        kernel_basis: kb,
    }
}

/// `ker ε^Θ → ker ε` induced by sending each local point class to its
/// global class, in the difference bases of both kernels.
pub fn epsilon_inclusion(local: &Epsilon, global: &Epsilon) -> IntMatrix {
    let lg = global.classes.len();
    let pos = |c: usize| global.classes.binary_search(&c).expect("class is global");
    let rows = local
        .classes
        .windows(2)
        .map(|w| {
            let (a, b) = (pos(w[0]), pos(w[1]));
            let mut row = vec![Int::from(0); lg.saturating_sub(1)];
            // e_a − e_b = d_a + … + d_{b−1} for a < b
            for x in row.iter_mut().take(b).skip(a) {
                *x = Int::one();
            }
            row
        })
        .collect();
    IntMatrix::from_rows(lg.saturating_sub(1), rows)
}

/// Basis of `Γ^Θ` in the coordinates of a containing stabilizer.
pub fn relative_basis(inner: &Lattice, outer: &Lattice) -> Result<IntMatrix> {
    outer
        .coordinates_of(inner.basis())
        .ok_or_else(|| Error::Consistency("stabilizer of a subspace is not contained in its container's".into()))
}

/// Rows `Λ^k(B)` for each basis `B`, stacked.
pub fn stacked_compounds<'a>(bases: impl IntoIterator<Item = &'a IntMatrix>, k: usize, cols: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(0, cols);
    for b in bases {
        out = out.vstack(&compound(b, k));
    }
    out
}

/// Rank over Q.
pub fn rank(m: &IntMatrix) -> usize {
    if m.is_empty() {
        return 0;
    }
    rational_rank(&rat_matrix(m))
}

/// Embeds rows indexed by local classes into the global coordinate space.
pub fn embed_rows(rows: &IntMatrix, local: &[usize], global_len: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(rows.rows(), global_len);
    for r in 0..rows.rows() {
        for (c, &g) in local.iter().enumerate() {
            out.set(r, g, rows.get(r, c).clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(classes: Vec<usize>) -> Epsilon {
        let l = classes.len();
        let mut kb = IntMatrix::zeros(l.saturating_sub(1), l);
        for i in 0..l.saturating_sub(1) {
            kb.set(i, i, Int::one());
            kb.set(i, i + 1, -Int::one());
        }
        Epsilon {
            classes,
            map: LatticeMap::new(IntMatrix::new(l, 1, vec![Int::one(); l]), "Z^L0", "Z"),
            kernel_basis: kb,
        }
    }

    #[test]
    fn single_class_has_zero_kernel() {
        assert_eq!(eps(vec![0]).kernel_basis.rows(), 0);
        let two = eps(vec![0, 1]);
        assert_eq!(two.kernel_basis, IntMatrix::from_i64_rows(2, &[vec![1, -1]]));
    }

    #[test]
    fn inclusion_respects_differences() {
        let global = eps(vec![0, 1, 2, 3]);
        let local = eps(vec![1, 3]);
        let m = epsilon_inclusion(&local, &global);
        // e_1 − e_3 = d_1 + d_2
        assert_eq!(m, IntMatrix::from_i64_rows(3, &[vec![0, 1, 1]]));
        // and in global point coordinates it is e_1 − e_3
        assert_eq!(&m * &global.kernel_basis, IntMatrix::from_i64_rows(4, &[vec![0, 1, 0, -1]]));
    }
}
