//! Codimension 2: `H_k = coker β_{k+1} ⊕ ker β_k`.

use crate::error::{Error, Result};
use crate::linalg::ring::rank_mod_p;
use crate::linalg::{binomial, cokernel, FgAbelianGroup, IntMatrix, LatticeMap};
use crate::singular::SingularComplex;

use super::maps::{build_epsilon, epsilon_inclusion, rank, stacked_compounds};

/// The maps `β_k`, `k ≥ 1`, and the block form of `β_0`.
#[derive(Clone, Debug)]
pub struct Codim2 {
    pub d: usize,
    pub lattice_rank: usize,
    /// `beta[k]` for `k = 1..=d+1`; index 0 unused.
    pub beta: Vec<LatticeMap>,
    /// `⊕_α (Γ^α ⊕ ker ε^α) → Γ ⊕ ker ε`.
    pub beta0: LatticeMap,
}

impl Codim2 {
    pub fn assemble(complex: &SingularComplex, d: usize) -> Result<Self> {
        let n_rank = complex.lattice_rank;
        let lines = &complex.levels[1];
        let bases: Vec<&IntMatrix> = lines.iter().map(|o| o.stabilizer.basis()).collect();
        let mut beta = vec![LatticeMap::new(IntMatrix::zeros(0, 0), "", "")];
        for k in 1..=d + 1 {
            let m = stacked_compounds(bases.iter().copied(), k + 1, binomial(n_rank, k + 1));
            beta.push(LatticeMap::new(m, format!("⊕Λ{}Γ^α", k + 1), format!("Λ{}Γ", k + 1)));
        }
        let global = build_epsilon(complex, None);
        let mut beta0 = IntMatrix::zeros(0, n_rank + global.kernel_basis.rows());
        for (id, b) in bases.iter().enumerate() {
            let local = build_epsilon(complex, Some((1, id)));
            let incl = epsilon_inclusion(&local, &global);
            beta0 = beta0.vstack(&IntMatrix::block_diag([*b, &incl]));
        }
        let beta0 = LatticeMap::new(beta0, "⊕(Γ^α ⊕ ker ε^α)", "Γ ⊕ ker ε");
        if rank(&beta0.matrix) != beta0.target_rank() {
            return Err(Error::Consistency("β_0 is not onto over Q".into()));
        }
        Ok(Self {
            d,
            lattice_rank: n_rank,
            beta,
            beta0,
        })
    }

    fn ker_beta0_rank(&self) -> usize {
        self.beta0.source_rank() - self.beta0.target_rank()
    }

    pub fn groups(&self) -> Vec<FgAbelianGroup> {
        (0..=self.d)
            .map(|k| {
                let coker = cokernel(&self.beta[k + 1]);
                let ker = if k == 0 {
                    self.ker_beta0_rank()
                } else {
                    self.beta[k].source_rank() - rank(&self.beta[k].matrix)
                };
                coker.direct_sum(&FgAbelianGroup::free(ker))
            })
            .collect()
    }

    pub fn modp_ranks(&self, p: u64) -> Vec<usize> {
        (0..=self.d)
            .map(|k| {
                let next = &self.beta[k + 1];
                let coker = next.target_rank() - rank_mod_p(&next.matrix, p);
                let ker = if k == 0 {
                    self.ker_beta0_rank()
                } else {
                    self.beta[k].source_rank() - rank_mod_p(&self.beta[k].matrix, p)
                };
                coker + ker
            })
            .collect()
    }

    /// `coker β_1`, which carries all the torsion.
    pub fn torsion_source(&self) -> FgAbelianGroup {
        cokernel(&self.beta[1])
    }
}
