//! Codimension 3 with `ν = 2`: the three-row diagram of `C³ → C² → C¹_0`.
//!
//! Here `Γ^α` has rank 4 for a plane class and `Γ^θ` rank 2 for a line
//! class, so `Λ_2Γ^θ = Z` and `γ_1`, `β^α_1` have one row per line.

use crate::error::{Error, Result};
use crate::linalg::ring::{coker_log_order_mod, left_nullspace_mod_p, rank_mod_p, valuation};
use crate::linalg::{binomial, cokernel, compound, kernel_matrix, FgAbelianGroup, Int, IntMatrix, Lattice, LatticeMap};
use crate::singular::SingularComplex;

use super::maps::{embed_rows, rank, relative_basis, stacked_compounds};

#[derive(Clone, Debug)]
pub struct PlaneMaps {
    /// Line classes inside the plane, increasing.
    pub lines: Vec<usize>,
    /// `β^α_1 : ⊕_{θ ⊂ α} Λ_2Γ^θ → Λ_2Γ^α`.
    pub beta1: IntMatrix,
    /// `rank ker β^α_0`.
    pub ker_beta0: usize,
}

/// All integer maps of the diagram.
#[derive(Clone, Debug)]
pub struct Codim3 {
    pub lattice_rank: usize,
    pub line_count: usize,
    pub planes: Vec<PlaneMaps>,
    /// `γ_1 : ⊕_θ Λ_2Γ^θ → Λ_2Γ`.
    pub gamma1: IntMatrix,
    /// `rank ker γ_0`.
    pub ker_gamma0: usize,
    /// `ı_2 : ⊕_α Λ_2Γ^α → Λ_2Γ`, used for `φ'_0`.
    pub iota2: IntMatrix,
    /// `φ'_1 : ⊕_α Λ_3Γ^α → Λ_3Γ`.
    pub phi1: IntMatrix,
    /// `φ'_2 : ⊕_α Λ_4Γ^α → Λ_4Γ`.
    pub phi2: IntMatrix,
}

/// Integral pieces of the answer.
#[derive(Clone, Debug)]
pub struct Codim3Integral {
    pub groups_above_zero: Vec<FgAbelianGroup>,
    /// `t'_1 = Torsion(coker φ'_1)`.
    pub t1_prime: FgAbelianGroup,
    /// `t''_1 = Torsion(coker φ''_1)`.
    pub t1_double_prime: FgAbelianGroup,
    /// `t'_0 = Torsion(ker φ'_0)`.
    pub t0_prime: FgAbelianGroup,
    /// Free rank of `coker φ_1`.
    pub coker_phi1_free: usize,
    /// Free rank of `H_0`.
    pub d0: usize,
    pub coker_gamma1: FgAbelianGroup,
    /// `coker β^α_1` per plane class.
    pub plane_cokers: Vec<FgAbelianGroup>,
}

fn first_block(m: &IntMatrix, width: usize) -> IntMatrix {
    m.select_cols(&(0..width).collect::<Vec<_>>())
}

/// `{x ∈ Z^rows : x·m ≡ 0 mod q}`.
fn kernel_mod(m: &IntMatrix, q: u64) -> IntMatrix {
    let qi = IntMatrix::diagonal(m.cols(), m.cols(), &vec![Int::from(q); m.cols()]);
    first_block(&kernel_matrix(&m.vstack(&qi)), m.rows())
}

impl Codim3 {
    pub fn assemble(complex: &SingularComplex) -> Result<Self> {
        if complex.nu != 2 || complex.lattice_rank != 6 {
            return Err(Error::Unsupported(format!(
                "codimension 3 needs ν = 2 and rank 6, got ν = {} and rank {}",
                complex.nu, complex.lattice_rank
            )));
        }
        let n = complex.lattice_rank;
        let nu = complex.nu;
        let lines = &complex.levels[1];
        let planes = &complex.levels[2];
        let line_l0 = |t: usize| complex.count_inside(0, 1, t);

        let gamma1 = stacked_compounds(lines.iter().map(|o| o.stabilizer.basis()), 2, binomial(n, 2));
        let ker_gamma0 = (0..lines.len()).map(|t| nu + line_l0(t) - 1).sum::<usize>() as i64
            - (n + complex.count(0) - 1) as i64;

        let mut plane_maps = Vec::with_capacity(planes.len());
        for (a, plane) in planes.iter().enumerate() {
            let inner = complex.inside(1, 2, a).to_vec();
            let mut beta1 = IntMatrix::zeros(0, binomial(2 * nu, 2));
            for &t in &inner {
                let rel = relative_basis(&lines[t].stabilizer, &plane.stabilizer)?;
                let row = compound(&rel, 2);
                if &row * &compound(plane.stabilizer.basis(), 2) != compound(lines[t].stabilizer.basis(), 2) {
                    return Err(Error::Consistency("β^α_1 does not commute with γ_1".into()));
                }
                beta1 = beta1.vstack(&row);
            }
            let ker_beta0 = inner.iter().map(|&t| nu + line_l0(t) - 1).sum::<usize>() as i64
                - (2 * nu + complex.count_inside(0, 2, a) - 1) as i64;
            if ker_beta0 < 0 {
                return Err(Error::Consistency("β^α_0 cannot be onto".into()));
            }
            plane_maps.push(PlaneMaps {
                lines: inner,
                beta1,
                ker_beta0: ker_beta0 as usize,
            });
        }
        if ker_gamma0 < 0 {
            return Err(Error::Consistency("γ_0 cannot be onto".into()));
        }
        let bases: Vec<&IntMatrix> = planes.iter().map(|o| o.stabilizer.basis()).collect();
        Ok(Self {
            lattice_rank: n,
            line_count: lines.len(),
            planes: plane_maps,
            gamma1,
            ker_gamma0: ker_gamma0 as usize,
            iota2: stacked_compounds(bases.iter().copied(), 2, binomial(n, 2)),
            phi1: stacked_compounds(bases.iter().copied(), 3, binomial(n, 3)),
            phi2: stacked_compounds(bases.iter().copied(), 4, binomial(n, 4)),
        })
    }

    fn plane_count(&self) -> usize {
        self.planes.len()
    }

    /// `J = Σ_α j^α(ker β^α_1) ⊆ ker γ_1`.
    pub fn j_lattice(&self) -> Lattice {
        let mut gens = IntMatrix::zeros(0, self.line_count);
        for pl in &self.planes {
            let k = kernel_matrix(&pl.beta1);
            gens = gens.vstack(&embed_rows(&k, &pl.lines, self.line_count));
        }
        Lattice::span(&gens)
    }

    /// `dim H_0(C²) − dim H_0(C¹_0)` over Q or, with `Some(p)`, over F_p.
    fn ker_phi0_rank(&self, p: Option<u64>) -> usize {
        let rk = |m: &IntMatrix| match p {
            Some(p) => rank_mod_p(m, p),
            None => rank(m),
        };
        let upper: usize = self
            .planes
            .iter()
            .map(|pl| binomial(4, 2) - rk(&pl.beta1) + pl.ker_beta0)
            .sum();
        let lower = binomial(self.lattice_rank, 2) - rk(&self.gamma1) + self.ker_gamma0;
        upper - lower
    }

    pub fn integral(&self) -> Result<Codim3Integral> {
        let n = self.lattice_rank;
        let l2 = self.plane_count();
        let lm = |m: &IntMatrix| LatticeMap::new(m.clone(), "", "");

        let coker_phi2 = cokernel(&lm(&self.phi2));
        let rk_phi2 = rank(&self.phi2);
        let coker_phi1 = cokernel(&lm(&self.phi1));
        let rk_phi1 = rank(&self.phi1);

        let k_gamma = Lattice::span(&kernel_matrix(&self.gamma1));
        let j = self.j_lattice();
        if !j.is_sublattice_of(&k_gamma) {
            return Err(Error::Consistency("j(ker β^α_1) is not inside ker γ_1".into()));
        }
        let coker_phi1_dd = k_gamma.quotient_by(&j);
        let sum_ker_beta1: usize = self.planes.iter().map(|pl| pl.lines.len() - rank(&pl.beta1)).sum();
        // each j^α is a coordinate inclusion, so φ''_1 is injective plane by plane
        let ker_phi1_dd = sum_ker_beta1 - j.rank();

        // ker φ'_0 = {x : x·ı_2 ∈ im γ_1} / ⊕ im β^α_1
        let w = self.iota2.rows();
        let pre = Lattice::span(&first_block(&kernel_matrix(&self.iota2.vstack(&self.gamma1)), w));
        let mut rel = IntMatrix::zeros(0, w);
        for (a, pl) in self.planes.iter().enumerate() {
            let mut block = IntMatrix::zeros(pl.beta1.rows(), w);
            for r in 0..pl.beta1.rows() {
                for c in 0..6 {
                    block.set(r, 6 * a + c, pl.beta1.get(r, c).clone());
                }
            }
            rel = rel.vstack(&block);
        }
        let rel = Lattice::span(&rel);
        if !rel.is_sublattice_of(&pre) {
            return Err(Error::Consistency("im β^α_1 does not map into im γ_1".into()));
        }
        let ker_phi0_prime = pre.quotient_by(&rel);

        let top = FgAbelianGroup::free(1);
        let h2 = FgAbelianGroup::free(binomial(n, 5) + l2 - rk_phi2);
        let h1 = coker_phi2.direct_sum(&FgAbelianGroup::free(4 * l2 - rk_phi1 + ker_phi1_dd));
        let coker_phi1_free = coker_phi1.free_rank + coker_phi1_dd.free_rank;
        let d0 = coker_phi1_free + self.ker_phi0_rank(None);
        if ker_phi0_prime.free_rank > self.ker_phi0_rank(None) {
            return Err(Error::Consistency("ker φ'_0 is larger than ker φ_0".into()));
        }

        Ok(Codim3Integral {
            groups_above_zero: vec![h1, h2, top],
            t1_prime: coker_phi1.torsion(),
            t1_double_prime: coker_phi1_dd.torsion(),
            t0_prime: ker_phi0_prime.torsion(),
            coker_phi1_free,
            d0,
            coker_gamma1: cokernel(&lm(&self.gamma1)),
            plane_cokers: self.planes.iter().map(|pl| cokernel(&lm(&pl.beta1))).collect(),
        })
    }

    /// `dim_{F_p} H_s`, `s = 0..=3`.
    pub fn modp_ranks(&self, p: u64) -> Vec<usize> {
        let n = self.lattice_rank;
        let l2 = self.plane_count();
        let rk2 = rank_mod_p(&self.phi2, p);
        let rk1 = rank_mod_p(&self.phi1, p);
        let mut jp = IntMatrix::zeros(0, self.line_count);
        let mut sum_ker = 0;
        for pl in &self.planes {
            let k = left_nullspace_mod_p(&pl.beta1, p);
            sum_ker += k.rows();
            jp = jp.vstack(&embed_rows(&k, &pl.lines, self.line_count));
        }
        let dim_j = rank_mod_p(&jp, p);
        let ker_gamma1 = self.line_count - rank_mod_p(&self.gamma1, p);
        let d0 = binomial(n, 3) - rk1 + ker_gamma1 - dim_j + self.ker_phi0_rank(Some(p));
        let d1 = binomial(n, 4) - rk2 + 4 * l2 - rk1 + sum_ker - dim_j;
        let d2 = binomial(n, 5) + l2 - rk2;
        vec![d0, d1, d2, 1]
    }

    /// `log_p |coker φ''_1 ⊗ Z/p^k| = log_p [ker_R γ_1 : Σ j^α ker_R β^α_1]`.
    pub fn modular_double_prime(&self, p: u64, k: u32) -> u64 {
        let q = p.pow(k);
        let l1 = self.line_count;
        let k_r = Lattice::span(&kernel_mod(&self.gamma1, q));
        let mut gens = IntMatrix::diagonal(l1, l1, &vec![Int::from(q); l1]);
        for pl in &self.planes {
            let kb = kernel_mod(&pl.beta1, q);
            gens = gens.vstack(&embed_rows(&kb, &pl.lines, l1));
        }
        let j_r = Lattice::span(&gens);
        let order = k_r.quotient_by(&j_r).torsion_order();
        valuation(&order, p) as u64
    }

    /// `log_p |coker_{Z/p^k} φ_1|`, or `None` when `coker γ_1` has
    /// p-torsion and the count no longer determines the extension.
    pub fn modular_count(&self, p: u64, k: u32) -> Option<u64> {
        let coker_gamma = cokernel(&LatticeMap::new(self.gamma1.clone(), "", ""));
        if !coker_gamma.p_part(p).is_empty() {
            return None;
        }
        Some(coker_log_order_mod(&self.phi1, p, k) + self.modular_double_prime(p, k))
    }
}
