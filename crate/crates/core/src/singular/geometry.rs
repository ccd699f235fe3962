//! Affine subspaces of the flattened internal space modulo lattice translations.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::rational::{inverse, rat_matrix, solve_left, vec_apply};
use crate::linalg::{hnf_full, snf, Int, IntMatrix, Lattice, Rat, RatMatrix, Subspace};
use crate::scheme::ProjectionScheme;

/// A Γ-orbit of affine subspaces: a direction and the canonical offset of
/// the orbit, which vanishes on the pivot columns of the direction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitKey {
    pub direction: Subspace,
    pub offset: Vec<Rat>,
}

/// Coordinates on `V / U` and the image of `Γ` there.
#[derive(Debug)]
pub struct Frame {
    direction: Subspace,
    free: Vec<usize>,
    /// Common denominator of the projected lattice.
    scale: Int,
    /// HNF basis of the scaled projected lattice.
    basis: IntMatrix,
    pivots: Vec<usize>,
    /// Rows of the HNF transform producing `basis`.
    transform: IntMatrix,
    stabilizer: Lattice,
}

impl Frame {
    fn new(p: &RatMatrix, direction: &Subspace) -> Self {
        let free = direction.free_columns();
        let projected: Vec<Vec<Rat>> = p
            .data
            .iter()
            .map(|row| {
                let r = direction.reduce(row);
                free.iter().map(|&c| r[c].clone()).collect()
            })
            .collect();
        let scale = projected
            .iter()
            .flatten()
            .fold(Int::one(), |acc, q| acc.lcm(q.denom()));
        let s = Rat::from_integer(scale.clone());
        let rows = projected
            .iter()
            .map(|r| r.iter().map(|q| (q * &s).to_integer()).collect())
            .collect();
        let m = IntMatrix::from_rows(free.len(), rows);
        let h = hnf_full(&m);
        let keep: Vec<usize> = (0..h.rank).collect();
        let kernel_rows: Vec<usize> = (h.rank..m.rows()).collect();
        Self {
            direction: direction.clone(),
            basis: h.h.select_rows(&keep),
            transform: h.u.select_rows(&keep),
            stabilizer: Lattice::span(&h.u.select_rows(&kernel_rows)),
            pivots: h.pivots,
            free,
            scale,
        }
    }

    pub fn stabilizer(&self) -> &Lattice {
        &self.stabilizer
    }

    fn scaled_coordinates(&self, x: &[Rat]) -> Vec<Rat> {
        let r = self.direction.reduce(x);
        let s = Rat::from_integer(self.scale.clone());
        self.free.iter().map(|&c| &r[c] * &s).collect()
    }

    fn lift(&self, z: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.direction.ambient_dim()];
        let s = Rat::from_integer(self.scale.clone());
        for (&c, v) in self.free.iter().zip(z) {
            out[c] = v / &s;
        }
        out
    }

    /// The representative of `x + U + Γ` in the fundamental box.
    pub fn canonical(&self, x: &[Rat]) -> Vec<Rat> {
        let mut z = self.scaled_coordinates(x);
        for (i, &c) in self.pivots.iter().enumerate() {
            let h = Rat::from_integer(self.basis.get(i, c).clone());
            let t = (&z[c] / &h).floor();
            if t.is_zero() {
                continue;
            }
            for (y, b) in z.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *y -= &t * Rat::from_integer(b.clone());
                }
            }
        }
        self.lift(&z)
    }

    /// Some `γ` with `γ·P ∈ t + U`, if one exists.
    pub fn solve(&self, t: &[Rat]) -> Option<Vec<Int>> {
        let mut z = self.scaled_coordinates(t);
        let mut coeff = vec![Int::zero(); self.pivots.len()];
        for (i, &c) in self.pivots.iter().enumerate() {
            if z[c].is_zero() {
                continue;
            }
            if !z[c].is_integer() {
                return None;
            }
            let (q, r) = z[c].to_integer().div_rem(self.basis.get(i, c));
            if !r.is_zero() {
                return None;
            }
            let qr = Rat::from_integer(q.clone());
            for (y, b) in z.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *y -= &qr * Rat::from_integer(b.clone());
                }
            }
            coeff[i] = q;
        }
        if !z.iter().all(Zero::is_zero) {
            return None;
        }
        let m = IntMatrix::from_rows(coeff.len(), vec![coeff]);
        Some((&m * &self.transform).row(0).to_vec())
    }
}

/// Flattened lattice geometry of a scheme, with a cache of frames per direction.
pub struct Geometry {
    p: RatMatrix,
    degree: usize,
    frames: Mutex<HashMap<Subspace, Arc<Frame>>>,
}

impl Geometry {
    pub fn new(scheme: &ProjectionScheme) -> Self {
        Self {
            p: scheme.lattice_matrix(),
            degree: scheme.field.degree(),
            frames: Mutex::new(HashMap::new()),
        }
    }

    pub fn lattice_rank(&self) -> usize {
        self.p.rows
    }

    pub fn flat_dim(&self) -> usize {
        self.p.cols
    }

    /// Dimension over the field of a flattened subspace.
    pub fn field_dim(&self, u: &Subspace) -> usize {
        u.dim() / self.degree
    }

    pub fn frame(&self, u: &Subspace) -> Arc<Frame> {
        if let Some(f) = self.frames.lock().unwrap().get(u) {
            return f.clone();
        }
        let f = Arc::new(Frame::new(&self.p, u));
        self.frames.lock().unwrap().entry(u.clone()).or_insert(f).clone()
    }

    /// `{γ : γ·P ∈ U}`.
    pub fn stabilizer(&self, u: &Subspace) -> Lattice {
        self.frame(u).stabilizer.clone()
    }

    pub fn key(&self, direction: Subspace, point: &[Rat]) -> OrbitKey {
        let offset = self.frame(&direction).canonical(point);
        OrbitKey { direction, offset }
    }

    pub fn translation(&self, gamma: &[Int]) -> Vec<Rat> {
        let g: Vec<Rat> = gamma.iter().map(|x| Rat::from_integer(x.clone())).collect();
        vec_apply(&g, &self.p)
    }

    /// True when the offsets differ by an element of `Γ·P + U`.
    pub fn same_orbit(&self, a: &OrbitKey, b: &OrbitKey) -> bool {
        if a.direction != b.direction {
            return false;
        }
        let diff: Vec<Rat> = b.offset.iter().zip(&a.offset).map(|(x, y)| x - y).collect();
        self.frame(&a.direction).solve(&diff).is_some()
    }

    /// Whether some translate of `small` lies in the representative of `big`.
    pub fn incident(&self, small: &OrbitKey, big: &OrbitKey) -> bool {
        small.direction.is_subspace_of(&big.direction)
            && self.frame(&big.direction).canonical(&small.offset) == big.offset
    }

    /// Image of an orbit under a linear map of `V` that preserves `Γ·P`.
    pub fn act(&self, g: &RatMatrix, key: &OrbitKey) -> OrbitKey {
        let direction = key.direction.image(g);
        let point = vec_apply(&key.offset, g);
        self.key(direction, &point)
    }

    /// All orbits of `(A + γ) ∩ B`, `γ ∈ Γ`, of dimension below `A`'s.
    pub fn intersect(&self, a: &OrbitKey, b: &OrbitKey) -> Result<Vec<OrbitKey>> {
        if a.direction.is_subspace_of(&b.direction) {
            return Ok(Vec::new());
        }
        let w = a.direction.intersection(&b.direction);
        let s = a.direction.sum(&b.direction);
        let delta: Vec<Rat> = b.offset.iter().zip(&a.offset).map(|(x, y)| x - y).collect();
        let frame_s = self.frame(&s);
        let Some(gamma0) = frame_s.solve(&delta) else {
            return Ok(Vec::new());
        };
        let k = frame_s.stabilizer.clone();
        let k12 = self.stabilizer(&a.direction).sum(&self.stabilizer(&b.direction));
        if k12.rank() < k.rank() {
            return Err(Error::InfiniteIntersection);
        }
        let reps = coset_representatives(&k, &k12);

        let da = a.direction.basis();
        let db = b.direction.basis();
        let mut neg_b = db.clone();
        for row in &mut neg_b.data {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        let stacked = da.vstack(&neg_b);
        let mut out = BTreeSet::new();
        for rep in reps {
            let gamma: Vec<Int> = gamma0.iter().zip(&rep).map(|(x, y)| x + y).collect();
            let shift = self.translation(&gamma);
            let base: Vec<Rat> = a.offset.iter().zip(&shift).map(|(x, y)| x + y).collect();
            let v: Vec<Rat> = b.offset.iter().zip(&base).map(|(x, y)| x - y).collect();
            let coeff = solve_left(&stacked, &v).ok_or_else(|| {
                Error::Consistency("intersection system has no rational solution".into())
            })?;
            let along_a = vec_apply(&coeff[..da.rows], da);
            let point: Vec<Rat> = base.iter().zip(&along_a).map(|(x, y)| x + y).collect();
            out.insert(self.key(w.clone(), &point));
        }
        Ok(out.into_iter().collect())
    }
}

/// Representatives of `K / K'` for a full-rank sublattice `K' ⊆ K`, as
/// vectors of the ambient lattice.
pub fn coset_representatives(k: &Lattice, sub: &Lattice) -> Vec<Vec<Int>> {
    let n = k.ambient_rank();
    if k.rank() == 0 {
        return vec![vec![Int::zero(); n]];
    }
    let coords = k.coordinates_of(sub.basis()).expect("sublattice");
    let s = snf(&coords);
    let rinv = inverse(&rat_matrix(&s.right)).expect("unimodular");
    let rinv = IntMatrix::from_rows(
        rinv.cols,
        rinv.data.iter().map(|r| r.iter().map(|q| q.to_integer()).collect()).collect(),
    );
    let ranges: Vec<Vec<Int>> = s
        .factors
        .iter()
        .map(|d| {
            let mut v = Vec::new();
            let mut x = Int::zero();
            while &x < d {
                v.push(x.clone());
                x += 1;
            }
            v
        })
        .collect();
    let lift = &rinv * k.basis();
    ranges
        .into_iter()
        .multi_cartesian_product()
        .map(|z| {
            let mut full = z;
            full.resize(k.rank(), Int::zero());
            lift.apply_row(&full)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::rat;

    fn lattice(rows: &[Vec<i64>]) -> Lattice {
        Lattice::span(&IntMatrix::from_i64_rows(rows[0].len(), rows))
    }

    #[test]
    fn cosets_of_index_six() {
        let k = lattice(&[vec![1, 0], vec![0, 1]]);
        let sub = lattice(&[vec![2, 0], vec![0, 3]]);
        let reps = coset_representatives(&k, &sub);
        assert_eq!(reps.len(), 6);
        let classes: BTreeSet<(Int, Int)> = reps
            .iter()
            .map(|v| (v[0].mod_floor(&Int::from(2)), v[1].mod_floor(&Int::from(3))))
            .collect();
        assert_eq!(classes.len(), 6);
    }

    #[test]
    fn trivial_quotient() {
        let k = lattice(&[vec![1, 0]]);
        assert_eq!(coset_representatives(&k, &k).len(), 1);
        assert_eq!(coset_representatives(&Lattice::zero(2), &Lattice::zero(2)).len(), 1);
    }

    #[test]
    fn frame_reduces_into_box() {
        let p = RatMatrix::from_rows(2, vec![vec![rat(2, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 3)]]);
        let f = Frame::new(&p, &Subspace::zero(2));
        assert_eq!(f.canonical(&[rat(5, 1), rat(-1, 2)]), vec![rat(1, 1), rat(1, 6)]);
        assert_eq!(f.solve(&[rat(4, 1), rat(2, 3)]), Some(vec![Int::from(2), Int::from(2)]));
        assert_eq!(f.solve(&[rat(1, 1), rat(0, 1)]), None);
        assert_eq!(f.stabilizer().rank(), 0);
    }
}
