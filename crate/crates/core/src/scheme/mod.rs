//! Canonical projection schemes `(V, Γ, 𝒲)` with exact internal coordinates.

pub mod catalog;
pub mod field;
pub mod file;

pub use catalog::{catalog, find, CatalogEntry, Expected};
pub use field::{FieldElem, FieldVector, NumberField};
pub use file::{parse_scheme, to_toml};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::rational::{inverse, rational_rank};
use crate::linalg::{IntMatrix, Rat, RatMatrix, Subspace};

/// How a hyperplane's direction is given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HyperplaneKind {
    /// `n − 1` field vectors spanning the direction over the field.
    Directions(Vec<FieldVector>),
    /// A normal for the standard bilinear form.
    Normal(FieldVector),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub kind: HyperplaneKind,
    pub offset: FieldVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionScheme {
    pub name: String,
    pub d: usize,
    pub n: usize,
    pub field: NumberField,
    /// `n + d` columns, each the internal image of a lattice basis vector.
    pub pi_int: Vec<FieldVector>,
    pub hyperplanes: Vec<Hyperplane>,
    /// Unimodular matrices acting on `Γ` by `x ↦ x·g`.
    pub point_group: Option<Vec<IntMatrix>>,
}

impl ProjectionScheme {
    /// Rank of `Γ`.
    pub fn rank(&self) -> usize {
        self.n + self.d
    }

    /// `ν = (n + d) / n`.
    pub fn nu(&self) -> Result<usize> {
        if self.n == 0 || !self.rank().is_multiple_of(self.n) {
            return Err(Error::NonIntegerNu { n: self.n, d: self.d });
        }
        Ok(self.rank() / self.n)
    }

    /// Dimension of `V` over `Q`.
    pub fn flat_dim(&self) -> usize {
        self.n * self.field.degree()
    }

    pub fn flatten(&self, v: &[FieldElem]) -> Vec<Rat> {
        self.field.flatten(v)
    }

    /// Rows are the flattened images of the lattice basis.
    pub fn lattice_matrix(&self) -> RatMatrix {
        let rows = self.pi_int.iter().map(|c| self.flatten(c)).collect();
        RatMatrix::from_rows(self.flat_dim(), rows)
    }

    /// Spanning field vectors of hyperplane `i`'s direction.
    pub fn directions(&self, i: usize) -> Vec<FieldVector> {
        match &self.hyperplanes[i].kind {
            HyperplaneKind::Directions(ds) => ds.clone(),
            HyperplaneKind::Normal(nu) => normal_complement(&self.field, nu),
        }
    }

    /// Flattened direction of hyperplane `i`.
    pub fn hyperplane_subspace(&self, i: usize) -> Subspace {
        let rows = self.field.q_span_rows(&self.directions(i));
        Subspace::span(&RatMatrix::from_rows(self.flat_dim(), rows))
    }

    pub fn hyperplane_offset(&self, i: usize) -> Vec<Rat> {
        self.flatten(&self.hyperplanes[i].offset)
    }

    /// The action of `g` on flattened `V`, `P⁻¹·g·P`; needs `rank = flat_dim`.
    pub fn internal_action(&self, g: &IntMatrix) -> Result<RatMatrix> {
        let p = self.lattice_matrix();
        let pinv = inverse(&p).ok_or_else(|| {
            Error::MalformedScheme("a point group needs Γ to span V over Q exactly".into())
        })?;
        let gq = crate::linalg::rational::rat_matrix(g);
        Ok(pinv.mul(&gq).mul(&p))
    }

    /// Checks every invariant that does not need orbit enumeration.
    pub fn validate(&self) -> Result<()> {
        let deg = self.field.degree();
        let bad = |m: String| Err(Error::MalformedScheme(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        self.nu()?;
        if self.pi_int.len() != self.rank() {
            return bad(format!("pi_int has {} columns, expected {}", self.pi_int.len(), self.rank()));
        }
        let vec_ok = |v: &FieldVector| v.len() == self.n && v.iter().all(|e| e.len() == deg);
        if !self.pi_int.iter().all(vec_ok) {
            return Err(Error::MalformedField("pi_int entries have the wrong shape".into()));
        }
        if rational_rank(&self.lattice_matrix()) != self.rank() {
            return Err(Error::ProjectionNotInjective);
        }
        if self.hyperplanes.is_empty() {
            return bad("no hyperplanes".into());
        }
        let mut meet = Subspace::full(self.flat_dim());
        for (i, h) in self.hyperplanes.iter().enumerate() {
            if !vec_ok(&h.offset) {
                return Err(Error::MalformedField(format!("hyperplane {i}: bad offset")));
            }
            match &h.kind {
                HyperplaneKind::Directions(ds) => {
                    if ds.len() != self.n - 1 || !ds.iter().all(vec_ok) {
                        return bad(format!("hyperplane {i}: need {} direction vectors", self.n - 1));
                    }
                }
                HyperplaneKind::Normal(nu) => {
                    if !vec_ok(nu) || nu.iter().all(|e| self.field.is_zero(e)) {
                        return bad(format!("hyperplane {i}: bad normal"));
                    }
                }
            }
            let u = self.hyperplane_subspace(i);
            if u.dim() != (self.n - 1) * deg {
                return bad(format!("hyperplane {i}: directions are dependent"));
            }
            meet = meet.intersection(&u);
        }
        if meet.dim() != 0 {
            return Err(Error::NormalsDoNotSpan);
        }
        if let Some(gs) = &self.point_group {
            for (index, g) in gs.iter().enumerate() {
                if g.rows() != self.rank() || g.cols() != self.rank() {
                    return bad(format!("point group element {index} has the wrong shape"));
                }
                let det = g.det();
                if det != 1.into() && det != (-1).into() {
                    return bad(format!("point group element {index} is not unimodular"));
                }
            }
            if self.rank() != self.flat_dim() {
                return bad("a point group needs Γ to span V over Q exactly".into());
            }
        }
        Ok(())
    }
}

/// `e_k − (ν_k/ν_i)·e_i` for `k ≠ i`, `i` the first nonzero entry of `ν`.
fn normal_complement(field: &NumberField, nu: &FieldVector) -> Vec<FieldVector> {
    let n = nu.len();
    let Some(i) = nu.iter().position(|e| !field.is_zero(e)) else {
        return Vec::new();
    };
    let inv = field.inv(&nu[i]).unwrap();
    (0..n)
        .filter(|&k| k != i)
        .map(|k| {
            let mut v = vec![field.zero(); n];
            v[k] = field.one();
            v[i] = field.neg(&field.mul(&nu[k], &inv));
            v
        })
        .collect()
}

/// True if every entry of a flattened vector is zero.
pub fn is_zero_vector(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::rat;

    fn toy(normals: Vec<FieldVector>) -> ProjectionScheme {
        let f = NumberField::rationals();
        let q = |x: i64| vec![rat(x, 1)];
        ProjectionScheme {
            name: "toy".into(),
            d: 2,
            n: 2,
            field: f,
            pi_int: vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(1), q(1)], vec![q(2), q(1)]],
            hyperplanes: normals
                .into_iter()
                .map(|nu| Hyperplane {
                    kind: HyperplaneKind::Normal(nu),
                    offset: vec![q(0), q(0)],
                })
                .collect(),
            point_group: None,
        }
    }

    #[test]
    fn rational_toy_is_not_injective() {
        let q = |x: i64| vec![rat(x, 1)];
        let s = toy(vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
        assert!(matches!(s.validate(), Err(Error::ProjectionNotInjective)));
    }

    #[test]
    fn parallel_normals_do_not_span() {
        let f = NumberField::new(vec![-5, 0, 1]).unwrap();
        let e = |a: i64, b: i64| vec![rat(a, 1), rat(b, 1)];
        let mut s = toy(vec![]);
        s.field = f;
        s.pi_int = vec![
            vec![e(1, 0), e(0, 0)],
            vec![e(0, 1), e(0, 0)],
            vec![e(0, 0), e(1, 0)],
            vec![e(0, 0), e(0, 1)],
        ];
        let h = |nu: FieldVector| Hyperplane {
            kind: HyperplaneKind::Normal(nu),
            offset: vec![e(0, 0), e(0, 0)],
        };
        s.hyperplanes = vec![h(vec![e(1, 0), e(0, 0)]), h(vec![e(0, 1), e(0, 0)])];
        assert!(matches!(s.validate(), Err(Error::NormalsDoNotSpan)));
        s.hyperplanes.push(h(vec![e(0, 0), e(1, 1)]));
        s.validate().unwrap();
    }

    #[test]
    fn nu_must_be_integral() {
        let mut s = toy(vec![]);
        s.d = 3;
        assert!(matches!(s.nu(), Err(Error::NonIntegerNu { n: 2, d: 3 })));
        assert_eq!(
            Error::NonIntegerNu { n: 2, d: 3 }.to_string(),
            "ν=(n+d)/n not an integer (n=2, d=3)"
        );
    }
}
