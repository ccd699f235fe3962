use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::rational::{solve_left, Rat, RatMatrix};
use crate::linalg::Int;

/// `Q(α)` for α a root of a monic irreducible integer polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    /// Coefficients from the constant term up; the last one is 1.
    min_poly: Vec<i64>,
}

/// An element `Σ c_j α^j`, `j < degree`.
pub type FieldElem = Vec<Rat>;

/// A vector of `n` field elements.
pub type FieldVector = Vec<FieldElem>;

impl NumberField {
    pub fn new(min_poly: Vec<i64>) -> Result<Self> {
        if min_poly.len() < 2 {
            return Err(Error::MalformedField("minimal polynomial must have degree ≥ 1".into()));
        }
        if *min_poly.last().unwrap() != 1 {
            return Err(Error::MalformedField("minimal polynomial must be monic".into()));
        }
        let f = Self { min_poly };
        if f.degree() <= 3 {
            if let Some(r) = f.integer_root() {
                return Err(Error::MalformedField(format!(
                    "minimal polynomial has the rational root {r}"
                )));
            }
        } else if f.integer_root().is_some() {
            return Err(Error::MalformedField("minimal polynomial is reducible".into()));
        }
        Ok(f)
    }

    pub fn rationals() -> Self {
        Self { min_poly: vec![0, 1] }
    }

    pub fn min_poly(&self) -> &[i64] {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    /// A monic integer polynomial has rational roots only among the divisors
    /// of its constant term; for degree ≤ 3 no such root means irreducible.
    fn integer_root(&self) -> Option<i64> {
        let c0 = self.min_poly[0];
        if c0 == 0 {
            return (self.degree() > 1).then_some(0);
        }
        let bound = c0.unsigned_abs() as i64;
        (1..=bound)
            .filter(|d| c0 % d == 0)
            .flat_map(|d| [d, -d])
            .find(|&x| self.eval_int(x) == 0)
    }

    fn eval_int(&self, x: i64) -> i128 {
        self.min_poly
            .iter()
            .rev()
            .fold(0i128, |acc, &c| acc * x as i128 + c as i128)
    }

    pub fn zero(&self) -> FieldElem {
        vec![Rat::zero(); self.degree()]
    }

    pub fn one(&self) -> FieldElem {
        self.from_rat(Rat::one())
    }

    pub fn from_rat(&self, r: Rat) -> FieldElem {
        let mut e = self.zero();
        e[0] = r;
        e
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        self.from_rat(Rat::from_integer(Int::from(n)))
    }

    /// `a + b·α`, convenient for quadratic fields.
    pub fn elem(&self, coeffs: &[Rat]) -> FieldElem {
        let mut e = self.zero();
        for (i, c) in coeffs.iter().enumerate() {
            e[i] = c.clone();
        }
        e
    }

    /// The generator α.
    pub fn generator(&self) -> FieldElem {
        if self.degree() == 1 {
            return self.from_int(-self.min_poly[0]);
        }
        let mut e = self.zero();
        e[1] = Rat::one();
        e
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        a.iter().map(|x| -x).collect()
    }

    pub fn scale(&self, r: &Rat, a: &FieldElem) -> FieldElem {
        a.iter().map(|x| r * x).collect()
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let m = self.degree();
        let mut prod = vec![Rat::zero(); 2 * m - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        // α^m = −Σ c_j α^j
        for k in (m..prod.len()).rev() {
            let lead = std::mem::take(&mut prod[k]);
            if lead.is_zero() {
                continue;
            }
            for j in 0..m {
                let c = self.min_poly[j];
                if c != 0 {
                    prod[k - m + j] -= &lead * Rat::from_integer(Int::from(c));
                }
            }
        }
        prod.truncate(m);
        prod
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        a.iter().all(Zero::is_zero)
    }

    /// Matrix of `x ↦ x·a` on the basis `1, α, …` (row convention).
    pub fn mul_matrix(&self, a: &FieldElem) -> RatMatrix {
        let m = self.degree();
        let rows = (0..m)
            .map(|j| {
                let mut e = self.zero();
                e[j] = Rat::one();
                self.mul(&e, a)
            })
            .collect();
        RatMatrix::from_rows(m, rows)
    }

    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if self.is_zero(a) {
            return None;
        }
        solve_left(&self.mul_matrix(a), &self.one())
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    pub fn pow(&self, a: &FieldElem, k: u32) -> FieldElem {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// `Q`-coordinates of a field vector in the basis `{α^j e_i}`, i-major.
    pub fn flatten(&self, v: &[FieldElem]) -> Vec<Rat> {
        v.iter().flat_map(|e| e.iter().cloned()).collect()
    }

    pub fn unflatten(&self, v: &[Rat]) -> FieldVector {
        v.chunks(self.degree()).map(|c| c.to_vec()).collect()
    }

    /// Flattened `Q`-spanning set of the `F`-span of `vectors`:
    /// all `α^j·v` for `j < degree`.
    pub fn q_span_rows(&self, vectors: &[FieldVector]) -> Vec<Vec<Rat>> {
        let mut out = Vec::new();
        for v in vectors {
            let mut a = self.one();
            for _ in 0..self.degree() {
                let w: FieldVector = v.iter().map(|x| self.mul(x, &a)).collect();
                out.push(self.flatten(&w));
                a = self.mul(&a, &self.generator());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::rat;

    fn golden() -> NumberField {
        NumberField::new(vec![-1, -1, 1]).unwrap()
    }

    #[test]
    fn tau_squared() {
        let f = golden();
        let t = f.generator();
        // τ² = τ + 1
        assert_eq!(f.mul(&t, &t), vec![rat(1, 1), rat(1, 1)]);
        let ti = f.inv(&t).unwrap();
        assert_eq!(f.mul(&t, &ti), f.one());
        // 1/τ = τ − 1
        assert_eq!(ti, vec![rat(-1, 1), rat(1, 1)]);
    }

    #[test]
    fn reducible_rejected() {
        assert!(NumberField::new(vec![-4, 0, 1]).is_err());
        assert!(NumberField::new(vec![-5, 0, 2]).is_err());
        assert!(NumberField::new(vec![-1, -2, 1, 1]).is_ok());
        assert!(NumberField::new(vec![-2, 1, 0, 1]).is_err());
    }

    #[test]
    fn flatten_reads_out_basis() {
        let f = NumberField::new(vec![-5, 0, 1]).unwrap();
        let v = vec![vec![rat(1, 1), rat(1, 1)], f.zero()];
        assert_eq!(f.flatten(&v), vec![rat(1, 1), rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(f.flatten(&[f.zero(), f.zero()]), vec![rat(0, 1); 4]);
        assert_eq!(f.unflatten(&f.flatten(&v)), v);
    }

    #[test]
    fn cubic_arithmetic() {
        // 2cos(2π/7): x³ + x² − 2x − 1
        let f = NumberField::new(vec![-1, -2, 1, 1]).unwrap();
        let c = f.generator();
        let c3 = f.pow(&c, 3);
        // c³ = −c² + 2c + 1
        assert_eq!(c3, vec![rat(1, 1), rat(2, 1), rat(-1, 1)]);
        let x = vec![rat(2, 3), rat(-1, 1), rat(5, 2)];
        let xi = f.inv(&x).unwrap();
        assert_eq!(f.mul(&x, &xi), f.one());
    }
}
