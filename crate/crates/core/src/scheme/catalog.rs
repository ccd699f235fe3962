//! Built-in schemes: planar tilings with dihedral symmetry and icosahedral
//! tilings in three dimensions.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::field::{FieldElem, FieldVector, NumberField};
use super::{Hyperplane, HyperplaneKind, ProjectionScheme};
use crate::linalg::rational::{inverse, rat, rat_matrix, vec_apply};
use crate::linalg::{FgAbelianGroup, Int, IntMatrix, Rat, RatMatrix};

/// `log_p` of the element count of a cokernel over `Z/p^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularCount {
    pub p: u64,
    pub k: u32,
    pub log: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorsionRank {
    pub p: u64,
    pub k: usize,
    pub rank: usize,
}

/// Published values a computation can be checked against. `None` entries
/// and empty lists mean "not stated".
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expected {
    pub groups: Vec<Option<FgAbelianGroup>>,
    pub torsion: Vec<Option<FgAbelianGroup>>,
    pub t1_prime: Option<FgAbelianGroup>,
    pub t1_double_prime: Option<FgAbelianGroup>,
    pub t0_prime: Option<FgAbelianGroup>,
    /// `(r, L_r)`.
    pub orbit_counts: Vec<(usize, usize)>,
    pub torsion_ranks: Vec<TorsionRank>,
    pub ktheory: Option<(FgAbelianGroup, FgAbelianGroup)>,
    /// Torsion of the cokernel of each plane's degree-1 map.
    pub plane_coker_torsion: Option<FgAbelianGroup>,
    /// Element count of the cokernel of the restricted degree-1 map over `Z/p^k`.
    pub modular_coker: Option<ModularCount>,
}

impl Expected {
    pub fn is_empty(&self) -> bool {
        *self == Expected::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub scheme: ProjectionScheme,
    pub description: String,
    pub expected: Option<Expected>,
}

fn g(s: &str) -> FgAbelianGroup {
    s.parse().expect("catalog group literal")
}

fn groups(list: &[&str]) -> Vec<Option<FgAbelianGroup>> {
    list.iter().map(|s| (*s != "?").then(|| g(s))).collect()
}

fn rows_expected(list: &[&str]) -> Expected {
    Expected {
        groups: groups(list),
        ..Expected::default()
    }
}

/// All thirteen built-in schemes, in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    let mut push = |scheme: ProjectionScheme, description: &str, expected: Expected| {
        out.push(CatalogEntry {
            scheme,
            description: description.into(),
            expected: (!expected.is_empty()).then_some(expected),
        })
    };

    push(
        dihedral("ammann-beenker", 8, Lines::Along),
        "octagonal, lines along the star",
        rows_expected(&["Z^9", "Z^5", "Z"]),
    );
    push(
        dihedral("ammann-beenker-decorated", 8, Lines::Both),
        "octagonal, lines along and between the star",
        rows_expected(&["Z^23", "Z^9", "Z"]),
    );
    push(
        dihedral("penrose", 10, Lines::Along),
        "decagonal, lines along the star",
        Expected {
            orbit_counts: vec![(0, 1)],
            ..rows_expected(&["Z^8", "Z^5", "Z"])
        },
    );
    push(
        generalized_penrose(rat(1, 4)),
        "decagonal, shifted lines, gamma = 1/4",
        rows_expected(&["Z^34", "Z^10", "Z"]),
    );
    push(
        dihedral("ttt", 10, Lines::Between),
        "decagonal, lines between the star",
        Expected {
            torsion_ranks: vec![
                TorsionRank { p: 5, k: 0, rank: 2 },
                TorsionRank { p: 5, k: 1, rank: 0 },
                TorsionRank { p: 5, k: 2, rank: 0 },
            ],
            ktheory: Some((g("Z^25 + Z_5^2"), g("Z^5"))),
            ..rows_expected(&["Z^24 + Z_5^2", "Z^5", "Z"])
        },
    );
    push(
        dihedral("socolar", 12, Lines::Along),
        "dodecagonal, lines along the star",
        rows_expected(&["Z^28", "Z^7", "Z"]),
    );
    push(
        dihedral("socolar-decorated", 12, Lines::Both),
        "dodecagonal, lines along and between the star",
        rows_expected(&["Z^59", "Z^12", "Z"]),
    );
    push(
        icosahedral("ammann-kramer", IcoLattice::Primitive, &[Axis::Two]),
        "primitive icosahedral lattice, planes normal to 2-fold axes",
        Expected {
            t1_prime: Some(g("0")),
            t1_double_prime: Some(g("Z_2")),
            t0_prime: Some(g("0")),
            ..rows_expected(&["Z^181 + Z_2", "Z^72 + Z_2", "Z^12", "Z"])
        },
    );
    push(
        icosahedral("dual-d6", IcoLattice::FaceCentred, &[Axis::Two]),
        "F-type icosahedral lattice, planes normal to 2-fold axes",
        Expected {
            t1_prime: Some(g("Z_2^6")),
            t1_double_prime: Some(g("Z_2^7")),
            t0_prime: Some(g("Z_2^15")),
            orbit_counts: vec![(2, 15)],
            torsion_ranks: vec![TorsionRank { p: 2, k: 0, rank: 27 }],
            plane_coker_torsion: Some(g("Z_2")),
            modular_coker: Some(ModularCount { p: 2, k: 2, log: 9 }),
            ..rows_expected(&["Z^331 + Z_2^26 + Z_4", "Z^102 + Z_2^4 + Z_4", "Z^12", "Z"])
        },
    );
    push(
        icosahedral("danzer", IcoLattice::FaceCentred, &[Axis::Five]),
        "F-type icosahedral lattice, planes normal to 5-fold axes",
        Expected {
            t1_prime: Some(g("0")),
            t1_double_prime: Some(g("Z_2")),
            t0_prime: Some(g("0")),
            orbit_counts: vec![(0, 1)],
            ..rows_expected(&["Z^20 + Z_2", "Z^16", "Z^7", "Z"])
        },
    );
    push(
        icosahedral("canonical-d6", IcoLattice::FaceCentred, &[Axis::Five, Axis::Three]),
        "F-type icosahedral lattice, planes normal to 5-fold and 3-fold axes",
        Expected {
            t1_prime: Some(g("0")),
            t1_double_prime: Some(g("Z_2")),
            t0_prime: Some(g("0")),
            ..rows_expected(&["Z^205 + Z_2^2", "Z^72", "Z^7", "Z"])
        },
    );
    push(
        dihedral("octagonal-b", 8, Lines::Between),
        "octagonal, lines between the star",
        Expected {
            torsion: groups(&["Z_2", "0", "0"]),
            ..Expected::default()
        },
    );
    push(
        dihedral("heptagonal-b", 14, Lines::Between),
        "fourteen-fold star in four dimensions, lines between the star",
        Expected {
            torsion: groups(&["Z_7^4", "Z_7^3", "0", "0", "0"]),
            ..Expected::default()
        },
    );
    out
}

/// Catalog lookup by name.
pub fn find(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.scheme.name == name)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Lines {
    Along,
    Between,
    Both,
}

/// Real subfield `Q(2cos(2π/m))` of the `m`-th cyclotomic field.
fn real_cyclotomic(m: usize) -> NumberField {
    let poly = match m {
        8 => vec![-2, 0, 1],
        10 => vec![-1, -1, 1],
        12 => vec![-3, 0, 1],
        14 => vec![1, -2, -1, 1],
        _ => panic!("no real cyclotomic field for {m}"),
    };
    NumberField::new(poly).expect("catalog field")
}

fn euler_phi(m: usize) -> usize {
    (1..=m).filter(|k| num_integer::gcd(*k, m) == 1).count()
}

/// The plane `V = F·1 ⊕ F·ζ` with `ζ² = cζ − 1`, `c = 2cos(2π/m)`.
struct Plane {
    field: NumberField,
    c: FieldElem,
}

impl Plane {
    fn new(m: usize) -> Self {
        let field = real_cyclotomic(m);
        let c = field.generator();
        Self { field, c }
    }

    /// `ζ·(a + bζ) = −b + (a + cb)ζ`.
    fn times_zeta(&self, v: &FieldVector) -> FieldVector {
        let f = &self.field;
        vec![f.neg(&v[1]), f.add(&v[0], &f.mul(&self.c, &v[1]))]
    }

    /// Complex conjugation: `a + bζ ↦ (a + cb) − bζ`.
    fn conjugate(&self, v: &FieldVector) -> FieldVector {
        let f = &self.field;
        vec![f.add(&v[0], &f.mul(&self.c, &v[1])), f.neg(&v[1])]
    }

    fn zeta_pow(&self, k: usize) -> FieldVector {
        let f = &self.field;
        (0..k).fold(vec![f.one(), f.zero()], |v, _| self.times_zeta(&v))
    }

    fn add(&self, a: &FieldVector, b: &FieldVector) -> FieldVector {
        a.iter().zip(b).map(|(x, y)| self.field.add(x, y)).collect()
    }

    fn scale(&self, r: &Rat, a: &FieldVector) -> FieldVector {
        a.iter().map(|x| self.field.scale(r, x)).collect()
    }
}

fn line(dir: FieldVector, offset: FieldVector) -> Hyperplane {
    Hyperplane {
        kind: HyperplaneKind::Directions(vec![dir]),
        offset,
    }
}

/// Lattice coordinates of a vector of `V`, when it lies in `Γ`.
pub fn lattice_coordinates(s: &ProjectionScheme, v: &[FieldElem]) -> Option<Vec<Int>> {
    let pinv = inverse(&s.lattice_matrix())?;
    let x = vec_apply(&s.flatten(v), &pinv);
    x.iter().all(|q| q.is_integer()).then(|| x.iter().map(|q| q.to_integer()).collect())
}

/// The `m`-fold star lattice with lines through the origin.
fn dihedral(name: &str, m: usize, lines: Lines) -> ProjectionScheme {
    let pl = Plane::new(m);
    let rank = euler_phi(m);
    let pi_int: Vec<FieldVector> = (0..rank).map(|i| pl.zeta_pow(i)).collect();
    let origin = vec![pl.field.zero(), pl.field.zero()];
    let mut hyperplanes = Vec::new();
    if lines != Lines::Between {
        hyperplanes.extend((0..m / 2).map(|i| line(pl.zeta_pow(i), origin.clone())));
    }
    if lines != Lines::Along {
        hyperplanes.extend(
            (0..m / 2).map(|i| line(pl.add(&pl.zeta_pow(i), &pl.zeta_pow(i + 1)), origin.clone())),
        );
    }
    let mut s = ProjectionScheme {
        name: name.into(),
        d: rank - 2,
        n: 2,
        field: pl.field.clone(),
        pi_int,
        hyperplanes,
        point_group: None,
    };
    let rotation = star_map(&s, |v| pl.times_zeta(v));
    let reflection = star_map(&s, |v| pl.conjugate(v));
    s.point_group = Some(group_closure(&[rotation, reflection], 4 * m));
    s
}

/// Integer matrix of a linear map of `V` preserving `Γ`, from its action
/// on the lattice basis images.
fn star_map(s: &ProjectionScheme, f: impl Fn(&FieldVector) -> FieldVector) -> IntMatrix {
    let rows = s
        .pi_int
        .iter()
        .map(|b| lattice_coordinates(s, &f(b)).expect("map preserves the lattice"))
        .collect();
    IntMatrix::from_rows(s.rank(), rows)
}

/// Decagonal lattice with two shifted line families per direction. The
/// shifts are `−γζ^{2k+1}` and `γ(ζ^{2k+1} + ζ^{2k+2})` for lines along `ζ^{2k}`.
pub fn generalized_penrose(gamma: Rat) -> ProjectionScheme {
    let pl = Plane::new(10);
    let pi_int: Vec<FieldVector> = (0..4).map(|i| pl.zeta_pow(i)).collect();
    let mut hyperplanes = Vec::new();
    for k in 0..5 {
        let dir = pl.zeta_pow(2 * k);
        let a = pl.zeta_pow(2 * k + 1);
        let b = pl.zeta_pow(2 * k + 2);
        hyperplanes.push(line(dir.clone(), pl.scale(&-gamma.clone(), &a)));
        hyperplanes.push(line(dir, pl.scale(&gamma, &pl.add(&a, &b))));
    }
    let mut s = ProjectionScheme {
        name: "generalized-penrose".into(),
        d: 2,
        n: 2,
        field: pl.field.clone(),
        pi_int,
        hyperplanes,
        point_group: None,
    };
    let rot = star_map(&s, |v| pl.times_zeta(&pl.times_zeta(v)));
    s.point_group = Some(group_closure(&[rot], 5));
    s
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum IcoLattice {
    Primitive,
    FaceCentred,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Axis {
    Two,
    Three,
    Five,
}

fn golden() -> NumberField {
    NumberField::new(vec![-1, -1, 1]).expect("golden field")
}

/// Icosahedral lattice in `Q(τ)³` with planes through the origin normal to
/// the given axis classes.
fn icosahedral(name: &str, lattice: IcoLattice, axes: &[Axis]) -> ProjectionScheme {
    let f = golden();
    let tau = f.generator();
    let zero = f.zero();
    let one = f.one();
    let neg = |x: &FieldElem| f.neg(x);
    let star = [
        vec![zero.clone(), one.clone(), tau.clone()],
        vec![zero.clone(), neg(&one), tau.clone()],
        vec![one.clone(), tau.clone(), zero.clone()],
        vec![neg(&one), tau.clone(), zero.clone()],
        vec![tau.clone(), zero.clone(), one.clone()],
        vec![tau.clone(), zero.clone(), neg(&one)],
    ];
    let basis: Vec<Vec<i64>> = match lattice {
        IcoLattice::Primitive => (0..6).map(|i| (0..6).map(|j| (i == j) as i64).collect()).collect(),
        // coefficient sum even
        IcoLattice::FaceCentred => {
            let mut b = vec![vec![2, 0, 0, 0, 0, 0]];
            for i in 1..6 {
                let mut r = vec![0; 6];
                r[0] = -1;
                r[i] = 1;
                b.push(r);
            }
            b
        }
    };
    let pi_int: Vec<FieldVector> = basis
        .iter()
        .map(|row| {
            (0..3)
                .map(|c| {
                    row.iter().zip(&star).fold(f.zero(), |acc, (&k, v)| {
                        f.add(&acc, &f.scale(&rat(k, 1), &v[c]))
                    })
                })
                .collect()
        })
        .collect();

    let gens = rotation_generators(&f);
    let mut s = ProjectionScheme {
        name: name.into(),
        d: 3,
        n: 3,
        field: f.clone(),
        pi_int,
        hyperplanes: Vec::new(),
        point_group: None,
    };
    let p = s.lattice_matrix();
    let pinv = inverse(&p).expect("icosahedral lattice spans V");
    let to_lattice = |a: &RatMatrix| -> IntMatrix {
        let m = p.mul(a).mul(&pinv);
        let rows = m
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .map(|q| {
                        assert!(q.is_integer(), "rotation does not preserve the lattice");
                        q.to_integer()
                    })
                    .collect()
            })
            .collect();
        IntMatrix::from_rows(6, rows)
    };
    let gen_int: Vec<IntMatrix> = gens.iter().map(|a| to_lattice(&flat_action(&f, a))).collect();
    let rotations = group_closure(&gen_int, 60);
    assert_eq!(rotations.len(), 60, "icosahedral rotation group has order 60");

    let seeds = |axis: Axis| -> FieldVector {
        match axis {
            Axis::Two => vec![one.clone(), zero.clone(), zero.clone()],
            Axis::Five => vec![zero.clone(), one.clone(), tau.clone()],
            Axis::Three => vec![one.clone(), one.clone(), one.clone()],
        }
    };
    for &axis in axes {
        let seed = f.flatten(&seeds(axis));
        let mut normals = BTreeSet::new();
        for gm in &rotations {
            let a = pinv.mul(&rat_matrix(gm)).mul(&p);
            normals.insert(projective_normal(&f, &vec_apply(&seed, &a)));
        }
        for nu in normals {
            s.hyperplanes.push(Hyperplane {
                kind: HyperplaneKind::Normal(f.unflatten(&nu)),
                offset: vec![f.zero(); 3],
            });
        }
    }
    let minus = IntMatrix::diagonal(6, 6, &vec![-Int::one(); 6]);
    let mut full = rotations.clone();
    full.extend(rotations.iter().map(|r| r * &minus));
    full.sort();
    s.point_group = Some(full);
    s
}

/// Scales a flattened normal so its first nonzero field coordinate is 1.
fn projective_normal(f: &NumberField, v: &[Rat]) -> Vec<Rat> {
    let fv = f.unflatten(v);
    let lead = fv.iter().find(|e| !f.is_zero(e)).expect("nonzero normal").clone();
    let inv = f.inv(&lead).unwrap();
    f.flatten(&fv.iter().map(|e| f.mul(e, &inv)).collect::<Vec<_>>())
}

/// Cyclic permutation, a half-turn about an axis, and a half-turn mixing
/// the coordinate frame with the golden ratio.
fn rotation_generators(f: &NumberField) -> Vec<Vec<Vec<FieldElem>>> {
    let z = f.zero();
    let o = f.one();
    let m = f.neg(&o);
    let tau = f.generator();
    let half = rat(1, 2);
    let inv_tau = f.inv(&tau).unwrap();
    let h = |e: &FieldElem| f.scale(&half, e);
    let cyc = vec![
        vec![z.clone(), o.clone(), z.clone()],
        vec![z.clone(), z.clone(), o.clone()],
        vec![o.clone(), z.clone(), z.clone()],
    ];
    let flip = vec![
        vec![m.clone(), z.clone(), z.clone()],
        vec![z.clone(), m.clone(), z.clone()],
        vec![z.clone(), z.clone(), o.clone()],
    ];
    let r = vec![
        vec![h(&inv_tau), h(&tau), h(&o)],
        vec![h(&tau), h(&m), h(&inv_tau)],
        vec![h(&o), h(&inv_tau), h(&f.neg(&tau))],
    ];
    vec![cyc, flip, r]
}

/// Flattened matrix of `v ↦ v·A` for a field matrix `A`.
fn flat_action(f: &NumberField, a: &[Vec<FieldElem>]) -> RatMatrix {
    let n = a.len();
    let deg = f.degree();
    let mut rows = Vec::with_capacity(n * deg);
    for row in a {
        let mut alpha = f.one();
        for _ in 0..deg {
            let img: FieldVector = row.iter().map(|x| f.mul(&alpha, x)).collect();
            rows.push(f.flatten(&img));
            alpha = f.mul(&alpha, &f.generator());
        }
    }
    RatMatrix::from_rows(n * deg, rows)
}

/// Closure of a set of unimodular matrices under multiplication, sorted.
pub fn group_closure(gens: &[IntMatrix], bound: usize) -> Vec<IntMatrix> {
    let n = gens.first().map_or(0, IntMatrix::rows);
    let mut seen: BTreeSet<IntMatrix> = BTreeSet::new();
    let id = IntMatrix::identity(n);
    let mut queue = VecDeque::from([id.clone()]);
    seen.insert(id);
    while let Some(x) = queue.pop_front() {
        for gm in gens {
            let y = &x * gm;
            if seen.insert(y.clone()) {
                assert!(seen.len() <= bound, "group larger than expected");
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// Used by tests: the decagonal plane's rotation satisfies the cyclotomic relation.
#[doc(hidden)]
pub fn zeta_order_check(m: usize) -> bool {
    let pl = Plane::new(m);
    let f = &pl.field;
    let z = pl.zeta_pow(m);
    let half = pl.zeta_pow(m / 2);
    f.sub(&z[0], &f.one()).iter().all(Zero::is_zero)
        && f.is_zero(&z[1])
        && half == vec![f.neg(&f.one()), f.zero()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirteen_valid_entries() {
        let c = catalog();
        assert_eq!(c.len(), 13);
        for e in &c {
            e.scheme.validate().unwrap_or_else(|err| panic!("{}: {err}", e.scheme.name));
        }
        let names: BTreeSet<_> = c.iter().map(|e| e.scheme.name.clone()).collect();
        assert_eq!(names.len(), 13);
    }

    #[test]
    fn nu_values() {
        for e in catalog() {
            let nu = e.scheme.nu().unwrap();
            let want = if e.scheme.name == "heptagonal-b" { 3 } else { 2 };
            assert_eq!(nu, want, "{}", e.scheme.name);
        }
    }

    #[test]
    fn roots_of_unity() {
        for m in [8, 10, 12, 14] {
            assert!(zeta_order_check(m), "m = {m}");
        }
    }

    #[test]
    fn plane_families() {
        let count = |name: &str| find(name).unwrap().scheme.hyperplanes.len();
        assert_eq!(count("ammann-kramer"), 15);
        assert_eq!(count("dual-d6"), 15);
        assert_eq!(count("danzer"), 6);
        assert_eq!(count("canonical-d6"), 16);
        assert_eq!(count("penrose"), 5);
        assert_eq!(count("socolar-decorated"), 12);
        assert_eq!(count("generalized-penrose"), 10);
        assert_eq!(find("ammann-kramer").unwrap().scheme.rank(), 6);
    }

    #[test]
    fn point_group_orders() {
        let order = |name: &str| find(name).unwrap().scheme.point_group.unwrap().len();
        assert_eq!(order("penrose"), 20);
        assert_eq!(order("ammann-beenker"), 16);
        assert_eq!(order("heptagonal-b"), 28);
        assert_eq!(order("generalized-penrose"), 5);
        assert_eq!(order("danzer"), 120);
    }

    #[test]
    fn face_centred_has_index_two() {
        let p = find("ammann-kramer").unwrap().scheme.lattice_matrix();
        let f = find("danzer").unwrap().scheme.lattice_matrix();
        let b = f.mul(&inverse(&p).unwrap());
        assert!(b.data.iter().flatten().all(|q| q.is_integer()));
        let bi = crate::linalg::rational::clear_denominators(&b);
        assert_eq!(num_traits::Signed::abs(&bi.det()), Int::from(2));
    }
}
