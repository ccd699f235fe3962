//! Γ-orbits of singular subspaces, their stabilizers and incidences.

pub mod geometry;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;

pub use geometry::{Frame, Geometry, OrbitKey};

use crate::error::{Error, Result};
use crate::linalg::{Lattice, Rat, RatMatrix, Subspace};
use crate::scheme::{FieldVector, ProjectionScheme};

pub const DEFAULT_ORBIT_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularOrbit {
    pub r: usize,
    pub id: usize,
    pub key: OrbitKey,
    /// `Γ^Θ = {γ : Θ + γ = Θ}`.
    pub stabilizer: Lattice,
}

impl SingularOrbit {
    pub fn direction(&self) -> &Subspace {
        &self.key.direction
    }

    pub fn offset(&self) -> &[Rat] {
        &self.key.offset
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GenerateOptions {
    pub orbit_cap: usize,
    pub use_symmetry: bool,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        Self {
            orbit_cap: DEFAULT_ORBIT_CAP,
            use_symmetry: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularComplex {
    pub n: usize,
    pub nu: usize,
    pub lattice_rank: usize,
    /// Orbits of singular `r`-spaces, indexed by `r`.
    pub levels: Vec<Vec<SingularOrbit>>,
    /// `(r, k)` with `r < k`: for each `k`-orbit, the sorted ids of the
    /// `r`-orbits having a representative inside it.
    pub incidence: BTreeMap<(usize, usize), Vec<Vec<usize>>>,
}

impl SingularComplex {
    /// `L_r`.
    pub fn count(&self, r: usize) -> usize {
        self.levels[r].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// The `r`-orbits inside the `k`-orbit `id`.
    pub fn inside(&self, r: usize, k: usize, id: usize) -> &[usize] {
        &self.incidence[&(r, k)][id]
    }

    /// `L_r^Θ` for the `k`-orbit `id`.
    pub fn count_inside(&self, r: usize, k: usize, id: usize) -> usize {
        self.inside(r, k, id).len()
    }

    /// Plain-text listing for regression diffs.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}, nu = {}, rank = {}", self.n, self.nu, self.lattice_rank);
        let _ = writeln!(s, "counts = {:?}", self.counts());
        for (r, level) in self.levels.iter().enumerate().rev() {
            for o in level {
                let off: Vec<String> = o.offset().iter().map(ToString::to_string).collect();
                let dir: Vec<String> = o
                    .direction()
                    .basis()
                    .data
                    .iter()
                    .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
                    .collect();
                let stab: Vec<String> = o
                    .stabilizer
                    .basis()
                    .row_vecs()
                    .iter()
                    .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
                    .collect();
                let _ = writeln!(
                    s,
                    "orbit r={r} id={} offset=[{}] direction=[{}] stabilizer=[{}]",
                    o.id,
                    off.join(" "),
                    dir.join("; "),
                    stab.join("; ")
                );
            }
        }
        for ((r, k), table) in &self.incidence {
            for (id, inner) in table.iter().enumerate() {
                let _ = writeln!(s, "incidence {r}-in-{k} {id}: {inner:?}");
            }
        }
        s
    }
}

/// `{γ : π(γ) ∈ span(directions)}`.
pub fn stabilizer(scheme: &ProjectionScheme, directions: &[FieldVector]) -> Lattice {
    let rows = scheme.field.q_span_rows(directions);
    let u = Subspace::span(&RatMatrix::from_rows(scheme.flat_dim(), rows));
    Geometry::new(scheme).stabilizer(&u)
}

/// Same direction and offsets differing by `π(Γ)` plus the direction.
pub fn orbit_equal(scheme: &ProjectionScheme, a: &SingularOrbit, b: &SingularOrbit) -> bool {
    Geometry::new(scheme).same_orbit(&a.key, &b.key)
}

/// Intersections of two orbits of singular spaces.
pub fn intersect_orbits(scheme: &ProjectionScheme, a: &SingularOrbit, b: &SingularOrbit) -> Result<Vec<SingularOrbit>> {
    let geo = Geometry::new(scheme);
    let keys = geo.intersect(&a.key, &b.key)?;
    Ok(keys
        .into_iter()
        .enumerate()
        .map(|(id, key)| SingularOrbit {
            r: geo.field_dim(&key.direction),
            id,
            stabilizer: geo.stabilizer(&key.direction),
            key,
        })
        .collect())
}

/// Closes the hyperplane family under intersection and records incidences.
pub fn generate(scheme: &ProjectionScheme, opts: GenerateOptions) -> Result<SingularComplex> {
    scheme.validate()?;
    let nu = scheme.nu()?;
    let n = scheme.n;
    let geo = Geometry::new(scheme);

    let hyperplanes: BTreeSet<OrbitKey> = (0..scheme.hyperplanes.len())
        .map(|i| geo.key(scheme.hyperplane_subspace(i), &scheme.hyperplane_offset(i)))
        .collect();
    check_cap(hyperplanes.len(), opts.orbit_cap, n - 1)?;

    let group: Vec<RatMatrix> = match (&scheme.point_group, opts.use_symmetry) {
        (Some(gs), true) => {
            let actions = gs
                .iter()
                .map(|g| scheme.internal_action(g))
                .collect::<Result<Vec<_>>>()?;
            for (index, a) in actions.iter().enumerate() {
                if hyperplanes.iter().any(|h| !hyperplanes.contains(&geo.act(a, h))) {
                    return Err(Error::PointGroupMismatch { index });
                }
            }
            actions
        }
        _ => Vec::new(),
    };

    let hyper: Vec<OrbitKey> = hyperplanes.iter().cloned().collect();
    let mut levels_keys: Vec<Vec<OrbitKey>> = vec![Vec::new(); n];
    levels_keys[n - 1] = hyper.clone();
    for r in (0..n - 1).rev() {
        let upper = &levels_keys[r + 1];
        let reps = representatives(&geo, &group, upper);
        let found: Vec<Vec<OrbitKey>> = reps
            .par_iter()
            .flat_map_iter(|a| hyper.iter().map(move |h| (a, h)))
            .map(|(a, h)| geo.intersect(a, h))
            .collect::<Result<Vec<_>>>()?;
        let mut level: BTreeSet<OrbitKey> = BTreeSet::new();
        for key in found.into_iter().flatten() {
            if geo.field_dim(&key.direction) != r {
                continue;
            }
            if level.contains(&key) {
                continue;
            }
            for g in &group {
                level.insert(geo.act(g, &key));
            }
            level.insert(key);
            check_cap(level.len(), opts.orbit_cap, r)?;
        }
        levels_keys[r] = level.into_iter().collect();
    }

    let mut levels = Vec::with_capacity(n);
    for (r, keys) in levels_keys.into_iter().enumerate() {
        let mut level = Vec::with_capacity(keys.len());
        for (id, key) in keys.into_iter().enumerate() {
            let stab = geo.stabilizer(&key.direction);
            if stab.rank() != r * nu {
                return Err(Error::StabilizerRank {
                    r,
                    got: stab.rank(),
                    expected: r * nu,
                });
            }
            level.push(SingularOrbit {
                r,
                id,
                key,
                stabilizer: stab,
            });
        }
        levels.push(level);
    }

    let mut incidence = BTreeMap::new();
    for k in 1..n {
        for r in 0..k {
            incidence.insert((r, k), incidence_table(&geo, &levels[r], &levels[k]));
        }
    }
    Ok(SingularComplex {
        n,
        nu,
        lattice_rank: scheme.rank(),
        levels,
        incidence,
    })
}

fn check_cap(count: usize, cap: usize, dim: usize) -> Result<()> {
    if count > cap {
        return Err(Error::OrbitCap { cap, dim });
    }
    Ok(())
}

/// One orbit from each point-group class, in sorted order.
fn representatives(geo: &Geometry, group: &[RatMatrix], keys: &[OrbitKey]) -> Vec<OrbitKey> {
    if group.is_empty() {
        return keys.to_vec();
    }
    let mut covered = BTreeSet::new();
    let mut reps = Vec::new();
    for k in keys {
        if covered.contains(k) {
            continue;
        }
        for g in group {
            covered.insert(geo.act(g, k));
        }
        reps.push(k.clone());
    }
    reps
}

fn incidence_table(geo: &Geometry, small: &[SingularOrbit], big: &[SingularOrbit]) -> Vec<Vec<usize>> {
    // group containers by direction so each small orbit is reduced once per direction
    let mut by_dir: BTreeMap<&Subspace, BTreeMap<&[Rat], usize>> = BTreeMap::new();
    for b in big {
        by_dir.entry(b.direction()).or_default().insert(b.offset(), b.id);
    }
    let hits: Vec<Vec<(usize, usize)>> = small
        .par_iter()
        .map(|s| {
            let mut out = Vec::new();
            for (dir, offsets) in &by_dir {
                if !s.direction().is_subspace_of(dir) {
                    continue;
                }
                let c = geo.frame(dir).canonical(s.offset());
                if let Some(&bid) = offsets.get(c.as_slice()) {
                    out.push((bid, s.id));
                }
            }
            out
        })
        .collect();
    let mut table = vec![Vec::new(); big.len()];
    for (bid, sid) in hits.into_iter().flatten() {
        table[bid].push(sid);
    }
    for t in &mut table {
        t.sort_unstable();
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::catalog::find;

    #[test]
    fn penrose_single_point_orbit() {
        let s = find("penrose").unwrap().scheme;
        let c = generate(&s, GenerateOptions::default()).unwrap();
        assert_eq!(c.count(1), 5);
        assert_eq!(c.count(0), 1);
        for line in &c.levels[1] {
            assert_eq!(line.stabilizer.rank(), 2);
            assert_eq!(c.count_inside(0, 1, line.id), 1);
        }
    }

    #[test]
    fn symmetry_does_not_change_the_complex() {
        for name in ["ttt", "generalized-penrose", "ammann-beenker-decorated"] {
            let s = find(name).unwrap().scheme;
            let with = generate(&s, GenerateOptions::default()).unwrap();
            let without = generate(
                &s,
                GenerateOptions {
                    use_symmetry: false,
                    ..GenerateOptions::default()
                },
            )
            .unwrap();
            assert_eq!(with, without, "{name}");
        }
    }

    #[test]
    fn orbit_cap_is_enforced() {
        let s = find("socolar").unwrap().scheme;
        let err = generate(
            &s,
            GenerateOptions {
                orbit_cap: 2,
                ..GenerateOptions::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::OrbitCap { cap: 2, .. }));
    }

    #[test]
    fn stabilizer_extremes() {
        let s = find("penrose").unwrap().scheme;
        assert_eq!(stabilizer(&s, &[]).rank(), 0);
        let f = &s.field;
        let e = vec![vec![f.one(), f.zero()], vec![f.zero(), f.one()]];
        assert_eq!(stabilizer(&s, &e), Lattice::full(4));
        assert_eq!(stabilizer(&s, &s.directions(0)).rank(), 2);
    }

    #[test]
    fn orbit_equality() {
        let s = find("penrose").unwrap().scheme;
        let c = generate(&s, GenerateOptions::default()).unwrap();
        let a = c.levels[1][0].clone();
        assert!(orbit_equal(&s, &a, &a));
        let geo = Geometry::new(&s);
        let shift = geo.translation(&[3.into(), (-2).into(), 0.into(), 7.into()]);
        let moved = SingularOrbit {
            key: OrbitKey {
                direction: a.key.direction.clone(),
                offset: a.offset().iter().zip(&shift).map(|(x, y)| x + y).collect(),
            },
            ..a.clone()
        };
        assert!(orbit_equal(&s, &a, &moved));
        assert!(!orbit_equal(&s, &a, &c.levels[1][1]));
    }

    #[test]
    fn parallel_lines_do_not_meet() {
        let s = find("penrose").unwrap().scheme;
        let c = generate(&s, GenerateOptions::default()).unwrap();
        let a = &c.levels[1][0];
        assert!(intersect_orbits(&s, a, a).unwrap().is_empty());
        assert_eq!(intersect_orbits(&s, a, &c.levels[1][1]).unwrap().len(), 1);
    }
}
