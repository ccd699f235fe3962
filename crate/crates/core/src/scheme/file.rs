//! TOML scheme files.
//!
//! ```toml
//! name = "penrose"
//! d = 2
//! n = 2
//! point_group = [[[0, 1, 0, 0], ...], ...]   # optional
//!
//! [field]
//! min_poly = [-1, -1, 1]                     # constant term first, monic
//!
//! [lattice]
//! pi_int = [[["1", "0"], ["0", "0"]], ...]   # n+d columns of n field elements
//!
//! [[hyperplanes]]
//! directions = [[["1", "0"], ["0", "0"]]]    # or: normal = [...]
//! offset = [["0", "0"], ["0", "0"]]
//!
//! [expected]                                 # optional
//! groups = ["Z^8", "Z^5", "Z"]               # "?" for unknown
//! ```
//!
//! A field element is a list of `degree` rationals, written `"p/q"` or as
//! integers.

use serde::{Deserialize, Serialize};

use super::catalog::{Expected, ModularCount, TorsionRank};
use super::field::{FieldElem, FieldVector, NumberField};
use super::{Hyperplane, HyperplaneKind, ProjectionScheme};
use crate::error::{Error, Result};
use crate::linalg::{FgAbelianGroup, Int, IntMatrix, Rat};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RatText {
    Int(i64),
    Text(String),
}

type ElemText = Vec<RatText>;
type VectorText = Vec<ElemText>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeFile {
    name: String,
    d: usize,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    point_group: Option<Vec<Vec<Vec<i64>>>>,
    field: FieldFile,
    lattice: LatticeFile,
    hyperplanes: Vec<HyperplaneFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<ExpectedFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    min_poly: Vec<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFile {
    pi_int: Vec<VectorText>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HyperplaneFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    directions: Option<Vec<VectorText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normal: Option<VectorText>,
    offset: VectorText,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpectedFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    groups: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    torsion: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t1_prime: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t1_double_prime: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t0_prime: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    plane_coker_torsion: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    orbit_counts: Vec<OrbitCountFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    torsion_ranks: Vec<TorsionRankFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modular_coker: Option<ModularCountFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitCountFile {
    r: usize,
    count: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TorsionRankFile {
    p: u64,
    k: usize,
    rank: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModularCountFile {
    p: u64,
    k: u32,
    log: u64,
}

fn parse_rat(t: &RatText) -> Result<Rat> {
    match t {
        RatText::Int(i) => Ok(Rat::from_integer(Int::from(*i))),
        RatText::Text(s) => {
            let bad = || Error::MalformedField(format!("bad rational `{s}`"));
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s.trim(), "1"),
            };
            let num: Int = num.parse().map_err(|_| bad())?;
            let den: Int = den.parse().map_err(|_| bad())?;
            if den == Int::from(0) {
                return Err(bad());
            }
            Ok(Rat::new(num, den))
        }
    }
}

fn show_rat(r: &Rat) -> RatText {
    if r.is_integer() {
        if let Ok(i) = i64::try_from(r.to_integer()) {
            return RatText::Int(i);
        }
    }
    RatText::Text(r.to_string())
}

fn parse_elem(e: &ElemText, degree: usize) -> Result<FieldElem> {
    if e.len() != degree {
        return Err(Error::MalformedField(format!(
            "field element has {} coefficients, field degree is {degree}",
            e.len()
        )));
    }
    e.iter().map(parse_rat).collect()
}

fn parse_vector(v: &VectorText, field: &NumberField, n: usize) -> Result<FieldVector> {
    if v.len() != n {
        return Err(Error::MalformedField(format!("vector has {} entries, expected {n}", v.len())));
    }
    v.iter().map(|e| parse_elem(e, field.degree())).collect()
}

fn show_vector(v: &FieldVector) -> VectorText {
    v.iter().map(|e| e.iter().map(show_rat).collect()).collect()
}

fn parse_group(s: &str) -> Result<Option<FgAbelianGroup>> {
    if s.trim() == "?" {
        return Ok(None);
    }
    s.parse().map(Some)
}

fn show_group(g: &Option<FgAbelianGroup>) -> String {
    g.as_ref().map_or_else(|| "?".into(), |g| g.primary_string())
}

fn parse_expected(e: &ExpectedFile) -> Result<Expected> {
    let opt = |s: &Option<String>| -> Result<Option<FgAbelianGroup>> {
        s.as_deref().map(parse_group).transpose().map(Option::flatten)
    };
    let ktheory = match (opt(&e.k0)?, opt(&e.k1)?) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        _ => return Err(Error::Parse("k0 and k1 must be given together".into())),
    };
    Ok(Expected {
        groups: e.groups.iter().map(|s| parse_group(s)).collect::<Result<_>>()?,
        torsion: e.torsion.iter().map(|s| parse_group(s)).collect::<Result<_>>()?,
        t1_prime: opt(&e.t1_prime)?,
        t1_double_prime: opt(&e.t1_double_prime)?,
        t0_prime: opt(&e.t0_prime)?,
        orbit_counts: e.orbit_counts.iter().map(|o| (o.r, o.count)).collect(),
        torsion_ranks: e
            .torsion_ranks
            .iter()
            .map(|t| TorsionRank { p: t.p, k: t.k, rank: t.rank })
            .collect(),
        ktheory,
        plane_coker_torsion: opt(&e.plane_coker_torsion)?,
        modular_coker: e.modular_coker.as_ref().map(|m| ModularCount { p: m.p, k: m.k, log: m.log }),
    })
}

fn show_expected(e: &Expected) -> ExpectedFile {
    let opt = |g: &Option<FgAbelianGroup>| g.as_ref().map(|g| g.primary_string());
    ExpectedFile {
        groups: e.groups.iter().map(show_group).collect(),
        torsion: e.torsion.iter().map(show_group).collect(),
        t1_prime: opt(&e.t1_prime),
        t1_double_prime: opt(&e.t1_double_prime),
        t0_prime: opt(&e.t0_prime),
        k0: e.ktheory.as_ref().map(|k| k.0.primary_string()),
        k1: e.ktheory.as_ref().map(|k| k.1.primary_string()),
        plane_coker_torsion: opt(&e.plane_coker_torsion),
        orbit_counts: e.orbit_counts.iter().map(|&(r, count)| OrbitCountFile { r, count }).collect(),
        torsion_ranks: e
            .torsion_ranks
            .iter()
            .map(|t| TorsionRankFile { p: t.p, k: t.k, rank: t.rank })
            .collect(),
        modular_coker: e.modular_coker.map(|m| ModularCountFile { p: m.p, k: m.k, log: m.log }),
    }
}

/// Parses and validates a scheme file; returns the scheme and any
/// expectations it carries.
pub fn parse_scheme(text: &str) -> Result<(ProjectionScheme, Option<Expected>)> {
    let f: SchemeFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let field = NumberField::new(f.field.min_poly.clone())?;
    if f.n == 0 {
        return Err(Error::MalformedScheme("n must be at least 1".into()));
    }
    let pi_int = f
        .lattice
        .pi_int
        .iter()
        .map(|c| parse_vector(c, &field, f.n))
        .collect::<Result<Vec<_>>>()?;
    let mut hyperplanes = Vec::new();
    for (i, h) in f.hyperplanes.iter().enumerate() {
        let kind = match (&h.directions, &h.normal) {
            (Some(ds), None) => HyperplaneKind::Directions(
                ds.iter().map(|v| parse_vector(v, &field, f.n)).collect::<Result<_>>()?,
            ),
            (None, Some(nu)) => HyperplaneKind::Normal(parse_vector(nu, &field, f.n)?),
            _ => {
                return Err(Error::Parse(format!(
                    "hyperplane {i}: give exactly one of `directions` or `normal`"
                )))
            }
        };
        hyperplanes.push(Hyperplane {
            kind,
            offset: parse_vector(&h.offset, &field, f.n)?,
        });
    }
    let point_group = f
        .point_group
        .as_ref()
        .map(|gs| {
            gs.iter()
                .map(|m| {
                    let cols = m.first().map_or(0, Vec::len);
                    if m.iter().any(|r| r.len() != cols) {
                        return Err(Error::MalformedScheme("ragged point group matrix".into()));
                    }
                    Ok(IntMatrix::from_i64_rows(cols, m))
                })
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    let scheme = ProjectionScheme {
        name: f.name,
        d: f.d,
        n: f.n,
        field,
        pi_int,
        hyperplanes,
        point_group,
    };
    scheme.validate()?;
    let expected = f.expected.as_ref().map(parse_expected).transpose()?;
    Ok((scheme, expected.filter(|e| !e.is_empty())))
}

/// Serializes a scheme (and optional expectations) in the file format.
pub fn to_toml(scheme: &ProjectionScheme, expected: Option<&Expected>) -> String {
    let f = SchemeFile {
        name: scheme.name.clone(),
        d: scheme.d,
        n: scheme.n,
        point_group: scheme.point_group.as_ref().map(|gs| {
            gs.iter()
                .map(|m| m.to_i64_rows().expect("point group entries fit in i64"))
                .collect()
        }),
        field: FieldFile {
            min_poly: scheme.field.min_poly().to_vec(),
        },
        lattice: LatticeFile {
            pi_int: scheme.pi_int.iter().map(show_vector).collect(),
        },
        hyperplanes: scheme
            .hyperplanes
            .iter()
            .map(|h| {
                let (directions, normal) = match &h.kind {
                    HyperplaneKind::Directions(ds) => (Some(ds.iter().map(show_vector).collect()), None),
                    HyperplaneKind::Normal(nu) => (None, Some(show_vector(nu))),
                };
                HyperplaneFile {
                    directions,
                    normal,
                    offset: show_vector(&h.offset),
                }
            })
            .collect(),
        expected: expected.map(show_expected),
    };
    toml::to_string(&f).expect("scheme serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::catalog::find;

    #[test]
    fn penrose_round_trip() {
        let e = find("penrose").unwrap();
        let text = to_toml(&e.scheme, e.expected.as_ref());
        let (back, exp) = parse_scheme(&text).unwrap();
        assert_eq!(back, e.scheme);
        assert_eq!(exp, e.expected);
    }

    #[test]
    fn every_entry_round_trips() {
        for e in crate::scheme::catalog() {
            let text = to_toml(&e.scheme, e.expected.as_ref());
            let (back, exp) = parse_scheme(&text).unwrap();
            assert_eq!(back, e.scheme, "{}", e.scheme.name);
            assert_eq!(exp, e.expected, "{}", e.scheme.name);
        }
    }

    const HEADER: &str = r#"
name = "bad"
d = 3
n = 2
[field]
min_poly = [-5, 0, 1]
[lattice]
pi_int = [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]], [[1, 1], [1, 1]]]
[[hyperplanes]]
normal = [[1, 0], [0, 0]]
offset = [[0, 0], [0, 0]]
"#;

    #[test]
    fn non_integer_nu() {
        let err = parse_scheme(HEADER).unwrap_err();
        assert!(err.to_string().contains("ν=(n+d)/n not an integer"), "{err}");
    }

    #[test]
    fn coplanar_normals() {
        let text = HEADER.replace("d = 3", "d = 2").replace(
            "pi_int = [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]], [[1, 1], [1, 1]]]",
            "pi_int = [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]]]",
        ) + r#"
[[hyperplanes]]
normal = [["1/2", 0], [0, 0]]
offset = [[0, 0], [0, 0]]
"#;
        assert!(matches!(parse_scheme(&text), Err(Error::NormalsDoNotSpan)));
    }

    #[test]
    fn malformed_field() {
        let text = HEADER.replace("min_poly = [-5, 0, 1]", "min_poly = [-4, 0, 1]");
        assert!(matches!(parse_scheme(&text), Err(Error::MalformedField(_))));
        let text = HEADER.replace("[[1, 1], [1, 1]]]", "[[1, 1], [1]]]");
        assert!(matches!(parse_scheme(&text), Err(Error::MalformedField(_))));
    }

    #[test]
    fn non_injective_projection() {
        let text = HEADER
            .replace("d = 3", "d = 2")
            .replace(
                "[[0, 0], [0, 1]], [[1, 1], [1, 1]]]",
                "[[0, 0], [1, 0]]]",
            )
            + "[[hyperplanes]]\nnormal = [[0, 0], [1, 0]]\noffset = [[0, 0], [0, 0]]\n";
        assert!(matches!(parse_scheme(&text), Err(Error::ProjectionNotInjective)));
    }
}
