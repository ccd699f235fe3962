use tilehom::homology::{compute, ktheory, torsion_band_check, ComputeOptions, Status};
use tilehom::scheme::{catalog, parse_scheme};
use tilehom::singular::{generate, GenerateOptions};
use tilehom::{FgAbelianGroup, Result};

fn g(s: &str) -> FgAbelianGroup {
    s.parse().unwrap()
}

fn fibonacci(offsets: &[&str]) -> String {
    let mut s = String::from(
        r#"
name = "fibonacci"
d = 1
n = 1

[field]
min_poly = [-1, -1, 1]

[lattice]
pi_int = [[[1, 0]], [[0, 1]]]
"#,
    );
    for o in offsets {
        s.push_str(&format!("\n[[hyperplanes]]\ndirections = []\noffset = [[\"{o}\", 0]]\n"));
    }
    s
}

fn run(text: &str) -> Result<tilehom::homology::HomologyResult> {
    let (scheme, _) = parse_scheme(text)?;
    let complex = generate(&scheme, GenerateOptions::default())?;
    compute(&complex, scheme.d, &ComputeOptions::default())
}

#[test]
fn fibonacci_homology_and_k_theory() {
    let r = run(&fibonacci(&["0"])).unwrap();
    assert_eq!(r.groups, vec![g("Z^2"), g("Z")]);
    assert_eq!(r.ktheory, Some((g("Z"), g("Z^2"))));
    assert_eq!(r.euler, 1);
}

#[test]
fn codimension_one_counts_point_classes() {
    let r = run(&fibonacci(&["0", "1/2", "1/3"])).unwrap();
    assert_eq!(r.groups, vec![g("Z^4"), g("Z")]);
    // 1 and τ are in Γ, so these add no new class
    let r = run(&fibonacci(&["0", "1"])).unwrap();
    assert_eq!(r.groups[0], g("Z^2"));
}

#[test]
fn penrose_and_ttt() {
    for (name, groups) in [
        ("penrose", ["Z^8", "Z^5", "Z"]),
        ("ttt", ["Z^24 + Z_5^2", "Z^5", "Z"]),
    ] {
        let e = catalog::find(name).unwrap();
        let complex = generate(&e.scheme, GenerateOptions::default()).unwrap();
        let r = compute(&complex, 2, &ComputeOptions::default()).unwrap();
        let expected: Vec<_> = groups.iter().map(|s| g(s)).collect();
        assert_eq!(r.groups, expected, "{name}");
        assert_eq!(r.status, Status::Complete);
        assert!(torsion_band_check(&r.groups, 2, 2).is_empty());
    }
}

#[test]
fn ttt_mod_five() {
    let e = catalog::find("ttt").unwrap();
    let complex = generate(&e.scheme, GenerateOptions::default()).unwrap();
    let r = compute(&complex, 2, &ComputeOptions::default()).unwrap();
    assert_eq!(r.modp_ranks[&5][0], r.ranks[0] + 2);
    assert_eq!(r.torsion_ranks[&5], vec![2, 0, 0]);
    assert_eq!(r.torsion_ranks[&3], vec![0, 0, 0]);
    assert_eq!(ktheory(&r.groups, 2).unwrap(), (g("Z^25 + Z_5^2"), g("Z^5")));
}

#[test]
fn universal_coefficients_on_planar_catalog() {
    for e in catalog::catalog().into_iter().filter(|e| e.scheme.n == 2) {
        let complex = generate(&e.scheme, GenerateOptions::default()).unwrap();
        let r = compute(&complex, e.scheme.d, &ComputeOptions::default()).unwrap();
        for (p, t) in &r.torsion_ranks {
            let from_groups: Vec<usize> = r.groups.iter().map(|h| h.torsion().rank_mod(*p)).collect();
            assert_eq!(t, &from_groups, "{} p={p}", e.scheme.name);
        }
    }
}

#[test]
fn composite_primes_are_rejected() {
    let e = catalog::find("penrose").unwrap();
    let complex = generate(&e.scheme, GenerateOptions::default()).unwrap();
    let opts = ComputeOptions { primes: vec![4] };
    assert!(compute(&complex, 2, &opts).is_err());
}
