//! Reports for the `tilehom` command: building them from a scheme, checking
//! them against published values and rendering them as text or JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use tilehom::homology::{compute, torsion_band_check, ComputeOptions, Diagnostics, MapAssembly, Status};
use tilehom::linalg::ring::{coker_log_order_mod, valuation, Ring};
use tilehom::scheme::{CatalogEntry, Expected, ProjectionScheme};
use tilehom::singular::{generate, GenerateOptions, SingularComplex};
use tilehom::{FgAbelianGroup, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeInfo {
    pub name: String,
    pub d: usize,
    pub n: usize,
    pub lattice_rank: usize,
    pub nu: usize,
    pub field_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRow {
    pub degree: usize,
    pub group: FgAbelianGroup,
    /// e.g. `Z^24 + Z_5^2`.
    pub primary: String,
    /// e.g. `Z^24 + Z/5 + Z/5`.
    pub invariant: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub field: String,
    pub expected: String,
    pub actual: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub verdict: Verdict,
    /// The first field that failed, if any.
    pub first_failure: Option<String>,
    pub lines: Vec<CheckLine>,
}

/// A single-ring diagnostic run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingRun {
    pub ring: String,
    /// Dimensions over Q or F_p.
    pub ranks: Option<Vec<usize>>,
    /// `log_p |H_k ⊗ Z/p^k|` from the integral groups (for `Z/p^k`).
    pub tensor_log_orders: Option<Vec<u64>>,
    /// `log_p |coker φ'_1 ⊗ Z/p^k|` (codimension 3).
    pub coker_phi1_prime: Option<u64>,
    /// `log_p |coker_{Z/p^k} φ''_1|` (codimension 3).
    pub coker_phi1_double_prime: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub scheme: SchemeInfo,
    /// `L_r` for `r = 0..n`.
    pub counts: Vec<usize>,
    /// `"r-in-k"` → `L_r^Θ` for each `k`-orbit `Θ`.
    pub counts_inside: BTreeMap<String, Vec<usize>>,
    pub homology: Vec<GroupRow>,
    pub ranks: Vec<usize>,
    pub modp_ranks: BTreeMap<u64, Vec<usize>>,
    pub torsion_ranks: BTreeMap<u64, Vec<usize>>,
    pub euler: i64,
    pub ktheory: Option<(FgAbelianGroup, FgAbelianGroup)>,
    pub status: Status,
    pub diagnostics: Diagnostics,
    pub band_violations: Vec<String>,
    pub ring: Option<RingRun>,
    pub check: Option<Check>,
    /// Wall-clock phases; kept out of the structured form so reports stay reproducible.
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub primes: Vec<u64>,
    pub ring: Option<String>,
    pub max_orbits: Option<usize>,
    pub no_symmetry: bool,
}

/// Parses `Z`, `Q`, `F5`, `Fp5`, `Z4`, `Z/4`, `Z/p^k` spellings into a modulus (0 for Z and Q).
pub fn parse_ring(s: &str) -> Result<(String, Ring)> {
    let t = s.trim();
    let bad = || tilehom::Error::Parse(format!("unknown ring '{s}'"));
    match t {
        "Z" => return Ok(("Z".into(), Ring::Rationals)),
        "Q" => return Ok(("Q".into(), Ring::Rationals)),
        _ => {}
    }
    let digits = t
        .trim_start_matches("Fp")
        .trim_start_matches('F')
        .trim_start_matches("Z/")
        .trim_start_matches('Z');
    let modulus: u64 = if let Some((p, k)) = digits.split_once('^') {
        let p: u64 = p.parse().map_err(|_| bad())?;
        let k: u32 = k.parse().map_err(|_| bad())?;
        p.checked_pow(k).ok_or_else(bad)?
    } else {
        digits.parse().map_err(|_| bad())?
    };
    if modulus < 2 {
        return Err(bad());
    }
    let ring = Ring::from_modulus(modulus)?;
    if t.starts_with('F') && !matches!(ring, Ring::Prime(_)) {
        return Err(bad());
    }
    Ok((t.to_string(), ring))
}

fn counts_inside(c: &SingularComplex) -> BTreeMap<String, Vec<usize>> {
    c.incidence
        .iter()
        .map(|((r, k), table)| (format!("{r}-in-{k}"), table.iter().map(Vec::len).collect()))
        .collect()
}

fn ring_run(label: String, ring: Ring, assembly: &MapAssembly, groups: &[FgAbelianGroup], ranks: &[usize]) -> RingRun {
    match ring {
        Ring::Rationals => RingRun {
            ranks: (label == "Q").then(|| ranks.to_vec()),
            ring: label,
            tensor_log_orders: None,
            coker_phi1_prime: None,
            coker_phi1_double_prime: None,
        },
        Ring::Prime(p) => RingRun {
            ring: label,
            ranks: Some(assembly.modp_ranks(p)),
            tensor_log_orders: None,
            coker_phi1_prime: None,
            coker_phi1_double_prime: None,
        },
        Ring::PrimePower { p, k } => {
            let logs = groups
                .iter()
                .map(|g| {
                    let free = g.free_rank as u64 * k as u64;
                    free + g.invariant_factors.iter().map(|f| valuation(f, p).min(k) as u64).sum::<u64>()
                })
                .collect();
            let (prime, double) = match assembly {
                MapAssembly::Codim3(a) => (
                    Some(coker_log_order_mod(&a.phi1, p, k)),
                    Some(a.modular_double_prime(p, k)),
                ),
                _ => (None, None),
            };
            RingRun {
                ring: label,
                ranks: None,
                tensor_log_orders: Some(logs),
                coker_phi1_prime: prime,
                coker_phi1_double_prime: double,
            }
        }
    }
}

/// Runs the whole pipeline on a scheme.
pub fn build_report(scheme: &ProjectionScheme, opts: &RunOptions) -> Result<Report> {
    let mut timings = Vec::new();
    let t = Instant::now();
    let gen_opts = GenerateOptions {
        orbit_cap: opts.max_orbits.unwrap_or(tilehom::singular::DEFAULT_ORBIT_CAP),
        use_symmetry: !opts.no_symmetry,
    };
    let complex = generate(scheme, gen_opts)?;
    timings.push(("singular".to_string(), t.elapsed()));

    let t = Instant::now();
    let result = compute(
        &complex,
        scheme.d,
        &ComputeOptions {
            primes: opts.primes.clone(),
        },
    )?;
    timings.push(("homology".to_string(), t.elapsed()));

    let ring = match &opts.ring {
        Some(spec) => {
            let t = Instant::now();
            let (label, ring) = parse_ring(spec)?;
            let assembly = MapAssembly::new(&complex, scheme.d)?;
            let run = ring_run(label, ring, &assembly, &result.groups, &result.ranks);
            timings.push(("ring".to_string(), t.elapsed()));
            Some(run)
        }
        None => None,
    };

    let homology = result
        .groups
        .iter()
        .enumerate()
        .map(|(degree, g)| GroupRow {
            degree,
            group: g.clone(),
            primary: g.primary_string(),
            invariant: g.invariant_string(),
        })
        .collect();
    Ok(Report {
        scheme: SchemeInfo {
            name: scheme.name.clone(),
            d: scheme.d,
            n: scheme.n,
            lattice_rank: scheme.rank(),
            nu: complex.nu,
            field_degree: scheme.field.degree(),
        },
        counts: complex.counts(),
        counts_inside: counts_inside(&complex),
        homology,
        ranks: result.ranks.clone(),
        band_violations: torsion_band_check(&result.groups, scheme.d, scheme.n),
        modp_ranks: result.modp_ranks,
        torsion_ranks: result.torsion_ranks,
        euler: result.euler,
        ktheory: result.ktheory,
        status: result.status,
        diagnostics: result.diagnostics,
        ring,
        check: None,
        timings,
    })
}

fn show(g: &Option<FgAbelianGroup>) -> String {
    g.as_ref().map_or_else(|| "missing".to_string(), FgAbelianGroup::primary_string)
}

/// Compares a report with published values.
pub fn check_report(report: &Report, expected: &Expected) -> Check {
    let mut lines = Vec::new();
    let mut push = |field: String, exp: String, act: String| {
        let verdict = if exp == act { Verdict::Pass } else { Verdict::Fail };
        lines.push(CheckLine {
            field,
            expected: exp,
            actual: act,
            verdict,
        });
    };
    let group = |k: usize| report.homology.get(k).map(|r| r.group.clone());

    for (k, g) in expected.groups.iter().enumerate() {
        if let Some(g) = g {
            push(format!("H_{k}"), g.primary_string(), show(&group(k)));
        }
    }
    for (k, g) in expected.torsion.iter().enumerate() {
        if let Some(g) = g {
            push(format!("torsion H_{k}"), g.primary_string(), show(&group(k).map(|h| h.torsion())));
        }
    }
    let diag = &report.diagnostics;
    for (name, exp, act) in [
        ("t'_1", &expected.t1_prime, &diag.t1_prime),
        ("t''_1", &expected.t1_double_prime, &diag.t1_double_prime),
        ("t'_0", &expected.t0_prime, &diag.t0_prime),
    ] {
        if let Some(e) = exp {
            push(name.to_string(), e.primary_string(), show(act));
        }
    }
    for &(r, count) in &expected.orbit_counts {
        let act = report.counts.get(r).map_or("missing".into(), ToString::to_string);
        push(format!("L_{r}"), count.to_string(), act);
    }
    for t in &expected.torsion_ranks {
        let act = report
            .torsion_ranks
            .get(&t.p)
            .and_then(|v| v.get(t.k))
            .map_or("missing".into(), ToString::to_string);
        push(format!("T_{}^{}", t.k, t.p), t.rank.to_string(), act);
    }
    if let Some((k0, k1)) = &expected.ktheory {
        let act = report.ktheory.clone();
        push("K^0".into(), k0.primary_string(), show(&act.as_ref().map(|k| k.0.clone())));
        push("K^1".into(), k1.primary_string(), show(&act.as_ref().map(|k| k.1.clone())));
    }
    if let Some(t) = &expected.plane_coker_torsion {
        let all = !diag.plane_cokers.is_empty() && diag.plane_cokers.iter().all(|c| c.torsion() == *t);
        let act = if all {
            t.primary_string()
        } else {
            let mut s = String::new();
            for c in &diag.plane_cokers {
                let _ = write!(s, "{};", c.torsion().primary_string());
            }
            s
        };
        push("plane coker torsion".into(), t.primary_string(), act);
    }
    if let Some(m) = &expected.modular_coker {
        let act = diag
            .modular_counts
            .iter()
            .find(|c| c.p == m.p && c.k == m.k)
            .map(|c| c.log)
            .or_else(|| {
                let run = report.ring.as_ref()?;
                let ring = parse_ring(&run.ring).ok()?.1;
                (ring == Ring::PrimePower { p: m.p, k: m.k }).then_some(run.coker_phi1_double_prime)?
            })
            .map_or("missing".into(), |c| c.to_string());
        push(format!("log_{} |coker'' over Z/{}^{}|", m.p, m.p, m.k), m.log.to_string(), act);
    }

    let first_failure = lines.iter().find(|l| l.verdict == Verdict::Fail).map(|l| l.field.clone());
    let verdict = if first_failure.is_some() {
        Verdict::Fail
    } else if matches!(report.status, Status::Partial { .. }) {
        Verdict::Partial
    } else {
        Verdict::Pass
    };
    Check {
        verdict,
        first_failure,
        lines,
    }
}

/// One line per catalog entry.
pub fn list_text(entries: &[CatalogEntry]) -> String {
    let mut s = String::new();
    for e in entries {
        let exp = if e.expected.as_ref().is_some_and(|x| !x.is_empty()) {
            "expected values"
        } else {
            "no expected values"
        };
        let _ = writeln!(
            s,
            "{:<26} d={} n={}  {:<18}  {}",
            e.scheme.name, e.scheme.d, e.scheme.n, exp, e.description
        );
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListEntry {
    pub name: String,
    pub d: usize,
    pub n: usize,
    pub has_expected: bool,
    pub description: String,
}

pub fn list_entries(entries: &[CatalogEntry]) -> Vec<ListEntry> {
    entries
        .iter()
        .map(|e| ListEntry {
            name: e.scheme.name.clone(),
            d: e.scheme.d,
            n: e.scheme.n,
            has_expected: e.expected.as_ref().is_some_and(|x| !x.is_empty()),
            description: e.description.clone(),
        })
        .collect()
}

/// Plain-text rendering of a report.
pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let i = &r.scheme;
    let _ = writeln!(s, "{}  (d = {}, n = {}, rank {}, ν = {})", i.name, i.d, i.n, i.lattice_rank, i.nu);
    let _ = writeln!(s, "orbit counts L_r: {:?}", r.counts);
    for row in &r.homology {
        let _ = writeln!(s, "  H_{} = {:<32} [{}]", row.degree, row.primary, row.invariant);
    }
    let _ = writeln!(s, "Euler characteristic: {}", r.euler);
    for (p, dp) in &r.modp_ranks {
        let _ = writeln!(s, "  F_{p}: D^p = {:?}  T^p = {:?}", dp, r.torsion_ranks[p]);
    }
    if let Some((k0, k1)) = &r.ktheory {
        let _ = writeln!(s, "K^0 = {}   K^1 = {}", k0.primary_string(), k1.primary_string());
    }
    let d = &r.diagnostics;
    if let (Some(a), Some(b), Some(c)) = (&d.t1_prime, &d.t1_double_prime, &d.t0_prime) {
        let _ = writeln!(
            s,
            "t'_1 = {}   t''_1 = {}   t'_0 = {}",
            a.primary_string(),
            b.primary_string(),
            c.primary_string()
        );
    }
    if let Some(c) = &d.corrected {
        let _ = writeln!(s, "corrected ranks {:?}, count formula e = {}", c.ranks, c.euler);
    }
    if let Some(t) = &d.extension {
        for step in &t.steps {
            let _ = writeln!(
                s,
                "extension: Z/{}^{} count {} leaves {} of {} candidates",
                step.p, step.k, step.observed, step.candidates_after, step.candidates_before
            );
        }
    }
    if let Status::Partial { candidates } = &r.status {
        let c: Vec<String> = candidates.iter().map(FgAbelianGroup::primary_string).collect();
        let _ = writeln!(s, "PARTIAL: H_0 is one of {}", c.join(" | "));
    }
    for v in &r.band_violations {
        let _ = writeln!(s, "band violation: {v}");
    }
    if let Some(run) = &r.ring {
        let _ = writeln!(s, "ring {}: ranks {:?}, tensor log orders {:?}", run.ring, run.ranks, run.tensor_log_orders);
        if let (Some(a), Some(b)) = (run.coker_phi1_prime, run.coker_phi1_double_prime) {
            let _ = writeln!(s, "  log |coker φ'_1| = {a}   log |coker φ''_1| = {b}");
        }
    }
    if let Some(c) = &r.check {
        for l in &c.lines {
            let _ = writeln!(s, "  {:?}  {:<28} expected {:<28} got {}", l.verdict, l.field, l.expected, l.actual);
        }
        let tail = c.first_failure.as_ref().map(|f| format!(" (first mismatch: {f})")).unwrap_or_default();
        let _ = writeln!(s, "check: {:?}{tail}", c.verdict);
    }
    for (phase, t) in &r.timings {
        let _ = writeln!(s, "time {phase}: {:.3}s", t.as_secs_f64());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_spellings() {
        assert_eq!(parse_ring("Q").unwrap().1, Ring::Rationals);
        assert_eq!(parse_ring("F2").unwrap().1, Ring::Prime(2));
        assert_eq!(parse_ring("Fp5").unwrap().1, Ring::Prime(5));
        assert_eq!(parse_ring("Z4").unwrap().1, Ring::PrimePower { p: 2, k: 2 });
        assert_eq!(parse_ring("Z/2^3").unwrap().1, Ring::PrimePower { p: 2, k: 3 });
        assert!(parse_ring("F4").is_err());
        assert!(parse_ring("Z6").is_err());
        assert!(parse_ring("R").is_err());
    }
}
