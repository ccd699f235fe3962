use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use tilehom::linalg::exterior::compound;
use tilehom::linalg::ring::rank_mod_p;
use tilehom::linalg::{
    cokernel, hnf_full, kernel, lattice_ops, snf, Int, IntMatrix, Lattice, LatticeMap,
};

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntMatrix> {
    (0..=max_rows, 0..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-9i64..=9, r * c)
            .prop_map(move |v| IntMatrix::new(r, c, v.into_iter().map(Int::from).collect()))
    })
}

fn pair_same_cols(max_rows: usize, max_cols: usize) -> impl Strategy<Value = (IntMatrix, IntMatrix)> {
    (0..=max_rows, 0..=max_rows, 1..=max_cols).prop_flat_map(|(r1, r2, c)| {
        (
            proptest::collection::vec(-9i64..=9, r1 * c),
            proptest::collection::vec(-9i64..=9, r2 * c),
        )
            .prop_map(move |(x, y)| {
                (
                    IntMatrix::new(r1, c, x.into_iter().map(Int::from).collect()),
                    IntMatrix::new(r2, c, y.into_iter().map(Int::from).collect()),
                )
            })
    })
}

/// `a` is r×s and `b` is s×t, so `a·b` is defined.
fn chain_pair(max: usize) -> impl Strategy<Value = (IntMatrix, IntMatrix)> {
    (1..=max, 1..=max, 1..=max).prop_flat_map(|(r, s, t)| {
        (
            proptest::collection::vec(-9i64..=9, r * s),
            proptest::collection::vec(-9i64..=9, s * t),
        )
            .prop_map(move |(x, y)| {
                (
                    IntMatrix::new(r, s, x.into_iter().map(Int::from).collect()),
                    IntMatrix::new(s, t, y.into_iter().map(Int::from).collect()),
                )
            })
    })
}

fn square(n: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(-9i64..=9, n * n)
        .prop_map(move |v| IntMatrix::new(n, n, v.into_iter().map(Int::from).collect()))
}

/// Invariant factors from gcds of k×k minors: d_1⋯d_k = g_k.
fn minor_gcd_factors(m: &IntMatrix) -> Vec<Int> {
    let mut out = Vec::new();
    let mut prev = Int::one();
    for k in 1..=m.rows().min(m.cols()) {
        let c = compound(m, k);
        let g = (0..c.rows())
            .flat_map(|r| c.row(r).to_vec())
            .fold(Int::zero(), |a, x| a.gcd(&x));
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn is_hnf(h: &IntMatrix, pivots: &[usize]) -> bool {
    for (r, &c) in pivots.iter().enumerate() {
        let p = h.get(r, c);
        if !p.is_positive() {
            return false;
        }
        if (0..c).any(|j| !h.get(r, j).is_zero()) {
            return false;
        }
        for above in 0..r {
            let x = h.get(above, c);
            if x.is_negative() || x >= p {
                return false;
            }
        }
        for below in r + 1..h.rows() {
            if !h.get(below, c).is_zero() {
                return false;
            }
        }
    }
    pivots.windows(2).all(|w| w[0] < w[1])
        && (pivots.len()..h.rows()).all(|r| h.row(r).iter().all(Zero::is_zero))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn snf_matches_minor_gcds(m in matrix(6, 6)) {
        let s = snf(&m);
        prop_assert_eq!(&s.factors, &minor_gcd_factors(&m));
        let d = &(&s.left * &m) * &s.right;
        prop_assert_eq!(d, IntMatrix::diagonal(m.rows(), m.cols(), &s.factors));
        prop_assert_eq!(s.left.det().abs(), Int::one());
        prop_assert_eq!(s.right.det().abs(), Int::one());
        prop_assert!(s.factors.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
    }

    #[test]
    fn hnf_is_canonical_and_unimodular(m in matrix(6, 6)) {
        let h = hnf_full(&m);
        prop_assert_eq!(&(&h.u * &m), &h.h);
        prop_assert_eq!(h.u.det().abs(), Int::one());
        prop_assert!(is_hnf(&h.h, &h.pivots));
        // the same row lattice from a shuffled generating set gives the same basis
        let rev: Vec<usize> = (0..m.rows()).rev().collect();
        prop_assert_eq!(Lattice::span(&m), Lattice::span(&m.select_rows(&rev)));
    }

    #[test]
    fn rank_nullity_and_cokernel(m in matrix(6, 6)) {
        let f = LatticeMap::new(m.clone(), "s", "t");
        let k = kernel(&f);
        prop_assert_eq!(k.rank() + f.rank(), m.rows());
        let c = cokernel(&f);
        prop_assert_eq!(c.free_rank, m.cols() - f.rank());
        let s = snf(&m);
        let prod: Int = s.factors.iter().product();
        prop_assert_eq!(c.torsion_order(), prod);
        for p in [2u64, 3, 5, 7] {
            let divisible = s.factors.iter().filter(|d| d.is_multiple_of(&Int::from(p))).count();
            prop_assert_eq!(rank_mod_p(&m, p), f.rank() - divisible);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn compound_is_functorial(a in square(3), b in square(3), k in 0usize..=3) {
        let ab = &a * &b;
        prop_assert_eq!(compound(&ab, k), &compound(&a, k) * &compound(&b, k));
    }

    #[test]
    fn compound_rectangular((a, b) in chain_pair(4), k in 0usize..=4) {
        prop_assert_eq!(compound(&(&a * &b), k), &compound(&a, k) * &compound(&b, k));
    }

    #[test]
    fn lattice_identities((a, b) in pair_same_cols(4, 4)) {
        let la = Lattice::span(&a);
        let lb = Lattice::span(&b);
        let ops = lattice_ops(&la, &lb);
        prop_assert!(ops.intersection.is_sublattice_of(&la));
        prop_assert!(ops.intersection.is_sublattice_of(&lb));
        prop_assert!(la.is_sublattice_of(&ops.sum));
        prop_assert!(lb.is_sublattice_of(&ops.sum));
        prop_assert!(la.is_sublattice_of(&ops.saturation));
        prop_assert_eq!(ops.saturation.rank(), la.rank());
        // (a+b)/b ≅ a/(a∩b)
        prop_assert_eq!(ops.quotient.clone(), la.quotient_by(&ops.intersection));
        // quotient order equals the index: |det| ratio for full-rank lattices
        let n = a.cols();
        if ops.sum.rank() == n && lb.rank() == n {
            let idx = lb.basis().det().abs() / ops.sum.basis().det().abs();
            prop_assert_eq!(ops.quotient.torsion_order(), idx);
        }
        prop_assert_eq!(ops.quotient.free_rank + lb.rank(), ops.sum.rank());
    }
}
