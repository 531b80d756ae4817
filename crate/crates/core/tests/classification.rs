use k3aut::classification::{
    exists_automorphism, fixed_locus_profile, order_constraints, prime_order_counts, verify_table1,
    SpecialLocus, ORDER4_EXCLUDED, ORDER8_LATTICES, TABLE1,
};
use k3aut::cyclotomic::euler_phi;
use k3aut::lefschetz::solve_fixed_point_counts;
use k3aut::rational::{self, int};
use k3aut::GramLattice;

fn lat(e: &str) -> GramLattice {
    GramLattice::from_expr(e).unwrap()
}

#[test]
fn order_four_profiles_match_solver_on_all_admissible_lattices() {
    let mut seen = 0;
    for (rank, _, s, _) in TABLE1 {
        let l = lat(s);
        let p = fixed_locus_profile(4, &l).unwrap();
        if ORDER4_EXCLUDED.contains(&s) {
            assert!(!p.exists, "{s}");
            continue;
        }
        assert!(p.exists, "{s}");
        assert_eq!(l.delta().unwrap(), 0);
        let sol = solve_fixed_point_counts(4, rank as u32).unwrap();
        assert_eq!(int(p.m.unwrap() as i64), sol.total_isolated(), "{s}");
        assert_eq!(int(2 * p.n.unwrap() as i64), sol.c, "{s}");
        seen += 1;
    }
    assert_eq!(seen, 12);
}

/// The order-16 lattice of rank 14 is compared in the acceptance suite.
#[test]
fn order_eight_and_sixteen_profiles_match_solver() {
    for (order, s) in ORDER8_LATTICES
        .iter()
        .map(|s| (8, *s))
        .chain([(16, "U+D4")])
    {
        let l = lat(s);
        let p = fixed_locus_profile(order, &l).unwrap();
        let sol = solve_fixed_point_counts(order, l.rank() as u32).unwrap();
        assert_eq!(
            int(p.m.unwrap() as i64),
            sol.total_isolated(),
            "{order} {s}"
        );
        assert_eq!(int(2 * p.n.unwrap() as i64), sol.c, "{order} {s}");
    }
}

#[test]
fn delta_one_lattices_have_no_order_four_automorphism() {
    for e in ["U+A1", "U+A1+A1", "U+E7", "U+E8+E7", "U(2)+A1"] {
        let l = lat(e);
        assert_eq!(l.delta().unwrap(), 1, "{e}");
        assert!(!exists_automorphism(4, &l).unwrap(), "{e}");
    }
}

#[test]
fn euler_phi_spot_checks() {
    for k in 1..12 {
        assert_eq!(euler_phi(1 << k), 1 << (k - 1));
    }
    for p in [2, 3, 5, 7, 11, 13, 17, 19] {
        assert_eq!(euler_phi(p), p - 1);
    }
    assert_eq!((euler_phi(66), euler_phi(44), euler_phi(12)), (20, 20, 4));
    assert_eq!(euler_phi(66), euler_phi(6) * euler_phi(11));
}

#[test]
fn unimodular_orders() {
    let u = lat("U");
    for (order, allowed) in [(66, true), (44, true), (12, true), (5, false), (7, false)] {
        assert_eq!(
            order_constraints(order, &u).unwrap().allowed(),
            allowed,
            "{order}"
        );
    }
    assert!(!order_constraints(6, &lat("U+D4")).unwrap().allowed());
}

/// Topological Lefschetz: χ(X^φ) = 2 + r - (22 - r)/(p - 1).
#[test]
fn prime_order_euler_identity() {
    for p in [2i64, 3, 5, 7, 13] {
        for r in 1..=20i64 {
            for a in 0..=r {
                let k = 22 - r - (p - 1) * a;
                if k < 0 || k % (2 * (p - 1)) != 0 {
                    continue;
                }
                let g = int(k / (2 * (p - 1)));
                let (m, n) = prime_order_counts(p, r, a);
                let chi = m + int(2) - int(2) * g + int(2) * n;
                let expected = int(2 + r) - rational::frac(22 - r, p - 1);
                assert_eq!(chi, expected, "p={p} r={r} a={a}");
            }
        }
    }
}

#[test]
fn involution_special_cases() {
    let p = fixed_locus_profile(2, &lat("U+E8(2)")).unwrap();
    assert_eq!(
        (p.special, p.genus),
        (SpecialLocus::TwoEllipticCurves, Some(1))
    );
    let p = fixed_locus_profile(2, &lat("U(2)+E8(2)")).unwrap();
    assert_eq!(p.special, SpecialLocus::EmptyLocus);
    assert_eq!(p.euler(), Some(0));
    let p = fixed_locus_profile(2, &lat("U+D8+D8")).unwrap();
    assert_eq!((p.genus, p.n, p.m), (Some(0), Some(7), Some(0)));
}

#[test]
fn table_has_one_inconsistent_row() {
    let rows = verify_table1().unwrap();
    let bad: Vec<_> = rows
        .iter()
        .filter(|r| !r.consistent)
        .map(|r| (r.rank, r.a, r.t_invariants.a))
        .collect();
    assert_eq!(bad, vec![(6, 4, 6)]);
    assert!(rows.iter().all(|r| r.s_matches));
}
