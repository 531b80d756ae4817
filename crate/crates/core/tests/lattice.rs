use k3aut::classification::TABLE1;
use k3aut::matrix::IntMatrix;
use k3aut::GramLattice;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const POOL: [&str; 14] = [
    "U", "U(2)", "U(3)", "A1", "A2", "A3", "A1(3)", "D4", "D5", "E6", "E7", "E8", "E8(2)", "A2(2)",
];

fn lat(e: &str) -> GramLattice {
    GramLattice::from_expr(e).unwrap()
}

#[test]
fn invariant_factors_multiply_to_determinant_on_table() {
    for (_, _, s, t) in TABLE1 {
        for e in [s, t] {
            let l = lat(e);
            let prod: BigInt = l.discriminant_group().invariant_factors().iter().product();
            assert_eq!(prod, l.determinant().abs(), "{e}");
        }
    }
}

#[test]
fn table_rows_have_listed_rank_a_and_even_type() {
    for (rank, a, s, _) in TABLE1 {
        let inv = lat(s).nikulin_invariants().unwrap();
        assert_eq!((inv.rank, inv.a, inv.delta), (rank, a, Some(0)), "{s}");
    }
}

fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..7, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_transform_identity(rows in arb_matrix()) {
        let a = IntMatrix::from_i64(&rows);
        let s = a.smith_normal_form();
        prop_assert_eq!(&(&s.left * &a) * &s.right, s.diagonal_matrix());
        prop_assert!(s.left.determinant().abs().is_one());
        prop_assert!(s.right.determinant().abs().is_one());
        for w in s.diagonal.windows(2) {
            prop_assert!(w[0].is_zero() && w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        prop_assert!(s.diagonal.iter().all(|d| !d.is_negative()));
    }

    #[test]
    fn direct_sums(i in 0usize..POOL.len(), j in 0usize..POOL.len()) {
        let (l1, l2) = (lat(POOL[i]), lat(POOL[j]));
        let sum = l1.direct_sum(&l2);
        prop_assert_eq!(sum.signature(), l1.signature() + l2.signature());
        let (a1, a2, a) = (
            l1.discriminant_group().a(),
            l2.discriminant_group().a(),
            sum.discriminant_group().a(),
        );
        prop_assert!(a <= a1 + a2);
        let (i1, i2) = (l1.nikulin_invariants().unwrap(), l2.nikulin_invariants().unwrap());
        if i1.p.is_some() && i1.p == i2.p {
            prop_assert_eq!(a, a1 + a2);
        }
    }

    #[test]
    fn generator_prefilter_is_sound(terms in prop::collection::vec(0usize..6, 1..5)) {
        let names = ["U", "U(2)", "A1", "D4", "E8", "E7"];
        let expr: Vec<&str> = terms.iter().map(|&t| names[t]).collect();
        let l = lat(&expr.join("+"));
        let disc = l.discriminant_group();
        if disc.generators_force_delta_one() {
            prop_assert_eq!(l.delta().unwrap(), 1);
        }
        let inv = l.nikulin_invariants().unwrap();
        prop_assert_eq!(inv.t_plus + inv.t_minus, inv.rank);
        prop_assert!(inv.a <= inv.rank);
    }
}
