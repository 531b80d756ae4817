use k3aut::elliptic::{
    analyze_fibers, automorphism_multiplier, registry, shioda_tate_check, KodairaType, Valuations,
    WeierstrassModel,
};
use k3aut::rational::int;
use k3aut::Error;
use proptest::prelude::*;

#[test]
fn registry_identities() {
    for e in registry() {
        let inv = e.model.invariants().unwrap();
        assert_eq!(
            &inv.c4.pow(3) - &inv.c6.pow(2),
            inv.disc.scale(&int(1728)),
            "{}",
            e.id
        );
        if e.is_flagged() {
            assert!(!analyze_fibers(&e.model).unwrap().is_valid_k3(), "{}", e.id);
            continue;
        }
        let c = analyze_fibers(&e.model).unwrap();
        assert_eq!(c.total_euler(), 24, "{}", e.id);
        let r = shioda_tate_check(&c, &e.claimed()).unwrap();
        assert_eq!(r.mw_rank, 0, "{}", e.id);
        assert!(r.exact, "{}", e.id);
        assert_eq!(
            automorphism_multiplier(&e.model, &e.automorphism)
                .unwrap()
                .order,
            e.expected_order
        );
    }
}

#[test]
fn u_model_against_trivial_claim() {
    let e = registry().into_iter().find(|e| e.id == "U").unwrap();
    let c = analyze_fibers(&e.model).unwrap();
    assert_eq!(c.type_counts().get(&KodairaType::I(1)), Some(&22));
    let r = shioda_tate_check(&c, &"U".parse().unwrap()).unwrap();
    assert!(r.required.is_empty());
    assert_eq!(r.mw_rank, 0);
}

#[test]
fn wrong_claim_is_rejected() {
    let m = WeierstrassModel::from_ints(&[], &[0, 0, 1], &[0, 0, 0, 0, 0, 0, 0, 1]);
    let c = analyze_fibers(&m).unwrap();
    assert_eq!(
        shioda_tate_check(&c, &"U+E8+E8".parse().unwrap()),
        Err(Error::MissingSummand("E8".into()))
    );
}

fn arb_valuations() -> impl Strategy<Value = Valuations> {
    (
        prop::option::of(0i64..30),
        prop::option::of(0i64..40),
        0i64..60,
    )
        .prop_map(|(c4, c6, disc)| Valuations { c4, c6, disc })
}

proptest! {
    #[test]
    fn minimalize_is_idempotent(v in arb_valuations()) {
        let (once, _) = v.minimalize();
        let (twice, shifts) = once.minimalize();
        prop_assert_eq!(once, twice);
        prop_assert_eq!(shifts, 0);
    }

    #[test]
    fn types_are_consistent(i in 0usize..12, n in 1u32..20) {
        let t = [
            KodairaType::I(n), KodairaType::II, KodairaType::III, KodairaType::IV,
            KodairaType::IStar(n - 1), KodairaType::IVStar, KodairaType::IIIStar, KodairaType::IIStar,
            KodairaType::I(1), KodairaType::I(2), KodairaType::IStar(0), KodairaType::IStar(4),
        ][i];
        let rank = t.root_lattice().map_or(0, |r| r.rank());
        prop_assert_eq!(rank + 1, t.components());
        let expected_euler = match t {
            KodairaType::I(m) => m,
            _ => t.components() + 1,
        };
        prop_assert_eq!(t.euler(), expected_euler);
        prop_assert_eq!(t.to_string().parse::<KodairaType>().unwrap(), t);
    }
}
