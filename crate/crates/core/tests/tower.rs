use std::sync::Arc;

use equising::field::rat;
use equising::tower::slice;
use equising::{
    build_tower, build_tower_system, check_family, verify_tower, Jet, QJet, Rational, TowerOptions, VarContext, Verdict,
};
use proptest::prelude::*;

const ORDER: u32 = 16;

fn plane() -> Arc<VarContext> {
    VarContext::coords(["x1", "x2"]).unwrap()
}

/// `(a, b, c)` stands for the branch `x2^a - c x1^b`.
type Branch = (u32, u32, i64);

/// At most three sheets over `x1`, which keeps every discriminant below the degree cap.
fn branches() -> impl Strategy<Value = Vec<Branch>> {
    prop::collection::vec((1u32..=2, 1u32..=4, prop_oneof![-2i64..=-1, 1i64..=2]), 1..=2)
        .prop_filter("at most three sheets", |bs| bs.iter().map(|b| b.0).sum::<u32>() <= 3)
}

fn germ(ctx: &Arc<VarContext>, bs: &[Branch]) -> QJet {
    let (x1, x2) = (Jet::var(ctx, ORDER, ctx.coord(1)), Jet::var(ctx, ORDER, ctx.coord(2)));
    bs.iter().fold(Jet::one(ctx, ORDER), |acc, &(a, b, c)| {
        acc.mul(&x2.pow(a).sub(&x1.pow(b).scale(&rat(c, 1))).unwrap()).unwrap()
    })
}

fn opts(seed: u64) -> TowerOptions {
    TowerOptions { seed, order: ORDER }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn towers_verify(bs in branches(), seed in 0u64..50) {
        let f = germ(&plane(), &bs);
        let tw = build_tower(&f, &opts(seed)).unwrap();
        prop_assert!(verify_tower(&tw).passed());
        prop_assert!(tw.levels.len() <= 2);
        for l in &tw.levels {
            prop_assert!(l.disc_index >= 1 && l.disc_index <= l.degree().max(1));
            prop_assert!(l.unit.is_unit());
        }
    }

    #[test]
    fn recorded_change_inverts(bs in branches()) {
        let f = germ(&plane(), &bs);
        let tw = build_tower(&f, &opts(0)).unwrap();
        let top = &tw.levels[0];
        let product = top.unit.mul(&top.poly.to_jet()).unwrap();
        let back = top.change.inverted().apply(&product).unwrap();
        prop_assert!(back.agrees_to(&f, tw.order));
    }

    #[test]
    fn invariant_under_recorded_inverse(bs in branches(), seed in 0u64..20) {
        let f = germ(&plane(), &bs);
        let tw = build_tower(&f, &opts(seed)).unwrap();
        let moved = tw.levels[0].change.inverted().apply(&f).unwrap();
        prop_assert_eq!(build_tower(&moved, &opts(seed)).unwrap().signature(), tw.signature());
    }

    #[test]
    fn single_germ_system_matches(bs in branches()) {
        let f = germ(&plane(), &bs);
        let one = build_tower(&f, &opts(0)).unwrap();
        let sys = build_tower_system(std::slice::from_ref(&f), &opts(0)).unwrap();
        prop_assert_eq!(one.signature(), sys.signature());
        prop_assert!(verify_tower(&sys).passed());
    }

    #[test]
    fn deterministic(bs in branches(), seed in 0u64..50) {
        let f = germ(&plane(), &bs);
        prop_assert_eq!(build_tower(&f, &opts(seed)).unwrap(), build_tower(&f, &opts(seed)).unwrap());
    }

    #[test]
    fn family_verdicts_are_consistent(bs in branches(), e in (0u32..=3, 0u32..=2), c in 1i64..=2) {
        let ctx = VarContext::new(["t"], ["x1", "x2"]).unwrap();
        let t = Jet::var(&ctx, ORDER, 0);
        let mono = Jet::var(&ctx, ORDER, 1).pow(e.0).mul(&Jet::var(&ctx, ORDER, 2).pow(e.1)).unwrap();
        prop_assume!(e.0 + e.1 > 0);
        let fam = germ(&ctx, &bs).add(&t.mul(&mono).unwrap().scale(&rat(c, 1))).unwrap();
        let report = check_family(&fam, &opts(0)).unwrap();
        let zero = slice(&fam, &[rat(0, 1)]).unwrap();
        prop_assert!(zero.agrees_to(&germ(&plane(), &bs), ORDER));
        match report.verdict {
            Verdict::Equisingular => {
                prop_assert!(report.witness.is_none());
                let family_sig: Vec<(usize, usize)> =
                    report.levels.iter().map(|l| (l.degree(), l.disc_index)).collect();
                let tw = |t: Rational| build_tower(&slice(&fam, &[t]).unwrap(), &opts(0)).unwrap().signature();
                prop_assert_eq!(tw(rat(0, 1)), family_sig.clone());
                prop_assert_eq!(tw(rat(1, 7)), family_sig.clone());
                prop_assert_eq!(tw(rat(-1, 5)), family_sig);
            }
            Verdict::NotEquisingular => {
                let w = report.witness.as_ref().unwrap();
                prop_assert!(!w.series.is_zero_to_order());
                let at = |t: Rational| w.series.eval_var(0, &t).unwrap();
                prop_assert!(at(rat(0, 1)).is_zero_to_order());
                // a series in t can only be evaluated away from 0 when it is a polynomial
                if w.series.is_exact() {
                    prop_assert!([rat(1, 7), rat(-1, 5), rat(1, 3)].into_iter().any(|t| !at(t).is_zero_to_order()));
                }
            }
            // a unit depending on t makes the lower levels series in t
            Verdict::Inconclusive => prop_assert!(!report.notes.is_empty()),
        }
    }
}

#[test]
fn moving_cusp_is_equisingular() {
    let ctx = VarContext::new(["t"], ["x1", "x2"]).unwrap();
    let f = equising::Expr::parse("(x2 - t*x1)^2 - x1^3").unwrap().to_jet(&ctx, ORDER).unwrap();
    let report = check_family(&f, &opts(0)).unwrap();
    assert_eq!(report.verdict, Verdict::Equisingular);
    let sig: Vec<(usize, usize)> = report.levels.iter().map(|l| (l.degree(), l.disc_index)).collect();
    assert_eq!(sig, vec![(2, 1), (3, 3)]);
    let central = build_tower(&slice(&f, &[rat(0, 1)]).unwrap(), &opts(0)).unwrap();
    assert_eq!(central.signature(), sig);
}
