use equising::field::rat;
use equising::gcd::{gcd, multiplicity};
use equising::{analyze, divisor_constant, emit_system, theta, Error, Expr, FactoredGerm, Field, OneForm, QPoly};
use proptest::prelude::*;

fn names() -> Vec<String> {
    vec!["x1".into(), "x2".into()]
}

fn poly(text: &str) -> QPoly {
    Expr::parse(text).unwrap().to_poly(&names()).unwrap()
}

fn germ(factors: &[(QPoly, u32)]) -> Option<FactoredGerm> {
    FactoredGerm::new(rat(1, 1), factors.to_vec()).ok()
}

/// Exponent of `h` in the coefficient gcd of `w`.
fn power_in(w: &OneForm<equising::Rational>, h: &QPoly) -> u32 {
    multiplicity(&w.a, h).0.min(multiplicity(&w.b, h).0)
}

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-3i64..=-1, 1i64..=3]
}

/// `f = h^m rho + c g` with `h = x2 - a x1 - b x1^2`, `rho = 1 + r1 x1 + r2 x2`, `g = x1^k`.
fn pencil() -> impl Strategy<Value = (QPoly, u32, i64, FactoredGerm, FactoredGerm)> {
    (nonzero(), -2i64..=2, 2u32..=4, nonzero(), -2i64..=2, -2i64..=2, 1u32..=3).prop_filter_map(
        "valid germs",
        |(a, b, m, c, r1, r2, k)| {
            let h = poly(&format!("x2 - ({a})*x1 - ({b})*x1^2"));
            let rho = poly(&format!("1 + ({r1})*x1 + ({r2})*x2"));
            let g = poly("x1").pow(k);
            let f = &(&h.pow(m) * &rho) + &g.scale(&rat(c, 1));
            let fg = germ(&[(f, 1)])?;
            let gg = germ(&[(poly("x1"), k)])?;
            Some((h, m, c, fg, gg))
        },
    )
}

/// Lines through the origin with repeated factors in `f`.
fn lines() -> impl Strategy<Value = (FactoredGerm, FactoredGerm)> {
    (prop::collection::btree_map(-3i64..=3, 1u32..=3, 1..=3), -3i64..=3, 1u32..=2).prop_filter_map(
        "coprime lines",
        |(slopes, d, k)| {
            let fs: Vec<(QPoly, u32)> =
                slopes.iter().map(|(a, e)| (poly(&format!("x2 - ({a})*x1")), *e)).collect();
            let g = poly(&format!("x1 - ({d})*x2"));
            let fg = germ(&fs)?;
            let gg = germ(&[(g, k)])?;
            theta(&fg, &gg).ok()?;
            Some((fg, gg))
        },
    )
}

fn check_analysis(f: &FactoredGerm, g: &FactoredGerm) -> Result<(), TestCaseError> {
    match analyze(f, g, &[]) {
        Ok(an) => {
            prop_assert!(gcd(&an.omega.a, &an.omega.b).is_constant());
            prop_assert!(!an.omega.is_zero());
            let sys = emit_system(&an);
            prop_assert!(sys.solution_checks());
            prop_assert!(sys.residuals().iter().all(|r| r.is_zero()));
        }
        Err(Error::LemmaViolation(_)) | Err(Error::Precondition(_)) => {}
        Err(e) => prop_assert!(false, "unexpected error {e}"),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn theta_identity((f, g) in lines()) {
        let th = theta(&f, &g).unwrap();
        let (fe, ge) = (f.expanded(), g.expanded());
        let df = OneForm::differential(&fe);
        let dg = OneForm::differential(&ge);
        let radical = &f.reduced() * &g.reduced();
        let fg = &fe * &ge;
        prop_assert_eq!(&fg * &th.a, &radical * &(&(&ge * &df.a) - &(&fe * &dg.a)));
        prop_assert_eq!(&fg * &th.b, &radical * &(&(&ge * &df.b) - &(&fe * &dg.b)));
    }

    #[test]
    fn pencil_bookkeeping((h, m, c, f, g) in pencil()) {
        let th = theta(&f, &g).unwrap();
        prop_assert_eq!(power_in(&th, &h), m - 1);
        let r = divisor_constant(&h, &f, &g).unwrap().unwrap();
        prop_assert_eq!(r.c.as_rational(), Some(rat(c, 1)));
        prop_assert_eq!(r.mu, m - 1);
        check_analysis(&f, &g)?;
    }

    #[test]
    fn factors_never_divide_theta((f, g) in lines()) {
        let th = theta(&f, &g).unwrap();
        for (h, _) in f.factors.iter().chain(&g.factors) {
            prop_assert_eq!(power_in(&th, h), 0);
        }
    }

    #[test]
    fn omega_is_reduced((f, g) in lines()) {
        check_analysis(&f, &g)?;
    }
}

#[test]
fn repeated_factor_fixture() {
    let f = germ(&[(poly("x2 - x1"), 2), (poly("x2 + x1"), 1)]).unwrap();
    let g = germ(&[(poly("x1"), 2)]).unwrap();
    let th = theta(&f, &g).unwrap();
    for (h, _) in f.factors.iter().chain(&g.factors) {
        assert_eq!(power_in(&th, h), 0);
    }
    let an = analyze(&f, &g, &[]).unwrap();
    assert!(gcd(&an.omega.a, &an.omega.b).is_constant());
    assert!(emit_system(&an).solution_checks());
}

#[test]
fn pencil_fixture() {
    let f = germ(&[(poly("(x2 - x1)^3*(1 + x1) + 2*x1^2"), 1)]).unwrap();
    let g = germ(&[(poly("x1"), 2)]).unwrap();
    let an = analyze(&f, &g, &[]).unwrap();
    let r = an.records.iter().find(|r| r.h == poly("x2 - x1").lex_monic()).unwrap();
    assert_eq!(r.c.as_rational(), Some(rat(2, 1)));
    assert_eq!(r.mu, 2);
    assert!(gcd(&an.omega.a, &an.omega.b).is_constant());
    assert!(emit_system(&an).solution_checks());
}
