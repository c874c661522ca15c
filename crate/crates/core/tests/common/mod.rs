#![allow(dead_code)]

use std::sync::Arc;

use equising::field::rat;
use equising::{Jet, Monomial, Poly, QJet, Rational, VarContext};
use proptest::prelude::*;

pub const ORDER: u32 = 8;

pub fn ctx3() -> Arc<VarContext> {
    VarContext::coords(["x1", "x2", "x3"]).unwrap()
}

/// Terms as `(exponents, numerator)` with small integer coefficients.
pub fn terms(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -4i64..=4), 0..=max_terms)
}

pub fn poly_from(nvars: usize, ts: &[(Vec<u32>, i64)]) -> Poly<Rational> {
    Poly::from_terms(nvars, ts.iter().map(|(e, c)| (Monomial(e.clone()), rat(*c, 1))))
}

pub fn jet_from(ctx: &Arc<VarContext>, order: u32, ts: &[(Vec<u32>, i64)]) -> QJet {
    Jet::from_poly(ctx, poly_from(ctx.len(), ts), order)
}

pub fn parse(ctx: &Arc<VarContext>, order: u32, text: &str) -> QJet {
    equising::Expr::parse(text).unwrap().to_jet(ctx, order).unwrap()
}
