//! JSON encodings of exact data. Rationals are "num/den" strings, monomials
//! are exponent arrays in the order of the variable list.

use equising::mero::{DivisorRecord, OneForm};
use equising::pseudopoly::EntryStatus;
use equising::{Field, GenDiscSequence, Jet, LinearChange, Poly, PseudoPoly, Rational, Scalar, VarContext};
use serde_json::{json, Value};

pub fn rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn rationals(qs: &[Rational]) -> Value {
    Value::Array(qs.iter().map(|q| Value::String(rational(q))).collect())
}

/// Exact coefficient encodings.
pub trait Coeff {
    fn encode(&self) -> Value;
}

impl Coeff for Rational {
    fn encode(&self) -> Value {
        Value::String(rational(self))
    }
}

impl Coeff for Scalar {
    /// Power-basis coordinates over the number field, constant first.
    fn encode(&self) -> Value {
        if self.field().is_none() {
            let q = self.coeffs().first().cloned().unwrap_or_default();
            return Value::String(rational(&q));
        }
        rationals(self.coeffs())
    }
}

pub fn scalar(c: &Scalar) -> Value {
    json!({
        "text": c.to_string(),
        "minpoly": c.field().map(|k| rationals(k.minpoly())),
        "coords": rationals(if c.coeffs().is_empty() { &[] } else { c.coeffs() }),
    })
}

pub fn poly<S: Field + Coeff>(p: &Poly<S>, names: &[String]) -> Value {
    let terms: Vec<Value> = p.terms().map(|(m, c)| json!([m.0, c.encode()])).collect();
    json!({
        "text": p.display_with(names).to_string(),
        "terms": terms,
    })
}

pub fn jet<S: Field + Coeff>(j: &Jet<S>) -> Value {
    let terms: Vec<Value> = j.poly().terms().map(|(m, c)| json!([m.0, c.encode()])).collect();
    json!({
        "text": j.to_string(),
        "order": j.order(),
        "exact": j.is_exact(),
        "terms": terms,
    })
}

pub fn jets<S: Field + Coeff>(js: &[Jet<S>]) -> Value {
    Value::Array(js.iter().map(jet).collect())
}

pub fn pseudopoly<S: Field + Coeff>(w: &PseudoPoly<S>) -> Value {
    json!({
        "var": w.ctx().name(w.var()),
        "degree": w.degree(),
        "text": w.to_string(),
        "coeffs": jets(w.coeffs()),
    })
}

pub fn status(s: EntryStatus) -> &'static str {
    match s {
        EntryStatus::Nonzero => "nonzero",
        EntryStatus::ExactZero => "exact-zero",
        EntryStatus::ZeroToOrder => "zero-to-order",
    }
}

pub fn gendisc<S: Field + Coeff>(g: &GenDiscSequence<S>) -> Value {
    let entries: Vec<Value> = g
        .entries
        .iter()
        .zip(&g.status)
        .enumerate()
        .map(|(i, (d, s))| json!({ "l": i + 1, "status": status(*s), "value": jet(d) }))
        .collect();
    json!({
        "degree": g.degree,
        "first_nonzero": g.first_nonzero,
        "order": g.order,
        "entries": entries,
    })
}

pub fn change(c: &LinearChange, ctx: &VarContext) -> Value {
    let block: Vec<&str> = c.block.iter().map(|&i| ctx.name(i)).collect();
    json!({
        "text": c.describe(ctx),
        "block": block,
        "matrix": c.matrix,
        "inverse": c.inverse,
    })
}

pub fn one_form<S: Field + Coeff>(w: &OneForm<S>, names: &[String]) -> Value {
    json!({
        "text": w.display_with(names).to_string(),
        "a": poly(&w.a, names),
        "b": poly(&w.b, names),
    })
}

pub fn record(r: &DivisorRecord, names: &[String]) -> Value {
    json!({
        "h": poly(&r.h, names),
        "c": scalar(&r.c),
        "real": r.is_real(),
        "mu": r.mu,
        "component": poly(&r.component, names),
        "rho": poly(&r.rho, names),
    })
}
