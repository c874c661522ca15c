//! Multivariate power series truncated at a total order.
//!
//! A [`Jet`] of order `N` is known modulo all terms of total degree `>= N`.
//! The `exact` flag marks a value that is a genuine polynomial with no hidden
//! tail; only exact jets can certify that something vanishes identically.

use std::fmt;
use std::sync::Arc;



use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Monomial, Poly};
use crate::vars::{same_context, VarContext};

/// Default truncation order.
pub const DEFAULT_ORDER: u32 = 16;

/// The valuation (minimal total degree of a term) of a jet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(u32),
    /// No term below the truncation order; `exact` certifies the value is identically zero.
    Infinite { exact: bool },
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite { .. } => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite { exact: true } => write!(f, "inf (exact)"),
            Valuation::Infinite { exact: false } => write!(f, "inf (to order)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<S> {
    ctx: Arc<VarContext>,
    order: u32,
    poly: Poly<S>,
    exact: bool,
}

impl<S: Field> Jet<S> {
    /// Wraps a polynomial, truncating at `order`. The result is exact iff
    /// `exact` is set and nothing was truncated.
    pub fn new(ctx: &Arc<VarContext>, order: u32, poly: Poly<S>, exact: bool) -> Self {
        assert_eq!(ctx.len(), poly.nvars(), "polynomial does not match the context");
        let (poly, dropped) = poly.truncate(order);
        Jet { ctx: ctx.clone(), order, poly, exact: exact && !dropped }
    }

    /// An exact polynomial, provided it fits below `order`.
    pub fn from_poly(ctx: &Arc<VarContext>, poly: Poly<S>, order: u32) -> Self {
        Self::new(ctx, order, poly, true)
    }

    pub fn zero(ctx: &Arc<VarContext>, order: u32) -> Self {
        Self::from_poly(ctx, Poly::zero(ctx.len()), order)
    }

    pub fn one(ctx: &Arc<VarContext>, order: u32) -> Self {
        Self::constant(ctx, order, S::one())
    }

    pub fn constant(ctx: &Arc<VarContext>, order: u32, c: S) -> Self {
        Self::from_poly(ctx, Poly::constant(ctx.len(), c), order)
    }

    pub fn var(ctx: &Arc<VarContext>, order: u32, v: usize) -> Self {
        Self::from_poly(ctx, Poly::var(ctx.len(), v), order)
    }

    pub fn var_named(ctx: &Arc<VarContext>, order: u32, name: &str) -> Result<Self> {
        Ok(Self::var(ctx, order, ctx.index_of(name)?))
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    /// The truncation order `N`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn poly(&self) -> &Poly<S> {
        &self.poly
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Same value, flagged exact. Callers must have proved there is no tail.
    pub(crate) fn certified_exact(mut self) -> Self {
        self.exact = true;
        self
    }

    #[cfg(test)]
    pub(crate) fn inexact(mut self) -> Self {
        self.exact = false;
        self
    }

    pub fn with_order(&self, order: u32) -> Self {
        if order >= self.order {
            // an exact value is known at every order
            let exact = self.exact;
            Jet { order: if exact { order } else { self.order }, ..self.clone() }
        } else {
            Self::new(&self.ctx, order, self.poly.clone(), self.exact)
        }
    }

    /// No stored term (zero modulo the truncation order).
    pub fn is_zero_to_order(&self) -> bool {
        self.poly.is_zero()
    }

    /// Certified identically zero.
    pub fn is_exact_zero(&self) -> bool {
        self.exact && self.poly.is_zero()
    }

    pub fn constant_term(&self) -> S {
        self.poly.constant_term()
    }

    pub fn is_unit(&self) -> bool {
        self.order > 0 && !self.constant_term().is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        match self.poly.valuation() {
            Some(v) => Valuation::Finite(v),
            None => Valuation::Infinite { exact: self.exact },
        }
    }

    pub fn involves(&self, v: usize) -> bool {
        self.poly.involves(v)
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::Context(format!(
                "{:?} vs {:?}",
                self.ctx.names(),
                other.ctx.names()
            )))
        }
    }

    fn binary_order(&self, other: &Self) -> u32 {
        self.order.min(other.order)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let order = self.binary_order(other);
        Ok(Self::new(&self.ctx, order, &self.poly + &other.poly, self.exact && other.exact))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let order = self.binary_order(other);
        Ok(Self::new(&self.ctx, order, &self.poly - &other.poly, self.exact && other.exact))
    }

    pub fn neg(&self) -> Self {
        Jet { poly: -&self.poly, ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let order = self.binary_order(other);
        let (poly, dropped) = self.poly.mul_truncated(&other.poly, Some(order));
        Ok(Jet {
            ctx: self.ctx.clone(),
            order,
            poly,
            exact: self.exact && other.exact && !dropped,
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Jet { poly: self.poly.scale(c), ..self.clone() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ctx, self.order);
        for _ in 0..e {
            acc = acc.mul(self).expect("same context");
        }
        acc
    }

    /// Multiplicative inverse modulo the truncation order.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv0 = c0.try_inv().ok_or(Error::NotAUnit)?;
        if self.order == 0 {
            return Err(Error::NotAUnit);
        }
        // homogeneous parts: B_0 = 1/c0, B_d = -(1/c0) sum_{k=1..d} A_k B_{d-k}
        let n = self.ctx.len();
        let order = self.order as usize;
        let mut a: Vec<Poly<S>> = vec![Poly::zero(n); order];
        for (m, c) in self.poly.terms() {
            a[m.degree() as usize].add_term(m.clone(), c.clone());
        }
        let mut b: Vec<Poly<S>> = Vec::with_capacity(order);
        b.push(Poly::constant(n, inv0.clone()));
        let minus_inv0 = -inv0.clone();
        for d in 1..order {
            let mut sum = Poly::zero(n);
            for k in 1..=d {
                if !a[k].is_zero() && !b[d - k].is_zero() {
                    sum = &sum + &(&a[k] * &b[d - k]);
                }
            }
            b.push(sum.scale(&minus_inv0));
        }
        let acc = b.iter().fold(Poly::zero(n), |acc, p| &acc + p);
        let inv = Self::new(&self.ctx, self.order, acc, false);
        // an exact polynomial inverse is only possible for constants
        Ok(if self.exact && self.poly.is_constant() { inv.certified_exact() } else { inv })
    }

    /// Formal partial derivative; the order drops by one unless the input is exact.
    pub fn derivative(&self, v: usize) -> Result<Self> {
        if v >= self.ctx.len() {
            return Err(Error::UnknownVariable(format!("#{v}")));
        }
        let order = if self.exact { self.order } else { self.order.saturating_sub(1) };
        Ok(Self::new(&self.ctx, order, self.poly.derivative(v), self.exact))
    }

    pub fn derivative_named(&self, name: &str) -> Result<Self> {
        self.derivative(self.ctx.index_of(name)?)
    }

    /// Sets variable `v` to zero (always sound for truncated data).
    pub fn restrict_zero(&self, v: usize) -> Self {
        Jet { poly: self.poly.eval_var(v, &S::zero()), ..self.clone() }
    }

    /// Sets all variables except those in `keep` to zero.
    pub fn restrict_to(&self, keep: &[usize]) -> Self {
        let mut out = self.clone();
        for v in 0..self.ctx.len() {
            if !keep.contains(&v) {
                out = out.restrict_zero(v);
            }
        }
        out
    }

    /// Evaluates variable `v` at a constant. Requires an exact jet, because a
    /// nonzero constant mixes all degrees of the unknown tail.
    pub fn eval_var(&self, v: usize, value: &S) -> Result<Self> {
        if value.is_zero() {
            return Ok(self.restrict_zero(v));
        }
        if !self.exact {
            return Err(Error::SubstitutionDivergence(format!(
                "evaluating `{}` at a nonzero constant needs an exact polynomial",
                self.ctx.name(v)
            )));
        }
        Ok(Jet { poly: self.poly.eval_var(v, value), ..self.clone() })
    }

    /// Substitutes jets for variables.
    ///
    /// Every variable of `self` either appears in `subst` or is carried over by
    /// name into `target`. Substituted jets must live in `target` and have zero
    /// constant term, unless `allow_constant` is set and `self` is exact.
    /// The result order is the minimum of the orders involved.
    pub fn compose(
        &self,
        subst: &[(&str, &Jet<S>)],
        target: &Arc<VarContext>,
        allow_constant: bool,
    ) -> Result<Self> {
        let n_src = self.ctx.len();
        let mut images: Vec<Option<Jet<S>>> = vec![None; n_src];
        for (name, value) in subst {
            let idx = self.ctx.index_of(name)?;
            if !same_context(value.ctx(), target) {
                return Err(Error::Context(format!(
                    "substitution for `{name}` is not in the target context"
                )));
            }
            if !value.constant_term().is_zero() && !(allow_constant && self.exact) {
                return Err(Error::SubstitutionDivergence(format!(
                    "`{name}` receives a value with nonzero constant term"
                )));
            }
            images[idx] = Some((*value).clone());
        }
        let mut order = self.order;
        let mut exact = self.exact;
        for (idx, img) in images.iter_mut().enumerate() {
            match img {
                Some(j) => {
                    if !j.exact {
                        order = order.min(j.order);
                        exact = false;
                    }
                }
                None => {
                    let name = self.ctx.name(idx);
                    let t = target.index_of(name).map_err(|_| {
                        Error::Context(format!("`{name}` is neither substituted nor in the target"))
                    })?;
                    *img = Some(Jet::var(target, self.order, t).certified_exact());
                }
            }
        }
        // images of exact variables must be exact at the working order
        let images: Vec<Jet<S>> = images
            .into_iter()
            .map(|j| j.unwrap().with_order(order))
            .collect();
        let mut power_cache: Vec<Vec<Jet<S>>> = images
            .iter()
            .map(|j| vec![Jet::one(target, order), j.clone()])
            .collect();
        let mut acc = Jet::zero(target, order);
        for (m, c) in self.poly.terms() {
            let mut term = Jet::constant(target, order, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut power_cache[v];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&images[v])?;
                    cache.push(next);
                }
                term = term.mul(&cache[e as usize])?;
            }
            acc = acc.add(&term)?;
        }
        Ok(Jet::new(target, order, acc.poly, exact && acc.exact))
    }

    /// Re-expresses this jet in another context that contains, by name, every
    /// variable it involves.
    pub fn rebase(&self, target: &Arc<VarContext>) -> Result<Self> {
        let map = self
            .ctx
            .names()
            .iter()
            .enumerate()
            .map(|(i, n)| match target.index_of(n) {
                Err(_) if !self.poly.involves(i) => Ok(usize::MAX),
                r => r,
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Jet {
            ctx: target.clone(),
            order: self.order,
            poly: self.poly.embed(target.len(), &map),
            exact: self.exact,
        })
    }

    /// Names of the variables that occur.
    pub fn support_names(&self) -> Vec<&str> {
        self.poly.support().into_iter().map(|v| self.ctx.name(v)).collect()
    }

    /// Agreement modulo total degree `order`.
    pub fn agrees_to(&self, other: &Self, order: u32) -> bool {
        same_context(&self.ctx, &other.ctx)
            && self.poly.truncate(order).0 == other.poly.truncate(order).0
    }

    pub fn coefficient(&self, exps: &[u32]) -> S {
        self.poly.coeff(&Monomial(exps.to_vec()))
    }
}

impl<S: Field> fmt::Display for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.display_with(self.ctx.names()))?;
        if !self.exact {
            write!(f, " + O({})", self.order)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rational};

    type J = Jet<Rational>;

    fn ctx() -> Arc<VarContext> {
        VarContext::coords(["x1", "x2"]).unwrap()
    }

    fn x(c: &Arc<VarContext>, i: usize, n: u32) -> J {
        J::var(c, n, i)
    }

    fn k(c: &Arc<VarContext>, v: i64, n: u32) -> J {
        J::constant(c, n, rat(v, 1))
    }

    #[test]
    fn difference_of_squares() {
        let c = ctx();
        let a = k(&c, 1, 4).add(&x(&c, 0, 4)).unwrap();
        let b = k(&c, 1, 4).sub(&x(&c, 0, 4)).unwrap();
        let p = a.mul(&b).unwrap();
        let expected = k(&c, 1, 4).sub(&x(&c, 0, 4).pow(2)).unwrap();
        assert_eq!(p, expected);
        assert!(p.is_exact());
    }

    #[test]
    fn additive_identity() {
        let c = ctx();
        let a = x(&c, 0, 4).mul(&x(&c, 1, 4)).unwrap();
        assert_eq!(a.add(&J::zero(&c, 4)).unwrap(), a);
    }

    #[test]
    fn square_truncates_to_zero() {
        let c = ctx();
        let s = x(&c, 0, 2).add(&x(&c, 1, 2)).unwrap();
        let sq = s.mul(&s).unwrap();
        assert!(sq.is_zero_to_order());
        assert!(!sq.is_exact());
        assert_eq!(sq.valuation(), Valuation::Infinite { exact: false });
    }

    #[test]
    fn geometric_series() {
        let c = ctx();
        let a = k(&c, 1, 4).add(&x(&c, 0, 4)).unwrap();
        let inv = a.invert_unit().unwrap();
        let x1 = x(&c, 0, 4);
        let expected = Jet::new(
            &c,
            4,
            &(&(&Poly::one(2) - x1.poly()) + &x1.poly().pow(2)) - &x1.poly().pow(3),
            false,
        );
        assert_eq!(inv, expected);
        assert!(!inv.is_exact());
    }

    #[test]
    fn inverse_of_constant_is_exact() {
        let c = ctx();
        let inv = k(&c, 2, 3).invert_unit().unwrap();
        assert_eq!(inv.constant_term(), rat(1, 2));
        assert!(inv.is_exact());
    }

    #[test]
    fn non_unit_rejected() {
        let c = ctx();
        let a = x(&c, 0, 4).add(&x(&c, 1, 4)).unwrap();
        assert_eq!(a.invert_unit(), Err(Error::NotAUnit));
    }

    #[test]
    fn compose_polynomial() {
        let src = VarContext::coords(["y"]).unwrap();
        let c = VarContext::coords(["x1"]).unwrap();
        let a = J::one(&src, 5).add(&J::var(&src, 5, 0)).unwrap();
        let img = J::var(&c, 5, 0).pow(2);
        let r = a.compose(&[("y", &img)], &c, false).unwrap();
        assert_eq!(r.to_string(), "x1^2 + 1");
    }

    #[test]
    fn compose_square_of_series() {
        let src = VarContext::coords(["y"]).unwrap();
        let c = VarContext::coords(["x1"]).unwrap();
        let a = J::var(&src, 4, 0).pow(2);
        let x1 = J::var(&c, 4, 0);
        let img = x1.add(&x1.pow(2)).unwrap();
        let r = a.compose(&[("y", &img)], &c, false).unwrap();
        // (x + x^2)^2 = x^2 + 2 x^3 + x^4, truncated at 4
        assert_eq!(r.poly(), &(&x1.poly().pow(2) + &x1.poly().pow(3).scale(&rat(2, 1))));
        assert!(!r.is_exact());
    }

    #[test]
    fn compose_binomial_family_vanishes() {
        let src = VarContext::coords(["y1", "y2"]).unwrap();
        let c = VarContext::coords(["x", "z"]).unwrap();
        let n = 16;
        let f = J::var(&src, n, 0).pow(2).sub(&J::var(&src, n, 1).pow(3)).unwrap();
        let xz = J::var(&c, n, 0).mul(&J::var(&c, n, 1)).unwrap();
        let r = f
            .compose(&[("y1", &xz.pow(3)), ("y2", &xz.pow(2))], &c, false)
            .unwrap();
        assert!(r.is_exact_zero());
    }

    #[test]
    fn compose_rejects_constant_term() {
        let src = VarContext::coords(["y"]).unwrap();
        let c = VarContext::coords(["x1"]).unwrap();
        let a = J::var(&src, 4, 0).pow(2);
        let img = J::one(&c, 4).add(&J::var(&c, 4, 0)).unwrap();
        assert!(matches!(
            a.compose(&[("y", &img)], &c, false),
            Err(Error::SubstitutionDivergence(_))
        ));
        // an exact polynomial may take constant values when allowed
        let r = a.compose(&[("y", &img)], &c, true).unwrap();
        assert_eq!(r.constant_term(), rat(1, 1));
    }

    #[test]
    fn valuations() {
        let c = ctx();
        let a = x(&c, 0, 8).pow(2).mul(&x(&c, 1, 8)).unwrap().add(&x(&c, 1, 8).pow(4)).unwrap();
        assert_eq!(a.valuation(), Valuation::Finite(3));
        assert_eq!(J::zero(&c, 8).valuation(), Valuation::Infinite { exact: true });
        assert_eq!(k(&c, 7, 8).add(&x(&c, 0, 8)).unwrap().valuation(), Valuation::Finite(0));
    }

    #[test]
    fn derivatives() {
        let c = ctx();
        let a = x(&c, 0, 8).pow(2).mul(&x(&c, 1, 8)).unwrap();
        let d = a.derivative(0).unwrap();
        assert_eq!(d, x(&c, 0, 8).mul(&x(&c, 1, 8)).unwrap().scale(&rat(2, 1)));
        assert!(k(&c, 3, 8).derivative(0).unwrap().is_exact_zero());
        assert!(x(&c, 1, 8).pow(3).derivative(0).unwrap().is_exact_zero());
        let inexact = a.inexact();
        assert_eq!(inexact.derivative(0).unwrap().order(), 7);
    }
}
