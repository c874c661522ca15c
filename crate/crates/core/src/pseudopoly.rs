//! Monic polynomials in a distinguished variable with jet coefficients,
//! their power sums, Hankel minors, generalized discriminants and resultants.
//!
//! Convention: for `P = y^p + a_1 y^(p-1) + ... + a_p` with roots `r_1..r_p`,
//! the `k`-th Hankel minor `d_k = det(s_(i+j))_(0<=i,j<k)` of the power sums
//! equals `sum over k-subsets J of prod_(i<j in J) (r_i - r_j)^2`, and the
//! generalized discriminants are `Delta_l = d_(p-l+1)`, so `Delta_1` is the
//! classical discriminant and the first nonzero index is `p - #distinct roots + 1`.

use std::sync::Arc;



use crate::det::{determinant, sylvester_resultant};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::jet::Jet;
use crate::poly::Poly;
use crate::vars::{same_context, VarContext};

/// Largest supported degree.
pub const DEGREE_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoPoly<S> {
    ctx: Arc<VarContext>,
    order: u32,
    var: usize,
    /// `a_1, ..., a_p`
    coeffs: Vec<Jet<S>>,
}

impl<S: Field> PseudoPoly<S> {
    /// `y^p + sum_j coeffs[j-1] y^(p-j)` in the variable with context index `var`.
    pub fn new(ctx: &Arc<VarContext>, order: u32, var: usize, coeffs: Vec<Jet<S>>) -> Result<Self> {
        if var >= ctx.len() {
            return Err(Error::UnknownVariable(format!("#{var}")));
        }
        for a in &coeffs {
            if !same_context(a.ctx(), ctx) {
                return Err(Error::Context("coefficient in a different context".into()));
            }
            if a.involves(var) {
                return Err(Error::Precondition(format!(
                    "coefficient involves the distinguished variable `{}`",
                    ctx.name(var)
                )));
            }
        }
        Ok(PseudoPoly { ctx: ctx.clone(), order, var, coeffs })
    }

    /// Reads a jet as a polynomial in `var` whose leading coefficient is a
    /// nonzero constant; the result is normalized to be monic.
    pub fn from_jet(f: &Jet<S>, var: usize) -> Result<Self> {
        if !f.is_exact() {
            return Err(Error::Precondition("a pseudopolynomial must be given exactly".into()));
        }
        let cs = f.poly().coeffs_in(var);
        let lead = cs.last().cloned().unwrap_or_else(|| Poly::zero(f.ctx().len()));
        if lead.is_zero() || !lead.is_constant() {
            return Err(Error::Precondition(format!(
                "leading coefficient in `{}` is not a nonzero constant",
                f.ctx().name(var)
            )));
        }
        let inv = lead.constant_term().try_inv().ok_or(Error::NotAUnit)?;
        let coeffs = cs
            .iter()
            .rev()
            .skip(1)
            .map(|c| Jet::from_poly(f.ctx(), c.scale(&inv), f.order()))
            .collect();
        Self::new(f.ctx(), f.order(), var, coeffs)
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_1, ..., a_p`
    pub fn coeffs(&self) -> &[Jet<S>] {
        &self.coeffs
    }

    /// All coefficients vanish at the origin.
    pub fn is_distinguished(&self) -> bool {
        self.coeffs.iter().all(|a| a.constant_term().is_zero())
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Jet::is_exact)
    }

    pub fn to_jet(&self) -> Jet<S> {
        let p = self.degree() as u32;
        let y = Jet::var(&self.ctx, self.order, self.var);
        let mut acc = y.pow(p);
        for (j, a) in self.coeffs.iter().enumerate() {
            let term = a.mul(&y.pow(p - 1 - j as u32)).expect("same context");
            acc = acc.add(&term).expect("same context");
        }
        acc
    }

    fn check_cap(&self) -> Result<()> {
        if self.degree() > DEGREE_CAP {
            Err(Error::DegreeCap { degree: self.degree(), cap: DEGREE_CAP })
        } else {
            Ok(())
        }
    }

    /// Newton power sums `s_0, ..., s_(count-1)` of the roots.
    pub fn power_sums(&self, count: usize) -> Vec<Jet<S>> {
        let p = self.degree();
        let mut s: Vec<Jet<S>> = Vec::with_capacity(count);
        for k in 0..count {
            if k == 0 {
                s.push(Jet::constant(&self.ctx, self.order, S::from_int(p as i64)));
                continue;
            }
            // s_k + a_1 s_(k-1) + ... + a_(k-1) s_1 + k a_k = 0   (k <= p)
            // s_k + a_1 s_(k-1) + ... + a_p s_(k-p) = 0           (k > p)
            let mut acc = Jet::zero(&self.ctx, self.order);
            for i in 1..=k.min(p) {
                let term = if i == k {
                    self.coeffs[i - 1].scale(&S::from_int(k as i64))
                } else {
                    self.coeffs[i - 1].mul(&s[k - i]).expect("same context")
                };
                acc = acc.add(&term).expect("same context");
            }
            s.push(acc.neg());
        }
        s
    }

    /// `det (s_(i+j))_(0 <= i, j < k)`, computed without division.
    pub fn hankel_minor(&self, k: usize) -> Result<Jet<S>> {
        self.check_cap()?;
        let p = self.degree();
        if k < 1 || k > p {
            return Err(Error::IndexOutOfRange { index: k, max: p });
        }
        Ok(self.hankel_det(k, &self.sums_for(k)))
    }

    fn sums_for(&self, k: usize) -> Sums<S> {
        if self.is_exact() {
            Sums::Exact(self.exact_power_sums(2 * k - 1))
        } else {
            Sums::Truncated(self.power_sums(2 * k - 1))
        }
    }

    // Exact coefficients: the sums are computed as untruncated polynomials so
    // that cancellation above the truncation order still certifies zeros.
    fn exact_power_sums(&self, count: usize) -> Vec<Poly<S>> {
        let p = self.degree();
        let n = self.ctx.len();
        let a: Vec<&Poly<S>> = self.coeffs.iter().map(Jet::poly).collect();
        let mut s: Vec<Poly<S>> = Vec::with_capacity(count);
        for k in 0..count {
            if k == 0 {
                s.push(Poly::constant(n, S::from_int(p as i64)));
                continue;
            }
            let mut acc = Poly::zero(n);
            for i in 1..=k.min(p) {
                let term = if i == k { a[i - 1].scale(&S::from_int(k as i64)) } else { a[i - 1] * &s[k - i] };
                acc = &acc + &term;
            }
            s.push(-&acc);
        }
        s
    }

    fn hankel_det(&self, k: usize, sums: &Sums<S>) -> Jet<S> {
        match sums {
            Sums::Truncated(s) => {
                let m: Vec<Vec<Jet<S>>> = (0..k).map(|i| (0..k).map(|j| s[i + j].clone()).collect()).collect();
                determinant(&m, &Jet::one(&self.ctx, self.order))
            }
            Sums::Exact(s) => {
                let m: Vec<Vec<Poly<S>>> = (0..k).map(|i| (0..k).map(|j| s[i + j].clone()).collect()).collect();
                let d = determinant(&m, &Poly::one(self.ctx.len()));
                Jet::new(&self.ctx, self.order, d, true)
            }
        }
    }

    pub fn generalized_discriminants(&self) -> Result<GenDiscSequence<S>> {
        self.check_cap()?;
        let p = self.degree();
        let one = Jet::one(&self.ctx, self.order);
        if p == 0 {
            return Ok(GenDiscSequence {
                degree: 0,
                entries: vec![one],
                status: vec![EntryStatus::Nonzero],
                first_nonzero: 1,
                order: self.order,
            });
        }
        let s = self.sums_for(p);
        let entries: Vec<Jet<S>> = (1..=p).map(|l| self.hankel_det(p - l + 1, &s)).collect();
        let status: Vec<EntryStatus> = entries
            .iter()
            .map(|d| {
                if !d.is_zero_to_order() {
                    EntryStatus::Nonzero
                } else if d.is_exact() {
                    EntryStatus::ExactZero
                } else {
                    EntryStatus::ZeroToOrder
                }
            })
            .collect();
        let first = status
            .iter()
            .position(|s| *s == EntryStatus::Nonzero)
            .map(|i| i + 1);
        let seq = GenDiscSequence {
            degree: p,
            order: entries.iter().map(Jet::order).min().unwrap_or(self.order),
            entries,
            status,
            first_nonzero: first.unwrap_or(0),
        };
        match first {
            None => Err(Error::Inconclusive {
                order: seq.order,
                what: "every generalized discriminant vanishes to the certification order".into(),
            }),
            Some(l) if seq.status[..l - 1].contains(&EntryStatus::ZeroToOrder) => Err(Error::Inconclusive {
                order: seq.order,
                what: format!(
                    "generalized discriminants below index {l} vanish only to the certification order"
                ),
            }),
            Some(_) => Ok(seq),
        }
    }

    /// Sylvester resultant in the distinguished variable.
    pub fn resultant(&self, other: &Self) -> Result<Jet<S>> {
        if self.var != other.var || !same_context(&self.ctx, &other.ctx) {
            return Err(Error::Context("resultant of pseudopolynomials in different variables".into()));
        }
        let one = Jet::one(&self.ctx, self.order.min(other.order));
        let mut p = vec![one.clone()];
        p.extend(self.coeffs.iter().cloned());
        let mut q = vec![one.clone()];
        q.extend(other.coeffs.iter().cloned());
        Ok(sylvester_resultant(&p, &q, &one))
    }
}

enum Sums<S> {
    Truncated(Vec<Jet<S>>),
    Exact(Vec<Poly<S>>),
}

/// How an entry of a [`GenDiscSequence`] was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryStatus {
    Nonzero,
    /// Identically zero, certified by exact arithmetic.
    ExactZero,
    /// Zero only modulo the certification order.
    ZeroToOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenDiscSequence<S> {
    pub degree: usize,
    /// `Delta_1, ..., Delta_p`
    pub entries: Vec<Jet<S>>,
    pub status: Vec<EntryStatus>,
    /// Least `l` with `Delta_l` nonzero (1-based).
    pub first_nonzero: usize,
    pub order: u32,
}

impl<S: Field> GenDiscSequence<S> {
    /// `Delta_l` for 1-based `l`.
    pub fn get(&self, l: usize) -> &Jet<S> {
        &self.entries[l - 1]
    }

    pub fn first(&self) -> &Jet<S> {
        self.get(self.first_nonzero)
    }
}

/// Convenience: the monic polynomial with the given constant roots, in a
/// one-variable context named `y`.
pub fn from_roots<S: Field>(roots: &[S], order: u32) -> PseudoPoly<S> {
    let ctx = VarContext::coords(["y"]).expect("valid context");
    let y = Poly::<S>::var(1, 0);
    let mut prod = Poly::one(1);
    for r in roots {
        prod = &prod * &(&y - &Poly::constant(1, r.clone()));
    }
    let f = Jet::from_poly(&ctx, prod, order.max(roots.len() as u32 + 1));
    PseudoPoly::from_jet(&f, 0).expect("monic by construction")
}

impl<S: Field> PseudoPoly<S> {
    /// The monic polynomial `y^p` (all roots zero).
    pub fn monomial(ctx: &Arc<VarContext>, order: u32, var: usize, p: usize) -> Self {
        let zero = Jet::zero(ctx, order);
        PseudoPoly { ctx: ctx.clone(), order, var, coeffs: vec![zero; p] }
    }

    /// Whether the coefficients are constant one (degree zero).
    pub fn is_trivial(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<S: Field> std::fmt::Display for PseudoPoly<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_jet())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rational};

    type J = Jet<Rational>;

    fn q(v: i64) -> Rational {
        rat(v, 1)
    }

    #[test]
    fn power_sums_of_two_and_three() {
        let p = from_roots(&[q(2), q(3)], 8);
        let s = p.power_sums(3);
        assert_eq!(s[0].constant_term(), q(2));
        assert_eq!(s[1].constant_term(), q(5));
        assert_eq!(s[2].constant_term(), q(13));
    }

    #[test]
    fn power_sums_of_zero_roots() {
        let ctx = VarContext::coords(["y"]).unwrap();
        let p = PseudoPoly::<Rational>::monomial(&ctx, 8, 0, 4);
        let s = p.power_sums(6);
        assert_eq!(s[0].constant_term(), q(4));
        assert!(s[1..].iter().all(J::is_exact_zero));
    }

    fn cusp_level() -> PseudoPoly<Rational> {
        let ctx = VarContext::coords(["x1", "x2"]).unwrap();
        let x1 = J::var(&ctx, 16, 0);
        let f = J::var(&ctx, 16, 1).pow(2).sub(&x1.pow(3)).unwrap();
        PseudoPoly::from_jet(&f, 1).unwrap()
    }

    #[test]
    fn power_sums_of_cusp() {
        let p = cusp_level();
        let s = p.power_sums(3);
        let x1 = J::var(p.ctx(), 16, 0);
        assert_eq!(s[0].constant_term(), q(2));
        assert!(s[1].is_exact_zero());
        assert_eq!(s[2], x1.pow(3).scale(&q(2)));
    }

    #[test]
    fn hankel_minors() {
        let p = from_roots(&[q(2), q(3)], 8);
        assert_eq!(p.hankel_minor(2).unwrap().constant_term(), q(1));
        assert_eq!(p.hankel_minor(1).unwrap().constant_term(), q(2));
        let r = from_roots(&[q(1), q(1), q(2)], 8);
        assert!(r.hankel_minor(3).unwrap().is_exact_zero());
        assert_eq!(r.hankel_minor(4), Err(Error::IndexOutOfRange { index: 4, max: 3 }));
    }

    #[test]
    fn cusp_discriminant() {
        let p = cusp_level();
        let g = p.generalized_discriminants().unwrap();
        let x1 = J::var(p.ctx(), 16, 0);
        assert_eq!(g.first_nonzero, 1);
        assert_eq!(g.get(1), &x1.pow(3).scale(&q(4)));
    }

    #[test]
    fn repeated_root_pattern() {
        let g = from_roots(&[q(1), q(1), q(2)], 8).generalized_discriminants().unwrap();
        assert!(g.get(1).is_exact_zero());
        assert_eq!(g.get(2).constant_term(), q(2));
        assert_eq!(g.first_nonzero, 2);
    }

    #[test]
    fn single_distinct_root() {
        let ctx = VarContext::coords(["x1"]).unwrap();
        let p = PseudoPoly::<Rational>::monomial(&ctx, 16, 0, 3);
        let g = p.generalized_discriminants().unwrap();
        assert_eq!(g.status[..2], [EntryStatus::ExactZero, EntryStatus::ExactZero]);
        assert_eq!(g.get(3).constant_term(), q(3));
        assert_eq!(g.first_nonzero, 3);
    }

    #[test]
    fn uncertified_vanishing_is_inconclusive() {
        let ctx = VarContext::coords(["x1"]).unwrap();
        let zero = J::zero(&ctx, 16).inexact();
        let p = PseudoPoly::new(&ctx, 16, 0, vec![zero.clone(), zero]).unwrap();
        assert!(matches!(p.generalized_discriminants(), Err(Error::Inconclusive { order: 16, .. })));
    }

    #[test]
    fn resultants() {
        let ctx = VarContext::coords(["x1", "y"]).unwrap();
        let n = 8;
        let x1 = J::var(&ctx, n, 0);
        let y = J::var(&ctx, n, 1);
        // Res(y^2 - x1, y + 1) = 1 - x1
        let p = PseudoPoly::from_jet(&y.pow(2).sub(&x1).unwrap(), 1).unwrap();
        let r = PseudoPoly::from_jet(&y.add(&J::one(&ctx, n)).unwrap(), 1).unwrap();
        assert_eq!(p.resultant(&r).unwrap(), J::one(&ctx, n).sub(&x1).unwrap());
        let one = PseudoPoly::new(&ctx, n, 1, vec![]).unwrap();
        assert_eq!(p.resultant(&one).unwrap(), J::one(&ctx, n));
        // Res(y - x1, y - 2 x1) = x1 - 2 x1
        let a = PseudoPoly::new(&ctx, n, 1, vec![x1.neg()]).unwrap();
        let b = PseudoPoly::new(&ctx, n, 1, vec![x1.scale(&q(-2))]).unwrap();
        assert_eq!(a.resultant(&b).unwrap(), x1.neg());
    }

    #[test]
    fn degree_cap() {
        let roots: Vec<Rational> = (0..13).map(q).collect();
        let p = from_roots(&roots, 16);
        assert_eq!(p.hankel_minor(1), Err(Error::DegreeCap { degree: 13, cap: 12 }));
    }

    #[test]
    fn coefficient_may_not_involve_variable() {
        let ctx = VarContext::coords(["x1", "y"]).unwrap();
        let y = J::var(&ctx, 8, 1);
        assert!(PseudoPoly::new(&ctx, 8, 1, vec![y]).is_err());
    }
}
