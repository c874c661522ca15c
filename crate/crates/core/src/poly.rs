//! Exact multivariate polynomials over a [`Field`], with no truncation.
//!
//! Terms are keyed by exponent vectors in graded-lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};



use crate::field::Field;

/// An exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically with the first variable most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, v: usize, e: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[v] = e;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<S> {
    nvars: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Field> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        Self::monomial(nvars, Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Self::monomial(nvars, Monomial::var(nvars, v, 1), S::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: S) -> Self {
        assert_eq!(m.0.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, S)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let sum = old.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Minimal total degree of a term, `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[v]).max()
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    /// Indices of the variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.involves(v)).collect()
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    /// Product keeping only terms of total degree `< order`. Also reports
    /// whether any nonzero term was dropped.
    pub fn mul_truncated(&self, other: &Self, order: Option<u32>) -> (Self, bool) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut acc: BTreeMap<Monomial, S> = BTreeMap::new();
        let mut dropped = false;
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(n) = order {
                    if ma.degree() + mb.degree() >= n {
                        dropped = true;
                        // terms are sorted by degree
                        break;
                    }
                }
                let m = ma.mul(mb);
                let c = ca.clone() * cb.clone();
                match acc.get_mut(&m) {
                    Some(old) => *old = std::mem::replace(old, S::zero()) + c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        (Poly { nvars: self.nvars, terms: acc }, dropped)
    }

    pub fn truncate(&self, order: u32) -> (Self, bool) {
        let kept: BTreeMap<_, _> = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() < order)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        let dropped = kept.len() != self.terms.len();
        (Poly { nvars: self.nvars, terms: kept }, dropped)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e > 0 {
                let mut k = m.clone();
                k.0[v] -= 1;
                out.add_term(k, c.clone() * S::from_int(e as i64));
            }
        }
        out
    }

    /// Coefficients as a polynomial in `v`: `result[k]` multiplies `v^k`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Self> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let mut k = m.clone();
            let e = std::mem::replace(&mut k.0[v], 0) as usize;
            out[e].add_term(k, c.clone());
        }
        out
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(nvars: usize, v: usize, coeffs: &[Self]) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in coeffs.iter().enumerate() {
            let vm = Monomial::var(nvars, v, e as u32);
            for (m, a) in &c.terms {
                out.add_term(m.mul(&vm), a.clone());
            }
        }
        out
    }

    /// Leading term for the pure lexicographic order (first variable most significant).
    pub fn lex_leading(&self) -> Option<(&Monomial, &S)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    /// Scales so the lexicographic leading coefficient is 1.
    pub fn lex_monic(&self) -> Self {
        match self.lex_leading() {
            Some((_, c)) => {
                let inv = c.try_inv().expect("leading coefficient is invertible");
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let (lm, lc) = d.lex_leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc.try_inv()?;
        let mut rem = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((m, c)) = rem.lex_leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c * lc_inv.clone();
            rem = &rem - &d.mul_monomial(&qm).scale(&qc);
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Sets variable `v` to the constant `value`.
    pub fn eval_var(&self, v: usize, value: &S) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut k = m.clone();
            let e = std::mem::replace(&mut k.0[v], 0);
            let mut coef = c.clone();
            for _ in 0..e {
                coef = coef * value.clone();
            }
            out.add_term(k, coef);
        }
        out
    }

    /// Replaces variable `i` by `images[i]` (all images in one common ring).
    pub fn substitute(&self, images: &[Self]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let n = images.first().map_or(0, Poly::nvars);
        let mut out = Self::zero(n);
        for (m, c) in &self.terms {
            let mut t = Self::constant(n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(e);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Re-indexes variables: variable `i` of `self` becomes `map[i]` in a ring of `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut k = Monomial::one(nvars);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    k.0[map[i]] += e;
                }
            }
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn map_coeffs<T: Field, F: Fn(&S) -> T>(&self, f: F) -> Poly<T> {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Human-readable rendering with the given variable names; highest degree first.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a, S> {
        PolyDisplay { poly: self, names }
    }
}

pub struct PolyDisplay<'a, S> {
    poly: &'a Poly<S>,
    names: &'a [String],
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, names: &[String]) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", names[i])?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl<S: Field> fmt::Display for PolyDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.poly.terms.iter().rev() {
            let text = c.to_string();
            let compound = text.contains(' ');
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, text),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mag = if compound { format!("({mag})") } else { mag };
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if mag != "1" {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, m, self.names)?;
            }
        }
        Ok(())
    }
}

impl<S: Field> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<S: Field> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<S: Field> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<S: Field> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        self.mul_truncated(rhs, None).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rational};

    type P = Poly<Rational>;

    fn x(i: usize) -> P {
        P::var(2, i)
    }

    fn c(n: i64) -> P {
        P::constant(2, rat(n, 1))
    }

    #[test]
    fn grlex_order() {
        let a = Monomial(vec![2, 0]);
        let b = Monomial(vec![0, 3]);
        let d = Monomial(vec![1, 1]);
        assert!(a < b);
        assert!(d < a);
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&c(1) + &x(0)) * &(&c(1) - &x(0));
        assert_eq!(p, &c(1) - &x(0).pow(2));
    }

    #[test]
    fn exact_division() {
        let a = &x(0) - &x(1);
        let b = &x(0) + &x(1);
        let prod = &a.pow(2) * &b;
        assert_eq!(prod.div_exact(&a), Some(&a * &b));
        assert_eq!(prod.div_exact(&(&x(0) - &c(1))), None);
        assert_eq!(c(6).div_exact(&c(3)), Some(c(2)));
    }

    #[test]
    fn coefficient_view_round_trip() {
        let p = &(&x(1).pow(3) * &x(0)) - &(&x(0).pow(2) + &c(5));
        let cs = p.coeffs_in(1);
        assert_eq!(cs.len(), 4);
        assert_eq!(P::from_coeffs_in(2, 1, &cs), p);
    }

    #[test]
    fn display() {
        let names = vec!["x1".to_string(), "x2".to_string()];
        let p = &x(1).pow(2) - &x(0).pow(3);
        assert_eq!(p.display_with(&names).to_string(), "-x1^3 + x2^2");
        let q = p.scale(&rat(1, 4));
        assert_eq!(q.display_with(&names).to_string(), "-1/4*x1^3 + 1/4*x2^2");
    }
}
