//! Rationals and elements of a single simple algebraic extension `Q(a)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::field::{Field, Rational};

/// `Q[a] / (m(a))` for a monic minimal polynomial `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    /// Coefficients of the monic modulus, constant term first.
    minpoly: Vec<Rational>,
}

impl NumberField {
    /// Builds the extension from a (not necessarily monic) polynomial of degree >= 2.
    pub fn new(mut minpoly: Vec<Rational>) -> Option<Arc<Self>> {
        while minpoly.last().is_some_and(Zero::is_zero) {
            minpoly.pop();
        }
        if minpoly.len() < 3 {
            return None;
        }
        let lead = minpoly.last().unwrap().clone();
        for c in minpoly.iter_mut() {
            *c = &*c / &lead;
        }
        Some(Arc::new(NumberField { minpoly }))
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[Rational] {
        &self.minpoly
    }

    /// The generator `a`.
    pub fn generator(self: &Arc<Self>) -> Scalar {
        Scalar::from_parts(Some(self.clone()), vec![Rational::zero(), Rational::one()])
    }

    fn reduce(&self, mut c: Vec<Rational>) -> Vec<Rational> {
        let d = self.degree();
        while c.len() > d {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = c.len() - d;
            for (i, m) in self.minpoly[..d].iter().enumerate() {
                c[shift + i] = &c[shift + i] - &top * m;
            }
        }
        c
    }
}

/// An exact scalar: a rational, or a reduced polynomial in the generator of
/// a [`NumberField`].
#[derive(Debug, Clone)]
pub struct Scalar {
    field: Option<Arc<NumberField>>,
    coeffs: Vec<Rational>,
}

fn trim(mut c: Vec<Rational>) -> Vec<Rational> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

impl Scalar {
    fn from_parts(field: Option<Arc<NumberField>>, coeffs: Vec<Rational>) -> Self {
        let coeffs = match &field {
            Some(k) => trim(k.reduce(coeffs)),
            None => trim(coeffs),
        };
        // A value with no generator component is just a rational.
        let field = if coeffs.len() <= 1 { None } else { field };
        Scalar { field, coeffs }
    }

    pub fn rational(q: Rational) -> Self {
        Scalar::from_parts(None, vec![q])
    }

    /// Builds `sum coeffs[i] * a^i` in `field`.
    pub fn in_field(field: &Arc<NumberField>, coeffs: Vec<Rational>) -> Self {
        Scalar::from_parts(Some(field.clone()), coeffs)
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    /// Coefficients in the power basis, constant term first.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn join(a: &Scalar, b: &Scalar) -> Option<Arc<NumberField>> {
        match (&a.field, &b.field) {
            (None, None) => None,
            (Some(k), None) | (None, Some(k)) => Some(k.clone()),
            (Some(k), Some(l)) => {
                assert!(
                    Arc::ptr_eq(k, l) || k == l,
                    "arithmetic across different number fields"
                );
                Some(k.clone())
            }
        }
    }

    fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.coeffs != other.coeffs {
            return false;
        }
        match (&self.field, &other.field) {
            (Some(k), Some(l)) => Arc::ptr_eq(k, l) || k == l,
            _ => true,
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar { field: None, coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::rational(Rational::one())
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        let field = Scalar::join(&self, &rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Scalar::from_parts(field, c)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            field: self.field,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self + (-rhs)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        let field = Scalar::join(&self, &rhs);
        let mut c = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Scalar::from_parts(field, c)
    }
}

impl Div for Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Scalar) -> Scalar {
        let inv = rhs.try_inv().expect("division by zero (or a zero divisor)");
        self * inv
    }
}

/// Univariate polynomial helpers over Q, constant term first.
fn upoly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let coef = &r[k + db] / &lb;
        if !coef.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                r[k + i] = &r[k + i] - &coef * bi;
            }
        }
        q[k] = coef;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn upoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

fn upoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
    )
}

impl Field for Scalar {
    fn from_rational(q: Rational) -> Self {
        Scalar::rational(q)
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let Some(k) = &self.field else {
            return Some(Scalar::rational(self.coeffs[0].recip()));
        };
        // Extended Euclid: s * self + t * m = gcd.
        let (mut r0, mut r1) = (k.minpoly.clone(), self.coeffs.clone());
        let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = upoly_divrem(&r0, &r1);
            let s = upoly_sub(&s0, &upoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.len() != 1 {
            // nontrivial common factor with the modulus: not a field element
            return None;
        }
        let g = r0[0].clone();
        let inv = s0.into_iter().map(|c| c / &g).collect();
        Some(Scalar::from_parts(Some(k.clone()), inv))
    }

    fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() <= 1 {
            return write!(f, "{}", self.coeff(0));
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = *c < Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "a")?;
                    } else {
                        write!(f, "a^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::rational(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn gaussian() -> Arc<NumberField> {
        NumberField::new(vec![rat(1, 1), rat(0, 1), rat(1, 1)]).unwrap()
    }

    #[test]
    fn generator_squares_to_minus_one() {
        let i = gaussian().generator();
        assert_eq!(i.clone() * i, Scalar::from_int(-1));
    }

    #[test]
    fn inverse_in_extension() {
        let k = gaussian();
        let z = Scalar::in_field(&k, vec![rat(1, 1), rat(2, 1)]); // 1 + 2i
        let inv = z.try_inv().unwrap();
        assert_eq!(z * inv, Scalar::one());
    }

    #[test]
    fn reducible_modulus_yields_zero_divisor() {
        // (a - 1)(a + 1): the element a - 1 has no inverse
        let k = NumberField::new(vec![rat(-1, 1), rat(0, 1), rat(1, 1)]).unwrap();
        let z = Scalar::in_field(&k, vec![rat(-1, 1), rat(1, 1)]);
        assert!(z.try_inv().is_none());
    }

    #[test]
    fn rational_values_collapse() {
        let k = gaussian();
        let z = Scalar::in_field(&k, vec![rat(3, 2)]);
        assert_eq!(z.as_rational(), Some(rat(3, 2)));
        assert_eq!(z.to_string(), "3/2");
        let w = Scalar::in_field(&k, vec![rat(1, 2), rat(-1, 1)]);
        assert_eq!(w.to_string(), "-a + 1/2");
    }
}
