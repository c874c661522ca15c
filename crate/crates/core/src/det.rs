//! Division-free determinants over commutative rings with zero divisors.
//!
//! Uses Bird's iteration: with `mu(X)` the upper triangular matrix keeping the
//! strict upper part of `X` and putting `-(X[i+1][i+1] + ... + X[n-1][n-1])` on
//! the diagonal, `det A = (-1)^(n-1) * [(mu(.) A)^(n-1) (A)]_00`. No division
//! or pivoting, `O(n^4)` ring operations.

use crate::field::{Field, Rational};
use crate::jet::Jet;
use crate::poly::Poly;

/// The ring operations needed for determinants and resultants.
pub trait CommRing: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl CommRing for Rational {
    fn zero_like(&self) -> Self {
        <Rational as num_traits::Zero>::zero()
    }
    fn one_like(&self) -> Self {
        <Rational as num_traits::One>::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl<S: Field> CommRing for Poly<S> {
    fn zero_like(&self) -> Self {
        Poly::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        Poly::one(self.nvars())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
}

// Matrix entries always share one context; a mismatch is a programming error.
impl<S: Field> CommRing for Jet<S> {
    fn zero_like(&self) -> Self {
        Jet::zero(self.ctx(), self.order())
    }
    fn one_like(&self) -> Self {
        Jet::one(self.ctx(), self.order())
    }
    fn add(&self, o: &Self) -> Self {
        Jet::add(self, o).expect("matrix entries share a context")
    }
    fn sub(&self, o: &Self) -> Self {
        Jet::sub(self, o).expect("matrix entries share a context")
    }
    fn mul(&self, o: &Self) -> Self {
        Jet::mul(self, o).expect("matrix entries share a context")
    }
    fn neg(&self) -> Self {
        Jet::neg(self)
    }
}

fn mat_mul<R: CommRing>(a: &[Vec<R>], b: &[Vec<R>], zero: &R) -> Vec<Vec<R>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = zero.clone();
                    for k in i..n {
                        // a is upper triangular here
                        acc = acc.add(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Determinant of a square matrix. `one` supplies the ring's identity
/// (returned for the empty matrix).
pub fn determinant<R: CommRing>(m: &[Vec<R>], one: &R) -> R {
    let n = m.len();
    if n == 0 {
        return one.one_like();
    }
    for row in m {
        assert_eq!(row.len(), n, "matrix is not square");
    }
    let zero = one.zero_like();
    let mut x: Vec<Vec<R>> = m.to_vec();
    for _ in 1..n {
        let mut mu = vec![vec![zero.clone(); n]; n];
        let mut tail = zero.clone();
        for i in (0..n).rev() {
            mu[i][i] = tail.neg();
            tail = tail.add(&x[i][i]);
            for j in (i + 1)..n {
                mu[i][j] = x[i][j].clone();
            }
        }
        x = mat_mul(&mu, m, &zero);
    }
    let d = x[0][0].clone();
    if n.is_multiple_of(2) {
        d.neg()
    } else {
        d
    }
}

/// Sylvester resultant of `p` and `q`, given as coefficient lists from the
/// leading coefficient down to the constant term.
pub fn sylvester_resultant<R: CommRing>(p: &[R], q: &[R], one: &R) -> R {
    assert!(!p.is_empty() && !q.is_empty());
    let dp = p.len() - 1;
    let dq = q.len() - 1;
    let n = dp + dq;
    if n == 0 {
        return one.one_like();
    }
    let zero = one.zero_like();
    let mut m = vec![vec![zero.clone(); n]; n];
    for r in 0..dq {
        for (k, c) in p.iter().enumerate() {
            m[r][r + k] = c.clone();
        }
    }
    for r in 0..dp {
        for (k, c) in q.iter().enumerate() {
            m[dq + r][r + k] = c.clone();
        }
    }
    determinant(&m, one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    // Independent oracle: cofactor expansion along the first row.
    fn laplace(m: &[Vec<Rational>]) -> Rational {
        let n = m.len();
        if n == 0 {
            return Rational::one();
        }
        let mut acc = Rational::zero();
        for j in 0..n {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &m[0][j] * laplace(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn r(v: i64) -> Rational {
        rat(v, 1)
    }

    #[test]
    fn small_matrices() {
        let one = Rational::one();
        assert_eq!(determinant(&[vec![r(1), r(2)], vec![r(3), r(4)]], &one), r(-2));
        assert_eq!(determinant(&[vec![r(2), r(5)], vec![r(5), r(13)]], &one), r(1));
        assert_eq!(determinant::<Rational>(&[], &one), r(1));
        assert_eq!(determinant(&[vec![r(7)]], &one), r(7));
    }

    #[test]
    fn resultant_of_linear_factors() {
        let one = Rational::one();
        // Res(y - 2, y - 5) = 2 - 5
        assert_eq!(sylvester_resultant(&[r(1), r(-2)], &[r(1), r(-5)], &one), r(-3));
        assert_eq!(sylvester_resultant(&[r(1), r(-2)], &[r(1)], &one), r(1));
    }

    proptest! {
        #[test]
        fn bird_matches_cofactor_expansion(
            n in 1usize..6,
            entries in proptest::collection::vec(-9i64..10, 36),
        ) {
            let m: Vec<Vec<Rational>> = (0..n)
                .map(|i| (0..n).map(|j| r(entries[i * 6 + j])).collect())
                .collect();
            prop_assert_eq!(determinant(&m, &Rational::one()), laplace(&m));
        }
    }
}
