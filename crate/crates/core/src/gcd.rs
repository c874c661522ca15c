//! Multivariate gcd by recursive primitive pseudo-remainder sequences,
//! squarefree decomposition, and rational roots of univariate polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{Field, Rational};
use crate::poly::Poly;

fn main_var<S: Field>(a: &Poly<S>, b: &Poly<S>) -> Option<usize> {
    (0..a.nvars()).rev().find(|&v| a.involves(v) || b.involves(v))
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in<S: Field>(p: &Poly<S>, v: usize) -> Poly<S> {
    let mut g = Poly::zero(p.nvars());
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            break;
        }
    }
    g
}

pub fn primitive_part_in<S: Field>(p: &Poly<S>, v: usize) -> Poly<S> {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

/// A pseudo-remainder of `a` by `b` in `v`: `lc(b)^k a - q b` with `deg_v < deg_v b`.
pub fn pseudo_rem<S: Field>(a: &Poly<S>, b: &Poly<S>, v: usize) -> Poly<S> {
    let db = b.degree_in(v).unwrap_or(0);
    let bc = b.coeffs_in(v);
    let lc_b = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v).unwrap_or(0);
        if dr < db {
            break;
        }
        let lc_r = r.coeffs_in(v)[dr as usize].clone();
        let shift = Poly::var(a.nvars(), v).pow(dr - db);
        r = &(&lc_b * &r) - &(&(&lc_r * &shift) * b);
    }
    r
}

/// Greatest common divisor, normalized to a lexicographically monic polynomial
/// (zero only when both inputs are zero).
pub fn gcd<S: Field>(a: &Poly<S>, b: &Poly<S>) -> Poly<S> {
    let n = a.nvars();
    if a.is_zero() {
        return b.lex_monic();
    }
    if b.is_zero() {
        return a.lex_monic();
    }
    let Some(v) = main_var(a, b) else {
        return Poly::one(n);
    };
    if !a.involves(v) {
        return gcd(a, &content_in(b, v));
    }
    if !b.involves(v) {
        return gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = pseudo_rem(&p, &q, v);
        p = q;
        if !r.is_zero() && !r.involves(v) {
            p = Poly::one(n);
            break;
        }
        q = primitive_part_in(&r, v);
    }
    (&c * &primitive_part_in(&p, v)).lex_monic()
}

/// Largest `k` with `d^k | p`, together with the cofactor `p / d^k`.
pub fn multiplicity<S: Field>(p: &Poly<S>, d: &Poly<S>) -> (u32, Poly<S>) {
    assert!(!d.is_constant(), "multiplicity of a constant");
    let mut k = 0;
    let mut cur = p.clone();
    if cur.is_zero() {
        return (u32::MAX, cur);
    }
    while let Some(q) = cur.div_exact(d) {
        k += 1;
        cur = q;
    }
    (k, cur)
}

/// Squarefree decomposition `p = c * prod_i s_i^i` (Yun's algorithm applied
/// variable by variable). Returns the nonconstant `(s_i, i)` pairs.
pub fn squarefree_decomposition<S: Field>(p: &Poly<S>) -> Vec<(Poly<S>, u32)> {
    let mut out: Vec<(Poly<S>, u32)> = Vec::new();
    let mut rest = p.clone();
    for v in (0..p.nvars()).rev() {
        if !rest.involves(v) {
            continue;
        }
        let prim = primitive_part_in(&rest, v);
        rest = content_in(&rest, v);
        for (s, m) in yun(&prim, v) {
            out.push((s, m));
        }
    }
    // merge equal multiplicities
    out.sort_by_key(|(_, m)| *m);
    let mut merged: Vec<(Poly<S>, u32)> = Vec::new();
    for (s, m) in out {
        match merged.last_mut() {
            Some((t, k)) if *k == m => *t = (&*t * &s).lex_monic(),
            _ => merged.push((s.lex_monic(), m)),
        }
    }
    merged
}

fn yun<S: Field>(f: &Poly<S>, v: usize) -> Vec<(Poly<S>, u32)> {
    let mut out = Vec::new();
    let df = f.derivative(v);
    let a0 = gcd(f, &df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let mut c = df.div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative(v);
    let mut i = 1;
    while !b.is_constant() {
        let a = gcd(&b, &d);
        b = b.div_exact(&a).expect("gcd divides");
        c = d.div_exact(&a).expect("gcd divides");
        d = &c - &b.derivative(v);
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let m = n.to_u64()?;
    if m == 0 {
        return Some(vec![BigInt::zero()]);
    }
    let mut ds = Vec::new();
    let mut k = 1u64;
    while k * k <= m {
        if m % k == 0 {
            ds.push(BigInt::from(k));
            if k * k != m {
                ds.push(BigInt::from(m / k));
            }
        }
        k += 1;
        if k > 10_000_000 {
            return None;
        }
    }
    Some(ds)
}

/// Rational roots of a univariate polynomial (given as a one-variable `Poly`),
/// without multiplicity, in increasing order. `None` if the coefficients are
/// too large for the divisor search.
pub fn rational_roots(p: &Poly<Rational>) -> Option<Vec<Rational>> {
    assert_eq!(p.nvars(), 1);
    if p.is_zero() {
        return Some(Vec::new());
    }
    let mut cs = p.coeffs_in(0).into_iter().map(|c| c.constant_term()).collect::<Vec<_>>();
    let mut roots = Vec::new();
    let lead_zeros = cs.iter().take_while(|c| c.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(Rational::zero());
        cs.drain(..lead_zeros);
    }
    // clear denominators
    let l = cs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = cs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let a0 = ints.first().cloned().unwrap_or_default();
    let an = ints.last().cloned().unwrap_or_default();
    if ints.len() > 1 {
        let num = small_divisors(&a0)?;
        let den = small_divisors(&an)?;
        for pn in &num {
            for qd in &den {
                for sign in [1, -1] {
                    let r = Rational::new(pn * sign, qd.clone());
                    if eval_univariate(&cs, &r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

fn eval_univariate(cs: &[Rational], x: &Rational) -> Rational {
    cs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}
