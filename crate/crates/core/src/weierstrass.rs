//! Weierstrass division and preparation at finite order, regularity testing,
//! and the search for linear coordinate changes that make a series regular.


use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::jet::{Jet, Valuation};
use crate::poly::{Monomial, Poly};
use crate::pseudopoly::PseudoPoly;
use crate::vars::VarContext;

/// Candidates tried by [`find_regular_change`] before giving up.
pub const CHANGE_BUDGET: usize = 200;

/// Order of `f` in `v` after setting every other variable to zero.
pub fn regularity_order<S: Field>(f: &Jet<S>, v: usize) -> Valuation {
    let keep = [v];
    f.restrict_to(&keep).valuation()
}

/// An integer linear substitution `x_j -> sum_k matrix[j][k] x_k` acting on
/// `block` (context indices); variables outside the block are untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearChange {
    pub block: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<i64>>,
}

impl LinearChange {
    pub fn identity(block: Vec<usize>) -> Self {
        let n = block.len();
        let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        LinearChange { block, matrix: id.clone(), inverse: id }
    }

    /// `x_j -> x_j + shifts[j] * x_pivot` for every `j != pivot` in the block.
    pub fn shear(block: Vec<usize>, pivot: usize, shifts: &[i64]) -> Self {
        let n = block.len();
        let p = block.iter().position(|&b| b == pivot).expect("pivot in block");
        let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let mut inv = m.clone();
        for (j, &c) in shifts.iter().enumerate() {
            if j != p {
                m[j][p] = c;
                inv[j][p] = -c;
            }
        }
        LinearChange { block, matrix: m, inverse: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == i64::from(i == j)))
    }

    pub fn inverted(&self) -> Self {
        LinearChange {
            block: self.block.clone(),
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    /// `matrix * inverse == identity` with a nonzero determinant.
    pub fn is_valid(&self) -> bool {
        let n = self.block.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let s: i64 = (0..n).map(|k| self.matrix[i][k] * self.inverse[k][j]).sum();
                s == i64::from(i == j)
            })
        })
    }

    /// `f(x)` with each block variable replaced by its image.
    pub fn apply<S: Field>(&self, f: &Jet<S>) -> Result<Jet<S>> {
        if self.is_identity() {
            return Ok(f.clone());
        }
        let ctx = f.ctx();
        let n = ctx.len();
        let images: Vec<Jet<S>> = self
            .block
            .iter()
            .enumerate()
            .map(|(i, _)| {
                let mut p = Poly::zero(n);
                for (k, &v) in self.block.iter().enumerate() {
                    let c = self.matrix[i][k];
                    if c != 0 {
                        p.add_term(Monomial::var(n, v, 1), S::from_int(c));
                    }
                }
                Jet::from_poly(ctx, p, f.order())
            })
            .collect();
        let subst: Vec<(&str, &Jet<S>)> = self
            .block
            .iter()
            .zip(&images)
            .map(|(&v, j)| (ctx.name(v), j))
            .collect();
        f.compose(&subst, ctx, false)
    }

    pub fn describe(&self, ctx: &VarContext) -> String {
        if self.is_identity() {
            return "identity".into();
        }
        let mut parts = Vec::new();
        for (i, &v) in self.block.iter().enumerate() {
            let mut terms = Vec::new();
            for (k, &w) in self.block.iter().enumerate() {
                let c = self.matrix[i][k];
                match c {
                    0 => {}
                    1 => terms.push(ctx.name(w).to_string()),
                    -1 => terms.push(format!("-{}", ctx.name(w))),
                    _ => terms.push(format!("{c}*{}", ctx.name(w))),
                }
            }
            if terms.len() != 1 || terms[0] != ctx.name(v) {
                parts.push(format!("{} -> {}", ctx.name(v), terms.join(" + ").replace("+ -", "- ")));
            }
        }
        parts.join(", ")
    }
}

fn shift_vectors(k: usize, m: i64) -> Vec<Vec<i64>> {
    // all vectors in [-m, m]^k with max |entry| == m, in lexicographic order
    let mut out = Vec::new();
    let mut cur = vec![-m; k];
    loop {
        if cur.iter().any(|c| c.abs() == m) {
            out.push(cur.clone());
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < m {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -m;
                }
                break;
            }
        }
    }
}

/// Finds a change within `block` making `f` regular in `v`.
///
/// The identity is preferred. Otherwise shears `x_j -> x_j + c_j v` are tried
/// in groups of increasing `max |c_j|`, each group shuffled by `seed`; within
/// the first group containing a regular candidate, the lowest regularity
/// order wins (ties by enumeration order).
pub fn find_regular_change<S: Field>(f: &Jet<S>, v: usize, block: &[usize], seed: u64) -> Result<LinearChange> {
    let budget = CHANGE_BUDGET;
    if f.is_zero_to_order() {
        return Err(Error::NoRegularDirection { budget });
    }
    assert!(block.contains(&v), "distinguished variable must lie in the block");
    let id = LinearChange::identity(block.to_vec());
    if regularity_order(f, v).is_finite() {
        return Ok(id);
    }
    let others = block.len() - 1;
    if others == 0 {
        return Err(Error::NoRegularDirection { budget });
    }
    let best_possible = f.valuation().finite().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tried = 1;
    let mut m = 1;
    while tried < budget {
        let mut group = shift_vectors(others, m);
        group.shuffle(&mut rng);
        let mut best: Option<(u32, LinearChange)> = None;
        for shifts in group {
            if tried >= budget {
                break;
            }
            tried += 1;
            let mut full = Vec::with_capacity(block.len());
            let mut it = shifts.iter();
            for &b in block {
                full.push(if b == v { 0 } else { *it.next().unwrap() });
            }
            let change = LinearChange::shear(block.to_vec(), v, &full);
            let g = change.apply(f)?;
            if let Valuation::Finite(ord) = regularity_order(&g, v) {
                if best.as_ref().is_none_or(|(b, _)| ord < *b) {
                    best = Some((ord, change));
                }
                if ord == best_possible {
                    break;
                }
            }
        }
        if let Some((_, change)) = best {
            return Ok(change);
        }
        m += 1;
    }
    Err(Error::NoRegularDirection { budget })
}

/// Splits `h = low + v^p * high` where `low` has `v`-degree `< p`.
fn split<S: Field>(h: &Poly<S>, v: usize, p: u32) -> (Poly<S>, Poly<S>) {
    let n = h.nvars();
    let mut low = Poly::zero(n);
    let mut high = Poly::zero(n);
    for (m, c) in h.terms() {
        if m.0[v] < p {
            low.add_term(m.clone(), c.clone());
        } else {
            let mut k = m.clone();
            k.0[v] -= p;
            high.add_term(k, c.clone());
        }
    }
    (low, high)
}

/// Quotient and remainder of a Weierstrass division.
#[derive(Debug, Clone, PartialEq)]
pub struct Division<S> {
    pub quotient: Jet<S>,
    /// Remainder as a jet of `v`-degree below the regularity order.
    pub remainder: Jet<S>,
    /// Regularity order of the divisor.
    pub degree: u32,
}

/// `g = q f + r` modulo total degree `N` with `deg_v r < p`, `p` the
/// regularity order of `f` in `v`.
pub fn weierstrass_divide<S: Field>(g: &Jet<S>, f: &Jet<S>, v: usize) -> Result<Division<S>> {
    if !crate::vars::same_context(g.ctx(), f.ctx()) {
        return Err(Error::Context("dividend and divisor in different contexts".into()));
    }
    let p = regularity_order(f, v)
        .finite()
        .ok_or_else(|| Error::NotRegular(f.ctx().name(v).to_string()))?;
    let ctx = f.ctx();
    let order = g.order().min(f.order());
    let (f_low, f_high) = split(f.poly(), v, p);
    let unit = Jet::new(ctx, order, f_high, f.is_exact());
    let e = unit.invert_unit()?;
    let e_flow = e.poly().mul_truncated(&f_low, Some(order)).0;
    let g_poly = g.poly().truncate(order).0;
    // fixed point w = (g - w E f_low)_high, iterated on the increments
    // d_{k+1} = -(d_k E f_low)_high; each round raises the degree of d in the
    // variables other than v, so at most `order` rounds are needed
    let (_, mut w) = split(&g_poly, v, p);
    let mut d = w.clone();
    for _ in 0..=order {
        let (_, next) = split(&d.mul_truncated(&e_flow, Some(order)).0, v, p);
        if next.is_zero() {
            break;
        }
        d = -&next;
        w = &w + &d;
    }
    let h = &g_poly - &w.mul_truncated(&e_flow, Some(order)).0;
    let (r, _) = split(&h, v, p);
    let q = w.mul_truncated(e.poly(), Some(order)).0;
    let mut quotient = Jet::new(ctx, order, q, false);
    let mut remainder = Jet::new(ctx, order, r, false);
    if g.is_exact() && f.is_exact() && identity_possible(&quotient, f, &remainder, g) {
        // (q, r) is the true division iff the identity holds without truncation
        let lhs = &(quotient.poly() * f.poly()) + remainder.poly();
        if &lhs == g.poly() {
            quotient = quotient.certified_exact();
            remainder = remainder.certified_exact();
        }
    }
    Ok(Division { quotient, remainder, degree: p })
}

/// Degree test for `q f + r == g`: top-degree parts of a product never
/// cancel, so a product of larger degree must be matched by `r`.
fn identity_possible<S: Field>(q: &Jet<S>, f: &Jet<S>, r: &Jet<S>, g: &Jet<S>) -> bool {
    let (Some(dq), Some(df)) = (q.poly().degree(), f.poly().degree()) else {
        return true;
    };
    let d = dq + df;
    d <= g.poly().degree().unwrap_or(0) || Some(d) == r.poly().degree()
}

/// `f = u W` with `u` a unit and `W` a distinguished pseudopolynomial in `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedForm<S> {
    pub unit: Jet<S>,
    pub poly: PseudoPoly<S>,
    pub order: u32,
}

impl<S: Field> PreparedForm<S> {
    /// `u * W`
    pub fn product(&self) -> Jet<S> {
        self.unit.mul(&self.poly.to_jet()).expect("same context")
    }
}

pub fn weierstrass_prepare<S: Field>(f: &Jet<S>, v: usize) -> Result<PreparedForm<S>> {
    let p = regularity_order(f, v)
        .finite()
        .ok_or_else(|| Error::NotRegular(f.ctx().name(v).to_string()))?;
    let ctx = f.ctx();
    let order = f.order();
    let vp = Jet::var(ctx, order, v).pow(p);
    // v^p = q f + r  =>  f = q^{-1} (v^p - r)
    let div = weierstrass_divide(&vp, f, v)?;
    let unit = div.quotient.invert_unit()?;
    let r_coeffs = div.remainder.poly().coeffs_in(v);
    let coeffs: Vec<Jet<S>> = (1..=p as usize)
        .map(|j| {
            let k = p as usize - j;
            let c = r_coeffs.get(k).cloned().unwrap_or_else(|| Poly::zero(ctx.len()));
            Jet::new(ctx, order, -&c, false)
        })
        .collect();
    let poly = PseudoPoly::new(ctx, order, v, coeffs)?;
    let mut prepared = PreparedForm { unit, poly, order };
    if f.is_exact() {
        certify_prepared(&mut prepared, f);
    }
    debug_assert!(prepared.poly.is_distinguished());
    Ok(prepared)
}

/// Marks `u` and `W` exact when `u * W == f` holds as an identity of
/// polynomials (no truncation involved).
fn certify_prepared<S: Field>(prep: &mut PreparedForm<S>, f: &Jet<S>) {
    let w = prep.poly.to_jet();
    let (du, dw, df) = (prep.unit.poly().degree(), w.poly().degree(), f.poly().degree());
    if du.zip(dw).map(|(a, b)| a + b) != df {
        return;
    }
    let prod = prep.unit.poly() * w.poly();
    if &prod == f.poly() {
        prep.unit = prep.unit.clone().certified_exact();
        let ctx = prep.poly.ctx().clone();
        let coeffs = prep.poly.coeffs().iter().map(|c| c.clone().certified_exact()).collect();
        prep.poly = PseudoPoly::new(&ctx, prep.order, prep.poly.var(), coeffs).expect("same shape");
    }
}
