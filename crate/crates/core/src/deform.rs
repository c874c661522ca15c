//! Parametrized solution families of analytic systems: verification, the
//! explicit binomial family of `y1^2 = y2^3`, and one-parameter deformations
//! built from a tower solved with auxiliary variables.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::jet::Jet;
use crate::poly::{Monomial, Poly};
use crate::pseudopoly::PseudoPoly;
use crate::vars::VarContext;

/// A family `y(x, z)` solving `f(x, y) = 0`, with a witness `z(x)` that
/// recovers a particular solution `target(x)`.
///
/// `system` lives in a context over `x` and `y`, `family` over `x` and `z`,
/// `witness` and `target` over `x` alone.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFamily<S> {
    pub y: Vec<String>,
    pub z: Vec<String>,
    pub system: Vec<Jet<S>>,
    pub family: Vec<Jet<S>>,
    pub witness: Vec<Jet<S>>,
    pub target: Vec<Jet<S>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual<S> {
    pub residual: Jet<S>,
    /// No term below the residual's order.
    pub ok: bool,
}

impl<S: Field> Residual<S> {
    fn of(r: Jet<S>, order: u32) -> Self {
        let residual = r.with_order(order.min(r.order()));
        let ok = residual.is_zero_to_order();
        Residual { residual, ok }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyCheck<S> {
    /// `f(x, y(x, z))` for each equation.
    pub system: Vec<Residual<S>>,
    /// `y(x, z(x)) - target(x)` for each component.
    pub target: Vec<Residual<S>>,
    pub order: u32,
}

impl<S: Field> FamilyCheck<S> {
    pub fn system_ok(&self) -> bool {
        self.system.iter().all(|r| r.ok)
    }

    pub fn target_ok(&self) -> bool {
        self.target.iter().all(|r| r.ok)
    }

    pub fn passed(&self) -> bool {
        self.system_ok() && self.target_ok()
    }
}

fn check_arity<S: Field>(sf: &SolutionFamily<S>) -> Result<()> {
    if sf.family.len() != sf.y.len() || sf.target.len() != sf.y.len() {
        return Err(Error::Context(format!(
            "{} unknowns but {} family entries and {} target entries",
            sf.y.len(),
            sf.family.len(),
            sf.target.len()
        )));
    }
    if sf.witness.len() != sf.z.len() {
        return Err(Error::Context(format!("{} auxiliary variables but {} witnesses", sf.z.len(), sf.witness.len())));
    }
    for (name, w) in sf.z.iter().zip(&sf.witness) {
        if !w.constant_term().is_zero() {
            return Err(Error::Precondition(format!("witness for `{name}` has a nonzero constant term")));
        }
    }
    Ok(())
}

/// Checks both defining properties of a solution family modulo `order`.
pub fn verify_family<S: Field>(sf: &SolutionFamily<S>, order: u32) -> Result<FamilyCheck<S>> {
    check_arity(sf)?;
    let Some(first) = sf.family.first() else {
        return Ok(FamilyCheck { system: Vec::new(), target: Vec::new(), order });
    };
    let xz = first.ctx().clone();
    let subst_y: Vec<(&str, &Jet<S>)> = sf.y.iter().map(String::as_str).zip(&sf.family).collect();
    let mut system = Vec::new();
    for f in &sf.system {
        system.push(Residual::of(f.compose(&subst_y, &xz, true)?, order));
    }
    let subst_z: Vec<(&str, &Jet<S>)> = sf.z.iter().map(String::as_str).zip(&sf.witness).collect();
    let mut target = Vec::new();
    for (y, t) in sf.family.iter().zip(&sf.target) {
        let at = y.compose(&subst_z, t.ctx(), true)?;
        target.push(Residual::of(at.sub(t)?, order));
    }
    let order = system.iter().chain(&target).map(|r| r.residual.order()).min().unwrap_or(order);
    Ok(FamilyCheck { system, target, order })
}

/// Allowed prefixes: `y_i` may involve `x_1..x_sigma[i]` and `z_1..z_tau[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedShape {
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NestedCheck<S> {
    pub family: FamilyCheck<S>,
    pub violations: Vec<String>,
}

impl<S: Field> NestedCheck<S> {
    pub fn passed(&self) -> bool {
        self.family.passed() && self.violations.is_empty()
    }
}

/// Names of variables of `f` outside `allowed`.
fn outside<S: Field>(f: &Jet<S>, allowed: &[&str]) -> Vec<String> {
    f.support_names().into_iter().filter(|n| !allowed.contains(n)).map(str::to_string).collect()
}

pub fn verify_nested<S: Field>(sf: &SolutionFamily<S>, shape: &NestedShape, order: u32) -> Result<NestedCheck<S>> {
    let family = verify_family(sf, order)?;
    let n = sf.y.len();
    if shape.sigma.len() != n || shape.tau.len() != n {
        return Err(Error::Precondition("shape does not match the number of unknowns".into()));
    }
    if shape.sigma.windows(2).any(|w| w[0] > w[1]) || shape.tau.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition("shape maps must be nondecreasing".into()));
    }
    let x_names: Vec<String> = match sf.target.first().or(sf.witness.first()) {
        Some(t) => t.ctx().names().to_vec(),
        None => Vec::new(),
    };
    if shape.sigma.iter().any(|&s| s > x_names.len()) || shape.tau.iter().any(|&t| t > sf.z.len()) {
        return Err(Error::Precondition("shape bound exceeds the variable count".into()));
    }
    let mut violations = Vec::new();
    for i in 0..n {
        let xs: Vec<&str> = x_names[..shape.sigma[i]].iter().map(String::as_str).collect();
        let zs: Vec<&str> = sf.z[..shape.tau[i]].iter().map(String::as_str).collect();
        let allowed: Vec<&str> = xs.iter().chain(&zs).copied().collect();
        for v in outside(&sf.family[i], &allowed) {
            violations.push(format!("{} involves `{v}`", sf.y[i]));
        }
        for (j, w) in sf.witness[..shape.tau[i]].iter().enumerate() {
            for v in outside(w, &xs) {
                violations.push(format!("witness {} (used by {}) involves `{v}`", sf.z[j], sf.y[i]));
            }
        }
    }
    violations.dedup();
    Ok(NestedCheck { family, violations })
}

/// Unit power series `r` with `r^k = u` modulo `order`, for a univariate unit
/// `u`, computed coefficient by coefficient from the constant term.
fn unit_root<S: Field>(u: &[S], k: u32, order: usize) -> Result<Vec<S>> {
    let r0 = u[0]
        .nth_root(k)
        .ok_or_else(|| Error::NotASolution(format!("leading coefficient {} has no root of order {k}", u[0])))?;
    let kk = S::from_int(k as i64);
    let denom = (kk * r0.pow_u(k - 1)).try_inv().ok_or(Error::NotAUnit)?;
    let mut r = vec![r0];
    for m in 1..order {
        r.push(S::zero());
        let current = power_coeff(&r, k, m);
        let target = u.get(m).cloned().unwrap_or_else(S::zero);
        r[m] = (target - current) * denom.clone();
    }
    Ok(r)
}

/// Coefficient of `t^m` in `(sum r_i t^i)^k`.
fn power_coeff<S: Field>(r: &[S], k: u32, m: usize) -> S {
    let mut acc = vec![S::one()];
    for _ in 0..k {
        let mut next = vec![S::zero(); m + 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in r.iter().enumerate() {
                if i + j <= m {
                    next[i + j] = next[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        acc = next;
    }
    acc[m].clone()
}

trait PowU {
    fn pow_u(&self, e: u32) -> Self;
}

impl<S: Field> PowU for S {
    fn pow_u(&self, e: u32) -> Self {
        (0..e).fold(S::one(), |acc, _| acc * self.clone())
    }
}

fn univariate<S: Field>(f: &Jet<S>) -> Vec<S> {
    (0..f.order()).map(|k| f.coefficient(&[k])).collect()
}

/// The family `(x^{3e} z^3, x^{2e} z^2)` through a solution `(y1, y2)` of
/// `y1^2 = y2^3` in one variable, with `ord y1 = 3(e + 1)`.
pub fn binomial_family<S: Field>(y1: &Jet<S>, y2: &Jet<S>) -> Result<SolutionFamily<S>> {
    let x = y1.ctx().clone();
    if x.len() != 1 || !crate::vars::same_context(&x, y2.ctx()) {
        return Err(Error::Context("the binomial family takes two series in one common variable".into()));
    }
    let order = y1.order().min(y2.order());
    if !y1.pow(2).sub(&y2.pow(3))?.with_order(order).is_zero_to_order() {
        return Err(Error::NotASolution("y1^2 - y2^3 does not vanish".into()));
    }
    let d = y1
        .valuation()
        .finite()
        .ok_or_else(|| Error::NotASolution("y1 vanishes to the certification order".into()))?;
    if d % 3 != 0 {
        return Err(Error::NotASolution(format!("ord y1 = {d} is not a multiple of 3")));
    }
    let e = d / 3 - 1;
    // y1 = x^d * u with u a unit known modulo x^(order - d)
    let coeffs = univariate(y1);
    let u: Vec<S> = coeffs[d as usize..].to_vec();
    let known = (order - d) as usize;
    let r = unit_root(&u, 3, known)?;
    let mut zp = Poly::zero(1);
    for (i, c) in r.iter().enumerate() {
        zp.add_term(Monomial(vec![i as u32 + 1]), c.clone());
    }
    let zorder = known as u32 + 1;
    let mut zhat = Jet::new(&x, zorder, zp, false);
    let xv = Jet::var(&x, order, 0);
    if y1.is_exact() && y2.is_exact() {
        // a polynomial root is certified by exact multiplication
        let prod3 = &xv.poly().pow(3 * e) * &zhat.poly().pow(3);
        let prod2 = &xv.poly().pow(2 * e) * &zhat.poly().pow(2);
        if &prod3 == y1.poly() && &prod2 == y2.poly() {
            zhat = Jet::new(&x, order, zhat.poly().clone(), true);
        }
    }
    let y2_rebuilt = xv.pow(2 * e).mul(&zhat.pow(2))?;
    if !y2_rebuilt.sub(y2)?.with_order(order.min(y2_rebuilt.order())).is_zero_to_order() {
        return Err(Error::NotASolution("the square root does not match y2".into()));
    }
    let y_names = vec!["y1".to_string(), "y2".to_string()];
    let xname = x.name(0).to_string();
    let xy = VarContext::coords([xname.clone(), "y1".into(), "y2".into()])?;
    let xz = VarContext::coords([xname, "z".into()])?;
    let f = Jet::var(&xy, order, 1).pow(2).sub(&Jet::var(&xy, order, 2).pow(3))?;
    let xz_x = Jet::var(&xz, order, 0);
    let z = Jet::var(&xz, order, 1);
    let family = vec![xz_x.pow(3 * e).mul(&z.pow(3))?, xz_x.pow(2 * e).mul(&z.pow(2))?];
    Ok(SolutionFamily {
        y: y_names,
        z: vec!["z".into()],
        system: vec![f],
        family,
        witness: vec![zhat],
        target: vec![y1.clone(), y2.clone()],
    })
}

/// One level of a tower whose coefficients are given as families in the
/// auxiliary variables.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvedLevel<S> {
    /// Coordinate index `i`; the level polynomial is monic in `x_i`.
    pub index: usize,
    /// `a_{i-1,1}, ..., a_{i-1,p_i}` over `(z, x_1..x_{i-1})`.
    pub coeffs: Vec<Jet<S>>,
    /// Index of the first nonvanishing generalized discriminant.
    pub disc_index: usize,
    /// `u_{i-1}` with `Delta_{i,l_i} = u_{i-1} * (next level polynomial)`,
    /// the next level polynomial being 1 below the last level.
    pub unit: Jet<S>,
}

/// Tower coefficients solved by families in `z`, the witness `z(x)`, and the
/// number of auxiliary variables each level may use.
///
/// `ctx` lists the auxiliary variables as parameters and `x_1..x_n` as
/// coordinates; witnesses live in `ctx.coord_context()`.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerSolution<S> {
    pub ctx: Arc<VarContext>,
    /// Top level first.
    pub levels: Vec<SolvedLevel<S>>,
    pub witness: Vec<Jet<S>>,
    pub tau: Vec<usize>,
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionCheck<S> {
    /// `(level index, discriminant index, residual)` for every equation.
    pub equations: Vec<(usize, usize, Residual<S>)>,
    pub violations: Vec<String>,
}

impl<S: Field> SolutionCheck<S> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.equations.iter().all(|(_, _, r)| r.ok)
    }
}

impl<S: Field> TowerSolution<S> {
    pub fn level_poly(&self, k: usize) -> Result<PseudoPoly<S>> {
        let l = &self.levels[k];
        PseudoPoly::new(&self.ctx, self.order, self.ctx.coord(l.index), l.coeffs.clone())
    }

    /// Checks the vanishing and identity equations identically in `(x, z)`,
    /// and the dependency pattern of coefficients and witnesses.
    pub fn verify(&self) -> Result<SolutionCheck<S>> {
        let ctx = &self.ctx;
        if self.witness.len() != ctx.n_params() {
            return Err(Error::Context("one witness per auxiliary variable is required".into()));
        }
        if self.tau.len() != self.levels.len() || self.tau.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition("tau must give one nonincreasing bound per level, top first".into()));
        }
        let mut equations = Vec::new();
        let mut violations = Vec::new();
        for (k, level) in self.levels.iter().enumerate() {
            let expected_index = ctx.n_coords() - k;
            if level.index != expected_index {
                return Err(Error::Precondition(format!("level {k} should be in x_{expected_index}")));
            }
            let w = self.level_poly(k)?;
            let p = w.degree();
            if level.disc_index < 1 || level.disc_index > p.max(1) {
                return Err(Error::IndexOutOfRange { index: level.disc_index, max: p });
            }
            let next = match self.levels.get(k + 1) {
                Some(_) => self.level_poly(k + 1)?.to_jet(),
                None => Jet::one(ctx, self.order),
            };
            for l in 1..=level.disc_index {
                let d = if p == 0 { Jet::one(ctx, self.order) } else { w.hankel_minor(p - l + 1)? };
                let r = if l < level.disc_index { d } else { d.sub(&level.unit.mul(&next)?)? };
                equations.push((level.index, l, Residual::of(r, self.order)));
            }
            if !level.unit.is_unit() {
                violations.push(format!("u_{} is not a unit", level.index - 1));
            }
            let allowed: Vec<&str> = ctx.coord_prefix(level.index - 1)
                .into_iter()
                .map(|v| ctx.name(v))
                .chain((0..self.tau[k]).map(|j| ctx.name(j)))
                .collect();
            for (j, a) in level.coeffs.iter().enumerate() {
                for v in outside(a, &allowed) {
                    violations.push(format!("a_{},{} involves `{v}`", level.index - 1, j + 1));
                }
            }
            let xs: Vec<&str> = allowed[..level.index - 1].to_vec();
            for j in 0..self.tau[k] {
                for v in outside(&self.witness[j], &xs) {
                    violations.push(format!("witness {} involves `{v}`", ctx.name(j)));
                }
            }
        }
        violations.dedup();
        Ok(SolutionCheck { equations, violations })
    }
}

/// `F(t, x)` with its fibers over `t = 1` and `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Deformation<S> {
    pub family: Jet<S>,
    /// `W_n(x, z(x))`
    pub fiber_one: Jet<S>,
    /// `W_n(x, 0)`; exact when it is a polynomial in every variable.
    pub fiber_zero: Jet<S>,
    pub solution: SolutionCheck<S>,
}

impl<S: Field> Deformation<S> {
    pub fn fiber_zero_is_polynomial(&self) -> bool {
        self.fiber_zero.is_exact()
    }
}

/// Top-level polynomial with every auxiliary variable `z_j` replaced by
/// `t z_j(x)`, for the parameter named `t`.
pub fn build_deformation<S: Field>(sol: &TowerSolution<S>, t: &str) -> Result<Deformation<S>> {
    let solution = sol.verify()?;
    if !solution.passed() {
        let what: Vec<String> = solution
            .equations
            .iter()
            .filter(|(_, _, r)| !r.ok)
            .map(|(i, l, _)| format!("level {i}, index {l}"))
            .chain(solution.violations.iter().cloned())
            .collect();
        return Err(Error::NotASolution(what.join("; ")));
    }
    let top = sol.level_poly(0)?.to_jet();
    let xs = sol.ctx.coord_context();
    let coords: Vec<String> = xs.names().to_vec();
    let tx = VarContext::new([t.to_string()], coords)?;
    let tv = Jet::var(&tx, sol.order, 0);
    let scaled: Vec<Jet<S>> = sol
        .witness
        .iter()
        .map(|w| tv.mul(&w.rebase(&tx)?))
        .collect::<Result<_>>()?;
    let zn: Vec<&str> = (0..sol.ctx.n_params()).map(|j| sol.ctx.name(j)).collect();
    let family = top.compose(&zn.iter().copied().zip(&scaled).collect::<Vec<_>>(), &tx, false)?;
    let fiber_one = top.compose(&zn.iter().copied().zip(&sol.witness).collect::<Vec<_>>(), &xs, false)?;
    let zeros: Vec<Jet<S>> = zn.iter().map(|_| Jet::zero(&xs, sol.order).certified_exact()).collect();
    let fiber_zero = top.compose(&zn.iter().copied().zip(&zeros).collect::<Vec<_>>(), &xs, false)?;
    Ok(Deformation { family, fiber_one, fiber_zero, solution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rational};
    use crate::tower::{check_family, TowerOptions, Verdict};

    type J = Jet<Rational>;

    fn xline(n: u32) -> (Arc<VarContext>, J) {
        let ctx = VarContext::coords(["x"]).unwrap();
        let x = J::var(&ctx, n, 0);
        (ctx, x)
    }

    #[test]
    fn binomial_example() {
        let (_, x) = xline(16);
        let sf = binomial_family(&x.pow(6), &x.pow(4)).unwrap();
        assert_eq!(sf.witness[0], x);
        assert!(sf.witness[0].is_exact());
        let xz = sf.family[0].ctx().clone();
        let (xv, z) = (J::var(&xz, 16, 0), J::var(&xz, 16, 1));
        assert_eq!(sf.family[0], xv.pow(3).mul(&z.pow(3)).unwrap());
        assert_eq!(sf.family[1], xv.pow(2).mul(&z.pow(2)).unwrap());
        let check = verify_family(&sf, 16).unwrap();
        assert!(check.passed());
        assert_eq!(check.order, 16);
        assert!(check.system.iter().all(|r| r.residual.is_exact_zero()));
    }

    #[test]
    fn binomial_with_unit_factor() {
        let (ctx, x) = xline(12);
        let w = x.mul(&J::one(&ctx, 12).add(&x).unwrap()).unwrap();
        let sf = binomial_family(&w.pow(3), &w.pow(2)).unwrap();
        assert!(sf.family[0].ctx().names()[1] == "z");
        assert_eq!(sf.witness[0].poly(), w.poly());
        assert!(sf.witness[0].is_exact());
        assert!(verify_family(&sf, 12).unwrap().passed());
    }

    #[test]
    fn binomial_with_series_root() {
        let (ctx, x) = xline(12);
        let w = x.mul(&J::one(&ctx, 12).sub(&x).unwrap().invert_unit().unwrap()).unwrap();
        let sf = binomial_family(&w.pow(3), &w.pow(2)).unwrap();
        assert!(!sf.witness[0].is_exact());
        assert!(sf.witness[0].agrees_to(&w, sf.witness[0].order()));
        assert_eq!(sf.witness[0].order(), 10);
        let check = verify_family(&sf, 12).unwrap();
        assert!(check.passed());
    }

    #[test]
    fn binomial_rejects_bad_order() {
        let (_, x) = xline(16);
        assert!(matches!(binomial_family(&x.pow(4), &x.pow(4)), Err(Error::NotASolution(_))));
        assert!(matches!(binomial_family(&x.pow(8), &x.pow(6)), Err(Error::NotASolution(_))));
    }

    fn cusp_system(order: u32) -> (Arc<VarContext>, J) {
        let xy = VarContext::coords(["x", "y1", "y2"]).unwrap();
        let f = J::var(&xy, order, 1).pow(2).sub(&J::var(&xy, order, 2).pow(3)).unwrap();
        (xy, f)
    }

    #[test]
    fn whole_solution_set_family() {
        let (_, f) = cusp_system(16);
        let (x_ctx, x) = xline(16);
        let xz = VarContext::coords(["x", "z"]).unwrap();
        let z = J::var(&xz, 16, 1);
        let w = x.pow(2).add(&x.pow(5)).unwrap();
        let sf = SolutionFamily {
            y: vec!["y1".into(), "y2".into()],
            z: vec!["z".into()],
            system: vec![f],
            family: vec![z.pow(3), z.pow(2)],
            witness: vec![w.clone()],
            target: vec![w.pow(3), w.pow(2)],
        };
        assert!(verify_family(&sf, 16).unwrap().passed());
        let shape = NestedShape { sigma: vec![1, 1], tau: vec![1, 1] };
        assert!(verify_nested(&sf, &shape, 16).unwrap().passed());
        let shape = NestedShape { sigma: vec![0, 0], tau: vec![1, 1] };
        assert!(!verify_nested(&sf, &shape, 16).unwrap().violations.is_empty());
        let shape = NestedShape { sigma: vec![0, 0], tau: vec![0, 1] };
        assert!(!verify_nested(&sf, &shape, 16).unwrap().passed());
        let _ = x_ctx;
    }

    #[test]
    fn broken_family_fails() {
        let (_, f) = cusp_system(16);
        let (_, x) = xline(16);
        let xz = VarContext::coords(["x", "z"]).unwrap();
        let (xv, z) = (J::var(&xz, 16, 0), J::var(&xz, 16, 1));
        let sf = SolutionFamily {
            y: vec!["y1".into(), "y2".into()],
            z: vec!["z".into()],
            system: vec![f],
            family: vec![xv.pow(3).mul(&z.pow(3)).unwrap(), xv.pow(2).mul(&z).unwrap()],
            witness: vec![x.clone()],
            target: vec![x.pow(6), x.pow(4)],
        };
        let check = verify_family(&sf, 16).unwrap();
        assert!(!check.system_ok());
        assert!(!check.target_ok());
        assert_eq!(check.system[0].residual.coefficient(&[6, 6]), rat(1, 1));
    }

    #[test]
    fn nested_violation_is_named() {
        let xy = VarContext::coords(["x1", "x2", "y1"]).unwrap();
        let f = J::var(&xy, 8, 2).sub(&J::var(&xy, 8, 1)).unwrap();
        let xz = VarContext::coords(["x1", "x2"]).unwrap();
        let x = VarContext::coords(["x1", "x2"]).unwrap();
        let sf = SolutionFamily {
            y: vec!["y1".into()],
            z: vec![],
            system: vec![f],
            family: vec![J::var(&xz, 8, 1)],
            witness: vec![],
            target: vec![J::var(&x, 8, 1)],
        };
        let check = verify_nested(&sf, &NestedShape { sigma: vec![1], tau: vec![0] }, 8).unwrap();
        assert!(check.family.passed());
        assert_eq!(check.violations, vec!["y1 involves `x2`".to_string()]);
        let ok = verify_nested(&sf, &NestedShape { sigma: vec![2], tau: vec![0] }, 8).unwrap();
        assert!(ok.passed());
    }

    fn cusp_solution(witness: J) -> TowerSolution<Rational> {
        let ctx = VarContext::new(["z"], ["x1", "x2"]).unwrap();
        let z = J::var(&ctx, 16, 0);
        let x1 = J::var(&ctx, 16, 1);
        let one = J::one(&ctx, 16);
        let zero = J::zero(&ctx, 16);
        let onez = one.add(&z).unwrap();
        TowerSolution {
            ctx: ctx.clone(),
            levels: vec![
                SolvedLevel {
                    index: 2,
                    coeffs: vec![zero.clone(), x1.pow(3).mul(&onez).unwrap().neg()],
                    disc_index: 1,
                    unit: onez.scale(&rat(4, 1)),
                },
                SolvedLevel {
                    index: 1,
                    coeffs: vec![zero.clone(), zero.clone(), zero],
                    disc_index: 3,
                    unit: J::constant(&ctx, 16, rat(3, 1)),
                },
            ],
            witness: vec![witness],
            tau: vec![1, 0],
            order: 16,
        }
    }

    #[test]
    fn cusp_deformation() {
        let xs = VarContext::coords(["x1", "x2"]).unwrap();
        let x1 = J::var(&xs, 16, 0);
        let x2 = J::var(&xs, 16, 1);
        let zx = x1.pow(2).add(&x1.pow(3)).unwrap();
        let sol = cusp_solution(zx.clone());
        let def = build_deformation(&sol, "t").unwrap();
        assert!(def.solution.passed());
        let cusp = x2.pow(2).sub(&x1.pow(3)).unwrap();
        assert_eq!(def.fiber_zero, cusp);
        assert!(def.fiber_zero_is_polynomial());
        let expected = cusp.sub(&x1.pow(3).mul(&zx).unwrap()).unwrap();
        assert!(def.fiber_one.agrees_to(&expected, 16));
        let report = check_family(&def.family, &TowerOptions::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Equisingular);
    }

    #[test]
    fn tampered_solution_is_rejected() {
        let xs = VarContext::coords(["x1", "x2"]).unwrap();
        let mut sol = cusp_solution(J::var(&xs, 16, 0).pow(2));
        sol.levels[0].unit = sol.levels[0].unit.scale(&rat(2, 1));
        assert!(matches!(build_deformation(&sol, "t"), Err(Error::NotASolution(_))));
    }

    #[test]
    fn series_witness() {
        let xs = VarContext::coords(["x1", "x2"]).unwrap();
        let x1 = J::var(&xs, 16, 0);
        let w = J::one(&xs, 16).sub(&x1).unwrap().invert_unit().unwrap().mul(&x1.pow(2)).unwrap();
        let def = build_deformation(&cusp_solution(w), "t").unwrap();
        assert!(!def.family.is_exact());
        assert!(def.fiber_zero_is_polynomial());
        let report = check_family(&def.family, &TowerOptions::default()).unwrap();
        assert_ne!(report.verdict, Verdict::NotEquisingular);
    }
}
