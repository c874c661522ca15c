use std::sync::Arc;

use equising::deform::NestedShape;
use equising::mero::{rational_string, SliceStatus};
use equising::tower::slice;
use equising::{
    analyze, binomial_family, build_mero_deformation, build_tower, build_tower_system, check_family, emit_system,
    find_regular_change, regularity_order, verify_family, verify_nested, verify_tower, weierstrass_divide,
    weierstrass_prepare, Error, Expr, FactoredGerm, Field, Jet, MeroAnalysis, Poly, PseudoPoly, QJet, QPoly,
    Rational, Result, SolutionFamily, Termination, TowerLevel, TowerOptions, VarContext, Verdict,
};
use serde_json::{json, Value};

use crate::args::{Command, Common, Mero};
use crate::report;

/// What a command produced, before it is wrapped into a report.
#[derive(Debug, Default)]
pub struct Body {
    pub result: Value,
    pub changes: Vec<Value>,
    pub human: Vec<String>,
    pub inconclusive: bool,
}

struct Env<'a> {
    common: &'a Common,
}

impl Env<'_> {
    fn ctx(&self) -> Result<Arc<VarContext>> {
        VarContext::new(self.common.params.clone(), self.common.vars.clone())
    }

    fn coords_only(&self) -> Result<Arc<VarContext>> {
        if !self.common.params.is_empty() {
            return Err(Error::Context("this command takes no parameters".into()));
        }
        VarContext::coords(self.common.vars.clone())
    }

    fn jet(&self, ctx: &Arc<VarContext>, text: &str) -> Result<QJet> {
        self.jet_with(ctx, text, !self.common.truncated)
    }

    fn jet_with(&self, ctx: &Arc<VarContext>, text: &str, exact: bool) -> Result<QJet> {
        let p: QPoly = Expr::parse_in(text, ctx.names())?.to_poly(ctx.names())?;
        Ok(Jet::new(ctx, self.common.order, p, exact))
    }

    fn jets(&self, ctx: &Arc<VarContext>, texts: &[String]) -> Result<Vec<QJet>> {
        texts.iter().map(|t| self.jet(ctx, t)).collect()
    }

    fn options(&self) -> TowerOptions {
        TowerOptions { seed: self.common.seed, order: self.common.order }
    }
}

fn distinguished(ctx: &VarContext, var: &Option<String>) -> Result<usize> {
    let v = match var {
        Some(name) => ctx.index_of(name)?,
        None => ctx.len().checked_sub(1).ok_or_else(|| Error::Context("no variables declared".into()))?,
    };
    if ctx.is_param(v) {
        return Err(Error::Context(format!("`{}` is a parameter", ctx.name(v))));
    }
    Ok(v)
}

fn coord_block(ctx: &VarContext) -> Vec<usize> {
    (ctx.n_params()..ctx.len()).collect()
}

/// A rational literal such as `-1/5`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let p: QPoly = Expr::parse_in(text, &[])?.to_poly(&[])?;
    Ok(p.constant_term())
}

fn residual_ok(j: &QJet) -> &'static str {
    if !j.is_zero_to_order() {
        "nonzero"
    } else if j.is_exact() {
        "exact-zero"
    } else {
        "zero-to-order"
    }
}

pub fn execute(cmd: &Command, common: &Common) -> Result<Body> {
    let env = Env { common };
    match cmd {
        Command::Prepare { expr, var } => prepare(&env, expr, var),
        Command::Divide { g, f, var } => divide(&env, g, f, var),
        Command::Gendisc { expr, var } => gendisc(&env, expr, var),
        Command::Tower { exprs } => tower(&env, exprs),
        Command::CheckFamily { expr, slices } => family(&env, expr, slices),
        Command::VerifyFamily { y, z, system, family, witness, target, sigma, tau } => {
            verify(&env, y, z, system, family, witness, target, sigma, tau)
        }
        Command::Binomial { y1, y2 } => binomial(&env, y1, y2),
        Command::MeroAnalyze(m) => mero_analyze(&env, m),
        Command::EmitSystem(m) => emit(&env, m),
        Command::MeroDeform { mero, z, family, witness, grid, k0 } => mero_deform(&env, mero, z, family, witness, grid, *k0),
    }
}

fn prepare(env: &Env, expr: &str, var: &Option<String>) -> Result<Body> {
    let ctx = env.ctx()?;
    let v = distinguished(&ctx, var)?;
    let f = env.jet(&ctx, expr)?;
    let change = find_regular_change(&f, v, &coord_block(&ctx), env.common.seed)?;
    let g = change.apply(&f)?;
    let pf = weierstrass_prepare(&g, v)?;
    let identity = pf.product().sub(&g)?;
    let mut body = Body::default();
    body.changes.push(report::change(&change, &ctx));
    body.human.push(format!("change: {}", change.describe(&ctx)));
    body.human.push(format!("regularity order in {}: {}", ctx.name(v), regularity_order(&g, v)));
    body.human.push(format!("u = {}", pf.unit));
    body.human.push(format!("W = {}", pf.poly));
    body.result = json!({
        "var": ctx.name(v),
        "regularity_order": regularity_order(&g, v).finite(),
        "series": report::jet(&g),
        "unit": report::jet(&pf.unit),
        "poly": report::pseudopoly(&pf.poly),
        "unit_is_unit": pf.unit.is_unit(),
        "distinguished": pf.poly.is_distinguished(),
        "identity_residual": residual_ok(&identity),
    });
    Ok(body)
}

fn divide(env: &Env, g: &str, f: &str, var: &Option<String>) -> Result<Body> {
    let ctx = env.ctx()?;
    let v = distinguished(&ctx, var)?;
    let (g, f) = (env.jet(&ctx, g)?, env.jet(&ctx, f)?);
    let d = weierstrass_divide(&g, &f, v)?;
    let identity = d.quotient.mul(&f)?.add(&d.remainder)?.sub(&g)?;
    let mut body = Body::default();
    body.human.push(format!("q = {}", d.quotient));
    body.human.push(format!("r = {}", d.remainder));
    body.result = json!({
        "var": ctx.name(v),
        "degree": d.degree,
        "quotient": report::jet(&d.quotient),
        "remainder": report::jet(&d.remainder),
        "remainder_degree": d.remainder.poly().degree_in(v),
        "identity_residual": residual_ok(&identity),
    });
    Ok(body)
}

/// Reads `f` as a monic polynomial in `v`, keeping its exactness flag.
fn pseudopoly(f: &QJet, v: usize) -> Result<PseudoPoly<Rational>> {
    if f.is_exact() {
        return PseudoPoly::from_jet(f, v);
    }
    let cs = f.poly().coeffs_in(v);
    let lead = cs.last().cloned().unwrap_or_else(|| Poly::zero(f.ctx().len()));
    if lead.is_zero() || !lead.is_constant() {
        return Err(Error::Precondition(format!(
            "leading coefficient in `{}` is not a nonzero constant",
            f.ctx().name(v)
        )));
    }
    let inv = lead.constant_term().try_inv().ok_or(Error::NotAUnit)?;
    let coeffs = cs.iter().rev().skip(1).map(|c| Jet::new(f.ctx(), f.order(), c.scale(&inv), false)).collect();
    PseudoPoly::new(f.ctx(), f.order(), v, coeffs)
}

fn gendisc(env: &Env, expr: &str, var: &Option<String>) -> Result<Body> {
    let ctx = env.ctx()?;
    let v = distinguished(&ctx, var)?;
    let w = pseudopoly(&env.jet(&ctx, expr)?, v)?;
    let seq = w.generalized_discriminants()?;
    let mut body = Body::default();
    for (i, d) in seq.entries.iter().enumerate() {
        body.human.push(format!("Delta_{} = {}", i + 1, d));
    }
    body.human.push(format!("first nonzero: l = {}", seq.first_nonzero));
    body.result = json!({ "poly": report::pseudopoly(&w), "gendisc": report::gendisc(&seq) });
    Ok(body)
}

fn level(l: &TowerLevel<Rational>) -> Value {
    let ctx = l.poly.ctx();
    json!({
        "index": l.index,
        "var": ctx.name(l.poly.var()),
        "degree": l.degree(),
        "disc_index": l.disc_index,
        "change": report::change(&l.change, ctx),
        "unit": report::jet(&l.unit),
        "poly": report::pseudopoly(&l.poly),
        "gendisc": report::gendisc(&l.gendisc),
    })
}

fn terminal(t: &Termination<Rational>) -> Value {
    let kind = match t {
        Termination::Trivial(_) => "trivial",
        Termination::Unit(_) => "unit",
    };
    json!({ "kind": kind, "value": report::jet(t.unit()) })
}

fn signature(levels: &[TowerLevel<Rational>]) -> Vec<(usize, usize)> {
    levels.iter().map(|l| (l.degree(), l.disc_index)).collect()
}

fn level_lines(levels: &[TowerLevel<Rational>], human: &mut Vec<String>) {
    for l in levels {
        human.push(format!(
            "level {}: p = {}, l = {}, change {}, W = {}",
            l.index,
            l.degree(),
            l.disc_index,
            l.change.describe(l.poly.ctx()),
            l.poly
        ));
    }
}

fn tower(env: &Env, exprs: &[String]) -> Result<Body> {
    let ctx = env.ctx()?;
    let fs = env.jets(&ctx, exprs)?;
    let tw = if fs.len() == 1 {
        build_tower(&fs[0], &env.options())?
    } else {
        build_tower_system(&fs, &env.options())?
    };
    let check = verify_tower(&tw);
    let checks: Vec<Value> = check
        .levels
        .iter()
        .map(|c| json!({ "index": c.index, "identity": c.identity, "vanishing": c.vanishing }))
        .collect();
    let mut body = Body {
        changes: tw.levels.iter().map(|l| report::change(&l.change, &ctx)).collect(),
        ..Body::default()
    };
    body.human.push(format!("signature (p, l): {:?}", tw.signature()));
    level_lines(&tw.levels, &mut body.human);
    body.human.push(format!("terminal: {}", tw.terminal.unit()));
    body.human.push(format!("verified: {}", check.passed()));
    body.result = json!({
        "signature": tw.signature(),
        "order": tw.order,
        "levels": tw.levels.iter().map(level).collect::<Vec<_>>(),
        "terminal": terminal(&tw.terminal),
        "check": { "passed": check.passed(), "levels": checks, "terminal": check.terminal },
    });
    Ok(body)
}

fn family(env: &Env, expr: &str, slices: &[String]) -> Result<Body> {
    let ctx = env.ctx()?;
    if ctx.n_params() == 0 {
        return Err(Error::Context("check-family needs --params".into()));
    }
    if !slices.is_empty() && ctx.n_params() != 1 {
        return Err(Error::Context("--slices needs exactly one parameter".into()));
    }
    let f = env.jet(&ctx, expr)?;
    let rep = check_family(&f, &env.options())?;
    let mut body = Body {
        inconclusive: rep.verdict == Verdict::Inconclusive,
        changes: rep.levels.iter().map(|l| report::change(&l.change, &ctx)).collect(),
        ..Body::default()
    };
    body.human.push(format!("verdict: {}", rep.verdict));
    level_lines(&rep.levels, &mut body.human);
    let witness = rep.witness.as_ref().map(|w| {
        body.human.push(format!("witness at level {}: {} ({})", w.index, w.series, w.reason));
        json!({ "index": w.index, "reason": w.reason, "series": report::jet(&w.series) })
    });
    let mut slice_reports = Vec::new();
    let mut signatures = Vec::new();
    for text in slices {
        let t = parse_rational(text)?;
        let entry = match slice(&f, std::slice::from_ref(&t)).and_then(|g| build_tower(&g, &env.options())) {
            Ok(tw) => {
                body.human.push(format!("slice t = {}: {:?}", rational_string(&t), tw.signature()));
                signatures.push(tw.signature());
                json!({ "t": report::rational(&t), "signature": tw.signature(), "error": null })
            }
            Err(e) => {
                body.inconclusive |= matches!(e, Error::Inconclusive { .. });
                body.human.push(format!("slice t = {}: {e}", rational_string(&t)));
                json!({ "t": report::rational(&t), "signature": null, "error": e.to_string() })
            }
        };
        slice_reports.push(entry);
    }
    let agree = (signatures.len() == slices.len()).then(|| signatures.windows(2).all(|w| w[0] == w[1]));
    body.result = json!({
        "verdict": rep.verdict.to_string(),
        "witness": witness,
        "signature": signature(&rep.levels),
        "levels": rep.levels.iter().map(level).collect::<Vec<_>>(),
        "terminal": rep.terminal.as_ref().map(terminal),
        "order": rep.order,
        "notes": rep.notes,
        "slices": slice_reports,
        "slices_agree": if slices.is_empty() { None } else { agree },
    });
    for n in &rep.notes {
        body.human.push(format!("note: {n}"));
    }
    Ok(body)
}

fn residuals(rs: &[equising::deform::Residual<Rational>]) -> Value {
    Value::Array(
        rs.iter()
            .map(|r| json!({ "ok": r.ok, "status": residual_ok(&r.residual), "residual": report::jet(&r.residual) }))
            .collect(),
    )
}

#[allow(clippy::too_many_arguments)]
fn verify(
    env: &Env,
    y: &[String],
    z: &[String],
    system: &[String],
    family: &[String],
    witness: &[String],
    target: &[String],
    sigma: &[usize],
    tau: &[usize],
) -> Result<Body> {
    let x = env.coords_only()?;
    let with = |extra: &[String]| VarContext::coords(x.names().iter().chain(extra).cloned());
    let (xy, xz) = (with(y)?, with(z)?);
    let system = env.jets(&xy, system)?;
    let family_j = env.jets(&xz, family)?;
    let witness_j = env.jets(&x, witness)?;
    if family_j.len() != y.len() || witness_j.len() != z.len() {
        return Err(Error::Context("one family entry per unknown and one witness per family variable".into()));
    }
    let target_j = if target.is_empty() {
        let subst: Vec<(&str, &QJet)> = z.iter().map(String::as_str).zip(&witness_j).collect();
        family_j.iter().map(|f| f.compose(&subst, &x, true)).collect::<Result<Vec<_>>>()?
    } else {
        env.jets(&x, target)?
    };
    let sf = SolutionFamily {
        y: y.to_vec(),
        z: z.to_vec(),
        system,
        family: family_j,
        witness: witness_j,
        target: target_j,
    };
    let order = env.common.order;
    let (check, violations) = if sigma.is_empty() && tau.is_empty() {
        (verify_family(&sf, order)?, Vec::new())
    } else {
        let shape = NestedShape { sigma: sigma.to_vec(), tau: tau.to_vec() };
        let n = verify_nested(&sf, &shape, order)?;
        (n.family, n.violations)
    };
    let passed = check.passed() && violations.is_empty();
    let mut body = Body::default();
    body.human.push(format!("system residuals vanish: {}", check.system_ok()));
    body.human.push(format!("target reproduced: {}", check.target_ok()));
    body.human.extend(violations.iter().map(|v| format!("violation: {v}")));
    body.result = json!({
        "passed": passed,
        "order": check.order,
        "system": residuals(&check.system),
        "target": residuals(&check.target),
        "violations": violations,
    });
    Ok(body)
}

fn binomial(env: &Env, y1: &str, y2: &str) -> Result<Body> {
    let x = env.coords_only()?;
    let (a, b) = (env.jet(&x, y1)?, env.jet(&x, y2)?);
    let sf = binomial_family(&a, &b)?;
    let check = verify_family(&sf, env.common.order)?;
    let mut body = Body::default();
    body.human.push(format!(
        "family: ({})",
        sf.family.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(", ")
    ));
    body.human.push(format!("witness: z = {}", sf.witness[0]));
    body.human.push(format!("verified: {}", check.passed()));
    body.result = json!({
        "y": sf.y,
        "z": sf.z,
        "system": report::jets(&sf.system),
        "family": report::jets(&sf.family),
        "witness": report::jets(&sf.witness),
        "check": {
            "passed": check.passed(),
            "order": check.order,
            "system": residuals(&check.system),
            "target": residuals(&check.target),
        },
    });
    Ok(body)
}

const MERO_VARS: [&str; 2] = ["x1", "x2"];

fn mero_names(env: &Env) -> Result<Vec<String>> {
    if env.common.vars != MERO_VARS || !env.common.params.is_empty() {
        return Err(Error::Context("meromorphic germs live in the coordinates x1,x2".into()));
    }
    if env.common.truncated {
        return Err(Error::Inconclusive {
            order: env.common.order,
            what: "the 1-form analysis needs polynomial germs, not truncated series".into(),
        });
    }
    Ok(MERO_VARS.iter().map(|s| s.to_string()).collect())
}

/// Reads `c * (e1)^k1 * (e2)^k2 * ...`; factors are kept as written.
pub fn factored(text: &str, names: &[String]) -> Result<FactoredGerm> {
    let (unit, parts) = Expr::parse_in(text, names)?.factored();
    let factors = parts.into_iter().map(|(e, k)| Ok((e.to_poly(names)?, k))).collect::<Result<_>>()?;
    FactoredGerm::new(unit, factors)
}

fn germ(g: &FactoredGerm, names: &[String]) -> Value {
    let factors: Vec<Value> =
        g.factors.iter().map(|(p, k)| json!({ "factor": report::poly(p, names), "power": k })).collect();
    json!({ "unit": report::rational(&g.unit), "factors": factors })
}

fn analysis(env: &Env, m: &Mero) -> Result<(Vec<String>, MeroAnalysis)> {
    let names = mero_names(env)?;
    let f = factored(&m.f, &names)?;
    let g = factored(&m.g, &names)?;
    let cands: Vec<QPoly> = m
        .candidates
        .iter()
        .map(|c| Expr::parse_in(c, &names)?.to_poly(&names))
        .collect::<Result<_>>()?;
    Ok((names.clone(), analyze(&f, &g, &cands)?))
}

fn mero_analyze(env: &Env, m: &Mero) -> Result<Body> {
    let (names, an) = analysis(env, m)?;
    let mut body = Body::default();
    body.human.push(format!("theta = {}", an.theta.display_with(&names)));
    body.human.push(format!("e = {}", an.e()));
    for r in &an.records {
        body.human.push(format!("h = {}, c = {}, mu = {}", r.h.display_with(&names), r.c, r.mu));
    }
    for r in &an.informational {
        body.human.push(format!("h = {}, c = {} (mu = 0)", r.h.display_with(&names), r.c));
    }
    body.human.push(format!("omega = {}", an.omega.display_with(&names)));
    body.result = json!({
        "f": germ(&an.f, &names),
        "g": germ(&an.g, &names),
        "theta": report::one_form(&an.theta, &names),
        "e": an.e(),
        "records": an.records.iter().map(|r| report::record(r, &names)).collect::<Vec<_>>(),
        "informational": an.informational.iter().map(|r| report::record(r, &names)).collect::<Vec<_>>(),
        "omega": report::one_form(&an.omega, &names),
        "omega_isolated": an.omega.divisor().is_constant(),
        "real": an.is_real(),
    });
    Ok(body)
}

fn emit(env: &Env, m: &Mero) -> Result<Body> {
    let (names, an) = analysis(env, m)?;
    let sys = emit_system(&an);
    let mut body = Body::default();
    for eq in &sys.equations {
        body.human.push(format!("{} = {}", eq.lhs.display_with(&sys.names), eq.rhs.display_with(&sys.names)));
    }
    body.human.push(format!("reference solution satisfies the system: {}", sys.solution_checks()));
    let equations: Vec<Value> = sys
        .equations
        .iter()
        .map(|eq| json!({ "lhs": report::poly(&eq.lhs, &sys.names), "rhs": report::poly(&eq.rhs, &sys.names) }))
        .collect();
    let solution: Vec<Value> = sys
        .names
        .iter()
        .zip(&sys.solution)
        .map(|(n, s)| json!({ "name": n, "value": report::poly(s, &names) }))
        .collect();
    body.result = json!({
        "names": sys.names,
        "equations": equations,
        "solution": solution,
        "residuals_zero": sys.solution_checks(),
        "rational": sys.is_rational(),
    });
    Ok(body)
}

fn slice_status(s: SliceStatus) -> &'static str {
    match s {
        SliceStatus::Isolated => "isolated",
        SliceStatus::Failed => "failed",
        SliceStatus::Inconclusive => "inconclusive",
    }
}

fn mero_deform(
    env: &Env,
    m: &Mero,
    z: &[String],
    family: &[String],
    witness: &[String],
    grid: &[String],
    k0: u32,
) -> Result<Body> {
    // The witness may be a truncated series; the germs themselves may not.
    let truncated = env.common.truncated;
    let exact = Common { truncated: false, ..env.common.clone() };
    let exact_env = Env { common: &exact };
    let (names, an) = analysis(&exact_env, m)?;
    let sys = emit_system(&an);
    let x = VarContext::coords(names.clone())?;
    let xz = VarContext::coords(names.iter().chain(z).cloned())?;
    let family_j = exact_env.jets(&xz, family)?;
    let witness_j: Vec<QJet> = witness.iter().map(|w| env.jet_with(&x, w, !truncated)).collect::<Result<_>>()?;
    let grid: Vec<Rational> = grid.iter().map(|t| parse_rational(t)).collect::<Result<_>>()?;
    let slices = build_mero_deformation(&an, &sys, &family_j, z, &witness_j, &grid, k0)?;
    let mut body = Body {
        inconclusive: slices.iter().any(|s| s.status == SliceStatus::Inconclusive),
        ..Body::default()
    };
    let form = |w: &Option<equising::OneForm<Rational>>| w.as_ref().map(|w| report::one_form(w, &names));
    let entries: Vec<Value> = slices
        .iter()
        .map(|s| {
            body.human.push(format!(
                "t = {}: {}{}",
                rational_string(&s.t),
                slice_status(s.status),
                s.note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default()
            ));
            json!({
                "t": report::rational(&s.t),
                "status": slice_status(s.status),
                "division_exact": s.division_exact,
                "isolated": s.isolated,
                "same_quotient": s.same_quotient,
                "theta": form(&s.theta),
                "omega": form(&s.omega),
                "note": s.note,
            })
        })
        .collect();
    body.result = json!({ "k0": k0, "e": an.e(), "slices": entries });
    Ok(body)
}
