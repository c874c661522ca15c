//! Equisingularity towers: iterated preparation and descent through the first
//! nonvanishing generalized discriminant, for single germs, systems, and
//! families parametrized by inert variables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::jet::{Jet, DEFAULT_ORDER};
use crate::pseudopoly::{GenDiscSequence, PseudoPoly};
use crate::vars::VarContext;
use crate::weierstrass::{find_regular_change, weierstrass_prepare, LinearChange};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TowerOptions {
    pub seed: u64,
    pub order: u32,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions { seed: 0, order: DEFAULT_ORDER }
    }
}

/// One level of a tower: `change(G) = unit * poly`, where `G` is the input
/// germ at the top level and the chosen discriminant of the level above
/// otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerLevel<S> {
    /// Coordinate index `i` (1-based); the level's variable is `x_i`.
    pub index: usize,
    pub change: LinearChange,
    pub unit: Jet<S>,
    pub poly: PseudoPoly<S>,
    pub gendisc: GenDiscSequence<S>,
    /// First nonvanishing generalized discriminant index of `poly`.
    pub disc_index: usize,
}

impl<S: Field> TowerLevel<S> {
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// The discriminant passed down to the next level.
    pub fn next(&self) -> &Jet<S> {
        self.gendisc.first()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination<S> {
    /// The input itself is a unit (empty germ).
    Trivial(Jet<S>),
    /// A discriminant became a unit.
    Unit(Jet<S>),
}

impl<S: Field> Termination<S> {
    pub fn unit(&self) -> &Jet<S> {
        match self {
            Termination::Trivial(u) | Termination::Unit(u) => u,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tower<S> {
    pub ctx: Arc<VarContext>,
    /// The germ the top level prepares (the product of the factors for a system).
    pub source: Jet<S>,
    /// Per-factor prepared pseudopolynomials of a system, empty otherwise.
    pub blocks: Vec<PseudoPoly<S>>,
    /// Top level first.
    pub levels: Vec<TowerLevel<S>>,
    pub terminal: Termination<S>,
    pub order: u32,
}

impl<S: Field> Tower<S> {
    /// `(p_i, l_i)` from the top level down.
    pub fn signature(&self) -> Vec<(usize, usize)> {
        self.levels.iter().map(|l| (l.degree(), l.disc_index)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equisingular,
    NotEquisingular,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equisingular => "equisingular",
            Verdict::NotEquisingular => "not-equisingular",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Why a family fails: `series` is the offending germ at coordinate level
/// `index` (0 once every coordinate has been eliminated).
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<S> {
    pub index: usize,
    pub reason: String,
    pub series: Jet<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport<S> {
    pub verdict: Verdict,
    pub levels: Vec<TowerLevel<S>>,
    pub terminal: Option<Termination<S>>,
    pub witness: Option<Witness<S>>,
    pub order: u32,
    pub notes: Vec<String>,
}

/// Outcome of the shared descent.
struct Descent<S> {
    levels: Vec<TowerLevel<S>>,
    terminal: Option<Termination<S>>,
    failure: Option<Witness<S>>,
    uncertain: Vec<String>,
}

/// Runs the descent from `top` at level `n`. Parameters (if any) are inert:
/// changes act on coordinates only and every regularity test sets them to 0.
fn descend<S: Field>(top: &Jet<S>, opts: &TowerOptions, first: Option<TowerLevel<S>>) -> Result<Descent<S>> {
    let ctx = top.ctx().clone();
    let params: Vec<usize> = ctx.param_indices().collect();
    let mut out = Descent { levels: Vec::new(), terminal: None, failure: None, uncertain: Vec::new() };
    let mut g = top.clone();
    let mut i = ctx.n_coords();
    let mut seed = opts.seed;
    let mut pending_first = first;
    loop {
        if g.is_unit() {
            out.terminal = Some(if out.levels.is_empty() && pending_first.is_none() {
                Termination::Trivial(g)
            } else {
                Termination::Unit(g)
            });
            return Ok(out);
        }
        if i == 0 {
            out.failure = Some(Witness {
                index: 0,
                reason: "discriminant vanishes at the origin of the parameter space without vanishing identically"
                    .into(),
                series: g,
            });
            return Ok(out);
        }
        if !params.is_empty() {
            let along = g.restrict_to(&params);
            if !along.is_zero_to_order() {
                out.failure = Some(Witness {
                    index: i,
                    reason: "does not vanish along the parameter axis".into(),
                    series: along,
                });
                return Ok(out);
            }
            if !along.is_exact() {
                out.uncertain.push(format!("vanishing along the parameter axis at level {i} holds only to order {}", along.order()));
            }
        }
        let block = ctx.coord_prefix(i);
        let v = ctx.coord(i);
        let level = match pending_first.take() {
            Some(l) => l,
            None => {
                if g.restrict_to(&block).is_zero_to_order() {
                    if params.is_empty() {
                        return Err(Error::NoRegularDirection { budget: crate::weierstrass::CHANGE_BUDGET });
                    }
                    if !g.is_exact() {
                        out.uncertain.push(format!("level {i} vanishes at the parameter origin only to order {}", g.order()));
                        return Ok(out);
                    }
                    out.failure = Some(Witness {
                        index: i,
                        reason: "vanishes identically at the parameter origin".into(),
                        series: g,
                    });
                    return Ok(out);
                }
                let change = find_regular_change(&g, v, &block, seed)?;
                let prepared = weierstrass_prepare(&change.apply(&g)?, v)?;
                let mut poly = prepared.poly;
                if params.is_empty() && i == 1 {
                    poly = constants_are_exact(&poly);
                }
                let gendisc = poly.generalized_discriminants()?;
                TowerLevel {
                    index: i,
                    change,
                    unit: prepared.unit,
                    disc_index: gendisc.first_nonzero,
                    poly,
                    gendisc,
                }
            }
        };
        g = level.next().clone();
        out.levels.push(level);
        i -= 1;
        seed = seed.wrapping_add(1);
    }
}

/// Coefficients that live in a ring without variables are constants, and a
/// constant is known exactly at every positive order.
fn constants_are_exact<S: Field>(p: &PseudoPoly<S>) -> PseudoPoly<S> {
    if p.order() == 0 {
        return p.clone();
    }
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| {
            debug_assert!(c.poly().is_constant());
            Jet::constant(p.ctx(), p.order(), c.constant_term())
        })
        .collect();
    PseudoPoly::new(p.ctx(), p.order(), p.var(), coeffs).expect("same shape")
}

fn check_input<S: Field>(f: &Jet<S>) -> Result<()> {
    if f.ctx().n_coords() == 0 {
        return Err(Error::Precondition("no coordinate variables".into()));
    }
    if f.is_zero_to_order() {
        return Err(if f.is_exact() {
            Error::Precondition("the zero germ has no tower".into())
        } else {
            Error::Inconclusive { order: f.order(), what: "input vanishes to the certification order".into() }
        });
    }
    Ok(())
}

fn finish<S: Field>(source: Jet<S>, blocks: Vec<PseudoPoly<S>>, d: Descent<S>) -> Result<Tower<S>> {
    debug_assert!(d.failure.is_none() && d.uncertain.is_empty());
    let order = d
        .levels
        .iter()
        .map(|l| l.gendisc.order.min(l.unit.order()))
        .min()
        .unwrap_or(source.order())
        .min(source.order());
    Ok(Tower {
        ctx: source.ctx().clone(),
        source,
        blocks,
        levels: d.levels,
        terminal: d.terminal.expect("descent without parameters terminates"),
        order,
    })
}

fn with_order<S: Field>(f: &Jet<S>, opts: &TowerOptions) -> Jet<S> {
    f.with_order(opts.order)
}

pub fn build_tower<S: Field>(f: &Jet<S>, opts: &TowerOptions) -> Result<Tower<S>> {
    if f.ctx().n_params() > 0 {
        return Err(Error::Precondition("a tower of a single germ takes no parameters".into()));
    }
    let f = with_order(f, opts);
    check_input(&f)?;
    let d = descend(&f, opts, None)?;
    finish(f, Vec::new(), d)
}

/// Tower of the product of `gs`, keeping each factor's prepared block.
pub fn build_tower_system<S: Field>(gs: &[Jet<S>], opts: &TowerOptions) -> Result<Tower<S>> {
    let Some(first) = gs.first() else {
        return Err(Error::Precondition("empty system".into()));
    };
    let ctx = first.ctx().clone();
    if ctx.n_params() > 0 {
        return Err(Error::Precondition("a tower of a system takes no parameters".into()));
    }
    let gs: Vec<Jet<S>> = gs.iter().map(|g| with_order(g, opts)).collect();
    let mut product = Jet::one(&ctx, opts.order);
    for g in &gs {
        check_input(g)?;
        product = product.mul(g)?;
    }
    check_input(&product)?;
    if product.is_unit() {
        let d = descend(&product, opts, None)?;
        return finish(product, Vec::new(), d);
    }
    let n = ctx.n_coords();
    let v = ctx.coord(n);
    let block = ctx.coord_prefix(n);
    let change = find_regular_change(&product, v, &block, opts.seed)?;
    let mut unit = Jet::one(&ctx, opts.order);
    let mut blocks = Vec::new();
    let mut w = Jet::one(&ctx, opts.order);
    for g in &gs {
        let prepared = weierstrass_prepare(&change.apply(g)?, v)?;
        unit = unit.mul(&prepared.unit)?;
        w = w.mul(&prepared.poly.to_jet())?;
        blocks.push(prepared.poly);
    }
    let degree: usize = blocks.iter().map(PseudoPoly::degree).sum();
    let mut poly = product_pseudopoly(&w, v, degree)?;
    if n == 1 {
        poly = constants_are_exact(&poly);
    }
    let gendisc = poly.generalized_discriminants()?;
    let top = TowerLevel { index: n, change, unit, disc_index: gendisc.first_nonzero, poly, gendisc };
    let d = descend(&product, opts, Some(top))?;
    finish(product, blocks, d)
}

fn product_pseudopoly<S: Field>(w: &Jet<S>, v: usize, degree: usize) -> Result<PseudoPoly<S>> {
    let ctx = w.ctx();
    let cs = w.poly().coeffs_in(v);
    let coeffs = (1..=degree)
        .map(|j| {
            let c = cs.get(degree - j).cloned().unwrap_or_else(|| crate::poly::Poly::zero(ctx.len()));
            Jet::new(ctx, w.order(), c, w.is_exact())
        })
        .collect();
    PseudoPoly::new(ctx, w.order(), v, coeffs)
}

/// Decides equisingularity of `f` along the parameter axis of its context.
pub fn check_family<S: Field>(f: &Jet<S>, opts: &TowerOptions) -> Result<FamilyReport<S>> {
    let f = with_order(f, opts);
    check_input(&f)?;
    let mut notes = vec![
        "polydisc and root-localization conditions are not symbolic and are not part of the verdict".to_string(),
    ];
    let d = match descend(&f, opts, None) {
        Ok(d) => d,
        Err(Error::Inconclusive { order, what }) => {
            notes.push(what);
            return Ok(FamilyReport {
                verdict: Verdict::Inconclusive,
                levels: Vec::new(),
                terminal: None,
                witness: None,
                order,
                notes,
            });
        }
        Err(e) => return Err(e),
    };
    let order = d.levels.iter().map(|l| l.gendisc.order).min().unwrap_or(f.order()).min(f.order());
    let verdict = if !d.uncertain.is_empty() {
        Verdict::Inconclusive
    } else if d.failure.is_some() {
        Verdict::NotEquisingular
    } else {
        Verdict::Equisingular
    };
    notes.extend(d.uncertain);
    Ok(FamilyReport { verdict, levels: d.levels, terminal: d.terminal, witness: d.failure, order, notes })
}

/// The member of a family at fixed parameter values, as a germ in the
/// coordinates alone.
pub fn slice<S: Field>(f: &Jet<S>, values: &[S]) -> Result<Jet<S>> {
    let ctx = f.ctx();
    if values.len() != ctx.n_params() {
        return Err(Error::Precondition(format!(
            "expected {} parameter values, got {}",
            ctx.n_params(),
            values.len()
        )));
    }
    let mut g = f.clone();
    for (k, t) in values.iter().enumerate() {
        g = g.eval_var(k, t)?;
    }
    g.rebase(&ctx.coord_context())
}

/// Per-level result of [`verify_tower`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCheck {
    pub index: usize,
    /// `change(G) = unit * poly` to the certification order.
    pub identity: bool,
    /// Every generalized discriminant below the chosen index vanishes.
    pub vanishing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerCheck {
    pub levels: Vec<LevelCheck>,
    /// The last chosen discriminant equals the recorded terminal unit.
    pub terminal: bool,
}

impl TowerCheck {
    pub fn passed(&self) -> bool {
        self.terminal && self.levels.iter().all(|l| l.identity && l.vanishing)
    }
}

/// Recomputes every level's identity and vanishing list from the stored data.
pub fn verify_tower<S: Field>(tw: &Tower<S>) -> TowerCheck {
    let n = tw.order;
    let mut levels = Vec::new();
    let mut g = tw.source.clone();
    let mut ok_chain = true;
    for level in &tw.levels {
        let identity = match (level.change.apply(&g), level.unit.mul(&level.poly.to_jet())) {
            (Ok(lhs), Ok(rhs)) => lhs.agrees_to(&rhs, n),
            _ => false,
        };
        let p = level.poly.degree();
        let l = level.disc_index;
        let mut vanishing = l >= 1 && l <= p.max(1);
        let mut chosen = None;
        if p == 0 {
            chosen = Some(Jet::one(&tw.ctx, n));
        } else if vanishing {
            for k in 1..=l {
                match level.poly.hankel_minor(p - k + 1) {
                    Ok(d) if k < l => vanishing &= d.with_order(n).is_zero_to_order(),
                    Ok(d) => chosen = Some(d),
                    Err(_) => vanishing = false,
                }
            }
        }
        levels.push(LevelCheck { index: level.index, identity, vanishing });
        match chosen {
            Some(d) => g = d,
            None => {
                ok_chain = false;
                break;
            }
        }
    }
    let terminal = ok_chain && g.agrees_to(tw.terminal.unit(), n) && tw.terminal.unit().is_unit();
    TowerCheck { levels, terminal }
}
