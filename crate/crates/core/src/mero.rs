//! Plane meromorphic germs `f/g`: the holomorphic 1-form `theta`, the
//! constants `c` along its divisors, the reduced form `omega`, the polynomial
//! system those data solve, and slice checks of deformations of that system.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::deform::{verify_family, SolutionFamily};
use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::gcd::{content_in, gcd, multiplicity, primitive_part_in, rational_roots, squarefree_decomposition};
use crate::jet::Jet;
use crate::poly::{Monomial, Poly};
use crate::scalar::{NumberField, Scalar};
use crate::vars::VarContext;

type QPoly = Poly<Rational>;
type KPoly = Poly<Scalar>;

/// Largest degree of an algebraic constant `c` handled by elimination; up to
/// degree 3 a polynomial without rational roots is irreducible.
pub const MAX_CONSTANT_DEGREE: usize = 3;

/// `unit * prod h_i^e_i` in two variables.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredGerm {
    pub unit: Rational,
    pub factors: Vec<(QPoly, u32)>,
}

impl FactoredGerm {
    pub fn new(unit: Rational, factors: Vec<(QPoly, u32)>) -> Result<Self> {
        if unit.is_zero() {
            return Err(Error::Precondition("zero unit".into()));
        }
        for (h, e) in &factors {
            if h.nvars() != 2 {
                return Err(Error::Context("plane germs have exactly two variables".into()));
            }
            if *e == 0 || h.is_constant() {
                return Err(Error::Precondition("factors must be nonconstant with positive exponents".into()));
            }
            if !h.constant_term().is_zero() {
                return Err(Error::Precondition("factors must vanish at the origin".into()));
            }
            let sq = squarefree_decomposition(h);
            if sq.iter().any(|(_, m)| *m > 1) {
                return Err(Error::Precondition("a factor is not squarefree".into()));
            }
        }
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                if !gcd(&factors[i].0, &factors[j].0).is_constant() {
                    return Err(Error::Precondition("factors are not pairwise coprime".into()));
                }
            }
        }
        Ok(FactoredGerm { unit, factors })
    }

    pub fn expanded(&self) -> QPoly {
        self.factors
            .iter()
            .fold(Poly::constant(2, self.unit.clone()), |acc, (h, e)| &acc * &h.pow(*e))
    }

    /// Product of the distinct factors.
    pub fn reduced(&self) -> QPoly {
        self.factors.iter().fold(Poly::one(2), |acc, (h, _)| &acc * h)
    }
}

/// `a dx1 + b dx2`
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm<S> {
    pub a: Poly<S>,
    pub b: Poly<S>,
}

impl<S: Field> OneForm<S> {
    pub fn differential(f: &Poly<S>) -> Self {
        OneForm { a: f.derivative(0), b: f.derivative(1) }
    }

    /// Gcd of both coefficients.
    pub fn divisor(&self) -> Poly<S> {
        gcd(&self.a, &self.b)
    }

    pub fn div_exact(&self, d: &Poly<S>) -> Option<Self> {
        Some(OneForm { a: self.a.div_exact(d)?, b: self.b.div_exact(d)? })
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> OneFormDisplay<'a, S> {
        OneFormDisplay { form: self, names }
    }
}

pub struct OneFormDisplay<'a, S> {
    form: &'a OneForm<S>,
    names: &'a [String],
}

impl<S: Field> fmt::Display for OneFormDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) d{} + ({}) d{}",
            self.form.a.display_with(self.names),
            self.names[0],
            self.form.b.display_with(self.names),
            self.names[1]
        )
    }
}

/// `(prod f_i prod g_j) / (f g) * (g df - f dg)`
pub fn theta(f: &FactoredGerm, g: &FactoredGerm) -> Result<OneForm<Rational>> {
    let fe = f.expanded();
    let ge = g.expanded();
    if !gcd(&fe, &ge).is_constant() {
        return Err(Error::Precondition("f and g are not coprime".into()));
    }
    let df = OneForm::differential(&fe);
    let dg = OneForm::differential(&ge);
    let w = OneForm { a: &(&ge * &df.a) - &(&fe * &dg.a), b: &(&ge * &df.b) - &(&fe * &dg.b) };
    let radical = &f.reduced() * &g.reduced();
    let num = OneForm { a: &radical * &w.a, b: &radical * &w.b };
    num.div_exact(&(&fe * &ge))
        .ok_or_else(|| Error::Internal("theta is not divisible by f g; check the factorization".into()))
}

/// Data of one divisor `h` of `theta`: `f - c g = component^(mu+1) * rho`
/// over the field of `c`, where `component` is `h` itself for rational `c`
/// and a factor of `h` over `Q(c)` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisorRecord {
    pub h: QPoly,
    pub c: Scalar,
    pub component: KPoly,
    pub mu: u32,
    pub rho: KPoly,
}

impl DivisorRecord {
    /// Minimal polynomial of `c` (constant term first) when `c` is irrational.
    pub fn minpoly(&self) -> Option<&[Rational]> {
        self.c.field().map(|k| k.minpoly())
    }

    /// Certified: `c` and every conjugate are real.
    pub fn is_real(&self) -> bool {
        match self.minpoly() {
            None => true,
            Some(m) => all_roots_real(m),
        }
    }
}

fn all_roots_real(m: &[Rational]) -> bool {
    // monic, constant term first, degree 2 or 3: positive discriminant
    match m.len() {
        3 => {
            let (c, b) = (&m[0], &m[1]);
            b * b - Rational::from_integer(4.into()) * c > Rational::zero()
        }
        4 => {
            let (d, c, b) = (&m[0], &m[1], &m[2]);
            let r = |n: i64| Rational::from_integer(n.into());
            let disc = r(18) * b * c * d - r(4) * b * b * b * d + b * b * c * c - r(4) * c * c * c - r(27) * d * d;
            disc > Rational::zero()
        }
        _ => false,
    }
}

/// `p` over the rationals, if every coefficient is rational.
pub fn rational_poly(p: &KPoly) -> Option<QPoly> {
    let terms: Option<Vec<(Monomial, Rational)>> = p.terms().map(|(m, c)| Some((m.clone(), c.as_rational()?))).collect();
    Some(Poly::from_terms(p.nvars(), terms?))
}

fn to_k(p: &QPoly) -> KPoly {
    p.map_coeffs(|c| Scalar::rational(c.clone()))
}

/// `f - c g` in `(x1, x2, c)`.
fn pencil(fe: &QPoly, ge: &QPoly) -> QPoly {
    let f3 = fe.embed(3, &[0, 1]);
    let g3 = ge.embed(3, &[0, 1]);
    &f3 - &(&g3 * &Poly::var(3, 2))
}

/// Univariate polynomial in `c` whose roots are the constants `c` with
/// `h | f - c g` (for `h` irreducible over the rationals).
fn constant_polynomial(h: &QPoly, fe: &QPoly, ge: &QPoly) -> QPoly {
    let v = if h.involves(1) { 1 } else { 0 };
    let other = 1 - v;
    let h3 = h.embed(3, &[0, 1]);
    let p = pencil(fe, ge);
    let lead_first = |q: &QPoly| -> Vec<QPoly> { q.coeffs_in(v).into_iter().rev().collect() };
    let r = crate::det::sylvester_resultant(&lead_first(&h3), &lead_first(&p), &Poly::one(3));
    let mut g = Poly::zero(3);
    for coeff in r.coeffs_in(other) {
        g = gcd(&g, &coeff);
    }
    g.embed(1, &[0, 0, 0])
}

fn linear(c: &Rational) -> QPoly {
    &Poly::var(1, 0) - &Poly::constant(1, c.clone())
}

/// Rational roots of `g`, and `g` with those roots removed (squarefree).
fn split_constants(g: &QPoly) -> Result<(Vec<Rational>, QPoly)> {
    let roots = rational_roots(g)
        .ok_or_else(|| Error::Precondition("constant polynomial has coefficients too large for root search".into()))?;
    let mut rest = g.clone();
    for r in &roots {
        let (_, cof) = multiplicity(&rest, &linear(r));
        rest = cof;
    }
    let d = rest.derivative(0);
    if !rest.is_constant() {
        rest = rest.div_exact(&gcd(&rest, &d)).expect("gcd divides");
    }
    Ok((roots, rest.lex_monic()))
}

fn check_coprime(h: &QPoly, f: &FactoredGerm, g: &FactoredGerm) -> Result<()> {
    if !gcd(h, &f.expanded()).is_constant() || !gcd(h, &g.expanded()).is_constant() {
        return Err(Error::Precondition("the divisor shares a factor with f g".into()));
    }
    Ok(())
}

fn rational_record(h: &QPoly, c: &Rational, fe: &QPoly, ge: &QPoly) -> Option<DivisorRecord> {
    let pencil = fe - &ge.scale(c);
    let (k, rho) = multiplicity(&pencil, h);
    (k >= 1 && k != u32::MAX).then(|| DivisorRecord {
        h: h.clone(),
        c: Scalar::rational(c.clone()),
        component: to_k(h),
        mu: k - 1,
        rho: to_k(&rho),
    })
}

/// `h` over `Q(c)` for `c` a root of `minpoly` (monic, variable `c`).
fn algebraic_record(h: &QPoly, minpoly: &QPoly, fe: &QPoly, ge: &QPoly) -> Result<Option<DivisorRecord>> {
    let deg = minpoly.degree().unwrap_or(0) as usize;
    if deg > MAX_CONSTANT_DEGREE {
        return Err(Error::Precondition(format!(
            "constant of degree {deg} over the rationals; at most {MAX_CONSTANT_DEGREE} is supported"
        )));
    }
    let coeffs: Vec<Rational> = minpoly.coeffs_in(0).iter().map(Poly::constant_term).collect();
    let k = NumberField::new(coeffs).ok_or_else(|| Error::Internal("bad minimal polynomial".into()))?;
    let alpha = k.generator();
    let pencil = &to_k(fe) - &to_k(ge).scale(&alpha);
    let hk = to_k(h);
    let component = gcd(&hk, &pencil);
    if component.is_constant() {
        return Ok(None);
    }
    if component.degree().unwrap_or(0) as usize * deg != h.degree().unwrap_or(0) as usize {
        return Err(Error::LemmaViolation(format!(
            "`{}` does not split into conjugates over the field of its constant",
            h.display_with(&["x1".into(), "x2".into()])
        )));
    }
    let (m, rho) = multiplicity(&pencil, &component);
    Ok(Some(DivisorRecord { h: h.clone(), c: alpha, component, mu: m - 1, rho }))
}

/// The constant `c` with `h | f - c g`, with `mu + 1` the exact power of `h`
/// dividing `f - c g`; `None` when no such constant exists.
pub fn divisor_constant(h: &QPoly, f: &FactoredGerm, g: &FactoredGerm) -> Result<Option<DivisorRecord>> {
    if h.is_constant() {
        return Err(Error::Precondition("constant divisor".into()));
    }
    check_coprime(h, f, g)?;
    let (fe, ge) = (f.expanded(), g.expanded());
    let poly = constant_polynomial(h, &fe, &ge);
    if poly.is_constant() {
        return Ok(None);
    }
    let (roots, rest) = split_constants(&poly)?;
    for c in &roots {
        if let Some(r) = rational_record(h, c, &fe, &ge) {
            return Ok(Some(r));
        }
    }
    if rest.is_constant() {
        return Ok(None);
    }
    algebraic_record(h, &rest, &fe, &ge)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeroAnalysis {
    pub f: FactoredGerm,
    pub g: FactoredGerm,
    pub theta: OneForm<Rational>,
    /// Divisors of `theta`, with `mu` their multiplicity in `theta`.
    pub records: Vec<DivisorRecord>,
    /// Candidates that do not divide `theta` but lie in a fiber of `f/g`.
    pub informational: Vec<DivisorRecord>,
    pub omega: OneForm<Rational>,
}

impl MeroAnalysis {
    pub fn e(&self) -> usize {
        self.records.len()
    }

    pub fn is_real(&self) -> bool {
        self.records.iter().all(DivisorRecord::is_real)
    }
}

/// Splits squarefree pieces by the content in each variable and by the
/// candidates, so that every piece can be eliminated in a variable it involves.
fn refine(pieces: Vec<(QPoly, u32)>, candidates: &[QPoly]) -> Vec<(QPoly, u32)> {
    let mut out = Vec::new();
    for (s, m) in pieces {
        let mut parts = vec![s];
        for v in [1, 0] {
            parts = parts
                .into_iter()
                .flat_map(|p| {
                    if !p.involves(v) {
                        return vec![p];
                    }
                    let c = content_in(&p, v);
                    let pp = primitive_part_in(&p, v);
                    [c, pp].into_iter().filter(|q| !q.is_constant()).collect()
                })
                .collect();
        }
        for cand in candidates {
            parts = parts
                .into_iter()
                .flat_map(|p| {
                    let d = gcd(&p, cand);
                    if d.is_constant() || d.degree() == p.degree() {
                        vec![p]
                    } else {
                        vec![d.clone(), p.div_exact(&d).expect("gcd divides")]
                    }
                })
                .collect();
        }
        out.extend(parts.into_iter().map(|p| (p.lex_monic(), m)));
    }
    out
}

pub fn analyze(f: &FactoredGerm, g: &FactoredGerm, candidates: &[QPoly]) -> Result<MeroAnalysis> {
    let th = theta(f, g)?;
    let (fe, ge) = (f.expanded(), g.expanded());
    if th.is_zero() {
        return Err(Error::Precondition("theta vanishes: f/g is constant".into()));
    }
    let d = th.divisor();
    let mut pieces = refine(squarefree_decomposition(&d), candidates);
    let mut records = Vec::new();
    while let Some((mut s, m)) = pieces.pop() {
        let poly = constant_polynomial(&s, &fe, &ge);
        let (roots, rest) = split_constants(&poly)?;
        for c in &roots {
            let pencil = &fe - &ge.scale(c);
            let h = gcd(&s, &pencil);
            if h.is_constant() {
                continue;
            }
            let r = rational_record(&h, c, &fe, &ge).expect("h divides the pencil");
            if r.mu != m {
                return Err(Error::LemmaViolation(format!(
                    "multiplicity {m} in theta but {} in f - c g",
                    r.mu + 1
                )));
            }
            records.push(r);
            s = s.div_exact(&h).expect("h divides s");
            if s.is_constant() {
                break;
            }
        }
        if s.is_constant() {
            continue;
        }
        if rest.is_constant() {
            return Err(Error::LemmaViolation(format!(
                "no constant c for the divisor `{}` of theta; a factor of f or g is likely reducible",
                s.display_with(&["x1".into(), "x2".into()])
            )));
        }
        match algebraic_record(&s, &rest, &fe, &ge)? {
            Some(r) if r.mu == m => records.push(r),
            Some(r) => {
                return Err(Error::LemmaViolation(format!(
                    "multiplicity {m} in theta but {} in f - c g",
                    r.mu + 1
                )))
            }
            None => return Err(Error::LemmaViolation("algebraic constant does not cut the divisor".into())),
        }
    }
    records.sort_by(|a, b| a.h.terms().rev().cmp(b.h.terms().rev()));
    let mut omega = th.clone();
    for r in &records {
        omega = omega
            .div_exact(&r.h.pow(r.mu))
            .ok_or_else(|| Error::Internal("h^mu does not divide theta".into()))?;
    }
    if !omega.divisor().is_constant() {
        return Err(Error::LemmaViolation("omega keeps a common divisor".into()));
    }
    let mut informational = Vec::new();
    for cand in candidates {
        if cand.is_constant() || !gcd(cand, &d).is_constant() {
            continue;
        }
        if check_coprime(cand, f, g).is_ok() {
            if let Some(r) = divisor_constant(cand, f, g)? {
                informational.push(r);
            }
        }
    }
    Ok(MeroAnalysis { f: f.clone(), g: g.clone(), theta: th, records, informational, omega })
}

/// One equation `lhs = rhs` of the system.
#[derive(Debug, Clone, PartialEq)]
pub struct SEquation {
    pub lhs: KPoly,
    pub rhs: KPoly,
}

/// The system satisfied by the factors of `f`, `g`, the divisors and their
/// cofactors, with that reference solution in `(x1, x2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemS {
    pub names: Vec<String>,
    pub equations: Vec<SEquation>,
    pub solution: Vec<KPoly>,
}

impl SystemS {
    /// `lhs - rhs` at the reference solution, for every equation.
    pub fn residuals(&self) -> Vec<KPoly> {
        self.equations
            .iter()
            .map(|e| (&e.lhs - &e.rhs).substitute(&self.solution))
            .collect()
    }

    pub fn solution_checks(&self) -> bool {
        self.residuals().iter().all(Poly::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.equations
            .iter()
            .flat_map(|e| e.lhs.terms().chain(e.rhs.terms()))
            .chain(self.solution.iter().flat_map(|s| s.terms()))
            .all(|(_, c)| c.as_rational().is_some())
    }

    /// `lhs - rhs` as exact jets over the rationals in the context
    /// `(x1, x2, names...)`; `None` when a coefficient is irrational.
    pub fn rational_jets(&self, xy: &std::sync::Arc<VarContext>, order: u32) -> Option<Vec<Jet<Rational>>> {
        let shift: Vec<usize> = (0..self.names.len()).map(|i| i + 2).collect();
        self.equations
            .iter()
            .map(|e| {
                let q = rational_poly(&(&e.lhs - &e.rhs))?.embed(xy.len(), &shift);
                Some(Jet::new(xy, order, q, true))
            })
            .collect()
    }
}

pub fn emit_system(an: &MeroAnalysis) -> SystemS {
    let p = an.f.factors.len();
    let q = an.g.factors.len();
    let e = an.e();
    let mut names = Vec::new();
    names.extend((1..=p).map(|i| format!("y1_{i}")));
    names.extend((1..=q).map(|j| format!("y2_{j}")));
    names.extend((1..=e).map(|k| format!("y3_{k}")));
    names.extend((1..=e).map(|k| format!("y4_{k}")));
    let n = names.len();
    let var = |i: usize| Poly::<Scalar>::var(n, i);
    let mono = |offset: usize, exps: &[u32], unit: &Rational| {
        let mut t = Poly::constant(n, Scalar::rational(unit.clone()));
        for (i, &ex) in exps.iter().enumerate() {
            t = &t * &var(offset + i).pow(ex);
        }
        t
    };
    let lexp: Vec<u32> = an.f.factors.iter().map(|(_, l)| *l).collect();
    let kexp: Vec<u32> = an.g.factors.iter().map(|(_, k)| *k).collect();
    let fm = mono(0, &lexp, &an.f.unit);
    let gm = mono(p, &kexp, &an.g.unit);
    let equations = an
        .records
        .iter()
        .enumerate()
        .map(|(k, r)| SEquation {
            lhs: &fm - &gm.scale(&r.c),
            rhs: &var(p + q + k).pow(r.mu + 1) * &var(p + q + e + k),
        })
        .collect();
    let mut solution: Vec<KPoly> = Vec::new();
    solution.extend(an.f.factors.iter().map(|(h, _)| to_k(h)));
    solution.extend(an.g.factors.iter().map(|(h, _)| to_k(h)));
    solution.extend(an.records.iter().map(|r| r.component.clone()));
    solution.extend(an.records.iter().map(|r| r.rho.clone()));
    SystemS { names, equations, solution }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceStatus {
    /// Exact data, `H^mu` divides `Theta` and `Omega` has an isolated zero.
    Isolated,
    /// Exact data, but one of the checks fails.
    Failed,
    /// The slice is not a polynomial, so nothing is decided.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeroSlice {
    pub t: Rational,
    pub status: SliceStatus,
    pub division_exact: bool,
    pub isolated: bool,
    /// `F_t / G_t == f / g`
    pub same_quotient: bool,
    pub theta: Option<OneForm<Rational>>,
    pub omega: Option<OneForm<Rational>>,
    pub note: Option<String>,
}

/// Truncation of a witness to degree `<= k0` and its tail.
fn split_witness(w: &Jet<Rational>, k0: u32) -> (QPoly, QPoly) {
    let n = w.poly().nvars();
    let mut low = Poly::zero(n);
    let mut high = Poly::zero(n);
    for (m, c) in w.poly().terms() {
        if m.degree() <= k0 {
            low.add_term(m.clone(), c.clone());
        } else {
            high.add_term(m.clone(), c.clone());
        }
    }
    (low, high)
}

/// Slices of the deformation obtained from a family `y(x, z)` solving the
/// system, with `z` moved from the witness `z(x)` (at `t = 0`) to its
/// truncation of degree `k0` (at `t = 1`).
pub fn build_mero_deformation(
    an: &MeroAnalysis,
    sys: &SystemS,
    family: &[Jet<Rational>],
    z: &[String],
    witness: &[Jet<Rational>],
    grid: &[Rational],
    k0: u32,
) -> Result<Vec<MeroSlice>> {
    let order = family.iter().chain(witness).map(Jet::order).min().unwrap_or(crate::jet::DEFAULT_ORDER);
    let x = VarContext::coords(["x1", "x2"])?;
    let mut xy_names: Vec<String> = x.names().to_vec();
    xy_names.extend(sys.names.iter().cloned());
    let xy = VarContext::coords(xy_names)?;
    let system = sys
        .rational_jets(&xy, order)
        .ok_or_else(|| Error::Precondition("deformation slices need rational constants".into()))?;
    let target: Vec<Jet<Rational>> = sys
        .solution
        .iter()
        .map(|s| {
            let q = rational_poly(s).ok_or_else(|| Error::Precondition("deformation slices need rational data".into()))?;
            Ok(Jet::new(&x, order, q, true))
        })
        .collect::<Result<_>>()?;
    let witness: Vec<Jet<Rational>> = witness.iter().map(|w| w.rebase(&x)).collect::<Result<_>>()?;
    let sf = SolutionFamily {
        y: sys.names.clone(),
        z: z.to_vec(),
        system,
        family: family.to_vec(),
        witness: witness.clone(),
        target,
    };
    let check = verify_family(&sf, order)?;
    if !check.passed() {
        return Err(Error::NotASolution("the family does not solve the system through the reference solution".into()));
    }
    let p = an.f.factors.len();
    let q = an.g.factors.len();
    let e = an.e();
    let fe = an.f.expanded();
    let ge = an.g.expanded();
    let mut slices = Vec::new();
    for t in grid {
        let one_minus = Rational::one() - t;
        let zt: Vec<Jet<Rational>> = witness
            .iter()
            .map(|w| {
                let (low, high) = split_witness(w, k0);
                let exact = w.is_exact() || (t.is_one() && k0 < w.order());
                Jet::new(&x, w.order(), &low + &high.scale(&one_minus), exact)
            })
            .collect();
        let subst: Vec<(&str, &Jet<Rational>)> = z.iter().map(String::as_str).zip(&zt).collect();
        let ys: Vec<Jet<Rational>> = family.iter().map(|y| y.compose(&subst, &x, true)).collect::<Result<_>>()?;
        let mut slice = MeroSlice {
            t: t.clone(),
            status: SliceStatus::Inconclusive,
            division_exact: false,
            isolated: false,
            same_quotient: false,
            theta: None,
            omega: None,
            note: None,
        };
        if ys[..p + q + e].iter().any(|y| !y.is_exact()) {
            slice.note = Some(format!("slice known only to order {}", ys.iter().map(Jet::order).min().unwrap_or(order)));
            slices.push(slice);
            continue;
        }
        let fs = FactoredGerm {
            unit: an.f.unit.clone(),
            factors: ys[..p].iter().zip(&an.f.factors).map(|(y, (_, l))| (y.poly().clone(), *l)).collect(),
        };
        let gs = FactoredGerm {
            unit: an.g.unit.clone(),
            factors: ys[p..p + q].iter().zip(&an.g.factors).map(|(y, (_, k))| (y.poly().clone(), *k)).collect(),
        };
        slice.same_quotient = &fs.expanded() * &ge == &fe * &gs.expanded();
        let th = match theta(&fs, &gs) {
            Ok(th) => th,
            Err(err) => {
                slice.status = SliceStatus::Failed;
                slice.note = Some(err.to_string());
                slices.push(slice);
                continue;
            }
        };
        let mut omega = Some(th.clone());
        for (k, r) in an.records.iter().enumerate() {
            let hk = ys[p + q + k].poly().pow(r.mu);
            omega = omega.and_then(|o| o.div_exact(&hk));
        }
        slice.division_exact = omega.is_some();
        slice.isolated = omega.as_ref().is_some_and(|o| !o.is_zero() && o.divisor().is_constant());
        slice.status = if slice.division_exact && slice.isolated { SliceStatus::Isolated } else { SliceStatus::Failed };
        slice.theta = Some(th);
        slice.omega = omega;
        slices.push(slice);
    }
    Ok(slices)
}

/// Positive-denominator helper for reports: `c` as a reduced fraction string.
pub fn rational_string(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else if c.is_negative() {
        format!("-{}/{}", c.numer().abs(), c.denom())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn x1() -> QPoly {
        Poly::var(2, 0)
    }
    fn x2() -> QPoly {
        Poly::var(2, 1)
    }
    fn k(n: i64, d: i64) -> QPoly {
        Poly::constant(2, rat(n, d))
    }
    fn germ(unit: i64, factors: Vec<(QPoly, u32)>) -> FactoredGerm {
        FactoredGerm::new(rat(unit, 1), factors).unwrap()
    }
    fn kq(p: &QPoly) -> KPoly {
        to_k(p)
    }

    fn fixture() -> (FactoredGerm, FactoredGerm) {
        (germ(1, vec![(x1(), 1), (x2(), 1)]), germ(1, vec![(&x1() + &x2(), 2)]))
    }

    #[test]
    fn theta_examples() {
        let th = theta(&germ(1, vec![(x2(), 2)]), &germ(1, vec![(x1(), 1)])).unwrap();
        assert_eq!(th.a, -&x2());
        assert_eq!(th.b, x1().scale(&rat(2, 1)));

        let (f, g) = fixture();
        let th = theta(&f, &g).unwrap();
        let d = &x2() - &x1();
        assert_eq!(th.a, &d * &x2());
        assert_eq!(th.b, -&(&d * &x1()));

        let th = theta(&germ(1, vec![(x2(), 1)]), &germ(1, vec![(x1(), 1)])).unwrap();
        assert_eq!((th.a, th.b), (-&x2(), x1()));
    }

    #[test]
    fn theta_rejects_common_factor() {
        let f = germ(1, vec![(x1(), 1)]);
        assert!(matches!(theta(&f, &f), Err(Error::Precondition(_))));
    }

    #[test]
    fn constants_of_divisors() {
        let (f, g) = fixture();
        let r = divisor_constant(&(&x1() - &x2()), &f, &g).unwrap().unwrap();
        assert_eq!(r.c, Scalar::rational(rat(1, 4)));
        assert_eq!(r.mu, 1);
        assert_eq!(r.rho, kq(&k(-1, 4)));

        assert!(matches!(divisor_constant(&(&x1() + &x2()), &f, &g), Err(Error::Precondition(_))));

        let h = &x1() - &x2().scale(&rat(2, 1));
        let r = divisor_constant(&h, &f, &g).unwrap().unwrap();
        assert_eq!(r.c, Scalar::rational(rat(2, 9)));
        assert_eq!(r.mu, 0);
        assert_eq!(r.rho, kq(&(&x1().scale(&rat(-2, 9)) + &x2().scale(&rat(1, 9)))));

        // x1 + x2^2 meets no fiber of x1 x2 / (x1 + x2)^2 in a curve
        let h = &x1() + &x2().pow(2);
        assert_eq!(divisor_constant(&h, &f, &g).unwrap(), None);
    }

    #[test]
    fn analysis_of_fixture() {
        let (f, g) = fixture();
        let an = analyze(&f, &g, &[]).unwrap();
        assert_eq!(an.e(), 1);
        let r = &an.records[0];
        assert_eq!(r.h, &x1() - &x2());
        assert_eq!(r.c, Scalar::rational(rat(1, 4)));
        assert_eq!((r.mu, r.rho.clone()), (1, kq(&k(-1, 4))));
        // omega = -(x2 dx1 - x1 dx2)
        assert_eq!(an.omega.a, -&x2());
        assert_eq!(an.omega.b, x1());
        assert!(an.is_real());
    }

    #[test]
    fn analysis_without_divisors() {
        let an = analyze(&germ(1, vec![(x2(), 2)]), &germ(1, vec![(x1(), 1)]), &[]).unwrap();
        assert_eq!(an.e(), 0);
        assert_eq!(an.omega, an.theta);
        let sys = emit_system(&an);
        assert!(sys.equations.is_empty());
        assert!(sys.solution_checks());
    }

    #[test]
    fn repeated_factor_of_f_cancels() {
        let f = germ(1, vec![(&x2() - &x1().pow(2), 3)]);
        let g = germ(1, vec![(x1(), 1)]);
        let an = analyze(&f, &g, &[]).unwrap();
        assert!(an.records.iter().all(|r| gcd(&r.h, &(&x2() - &x1().pow(2))).is_constant()));
        let th = theta(&f, &g).unwrap();
        assert_eq!(multiplicity(&th.a, &(&x2() - &x1().pow(2))).0, 0);
    }

    #[test]
    fn two_divisors() {
        let f = germ(1, vec![(&x1() - &x2(), 1), (&x1() + &x2(), 1)]);
        let g = germ(1, vec![(&x1().pow(2) + &x2().pow(2), 1)]);
        let an = analyze(&f, &g, &[]).unwrap();
        assert_eq!(an.e(), 2);
        assert_eq!(an.records[0].h, x2());
        assert_eq!(an.records[0].c, Scalar::rational(rat(1, 1)));
        assert_eq!(an.records[0].rho, kq(&k(-2, 1)));
        assert_eq!(an.records[1].h, x1());
        assert_eq!(an.records[1].c, Scalar::rational(rat(-1, 1)));
        assert_eq!((an.records[1].mu, an.records[1].rho.clone()), (1, kq(&k(2, 1))));
        let sys = emit_system(&an);
        assert_eq!(sys.equations.len(), 2);
        assert!(sys.solution_checks());
    }

    #[test]
    fn algebraic_constant() {
        let f = germ(1, vec![(&x1() - &x2(), 1), (&x1() + &x2(), 1)]);
        let g = germ(-2, vec![(x1(), 1), (x2(), 1)]);
        let an = analyze(&f, &g, &[]).unwrap();
        assert_eq!(an.e(), 1);
        let r = &an.records[0];
        assert_eq!(r.h, &x1().pow(2) + &x2().pow(2));
        assert_eq!(r.minpoly(), Some(&[rat(1, 1), rat(0, 1), rat(1, 1)][..]));
        assert_eq!(r.mu, 1);
        assert!(!r.is_real());
        assert!(!an.is_real());
        assert!(an.omega.divisor().is_constant());
        let sys = emit_system(&an);
        assert!(sys.solution_checks());
        assert!(!sys.is_rational());
    }

    #[test]
    fn system_for_fixture() {
        let (f, g) = fixture();
        let sys = emit_system(&analyze(&f, &g, &[]).unwrap());
        assert_eq!(sys.names, ["y1_1", "y1_2", "y2_1", "y3_1", "y4_1"]);
        assert_eq!(sys.equations[0].lhs.display_with(&sys.names).to_string(), "y1_1*y1_2 - 1/4*y2_1^2");
        assert_eq!(sys.equations[0].rhs.display_with(&sys.names).to_string(), "y3_1^2*y4_1");
        assert!(sys.solution_checks());
    }

    #[test]
    fn informational_candidate() {
        let (f, g) = fixture();
        let h = &x1() - &x2().scale(&rat(2, 1));
        let an = analyze(&f, &g, std::slice::from_ref(&h)).unwrap();
        assert_eq!(an.e(), 1);
        assert_eq!(an.informational.len(), 1);
        assert_eq!(an.informational[0].mu, 0);
    }

    #[test]
    fn constructed_pencil() {
        // f = h^3 rho + c g with h = x2 - x1^2, rho = 1 + x1, g = x1^2
        let h = &x2() - &x1().pow(2);
        let rho = &k(1, 1) + &x1();
        let c = rat(3, 2);
        let gp = x1().pow(2);
        let fe = &(&h.pow(3) * &rho) + &gp.scale(&c);
        let f = germ(1, vec![(fe.lex_monic(), 1)]);
        let f = FactoredGerm { unit: fe.lex_leading().unwrap().1.clone(), ..f };
        let g = germ(1, vec![(x1(), 2)]);
        let an = analyze(&f, &g, &[]).unwrap();
        let r = an.records.iter().find(|r| r.h == h.lex_monic()).unwrap();
        assert_eq!(r.c, Scalar::rational(c));
        assert_eq!(r.mu, 2);
    }

    fn xctx() -> std::sync::Arc<VarContext> {
        VarContext::coords(["x1", "x2"]).unwrap()
    }

    #[test]
    fn deformation_slices() {
        // f = (x1 + w)(x2 + w), g = (x1 + x2 + 2w)^2 with w = x1^2 + x1^3
        let w = &x1().pow(2) + &x1().pow(3);
        let f = germ(1, vec![(&x1() + &w, 1), (&x2() + &w, 1)]);
        let g = germ(1, vec![(&(&x1() + &x2()) + &w.scale(&rat(2, 1)), 2)]);
        let an = analyze(&f, &g, &[]).unwrap();
        assert_eq!(an.e(), 1);
        let sys = emit_system(&an);
        let xz = VarContext::coords(["x1", "x2", "z"]).unwrap();
        let (a, b, z) = (Jet::var(&xz, 16, 0), Jet::var(&xz, 16, 1), Jet::var(&xz, 16, 2));
        let h = an.records[0].component.clone();
        let rho = rational_poly(&an.records[0].rho).unwrap();
        let hq = rational_poly(&h).unwrap();
        let family = vec![
            a.add(&z).unwrap(),
            b.add(&z).unwrap(),
            a.add(&b).unwrap().add(&z.scale(&rat(2, 1))).unwrap(),
            Jet::new(&xz, 16, hq.embed(3, &[0, 1]), true),
            Jet::new(&xz, 16, rho.embed(3, &[0, 1]), true),
        ];
        let witness = vec![Jet::new(&xctx(), 16, w.clone(), true)];
        let grid = [rat(0, 1), rat(1, 2), rat(1, 1)];
        let slices = build_mero_deformation(&an, &sys, &family, &["z".into()], &witness, &grid, 2).unwrap();
        assert_eq!(slices.len(), 3);
        assert!(slices.iter().all(|s| s.status == SliceStatus::Isolated));
        assert!(slices[0].same_quotient);
        assert!(!slices[2].same_quotient);
        let series = vec![Jet::new(&xctx(), 16, w, false)];
        let slices = build_mero_deformation(&an, &sys, &family, &["z".into()], &series, &grid, 2).unwrap();
        assert_eq!(slices[0].status, SliceStatus::Inconclusive);
        assert_eq!(slices[2].status, SliceStatus::Isolated);
    }
}
