//! Reduction driver: picks relation instances that lower the window
//! potential, applies them, and collects algebraic parts and residual
//! integrals.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use crate::arith::{solve_linear, Poly, Rat};
use crate::catalog::{AlgTerm, Catalog, RelationInstance, Rule, SolveFor};
use crate::error::{Error, Result};
use crate::frontend::print_expr;
use crate::integrand::{classify, normalize, normalize_keeping_zero, Integrand, PowerFactor, TranscKind, Window};
use crate::par::{self, Execution};

/// `INT(current) = sum(alg) + scale * INT(next)`; `next` is `None` when the
/// step integrates `current` exactly and otherwise has a primitive cofactor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: String,
    pub solve_for: SolveFor,
    pub scale: Rat,
    pub alg: Vec<AlgTerm>,
    pub current: Integrand,
    pub next: Option<Integrand>,
}

/// Linear re-expression without an exponent move:
/// `INT(current) = sum(alg) + sum(c * INT(part))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewrite {
    /// `absorb` (cofactor into a linear base) or `split` (cofactor modulo a single base).
    pub kind: String,
    pub current: Integrand,
    pub alg: Vec<AlgTerm>,
    pub parts: Vec<(Rat, Integrand)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Terminal,
    Obstructed(String),
}

impl Status {
    pub fn is_terminal(&self) -> bool {
        matches!(self, Status::Terminal)
    }
}

/// `INT(input) = sum(algebraic) + sum(c * INT(residual))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub input: Integrand,
    pub algebraic: Vec<AlgTerm>,
    pub residuals: Vec<(Rat, Integrand)>,
    pub trace: Vec<Step>,
    pub rewrites: Vec<Rewrite>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReduceOptions {
    pub window: Window,
    /// Bound on steps and, separately, on rewrites.
    pub max_steps: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            window: Window::default(),
            max_steps: 512,
        }
    }
}

fn normalized(i: &Integrand) -> Result<Integrand> {
    normalize(&Integrand {
        factors: i.factors.iter().filter(|f| !f.exponent.is_zero()).cloned().collect(),
        ..i.clone()
    })
}

/// Isolates one integral of the relation; factors whose exponent reaches zero
/// are dropped.
pub fn apply_step(inst: &RelationInstance, solve_for: SolveFor) -> Result<Step> {
    step_from(inst, solve_for, normalized)
}

fn step_from(
    inst: &RelationInstance,
    solve_for: SolveFor,
    normalized: fn(&Integrand) -> Result<Integrand>,
) -> Result<Step> {
    if inst.k1.is_zero() {
        return Err(Error::SolvedCoefficientZero {
            rule: inst.rule.clone(),
        });
    }
    let partner_exists = !inst.integrand2.cofactor.is_zero();
    let (scale, alg_scale, current, next) = match solve_for {
        SolveFor::One => {
            let s = -inst.k1.recip();
            let next = partner_exists.then(|| normalized(&inst.integrand2)).transpose()?;
            (s.clone(), s, normalized(&inst.integrand1)?, next)
        }
        SolveFor::Two => {
            if !partner_exists {
                return Err(Error::SolvedCoefficientZero {
                    rule: inst.rule.clone(),
                });
            }
            (
                -inst.k1.clone(),
                Rat::int(-1),
                normalized(&inst.integrand2)?,
                Some(normalized(&inst.integrand1)?),
            )
        }
    };
    let (scale, next) = match next {
        Some(n) => {
            let (content, prim) = n.cofactor.primitive_part();
            (scale * content, Some(Integrand { cofactor: prim, ..n }))
        }
        None => (scale, None),
    };
    let alg = inst
        .alg
        .iter()
        .map(|a| a.scaled(&alg_scale).canonical())
        .filter(|a| !a.is_zero())
        .collect();
    Ok(Step {
        rule: inst.rule.clone(),
        solve_for,
        scale,
        alg,
        current,
        next,
    })
}

/// Rewrites the cofactor in powers of the first linear base, producing
/// constant-cofactor integrands with that exponent raised by 0, 1, 2.
pub fn absorb_cofactor(i: &Integrand) -> Result<Vec<(Rat, Integrand)>> {
    let j = i
        .factors
        .iter()
        .position(|f| f.degree() == 1)
        .ok_or(Error::NoLinearFactor)?;
    absorb_into(i, j)
}

/// As [`absorb_cofactor`], using the linear base whose raised exponent costs
/// the least potential; ties go to the first.
fn absorb_cheapest(i: &Integrand, window: &Window) -> Result<Vec<(Rat, Integrand)>> {
    let raise = Rat::from(i.cofactor_degree() as i64);
    let j = (0..i.factors.len())
        .filter(|&j| i.factors[j].degree() == 1)
        .min_by_key(|&j| {
            window.distance(&(&i.factors[j].exponent + &raise)) as i64 - window.distance(&i.factors[j].exponent) as i64
        })
        .ok_or(Error::NoLinearFactor)?;
    absorb_into(i, j)
}

fn absorb_into(i: &Integrand, j: usize) -> Result<Vec<(Rat, Integrand)>> {
    if i.cofactor.is_constant() {
        return Ok(vec![(Rat::one(), i.clone())]);
    }
    let coeffs = i.cofactor.taylor_in(&i.factors[j].base)?;
    let mut out = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mut factors = i.factors.clone();
        factors[j] = PowerFactor::new(factors[j].base.clone(), &factors[j].exponent + Rat::from(k as i64));
        out.push((
            c.clone(),
            normalized(&Integrand::new(Poly::one(), i.transc.clone(), factors))?,
        ));
    }
    Ok(out)
}

struct Candidate<'a> {
    phi: u64,
    merges: bool,
    order: usize,
    perm: Vec<usize>,
    dir: SolveFor,
    rule: &'a Rule,
}

fn moved(i: &Integrand, perm: &[usize], shift: &[i32]) -> Vec<Rat> {
    let mut exps = i.exponents();
    for (s, &j) in perm.iter().enumerate() {
        exps[j] = &exps[j] + Rat::from(shift[s]);
    }
    exps
}

/// Backward reading: finds the integrand whose forward step lands on `cur`.
fn backward_instance(rule: &Rule, cur: &Integrand, perm: &[usize]) -> Result<Option<RelationInstance>> {
    let kernel = Integrand {
        cofactor: Poly::one(),
        transc: cur
            .transc
            .as_ref()
            .map(|t| t.with_kind(rule.transc_kind().expect("kind checked"))),
        factors: cur
            .factors
            .iter()
            .zip(moved(cur, perm, &rule.effective_shift(SolveFor::Two)))
            .map(|(f, e)| PowerFactor::new(f.base.clone(), e))
            .collect(),
    };
    let basis = rule.cofactor_degree().unwrap_or(0);
    let mut columns = Vec::new();
    for k in 0..=basis {
        let trial = Integrand {
            cofactor: Poly::monomial(Rat::one(), k),
            ..kernel.clone()
        };
        columns.push(rule.instantiate_with(&trial, perm)?.integrand2.cofactor);
    }
    let rows = columns
        .iter()
        .chain([&cur.cofactor])
        .filter_map(Poly::degree)
        .max()
        .unwrap_or(0)
        + 1;
    let matrix: Vec<Vec<Rat>> = (0..rows)
        .map(|r| columns.iter().map(|c| c.coeff(r)).collect())
        .collect();
    let rhs: Vec<Rat> = (0..rows).map(|r| cur.cofactor.coeff(r)).collect();
    let Some(alpha) = solve_linear(&matrix, &rhs) else {
        return Ok(None);
    };
    let cofactor = Poly::new(alpha);
    if cofactor.is_zero() {
        return Ok(None);
    }
    let inst = rule.instantiate_with(&Integrand { cofactor, ..kernel }, perm)?;
    Ok((inst.integrand2.cofactor == cur.cofactor).then_some(inst))
}

/// The instance whose `dir` integral is `cur` (factor `perm[s]` in slot `s`).
/// `None` when no cofactor of the rule's template degree reaches `cur`.
pub fn instance_for(rule: &Rule, cur: &Integrand, perm: &[usize], dir: SolveFor) -> Result<Option<RelationInstance>> {
    match dir {
        SolveFor::One => rule.instantiate_with(cur, perm).map(Some),
        SolveFor::Two => backward_instance(rule, cur, perm),
    }
}

enum Outcome {
    Step(Step),
    Rewrite(Rewrite),
    Stuck(String),
}

fn trig_note(i: &Integrand) -> &'static str {
    match i.transc.as_ref().map(|t| t.kind) {
        Some(TranscKind::Cos | TranscKind::Sin) => {
            "; trigonometric factors outside the cos/sin relation pairs need a complex-exponential split"
        }
        _ => "",
    }
}

fn exact_step(rule: &str, current: &Integrand, alg: Vec<AlgTerm>) -> Step {
    let alg = alg.iter().map(AlgTerm::canonical).filter(|a| !a.is_zero()).collect();
    Step {
        rule: rule.into(),
        solve_for: SolveFor::One,
        scale: Rat::zero(),
        alg,
        current: current.clone(),
        next: None,
    }
}

/// `sum_k sign^k * p^(step*k) / b^(step*k + 1)` over all nonvanishing derivatives.
fn alternating_series(p: &Poly, b: &Rat, step: usize, sign: i64) -> Poly {
    let mut out = Poly::zero();
    let mut d = p.clone();
    let mut c = b.recip();
    let ratio = Rat::from(sign) / b.pow(step as i32);
    while !d.is_zero() {
        out = &out + &d.scale(&c);
        for _ in 0..step {
            d = d.derivative();
        }
        c = &c * &ratio;
    }
    out
}

/// Closed forms for shapes left behind when factors drop out: a bare
/// polynomial, a polynomial times `exp`, `cos` or `sin`, and a constant times
/// one linear power.
fn elementary(cur: &Integrand) -> Option<Step> {
    let p = &cur.cofactor;
    let term = |multiplier: Poly, transc| AlgTerm {
        weight: Rat::one(),
        multiplier,
        factors: Vec::new(),
        transc,
    };
    if cur.factors.is_empty() {
        let Some(t) = &cur.transc else {
            let coeffs = p
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| c.clone() / Rat::from(k as i64 + 1));
            let anti = Poly::new(std::iter::once(Rat::zero()).chain(coeffs).collect());
            return Some(exact_step("exact.polynomial", cur, vec![term(anti, None)]));
        };
        let b = t.arg.coeff(1);
        let alg = match t.kind {
            TranscKind::Exp => vec![term(alternating_series(p, &b, 1, -1), Some(t.clone()))],
            TranscKind::Cos => {
                let s = alternating_series(p, &b, 2, -1);
                let c = s.derivative().scale(&b.recip());
                vec![term(s, Some(t.with_kind(TranscKind::Sin))), term(c, Some(t.clone()))]
            }
            TranscKind::Sin => {
                let c = -alternating_series(p, &b, 2, -1);
                let s = -c.derivative().scale(&b.recip());
                vec![
                    term(s, Some(t.with_kind(TranscKind::Sin))),
                    term(c, Some(t.with_kind(TranscKind::Cos))),
                ]
            }
        };
        return Some(exact_step(&format!("exact.{}", t.kind.name()), cur, alg));
    }
    if let ([f], None, Some(k)) = (cur.factors.as_slice(), &cur.transc, p.as_constant()) {
        let e1 = &f.exponent + Rat::one();
        if f.degree() == 1 && !e1.is_zero() {
            let g = AlgTerm {
                weight: k / (&f.base.coeff(1) * &e1),
                multiplier: Poly::one(),
                factors: vec![PowerFactor::new(f.base.clone(), e1)],
                transc: None,
            };
            return Some(exact_step("exact.linear", cur, vec![g]));
        }
    }
    None
}

/// `C * P^n` with `C` too large for the form: `C = u*P + a*P' + w` splits
/// into `u*P^(n+1)` and `w*P^n`, and `a*P'*P^n` integrates exactly.
fn split_single(cur: &Integrand) -> Result<Option<Outcome>> {
    let ([f], None) = (cur.factors.as_slice(), &cur.transc) else {
        return Ok(None);
    };
    let d = f.degree();
    let n1 = &f.exponent + Rat::one();
    if d < 2 || n1.is_zero() {
        return Ok(None);
    }
    let (u, v) = cur.cofactor.divrem(&f.base)?;
    let dp = f.base.derivative();
    let alpha = if v.degree() == Some(d - 1) {
        v.coeff(d - 1) / dp.coeff(d - 1)
    } else {
        Rat::zero()
    };
    let w = &v - &dp.scale(&alpha);
    let tag = classify(&Integrand::new(Poly::one(), None, cur.factors.clone()))?;
    let fits = |q: &Poly| q.degree().unwrap_or(0) <= crate::integrand::max_cofactor_degree(tag);
    if !fits(&u) || !fits(&w) || (u.is_zero() && alpha.is_zero()) {
        return Ok(None);
    }
    let mut parts = Vec::new();
    let mut alg = Vec::new();
    if !alpha.is_zero() {
        alg.push(AlgTerm {
            weight: &alpha / &n1,
            multiplier: Poly::one(),
            factors: vec![PowerFactor::new(f.base.clone(), n1.clone())],
            transc: None,
        });
    }
    if !u.is_zero() {
        parts.push((
            Rat::one(),
            normalized(&Integrand::new(
                u,
                None,
                vec![PowerFactor::new(f.base.clone(), n1.clone())],
            ))?,
        ));
    }
    if !w.is_zero() {
        parts.push((
            Rat::one(),
            Integrand {
                cofactor: w,
                ..cur.clone()
            },
        ));
    }
    Ok(Some(Outcome::Rewrite(Rewrite {
        kind: "split".into(),
        current: cur.clone(),
        alg,
        parts,
    })))
}

fn has_ghost(i: &Integrand) -> bool {
    i.factors.iter().any(|f| f.exponent.is_zero())
}

/// A zero-exponent factor is kept so the larger form's cofactor templates
/// still apply, unless dropping it leaves an elementary integrand.
fn settle(next: Integrand) -> Result<Integrand> {
    if !has_ghost(&next) {
        return Ok(next);
    }
    let dropped = normalized(&next)?;
    if elementary(&dropped).is_some() {
        Ok(dropped)
    } else {
        Ok(next)
    }
}

type Waiting<'a> = &'a dyn Fn(&Integrand) -> bool;

fn best_step(cat: &Catalog, cur: &Integrand, window: &Window, waiting: Waiting) -> Result<Outcome> {
    if has_ghost(cur) {
        let outcome = best_kept(cat, cur, window, waiting);
        if let Ok(Outcome::Step(_)) = outcome {
            return outcome;
        }
        return best_kept(cat, &normalized(cur)?, window, waiting);
    }
    best_kept(cat, cur, window, waiting)
}

/// Kernel a candidate lands on, before any zero-exponent factor is dropped.
fn landing(cur: &Integrand, perm: &[usize], rule: &Rule, dir: SolveFor) -> Integrand {
    let kind = match dir {
        SolveFor::One => rule.partner_kind(),
        SolveFor::Two => rule.transc_kind(),
    };
    Integrand {
        cofactor: Poly::one(),
        transc: cur.transc.as_ref().zip(kind).map(|(t, k)| t.with_kind(k)),
        factors: cur
            .factors
            .iter()
            .zip(moved(cur, perm, &rule.effective_shift(dir)))
            .map(|(f, e)| PowerFactor::new(f.base.clone(), e))
            .collect(),
    }
}

/// Candidates are ranked by the potential they reach, then by whether they
/// merge into a pending kernel, then by catalog order, permutation and direction.
fn best_kept(cat: &Catalog, cur: &Integrand, window: &Window, waiting: Waiting) -> Result<Outcome> {
    if let Some(step) = elementary(cur) {
        return Ok(Outcome::Step(step));
    }
    let phi = window.potential(cur);
    let tag = match classify(cur) {
        Err(e @ Error::CofactorTooLarge { .. }) => {
            return Ok(split_single(cur)?.unwrap_or(Outcome::Stuck(e.to_string())))
        }
        other => other?,
    };
    let form = cat
        .form(tag)
        .ok_or_else(|| Error::UnsupportedForm(format!("no catalog form {tag}")))?;
    let kind = cur.transc.as_ref().map(|t| t.kind);
    let mut candidates = Vec::new();
    let mut any_case = false;
    let mut degenerate = Vec::new();
    for perm in form.permutations(cur) {
        let values = form.guard_values(cur, &perm)?;
        let cases = form.matching_cases(&values);
        if cases.is_empty() {
            degenerate = values
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(n, _)| n.clone())
                .collect();
            continue;
        }
        any_case = true;
        for (order, rule) in cat.rules().iter().enumerate() {
            if rule.form_tag() != tag || !cases.iter().any(|c| c.label == rule.case()) {
                continue;
            }
            for dir in [SolveFor::One, SolveFor::Two] {
                let lands_on = match dir {
                    SolveFor::One => rule.transc_kind(),
                    SolveFor::Two => rule.partner_kind(),
                };
                if lands_on != kind {
                    continue;
                }
                if dir == SolveFor::One && cur.cofactor_degree() > rule.cofactor_degree().unwrap_or(0) {
                    continue;
                }
                let next_phi = window.potential_of(&moved(cur, &perm, &rule.effective_shift(dir)));
                if next_phi < phi {
                    let merges = waiting(&landing(cur, &perm, rule, dir));
                    candidates.push(Candidate {
                        phi: next_phi,
                        merges,
                        order,
                        perm: perm.clone(),
                        dir,
                        rule,
                    });
                }
            }
        }
    }
    if !any_case {
        return Err(Error::UnsupportedDegeneracy(format!(
            "{tag} with vanishing {}",
            degenerate.join(", ")
        )));
    }
    candidates
        .sort_by(|a, b| (a.phi, !a.merges, a.order, &a.perm, a.dir).cmp(&(b.phi, !b.merges, b.order, &b.perm, b.dir)));
    for c in candidates {
        let step = match instance_for(c.rule, cur, &c.perm, c.dir) {
            Ok(Some(inst)) => step_from(&inst, c.dir, normalize_keeping_zero).and_then(|mut s| {
                s.next = s.next.map(settle).transpose()?;
                Ok(s)
            }),
            Ok(None) => continue,
            Err(e) => Err(e),
        };
        match step {
            Ok(s) => return Ok(Outcome::Step(s)),
            Err(
                Error::SolvedCoefficientZero { .. }
                | Error::ExceptionalParameters(_)
                | Error::GuardViolated { .. }
                | Error::CofactorTooLarge { .. },
            ) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(Outcome::Stuck(format!(
        "no relation lowers the potential of {} (exponents {}){}",
        print_expr(cur),
        cur.exponents()
            .iter()
            .map(Rat::to_string)
            .collect::<Vec<_>>()
            .join(", "),
        trig_note(cur)
    )))
}

#[derive(Default)]
struct Collector {
    algebraic: Vec<AlgTerm>,
    residuals: BTreeMap<Integrand, Poly>,
    obstructions: Vec<String>,
}

impl Collector {
    fn add_residual(&mut self, i: Integrand) {
        let slot = self.residuals.entry(i.kernel()).or_insert_with(Poly::zero);
        *slot = &*slot + &i.cofactor;
    }

    fn add_alg(&mut self, terms: &[AlgTerm], scale: &Rat) {
        for t in terms {
            let t = t.scaled(scale);
            let weighted = t.multiplier.scale(&t.weight);
            match self
                .algebraic
                .iter_mut()
                .find(|a| a.factors == t.factors && a.transc == t.transc)
            {
                Some(a) => {
                    a.multiplier = &a.multiplier.scale(&a.weight) + &weighted;
                    a.weight = Rat::one();
                }
                None => self.algebraic.push(AlgTerm {
                    weight: Rat::one(),
                    multiplier: weighted,
                    ..t
                }),
            }
        }
    }

    fn finish(self, input: Integrand, trace: Vec<Step>, rewrites: Vec<Rewrite>) -> ReductionResult {
        let algebraic = self
            .algebraic
            .iter()
            .map(AlgTerm::canonical)
            .filter(|a| !a.is_zero())
            .collect();
        let residuals = self
            .residuals
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| {
                let (c, prim) = p.primitive_part();
                (c, Integrand { cofactor: prim, ..k })
            })
            .collect();
        let status = if self.obstructions.is_empty() {
            Status::Terminal
        } else {
            Status::Obstructed(self.obstructions.join("; "))
        };
        ReductionResult {
            input,
            algebraic,
            residuals,
            trace,
            rewrites,
            status,
        }
    }
}

/// Reduces with the builtin catalog.
pub fn reduce(i: &Integrand, opts: &ReduceOptions) -> Result<ReductionResult> {
    reduce_with(Catalog::builtin(), i, opts)
}

/// Worklist reduction: pending integrands are keyed by their kernel so equal
/// kernels merge, and the highest potential is processed first.
pub fn reduce_with(cat: &Catalog, i: &Integrand, opts: &ReduceOptions) -> Result<ReductionResult> {
    let input = normalize(i)?;
    let window = &opts.window;
    if window.potential(&input) == 0 {
        let mut c = Collector::default();
        c.residuals.insert(input.kernel(), input.cofactor.clone());
        return Ok(c.finish(input, Vec::new(), Vec::new()));
    }
    classify(&input)?;

    let mut pending: BTreeMap<(Reverse<u64>, Integrand), Poly> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<(Reverse<u64>, Integrand), Poly>, it: Integrand, c: &Rat| {
        let key = (Reverse(window.potential(&it)), it.kernel());
        let add = it.cofactor.scale(c);
        let slot = pending.entry(key).or_insert_with(Poly::zero);
        *slot = &*slot + &add;
    };
    push(&mut pending, input.clone(), &Rat::one());

    let mut c = Collector::default();
    let mut trace = Vec::new();
    let mut rewrites = Vec::new();
    while let Some(((Reverse(phi), kernel), cofactor)) = pending.pop_first() {
        if cofactor.is_zero() {
            continue;
        }
        let cur = Integrand { cofactor, ..kernel };
        if phi == 0 {
            c.add_residual(normalized(&cur)?);
            continue;
        }
        let waiting = |k: &Integrand| pending.contains_key(&(Reverse(window.potential(k)), k.clone()));
        let outcome = match best_step(cat, &cur, window, &waiting) {
            Ok(o) => o,
            Err(e @ (Error::UnsupportedDegeneracy(_) | Error::UnsupportedForm(_)))
                if trace.is_empty() && rewrites.is_empty() =>
            {
                return Err(e)
            }
            Err(e) => Outcome::Stuck(format!("{}: {e}", e.code())),
        };
        match outcome {
            Outcome::Step(step) => {
                if trace.len() == opts.max_steps {
                    return Err(Error::MaxStepsExceeded(opts.max_steps));
                }
                c.add_alg(&step.alg, &Rat::one());
                if let Some(next) = &step.next {
                    push(&mut pending, next.clone(), &step.scale);
                }
                trace.push(step);
            }
            Outcome::Rewrite(rw) => {
                if rewrites.len() == opts.max_steps {
                    return Err(Error::MaxStepsExceeded(opts.max_steps));
                }
                c.add_alg(&rw.alg, &Rat::one());
                for (k, part) in &rw.parts {
                    push(&mut pending, part.clone(), k);
                }
                rewrites.push(rw);
            }
            Outcome::Stuck(reason) => {
                let flat = normalized(&cur)?;
                match absorb_cheapest(&flat, window) {
                    Ok(parts) if parts.len() > 1 || parts[0].1 != flat => {
                        if rewrites.len() == opts.max_steps {
                            return Err(Error::MaxStepsExceeded(opts.max_steps));
                        }
                        for (k, part) in &parts {
                            push(&mut pending, part.clone(), k);
                        }
                        rewrites.push(Rewrite {
                            kind: "absorb".into(),
                            current: cur,
                            alg: Vec::new(),
                            parts,
                        });
                    }
                    _ => {
                        c.obstructions.push(reason);
                        c.add_residual(flat);
                    }
                }
            }
        }
    }
    Ok(c.finish(input, trace, rewrites))
}

/// Reduces many integrands, in order, optionally in parallel.
pub fn reduce_batch(items: &[Integrand], opts: &ReduceOptions, exec: Execution) -> Vec<Result<ReductionResult>> {
    par::map(items, exec, |i| reduce(i, opts))
}
