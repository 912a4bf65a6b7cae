//! Randomized catalog check: every rule is instantiated on integrands built
//! from random rational roots in its case's confluence pattern.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::relation_residual;
use crate::arith::{Poly, Rat};
use crate::catalog::{Catalog, RelationInstance, Rule};
use crate::error::{Error, Result};
use crate::frontend::print_expr;
use crate::integrand::{
    classify, degeneracy_profile, max_cofactor_degree, normalize, FormTag, Integrand, PowerFactor, TranscFactor,
    TranscKind,
};
use crate::par::{self, Execution};

const ATTEMPTS: usize = 400;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleReport {
    pub id: String,
    pub case: String,
    pub samples: usize,
    pub passed: usize,
    pub failure: Option<String>,
}

impl RuleReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none() && self.passed == self.samples
    }
}

/// A constructed integrand for one rule, in slot order.
#[derive(Debug, Clone)]
pub struct Sample {
    pub integrand: Integrand,
}

fn small_rat(rng: &mut ChaCha8Rng, span: i64, den: i64) -> Rat {
    Rat::new(rng.random_range(-span..=span), rng.random_range(1..=den))
}

fn nonzero_rat(rng: &mut ChaCha8Rng, span: i64, den: i64) -> Rat {
    loop {
        let r = small_rat(rng, span, den);
        if !r.is_zero() {
            return r;
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> Poly {
    let mut cs: Vec<Rat> = (0..degree).map(|_| small_rat(rng, 7, 3)).collect();
    cs.push(nonzero_rat(rng, 5, 3));
    Poly::new(cs)
}

/// Builds a base from a pattern like `r0 r0 q`, or a free base for `*`.
fn pattern_base(rng: &mut ChaCha8Rng, tokens: &[&str], degree: usize, roots: &[Rat]) -> Result<Poly, String> {
    if tokens == ["*"] {
        return Ok(random_poly(rng, degree));
    }
    let mut p = Poly::constant(nonzero_rat(rng, 4, 3));
    for t in tokens {
        let factor = match *t {
            "q" => random_poly(rng, 2),
            r if r.starts_with('r') => {
                let k: usize = r[1..].parse().map_err(|_| format!("bad pattern token {r}"))?;
                let root = roots.get(k).ok_or_else(|| format!("root index {k} out of range"))?;
                Poly::new(vec![-root.clone(), Rat::one()])
            }
            other => return Err(format!("bad pattern token {other}")),
        };
        p = &p * &factor;
    }
    if p.degree() != Some(degree) {
        return Err(format!("pattern {tokens:?} does not have degree {degree}"));
    }
    Ok(p)
}

/// Random normalized integrand of form `tag` with the given exponents in slot
/// order, a random cofactor up to the form's limit and, for transcendental
/// forms, a random `exp`, `cos` or `sin` factor. Bases are generic with
/// overwhelming probability; `None` if they merge or match no case.
pub fn random_integrand(tag: FormTag, rng: &mut ChaCha8Rng, exponents: &[Rat]) -> Option<Integrand> {
    let degrees = tag.slot_degrees();
    assert_eq!(degrees.len(), exponents.len(), "one exponent per slot");
    let factors = degrees
        .iter()
        .zip(exponents)
        .map(|(&d, e)| PowerFactor::new(random_poly(rng, d), e.clone()))
        .collect();
    let transc = tag.has_transc().then(|| {
        let kind = [TranscKind::Exp, TranscKind::Cos, TranscKind::Sin][rng.random_range(0..3)];
        TranscFactor::new(kind, Poly::new(vec![small_rat(rng, 5, 3), nonzero_rat(rng, 5, 3)]))
    });
    let k = rng.random_range(0..=max_cofactor_degree(tag));
    let mut cs: Vec<Rat> = (0..k).map(|_| small_rat(rng, 6, 2)).collect();
    cs.push(nonzero_rat(rng, 6, 2));
    let cofactor = Poly::new(cs);
    let i = normalize(&Integrand::new(cofactor, transc, factors)).ok()?;
    (classify(&i).ok() == Some(tag) && degeneracy_profile(&i, tag).is_ok()).then_some(i)
}

/// Random integrand honoring the rule's case pattern; not yet checked against
/// the case conditions.
pub fn build_sample(rule: &Rule, rng: &mut ChaCha8Rng) -> Result<Sample, String> {
    let form = rule.form();
    let case = form.case(rule.case()).ok_or("unknown case")?;
    let mut roots: Vec<Rat> = Vec::new();
    while roots.len() < 4 {
        let r = small_rat(rng, 6, 4);
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    let degrees = form.tag().slot_degrees();
    let groups: Vec<Vec<&str>> = case
        .pattern
        .split('|')
        .map(|g| g.split_whitespace().collect())
        .collect();
    let groups = if groups.len() == 1 && groups[0] == ["*"] {
        vec![vec!["*"]; degrees.len()]
    } else {
        groups
    };
    if groups.len() != degrees.len() {
        return Err(format!(
            "pattern {:?} does not match {} slots",
            case.pattern,
            degrees.len()
        ));
    }
    let mut factors = Vec::new();
    for (g, &d) in groups.iter().zip(degrees) {
        let base = pattern_base(rng, g, d, &roots)?;
        let exponent = loop {
            let e = Rat::new(rng.random_range(-9i64..=9), rng.random_range(1i64..=4));
            if !e.is_zero() {
                break e;
            }
        };
        factors.push(PowerFactor::new(base, exponent));
    }
    let transc = rule
        .transc_kind()
        .map(|k| TranscFactor::new(k, Poly::new(vec![small_rat(rng, 5, 3), nonzero_rat(rng, 5, 3)])));
    let cofactor = match rule.cofactor_degree() {
        Some(d) => loop {
            let p = Poly::new((0..=d).map(|_| small_rat(rng, 6, 2)).collect());
            if !p.is_zero() {
                break p;
            }
        },
        None => Poly::constant(nonzero_rat(rng, 5, 2)),
    };
    Ok(Sample {
        integrand: Integrand::new(cofactor, transc, factors),
    })
}

/// Draws samples until one lies in the rule's case and gives a relation with
/// both integrals present. `Ok(None)` after the attempt budget is spent.
pub fn sample_instance(rule: &Rule, rng: &mut ChaCha8Rng) -> Result<Option<RelationInstance>, String> {
    let perm: Vec<usize> = (0..rule.form().slot_count()).collect();
    for _ in 0..ATTEMPTS {
        let sample = build_sample(rule, rng)?;
        let i = &sample.integrand;
        let values = match rule.form().guard_values(i, &perm) {
            Ok(v) => v,
            Err(Error::ExceptionalParameters(_)) => continue,
            Err(e) => return Err(e.to_string()),
        };
        if !rule
            .form()
            .matching_cases(&values)
            .iter()
            .any(|c| c.label == rule.case())
        {
            continue;
        }
        let inst = match rule.instantiate_with(i, &perm) {
            Ok(inst) => inst,
            Err(Error::ExceptionalParameters(_)) => continue,
            Err(e) => return Err(format!("{e} at {}", print_expr(i))),
        };
        if inst.k1.is_zero() || inst.integrand2.cofactor.is_zero() {
            continue;
        }
        return Ok(Some(inst));
    }
    Ok(None)
}

/// Deterministic generator for rule `index` of a catalog run.
pub fn rule_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index as u64)
}

fn check_rule(rule: &Rule, index: usize, samples: usize, seed: u64) -> RuleReport {
    let mut rng = rule_rng(seed, index);
    let mut report = RuleReport {
        id: rule.id().to_string(),
        case: rule.case().to_string(),
        samples,
        passed: 0,
        failure: None,
    };
    for _ in 0..samples {
        match sample_instance(rule, &mut rng) {
            Ok(Some(inst)) if relation_residual(&inst).is_zero() => report.passed += 1,
            Ok(Some(inst)) => {
                report.failure = Some(format!("nonzero residual at {}", print_expr(&inst.integrand1)));
                break;
            }
            Ok(None) => {
                report.failure = Some("no valid instantiation found".into());
                break;
            }
            Err(e) => {
                report.failure = Some(e);
                break;
            }
        }
    }
    report
}

/// Checks the selected rules (all when `ids` is `None`).
pub fn selftest_rules(
    cat: &Catalog,
    ids: Option<&[String]>,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<RuleReport>> {
    let mut chosen: Vec<(usize, &Rule)> = Vec::new();
    match ids {
        None => chosen.extend(cat.rules().iter().enumerate()),
        Some(ids) => {
            for id in ids {
                let pos = cat
                    .rules()
                    .iter()
                    .position(|r| r.id() == id)
                    .ok_or_else(|| Error::NoRuleForCase(format!("rule id {id}")))?;
                chosen.push((pos, &cat.rules()[pos]));
            }
        }
    }
    Ok(par::map(&chosen, exec, |(k, r)| {
        check_rule(r, *k, samples.max(1), seed)
    }))
}

/// Runs every builtin rule; the first defect is returned as an error.
pub fn selftest_catalog(samples: usize, seed: u64) -> Result<Vec<RuleReport>> {
    let reports = selftest_rules(Catalog::builtin(), None, samples, seed, Execution::default())?;
    if let Some(bad) = reports.iter().find(|r| !r.ok()) {
        return Err(Error::CatalogDefect {
            rule: bad.id.clone(),
            instantiation: bad.failure.clone().unwrap_or_default(),
        });
    }
    Ok(reports)
}
