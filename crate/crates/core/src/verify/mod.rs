//! Exact differentiation checks for relation instances, reduction results and
//! the whole catalog.

mod selftest;

use std::collections::BTreeMap;

use crate::arith::{Poly, Rat};
use crate::catalog::{AlgTerm, RelationInstance};
use crate::engine::{ReductionResult, Rewrite, Step};
use crate::integrand::{Integrand, PowerFactor, TranscFactor, TranscKind};

pub use selftest::{
    build_sample, random_integrand, rule_rng, sample_instance, selftest_catalog, selftest_rules, RuleReport, Sample,
};

/// `d/dx` of an algebraic term as a sum of integrand-shaped terms that all
/// carry the power product `prod(p_i ^ (e_i - 1))`.
pub fn differentiate_algterm(g: &AlgTerm) -> Vec<Integrand> {
    let m = g.multiplier.scale(&g.weight);
    let bases: Vec<&Poly> = g.factors.iter().map(|f| &f.base).collect();
    let all: Poly = bases.iter().fold(Poly::one(), |acc, b| &acc * *b);
    let mut main = &m.derivative() * &all;
    for (i, f) in g.factors.iter().enumerate() {
        let others = bases
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(Poly::one(), |acc, (_, b)| &acc * *b);
        main = &main + &(&(&m * &f.base.derivative()) * &others).scale(&f.exponent);
    }
    let lowered: Vec<PowerFactor> = g
        .factors
        .iter()
        .map(|f| PowerFactor::new(f.base.clone(), &f.exponent - Rat::one()))
        .collect();
    let mut out = vec![Integrand::new(main, g.transc.clone(), lowered.clone())];
    if let Some(t) = &g.transc {
        let b = t.arg.coeff(1);
        let (kind, c) = match t.kind {
            TranscKind::Exp => (TranscKind::Exp, b),
            TranscKind::Cos => (TranscKind::Sin, -b),
            TranscKind::Sin => (TranscKind::Cos, b),
        };
        out.push(Integrand::new((&m * &all).scale(&c), Some(t.with_kind(kind)), lowered));
    }
    out.retain(|t| !t.cofactor.is_zero());
    out
}

/// One independent component of a combined expression: `numerator` times the
/// common power product `context` and transcendental factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualPart {
    pub context: Vec<PowerFactor>,
    pub transc: Option<TranscFactor>,
    pub numerator: Poly,
}

/// Sum of terms split into components that vanish independently: one per
/// transcendental factor and per class of exponents modulo integers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Residual {
    pub parts: Vec<ResidualPart>,
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.numerator.is_zero())
    }

    /// Numerator of the first nonvanishing component, or zero.
    pub fn numerator(&self) -> Poly {
        self.parts
            .iter()
            .find(|p| !p.numerator.is_zero())
            .map(|p| p.numerator.clone())
            .unwrap_or_default()
    }
}

fn frac(e: &Rat) -> Rat {
    e - e.floor()
}

/// Combines a signed sum of integrand-shaped terms over common denominators.
pub fn combine(terms: &[Integrand]) -> Residual {
    let mut bases: Vec<Poly> = Vec::new();
    for t in terms {
        for f in &t.factors {
            if !bases.contains(&f.base) {
                bases.push(f.base.clone());
            }
        }
    }
    let exps = |t: &Integrand| -> Vec<Rat> {
        bases
            .iter()
            .map(|b| {
                t.factors
                    .iter()
                    .filter(|f| &f.base == b)
                    .map(|f| f.exponent.clone())
                    .sum()
            })
            .collect()
    };
    type Key = (Option<TranscFactor>, Vec<Rat>);
    let mut classes: BTreeMap<Key, Vec<(Vec<Rat>, &Poly)>> = BTreeMap::new();
    for t in terms {
        if t.cofactor.is_zero() {
            continue;
        }
        let e = exps(t);
        let key = (t.transc.clone(), e.iter().map(frac).collect());
        classes.entry(key).or_default().push((e, &t.cofactor));
    }
    let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one()]; bases.len()];
    let mut power = |k: usize, d: usize| -> Poly {
        while powers[k].len() <= d {
            let next = &powers[k][powers[k].len() - 1] * &bases[k];
            powers[k].push(next);
        }
        powers[k][d].clone()
    };
    let mut parts = Vec::new();
    for ((transc, _), members) in classes {
        let low: Vec<Rat> = (0..bases.len())
            .map(|k| members.iter().map(|(e, _)| e[k].clone()).min().expect("nonempty"))
            .collect();
        let mut numerator = Poly::zero();
        for (e, c) in &members {
            let mut t = (*c).clone();
            for k in 0..bases.len() {
                let d = (&e[k] - &low[k]).to_i64().expect("integral within a class");
                if d > 0 {
                    t = &t * &power(k, d as usize);
                }
            }
            numerator = &numerator + &t;
        }
        let context = bases
            .iter()
            .zip(&low)
            .filter(|(_, e)| !e.is_zero())
            .map(|(b, e)| PowerFactor::new(b.clone(), e.clone()))
            .collect();
        parts.push(ResidualPart {
            context,
            transc,
            numerator: numerator.primitive_part().1,
        });
    }
    Residual { parts }
}

/// `k1 * f1 + f2 + d/dx(alg)`.
pub fn relation_residual(inst: &RelationInstance) -> Residual {
    let mut terms = vec![inst.integrand1.scaled(&inst.k1), inst.integrand2.clone()];
    for g in &inst.alg {
        terms.extend(differentiate_algterm(g));
    }
    combine(&terms)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    pub residual: Residual,
}

/// Checks `d/dx(sum algebraic) + sum coefficient * residual - original = 0`.
pub fn verify_result(original: &Integrand, r: &ReductionResult) -> VerifyReport {
    let mut terms = vec![original.scaled(&Rat::int(-1))];
    for g in &r.algebraic {
        terms.extend(differentiate_algterm(g));
    }
    for (c, i) in &r.residuals {
        terms.push(i.scaled(c));
    }
    let residual = combine(&terms);
    VerifyReport {
        ok: residual.is_zero(),
        residual,
    }
}

/// Checks `d/dx(sum alg) + scale * next - current = 0` for one step.
pub fn verify_step(step: &Step) -> VerifyReport {
    let mut terms = vec![step.current.scaled(&Rat::int(-1))];
    for g in &step.alg {
        terms.extend(differentiate_algterm(g));
    }
    if let Some(n) = &step.next {
        terms.push(n.scaled(&step.scale));
    }
    let residual = combine(&terms);
    VerifyReport {
        ok: residual.is_zero(),
        residual,
    }
}

/// Checks `d/dx(sum alg) + sum c * part - current = 0` for one rewrite.
pub fn verify_rewrite(rw: &Rewrite) -> VerifyReport {
    let mut terms = vec![rw.current.scaled(&Rat::int(-1))];
    for g in &rw.alg {
        terms.extend(differentiate_algterm(g));
    }
    for (c, i) in &rw.parts {
        terms.push(i.scaled(c));
    }
    let residual = combine(&terms);
    VerifyReport {
        ok: residual.is_zero(),
        residual,
    }
}
