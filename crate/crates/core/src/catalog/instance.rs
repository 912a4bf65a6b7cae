use std::collections::BTreeMap;

use super::template::{Env, FunSum, Mono};
use super::Rule;
use crate::arith::{Poly, Rat};
use crate::error::{Error, Result};
use crate::integrand::{Integrand, PowerFactor, TranscFactor, TranscKind};

/// `weight * multiplier(x) * prod(base_i ^ exponent_i) * transc`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlgTerm {
    pub weight: Rat,
    pub multiplier: Poly,
    pub factors: Vec<PowerFactor>,
    pub transc: Option<TranscFactor>,
}

impl AlgTerm {
    pub fn scaled(&self, c: &Rat) -> AlgTerm {
        AlgTerm {
            weight: &self.weight * c,
            ..self.clone()
        }
    }

    /// Weight folded so that the multiplier is a primitive integer polynomial
    /// with positive lowest coefficient.
    pub fn canonical(&self) -> AlgTerm {
        let (c, p) = self.multiplier.primitive_part();
        AlgTerm {
            weight: &self.weight * &c,
            multiplier: p,
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.weight.is_zero() || self.multiplier.is_zero()
    }
}

/// A relation `k1 * INT(integrand1) + INT(integrand2) + sum(alg) = 0` with all
/// symbols replaced by values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationInstance {
    pub rule: String,
    pub k1: Rat,
    pub integrand1: Integrand,
    /// Carries the folded partner coefficient in its cofactor, which may vanish.
    pub integrand2: Integrand,
    pub alg: Vec<AlgTerm>,
    /// Factor index placed in each template slot.
    pub perm: Vec<usize>,
}

fn single_term(f: &FunSum, what: &str, rule: &str) -> Result<Option<(Mono, Poly)>> {
    match f.len() {
        0 => Ok(None),
        1 => Ok(f.iter().next().map(|(m, p)| (m.clone(), p.clone()))),
        _ => Err(Error::Catalog(format!(
            "rule {rule}: {what} integrand is not a single power product"
        ))),
    }
}

impl Rule {
    /// Instantiates the relation with factor `perm[s]` of `i` in slot `s`.
    pub fn instantiate_with(&self, i: &Integrand, perm: &[usize]) -> Result<RelationInstance> {
        let id = self.id();
        let form = &*self.form;
        if i.transc.as_ref().map(|t| t.kind) != self.kind {
            return Err(Error::UnsupportedForm(format!(
                "rule {id} needs transcendental factor {:?}",
                self.kind.map(TranscKind::name)
            )));
        }
        let mut inputs = form.base_inputs(i, perm)?;
        let k = i.cofactor_degree();
        let scale = match self.cofactor_degree {
            Some(d) if k <= d => {
                for (n, sym) in ["A", "B", "C"].iter().enumerate() {
                    inputs.insert(sym.to_string(), i.cofactor.coeff(n));
                }
                Rat::one()
            }
            None if k == 0 => i.cofactor.coeff(0),
            d => {
                return Err(Error::CofactorTooLarge {
                    form: format!("{} (rule {id})", form.tag()),
                    degree: k,
                    max: d.unwrap_or(0),
                })
            }
        };
        if scale.is_zero() || i.cofactor.is_zero() {
            return Err(Error::UnsupportedForm("zero integrand".into()));
        }
        let env = Env::new(form.slots.len(), inputs, vec![&form.defs, &self.locals]);
        for g in self.vanishing() {
            if !env.scalar(g)?.is_zero() {
                return Err(Error::GuardViolated {
                    rule: id.into(),
                    guard: g.clone(),
                    detail: "must vanish".into(),
                });
            }
        }
        for g in self.guards() {
            if env.scalar(g)?.is_zero() {
                return Err(Error::GuardViolated {
                    rule: id.into(),
                    guard: g.clone(),
                    detail: "vanishes".into(),
                });
            }
        }
        let rel = env.eval_compound(&self.relation)?;
        let [(s1, c1), (s2, c2)] = <[(Rat, FunSum); 2]>::try_from(rel.ints)
            .map_err(|_| Error::Catalog(format!("rule {id}: relation must contain exactly two integrals")))?;

        let cof1 = if self.cofactor_degree.is_some() {
            i.cofactor.clone()
        } else {
            Poly::one()
        };
        let (m1, p1) = single_term(&c1, "first", id)?
            .ok_or_else(|| Error::Catalog(format!("rule {id}: first integrand vanishes")))?;
        if m1.shift.iter().any(|&s| s != 0) || m1.transc != self.kind {
            return Err(Error::Catalog(format!(
                "rule {id}: first integral is not the current integrand"
            )));
        }
        let lambda = p1.leading().expect("nonzero") / cof1.leading().expect("nonzero");
        if cof1.scale(&lambda) != p1 {
            return Err(Error::Catalog(format!("rule {id}: first integrand cofactor mismatch")));
        }
        let k1 = s1 * lambda;

        let (kind2, cof2) = match single_term(&c2, "partner", id)? {
            Some((m2, p2)) => {
                if m2.shift != self.record.shift {
                    return Err(Error::Catalog(format!(
                        "rule {id}: partner shift {:?} disagrees with recorded {:?}",
                        m2.shift, self.record.shift
                    )));
                }
                (m2.transc, p2.scale(&(&s2 * &scale)))
            }
            None => (self.kind, Poly::zero()),
        };

        let mut slot_of = vec![0usize; perm.len()];
        for (s, &j) in perm.iter().enumerate() {
            slot_of[j] = s;
        }
        let shifted = |delta: &[i32]| -> Vec<PowerFactor> {
            i.factors
                .iter()
                .enumerate()
                .map(|(j, f)| PowerFactor::new(f.base.clone(), &f.exponent + Rat::from(delta[slot_of[j]])))
                .collect()
        };
        // The partner keeps zero-exponent factors so it stays in the rule's slot layout.
        let integrand2 = Integrand {
            cofactor: cof2,
            transc: i
                .transc
                .as_ref()
                .map(|t| t.with_kind(kind2.expect("kind matches form"))),
            factors: shifted(&self.record.shift),
        };

        let mut groups: BTreeMap<Option<TranscKind>, Vec<(&Mono, &Poly)>> = BTreeMap::new();
        for (m, p) in &rel.fun {
            groups.entry(m.transc).or_default().push((m, p));
        }
        let mut alg = Vec::new();
        for (kind, terms) in groups {
            let low: Vec<i32> = (0..perm.len())
                .map(|s| terms.iter().map(|(m, _)| m.shift[s]).min().expect("nonempty"))
                .collect();
            let mut multiplier = Poly::zero();
            for (m, p) in terms {
                let mut t = p.clone();
                for (s, &j) in perm.iter().enumerate() {
                    t = &t * &i.factors[j].base.pow((m.shift[s] - low[s]) as u32);
                }
                multiplier = &multiplier + &t;
            }
            if multiplier.is_zero() {
                continue;
            }
            alg.push(AlgTerm {
                weight: Rat::one(),
                multiplier: multiplier.scale(&scale),
                factors: shifted(&low).into_iter().filter(|f| !f.exponent.is_zero()).collect(),
                transc: i.transc.as_ref().map(|t| t.with_kind(kind.expect("kind matches form"))),
            });
        }

        Ok(RelationInstance {
            rule: id.to_string(),
            k1,
            integrand1: i.clone(),
            integrand2,
            alg,
            perm: perm.to_vec(),
        })
    }
}
