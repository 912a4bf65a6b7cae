use super::{FormTag, Integrand};
use crate::arith::Rat;
use crate::catalog::Catalog;
use crate::error::{Error, Result};

/// Largest cofactor degree accepted per form. Forms with a linear factor
/// accept quadratic cofactors, which the engine absorbs into that factor.
pub fn max_cofactor_degree(tag: FormTag) -> usize {
    match tag {
        FormTag::Q2 => 0,
        FormTag::C3 | FormTag::EQ => 1,
        _ => 2,
    }
}

/// Form of a normalized integrand.
pub fn classify(i: &Integrand) -> Result<FormTag> {
    let degrees: Vec<usize> = i.factors.iter().map(|f| f.degree()).collect();
    if degrees.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::UnsupportedForm("factors are not normalized".into()));
    }
    let tag = FormTag::from_shape(&degrees, i.transc.is_some()).ok_or_else(|| {
        let total: usize = degrees.iter().sum();
        let transc = if i.transc.is_some() {
            " with a transcendental factor"
        } else {
            ""
        };
        Error::UnsupportedForm(format!("factor degrees {degrees:?} (total {total}){transc}"))
    })?;
    let max = max_cofactor_degree(tag);
    if i.cofactor_degree() > max {
        return Err(Error::CofactorTooLarge {
            form: tag.to_string(),
            degree: i.cofactor_degree(),
            max,
        });
    }
    Ok(tag)
}

/// Named guard values under the slot assignment `perm`, and the selected
/// degeneracy case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyProfile {
    pub guards: Vec<(String, Rat)>,
    pub case: String,
    pub perm: Vec<usize>,
}

impl DegeneracyProfile {
    pub fn get(&self, name: &str) -> Option<&Rat> {
        self.guards.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }
}

/// Tries every degree-respecting slot assignment and keeps the case with the
/// most vanishing conditions; ties go to the earlier assignment.
pub fn degeneracy_profile(i: &Integrand, form: FormTag) -> Result<DegeneracyProfile> {
    profile_in(Catalog::builtin(), i, form)
}

pub(crate) fn profile_in(cat: &Catalog, i: &Integrand, form: FormTag) -> Result<DegeneracyProfile> {
    let f = cat
        .form(form)
        .ok_or_else(|| Error::UnsupportedForm(format!("catalog lacks form {form}")))?;
    let mut best: Option<(usize, DegeneracyProfile)> = None;
    let mut zeros: Vec<String> = Vec::new();
    for perm in f.permutations(i) {
        let guards = f.guard_values(i, &perm)?;
        match f.select_case(&guards) {
            Some(c) => {
                if best.as_ref().is_none_or(|(n, _)| c.zero.len() > *n) {
                    let case = c.label.clone();
                    best = Some((c.zero.len(), DegeneracyProfile { guards, case, perm }));
                }
            }
            None if zeros.is_empty() => {
                zeros = guards
                    .iter()
                    .filter(|(_, v)| v.is_zero())
                    .map(|(k, _)| k.clone())
                    .collect();
            }
            None => {}
        }
    }
    best.map(|(_, p)| p)
        .ok_or_else(|| Error::UnsupportedDegeneracy(format!("{form} with vanishing {}", zeros.join(", "))))
}
