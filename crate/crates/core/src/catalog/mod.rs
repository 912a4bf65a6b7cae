//! The recurrence catalog: form definitions, degeneracy cases and the 136
//! relations, stored as data and compiled into evaluable templates.

pub(crate) mod expr;
mod instance;
pub(crate) mod template;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use self::expr::Ast;
use self::template::{Env, Node, Shape};
use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::integrand::{FormTag, Integrand, TranscKind};

pub use instance::{AlgTerm, RelationInstance};

const BUILTIN: &str = include_str!("../../data/catalog.toml");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogFile {
    pub form: Vec<FormRecord>,
    pub rule: Vec<RuleRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormRecord {
    pub tag: FormTag,
    pub section: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transc: Option<String>,
    pub slots: Vec<SlotRecord>,
    pub abbreviations: Vec<String>,
    pub guards: Vec<String>,
    #[serde(rename = "case")]
    pub cases: Vec<CaseRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotRecord {
    pub base: String,
    pub exponent: String,
}

/// Zero/nonzero conditions on named guard values plus the root pattern used
/// to construct test integrands (`rK` shared root, `q` free quadratic, `*` free slot).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub label: String,
    pub zero: Vec<String>,
    pub nonzero: Vec<String>,
    pub pattern: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleRecord {
    pub id: String,
    pub form: FormTag,
    pub case: String,
    pub reversible: bool,
    pub shift: Vec<i32>,
    pub relation: String,
    #[serde(rename = "where")]
    pub locals: Vec<String>,
}

/// Which integral of a relation is isolated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SolveFor {
    One,
    Two,
}

impl SolveFor {
    pub fn number(self) -> u8 {
        match self {
            SolveFor::One => 1,
            SolveFor::Two => 2,
        }
    }
}

#[derive(Debug)]
pub(crate) struct Slot {
    pub ast: Ast,
    pub exponent: String,
    pub degree: usize,
    /// Coefficient symbol per power of `x`.
    pub coeffs: Vec<String>,
}

/// A compiled form definition.
#[derive(Debug)]
pub struct Form {
    pub record: FormRecord,
    pub(crate) slots: Vec<Slot>,
    pub(crate) transc: Option<(Ast, Vec<String>)>,
    pub(crate) defs: HashMap<String, Node>,
    pub(crate) guard_names: Vec<String>,
}

/// A compiled catalog rule.
#[derive(Debug)]
pub struct Rule {
    pub record: RuleRecord,
    pub(crate) form: Arc<Form>,
    pub(crate) relation: Node,
    pub(crate) locals: HashMap<String, Node>,
    /// Degree of the `A + B*x + C*x^2` template, `None` for pure power products.
    pub(crate) cofactor_degree: Option<usize>,
    pub(crate) kind: Option<TranscKind>,
    pub(crate) partner_kind: Option<TranscKind>,
}

#[derive(Debug)]
pub struct Catalog {
    file: CatalogFile,
    forms: Vec<Arc<Form>>,
    rules: Vec<Rule>,
}

fn coefficient_symbols(ast: &Ast, out: &mut Vec<(usize, String)>) -> Result<()> {
    let bad = || Error::Catalog(format!("slot template term {ast:?} is not c*x^k"));
    match ast {
        Ast::Add(a, b) => {
            coefficient_symbols(a, out)?;
            coefficient_symbols(b, out)
        }
        Ast::Sym(s) if s != "x" => {
            out.push((0, s.clone()));
            Ok(())
        }
        Ast::Mul(c, xp) => {
            let Ast::Sym(s) = &**c else { return Err(bad()) };
            let k = match &**xp {
                Ast::Sym(x) if x == "x" => 1,
                Ast::Pow(x, k) => match (&**x, &**k) {
                    (Ast::Sym(x), Ast::Num(k)) if x == "x" => usize::try_from(k.clone()).map_err(|_| bad())?,
                    _ => return Err(bad()),
                },
                _ => return Err(bad()),
            };
            out.push((k, s.clone()));
            Ok(())
        }
        _ => Err(bad()),
    }
}

fn dense_symbols(src: &str) -> Result<(Ast, Vec<String>)> {
    let ast = expr::parse(src)?;
    let mut terms = Vec::new();
    coefficient_symbols(&ast, &mut terms)?;
    terms.sort();
    if terms.iter().enumerate().any(|(i, (k, _))| *k != i) {
        return Err(Error::Catalog(format!(
            "slot template {src:?} must list every power once"
        )));
    }
    Ok((ast, terms.into_iter().map(|(_, s)| s).collect()))
}

impl Form {
    fn compile(record: FormRecord) -> Result<Form> {
        let mut slots = Vec::new();
        for s in &record.slots {
            let (ast, coeffs) = dense_symbols(&s.base)?;
            slots.push(Slot {
                ast,
                exponent: s.exponent.clone(),
                degree: coeffs.len() - 1,
                coeffs,
            });
        }
        let degrees: Vec<usize> = slots.iter().map(|s| s.degree).collect();
        if degrees != record.tag.slot_degrees() || record.transc.is_some() != record.tag.has_transc() {
            return Err(Error::Catalog(format!(
                "form {} slots do not match its tag",
                record.tag
            )));
        }
        let transc = record.transc.as_deref().map(dense_symbols).transpose()?;
        let pairs: Vec<(Ast, String)> = slots.iter().map(|s| (s.ast.clone(), s.exponent.clone())).collect();
        let shape = Shape {
            slots: &pairs,
            transc_arg: transc.as_ref().map(|t| &t.0),
        };
        let mut defs = HashMap::new();
        let mut guard_names = Vec::new();
        for d in record.abbreviations.iter().chain(&record.guards) {
            let (name, ast) = expr::parse_definition(d)?;
            defs.insert(name.clone(), shape.compile(&ast)?);
            guard_names.push(name);
        }
        for c in &record.cases {
            if let Some(n) = c.zero.iter().chain(&c.nonzero).find(|n| !defs.contains_key(*n)) {
                return Err(Error::Catalog(format!(
                    "case {} refers to undefined guard {n}",
                    c.label
                )));
            }
        }
        Ok(Form {
            record,
            slots,
            transc,
            defs,
            guard_names,
        })
    }

    pub fn tag(&self) -> FormTag {
        self.record.tag
    }

    pub fn case(&self, label: &str) -> Option<&CaseRecord> {
        self.record.cases.iter().find(|c| c.label == label)
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    /// Symbol values describing the bases (and transcendental argument) of `i`
    /// with factor `perm[s]` placed in slot `s`.
    pub(crate) fn base_inputs(&self, i: &Integrand, perm: &[usize]) -> Result<HashMap<String, Rat>> {
        if perm.len() != self.slots.len() || i.factors.len() != self.slots.len() {
            return Err(Error::UnsupportedForm(format!(
                "integrand does not have the {} shape",
                self.tag()
            )));
        }
        let mut inputs = HashMap::new();
        for (slot, &j) in self.slots.iter().zip(perm) {
            let f = i
                .factors
                .get(j)
                .ok_or_else(|| Error::UnsupportedForm("slot assignment out of range".into()))?;
            if f.base.degree() != Some(slot.degree) {
                return Err(Error::UnsupportedForm(format!("factor {j} does not fit its slot")));
            }
            for (k, sym) in slot.coeffs.iter().enumerate() {
                inputs.insert(sym.clone(), f.base.coeff(k));
            }
            inputs.insert(slot.exponent.clone(), f.exponent.clone());
        }
        match (&self.transc, &i.transc) {
            (Some((_, syms)), Some(t)) => {
                for (k, sym) in syms.iter().enumerate() {
                    inputs.insert(sym.clone(), t.arg.coeff(k));
                }
            }
            (None, None) => {}
            _ => return Err(Error::UnsupportedForm("transcendental factor mismatch".into())),
        }
        Ok(inputs)
    }

    /// Abbreviations and guards of the form, in catalog order.
    pub fn guard_values(&self, i: &Integrand, perm: &[usize]) -> Result<Vec<(String, Rat)>> {
        let env = Env::new(self.slots.len(), self.base_inputs(i, perm)?, vec![&self.defs]);
        self.guard_names
            .iter()
            .map(|n| Ok((n.clone(), env.scalar(n)?)))
            .collect()
    }

    /// Cases whose conditions hold for the given guard values.
    pub fn matching_cases<'a>(&'a self, values: &[(String, Rat)]) -> Vec<&'a CaseRecord> {
        let get = |n: &str| values.iter().find(|(k, _)| k == n).map(|(_, v)| v);
        self.record
            .cases
            .iter()
            .filter(|c| {
                c.zero.iter().all(|n| get(n).is_some_and(Rat::is_zero))
                    && c.nonzero.iter().all(|n| get(n).is_some_and(|v| !v.is_zero()))
            })
            .collect()
    }

    /// The most specific matching case: most vanishing conditions, then catalog order.
    pub fn select_case<'a>(&'a self, values: &[(String, Rat)]) -> Option<&'a CaseRecord> {
        let mut best: Option<&CaseRecord> = None;
        for c in self.matching_cases(values) {
            if best.is_none_or(|b| c.zero.len() > b.zero.len()) {
                best = Some(c);
            }
        }
        best
    }

    /// Slot assignments of the integrand's factors that respect base degrees.
    pub fn permutations(&self, i: &Integrand) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut used = vec![false; i.factors.len()];
        self.extend_perm(i, &mut cur, &mut used, &mut out);
        out
    }

    fn extend_perm(&self, i: &Integrand, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == self.slots.len() {
            out.push(cur.clone());
            return;
        }
        let want = self.slots[cur.len()].degree;
        for j in 0..i.factors.len() {
            if !used[j] && i.factors[j].degree() == want {
                used[j] = true;
                cur.push(j);
                self.extend_perm(i, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
}

impl Rule {
    fn compile(record: RuleRecord, form: Arc<Form>) -> Result<Rule> {
        let wrap = |e: Error| Error::Catalog(format!("rule {}: {e}", record.id));
        if form.case(&record.case).is_none() {
            return Err(Error::Catalog(format!(
                "rule {} names unknown case {}",
                record.id, record.case
            )));
        }
        if record.shift.len() != form.slots.len() || record.shift.iter().all(|&s| s == 0) {
            return Err(Error::Catalog(format!("rule {} has an invalid shift", record.id)));
        }
        let pairs: Vec<(Ast, String)> = form.slots.iter().map(|s| (s.ast.clone(), s.exponent.clone())).collect();
        let shape = Shape {
            slots: &pairs,
            transc_arg: form.transc.as_ref().map(|t| &t.0),
        };
        let rel_ast = expr::parse_relation(&record.relation).map_err(wrap)?;
        let relation = shape.compile(&rel_ast).map_err(wrap)?;
        let mut locals = HashMap::new();
        let mut syms = Vec::new();
        rel_ast.symbols(&mut syms);
        for d in &record.locals {
            let (name, ast) = expr::parse_definition(d).map_err(wrap)?;
            ast.symbols(&mut syms);
            locals.insert(name, shape.compile(&ast).map_err(wrap)?);
        }
        let cofactor_degree = ["C", "B", "A"]
            .iter()
            .position(|s| syms.iter().any(|x| x == s))
            .map(|p| 2 - p);
        let mut kinds = Vec::new();
        relation.int_kinds(&mut kinds);
        let [kind, partner_kind] = <[Option<TranscKind>; 2]>::try_from(kinds)
            .map_err(|_| Error::Catalog(format!("rule {} must contain exactly two integrals", record.id)))?;
        Ok(Rule {
            record,
            form,
            relation,
            locals,
            cofactor_degree,
            kind,
            partner_kind,
        })
    }

    pub fn id(&self) -> &str {
        &self.record.id
    }

    pub fn form_tag(&self) -> FormTag {
        self.record.form
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn case(&self) -> &str {
        &self.record.case
    }

    pub fn shift(&self) -> &[i32] {
        &self.record.shift
    }

    pub fn reversible(&self) -> bool {
        self.record.reversible
    }

    /// Guard names that must be nonzero for this rule.
    pub fn guards(&self) -> &[String] {
        &self.form.case(&self.record.case).expect("validated at load").nonzero
    }

    /// Guard names that must vanish for this rule.
    pub fn vanishing(&self) -> &[String] {
        &self.form.case(&self.record.case).expect("validated at load").zero
    }

    pub fn cofactor_degree(&self) -> Option<usize> {
        self.cofactor_degree
    }

    /// Transcendental kind of the first integrand.
    pub fn transc_kind(&self) -> Option<TranscKind> {
        self.kind
    }

    /// Transcendental kind of the partner integrand.
    pub fn partner_kind(&self) -> Option<TranscKind> {
        self.partner_kind
    }

    /// Exponent change of the current integrand when solving for `dir`.
    pub fn effective_shift(&self, dir: SolveFor) -> Vec<i32> {
        match dir {
            SolveFor::One => self.record.shift.clone(),
            SolveFor::Two => self.record.shift.iter().map(|s| -s).collect(),
        }
    }

    /// Instantiates with the integrand's factors in slot order.
    pub fn instantiate(&self, i: &Integrand) -> Result<RelationInstance> {
        let perm: Vec<usize> = (0..i.factors.len()).collect();
        self.instantiate_with(i, &perm)
    }
}

impl Catalog {
    pub fn builtin() -> &'static Catalog {
        static CAT: OnceLock<Catalog> = OnceLock::new();
        CAT.get_or_init(|| Catalog::from_toml(BUILTIN).expect("embedded catalog is valid"))
    }

    pub fn from_toml(src: &str) -> Result<Catalog> {
        let file: CatalogFile = toml::from_str(src).map_err(|e| Error::Catalog(e.to_string()))?;
        Catalog::from_file(file)
    }

    pub fn from_file(file: CatalogFile) -> Result<Catalog> {
        let mut forms = Vec::new();
        for f in &file.form {
            if forms.iter().any(|g: &Arc<Form>| g.tag() == f.tag) {
                return Err(Error::Catalog(format!("form {} defined twice", f.tag)));
            }
            forms.push(Arc::new(Form::compile(f.clone())?));
        }
        let mut rules: Vec<Rule> = Vec::new();
        for r in &file.rule {
            if rules.iter().any(|q| q.id() == r.id) {
                return Err(Error::Catalog(format!("rule {} defined twice", r.id)));
            }
            let form = forms
                .iter()
                .find(|f| f.tag() == r.form)
                .ok_or_else(|| Error::Catalog(format!("rule {} names unknown form {}", r.id, r.form)))?;
            rules.push(Rule::compile(r.clone(), form.clone())?);
        }
        Ok(Catalog { file, forms, rules })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.file).expect("catalog records serialize")
    }

    pub fn file(&self) -> &CatalogFile {
        &self.file
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id() == id)
    }

    pub fn forms(&self) -> impl Iterator<Item = &Form> {
        self.forms.iter().map(|f| &**f)
    }

    pub fn form(&self, tag: FormTag) -> Option<&Form> {
        self.forms.iter().find(|f| f.tag() == tag).map(|f| &**f)
    }

    /// Rules of `(form, case)` whose effective shift moves every slot with a
    /// nonzero entry of `want` by exactly that entry. Forward readings come
    /// first, each group in catalog order.
    pub fn rules_for(&self, form: FormTag, case: &str, want: &[i32]) -> Result<Vec<(&Rule, SolveFor)>> {
        let missing = || Error::NoRuleForCase(format!("{form} case {case} move {want:?}"));
        let f = self.form(form).ok_or_else(missing)?;
        if f.case(case).is_none() || want.len() != f.slot_count() {
            return Err(missing());
        }
        let mut out = Vec::new();
        for dir in [SolveFor::One, SolveFor::Two] {
            for r in self.rules.iter().filter(|r| r.form_tag() == form && r.case() == case) {
                let eff = r.effective_shift(dir);
                if want.iter().zip(&eff).all(|(w, e)| *w == 0 || w == e) {
                    out.push((r, dir));
                }
            }
        }
        if out.is_empty() {
            return Err(missing());
        }
        Ok(out)
    }
}
