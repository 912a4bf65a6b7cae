//! Result document. Every scalar is an exact rational string.

use serde::{Deserialize, Serialize};

use super::parse::{parse_integrand, Parser};
use super::print::{poly_text, print_expr_var};
use crate::arith::{Poly, Rat};
use crate::catalog::AlgTerm;
use crate::engine::{ReductionResult, Status};
use crate::error::{Error, Result};
use crate::integrand::PowerFactor;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDoc {
    pub base: String,
    pub exponent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgDoc {
    pub weight: String,
    pub multiplier: String,
    pub factors: Vec<FactorDoc>,
    pub transc: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualDoc {
    pub coefficient: String,
    pub integrand: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub rule: String,
    #[serde(rename = "solveFor")]
    pub solve_for: u8,
    pub scale: String,
    #[serde(rename = "algTerm")]
    pub alg_term: Vec<AlgDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteDoc {
    pub kind: String,
    pub integrand: String,
    #[serde(rename = "algTerm")]
    pub alg_term: Vec<AlgDoc>,
    pub parts: Vec<ResidualDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub input: String,
    pub status: String,
    pub algebraic: Vec<AlgDoc>,
    pub residuals: Vec<ResidualDoc>,
    pub trace: Vec<StepDoc>,
    #[serde(default)]
    pub rewrites: Vec<RewriteDoc>,
}

fn alg_doc(a: &AlgTerm, var: &str) -> AlgDoc {
    AlgDoc {
        weight: a.weight.to_string(),
        multiplier: poly_text(&a.multiplier, var),
        factors: a
            .factors
            .iter()
            .map(|f| FactorDoc {
                base: poly_text(&f.base, var),
                exponent: f.exponent.to_string(),
            })
            .collect(),
        transc: a
            .transc
            .as_ref()
            .map(|t| format!("{}({})", t.kind.name(), poly_text(&t.arg, var))),
    }
}

fn status_text(s: &Status) -> String {
    match s {
        Status::Terminal => "Terminal".into(),
        Status::Obstructed(why) => format!("Obstructed({why})"),
    }
}

pub fn to_document(r: &ReductionResult, var: &str) -> ResultDoc {
    ResultDoc {
        input: print_expr_var(&r.input, var),
        status: status_text(&r.status),
        algebraic: r.algebraic.iter().map(|a| alg_doc(a, var)).collect(),
        residuals: r
            .residuals
            .iter()
            .map(|(c, i)| ResidualDoc {
                coefficient: c.to_string(),
                integrand: print_expr_var(i, var),
            })
            .collect(),
        trace: r
            .trace
            .iter()
            .map(|s| StepDoc {
                rule: s.rule.clone(),
                solve_for: s.solve_for.number(),
                scale: s.scale.to_string(),
                alg_term: s.alg.iter().map(|a| alg_doc(a, var)).collect(),
            })
            .collect(),
        rewrites: r
            .rewrites
            .iter()
            .map(|w| RewriteDoc {
                kind: w.kind.clone(),
                integrand: print_expr_var(&w.current, var),
                alg_term: w.alg.iter().map(|a| alg_doc(a, var)).collect(),
                parts: w
                    .parts
                    .iter()
                    .map(|(c, i)| ResidualDoc {
                        coefficient: c.to_string(),
                        integrand: print_expr_var(i, var),
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// Pretty JSON in variable `x`.
pub fn serialize_result(r: &ReductionResult) -> String {
    serialize_result_var(r, "x")
}

pub fn serialize_result_var(r: &ReductionResult, var: &str) -> String {
    serde_json::to_string_pretty(&to_document(r, var)).expect("document serializes")
}

fn rat(s: &str) -> Result<Rat> {
    s.trim()
        .parse()
        .map_err(|_| Error::Document(format!("not a rational: {s:?}")))
}

fn poly(s: &str, var: &str) -> Result<Poly> {
    Parser::new(s, var)?.whole_poly()
}

fn alg_from(d: &AlgDoc, var: &str) -> Result<AlgTerm> {
    let transc = match &d.transc {
        None => None,
        Some(t) => {
            let i = parse_integrand(t, var)?;
            Some(
                i.transc
                    .ok_or_else(|| Error::Document(format!("not a transcendental factor: {t:?}")))?,
            )
        }
    };
    let factors = d
        .factors
        .iter()
        .map(|f| Ok(PowerFactor::new(poly(&f.base, var)?, rat(&f.exponent)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AlgTerm {
        weight: rat(&d.weight)?,
        multiplier: poly(&d.multiplier, var)?,
        factors,
        transc,
    })
}

/// Reads the algebraic part, residuals and status back; trace and rewrites
/// are not reconstructed since the trace omits intermediate integrands.
pub fn deserialize_result(text: &str, var: &str) -> Result<ReductionResult> {
    let doc: ResultDoc = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    let status = match doc.status.as_str() {
        "Terminal" => Status::Terminal,
        s => match s.strip_prefix("Obstructed(").and_then(|r| r.strip_suffix(')')) {
            Some(why) => Status::Obstructed(why.to_string()),
            None => return Err(Error::Document(format!("unknown status {s:?}"))),
        },
    };
    Ok(ReductionResult {
        input: parse_integrand(&doc.input, var)?,
        algebraic: doc.algebraic.iter().map(|a| alg_from(a, var)).collect::<Result<_>>()?,
        residuals: doc
            .residuals
            .iter()
            .map(|r| Ok((rat(&r.coefficient)?, parse_integrand(&r.integrand, var)?)))
            .collect::<Result<_>>()?,
        trace: Vec::new(),
        rewrites: Vec::new(),
        status,
    })
}
