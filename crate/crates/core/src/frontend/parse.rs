//! Integrand grammar:
//!
//! ```text
//! expr     := factor ("*" factor)*
//! factor   := "(" poly ")" ["^" exponent] | ("exp"|"cos"|"sin") "(" poly ")"
//!           | rational | var ["^" int]
//! exponent := int | "(" ["-"|"+"] rational ")"
//! poly     := ["-"|"+"] term (("+"|"-") term)*
//! term     := rational ["*" var ["^" int]] | var ["^" int]
//! ```

use num_bigint::BigInt;

use crate::arith::{Poly, Rat};
use crate::error::{Error, Result};
use crate::integrand::{classify, normalize, Integrand, PowerFactor, TranscFactor, TranscKind};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek().filter(|(_, d)| d.is_ascii_digit()) {
                s.push(d);
                it.next();
            }
            toks.push((Tok::Int(s.parse().expect("digits")), pos));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek().filter(|(_, d)| d.is_alphanumeric() || *d == '_') {
                s.push(d);
                it.next();
            }
            toks.push((Tok::Ident(s), pos));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Op(c), pos));
            it.next();
        } else {
            return Err(Error::Syntax {
                pos,
                expected: vec!["number, variable, operator or parenthesis".into()],
            });
        }
    }
    toks.push((Tok::End, src.len()));
    Ok(Lexer { toks })
}

pub(crate) struct Parser<'a> {
    lex: Lexer,
    at: usize,
    var: &'a str,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &str, var: &'a str) -> Result<Self> {
        Ok(Parser {
            lex: lex(text)?,
            at: 0,
            var,
        })
    }

    /// A lone polynomial spanning the whole input.
    pub(crate) fn whole_poly(&mut self) -> Result<Poly> {
        let p = self.poly()?;
        if *self.peek() != Tok::End {
            return self.fail(&["'+'", "'-'", "end of input"]);
        }
        Ok(p)
    }

    fn peek(&self) -> &Tok {
        &self.lex.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.lex.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.lex.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Op(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&[&format!("'{c}'")])
        }
    }

    fn is_var(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == self.var)
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.bump() {
            Tok::Int(n) => Ok(n),
            _ => {
                self.at -= 1;
                self.fail(&["integer"])
            }
        }
    }

    fn rational(&mut self) -> Result<Rat> {
        let n = self.int()?;
        if self.eat('/') {
            let pos = self.pos();
            let d = self.int()?;
            if d == BigInt::from(0) {
                return Err(Error::Syntax {
                    pos,
                    expected: vec!["nonzero denominator".into()],
                });
            }
            return Ok(Rat::new(n, d));
        }
        Ok(Rat::int(n))
    }

    fn power_of_var(&mut self) -> Result<usize> {
        self.bump();
        if self.eat('^') {
            let pos = self.pos();
            let k = self.int()?;
            return usize::try_from(k).map_err(|_| Error::Syntax {
                pos,
                expected: vec!["small integer power".into()],
            });
        }
        Ok(1)
    }

    fn term(&mut self) -> Result<Poly> {
        if self.is_var() {
            let k = self.power_of_var()?;
            return Ok(Poly::monomial(Rat::one(), k));
        }
        let c = match self.peek() {
            Tok::Int(_) => self.rational()?,
            _ => return self.fail(&["number", &format!("'{}'", self.var)]),
        };
        if *self.peek() == Tok::Op('*') && matches!(&self.lex.toks[self.at + 1].0, Tok::Ident(s) if s == self.var) {
            self.bump();
            let k = self.power_of_var()?;
            return Ok(Poly::monomial(c, k));
        }
        Ok(Poly::constant(c))
    }

    fn poly(&mut self) -> Result<Poly> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let first = self.term()?;
        let mut p = if neg { -first } else { first };
        loop {
            if self.eat('+') {
                p = &p + &self.term()?;
            } else if self.eat('-') {
                p = &p - &self.term()?;
            } else {
                return Ok(p);
            }
        }
    }

    fn symbolic(&mut self) -> Result<Rat> {
        let start = self.pos();
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::End => break,
                Tok::Op('(') => depth += 1,
                Tok::Op(')') if depth == 0 => break,
                Tok::Op(')') => depth -= 1,
                Tok::Op('*') if depth == 0 => break,
                _ => {}
            }
            self.bump();
        }
        Err(Error::SymbolicExponent(format!("at position {start}")))
    }

    fn exponent(&mut self) -> Result<Rat> {
        match self.peek().clone() {
            Tok::Int(_) => Ok(Rat::int(self.int()?)),
            Tok::Ident(_) => self.symbolic(),
            Tok::Op('(') => {
                self.bump();
                if matches!(self.peek(), Tok::Ident(_)) {
                    return self.symbolic();
                }
                let neg = if self.eat('-') {
                    true
                } else {
                    self.eat('+');
                    false
                };
                if matches!(self.peek(), Tok::Ident(_)) {
                    return self.symbolic();
                }
                let r = self.rational()?;
                if !matches!(self.peek(), Tok::Op(')')) {
                    return self.symbolic();
                }
                self.expect(')')?;
                Ok(if neg { -r } else { r })
            }
            _ => self.fail(&["integer exponent", "parenthesized rational exponent"]),
        }
    }

    fn expr(&mut self) -> Result<Integrand> {
        let mut cofactor = Poly::one();
        let mut transc: Option<TranscFactor> = None;
        let mut factors = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Op('(') => {
                    self.bump();
                    let base = self.poly()?;
                    self.expect(')')?;
                    if self.eat('^') {
                        let e = self.exponent()?;
                        factors.push(PowerFactor::new(base, e));
                    } else {
                        cofactor = &cofactor * &base;
                    }
                }
                Tok::Ident(name) if name != self.var => {
                    let pos = self.pos();
                    let kind = TranscKind::from_name(&name).ok_or_else(|| Error::Syntax {
                        pos,
                        expected: vec!["exp".into(), "cos".into(), "sin".into(), format!("'{}'", self.var)],
                    })?;
                    self.bump();
                    self.expect('(')?;
                    let arg = self.poly()?;
                    self.expect(')')?;
                    if transc.is_some() {
                        return Err(Error::UnsupportedForm("more than one transcendental factor".into()));
                    }
                    transc = Some(TranscFactor::new(kind, arg));
                }
                Tok::Ident(_) => {
                    let k = self.power_of_var()?;
                    cofactor = &cofactor * &Poly::monomial(Rat::one(), k);
                }
                Tok::Int(_) => cofactor = cofactor.scale(&self.rational()?),
                Tok::Op(c @ ('-' | '+')) => {
                    self.bump();
                    let r = self.rational()?;
                    cofactor = cofactor.scale(&if c == '-' { -r } else { r });
                }
                _ => return self.fail(&["factor"]),
            }
            if !self.eat('*') {
                break;
            }
        }
        if *self.peek() != Tok::End {
            return self.fail(&["'*'", "end of input"]);
        }
        Ok(Integrand::new(cofactor, transc, factors))
    }
}

/// Parses and normalizes without requiring a supported form.
pub fn parse_integrand(text: &str, var: &str) -> Result<Integrand> {
    normalize(&Parser::new(text, var)?.expr()?)
}

/// Parses, normalizes and checks that the result has a supported form.
pub fn parse_expr(text: &str, var: &str) -> Result<Integrand> {
    let i = parse_integrand(text, var)?;
    classify(&i)?;
    Ok(i)
}
