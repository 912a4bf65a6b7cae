//! Parser for the catalog's template notation (`+ - * / ^`, calls, integer literals).

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    Num(BigInt),
    Sym(String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Box<Ast>),
    Call(String, Vec<Ast>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let b = src.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(src[s..i].parse().expect("digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(src[s..i].to_string()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Catalog(format!("unexpected character {c:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn fail<T>(&self, what: &str) -> Result<T> {
        Err(Error::Catalog(format!(
            "expected {what} at token {} in {:?}",
            self.pos, self.src
        )))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek_op() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("{c:?}"))
        }
    }

    fn sum(&mut self) -> Result<Ast> {
        let mut lhs = self.product()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.product()?;
            lhs = if c == '+' {
                Ast::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Ast::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if c == '*' {
                Ast::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Ast::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(Ast::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Ast::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Ast::Num(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek_op() == Some('(') {
                    self.pos += 1;
                    let mut args = vec![self.sum()?];
                    while self.peek_op() == Some(',') {
                        self.pos += 1;
                        args.push(self.sum()?);
                    }
                    self.expect(')')?;
                    Ok(Ast::Call(name, args))
                } else {
                    Ok(Ast::Sym(name))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => self.fail("operand"),
        }
    }
}

pub fn parse(src: &str) -> Result<Ast> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        src,
    };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return p.fail("end of expression");
    }
    Ok(e)
}

/// Splits `name = expr`.
pub fn parse_definition(src: &str) -> Result<(String, Ast)> {
    let (name, rhs) = src
        .split_once('=')
        .ok_or_else(|| Error::Catalog(format!("definition without '=': {src:?}")))?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::Catalog(format!("bad definition name in {src:?}")));
    }
    Ok((name.to_string(), parse(rhs)?))
}

/// Parses `lhs = 0`.
pub fn parse_relation(src: &str) -> Result<Ast> {
    let (lhs, rhs) = src
        .rsplit_once('=')
        .ok_or_else(|| Error::Catalog(format!("relation without '= 0': {src:?}")))?;
    if rhs.trim() != "0" {
        return Err(Error::Catalog(format!("relation must end in '= 0': {src:?}")));
    }
    parse(lhs)
}

impl Ast {
    pub fn symbols(&self, out: &mut Vec<String>) {
        match self {
            Ast::Num(_) => {}
            Ast::Sym(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Ast::Neg(a) => a.symbols(out),
            Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Div(a, b) | Ast::Pow(a, b) => {
                a.symbols(out);
                b.symbols(out);
            }
            Ast::Call(_, args) => args.iter().for_each(|a| a.symbols(out)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Box<Ast> {
        Box::new(Ast::Sym(s.into()))
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("-a*b^2 - c").unwrap();
        let expected = Ast::Sub(
            Box::new(Ast::Mul(
                Box::new(Ast::Neg(sym("a"))),
                Box::new(Ast::Pow(sym("b"), Box::new(Ast::Num(2.into())))),
            )),
            sym("c"),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn calls_and_relations() {
        let e = parse_relation("2*INT((a + b*x)^(m + 1), x) - u = 0").unwrap();
        let mut syms = Vec::new();
        e.symbols(&mut syms);
        assert_eq!(syms, vec!["a", "b", "x", "m", "u"]);
        assert!(parse_relation("a = 1").is_err());
        assert_eq!(parse_definition("sb = 1/2 *(ra - rb)").unwrap().0, "sb");
    }
}
