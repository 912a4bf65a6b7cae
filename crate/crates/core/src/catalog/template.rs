//! Compiled templates and their evaluation over exact values.
//!
//! A template value is a sum of terms `poly(x) * prod(slot_i ^ (e_i + k_i)) * T`
//! plus scalar multiples of `INT(...)` terms, where `e_i` are the concrete slot
//! exponents and `T` is an optional transcendental factor.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};

use super::expr::Ast;
use crate::arith::{Poly, Rat};
use crate::error::{Error, Result};
use crate::integrand::TranscKind;

#[derive(Debug, Clone)]
pub(crate) enum Node {
    Const(Rat),
    Sym(String),
    X,
    Slot(usize, i32),
    Transc(TranscKind),
    Int(Box<Node>),
    Add(Vec<Node>),
    Neg(Box<Node>),
    Mul(Vec<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
}

/// What a template may refer to besides scalar symbols.
pub(crate) struct Shape<'a> {
    pub slots: &'a [(Ast, String)],
    pub transc_arg: Option<&'a Ast>,
}

impl Shape<'_> {
    pub fn compile(&self, ast: &Ast) -> Result<Node> {
        Ok(match ast {
            Ast::Num(n) => Node::Const(Rat::int(n.clone())),
            Ast::Sym(s) if s == "x" => Node::X,
            Ast::Sym(s) => Node::Sym(s.clone()),
            Ast::Neg(a) => Node::Neg(Box::new(self.compile(a)?)),
            Ast::Add(a, b) => {
                let mut v = Vec::new();
                self.flatten_sum(a, false, &mut v)?;
                self.flatten_sum(b, false, &mut v)?;
                Node::Add(v)
            }
            Ast::Sub(a, b) => {
                let mut v = Vec::new();
                self.flatten_sum(a, false, &mut v)?;
                self.flatten_sum(b, true, &mut v)?;
                Node::Add(v)
            }
            Ast::Mul(a, b) => Node::Mul(vec![self.compile(a)?, self.compile(b)?]),
            Ast::Div(a, b) => Node::Div(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Ast::Pow(base, exp) => self.compile_pow(base, exp)?,
            Ast::Call(name, args) => self.compile_call(name, args)?,
        })
    }

    fn flatten_sum(&self, a: &Ast, neg: bool, out: &mut Vec<Node>) -> Result<()> {
        let n = self.compile(a)?;
        out.push(if neg { Node::Neg(Box::new(n)) } else { n });
        Ok(())
    }

    fn compile_pow(&self, base: &Ast, exp: &Ast) -> Result<Node> {
        if let Some(i) = self.slots.iter().position(|(b, _)| b == base) {
            let sym = &self.slots[i].1;
            let shift = match exp {
                Ast::Sym(s) if s == sym => Some(0),
                Ast::Add(a, k) => match (&**a, &**k) {
                    (Ast::Sym(s), Ast::Num(k)) if s == sym => i32::try_from(k.clone()).ok(),
                    _ => None,
                },
                Ast::Sub(a, k) => match (&**a, &**k) {
                    (Ast::Sym(s), Ast::Num(k)) if s == sym => i32::try_from(k.clone()).ok().map(|v| -v),
                    _ => None,
                },
                _ => None,
            };
            if let Some(k) = shift {
                return Ok(Node::Slot(i, k));
            }
        }
        match exp {
            Ast::Num(k) => {
                let k = u32::try_from(k.clone()).map_err(|_| Error::Catalog(format!("power {k} too large")))?;
                Ok(Node::Pow(Box::new(self.compile(base)?), k))
            }
            _ => Err(Error::Catalog(format!("unsupported symbolic power {base:?}^{exp:?}"))),
        }
    }

    fn compile_call(&self, name: &str, args: &[Ast]) -> Result<Node> {
        match (name, args) {
            ("INT", [content, Ast::Sym(v)]) if v == "x" => Ok(Node::Int(Box::new(self.compile(content)?))),
            (k, [arg]) if TranscKind::from_name(k).is_some() && self.transc_arg == Some(arg) => {
                Ok(Node::Transc(TranscKind::from_name(k).expect("checked")))
            }
            _ => Err(Error::Catalog(format!("unsupported call {name}({args:?})"))),
        }
    }
}

impl Node {
    /// Transcendental kind inside each integral, in evaluation order.
    pub fn int_kinds(&self, out: &mut Vec<Option<TranscKind>>) {
        match self {
            Node::Int(c) => out.push(c.transc_kind()),
            Node::Add(v) | Node::Mul(v) => v.iter().for_each(|n| n.int_kinds(out)),
            Node::Neg(a) | Node::Pow(a, _) => a.int_kinds(out),
            Node::Div(a, b) => {
                a.int_kinds(out);
                b.int_kinds(out);
            }
            _ => {}
        }
    }

    fn transc_kind(&self) -> Option<TranscKind> {
        match self {
            Node::Transc(k) => Some(*k),
            Node::Add(v) | Node::Mul(v) => v.iter().find_map(Node::transc_kind),
            Node::Neg(a) | Node::Pow(a, _) | Node::Int(a) => a.transc_kind(),
            Node::Div(a, b) => a.transc_kind().or_else(|| b.transc_kind()),
            _ => None,
        }
    }
}

/// Power-product and transcendental signature of one term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Mono {
    pub shift: Vec<i32>,
    pub transc: Option<TranscKind>,
}

pub(crate) type FunSum = BTreeMap<Mono, Poly>;

#[derive(Debug, Clone, Default)]
pub(crate) struct Compound {
    pub fun: FunSum,
    pub ints: Vec<(Rat, FunSum)>,
}

#[derive(Debug, Clone)]
pub(crate) enum Val {
    Scalar(Rat),
    Compound(Box<Compound>),
}

fn defect(msg: &str) -> Error {
    Error::Catalog(msg.to_string())
}

fn add_into(dst: &mut FunSum, src: &FunSum, sign: &Rat) {
    for (m, p) in src {
        let term = p.scale(sign);
        let e = dst.entry(m.clone()).or_insert_with(Poly::zero);
        *e = &*e + &term;
        if e.is_zero() {
            dst.remove(m);
        }
    }
}

fn mul_fun(a: &FunSum, b: &FunSum) -> Result<FunSum> {
    let mut out = FunSum::new();
    for (ma, pa) in a {
        for (mb, pb) in b {
            let transc = match (ma.transc, mb.transc) {
                (Some(_), Some(_)) => return Err(defect("product of two transcendental factors")),
                (t, None) | (None, t) => t,
            };
            let shift = ma.shift.iter().zip(&mb.shift).map(|(x, y)| x + y).collect();
            let m = Mono { shift, transc };
            let e = out.entry(m.clone()).or_insert_with(Poly::zero);
            *e = &*e + &(pa * pb);
            if e.is_zero() {
                out.remove(&m);
            }
        }
    }
    Ok(out)
}

impl Val {
    fn compound(self, nslots: usize) -> Compound {
        match self {
            Val::Compound(c) => *c,
            Val::Scalar(r) => {
                let mut fun = FunSum::new();
                if !r.is_zero() {
                    fun.insert(
                        Mono {
                            shift: vec![0; nslots],
                            transc: None,
                        },
                        Poly::constant(r),
                    );
                }
                Compound { fun, ints: Vec::new() }
            }
        }
    }

    pub fn as_scalar(&self) -> Option<Rat> {
        match self {
            Val::Scalar(r) => Some(r.clone()),
            Val::Compound(c) => {
                if !c.ints.is_empty() {
                    return None;
                }
                match c.fun.len() {
                    0 => Some(Rat::zero()),
                    1 => {
                        let (m, p) = c.fun.iter().next().expect("one term");
                        let plain = m.transc.is_none() && m.shift.iter().all(|&s| s == 0);
                        plain.then(|| p.as_constant()).flatten()
                    }
                    _ => None,
                }
            }
        }
    }

    fn add(self, other: Val, nslots: usize) -> Val {
        match (self, other) {
            (Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(a + b),
            (a, b) => {
                let mut x = a.compound(nslots);
                let y = b.compound(nslots);
                add_into(&mut x.fun, &y.fun, &Rat::one());
                x.ints.extend(y.ints);
                Val::Compound(Box::new(x))
            }
        }
    }

    fn neg(self) -> Val {
        match self {
            Val::Scalar(a) => Val::Scalar(-a),
            Val::Compound(mut c) => {
                for p in c.fun.values_mut() {
                    *p = -&*p;
                }
                for (s, _) in c.ints.iter_mut() {
                    *s = -&*s;
                }
                Val::Compound(c)
            }
        }
    }

    fn mul(self, other: Val, nslots: usize) -> Result<Val> {
        match (self, other) {
            (Val::Scalar(a), Val::Scalar(b)) => Ok(Val::Scalar(a * b)),
            (Val::Scalar(s), Val::Compound(c)) | (Val::Compound(c), Val::Scalar(s)) => {
                Ok(Val::Compound(Box::new(scale_compound(*c, &s))))
            }
            (a, b) => {
                if let Some(s) = a.as_scalar() {
                    return Ok(Val::Compound(Box::new(scale_compound(b.compound(nslots), &s))));
                }
                if let Some(s) = b.as_scalar() {
                    return Ok(Val::Compound(Box::new(scale_compound(a.compound(nslots), &s))));
                }
                let x = a.compound(nslots);
                let y = b.compound(nslots);
                if !x.ints.is_empty() || !y.ints.is_empty() {
                    return Err(defect("integral multiplied by a non-constant"));
                }
                Ok(Val::Compound(Box::new(Compound {
                    fun: mul_fun(&x.fun, &y.fun)?,
                    ints: Vec::new(),
                })))
            }
        }
    }
}

/// Integrals survive a zero scale so relations keep both of them.
fn scale_compound(mut c: Compound, s: &Rat) -> Compound {
    if s.is_zero() {
        c.fun.clear();
    }
    for p in c.fun.values_mut() {
        *p = p.scale(s);
    }
    for (k, _) in c.ints.iter_mut() {
        *k *= s;
    }
    c
}

/// Lazily evaluated symbol environment.
pub(crate) struct Env<'a> {
    nslots: usize,
    defs: Vec<&'a HashMap<String, Node>>,
    memo: RefCell<HashMap<String, Val>>,
    active: RefCell<HashSet<String>>,
}

impl<'a> Env<'a> {
    pub fn new(nslots: usize, inputs: HashMap<String, Rat>, defs: Vec<&'a HashMap<String, Node>>) -> Self {
        let memo = inputs.into_iter().map(|(k, v)| (k, Val::Scalar(v))).collect();
        Env {
            nslots,
            defs,
            memo: RefCell::new(memo),
            active: RefCell::new(HashSet::new()),
        }
    }

    pub fn scalar(&self, name: &str) -> Result<Rat> {
        self.lookup(name)?
            .as_scalar()
            .ok_or_else(|| Error::Catalog(format!("{name} is not a scalar")))
    }

    fn lookup(&self, name: &str) -> Result<Val> {
        if let Some(v) = self.memo.borrow().get(name) {
            return Ok(v.clone());
        }
        let def = self
            .defs
            .iter()
            .find_map(|d| d.get(name))
            .ok_or_else(|| Error::Catalog(format!("undefined symbol {name}")))?;
        if !self.active.borrow_mut().insert(name.to_string()) {
            return Err(Error::Catalog(format!("cyclic definition of {name}")));
        }
        let v = self.eval(def);
        self.active.borrow_mut().remove(name);
        let v = v?;
        self.memo.borrow_mut().insert(name.to_string(), v.clone());
        Ok(v)
    }

    pub fn eval(&self, n: &Node) -> Result<Val> {
        let ns = self.nslots;
        Ok(match n {
            Node::Const(r) => Val::Scalar(r.clone()),
            Node::Sym(s) => self.lookup(s)?,
            Node::X => self.mono(vec![0; ns], None, Poly::x()),
            Node::Slot(i, k) => {
                let mut shift = vec![0; ns];
                shift[*i] = *k;
                self.mono(shift, None, Poly::one())
            }
            Node::Transc(kind) => self.mono(vec![0; ns], Some(*kind), Poly::one()),
            Node::Int(c) => {
                let inner = self.eval(c)?.compound(ns);
                if !inner.ints.is_empty() {
                    return Err(defect("nested integral"));
                }
                Val::Compound(Box::new(Compound {
                    fun: FunSum::new(),
                    ints: vec![(Rat::one(), inner.fun)],
                }))
            }
            Node::Add(v) => {
                let mut acc = Val::Scalar(Rat::zero());
                for t in v {
                    acc = acc.add(self.eval(t)?, ns);
                }
                acc
            }
            Node::Neg(a) => self.eval(a)?.neg(),
            Node::Mul(v) => {
                let mut acc = Val::Scalar(Rat::one());
                for t in v {
                    acc = acc.mul(self.eval(t)?, ns)?;
                }
                acc
            }
            Node::Div(a, b) => {
                let d = self
                    .eval(b)?
                    .as_scalar()
                    .ok_or_else(|| defect("division by a non-constant"))?;
                if d.is_zero() {
                    return Err(Error::ExceptionalParameters("a divisor vanishes".into()));
                }
                self.eval(a)?.mul(Val::Scalar(d.recip()), ns)?
            }
            Node::Pow(a, k) => {
                let base = self.eval(a)?;
                if let Val::Scalar(r) = &base {
                    Val::Scalar(r.pow(*k as i32))
                } else {
                    let mut acc = Val::Scalar(Rat::one());
                    for _ in 0..*k {
                        acc = acc.mul(base.clone(), ns)?;
                    }
                    acc
                }
            }
        })
    }

    fn mono(&self, shift: Vec<i32>, transc: Option<TranscKind>, p: Poly) -> Val {
        let mut fun = FunSum::new();
        fun.insert(Mono { shift, transc }, p);
        Val::Compound(Box::new(Compound { fun, ints: Vec::new() }))
    }

    pub fn eval_compound(&self, n: &Node) -> Result<Compound> {
        Ok(self.eval(n)?.compound(self.nslots))
    }
}
