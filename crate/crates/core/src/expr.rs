//! A small arithmetic language for symbols over `t`, `x1..xn`, `xi1..xin`
//! and `bracket_xi`.
//!
//! ```
//! use hypsym::expr::{Expr, Point};
//! let e = Expr::parse("t + 2*x1^2 - bracket_xi").unwrap();
//! let p = Point::new(0.5, vec![1.0], vec![0.0]);
//! assert_eq!(e.eval(&p), 1.5);
//! ```

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("parse error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("function `{name}` at position {pos} takes {expected} argument(s), got {found}")]
    Arity {
        pos: usize,
        name: String,
        expected: &'static str,
        found: usize,
    },
}

/// An evaluation point `(t, x, ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub t: f64,
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl Point {
    pub fn new(t: f64, x: Vec<f64>, xi: Vec<f64>) -> Self {
        Self { t, x, xi }
    }

    /// `⟨ξ⟩ = (1 + |ξ|²)^{1/2}`.
    pub fn bracket_xi(&self) -> f64 {
        bracket(&self.xi)
    }

    pub fn with_t(&self, t: f64) -> Self {
        Self {
            t,
            x: self.x.clone(),
            xi: self.xi.clone(),
        }
    }
}

pub fn bracket(xi: &[f64]) -> f64 {
    (1.0 + xi.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    T,
    X(usize),
    Xi(usize),
    BracketXi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Abs,
    Sqrt,
    Exp,
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(Var),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

/// A parsed expression. Keeps its source text for serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    src: String,
    root: Node,
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.src)
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self, ExprError> {
        Self::parse_with(src, &BTreeMap::new())
    }

    /// Parses with named constants substituted at parse time.
    pub fn parse_with(src: &str, consts: &BTreeMap<String, f64>) -> Result<Self, ExprError> {
        let mut p = Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            consts,
        };
        let root = p.expr()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(Self {
            src: src.to_string(),
            root,
        })
    }

    pub fn constant(v: f64) -> Self {
        Self {
            src: fmt_f64(v),
            root: Node::Num(v),
        }
    }

    pub fn source(&self) -> &str {
        &self.src
    }

    pub fn eval(&self, p: &Point) -> f64 {
        eval(&self.root, p)
    }

    /// Largest `k` with `xk` referenced (0 if none).
    pub fn x_arity(&self) -> usize {
        arity(&self.root, |v| match v {
            Var::X(k) => k,
            _ => 0,
        })
    }

    /// Largest `k` with `xik` referenced (0 if none).
    pub fn xi_arity(&self) -> usize {
        arity(&self.root, |v| match v {
            Var::Xi(k) => k,
            _ => 0,
        })
    }

    /// True if no `x` variable occurs syntactically.
    pub fn is_x_free(&self) -> bool {
        self.x_arity() == 0
    }
}

macro_rules! expr_binop {
    ($trait:ident, $method:ident, $op:expr, $sym:literal) => {
        impl std::ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr {
                    src: format!(concat!("({})", $sym, "({})"), self.src, rhs.src),
                    root: Node::Bin($op, Box::new(self.root), Box::new(rhs.root)),
                }
            }
        }
    };
}

expr_binop!(Add, add, BinOp::Add, " + ");
expr_binop!(Sub, sub, BinOp::Sub, " - ");
expr_binop!(Mul, mul, BinOp::Mul, "*");
expr_binop!(Div, div, BinOp::Div, "/");

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            src: format!("-({})", self.src),
            root: Node::Neg(Box::new(self.root)),
        }
    }
}

impl Expr {
    pub fn powi(self, n: i32) -> Expr {
        Expr {
            src: format!("({})^{n}", self.src),
            root: Node::Bin(BinOp::Pow, Box::new(self.root), Box::new(Node::Num(n as f64))),
        }
    }

    pub fn bracket_xi() -> Expr {
        Expr {
            src: "bracket_xi".into(),
            root: Node::Var(Var::BracketXi),
        }
    }
}

fn fmt_f64(v: f64) -> String {
    // `{:?}` on f64 is the shortest round-trip representation
    if v < 0.0 {
        format!("({v:?})")
    } else {
        format!("{v:?}")
    }
}

fn arity(n: &Node, f: impl Fn(Var) -> usize + Copy) -> usize {
    match n {
        Node::Num(_) => 0,
        Node::Var(v) => f(*v),
        Node::Neg(a) => arity(a, f),
        Node::Bin(_, a, b) => arity(a, f).max(arity(b, f)),
        Node::Call(_, args) => args.iter().map(|a| arity(a, f)).max().unwrap_or(0),
    }
}

fn eval(n: &Node, p: &Point) -> f64 {
    match n {
        Node::Num(v) => *v,
        Node::Var(Var::T) => p.t,
        Node::Var(Var::X(k)) => p.x.get(k - 1).copied().unwrap_or(0.0),
        Node::Var(Var::Xi(k)) => p.xi.get(k - 1).copied().unwrap_or(0.0),
        Node::Var(Var::BracketXi) => p.bracket_xi(),
        Node::Neg(a) => -eval(a, p),
        Node::Bin(op, a, b) => {
            let (a, b) = (eval(a, p), eval(b, p));
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
                BinOp::Pow => pow(a, b),
            }
        }
        Node::Call(f, args) => match f {
            Func::Abs => eval(&args[0], p).abs(),
            Func::Sqrt => eval(&args[0], p).sqrt(),
            Func::Exp => eval(&args[0], p).exp(),
            Func::Min => args.iter().map(|a| eval(a, p)).fold(f64::INFINITY, f64::min),
            Func::Max => args
                .iter()
                .map(|a| eval(a, p))
                .fold(f64::NEG_INFINITY, f64::max),
        },
    }
}

fn pow(a: f64, b: f64) -> f64 {
    if b.fract() == 0.0 && b.abs() <= 64.0 {
        a.powi(b as i32)
    } else {
        a.powf(b)
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    consts: &'a BTreeMap<String, f64>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ExprError {
        ExprError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    // term := unary (('*'|'/') unary)*
    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    // unary := ('-'|'+') unary | power
    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.eat(b'-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    // power := atom ('^' unary)?   (right associative, binds tighter than unary minus on the left)
    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            return Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(_) => Err(self.err("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        let b = self.bytes;
        while self.pos < b.len() && (b[self.pos].is_ascii_digit() || b[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < b.len() && (b[self.pos] == b'e' || b[self.pos] == b'E') {
            let mut q = self.pos + 1;
            if q < b.len() && (b[q] == b'+' || b[q] == b'-') {
                q += 1;
            }
            if q < b.len() && b[q].is_ascii_digit() {
                while q < b.len() && b[q].is_ascii_digit() {
                    q += 1;
                }
                self.pos = q;
            }
        }
        self.src[start..self.pos]
            .parse::<f64>()
            .map(Node::Num)
            .map_err(|_| ExprError::Syntax {
                pos: start,
                msg: "malformed number".into(),
            })
    }

    fn ident(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        let b = self.bytes;
        while self.pos < b.len() && (b[self.pos].is_ascii_alphanumeric() || b[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        let func = match name {
            "abs" => Some((Func::Abs, 1..=1, "1")),
            "sqrt" => Some((Func::Sqrt, 1..=1, "1")),
            "exp" => Some((Func::Exp, 1..=1, "1")),
            "min" => Some((Func::Min, 2..=usize::MAX, "at least 2")),
            "max" => Some((Func::Max, 2..=usize::MAX, "at least 2")),
            _ => None,
        };
        if let Some((f, range, expected)) = func {
            if !self.eat(b'(') {
                return Err(self.err("expected `(` after function name"));
            }
            let mut args = vec![self.expr()?];
            while self.eat(b',') {
                args.push(self.expr()?);
            }
            if !self.eat(b')') {
                return Err(self.err("expected `)` or `,`"));
            }
            if !range.contains(&args.len()) {
                return Err(ExprError::Arity {
                    pos: start,
                    name: name.to_string(),
                    expected,
                    found: args.len(),
                });
            }
            return Ok(Node::Call(f, args));
        }
        let var = match name {
            "t" => Some(Var::T),
            "bracket_xi" => Some(Var::BracketXi),
            _ => index_var(name, "xi")
                .map(Var::Xi)
                .or_else(|| index_var(name, "x").map(Var::X)),
        };
        if let Some(v) = var {
            return Ok(Node::Var(v));
        }
        if let Some(&v) = self.consts.get(name) {
            return Ok(Node::Num(v));
        }
        Err(ExprError::UnknownIdentifier {
            pos: start,
            name: name.to_string(),
        })
    }
}

fn index_var(name: &str, prefix: &str) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || rest.starts_with('0') || !rest.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}
