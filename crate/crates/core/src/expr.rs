//! Arithmetic expressions over named real variables.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?          (right associative)
//! atom   := number | variable | func '(' expr ')' | '(' expr ')'
//! func   := sqrt | sin | cos | cosh | sinh | exp | log
//! ```
//!
//! So `-s^2` is `-(s^2)`, `2^3^2` is `2^9` and `2*s+-3` is `2s - 3`.
//! Derivatives come either from dual-number evaluation (forward mode) or as a
//! new expression tree from [`Expression::derivative`].

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("parse error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Sin,
    Cos,
    Cosh,
    Sinh,
    Exp,
    Log,
}

impl Func {
    const ALL: [(&'static str, Func); 7] = [
        ("sqrt", Func::Sqrt),
        ("sin", Func::Sin),
        ("cos", Func::Cos),
        ("cosh", Func::Cosh),
        ("sinh", Func::Sinh),
        ("exp", Func::Exp),
        ("log", Func::Log),
    ];

    fn lookup(name: &str) -> Option<Func> {
        Self::ALL.iter().find(|(n, _)| *n == name).map(|(_, f)| *f)
    }

    fn name(self) -> &'static str {
        Self::ALL.iter().find(|(_, f)| *f == self).map(|(n, _)| *n).unwrap()
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sqrt => x.sqrt(),
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Cosh => x.cosh(),
            Func::Sinh => x.sinh(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
        }
    }

    /// f'(x)
    fn slope(self, x: f64) -> f64 {
        match self {
            Func::Sqrt => 0.5 / x.sqrt(),
            Func::Sin => x.cos(),
            Func::Cos => -x.sin(),
            Func::Cosh => x.sinh(),
            Func::Sinh => x.cosh(),
            Func::Exp => x.exp(),
            Func::Log => 1.0 / x,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed expression together with the variable names it was parsed against.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    text: String,
    vars: Vec<String>,
    root: Node,
}

impl Expression {
    /// Parses `text` as a function of the single variable `s`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Self::parse_with_vars(text, &["s"])
    }

    pub fn parse_with_vars(text: &str, vars: &[&str]) -> Result<Self, ParseError> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { tokens: &tokens, pos: 0, vars, len: text.len() };
        let root = parser.expr()?;
        if parser.pos < tokens.len() {
            return Err(parser.error(&["operator", "end of input"]));
        }
        Ok(Self { text: text.to_string(), vars: vars.iter().map(|v| v.to_string()).collect(), root })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn eval(&self, vals: &[f64]) -> f64 {
        eval(&self.root, vals)
    }

    /// Value and partial derivative with respect to variable `wrt`, by
    /// forward-mode (dual number) evaluation.
    pub fn eval_dual(&self, vals: &[f64], wrt: usize) -> (f64, f64) {
        let d = dual(&self.root, vals, wrt);
        (d.v, d.d)
    }

    /// Single-variable convenience: value and derivative at `s`.
    pub fn eval_with_derivative(&self, s: f64) -> (f64, f64) {
        self.eval_dual(&[s], 0)
    }

    /// Symbolic partial derivative with respect to variable `wrt`.
    pub fn derivative(&self, wrt: usize) -> Expression {
        let root = differentiate(&self.root, wrt);
        Expression { text: root.to_string(), vars: self.vars.clone(), root }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(v) => write!(f, "{v}"),
            Node::Var(i) => write!(f, "${i}"),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            Node::Div(a, b) => write!(f, "({a} / {b})"),
            Node::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

fn eval(node: &Node, vals: &[f64]) -> f64 {
    match node {
        Node::Num(v) => *v,
        Node::Var(i) => vals[*i],
        Node::Neg(a) => -eval(a, vals),
        Node::Add(a, b) => eval(a, vals) + eval(b, vals),
        Node::Sub(a, b) => eval(a, vals) - eval(b, vals),
        Node::Mul(a, b) => eval(a, vals) * eval(b, vals),
        Node::Div(a, b) => eval(a, vals) / eval(b, vals),
        Node::Pow(a, b) => pow(eval(a, vals), eval(b, vals)),
        Node::Call(func, a) => func.apply(eval(a, vals)),
    }
}

fn pow(base: f64, exponent: f64) -> f64 {
    if exponent.fract() == 0.0 && exponent.abs() < i32::MAX as f64 {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    }
}

#[derive(Debug, Clone, Copy)]
struct Dual {
    v: f64,
    d: f64,
}

fn dual(node: &Node, vals: &[f64], wrt: usize) -> Dual {
    match node {
        Node::Num(v) => Dual { v: *v, d: 0.0 },
        Node::Var(i) => Dual { v: vals[*i], d: if *i == wrt { 1.0 } else { 0.0 } },
        Node::Neg(a) => {
            let a = dual(a, vals, wrt);
            Dual { v: -a.v, d: -a.d }
        }
        Node::Add(a, b) => {
            let (a, b) = (dual(a, vals, wrt), dual(b, vals, wrt));
            Dual { v: a.v + b.v, d: a.d + b.d }
        }
        Node::Sub(a, b) => {
            let (a, b) = (dual(a, vals, wrt), dual(b, vals, wrt));
            Dual { v: a.v - b.v, d: a.d - b.d }
        }
        Node::Mul(a, b) => {
            let (a, b) = (dual(a, vals, wrt), dual(b, vals, wrt));
            Dual { v: a.v * b.v, d: a.d * b.v + a.v * b.d }
        }
        Node::Div(a, b) => {
            let (a, b) = (dual(a, vals, wrt), dual(b, vals, wrt));
            Dual { v: a.v / b.v, d: (a.d * b.v - a.v * b.d) / (b.v * b.v) }
        }
        Node::Pow(a, b) => {
            let (a, b) = (dual(a, vals, wrt), dual(b, vals, wrt));
            let v = pow(a.v, b.v);
            let d = if b.d == 0.0 {
                if a.d == 0.0 {
                    0.0
                } else {
                    b.v * pow(a.v, b.v - 1.0) * a.d
                }
            } else {
                v * (b.d * a.v.ln() + b.v * a.d / a.v)
            };
            Dual { v, d }
        }
        Node::Call(func, a) => {
            let a = dual(a, vals, wrt);
            Dual { v: func.apply(a.v), d: func.slope(a.v) * a.d }
        }
    }
}

fn depends_on(node: &Node, wrt: usize) -> bool {
    match node {
        Node::Num(_) => false,
        Node::Var(i) => *i == wrt,
        Node::Neg(a) | Node::Call(_, a) => depends_on(a, wrt),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
            depends_on(a, wrt) || depends_on(b, wrt)
        }
    }
}

fn num(v: f64) -> Node {
    Node::Num(v)
}

fn is_num(node: &Node, v: f64) -> bool {
    matches!(node, Node::Num(x) if *x == v)
}

fn add(a: Node, b: Node) -> Node {
    if is_num(&a, 0.0) {
        b
    } else if is_num(&b, 0.0) {
        a
    } else {
        Node::Add(Box::new(a), Box::new(b))
    }
}

fn sub(a: Node, b: Node) -> Node {
    if is_num(&b, 0.0) {
        a
    } else if is_num(&a, 0.0) {
        neg(b)
    } else {
        Node::Sub(Box::new(a), Box::new(b))
    }
}

fn mul(a: Node, b: Node) -> Node {
    if is_num(&a, 0.0) || is_num(&b, 0.0) {
        num(0.0)
    } else if is_num(&a, 1.0) {
        b
    } else if is_num(&b, 1.0) {
        a
    } else {
        Node::Mul(Box::new(a), Box::new(b))
    }
}

fn div(a: Node, b: Node) -> Node {
    if is_num(&a, 0.0) {
        num(0.0)
    } else if is_num(&b, 1.0) {
        a
    } else {
        Node::Div(Box::new(a), Box::new(b))
    }
}

fn neg(a: Node) -> Node {
    match a {
        Node::Num(v) => num(-v),
        Node::Neg(inner) => *inner,
        other => Node::Neg(Box::new(other)),
    }
}

fn call(func: Func, a: Node) -> Node {
    Node::Call(func, Box::new(a))
}

fn differentiate(node: &Node, wrt: usize) -> Node {
    if !depends_on(node, wrt) {
        return num(0.0);
    }
    match node {
        Node::Num(_) => num(0.0),
        Node::Var(_) => num(1.0),
        Node::Neg(a) => neg(differentiate(a, wrt)),
        Node::Add(a, b) => add(differentiate(a, wrt), differentiate(b, wrt)),
        Node::Sub(a, b) => sub(differentiate(a, wrt), differentiate(b, wrt)),
        Node::Mul(a, b) => add(
            mul(differentiate(a, wrt), (**b).clone()),
            mul((**a).clone(), differentiate(b, wrt)),
        ),
        Node::Div(a, b) => div(
            sub(
                mul(differentiate(a, wrt), (**b).clone()),
                mul((**a).clone(), differentiate(b, wrt)),
            ),
            Node::Pow(b.clone(), Box::new(num(2.0))),
        ),
        Node::Pow(a, b) => {
            if !depends_on(b, wrt) {
                // b * a^(b-1) * a'
                let lowered = Node::Pow(a.clone(), Box::new(sub((**b).clone(), num(1.0))));
                mul(mul((**b).clone(), lowered), differentiate(a, wrt))
            } else {
                // a^b * (b' ln a + b a' / a)
                mul(
                    node.clone(),
                    add(
                        mul(differentiate(b, wrt), call(Func::Log, (**a).clone())),
                        div(mul((**b).clone(), differentiate(a, wrt)), (**a).clone()),
                    ),
                )
            }
        }
        Node::Call(func, a) => {
            let inner = (**a).clone();
            let outer = match func {
                Func::Sqrt => div(num(0.5), call(Func::Sqrt, inner)),
                Func::Sin => call(Func::Cos, inner),
                Func::Cos => neg(call(Func::Sin, inner)),
                Func::Cosh => call(Func::Sinh, inner),
                Func::Sinh => call(Func::Cosh, inner),
                Func::Exp => call(Func::Exp, inner),
                Func::Log => div(num(1.0), inner),
            };
            mul(outer, differentiate(a, wrt))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(name) => format!("'{name}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let lexeme = &text[i..j];
                let value = lexeme.parse::<f64>().map_err(|_| ParseError {
                    offset: start,
                    expected: vec!["number".into()],
                    found: format!("'{lexeme}'"),
                })?;
                out.push((start, Tok::Num(value)));
                i = j;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                out.push((start, Tok::Ident(text[i..j].to_string())));
                i = j;
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(ParseError {
                    offset: start,
                    expected: vec!["number".into(), "variable".into(), "operator".into()],
                    found: format!("'{ch}'"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [(usize, Tok)],
    pos: usize,
    vars: &'a [&'a str],
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.iter().map(|e| e.to_string()).collect(),
            found: self.peek().map_or_else(|| "end of input".to_string(), Tok::describe),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let expected = ["number", "variable", "function", "'('", "'-'"];
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Node::Num(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.close()?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    self.pos += 1;
                    return Ok(Node::Var(i));
                }
                if let Some(func) = Func::lookup(&name) {
                    self.pos += 1;
                    if self.peek() != Some(&Tok::LParen) {
                        return Err(self.error(&["'('"]));
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.close()?;
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                let mut names: Vec<String> = self.vars.iter().map(|v| format!("'{v}'")).collect();
                names.extend(Func::ALL.iter().map(|(n, _)| format!("'{n}'")));
                Err(ParseError {
                    offset: self.offset(),
                    expected: names,
                    found: format!("'{name}'"),
                })
            }
            _ => Err(self.error(&expected)),
        }
    }

    fn close(&mut self) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&["')'"]))
        }
    }
}
