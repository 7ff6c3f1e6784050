//! Text expressions for the coefficient `q(t)` and the nonlinearity `f(u)`.
//!
//! The grammar is deliberately small:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | variable | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` binds tightest and is right-associative, unary minus sits below it
//! (`-t^2` is `-(t^2)`), and there is no implicit multiplication. Functions
//! come from a closed catalog: `exp`, `cosh`, `sinh`, `sqrt`, `log`, `abs`.

use std::fmt;

use thiserror::Error;

/// The single free symbol an expression is parsed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    T,
    U,
}

impl Variable {
    pub fn symbol(self) -> &'static str {
        match self {
            Variable::T => "t",
            Variable::U => "u",
        }
    }

    fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "t" => Some(Variable::T),
            "u" => Some(Variable::U),
            _ => None,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Cosh,
    Sinh,
    Sqrt,
    Log,
    Abs,
}

impl Func {
    pub const ALL: [Func; 6] = [
        Func::Exp,
        Func::Cosh,
        Func::Sinh,
        Func::Sqrt,
        Func::Log,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Cosh => "cosh",
            Func::Sinh => "sinh",
            Func::Sqrt => "sqrt",
            Func::Log => "log",
            Func::Abs => "abs",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

/// Expression tree node.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var,
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

const PREC_NEG: u8 = 3;
const PREC_ATOM: u8 = 5;

impl Node {
    fn precedence(&self) -> u8 {
        match self {
            Node::Const(c) if *c < 0.0 || c.is_sign_negative() => PREC_NEG,
            Node::Const(_) | Node::Var | Node::Call(..) => PREC_ATOM,
            Node::Neg(_) => PREC_NEG,
            Node::Binary(op, ..) => op.precedence(),
        }
    }

    fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let v = match self {
            Node::Const(c) => *c,
            Node::Var => x,
            Node::Neg(e) => -e.eval(x)?,
            Node::Binary(op, l, r) => {
                let l = l.eval(x)?;
                let r = r.eval(x)?;
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => {
                        if r == 0.0 {
                            return Err(EvalError::DivisionByZero { at: x });
                        }
                        l / r
                    }
                    BinOp::Pow => {
                        if l < 0.0 && r.fract() != 0.0 {
                            return Err(EvalError::FractionalPowerOfNegative {
                                base: l,
                                exponent: r,
                                at: x,
                            });
                        }
                        if l == 0.0 && r < 0.0 {
                            return Err(EvalError::DivisionByZero { at: x });
                        }
                        l.powf(r)
                    }
                }
            }
            Node::Call(func, arg) => {
                let a = arg.eval(x)?;
                match func {
                    Func::Exp => a.exp(),
                    Func::Cosh => a.cosh(),
                    Func::Sinh => a.sinh(),
                    Func::Sqrt => {
                        if a < 0.0 {
                            return Err(EvalError::SqrtOfNegative { arg: a, at: x });
                        }
                        a.sqrt()
                    }
                    Func::Log => {
                        if a <= 0.0 {
                            return Err(EvalError::LogOfNonPositive { arg: a, at: x });
                        }
                        a.ln()
                    }
                    Func::Abs => a.abs(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { at: x })
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, var: Variable) -> fmt::Result {
        match self {
            Node::Const(c) => {
                if c.is_sign_negative() {
                    write!(f, "(-{})", -c)
                } else {
                    write!(f, "{c}")
                }
            }
            Node::Var => f.write_str(var.symbol()),
            Node::Neg(e) => {
                f.write_str("-")?;
                e.write_min(f, var, PREC_NEG)
            }
            Node::Binary(op, l, r) => {
                let p = op.precedence();
                let (lmin, rmin) = match op {
                    // right-associative; the exponent is parsed as `unary`
                    BinOp::Pow => (PREC_ATOM, PREC_NEG),
                    _ => (p, p + 1),
                };
                l.write_min(f, var, lmin)?;
                write!(f, " {} ", op.symbol())?;
                r.write_min(f, var, rmin)
            }
            Node::Call(func, arg) => {
                write!(f, "{}(", func.name())?;
                arg.write(f, var)?;
                f.write_str(")")
            }
        }
    }

    fn write_min(&self, f: &mut fmt::Formatter<'_>, var: Variable, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write(f, var)?;
            f.write_str(")")
        } else {
            self.write(f, var)
        }
    }
}

/// A parsed expression in one declared variable.
///
/// Immutable after parsing; `Expr` is `Send + Sync` and evaluation is
/// re-entrant.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    var: Variable,
    source: String,
}

impl Expr {
    pub fn parse(source: &str, var: Variable) -> Result<Self, ParseError> {
        let tokens = lex(source)?;
        if tokens.is_empty() {
            return Err(ParseError::Empty);
        }
        let mut p = Parser {
            tokens: &tokens,
            pos: 0,
            var,
            end: source.len(),
        };
        let root = p.expr()?;
        if let Some(tok) = p.peek() {
            return Err(ParseError::Syntax {
                offset: tok.offset,
                message: format!("unexpected {}", tok.kind.describe()),
            });
        }
        Ok(Expr {
            root,
            var,
            source: source.to_string(),
        })
    }

    /// Builds an expression directly from a tree.
    pub fn from_node(root: Node, var: Variable) -> Self {
        let source = Expr {
            root: root.clone(),
            var,
            source: String::new(),
        }
        .to_string();
        Expr { root, var, source }
    }

    pub fn identity(var: Variable) -> Self {
        Expr::from_node(Node::Var, var)
    }

    pub fn constant(c: f64, var: Variable) -> Self {
        Expr::from_node(Node::Const(c), var)
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        self.root.eval(x)
    }

    pub fn variable(&self) -> Variable {
        self.var
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// The text this expression was parsed from.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// True when the tree is the bare variable, i.e. `f(u) = u`.
    pub fn is_identity(&self) -> bool {
        matches!(self.root, Node::Var)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write(f, self.var)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("variable `{found}` at offset {offset} is not allowed here; expected `{expected}`")]
    WrongVariable {
        found: Variable,
        expected: Variable,
        offset: usize,
    },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::WrongVariable { offset, .. } => Some(*offset),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero at {at}")]
    DivisionByZero { at: f64 },
    #[error("sqrt of negative argument {arg} at {at}")]
    SqrtOfNegative { arg: f64, at: f64 },
    #[error("log of non-positive argument {arg} at {at}")]
    LogOfNonPositive { arg: f64, at: f64 },
    #[error("negative base {base} raised to fractional power {exponent} at {at}")]
    FractionalPowerOfNegative { base: f64, exponent: f64, at: f64 },
    #[error("non-finite value at {at}")]
    NonFinite { at: f64 },
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Number(n) => format!("number {n}"),
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Op(c) => format!("`{c}`"),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == '.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                offset: start,
                message: format!("malformed number `{text}`"),
            })?;
            out.push(Token {
                kind: TokenKind::Number(value),
                offset: start,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                kind: TokenKind::Ident(src[start..i].to_string()),
                offset: start,
            });
        } else {
            let kind = match c {
                '+' | '-' | '*' | '/' | '^' => TokenKind::Op(c),
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                _ => {
                    return Err(ParseError::Syntax {
                        offset: start,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            };
            out.push(Token { kind, offset: start });
            i += c.len_utf8();
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    var: Variable,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self) -> Option<char> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Op(c),
                ..
            }) => Some(*c),
            _ => None,
        }
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(tok) => ParseError::Syntax {
                offset: tok.offset,
                message: format!("expected {wanted}, found {}", tok.kind.describe()),
            },
            None => ParseError::Syntax {
                offset: self.end,
                message: format!("expected {wanted}, found end of input"),
            },
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Node::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::RParen,
                ..
            }) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.unexpected("`)`")),
        }
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.unexpected("an operand"));
        };
        match tok.kind {
            TokenKind::Number(v) => {
                self.pos += 1;
                Ok(Node::Const(v))
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            TokenKind::Ident(name) => {
                self.pos += 1;
                if let Some(v) = Variable::from_symbol(&name) {
                    if v != self.var {
                        return Err(ParseError::WrongVariable {
                            found: v,
                            expected: self.var,
                            offset: tok.offset,
                        });
                    }
                    return Ok(Node::Var);
                }
                let Some(func) = Func::from_name(&name) else {
                    return Err(ParseError::UnknownIdentifier {
                        name,
                        offset: tok.offset,
                    });
                };
                match self.peek() {
                    Some(Token {
                        kind: TokenKind::LParen,
                        ..
                    }) => self.pos += 1,
                    _ => {
                        return Err(ParseError::Syntax {
                            offset: self.offset(),
                            message: format!("expected `(` after `{}`", func.name()),
                        })
                    }
                }
                let arg = self.expr()?;
                self.expect_rparen()?;
                Ok(Node::Call(func, Box::new(arg)))
            }
            _ => Err(self.unexpected("an operand")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Expr {
        Expr::parse(s, Variable::T).unwrap()
    }

    fn u(s: &str) -> Expr {
        Expr::parse(s, Variable::U).unwrap()
    }

    #[test]
    fn power_of_t() {
        assert_eq!(t("t^2").eval(3.0).unwrap(), 9.0);
    }

    #[test]
    fn example_two_nonlinearity() {
        let v = u("exp(-1/(u+1))").eval(0.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn dangling_operator_reports_offset() {
        let err = Expr::parse("2*", Variable::T).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 2, .. }), "{err:?}");
    }

    #[test]
    fn catalog_values() {
        assert_eq!(u("cosh(u)").eval(0.0).unwrap(), 1.0);
        assert_eq!(t("sqrt(t)").eval(0.25).unwrap(), 0.5);
        assert_eq!(t("abs(t - 3)").eval(1.0).unwrap(), 2.0);
        assert_eq!(t("log(t)").eval(1.0).unwrap(), 0.0);
        assert_eq!(t("sinh(t)").eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            t("1/t").eval(0.0),
            Err(EvalError::DivisionByZero { .. })
        ));
        assert!(matches!(
            t("sqrt(t)").eval(-1.0),
            Err(EvalError::SqrtOfNegative { .. })
        ));
        assert!(matches!(
            t("log(t)").eval(0.0),
            Err(EvalError::LogOfNonPositive { .. })
        ));
        assert!(matches!(
            t("t^0.5").eval(-4.0),
            Err(EvalError::FractionalPowerOfNegative { .. })
        ));
        assert!(matches!(
            t("exp(t)").eval(1000.0),
            Err(EvalError::NonFinite { .. })
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(t("-t^2").eval(3.0).unwrap(), -9.0);
        assert_eq!(t("2^3^2").eval(0.0).unwrap(), 512.0);
        assert_eq!(t("2^-1").eval(0.0).unwrap(), 0.5);
        assert_eq!(t("8 - 3 - 2").eval(0.0).unwrap(), 3.0);
        assert_eq!(t("8 / 4 / 2").eval(0.0).unwrap(), 1.0);
        assert_eq!(t("1 + 2 * 3").eval(0.0).unwrap(), 7.0);
        assert_eq!(t("(1 + 2) * 3").eval(0.0).unwrap(), 9.0);
        assert_eq!(t("1.5e1 + 2E-1").eval(0.0).unwrap(), 15.2);
    }

    #[test]
    fn wrong_variable_and_unknown_names() {
        let err = Expr::parse("cosh(u)", Variable::T).unwrap_err();
        assert!(matches!(err, ParseError::WrongVariable { offset: 5, .. }));
        let err = Expr::parse("t + x", Variable::T).unwrap_err();
        assert!(matches!(err, ParseError::UnknownIdentifier { ref name, offset: 4 } if name == "x"));
        let err = Expr::parse("tan(t)", Variable::T).unwrap_err();
        assert!(matches!(err, ParseError::UnknownIdentifier { .. }));
    }

    #[test]
    fn no_implicit_multiplication() {
        assert!(Expr::parse("2t", Variable::T).is_err());
        assert!(Expr::parse("2 (t)", Variable::T).is_err());
        assert!(Expr::parse("exp t", Variable::T).is_err());
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(Expr::parse("", Variable::T).unwrap_err(), ParseError::Empty);
        assert_eq!(Expr::parse("   ", Variable::T).unwrap_err(), ParseError::Empty);
        assert!(Expr::parse("(t", Variable::T).is_err());
        assert!(Expr::parse("t)", Variable::T).is_err());
        assert!(Expr::parse("1..2", Variable::T).is_err());
        assert!(Expr::parse("t # 2", Variable::T).is_err());
    }

    #[test]
    fn identity_detection() {
        assert!(u("u").is_identity());
        assert!(u("(u)").is_identity());
        assert!(!u("u/2").is_identity());
    }

    #[test]
    fn display_reparses() {
        for s in [
            "-t^2",
            "(-t)^2",
            "2^3^2",
            "(2^3)^2",
            "1 - (2 - t)",
            "t / (2 * t)",
            "--t",
            "2^-t^2",
        ] {
            let e = t(s);
            let printed = e.to_string();
            let again = t(&printed);
            assert_eq!(e.root(), again.root(), "{s} -> {printed}");
        }
    }
}
