//! Boolean expression parser.
//!
//! ```text
//! expr   := xor ('|' xor)*
//! xor    := term ('^' term)*
//! term   := factor ('&' factor)*
//! factor := '!' factor | '(' expr ')' | ident
//! ```

use std::fmt;

use crate::error::{Error, ParseError, Result};

/// Most distinct variables an expression may reference.
pub const MAX_VARS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    /// Index into [`BoolExpr::vars`].
    Var(usize),
    Not(Box<Expr>),
    /// Operands of a chain of the same operator, at least two.
    And(Vec<Expr>),
    Xor(Vec<Expr>),
    Or(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoolExpr {
    /// Variables in order of first appearance.
    pub vars: Vec<String>,
    pub root: Expr,
}

impl Expr {
    pub fn eval(&self, assignment: &[bool]) -> bool {
        match &self.kind {
            ExprKind::Var(i) => assignment[*i],
            ExprKind::Not(e) => !e.eval(assignment),
            ExprKind::And(xs) => xs.iter().all(|x| x.eval(assignment)),
            ExprKind::Xor(xs) => xs.iter().fold(false, |acc, x| acc ^ x.eval(assignment)),
            ExprKind::Or(xs) => xs.iter().any(|x| x.eval(assignment)),
        }
    }

    /// Evaluates 64 assignments at once; bit `k` of each variable mask is
    /// that variable's value in assignment `k`.
    pub fn eval_block(&self, var_masks: &[u64]) -> u64 {
        match &self.kind {
            ExprKind::Var(i) => var_masks[*i],
            ExprKind::Not(e) => !e.eval_block(var_masks),
            ExprKind::And(xs) => xs.iter().fold(!0, |acc, x| acc & x.eval_block(var_masks)),
            ExprKind::Xor(xs) => xs.iter().fold(0, |acc, x| acc ^ x.eval_block(var_masks)),
            ExprKind::Or(xs) => xs.iter().fold(0, |acc, x| acc | x.eval_block(var_masks)),
        }
    }
}

impl BoolExpr {
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.root.eval(assignment)
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(e: &Expr, vars: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match &e.kind {
                ExprKind::Var(i) => f.write_str(&vars[*i]),
                ExprKind::Not(x) => {
                    f.write_str("!")?;
                    go(x, vars, f)
                }
                ExprKind::And(xs) | ExprKind::Xor(xs) | ExprKind::Or(xs) => {
                    let op = match &e.kind {
                        ExprKind::And(..) => " & ",
                        ExprKind::Xor(..) => " ^ ",
                        _ => " | ",
                    };
                    f.write_str("(")?;
                    for (i, x) in xs.iter().enumerate() {
                        if i > 0 {
                            f.write_str(op)?;
                        }
                        go(x, vars, f)?;
                    }
                    f.write_str(")")
                }
            }
        }
        go(&self.root, &self.vars, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Xor,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Xor => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> std::result::Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut id = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    id.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(id), pos));
            continue;
        }
        let tok = match c {
            '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '^' => Tok::Xor,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err(ParseError::new(line, column, format!("unexpected character `{other}`"))),
        };
        chars.next();
        column += 1;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    vars: Vec<String>,
    depth: usize,
}

/// Nesting limit, so hostile input cannot exhaust the stack.
const MAX_DEPTH: usize = 128;

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, msg: String) -> Error {
        let (_, pos) = self.peek();
        ParseError::new(pos.line, pos.column, msg).into()
    }

    fn binary(
        &mut self,
        op: Tok,
        next: fn(&mut Self) -> Result<Expr>,
        build: fn(Vec<Expr>) -> ExprKind,
    ) -> Result<Expr> {
        let first = next(self)?;
        if self.peek().0 != op {
            return Ok(first);
        }
        let pos = self.peek().1;
        let mut operands = vec![first];
        while self.peek().0 == op {
            self.bump();
            operands.push(next(self)?);
        }
        Ok(Expr {
            kind: build(operands),
            pos,
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply".into()));
        }
        let e = self.binary(Tok::Or, Self::xor, ExprKind::Or);
        self.depth -= 1;
        e
    }

    fn xor(&mut self) -> Result<Expr> {
        self.binary(Tok::Xor, Self::term, ExprKind::Xor)
    }

    fn term(&mut self) -> Result<Expr> {
        self.binary(Tok::And, Self::factor, ExprKind::And)
    }

    fn factor(&mut self) -> Result<Expr> {
        let (tok, pos) = self.peek().clone();
        match tok {
            Tok::Not => {
                self.bump();
                self.depth += 1;
                if self.depth > MAX_DEPTH {
                    return Err(self.error("expression nested too deeply".into()));
                }
                let inner = self.factor()?;
                self.depth -= 1;
                Ok(Expr {
                    kind: ExprKind::Not(Box::new(inner)),
                    pos,
                })
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if self.peek().0 != Tok::RParen {
                    return Err(self.error(format!("expected `)`, found {}", self.peek().0.describe())));
                }
                self.bump();
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                let idx = match self.vars.iter().position(|v| *v == name) {
                    Some(i) => i,
                    None => {
                        if self.vars.len() == MAX_VARS {
                            return Err(Error::Capacity {
                                what: "expression variables",
                                found: MAX_VARS + 1,
                                limit: MAX_VARS,
                            });
                        }
                        self.vars.push(name);
                        self.vars.len() - 1
                    }
                };
                Ok(Expr {
                    kind: ExprKind::Var(idx),
                    pos,
                })
            }
            other => Err(self.error(format!("expected an operand, found {}", other.describe()))),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<BoolExpr> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        vars: Vec::new(),
        depth: 0,
    };
    let root = p.expr()?;
    if p.peek().0 != Tok::End {
        return Err(p.error(format!("unexpected {}", p.peek().0.describe())));
    }
    Ok(BoolExpr { vars: p.vars, root })
}
