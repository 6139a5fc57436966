//! Affine integer expressions in named parameters, and constraints between
//! them, as written in matrix templates: `4-a`, `a1+b1+c1+d1==16`, `a<=2`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// `constant + sum coef * name`, with parameter names not yet resolved.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AffineExpr {
    pub constant: i64,
    pub terms: BTreeMap<String, i64>,
}

impl AffineExpr {
    pub fn constant(c: i64) -> Self {
        AffineExpr {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, name: Option<String>, coef: i64) {
        match name {
            None => self.constant += coef,
            Some(n) => {
                let e = self.terms.entry(n.clone()).or_insert(0);
                *e += coef;
                if *e == 0 {
                    self.terms.remove(&n);
                }
            }
        }
    }

    pub fn sub(&self, other: &AffineExpr) -> AffineExpr {
        let mut out = self.clone();
        out.constant -= other.constant;
        for (k, v) in &other.terms {
            out.add_term(Some(k.clone()), -v);
        }
        out
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.constant != 0 || self.terms.is_empty() {
            write!(f, "{}", self.constant)?;
            first = false;
        }
        for (name, &c) in &self.terms {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}*{name}")?;
            }
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Num(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(
                text.parse().map_err(|_| Error::Parse(format!("number too large in {s:?}")))?,
            ));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else {
            out.push(match c {
                '+' => Token::Plus,
                '-' => Token::Minus,
                '*' => Token::Star,
                _ => return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}"))),
            });
            i += 1;
        }
    }
    Ok(out)
}

/// Parses `[+-] term ([+-] term)*` where a term is `n`, `name`, `n*name` or
/// `n name`.
pub fn parse_affine(s: &str) -> Result<AffineExpr> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let bad = || Error::Parse(format!("malformed expression {s:?}"));
    let mut expr = AffineExpr::default();
    let mut i = 0;
    let mut expect_term = true;
    let mut sign = 1i64;
    while i < tokens.len() {
        match &tokens[i] {
            Token::Plus | Token::Minus if expect_term => {
                if tokens[i] == Token::Minus {
                    sign = -sign;
                }
                i += 1;
            }
            Token::Plus | Token::Minus => {
                sign = if tokens[i] == Token::Minus { -1 } else { 1 };
                expect_term = true;
                i += 1;
            }
            Token::Num(n) if expect_term => {
                let coef = sign.checked_mul(*n).ok_or_else(bad)?;
                i += 1;
                if i < tokens.len() && tokens[i] == Token::Star {
                    i += 1;
                }
                match tokens.get(i) {
                    Some(Token::Ident(name)) => {
                        expr.add_term(Some(name.clone()), coef);
                        i += 1;
                    }
                    Some(Token::Star) | Some(Token::Num(_)) => return Err(bad()),
                    _ if tokens[i - 1] == Token::Star => return Err(bad()),
                    _ => expr.add_term(None, coef),
                }
                sign = 1;
                expect_term = false;
            }
            Token::Ident(name) if expect_term => {
                expr.add_term(Some(name.clone()), sign);
                i += 1;
                sign = 1;
                expect_term = false;
            }
            _ => return Err(bad()),
        }
    }
    if expect_term {
        return Err(bad());
    }
    Ok(expr)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    Ne,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "==",
            Relation::Ne => "!=",
        }
    }

    pub fn holds(self, x: i64) -> bool {
        match self {
            Relation::Le => x <= 0,
            Relation::Lt => x < 0,
            Relation::Ge => x >= 0,
            Relation::Gt => x > 0,
            Relation::Eq => x == 0,
            Relation::Ne => x != 0,
        }
    }
}

/// `expr (relation) 0`, stored with its source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub text: String,
    pub expr: AffineExpr,
    pub relation: Relation,
}

pub fn parse_constraint(s: &str) -> Result<Constraint> {
    for rel in [Relation::Le, Relation::Ge, Relation::Eq, Relation::Ne, Relation::Lt, Relation::Gt] {
        if let Some(pos) = s.find(rel.symbol()) {
            let lhs = parse_affine(&s[..pos])?;
            let rhs = parse_affine(&s[pos + rel.symbol().len()..])?;
            return Ok(Constraint {
                text: s.trim().to_string(),
                expr: lhs.sub(&rhs),
                relation: rel,
            });
        }
    }
    if s.contains('=') {
        return Err(Error::Parse(format!("use == for equality in {s:?}")));
    }
    Err(Error::Parse(format!("no relation in constraint {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_affine() {
        let e = parse_affine("4-a").unwrap();
        assert_eq!(e.constant, 4);
        assert_eq!(e.terms.get("a"), Some(&-1));
        assert_eq!(parse_affine("-2").unwrap(), AffineExpr::constant(-2));
        let e = parse_affine("a1 + 2*b - 3 c + 7").unwrap();
        assert_eq!(e.constant, 7);
        assert_eq!(e.terms.len(), 3);
        assert_eq!(e.terms["c"], -3);
        assert!(parse_affine("a-a").unwrap().is_constant());
        for bad in ["", "4-", "a b", "2**a", "3$", "*a"] {
            assert!(parse_affine(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn parses_constraints() {
        let c = parse_constraint("a<=2").unwrap();
        assert_eq!(c.relation, Relation::Le);
        assert!(c.relation.holds(-1));
        let c = parse_constraint("a1+b1+c1+d1==16").unwrap();
        assert_eq!(c.expr.constant, -16);
        assert_eq!(parse_constraint("a1 <= b1").unwrap().expr.terms.len(), 2);
        assert!(parse_constraint("a=2").is_err());
        assert!(parse_constraint("a").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["4-a", "-2", "a+b-2*c", "9-a"] {
            let e = parse_affine(s).unwrap();
            assert_eq!(parse_affine(&e.to_string()).unwrap(), e);
        }
    }
}
