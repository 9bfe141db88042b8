//! Recursive-descent parser for germ expressions.
//!
//! ```text
//! expr     := term (("+"|"-") term)*
//! term     := factor ("*" factor)*
//! factor   := base ("^" nat)?
//! base     := var | rational | "(" expr ")" | "-" factor
//! rational := int ("/" nat)?
//! ```
//!
//! Unary minus takes a whole `factor`, so `-x^2` reads as `-(x^2)` and printed polynomials
//! parse back unchanged.

use std::fmt;

use germcore::algebra::field::Field;
use germcore::algebra::rational::Rational;
use germcore::algebra::BiPoly;
use num_bigint::BigInt;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownVariable(String),
    Exponent(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (what, msg) = match &self.kind {
            ParseErrorKind::Syntax(m) => ("syntax error", m.clone()),
            ParseErrorKind::UnknownVariable(v) => ("unknown variable", format!("`{v}`")),
            ParseErrorKind::Exponent(m) => ("bad exponent", m.clone()),
        };
        write!(
            f,
            "{what} at line {}, column {}: {msg}",
            self.line, self.column
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, column);
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
        let tok = if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                column += 1;
            }
            Tok::Num(s.parse().expect("digits"))
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                column += 1;
            }
            Tok::Ident(s)
        } else if "+-*^/()".contains(c) {
            chars.next();
            column += 1;
            Tok::Sym(c)
        } else {
            return Err(ParseError {
                line,
                column,
                kind: ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
            });
        };
        out.push(Token {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    vars: (&'a str, &'a str),
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err(&self, t: &Token, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: t.line,
            column: t.column,
            kind,
        }
    }

    fn unexpected(&self, t: &Token, wanted: &str) -> ParseError {
        let found = match &t.tok {
            Tok::Num(n) => format!("`{n}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        };
        self.err(
            t,
            ParseErrorKind::Syntax(format!("expected {wanted}, found {found}")),
        )
    }

    fn expr(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Sym('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Sym('*') {
            self.bump();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BiPoly, ParseError> {
        let b = self.base()?;
        if self.peek().tok != Tok::Sym('^') {
            return Ok(b);
        }
        self.bump();
        let t = self.bump();
        let e = match &t.tok {
            Tok::Num(n) => n.clone(),
            Tok::Sym('-') => {
                return Err(self.err(&t, ParseErrorKind::Exponent("negative exponent".into())))
            }
            Tok::Sym('(') => {
                return Err(self.err(
                    &t,
                    ParseErrorKind::Exponent("exponent must be a natural number literal".into()),
                ))
            }
            _ => return Err(self.unexpected(&t, "a natural number exponent")),
        };
        if self.peek().tok == Tok::Sym('/') {
            let t = self.peek().clone();
            return Err(self.err(&t, ParseErrorKind::Exponent("fractional exponent".into())));
        }
        let e: u32 = u32::try_from(&e)
            .ok()
            .filter(|e| *e <= MAX_EXPONENT)
            .ok_or_else(|| {
                self.err(
                    &t,
                    ParseErrorKind::Exponent(format!("exponent larger than {MAX_EXPONENT}")),
                )
            })?;
        Ok(b.pow(e))
    }

    fn base(&mut self) -> Result<BiPoly, ParseError> {
        let q = Field::rationals();
        let t = self.bump();
        match &t.tok {
            Tok::Num(n) => {
                let mut r = Rational::from_integer(n.clone());
                if self.peek().tok == Tok::Sym('/') {
                    self.bump();
                    let d = self.bump();
                    match &d.tok {
                        Tok::Num(d0) if d0 != &BigInt::from(0) => {
                            r /= Rational::from_integer(d0.clone())
                        }
                        Tok::Num(_) => {
                            return Err(
                                self.err(&d, ParseErrorKind::Syntax("zero denominator".into()))
                            )
                        }
                        _ => return Err(self.unexpected(&d, "a natural number denominator")),
                    }
                }
                let mut p = BiPoly::zero(&q);
                p.add_term((0, 0), q.from_rational(r));
                Ok(p)
            }
            Tok::Ident(s) if s == self.vars.0 => Ok(BiPoly::x()),
            Tok::Ident(s) if s == self.vars.1 => Ok(BiPoly::y()),
            Tok::Ident(s) => Err(self.err(&t, ParseErrorKind::UnknownVariable(s.clone()))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                let c = self.bump();
                if c.tok != Tok::Sym(')') {
                    return Err(self.unexpected(&c, "`)`"));
                }
                Ok(e)
            }
            // unary minus applies to the whole power: `-x^2` is `-(x^2)`
            Tok::Sym('-') => Ok(self.factor()?.neg()),
            _ => Err(self.unexpected(&t, "a variable, a number, `(` or `-`")),
        }
    }
}

/// Parses `text` into an exact polynomial over `Q`; `vars` names the first and second variable.
pub fn parse_germ(text: &str, vars: (&str, &str)) -> Result<BiPoly, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        vars,
    };
    let out = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return Err(p.unexpected(&t, "an operator or end of input"));
    }
    Ok(out)
}

/// Parses with the source pair `(x, y)` or, failing on an unknown variable, the target pair `(u, v)`.
pub fn parse_either(text: &str) -> Result<(BiPoly, (&'static str, &'static str)), ParseError> {
    match parse_germ(text, ("x", "y")) {
        Err(ParseError {
            kind: ParseErrorKind::UnknownVariable(_),
            ..
        }) => {
            let p = parse_germ(text, ("u", "v")).map_err(|e| match e.kind {
                ParseErrorKind::UnknownVariable(v) => ParseError {
                    kind: ParseErrorKind::UnknownVariable(format!("{v} (use either x, y or u, v)")),
                    ..e
                },
                _ => e,
            })?;
            Ok((p, ("u", "v")))
        }
        r => r.map(|p| (p, ("x", "y"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn examples() {
        let p = parse_germ("y^2 - x^3", ("x", "y")).unwrap();
        assert_eq!(p, BiPoly::from_int_terms(&[(0, 2, 1), (3, 0, -1)]));
        let p = parse_germ("(1/2)*x*y + x^4", ("x", "y")).unwrap();
        assert_eq!(
            p,
            BiPoly::from_rational_terms(&[(1, 1, q(1, 2)), (4, 0, q(1, 1))])
        );
        let e = parse_germ("x^(-1)", ("x", "y")).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Exponent(_)));
        assert_eq!((e.line, e.column), (1, 3));
    }

    #[test]
    fn unary_minus_and_positions() {
        assert_eq!(parse_germ("--x", ("x", "y")).unwrap(), BiPoly::x());
        assert_eq!(
            parse_germ("-x^2", ("x", "y")).unwrap(),
            BiPoly::from_int_terms(&[(2, 0, -1)])
        );
        assert_eq!(
            parse_germ("-(x)^2", ("x", "y")).unwrap(),
            BiPoly::from_int_terms(&[(2, 0, -1)])
        );
        let e = parse_germ("x +\n  w", ("x", "y")).unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable("w".into()));
        assert!(matches!(
            parse_germ("x^3/2", ("x", "y")).unwrap_err().kind,
            ParseErrorKind::Exponent(_)
        ));
        assert!(matches!(
            parse_germ("2x", ("x", "y")).unwrap_err().kind,
            ParseErrorKind::Syntax(_)
        ));
        assert!(matches!(
            parse_germ("(x", ("x", "y")).unwrap_err().kind,
            ParseErrorKind::Syntax(_)
        ));
        assert!(parse_germ("u", ("x", "y")).is_err());
    }

    #[test]
    fn either_pair() {
        assert_eq!(parse_either("v + u^3").unwrap().1, ("u", "v"));
        assert_eq!(parse_either("y").unwrap().1, ("x", "y"));
        assert!(parse_either("x + v").is_err());
    }
}
