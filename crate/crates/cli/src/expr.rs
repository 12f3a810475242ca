//! Set expressions.
//!
//! ```text
//! expr    := inter (("union" | "|" | "minus" | "-") inter)*
//! inter   := primary (("inter" | "&") primary)*
//! primary := "X" | "empty" | "atom:" NAME | "block:" NAME ("[" indices "]")?
//!          | "cofinite(" NAME "," "[" indices? "]" ")" | "complement(" expr ")"
//!          | "(" expr ")" | NAME
//! ```
//!
//! A bare `NAME` is a named set if one is in scope, otherwise a whole block.
//! Rendered sets (`SymbolicSet`'s `Display`) parse back to themselves.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use ifslab_core::setalg::{BlockPart, GroundStructure, Point, SymbolicSet};

/// Words with a fixed meaning in expressions; not usable as names.
pub const RESERVED: &[&str] = &[
    "X",
    "empty",
    "atom",
    "block",
    "union",
    "inter",
    "minus",
    "complement",
    "cofinite",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ExprError {}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Num(u64),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Name(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n = text.parse().map_err(|_| ExprError {
                column: col,
                message: format!("index `{text}` is too large"),
            })?;
            out.push((Tok::Num(n), col));
        } else if "|&-()[],:".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(ExprError {
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ground: &'a Arc<GroundStructure>,
    names: &'a BTreeMap<String, SymbolicSet>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{c}`, found {}", self.peek()))
        }
    }

    fn name(&mut self, what: &str) -> Result<String, ExprError> {
        match self.peek().clone() {
            Tok::Name(n) => {
                self.bump();
                Ok(n)
            }
            t => self.err(format!("expected {what}, found {t}")),
        }
    }

    fn block(&mut self) -> Result<ifslab_core::setalg::BlockId, ExprError> {
        let col = self.column();
        let n = self.name("a block name")?;
        self.ground.block_id(&n).map_err(|_| ExprError {
            column: col,
            message: format!("unknown block `{n}`"),
        })
    }

    fn indices(&mut self) -> Result<Vec<u64>, ExprError> {
        self.expect('[')?;
        let mut out = Vec::new();
        if *self.peek() == Tok::Sym(']') {
            self.bump();
            return Ok(out);
        }
        loop {
            match self.peek().clone() {
                Tok::Num(0) => return self.err("indices start at 1"),
                Tok::Num(n) => {
                    self.bump();
                    out.push(n);
                }
                t => return self.err(format!("expected an index, found {t}")),
            }
            match self.peek().clone() {
                Tok::Sym(',') => {
                    self.bump();
                }
                Tok::Sym(']') => {
                    self.bump();
                    return Ok(out);
                }
                t => return self.err(format!("expected `,` or `]`, found {t}")),
            }
        }
    }

    fn expr(&mut self) -> Result<SymbolicSet, ExprError> {
        let mut acc = self.inter()?;
        loop {
            match self.peek() {
                Tok::Sym('|') => {
                    self.bump();
                    acc = &acc | &self.inter()?;
                }
                Tok::Name(n) if n == "union" => {
                    self.bump();
                    acc = &acc | &self.inter()?;
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = &acc - &self.inter()?;
                }
                Tok::Name(n) if n == "minus" => {
                    self.bump();
                    acc = &acc - &self.inter()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn inter(&mut self) -> Result<SymbolicSet, ExprError> {
        let mut acc = self.primary()?;
        loop {
            match self.peek() {
                Tok::Sym('&') => {}
                Tok::Name(n) if n == "inter" => {}
                _ => return Ok(acc),
            }
            self.bump();
            acc = &acc & &self.primary()?;
        }
    }

    fn primary(&mut self) -> Result<SymbolicSet, ExprError> {
        let g = self.ground;
        let col = self.column();
        match self.bump() {
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Name(n) => match n.as_str() {
                "X" => Ok(SymbolicSet::full(g)),
                "empty" => Ok(SymbolicSet::empty(g)),
                "atom" => {
                    self.expect(':')?;
                    let col = self.column();
                    let a = self.name("an atom name")?;
                    g.atom_id(&a)
                        .map(|id| SymbolicSet::atom(g, id))
                        .map_err(|_| ExprError {
                            column: col,
                            message: format!("unknown atom `{a}`"),
                        })
                }
                "block" => {
                    self.expect(':')?;
                    let b = self.block()?;
                    if *self.peek() == Tok::Sym('[') {
                        let idx = self.indices()?;
                        let part = BlockPart::finite(idx).expect("indices are positive");
                        Ok(SymbolicSet::block_part(g, b, part))
                    } else {
                        Ok(SymbolicSet::block(g, b))
                    }
                }
                "cofinite" => {
                    self.expect('(')?;
                    let b = self.block()?;
                    self.expect(',')?;
                    let idx = self.indices()?;
                    self.expect(')')?;
                    let part = BlockPart::cofinite(idx).expect("indices are positive");
                    Ok(SymbolicSet::block_part(g, b, part))
                }
                "complement" => {
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(')')?;
                    Ok(e.complement())
                }
                "union" | "inter" | "minus" => Err(ExprError {
                    column: col,
                    message: format!("operator `{n}` needs a left operand"),
                }),
                _ => {
                    if let Some(s) = self.names.get(&n) {
                        Ok(s.clone())
                    } else if let Ok(b) = g.block_id(&n) {
                        Ok(SymbolicSet::block(g, b))
                    } else {
                        Err(ExprError {
                            column: col,
                            message: format!("unknown name `{n}`"),
                        })
                    }
                }
            },
            t => Err(ExprError {
                column: col,
                message: format!("expected a set, found {t}"),
            }),
        }
    }
}

/// Parse a set expression over `ground`, resolving bare names against
/// `names` first and block names second.
pub fn parse_set(
    src: &str,
    ground: &Arc<GroundStructure>,
    names: &BTreeMap<String, SymbolicSet>,
) -> Result<SymbolicSet, ExprError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        ground,
        names,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => p.err(format!("unexpected {t} after a complete expression")),
    }
}

/// A single point: `atom:a` or `block:ODD[3]`.
pub fn parse_point(src: &str, ground: &Arc<GroundStructure>) -> Result<Point, ExprError> {
    let no_names = BTreeMap::new();
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        ground,
        names: &no_names,
    };
    let col = p.column();
    let point = match p.bump() {
        Tok::Name(n) if n == "atom" => {
            p.expect(':')?;
            let col = p.column();
            let a = p.name("an atom name")?;
            ground.atom(&a).map_err(|_| ExprError {
                column: col,
                message: format!("unknown atom `{a}`"),
            })?
        }
        Tok::Name(n) if n == "block" => {
            p.expect(':')?;
            let b = p.block()?;
            let col = p.column();
            let idx = p.indices()?;
            match idx[..] {
                [i] => Point::Elem(b, i),
                _ => {
                    return Err(ExprError {
                        column: col,
                        message: "a point names exactly one index".into(),
                    })
                }
            }
        }
        t => {
            return Err(ExprError {
                column: col,
                message: format!("expected `atom:NAME` or `block:NAME[i]`, found {t}"),
            })
        }
    };
    match p.peek() {
        Tok::End => Ok(point),
        t => p.err(format!("unexpected {t} after a point")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ifslab_core::builtin::OddEven;

    fn parse(src: &str) -> Result<SymbolicSet, ExprError> {
        parse_set(src, &OddEven::new().ground, &BTreeMap::new())
    }

    #[test]
    fn literals() {
        let m = OddEven::new();
        assert_eq!(parse("X").unwrap(), m.x());
        assert_eq!(parse("EVEN | atom:a | atom:b").unwrap(), m.even_ab());
        assert_eq!(parse("block:ODD[3]").unwrap(), m.point_set(&[m.odd_pt(3)]));
        assert_eq!(parse("block:ODD").unwrap(), m.odd());
        assert_eq!(
            parse("complement(X)").unwrap(),
            SymbolicSet::empty(&m.ground)
        );
        assert_eq!(
            parse("X minus atom:a").unwrap(),
            &m.x() - &m.point_set(&[m.a()])
        );
        assert_eq!(parse("cofinite(ODD, [])").unwrap(), m.odd());
    }

    #[test]
    fn precedence() {
        let m = OddEven::new();
        // & binds tighter than | and -
        assert_eq!(parse("atom:a | ODD & EVEN").unwrap(), m.point_set(&[m.a()]));
        assert_eq!(
            parse("(atom:a | ODD) & EVEN").unwrap(),
            SymbolicSet::empty(&m.ground)
        );
        assert_eq!(
            parse("X - ODD - EVEN").unwrap(),
            m.point_set(&[m.a(), m.b()])
        );
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse("ODD | OD").unwrap_err();
        assert_eq!(e.column, 7);
        assert!(e.message.contains("OD"));
        assert_eq!(parse("block:ODD[0]").unwrap_err().column, 11);
        assert_eq!(parse("ODD |").unwrap_err().column, 6);
        assert_eq!(parse("ODD ODD").unwrap_err().column, 5);
        assert_eq!(parse("atom:a $").unwrap_err().column, 8);
        assert!(parse("cofinite(ODD, [1,)").is_err());
    }

    #[test]
    fn points() {
        let m = OddEven::new();
        assert_eq!(parse_point("block:EVEN[4]", &m.ground).unwrap(), m.even(4));
        assert_eq!(parse_point("atom:b", &m.ground).unwrap(), m.b());
        assert!(parse_point("block:EVEN[1,2]", &m.ground).is_err());
        assert!(parse_point("ODD", &m.ground).is_err());
    }
}
