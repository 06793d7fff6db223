//! Recursive-descent parser for the formula grammar.

use crate::hf;
use crate::hf::HfSet;

use super::{Formula, FormulaError, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Forall,
    Exists,
    In,
    Ident(String),
    Const(u32),
    SetLit(HfSet),
    LParen,
    RParen,
    Dot,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    Bang,
    Eq,
    Eoi,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Forall => "'forall'".into(),
            Tok::Exists => "'exists'".into(),
            Tok::In => "'in'".into(),
            Tok::Ident(v) => format!("identifier '{v}'"),
            Tok::Const(n) => format!("constant 'C{n}'"),
            Tok::SetLit(_) => "set literal".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::DoubleArrow => "'<->'".into(),
            Tok::Bang => "'!'".into(),
            Tok::Eq => "'='".into(),
            Tok::Eoi => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    tok: Tok,
    tok_at: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Result<Self, FormulaError> {
        let mut lx = Lexer {
            text,
            pos: 0,
            tok: Tok::Eoi,
            tok_at: 0,
        };
        lx.bump()?;
        Ok(lx)
    }

    fn bump(&mut self) -> Result<(), FormulaError> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_at = self.pos;
        if self.pos >= bytes.len() {
            self.tok = Tok::Eoi;
            return Ok(());
        }
        let c = bytes[self.pos];
        self.tok = match c {
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'.' => {
                self.pos += 1;
                Tok::Dot
            }
            b'&' => {
                self.pos += 1;
                Tok::Amp
            }
            b'|' => {
                self.pos += 1;
                Tok::Pipe
            }
            b'!' => {
                self.pos += 1;
                Tok::Bang
            }
            b'=' => {
                self.pos += 1;
                Tok::Eq
            }
            b'-' => {
                if bytes.get(self.pos + 1) == Some(&b'>') {
                    self.pos += 2;
                    Tok::Arrow
                } else {
                    return Err(FormulaError::Syntax {
                        at: self.pos,
                        msg: "expected '->'".into(),
                    });
                }
            }
            b'<' => {
                if self.text[self.pos..].starts_with("<->") {
                    self.pos += 3;
                    Tok::DoubleArrow
                } else {
                    return Err(FormulaError::Syntax {
                        at: self.pos,
                        msg: "expected '<->'".into(),
                    });
                }
            }
            b'{' | b'#' => {
                let (set, next) =
                    hf::parse_prefix(self.text, self.pos).map_err(|e| match e {
                        hf::HfError::Notation { at, msg } => FormulaError::Syntax { at, msg },
                        other => FormulaError::Syntax {
                            at: self.pos,
                            msg: other.to_string(),
                        },
                    })?;
                self.pos = next;
                Tok::SetLit(set)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < bytes.len()
                    && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let word = &self.text[start..self.pos];
                match word {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "in" => Tok::In,
                    _ => {
                        if let Some(rest) = word.strip_prefix('C') {
                            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                                let n = rest.parse().map_err(|_| FormulaError::Syntax {
                                    at: start,
                                    msg: "constant index out of range".into(),
                                })?;
                                self.tok = Tok::Const(n);
                                return Ok(());
                            }
                        }
                        Tok::Ident(word.to_string())
                    }
                }
            }
            other => {
                return Err(FormulaError::Syntax {
                    at: self.pos,
                    msg: format!("unexpected character {:?}", other as char),
                })
            }
        };
        Ok(())
    }

    fn expect(&mut self, tok: Tok) -> Result<(), FormulaError> {
        if self.tok == tok {
            self.bump()
        } else {
            Err(FormulaError::Syntax {
                at: self.tok_at,
                msg: format!("expected {}, found {}", tok.describe(), self.tok.describe()),
            })
        }
    }
}

/// Parses a formula and freshens shadowed binders, so bound variables are
/// distinct from free variables and from enclosing binders.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let mut lx = Lexer::new(text)?;
    let f = formula(&mut lx)?;
    if lx.tok != Tok::Eoi {
        return Err(FormulaError::Syntax {
            at: lx.tok_at,
            msg: format!("trailing {}", lx.tok.describe()),
        });
    }
    Ok(f.freshen())
}

fn formula(lx: &mut Lexer) -> Result<Formula, FormulaError> {
    match lx.tok {
        Tok::Forall | Tok::Exists => quantified(lx),
        _ => iff(lx),
    }
}

fn quantified(lx: &mut Lexer) -> Result<Formula, FormulaError> {
    let universal = lx.tok == Tok::Forall;
    lx.bump()?;
    let var = match &lx.tok {
        Tok::Ident(v) => v.clone(),
        other => {
            return Err(FormulaError::Syntax {
                at: lx.tok_at,
                msg: format!("expected variable after quantifier, found {}", other.describe()),
            })
        }
    };
    lx.bump()?;
    let bound = if lx.tok == Tok::In {
        lx.bump()?;
        Some(term(lx)?)
    } else {
        None
    };
    if lx.tok != Tok::Dot {
        return Err(FormulaError::Syntax {
            at: lx.tok_at,
            msg: format!("expected 'in' or '.', found {}", lx.tok.describe()),
        });
    }
    lx.bump()?;
    let body = formula(lx)?;
    Ok(match (universal, bound) {
        (true, None) => Formula::forall(var, body),
        (false, None) => Formula::exists(var, body),
        (true, Some(t)) => Formula::forall_in(var, t, body),
        (false, Some(t)) => Formula::exists_in(var, t, body),
    })
}

fn iff(lx: &mut Lexer) -> Result<Formula, FormulaError> {
    let mut lhs = implies(lx)?;
    while lx.tok == Tok::DoubleArrow {
        lx.bump()?;
        let rhs = implies(lx)?;
        lhs = lhs.iff(rhs);
    }
    Ok(lhs)
}

fn implies(lx: &mut Lexer) -> Result<Formula, FormulaError> {
    let lhs = or(lx)?;
    if lx.tok == Tok::Arrow {
        lx.bump()?;
        // Right-associative.
        let rhs = implies(lx)?;
        return Ok(lhs.implies(rhs));
    }
    Ok(lhs)
}

fn or(lx: &mut Lexer) -> Result<Formula, FormulaError> {
    let mut lhs = and(lx)?;
    while lx.tok == Tok::Pipe {
        lx.bump()?;
        let rhs = and(lx)?;
        lhs = lhs.or(rhs);
    }
    Ok(lhs)
}

fn and(lx: &mut Lexer) -> Result<Formula, FormulaError> {
    let mut lhs = unary(lx)?;
    while lx.tok == Tok::Amp {
        lx.bump()?;
        let rhs = unary(lx)?;
        lhs = lhs.and(rhs);
    }
    Ok(lhs)
}

fn unary(lx: &mut Lexer) -> Result<Formula, FormulaError> {
    match lx.tok {
        Tok::Bang => {
            lx.bump()?;
            Ok(unary(lx)?.not())
        }
        Tok::LParen => {
            lx.bump()?;
            let f = formula(lx)?;
            lx.expect(Tok::RParen)?;
            Ok(f)
        }
        _ => atom(lx),
    }
}

fn atom(lx: &mut Lexer) -> Result<Formula, FormulaError> {
    let lhs = term(lx)?;
    match lx.tok {
        Tok::In => {
            lx.bump()?;
            let rhs = term(lx)?;
            Ok(Formula::member(lhs, rhs))
        }
        Tok::Eq => {
            lx.bump()?;
            let rhs = term(lx)?;
            Ok(Formula::equal(lhs, rhs))
        }
        _ => Err(FormulaError::Syntax {
            at: lx.tok_at,
            msg: format!("expected 'in' or '=', found {}", lx.tok.describe()),
        }),
    }
}

fn term(lx: &mut Lexer) -> Result<Term, FormulaError> {
    let t = match &lx.tok {
        Tok::Ident(v) => Term::var(v.clone()),
        Tok::Const(n) => Term::ConstC(*n),
        Tok::SetLit(s) => Term::Literal(s.clone()),
        other => {
            return Err(FormulaError::Syntax {
                at: lx.tok_at,
                msg: format!("expected a term, found {}", other.describe()),
            })
        }
    };
    lx.bump()?;
    Ok(t)
}
