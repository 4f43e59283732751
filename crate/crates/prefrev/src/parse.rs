//! Concrete syntax: formulas, schema files, and preference files.
//!
//! Formula grammar (keywords case-insensitive):
//!
//! ```text
//! formula := disj ;  disj := conj { "or" conj } ;  conj := unit { "and" unit } ;
//! unit    := "not" unit | "(" formula ")" | atom | "true" | "false" ;
//! atom    := term op term ;  op := "=" | "!=" | "<" | "<=" | ">" | ">=" ;
//! term    := ("L"|"R") "." ident | string-literal '...' | rational
//! ```
//!
//! Schema files hold lines like `relation Car (make: D, year: Q)`.
//! Preference files hold statements like
//! `pref C1 over Car: L.make = R.make and L.year > R.year;`.
//! `#` starts a comment that runs to end of line.

use crate::error::{Error, Result};
use crate::formula::{AtomKind, CompOp, Formula, PrefRelation, Term, TupleVar};
use crate::rational::{parse_rat, Rat};
use crate::schema::{AttrDomain, Schema};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rat),
    Str(String),
    LParen,
    RParen,
    Dot,
    Comma,
    Colon,
    Semi,
    Op(CompOp),
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Scanner {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Scanner {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn bump(&mut self) -> char {
        let c = self.chars[self.i];
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { line: self.line, col: self.col, msg: msg.into() })
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut s = Scanner { chars: text.chars().collect(), i: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    while let Some(ch) = s.peek() {
        let (tline, tcol) = (s.line, s.col);
        let mut push = |tok: Tok| out.push(Spanned { tok, line: tline, col: tcol });
        match ch {
            ' ' | '\t' | '\r' | '\n' => {
                s.bump();
            }
            '#' => {
                while s.peek().is_some_and(|c| c != '\n') {
                    s.bump();
                }
            }
            '(' => {
                s.bump();
                push(Tok::LParen);
            }
            ')' => {
                s.bump();
                push(Tok::RParen);
            }
            '.' => {
                s.bump();
                push(Tok::Dot);
            }
            ',' => {
                s.bump();
                push(Tok::Comma);
            }
            ':' => {
                s.bump();
                push(Tok::Colon);
            }
            ';' => {
                s.bump();
                push(Tok::Semi);
            }
            '=' => {
                s.bump();
                push(Tok::Op(CompOp::Eq));
            }
            '!' => {
                s.bump();
                if s.peek() == Some('=') {
                    s.bump();
                    push(Tok::Op(CompOp::Ne));
                } else {
                    return s.err("expected `=` after `!`");
                }
            }
            '<' => {
                s.bump();
                let op = if s.peek() == Some('=') {
                    s.bump();
                    CompOp::Le
                } else {
                    CompOp::Lt
                };
                push(Tok::Op(op));
            }
            '>' => {
                s.bump();
                let op = if s.peek() == Some('=') {
                    s.bump();
                    CompOp::Ge
                } else {
                    CompOp::Gt
                };
                push(Tok::Op(op));
            }
            '\'' => {
                s.bump();
                let mut text = String::new();
                loop {
                    match s.peek() {
                        Some('\'') => {
                            s.bump();
                            break;
                        }
                        Some('\n') | None => return s.err("unterminated string literal"),
                        Some(_) => text.push(s.bump()),
                    }
                }
                push(Tok::Str(text));
            }
            c if c.is_ascii_digit() || c == '-' => {
                let mut text = String::new();
                text.push(s.bump());
                if c == '-' && !s.peek().is_some_and(|d| d.is_ascii_digit()) {
                    return s.err("expected digits after `-`");
                }
                while s.peek().is_some_and(|d| d.is_ascii_digit() || d == '.' || d == '/') {
                    text.push(s.bump());
                }
                match parse_rat(&text) {
                    Some(r) => push(Tok::Num(r)),
                    None => return s.err(format!("malformed rational `{text}`")),
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut text = String::new();
                while s.peek().is_some_and(|d| d.is_ascii_alphanumeric() || d == '_') {
                    text.push(s.bump());
                }
                push(Tok::Ident(text));
            }
            c => return s.err(format!("unexpected character `{c}`")),
        }
    }
    out.push(Spanned { tok: Tok::Eof, line: s.line, col: s.col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    schema: &'a Schema,
}

/// A parsed term before attribute resolution.
enum RawTerm {
    Var(TupleVar, String, usize, usize),
    Str(String),
    Num(Rat),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = self.peek();
        Err(Error::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn keyword(&self) -> Option<String> {
        match &self.peek().tok {
            Tok::Ident(s) => Some(s.to_ascii_lowercase()),
            _ => None,
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.keyword().as_deref() == Some(kw) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            self.err(format!("expected `{kw}`"))
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek().tok == tok {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut f = self.conj()?;
        while self.eat_keyword("or") {
            let rhs = self.conj()?;
            f = Formula::or(f, rhs);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut f = self.unit()?;
        while self.eat_keyword("and") {
            let rhs = self.unit()?;
            f = Formula::and(f, rhs);
        }
        Ok(f)
    }

    fn unit(&mut self) -> Result<Formula> {
        match self.keyword().as_deref() {
            Some("not") => {
                self.next();
                return Ok(Formula::not(self.unit()?));
            }
            Some("true") => {
                self.next();
                return Ok(Formula::True);
            }
            Some("false") => {
                self.next();
                return Ok(Formula::False);
            }
            _ => {}
        }
        if self.peek().tok == Tok::LParen {
            self.next();
            let f = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(f);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        let op = match self.peek().tok {
            Tok::Op(op) => {
                self.next();
                op
            }
            _ => return self.err("expected comparison operator"),
        };
        let rhs = self.term()?;
        self.build_atom(op, lhs, rhs)
    }

    fn term(&mut self) -> Result<RawTerm> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Str(s) => {
                self.next();
                Ok(RawTerm::Str(s.clone()))
            }
            Tok::Num(r) => {
                self.next();
                Ok(RawTerm::Num(r.clone()))
            }
            Tok::Ident(name) => {
                let var = match name.to_ascii_uppercase().as_str() {
                    "L" => TupleVar::L,
                    "R" => TupleVar::R,
                    _ => {
                        return self.err(format!(
                            "expected a term; tuple variables must be L or R, got `{name}`"
                        ))
                    }
                };
                self.next();
                self.expect(Tok::Dot, "`.` after tuple variable")?;
                let (line, col) = (self.peek().line, self.peek().col);
                match self.next().tok {
                    Tok::Ident(attr) => Ok(RawTerm::Var(var, attr, line, col)),
                    _ => Err(Error::Syntax { line, col, msg: "expected attribute name".into() }),
                }
            }
            _ => self.err("expected a term"),
        }
    }

    fn build_atom(&mut self, op: CompOp, lhs: RawTerm, rhs: RawTerm) -> Result<Formula> {
        let resolve = |raw: &RawTerm| -> Result<(Term, AttrDomain)> {
            match raw {
                RawTerm::Var(var, attr, line, col) => match self.schema.attr_index(attr) {
                    Some(idx) => Ok((Term::Attr(*var, idx), self.schema.attr_domain(idx))),
                    None => Err(Error::UnknownAttribute { line: *line, col: *col, name: attr.clone() }),
                },
                RawTerm::Str(s) => Ok((Term::DConst(s.clone()), AttrDomain::D)),
                RawTerm::Num(r) => Ok((Term::QConst(r.clone()), AttrDomain::Q)),
            }
        };
        let (lterm, ldom) = resolve(&lhs)?;
        let (rterm, rdom) = resolve(&rhs)?;
        let here = self.toks[self.pos.saturating_sub(1)].clone();
        if ldom != rdom {
            return Err(Error::DomainMismatch {
                line: here.line,
                col: here.col,
                msg: format!("cannot compare a {ldom} term with a {rdom} term"),
            });
        }
        let kind = match ldom {
            AttrDomain::D => {
                if !matches!(op, CompOp::Eq | CompOp::Ne) {
                    return Err(Error::DomainMismatch {
                        line: here.line,
                        col: here.col,
                        msg: format!("operator `{}` is not defined on D terms", op.as_str()),
                    });
                }
                AtomKind::EqD
            }
            AttrDomain::Q => AtomKind::OrdQ,
        };
        Ok(Formula::atom(kind, op, lterm, rterm))
    }
}

/// Parses a formula in the concrete grammar against `schema`.
pub fn parse_formula(text: &str, schema: &Schema) -> Result<PrefRelation> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, schema };
    let f = p.formula()?;
    if p.peek().tok != Tok::Eof {
        return p.err("trailing input after formula");
    }
    PrefRelation::new(schema.clone(), f)
}

/// Parses a schema file: one or more `relation Name (attr: D, ...)` entries.
pub fn parse_schema_file(text: &str) -> Result<Vec<Schema>> {
    let toks = lex(text)?;
    // The schema parser needs no ambient schema; use a placeholder.
    let placeholder = Schema::new("_", vec![("_", AttrDomain::D)]).expect("static schema");
    let mut p = Parser { toks, pos: 0, schema: &placeholder };
    let mut out = Vec::new();
    while p.peek().tok != Tok::Eof {
        p.expect_keyword("relation")?;
        let name = match p.next().tok {
            Tok::Ident(s) => s,
            _ => return p.err("expected relation name"),
        };
        p.expect(Tok::LParen, "`(`")?;
        let mut attrs: Vec<(String, AttrDomain)> = Vec::new();
        loop {
            let attr = match p.next().tok {
                Tok::Ident(s) => s,
                _ => return p.err("expected attribute name"),
            };
            p.expect(Tok::Colon, "`:`")?;
            let domain = match p.next().tok {
                Tok::Ident(d) if d.eq_ignore_ascii_case("d") => AttrDomain::D,
                Tok::Ident(d) if d.eq_ignore_ascii_case("q") => AttrDomain::Q,
                _ => return p.err("expected domain `D` or `Q`"),
            };
            attrs.push((attr, domain));
            if p.peek().tok == Tok::Comma {
                p.next();
                continue;
            }
            break;
        }
        p.expect(Tok::RParen, "`)`")?;
        out.push(Schema::new(name, attrs)?);
    }
    Ok(out)
}

/// A named preference relation from a preference file.
#[derive(Debug, Clone)]
pub struct NamedPref {
    pub name: String,
    pub relation: PrefRelation,
}

/// Parses a preference file: `pref NAME over SCHEMA: formula;` statements.
pub fn parse_pref_file(text: &str, schemas: &[Schema]) -> Result<Vec<NamedPref>> {
    let toks = lex(text)?;
    let placeholder = Schema::new("_", vec![("_", AttrDomain::D)]).expect("static schema");
    let mut p = Parser { toks, pos: 0, schema: &placeholder };
    let mut out: Vec<NamedPref> = Vec::new();
    while p.peek().tok != Tok::Eof {
        p.expect_keyword("pref")?;
        let name = match p.next().tok {
            Tok::Ident(s) => s,
            _ => return p.err("expected preference name"),
        };
        if out.iter().any(|e| e.name == name) {
            return p.err(format!("duplicate preference name `{name}`"));
        }
        p.expect_keyword("over")?;
        let schema_name = match p.next().tok {
            Tok::Ident(s) => s,
            _ => return p.err("expected schema name"),
        };
        let Some(schema) = schemas.iter().find(|s| s.name() == schema_name) else {
            return p.err(format!("unknown schema `{schema_name}`"));
        };
        p.expect(Tok::Colon, "`:`")?;
        p.schema = schema;
        let f = p.formula()?;
        p.schema = &placeholder;
        p.expect(Tok::Semi, "`;`")?;
        let relation = PrefRelation::new(schema.clone(), f)?;
        out.push(NamedPref { name, relation });
    }
    Ok(out)
}

/// Renders one preference-file statement.
pub fn render_pref_entry(name: &str, p: &PrefRelation) -> String {
    format!("pref {name} over {}: {};", p.schema().name(), p.render())
}
