//! Hand-written lexer and recursive-descent parser.
//!
//! The expression grammar is shared between untyped and typed syntax through
//! [`Builder`]; the typed front end only changes how a binder is read.

use std::fmt;

use super::{Context, Judgement, Subst, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// lowercase identifier
    Ident(String),
    /// uppercase identifier (type names)
    TyName(String),
    Pi(String),
    Lam,
    Id,
    LParen,
    RParen,
    LAngle,
    RAngle,
    Comma,
    Slash,
    Dot,
    Star,
    Turnstile,
    Triangle,
    Colon,
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::TyName(s) => write!(f, "`{s}`"),
            Tok::Pi(s) => write!(f, "`pi_{s}`"),
            Tok::Lam => f.write_str("`lam`"),
            Tok::Id => f.write_str("`id`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LAngle => f.write_str("`<`"),
            Tok::RAngle => f.write_str("`>`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Turnstile => f.write_str("`|-`"),
            Tok::Triangle => f.write_str("`|>`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

/// Which start symbol to parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Term,
    Subst,
    Context,
    Judgement,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Term => "term",
            Category::Subst => "substitution",
            Category::Context => "context",
            Category::Judgement => "judgement",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("at byte {offset}: expected a {expected}, found a {found}")]
    Category {
        offset: usize,
        expected: Category,
        found: Category,
    },
    #[error("at byte {offset}: invalid identifier `{name}`")]
    Ident { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::Category { offset, .. }
            | ParseError::Ident { offset, .. } => *offset,
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = |t: &[u8; 2]| bytes.get(i..i + 2) == Some(&t[..]);
        let tok = if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &src[start..i];
            if c.is_ascii_uppercase() {
                Tok::TyName(word.to_string())
            } else if word == "lam" {
                Tok::Lam
            } else if word == "id" {
                Tok::Id
            } else if let Some(rest) = word.strip_prefix("pi_") {
                if !Var::is_valid(rest) {
                    return Err(ParseError::Ident {
                        offset: start,
                        name: word.to_string(),
                    });
                }
                Tok::Pi(rest.to_string())
            } else if Var::is_valid(word) {
                Tok::Ident(word.to_string())
            } else {
                return Err(ParseError::Ident {
                    offset: start,
                    name: word.to_string(),
                });
            }
        } else if two(b"|-") {
            i += 2;
            Tok::Turnstile
        } else if two(b"|>") {
            i += 2;
            Tok::Triangle
        } else if two(b"->") {
            i += 2;
            Tok::Arrow
        } else {
            i += 1;
            match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'<' => Tok::LAngle,
                b'>' => Tok::RAngle,
                b',' => Tok::Comma,
                b'/' => Tok::Slash,
                b'.' => Tok::Dot,
                b'*' => Tok::Star,
                b':' => Tok::Colon,
                _ => {
                    let ch = src[start..].chars().next().unwrap_or('?');
                    return Err(ParseError::Syntax {
                        offset: start,
                        expected: vec!["a token".into()],
                        found: format!("`{ch}`"),
                    });
                }
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

/// Constructors the expression grammar needs. `Binder` is whatever follows `lam`
/// for one bound variable.
pub(crate) trait Builder {
    type Term;
    type Subst;
    type Binder;

    fn binder(p: &mut Parser) -> Result<Self::Binder, ParseError>;
    fn var(v: Var) -> Self::Term;
    fn app(f: Self::Term, a: Self::Term) -> Self::Term;
    fn lam(b: Self::Binder, body: Self::Term) -> Self::Term;
    fn clos(s: Self::Subst, m: Self::Term) -> Self::Term;
    fn id() -> Self::Subst;
    fn pi(v: Var) -> Self::Subst;
    fn cons(s: Self::Subst, n: Self::Term, v: Var) -> Self::Subst;
    fn comp(s: Self::Subst, q: Self::Subst) -> Self::Subst;
}

pub(crate) enum Expr<B: Builder> {
    Term(B::Term),
    Subst(B::Subst),
}

struct Plain;

impl Builder for Plain {
    type Term = Term;
    type Subst = Subst;
    type Binder = Var;

    fn binder(p: &mut Parser) -> Result<Var, ParseError> {
        p.var()
    }
    fn var(v: Var) -> Term {
        Term::Var(v)
    }
    fn app(f: Term, a: Term) -> Term {
        Term::app(f, a)
    }
    fn lam(b: Var, body: Term) -> Term {
        Term::Lam(b, Box::new(body))
    }
    fn clos(s: Subst, m: Term) -> Term {
        Term::clos(s, m)
    }
    fn id() -> Subst {
        Subst::Id
    }
    fn pi(v: Var) -> Subst {
        Subst::Pi(v)
    }
    fn cons(s: Subst, n: Term, v: Var) -> Subst {
        Subst::Cons(Box::new(s), Box::new(n), v)
    }
    fn comp(s: Subst, q: Subst) -> Subst {
        Subst::comp(s, q)
    }
}

pub(crate) struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    pub(crate) fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.error(&[&t.to_string()]))
        }
    }

    pub(crate) fn finish(&mut self) -> Result<(), ParseError> {
        self.expect(Tok::Eof)
    }

    pub(crate) fn var(&mut self) -> Result<Var, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Var::new(&s).expect("lexer validated identifier"))
            }
            _ => Err(self.error(&["variable"])),
        }
    }

    /// Type name, the only uppercase-initial token.
    pub(crate) fn ty_name(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::TyName(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["type name"])),
        }
    }

    fn is_term_atom_start(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LParen)
    }

    pub(crate) fn expr<B: Builder>(&mut self) -> Result<Expr<B>, ParseError> {
        if self.eat(&Tok::Lam) {
            let mut binders = vec![B::binder(self)?];
            while matches!(self.peek(), Tok::Ident(_)) {
                binders.push(B::binder(self)?);
            }
            self.expect(Tok::Dot)?;
            let at = self.offset();
            let mut body = self.term_of::<B>(at)?;
            for b in binders.into_iter().rev() {
                body = B::lam(b, body);
            }
            return Ok(Expr::Term(body));
        }
        let start = self.offset();
        let head = self.unit::<B>()?;
        if !self.eat(&Tok::Star) {
            return Ok(head);
        }
        let s = match head {
            Expr::Subst(s) => s,
            Expr::Term(_) => {
                return Err(ParseError::Category {
                    offset: start,
                    expected: Category::Subst,
                    found: Category::Term,
                })
            }
        };
        Ok(match self.expr::<B>()? {
            Expr::Term(m) => Expr::Term(B::clos(s, m)),
            Expr::Subst(q) => Expr::Subst(B::comp(s, q)),
        })
    }

    /// A substitution atom, or an application spine of term atoms.
    fn unit<B: Builder>(&mut self) -> Result<Expr<B>, ParseError> {
        match self.peek().clone() {
            Tok::Id => {
                self.bump();
                Ok(Expr::Subst(B::id()))
            }
            Tok::Pi(v) => {
                self.bump();
                Ok(Expr::Subst(B::pi(Var::new(&v).expect("lexer validated"))))
            }
            Tok::LAngle => {
                self.bump();
                let at = self.offset();
                let mut s = self.subst_of::<B>(at)?;
                self.expect(Tok::Comma)?;
                loop {
                    let at = self.offset();
                    let n = self.term_of::<B>(at)?;
                    self.expect(Tok::Slash)?;
                    let v = self.var()?;
                    s = B::cons(s, n, v);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RAngle)?;
                Ok(Expr::Subst(s))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr::<B>()?;
                self.expect(Tok::RParen)?;
                match inner {
                    Expr::Subst(s) => Ok(Expr::Subst(s)),
                    Expr::Term(m) => self.spine::<B>(m).map(Expr::Term),
                }
            }
            Tok::Ident(_) => {
                let v = self.var()?;
                self.spine::<B>(B::var(v)).map(Expr::Term)
            }
            _ => Err(self.error(&["variable", "`lam`", "`id`", "`pi_`", "`<`", "`(`"])),
        }
    }

    fn spine<B: Builder>(&mut self, mut head: B::Term) -> Result<B::Term, ParseError> {
        while self.is_term_atom_start() {
            let at = self.offset();
            let arg = if self.eat(&Tok::LParen) {
                let m = self.term_of::<B>(at)?;
                self.expect(Tok::RParen)?;
                m
            } else {
                B::var(self.var()?)
            };
            head = B::app(head, arg);
        }
        Ok(head)
    }

    pub(crate) fn term_of<B: Builder>(&mut self, at: usize) -> Result<B::Term, ParseError> {
        match self.expr::<B>()? {
            Expr::Term(m) => Ok(m),
            Expr::Subst(_) => Err(ParseError::Category {
                offset: at,
                expected: Category::Term,
                found: Category::Subst,
            }),
        }
    }

    pub(crate) fn subst_of<B: Builder>(&mut self, at: usize) -> Result<B::Subst, ParseError> {
        match self.expr::<B>()? {
            Expr::Subst(s) => Ok(s),
            Expr::Term(_) => Err(ParseError::Category {
                offset: at,
                expected: Category::Subst,
                found: Category::Term,
            }),
        }
    }

    /// Comma-separated entries up to (not including) a token that cannot continue.
    pub(crate) fn context(&mut self) -> Result<Context, ParseError> {
        let mut entries = Vec::new();
        if matches!(self.peek(), Tok::Ident(_)) {
            entries.push(self.var()?);
            while self.eat(&Tok::Comma) {
                entries.push(self.var()?);
            }
        }
        Ok(Context::new(entries))
    }

    fn judgement(&mut self) -> Result<Judgement, ParseError> {
        let ctx = self.context()?;
        if *self.peek() != Tok::Turnstile {
            let expected: &[&str] = if ctx.is_empty() {
                &["variable", "`|-`"]
            } else {
                &["`,`", "`|-`"]
            };
            return Err(self.error(expected));
        }
        self.bump();
        match self.expr::<Plain>()? {
            Expr::Term(m) => Ok(Judgement::Term(ctx, m)),
            Expr::Subst(s) => {
                self.expect(Tok::Triangle)?;
                let cod = self.context()?;
                Ok(Judgement::Subst(ctx, s, cod))
            }
        }
    }
}

/// Result of [`parse`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Term(Term),
    Subst(Subst),
    Context(Context),
    Judgement(Judgement),
}

pub fn parse(text: &str, category: Category) -> Result<Parsed, ParseError> {
    Ok(match category {
        Category::Term => Parsed::Term(parse_term(text)?),
        Category::Subst => Parsed::Subst(parse_subst(text)?),
        Category::Context => Parsed::Context(parse_context(text)?),
        Category::Judgement => Parsed::Judgement(parse_judgement(text)?),
    })
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let m = p.term_of::<Plain>(0)?;
    p.finish()?;
    Ok(m)
}

pub fn parse_subst(text: &str) -> Result<Subst, ParseError> {
    let mut p = Parser::new(text)?;
    let s = p.subst_of::<Plain>(0)?;
    p.finish()?;
    Ok(s)
}

pub fn parse_context(text: &str) -> Result<Context, ParseError> {
    let mut p = Parser::new(text)?;
    let c = p.context()?;
    p.finish()?;
    Ok(c)
}

pub fn parse_judgement(text: &str) -> Result<Judgement, ParseError> {
    let mut p = Parser::new(text)?;
    let j = p.judgement()?;
    p.finish()?;
    Ok(j)
}
