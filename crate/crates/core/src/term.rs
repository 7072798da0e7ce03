//! Single-variable terms over a signature extended by carrier constants.
//!
//! Syntax (whitespace-insensitive prefix notation):
//!
//! ```text
//! term   := "x" | "#" digits | "(" symbol term* ")" | symbol
//! ```
//!
//! A bare symbol is a nullary application; `#k` is the carrier element `k`.

use std::fmt;

use crate::algebra::{Element, Signature, SymbolId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var,
    Const(Element),
    Apply(SymbolId, Vec<Term>),
}

/// Height, arity and number of occurrences of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measures {
    pub height: usize,
    pub arity: usize,
    pub x_count: usize,
}

impl Term {
    pub fn apply(sym: SymbolId, children: Vec<Term>) -> Self {
        Term::Apply(sym, children)
    }

    /// Leaves have height 0, a node with children one more than its tallest child.
    pub fn height(&self) -> usize {
        match self {
            Term::Var | Term::Const(_) => 0,
            Term::Apply(_, ch) if ch.is_empty() => 0,
            Term::Apply(_, ch) => 1 + ch.iter().map(Term::height).max().unwrap_or(0),
        }
    }

    /// The largest arity of a symbol occurring in the term (0 for leaves).
    pub fn arity(&self) -> usize {
        match self {
            Term::Var | Term::Const(_) => 0,
            Term::Apply(_, ch) => ch.iter().map(Term::arity).fold(ch.len(), usize::max),
        }
    }

    pub fn x_count(&self) -> usize {
        match self {
            Term::Var => 1,
            Term::Const(_) => 0,
            Term::Apply(_, ch) => ch.iter().map(Term::x_count).sum(),
        }
    }

    pub fn measures(&self) -> Measures {
        Measures {
            height: self.height(),
            arity: self.arity(),
            x_count: self.x_count(),
        }
    }

    /// Depth of the first occurrence of `x`, if any.
    pub fn x_depth(&self) -> Option<usize> {
        match self {
            Term::Var => Some(0),
            Term::Const(_) => None,
            Term::Apply(_, ch) => ch.iter().find_map(Term::x_depth).map(|d| d + 1),
        }
    }

    /// Replaces every occurrence of `x` by `t`.
    pub fn substitute(&self, t: &Term) -> Term {
        match self {
            Term::Var => t.clone(),
            Term::Const(c) => Term::Const(*c),
            Term::Apply(s, ch) => Term::Apply(*s, ch.iter().map(|c| c.substitute(t)).collect()),
        }
    }

    /// Checks symbol arities and constant ranges.
    pub fn validate(&self, sig: &Signature, carrier: usize) -> Result<()> {
        match self {
            Term::Var => Ok(()),
            Term::Const(c) if *c < carrier => Ok(()),
            Term::Const(c) => Err(Error::ElementOutOfRange {
                element: *c,
                carrier,
            }),
            Term::Apply(s, ch) => {
                if s.0 >= sig.len() {
                    return Err(Error::UnknownSymbol(format!("#{}", s.0)));
                }
                let sym = sig.symbol(*s);
                if sym.arity != ch.len() {
                    return Err(Error::ArityMismatch {
                        symbol: sym.name.clone(),
                        expected: sym.arity,
                        got: ch.len(),
                    });
                }
                ch.iter().try_for_each(|c| c.validate(sig, carrier))
            }
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var => f.write_str("x"),
            Term::Const(c) => write!(f, "#{c}"),
            Term::Apply(s, ch) if ch.is_empty() => f.write_str(self.sig.name(*s)),
            Term::Apply(s, ch) => {
                write!(f, "({}", self.sig.name(*s))?;
                for c in ch {
                    write!(f, " {}", c.display(self.sig))?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn format_term(t: &Term, sig: &Signature) -> String {
    t.display(sig).to_string()
}

/// A term in which `x` occurs at most once.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineTerm(Term);

impl AffineTerm {
    pub fn new(t: Term) -> Result<Self> {
        match t.x_count() {
            0 | 1 => Ok(Self(t)),
            n => Err(Error::Parse {
                offset: 0,
                message: format!("x occurs {n} times in an affine term"),
            }),
        }
    }

    pub fn identity() -> Self {
        Self(Term::Var)
    }

    /// True iff `x` actually occurs.
    pub fn is_proper(&self) -> bool {
        self.0.x_count() == 1
    }

    pub fn term(&self) -> &Term {
        &self.0
    }

    pub fn into_term(self) -> Term {
        self.0
    }
}

impl From<AffineTerm> for Term {
    fn from(t: AffineTerm) -> Term {
        t.0
    }
}

/// Concatenation along `x`: `s` with its `x` replaced by `t`.
///
/// `x` is the two-sided identity; a closed `s` is returned unchanged.
pub fn concat(s: &AffineTerm, t: &AffineTerm) -> AffineTerm {
    AffineTerm(s.0.substitute(&t.0))
}

// ---------------------------------------------------------------------------
// parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok<'s> {
    Open,
    Close,
    Word(&'s str),
}

fn tokenize(src: &str) -> Vec<(usize, Tok<'_>)> {
    let mut out = Vec::new();
    let mut word_start: Option<usize> = None;
    for (i, c) in src.char_indices() {
        let delimiter = c.is_whitespace() || c == '(' || c == ')';
        if delimiter {
            if let Some(start) = word_start.take() {
                out.push((start, Tok::Word(&src[start..i])));
            }
            match c {
                '(' => out.push((i, Tok::Open)),
                ')' => out.push((i, Tok::Close)),
                _ => {}
            }
        } else if word_start.is_none() {
            word_start = Some(i);
        }
    }
    if let Some(start) = word_start {
        out.push((start, Tok::Word(&src[start..])));
    }
    out
}

struct Parser<'s, 'g> {
    toks: Vec<(usize, Tok<'s>)>,
    pos: usize,
    end: usize,
    sig: &'g Signature,
    carrier: usize,
}

fn perr(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

impl Parser<'_, '_> {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn leaf_or_symbol(&self, offset: usize, word: &str) -> Result<Term> {
        if word == "x" {
            return Ok(Term::Var);
        }
        if let Some(digits) = word.strip_prefix('#') {
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(perr(offset, format!("malformed constant `{word}`")));
            }
            let c: usize = digits
                .parse()
                .map_err(|_| perr(offset, format!("constant `{word}` too large")))?;
            if c >= self.carrier {
                return Err(perr(
                    offset,
                    format!("constant #{c} outside carrier of size {}", self.carrier),
                ));
            }
            return Ok(Term::Const(c));
        }
        let id = self
            .sig
            .lookup(word)
            .ok_or_else(|| perr(offset, format!("unknown symbol `{word}`")))?;
        Ok(Term::Apply(id, Vec::new()))
    }

    fn term(&mut self) -> Result<Term> {
        let offset = self.offset();
        match self.toks.get(self.pos).cloned() {
            None => Err(perr(offset, "unexpected end of input")),
            Some((_, Tok::Close)) => Err(perr(offset, "unexpected `)`")),
            Some((_, Tok::Word(w))) => {
                self.pos += 1;
                let t = self.leaf_or_symbol(offset, w)?;
                if let Term::Apply(id, _) = t {
                    let arity = self.sig.arity(id);
                    if arity != 0 {
                        return Err(perr(
                            offset,
                            format!("arity mismatch: `{w}` takes {arity} argument(s), got 0"),
                        ));
                    }
                }
                Ok(t)
            }
            Some((_, Tok::Open)) => {
                self.pos += 1;
                let head_offset = self.offset();
                let head = match self.toks.get(self.pos).cloned() {
                    Some((_, Tok::Word(w))) => w,
                    _ => return Err(perr(head_offset, "expected a symbol after `(`")),
                };
                self.pos += 1;
                if head == "x" || head.starts_with('#') {
                    return Err(perr(
                        head_offset,
                        format!("`{head}` cannot head an application"),
                    ));
                }
                let id = self
                    .sig
                    .lookup(head)
                    .ok_or_else(|| perr(head_offset, format!("unknown symbol `{head}`")))?;
                let mut children = Vec::new();
                loop {
                    match self.toks.get(self.pos) {
                        Some((_, Tok::Close)) => {
                            self.pos += 1;
                            break;
                        }
                        None => return Err(perr(self.end, "unclosed `(`")),
                        _ => children.push(self.term()?),
                    }
                }
                let arity = self.sig.arity(id);
                if children.len() != arity {
                    return Err(perr(
                        head_offset,
                        format!(
                            "arity mismatch: `{head}` takes {arity} argument(s), got {}",
                            children.len()
                        ),
                    ));
                }
                Ok(Term::Apply(id, children))
            }
        }
    }
}

/// Parses a term; errors carry the byte offset of the offending token.
pub fn parse_term(src: &str, sig: &Signature, carrier: usize) -> Result<Term> {
    let mut p = Parser {
        toks: tokenize(src),
        pos: 0,
        end: src.len(),
        sig,
        carrier,
    };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return Err(perr(p.offset(), "trailing input after term"));
    }
    Ok(t)
}
