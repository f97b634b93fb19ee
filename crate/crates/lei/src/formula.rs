//! Formula syntax: abstract syntax tree, parser, and renderer.
//!
//! The surface grammar is
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := prefix ("&" prefix)*
//! prefix  := "~" prefix | "I" prefix | "[" formula "]" prefix
//!          | atom | "(" formula ")"
//! atom    := [a-z][a-z0-9_]*
//! ```
//!
//! `->` is right-associative; `&`, `|` and `<->` associate to the left.
//! Disjunction and biconditional are surface sugar only: `a | b` parses to
//! `~(~a & ~b)` and `a <-> b` parses to `(a -> b) & (b -> a)`. The tree
//! therefore has exactly six constructors and every semantic routine in
//! the crate is a six-case match.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A formula of the language.
///
/// `Ann(content, body)` is the announcement `[content] body`. Everything
/// else is static. Disjunction and biconditional do not appear here; the
/// parser desugars them (see the module docs).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// Propositional atom, e.g. `p` or `rain_tomorrow`.
    Atom(String),
    /// Strong negation `~f`.
    Not(Box<Formula>),
    /// Conjunction `f & g`.
    And(Box<Formula>, Box<Formula>),
    /// Two-valued material implication `f -> g`.
    Imp(Box<Formula>, Box<Formula>),
    /// Ignorance `I f`.
    Ign(Box<Formula>),
    /// Public announcement `[f] g`: announce `f`, then evaluate `g`.
    Ann(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Builds an atom.
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    /// Negates `self`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    /// Conjoins `self` with `rhs`.
    pub fn and(self, rhs: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    /// Builds the implication `self -> rhs`.
    pub fn imp(self, rhs: Formula) -> Self {
        Formula::Imp(Box::new(self), Box::new(rhs))
    }

    /// Wraps `self` in the ignorance operator.
    pub fn ign(self) -> Self {
        Formula::Ign(Box::new(self))
    }

    /// Builds the announcement `[content] body`.
    pub fn ann(content: Formula, body: Formula) -> Self {
        Formula::Ann(Box::new(content), Box::new(body))
    }

    /// Builds `self | rhs`, desugared to `~(~self & ~rhs)`.
    pub fn or(self, rhs: Formula) -> Self {
        self.not().and(rhs.not()).not()
    }

    /// Builds `self <-> rhs`, desugared to `(self -> rhs) & (rhs -> self)`.
    pub fn iff(self, rhs: Formula) -> Self {
        self.clone().imp(rhs.clone()).and(rhs.imp(self))
    }

    /// True when the formula contains no announcement operator.
    pub fn is_static(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) | Formula::Ign(f) => f.is_static(),
            Formula::And(a, b) | Formula::Imp(a, b) => a.is_static() && b.is_static(),
            Formula::Ann(_, _) => false,
        }
    }

    /// Nesting depth of modal operators; both `I` and `[_] _` count.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::And(a, b) | Formula::Imp(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Ign(f) => 1 + f.modal_depth(),
            Formula::Ann(c, b) => 1 + c.modal_depth().max(b.modal_depth()),
        }
    }

    /// The set of atom names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) | Formula::Ign(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Imp(a, b) | Formula::Ann(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Applies the substitution `map` (atom name to replacement) uniformly.
    ///
    /// Returns the substituted formula together with a safety flag. The
    /// flag is `false` when some substituted atom occurs inside an
    /// announcement (in its content or its body): in the dynamic logic,
    /// uniform substitution is only admissible for atoms that stay out of
    /// announcement scope, because announcements pin the propositional
    /// content of the worlds they create. The substitution is still
    /// performed; callers decide what the flag means for them.
    pub fn uniform_substitute(&self, map: &BTreeMap<String, Formula>) -> (Formula, bool) {
        let mut shadowed = BTreeSet::new();
        self.atoms_under_announcement(&mut shadowed);
        let safe = !map.keys().any(|k| shadowed.contains(k));
        (self.substitute(map), safe)
    }

    fn substitute(&self, map: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Atom(a) => map.get(a).cloned().unwrap_or_else(|| self.clone()),
            Formula::Not(f) => f.substitute(map).not(),
            Formula::And(a, b) => a.substitute(map).and(b.substitute(map)),
            Formula::Imp(a, b) => a.substitute(map).imp(b.substitute(map)),
            Formula::Ign(f) => f.substitute(map).ign(),
            Formula::Ann(c, b) => Formula::ann(c.substitute(map), b.substitute(map)),
        }
    }

    fn atoms_under_announcement(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_) => {}
            Formula::Not(f) | Formula::Ign(f) => f.atoms_under_announcement(out),
            Formula::And(a, b) | Formula::Imp(a, b) => {
                a.atoms_under_announcement(out);
                b.atoms_under_announcement(out);
            }
            Formula::Ann(c, b) => {
                c.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Recognises a desugared disjunction `~(~a & ~b)`, returning `(a, b)`.
    pub fn as_or(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::Not(inner) = self {
            if let Formula::And(l, r) = inner.as_ref() {
                if let (Formula::Not(a), Formula::Not(b)) = (l.as_ref(), r.as_ref()) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

/// Byte range of a token or error inside the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    /// Offset of the first byte.
    pub start: usize,
    /// Offset one past the last byte.
    pub end: usize,
}

/// Error produced by [`parse`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at bytes {}..{}: {message}", span.start, span.end)]
pub struct ParseError {
    /// Where in the input the error was detected.
    pub span: Span,
    /// Human-readable description, including what was expected.
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Atom(String),
    KwI,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Iff,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Atom(a) => write!(f, "atom `{a}`"),
            Token::KwI => write!(f, "`I`"),
            Token::Tilde => write!(f, "`~`"),
            Token::Amp => write!(f, "`&`"),
            Token::Pipe => write!(f, "`|`"),
            Token::Arrow => write!(f, "`->`"),
            Token::Iff => write!(f, "`<->`"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
            Token::LBrack => write!(f, "`[`"),
            Token::RBrack => write!(f, "`]`"),
            Token::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Token, Span)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'~' => {
                out.push((Token::Tilde, Span { start, end: i + 1 }));
                i += 1;
            }
            b'&' => {
                out.push((Token::Amp, Span { start, end: i + 1 }));
                i += 1;
            }
            b'|' => {
                out.push((Token::Pipe, Span { start, end: i + 1 }));
                i += 1;
            }
            b'(' => {
                out.push((Token::LParen, Span { start, end: i + 1 }));
                i += 1;
            }
            b')' => {
                out.push((Token::RParen, Span { start, end: i + 1 }));
                i += 1;
            }
            b'[' => {
                out.push((Token::LBrack, Span { start, end: i + 1 }));
                i += 1;
            }
            b']' => {
                out.push((Token::RBrack, Span { start, end: i + 1 }));
                i += 1;
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((Token::Arrow, Span { start, end: i + 2 }));
                    i += 2;
                } else {
                    return Err(ParseError {
                        span: Span { start, end: i + 1 },
                        message: "expected `->`".to_string(),
                    });
                }
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    out.push((Token::Iff, Span { start, end: i + 3 }));
                    i += 3;
                } else {
                    return Err(ParseError {
                        span: Span { start, end: i + 1 },
                        message: "expected `<->`".to_string(),
                    });
                }
            }
            b'I' => {
                out.push((Token::KwI, Span { start, end: i + 1 }));
                i += 1;
            }
            b'a'..=b'z' => {
                let mut end = i + 1;
                while end < bytes.len()
                    && (bytes[end].is_ascii_lowercase()
                        || bytes[end].is_ascii_digit()
                        || bytes[end] == b'_')
                {
                    end += 1;
                }
                let name = src[i..end].to_string();
                out.push((Token::Atom(name), Span { start, end }));
                i = end;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap();
                return Err(ParseError {
                    span: Span {
                        start,
                        end: i + ch.len_utf8(),
                    },
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    out.push((
        Token::Eof,
        Span {
            start: bytes.len(),
            end: bytes.len(),
        },
    ));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Token) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(ParseError {
                span: self.span(),
                message: format!("expected {}, found {}", want, self.peek()),
            })
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.imp()?;
        while *self.peek() == Token::Iff {
            self.bump();
            let rhs = self.imp()?;
            acc = acc.iff(rhs);
        }
        Ok(acc)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Token::Arrow {
            self.bump();
            let rhs = self.imp()?;
            Ok(lhs.imp(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while *self.peek() == Token::Pipe {
            self.bump();
            let rhs = self.and()?;
            acc = acc.or(rhs);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.prefix()?;
        while *self.peek() == Token::Amp {
            self.bump();
            let rhs = self.prefix()?;
            acc = acc.and(rhs);
        }
        Ok(acc)
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Token::Tilde => {
                self.bump();
                Ok(self.prefix()?.not())
            }
            Token::KwI => {
                self.bump();
                Ok(self.prefix()?.ign())
            }
            Token::LBrack => {
                self.bump();
                let content = self.formula()?;
                self.expect(Token::RBrack)?;
                let body = self.prefix()?;
                Ok(Formula::ann(content, body))
            }
            Token::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Token::Atom(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            other => Err(ParseError {
                span: self.span(),
                message: format!("expected a formula (atom, `~`, `I`, `[`, or `(`), found {other}"),
            }),
        }
    }
}

/// Parses a formula from its surface syntax.
pub fn parse(src: &str) -> Result<Formula, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Token::Eof {
        return Err(ParseError {
            span: p.span(),
            message: format!("unexpected trailing input: found {}", p.peek()),
        });
    }
    Ok(f)
}

const PREC_IMP: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_PREFIX: u8 = 3;

fn prec_of(f: &Formula) -> u8 {
    match f {
        Formula::Imp(_, _) => PREC_IMP,
        Formula::And(_, _) => PREC_AND,
        _ => PREC_PREFIX,
    }
}

fn fmt_prec(f: &Formula, min: u8, out: &mut String) {
    let need_parens = prec_of(f) < min;
    if need_parens {
        out.push('(');
    }
    match f {
        Formula::Atom(a) => out.push_str(a),
        Formula::Not(x) => {
            out.push('~');
            fmt_prec(x, PREC_PREFIX, out);
        }
        Formula::Ign(x) => {
            out.push_str("I ");
            fmt_prec(x, PREC_PREFIX, out);
        }
        Formula::Ann(c, b) => {
            out.push('[');
            fmt_prec(c, PREC_IMP, out);
            out.push_str("] ");
            fmt_prec(b, PREC_PREFIX, out);
        }
        Formula::And(a, b) => {
            fmt_prec(a, PREC_AND, out);
            out.push_str(" & ");
            fmt_prec(b, PREC_PREFIX, out);
        }
        Formula::Imp(a, b) => {
            fmt_prec(a, PREC_AND, out);
            out.push_str(" -> ");
            fmt_prec(b, PREC_IMP, out);
        }
    }
    if need_parens {
        out.push(')');
    }
}

/// Renders a formula with the minimal parenthesisation that reparses to
/// the same tree. Desugared connectives stay desugared: `p | q` round-trips
/// through [`parse`] as the tree for `~(~p & ~q)` and renders as such.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    fmt_prec(f, PREC_IMP, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn q() -> Formula {
        Formula::atom("q")
    }

    fn r() -> Formula {
        Formula::atom("r")
    }

    #[test]
    fn parses_ignorance_of_atom() {
        assert_eq!(parse("I p").unwrap(), p().ign());
        assert_eq!(parse("Ip").unwrap(), p().ign());
    }

    #[test]
    fn parses_announcement_prefix() {
        assert_eq!(
            parse("[p] ~I p").unwrap(),
            Formula::ann(p(), p().ign().not())
        );
        assert_eq!(parse("[p] I q").unwrap(), Formula::ann(p(), q().ign()));
    }

    #[test]
    fn disjunction_desugars() {
        assert_eq!(parse("p | q").unwrap(), p().or(q()));
        assert_eq!(parse("p | q").unwrap(), p().not().and(q().not()).not());
    }

    #[test]
    fn biconditional_desugars() {
        assert_eq!(parse("p <-> q").unwrap(), p().iff(q()));
        assert_eq!(parse("p <-> q").unwrap(), p().imp(q()).and(q().imp(p())));
    }

    #[test]
    fn precedence_binds_prefix_then_and_then_imp() {
        assert_eq!(parse("~p & q -> r").unwrap(), p().not().and(q()).imp(r()));
        assert_eq!(parse("I p & q").unwrap(), p().ign().and(q()));
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(parse("p -> q -> r").unwrap(), p().imp(q().imp(r())));
    }

    #[test]
    fn and_and_iff_fold_left() {
        assert_eq!(parse("p & q & r").unwrap(), p().and(q()).and(r()));
        assert_eq!(parse("p <-> q <-> r").unwrap(), p().iff(q()).iff(r()));
    }

    #[test]
    fn announcement_content_is_a_full_formula() {
        assert_eq!(
            parse("[p -> q] r").unwrap(),
            Formula::ann(p().imp(q()), r())
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("p &").is_err());
        assert!(parse("(p").is_err());
        assert!(parse("p)").is_err());
        assert!(parse("P").is_err());
        assert!(parse("p <- q").is_err());
        assert!(parse("[p q").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn error_spans_point_at_the_problem() {
        let err = parse("p & ").unwrap_err();
        assert_eq!(err.span.start, 4);
        let err = parse("p ? q").unwrap_err();
        assert_eq!(err.span.start, 2);
    }

    #[test]
    fn renders_with_minimal_parens() {
        let cases = [
            "I p",
            "p & ~p",
            "[p] I q",
            "[p] ~I p",
            "~p & q -> r",
            "p -> q -> r",
            "(p -> q) -> r",
            "p & (q & r)",
            "I (p -> q)",
            "~(p & q)",
            "[p -> q] r",
            "~(~p & ~q)",
        ];
        for src in cases {
            assert_eq!(render(&parse(src).unwrap()), src, "render of `{src}`");
        }
    }

    #[test]
    fn modal_depth_counts_both_operators() {
        assert_eq!(parse("p -> q").unwrap().modal_depth(), 0);
        assert_eq!(parse("I p").unwrap().modal_depth(), 1);
        assert_eq!(parse("I I p").unwrap().modal_depth(), 2);
        assert_eq!(parse("[p] I q").unwrap().modal_depth(), 2);
        assert_eq!(parse("[I p] q").unwrap().modal_depth(), 2);
    }

    #[test]
    fn staticness() {
        assert!(parse("I p & ~q").unwrap().is_static());
        assert!(!parse("[p] q").unwrap().is_static());
        assert!(!parse("I [p] q").unwrap().is_static());
    }

    #[test]
    fn substitution_is_uniform() {
        let f = parse("p -> p & q").unwrap();
        let mut map = BTreeMap::new();
        map.insert("p".to_string(), parse("~r").unwrap());
        let (g, safe) = f.uniform_substitute(&map);
        assert_eq!(g, parse("~r -> ~r & q").unwrap());
        assert!(safe);
    }

    #[test]
    fn substitution_under_announcement_is_flagged() {
        let mut map = BTreeMap::new();
        map.insert("p".to_string(), q());

        let (g, safe) = parse("[p] ~I p").unwrap().uniform_substitute(&map);
        assert_eq!(g, parse("[q] ~I q").unwrap());
        assert!(!safe);

        let (g, safe) = parse("[q] p").unwrap().uniform_substitute(&map);
        assert_eq!(g, parse("[q] q").unwrap());
        assert!(!safe);

        let (_, safe) = parse("p & [q] r").unwrap().uniform_substitute(&map);
        assert!(safe);
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = "[a-e][a-z0-9_]{0,2}".prop_map(Formula::atom);
        leaf.prop_recursive(4, 48, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                inner.clone().prop_map(Formula::ign),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.imp(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::ann(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn render_then_parse_round_trips(f in arb_formula()) {
            let text = render(&f);
            let back = parse(&text).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
