//! Formula syntax: the AST, a recursive-descent parser and a minimal-parentheses
//! printer.
//!
//! Concrete syntax uses `~`, `&`, `|` and `->`. Binding strength decreases in
//! that order; `&` and `|` associate to the left, `->` to the right.
//!
//! ```text
//! formula := imp
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := neg ("&" neg)*
//! neg     := "~" neg | atom | "(" formula ")"
//! atom    := [A-Za-z][A-Za-z0-9_]*
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Panics if `name` is not a valid atom name; use [`Formula::try_atom`]
    /// for untrusted input.
    pub fn atom(name: &str) -> Formula {
        Formula::try_atom(name).unwrap_or_else(|| panic!("invalid atom name `{name}`"))
    }

    pub fn try_atom(name: &str) -> Option<Formula> {
        is_atom_name(name).then(|| Formula::Atom(name.to_string()))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    /// Left-nested disjunction of `items`; `None` when empty.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    /// Left-nested conjunction of `items`; `None` when empty.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(name) => {
                out.insert(name.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Nesting depth of connectives; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    pub fn contains_imp(&self) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::Imp(..) => true,
            Formula::Not(f) => f.contains_imp(),
            Formula::And(l, r) | Formula::Or(l, r) => l.contains_imp() || r.contains_imp(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        write_formula(self, 0, &mut out);
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(_) => 3,
            Formula::Atom(_) => 4,
        }
    }
}

pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser::new(text)?;
    let f = parser.imp()?;
    match parser.peek() {
        Token::End => Ok(f),
        _ => Err(parser.error(&["&", "|", "->", "end of input"])),
    }
}

pub fn render(f: &Formula) -> String {
    f.render()
}

// A child is parenthesised when its precedence is below `min`.
fn write_formula(f: &Formula, min: u8, out: &mut String) {
    let wrap = f.precedence() < min;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::Atom(name) => out.push_str(name),
        Formula::Not(g) => {
            out.push('~');
            write_formula(g, 3, out);
        }
        Formula::And(l, r) => {
            write_formula(l, 2, out);
            out.push_str(" & ");
            write_formula(r, 3, out);
        }
        Formula::Or(l, r) => {
            write_formula(l, 1, out);
            out.push_str(" | ");
            write_formula(r, 2, out);
        }
        Formula::Imp(l, r) => {
            write_formula(l, 1, out);
            out.push_str(" -> ");
            write_formula(r, 0, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self.render())
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: expected one of {}", expected.join(", "))]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Atom(String),
    Tilde,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
    End,
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        let bytes = text.as_bytes();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let start = i;
            let token = match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    i += 1;
                    continue;
                }
                b'~' => Token::Tilde,
                b'&' => Token::Amp,
                b'|' => Token::Bar,
                b'(' => Token::LParen,
                b')' => Token::RParen,
                b'-' => {
                    if bytes.get(i + 1) != Some(&b'>') {
                        return Err(ParseError {
                            offset: i,
                            expected: vec!["->".into()],
                        });
                    }
                    i += 1;
                    Token::Arrow
                }
                c if c.is_ascii_alphabetic() => {
                    while i + 1 < bytes.len()
                        && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                    {
                        i += 1;
                    }
                    Token::Atom(text[start..=i].to_string())
                }
                _ => {
                    return Err(ParseError {
                        offset: i,
                        expected: vec!["~".into(), "atom".into(), "(".into()],
                    })
                }
            };
            tokens.push((start, token));
            i += 1;
        }
        tokens.push((bytes.len(), Token::End));
        Ok(Parser { tokens, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].1.clone();
        if t != Token::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.tokens[self.pos].0,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if *self.peek() == Token::Arrow {
            self.bump();
            let right = self.imp()?;
            return Ok(Formula::imp(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.and()?;
        while *self.peek() == Token::Bar {
            self.bump();
            let right = self.and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.neg()?;
        while *self.peek() == Token::Amp {
            self.bump();
            let right = self.neg()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn neg(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Token::Tilde => {
                self.bump();
                Ok(Formula::not(self.neg()?))
            }
            Token::Atom(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Token::LParen => {
                self.bump();
                let f = self.imp()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error(&[")", "&", "|", "->"]));
                }
                self.bump();
                Ok(f)
            }
            _ => Err(self.error(&["~", "atom", "("])),
        }
    }
}

#[cfg(test)]
pub(crate) mod strategy {
    use super::Formula;
    use proptest::prelude::*;

    pub fn atom_name() -> impl Strategy<Value = String> {
        prop_oneof![
            Just("p".to_string()),
            Just("q".to_string()),
            Just("r".to_string()),
            "[A-Za-z][A-Za-z0-9_]{0,3}",
        ]
    }

    pub fn formula() -> impl Strategy<Value = Formula> {
        atom_name().prop_map(Formula::Atom).prop_recursive(5, 48, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
                (inner.clone(), inner).prop_map(|(l, r)| Formula::imp(l, r)),
            ]
        })
    }
}
