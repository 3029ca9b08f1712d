//! Structured basis labels.
//!
//! Labels name basis elements of every graded object in the crate. They are
//! structured (tensor pairs, words, symmetric words, brackets) rather than
//! opaque strings so that serialization round-trips and constructions such as
//! `shift(shift(c, 1), -1)` restore labels exactly.
//!
//! Text form, parsed by [`Label::parse`]:
//! - atoms: `x`, `c2`, `x'`
//! - shift: `sh<3>(l)`
//! - tensor pair: `(l*r)`
//! - hom pair: `hom(l;r)`
//! - cobar generator: `t[l]`
//! - suspension letter: `s[l]`
//! - word: `w(a.b.c)`, the empty word is `w()`
//! - symmetric word: `sym(a^2.b)`, the empty word is `sym()`
//! - bracket: `[l,r]`
//! - kernel representative: `ker<d,i>`

use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Atom(String),
    /// degree-shift wrapper; `k` is the shift amount, never zero
    Sh(i64, Box<Label>),
    /// tensor pair
    Pair(Box<Label>, Box<Label>),
    /// basis element of a hom complex: (source label, target label)
    Hom(Box<Label>, Box<Label>),
    /// cobar generator t[c] = desuspended coalgebra element
    T(Box<Label>),
    /// suspended letter s[a] (bar words, Chevalley-Eilenberg letters)
    S(Box<Label>),
    /// associative word; empty word is the algebra unit
    Word(Vec<Label>),
    /// graded-symmetric word with multiplicities, kept sorted
    Sym(Vec<(Label, u32)>),
    /// Lie bracket
    Bracket(Box<Label>, Box<Label>),
    /// anonymous kernel/equalizer representative: (degree, index )
    Ker(i64, usize),
}

impl Label {
    pub fn atom(s: impl Into<String>) -> Label {
        Label::Atom(s.into())
    }

    pub fn pair(a: Label, b: Label) -> Label {
        Label::Pair(Box::new(a), Box::new(b))
    }

    pub fn hom(a: Label, b: Label) -> Label {
        Label::Hom(Box::new(a), Box::new(b))
    }

    pub fn t(a: Label) -> Label {
        Label::T(Box::new(a))
    }

    pub fn s(a: Label) -> Label {
        Label::S(Box::new(a))
    }

    pub fn bracket(a: Label, b: Label) -> Label {
        Label::Bracket(Box::new(a), Box::new(b))
    }

    /// Shift wrapper that composes additively and unwraps at zero.
    pub fn shifted(self, k: i64) -> Label {
        if k == 0 {
            return self;
        }
        match self {
            Label::Sh(j, inner) => {
                if j + k == 0 {
                    *inner
                } else {
                    Label::Sh(j + k, inner)
                }
            }
            other => Label::Sh(k, Box::new(other)),
        }
    }

    pub fn parse(s: &str) -> Result<Label> {
        let mut p = Parser { input: s.as_bytes(), pos: 0 };
        let label = p.label()?;
        p.skip_ws();
        if p.pos != p.input.len() {
            return Err(Error::Parse(format!("trailing input in label \"{s}\"")));
        }
        Ok(label)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => write!(f, "{s}"),
            Label::Sh(k, l) => write!(f, "sh<{k}>({l})"),
            Label::Pair(a, b) => write!(f, "({a}*{b})"),
            Label::Hom(a, b) => write!(f, "hom({a};{b})"),
            Label::T(a) => write!(f, "t[{a}]"),
            Label::S(a) => write!(f, "s[{a}]"),
            Label::Word(ls) => {
                write!(f, "w(")?;
                for (i, l) in ls.iter().enumerate() {
                    if i > 0 {
                        write!(f, ".")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, ")")
            }
            Label::Sym(ls) => {
                write!(f, "sym(")?;
                for (i, (l, e)) in ls.iter().enumerate() {
                    if i > 0 {
                        write!(f, ".")?;
                    }
                    if *e == 1 {
                        write!(f, "{l}")?;
                    } else {
                        write!(f, "{l}^{e}")?;
                    }
                }
                write!(f, ")")
            }
            Label::Bracket(a, b) => write!(f, "[{a},{b}]"),
            Label::Ker(d, i) => write!(f, "ker<{d},{i}>"),
        }
    }
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected '{}' at byte {} in label",
                c as char, self.pos
            )))
        }
    }

    fn starts_with(&self, s: &str) -> bool {
        self.input[self.pos..].starts_with(s.as_bytes())
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected integer at byte {start} in label")))
    }

    fn label(&mut self) -> Result<Label> {
        self.skip_ws();
        if self.starts_with("sh<") {
            self.pos += 3;
            let k = self.integer()?;
            self.expect(b'>')?;
            self.expect(b'(')?;
            let inner = self.label()?;
            self.expect(b')')?;
            return Ok(Label::Sh(k, Box::new(inner)));
        }
        if self.starts_with("hom(") {
            self.pos += 4;
            let a = self.label()?;
            self.expect(b';')?;
            let b = self.label()?;
            self.expect(b')')?;
            return Ok(Label::hom(a, b));
        }
        if self.starts_with("t[") {
            self.pos += 2;
            let a = self.label()?;
            self.expect(b']')?;
            return Ok(Label::t(a));
        }
        if self.starts_with("s[") {
            self.pos += 2;
            let a = self.label()?;
            self.expect(b']')?;
            return Ok(Label::s(a));
        }
        if self.starts_with("w(") {
            self.pos += 2;
            let mut items = Vec::new();
            self.skip_ws();
            if self.peek() != Some(b')') {
                loop {
                    items.push(self.label()?);
                    self.skip_ws();
                    if self.peek() == Some(b'.') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            self.expect(b')')?;
            return Ok(Label::Word(items));
        }
        if self.starts_with("sym(") {
            self.pos += 4;
            let mut items = Vec::new();
            self.skip_ws();
            if self.peek() != Some(b')') {
                loop {
                    let l = self.label()?;
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        e = self.integer()? as u32;
                    }
                    items.push((l, e));
                    self.skip_ws();
                    if self.peek() == Some(b'.') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            self.expect(b')')?;
            return Ok(Label::Sym(items));
        }
        if self.starts_with("ker<") {
            self.pos += 4;
            let d = self.integer()?;
            self.expect(b',')?;
            let i = self.integer()? as usize;
            self.expect(b'>')?;
            return Ok(Label::Ker(d, i));
        }
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let a = self.label()?;
                self.expect(b'*')?;
                let b = self.label()?;
                self.expect(b')')?;
                Ok(Label::pair(a, b))
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.label()?;
                self.expect(b',')?;
                let b = self.label()?;
                self.expect(b']')?;
                Ok(Label::bracket(a, b))
            }
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .map(|c| c.is_ascii_alphanumeric() || c == b'_' || c == b'\'')
                    .unwrap_or(false)
                {
                    self.pos += 1;
                }
                Ok(Label::Atom(
                    std::str::from_utf8(&self.input[start..self.pos]).unwrap().to_string(),
                ))
            }
            _ => Err(Error::Parse(format!("unexpected byte {} in label", self.pos))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_round_trip() {
        let labels = vec![
            Label::atom("x"),
            Label::atom("c_2'"),
            Label::t(Label::atom("c")),
            Label::pair(Label::atom("a"), Label::t(Label::atom("b"))),
            Label::Word(vec![Label::t(Label::atom("c")), Label::t(Label::atom("d"))]),
            Label::Word(vec![]),
            Label::Sym(vec![(Label::s(Label::atom("x")), 2), (Label::s(Label::atom("y")), 1)]),
            Label::bracket(Label::atom("x"), Label::bracket(Label::atom("x"), Label::atom("y"))),
            Label::hom(Label::atom("m"), Label::atom("n")),
            Label::Ker(3, 0),
            Label::atom("x").shifted(-2),
        ];
        for l in labels {
            let text = l.to_string();
            assert_eq!(Label::parse(&text).unwrap(), l, "round trip of {text}");
        }
    }

    #[test]
    fn shift_composes_and_unwraps() {
        let x = Label::atom("x");
        let s = x.clone().shifted(1).shifted(-1);
        assert_eq!(s, x);
        let s2 = x.clone().shifted(2).shifted(3);
        assert_eq!(s2, Label::Sh(5, Box::new(x)));
    }
}
