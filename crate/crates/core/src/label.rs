//! Outcome labels.
//!
//! A label is either an atomic text token or a tuple of labels. Tuples house
//! points of fiber products and values of joint random functions. The derived
//! order is the canonical one: atoms compare lexicographically, tuples
//! componentwise, and every atom sorts before every tuple.

use std::fmt;

use crate::error::{Error, Result};

/// Characters reserved for the textual tuple syntax `<a,b>`.
pub const RESERVED: &[char] = &['<', '>', ',', '[', ']', '(', ')'];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Atom(String),
    Tuple(Vec<Label>),
}

impl Label {
    pub fn try_atom(text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.is_empty() || text.contains(RESERVED) {
            return Err(Error::InvalidLabel(text));
        }
        Ok(Label::Atom(text))
    }

    /// Like [`Label::try_atom`] but panics on an invalid token. Meant for
    /// literals.
    pub fn atom(text: impl Into<String>) -> Self {
        Self::try_atom(text).expect("invalid atomic label")
    }

    pub fn tuple(parts: Vec<Label>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::TupleArity(parts.len()));
        }
        Ok(Label::Tuple(parts))
    }

    pub fn pair(first: Label, second: Label) -> Self {
        Label::Tuple(vec![first, second])
    }

    pub fn as_tuple(&self) -> Option<&[Label]> {
        match self {
            Label::Tuple(parts) => Some(parts),
            Label::Atom(_) => None,
        }
    }

    /// Components of a 2-tuple.
    pub fn as_pair(&self) -> Option<(&Label, &Label)> {
        match self.as_tuple() {
            Some([a, b]) => Some((a, b)),
            _ => None,
        }
    }

    /// Parses the textual form produced by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parser = Parser { text, pos: 0 };
        let label = parser.label()?;
        if parser.pos != text.len() {
            return Err(Error::InvalidLabel(text.to_string()));
        }
        Ok(label)
    }
}

impl From<i64> for Label {
    fn from(value: i64) -> Self {
        Label::Atom(value.to_string())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(text) => f.write_str(text),
            Label::Tuple(parts) => {
                f.write_str("<")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{part}")?;
                }
                f.write_str(">")
            }
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn fail(&self) -> Error {
        Error::InvalidLabel(self.text.to_string())
    }

    fn label(&mut self) -> Result<Label> {
        let rest = &self.text[self.pos..];
        if rest.starts_with('<') {
            self.pos += 1;
            let mut parts = vec![self.label()?];
            loop {
                match self.text[self.pos..].chars().next() {
                    Some(',') => {
                        self.pos += 1;
                        parts.push(self.label()?);
                    }
                    Some('>') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.fail()),
                }
            }
            Label::tuple(parts).map_err(|_| self.fail())
        } else {
            let end = rest.find(RESERVED).unwrap_or(rest.len());
            let token = &rest[..end];
            self.pos += end;
            Label::try_atom(token).map_err(|_| self.fail())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_sort_before_tuples() {
        let a = Label::atom("z");
        let t = Label::pair(Label::atom("a"), Label::atom("a"));
        assert!(a < t);
        assert!(Label::atom("10") < Label::atom("2"));
        let t2 = Label::pair(Label::atom("a"), Label::atom("b"));
        assert!(t < t2);
    }

    #[test]
    fn rejects_bad_atoms() {
        assert!(Label::try_atom("").is_err());
        assert!(Label::try_atom("a,b").is_err());
        assert!(Label::try_atom("<x").is_err());
        assert_eq!(Label::tuple(vec![Label::atom("a")]), Err(Error::TupleArity(1)));
    }

    #[test]
    fn text_form_round_trips() {
        let l = Label::tuple(vec![
            Label::pair(Label::atom("0"), Label::atom("1")),
            Label::atom("x"),
            Label::pair(Label::atom("2"), Label::pair(Label::atom("3"), Label::atom("4"))),
        ])
        .unwrap();
        let text = l.to_string();
        assert_eq!(text, "<<0,1>,x,<2,<3,4>>>");
        assert_eq!(Label::parse(&text).unwrap(), l);
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in ["", "<a>", "<a,b", "a>", "<a,,b>", "<a,b>c"] {
            assert!(Label::parse(bad).is_err(), "{bad}");
        }
    }
}
