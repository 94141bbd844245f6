//! Recursive-descent parser for the operator expression language:
//!
//! ```text
//! expr := term+
//! term := atom ('^' posint)?
//! atom := 'a' | 'ad' | '(' expr ')'
//! ```
//!
//! Whitespace and `*` separate terms. Positions in errors are 0-based
//! character offsets.

use super::{BosonWord, Letter};
use crate::{Error, Result};

/// Upper bound on the expanded length of a parsed word. Normal ordering has
/// its own, much smaller cap; this one only stops `(a)^999999999` from
/// exhausting memory during expansion.
const MAX_EXPANDED_LEN: usize = 1 << 20;

pub fn parse_word(text: &str) -> Result<BosonWord> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let letters = p.expr()?;
    p.skip_separators();
    if let Some(c) = p.peek() {
        return Err(p.error(format!("unexpected {c:?}")));
    }
    Ok(BosonWord::new(letters))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_separators(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace() || c == '*') {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        loop {
            self.skip_separators();
            match self.peek() {
                Some(c) if c == '(' || c.is_alphabetic() => {
                    let term = self.term()?;
                    if out.len() + term.len() > MAX_EXPANDED_LEN {
                        return Err(Error::ResourceCap {
                            what: "expanded word length",
                            value: out.len() + term.len(),
                            cap: MAX_EXPANDED_LEN,
                        });
                    }
                    out.extend(term);
                }
                _ => break,
            }
        }
        if out.is_empty() {
            return Err(self.error(match self.peek() {
                Some(c) => format!("expected 'a', 'ad' or '(', found {c:?}"),
                None => "expected 'a', 'ad' or '(', found end of input".to_string(),
            }));
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Vec<Letter>> {
        let atom = self.atom()?;
        self.skip_whitespace();
        if self.peek() != Some('^') {
            return Ok(atom);
        }
        self.pos += 1;
        self.skip_whitespace();
        let exp_pos = self.pos;
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected exponent after '^'"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let exp: usize = digits.parse().map_err(|_| Error::Syntax {
            pos: exp_pos,
            msg: format!("exponent {digits} is too large"),
        })?;
        if exp == 0 {
            return Err(Error::Syntax {
                pos: exp_pos,
                msg: "exponent must be positive".into(),
            });
        }
        let len = atom.len().saturating_mul(exp);
        if len > MAX_EXPANDED_LEN {
            return Err(Error::ResourceCap {
                what: "expanded word length",
                value: len,
                cap: MAX_EXPANDED_LEN,
            });
        }
        Ok(atom.repeat(exp))
    }

    fn skip_whitespace(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> Result<Vec<Letter>> {
        match self.peek() {
            Some('(') => {
                let open = self.pos;
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_separators();
                if self.peek() != Some(')') {
                    return Err(Error::Syntax {
                        pos: self.pos,
                        msg: format!("unclosed '(' opened at {open}"),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(char::is_alphanumeric) {
                    self.pos += 1;
                }
                let ident: String = self.chars[start..self.pos].iter().collect();
                match ident.as_str() {
                    "a" => Ok(vec![Letter::A]),
                    "ad" => Ok(vec![Letter::Ad]),
                    _ => Err(Error::Syntax {
                        pos: start,
                        msg: format!("unknown operator {ident:?} (expected 'a' or 'ad')"),
                    }),
                }
            }
            _ => Err(self.error("expected 'a', 'ad' or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::{Ad, A};

    fn letters(text: &str) -> Vec<Letter> {
        parse_word(text).unwrap().letters().to_vec()
    }

    #[test]
    fn expansions() {
        assert_eq!(letters("(ad a)^2"), vec![Ad, A, Ad, A]);
        assert_eq!(letters("ad^2 a^2"), vec![Ad, Ad, A, A]);
        assert_eq!(letters("a ad"), vec![A, Ad]);
        assert_eq!(letters("a*ad"), vec![A, Ad]);
        assert_eq!(letters(" ((ad) a ^ 1)^3 "), vec![Ad, A, Ad, A, Ad, A]);
        assert_eq!(letters("(ad^2 a)^2"), vec![Ad, Ad, A, Ad, Ad, A]);
    }

    #[test]
    fn errors_carry_positions() {
        let pos = |t: &str| match parse_word(t) {
            Err(Error::Syntax { pos, .. }) => pos,
            other => panic!("expected syntax error for {t:?}, got {other:?}"),
        };
        assert_eq!(pos("a^0"), 2);
        assert_eq!(pos("a b"), 2);
        assert_eq!(pos("(a ad"), 5);
        assert_eq!(pos(""), 0);
        assert_eq!(pos("a)"), 1);
        assert_eq!(pos("a^"), 2);
        assert_eq!(pos("aad"), 0);
    }

    #[test]
    fn huge_exponent_is_a_resource_error() {
        assert!(matches!(
            parse_word("(a ad)^99999999"),
            Err(Error::ResourceCap { .. })
        ));
    }
}
