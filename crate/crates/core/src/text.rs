//! Tokenizer shared by the word grammars.
//!
//! A token is a single letter naming the generator family, followed either by
//! a bare index (`x2`, `s13`) or a bracketed index list (`B[1,3]`), and an
//! optional signed exponent (`^-2`). Tokens are separated by whitespace; a
//! lone `1` denotes the empty word.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub offset: usize,
    pub head: char,
    pub indices: Vec<usize>,
    pub bracketed: bool,
    pub exponent: i64,
}

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(Error::parse(self.pos, format!("expected '{want}', found '{c}'"))),
            None => Err(Error::parse(self.pos, format!("expected '{want}', found end of input"))),
        }
    }

    fn unsigned(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a number"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::parse(start, "number out of range"))
    }

    fn signed(&mut self) -> Result<i64> {
        let start = self.pos;
        let negative = match self.peek() {
            Some('-') => {
                self.bump();
                true
            }
            Some('+') => {
                self.bump();
                false
            }
            _ => false,
        };
        let magnitude = self.unsigned()?;
        let value = i64::try_from(magnitude).map_err(|_| Error::parse(start, "exponent out of range"))?;
        Ok(if negative { -value } else { value })
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut sc = Scanner { src, pos: 0 };
    let mut out = Vec::new();
    sc.skip_ws();
    if src.trim() == "1" {
        return Ok(out);
    }
    while let Some(c) = sc.peek() {
        let offset = sc.pos;
        if !c.is_ascii_alphabetic() {
            return Err(Error::parse(offset, format!("unexpected character '{c}'")));
        }
        sc.bump();
        let (indices, bracketed) = if sc.peek() == Some('[') {
            sc.bump();
            let mut idx = vec![sc.unsigned()?];
            loop {
                sc.skip_ws();
                match sc.peek() {
                    Some(',') => {
                        sc.bump();
                        sc.skip_ws();
                        idx.push(sc.unsigned()?);
                    }
                    _ => break,
                }
            }
            sc.expect(']')?;
            (idx, true)
        } else {
            (vec![sc.unsigned()?], false)
        };
        let exponent = if sc.peek() == Some('^') {
            sc.bump();
            sc.signed()?
        } else {
            1
        };
        match sc.peek() {
            None => {}
            Some(c) if c.is_whitespace() => {}
            Some(c) => return Err(Error::parse(sc.pos, format!("unexpected character '{c}'"))),
        }
        out.push(Token {
            offset,
            head: c,
            indices,
            bracketed,
            exponent,
        });
        sc.skip_ws();
    }
    Ok(out)
}

/// `^e` suffix, omitted for exponent one.
pub(crate) fn exponent_suffix(e: i64) -> String {
    if e == 1 {
        String::new()
    } else {
        format!("^{e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_and_bracketed() {
        let t = tokenize("x1^2 B[1, 3]^-1  s2").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!((t[0].head, t[0].indices.clone(), t[0].exponent), ('x', vec![1], 2));
        assert_eq!((t[1].head, t[1].indices.clone(), t[1].exponent), ('B', vec![1, 3], -1));
        assert!(t[1].bracketed);
        assert_eq!(t[2].offset, 17);
    }

    #[test]
    fn identity_and_empty() {
        assert!(tokenize("").unwrap().is_empty());
        assert!(tokenize("  1 ").unwrap().is_empty());
    }

    #[test]
    fn malformed_reports_offset() {
        match tokenize("B[1] X[2") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 8),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(tokenize("x^2"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(tokenize("x1x2"), Err(Error::Parse { offset: 2, .. })));
    }
}
