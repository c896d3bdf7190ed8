//! Text forms for maps and partitions.
//!
//! An endofunction is written as its image table, `[1,2,1]`. A partition is
//! written either as a restricted-growth string, `[0,0,1]`, or in block
//! notation, `{0,1}|{2}`; parsing accepts both and dispatches on the first
//! character. Whitespace is allowed around every token. Parse errors carry
//! the byte offset of the offending character.

use std::str::FromStr;

use crate::dynamics::Endofunction;
use crate::error::{Error, Result};
use crate::partitions::SetPartition;

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(input: &'a str) -> Self {
        Scanner {
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        match self.peek() {
            Some(found) if found == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(found) => Err(self.error(format!(
                "expected '{}', found '{}'",
                byte as char, found as char
            ))),
            None => Err(self.error(format!("expected '{}', found end of input", byte as char))),
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        let mut value: usize = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as usize))
                .ok_or_else(|| Error::Parse {
                    position: start,
                    message: "number too large".into(),
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error(match self.bytes.get(self.pos) {
                Some(&b) => format!("expected a number, found '{}'", b as char),
                None => "expected a number, found end of input".into(),
            }));
        }
        Ok(value)
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos < self.bytes.len() {
            return Err(self.error(format!(
                "unexpected trailing input '{}'",
                self.bytes[self.pos] as char
            )));
        }
        Ok(())
    }

    fn error(&self, message: String) -> Error {
        Error::Parse {
            position: self.pos,
            message,
        }
    }

    /// `[a,b,c]`; the empty list `[]` is allowed here and rejected by the
    /// consuming constructor.
    fn bracket_list(&mut self) -> Result<Vec<usize>> {
        self.expect(b'[')?;
        let mut values = Vec::new();
        if self.peek() == Some(b']') {
            self.pos += 1;
            return Ok(values);
        }
        loop {
            values.push(self.number()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    return Ok(values);
                }
                Some(found) => {
                    return Err(
                        self.error(format!("expected ',' or ']', found '{}'", found as char))
                    )
                }
                None => return Err(self.error("expected ',' or ']', found end of input".into())),
            }
        }
    }

    /// `{a,b}`
    fn brace_set(&mut self) -> Result<Vec<usize>> {
        self.expect(b'{')?;
        let mut values = Vec::new();
        if self.peek() == Some(b'}') {
            self.pos += 1;
            return Ok(values);
        }
        loop {
            values.push(self.number()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(values);
                }
                Some(found) => {
                    return Err(
                        self.error(format!("expected ',' or '}}', found '{}'", found as char))
                    )
                }
                None => return Err(self.error("expected ',' or '}', found end of input".into())),
            }
        }
    }
}

/// Parses an endofunction from its image-table text, e.g. `[1,2,1]`.
pub fn parse_endofunction(input: &str) -> Result<Endofunction> {
    let mut scanner = Scanner::new(input);
    let table = scanner.bracket_list()?;
    scanner.finish()?;
    Endofunction::new(table)
}

/// Parses a partition from either notation: `[0,0,1]` or `{0,1}|{2}`.
pub fn parse_partition(input: &str) -> Result<SetPartition> {
    let mut scanner = Scanner::new(input);
    match scanner.peek() {
        Some(b'[') => {
            let rgs = scanner.bracket_list()?;
            scanner.finish()?;
            SetPartition::from_rgs(rgs)
        }
        Some(b'{') => {
            let mut blocks = vec![scanner.brace_set()?];
            while scanner.peek() == Some(b'|') {
                scanner.pos += 1;
                blocks.push(scanner.brace_set()?);
            }
            scanner.finish()?;
            let n = blocks.iter().map(Vec::len).sum();
            SetPartition::from_blocks(n, &blocks)
        }
        Some(found) => {
            Err(scanner.error(format!("expected '[' or '{{', found '{}'", found as char)))
        }
        None => Err(scanner.error("expected '[' or '{', found end of input".into())),
    }
}

impl FromStr for Endofunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_endofunction(s)
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_partition(s)
    }
}
