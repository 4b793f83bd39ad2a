//! A small whitespace-insensitive cursor shared by every textual grammar.
//!
//! Grammars nest (dilator payloads sit inside ψ-terms, Γ-terms sit inside
//! payloads), so each parser takes a `&mut Cursor` and leaves it right after
//! the construct it consumed.

use thiserror::Error;

use crate::order::NuElem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("at byte {pos}: expected {expected}, found {found}")]
    Syntax { pos: usize, expected: String, found: String },
    #[error("at byte {pos}: {message}")]
    Invalid { pos: usize, message: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::Invalid { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn found(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        }
    }

    pub fn error(&mut self, expected: &str) -> ParseError {
        let found = self.found();
        ParseError::Syntax { pos: self.pos, expected: expected.to_string(), found }
    }

    pub fn invalid(&self, message: impl Into<String>) -> ParseError {
        ParseError::Invalid { pos: self.pos, message: message.into() }
    }

    /// Consumes `token` if the remaining input starts with it.
    pub fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("'{token}'")))
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn finish(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    pub fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error("a number"));
        }
        let n = rest[..len]
            .parse()
            .map_err(|_| self.invalid("number out of range"))?;
        self.pos += len;
        Ok(n)
    }

    pub fn usize(&mut self) -> Result<usize, ParseError> {
        let n = self.number()?;
        usize::try_from(n).map_err(|_| self.invalid("number out of range"))
    }

    /// Parses a comma separated list closed by `close`; the opening
    /// delimiter must already be consumed.
    pub fn list<T>(
        &mut self,
        close: &str,
        item: &mut dyn FnMut(&mut Cursor<'a>) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            if !self.eat(",") {
                return Err(self.error(&format!("',' or '{close}'")));
            }
        }
    }
}

/// Parses a whole string with `f`, rejecting trailing input.
pub fn parse_all<T>(
    text: &str,
    f: impl FnOnce(&mut Cursor<'_>) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let mut c = Cursor::new(text);
    let v = f(&mut c)?;
    c.finish()?;
    Ok(v)
}

/// `7`, `w`, `w+3`, `w2`, `w2+1`.
pub fn parse_nu(c: &mut Cursor<'_>) -> Result<NuElem, ParseError> {
    if c.eat("w") {
        let omegas = match c.peek() {
            Some(d) if d.is_ascii_digit() => small(c)?,
            _ => 1,
        };
        let units = if c.eat("+") { small(c)? } else { 0 };
        if omegas == 0 {
            return Err(c.invalid("w0 is not a literal; write a natural number"));
        }
        Ok(NuElem::omega_plus(omegas, units))
    } else {
        Ok(NuElem::nat(small(c)?))
    }
}

fn small(c: &mut Cursor<'_>) -> Result<u32, ParseError> {
    let n = c.number()?;
    u32::try_from(n).map_err(|_| c.invalid("number out of range"))
}

pub fn parse_nu_str(text: &str) -> Result<NuElem, ParseError> {
    parse_all(text, parse_nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_literals_roundtrip() {
        for lit in ["0", "7", "w", "w+3", "w2", "w2+1"] {
            let v = parse_nu_str(lit).unwrap();
            assert_eq!(v.to_string(), lit);
        }
        assert_eq!(parse_nu_str(" w + 2 ").unwrap(), NuElem::omega_plus(1, 2));
        assert!(parse_nu_str("w0").is_err());
    }

    #[test]
    fn errors_carry_position_and_expectation() {
        let err = parse_all("[1,2", |c| {
            c.expect("[")?;
            c.list("]", &mut |c| c.number())
        })
        .unwrap_err();
        assert_eq!(err.position(), 4);
        assert!(err.to_string().contains("','"));
    }
}
