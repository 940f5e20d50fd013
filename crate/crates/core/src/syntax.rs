//! Bracket syntax for terms and literals.
//!
//! A term is a token or `[functor,arg1,...,argN]`. Tokens follow the
//! Prolog convention: uppercase-initial or `_`-initial tokens are
//! variables; lowercase-initial identifiers and numbers are constants.
//!
//! ```text
//! [father,X,Y]          compound, two variables
//! [know,haibara,[love,conan,ran]]
//! 4                     constant
//! ```

use alloc::string::String;
use alloc::vec::Vec;

use crate::term::{is_reserved_var, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenClass {
    Constant,
    Variable,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} at offset {offset}")]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

impl SyntaxError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        Self {
            offset,
            message: message.into(),
        }
    }
}

fn is_number(token: &str) -> bool {
    let digits = token.strip_prefix('-').unwrap_or(token);
    let (whole, frac) = match digits.split_once('.') {
        Some((w, f)) => (w, Some(f)),
        None => (digits, None),
    };
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    all_digits(whole) && frac.is_none_or(all_digits)
}

fn is_identifier(token: &str) -> bool {
    let mut bytes = token.bytes();
    matches!(bytes.next(), Some(b) if b.is_ascii_alphabetic() || b == b'_')
        && bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Classify a token as a constant or a variable.
pub fn classify_token(token: &str) -> Result<TokenClass, SyntaxError> {
    if token.is_empty() {
        return Err(SyntaxError::new(0, "empty token"));
    }
    if is_number(token) {
        return Ok(TokenClass::Constant);
    }
    if !is_identifier(token) {
        return Err(SyntaxError::new(
            0,
            alloc::format!("illegal token {token:?}"),
        ));
    }
    let first = token.as_bytes()[0];
    if first.is_ascii_uppercase() || first == b'_' {
        Ok(TokenClass::Variable)
    } else {
        Ok(TokenClass::Constant)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    allow_fresh: bool,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(b) = self.src.as_bytes().get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(SyntaxError::new(
                self.pos,
                alloc::format!("expected '{}', found '{}'", byte as char, b as char),
            )),
            None => Err(SyntaxError::new(
                self.pos,
                alloc::format!("expected '{}', found end of input", byte as char),
            )),
        }
    }

    fn token(&mut self) -> Result<(usize, &'a str), SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while let Some(&b) = bytes.get(self.pos) {
            if b == b'[' || b == b']' || b == b',' || b.is_ascii_whitespace() {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(SyntaxError::new(start, "expected a token"));
        }
        Ok((start, &self.src[start..self.pos]))
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        if self.peek() == Some(b'[') {
            self.pos += 1;
            let (at, functor) = self.token()?;
            if classify(at, functor, self.allow_fresh)? != TokenClass::Constant {
                return Err(SyntaxError::new(
                    at,
                    alloc::format!("functor {functor:?} is not a constant"),
                ));
            }
            let mut args = Vec::new();
            while self.peek() == Some(b',') {
                self.pos += 1;
                args.push(self.term()?);
            }
            self.expect(b']')?;
            Ok(Term::compound(functor, args))
        } else {
            let (at, token) = self.token()?;
            Ok(match classify(at, token, self.allow_fresh)? {
                TokenClass::Constant => Term::constant(token),
                TokenClass::Variable => Term::var(token),
            })
        }
    }

    fn finish(&mut self) -> Result<(), SyntaxError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(SyntaxError::new(self.pos, "trailing input")),
        }
    }
}

fn classify(offset: usize, token: &str, allow_fresh: bool) -> Result<TokenClass, SyntaxError> {
    let class = classify_token(token).map_err(|e| SyntaxError::new(offset, e.message))?;
    if class == TokenClass::Variable {
        if token == "_" {
            return Err(SyntaxError::new(
                offset,
                "anonymous variable '_' is not supported",
            ));
        }
        if !allow_fresh && is_reserved_var(token) {
            return Err(SyntaxError::new(
                offset,
                alloc::format!("variable name {token:?} is reserved for renaming"),
            ));
        }
    }
    Ok(class)
}

/// Parse a single term in bracket syntax.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    parse_single(text, false)
}

/// Like [`parse_term`], but also accepts renamed variables such as `_V3`,
/// which appear in recorded proof traces.
pub fn parse_recorded_term(text: &str) -> Result<Term, SyntaxError> {
    parse_single(text, true)
}

fn parse_single(text: &str, allow_fresh: bool) -> Result<Term, SyntaxError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        allow_fresh,
    };
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parse a comma-separated list of literals, e.g. `[p,X], [q,X]`.
/// Blank input is the empty list.
pub fn parse_literals(text: &str) -> Result<Vec<Term>, SyntaxError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        allow_fresh: false,
    };
    let mut out = Vec::new();
    if p.peek().is_none() {
        return Ok(out);
    }
    out.push(p.term()?);
    while p.peek() == Some(b',') {
        p.pos += 1;
        out.push(p.term()?);
    }
    p.finish()?;
    Ok(out)
}

/// Inverse of [`parse_literals`].
pub fn render_literals(literals: &[Term]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (i, lit) in literals.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{lit}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn classify_examples() {
        assert_eq!(classify_token("X"), Ok(TokenClass::Variable));
        assert_eq!(classify_token("father"), Ok(TokenClass::Constant));
        assert_eq!(classify_token("4"), Ok(TokenClass::Constant));
        assert_eq!(classify_token("_Tmp"), Ok(TokenClass::Variable));
        assert_eq!(classify_token("-3.5"), Ok(TokenClass::Constant));
        assert!(classify_token("").is_err());
        assert!(classify_token("a-b").is_err());
        assert!(classify_token("3x").is_err());
        assert!(classify_token("1.").is_err());
    }

    #[test]
    fn parses_father_clause_literal() {
        let t = parse_term("[father, X,Y]").unwrap();
        assert_eq!(
            t,
            Term::compound("father", vec![Term::var("X"), Term::var("Y")])
        );
        assert_eq!(t.to_string(), "[father,X,Y]");
    }

    #[test]
    fn nested_and_nullary() {
        let t = parse_term("[know,haibara,[love,conan,ran]]").unwrap();
        assert_eq!(t.depth(), 3);
        assert_eq!(parse_term("[rain]").unwrap(), Term::constant("rain"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_term("[X,a]").is_err());
        assert!(parse_term("[p,a").is_err());
        assert!(parse_term("[p,a]]").is_err());
        assert!(parse_term("[p,_V3]").is_err());
        assert_eq!(
            parse_recorded_term("[p,_V3]").unwrap(),
            Term::compound("p", vec![Term::var("_V3")])
        );
        assert!(parse_term("[p,_]").is_err());
        assert!(parse_term("").is_err());
        assert!(parse_term("[p,,a]").is_err());
    }

    #[test]
    fn literal_lists() {
        let lits = parse_literals("[p,X], [q,X,b]").unwrap();
        assert_eq!(lits.len(), 2);
        assert_eq!(render_literals(&lits), "[p,X], [q,X,b]");
        assert!(parse_literals("   ").unwrap().is_empty());
        assert!(parse_literals("[p,X] [q]").is_err());
    }
}
