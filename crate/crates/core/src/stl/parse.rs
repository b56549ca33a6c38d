//! Text parser for STL formulas.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! or     := and ("|" and)*
//! and    := until ("&" until)*
//! until  := unary ("U" interval until)?            -- right associative
//! unary  := "!" unary | ("F"|"G") interval unary | atom
//! atom   := "true" | "in" "(" ident ")" | ident ("<"|">") number | "(" or ")"
//! interval := "[" int "," int ")"
//! ```
//!
//! Variables `x` and `y` name the first and second workspace coordinate.
//! Printing a parsed formula and re-parsing it yields the same tree.

use super::{Cmp, Error, Formula, Interval};

pub fn parse_formula(text: &str) -> Result<Formula, Error> {
    let mut p = Parser::new(text);
    let formula = p.parse_or()?;
    p.skip_ws();
    if p.pos < p.input.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(formula)
}

struct Parser<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser { input, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let consumed = &self.input[..pos.min(self.input.len())];
        let line = consumed.matches('\n').count() + 1;
        let col = consumed.chars().rev().take_while(|&c| c != '\n').count() + 1;
        Error::Parse {
            line,
            col,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.input[self.pos..].chars().next()
    }

    fn eat(&mut self, expected: char) -> Result<(), Error> {
        self.skip_ws();
        if self.peek() == Some(expected) {
            self.pos += expected.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected `{expected}`")))
        }
    }

    /// True when the next non-whitespace input is exactly the keyword `kw`
    /// (not a prefix of a longer identifier); consumes it.
    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let rest = &self.input[self.pos..];
        if rest.starts_with(kw) {
            let after = rest[kw.len()..].chars().next();
            if !matches!(after, Some(c) if c.is_alphanumeric() || c == '_') {
                self.pos += kw.len();
                return true;
            }
        }
        false
    }

    fn parse_ident(&mut self) -> Result<String, Error> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_alphabetic() || c == '_' => self.pos += c.len_utf8(),
            _ => return Err(self.error("expected identifier")),
        }
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        Ok(self.input[start..self.pos].to_string())
    }

    fn parse_number(&mut self) -> Result<f64, Error> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        let mut digits = false;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            digits = true;
            self.pos += 1;
        }
        if self.peek() == Some('.') {
            self.pos += 1;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                digits = true;
                self.pos += 1;
            }
        }
        if !digits {
            return Err(self.error_at(start, "expected number"));
        }
        self.input[start..self.pos]
            .parse()
            .map_err(|_| self.error_at(start, "invalid number"))
    }

    fn parse_uint(&mut self) -> Result<u32, Error> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected nonnegative integer"));
        }
        self.input[start..self.pos]
            .parse()
            .map_err(|_| self.error_at(start, "integer out of range"))
    }

    fn parse_interval(&mut self) -> Result<Interval, Error> {
        self.eat('[')?;
        let start = self.pos;
        let lo = self.parse_uint()?;
        self.eat(',')?;
        let hi = self.parse_uint()?;
        self.eat(')')?;
        Interval::new(lo, hi).map_err(|_| {
            self.error_at(start, format!("empty interval [{lo},{hi}): need lo < hi"))
        })
    }

    fn parse_or(&mut self) -> Result<Formula, Error> {
        let mut lhs = self.parse_and()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('|') {
                self.pos += 1;
                let rhs = self.parse_and()?;
                lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_and(&mut self) -> Result<Formula, Error> {
        let mut lhs = self.parse_until()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('&') {
                self.pos += 1;
                let rhs = self.parse_until()?;
                lhs = Formula::And(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_until(&mut self) -> Result<Formula, Error> {
        let lhs = self.parse_unary()?;
        self.skip_ws();
        if self.input[self.pos..].starts_with("U[") {
            self.pos += 1;
            let interval = self.parse_interval()?;
            let rhs = self.parse_until()?;
            return Ok(Formula::Until {
                interval,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            });
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Formula, Error> {
        self.skip_ws();
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(Formula::Not(Box::new(self.parse_unary()?)))
            }
            Some('F') if self.input[self.pos..].starts_with("F[") => {
                self.pos += 1;
                let interval = self.parse_interval()?;
                Ok(Formula::Eventually {
                    interval,
                    sub: Box::new(self.parse_unary()?),
                })
            }
            Some('G') if self.input[self.pos..].starts_with("G[") => {
                self.pos += 1;
                let interval = self.parse_interval()?;
                Ok(Formula::Always {
                    interval,
                    sub: Box::new(self.parse_unary()?),
                })
            }
            _ => self.parse_atom(),
        }
    }

    fn parse_atom(&mut self) -> Result<Formula, Error> {
        self.skip_ws();
        if self.peek() == Some('(') {
            self.pos += 1;
            let inner = self.parse_or()?;
            self.eat(')')?;
            return Ok(inner);
        }
        if self.eat_keyword("true") {
            return Ok(Formula::True);
        }
        if self.eat_keyword("in") {
            self.eat('(')?;
            let name = self.parse_ident()?;
            self.eat(')')?;
            return Ok(Formula::InRegion { name, region: None });
        }
        let start = self.pos;
        let ident = self.parse_ident()?;
        let var = match ident.as_str() {
            "x" => 0,
            "y" => 1,
            other => {
                return Err(self.error_at(start, format!("unknown variable `{other}`")));
            }
        };
        self.skip_ws();
        let cmp = match self.peek() {
            Some('<') => Cmp::Lt,
            Some('>') => Cmp::Gt,
            _ => return Err(self.error("expected `<` or `>` after variable")),
        };
        self.pos += 1;
        let value = self.parse_number()?;
        Ok(Formula::Pred { var, cmp, value })
    }
}
