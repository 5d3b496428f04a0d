//! Element grammar: factors joined by `*`, each one of `e`, `s<i>` (`s0` for
//! the affine reflection), `t[λ]` for `ε^λ`, or `tau[μ]` for `τ_μ`.

use crate::affine::{AffSimple, AffineElt};
use crate::error::{Error, Result};
use crate::root_datum::RootDatum;

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("`{}`", c as char)))
        }
    }

    fn err(&self, expected: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            expected: expected.to_string(),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let b = kw.as_bytes();
        if self.s[self.pos..].starts_with(b) {
            let next = self.s.get(self.pos + b.len());
            if next.is_none_or(|c| !c.is_ascii_alphanumeric()) || kw == "t" || kw == "tau" {
                self.pos += b.len();
                return true;
            }
        }
        false
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && (self.s[self.pos] == b'-' || self.s[self.pos] == b'+') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.err("integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse {
                pos: start,
                expected: "integer in range".into(),
            })
    }

    fn unsigned(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or(Error::Parse {
                pos: start,
                expected: "reflection index".into(),
            })
    }

    fn vector(&mut self, len: usize) -> Result<Vec<i64>> {
        self.expect(b'[')?;
        let mut v = vec![self.integer()?];
        while self.eat(b',') {
            v.push(self.integer()?);
        }
        if v.len() != len {
            return Err(self.err(&format!("{len} coordinates")));
        }
        self.expect(b']')?;
        Ok(v)
    }
}

/// Parses an element of `W̃` for the given datum.
pub fn parse_element(rd: &RootDatum, text: &str) -> Result<AffineElt> {
    let mut c = Cursor {
        s: text.as_bytes(),
        pos: 0,
    };
    let mut acc = rd.aid();
    loop {
        let start = {
            c.skip_ws();
            c.pos
        };
        let factor = if c.keyword("tau") {
            let mu = c.vector(rd.rank())?;
            rd.tau(&mu).map_err(|_| Error::Parse {
                pos: start,
                expected: "dominant coweight inside tau[...]".into(),
            })?
        } else if c.keyword("t") {
            AffineElt::translation(c.vector(rd.rank())?)
        } else if c.keyword("e") {
            rd.aid()
        } else if c.eat(b's') {
            let i = c.unsigned()?;
            if i == 0 {
                if rd.components().len() != 1 {
                    return Err(Error::Parse {
                        pos: start,
                        expected: "irreducible group for s0".into(),
                    });
                }
                rd.simple_affine(AffSimple::Affine(0))
            } else if i <= rd.semisimple_rank() {
                rd.simple_affine(AffSimple::Finite(i - 1))
            } else {
                return Err(Error::Parse {
                    pos: start,
                    expected: format!("s1..s{}", rd.semisimple_rank()),
                });
            }
        } else {
            return Err(c.err("`e`, `s<i>`, `t[...]` or `tau[...]`"));
        };
        acc = rd.amul(&acc, &factor);
        if c.peek().is_none() {
            return Ok(acc);
        }
        c.expect(b'*')?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_products() {
        let rd = RootDatum::gl(3).unwrap();
        let x = parse_element(&rd, "s1*s2*t[1,0,0]").unwrap();
        let expect = rd.amul(
            &rd.aweyl(rd.from_word(&[0, 1]).unwrap()),
            &AffineElt::translation(vec![1, 0, 0]),
        );
        assert_eq!(x, expect);
        assert_eq!(parse_element(&rd, "tau[1,1,0]").unwrap(), rd.tau(&[1, 1, 0]).unwrap());
        assert_eq!(parse_element(&rd, "s1*s1").unwrap(), rd.aid());
        assert_eq!(parse_element(&rd, " e ").unwrap(), rd.aid());
    }

    #[test]
    fn reports_positions() {
        let rd = RootDatum::gl(2).unwrap();
        match parse_element(&rd, "s1*x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_element(&rd, "t[1,0") {
            Err(Error::Parse { pos, expected }) => {
                assert_eq!(pos, 5);
                assert!(expected.contains(']'));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_element(&rd, "s3"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_element(&rd, "t[1]"), Err(Error::Parse { .. })));
        assert!(matches!(parse_element(&rd, "tau[0,1]"), Err(Error::Parse { pos: 0, .. })));
    }
}
