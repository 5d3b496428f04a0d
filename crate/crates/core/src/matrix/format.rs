//! Plain-text matrix files:
//!
//! ```text
//! field 2 2
//! precision 4
//! t + a^2, 1
//! t^-1 + a*t^2, 0
//! ```
//!
//! Coefficients are powers of the generator `a`; `1` is `a^0`. An entry whose
//! precision differs from the header carries a trailing `O(t^k)` term.

use std::sync::Arc;

use super::{Fe, Field, Laurent, LaurentMatrix, EXACT};
use crate::error::{Error, Result};

fn coeff(f: &Field, c: Fe) -> String {
    match f.log(c) {
        Some(0) => "1".into(),
        Some(1) => "a".into(),
        Some(k) => format!("a^{k}"),
        None => "0".into(),
    }
}

fn term(f: &Field, c: Fe, e: i64) -> String {
    let t = match e {
        0 => String::new(),
        1 => "t".into(),
        _ => format!("t^{e}"),
    };
    match (coeff(f, c).as_str(), e) {
        (c, 0) => c.to_string(),
        ("1", _) => t,
        (c, _) => format!("{c}*{t}"),
    }
}

fn write_entry(f: &Field, x: &Laurent, prec: i64) -> String {
    let mut parts: Vec<String> = x.terms().map(|(e, c)| term(f, c, e)).collect();
    if x.precision() != prec {
        parts.push(format!("O(t^{})", x.precision()));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn write_prec(p: i64) -> String {
    if p >= EXACT {
        "exact".into()
    } else {
        p.to_string()
    }
}

/// Serializes a matrix; the header precision is the minimum entry precision.
pub fn write_matrix(g: &LaurentMatrix) -> String {
    let f = g.field();
    let prec = g.precision();
    let mut out = format!("field {} {}\nprecision {}\n", f.q(), f.m(), write_prec(prec));
    for i in 0..g.n() {
        let row: Vec<String> = (0..g.n()).map(|j| write_entry(f, g.get(i, j), prec)).collect();
        out.push_str(&row.join(", "));
        out.push('\n');
    }
    out
}

struct Src<'a> {
    text: &'a str,
    base: usize,
}

impl Src<'_> {
    fn err(&self, at: usize, expected: &str) -> Error {
        Error::Parse {
            pos: self.base + at,
            expected: expected.into(),
        }
    }

    fn int(&self, s: &str, at: usize) -> Result<i64> {
        s.trim().parse().map_err(|_| self.err(at, "integer"))
    }
}

fn offset(line: &str, part: &str) -> usize {
    part.as_ptr() as usize - line.as_ptr() as usize
}

fn parse_coeff(f: &Field, src: &Src, s: &str, at: usize) -> Result<Fe> {
    let s = s.trim();
    if s == "a" {
        return Ok(f.gen_pow(1));
    }
    if let Some(k) = s.strip_prefix("a^") {
        return Ok(f.gen_pow(src.int(k, at + 2)?));
    }
    let d: u32 = s.parse().map_err(|_| src.err(at, "coefficient `a^k` or digit"))?;
    // an integer coefficient is its image in the prime field
    let mut c: Fe = 0;
    for _ in 0..d % f.characteristic() {
        c = f.add(c, 1);
    }
    Ok(c)
}

fn parse_texp(src: &Src, s: &str, at: usize) -> Result<i64> {
    let s = s.trim();
    match s {
        "t" => Ok(1),
        _ => match s.strip_prefix("t^") {
            Some(k) => src.int(k, at + 2),
            None => Err(src.err(at, "`t` or `t^k`")),
        },
    }
}

fn parse_entry(f: &Field, src: &Src, s: &str, prec: i64) -> Result<Laurent> {
    let mut terms: Vec<(i64, Fe)> = vec![];
    let mut p = prec;
    for part in s.split('+') {
        let at = offset(src.text, part) + (part.len() - part.trim_start().len());
        let t = part.trim();
        if t.is_empty() {
            return Err(src.err(at, "term"));
        }
        if let Some(inner) = t.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            p = parse_texp(src, inner, at + 2)?;
            continue;
        }
        let (c, e) = match t.split_once('*') {
            Some((c, e)) => (parse_coeff(f, src, c, at)?, parse_texp(src, e, at + c.len() + 1)?),
            None if t.starts_with('t') => (1, parse_texp(src, t, at)?),
            None => (parse_coeff(f, src, t, at)?, 0),
        };
        terms.push((e, c));
    }
    if terms.is_empty() {
        return Ok(Laurent::zero(p));
    }
    let lo = terms.iter().map(|x| x.0).min().unwrap();
    let hi = terms.iter().map(|x| x.0).max().unwrap();
    let mut c = vec![0; (hi - lo + 1) as usize];
    for (e, x) in terms {
        let slot = &mut c[(e - lo) as usize];
        *slot = f.add(*slot, x);
    }
    Ok(Laurent::from_coeffs(lo, c, p))
}

/// Parses the format written by [`write_matrix`]. Positions in errors are
/// byte offsets into `text`.
pub fn parse_matrix(text: &str) -> Result<LaurentMatrix> {
    let mut lines = vec![];
    let mut base = 0;
    for l in text.split('\n') {
        if !l.trim().is_empty() && !l.trim_start().starts_with('#') {
            lines.push((base, l));
        }
        base += l.len() + 1;
    }
    let mut it = lines.into_iter();
    let (b0, head) = it.next().ok_or(Error::Parse { pos: 0, expected: "`field q m`".into() })?;
    let src = Src { text: head, base: b0 };
    let w: Vec<&str> = head.split_whitespace().collect();
    let field = match w.as_slice() {
        ["field", q, m] => Field::new(src.int(q, 6)? as u32, src.int(m, 6)? as u32)?,
        _ => return Err(src.err(0, "`field q m`")),
    };
    let (b1, pl) = it.next().ok_or(Error::Parse { pos: text.len(), expected: "`precision N`".into() })?;
    let src = Src { text: pl, base: b1 };
    let prec = match pl.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["precision", "exact"] => EXACT,
        ["precision", n] => src.int(n, 10)?,
        _ => return Err(src.err(0, "`precision N`")),
    };
    let rows: Vec<(usize, &str)> = it.collect();
    let n = rows.len();
    if n == 0 {
        return Err(Error::Parse { pos: text.len(), expected: "matrix rows".into() });
    }
    let mut e = Vec::with_capacity(n * n);
    for (b, row) in rows {
        let src = Src { text: row, base: b };
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != n {
            return Err(src.err(0, &format!("{n} entries per row")));
        }
        for c in cells {
            e.push(parse_entry(&field, &src, c, prec)?);
        }
    }
    LaurentMatrix::new(Arc::new(field), n, e)
}
