//! Finite fields `F_{q^m}` with `q` a prime power, via log/exp tables over a
//! primitive generator `a`.

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD: u32 = 4096;

/// `F_{q^m}` with Frobenius `x ↦ x^q`. Elements are `u16` codes: the base-`p`
/// digits of a code are the coefficients of a polynomial in `a`.
#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    degree: u32,
    q: u32,
    m: u32,
    size: u32,
    exp: Vec<u16>,
    log: Vec<u32>,
    frob: Vec<u16>,
    frob_inv: Vec<u16>,
    neg: Vec<u16>,
}

pub type Fe = u16;

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut x) = (0, q);
    while x % p == 0 {
        x /= p;
        r += 1;
    }
    (x == 1).then_some((p, r))
}

impl Field {
    /// `F_{q^m}`; fails unless `q` is a prime power and `q^m ≤ MAX_FIELD`.
    pub fn new(q: u32, m: u32) -> Result<Field> {
        let (p, r) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be positive".into()));
        }
        let size = (q as u64).checked_pow(m).filter(|&s| s <= MAX_FIELD as u64).ok_or_else(|| {
            Error::InvalidField(format!("field of size {q}^{m} exceeds {MAX_FIELD}"))
        })? as u32;
        let degree = r * m;
        let (exp, log) = (0..p.pow(degree))
            .find_map(|f| primitive_tables(p, degree, f))
            .ok_or_else(|| Error::InvalidField("no primitive polynomial found".into()))?;
        let mut fld = Field {
            p,
            degree,
            q,
            m,
            size,
            exp,
            log,
            frob: vec![],
            frob_inv: vec![],
            neg: vec![],
        };
        fld.frob = (0..size).map(|x| fld.pow(x as Fe, q as u64)).collect();
        let qi = (q as u64).pow(m - 1);
        fld.frob_inv = (0..size).map(|x| fld.pow(x as Fe, qi)).collect();
        fld.neg = (0..size).map(|x| fld.digits_map(x as Fe, |d| (p - d) % p)).collect();
        Ok(fld)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    fn digits_map(&self, x: Fe, f: impl Fn(u32) -> u32) -> Fe {
        let (mut x, mut out, mut scale) = (x as u32, 0, 1);
        for _ in 0..self.degree {
            out += f(x % self.p) * scale;
            x /= self.p;
            scale *= self.p;
        }
        out as Fe
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut x, mut y, mut out, mut scale) = (a as u32, b as u32, 0, 1);
        for _ in 0..self.degree {
            out += ((x % self.p + y % self.p) % self.p) * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        out as Fe
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Panics on zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a != 0, "inverse of zero");
        let n = self.size - 1;
        self.exp[((n - self.log[a as usize]) % n) as usize]
    }

    pub fn pow(&self, a: Fe, k: u64) -> Fe {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.size - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (k % n)) % n) as usize]
    }

    /// `x ↦ x^q`.
    #[inline]
    pub fn frob(&self, a: Fe) -> Fe {
        self.frob[a as usize]
    }

    #[inline]
    pub fn frob_inv(&self, a: Fe) -> Fe {
        self.frob_inv[a as usize]
    }

    /// `a^k` for the primitive generator `a`.
    pub fn gen_pow(&self, k: i64) -> Fe {
        let n = (self.size - 1) as i64;
        self.exp[k.rem_euclid(n) as usize]
    }

    /// Discrete logarithm base `a`; `None` for zero.
    pub fn log(&self, x: Fe) -> Option<u32> {
        (x != 0).then(|| self.log[x as usize])
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.size as Fe
    }

    /// Whether `x` lies in the fixed field of `σ`.
    pub fn is_base(&self, x: Fe) -> bool {
        self.frob(x) == x
    }
}

/// Exp/log tables if the monic polynomial with lower coefficients encoded
/// by `f` is primitive.
fn primitive_tables(p: u32, e: u32, f: u32) -> Option<(Vec<u16>, Vec<u32>)> {
    let size = p.pow(e);
    let n = size - 1;
    let fc: Vec<u32> = (0..e).map(|i| (f / p.pow(i)) % p).collect();
    if fc[0] == 0 && e > 0 {
        return None;
    }
    let mut exp = vec![0u16; 2 * n as usize];
    let mut log = vec![0u32; size as usize];
    let mut cur: Vec<u32> = vec![0; e as usize];
    cur[0] = 1;
    let encode = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &d| acc * p + d);
    for k in 0..n {
        let code = encode(&cur);
        if k > 0 && code == 1 {
            return None;
        }
        exp[k as usize] = code as u16;
        log[code as usize] = k;
        // multiply by a: shift, then reduce a^e = -(f_0 + ... + f_{e-1} a^{e-1})
        let top = cur[e as usize - 1];
        for i in (1..e as usize).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        for i in 0..e as usize {
            cur[i] = (cur[i] + (p - fc[i]) * top) % p;
        }
    }
    if encode(&cur) != 1 {
        return None;
    }
    for k in n..2 * n {
        exp[k as usize] = exp[(k - n) as usize];
    }
    Some((exp, log))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for (q, m) in [(2, 1), (3, 1), (2, 2), (4, 1), (2, 3), (2, 4), (4, 2), (5, 1), (3, 2)] {
            let f = Field::new(q, m).unwrap();
            let els: Vec<Fe> = f.elements().collect();
            assert_eq!(els.len() as u32, q.pow(m));
            for &a in &els {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in els.iter().step_by(3) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_has_order_m() {
        for (q, m) in [(2, 1), (2, 2), (2, 3), (3, 2), (4, 2), (2, 4)] {
            let f = Field::new(q, m).unwrap();
            for a in f.elements() {
                let mut x = a;
                for _ in 0..m {
                    x = f.frob(x);
                }
                assert_eq!(x, a);
                assert_eq!(f.frob_inv(f.frob(a)), a);
                assert_eq!(f.frob(f.mul(a, a)), f.mul(f.frob(a), f.frob(a)));
            }
            let g = f.gen_pow(1);
            let order = (1..=m).find(|&k| {
                let mut x = g;
                for _ in 0..k {
                    x = f.frob(x);
                }
                x == g
            });
            assert_eq!(order, Some(m));
            assert_eq!(f.elements().filter(|&x| f.is_base(x)).count() as u32, q);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Field::new(6, 1).is_err());
        assert!(Field::new(2, 0).is_err());
        assert!(Field::new(2, 13).is_err());
        assert!(Field::new(1, 1).is_err());
    }

    #[test]
    fn f4_frobenius_squares() {
        let f = Field::new(2, 2).unwrap();
        let a = f.gen_pow(1);
        assert!(!f.is_base(a));
        assert_eq!(f.frob(a), f.mul(a, a));
        assert_eq!(f.add(f.mul(a, a), a), 1);
    }
}
