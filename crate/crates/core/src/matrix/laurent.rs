//! Laurent series over `F_{q^m}` known modulo `t^N` (absolute precision).

use super::fq::{Fe, Field};

/// Precision of an exactly known series.
pub const EXACT: i64 = i64::MAX / 4;

#[inline]
fn padd(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        (a + b).min(EXACT)
    }
}

/// `Σ c_k t^{start+k}` modulo `t^prec`. Normalized: `c` has no leading or
/// trailing zeros and every listed exponent lies below `prec`; the zero
/// series has empty `c` and `start == prec`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Laurent {
    start: i64,
    c: Vec<Fe>,
    prec: i64,
}

impl Laurent {
    pub fn zero(prec: i64) -> Laurent {
        Laurent { start: prec, c: vec![], prec }
    }

    pub fn exact_zero() -> Laurent {
        Laurent::zero(EXACT)
    }

    pub fn constant(c: Fe) -> Laurent {
        Laurent::monomial(c, 0)
    }

    pub fn one() -> Laurent {
        Laurent::constant(1)
    }

    /// `c·t^k`, exact.
    pub fn monomial(c: Fe, k: i64) -> Laurent {
        Laurent::from_coeffs(k, vec![c], EXACT)
    }

    pub fn from_coeffs(start: i64, c: Vec<Fe>, prec: i64) -> Laurent {
        let mut l = Laurent { start, c, prec };
        l.normalize();
        l
    }

    fn normalize(&mut self) {
        if self.prec < EXACT && self.start < self.prec {
            let keep = (self.prec - self.start).max(0) as usize;
            self.c.truncate(keep);
        } else if self.start >= self.prec {
            self.c.clear();
        }
        let lead = self.c.iter().position(|&x| x != 0);
        match lead {
            None => {
                self.c.clear();
                self.start = self.prec;
            }
            Some(k) => {
                self.c.drain(..k);
                self.start += k as i64;
                while self.c.last() == Some(&0) {
                    self.c.pop();
                }
            }
        }
    }

    /// Valuation, or the precision bound for a series not known to be nonzero.
    pub fn valuation(&self) -> i64 {
        self.start
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// Zero modulo its precision.
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Known nonzero: some coefficient below the precision is nonzero.
    pub fn is_certified(&self) -> bool {
        !self.c.is_empty()
    }

    pub fn leading(&self) -> Fe {
        self.c.first().copied().unwrap_or(0)
    }

    /// Coefficient of `t^k`; zero above the known terms.
    pub fn coeff(&self, k: i64) -> Fe {
        if k < self.start {
            return 0;
        }
        self.c.get((k - self.start) as usize).copied().unwrap_or(0)
    }

    /// Nonzero terms `(exponent, coefficient)` in increasing order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fe)> + '_ {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(move |(k, &x)| (self.start + k as i64, x))
    }

    pub fn truncate(&self, prec: i64) -> Laurent {
        Laurent::from_coeffs(self.start, self.c.clone(), self.prec.min(prec))
    }

    /// Reduction modulo `t` of a series in `O`.
    pub fn residue(&self) -> Fe {
        debug_assert!(self.start >= 0 || self.is_zero());
        self.coeff(0)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent {
            start: if self.c.is_empty() { padd(self.start, k) } else { self.start + k },
            c: self.c.clone(),
            prec: padd(self.prec, k),
        }
    }

    pub fn add(&self, f: &Field, o: &Laurent) -> Laurent {
        let prec = self.prec.min(o.prec);
        if o.c.is_empty() {
            return self.truncate(prec);
        }
        if self.c.is_empty() {
            return o.truncate(prec);
        }
        let start = self.start.min(o.start);
        let end = (self.start + self.c.len() as i64).max(o.start + o.c.len() as i64).min(prec);
        if end <= start {
            return Laurent::zero(prec);
        }
        let c = (start..end).map(|k| f.add(self.coeff(k), o.coeff(k))).collect();
        Laurent::from_coeffs(start, c, prec)
    }

    pub fn neg(&self, f: &Field) -> Laurent {
        Laurent {
            start: self.start,
            c: self.c.iter().map(|&x| f.neg(x)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, f: &Field, o: &Laurent) -> Laurent {
        self.add(f, &o.neg(f))
    }

    pub fn mul(&self, f: &Field, o: &Laurent) -> Laurent {
        let prec = padd(self.start, o.prec).min(padd(o.start, self.prec));
        if self.c.is_empty() || o.c.is_empty() {
            return Laurent::zero(prec);
        }
        let start = self.start + o.start;
        let mut len = self.c.len() + o.c.len() - 1;
        if prec < EXACT {
            len = len.min((prec - start).max(0) as usize);
        }
        let mut c = vec![0; len];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 || i >= len {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Laurent::from_coeffs(start, c, prec)
    }

    pub fn scale(&self, f: &Field, a: Fe) -> Laurent {
        if a == 0 {
            return Laurent::exact_zero();
        }
        Laurent {
            start: self.start,
            c: self.c.iter().map(|&x| f.mul(x, a)).collect(),
            prec: self.prec,
        }
    }

    /// Inverse of a certified nonzero series. An exact non-monomial input
    /// yields `rel_cap` known terms.
    pub fn inv(&self, f: &Field, rel_cap: i64) -> Option<Laurent> {
        if self.c.is_empty() {
            return None;
        }
        let v = self.start;
        if self.is_exact() && self.c.len() == 1 {
            return Some(Laurent::monomial(f.inv(self.c[0]), -v));
        }
        let rel = if self.is_exact() { rel_cap } else { self.prec - v };
        let rel = rel.max(1) as usize;
        let u0i = f.inv(self.c[0]);
        let mut out = vec![0; rel];
        out[0] = u0i;
        for k in 1..rel {
            let mut s = 0;
            for j in 1..=k.min(self.c.len() - 1) {
                s = f.add(s, f.mul(self.c[j], out[k - j]));
            }
            out[k] = f.neg(f.mul(s, u0i));
        }
        Some(Laurent::from_coeffs(-v, out, -v + rel as i64))
    }

    /// Coefficientwise Frobenius.
    pub fn frob(&self, f: &Field) -> Laurent {
        Laurent {
            start: self.start,
            c: self.c.iter().map(|&x| f.frob(x)).collect(),
            prec: self.prec,
        }
    }

    pub fn frob_inv(&self, f: &Field) -> Laurent {
        Laurent {
            start: self.start,
            c: self.c.iter().map(|&x| f.frob_inv(x)).collect(),
            prec: self.prec,
        }
    }

    /// Equality of the known parts up to the smaller precision.
    pub fn agrees(&self, f: &Field, o: &Laurent) -> bool {
        self.sub(f, o).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f4() -> Field {
        Field::new(2, 2).unwrap()
    }

    #[test]
    fn normalization_and_valuation() {
        let x = Laurent::from_coeffs(-1, vec![0, 0, 1, 0], 5);
        assert_eq!(x.valuation(), 1);
        assert_eq!(x.terms().collect::<Vec<_>>(), vec![(1, 1)]);
        let z = Laurent::from_coeffs(0, vec![0, 0], 3);
        assert!(z.is_zero());
        assert_eq!(z.valuation(), 3);
        let y = Laurent::from_coeffs(0, vec![1, 1, 1], 2);
        assert_eq!(y.terms().count(), 2);
    }

    #[test]
    fn precision_of_products() {
        let f = f4();
        // (t + O(t^3)) * (1 + O(t^2)) = t + O(t^3)
        let a = Laurent::from_coeffs(1, vec![1], 3);
        let b = Laurent::from_coeffs(0, vec![1], 2);
        let p = a.mul(&f, &b);
        assert_eq!(p.precision(), 3);
        assert_eq!(p.valuation(), 1);
        let s = a.add(&f, &b);
        assert_eq!(s.precision(), 2);
        let e = Laurent::monomial(1, 2).mul(&f, &b);
        assert_eq!(e.precision(), 4);
    }

    #[test]
    fn inverse_of_unit() {
        let f = f4();
        let a = f.gen_pow(1);
        let u = Laurent::from_coeffs(0, vec![1, a, 1], EXACT);
        let ui = u.inv(&f, 6).unwrap();
        let p = u.mul(&f, &ui);
        assert!(p.agrees(&f, &Laurent::one()));
        assert_eq!(p.precision(), 6);
        let tv = Laurent::from_coeffs(2, vec![a, 1], 7);
        let ti = tv.inv(&f, 100).unwrap();
        assert_eq!(ti.valuation(), -2);
        assert_eq!(ti.precision(), 3);
        assert!(tv.mul(&f, &ti).agrees(&f, &Laurent::one()));
        assert!(Laurent::zero(4).inv(&f, 4).is_none());
    }

    fn arb_series() -> impl Strategy<Value = Laurent> {
        (-2i64..3, proptest::collection::vec(0u16..4, 0..5), 3i64..8)
            .prop_map(|(s, c, p)| Laurent::from_coeffs(s, c, p))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
            let f = f4();
            prop_assert!(a.mul(&f, &b).agrees(&f, &b.mul(&f, &a)));
            prop_assert!(a.add(&f, &b).add(&f, &c).agrees(&f, &a.add(&f, &b.add(&f, &c))));
            let l = a.mul(&f, &b.add(&f, &c));
            let r = a.mul(&f, &b).add(&f, &a.mul(&f, &c));
            prop_assert!(l.agrees(&f, &r));
            prop_assert!(a.sub(&f, &a).is_zero());
        }

        #[test]
        fn truncation_commutes_with_product(a in arb_series(), b in arb_series(), n in 0i64..6) {
            let f = f4();
            let full = a.mul(&f, &b).truncate(n);
            let part = a.truncate(n + 4).mul(&f, &b.truncate(n + 4)).truncate(n);
            prop_assert!(full.agrees(&f, &part));
        }

        #[test]
        fn frobenius_is_ring_map(a in arb_series(), b in arb_series()) {
            let f = f4();
            prop_assert_eq!(a.mul(&f, &b).frob(&f), a.frob(&f).mul(&f, &b.frob(&f)));
            prop_assert_eq!(a.frob(&f).frob_inv(&f), a);
        }
    }
}
