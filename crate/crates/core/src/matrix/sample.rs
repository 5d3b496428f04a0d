//! Pseudo-random elements of `K`, `K_1`, `I` and Iwahori double cosets.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Field, Laurent, LaurentMatrix};
use crate::affine::AffineElt;
use crate::error::Result;
use crate::root_datum::RootDatum;

/// Samples matrices whose entries are exact polynomials in `t` of degree
/// below `depth`.
pub struct Sampler {
    rng: ChaCha8Rng,
    field: Arc<Field>,
    n: usize,
    depth: i64,
}

impl Sampler {
    pub fn new(field: Arc<Field>, n: usize, depth: i64, seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            field,
            n,
            depth,
        }
    }

    fn coeff(&mut self) -> u16 {
        self.rng.gen_range(0..self.field.size()) as u16
    }

    /// Random polynomial with terms `t^from .. t^{depth-1}`.
    pub fn series(&mut self, from: i64) -> Laurent {
        let len = (self.depth - from).max(0) as usize;
        let c = (0..len).map(|_| self.coeff()).collect();
        Laurent::from_coeffs(from, c, super::EXACT)
    }

    pub fn unit(&mut self) -> Laurent {
        loop {
            let s = self.series(0);
            if s.valuation() == 0 {
                return s;
            }
        }
    }

    fn build(&mut self, mut entry: impl FnMut(&mut Self, usize, usize) -> Laurent) -> LaurentMatrix {
        let n = self.n;
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                e.push(entry(self, i, j));
            }
        }
        LaurentMatrix::new_unchecked(self.field.clone(), n, e).expect("square")
    }

    /// Element of the standard Iwahori subgroup.
    pub fn iwahori(&mut self) -> LaurentMatrix {
        self.build(|s, i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => s.unit(),
            std::cmp::Ordering::Less => s.series(0),
            std::cmp::Ordering::Greater => s.series(1),
        })
    }

    pub fn k(&mut self) -> LaurentMatrix {
        loop {
            let m = self.build(|s, _, _| s.series(0));
            if m.in_k() {
                return m;
            }
        }
    }

    pub fn k1(&mut self) -> LaurentMatrix {
        let f = self.field.clone();
        self.build(|s, i, j| {
            let x = s.series(1);
            if i == j {
                x.add(&f, &Laurent::one())
            } else {
                x
            }
        })
    }

    /// `i_1 x i_2` with `i_1, i_2` random in `I`.
    pub fn in_iwahori_coset(&mut self, rd: &RootDatum, x: &AffineElt) -> Result<LaurentMatrix> {
        let xm = LaurentMatrix::monomial(self.field.clone(), rd, x)?;
        let a = self.iwahori();
        let b = self.iwahori();
        Ok(LaurentMatrix::mul_all(&[&a, &xm, &b]))
    }
}
