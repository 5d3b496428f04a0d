//! Loop-group elements of `GL_n` over `F_{q^m}((t))`.
//!
//! Weyl elements are permutation matrices and `ε^λ = diag(t^{λ_1}, …)`, so
//! `w·ε^λ` is the monomial matrix `n_w t^λ`. The Iwahori subgroup `I` is the
//! preimage of the upper triangular Borel under reduction modulo `t`.

mod decomp;
pub mod fmat;
pub mod format;
pub mod fq;
pub mod laurent;
mod newton;
mod oracle;
mod sample;
mod truncation;

use std::sync::Arc;

pub use decomp::{cartan_data, cartan_type, iwahori_data, iwahori_double_coset, CartanData, IwahoriData};
pub use fmat::FMat;
pub use format::{parse_matrix, write_matrix};
pub use fq::{Fe, Field};
pub use laurent::{Laurent, EXACT};
pub use newton::newton_matrix;
pub use oracle::{brute_force_truncation_oracle, enumerate_orbits, OracleMode, OracleReport, OrbitInfo, MAX_STATES};
pub use sample::Sampler;
pub use truncation::{
    iwahori_reduce, required_precision, truncation_type_matrix, IwahoriReduction, MatrixStep, MatrixTranscript,
};

use crate::affine::AffineElt;
use crate::error::{Error, Result};
use crate::root_datum::RootDatum;

/// Relative precision used when inverting exactly known non-monomial series.
pub(crate) const DIV_CAP: i64 = 32;

/// Square matrix with Laurent-series entries.
#[derive(Clone, Debug)]
pub struct LaurentMatrix {
    field: Arc<Field>,
    n: usize,
    e: Vec<Laurent>,
}

impl PartialEq for LaurentMatrix {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.e == o.e && self.field.size() == o.field.size() && self.field.q() == o.field.q()
    }
}

impl LaurentMatrix {
    /// Builds a matrix and checks that it is invertible over `L`.
    pub fn new(field: Arc<Field>, n: usize, e: Vec<Laurent>) -> Result<Self> {
        let m = Self::new_unchecked(field, n, e)?;
        if !m.det().is_certified() {
            return Err(Error::InsufficientPrecision {
                have: m.precision(),
                required: m.precision() + 1,
            });
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(field: Arc<Field>, n: usize, e: Vec<Laurent>) -> Result<Self> {
        if e.len() != n * n || n == 0 {
            return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", e.len())));
        }
        Ok(LaurentMatrix { field, n, e })
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Self {
        let mut e = vec![Laurent::exact_zero(); n * n];
        for i in 0..n {
            e[i * n + i] = Laurent::one();
        }
        LaurentMatrix { field, n, e }
    }

    /// `n_w t^λ` for `x = w·ε^λ`.
    pub fn monomial(field: Arc<Field>, rd: &RootDatum, x: &AffineElt) -> Result<Self> {
        let n = require_gl(rd)?;
        let p = rd.weyl_matrix(x.w);
        let mut e = vec![Laurent::exact_zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                if p[i][j] != 0 {
                    e[i * n + j] = Laurent::monomial(1, x.lam[j]);
                }
            }
        }
        Ok(LaurentMatrix { field, n, e })
    }

    /// Constant lift of a residue-field matrix.
    pub fn from_fmat(field: Arc<Field>, m: &FMat) -> Self {
        let e = m.a.iter().map(|&x| if x == 0 { Laurent::exact_zero() } else { Laurent::constant(x) }).collect();
        LaurentMatrix { field, n: m.n, e }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<Field> {
        self.field.clone()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Laurent {
        &self.e[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Laurent) {
        self.e[i * self.n + j] = x;
    }

    pub fn entries(&self) -> &[Laurent] {
        &self.e
    }

    /// Smallest entry precision.
    pub fn precision(&self) -> i64 {
        self.e.iter().map(|x| x.precision()).min().unwrap_or(EXACT)
    }

    pub fn min_valuation(&self) -> i64 {
        self.e.iter().map(|x| x.valuation()).min().unwrap_or(EXACT)
    }

    pub fn truncate(&self, prec: i64) -> Self {
        self.map(|x| x.truncate(prec))
    }

    fn map(&self, g: impl Fn(&Laurent) -> Laurent) -> Self {
        LaurentMatrix {
            field: self.field.clone(),
            n: self.n,
            e: self.e.iter().map(g).collect(),
        }
    }

    pub fn mul(&self, o: &LaurentMatrix) -> Self {
        let (n, f) = (self.n, &*self.field);
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Laurent::exact_zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = o.get(k, j);
                    if a.is_exact() && a.is_zero() || b.is_exact() && b.is_zero() {
                        continue;
                    }
                    acc = acc.add(f, &a.mul(f, b));
                }
                e.push(acc);
            }
        }
        LaurentMatrix { field: self.field.clone(), n, e }
    }

    pub fn mul_all(ms: &[&LaurentMatrix]) -> Self {
        let mut acc = ms[0].clone();
        for m in &ms[1..] {
            acc = acc.mul(m);
        }
        acc
    }

    /// Entrywise Frobenius on coefficients; `t` is fixed.
    pub fn sigma(&self) -> Self {
        let f = self.field.clone();
        self.map(|x| x.frob(&f))
    }

    pub fn sigma_inv(&self) -> Self {
        let f = self.field.clone();
        self.map(|x| x.frob_inv(&f))
    }

    /// Multiplication by the scalar `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        self.map(|x| x.shift(k))
    }

    /// `h^{-1} g σ(h)`.
    pub fn sigma_conj(&self, h: &LaurentMatrix) -> Result<Self> {
        Ok(LaurentMatrix::mul_all(&[&h.inverse()?, self, &h.sigma()]))
    }

    /// Reduction modulo `t`; entries must lie in `O`.
    pub fn residue(&self) -> Option<FMat> {
        if self.min_valuation() < 0 || self.precision() < 1 {
            return None;
        }
        Some(FMat {
            n: self.n,
            a: self.e.iter().map(|x| x.coeff(0)).collect(),
        })
    }

    /// Membership in `K = GL_n(O)`.
    pub fn in_k(&self) -> bool {
        self.residue().is_some_and(|r| r.inv(&self.field).is_some())
    }

    /// Membership in `K_1 = ker(K → GL_n(k))`.
    pub fn in_k1(&self) -> bool {
        self.residue().is_some_and(|r| r == FMat::identity(self.n))
    }

    /// Membership in the standard Iwahori subgroup.
    pub fn in_iwahori(&self) -> bool {
        self.residue().is_some_and(|r| r.is_upper() && r.inv(&self.field).is_some())
    }

    /// Determinant by the Berkowitz recursion.
    pub fn det(&self) -> Laurent {
        let cp = newton::charpoly(self);
        let c = cp[self.n].clone();
        if self.n % 2 == 1 {
            c.neg(&self.field)
        } else {
            c
        }
    }

    /// Inverse by Gauss-Jordan elimination with minimal-valuation pivots.
    pub fn inverse(&self) -> Result<Self> {
        let (n, f) = (self.n, &*self.field);
        let mut a = self.clone();
        let mut b = LaurentMatrix::identity(self.field.clone(), n);
        for c in 0..n {
            let r = (c..n)
                .filter(|&r| a.get(r, c).is_certified())
                .min_by_key(|&r| a.get(r, c).valuation())
                .ok_or(Error::InsufficientPrecision {
                    have: self.precision(),
                    required: self.precision() + 1,
                })?;
            for j in 0..n {
                a.e.swap(r * n + j, c * n + j);
                b.e.swap(r * n + j, c * n + j);
            }
            let pi = a.get(c, c).inv(f, DIV_CAP).expect("certified pivot");
            for j in 0..n {
                let x = a.get(c, j).mul(f, &pi);
                a.set(c, j, x);
                let y = b.get(c, j).mul(f, &pi);
                b.set(c, j, y);
            }
            for i in 0..n {
                if i == c || a.get(i, c).is_zero() {
                    continue;
                }
                let m = a.get(i, c).clone();
                for j in 0..n {
                    let x = a.get(i, j).sub(f, &m.mul(f, a.get(c, j)));
                    a.set(i, j, x);
                    let y = b.get(i, j).sub(f, &m.mul(f, b.get(c, j)));
                    b.set(i, j, y);
                }
            }
        }
        Ok(b)
    }

    /// Entrywise agreement up to the known precision.
    pub fn agrees(&self, o: &LaurentMatrix) -> bool {
        self.n == o.n && self.e.iter().zip(&o.e).all(|(a, b)| a.agrees(&self.field, b))
    }
}

/// Entrywise Frobenius on coefficients; `t` is fixed.
pub fn sigma_matrix(g: &LaurentMatrix) -> LaurentMatrix {
    g.sigma()
}

pub(crate) fn require_gl(rd: &RootDatum) -> Result<usize> {
    rd.gl_size().ok_or_else(|| {
        Error::Precondition(format!("matrix algorithms need a GL(n) datum, got {}", rd.name()))
    })
}
