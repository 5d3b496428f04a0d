//! The extended affine Weyl group `W̃ = W ⋉ X_*(T)`.
//!
//! `AffineElt { w, lam }` stands for `w·ε^λ`, multiplied by
//! `(w1 ε^{λ1})(w2 ε^{λ2}) = w1 w2 ε^{w2^{-1}λ1 + λ2}`. The base alcove is
//! `0 < <α, v> < 1` for all positive roots and `w ε^λ` acts on points by
//! `v ↦ w(v - λ)`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{dot, Q};
use crate::root_datum::{format_coweight, Coweight, Levi, QCoweight, RootDatum, WeylElt};

/// Default enumeration budget for lower cones (number of subwords).
pub const DEFAULT_BUDGET: u128 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineElt {
    pub w: WeylElt,
    pub lam: Coweight,
}

impl AffineElt {
    pub fn identity(rank: usize) -> Self {
        AffineElt {
            w: WeylElt::IDENTITY,
            lam: vec![0; rank],
        }
    }

    pub fn translation(lam: Coweight) -> Self {
        AffineElt {
            w: WeylElt::IDENTITY,
            lam,
        }
    }

    pub fn weyl(w: WeylElt, rank: usize) -> Self {
        AffineElt { w, lam: vec![0; rank] }
    }

    pub fn is_translation(&self) -> bool {
        self.w.is_identity()
    }
}

/// Affine simple reflection: `Finite(i)` is `s_{i+1}`, `Affine(c)` the extra
/// node of the `c`-th irreducible component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AffSimple {
    Finite(usize),
    Affine(usize),
}

/// `x = s_{i1} ⋯ s_{ik} · ω` with `l(ω) = 0` and `k = l(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaDecomp {
    pub coxeter: Vec<AffSimple>,
    pub omega: AffineElt,
}

impl RootDatum {
    pub fn aid(&self) -> AffineElt {
        AffineElt::identity(self.rank())
    }

    pub fn amul(&self, x: &AffineElt, y: &AffineElt) -> AffineElt {
        let shifted = self.act(self.winv(y.w), &x.lam);
        AffineElt {
            w: self.wmul(x.w, y.w),
            lam: shifted.iter().zip(&y.lam).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn amul_all(&self, elts: &[&AffineElt]) -> AffineElt {
        elts.iter().fold(self.aid(), |acc, x| self.amul(&acc, x))
    }

    pub fn ainv(&self, x: &AffineElt) -> AffineElt {
        AffineElt {
            w: self.winv(x.w),
            lam: self.act(x.w, &x.lam).iter().map(|a| -a).collect(),
        }
    }

    pub fn aweyl(&self, w: WeylElt) -> AffineElt {
        AffineElt::weyl(w, self.rank())
    }

    pub fn asigma(&self, x: &AffineElt) -> AffineElt {
        AffineElt {
            w: self.sigma_w(x.w),
            lam: self.sigma_coweight(&x.lam),
        }
    }

    pub fn asigma_inv(&self, x: &AffineElt) -> AffineElt {
        AffineElt {
            w: self.sigma_inv_w(x.w),
            lam: self.sigma_inv_coweight(&x.lam),
        }
    }

    /// `g^{-1} x σ(g)`.
    pub fn sigma_conj(&self, x: &AffineElt, g: &AffineElt) -> AffineElt {
        let gi = self.ainv(g);
        self.amul(&self.amul(&gi, x), &self.asigma(g))
    }

    /// `x·v = w(v - λ)` on rational points.
    pub fn act_point(&self, x: &AffineElt, v: &[Q]) -> QCoweight {
        let d: QCoweight = v
            .iter()
            .zip(&x.lam)
            .map(|(a, &b)| a - Q::from_integer(b))
            .collect();
        self.act_q(x.w, &d)
    }

    /// Iwahori–Matsumoto length `Σ_{α>0} |<α, λ> - [wα < 0]|`.
    pub fn alength(&self, x: &AffineElt) -> usize {
        self.positive_roots()
            .map(|r| {
                let p = dot(&self.root(r).covector, &x.lam);
                let neg = i64::from(!self.root(self.act_root(x.w, r)).positive);
                (p - neg).unsigned_abs() as usize
            })
            .sum()
    }

    /// Action on the affine root `(β, k)`, the function `v ↦ <β, v> + k`.
    pub fn act_affine_root(&self, x: &AffineElt, r: usize, k: i64) -> (usize, i64) {
        (self.act_root(x.w, r), k + self.pairing(r, &x.lam))
    }

    pub fn affine_root_positive(&self, r: usize, k: i64) -> bool {
        if self.root(r).positive {
            k >= 0
        } else {
            k >= 1
        }
    }

    pub fn simple_affine(&self, s: AffSimple) -> AffineElt {
        match s {
            AffSimple::Finite(i) => self.aweyl(self.simple_reflection(i)),
            AffSimple::Affine(c) => {
                let theta = self.root(self.highest_roots()[c]);
                AffineElt {
                    w: theta.reflection,
                    lam: theta.coroot.clone(),
                }
            }
        }
    }

    pub fn affine_simples(&self) -> Vec<AffSimple> {
        (0..self.semisimple_rank())
            .map(AffSimple::Finite)
            .chain((0..self.components().len()).map(AffSimple::Affine))
            .collect()
    }

    pub fn aff_simple_name(&self, s: AffSimple) -> String {
        match s {
            AffSimple::Finite(i) => format!("s{}", i + 1),
            AffSimple::Affine(c) if self.components().len() == 1 => {
                let _ = c;
                "s0".to_string()
            }
            AffSimple::Affine(c) => format!("s0_{}", c + 1),
        }
    }

    /// Some affine simple reflection `s` with `l(sx) < l(x)`.
    pub fn left_descent(&self, x: &AffineElt) -> Option<(AffSimple, AffineElt)> {
        let l = self.alength(x);
        if l == 0 {
            return None;
        }
        self.affine_simples().into_iter().find_map(|s| {
            let y = self.amul(&self.simple_affine(s), x);
            (self.alength(&y) < l).then_some((s, y))
        })
    }

    pub fn omega_decompose(&self, x: &AffineElt) -> OmegaDecomp {
        let mut cur = x.clone();
        let mut coxeter = Vec::new();
        while let Some((s, y)) = self.left_descent(&cur) {
            coxeter.push(s);
            cur = y;
        }
        OmegaDecomp {
            coxeter,
            omega: cur,
        }
    }

    pub fn omega_part(&self, x: &AffineElt) -> AffineElt {
        self.omega_decompose(x).omega
    }

    pub fn recombine(&self, d: &OmegaDecomp) -> AffineElt {
        d.coxeter
            .iter()
            .rev()
            .fold(d.omega.clone(), |acc, &s| self.amul(&self.simple_affine(s), &acc))
    }

    /// Bruhat order on `W̃`: equal `Ω`-parts and subword order on the rest.
    pub fn bruhat_leq(&self, x: &AffineElt, y: &AffineElt) -> bool {
        let (mut x, mut y) = (x.clone(), y.clone());
        loop {
            let (lx, ly) = (self.alength(&x), self.alength(&y));
            if lx > ly {
                return false;
            }
            match self.left_descent(&y) {
                None => return x == y,
                Some((s, sy)) => {
                    let sx = self.amul(&self.simple_affine(s), &x);
                    if self.alength(&sx) < lx {
                        x = sx;
                    }
                    y = sy;
                }
            }
        }
    }

    /// `τ_μ = x_μ ε^μ`, checked to be the unique shortest element of `W ε^μ W`.
    pub fn tau(&self, mu: &[i64]) -> Result<AffineElt> {
        if !self.is_dominant(mu) {
            return Err(Error::Precondition(format!(
                "tau needs a dominant coweight, got ({})",
                format_coweight(mu)
            )));
        }
        let t = self.tau_unchecked(mu);
        let lt = self.alength(&t);
        for lam in self.orbit(mu) {
            for u in self.weyl_elements() {
                let y = AffineElt { w: u, lam: lam.clone() };
                let ly = self.alength(&y);
                if ly < lt || (ly == lt && y != t) {
                    return Err(Error::ConventionBroken(format!(
                        "x_mu eps^mu is not the unique shortest element of W eps^({}) W",
                        format_coweight(mu)
                    )));
                }
            }
        }
        Ok(t)
    }

    pub(crate) fn tau_unchecked(&self, mu: &[i64]) -> AffineElt {
        AffineElt {
            w: self.x_mu(mu),
            lam: mu.to_vec(),
        }
    }

    /// `w·τ_μ`.
    pub fn w_tau(&self, w: WeylElt, mu: &[i64]) -> AffineElt {
        self.amul(&self.aweyl(w), &self.tau_unchecked(mu))
    }

    /// All `y ≤ x`, by subword enumeration of one reduced word.
    pub fn lower_cone(&self, x: &AffineElt, budget: u128) -> Result<Vec<AffineElt>> {
        let d = self.omega_decompose(x);
        let n = d.coxeter.len();
        let needed = if n >= 127 { u128::MAX } else { 1u128 << n };
        if needed > budget {
            return Err(Error::BudgetExceeded {
                what: format!("lower cone of an element of length {n}"),
                needed,
                budget,
            });
        }
        let mut set: BTreeSet<AffineElt> = BTreeSet::from([self.aid()]);
        for &s in &d.coxeter {
            let sx = self.simple_affine(s);
            let extra: Vec<AffineElt> = set.iter().map(|y| self.amul(y, &sx)).collect();
            set.extend(extra);
        }
        Ok(set.into_iter().map(|y| self.amul(&y, &d.omega)).collect())
    }

    /// The set of `x` with `IxI ⊆ IyI·IzI`, by the one-letter recursion
    /// `I s I · I t I = I st I` or `I t I ∪ I st I`.
    pub fn demazure_set(&self, y: &AffineElt, z: &AffineElt) -> BTreeSet<AffineElt> {
        let d = self.omega_decompose(y);
        let start = self.amul(&d.omega, z);
        let mut set: BTreeSet<AffineElt> = BTreeSet::from([start]);
        for &s in d.coxeter.iter().rev() {
            let sx = self.simple_affine(s);
            let mut next = BTreeSet::new();
            for t in set {
                let st = self.amul(&sx, &t);
                if self.alength(&st) < self.alength(&t) {
                    next.insert(t);
                }
                next.insert(st);
            }
            set = next;
        }
        set
    }

    /// `(∃ w ∈ W_M: y ≥ w x σ(w)^{-1},  ∃ v ≤ u in W_M: y ≥ u x σ(v)^{-1})`.
    pub fn conj_dominates(&self, y: &AffineElt, x: &AffineElt, m: &Levi) -> (bool, bool) {
        let elems = m.weyl_elements();
        let first = elems.iter().any(|&w| {
            let c = self.amul_all(&[
                &self.aweyl(w),
                x,
                &self.aweyl(self.winv(self.sigma_w(w))),
            ]);
            self.bruhat_leq(&c, y)
        });
        let second = elems.iter().any(|&u| {
            let ux = self.amul(&self.aweyl(u), x);
            elems.iter().any(|&v| {
                self.bruhat_leq_finite(v, u) && {
                    let c = self.amul(&ux, &self.aweyl(self.winv(self.sigma_w(v))));
                    self.bruhat_leq(&c, y)
                }
            })
        });
        (first, second)
    }

    /// Whether `x` is shortest in `W_M x`.
    pub fn is_left_min_affine(&self, m: &Levi, x: &AffineElt) -> bool {
        let l = self.alength(x);
        m.weyl_elements()
            .iter()
            .all(|&a| self.alength(&self.amul(&self.aweyl(a), x)) >= l)
    }

    /// The interior point of the base alcove used by alcove-action checks.
    pub fn base_point(&self) -> QCoweight {
        self.alcove_interior_point()
    }

    pub fn format_affine(&self, x: &AffineElt) -> String {
        let w = self.word_string(x.w);
        if x.lam.iter().all(|&a| a == 0) {
            w
        } else if x.w.is_identity() {
            format!("t[{}]", format_coweight(&x.lam))
        } else {
            format!("{}*t[{}]", w, format_coweight(&x.lam))
        }
    }
}

/// Display helper binding an element to its datum.
pub struct AffDisplay<'a>(pub &'a RootDatum, pub &'a AffineElt);

impl fmt::Display for AffDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format_affine(self.1))
    }
}

/// Deduplicates while keeping first occurrences.
pub fn dedup_affine(v: Vec<AffineElt>) -> Vec<AffineElt> {
    let mut seen = HashSet::new();
    v.into_iter().filter(|x| seen.insert(x.clone())).collect()
}

#[cfg(test)]
mod tests;
