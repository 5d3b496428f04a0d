//! Fundamental alcoves, standard representatives of σ-conjugacy classes,
//! minimal truncation types, and the Weyl-group form of the truncation
//! algorithm.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::affine::AffineElt;
use crate::error::{Error, Result};
use crate::isocrystal::SigmaClass;
use crate::lattice::{self, Q};
use crate::root_datum::{format_coweight, Coweight, Levi, QCoweight, RootDatum, WeylElt};

/// Parabolic subgroup containing `T`: Levi `M` and the roots `N` of its
/// unipotent radical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemistandardParabolic {
    pub levi: Levi,
    pub n_roots: Vec<bool>,
}

/// Truncation of level one: `w ∈ ^μW` and dominant `μ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncationType {
    pub w: WeylElt,
    pub mu: Coweight,
}

/// Serialized form `{"w": "s1*s2", "mu": [1,0]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationTypeJson {
    pub w: String,
    pub mu: Vec<i64>,
}

impl TruncationType {
    pub fn to_json(&self, rd: &RootDatum) -> TruncationTypeJson {
        TruncationTypeJson {
            w: rd.word_string(self.w),
            mu: self.mu.clone(),
        }
    }

    pub fn from_json(rd: &RootDatum, j: &TruncationTypeJson) -> Result<Self> {
        Ok(TruncationType {
            w: rd.parse_word(&j.w)?,
            mu: j.mu.clone(),
        })
    }

    pub fn display<'a>(&'a self, rd: &'a RootDatum) -> impl fmt::Display + 'a {
        TypeDisplay(rd, self)
    }
}

struct TypeDisplay<'a>(&'a RootDatum, &'a TruncationType);

impl fmt::Display for TypeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, ({}))", self.0.word_string(self.1.w), format_coweight(&self.1.mu))
    }
}

/// One step of the truncation recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationStep {
    pub m: Levi,
    pub m_prime: Levi,
    pub b: WeylElt,
    pub delta: WeylElt,
    pub u: WeylElt,
}

impl SemistandardParabolic {
    /// Standard parabolic with Levi generated by the given simple roots.
    pub fn standard(rd: &RootDatum, simple: &[usize]) -> Self {
        let levi = Levi::standard(rd, simple);
        let n_roots = (0..rd.roots().len())
            .map(|r| rd.root(r).positive && !levi.contains_root(r))
            .collect();
        SemistandardParabolic { levi, n_roots }
    }

    pub fn whole(rd: &RootDatum) -> Self {
        let all: Vec<usize> = (0..rd.semisimple_rank()).collect();
        Self::standard(rd, &all)
    }

    /// `w P w^{-1}`.
    pub fn conjugate(&self, rd: &RootDatum, w: WeylElt) -> Self {
        let mut n = vec![false; self.n_roots.len()];
        for (r, &b) in self.n_roots.iter().enumerate() {
            if b {
                n[rd.act_root(w, r)] = true;
            }
        }
        SemistandardParabolic {
            levi: self.levi.conjugate(rd, w),
            n_roots: n,
        }
    }

    pub fn in_n(&self, r: usize) -> bool {
        self.n_roots[r]
    }

    /// Checks that `N` is closed under adding roots of `M` and of `N`, and
    /// that `M ∪ N ∪ -N` is the whole root system.
    pub fn is_valid(&self, rd: &RootDatum) -> bool {
        let nr = rd.roots().len();
        for r in 0..nr {
            let m = self.levi.contains_root(r);
            let n = self.n_roots[r];
            let nn = self.n_roots[rd.root(r).neg];
            if [m, n, nn].iter().filter(|&&b| b).count() != 1 {
                return false;
            }
        }
        for a in 0..nr {
            if !self.n_roots[a] {
                continue;
            }
            for b in 0..nr {
                if !(self.n_roots[b] || self.levi.contains_root(b)) {
                    continue;
                }
                let sum: Vec<i64> = rd
                    .root(a)
                    .covector
                    .iter()
                    .zip(&rd.root(b).covector)
                    .map(|(x, y)| x + y)
                    .collect();
                if let Some(c) = rd.root_index(&sum) {
                    if !self.n_roots[c] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn describe(&self, rd: &RootDatum) -> String {
        let n: Vec<String> = (0..self.n_roots.len())
            .filter(|&r| self.n_roots[r] && rd.root(r).height.abs() == 1)
            .map(|r| {
                let c = &rd.root(r).coeffs;
                let i = c.iter().position(|&x| x != 0).unwrap_or(0);
                format!("{}a{}", if c[i] < 0 { "-" } else { "" }, i + 1)
            })
            .collect();
        format!("{} N⊇{{{}}}", self.levi.describe(rd), n.join(","))
    }
}

impl RootDatum {
    /// Parses `e` or `s1*s2*...` into a finite Weyl group element.
    pub fn parse_word(&self, s: &str) -> Result<WeylElt> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(WeylElt::IDENTITY);
        }
        let mut word = Vec::new();
        let mut pos = 0;
        for part in s.split('*') {
            let t = part.trim();
            let idx = t
                .strip_prefix('s')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| i >= 1 && i <= self.semisimple_rank())
                .ok_or_else(|| Error::Parse {
                    pos,
                    expected: format!("s1..s{}", self.semisimple_rank()),
                })?;
            word.push(idx - 1);
            pos += part.len() + 1;
        }
        self.from_word(&word)
    }

    /// All semistandard parabolics: `W`-conjugates of standard ones.
    pub fn semistandard_parabolics(&self) -> Vec<SemistandardParabolic> {
        let ns = self.semisimple_rank();
        let mut seen: BTreeSet<(Vec<bool>, Vec<bool>)> = BTreeSet::new();
        let mut out = Vec::new();
        for mask in 0u32..(1 << ns) {
            let sub: Vec<usize> = (0..ns).filter(|&i| mask & (1 << i) != 0).collect();
            let p = SemistandardParabolic::standard(self, &sub);
            for w in self.weyl_elements() {
                let q = p.conjugate(self, w);
                let key = (q.levi.root_set().to_vec(), q.n_roots.clone());
                if seen.insert(key) {
                    out.push(q);
                }
            }
        }
        out
    }

    /// Length in `W̃_M` for `x ∈ W̃_M`, with respect to the `M`-alcove
    /// containing the base alcove.
    pub fn levi_length(&self, m: &Levi, x: &AffineElt) -> usize {
        m.root_indices()
            .filter(|&r| self.root(r).positive)
            .map(|r| {
                let p = self.pairing(r, &x.lam);
                let neg = i64::from(!self.root(self.act_root(x.w, r)).positive);
                (p - neg).unsigned_abs() as usize
            })
            .sum()
    }

    /// Average translation of the straightened twisted power (not made
    /// dominant).
    pub fn newton_average(&self, x: &AffineElt) -> QCoweight {
        let (n, p) = self
            .straightening_order(x)
            .expect("twisted powers become translations");
        p.lam.iter().map(|&a| Q::new(a, n as i64)).collect()
    }

    /// `P`-fundamental in the sense of the definition: `x ∈ W̃_M`,
    /// `x I_M x^{-1} = I_M`, `x I_N x^{-1} ⊆ I_N`, `x^{-1} I_{N̄} x ⊆ I_{N̄}`.
    pub fn is_fundamental(&self, x: &AffineElt, p: &SemistandardParabolic) -> bool {
        if !p.levi.contains_w(x.w) || self.levi_length(&p.levi, x) != 0 {
            return false;
        }
        let xi = self.ainv(x);
        for r in 0..self.roots().len() {
            let k = i64::from(!self.root(r).positive);
            if p.in_n(r) {
                let (r2, k2) = self.act_affine_root(x, r, k);
                if !p.in_n(r2) || !self.affine_root_positive(r2, k2) {
                    return false;
                }
            }
            if p.in_n(self.root(r).neg) {
                let (r2, k2) = self.act_affine_root(&xi, r, k);
                if !p.in_n(self.root(r2).neg) || !self.affine_root_positive(r2, k2) {
                    return false;
                }
            }
        }
        true
    }

    /// Newton-point criterion: `x ∈ W̃_M`, its `M`-dominant Newton point is
    /// central in `M` and nonnegative on `N`. Agrees with `is_fundamental`
    /// on elements that are fundamental for some parabolic.
    pub fn is_fundamental_newton(&self, x: &AffineElt, p: &SemistandardParabolic) -> bool {
        if !p.levi.contains_w(x.w) {
            return false;
        }
        let avg = self.newton_average(x);
        // central in M means W_M-invariant, so the average is already ν_M
        let central = p.levi.root_indices().all(|r| self.pairing_q(r, &avg).is_zero());
        central
            && (0..self.roots().len())
                .filter(|&r| p.in_n(r))
                .all(|r| self.pairing_q(r, &avg) >= Q::zero())
    }

    /// Whether `x` is fundamental for at least one semistandard parabolic.
    pub fn fundamental_for_some(&self, x: &AffineElt, ps: &[SemistandardParabolic]) -> bool {
        ps.iter().any(|p| self.is_fundamental(x, p))
    }

    fn in_coroot_span(&self, m: &Levi, delta: &[Q]) -> bool {
        let denom = delta.iter().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
        let d: Vec<i64> = delta.iter().map(|x| (x * Q::from_integer(denom)).to_integer()).collect();
        let cor: Vec<Vec<i64>> = m
            .root_indices()
            .filter(|&r| self.root(r).positive)
            .map(|r| self.root(r).coroot.clone())
            .collect();
        if cor.is_empty() {
            return d.iter().all(|&x| x == 0);
        }
        let mut with = cor.clone();
        with.push(d);
        lattice::rank(&with) == lattice::rank(&cor)
    }

    /// The standard representative: the unique `b_0 ∈ W̃_{M_ν}` of
    /// `M_ν`-length zero with Newton point `ν` and the given `κ_G`.
    pub fn standard_rep(&self, cls: &SigmaClass) -> Result<AffineElt> {
        let nu = &cls.newton.0;
        if !self.is_dominant_q(nu) {
            return Err(Error::Precondition("Newton point must be dominant".into()));
        }
        let m = self.centralizer_levi_q(nu);
        let lo = nu.iter().map(|x| x.floor().to_integer()).min().unwrap_or(0);
        let hi = nu.iter().map(|x| x.ceil().to_integer()).max().unwrap_or(0);
        for c in 1..=3i64 {
            let (a, b) = (lo - c, hi + c);
            let mut found: BTreeSet<AffineElt> = BTreeSet::new();
            let n = self.rank();
            let mut lam = vec![a; n];
            loop {
                let delta: QCoweight = lam.iter().zip(nu).map(|(&l, v)| Q::from_integer(l) - v).collect();
                if self.in_coroot_span(&m, &delta) {
                    for &w in m.weyl_elements() {
                        let x = AffineElt { w, lam: lam.clone() };
                        if self.levi_length(&m, &x) == 0
                            && self.newton_average(&x) == *nu
                            && self.kappa(&x) == cls.kappa
                        {
                            found.insert(x);
                        }
                    }
                }
                // odometer over the box
                let mut k = 0;
                while k < n && lam[k] == b {
                    lam[k] = a;
                    k += 1;
                }
                if k == n {
                    break;
                }
                lam[k] += 1;
            }
            match found.len() {
                0 => continue,
                1 => return Ok(found.into_iter().next().unwrap()),
                k => {
                    return Err(Error::NotUnique(format!(
                        "{k} length-zero elements of W̃_M with class {cls}"
                    )))
                }
            }
        }
        Err(Error::NotFound(format!("no integral representative of {cls}")))
    }

    /// `x` as `b_0 τ_μ` after one `W`-σ-conjugation: returns `(b_0, μ)`.
    pub fn normalize_to_tau_form(&self, x: &AffineElt) -> (WeylElt, Coweight) {
        let (mu, v) = self.dominant_rep(&x.lam);
        // g = σ^{-1}(v): g^{-1} x σ(g) = g^{-1} u v ε^μ
        let g = self.sigma_inv_w(v);
        let u_prime = self.wmul_all(&[self.winv(g), x.w, v]);
        let b0 = self.wmul(u_prime, self.winv(self.x_mu(&mu)));
        (b0, mu)
    }

    /// Truncation of level one of `x`, with the recursion transcript.
    pub fn truncation_type_affine_steps(
        &self,
        x: &AffineElt,
    ) -> Result<(TruncationType, Vec<TruncationStep>)> {
        let (b0, mu) = self.normalize_to_tau_form(x);
        self.truncation_from_b0(b0, &mu)
    }

    pub fn truncation_type_affine(&self, x: &AffineElt) -> Result<TruncationType> {
        Ok(self.truncation_type_affine_steps(x)?.0)
    }

    /// The recursion on `u_i b_i τ_μ`, starting from `u_0 = e` and `b_0`.
    pub fn truncation_from_b0(
        &self,
        b0: WeylElt,
        mu: &[i64],
    ) -> Result<(TruncationType, Vec<TruncationStep>)> {
        let m_mu = self.centralizer_levi(mu);
        let x_mu = self.x_mu(mu);
        let x_mu_inv = self.winv(x_mu);
        let mut u = WeylElt::IDENTITY;
        let mut mp = Levi::whole(self);
        let mut m_cur = Levi::whole(self);
        let mut b = b0;
        let mut steps = Vec::new();
        let cap = 4 * self.rank() + 4;
        for _ in 0..cap {
            let ui = self.winv(u);
            let m_next = mp.intersect(self, &m_mu.conjugate(self, ui).sigma_inv(self));
            let mp_next = m_next
                .conjugate(self, u)
                .sigma(self)
                .conjugate(self, x_mu);
            let dc = self.double_coset(&m_next, b, &mp_next)?;
            let h = self.wmul_all(&[u, dc.m, ui]);
            let sh = self.sigma_w(h);
            if !m_mu.contains_w(sh) {
                return Err(Error::ConventionBroken(
                    "twisted factor left M_mu during the truncation recursion".into(),
                ));
            }
            let b_next = self.wmul_all(&[dc.m_prime, x_mu, sh, x_mu_inv]);
            let u_next = self.wmul(u, dc.delta);
            let stable = dc.delta.is_identity() && m_next == m_cur && mp_next == mp;
            steps.push(TruncationStep {
                m: m_next.clone(),
                m_prime: mp_next.clone(),
                b,
                delta: dc.delta,
                u: u_next,
            });
            u = u_next;
            b = b_next;
            m_cur = m_next;
            mp = mp_next;
            if stable {
                let left = self.sigma_w(u);
                if !m_mu.is_left_min(self, left) {
                    return Err(Error::ConventionBroken(format!(
                        "recursion ended at {} outside ^mu W",
                        self.word_string(u)
                    )));
                }
                return Ok((TruncationType { w: u, mu: mu.to_vec() }, steps));
            }
        }
        Err(Error::IterationCapExceeded {
            what: "truncation recursion".into(),
            cap,
        })
    }

    /// Truncation type of the standard representative of the class.
    pub fn minimal_type(&self, cls: &SigmaClass) -> Result<TruncationType> {
        let b0 = self.standard_rep(cls)?;
        let t = self.truncation_type_affine(&b0)?;
        let back = self.class_of(&self.w_tau(t.w, &t.mu));
        if &back != cls {
            return Err(Error::ConventionBroken(format!(
                "minimal element {} lies in {back}, expected {cls}",
                t.display(self)
            )));
        }
        Ok(t)
    }

    /// Some `w ∈ W` with `w^{-1} x σ(w) = y`.
    pub fn fundamental_conj_witness(&self, x: &AffineElt, y: &AffineElt) -> Result<WeylElt> {
        self.weyl_elements()
            .find(|&w| self.sigma_conj(x, &self.aweyl(w)) == *y)
            .ok_or_else(|| {
                Error::NoWitness(format!(
                    "{} and {}",
                    self.format_affine(x),
                    self.format_affine(y)
                ))
            })
    }

    /// Elements of `W̃_M` fundamental for `P` with translation in the box
    /// `[lo, hi]^rank`.
    pub fn fundamental_elements_in_box(
        &self,
        p: &SemistandardParabolic,
        lo: i64,
        hi: i64,
    ) -> Vec<AffineElt> {
        let n = self.rank();
        let mut out = Vec::new();
        let mut lam = vec![lo; n];
        loop {
            for &w in p.levi.weyl_elements() {
                let x = AffineElt { w, lam: lam.clone() };
                if self.is_fundamental(&x, p) {
                    out.push(x);
                }
            }
            let mut k = 0;
            while k < n && lam[k] == hi {
                lam[k] = lo;
                k += 1;
            }
            if k == n {
                break;
            }
            lam[k] += 1;
        }
        out
    }
}
