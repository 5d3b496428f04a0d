//! Stratum closures, generic σ-conjugacy classes and the Ekedahl–Oort layer.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::affine::AffineElt;
use crate::alcoves::{SemistandardParabolic, TruncationType, TruncationTypeJson};
use crate::error::{Error, Result};
use crate::isocrystal::{NewtonPoint, SigmaClass};
use crate::lattice::Q;
use crate::matrix::{FMat, Field, LaurentMatrix};
use crate::root_datum::{format_coweight, Coweight, GroupKind, RootDatum, Side, WeylElt};

/// One stratum `S_{w,μ}` with its generic class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub ty: TruncationType,
    pub generic: SigmaClass,
    /// Whether `(w, μ)` is the minimal type of its own class.
    pub minimal: bool,
    pub length: usize,
}

#[derive(Clone, Debug)]
pub struct StrataAtlas {
    pub group: String,
    pub mu: Coweight,
    pub strata: Vec<Stratum>,
    /// `closure[i][j]`: `S_i ⊆ closure of S_j`.
    pub closure: Vec<Vec<bool>>,
    /// Pairs `i < j` related both ways.
    pub antisymmetry_violations: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct StratumJson {
    w: String,
    mu: Vec<i64>,
    generic: SigmaClass,
    minimal: bool,
    length: usize,
}

#[derive(Serialize, Deserialize)]
struct AtlasJson {
    group: String,
    mu: Vec<i64>,
    strata: Vec<StratumJson>,
    closure: Vec<Vec<bool>>,
}

impl StrataAtlas {
    pub fn index_of(&self, t: &TruncationType) -> Option<usize> {
        self.strata.iter().position(|s| &s.ty == t)
    }

    pub fn to_json(&self, rd: &RootDatum) -> String {
        let j = AtlasJson {
            group: self.group.clone(),
            mu: self.mu.clone(),
            strata: self
                .strata
                .iter()
                .map(|s| {
                    let TruncationTypeJson { w, mu } = s.ty.to_json(rd);
                    StratumJson {
                        w,
                        mu,
                        generic: s.generic.clone(),
                        minimal: s.minimal,
                        length: s.length,
                    }
                })
                .collect(),
            closure: self.closure.clone(),
        };
        serde_json::to_string_pretty(&j).expect("atlas serializes")
    }

    /// Pairs `(i, j)` with `S_i < S_j` and nothing strictly between.
    pub fn covering_relations(&self) -> Vec<(usize, usize)> {
        let n = self.strata.len();
        let lt = |i: usize, j: usize| i != j && self.closure[i][j] && !self.closure[j][i];
        let mut out = vec![];
        for i in 0..n {
            for j in 0..n {
                if lt(i, j) && !(0..n).any(|k| lt(i, k) && lt(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn to_dot(&self, rd: &RootDatum) -> String {
        let mut s = String::from("digraph strata {\n  rankdir=BT;\n");
        for (i, st) in self.strata.iter().enumerate() {
            let _ = writeln!(
                s,
                "  n{i} [label=\"{} | ({}) | {}\"];",
                rd.word_string(st.ty.w),
                format_coweight(&st.ty.mu),
                st.generic.newton
            );
        }
        for (i, j) in self.covering_relations() {
            let _ = writeln!(s, "  n{i} -> n{j};");
        }
        s.push_str("}\n");
        s
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.strata.len()).all(|i| self.closure[i][i])
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.strata.len();
        (0..n).all(|i| {
            (0..n).all(|j| !self.closure[i][j] || (0..n).all(|k| !self.closure[j][k] || self.closure[i][k]))
        })
    }
}

/// Outcome of the closure check for every element of a lower cone.
#[derive(Clone, Debug, Default)]
pub struct ThmMainReport {
    pub checked: usize,
    /// Elements whose minimal type is not in the closure of the stratum.
    pub failures: Vec<(AffineElt, TruncationType)>,
}

impl ThmMainReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Closure relation versus `⪯` for two minimal types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalOrderReport {
    pub closure: bool,
    pub leq_b: bool,
    /// `⪯` holds without closure containment (the open converse).
    pub discrepancy: bool,
}

/// Slopes `n_i / h_i` with `gcd(n_i, h_i) = 1`, nonincreasing, in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeData(Vec<(u32, u32)>);

impl SlopeData {
    pub fn new(pairs: Vec<(u32, u32)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidSlopes("no slopes".into()));
        }
        for &(n, h) in &pairs {
            if h == 0 || n > h || n.gcd(&h) != 1 {
                return Err(Error::InvalidSlopes(format!("({n},{h})")));
            }
        }
        for w in pairs.windows(2) {
            if Q::new(w[0].0 as i64, w[0].1 as i64) < Q::new(w[1].0 as i64, w[1].1 as i64) {
                return Err(Error::InvalidSlopes("slopes must be nonincreasing".into()));
            }
        }
        Ok(SlopeData(pairs))
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn height(&self) -> usize {
        self.0.iter().map(|p| p.1 as usize).sum()
    }

    /// Each slope repeated `h_i` times.
    pub fn newton(&self) -> NewtonPoint {
        NewtonPoint(
            self.0
                .iter()
                .flat_map(|&(n, h)| std::iter::repeat(Q::new(n as i64, h as i64)).take(h as usize))
                .collect(),
        )
    }

    /// All slope data of total height at most `max`.
    pub fn all_up_to(max: usize) -> Vec<SlopeData> {
        let mut parts: Vec<(u32, u32)> = vec![];
        for h in 1..=max as u32 {
            for n in 0..=h {
                if n.gcd(&h) == 1 {
                    parts.push((n, h));
                }
            }
        }
        parts.sort_by(|a, b| Q::new(b.0 as i64, b.1 as i64).cmp(&Q::new(a.0 as i64, a.1 as i64)));
        let mut out = vec![];
        let mut stack: Vec<(Vec<(u32, u32)>, usize, usize)> = vec![(vec![], 0, 0)];
        while let Some((cur, from, ht)) = stack.pop() {
            if !cur.is_empty() {
                out.push(SlopeData(cur.clone()));
            }
            for (k, &p) in parts.iter().enumerate().skip(from) {
                if ht + p.1 as usize <= max {
                    let mut next = cur.clone();
                    next.push(p);
                    stack.push((next, k, ht + p.1 as usize));
                }
            }
        }
        out
    }
}

/// EO strata for `GSp_{2g}` with the Siegel coweight.
#[derive(Clone, Debug)]
pub struct EoReport {
    pub atlas: StrataAtlas,
    pub generic_via_minimal: Vec<SigmaClass>,
    pub thm_main: Vec<ThmMainReport>,
}

type Memo = Mutex<BTreeMap<SigmaClass, TruncationType>>;

/// Maps `f` over `0..n` on up to `jobs` scoped threads, keeping order.
fn par_map<T: Send>(n: usize, jobs: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let jobs = jobs.clamp(1, n.max(1));
    if jobs == 1 {
        return (0..n).map(f).collect();
    }
    let f = &f;
    let mut parts: Vec<Vec<(usize, T)>> = std::thread::scope(|sc| {
        let handles: Vec<_> = (0..jobs)
            .map(|k| sc.spawn(move || (k..n).step_by(jobs).map(|i| (i, f(i))).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out: Vec<(usize, T)> = parts.drain(..).flatten().collect();
    out.sort_by_key(|p| p.0);
    out.into_iter().map(|p| p.1).collect()
}

impl RootDatum {
    /// `∃ w̃ ∈ W: w̃ · w'τ_{μ'} · σ(w̃)^{-1} ≤ wτ_μ`.
    pub fn closure_leq(&self, a: &TruncationType, b: &TruncationType) -> bool {
        let x = self.w_tau(a.w, &a.mu);
        let y = self.w_tau(b.w, &b.mu);
        if self.kappa(&x) != self.kappa(&y) {
            return false;
        }
        let lx = self.alength(&y);
        self.weyl_elements().any(|v| {
            let c = self.amul_all(&[&self.aweyl(v), &x, &self.aweyl(self.winv(self.sigma_w(v)))]);
            self.alength(&c) <= lx && self.bruhat_leq(&c, &y)
        })
    }

    /// Same-`μ` criterion: `∃ w̃ ∈ σ^{-1}(W_{M_μ})` with
    /// `w̃^{-1} w' x_μ σ(w̃) x_μ^{-1} ≤ w`.
    pub fn closure_leq_same_mu(&self, wp: WeylElt, w: WeylElt, mu: &[i64]) -> bool {
        let m = self.centralizer_levi(mu);
        let x = self.x_mu(mu);
        let xi = self.winv(x);
        m.weyl_elements().iter().any(|&a| {
            let wt = self.sigma_inv_w(a);
            let c = self.wmul_all(&[self.winv(wt), wp, x, self.sigma_w(wt), xi]);
            self.bruhat_leq_finite(c, w)
        })
    }

    /// All `(w', μ')` with `μ' ⪯ μ` and `w' ∈ ^{μ'}W`.
    pub fn strata_types(&self, mu: &[i64]) -> Result<Vec<TruncationType>> {
        if !self.is_dominant(mu) {
            return Err(Error::Precondition(format!("μ = ({}) is not dominant", format_coweight(mu))));
        }
        let mut out = vec![];
        for mp in self.dominant_below(mu) {
            for w in self.mu_w(&mp) {
                out.push(TruncationType { w, mu: mp.clone() });
            }
        }
        Ok(out)
    }

    /// Largest class meeting `I wτ_μ I`: the maximum over its lower cone.
    pub fn generic_class(&self, w: WeylElt, mu: &[i64], budget: u128) -> Result<SigmaClass> {
        let cone = self.lower_cone(&self.w_tau(w, mu), budget)?;
        let classes: BTreeSet<SigmaClass> = cone.iter().map(|y| self.class_of(y)).collect();
        self.max_class(&classes.into_iter().collect::<Vec<_>>())
    }

    /// Whether `t` is the minimal type of the class of `wτ_μ`.
    pub fn is_minimal_type(&self, t: &TruncationType) -> Result<bool> {
        self.is_minimal_memo(t, &Memo::default())
    }

    fn minimal_memo(&self, cls: &SigmaClass, memo: &Memo) -> Result<TruncationType> {
        if let Some(t) = memo.lock().expect("memo").get(cls) {
            return Ok(t.clone());
        }
        let t = self.minimal_type(cls)?;
        memo.lock().expect("memo").insert(cls.clone(), t.clone());
        Ok(t)
    }

    fn is_minimal_memo(&self, t: &TruncationType, memo: &Memo) -> Result<bool> {
        let cls = self.class_of(&self.w_tau(t.w, &t.mu));
        Ok(&self.minimal_memo(&cls, memo)? == t)
    }

    /// Maximum over the classes of minimal types in the closure of `S_{w,μ}`;
    /// checked against [`RootDatum::generic_class`].
    pub fn generic_via_minimal(&self, w: WeylElt, mu: &[i64], budget: u128) -> Result<SigmaClass> {
        self.generic_via_minimal_memo(w, mu, budget, &Memo::default())
    }

    fn generic_via_minimal_memo(&self, w: WeylElt, mu: &[i64], budget: u128, memo: &Memo) -> Result<SigmaClass> {
        let me = TruncationType { w, mu: mu.to_vec() };
        let mut classes = vec![];
        for t in self.strata_types(mu)? {
            if self.closure_leq(&t, &me) && self.is_minimal_memo(&t, memo)? {
                classes.push(self.class_of(&self.w_tau(t.w, &t.mu)));
            }
        }
        let via = self.max_class(&classes)?;
        let direct = self.generic_class(w, mu, budget)?;
        if via != direct {
            return Err(Error::ConventionBroken(format!(
                "stratum {}: generic class {direct} but maximal minimal class {via}",
                me.display(self)
            )));
        }
        Ok(via)
    }

    /// Classes of `y ≤ x` of the form `w^{-1} z σ(w)` with `z` fundamental for
    /// a semistandard parabolic `P = MN` and `w ∈ ^M W`.
    pub fn fundamental_conjugates_below(&self, x: &AffineElt, budget: u128) -> Result<BTreeSet<SigmaClass>> {
        let cone: BTreeSet<AffineElt> = self.lower_cone(x, budget)?.into_iter().collect();
        let lo = cone.iter().flat_map(|y| y.lam.iter().copied()).min().unwrap_or(0);
        let hi = cone.iter().flat_map(|y| y.lam.iter().copied()).max().unwrap_or(0);
        let boxes = (hi - lo + 1) as u128;
        let needed = boxes.saturating_pow(self.rank() as u32);
        if needed > budget.saturating_mul(64) {
            return Err(Error::BudgetExceeded {
                what: "translation box for fundamental elements".into(),
                needed,
                budget,
            });
        }
        let kappa = self.kappa(x);
        let mut out = BTreeSet::new();
        for p in self.semistandard_parabolics() {
            let reps = p.levi.min_coset_reps(self, Side::Left);
            for z in self.fundamental_elements_in_box(&p, lo, hi) {
                if self.kappa(&z) != kappa {
                    continue;
                }
                for &w in &reps {
                    let y = self.amul_all(&[&self.aweyl(self.winv(w)), &z, &self.aweyl(self.sigma_w(w))]);
                    if cone.contains(&y) {
                        out.insert(self.class_of(&y));
                    }
                }
            }
        }
        Ok(out)
    }

    /// For every `y ≤ wτ_μ`, the minimal type of `[y]` lies in the closure
    /// of `S_{w,μ}`.
    pub fn verify_thm_main(&self, w: WeylElt, mu: &[i64], budget: u128) -> Result<ThmMainReport> {
        self.verify_thm_main_memo(w, mu, budget, &Memo::default())
    }

    fn verify_thm_main_memo(&self, w: WeylElt, mu: &[i64], budget: u128, memo: &Memo) -> Result<ThmMainReport> {
        let me = TruncationType { w, mu: mu.to_vec() };
        let cone = self.lower_cone(&self.w_tau(w, mu), budget)?;
        let mut by_class: BTreeMap<SigmaClass, Vec<AffineElt>> = BTreeMap::new();
        for y in cone {
            by_class.entry(self.class_of(&y)).or_default().push(y);
        }
        let mut rep = ThmMainReport::default();
        for (cls, ys) in by_class {
            let t = self.minimal_memo(&cls, memo)?;
            rep.checked += ys.len();
            if !self.closure_leq(&t, &me) {
                rep.failures.extend(ys.into_iter().map(|y| (y, t.clone())));
            }
        }
        Ok(rep)
    }

    /// Closure containment against `⪯` for two minimal types. Containment
    /// must imply `⪯`; the converse is only reported.
    pub fn minimal_closure_vs_class_order(&self, a: &TruncationType, b: &TruncationType) -> Result<MinimalOrderReport> {
        for t in [a, b] {
            if !self.is_minimal_type(t)? {
                return Err(Error::NotMinimalType(t.display(self).to_string()));
            }
        }
        let ca = self.class_of(&self.w_tau(a.w, &a.mu));
        let cb = self.class_of(&self.w_tau(b.w, &b.mu));
        let closure = self.closure_leq(a, b);
        let leq_b = self.leq_b(&ca, &cb);
        if closure && !leq_b {
            return Err(Error::ConventionBroken(format!(
                "{} lies in the closure of {} but {ca} is not below {cb}",
                a.display(self),
                b.display(self)
            )));
        }
        Ok(MinimalOrderReport {
            closure,
            leq_b,
            discrepancy: leq_b && !closure,
        })
    }

    /// Stratum poset below `μ`, with generic classes and minimal flags.
    pub fn closure_poset(&self, mu: &[i64], budget: u128) -> Result<StrataAtlas> {
        self.closure_poset_jobs(mu, budget, 1)
    }

    /// [`RootDatum::closure_poset`] on `jobs` worker threads.
    pub fn closure_poset_jobs(&self, mu: &[i64], budget: u128, jobs: usize) -> Result<StrataAtlas> {
        self.atlas_of(mu, self.strata_types(mu)?, budget, jobs, &Memo::default())
    }

    fn atlas_of(&self, mu: &[i64], types: Vec<TruncationType>, budget: u128, jobs: usize, memo: &Memo) -> Result<StrataAtlas> {
        if types.len() as u128 > budget {
            return Err(Error::BudgetExceeded {
                what: "number of strata".into(),
                needed: types.len() as u128,
                budget,
            });
        }
        let strata = par_map(types.len(), jobs, |i| -> Result<Stratum> {
            let t = &types[i];
            let x = self.w_tau(t.w, &t.mu);
            let generic = self.generic_class(t.w, &t.mu, budget).map_err(|e| match e {
                Error::BudgetExceeded { needed, budget, .. } => Error::BudgetExceeded {
                    what: format!("lower cone of stratum {}", t.display(self)),
                    needed,
                    budget,
                },
                e => e,
            })?;
            Ok(Stratum {
                minimal: self.is_minimal_memo(t, memo)?,
                length: self.alength(&x),
                generic,
                ty: t.clone(),
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let n = strata.len();
        let closure: Vec<Vec<bool>> =
            par_map(n, jobs, |i| (0..n).map(|j| i == j || self.closure_leq(&strata[i].ty, &strata[j].ty)).collect());
        let antisymmetry_violations =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| closure[i][j] && closure[j][i]).collect();
        Ok(StrataAtlas {
            group: self.name().to_string(),
            mu: mu.to_vec(),
            strata,
            closure,
            antisymmetry_violations,
        })
    }

    /// EO strata of `GSp_{2g}`: the strata with the Siegel coweight itself.
    pub fn eo_atlas(&self, budget: u128) -> Result<EoReport> {
        self.eo_atlas_jobs(budget, 1)
    }

    /// [`RootDatum::eo_atlas`] on `jobs` worker threads.
    pub fn eo_atlas_jobs(&self, budget: u128, jobs: usize) -> Result<EoReport> {
        if !matches!(self.kind(), GroupKind::GSp(_)) {
            return Err(Error::Precondition("EO atlas needs a GSp datum".into()));
        }
        let mu = self.default_mu();
        let types = self.mu_w(&mu).into_iter().map(|w| TruncationType { w, mu: mu.clone() }).collect();
        let memo = Memo::default();
        let atlas = self.atlas_of(&mu, types, budget, jobs, &memo)?;
        let per = par_map(atlas.strata.len(), jobs, |i| -> Result<(SigmaClass, ThmMainReport)> {
            let w = atlas.strata[i].ty.w;
            Ok((
                self.generic_via_minimal_memo(w, &mu, budget, &memo)?,
                self.verify_thm_main_memo(w, &mu, budget, &memo)?,
            ))
        });
        let mut via = vec![];
        let mut thm = vec![];
        for r in per {
            let (v, t) = r?;
            via.push(v);
            thm.push(t);
        }
        Ok(EoReport {
            atlas,
            generic_via_minimal: via,
            thm_main: thm,
        })
    }

    /// The element of `W̃` behind the minimal Dieudonné module of the slope
    /// data, and its block parabolic.
    pub fn minimal_dieudonne_element(&self, s: &SlopeData) -> Result<(AffineElt, SemistandardParabolic)> {
        let n = self.gl_size().ok_or_else(|| Error::Precondition("minimal Dieudonné modules need GL_n".into()))?;
        if s.height() != n {
            return Err(Error::InvalidSlopes(format!("total height {} for GL_{n}", s.height())));
        }
        // column j of a block: F(f_j) = f_{j-n_i}, or t·f_{h_i+j-n_i}
        let mut perm = FMat::zero(n);
        let mut lam = vec![0; n];
        let mut off = 0;
        let mut simple = vec![];
        for &(ni, hi) in s.pairs() {
            let (ni, hi) = (ni as usize, hi as usize);
            for j in 1..=hi {
                let (row, e) = if j > ni { (j - ni, 0) } else { (hi + j - ni, 1) };
                perm.set(off + row - 1, off + j - 1, 1);
                lam[off + j - 1] = e;
            }
            simple.extend(off..off + hi - 1);
            off += hi;
        }
        let w = perm.monomial_weyl(self).expect("permutation matrix");
        Ok((AffineElt { w, lam }, SemistandardParabolic::standard(self, &simple)))
    }

    /// Block-diagonal matrix of the minimal Dieudonné module.
    pub fn minimal_dieudonne(&self, s: &SlopeData, field: Arc<Field>) -> Result<LaurentMatrix> {
        let (x, _) = self.minimal_dieudonne_element(s)?;
        LaurentMatrix::monomial(field, self, &x)
    }
}

#[cfg(test)]
mod tests;
