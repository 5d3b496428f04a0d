//! Based root data of unramified reductive groups and their finite Weyl groups.
//!
//! Cocharacters are integer vectors in a fixed basis of `X_*(T)`; roots are
//! integer covectors and the pairing is the dot product. The Borel subgroup is
//! the one whose roots are the nonnegative combinations of the simple roots
//! (upper triangular matrices for the presets).

mod levi;
mod weyl;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, dot, dot_q, mat_mul, mat_vec, vec_mat, IMat, Q};

pub use levi::{DoubleCoset, Levi, Side};
pub use weyl::{WeylElt, WordDisplay, MAX_WEYL_ORDER};
pub(crate) use weyl::WeylTable;

/// Integer cocharacter.
pub type Coweight = Vec<i64>;
/// Rational cocharacter (element of `X_*(T) ⊗ Q`).
pub type QCoweight = Vec<Q>;

/// Which preset a datum came from, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    GL(usize),
    SL(usize),
    GSp(usize),
    Raw,
}

/// Raw root datum as read from a JSON file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDatum {
    #[serde(default)]
    pub name: Option<String>,
    pub rank: usize,
    pub simple_roots: IMat,
    pub simple_coroots: IMat,
    #[serde(default)]
    pub sigma_perm: Option<Vec<usize>>,
    #[serde(default)]
    pub sigma_lattice: Option<IMat>,
}

/// A root with its coroot and its coordinates in the basis of simple roots.
#[derive(Clone, Debug)]
pub struct Root {
    pub covector: Vec<i64>,
    pub coroot: Vec<i64>,
    pub coeffs: Vec<i64>,
    pub positive: bool,
    pub height: i64,
    /// Index of the negative root.
    pub neg: usize,
    pub reflection: WeylElt,
}

/// Kappa projection `X_*(T) -> π_1(G)_Γ ≅ Z^f ⊕ ⊕ Z/d_i`.
#[derive(Clone, Debug)]
pub(crate) struct KappaProjection {
    pub rows: IMat,
    /// 0 for a free coordinate, `d > 1` for a `Z/d` coordinate.
    pub moduli: Vec<i64>,
}

/// Validated based root datum with Frobenius action and tabulated Weyl group.
#[derive(Clone, Debug)]
pub struct RootDatum {
    name: String,
    kind: GroupKind,
    rank: usize,
    simple_roots: IMat,
    simple_coroots: IMat,
    cartan: IMat,
    sigma_perm: Vec<usize>,
    sigma_lattice: IMat,
    sigma_lattice_inv: IMat,
    sigma_order: usize,
    roots: Vec<Root>,
    root_index: HashMap<Vec<i64>, usize>,
    sigma_roots: Vec<usize>,
    components: Vec<Vec<usize>>,
    highest_roots: Vec<usize>,
    pub(crate) weyl: WeylTable,
    pub(crate) kappa: KappaProjection,
}

const MAX_ROOTS: usize = 4096;

impl RootDatum {
    /// Parses a group descriptor: `GL:n`, `SL:n`, `GSp:2g`, or a path to a
    /// raw-datum JSON file.
    pub fn from_descriptor(desc: &str) -> Result<Self> {
        let desc = desc.trim();
        if let Some((kind, size)) = desc.split_once(':') {
            let n: usize = size
                .trim()
                .parse()
                .map_err(|_| Error::UnknownGroup(desc.to_string()))?;
            match kind.trim() {
                "GL" => return Self::gl(n),
                "SL" => return Self::sl(n),
                "GSp" => {
                    if n % 2 != 0 || n == 0 {
                        return Err(Error::UnknownGroup(desc.to_string()));
                    }
                    return Self::gsp(n / 2);
                }
                _ => {}
            }
        }
        let path = Path::new(desc);
        if path.exists() {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::UnknownGroup(format!("{desc}: {e}")))?;
            let raw: RawDatum = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidCartanData(format!("{desc}: {e}")))?;
            return Self::from_raw(raw);
        }
        Err(Error::UnknownGroup(desc.to_string()))
    }

    pub fn gl(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnknownGroup("GL:0".into()));
        }
        let roots: IMat = (0..n - 1)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v[i + 1] = -1;
                v
            })
            .collect();
        Self::build(
            format!("GL:{n}"),
            GroupKind::GL(n),
            n,
            roots.clone(),
            roots,
            None,
            None,
        )
    }

    /// `SL_n` in the basis of simple coroots (the cocharacter lattice of the
    /// simply connected group is the coroot lattice).
    pub fn sl(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnknownGroup(format!("SL:{n}")));
        }
        let r = n - 1;
        let coroots = lattice::identity(r);
        let roots: IMat = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| match (i as i64 - j as i64).abs() {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        Self::build(format!("SL:{n}"), GroupKind::SL(n), r, roots, coroots, None, None)
    }

    /// `GSp_{2g}` with similitude: coordinates `(a_1..a_g, c)` stand for
    /// `diag(t^{a_1},..,t^{a_g},t^{c-a_g},..,t^{c-a_1})`.
    pub fn gsp(g: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::UnknownGroup("GSp:0".into()));
        }
        let n = g + 1;
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        for i in 0..g - 1 {
            let mut v = vec![0; n];
            v[i] = 1;
            v[i + 1] = -1;
            roots.push(v.clone());
            coroots.push(v);
        }
        let mut long = vec![0; n];
        long[g - 1] = 2;
        long[g] = -1;
        roots.push(long);
        let mut short = vec![0; n];
        short[g - 1] = 1;
        coroots.push(short);
        Self::build(
            format!("GSp:{}", 2 * g),
            GroupKind::GSp(g),
            n,
            roots,
            coroots,
            None,
            None,
        )
    }

    pub fn from_raw(raw: RawDatum) -> Result<Self> {
        let name = raw.name.clone().unwrap_or_else(|| "raw".to_string());
        Self::build(
            name,
            GroupKind::Raw,
            raw.rank,
            raw.simple_roots,
            raw.simple_coroots,
            raw.sigma_perm,
            raw.sigma_lattice,
        )
    }

    pub fn to_raw(&self) -> RawDatum {
        RawDatum {
            name: Some(self.name.clone()),
            rank: self.rank,
            simple_roots: self.simple_roots.clone(),
            simple_coroots: self.simple_coroots.clone(),
            sigma_perm: Some(self.sigma_perm.clone()),
            sigma_lattice: Some(self.sigma_lattice.clone()),
        }
    }

    fn build(
        name: String,
        kind: GroupKind,
        rank: usize,
        simple_roots: IMat,
        simple_coroots: IMat,
        sigma_perm: Option<Vec<usize>>,
        sigma_lattice: Option<IMat>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidCartanData("rank must be positive".into()));
        }
        let ns = simple_roots.len();
        if simple_coroots.len() != ns {
            return Err(Error::InvalidCartanData(
                "number of simple roots and coroots differ".into(),
            ));
        }
        if simple_roots
            .iter()
            .chain(simple_coroots.iter())
            .any(|v| v.len() != rank)
        {
            return Err(Error::InvalidCartanData(format!(
                "all roots and coroots must have length {rank}"
            )));
        }
        let cartan: IMat = (0..ns)
            .map(|i| (0..ns).map(|j| dot(&simple_roots[i], &simple_coroots[j])).collect())
            .collect();
        for i in 0..ns {
            if cartan[i][i] != 2 {
                return Err(Error::InvalidCartanData(format!(
                    "<α_{0}, α_{0}^∨> = {1}, expected 2",
                    i + 1,
                    cartan[i][i]
                )));
            }
            for j in 0..ns {
                if i != j {
                    if cartan[i][j] > 0 {
                        return Err(Error::InvalidCartanData(format!(
                            "positive off-diagonal Cartan entry at ({}, {})",
                            i + 1,
                            j + 1
                        )));
                    }
                    if (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                        return Err(Error::InvalidCartanData(format!(
                            "Cartan zero pattern not symmetric at ({}, {})",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        if lattice::rank(&simple_roots) != ns || lattice::rank(&simple_coroots) != ns {
            return Err(Error::InvalidCartanData(
                "simple roots or coroots are linearly dependent".into(),
            ));
        }

        let sigma_perm = sigma_perm.unwrap_or_else(|| (0..ns).collect());
        let sigma_lattice = sigma_lattice.unwrap_or_else(|| lattice::identity(rank));
        validate_sigma(&simple_roots, &simple_coroots, &sigma_perm, &sigma_lattice)?;
        let sigma_lattice_inv = lattice::unimodular_inverse(&sigma_lattice)
            .ok_or_else(|| Error::UnsupportedSigma("sigma_lattice is not invertible over Z".into()))?;
        let mut sigma_order = 1;
        let mut pow = sigma_lattice.clone();
        let id = lattice::identity(rank);
        while pow != id {
            pow = mat_mul(&pow, &sigma_lattice);
            sigma_order += 1;
            if sigma_order > 64 {
                return Err(Error::UnsupportedSigma("sigma_lattice has infinite order".into()));
            }
        }

        // roots by closing the simple roots under simple reflections
        let mut covecs: Vec<Vec<i64>> = Vec::new();
        let mut coroots: Vec<Vec<i64>> = Vec::new();
        let mut coeffs: Vec<Vec<i64>> = Vec::new();
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        for i in 0..ns {
            let mut c = vec![0; ns];
            c[i] = 1;
            seen.insert(simple_roots[i].clone(), covecs.len());
            covecs.push(simple_roots[i].clone());
            coroots.push(simple_coroots[i].clone());
            coeffs.push(c);
        }
        let mut k = 0;
        while k < covecs.len() {
            for j in 0..ns {
                let p = dot(&covecs[k], &simple_coroots[j]);
                let q = dot(&simple_roots[j], &coroots[k]);
                let nb: Vec<i64> = covecs[k]
                    .iter()
                    .zip(&simple_roots[j])
                    .map(|(x, y)| x - p * y)
                    .collect();
                if seen.contains_key(&nb) {
                    continue;
                }
                let nc: Vec<i64> = coroots[k]
                    .iter()
                    .zip(&simple_coroots[j])
                    .map(|(x, y)| x - q * y)
                    .collect();
                let mut ncoef = coeffs[k].clone();
                ncoef[j] -= p;
                seen.insert(nb.clone(), covecs.len());
                covecs.push(nb);
                coroots.push(nc);
                coeffs.push(ncoef);
                if covecs.len() > MAX_ROOTS {
                    return Err(Error::InvalidCartanData(
                        "root system is not of finite type".into(),
                    ));
                }
            }
            k += 1;
        }
        let mut order: Vec<usize> = (0..covecs.len()).collect();
        for c in &coeffs {
            let pos = c.iter().all(|&x| x >= 0);
            let neg = c.iter().all(|&x| x <= 0);
            if !(pos || neg) {
                return Err(Error::InvalidCartanData("root with mixed-sign coefficients".into()));
            }
        }
        let height = |c: &Vec<i64>| c.iter().sum::<i64>();
        order.sort_by(|&a, &b| {
            let (ha, hb) = (height(&coeffs[a]), height(&coeffs[b]));
            (ha < 0)
                .cmp(&(hb < 0))
                .then(ha.abs().cmp(&hb.abs()))
                .then(coeffs[b].iter().map(|x| x.abs()).cmp(coeffs[a].iter().map(|x| x.abs())))
        });
        let mut roots: Vec<Root> = order
            .iter()
            .map(|&k| Root {
                covector: covecs[k].clone(),
                coroot: coroots[k].clone(),
                coeffs: coeffs[k].clone(),
                positive: height(&coeffs[k]) > 0,
                height: height(&coeffs[k]),
                neg: 0,
                reflection: WeylElt::IDENTITY,
            })
            .collect();
        let root_index: HashMap<Vec<i64>, usize> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.covector.clone(), i))
            .collect();
        for i in 0..roots.len() {
            let negv: Vec<i64> = roots[i].covector.iter().map(|x| -x).collect();
            roots[i].neg = root_index[&negv];
        }

        // simple reflections on X_* and on roots
        let refl: Vec<IMat> = (0..ns)
            .map(|i| reflection_matrix(&simple_roots[i], &simple_coroots[i]))
            .collect();
        let refl_roots: Vec<Vec<u16>> = (0..ns)
            .map(|i| {
                roots
                    .iter()
                    .map(|r| {
                        let p = dot(&r.covector, &simple_coroots[i]);
                        let img: Vec<i64> = r
                            .covector
                            .iter()
                            .zip(&simple_roots[i])
                            .map(|(x, y)| x - p * y)
                            .collect();
                        root_index[&img] as u16
                    })
                    .collect()
            })
            .collect();
        let weyl = WeylTable::build(rank, &refl, &refl_roots, roots.len(), &sigma_perm)?;
        for r in roots.iter_mut() {
            let m = reflection_matrix(&r.covector, &r.coroot);
            r.reflection = WeylElt(weyl.index[&m]);
        }
        let sigma_roots: Vec<usize> = roots
            .iter()
            .map(|r| {
                let img = vec_mat(&r.covector, &sigma_lattice_inv);
                root_index.get(&img).copied().ok_or_else(|| {
                    Error::UnsupportedSigma("sigma does not permute the roots".into())
                })
            })
            .collect::<Result<_>>()?;

        // connected components of the Dynkin diagram and their highest roots
        let mut comp_of = vec![usize::MAX; ns];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for s in 0..ns {
            if comp_of[s] != usize::MAX {
                continue;
            }
            let c = components.len();
            let mut stack = vec![s];
            let mut members = vec![];
            comp_of[s] = c;
            while let Some(x) = stack.pop() {
                members.push(x);
                for y in 0..ns {
                    if cartan[x][y] != 0 && comp_of[y] == usize::MAX {
                        comp_of[y] = c;
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        let highest_roots: Vec<usize> = components
            .iter()
            .map(|comp| {
                (0..roots.len())
                    .filter(|&r| {
                        roots[r].positive
                            && roots[r]
                                .coeffs
                                .iter()
                                .enumerate()
                                .all(|(i, &c)| c == 0 || comp.contains(&i))
                    })
                    .max_by_key(|&r| roots[r].height)
                    .expect("nonempty component has roots")
            })
            .collect();

        let kappa = kappa_projection(rank, &simple_coroots, &sigma_lattice);

        Ok(RootDatum {
            name,
            kind,
            rank,
            simple_roots,
            simple_coroots,
            cartan,
            sigma_perm,
            sigma_lattice,
            sigma_lattice_inv,
            sigma_order,
            roots,
            root_index,
            sigma_roots,
            components,
            highest_roots,
            weyl,
            kappa,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    /// `n` if this is the `GL_n` preset.
    pub fn gl_size(&self) -> Option<usize> {
        match self.kind {
            GroupKind::GL(n) => Some(n),
            _ => None,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn simple_roots(&self) -> &IMat {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &IMat {
        &self.simple_coroots
    }

    pub fn cartan(&self) -> &IMat {
        &self.cartan
    }

    pub fn sigma_perm(&self) -> &[usize] {
        &self.sigma_perm
    }

    pub fn sigma_order(&self) -> usize {
        self.sigma_order
    }

    pub fn is_split(&self) -> bool {
        self.sigma_order == 1
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, r: usize) -> &Root {
        &self.roots[r]
    }

    pub fn root_index(&self, covector: &[i64]) -> Option<usize> {
        self.root_index.get(covector).copied()
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.roots.len()).filter(move |&r| self.roots[r].positive)
    }

    /// Index of the root `α_i` among all roots.
    pub fn simple_root_index(&self, i: usize) -> usize {
        self.root_index[&self.simple_roots[i]]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Highest root of each irreducible component, in component order.
    pub fn highest_roots(&self) -> &[usize] {
        &self.highest_roots
    }

    // ---- Weyl group ------------------------------------------------------

    pub fn weyl_order(&self) -> usize {
        self.weyl.order()
    }

    pub fn weyl_elements(&self) -> impl Iterator<Item = WeylElt> {
        (0..self.weyl.order() as u32).map(WeylElt)
    }

    pub fn simple_reflection(&self, i: usize) -> WeylElt {
        WeylElt(self.weyl.lmul[i][0])
    }

    pub fn longest(&self) -> WeylElt {
        WeylElt(self.weyl.longest)
    }

    pub fn wmul(&self, u: WeylElt, v: WeylElt) -> WeylElt {
        self.weyl.mul(u, v)
    }

    pub fn wmul_all(&self, elts: &[WeylElt]) -> WeylElt {
        elts.iter().fold(WeylElt::IDENTITY, |acc, &x| self.wmul(acc, x))
    }

    pub fn winv(&self, w: WeylElt) -> WeylElt {
        WeylElt(self.weyl.inv[w.index()])
    }

    /// `s_i * w`.
    pub fn lmul_simple(&self, i: usize, w: WeylElt) -> WeylElt {
        WeylElt(self.weyl.lmul[i][w.index()])
    }

    /// `w * s_i`.
    pub fn rmul_simple(&self, w: WeylElt, i: usize) -> WeylElt {
        WeylElt(self.weyl.rmul[i][w.index()])
    }

    pub fn wlength(&self, w: WeylElt) -> usize {
        self.weyl.lens[w.index()] as usize
    }

    pub fn reduced_word(&self, w: WeylElt) -> &[u8] {
        &self.weyl.words[w.index()]
    }

    pub fn word_string(&self, w: WeylElt) -> String {
        WordDisplay(self.reduced_word(w)).to_string()
    }

    /// Element from a word of 0-based simple reflection indices.
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElt> {
        let mut x = WeylElt::IDENTITY;
        for &a in word.iter().rev() {
            if a >= self.semisimple_rank() {
                return Err(Error::Precondition(format!(
                    "simple reflection s{} does not exist",
                    a + 1
                )));
            }
            x = self.lmul_simple(a, x);
        }
        Ok(x)
    }

    pub fn weyl_matrix(&self, w: WeylElt) -> &IMat {
        &self.weyl.mats[w.index()]
    }

    pub fn weyl_from_matrix(&self, m: &IMat) -> Option<WeylElt> {
        self.weyl.index.get(m).map(|&k| WeylElt(k))
    }

    pub fn sigma_w(&self, w: WeylElt) -> WeylElt {
        WeylElt(self.weyl.sigma[w.index()])
    }

    pub fn sigma_inv_w(&self, w: WeylElt) -> WeylElt {
        WeylElt(self.weyl.sigma_inv[w.index()])
    }

    /// Index of `w(β)` for the root with index `r`.
    pub fn act_root(&self, w: WeylElt, r: usize) -> usize {
        self.weyl.root_perm[w.index()][r] as usize
    }

    pub fn act(&self, w: WeylElt, lam: &[i64]) -> Coweight {
        mat_vec(self.weyl_matrix(w), lam)
    }

    pub fn act_q(&self, w: WeylElt, lam: &[Q]) -> QCoweight {
        self.weyl_matrix(w)
            .iter()
            .map(|row| {
                row.iter()
                    .zip(lam)
                    .fold(Q::zero(), |acc, (a, b)| acc + b * *a)
            })
            .collect()
    }

    pub fn sigma_coweight(&self, lam: &[i64]) -> Coweight {
        mat_vec(&self.sigma_lattice, lam)
    }

    pub fn sigma_inv_coweight(&self, lam: &[i64]) -> Coweight {
        mat_vec(&self.sigma_lattice_inv, lam)
    }

    pub fn sigma_coweight_q(&self, lam: &[Q]) -> QCoweight {
        self.sigma_lattice
            .iter()
            .map(|row| row.iter().zip(lam).fold(Q::zero(), |acc, (a, b)| acc + b * *a))
            .collect()
    }

    pub fn sigma_root(&self, r: usize) -> usize {
        self.sigma_roots[r]
    }

    /// Index of `σ^{-1}(β)`.
    pub fn sigma_inv_root(&self, r: usize) -> usize {
        self.sigma_roots
            .iter()
            .position(|&x| x == r)
            .expect("sigma permutes roots")
    }

    pub fn pairing(&self, r: usize, lam: &[i64]) -> i64 {
        dot(&self.roots[r].covector, lam)
    }

    pub fn pairing_q(&self, r: usize, lam: &[Q]) -> Q {
        dot_q(&self.roots[r].covector, lam)
    }

    /// Bruhat order on W: `u ≤ v`.
    pub fn bruhat_leq_finite(&self, u: WeylElt, v: WeylElt) -> bool {
        let (mut u, mut v) = (u, v);
        loop {
            let (lu, lv) = (self.wlength(u), self.wlength(v));
            if lu > lv {
                return false;
            }
            if lv == 0 {
                return u == v;
            }
            if lu == 0 {
                return true;
            }
            let s = self.reduced_word(v)[0] as usize;
            v = self.lmul_simple(s, v);
            let su = self.lmul_simple(s, u);
            if self.wlength(su) < lu {
                u = su;
            }
        }
    }

    // ---- coweights -----------------------------------------------------

    pub fn is_dominant(&self, lam: &[i64]) -> bool {
        self.simple_roots.iter().all(|a| dot(a, lam) >= 0)
    }

    pub fn is_dominant_q(&self, lam: &[Q]) -> bool {
        self.simple_roots.iter().all(|a| !dot_q(a, lam).is_negative())
    }

    /// Dominant representative `λ_dom` and the shortest `v` with `λ = v·λ_dom`.
    pub fn dominant_rep_q(&self, lam: &[Q]) -> (QCoweight, WeylElt) {
        let mut cur = lam.to_vec();
        // cur = v^{-1} λ, tracked through v
        let mut v = WeylElt::IDENTITY;
        loop {
            let bad = (0..self.semisimple_rank())
                .find(|&i| dot_q(&self.simple_roots[i], &cur).is_negative());
            match bad {
                None => break,
                Some(i) => {
                    cur = self.act_q(self.simple_reflection(i), &cur);
                    v = self.rmul_simple(v, i);
                }
            }
        }
        // shorten v inside v·Stab(λ_dom)
        let stab: Vec<usize> = (0..self.semisimple_rank())
            .filter(|&i| dot_q(&self.simple_roots[i], &cur).is_zero())
            .collect();
        loop {
            let mut changed = false;
            for &j in &stab {
                let vs = self.rmul_simple(v, j);
                if self.wlength(vs) < self.wlength(v) {
                    v = vs;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (cur, v)
    }

    pub fn dominant_rep(&self, lam: &[i64]) -> (Coweight, WeylElt) {
        let q: QCoweight = lam.iter().map(|&x| Q::from_integer(x)).collect();
        let (d, v) = self.dominant_rep_q(&q);
        (d.iter().map(|x| x.to_integer()).collect(), v)
    }

    /// The W-orbit of an integer coweight.
    pub fn orbit(&self, lam: &[i64]) -> Vec<Coweight> {
        let set: BTreeSet<Coweight> = self.weyl_elements().map(|w| self.act(w, lam)).collect();
        set.into_iter().collect()
    }

    /// Dominant coweights `μ' ≤ μ`: `μ - μ'` a nonnegative integral sum of
    /// positive coroots. Includes `μ` itself.
    pub fn dominant_below(&self, mu: &[i64]) -> Vec<Coweight> {
        let mut out: BTreeSet<Coweight> = BTreeSet::new();
        let mut stack = vec![mu.to_vec()];
        out.insert(mu.to_vec());
        while let Some(nu) = stack.pop() {
            for r in self.positive_roots() {
                let cand: Coweight = nu
                    .iter()
                    .zip(&self.roots[r].coroot)
                    .map(|(a, b)| a - b)
                    .collect();
                if self.is_dominant(&cand) && out.insert(cand.clone()) {
                    stack.push(cand);
                }
            }
        }
        let mut v: Vec<Coweight> = out.into_iter().collect();
        v.sort_by(|a, b| b.cmp(a));
        v
    }

    /// Default `μ` for the CLI: minuscule Siegel coweight for GSp, `(1,0,..,0)`
    /// for GL, first fundamental coweight in the coroot basis for SL.
    pub fn default_mu(&self) -> Coweight {
        match self.kind {
            GroupKind::GSp(g) => vec![1; g + 1],
            GroupKind::GL(n) => {
                let mut v = vec![0; n];
                v[0] = 1;
                v
            }
            _ => vec![0; self.rank],
        }
    }

    /// `Z_{>0}`-valued interior point of the base alcove, scaled: returns
    /// `v` with `0 < <α, v> < 1` for all positive roots α.
    pub fn alcove_interior_point(&self) -> QCoweight {
        let ns = self.semisimple_rank();
        let h = self
            .roots
            .iter()
            .map(|r| r.height)
            .max()
            .unwrap_or(0)
            + 1;
        if ns == 0 {
            return vec![Q::zero(); self.rank];
        }
        // v = Σ c_j α_j^∨ with <α_i, v> = 1/h
        let a: Vec<Vec<Q>> = (0..ns)
            .map(|i| (0..ns).map(|j| Q::from_integer(self.cartan[i][j])).collect())
            .collect();
        let b = vec![Q::new(1, h); ns];
        let c = lattice::solve_q(&a, &b).expect("Cartan matrix is invertible");
        let mut v = vec![Q::zero(); self.rank];
        for (j, cj) in c.iter().enumerate() {
            for (k, x) in self.simple_coroots[j].iter().enumerate() {
                v[k] += cj * *x;
            }
        }
        v
    }
}

fn reflection_matrix(root: &[i64], coroot: &[i64]) -> IMat {
    let n = root.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i64::from(i == j) - coroot[i] * root[j])
                .collect()
        })
        .collect()
}

fn validate_sigma(
    roots: &IMat,
    coroots: &IMat,
    perm: &[usize],
    lat: &IMat,
) -> Result<()> {
    let ns = roots.len();
    if perm.len() != ns {
        return Err(Error::UnsupportedSigma(format!(
            "sigma_perm has length {}, expected {ns}",
            perm.len()
        )));
    }
    let mut seen = vec![false; ns];
    for &p in perm {
        if p >= ns || seen[p] {
            return Err(Error::UnsupportedSigma("sigma_perm is not a permutation".into()));
        }
        seen[p] = true;
    }
    let rank = lat.len();
    if lat.iter().any(|r| r.len() != rank) || (ns > 0 && rank != roots[0].len()) {
        return Err(Error::UnsupportedSigma("sigma_lattice has wrong shape".into()));
    }
    let inv = lattice::unimodular_inverse(lat)
        .ok_or_else(|| Error::UnsupportedSigma("sigma_lattice is not invertible over Z".into()))?;
    for i in 0..ns {
        if mat_vec(lat, &coroots[i]) != coroots[perm[i]] {
            return Err(Error::UnsupportedSigma(format!(
                "sigma_lattice does not send α_{}^∨ to α_{}^∨",
                i + 1,
                perm[i] + 1
            )));
        }
        if vec_mat(&roots[i], &inv) != roots[perm[i]] {
            return Err(Error::UnsupportedSigma(format!(
                "sigma_lattice does not send α_{} to α_{}",
                i + 1,
                perm[i] + 1
            )));
        }
    }
    Ok(())
}

fn kappa_projection(rank: usize, coroots: &IMat, sigma: &IMat) -> KappaProjection {
    // generators as columns: coroots and (σ - 1) e_j
    let mut cols: Vec<Vec<i64>> = coroots.clone();
    for j in 0..rank {
        let col: Vec<i64> = (0..rank)
            .map(|i| sigma[i][j] - i64::from(i == j))
            .collect();
        if col.iter().any(|&x| x != 0) {
            cols.push(col);
        }
    }
    let a: IMat = if cols.is_empty() {
        vec![vec![]; rank]
    } else {
        lattice::transpose(&cols)
    };
    let (u, diag) = if cols.is_empty() {
        (lattice::identity(rank), vec![0; rank])
    } else {
        lattice::smith_left(&a, rank)
    };
    let free: IMat = (0..rank)
        .filter(|&i| diag[i] == 0)
        .map(|i| u[i].clone())
        .collect();
    let free = lattice::row_hnf(&free);
    let mut rows = free.clone();
    let mut moduli = vec![0; free.len()];
    for i in 0..rank {
        if diag[i] > 1 {
            rows.push(u[i].clone());
            moduli.push(diag[i]);
        }
    }
    KappaProjection { rows, moduli }
}

impl fmt::Display for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

pub fn format_coweight(lam: &[i64]) -> String {
    lam.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn format_qcoweight(lam: &[Q]) -> String {
    lam.iter().map(lattice::format_q).collect::<Vec<_>>().join(",")
}
