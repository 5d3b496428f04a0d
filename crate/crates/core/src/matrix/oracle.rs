//! Brute-force σ-conjugation orbits on `K_1\K ε^μ K/K_1`, computed on
//! matrices modulo `t^N`. Independent of the truncation algorithm.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::decomp::cartan_type;
use super::truncation::truncation_type_matrix;
use super::{require_gl, Fe, Field, Laurent, LaurentMatrix};
use crate::alcoves::TruncationType;
use crate::error::{Error, Result};
use crate::root_datum::{RootDatum, WeylElt};

/// Largest orbit explored exhaustively.
pub const MAX_STATES: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    Exhaustive,
    Randomized { trials: usize, seed: u64 },
}

/// Matrix with entries in `O/t^N`, coefficients stored entry-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Trunc(Vec<Fe>);

struct Ctx<'a> {
    f: &'a Field,
    n: usize,
    depth: usize,
}

impl Ctx<'_> {
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.depth + k
    }

    fn mul(&self, a: &Trunc, b: &Trunc) -> Trunc {
        let (n, d, f) = (self.n, self.depth, self.f);
        let mut out = vec![0; n * n * d];
        for i in 0..n {
            for l in 0..n {
                for ka in 0..d {
                    let x = a.0[self.idx(i, l, ka)];
                    if x == 0 {
                        continue;
                    }
                    for j in 0..n {
                        for kb in 0..d - ka {
                            let y = b.0[self.idx(l, j, kb)];
                            if y != 0 {
                                let o = self.idx(i, j, ka + kb);
                                out[o] = f.add(out[o], f.mul(x, y));
                            }
                        }
                    }
                }
            }
        }
        Trunc(out)
    }

    fn sigma(&self, a: &Trunc) -> Trunc {
        Trunc(a.0.iter().map(|&x| self.f.frob(x)).collect())
    }

    fn identity(&self) -> Trunc {
        let mut c = vec![0; self.n * self.n * self.depth];
        for i in 0..self.n {
            c[self.idx(i, i, 0)] = 1;
        }
        Trunc(c)
    }

    fn elementary(&self, i: usize, j: usize, a: Fe, k: usize) -> Trunc {
        let mut m = self.identity();
        let o = self.idx(i, j, k);
        m.0[o] = self.f.add(m.0[o], a);
        m
    }

    fn from_matrix(&self, g: &LaurentMatrix) -> Option<Trunc> {
        if g.min_valuation() < 0 || g.precision() < self.depth as i64 {
            return None;
        }
        let mut c = vec![0; self.n * self.n * self.depth];
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.depth {
                    c[self.idx(i, j, k)] = g.get(i, j).coeff(k as i64);
                }
            }
        }
        Some(Trunc(c))
    }

    fn to_matrix(&self, field: Arc<Field>, t: &Trunc) -> LaurentMatrix {
        let mut e = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let c = (0..self.depth).map(|k| t.0[self.idx(i, j, k)]).collect();
                e.push(Laurent::from_coeffs(0, c, self.depth as i64));
            }
        }
        LaurentMatrix::new_unchecked(field, self.n, e).expect("square")
    }

    /// Generator pairs `(h, h^{-1})` of `K` and of `K_1` modulo `t^N`.
    fn generators(&self) -> (Vec<(Trunc, Trunc)>, Vec<(Trunc, Trunc)>) {
        let f = self.f;
        let nonzero: Vec<Fe> = f.elements().filter(|&x| x != 0).collect();
        let (mut k, mut k1) = (vec![], vec![]);
        for i in 0..self.n {
            for j in 0..self.n {
                for &a in &nonzero {
                    for d in 0..self.depth {
                        if i != j {
                            let g = (self.elementary(i, j, a, d), self.elementary(i, j, f.neg(a), d));
                            if d > 0 {
                                k1.push(g.clone());
                            }
                            k.push(g);
                        } else if d > 0 {
                            // 1 + a t^d on the diagonal, inverted as a series
                            let mut inv = self.identity();
                            let mut pow: Fe = 1;
                            for e in (d..self.depth).step_by(d) {
                                pow = f.mul(pow, f.neg(a));
                                let o = self.idx(i, i, e);
                                inv.0[o] = f.add(inv.0[o], pow);
                            }
                            let g = (self.elementary(i, i, a, d), inv);
                            k1.push(g.clone());
                            k.push(g);
                        }
                    }
                }
            }
            let gen = f.gen_pow(1);
            let mut dg = self.identity();
            dg.0[self.idx(i, i, 0)] = gen;
            let mut di = self.identity();
            di.0[self.idx(i, i, 0)] = f.inv(gen);
            k.push((dg, di));
        }
        (k, k1)
    }

    fn neighbours(&self, s: &Trunc, k: &[(Trunc, Trunc)], k1: &[(Trunc, Trunc)]) -> Vec<Trunc> {
        let mut out = Vec::with_capacity(k.len() + 2 * k1.len());
        for (h, _) in k1 {
            out.push(self.mul(h, s));
            out.push(self.mul(s, h));
        }
        for (h, hi) in k {
            out.push(self.mul(&self.mul(hi, s), &self.sigma(h)));
        }
        out
    }
}

/// Orbit data for the exhaustive enumeration of `K_1\K ε^μ K/K_1`.
#[derive(Clone, Debug)]
pub struct OrbitInfo {
    pub size: usize,
    /// `w ∈ ^μW` whose `w τ_μ` lies in the orbit.
    pub reps: Vec<WeylElt>,
    /// Matrix truncation types met on the orbit.
    pub types: BTreeSet<TruncationType>,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub elements: usize,
    pub orbits: Vec<OrbitInfo>,
}

impl OracleReport {
    /// Every orbit has exactly one `w τ_μ` representative and a single
    /// matrix type equal to it.
    pub fn consistent(&self, mu: &[i64]) -> bool {
        self.orbits.iter().all(|o| {
            o.reps.len() == 1
                && o.types.len() == 1
                && o.types.iter().next() == Some(&TruncationType { w: o.reps[0], mu: mu.to_vec() })
        })
    }
}

fn candidates(rd: &RootDatum, ctx: &Ctx, field: &Arc<Field>, mu: &[i64]) -> Result<Vec<(WeylElt, Trunc)>> {
    rd.mu_w(mu)
        .into_iter()
        .map(|w| {
            let m = LaurentMatrix::monomial(field.clone(), rd, &rd.w_tau(w, mu))?;
            Ok((w, ctx.from_matrix(&m).expect("integral monomial")))
        })
        .collect()
}

/// Truncation type of `g` by orbit search on matrices modulo `t^N`.
pub fn brute_force_truncation_oracle(
    rd: &RootDatum,
    g: &LaurentMatrix,
    depth: i64,
    mode: OracleMode,
) -> Result<TruncationType> {
    let n = require_gl(rd)?;
    let mu0 = cartan_type(g)?;
    // make the entries integral with a central shift
    let shift = -mu0.last().copied().unwrap_or(0);
    let g = g.shift(shift);
    let mu: Vec<i64> = mu0.iter().map(|x| x + shift).collect();
    let fa = g.field_arc();
    let ctx = Ctx { f: &fa, n, depth: depth as usize };
    let start = ctx.from_matrix(&g).ok_or(Error::InsufficientPrecision {
        have: g.precision(),
        required: depth,
    })?;
    let cands = candidates(rd, &ctx, &fa, &mu)?;
    let (k, k1) = ctx.generators();
    let hits: Vec<WeylElt> = match mode {
        OracleMode::Exhaustive => {
            let mut seen: HashSet<Trunc> = HashSet::new();
            let mut queue = VecDeque::from([start.clone()]);
            seen.insert(start);
            while let Some(s) = queue.pop_front() {
                for t in ctx.neighbours(&s, &k, &k1) {
                    if !seen.contains(&t) {
                        if seen.len() >= MAX_STATES {
                            return Err(Error::BudgetExceeded {
                                what: "oracle orbit".into(),
                                needed: seen.len() as u128 + 1,
                                budget: MAX_STATES as u128,
                            });
                        }
                        seen.insert(t.clone());
                        queue.push_back(t);
                    }
                }
            }
            cands.iter().filter(|(_, c)| seen.contains(c)).map(|(w, _)| *w).collect()
        }
        OracleMode::Randomized { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let walk = |rng: &mut ChaCha8Rng, from: &Trunc| {
                let mut set = HashSet::new();
                let mut cur = from.clone();
                set.insert(cur.clone());
                for _ in 0..trials {
                    let pick = rng.gen_range(0..k.len() + 2 * k1.len());
                    cur = if pick < k.len() {
                        let (h, hi) = &k[pick];
                        ctx.mul(&ctx.mul(hi, &cur), &ctx.sigma(h))
                    } else if pick < k.len() + k1.len() {
                        ctx.mul(&k1[pick - k.len()].0, &cur)
                    } else {
                        ctx.mul(&cur, &k1[pick - k.len() - k1.len()].0)
                    };
                    set.insert(cur.clone());
                }
                set
            };
            let mine = walk(&mut rng, &start);
            let mut hits = vec![];
            for (w, c) in &cands {
                if mine.contains(c) || walk(&mut rng, c).iter().any(|s| mine.contains(s)) {
                    hits.push(*w);
                }
            }
            hits
        }
    };
    match hits.as_slice() {
        [w] => Ok(TruncationType { w: *w, mu: mu0 }),
        [] => Err(Error::Inconclusive("no w·τ_μ found in the explored orbit".into())),
        _ => Err(Error::ConventionBroken(format!(
            "{} distinct w·τ_μ in one orbit",
            hits.len()
        ))),
    }
}

/// Enumerates all of `K ε^μ K` modulo `t^N` with entries in `O`, partitions
/// it into orbits and records the matrix truncation type of every element.
pub fn enumerate_orbits(rd: &RootDatum, field: Arc<Field>, mu: &[i64], depth: i64) -> Result<OracleReport> {
    let n = require_gl(rd)?;
    if mu.last().copied().unwrap_or(0) < 0 {
        return Err(Error::Precondition("shift μ to be nonnegative".into()));
    }
    let q = field.size() as u128;
    let total = q.checked_pow((n * n) as u32 * depth as u32).unwrap_or(u128::MAX);
    if total > MAX_STATES as u128 {
        return Err(Error::BudgetExceeded {
            what: "finite quotient".into(),
            needed: total,
            budget: MAX_STATES as u128,
        });
    }
    let ctx = Ctx { f: &field, n, depth: depth as usize };
    let len = n * n * depth as usize;
    let mut members: Vec<Trunc> = vec![];
    let mut index: HashMap<Trunc, usize> = HashMap::new();
    for code in 0..total as u64 {
        let mut x = code;
        let c: Vec<Fe> = (0..len)
            .map(|_| {
                let d = (x % q as u64) as Fe;
                x /= q as u64;
                d
            })
            .collect();
        let t = Trunc(c);
        let m = ctx.to_matrix(field.clone(), &t);
        if cartan_type(&m).ok().as_deref() == Some(mu) {
            index.insert(t.clone(), members.len());
            members.push(t);
        }
    }
    let mut parent: Vec<usize> = (0..members.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let (k, k1) = ctx.generators();
    for (a, s) in members.iter().enumerate() {
        for t in ctx.neighbours(s, &k, &k1) {
            let b = *index.get(&t).ok_or_else(|| {
                Error::ConventionBroken("σ-conjugation left K ε^μ K".into())
            })?;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let mut orbits: HashMap<usize, OrbitInfo> = HashMap::new();
    for (a, s) in members.iter().enumerate() {
        let r = find(&mut parent, a);
        let m = ctx.to_matrix(field.clone(), s);
        let (t, _) = truncation_type_matrix(rd, &m)?;
        let o = orbits.entry(r).or_insert_with(|| OrbitInfo {
            size: 0,
            reps: vec![],
            types: BTreeSet::new(),
        });
        o.size += 1;
        o.types.insert(t);
    }
    for (w, c) in candidates(rd, &ctx, &field, mu)? {
        let r = find(&mut parent, index[&c]);
        orbits.get_mut(&r).expect("candidate orbit").reps.push(w);
    }
    let mut orbits: Vec<OrbitInfo> = orbits.into_values().collect();
    orbits.sort_by_key(|o| o.reps.first().map(|w| rd.wlength(*w)));
    Ok(OracleReport {
        elements: members.len(),
        orbits,
    })
}
