use std::collections::{BTreeSet, HashSet};

use super::{RootDatum, WeylElt};
use crate::error::{Error, Result};

/// Levi subgroup containing `T`, given by its set of roots. Standard Levis
/// come from subsets of simple roots; conjugates and intersections of these
/// are general (semistandard) Levis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Levi {
    roots: Vec<bool>,
    elements: Vec<WeylElt>,
}

impl Levi {
    /// Standard Levi generated by the simple roots with the given 0-based indices.
    pub fn standard(rd: &RootDatum, simple: &[usize]) -> Levi {
        let mut set = vec![false; rd.roots().len()];
        for (r, root) in rd.roots().iter().enumerate() {
            set[r] = root
                .coeffs
                .iter()
                .enumerate()
                .all(|(i, &c)| c == 0 || simple.contains(&i));
        }
        Levi::from_root_set(rd, set)
    }

    pub fn torus(rd: &RootDatum) -> Levi {
        Levi::standard(rd, &[])
    }

    pub fn whole(rd: &RootDatum) -> Levi {
        let all: Vec<usize> = (0..rd.semisimple_rank()).collect();
        Levi::standard(rd, &all)
    }

    /// Builds a Levi from a root set closed under its own reflections.
    pub fn from_root_set(rd: &RootDatum, roots: Vec<bool>) -> Levi {
        let gens: Vec<WeylElt> = (0..roots.len())
            .filter(|&r| roots[r] && rd.root(r).positive)
            .map(|r| rd.root(r).reflection)
            .collect();
        let mut seen: HashSet<WeylElt> = HashSet::from([WeylElt::IDENTITY]);
        let mut stack = vec![WeylElt::IDENTITY];
        while let Some(w) = stack.pop() {
            for &s in &gens {
                let x = rd.wmul(s, w);
                if seen.insert(x) {
                    stack.push(x);
                }
            }
        }
        let mut elements: Vec<WeylElt> = seen.into_iter().collect();
        elements.sort_unstable();
        Levi { roots, elements }
    }

    pub fn contains_root(&self, r: usize) -> bool {
        self.roots[r]
    }

    pub fn root_set(&self) -> &[bool] {
        &self.roots
    }

    pub fn root_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.roots.len()).filter(move |&r| self.roots[r])
    }

    pub fn num_roots(&self) -> usize {
        self.roots.iter().filter(|&&b| b).count()
    }

    pub fn is_torus(&self) -> bool {
        self.num_roots() == 0
    }

    /// Elements of `W_M`, sorted by index.
    pub fn weyl_elements(&self) -> &[WeylElt] {
        &self.elements
    }

    pub fn weyl_order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains_w(&self, w: WeylElt) -> bool {
        self.elements.binary_search(&w).is_ok()
    }

    pub fn is_subset(&self, other: &Levi) -> bool {
        self.roots.iter().zip(&other.roots).all(|(&a, &b)| !a || b)
    }

    /// Simple roots of `G` lying in `M`, if `M` is standard.
    pub fn standard_subset(&self, rd: &RootDatum) -> Option<Vec<usize>> {
        let sub: Vec<usize> = (0..rd.semisimple_rank())
            .filter(|&i| self.roots[rd.simple_root_index(i)])
            .collect();
        (Levi::standard(rd, &sub).roots == self.roots).then_some(sub)
    }

    pub fn is_standard(&self, rd: &RootDatum) -> bool {
        self.standard_subset(rd).is_some()
    }

    pub fn intersect(&self, rd: &RootDatum, other: &Levi) -> Levi {
        let set = self
            .roots
            .iter()
            .zip(&other.roots)
            .map(|(&a, &b)| a && b)
            .collect();
        Levi::from_root_set(rd, set)
    }

    /// `w M w^{-1}`.
    pub fn conjugate(&self, rd: &RootDatum, w: WeylElt) -> Levi {
        let mut set = vec![false; self.roots.len()];
        for r in self.root_indices() {
            set[rd.act_root(w, r)] = true;
        }
        Levi::from_root_set(rd, set)
    }

    /// `σ(M)`.
    pub fn sigma(&self, rd: &RootDatum) -> Levi {
        let mut set = vec![false; self.roots.len()];
        for r in self.root_indices() {
            set[rd.sigma_root(r)] = true;
        }
        Levi::from_root_set(rd, set)
    }

    /// `σ^{-1}(M)`.
    pub fn sigma_inv(&self, rd: &RootDatum) -> Levi {
        let mut set = vec![false; self.roots.len()];
        for r in self.root_indices() {
            set[rd.sigma_inv_root(r)] = true;
        }
        Levi::from_root_set(rd, set)
    }

    /// Length of `w ∈ W_M` with respect to the positive system `Φ_M ∩ Φ^+`.
    pub fn length_in(&self, rd: &RootDatum, w: WeylElt) -> usize {
        self.root_indices()
            .filter(|&r| rd.root(r).positive && !rd.root(rd.act_root(w, r)).positive)
            .count()
    }

    /// Longest element of `W_M`.
    pub fn longest(&self, rd: &RootDatum) -> WeylElt {
        *self
            .elements
            .iter()
            .max_by_key(|&&w| rd.wlength(w))
            .expect("W_M contains the identity")
    }

    /// Whether `x` is the shortest element of `W_M x`.
    pub fn is_left_min(&self, rd: &RootDatum, x: WeylElt) -> bool {
        let xi = rd.winv(x);
        self.root_indices()
            .filter(|&r| rd.root(r).positive)
            .all(|r| rd.root(rd.act_root(xi, r)).positive)
    }

    /// Whether `x` is the shortest element of `x W_M`.
    pub fn is_right_min(&self, rd: &RootDatum, x: WeylElt) -> bool {
        self.root_indices()
            .filter(|&r| rd.root(r).positive)
            .all(|r| rd.root(rd.act_root(x, r)).positive)
    }

    /// `^M W` (side `Left`) or `W^M` (side `Right`).
    pub fn min_coset_reps(&self, rd: &RootDatum, side: Side) -> Vec<WeylElt> {
        rd.weyl_elements()
            .filter(|&x| match side {
                Side::Left => self.is_left_min(rd, x),
                Side::Right => self.is_right_min(rd, x),
            })
            .collect()
    }

    /// Splits `x = m · x'` with `m ∈ W_M` and `x'` shortest in `W_M x`.
    pub fn split_left(&self, rd: &RootDatum, x: WeylElt) -> (WeylElt, WeylElt) {
        let best = self
            .elements
            .iter()
            .map(|&m| rd.wmul(rd.winv(m), x))
            .min_by_key(|&y| (rd.wlength(y), y))
            .expect("W_M nonempty");
        (rd.wmul(x, rd.winv(best)), best)
    }

    /// Splits `x = x' · m` with `m ∈ W_M` and `x'` shortest in `x W_M`.
    pub fn split_right(&self, rd: &RootDatum, x: WeylElt) -> (WeylElt, WeylElt) {
        let best = self
            .elements
            .iter()
            .map(|&m| rd.wmul(x, m))
            .min_by_key(|&y| (rd.wlength(y), y))
            .expect("W_M nonempty");
        (best, rd.wmul(rd.winv(best), x))
    }

    pub fn describe(&self, rd: &RootDatum) -> String {
        match self.standard_subset(rd) {
            Some(s) if s.is_empty() => "T".to_string(),
            Some(s) if s.len() == rd.semisimple_rank() => "G".to_string(),
            Some(s) => format!(
                "M{{{}}}",
                s.iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join(",")
            ),
            None => {
                let pos: Vec<String> = self
                    .root_indices()
                    .filter(|&r| rd.root(r).positive)
                    .map(|r| format!("{:?}", rd.root(r).coeffs))
                    .collect();
                format!("M[{}]", pos.join(";"))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `W_M x W_{M'}` decomposed as `m · δ · m'` with `δ` its shortest element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubleCoset {
    pub m: WeylElt,
    pub delta: WeylElt,
    pub m_prime: WeylElt,
}

impl RootDatum {
    pub fn centralizer_levi_q(&self, mu: &[crate::lattice::Q]) -> Levi {
        let simple: Vec<usize> = (0..self.semisimple_rank())
            .filter(|&i| {
                num_traits::Zero::is_zero(&crate::lattice::dot_q(&self.simple_roots[i], mu))
            })
            .collect();
        Levi::standard(self, &simple)
    }

    /// `M_μ` for dominant `μ`: generated by the simple roots orthogonal to `μ`.
    pub fn centralizer_levi(&self, mu: &[i64]) -> Levi {
        let simple: Vec<usize> = (0..self.semisimple_rank())
            .filter(|&i| crate::lattice::dot(&self.simple_roots[i], mu) == 0)
            .collect();
        Levi::standard(self, &simple)
    }

    /// Full centralizer of an arbitrary coweight: all roots vanishing on it.
    pub fn centralizer_roots_q(&self, nu: &[crate::lattice::Q]) -> Levi {
        let set = (0..self.roots().len())
            .map(|r| num_traits::Zero::is_zero(&self.pairing_q(r, nu)))
            .collect();
        Levi::from_root_set(self, set)
    }

    /// `x_μ = w_0 w_{0,μ}`.
    pub fn x_mu(&self, mu: &[i64]) -> WeylElt {
        let m = self.centralizer_levi(mu);
        self.wmul(self.longest(), m.longest(self))
    }

    /// `^μW = σ^{-1}(^{M_μ}W)`.
    pub fn mu_w(&self, mu: &[i64]) -> Vec<WeylElt> {
        let m = self.centralizer_levi(mu);
        let mut out: Vec<WeylElt> = m
            .min_coset_reps(self, Side::Left)
            .into_iter()
            .map(|w| self.sigma_inv_w(w))
            .collect();
        out.sort_by_key(|&w| (self.wlength(w), w));
        out
    }

    /// Decomposes `x` along `W_M x W_{M'}`; the shortest element is asserted
    /// to be unique.
    pub fn double_coset(&self, m: &Levi, x: WeylElt, mp: &Levi) -> Result<DoubleCoset> {
        let mut coset: BTreeSet<(usize, WeylElt)> = BTreeSet::new();
        for &a in m.weyl_elements() {
            let ax = self.wmul(a, x);
            for &b in mp.weyl_elements() {
                let y = self.wmul(ax, b);
                coset.insert((self.wlength(y), y));
            }
        }
        let mut it = coset.iter();
        let &(l0, delta) = it.next().expect("double coset nonempty");
        if let Some(&(l1, _)) = it.next() {
            if l1 == l0 {
                return Err(Error::NotUnique(format!(
                    "shortest element of W_M {} W_M' is not unique",
                    self.word_string(x)
                )));
            }
        }
        for &a in m.weyl_elements() {
            let rest = self.wmul(self.wmul(self.winv(delta), self.winv(a)), x);
            if mp.contains_w(rest) {
                return Ok(DoubleCoset {
                    m: a,
                    delta,
                    m_prime: rest,
                });
            }
        }
        unreachable!("delta lies in the double coset")
    }
}
