use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{mat_mul, IMat};

/// Upper bound on the size of a Weyl group we are willing to tabulate.
pub const MAX_WEYL_ORDER: usize = 100_000;

/// Element of the finite Weyl group, as an index into the table of its datum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElt(pub(crate) u32);

impl WeylElt {
    pub const IDENTITY: WeylElt = WeylElt(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

/// Fully tabulated finite Weyl group: matrices on the cocharacter lattice,
/// reduced words, multiplication by simple reflections and the action on roots.
#[derive(Clone, Debug)]
pub(crate) struct WeylTable {
    pub mats: Vec<IMat>,
    pub lens: Vec<u32>,
    pub words: Vec<Vec<u8>>,
    pub lmul: Vec<Vec<u32>>,
    pub rmul: Vec<Vec<u32>>,
    pub inv: Vec<u32>,
    pub sigma: Vec<u32>,
    pub sigma_inv: Vec<u32>,
    pub root_perm: Vec<Vec<u16>>,
    pub index: HashMap<IMat, u32>,
    pub longest: u32,
}

impl WeylTable {
    /// Breadth-first enumeration from the identity. `refl` are the simple
    /// reflection matrices, `refl_roots[i][r]` the image of root `r` under `s_i`,
    /// `sigma_perm` the diagram automorphism on simple reflections.
    pub fn build(
        rank: usize,
        refl: &[IMat],
        refl_roots: &[Vec<u16>],
        nroots: usize,
        sigma_perm: &[usize],
    ) -> Result<Self> {
        let nsimple = refl.len();
        let id = crate::lattice::identity(rank);
        let mut mats = vec![id.clone()];
        let mut lens = vec![0u32];
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut root_perm: Vec<Vec<u16>> = vec![(0..nroots as u16).collect()];
        let mut index = HashMap::new();
        index.insert(id, 0u32);
        let mut lmul: Vec<Vec<u32>> = vec![Vec::new(); nsimple];
        let mut queue = VecDeque::from([0u32]);
        while let Some(w) = queue.pop_front() {
            for i in 0..nsimple {
                let m = mat_mul(&refl[i], &mats[w as usize]);
                let idx = match index.get(&m) {
                    Some(&k) => k,
                    None => {
                        let k = mats.len() as u32;
                        if mats.len() >= MAX_WEYL_ORDER {
                            return Err(Error::WeylTooLarge {
                                limit: MAX_WEYL_ORDER,
                            });
                        }
                        index.insert(m.clone(), k);
                        mats.push(m);
                        lens.push(lens[w as usize] + 1);
                        let mut word = vec![i as u8];
                        word.extend_from_slice(&words[w as usize]);
                        words.push(word);
                        let rp = root_perm[w as usize]
                            .iter()
                            .map(|&r| refl_roots[i][r as usize])
                            .collect();
                        root_perm.push(rp);
                        queue.push_back(k);
                        k
                    }
                };
                let row = &mut lmul[i];
                if row.len() <= w as usize {
                    row.resize(w as usize + 1, u32::MAX);
                }
                row[w as usize] = idx;
            }
        }
        let n = mats.len();
        for row in lmul.iter_mut() {
            row.resize(n, u32::MAX);
        }
        let mut rmul = vec![vec![0u32; n]; nsimple];
        for (i, row) in rmul.iter_mut().enumerate() {
            for (w, slot) in row.iter_mut().enumerate() {
                let m = mat_mul(&mats[w], &refl[i]);
                *slot = index[&m];
            }
        }
        let apply_word = |word: &mut dyn Iterator<Item = usize>| {
            let mut x = 0u32;
            for a in word {
                x = lmul[a][x as usize];
            }
            x
        };
        let inv: Vec<u32> = words
            .iter()
            .map(|wd| apply_word(&mut wd.iter().map(|&a| a as usize)))
            .collect();
        let sigma: Vec<u32> = words
            .iter()
            .map(|wd| apply_word(&mut wd.iter().rev().map(|&a| sigma_perm[a as usize])))
            .collect();
        let mut sigma_inv = vec![0u32; n];
        for (w, &s) in sigma.iter().enumerate() {
            sigma_inv[s as usize] = w as u32;
        }
        let longest = (0..n as u32).max_by_key(|&w| lens[w as usize]).unwrap_or(0);
        Ok(WeylTable {
            mats,
            lens,
            words,
            lmul,
            rmul,
            inv,
            sigma,
            sigma_inv,
            root_perm,
            index,
            longest,
        })
    }

    pub fn order(&self) -> usize {
        self.mats.len()
    }

    pub fn mul(&self, u: WeylElt, v: WeylElt) -> WeylElt {
        let wu = &self.words[u.index()];
        let wv = &self.words[v.index()];
        if wu.len() <= wv.len() {
            let mut x = v.0;
            for &a in wu.iter().rev() {
                x = self.lmul[a as usize][x as usize];
            }
            WeylElt(x)
        } else {
            let mut x = u.0;
            for &a in wv.iter() {
                x = self.rmul[a as usize][x as usize];
            }
            WeylElt(x)
        }
    }
}

/// Displays `w` as a product of simple reflections, 1-based (`s1*s2`), or `e`.
pub struct WordDisplay<'a>(pub &'a [u8]);

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "s{}", a + 1)?;
        }
        Ok(())
    }
}
