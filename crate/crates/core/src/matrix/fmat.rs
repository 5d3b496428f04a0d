//! Matrices over the residue field `F_{q^m}`.

use super::fq::{Fe, Field};
use crate::root_datum::{Levi, RootDatum, WeylElt};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FMat {
    pub n: usize,
    pub a: Vec<Fe>,
}

impl FMat {
    pub fn zero(n: usize) -> FMat {
        FMat { n, a: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> FMat {
        let mut m = FMat::zero(n);
        for i in 0..n {
            m.a[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Fe) {
        self.a[i * self.n + j] = x;
    }

    /// Permutation matrix of `w ∈ W(GL_n)`, acting on coweights as `w`.
    pub fn perm(rd: &RootDatum, w: WeylElt) -> FMat {
        let p = rd.weyl_matrix(w);
        let n = p.len();
        let mut m = FMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                if p[i][j] != 0 {
                    m.set(i, j, 1);
                }
            }
        }
        m
    }

    /// The Weyl element of a monomial matrix.
    pub fn monomial_weyl(&self, rd: &RootDatum) -> Option<WeylElt> {
        let n = self.n;
        let mut p = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if self.get(i, j) != 0 {
                    p[i][j] = 1;
                }
            }
        }
        rd.weyl_from_matrix(&p)
    }

    pub fn mul(&self, f: &Field, o: &FMat) -> FMat {
        let n = self.n;
        let mut out = FMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let y = o.get(k, j);
                    if y != 0 {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(x, y)));
                    }
                }
            }
        }
        out
    }

    pub fn mul_all(f: &Field, ms: &[&FMat]) -> FMat {
        let mut acc = FMat::identity(ms[0].n);
        for m in ms {
            acc = acc.mul(f, m);
        }
        acc
    }

    pub fn map(&self, g: impl Fn(Fe) -> Fe) -> FMat {
        FMat {
            n: self.n,
            a: self.a.iter().map(|&x| g(x)).collect(),
        }
    }

    pub fn frob(&self, f: &Field) -> FMat {
        self.map(|x| f.frob(x))
    }

    pub fn frob_inv(&self, f: &Field) -> FMat {
        self.map(|x| f.frob_inv(x))
    }

    /// Gauss-Jordan inverse; `None` if singular.
    pub fn inv(&self, f: &Field) -> Option<FMat> {
        let n = self.n;
        let mut a = self.clone();
        let mut b = FMat::identity(n);
        for c in 0..n {
            let r = (c..n).find(|&r| a.get(r, c) != 0)?;
            for j in 0..n {
                a.a.swap(r * n + j, c * n + j);
                b.a.swap(r * n + j, c * n + j);
            }
            let pi = f.inv(a.get(c, c));
            for j in 0..n {
                a.set(c, j, f.mul(a.get(c, j), pi));
                b.set(c, j, f.mul(b.get(c, j), pi));
            }
            for i in 0..n {
                let x = a.get(i, c);
                if i != c && x != 0 {
                    for j in 0..n {
                        a.set(i, j, f.sub(a.get(i, j), f.mul(x, a.get(c, j))));
                        b.set(i, j, f.sub(b.get(i, j), f.mul(x, b.get(c, j))));
                    }
                }
            }
        }
        Some(b)
    }

    pub fn is_upper(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == 0))
    }

    /// Zeroes entries outside the pattern.
    pub fn project(&self, pat: &[bool]) -> FMat {
        FMat {
            n: self.n,
            a: self.a.iter().zip(pat).map(|(&x, &k)| if k { x } else { 0 }).collect(),
        }
    }

    pub fn fits(&self, pat: &[bool]) -> bool {
        self.a.iter().zip(pat).all(|(&x, &k)| k || x == 0)
    }

    /// Bruhat decomposition `self = u1 · n_v · r` with `u1` upper
    /// unitriangular and `r` upper triangular.
    pub fn bruhat(&self, f: &Field, rd: &RootDatum) -> Option<(FMat, WeylElt, FMat)> {
        let n = self.n;
        let mut a = self.clone();
        let mut linv = FMat::identity(n);
        let mut rinv = FMat::identity(n);
        let mut used = vec![false; n];
        for r in (0..n).rev() {
            let c = (0..n).find(|&c| !used[c] && a.get(r, c) != 0)?;
            used[c] = true;
            let pi = f.inv(a.get(r, c));
            for i in 0..r {
                let x = a.get(i, c);
                if x != 0 {
                    let m = f.mul(x, pi);
                    for j in 0..n {
                        a.set(i, j, f.sub(a.get(i, j), f.mul(m, a.get(r, j))));
                    }
                    for k in 0..n {
                        linv.set(k, r, f.add(linv.get(k, r), f.mul(m, linv.get(k, i))));
                    }
                }
            }
            for j in c + 1..n {
                let x = a.get(r, j);
                if x != 0 {
                    let m = f.mul(x, pi);
                    for i in 0..n {
                        a.set(i, j, f.sub(a.get(i, j), f.mul(m, a.get(i, c))));
                    }
                    for k in 0..n {
                        rinv.set(c, k, f.add(rinv.get(c, k), f.mul(m, rinv.get(j, k))));
                    }
                }
            }
        }
        let v = a.monomial_weyl(rd)?;
        let pv = FMat::perm(rd, v);
        let rest = pv.inv(f)?.mul(f, &a).mul(f, &rinv);
        Some((linv, v, rest))
    }
}

/// Entry pattern of a Levi of `GL_n`: the diagonal and the root entries.
pub fn levi_pattern(rd: &RootDatum, m: &Levi) -> Vec<bool> {
    let n = rd.rank();
    let mut pat = vec![false; n * n];
    for i in 0..n {
        pat[i * n + i] = true;
    }
    for r in m.root_indices() {
        let (i, j) = root_entry(rd, r);
        pat[i * n + j] = true;
    }
    pat
}

/// Matrix position `(i, j)` of the root `e_i - e_j`.
pub fn root_entry(rd: &RootDatum, r: usize) -> (usize, usize) {
    let cv = &rd.root(r).covector;
    let i = cv.iter().position(|&x| x == 1).expect("GL root");
    let j = cv.iter().position(|&x| x == -1).expect("GL root");
    (i, j)
}

/// Entry pattern of a set of roots (no diagonal).
pub fn roots_pattern(rd: &RootDatum, roots: &[bool]) -> Vec<bool> {
    let n = rd.rank();
    let mut pat = vec![false; n * n];
    for (r, &b) in roots.iter().enumerate() {
        if b {
            let (i, j) = root_entry(rd, r);
            pat[i * n + j] = true;
        }
    }
    pat
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn permutation_matrices_act_on_coweights() {
        let rd = RootDatum::gl(3).unwrap();
        let f = Field::new(2, 1).unwrap();
        for w in rd.weyl_elements() {
            for v in rd.weyl_elements() {
                let pw = FMat::perm(&rd, w);
                assert_eq!(pw.mul(&f, &FMat::perm(&rd, v)), FMat::perm(&rd, rd.wmul(w, v)));
            }
            assert_eq!(FMat::perm(&rd, w).monomial_weyl(&rd), Some(w));
        }
    }

    #[test]
    fn bruhat_decomposition_recombines() {
        let rd = RootDatum::gl(4).unwrap();
        let f = Field::new(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..400 {
            let m = FMat {
                n: 4,
                a: (0..16).map(|_| rng.gen_range(0..3)).collect(),
            };
            let Some((u, v, r)) = m.bruhat(&f, &rd) else {
                assert!(m.inv(&f).is_none());
                continue;
            };
            assert!(u.is_upper() && r.is_upper());
            assert!((0..4).all(|i| u.get(i, i) == 1));
            assert_eq!(FMat::mul_all(&f, &[&u, &FMat::perm(&rd, v), &r]), m);
            seen.insert(v);
        }
        assert!(seen.len() > 12);
    }
}
