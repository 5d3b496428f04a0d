//! Kottwitz invariants of elements of `W̃`: `κ` in `π_1(G)_Γ`, Newton
//! points, and the partial order on `B(G)`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::affine::AffineElt;
use crate::error::{Error, Result};
use crate::lattice::{self, dot, format_q, parse_q, Q};
use crate::root_datum::{format_qcoweight, QCoweight, RootDatum};

/// Coordinates of an element of `π_1(G)_Γ`: free coordinates first, then
/// torsion coordinates reduced into `[0, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KappaClass(pub Vec<i64>);

/// Dominant rational coweight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NewtonPoint(pub QCoweight);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SigmaClass {
    pub kappa: KappaClass,
    pub newton: NewtonPoint,
}

impl Serialize for NewtonPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(format_q).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NewtonPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter()
            .map(|s| {
                parse_q(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational `{s}`")))
            })
            .collect::<std::result::Result<_, _>>()
            .map(NewtonPoint)
    }
}

impl fmt::Display for NewtonPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", format_qcoweight(&self.0))
    }
}

impl fmt::Display for KappaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

impl fmt::Display for SigmaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "κ={} ν={}", self.kappa, self.newton)
    }
}

impl RootDatum {
    /// Image of a cocharacter in `π_1(G)_Γ`.
    pub fn kappa_of_coweight(&self, lam: &[i64]) -> KappaClass {
        KappaClass(
            self.kappa
                .rows
                .iter()
                .zip(&self.kappa.moduli)
                .map(|(row, &d)| {
                    let v = dot(row, lam);
                    if d > 1 {
                        v.rem_euclid(d)
                    } else {
                        v
                    }
                })
                .collect(),
        )
    }

    /// Orders of the cyclic factors of `π_1(G)_Γ` (0 for `Z`).
    pub fn kappa_moduli(&self) -> &[i64] {
        &self.kappa.moduli
    }

    pub fn kappa(&self, x: &AffineElt) -> KappaClass {
        self.kappa_of_coweight(&x.lam)
    }

    /// Twisted power `x σ(x) ⋯ σ^{n-1}(x)`.
    pub fn twisted_power(&self, x: &AffineElt, n: usize) -> AffineElt {
        let mut acc = self.aid();
        let mut cur = x.clone();
        for _ in 0..n {
            acc = self.amul(&acc, &cur);
            cur = self.asigma(&cur);
        }
        acc
    }

    /// Smallest `n` with `σ^n = 1` and the twisted `n`-th power a translation.
    pub fn straightening_order(&self, x: &AffineElt) -> Result<(usize, AffineElt)> {
        let ord = self.sigma_order();
        let cap = self.weyl_order() * ord;
        let mut acc = self.aid();
        let mut cur = x.clone();
        for n in 1..=cap {
            acc = self.amul(&acc, &cur);
            cur = self.asigma(&cur);
            if n % ord == 0 && acc.w.is_identity() {
                return Ok((n, acc));
            }
        }
        Err(Error::IterationCapExceeded {
            what: "Newton point".into(),
            cap,
        })
    }

    pub fn newton_point(&self, x: &AffineElt) -> NewtonPoint {
        let (n, p) = self
            .straightening_order(x)
            .expect("twisted powers of a finite-order part become translations");
        let avg: QCoweight = p.lam.iter().map(|&a| Q::new(a, n as i64)).collect();
        NewtonPoint(self.dominant_rep_q(&avg).0)
    }

    pub fn class_of(&self, x: &AffineElt) -> SigmaClass {
        SigmaClass {
            kappa: self.kappa(x),
            newton: self.newton_point(x),
        }
    }

    /// Coefficients of `δ` in the simple coroots, if `δ` lies in their span.
    pub fn coroot_coefficients(&self, delta: &[Q]) -> Option<Vec<Q>> {
        let ns = self.semisimple_rank();
        if ns == 0 {
            return delta.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        let a: Vec<Vec<Q>> = (0..ns)
            .map(|i| (0..ns).map(|j| Q::from_integer(self.cartan()[i][j])).collect())
            .collect();
        let b: Vec<Q> = (0..ns)
            .map(|i| lattice::dot_q(&self.simple_roots()[i], delta))
            .collect();
        let c = lattice::solve_q(&a, &b)?;
        let mut resid = delta.to_vec();
        for (j, cj) in c.iter().enumerate() {
            for (k, &x) in self.simple_coroots()[j].iter().enumerate() {
                resid[k] -= cj * Q::from_integer(x);
            }
        }
        resid.iter().all(|x| x.is_zero()).then_some(c)
    }

    /// `ν_1 ⪯ ν_2` on dominant rational coweights.
    pub fn newton_leq(&self, a: &NewtonPoint, b: &NewtonPoint) -> bool {
        let delta: QCoweight = b.0.iter().zip(&a.0).map(|(x, y)| x - y).collect();
        self.coroot_coefficients(&delta)
            .is_some_and(|c| c.iter().all(|x| !x.is_negative()))
    }

    /// `[b_1] ⪯ [b_2]`.
    pub fn leq_b(&self, c1: &SigmaClass, c2: &SigmaClass) -> bool {
        c1.kappa == c2.kappa && self.newton_leq(&c1.newton, &c2.newton)
    }

    /// The unique maximum of a nonempty set of classes.
    pub fn max_class(&self, set: &[SigmaClass]) -> Result<SigmaClass> {
        let mut distinct: Vec<&SigmaClass> = Vec::new();
        for c in set {
            if !distinct.contains(&c) {
                distinct.push(c);
            }
        }
        distinct
            .iter()
            .find(|m| distinct.iter().all(|c| self.leq_b(c, m)))
            .map(|m| (*m).clone())
            .ok_or(Error::NoUniqueMaximum(distinct.len()))
    }

    /// Whether `σ` fixes a rational coweight.
    pub fn sigma_fixes(&self, nu: &[Q]) -> bool {
        self.sigma_coweight_q(nu) == nu
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::{RawDatum, WeylElt};
    use proptest::prelude::*;

    fn nq(v: &[(i64, i64)]) -> NewtonPoint {
        NewtonPoint(v.iter().map(|&(a, b)| Q::new(a, b)).collect())
    }

    fn ni(v: &[i64]) -> NewtonPoint {
        NewtonPoint(v.iter().map(|&a| Q::from_integer(a)).collect())
    }

    #[test]
    fn kappa_examples() {
        let rd = RootDatum::gl(2).unwrap();
        assert_eq!(rd.kappa(&AffineElt::translation(vec![1, 0])), KappaClass(vec![1]));
        assert_eq!(rd.kappa(&rd.tau(&[1, 0]).unwrap()), KappaClass(vec![1]));
        let rd = RootDatum::sl(2).unwrap();
        assert_eq!(rd.kappa(&AffineElt::translation(vec![3])), KappaClass(vec![]));
        let rd = RootDatum::gsp(2).unwrap();
        assert_eq!(rd.kappa(&rd.tau(&[1, 1, 1]).unwrap()), KappaClass(vec![1]));
    }

    #[test]
    fn kappa_with_torsion() {
        // PGL_2: X_* = Z, coroot 2
        let raw = RawDatum {
            name: Some("PGL2".into()),
            rank: 1,
            simple_roots: vec![vec![1]],
            simple_coroots: vec![vec![2]],
            sigma_perm: None,
            sigma_lattice: None,
        };
        let rd = RootDatum::from_raw(raw).unwrap();
        assert_eq!(rd.kappa_moduli(), &[2]);
        assert_eq!(rd.kappa(&AffineElt::translation(vec![3])), KappaClass(vec![1]));
        assert_eq!(rd.kappa(&AffineElt::translation(vec![-4])), KappaClass(vec![0]));
    }

    #[test]
    fn kappa_coinvariants_of_unitary() {
        // σ(λ) = -w_0 λ on GL_3: coinvariants of Z under -1 are Z/2
        let raw = RawDatum {
            name: None,
            rank: 3,
            simple_roots: vec![vec![1, -1, 0], vec![0, 1, -1]],
            simple_coroots: vec![vec![1, -1, 0], vec![0, 1, -1]],
            sigma_perm: Some(vec![1, 0]),
            sigma_lattice: Some(vec![vec![0, 0, -1], vec![0, -1, 0], vec![-1, 0, 0]]),
        };
        let rd = RootDatum::from_raw(raw).unwrap();
        assert_eq!(rd.kappa_moduli(), &[2]);
        let k1 = rd.kappa_of_coweight(&[1, 0, 0]);
        let k2 = rd.kappa_of_coweight(&[0, 0, 1]);
        assert_eq!(k1, k2);
        assert_ne!(k1, rd.kappa_of_coweight(&[0, 0, 0]));
    }

    #[test]
    fn newton_examples() {
        let rd = RootDatum::gl(2).unwrap();
        assert_eq!(rd.newton_point(&AffineElt::translation(vec![1, 0])), ni(&[1, 0]));
        assert_eq!(rd.newton_point(&rd.tau(&[1, 0]).unwrap()), nq(&[(1, 2), (1, 2)]));
        let rd = RootDatum::gl(3).unwrap();
        let x = AffineElt {
            w: rd.simple_reflection(0),
            lam: vec![1, 0, 0],
        };
        assert_eq!(rd.newton_point(&x), nq(&[(1, 2), (1, 2), (0, 1)]));
    }

    #[test]
    fn newton_independent_of_power() {
        let rd = RootDatum::gl(3).unwrap();
        let x = AffineElt {
            w: rd.from_word(&[0, 1]).unwrap(),
            lam: vec![2, -1, 0],
        };
        let (n, p) = rd.straightening_order(&x).unwrap();
        let p2 = rd.twisted_power(&x, 2 * n);
        let a: QCoweight = p.lam.iter().map(|&v| Q::new(v, n as i64)).collect();
        let b: QCoweight = p2.lam.iter().map(|&v| Q::new(v, 2 * n as i64)).collect();
        assert_eq!(rd.dominant_rep_q(&a).0, rd.dominant_rep_q(&b).0);
    }

    #[test]
    fn leq_b_examples() {
        let rd = RootDatum::gl(2).unwrap();
        let ss = SigmaClass { kappa: KappaClass(vec![1]), newton: nq(&[(1, 2), (1, 2)]) };
        let ord = SigmaClass { kappa: KappaClass(vec![1]), newton: ni(&[1, 0]) };
        assert!(rd.leq_b(&ss, &ss));
        assert!(rd.leq_b(&ss, &ord));
        assert!(!rd.leq_b(&ord, &ss));
        let other = SigmaClass { kappa: KappaClass(vec![2]), newton: ni(&[1, 1]) };
        assert!(!rd.leq_b(&ss, &other));
    }

    #[test]
    fn max_class_examples() {
        let rd = RootDatum::gl(2).unwrap();
        let t = rd.tau(&[1, 0]).unwrap();
        let st = rd.w_tau(rd.simple_reflection(0), &[1, 0]);
        let m = rd.max_class(&[rd.class_of(&t), rd.class_of(&st)]).unwrap();
        assert_eq!(m.newton, ni(&[1, 0]));
        assert_eq!(rd.max_class(&[rd.class_of(&t)]).unwrap(), rd.class_of(&t));
        // crossing slope vectors in GL_4 with equal κ
        let rd = RootDatum::gl(4).unwrap();
        let a = SigmaClass { kappa: KappaClass(vec![4]), newton: nq(&[(3, 1), (1, 1), (0, 1), (0, 1)]) };
        let b = SigmaClass { kappa: KappaClass(vec![4]), newton: nq(&[(2, 1), (2, 1), (1, 1), (-1, 1)]) };
        assert!(!rd.leq_b(&a, &b) && !rd.leq_b(&b, &a));
        assert!(matches!(rd.max_class(&[a, b]), Err(Error::NoUniqueMaximum(2))));
    }

    #[test]
    fn class_of_examples() {
        let rd = RootDatum::gl(2).unwrap();
        let c = rd.class_of(&AffineElt::translation(vec![1, 1]));
        assert_eq!(c, SigmaClass { kappa: KappaClass(vec![2]), newton: ni(&[1, 1]) });
        assert_eq!(rd.class_of(&rd.aid()), SigmaClass { kappa: KappaClass(vec![0]), newton: ni(&[0, 0]) });
    }

    #[test]
    fn json_shape() {
        let c = SigmaClass { kappa: KappaClass(vec![1]), newton: nq(&[(1, 2), (1, 2)]) };
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"kappa":[1],"newton":["1/2","1/2"]}"#);
        let back: SigmaClass = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    fn arb_gl3() -> impl Strategy<Value = AffineElt> {
        (0u32..6, proptest::collection::vec(-3i64..4, 3))
            .prop_map(|(w, lam)| AffineElt { w: WeylElt(w), lam })
    }

    proptest! {
        #[test]
        fn class_invariant_under_sigma_conjugation(x in arb_gl3(), g in arb_gl3()) {
            let rd = RootDatum::gl(3).unwrap();
            prop_assert_eq!(rd.class_of(&rd.sigma_conj(&x, &g)), rd.class_of(&x));
        }

        #[test]
        fn kappa_ignores_finite_part(x in arb_gl3(), w in 0u32..6) {
            let rd = RootDatum::gsp(2).unwrap();
            let lam = vec![x.lam[0], x.lam[1], x.lam[2]];
            let y = AffineElt { w: WeylElt(w % 8), lam: lam.clone() };
            prop_assert_eq!(rd.kappa(&y), rd.kappa(&AffineElt::translation(lam)));
        }

        #[test]
        fn kappa_well_defined_mod_coroots(lam in proptest::collection::vec(-3i64..4, 3), c in proptest::collection::vec(-3i64..4, 2)) {
            let rd = RootDatum::gsp(2).unwrap();
            let mut mu = lam.clone();
            for (j, cj) in c.iter().enumerate() {
                for k in 0..3 {
                    mu[k] += cj * rd.simple_coroots()[j][k];
                }
            }
            prop_assert_eq!(rd.kappa_of_coweight(&mu), rd.kappa_of_coweight(&lam));
        }

        #[test]
        fn newton_scales_with_powers(x in arb_gl3(), k in 1usize..5) {
            let rd = RootDatum::gl(3).unwrap();
            let nu = rd.newton_point(&x);
            let xk = rd.twisted_power(&x, k);
            let nuk = rd.newton_point(&xk);
            let scaled: QCoweight = nu.0.iter().map(|a| a * Q::from_integer(k as i64)).collect();
            prop_assert_eq!(nuk.0, scaled);
        }

        #[test]
        fn newton_is_sigma_invariant_and_dominant(x in arb_gl3()) {
            let rd = RootDatum::gl(3).unwrap();
            let nu = rd.newton_point(&x);
            prop_assert!(rd.is_dominant_q(&nu.0));
            prop_assert!(rd.sigma_fixes(&nu.0));
        }

        #[test]
        fn leq_b_is_partial_order(a in arb_gl3(), b in arb_gl3(), c in arb_gl3()) {
            let rd = RootDatum::gl(3).unwrap();
            let (ca, cb, cc) = (rd.class_of(&a), rd.class_of(&b), rd.class_of(&c));
            prop_assert!(rd.leq_b(&ca, &ca));
            if rd.leq_b(&ca, &cb) && rd.leq_b(&cb, &ca) {
                prop_assert_eq!(&ca, &cb);
            }
            if rd.leq_b(&ca, &cb) && rd.leq_b(&cb, &cc) {
                prop_assert!(rd.leq_b(&ca, &cc));
            }
        }
    }
}
