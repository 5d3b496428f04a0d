use super::*;
use crate::root_datum::Levi;
use proptest::prelude::*;

/// Counts hyperplanes `<α, v> = k` separating the base alcove from `x·A`.
fn separating_hyperplanes(rd: &RootDatum, x: &AffineElt) -> usize {
    let p = rd.base_point();
    let xp = rd.act_point(x, &p);
    rd.positive_roots()
        .map(|r| {
            let a = rd.pairing_q(r, &p);
            let b = rd.pairing_q(r, &xp);
            // integers strictly between a and b
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let lo_i = lo.floor().to_integer() + 1;
            let hi_i = hi.ceil().to_integer() - 1;
            (hi_i - lo_i + 1).max(0) as usize
        })
        .sum()
}

fn all_small(rd: &RootDatum, bound: i64) -> Vec<AffineElt> {
    let n = rd.rank();
    let mut lams: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        lams = lams
            .into_iter()
            .flat_map(|v| {
                (-bound..=bound).map(move |a| {
                    let mut v = v.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    let mut out = vec![];
    for lam in lams {
        for w in rd.weyl_elements() {
            out.push(AffineElt { w, lam: lam.clone() });
        }
    }
    out
}

#[test]
fn length_examples() {
    let rd = RootDatum::gl(2).unwrap();
    assert_eq!(rd.alength(&AffineElt::translation(vec![1, 0])), 1);
    assert_eq!(rd.alength(&rd.aid()), 0);
    let tau = rd.tau(&[1, 0]).unwrap();
    assert_eq!(tau, AffineElt { w: rd.simple_reflection(0), lam: vec![1, 0] });
    assert_eq!(rd.alength(&tau), 0);
}

#[test]
fn length_counts_separating_hyperplanes() {
    for rd in [RootDatum::gl(3).unwrap(), RootDatum::gsp(2).unwrap(), RootDatum::sl(3).unwrap()] {
        for x in all_small(&rd, 2) {
            assert_eq!(rd.alength(&x), separating_hyperplanes(&rd, &x), "{}", rd.format_affine(&x));
        }
    }
}

#[test]
fn length_counts_inverted_affine_roots() {
    let rd = RootDatum::gl(3).unwrap();
    for x in all_small(&rd, 1) {
        let mut count = 0;
        for r in 0..rd.roots().len() {
            for k in -6..=6 {
                if rd.affine_root_positive(r, k) {
                    let (r2, k2) = rd.act_affine_root(&x, r, k);
                    if !rd.affine_root_positive(r2, k2) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(rd.alength(&x), count);
    }
}

#[test]
fn affine_simple_reflections_have_length_one() {
    for rd in [RootDatum::gl(3).unwrap(), RootDatum::gsp(3).unwrap()] {
        for s in rd.affine_simples() {
            let x = rd.simple_affine(s);
            assert_eq!(rd.alength(&x), 1);
            assert_eq!(rd.amul(&x, &x), rd.aid());
        }
    }
}

#[test]
fn length_zero_iff_alcove_preserved() {
    let rd = RootDatum::gl(3).unwrap();
    let p = rd.base_point();
    for x in all_small(&rd, 2) {
        let xp = rd.act_point(&x, &p);
        let inside = rd.positive_roots().all(|r| {
            let v = rd.pairing_q(r, &xp);
            v > Q::from_integer(0) && v < Q::from_integer(1)
        });
        assert_eq!(rd.alength(&x) == 0, inside);
    }
}

#[test]
fn tau_examples() {
    let rd = RootDatum::gl(2).unwrap();
    let t = rd.tau(&[1, 1]).unwrap();
    assert_eq!(t, AffineElt::translation(vec![1, 1]));
    let rd = RootDatum::gl(3).unwrap();
    let t = rd.tau(&[1, 1, 0]).unwrap();
    assert_eq!(rd.alength(&t), 0);
    assert_eq!(rd.tau(&[2, 1, 0]).map(|t| rd.alength(&t)).unwrap(), 1);
    assert!(rd.tau(&[0, 1, 0]).is_err());
}

#[test]
fn tau_passes_verification_for_many_mu() {
    for rd in [RootDatum::gl(4).unwrap(), RootDatum::gsp(3).unwrap()] {
        let top = match rd.kind() {
            crate::root_datum::GroupKind::GL(_) => vec![2, 1, 0, 0],
            _ => vec![2, 1, 1, 2],
        };
        for mu in rd.dominant_below(&top) {
            rd.tau(&mu).unwrap();
        }
    }
}

#[test]
fn omega_examples() {
    let rd = RootDatum::gl(2).unwrap();
    let d = rd.omega_decompose(&rd.aid());
    assert!(d.coxeter.is_empty() && d.omega == rd.aid());
    let c = AffineElt::translation(vec![1, 1]);
    let d = rd.omega_decompose(&c);
    assert!(d.coxeter.is_empty() && d.omega == c);
    let e = AffineElt::translation(vec![1, 0]);
    let d = rd.omega_decompose(&e);
    assert_eq!(d.coxeter.len(), 1);
    assert_eq!(rd.alength(&d.omega), 0);
    assert_eq!(rd.recombine(&d), e);
    // ε^{(1,0)} = s·τ
    assert_eq!(d.omega, rd.tau(&[1, 0]).unwrap());
}

#[test]
fn omega_recombines() {
    let rd = RootDatum::gsp(2).unwrap();
    for x in all_small(&rd, 1) {
        let d = rd.omega_decompose(&x);
        assert_eq!(d.coxeter.len(), rd.alength(&x));
        assert_eq!(rd.alength(&d.omega), 0);
        assert_eq!(rd.recombine(&d), x);
    }
}

#[test]
fn bruhat_examples() {
    let rd = RootDatum::gl(2).unwrap();
    let t = rd.tau(&[1, 0]).unwrap();
    let st = rd.w_tau(rd.simple_reflection(0), &[1, 0]);
    assert!(rd.bruhat_leq(&t, &t));
    assert!(rd.bruhat_leq(&t, &st));
    assert!(!rd.bruhat_leq(&st, &t));
    assert!(!rd.bruhat_leq(&rd.aid(), &t));
}

#[test]
fn lower_cone_examples() {
    let rd = RootDatum::gl(2).unwrap();
    let t = rd.tau(&[1, 0]).unwrap();
    assert_eq!(rd.lower_cone(&t, DEFAULT_BUDGET).unwrap(), vec![t.clone()]);
    let st = rd.w_tau(rd.simple_reflection(0), &[1, 0]);
    let mut cone = rd.lower_cone(&st, DEFAULT_BUDGET).unwrap();
    cone.sort();
    let mut expect = vec![t, st];
    expect.sort();
    assert_eq!(cone, expect);
    let big = AffineElt::translation(vec![7, 0]);
    assert!(matches!(rd.lower_cone(&big, 8), Err(Error::BudgetExceeded { .. })));
}

#[test]
fn lower_cone_matches_bruhat_filter() {
    let rd = RootDatum::gl(3).unwrap();
    let pool = all_small(&rd, 1);
    for x in pool.iter().filter(|x| rd.alength(x) == 3).take(20) {
        let cone: BTreeSet<AffineElt> = rd.lower_cone(x, DEFAULT_BUDGET).unwrap().into_iter().collect();
        assert!(cone.len() <= 8);
        for y in &pool {
            assert_eq!(cone.contains(y), rd.bruhat_leq(y, x));
        }
        for y in &cone {
            assert!(rd.bruhat_leq(y, x));
        }
    }
}

#[test]
fn bruhat_is_partial_order_on_cones() {
    let rd = RootDatum::gsp(2).unwrap();
    let x = rd.w_tau(rd.longest(), &[2, 1, 2]);
    let cone = rd.lower_cone(&x, DEFAULT_BUDGET).unwrap();
    for a in &cone {
        assert!(rd.bruhat_leq(a, a));
        for b in &cone {
            if a != b && rd.bruhat_leq(a, b) {
                assert!(!rd.bruhat_leq(b, a));
            }
            for c in cone.iter().take(10) {
                if rd.bruhat_leq(a, b) && rd.bruhat_leq(b, c) {
                    assert!(rd.bruhat_leq(a, c));
                }
            }
        }
    }
}

#[test]
fn sigma_conj_examples() {
    let rd = RootDatum::gl(2).unwrap();
    let x = rd.tau(&[1, 0]).unwrap();
    assert_eq!(rd.sigma_conj(&x, &rd.aid()), x);
    let s = rd.aweyl(rd.simple_reflection(0));
    let e = AffineElt::translation(vec![3, 1]);
    assert_eq!(rd.sigma_conj(&e, &s), AffineElt::translation(vec![1, 3]));
    let y = rd.sigma_conj(&x, &s);
    assert_eq!(y, AffineElt { w: rd.simple_reflection(0), lam: vec![0, 1] });
}

#[test]
fn conj_dominates_trivial_levi() {
    let rd = RootDatum::gl(2).unwrap();
    let x = rd.tau(&[1, 0]).unwrap();
    let t = Levi::torus(&rd);
    assert_eq!(rd.conj_dominates(&x, &x, &t), (true, true));
}

#[test]
fn demazure_set_examples() {
    let rd = RootDatum::gl(2).unwrap();
    let s = rd.aweyl(rd.simple_reflection(0));
    let set = rd.demazure_set(&s, &s);
    assert_eq!(set, BTreeSet::from([rd.aid(), s.clone()]));
    let set = rd.demazure_set(&s, &rd.aid());
    assert_eq!(set, BTreeSet::from([s]));
}

fn arb_gl3() -> impl Strategy<Value = AffineElt> {
    (0u32..6, proptest::collection::vec(-2i64..3, 3)).prop_map(|(w, lam)| AffineElt { w: WeylElt(w), lam })
}

proptest! {
    #[test]
    fn product_associative(a in arb_gl3(), b in arb_gl3(), c in arb_gl3()) {
        let rd = RootDatum::gl(3).unwrap();
        prop_assert_eq!(rd.amul(&rd.amul(&a, &b), &c), rd.amul(&a, &rd.amul(&b, &c)));
        prop_assert_eq!(rd.amul(&a, &rd.ainv(&a)), rd.aid());
    }

    #[test]
    fn point_action_is_action(a in arb_gl3(), b in arb_gl3()) {
        let rd = RootDatum::gl(3).unwrap();
        let p = rd.base_point();
        prop_assert_eq!(rd.act_point(&rd.amul(&a, &b), &p), rd.act_point(&a, &rd.act_point(&b, &p)));
    }

    #[test]
    fn length_zero_omega_preserves_length(a in arb_gl3(), b in arb_gl3()) {
        let rd = RootDatum::gl(3).unwrap();
        let om = rd.omega_part(&b);
        prop_assert_eq!(rd.alength(&rd.amul(&a, &om)), rd.alength(&a));
        prop_assert_eq!(rd.alength(&rd.amul(&om, &a)), rd.alength(&a));
    }

    #[test]
    fn length_of_inverse(a in arb_gl3()) {
        let rd = RootDatum::gl(3).unwrap();
        prop_assert_eq!(rd.alength(&rd.ainv(&a)), rd.alength(&a));
    }
}
