use super::*;
use crate::affine::DEFAULT_BUDGET;
use crate::matrix::newton_matrix;

fn newton(v: &[(i64, i64)]) -> NewtonPoint {
    NewtonPoint(v.iter().map(|&(a, b)| Q::new(a, b)).collect())
}

fn ty(w: WeylElt, mu: &[i64]) -> TruncationType {
    TruncationType { w, mu: mu.to_vec() }
}

fn configs() -> Vec<(RootDatum, Vec<i64>)> {
    let gsp = RootDatum::gsp(2).unwrap();
    let siegel = gsp.default_mu();
    vec![
        (RootDatum::gl(2).unwrap(), vec![1, 0]),
        (RootDatum::gl(3).unwrap(), vec![1, 1, 0]),
        (RootDatum::gl(3).unwrap(), vec![2, 0, 0]),
        (gsp, siegel),
    ]
}

#[test]
fn closure_examples() {
    let rd = RootDatum::gl(2).unwrap();
    let (e, s) = (WeylElt::IDENTITY, rd.simple_reflection(0));
    let mu = [1, 0];
    assert!(rd.closure_leq(&ty(s, &mu), &ty(s, &mu)));
    assert!(rd.closure_leq(&ty(e, &mu), &ty(s, &mu)));
    assert!(!rd.closure_leq(&ty(s, &mu), &ty(e, &mu)));
    assert!(rd.closure_leq_same_mu(e, s, &mu));
    assert!(!rd.closure_leq_same_mu(s, e, &mu));
    assert!(rd.closure_leq_same_mu(s, s, &mu));
}

#[test]
fn closure_criteria_agree_on_same_mu() {
    let gsp = RootDatum::gsp(2).unwrap();
    let siegel = gsp.default_mu();
    let gl3 = RootDatum::gl(3).unwrap();
    let cases = [(&gl3, vec![1, 0, 0]), (&gl3, vec![1, 1, 0]), (&gsp, siegel)];
    for (rd, mu) in cases {
        let ws = rd.mu_w(&mu);
        for &a in &ws {
            for &b in &ws {
                assert_eq!(rd.closure_leq(&ty(a, &mu), &ty(b, &mu)), rd.closure_leq_same_mu(a, b, &mu));
            }
        }
    }
    assert_eq!(gsp.mu_w(&gsp.default_mu()).len(), 4);
}

#[test]
fn gl2_atlas_is_a_chain() {
    let rd = RootDatum::gl(2).unwrap();
    let a = rd.closure_poset(&[1, 0], DEFAULT_BUDGET).unwrap();
    assert_eq!(a.strata.len(), 2);
    assert_eq!(a.closure, vec![vec![true, true], vec![false, true]]);
    assert_eq!(a.strata[0].generic.newton, newton(&[(1, 2), (1, 2)]));
    assert_eq!(a.strata[1].generic.newton, newton(&[(1, 1), (0, 1)]));
    assert!(a.strata.iter().all(|s| s.minimal));
    assert_eq!(a.strata.iter().map(|s| s.length).collect::<Vec<_>>(), vec![0, 1]);
    assert!(a.antisymmetry_violations.is_empty());
    assert_eq!(a.covering_relations(), vec![(0, 1)]);
    let dot = a.to_dot(&rd);
    assert!(dot.contains("label=\"e | (1,0) | (1/2,1/2)\""));
    assert!(dot.contains("n0 -> n1;"));
    let v: serde_json::Value = serde_json::from_str(&a.to_json(&rd)).unwrap();
    assert_eq!(v["mu"], serde_json::json!([1, 0]));
    assert_eq!(v["strata"][1]["w"], "s1");
    assert_eq!(v["strata"][1]["length"], 1);
    assert_eq!(v["closure"][1][0], false);
    assert!(v["strata"][0]["generic"].is_object());
}

#[test]
fn central_mu_has_one_stratum() {
    let rd = RootDatum::gl(2).unwrap();
    let a = rd.closure_poset(&[1, 1], DEFAULT_BUDGET).unwrap();
    assert_eq!(a.strata.len(), 1);
    let x = AffineElt::translation(vec![1, 1]);
    assert_eq!(a.strata[0].generic, rd.class_of(&x));
    assert_eq!(rd.generic_via_minimal(WeylElt::IDENTITY, &[1, 1], DEFAULT_BUDGET).unwrap(), rd.class_of(&x));
    assert!(rd.verify_thm_main(WeylElt::IDENTITY, &[1, 1], DEFAULT_BUDGET).unwrap().passed());
}

#[test]
fn atlas_rejects_non_dominant() {
    let rd = RootDatum::gl(2).unwrap();
    assert!(matches!(rd.closure_poset(&[0, 1], DEFAULT_BUDGET), Err(Error::Precondition(_))));
    assert!(matches!(rd.closure_poset(&[3, 0], 1), Err(Error::BudgetExceeded { .. })));
}

#[test]
fn atlases_are_preorders_with_consistent_generic_classes() {
    for (rd, mu) in configs() {
        let a = rd.closure_poset(&mu, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.strata.iter().map(|s| s.ty.clone()).collect::<Vec<_>>(), rd.strata_types(&mu).unwrap());
        assert!(a.is_reflexive() && a.is_transitive());
        assert!(a.antisymmetry_violations.is_empty(), "{}", rd.name());
        for s in &a.strata {
            let via = rd.generic_via_minimal(s.ty.w, &s.ty.mu, DEFAULT_BUDGET).unwrap();
            assert_eq!(via, s.generic);
            for y in rd.lower_cone(&rd.w_tau(s.ty.w, &s.ty.mu), DEFAULT_BUDGET).unwrap() {
                assert!(rd.leq_b(&rd.class_of(&y), &s.generic));
            }
            let rep = rd.verify_thm_main(s.ty.w, &s.ty.mu, DEFAULT_BUDGET).unwrap();
            assert!(rep.passed() && rep.checked > 0);
        }
    }
}

#[test]
fn parallel_atlas_matches_serial() {
    let rd = RootDatum::gl(3).unwrap();
    let a = rd.closure_poset(&[2, 0, 0], DEFAULT_BUDGET).unwrap();
    let b = rd.closure_poset_jobs(&[2, 0, 0], DEFAULT_BUDGET, 3).unwrap();
    assert_eq!(a.strata, b.strata);
    assert_eq!(a.closure, b.closure);
}

#[test]
fn gl3_atlas_shape() {
    let rd = RootDatum::gl(3).unwrap();
    let a = rd.closure_poset(&[2, 0, 0], DEFAULT_BUDGET).unwrap();
    assert_eq!(a.strata.len(), 6);
    let e200 = a.index_of(&ty(WeylElt::IDENTITY, &[2, 0, 0])).unwrap();
    assert!(!a.strata[e200].minimal);
    let top = a.index_of(&ty(rd.from_word(&[0, 1]).unwrap(), &[2, 0, 0])).unwrap();
    assert_eq!(a.strata[top].generic.newton, newton(&[(2, 1), (0, 1), (0, 1)]));
    assert!((0..6).all(|i| a.closure[i][top]));
}

#[test]
fn generic_class_examples() {
    let rd = RootDatum::gl(2).unwrap();
    let s = rd.simple_reflection(0);
    assert_eq!(rd.generic_class(s, &[1, 0], DEFAULT_BUDGET).unwrap().newton, newton(&[(1, 1), (0, 1)]));
    assert_eq!(rd.generic_class(WeylElt::IDENTITY, &[1, 0], DEFAULT_BUDGET).unwrap().newton, newton(&[(1, 2), (1, 2)]));
    assert_eq!(
        rd.generic_via_minimal(s, &[1, 0], DEFAULT_BUDGET).unwrap(),
        rd.generic_class(s, &[1, 0], DEFAULT_BUDGET).unwrap()
    );
}

#[test]
fn fundamental_conjugates_examples() {
    let rd = RootDatum::gl(2).unwrap();
    let tau = rd.tau(&[1, 0]).unwrap();
    let got = rd.fundamental_conjugates_below(&tau, DEFAULT_BUDGET).unwrap();
    assert_eq!(got, BTreeSet::from([rd.class_of(&tau)]));
    let st = rd.w_tau(rd.simple_reflection(0), &[1, 0]);
    let got = rd.fundamental_conjugates_below(&st, DEFAULT_BUDGET).unwrap();
    assert_eq!(got.len(), 2);
    let got = rd.fundamental_conjugates_below(&rd.aid(), DEFAULT_BUDGET).unwrap();
    assert_eq!(got, BTreeSet::from([rd.class_of(&rd.aid())]));
}

#[test]
fn fundamental_conjugates_cover_the_cone() {
    for (rd, mu) in configs() {
        for w in rd.mu_w(&mu) {
            let x = rd.w_tau(w, &mu);
            let got = rd.fundamental_conjugates_below(&x, DEFAULT_BUDGET).unwrap();
            assert!(got.contains(&rd.generic_class(w, &mu, DEFAULT_BUDGET).unwrap()));
            for y in rd.lower_cone(&x, DEFAULT_BUDGET).unwrap() {
                let t = rd.minimal_type(&rd.class_of(&y)).unwrap();
                assert!(got.contains(&rd.class_of(&rd.w_tau(t.w, &t.mu))));
            }
        }
    }
}

#[test]
fn minimal_order_report() {
    let rd = RootDatum::gl(2).unwrap();
    let (e, s) = (WeylElt::IDENTITY, rd.simple_reflection(0));
    let r = rd.minimal_closure_vs_class_order(&ty(e, &[1, 0]), &ty(s, &[1, 0])).unwrap();
    assert_eq!(r, MinimalOrderReport { closure: true, leq_b: true, discrepancy: false });
    let r = rd.minimal_closure_vs_class_order(&ty(s, &[1, 0]), &ty(s, &[1, 0])).unwrap();
    assert!(r.closure && r.leq_b);

    let gl3 = RootDatum::gl(3).unwrap();
    let err = gl3.minimal_closure_vs_class_order(&ty(e, &[2, 0, 0]), &ty(e, &[1, 1, 0]));
    assert!(matches!(err, Err(Error::NotMinimalType(_))));
}

#[test]
fn minimal_order_report_incomparable() {
    let rd = RootDatum::gl(4).unwrap();
    let a = rd.standard_rep(&SigmaClass { kappa: crate::KappaClass(vec![2]), newton: newton(&[(1, 1), (1, 3), (1, 3), (1, 3)]) });
    let b = rd.standard_rep(&SigmaClass { kappa: crate::KappaClass(vec![2]), newton: newton(&[(2, 3), (2, 3), (2, 3), (0, 1)]) });
    let ta = rd.minimal_type(&rd.class_of(&a.unwrap())).unwrap();
    let tb = rd.minimal_type(&rd.class_of(&b.unwrap())).unwrap();
    for (x, y) in [(&ta, &tb), (&tb, &ta)] {
        let r = rd.minimal_closure_vs_class_order(x, y).unwrap();
        assert!(!r.closure && !r.leq_b && !r.discrepancy);
    }
}

#[test]
fn minimal_types_respect_class_order() {
    let rd = RootDatum::gl(3).unwrap();
    let a = rd.closure_poset(&[2, 0, 0], DEFAULT_BUDGET).unwrap();
    let mins: Vec<_> = a.strata.iter().filter(|s| s.minimal).map(|s| s.ty.clone()).collect();
    for x in &mins {
        for y in &mins {
            rd.minimal_closure_vs_class_order(x, y).unwrap();
        }
    }
}

#[test]
fn slope_validation() {
    assert!(SlopeData::new(vec![(1, 2), (0, 1)]).is_ok());
    assert!(matches!(SlopeData::new(vec![(2, 4)]), Err(Error::InvalidSlopes(_))));
    assert!(matches!(SlopeData::new(vec![(3, 2)]), Err(Error::InvalidSlopes(_))));
    assert!(matches!(SlopeData::new(vec![(0, 1), (1, 1)]), Err(Error::InvalidSlopes(_))));
    assert!(matches!(SlopeData::new(vec![]), Err(Error::InvalidSlopes(_))));
    assert!(matches!(SlopeData::new(vec![(0, 0)]), Err(Error::InvalidSlopes(_))));
    assert_eq!(SlopeData::all_up_to(2).len(), 6);
    for s in SlopeData::all_up_to(5) {
        assert_eq!(SlopeData::new(s.pairs().to_vec()).as_ref(), Ok(&s));
    }
}

#[test]
fn minimal_dieudonne_examples() {
    let field = Arc::new(Field::new(2, 1).unwrap());
    let cases: [(Vec<(u32, u32)>, &str); 4] = [
        (vec![(0, 1)], "1\n"),
        (vec![(1, 1)], "t\n"),
        (vec![(1, 2)], "0, 1\nt, 0\n"),
        (vec![(1, 1), (0, 1)], "t, 0\n0, 1\n"),
    ];
    for (pairs, body) in cases {
        let s = SlopeData::new(pairs).unwrap();
        let rd = RootDatum::gl(s.height()).unwrap();
        let m = rd.minimal_dieudonne(&s, field.clone()).unwrap();
        let text = crate::matrix::write_matrix(&m);
        assert!(text.ends_with(body), "{text}");
    }
    let s = SlopeData::new(vec![(1, 2)]).unwrap();
    assert!(RootDatum::gl(3).unwrap().minimal_dieudonne_element(&s).is_err());
}

#[test]
fn minimal_dieudonne_is_fundamental_with_its_slopes() {
    let field = Arc::new(Field::new(2, 1).unwrap());
    for s in SlopeData::all_up_to(6) {
        let rd = RootDatum::gl(s.height()).unwrap();
        let (x, p) = rd.minimal_dieudonne_element(&s).unwrap();
        // x I_M x^{-1} = I_M always; the N-conditions fail once two blocks are non-split
        assert_eq!(rd.levi_length(&p.levi, &x), 0);
        let wide = s.pairs().iter().filter(|q| q.1 > 1).count();
        assert_eq!(rd.is_fundamental(&x, &p), wide <= 1, "{s:?}");
        let distinct = s.pairs().windows(2).all(|w| w[0] != w[1]);
        if distinct {
            assert_eq!(rd.standard_rep(&rd.class_of(&x)).unwrap(), x);
        }
        assert_eq!(rd.newton_point(&x), s.newton());
        let m = rd.minimal_dieudonne(&s, field.clone()).unwrap();
        assert_eq!(newton_matrix(&m).unwrap(), s.newton(), "{s:?}");
    }
}

#[test]
fn eo_atlas_counts() {
    for g in 1..=3 {
        let rd = RootDatum::gsp(g).unwrap();
        let r = rd.eo_atlas(DEFAULT_BUDGET).unwrap();
        assert_eq!(r.atlas.strata.len(), 1 << g);
        assert!(r.thm_main.iter().all(|t| t.passed()));
        assert!(r.atlas.antisymmetry_violations.is_empty());
        for (s, v) in r.atlas.strata.iter().zip(&r.generic_via_minimal) {
            assert_eq!(&s.generic, v);
        }
    }
    let rd = RootDatum::gsp(1).unwrap();
    let r = rd.eo_atlas(DEFAULT_BUDGET).unwrap();
    assert_eq!(r.atlas.closure, vec![vec![true, true], vec![false, true]]);
    assert_eq!(r.atlas.strata[0].generic.newton.0[0], Q::new(1, 2));
    assert!(matches!(RootDatum::gl(2).unwrap().eo_atlas(DEFAULT_BUDGET), Err(Error::Precondition(_))));
}

