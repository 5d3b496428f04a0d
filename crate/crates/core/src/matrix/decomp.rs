//! Cartan (`K ε^μ K`) and Iwahori (`I x I`) decompositions by
//! valuation-pivot elimination.

use super::{require_gl, FMat, LaurentMatrix, DIV_CAP};
use crate::affine::AffineElt;
use crate::error::{Error, Result};
use crate::root_datum::{Coweight, RootDatum, WeylElt};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Smith,
    Iwahori,
}

struct Elim {
    a: LaurentMatrix,
    linv_bar: FMat,
    rinv_bar: FMat,
    linv: Option<LaurentMatrix>,
    rinv: Option<LaurentMatrix>,
    /// `(row, column)` of each pivot.
    pivots: Vec<(usize, usize)>,
}

/// `g ∈ k_1 ε^μ k_2 K_1` with `k_i ∈ K` known modulo `t`.
#[derive(Clone, Debug)]
pub struct CartanData {
    pub mu: Coweight,
    pub k1_bar: FMat,
    pub k2_bar: FMat,
}

/// `g ∈ i_1 x i_2 K_1` with `i_1, i_2 ∈ I`.
#[derive(Clone, Debug)]
pub struct IwahoriData {
    pub x: AffineElt,
    pub i1: LaurentMatrix,
    pub i2: LaurentMatrix,
}

fn insufficient(have: i64, required: i64) -> Error {
    Error::InsufficientPrecision { have, required }
}

fn eliminate(g: &LaurentMatrix, mode: Mode, track: bool) -> Result<Elim> {
    let n = g.n();
    let fa = g.field_arc();
    let f = &*fa;
    let mut el = Elim {
        a: g.clone(),
        linv_bar: FMat::identity(n),
        rinv_bar: FMat::identity(n),
        linv: track.then(|| LaurentMatrix::identity(fa.clone(), n)),
        rinv: track.then(|| LaurentMatrix::identity(fa.clone(), n)),
        pivots: vec![],
    };
    let mut row_on = vec![true; n];
    let mut col_on = vec![true; n];
    for _ in 0..n {
        let mut best: Option<(i64, usize, usize)> = None;
        let mut unsure = i64::MAX;
        for r in (0..n).filter(|&r| row_on[r]) {
            for c in (0..n).filter(|&c| col_on[c]) {
                let x = el.a.get(r, c);
                if !x.is_certified() {
                    unsure = unsure.min(x.precision());
                    continue;
                }
                let v = x.valuation();
                let better = match best {
                    None => true,
                    Some((bv, br, bc)) => match mode {
                        Mode::Smith => v < bv,
                        Mode::Iwahori => v < bv || (v == bv && (r > br || (r == br && c < bc))),
                    },
                };
                if better {
                    best = Some((v, r, c));
                }
            }
        }
        let (v, r, c) = best.ok_or_else(|| insufficient(unsure, unsure + 1))?;
        if unsure <= v {
            return Err(insufficient(unsure, v + 1));
        }
        let pi = el.a.get(r, c).inv(f, DIV_CAP).expect("certified pivot");
        for i in (0..n).filter(|&i| row_on[i] && i != r) {
            if !el.a.get(i, c).is_certified() {
                continue;
            }
            let m = el.a.get(i, c).mul(f, &pi);
            debug_assert!(m.valuation() >= i64::from(mode == Mode::Iwahori && i > r));
            for j in 0..n {
                let x = el.a.get(i, j).sub(f, &m.mul(f, el.a.get(r, j)));
                el.a.set(i, j, x);
            }
            // L^{-1} ← L^{-1}(1 + m E_{ir})
            let mb = m.coeff(0);
            for k in 0..n {
                let y = f.add(el.linv_bar.get(k, r), f.mul(mb, el.linv_bar.get(k, i)));
                el.linv_bar.set(k, r, y);
            }
            if let Some(li) = el.linv.as_mut() {
                for k in 0..n {
                    let y = li.get(k, r).add(f, &m.mul(f, li.get(k, i)));
                    li.set(k, r, y);
                }
            }
        }
        for j in (0..n).filter(|&j| col_on[j] && j != c) {
            if !el.a.get(r, j).is_certified() {
                continue;
            }
            let m = el.a.get(r, j).mul(f, &pi);
            debug_assert!(m.valuation() >= i64::from(mode == Mode::Iwahori && j < c));
            for i in 0..n {
                let x = el.a.get(i, j).sub(f, &m.mul(f, el.a.get(i, c)));
                el.a.set(i, j, x);
            }
            // R^{-1} ← (1 + m E_{cj}) R^{-1}
            let mb = m.coeff(0);
            for k in 0..n {
                let y = f.add(el.rinv_bar.get(c, k), f.mul(mb, el.rinv_bar.get(j, k)));
                el.rinv_bar.set(c, k, y);
            }
            if let Some(ri) = el.rinv.as_mut() {
                for k in 0..n {
                    let y = ri.get(c, k).add(f, &m.mul(f, ri.get(j, k)));
                    ri.set(c, k, y);
                }
            }
        }
        row_on[r] = false;
        col_on[c] = false;
        el.pivots.push((r, c));
    }
    // the unknown remainder must be K_1-small relative to each pivot
    for &(r, c) in &el.pivots {
        let lam = el.a.get(r, c).valuation();
        let have = (0..n).map(|j| el.a.get(r, j).precision()).min().unwrap_or(i64::MAX);
        if have < lam + 1 {
            return Err(insufficient(have, lam + 1));
        }
    }
    Ok(el)
}

fn pivot_data(rd: &RootDatum, el: &Elim) -> (WeylElt, Coweight) {
    let n = el.a.n();
    let mut pat = FMat::zero(n);
    let mut lam = vec![0; n];
    for &(r, c) in &el.pivots {
        pat.set(r, c, 1);
        lam[c] = el.a.get(r, c).valuation();
    }
    (pat.monomial_weyl(rd).expect("pivots form a permutation"), lam)
}

/// Elementary divisor valuations in weakly decreasing order.
pub fn cartan_type(g: &LaurentMatrix) -> Result<Coweight> {
    let el = eliminate(g, Mode::Smith, false)?;
    let mut mu: Vec<i64> = el.pivots.iter().map(|&(r, c)| el.a.get(r, c).valuation()).collect();
    mu.sort_unstable_by(|a, b| b.cmp(a));
    Ok(mu)
}

/// Cartan decomposition with the reductions of the `K`-factors.
pub fn cartan_data(rd: &RootDatum, g: &LaurentMatrix) -> Result<CartanData> {
    require_gl(rd)?;
    let f = g.field();
    let el = eliminate(g, Mode::Smith, false)?;
    let (w, lam) = pivot_data(rd, &el);
    let (mu, p) = rd.dominant_rep(&lam);
    let n = g.n();
    let mut units = FMat::zero(n);
    for &(r, c) in &el.pivots {
        units.set(c, c, el.a.get(r, c).leading());
    }
    // g ∈ L^{-1} n_w n_p t^μ n_p^{-1} u R^{-1} K_1
    let pw = FMat::perm(rd, w);
    let pp = FMat::perm(rd, p);
    let ppi = FMat::perm(rd, rd.winv(p));
    Ok(CartanData {
        mu,
        k1_bar: FMat::mul_all(f, &[&el.linv_bar, &pw, &pp]),
        k2_bar: FMat::mul_all(f, &[&ppi, &units, &el.rinv_bar]),
    })
}

/// The `x ∈ W̃` with `g ∈ I x I`.
pub fn iwahori_double_coset(rd: &RootDatum, g: &LaurentMatrix) -> Result<AffineElt> {
    require_gl(rd)?;
    let el = eliminate(g, Mode::Iwahori, false)?;
    let (w, lam) = pivot_data(rd, &el);
    Ok(AffineElt { w, lam })
}

/// Iwahori decomposition with both `I`-factors.
pub fn iwahori_data(rd: &RootDatum, g: &LaurentMatrix) -> Result<IwahoriData> {
    require_gl(rd)?;
    let el = eliminate(g, Mode::Iwahori, true)?;
    let (w, lam) = pivot_data(rd, &el);
    let n = g.n();
    let mut d = LaurentMatrix::identity(g.field_arc(), n);
    for &(r, c) in &el.pivots {
        let x = el.a.get(r, c);
        // the unit part t^{-λ_c}·a_{rc}
        d.set(c, c, x.shift(-x.valuation()));
    }
    let i2 = d.mul(el.rinv.as_ref().expect("tracked"));
    Ok(IwahoriData {
        x: AffineElt { w, lam },
        i1: el.linv.expect("tracked"),
        i2,
    })
}
