//! Truncation of level one for matrices: reduction to `b_0 τ_μ` form, then
//! the Levi recursion on `b_i` modulo `t`.

use super::decomp::{cartan_data, cartan_type, iwahori_data, iwahori_double_coset};
use super::fmat::{levi_pattern, root_entry, roots_pattern};
use super::{require_gl, FMat, LaurentMatrix};
use crate::alcoves::TruncationType;
use crate::error::{Error, Result};
use crate::root_datum::{Coweight, Levi, RootDatum, WeylElt};

/// One step `b_i = n · m · δ · m' · n̄` of the recursion.
#[derive(Clone, Debug)]
pub struct MatrixStep {
    pub m: Levi,
    pub m_prime: Levi,
    pub b: FMat,
    pub delta: WeylElt,
    pub u: WeylElt,
    /// Levi factors of `b_i` in `M_{i+1}(k)` and `M'_{i+1}(k)`.
    pub m_factor: FMat,
    pub m_prime_factor: FMat,
}

#[derive(Clone, Debug)]
pub struct MatrixTranscript {
    pub mu: Coweight,
    pub precision: i64,
    pub k1_bar: FMat,
    pub k2_bar: FMat,
    pub b0: FMat,
    pub steps: Vec<MatrixStep>,
}

/// Output of the Iwahori reduction: `g' = h^{-1} g σ(h)`.
#[derive(Clone, Debug)]
pub struct IwahoriReduction {
    pub h: LaurentMatrix,
    pub g_prime: LaurentMatrix,
    /// Levis `L_0 = M_μ ⊇ L_1 ⊇ …` cut out by `Ad((w x_μ)^{-1}) σ^{-1}`.
    pub levi_chain: Vec<Levi>,
    pub conjugators: usize,
}

/// Working precision needed for a matrix of Cartan type `μ`.
pub fn required_precision(mu: &[i64]) -> i64 {
    let hi = mu.first().copied().unwrap_or(0);
    let lo = mu.last().copied().unwrap_or(0);
    (hi - lo + 2).max(hi + 1)
}

/// Truncation type of `g`, recomputed at one more digit of precision when
/// available.
pub fn truncation_type_matrix(rd: &RootDatum, g: &LaurentMatrix) -> Result<(TruncationType, MatrixTranscript)> {
    require_gl(rd)?;
    let mu = cartan_type(g)?;
    let need = required_precision(&mu);
    let have = g.precision();
    if have < need {
        return Err(Error::InsufficientPrecision { have, required: need });
    }
    let (t, tr) = truncation_at(rd, &g.truncate(need))?;
    if have > need {
        let (t2, _) = truncation_at(rd, &g.truncate(need + 1))?;
        if t2 != t {
            return Err(Error::ConventionBroken(format!(
                "truncation changed between precision {need} and {}",
                need + 1
            )));
        }
    }
    Ok((t, tr))
}

fn truncation_at(rd: &RootDatum, g: &LaurentMatrix) -> Result<(TruncationType, MatrixTranscript)> {
    let f = g.field();
    let cd = cartan_data(rd, g)?;
    let mu = cd.mu.clone();
    let x_mu = rd.x_mu(&mu);
    // σ-conjugating by σ^{-1}(k_2^{-1}) gives σ^{-1}(k_2) k_1 ε^μ
    let b0 = FMat::mul_all(f, &[&cd.k2_bar.frob_inv(f), &cd.k1_bar, &FMat::perm(rd, rd.winv(x_mu))]);
    let (u, steps) = recursion(rd, f, &b0, &mu)?;
    Ok((
        TruncationType { w: u, mu: mu.clone() },
        MatrixTranscript {
            mu,
            precision: g.precision(),
            k1_bar: cd.k1_bar,
            k2_bar: cd.k2_bar,
            b0,
            steps,
        },
    ))
}

/// Index order `o` such that the Borel `{e_{o[p]} - e_{o[p']} : p < p'}`
/// contains the unipotent radical of a parabolic with Levi `levi` (blocks in
/// order of their least index) and, inside each block, lies in `para`.
fn adapted_order(rd: &RootDatum, levi: &Levi, para: &[bool]) -> Vec<usize> {
    let n = rd.rank();
    let mut block: Vec<usize> = (0..n).collect();
    for r in levi.root_indices() {
        let (i, j) = root_entry(rd, r);
        let (a, b) = (block[i].min(block[j]), block[i].max(block[j]));
        for x in block.iter_mut() {
            if *x == b {
                *x = a;
            }
        }
    }
    let mut order = vec![];
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[block[s]] {
            continue;
        }
        seen[block[s]] = true;
        let mut rest: Vec<usize> = (0..n).filter(|&i| block[i] == block[s]).collect();
        // `a` may come first when every `e_a - e_b` lies in the parabolic
        while !rest.is_empty() {
            let k = rest
                .iter()
                .position(|&a| rest.iter().all(|&b| b == a || para[rd.root_index(&gl_root(n, a, b)).expect("root")]))
                .expect("parabolic root set");
            order.push(rest.remove(k));
        }
    }
    order
}

fn gl_root(n: usize, i: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v[j] = -1;
    v
}

fn order_perm(rd: &RootDatum, order: &[usize]) -> (FMat, WeylElt) {
    let n = order.len();
    let mut y = FMat::zero(n);
    for (p, &i) in order.iter().enumerate() {
        y.set(i, p, 1);
    }
    let w = y.monomial_weyl(rd).expect("permutation");
    (y, w)
}

fn recursion(rd: &RootDatum, f: &super::Field, b0: &FMat, mu: &[i64]) -> Result<(WeylElt, Vec<MatrixStep>)> {
    let m_mu = rd.centralizer_levi(mu);
    let x_mu = rd.x_mu(mu);
    let xi = rd.winv(x_mu);
    let px = FMat::perm(rd, x_mu);
    let pxi = FMat::perm(rd, xi);
    let nr = rd.roots().len();
    let n = rd.rank();
    let mut u = WeylElt::IDENTITY;
    let mut mp = Levi::whole(rd);
    let mut m_cur = Levi::whole(rd);
    // roots of the unipotent group that may be dropped on the right of b_i
    let mut right: Vec<bool> = (0..nr).map(|r| rd.pairing(rd.act_root(xi, r), mu) < 0).collect();
    let mut b = b0.clone();
    let mut steps = vec![];
    let cap = 4 * rd.rank() + 4;
    for _ in 0..cap {
        let ui = rd.winv(u);
        let m_next = mp.intersect(rd, &m_mu.conjugate(rd, ui).sigma_inv(rd));
        let mp_next = m_next.conjugate(rd, u).sigma(rd).conjugate(rd, x_mu);
        // left: roots of M'_i pairing positively with u_i^{-1} σ^{-1}(μ)
        let pair = |r: usize| rd.pairing(rd.sigma_root(rd.act_root(u, r)), mu);
        let left: Vec<bool> = (0..nr).map(|r| mp.contains_root(r) && pair(r) > 0).collect();
        let q: Vec<bool> = (0..nr).map(|r| m_next.contains_root(r) || left[r]).collect();
        let qp: Vec<bool> = (0..nr).map(|r| mp_next.contains_root(r) || (mp.contains_root(r) && right[r])).collect();
        let (y1, w1) = order_perm(rd, &adapted_order(rd, &mp, &q));
        let (y2, w2) = order_perm(rd, &adapted_order(rd, &mp, &qp));
        let y1i = y1.inv(f).expect("permutation");
        let y2i = y2.inv(f).expect("permutation");
        let (beta1, v, beta2) = FMat::mul_all(f, &[&y1i, &b, &y2])
            .bruhat(f, rd)
            .ok_or_else(|| Error::ConventionBroken("singular residue".into()))?;
        let z = rd.wmul_all(&[w1, v, rd.winv(w2)]);
        if !mp.contains_w(z) {
            return Err(Error::ConventionBroken("Bruhat cell outside W_{M'}".into()));
        }
        let dc = rd.double_coset(&m_next, z, &mp_next)?;
        let mpat = levi_pattern(rd, &mp);
        let left_f = FMat::mul_all(f, &[&y1, &beta1, &y1i]).project(&mpat).mul(f, &FMat::perm(rd, dc.m));
        let right_f = FMat::perm(rd, dc.m_prime).mul(f, &FMat::mul_all(f, &[&y2, &beta2, &y2i]).project(&mpat));
        let m_fac = left_f.project(&levi_pattern(rd, &m_next));
        let mp_fac = right_f.project(&levi_pattern(rd, &mp_next));
        let m_inv = m_fac.inv(f).ok_or_else(|| Error::ConventionBroken("singular Levi factor".into()))?;
        let mp_inv = mp_fac.inv(f).ok_or_else(|| Error::ConventionBroken("singular Levi factor".into()))?;
        // the discarded unipotent factors
        let n_left = left_f.mul(f, &m_inv);
        let n_right = mp_inv.mul(f, &right_f);
        let right_roots: Vec<bool> = (0..nr).map(|r| mp.contains_root(r) && right[r] && !mp_next.contains_root(r)).collect();
        let mut l_pat = roots_pattern(rd, &left);
        let mut r_pat = roots_pattern(rd, &right_roots);
        for i in 0..n {
            l_pat[i * n + i] = true;
            r_pat[i * n + i] = true;
        }
        let unipotent = |x: &FMat, pat: &[bool]| x.fits(pat) && (0..x.n).all(|i| x.get(i, i) == 1);
        if !unipotent(&n_left, &l_pat) || !unipotent(&n_right, &r_pat) {
            return Err(Error::ConventionBroken("unipotent factor outside the parabolic".into()));
        }
        let pu = FMat::perm(rd, u);
        let pui = FMat::perm(rd, ui);
        let h = FMat::mul_all(f, &[&pu, &m_fac, &pui]);
        let b_next = FMat::mul_all(f, &[&mp_fac, &px, &h.frob(f), &pxi]);
        if !b_next.fits(&levi_pattern(rd, &mp_next)) {
            return Err(Error::ConventionBroken("b_{i+1} left M'_{i+1}".into()));
        }
        let u_next = rd.wmul(u, dc.delta);
        // y on the right of b_{i+1} moves to u_{i+1}^{-1} σ^{-1}(x_μ^{-1} y x_μ) u_{i+1} on the left
        let uni = rd.winv(u_next);
        let right_next: Vec<bool> = (0..nr)
            .map(|r| {
                mp_next.contains_root(r) && right[rd.act_root(uni, rd.sigma_inv_root(rd.act_root(xi, r)))]
            })
            .collect();
        let stable = dc.delta.is_identity() && m_next == m_cur && mp_next == mp;
        steps.push(MatrixStep {
            m: m_next.clone(),
            m_prime: mp_next.clone(),
            b: b.clone(),
            delta: dc.delta,
            u: u_next,
            m_factor: m_fac,
            m_prime_factor: mp_fac,
        });
        u = u_next;
        b = b_next;
        m_cur = m_next;
        mp = mp_next;
        right = right_next;
        if stable {
            if !m_mu.is_left_min(rd, rd.sigma_w(u)) {
                return Err(Error::ConventionBroken(format!(
                    "matrix recursion ended at {} outside ^mu W",
                    rd.word_string(u)
                )));
            }
            return Ok((u, steps));
        }
    }
    Err(Error::IterationCapExceeded {
        what: "matrix truncation recursion".into(),
        cap,
    })
}

/// `I`-σ-conjugates `g ∈ I w τ_μ I` into `K_1 w τ_μ I_∞`-form using the
/// Iwahori decomposition `I = N_μ(O) I_{M_μ} K_1`.
pub fn iwahori_reduce(rd: &RootDatum, g: &LaurentMatrix, w: WeylElt, mu: &[i64]) -> Result<IwahoriReduction> {
    let n = require_gl(rd)?;
    if !rd.mu_w(mu).contains(&w) {
        return Err(Error::Precondition(format!("{} is not in ^mu W", rd.word_string(w))));
    }
    let x = rd.w_tau(w, mu);
    let found = iwahori_double_coset(rd, g)?;
    if found != x {
        return Err(Error::NotInCoset(format!(
            "element lies in I {} I, not I {} I",
            rd.format_affine(&found),
            rd.format_affine(&x)
        )));
    }
    let fa = g.field_arc();
    let f = &*fa;
    let xm = LaurentMatrix::monomial(fa.clone(), rd, &x)?;
    let m_mu = rd.centralizer_levi(mu);
    let mut chain = vec![m_mu.clone()];
    if g.mul(&xm.inverse()?).in_k1() {
        let id = LaurentMatrix::identity(fa.clone(), n);
        certify(rd, g, w, mu)?;
        return Ok(IwahoriReduction {
            h: id,
            g_prime: g.clone(),
            levi_chain: chain,
            conjugators: 0,
        });
    }
    let data = iwahori_data(rd, g)?;
    let mut h = data.i1.clone();
    let mut count = 1;
    // g ~ x · i2 σ(i1); keep the M_μ-part of its residue
    let ibar = data
        .i2
        .residue()
        .zip(data.i1.residue())
        .map(|(a, b)| a.mul(f, &b.frob(f)))
        .ok_or_else(|| Error::ConventionBroken("Iwahori factor not integral".into()))?;
    let mpat = levi_pattern(rd, &m_mu);
    let mut c = ibar.project(&mpat);
    let wx = rd.wmul(w, rd.x_mu(mu));
    let pwx = FMat::perm(rd, wx);
    let pwxi = FMat::perm(rd, rd.winv(wx));
    let mut level = m_mu.clone();
    let cap = 2 * n + 2;
    for _ in 0..cap {
        // σ-conjugate wτ_μ·c by σ^{-1}(c)^{-1}
        let sc = c.frob_inv(f);
        let step = LaurentMatrix::from_fmat(fa.clone(), &sc.inv(f).expect("unit"));
        h = h.mul(&step);
        count += 1;
        let moved = FMat::mul_all(f, &[&pwxi, &sc, &pwx]);
        let next = level.intersect(rd, &level.sigma_inv(rd).conjugate(rd, rd.winv(wx)));
        c = moved.project(&mpat);
        let stable = next == level;
        level = next;
        chain.push(level.clone());
        if stable && c.fits(&levi_pattern(rd, &level)) {
            break;
        }
    }
    let g_prime = g.sigma_conj(&h)?;
    certify(rd, &g_prime, w, mu)?;
    Ok(IwahoriReduction {
        h,
        g_prime,
        levi_chain: chain,
        conjugators: count,
    })
}

fn certify(rd: &RootDatum, g: &LaurentMatrix, w: WeylElt, mu: &[i64]) -> Result<()> {
    let (t, _) = truncation_type_matrix(rd, g)?;
    if t.w != w || t.mu != mu {
        return Err(Error::ConventionBroken(format!(
            "reduced element has type {}, expected ({}, {:?})",
            t.display(rd),
            rd.word_string(w),
            mu
        )));
    }
    Ok(())
}
