//! Characteristic polynomials and Newton points of `bσ`.

use num_traits::Zero;

use super::{Laurent, LaurentMatrix};
use crate::error::{Error, Result};
use crate::isocrystal::NewtonPoint;
use crate::lattice::Q;

/// Coefficients `c_0 = 1, c_1, …, c_n` of `det(X - A) = Σ c_k X^{n-k}`
/// (Berkowitz, division free).
pub(crate) fn charpoly(a: &LaurentMatrix) -> Vec<Laurent> {
    let f = a.field();
    let n = a.n();
    let mut c = vec![Laurent::one()];
    for r in 0..n {
        // Toeplitz column (1, -a_rr, -R C, -R A C, …)
        let mut t = vec![Laurent::one(), a.get(r, r).neg(f)];
        let mut v: Vec<Laurent> = (0..r).map(|i| a.get(i, r).clone()).collect();
        for _ in 0..r {
            let mut s = Laurent::exact_zero();
            for (j, vj) in v.iter().enumerate() {
                s = s.add(f, &a.get(r, j).mul(f, vj));
            }
            t.push(s.neg(f));
            v = (0..r)
                .map(|i| {
                    let mut s = Laurent::exact_zero();
                    for (j, vj) in v.iter().enumerate() {
                        s = s.add(f, &a.get(i, j).mul(f, vj));
                    }
                    s
                })
                .collect();
        }
        let mut d = vec![Laurent::exact_zero(); r + 2];
        for (i, di) in d.iter_mut().enumerate() {
            for (j, cj) in c.iter().enumerate().take(i.min(r) + 1) {
                *di = di.add(f, &t[i - j].mul(f, cj));
            }
        }
        c = d;
    }
    c
}

/// Slopes of the lower convex hull through `(k, v_k)`, one per unit step,
/// in increasing order. Points with `None` are absent.
fn hull_slopes(pts: &[(i64, Q)]) -> Vec<Q> {
    let mut hull: Vec<(i64, Q)> = vec![];
    for &p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b if it lies on or above segment a-p
            let lhs = (b.1 - a.1) * Q::from_integer(p.0 - a.0);
            let rhs = (p.1 - a.1) * Q::from_integer(b.0 - a.0);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = vec![];
    for w in hull.windows(2) {
        let s = (w[1].1 - w[0].1) / Q::from_integer(w[1].0 - w[0].0);
        for _ in 0..(w[1].0 - w[0].0) {
            out.push(s);
        }
    }
    out
}

fn hull_value(pts: &[(i64, Q)], k: i64) -> Q {
    // minimum over chords, which is the lower hull at k
    let mut best: Option<Q> = None;
    for &(a, va) in pts {
        for &(b, vb) in pts {
            if a <= k && k <= b && a < b {
                let v = va + (vb - va) * Q::new(k - a, b - a);
                best = Some(best.map_or(v, |x: Q| x.min(v)));
            } else if a == k {
                best = Some(best.map_or(va, |x: Q| x.min(va)));
            }
        }
    }
    best.unwrap_or(Q::zero())
}

/// Newton point of `g` as an element `gσ`: slopes of `g σ(g) ⋯ σ^{m-1}(g)`
/// divided by `m`, the degree of the coefficient field over the fixed field.
pub fn newton_matrix(g: &LaurentMatrix) -> Result<NewtonPoint> {
    let s = g.field().m() as i64;
    let mut p = g.clone();
    let mut cur = g.clone();
    for _ in 1..s {
        cur = cur.sigma();
        p = p.mul(&cur);
    }
    let cp = charpoly(&p);
    let n = g.n() as i64;
    let mut pts = vec![];
    let mut unsure = vec![];
    for (k, c) in cp.iter().enumerate() {
        if c.is_certified() {
            pts.push((k as i64, Q::from_integer(c.valuation())));
        } else {
            unsure.push((k as i64, c.precision()));
        }
    }
    if !cp[n as usize].is_certified() {
        let have = cp[n as usize].precision();
        return Err(Error::InsufficientPrecision { have, required: have + 1 });
    }
    for &(k, prec) in &unsure {
        let h = hull_value(&pts, k);
        if Q::from_integer(prec) < h {
            return Err(Error::InsufficientPrecision {
                have: prec,
                required: h.ceil().to_integer(),
            });
        }
    }
    let mut slopes: Vec<Q> = hull_slopes(&pts).into_iter().map(|x| x / Q::from_integer(s)).collect();
    slopes.reverse();
    Ok(NewtonPoint(slopes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_examples() {
        let q = |a: i64| Q::from_integer(a);
        assert_eq!(hull_slopes(&[(0, q(0)), (2, q(1))]), vec![Q::new(1, 2), Q::new(1, 2)]);
        assert_eq!(hull_slopes(&[(0, q(0)), (1, q(0)), (2, q(1))]), vec![q(0), q(1)]);
        assert_eq!(hull_slopes(&[(0, q(0)), (1, q(3)), (2, q(2))]), vec![q(1), q(1)]);
        assert_eq!(hull_value(&[(0, q(0)), (2, q(2))], 1), q(1));
    }
}
