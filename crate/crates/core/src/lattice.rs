//! Small exact integer and rational linear algebra.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub type Q = Ratio<i64>;

/// Dense integer matrix stored row-major as nested vectors.
pub type IMat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for l in 0..k {
            let x = a[i][l];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * b[l][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(v: &[i64], a: &IMat) -> Vec<i64> {
    let m = if a.is_empty() { 0 } else { a[0].len() };
    let mut out = vec![0i64; m];
    for (l, &x) in v.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for j in 0..m {
            out[j] += x * a[l][j];
        }
    }
    out
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_q(a: &[i64], b: &[Q]) -> Q {
    a.iter()
        .zip(b)
        .fold(Q::zero(), |acc, (x, y)| acc + y * *x)
}

pub fn transpose(a: &IMat) -> IMat {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

/// Integer inverse of a unimodular matrix, `None` if not invertible over Z.
pub fn unimodular_inverse(a: &IMat) -> Option<IMat> {
    let n = a.len();
    let qa: Vec<Vec<Q>> = a
        .iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x)).collect())
        .collect();
    let inv = invert_q(&qa)?;
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if !inv[i][j].is_integer() {
                return None;
            }
            out[i][j] = inv[i][j].to_integer();
        }
    }
    Some(out)
}

pub fn invert_q(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| Q::from_integer(i64::from(i == j))));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in 0..2 * n {
                    let v = m[col][c];
                    m[r][c] -= f * v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `a x = b` over Q when `a` is square and invertible.
pub fn solve_q(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let inv = invert_q(a)?;
    Some(
        inv.iter()
            .map(|row| row.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y))
            .collect(),
    )
}

/// Rank of an integer matrix (over Q).
pub fn rank(a: &IMat) -> usize {
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x)).collect())
        .collect();
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c] / m[r][c];
                for j in 0..cols {
                    let v = m[r][j];
                    m[i][j] -= f * v;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Smith normal form `u * a * v = d` of an `r x k` integer matrix.
///
/// Returns `(u, diag)` where `diag[i]` is the i-th diagonal entry of `d`
/// (zero for rows beyond the rank). Only `u` is needed to project onto the
/// cokernel, so `v` is not tracked.
pub fn smith_left(a: &IMat, rows: usize) -> (IMat, Vec<i64>) {
    let mut m = a.clone();
    let cols = if rows == 0 || m.is_empty() { 0 } else { m[0].len() };
    let mut u = identity(rows);
    let mut diag = vec![0i64; rows];
    let mut t = 0;
    while t < rows && t < cols {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let f = m[i][t] / p;
                if f != 0 {
                    for j in 0..cols {
                        m[i][j] -= f * m[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= f * u[t][j];
                    }
                }
                if m[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let f = m[t][j] / p;
                if f != 0 {
                    for row in m.iter_mut() {
                        row[j] -= f * row[t];
                    }
                }
                if m[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility of the rest of the block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| m[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in 0..cols {
                            m[t][j] += m[i][j];
                        }
                        for j in 0..rows {
                            u[t][j] += u[i][j];
                        }
                        continue;
                    }
                }
            }
            // move smallest entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
                u.swap(t, best.0);
            }
            if best.1 != t {
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        if m[t][t] < 0 {
            for j in 0..cols {
                m[t][j] = -m[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
        diag[t] = m[t][t];
        t += 1;
    }
    (u, diag)
}

/// Row Hermite normal form of a full-row-rank integer matrix: pivots positive,
/// entries above each pivot reduced into `[0, pivot)`.
pub fn row_hnf(a: &IMat) -> IMat {
    let mut m = a.clone();
    let rows = m.len();
    if rows == 0 {
        return m;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| m[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                let f = m[i][c] / m[r][c];
                if f != 0 {
                    for j in 0..cols {
                        m[i][j] -= f * m[r][j];
                    }
                }
                if m[i][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            for x in m[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let f = m[i][c].div_euclid(m[r][c]);
            if f != 0 {
                for j in 0..cols {
                    m[i][j] -= f * m[r][j];
                }
            }
        }
        r += 1;
    }
    m
}

pub fn q_is_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Q::new(n.trim().parse().ok()?, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_gl_coroots() {
        // coroots e1-e2, e2-e3 in Z^3
        let a = vec![vec![1, 0], vec![-1, 1], vec![0, -1]];
        let (u, d) = smith_left(&a, 3);
        assert_eq!(&d[..2], &[1, 1]);
        assert_eq!(d[2], 0);
        // the free row must vanish on the coroots
        assert_eq!(dot(&u[2], &[1, -1, 0]), 0);
        assert_eq!(dot(&u[2], &[0, 1, -1]), 0);
        assert_eq!(u[2].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1, 1]);
    }

    #[test]
    fn smith_detects_torsion() {
        // Z^1 / 2Z
        let (_, d) = smith_left(&vec![vec![2]], 1);
        assert_eq!(d, vec![2]);
        let (_, d) = smith_left(&vec![vec![4, 6]], 1);
        assert_eq!(d, vec![2]);
    }

    #[test]
    fn hnf_normalizes_sign() {
        assert_eq!(row_hnf(&vec![vec![-1, -1, -1]]), vec![vec![1, 1, 1]]);
        assert_eq!(
            row_hnf(&vec![vec![0, 2, 1], vec![1, 1, 0]]),
            vec![vec![1, 1, 0], vec![0, 2, 1]]
        );
    }

    #[test]
    fn rational_roundtrip() {
        for s in ["1/2", "-3/4", "5", "0"] {
            assert_eq!(format_q(&parse_q(s).unwrap()), s);
        }
        assert!(parse_q("1/0").is_none());
    }

    #[test]
    fn inverse_over_z() {
        let a = vec![vec![2, 1], vec![1, 1]];
        assert_eq!(unimodular_inverse(&a).unwrap(), vec![vec![1, -1], vec![-1, 2]]);
        assert!(unimodular_inverse(&vec![vec![2]]).is_none());
    }
}
