//! Integer-relation tools: continued fractions and exact LLL reduction.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Rational;

/// Convergents `p/q` of `x` with `0 < q ≤ max_den`, as `(p, q)`.
pub fn convergents(x: f64, max_den: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e18 {
            break;
        }
        let a = a as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as i128 || p2.abs() > i64::MAX as i128 {
            break;
        }
        out.push((p2 as i64, q2 as i64));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    out
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(b: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>, Vec<Rational>) {
    let n = b.len();
    let mut bs: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = if norms[j] == Rational::zero() {
                Rational::zero()
            } else {
                dot(&b[i], &bs[j]) / &norms[j]
            };
            for (vk, bk) in v.iter_mut().zip(&bs[j]) {
                *vk -= &mu[i][j] * bk;
            }
        }
        norms.push(dot(&v, &v));
        bs.push(v);
    }
    (bs, mu, norms)
}

/// LLL reduction (`δ = 3/4`) of the rows of `basis`, exactly.
pub fn lll(basis: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = basis.len();
    let mut b: Vec<Vec<Rational>> = basis
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let delta = Rational::new(3.into(), 4.into());
    let half = Rational::new(1.into(), 2.into());
    let (_, mut mu, mut norms) = gram_schmidt(&b);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let r = mu[k][j].round();
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &r * y;
                }
                let (_, m2, n2) = gram_schmidt(&b);
                mu = m2;
                norms = n2;
            }
        }
        let lhs = norms[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let (_, m2, n2) = gram_schmidt(&b);
            mu = m2;
            norms = n2;
            k = (k - 1).max(1);
        }
    }
    b.into_iter()
        .map(|r| r.into_iter().map(|x| x.to_integer()).collect())
        .collect()
}

/// Candidate integer relations for `thetas`: first `n` coordinates of the
/// LLL-reduced rows of `[I | round(scale·θ)]`.
pub fn relation_candidates(thetas: &[f64], scale: f64) -> Vec<Vec<i64>> {
    let n = thetas.len();
    let basis: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigInt> = (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect();
            row.push(float_to_bigint((scale * thetas[i]).round()));
            row
        })
        .collect();
    lll(&basis)
        .into_iter()
        .filter_map(|r| r[..n].iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>())
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect()
}

fn float_to_bigint(x: f64) -> BigInt {
    Rational::from_float(x).map_or_else(BigInt::zero, |r| r.to_integer())
}

/// Same relation with its first nonzero entry positive.
pub fn normalize_sign(r: &mut [i64]) {
    if r.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        r.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Rank of a set of integer vectors.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = crate::linalg::Matrix::from_fn(rows.len(), rows[0].len(), |i, j| {
        Rational::from_integer(rows[i][j].into())
    });
    m.rank(0.0)
}
