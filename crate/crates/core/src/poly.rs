//! Univariate polynomials: characteristic polynomial, resultant,
//! discriminant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar};

/// Coefficients in ascending order; trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> S {
        self.coeffs.last().cloned().unwrap_or_else(S::zero)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| S::from_i64(k as i64) * c.clone())
                .collect(),
        )
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

/// `det(tI − M)` by the Faddeev–LeVerrier recurrence.
pub fn charpoly<S: Scalar>(m: &Matrix<S>) -> Result<Poly<S>> {
    if !m.is_square() {
        return Err(Error::Dimension(
            "characteristic polynomial of non-square matrix".into(),
        ));
    }
    let n = m.rows();
    let mut c = vec![S::zero(); n + 1];
    c[n] = S::one();
    let mut mk = Matrix::<S>::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&mk);
        for i in 0..n {
            next[(i, i)] = next[(i, i)].clone() + c[n - k + 1].clone();
        }
        mk = next;
        c[n - k] = -m.mul(&mk).trace() / S::from_i64(k as i64);
    }
    Ok(Poly::new(c))
}

fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Pseudo-remainder `lc(b)^(deg a − deg b + 1) · a mod b`.
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut e = a.len() - b.len() + 1;
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (k, bk) in b.iter().enumerate() {
            r[dr - db + k] -= &lr * bk;
        }
        trim(&mut r);
        e -= 1;
    }
    let f = num_traits::pow(lb, e);
    r.iter().map(|c| c * &f).collect()
}

/// Resultant of integer polynomials (ascending coefficients) by the
/// subresultant pseudo-remainder sequence.
pub fn resultant_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    let ca = content(&a);
    let cb = content(&b);
    let t = num_traits::pow(ca.clone(), b.len() - 1) * num_traits::pow(cb.clone(), a.len() - 1);
    a.iter_mut().for_each(|c| *c /= &ca);
    b.iter_mut().for_each(|c| *c /= &cb);
    let mut s = BigInt::one();
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            s = -s;
        }
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        if b.len() == 1 {
            let da = a.len() - 1;
            let hh = if da == 0 {
                h.clone()
            } else {
                num_traits::pow(b[0].clone(), da) / num_traits::pow(h.clone(), da - 1)
            };
            return s * t * hh;
        }
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            return BigInt::zero();
        }
        let div = &g * num_traits::pow(h.clone(), delta);
        a = b;
        b = r.iter().map(|c| c / &div).collect();
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
    }
}

/// Integer multiple of `p` (clearing denominators) and the multiplier.
fn integer_multiple(p: &Poly<Rational>) -> (Vec<BigInt>, BigInt) {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    (ints, l)
}

pub fn resultant(p: &Poly<Rational>, q: &Poly<Rational>) -> Rational {
    let (Some(dp), Some(dq)) = (p.degree(), q.degree()) else {
        return Rational::zero();
    };
    let (pi, lp) = integer_multiple(p);
    let (qi, lq) = integer_multiple(q);
    // Res(cP, Q) = c^deg Q · Res(P, Q)
    let r = resultant_int(&pi, &qi);
    Rational::new(r, num_traits::pow(lp, dq) * num_traits::pow(lq, dp))
}

/// `(−1)^(n(n−1)/2) Res(p, p′) / lc(p)`; zero iff `p` has a repeated root.
pub fn discriminant(p: &Poly<Rational>) -> Result<Rational> {
    let n = p
        .degree()
        .ok_or_else(|| Error::Invalid("discriminant of the zero polynomial".into()))?;
    if n == 0 {
        return Err(Error::Invalid("discriminant of a constant".into()));
    }
    let r = resultant(p, &p.derivative()) / p.leading();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -r } else { r })
}

/// Discriminant of `det(tI − M)`. Requires the exact backend: the values
/// involved routinely exceed the `f64` range.
pub fn charpoly_discriminant<S: Scalar>(m: &Matrix<S>) -> Result<Rational> {
    if !S::EXACT {
        return Err(Error::RequiresExact("charpoly_discriminant"));
    }
    let mq = m.map(|x| x.to_rational().expect("exact backend"));
    discriminant(&charpoly(&mq)?)
}

/// Sylvester matrix of `p`, `q` (for cross-checking the resultant).
pub fn sylvester(p: &Poly<Rational>, q: &Poly<Rational>) -> Matrix<Rational> {
    let m = p.degree().unwrap_or(0);
    let n = q.degree().unwrap_or(0);
    let size = m + n;
    let mut s = Matrix::zeros(size, size);
    for r in 0..n {
        for (k, c) in p.coeffs().iter().rev().enumerate() {
            s[(r, r + k)] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in q.coeffs().iter().rev().enumerate() {
            s[(n + r, r + k)] = c.clone();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn qp(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn charpoly_small() {
        let m = Matrix::from_diagonal(&[q(1), q(2)]);
        assert_eq!(charpoly(&m).unwrap(), qp(&[2, -3, 1]));
        let m = Matrix::from_rows(&[vec![q(0), q(-1)], vec![q(1), q(0)]]).unwrap();
        assert_eq!(charpoly(&m).unwrap(), qp(&[1, 0, 1]));
    }

    #[test]
    fn discriminant_small() {
        assert_eq!(
            charpoly_discriminant(&Matrix::from_diagonal(&[q(1), q(2)])).unwrap(),
            q(1)
        );
        assert_eq!(charpoly_discriminant(&Matrix::<Rational>::identity(2)).unwrap(), q(0));
        // t³ + pt + q has −4p³ − 27q²
        assert_eq!(discriminant(&qp(&[5, -2, 0, 1])).unwrap(), q(32 - 675));
        assert_eq!(
            charpoly_discriminant(&Matrix::<f64>::identity(2)),
            Err(Error::RequiresExact("charpoly_discriminant"))
        );
    }

    #[test]
    fn resultant_of_common_root_is_zero() {
        // (t−1)(t−2) and (t−2)(t+5)
        assert_eq!(resultant(&qp(&[2, -3, 1]), &qp(&[-10, 3, 1])), q(0));
    }

    fn poly(deg: usize) -> impl Strategy<Value = Poly<Rational>> {
        (
            proptest::collection::vec((-20i64..=20, 1i64..=6), deg),
            (1i64..=9, 1i64..=4),
        )
            .prop_map(|(c, (ln, ld))| {
                let mut v: Vec<Rational> = c.into_iter().map(|(a, b)| Rational::new(a.into(), b.into())).collect();
                v.push(Rational::new(ln.into(), ld.into()));
                Poly::new(v)
            })
    }

    proptest! {
        #[test]
        fn resultant_matches_sylvester(p in poly(4), r in poly(3)) {
            prop_assert_eq!(resultant(&p, &r), sylvester(&p, &r).det());
        }

        #[test]
        fn discriminant_matches_root_product(roots in proptest::collection::vec(-9i64..=9, 2..6)) {
            let mut p = qp(&[1]);
            for &r in &roots {
                let mut c = vec![q(0); p.coeffs().len() + 1];
                for (k, a) in p.coeffs().iter().enumerate() {
                    c[k + 1] = c[k + 1].clone() + a.clone();
                    c[k] = c[k].clone() - a.clone() * q(r);
                }
                p = Poly::new(c);
            }
            let mut prod = q(1);
            for i in 0..roots.len() {
                for j in i + 1..roots.len() {
                    prod *= q((roots[i] - roots[j]).pow(2));
                }
            }
            prop_assert_eq!(discriminant(&p).unwrap(), prod);
        }

        #[test]
        fn charpoly_matches_determinant(v in proptest::collection::vec(-6i64..=6, 9), t in -5i64..=5) {
            let m = Matrix::from_fn(3, 3, |i, j| q(v[i * 3 + j]));
            let shifted = Matrix::from_fn(3, 3, |i, j| if i == j { q(t) } else { q(0) }).sub(&m);
            prop_assert_eq!(charpoly(&m).unwrap().eval(&q(t)), shifted.det());
        }
    }
}
