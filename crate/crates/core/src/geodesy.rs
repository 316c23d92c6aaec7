//! Geodesic vectors: the quadratic map ξ and its zero set.
//!
//! `ξ(X)` is the unique vector with `(ξ(X), Y) = ([X,Y], X)` for all `Y`.
//! Its zeros are exactly the `X` for which `exp(tX)` is a geodesic.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::metric::{self, MetricLieAlgebra};
use crate::sampling;
use crate::scalar::{Rational, Scalar};

/// `ξ(X) = G⁻¹ ad(X)ᵀ G X`.
pub fn xi<S: Scalar>(m: &MetricLieAlgebra<S>, x: &[S]) -> Result<Vec<S>> {
    let ad = m.algebra().ad_matrix(x)?;
    let gx = m.gram().mul_vec(x);
    let w = ad.transpose().mul_vec(&gx);
    Ok(m.gram_inverse().mul_vec(&w))
}

/// Jacobian of ξ at `X`: `H ↦ G⁻¹[(ad H)ᵀ G X + (ad X)ᵀ G H]`.
pub fn xi_jacobian<S: Scalar>(m: &MetricLieAlgebra<S>, x: &[S]) -> Result<Matrix<S>> {
    let g = m.algebra();
    let n = g.dim();
    let gx = m.gram().mul_vec(x);
    let ad = g.ad_matrix(x)?;
    let mut j = ad.transpose().mul(m.gram());
    for i in 0..n {
        for jj in 0..n {
            let mut acc = S::zero();
            for (k, gk) in gx.iter().enumerate() {
                let c = g.constant(i, jj, k);
                if !c.is_zero() {
                    acc = acc + c.clone() * gk.clone();
                }
            }
            j[(jj, i)] = j[(jj, i)].clone() + acc;
        }
    }
    Ok(m.gram_inverse().mul(&j))
}

/// `‖ξ(X)‖ ≤ tol` (exact zero on the rational backend).
pub fn is_geodesic_vector<S: Scalar>(m: &MetricLieAlgebra<S>, x: &[S], tol: f64) -> Result<bool> {
    let v = xi(m, x)?;
    Ok(if S::EXACT {
        linalg::is_zero_vec(&v, 0.0)
    } else {
        linalg::norm_f64(&v) <= tol
    })
}

/// The metric dual of `Y ↦ tr ad(Y)`.
pub fn delta<S: Scalar>(m: &MetricLieAlgebra<S>) -> Vec<S> {
    m.gram_inverse().mul_vec(&m.algebra().ad_traces())
}

/// `−Σ ξ(F_i)` over a `(·,·)`-orthonormal frame, evaluated on the
/// orthogonal frame built from the reference basis.
pub fn delta_from_xi<S: Scalar>(m: &MetricLieAlgebra<S>) -> Vec<S> {
    let n = m.dim();
    let start: Vec<Vec<S>> = (0..n).map(|i| linalg::basis_vector(n, i)).collect();
    let frame = m.orthogonal_basis(&start);
    delta_from_xi_frame(m, &frame).expect("Gram-Schmidt frame is orthogonal")
}

/// Same as [`delta_from_xi`] for a given orthogonal (not necessarily
/// normalized) frame `u_i`: `−Σ ξ(u_i) / (u_i, u_i)`, which equals the
/// orthonormal sum since ξ is quadratic.
pub fn delta_from_xi_frame<S: Scalar>(m: &MetricLieAlgebra<S>, frame: &[Vec<S>]) -> Result<Vec<S>> {
    let n = m.dim();
    let tol = S::default_tol();
    if frame.len() != n {
        return Err(Error::Dimension("frame must have dim vectors".into()));
    }
    for (a, u) in frame.iter().enumerate() {
        for v in &frame[a + 1..] {
            if !m.inner(u, v).is_negligible(tol) {
                return Err(Error::Invalid("frame is not orthogonal".into()));
            }
        }
    }
    let mut acc = vec![S::zero(); n];
    for u in frame {
        let s = S::one() / m.inner(u, u);
        acc = linalg::axpy(&acc, &-s, &xi(m, u)?);
    }
    Ok(acc)
}

/// Base point plus directions. `v = base + Σ t_i dirs_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFamily<S> {
    pub name: String,
    pub base: Vec<S>,
    pub directions: Vec<Vec<S>>,
}

impl<S: Scalar> AffineFamily<S> {
    pub fn new(name: impl Into<String>, base: Vec<S>, directions: Vec<Vec<S>>) -> Result<Self> {
        let n = base.len();
        if directions.iter().any(|d| d.len() != n) {
            return Err(Error::Dimension("family direction length".into()));
        }
        if !directions.is_empty() && Matrix::from_rows(&directions)?.rank(S::default_tol()) != directions.len() {
            return Err(Error::Invalid("family directions are dependent".into()));
        }
        Ok(AffineFamily {
            name: name.into(),
            base,
            directions,
        })
    }

    /// Linear subspace `{v : C v = 0}` for constraint rows `C`.
    pub fn from_constraints(name: impl Into<String>, dim: usize, rows: &[Vec<S>]) -> Result<Self> {
        let dirs = if rows.is_empty() {
            (0..dim).map(|i| linalg::basis_vector(dim, i)).collect()
        } else {
            Matrix::from_rows(rows)?.nullspace(S::default_tol())
        };
        Self::new(name, vec![S::zero(); dim], dirs)
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn point(&self, t: &[S]) -> Vec<S> {
        self.directions
            .iter()
            .zip(t)
            .fold(self.base.clone(), |acc, (d, ti)| linalg::axpy(&acc, ti, d))
    }

    /// Euclidean distance from `x` to the family (orthogonal projection).
    pub fn distance(&self, x: &[f64]) -> f64 {
        let base = linalg::to_f64_vec(&self.base);
        let r = linalg::sub(x, &base);
        if self.directions.is_empty() {
            return linalg::norm_f64(&r);
        }
        let k = self.directions.len();
        let d = DMatrix::from_fn(x.len(), k, |i, j| self.directions[j][i].to_f64());
        let qr = d.qr();
        let q = qr.q();
        let rv = nalgebra::DVector::from_column_slice(&r);
        let proj = &q * (q.transpose() * &rv);
        (rv - proj).norm()
    }

    pub fn is_linear(&self) -> bool {
        linalg::is_zero_vec(&self.base, S::default_tol())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyCheck<S> {
    pub passed: bool,
    pub samples: usize,
    /// First sample at which ξ does not vanish, with its ξ value.
    pub counterexample: Option<(Vec<S>, Vec<S>)>,
}

/// ξ vanishes at `samples` seeded random rational points of `fam`.
pub fn verify_family<S: Scalar>(
    m: &MetricLieAlgebra<S>,
    fam: &AffineFamily<S>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<FamilyCheck<S>> {
    let mut rng = sampling::rng(seed);
    for _ in 0..samples {
        let t: Vec<S> = sampling::scalar_vector(&mut rng, fam.dim());
        let p = fam.point(&t);
        let v = xi(m, &p)?;
        let ok = if S::EXACT {
            linalg::is_zero_vec(&v, 0.0)
        } else {
            linalg::norm_f64(&v) <= tol
        };
        if !ok {
            return Ok(FamilyCheck {
                passed: false,
                samples,
                counterexample: Some((p, v)),
            });
        }
    }
    Ok(FamilyCheck {
        passed: true,
        samples,
        counterexample: None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Zero {
    /// Unit vector, sign fixed so the first entry above 1e-9 in magnitude
    /// is positive.
    pub point: Vec<f64>,
    pub residual: f64,
    /// Index into the family list given to [`ZeroSetReport::cluster`].
    pub family: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSetReport {
    pub zeros: Vec<Zero>,
    pub restarts: usize,
    /// Restarts that reached the tolerance within the iteration budget.
    pub converged: usize,
    pub tol: f64,
}

impl ZeroSetReport {
    /// Assign each zero to the first family within `radius`.
    pub fn cluster<S: Scalar>(&mut self, families: &[AffineFamily<S>], radius: f64) {
        for z in &mut self.zeros {
            z.family = families.iter().position(|f| f.distance(&z.point) < radius);
        }
    }

    /// Number of zeros assigned to each family.
    pub fn family_hits(&self, families: usize) -> Vec<usize> {
        let mut hits = vec![0; families];
        for z in &self.zeros {
            if let Some(k) = z.family {
                hits[k] += 1;
            }
        }
        hits
    }

    pub fn unassigned(&self) -> usize {
        self.zeros.iter().filter(|z| z.family.is_none()).count()
    }
}

pub const NEWTON_MAX_ITER: usize = 100;
pub const NEWTON_TOL: f64 = 1e-12;
pub const FAMILY_RADIUS: f64 = 1e-6;

/// Newton iteration restricted to the unit sphere from one start.
/// Returns the final unit point and `‖ξ‖` there, or `None` if the budget
/// runs out.
pub fn newton_on_sphere(m: &MetricLieAlgebra<f64>, start: &[f64], tol: f64) -> Option<(Vec<f64>, f64)> {
    let n = m.dim();
    let normalize = |v: &[f64]| {
        let r = linalg::norm_f64(v);
        v.iter().map(|x| x / r).collect::<Vec<f64>>()
    };
    let mut x = normalize(start);
    for _ in 0..=NEWTON_MAX_ITER {
        let f = xi(m, &x).ok()?;
        let r = linalg::norm_f64(&f);
        if r < tol {
            return Some((x, r));
        }
        let j = xi_jacobian(m, &x).ok()?;
        // Jx = 2ξ(x), so an unconstrained step is purely radial; the extra
        // row keeps it tangent to the sphere.
        let jm = DMatrix::from_fn(n + 1, n, |a, b| if a < n { j[(a, b)] } else { x[b] });
        let svd = jm.svd(true, true);
        let smax = svd.singular_values.max();
        let pinv = svd.pseudo_inverse(1e-10 * smax.max(1e-300)).ok()?;
        let mut rhs = f.clone();
        rhs.push(0.0);
        let step = pinv * nalgebra::DVector::from_column_slice(&rhs);
        let next: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a - b).collect();
        let nr = linalg::norm_f64(&next);
        if !nr.is_finite() || nr < 1e-300 {
            return None;
        }
        x = normalize(&next);
    }
    None
}

fn canonical_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().copied().find(|x| x.abs() > 1e-9) {
        if first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Multi-start Newton on the unit sphere. Restart `i` uses the random
/// stream `i` of `seed`; results are merged in a fixed order, so the report
/// does not depend on thread scheduling.
pub fn zero_set_solve(m: &MetricLieAlgebra<f64>, restarts: usize, seed: u64, tol: f64) -> ZeroSetReport {
    let n = m.dim();
    let found: Vec<Option<(Vec<f64>, f64)>> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream(seed, i as u64);
            let start = sampling::unit_vector(&mut rng, n);
            newton_on_sphere(m, &start, tol)
        })
        .collect();
    let converged = found.iter().filter(|f| f.is_some()).count();
    let mut zeros: Vec<Zero> = found
        .into_iter()
        .flatten()
        .map(|(mut p, r)| {
            canonical_sign(&mut p);
            Zero {
                point: p,
                residual: r,
                family: None,
            }
        })
        .collect();
    zeros.sort_by(|a, b| {
        a.point
            .iter()
            .zip(&b.point)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    zeros.dedup_by(|a, b| linalg::norm_f64(&linalg::sub(&a.point, &b.point)) < 1e-9);
    ZeroSetReport {
        zeros,
        restarts,
        converged,
        tol,
    }
}

/// `n` linearly independent geodesic vectors, if found. Compact semisimple
/// algebras use [`metric::simultaneous_basis`], which always succeeds;
/// otherwise geodesic reference basis vectors are taken first and then
/// Newton zeros.
pub fn geodesic_basis_search(m: &MetricLieAlgebra<f64>, restarts: usize, seed: u64) -> Option<Vec<Vec<f64>>> {
    let n = m.dim();
    if let Ok(b) = metric::simultaneous_basis(m) {
        return Some(b.vectors);
    }
    let mut chosen: Vec<Vec<f64>> = Vec::new();
    let try_add = |v: Vec<f64>, chosen: &mut Vec<Vec<f64>>| {
        let mut rows = chosen.clone();
        rows.push(v.clone());
        if Matrix::from_rows(&rows).unwrap().rank(1e-6) == rows.len() {
            chosen.push(v);
        }
    };
    for i in 0..n {
        let e = linalg::basis_vector::<f64>(n, i);
        if is_geodesic_vector(m, &e, 1e-12).unwrap_or(false) {
            try_add(e, &mut chosen);
        }
    }
    if chosen.len() < n {
        for z in zero_set_solve(m, restarts, seed, NEWTON_TOL).zeros {
            try_add(z.point, &mut chosen);
            if chosen.len() == n {
                break;
            }
        }
    }
    (chosen.len() == n).then_some(chosen)
}

/// Exact check that `frame` is `(·,·)`-orthonormal.
pub fn is_orthonormal<S: Scalar>(m: &MetricLieAlgebra<S>, frame: &[Vec<S>], tol: f64) -> bool {
    frame.iter().enumerate().all(|(i, u)| {
        frame.iter().enumerate().all(|(j, v)| {
            let target = if i == j { S::one() } else { S::zero() };
            (m.inner(u, v) - target).is_negligible(tol)
        })
    })
}

/// The paper's three families for the su2⊕su2 example with parameter `d`,
/// as printed.
pub fn example_families<S: Scalar>(d: &S) -> Vec<AffineFamily<S>> {
    let z = S::zero;
    let o = S::one;
    let two = S::from_i64(2);
    let row = |v: Vec<S>| v;
    vec![
        // v2 = v3 = 0, v6 = d v1
        AffineFamily::from_constraints(
            "f1",
            6,
            &[
                row(vec![z(), o(), z(), z(), z(), z()]),
                row(vec![z(), z(), o(), z(), z(), z()]),
                row(vec![-d.clone(), z(), z(), z(), z(), o()]),
            ],
        )
        .unwrap(),
        // v5 = 2 v1 − v4, v6 = d v1 + v2 + v3
        AffineFamily::from_constraints(
            "f2",
            6,
            &[
                row(vec![-two, z(), z(), o(), o(), z()]),
                row(vec![-d.clone(), -o(), -o(), z(), z(), o()]),
            ],
        )
        .unwrap(),
        // v1 = d v3, v2 = v3, v4 = d v3, v5 = d v3
        AffineFamily::from_constraints(
            "f3",
            6,
            &[
                row(vec![o(), z(), -d.clone(), z(), z(), z()]),
                row(vec![z(), o(), -o(), z(), z(), z()]),
                row(vec![z(), z(), -d.clone(), o(), z(), z()]),
                row(vec![z(), z(), -d.clone(), z(), o(), z()]),
            ],
        )
        .unwrap(),
    ]
}

/// The closed form printed for diagonal su2 metrics with frame
/// `(aE1, bE2, cE3)`.
pub fn su2_printed_formula(a: &Rational, b: &Rational, c: &Rational, x: &[Rational]) -> Vec<Rational> {
    vec![
        a * (b - c) / (b * c) * &x[1] * &x[2],
        b * (c - a) / (a * c) * &x[0] * &x[2],
        c * (a - b) / (a * b) * &x[0] * &x[1],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::metric::{diagonal_su2, killing_metric, su2su2_family, InnerProduct};
    use proptest::prelude::*;

    type Q = Rational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| Q::from_i64(x)).collect()
    }

    fn solv2_std() -> MetricLieAlgebra<Q> {
        MetricLieAlgebra::new(catalog::solv2(), InnerProduct::identity(2)).unwrap()
    }

    #[test]
    fn su2_diagonal_values() {
        // independent sympy evaluation of the defining relation
        let m = diagonal_su2(q(1, 1), q(2, 1), q(3, 1)).unwrap();
        assert_eq!(xi(&m, &qv(&[1, 1, 1])).unwrap(), vec![q(5, 36), q(-32, 9), q(27, 4)]);
    }

    #[test]
    fn su2_general_closed_form() {
        let (a, b, c) = (q(2, 3), q(5, 1), q(7, 4));
        let m = diagonal_su2(a.clone(), b.clone(), c.clone()).unwrap();
        let x = vec![q(3, 2), q(-1, 5), q(4, 1)];
        let (a2, b2, c2) = (&a * &a, &b * &b, &c * &c);
        let expect = vec![
            &a2 * (&c2 - &b2) / (&b2 * &c2) * &x[1] * &x[2],
            &b2 * (&a2 - &c2) / (&a2 * &c2) * &x[0] * &x[2],
            &c2 * (&b2 - &a2) / (&a2 * &b2) * &x[0] * &x[1],
        ];
        assert_eq!(xi(&m, &x).unwrap(), expect);
    }

    #[test]
    fn printed_formula_is_minus_xi_of_square_root_frame() {
        // The printed closed form equals −ξ for G = diag(1/a, 1/b, 1/c).
        let (a, b, c) = (q(1, 1), q(2, 1), q(3, 1));
        let ip = InnerProduct::new(Matrix::from_diagonal(&[q(1, 1) / &a, q(1, 1) / &b, q(1, 1) / &c])).unwrap();
        let m = MetricLieAlgebra::new(catalog::su2(), ip).unwrap();
        let x = qv(&[1, 1, 1]);
        let printed = su2_printed_formula(&a, &b, &c, &x);
        assert_eq!(printed, vec![q(-1, 6), q(4, 3), q(-3, 2)]);
        let neg: Vec<Q> = xi(&m, &x).unwrap().into_iter().map(|v| -v).collect();
        assert_eq!(neg, printed);
    }

    #[test]
    fn bi_invariant_is_trivial() {
        let m = diagonal_su2(q(3, 1), q(3, 1), q(3, 1)).unwrap();
        assert_eq!(xi(&m, &qv(&[1, -2, 7])).unwrap(), qv(&[0, 0, 0]));
    }

    #[test]
    fn su2_geodesic_vectors() {
        let m = diagonal_su2(q(1, 1), q(2, 1), q(3, 1)).unwrap();
        for i in 0..3 {
            let e = linalg::scale(&q(-7, 3), &linalg::basis_vector(3, i));
            assert!(is_geodesic_vector(&m, &e, 0.0).unwrap());
        }
        assert!(!is_geodesic_vector(&m, &qv(&[1, 1, 0]), 0.0).unwrap());
        let berger = diagonal_su2(q(1, 1), q(1, 1), q(2, 1)).unwrap();
        assert!(is_geodesic_vector(&berger, &qv(&[3, -5, 0]), 0.0).unwrap());
        assert!(is_geodesic_vector(&berger, &qv(&[0, 0, 4]), 0.0).unwrap());
        assert!(!is_geodesic_vector(&berger, &qv(&[1, 0, 1]), 0.0).unwrap());
    }

    #[test]
    fn center_is_geodesic() {
        let g = catalog::heisenberg::<Q>();
        let ip = InnerProduct::new(
            Matrix::from_rows(&[
                vec![q(2, 1), q(1, 1), q(0, 1)],
                vec![q(1, 1), q(3, 1), q(1, 1)],
                vec![q(0, 1), q(1, 1), q(5, 1)],
            ])
            .unwrap(),
        )
        .unwrap();
        let m = MetricLieAlgebra::new(g.clone(), ip).unwrap();
        for z in g.center() {
            assert!(is_geodesic_vector(&m, &z, 0.0).unwrap());
        }
    }

    #[test]
    fn solv2_values() {
        let m = solv2_std();
        assert_eq!(xi(&m, &qv(&[1, 0])).unwrap(), qv(&[0, 0]));
        assert_eq!(xi(&m, &qv(&[0, 1])).unwrap(), qv(&[-1, 0]));
        // ξ(xE1 + yE2) = (−y², xy)
        assert_eq!(xi(&m, &qv(&[3, 2])).unwrap(), qv(&[-4, 6]));
        assert_eq!(delta(&m), qv(&[1, 0]));
        assert_eq!(delta_from_xi(&m), qv(&[1, 0]));
    }

    #[test]
    fn delta_vanishes_on_unimodular() {
        for d in [q(2, 1), q(1, 1000)] {
            let m = su2su2_family(&d).unwrap();
            assert_eq!(delta(&m), qv(&[0; 6]));
            assert_eq!(delta_from_xi(&m), qv(&[0; 6]));
        }
        let m = MetricLieAlgebra::new(catalog::abelian::<Q>(3), InnerProduct::identity(3)).unwrap();
        assert_eq!(delta(&m), qv(&[0; 3]));
        let k = killing_metric(&catalog::su2::<Q>()).unwrap();
        let m = MetricLieAlgebra::new(catalog::su2(), k).unwrap();
        assert_eq!(delta_from_xi(&m), qv(&[0; 3]));
    }

    #[test]
    fn delta_from_xi_frame_independent() {
        let g = catalog::solv2::<Q>();
        let ip =
            InnerProduct::new(Matrix::from_rows(&[vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]]).unwrap()).unwrap();
        let m = MetricLieAlgebra::new(g, ip).unwrap();
        let f1 = m.orthogonal_basis(&[qv(&[1, 0]), qv(&[0, 1])]);
        let f2 = m.orthogonal_basis(&[qv(&[1, 1]), qv(&[2, -1])]);
        assert_ne!(f1, f2);
        assert_eq!(delta_from_xi_frame(&m, &f1).unwrap(), delta(&m));
        assert_eq!(delta_from_xi_frame(&m, &f2).unwrap(), delta(&m));
        assert!(delta_from_xi_frame(&m, &[qv(&[1, 0]), qv(&[0, 1])]).is_err());
    }

    #[test]
    fn skew_ad_characterization() {
        // (ξ(X), Y) = 0 for all X iff ad(Y) is G-skew
        let check = |m: &MetricLieAlgebra<Q>, y: &[Q]| {
            let n = m.dim();
            let all_zero = (0..n).all(|i| {
                (0..n).all(|j| {
                    let x = linalg::add(&linalg::basis_vector(n, i), &linalg::basis_vector(n, j));
                    m.inner(&xi(m, &x).unwrap(), y) == q(0, 1)
                })
            });
            let ad = m.algebra().ad_matrix(y).unwrap();
            let ga = m.gram().mul(&ad);
            let skew = ga.add(&ga.transpose()).is_zero_within(0.0);
            (all_zero, skew)
        };
        let s = solv2_std();
        assert_eq!(check(&s, &qv(&[1, 0])), (false, false));
        assert_eq!(check(&s, &qv(&[0, 1])), (false, false));
        let k = killing_metric(&catalog::su2::<Q>()).unwrap();
        let b = MetricLieAlgebra::new(catalog::su2(), k).unwrap();
        assert_eq!(check(&b, &qv(&[1, 2, 3])), (true, true));
        let d = diagonal_su2(q(1, 1), q(1, 1), q(2, 1)).unwrap();
        assert_eq!(check(&d, &qv(&[0, 0, 1])), (true, true));
        assert_eq!(check(&d, &qv(&[1, 0, 0])), (false, false));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let m = su2su2_family(&q(2, 1)).unwrap().to_f64();
        let x = [0.3, -0.7, 1.1, 0.2, 0.5, -0.4];
        let j = xi_jacobian(&m, &x).unwrap();
        let h = 1e-6;
        for c in 0..6 {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[c] += h;
            xm[c] -= h;
            let fp = xi(&m, &xp).unwrap();
            let fm = xi(&m, &xm).unwrap();
            for r in 0..6 {
                let fd = (fp[r] - fm[r]) / (2.0 * h);
                assert!((fd - j[(r, c)]).abs() < 1e-6, "({r},{c})");
            }
        }
    }

    #[test]
    fn solver_on_su2_axes() {
        let m = diagonal_su2(1.0, 2.0, 3.0).unwrap();
        let rep = zero_set_solve(&m, 64, 0, NEWTON_TOL);
        assert!(rep.converged > 0);
        let axes: Vec<AffineFamily<f64>> = (0..3)
            .map(|i| AffineFamily::new(format!("E{}", i + 1), vec![0.0; 3], vec![linalg::basis_vector(3, i)]).unwrap())
            .collect();
        for z in &rep.zeros {
            assert!(z.residual < NEWTON_TOL);
            assert!(axes.iter().any(|a| a.distance(&z.point) < 1e-8), "{:?}", z.point);
        }
        let rep2 = zero_set_solve(&m, 64, 0, NEWTON_TOL);
        assert_eq!(rep, rep2);
    }

    #[test]
    fn solver_on_bi_invariant() {
        let g = catalog::su2::<f64>();
        let m = MetricLieAlgebra::new(g.clone(), killing_metric(&g).unwrap()).unwrap();
        let rep = zero_set_solve(&m, 20, 3, NEWTON_TOL);
        assert_eq!(rep.converged, 20);
        assert_eq!(rep.zeros.len(), 20);
    }

    #[test]
    fn basis_search() {
        let m = diagonal_su2(1.0, 2.0, 3.0).unwrap();
        let b = geodesic_basis_search(&m, 10, 0).unwrap();
        let mut idx: Vec<usize> = b
            .iter()
            .map(|v| v.iter().position(|x| x.abs() > 0.5).unwrap())
            .collect();
        idx.sort();
        assert_eq!(idx, vec![0, 1, 2]);
        let s = MetricLieAlgebra::new(catalog::solv2::<f64>(), InnerProduct::identity(2)).unwrap();
        assert!(geodesic_basis_search(&s, 50, 0).is_none());
        let a = MetricLieAlgebra::new(catalog::abelian::<f64>(3), InnerProduct::identity(3)).unwrap();
        let b = geodesic_basis_search(&a, 5, 0).unwrap();
        assert_eq!(b, (0..3).map(|i| linalg::basis_vector(3, i)).collect::<Vec<_>>());
    }

    #[test]
    fn orthonormal_geodesic_basis_implies_unimodular() {
        let m = diagonal_su2(q(1, 1), q(2, 1), q(3, 1)).unwrap();
        let frame = vec![qv(&[1, 0, 0]), qv(&[0, 2, 0]), qv(&[0, 0, 3])];
        assert!(is_orthonormal(&m, &frame, 0.0));
        assert!(frame.iter().all(|f| is_geodesic_vector(&m, f, 0.0).unwrap()));
        assert_eq!(delta(&m), qv(&[0, 0, 0]));
    }

    #[test]
    fn family_distance() {
        let f = AffineFamily::new("p", vec![0.0; 3], vec![vec![1.0, 1.0, 0.0]]).unwrap();
        assert!((f.distance(&[0.0, 0.0, 2.0]) - 2.0).abs() < 1e-14);
        assert!(f.distance(&[3.0, 3.0, 0.0]) < 1e-14);
        let fams = example_families(&q(2, 1));
        assert_eq!(fams.iter().map(|f| f.dim()).collect::<Vec<_>>(), vec![3, 4, 2]);
        assert_eq!(fams[0].point(&qv(&[1, 3, 5])).len(), 6);
    }

    fn rq() -> impl Strategy<Value = Q> {
        (-60i64..=60, 1i64..=12).prop_map(|(a, b)| Q::from_ratio(a, b))
    }

    fn pq() -> impl Strategy<Value = Q> {
        (1i64..=60, 1i64..=12).prop_map(|(a, b)| Q::from_ratio(a, b))
    }

    proptest! {
        #[test]
        fn xi_orthogonal_to_x(x in proptest::collection::vec(rq(), 6), d in pq()) {
            let m = su2su2_family(&d).unwrap();
            prop_assert_eq!(m.inner(&xi(&m, &x).unwrap(), &x), q(0, 1));
        }

        #[test]
        fn xi_two_homogeneous(x in proptest::collection::vec(rq(), 3), l in rq(), a in pq(), b in pq(), c in pq()) {
            let m = diagonal_su2(a, b, c).unwrap();
            let lhs = xi(&m, &linalg::scale(&l, &x)).unwrap();
            let rhs = linalg::scale(&(l.clone() * l), &xi(&m, &x).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn non_surjectivity_sign(x in proptest::collection::vec(rq(), 3), a in pq(), b in pq(), c in pq()) {
            let m = diagonal_su2(a.clone(), b.clone(), c.clone()).unwrap();
            let v = xi(&m, &x).unwrap();
            let prod = &v[0] * &v[1] * &v[2];
            // the product equals −(b²−c²)(c²−a²)(a²−b²)/(abc)²·(x1x2x3)²
            let s = (&b - &c) * (&c - &a) * (&a - &b);
            prop_assert!(prod * s <= q(0, 1));
        }

        #[test]
        fn delta_from_xi_agrees(seed in 0u64..1000) {
            let mut rng = sampling::rng(seed);
            let n = 3;
            let a = Matrix::from_fn(n, n, |i, j| {
                if j > i { q(0, 1) } else if i == j { sampling::positive_rational(&mut rng) } else { sampling::rational(&mut rng) }
            });
            let ip = InnerProduct::from_lower_triangular(&a).unwrap();
            let m = MetricLieAlgebra::new(catalog::solv2::<Q>().direct_sum(&catalog::abelian(1)), ip).unwrap();
            prop_assert_eq!(delta_from_xi(&m), delta(&m));
        }
    }
}
