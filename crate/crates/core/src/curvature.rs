//! Levi-Civita connection and curvature of left-invariant metrics.
//!
//! Elements of the algebra are left-invariant fields, so the Koszul
//! formula reduces to `2(∇_X Y, Z) = ([X,Y],Z) − ([Y,Z],X) + ([Z,X],Y)`
//! and `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z` has no derivative terms.

use crate::algebra::Subalgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::metric::MetricLieAlgebra;
use crate::poly;
use crate::scalar::{Rational, Scalar};

/// `Γ[i][j] = ∇_{E_i} E_j` together with the metric it came from.
#[derive(Clone, Debug)]
pub struct ConnectionTable<S> {
    m: MetricLieAlgebra<S>,
    gamma: Vec<Vec<S>>,
}

impl<S: Scalar> ConnectionTable<S> {
    pub fn new(m: &MetricLieAlgebra<S>) -> Self {
        let g = m.algebra();
        let n = g.dim();
        let gram = m.gram();
        // b[(i*n + j)*n + k] = ([E_i,E_j], E_k)
        let mut b = vec![S::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut acc = S::zero();
                    for l in 0..n {
                        let c = g.constant(i, j, l);
                        if !c.is_zero() {
                            acc = acc + c.clone() * gram[(l, k)].clone();
                        }
                    }
                    b[(i * n + j) * n + k] = acc;
                }
            }
        }
        let at = |i: usize, j: usize, k: usize| b[(i * n + j) * n + k].clone();
        let half = S::from_ratio(1, 2);
        let mut gamma = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let w: Vec<S> = (0..n)
                    .map(|k| half.clone() * (at(i, j, k) - at(j, k, i) + at(k, i, j)))
                    .collect();
                gamma.push(m.gram_inverse().mul_vec(&w));
            }
        }
        ConnectionTable { m: m.clone(), gamma }
    }

    pub fn metric(&self) -> &MetricLieAlgebra<S> {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn gamma(&self, i: usize, j: usize) -> &[S] {
        &self.gamma[i * self.dim() + j]
    }

    pub fn nabla(&self, x: &[S], y: &[S]) -> Vec<S> {
        let n = self.dim();
        let mut out = vec![S::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                out = linalg::axpy(&out, &(xi.clone() * yj.clone()), self.gamma(i, j));
            }
        }
        out
    }

    pub fn riemann(&self, x: &[S], y: &[S], z: &[S]) -> Vec<S> {
        let xy = self.m.algebra().bracket_unchecked(x, y);
        let a = self.nabla(x, &self.nabla(y, z));
        let b = self.nabla(y, &self.nabla(x, z));
        let c = self.nabla(&xy, z);
        linalg::sub(&linalg::sub(&a, &b), &c)
    }

    /// `(R(X,Y)Y, X) / ((X,X)(Y,Y) − (X,Y)²)`.
    pub fn sectional(&self, x: &[S], y: &[S]) -> Result<S> {
        let den = self.m.inner(x, x) * self.m.inner(y, y) - {
            let xy = self.m.inner(x, y);
            xy.clone() * xy
        };
        if den.is_negligible(S::default_tol()) || den <= S::zero() {
            return Err(Error::Invalid("sectional curvature of a degenerate plane".into()));
        }
        let r = self.riemann(x, y, y);
        Ok(self.m.inner(&r, x) / den)
    }

    /// `Ric(X, Y) = tr(Z ↦ R(Z,X)Y)` in the reference basis.
    pub fn ricci_form(&self) -> Matrix<S> {
        let n = self.dim();
        let e: Vec<Vec<S>> = (0..n).map(|i| linalg::basis_vector(n, i)).collect();
        let mut out = Matrix::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let mut acc = S::zero();
                for (k, ek) in e.iter().enumerate() {
                    acc = acc + self.riemann(ek, &e[a], &e[b])[k].clone();
                }
                out[(a, b)] = acc.clone();
                out[(b, a)] = acc;
            }
        }
        out
    }

    /// The `(·,·)`-self-adjoint operator with `(Ric X, Y) = Ric(X, Y)`.
    pub fn ricci_operator(&self) -> Matrix<S> {
        self.m.gram_inverse().mul(&self.ricci_form())
    }

    /// Normal part of `∇_X Y` with respect to `sub`.
    pub fn second_fundamental_form(&self, sub: &Subalgebra<S>, x: &[S], y: &[S]) -> Result<Vec<S>> {
        let tol = S::default_tol();
        if !sub.contains(x, tol) || !sub.contains(y, tol) {
            return Err(Error::Invalid(
                "second fundamental form arguments must lie in the subalgebra".into(),
            ));
        }
        let v = self.nabla(x, y);
        Ok(linalg::sub(&v, &self.project(sub, &v)?))
    }

    /// `(·,·)`-orthogonal projection onto `sub`.
    pub fn project(&self, sub: &Subalgebra<S>, v: &[S]) -> Result<Vec<S>> {
        let basis = sub.span();
        if basis.is_empty() {
            return Ok(vec![S::zero(); v.len()]);
        }
        let k = basis.len();
        let gs = Matrix::from_fn(k, k, |a, b| self.m.inner(&basis[a], &basis[b]));
        let rhs: Vec<S> = basis.iter().map(|u| self.m.inner(u, v)).collect();
        let coef = gs.solve_vec(&rhs, S::default_tol())?;
        Ok(basis
            .iter()
            .zip(&coef)
            .fold(vec![S::zero(); v.len()], |acc, (u, c)| linalg::axpy(&acc, c, u)))
    }

    /// Largest `(·,·)`-norm of the second fundamental form over basis pairs.
    pub fn second_fundamental_norm(&self, sub: &Subalgebra<S>) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (a, u) in sub.span().iter().enumerate() {
            for v in &sub.span()[a..] {
                let al = self.second_fundamental_form(sub, u, v)?;
                worst = worst.max(self.m.inner(&al, &al).to_f64().max(0.0).sqrt());
            }
        }
        Ok(worst)
    }

    pub fn is_totally_geodesic(&self, sub: &Subalgebra<S>, tol: f64) -> Result<bool> {
        for (a, u) in sub.span().iter().enumerate() {
            for v in &sub.span()[a..] {
                let al = self.second_fundamental_form(sub, u, v)?;
                if !al.iter().all(|c| c.is_negligible(tol)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Max over basis pairs of `Γ_ij − Γ_ji − [E_i,E_j]`.
    pub fn torsion_residual(&self) -> f64 {
        let n = self.dim();
        let g = self.m.algebra();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let br = g.bracket_unchecked(&linalg::basis_vector(n, i), &linalg::basis_vector(n, j));
                let r = linalg::sub(&linalg::sub(self.gamma(i, j), self.gamma(j, i)), &br);
                worst = worst.max(linalg::max_abs(&r));
            }
        }
        worst
    }

    /// Max over `i, j, k` of `(Γ_ij, E_k) + (E_j, Γ_ik)`.
    pub fn metric_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ej = linalg::basis_vector(n, j);
                    let ek = linalg::basis_vector(n, k);
                    let r = self.m.inner(self.gamma(i, j), &ek) + self.m.inner(&ej, self.gamma(i, k));
                    worst = worst.max(r.to_f64().abs());
                }
            }
        }
        worst
    }

    /// Exact version of the two residual checks.
    pub fn is_levi_civita(&self) -> bool {
        let n = self.dim();
        let g = self.m.algebra();
        let tol = S::default_tol();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let ei = linalg::basis_vector(n, i);
                let ej = linalg::basis_vector(n, j);
                let br = g.bracket_unchecked(&ei, &ej);
                let tors = linalg::sub(&linalg::sub(self.gamma(i, j), self.gamma(j, i)), &br);
                linalg::is_zero_vec(&tors, tol)
                    && (0..n).all(|k| {
                        let ek = linalg::basis_vector(n, k);
                        (self.m.inner(self.gamma(i, j), &ek) + self.m.inner(&ej, self.gamma(i, k))).is_negligible(tol)
                    })
            })
        })
    }
}

pub fn nabla<S: Scalar>(m: &MetricLieAlgebra<S>, x: &[S], y: &[S]) -> Vec<S> {
    ConnectionTable::new(m).nabla(x, y)
}

pub fn riemann<S: Scalar>(m: &MetricLieAlgebra<S>, x: &[S], y: &[S], z: &[S]) -> Vec<S> {
    ConnectionTable::new(m).riemann(x, y, z)
}

pub fn sectional<S: Scalar>(m: &MetricLieAlgebra<S>, x: &[S], y: &[S]) -> Result<S> {
    ConnectionTable::new(m).sectional(x, y)
}

pub fn ricci_operator<S: Scalar>(m: &MetricLieAlgebra<S>) -> Matrix<S> {
    ConnectionTable::new(m).ricci_operator()
}

/// Discriminant of the characteristic polynomial of the Ricci operator.
pub fn ricci_discriminant(m: &MetricLieAlgebra<Rational>) -> Result<Rational> {
    poly::charpoly_discriminant(&ricci_operator(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::geodesy::xi;
    use crate::metric::{diagonal_su2, killing_metric, su2su2_family, InnerProduct};
    use proptest::prelude::*;

    type Q = Rational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| Q::from_i64(x)).collect()
    }

    fn bi_su2() -> MetricLieAlgebra<Q> {
        let g = catalog::su2::<Q>();
        MetricLieAlgebra::new(g.clone(), killing_metric(&g).unwrap()).unwrap()
    }

    fn solv2() -> MetricLieAlgebra<Q> {
        MetricLieAlgebra::new(catalog::solv2(), InnerProduct::identity(2)).unwrap()
    }

    #[test]
    fn bi_invariant_connection_is_half_bracket() {
        let m = bi_su2();
        let t = ConnectionTable::new(&m);
        let (x, y, z) = (qv(&[1, 2, -1]), qv(&[0, 3, 5]), qv(&[2, -1, 1]));
        let br = m.algebra().bracket(&x, &y).unwrap();
        assert_eq!(t.nabla(&x, &y), linalg::scale(&q(1, 2), &br));
        let rz = m.algebra().bracket(&br, &z).unwrap();
        assert_eq!(t.riemann(&x, &y, &z), linalg::scale(&q(-1, 4), &rz));
    }

    #[test]
    fn hyperbolic_plane() {
        let t = ConnectionTable::new(&solv2());
        assert_eq!(t.gamma(1, 1), &qv(&[1, 0])[..]);
        assert_eq!(t.gamma(0, 0), &qv(&[0, 0])[..]);
        assert_eq!(t.gamma(0, 1), &qv(&[0, 0])[..]);
        assert_eq!(t.riemann(&qv(&[1, 0]), &qv(&[0, 1]), &qv(&[0, 1])), qv(&[-1, 0]));
        assert_eq!(t.sectional(&qv(&[1, 0]), &qv(&[0, 1])).unwrap(), q(-1, 1));
        assert_eq!(t.sectional(&qv(&[2, 3]), &qv(&[-1, 7])).unwrap(), q(-1, 1));
    }

    #[test]
    fn flat_and_round() {
        let a = MetricLieAlgebra::new(catalog::abelian::<Q>(3), InnerProduct::identity(3)).unwrap();
        let t = ConnectionTable::new(&a);
        assert_eq!(
            t.riemann(&qv(&[1, 2, 3]), &qv(&[0, 1, 0]), &qv(&[4, 0, 1])),
            qv(&[0, 0, 0])
        );
        assert_eq!(t.sectional(&qv(&[1, 0, 0]), &qv(&[0, 1, 0])).unwrap(), q(0, 1));
        assert!(t.ricci_operator().is_zero_within(0.0));
        let b = ConnectionTable::new(&bi_su2());
        assert_eq!(b.sectional(&qv(&[1, 0, 0]), &qv(&[0, 1, 0])).unwrap(), q(1, 4));
        assert_eq!(b.ricci_operator(), Matrix::identity(3).scale(&q(1, 2)));
        assert!(b.sectional(&qv(&[1, 0, 0]), &qv(&[2, 0, 0])).is_err());
    }

    #[test]
    fn example_connection_identity() {
        // 2(∇_X U, Y) = α⟨U,V⟩⟨[Y,X],V⟩ for X, U in the Cartan subalgebra
        let g = catalog::su2_su2::<Q>();
        let base = killing_metric(&g).unwrap();
        let v = qv(&[2, 1, 0, -1, 0, 0]);
        let alpha = q(1, 1);
        let ip = base.rank_one_perturbation(&v, &alpha).unwrap();
        let m = MetricLieAlgebra::new(g.clone(), ip).unwrap();
        let t = ConnectionTable::new(&m);
        let x = qv(&[1, 0, 0, 2, 0, 0]);
        let u = qv(&[2, 0, 0, -1, 0, 0]);
        for j in 0..6 {
            let y = linalg::basis_vector::<Q>(6, j);
            let lhs = q(2, 1) * m.inner(&t.nabla(&x, &u), &y);
            let yx = g.bracket(&y, &x).unwrap();
            let rhs = alpha.clone() * base.ip(&u, &v) * base.ip(&yx, &v);
            assert_eq!(lhs, rhs, "Y = E{}", j + 1);
        }
    }

    #[test]
    fn cartan_torus_dichotomy() {
        let g = catalog::su2_su2::<Q>();
        let base = killing_metric(&g).unwrap();
        let t_sub = Subalgebra::new(&g, vec![qv(&[1, 0, 0, 0, 0, 0]), qv(&[0, 0, 0, 1, 0, 0])]).unwrap();
        let bi = ConnectionTable::new(&MetricLieAlgebra::new(g.clone(), base.clone()).unwrap());
        assert!(bi.is_totally_geodesic(&t_sub, 0.0).unwrap());
        let pert = base.rank_one_perturbation(&qv(&[2, 1, 0, -1, 0, 0]), &q(1, 1)).unwrap();
        let pt = ConnectionTable::new(&MetricLieAlgebra::new(g.clone(), pert).unwrap());
        assert!(!pt.is_totally_geodesic(&t_sub, 0.0).unwrap());
        let x = qv(&[1, 0, 0, 2, 0, 0]);
        let u = qv(&[2, 0, 0, -1, 0, 0]);
        assert_ne!(pt.second_fundamental_form(&t_sub, &x, &u).unwrap(), qv(&[0; 6]));
        assert!(pt
            .second_fundamental_form(&t_sub, &x, &qv(&[0, 1, 0, 0, 0, 0]))
            .is_err());
    }

    #[test]
    fn geodesic_lines_are_totally_geodesic() {
        let m = diagonal_su2(q(1, 1), q(1, 1), q(2, 1)).unwrap();
        let t = ConnectionTable::new(&m);
        let sub = Subalgebra::new(m.algebra(), vec![qv(&[0, 0, 1])]).unwrap();
        assert!(t.is_totally_geodesic(&sub, 0.0).unwrap());
        let sub = Subalgebra::new(m.algebra(), vec![qv(&[1, 0, 1])]).unwrap();
        assert!(!t.is_totally_geodesic(&sub, 0.0).unwrap());
        let a = MetricLieAlgebra::new(catalog::abelian::<Q>(3), InnerProduct::identity(3)).unwrap();
        let sub = Subalgebra::new(a.algebra(), vec![qv(&[1, 1, 0]), qv(&[0, 1, 2])]).unwrap();
        assert!(ConnectionTable::new(&a).is_totally_geodesic(&sub, 0.0).unwrap());
    }

    #[test]
    fn residuals_vanish_on_catalog() {
        for m in [
            bi_su2(),
            solv2(),
            su2su2_family(&q(3, 1)).unwrap(),
            diagonal_su2(q(1, 1), q(2, 1), q(3, 1)).unwrap(),
        ] {
            let t = ConnectionTable::new(&m);
            assert!(t.is_levi_civita());
            assert_eq!(t.torsion_residual(), 0.0);
            assert_eq!(t.metric_residual(), 0.0);
        }
    }

    #[test]
    fn small_discriminants() {
        let m = diagonal_su2(q(1, 1), q(2, 1), q(3, 1)).unwrap();
        assert_ne!(ricci_discriminant(&m).unwrap(), q(0, 1));
        assert_eq!(ricci_discriminant(&bi_su2()).unwrap(), q(0, 1));
    }

    #[test]
    fn example_discriminant_scale() {
        let d = q(1, 100);
        let dd = ricci_discriminant(&su2su2_family(&d).unwrap()).unwrap();
        let three = num_bigint::BigInt::from(3);
        let target = Q::new(num_traits::pow(three, 18) * 289, num_bigint::BigInt::from(256));
        let scaled = dd * num_traits::pow(d, 44) / target;
        let r = scaled.to_f64();
        assert!((r - 1.0).abs() < 5e-3, "{r}");
    }

    fn rq() -> impl Strategy<Value = Q> {
        (-30i64..=30, 1i64..=8).prop_map(|(a, b)| Q::from_ratio(a, b))
    }

    fn pq() -> impl Strategy<Value = Q> {
        (1i64..=30, 1i64..=8).prop_map(|(a, b)| Q::from_ratio(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn nabla_xx_is_minus_xi(x in proptest::collection::vec(rq(), 6), d in pq()) {
            let m = su2su2_family(&d).unwrap();
            let t = ConnectionTable::new(&m);
            let neg: Vec<Q> = xi(&m, &x).unwrap().into_iter().map(|v| -v).collect();
            prop_assert_eq!(t.nabla(&x, &x), neg);
        }

        #[test]
        fn bianchi_and_pair_symmetry(x in proptest::collection::vec(rq(), 3), y in proptest::collection::vec(rq(), 3),
                                     z in proptest::collection::vec(rq(), 3), w in proptest::collection::vec(rq(), 3),
                                     a in pq(), b in pq(), c in pq()) {
            let m = diagonal_su2(a, b, c).unwrap();
            let t = ConnectionTable::new(&m);
            let s = linalg::add(&linalg::add(&t.riemann(&x, &y, &z), &t.riemann(&y, &z, &x)), &t.riemann(&z, &x, &y));
            prop_assert_eq!(s, qv(&[0, 0, 0]));
            prop_assert_eq!(m.inner(&t.riemann(&x, &y, &z), &w), m.inner(&t.riemann(&z, &w, &x), &y));
            let anti = linalg::add(&t.riemann(&x, &y, &z), &t.riemann(&y, &x, &z));
            prop_assert_eq!(anti, qv(&[0, 0, 0]));
        }

        #[test]
        fn ricci_self_adjoint(d in pq()) {
            let m = su2su2_family(&d).unwrap();
            let gr = m.gram().mul(&ricci_operator(&m));
            prop_assert_eq!(gr.clone(), gr.transpose());
        }

        #[test]
        fn sectional_depends_on_plane_only(x in proptest::collection::vec(rq(), 3), y in proptest::collection::vec(rq(), 3),
                                           p in rq(), r in rq()) {
            let m = diagonal_su2(q(1, 1), q(2, 1), q(3, 1)).unwrap();
            let t = ConnectionTable::new(&m);
            if let Ok(k) = t.sectional(&x, &y) {
                // (x, y) -> (x + p y, r x + y) keeps the plane when nondegenerate
                let x2 = linalg::axpy(&x, &p, &y);
                let y2 = linalg::axpy(&y, &r, &x);
                if let Ok(k2) = t.sectional(&x2, &y2) {
                    prop_assert_eq!(k, k2);
                }
            }
        }
    }
}
