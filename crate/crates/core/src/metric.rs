//! Inner products on Lie algebras.

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::{Rational, Scalar};

/// `(x, y) = xᵀ G y` in the reference basis. Always symmetric positive
/// definite.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerProduct<S> {
    gram: Matrix<S>,
}

impl<S: Scalar> InnerProduct<S> {
    pub fn new(gram: Matrix<S>) -> Result<Self> {
        let tol = S::default_tol();
        if !gram.is_square() {
            return Err(Error::Dimension("Gram matrix is not square".into()));
        }
        if !gram.is_symmetric(tol) {
            return Err(Error::NotSymmetric);
        }
        if S::EXACT {
            if let Some(k) = gram.leading_minors().iter().position(|m| *m <= S::zero()) {
                return Err(Error::NotPositiveDefinite(k + 1));
            }
        } else if let Err(Error::NotPositiveDefinite(k)) = cholesky(&gram) {
            return Err(Error::NotPositiveDefinite(k));
        }
        Ok(InnerProduct { gram })
    }

    pub fn identity(n: usize) -> Self {
        InnerProduct {
            gram: Matrix::identity(n),
        }
    }

    pub fn gram(&self) -> &Matrix<S> {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn ip(&self, x: &[S], y: &[S]) -> S {
        linalg::dot(x, &self.gram.mul_vec(y))
    }

    pub fn norm2(&self, x: &[S]) -> S {
        self.ip(x, x)
    }

    /// The unique `G` with `A G Aᵀ = I`, i.e. rows `F_i` of `A` orthonormal.
    pub fn from_lower_triangular(a: &Matrix<S>) -> Result<Self> {
        let tol = S::default_tol();
        if !a.is_lower_triangular(tol) {
            return Err(Error::Invalid("matrix is not lower triangular".into()));
        }
        for i in 0..a.rows() {
            if a[(i, i)] <= S::zero() || a[(i, i)].is_negligible(tol) {
                return Err(Error::Invalid(format!("diagonal entry {} is not positive", i + 1)));
            }
        }
        let ata = a.transpose().mul(a);
        Self::new(ata.inverse(tol)?)
    }

    /// The lower-triangular `A` with positive diagonal such that
    /// `A G Aᵀ = I`. On the exact backend this needs the Cholesky pivots to
    /// be rational squares.
    pub fn lower_triangular_factor(&self) -> Result<Matrix<S>> {
        let l = cholesky(&self.gram)?;
        l.inverse(S::default_tol())
    }

    /// `G + α (GV)(GV)ᵀ`.
    pub fn rank_one_perturbation(&self, v: &[S], alpha: &S) -> Result<Self> {
        if v.len() != self.dim() {
            return Err(Error::Dimension("perturbation vector length".into()));
        }
        if *alpha <= S::zero() {
            return Err(Error::Invalid("perturbation strength must be positive".into()));
        }
        let gv = self.gram.mul_vec(v);
        let n = self.dim();
        let g = Matrix::from_fn(n, n, |i, j| {
            self.gram[(i, j)].clone() + alpha.clone() * gv[i].clone() * gv[j].clone()
        });
        Self::new(g)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> InnerProduct<T> {
        InnerProduct { gram: self.gram.map(f) }
    }

    pub fn to_f64(&self) -> InnerProduct<f64> {
        self.map(|x| x.to_f64())
    }
}

impl InnerProduct<Rational> {
    pub fn convert<T: Scalar>(&self) -> InnerProduct<T> {
        self.map(T::from_rational)
    }
}

/// `G = L Lᵀ`. Exact only when every pivot is a rational square.
pub fn cholesky<S: Scalar>(g: &Matrix<S>) -> Result<Matrix<S>> {
    let n = g.rows();
    let tol = S::default_tol();
    let mut l = Matrix::<S>::zeros(n, n);
    for j in 0..n {
        let mut d = g[(j, j)].clone();
        for k in 0..j {
            d = d - l[(j, k)].clone() * l[(j, k)].clone();
        }
        if d <= S::zero() || d.is_negligible(tol) {
            return Err(Error::NotPositiveDefinite(j + 1));
        }
        let s = d
            .sqrt()
            .ok_or_else(|| Error::Invalid(format!("pivot {} is not an exact square", j + 1)))?;
        l[(j, j)] = s.clone();
        for i in j + 1..n {
            let mut v = g[(i, j)].clone();
            for k in 0..j {
                v = v - l[(i, k)].clone() * l[(j, k)].clone();
            }
            l[(i, j)] = v / s.clone();
        }
    }
    Ok(l)
}

/// Lie algebra together with an inner product. `G⁻¹` is cached.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricLieAlgebra<S> {
    algebra: LieAlgebra<S>,
    ip: InnerProduct<S>,
    ginv: Matrix<S>,
}

impl<S: Scalar> MetricLieAlgebra<S> {
    pub fn new(algebra: LieAlgebra<S>, ip: InnerProduct<S>) -> Result<Self> {
        if algebra.dim() != ip.dim() {
            return Err(Error::Dimension(format!(
                "{}-dimensional algebra with {}x{} Gram matrix",
                algebra.dim(),
                ip.dim(),
                ip.dim()
            )));
        }
        let ginv = ip.gram().inverse(S::default_tol())?;
        Ok(MetricLieAlgebra { algebra, ip, ginv })
    }

    pub fn algebra(&self) -> &LieAlgebra<S> {
        &self.algebra
    }

    pub fn ip(&self) -> &InnerProduct<S> {
        &self.ip
    }

    pub fn gram(&self) -> &Matrix<S> {
        self.ip.gram()
    }

    pub fn gram_inverse(&self) -> &Matrix<S> {
        &self.ginv
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn inner(&self, x: &[S], y: &[S]) -> S {
        self.ip.ip(x, y)
    }

    /// Gram–Schmidt without normalization (so it stays exact): returns a
    /// `(·,·)`-orthogonal basis obtained from `start`.
    pub fn orthogonal_basis(&self, start: &[Vec<S>]) -> Vec<Vec<S>> {
        let tol = S::default_tol();
        let mut out: Vec<Vec<S>> = Vec::new();
        for v in start {
            let mut w = v.clone();
            for u in &out {
                let c = self.inner(&w, u) / self.inner(u, u);
                w = linalg::axpy(&w, &-c, u);
            }
            if !linalg::is_zero_vec(&w, tol) {
                out.push(w);
            }
        }
        out
    }

    pub fn to_f64(&self) -> MetricLieAlgebra<f64> {
        MetricLieAlgebra {
            algebra: self.algebra.to_f64(),
            ip: self.ip.to_f64(),
            ginv: self.ginv.to_f64(),
        }
    }
}

/// The bi-invariant `−½B`; fails unless the algebra is compact semisimple.
pub fn killing_metric<S: Scalar>(g: &LieAlgebra<S>) -> Result<InnerProduct<S>> {
    let k = g.killing_matrix().scale(&S::from_ratio(-1, 2));
    InnerProduct::new(k)
}

/// su2 with `{aE1, bE2, cE3}` orthonormal.
pub fn diagonal_su2<S: Scalar>(a: S, b: S, c: S) -> Result<MetricLieAlgebra<S>> {
    for (name, x) in [("a", &a), ("b", &b), ("c", &c)] {
        if *x <= S::zero() {
            return Err(Error::Invalid(format!("{name} must be positive")));
        }
    }
    let inv2 = |x: S| S::one() / (x.clone() * x);
    let ip = InnerProduct::new(Matrix::from_diagonal(&[inv2(a), inv2(b), inv2(c)]))?;
    MetricLieAlgebra::new(crate::algebra::catalog::su2(), ip)
}

/// The lower-triangular matrix describing the metric family on su2⊕su2
/// whose rows are the orthonormal frame.
pub fn example_family_frame<S: Scalar>(d: &S) -> Matrix<S> {
    let z = S::zero;
    let o = S::one;
    Matrix::from_rows(&[
        vec![o(), z(), z(), z(), z(), z()],
        vec![z(), o(), z(), z(), z(), z()],
        vec![z(), z(), o(), z(), z(), z()],
        vec![o(), z(), z(), o(), z(), z()],
        vec![o(), z(), z(), z(), o(), z()],
        vec![d.clone(), o(), o(), z(), z(), d.clone()],
    ])
    .unwrap()
}

/// su2⊕su2 with the metric generated by [`example_family_frame`].
pub fn su2su2_family<S: Scalar>(d: &S) -> Result<MetricLieAlgebra<S>> {
    let ip = InnerProduct::from_lower_triangular(&example_family_frame(d))?;
    MetricLieAlgebra::new(crate::algebra::catalog::su2_su2(), ip)
}

/// How a simultaneous basis was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diagonalization {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimultaneousBasis<S> {
    /// Basis orthonormal for `−½B` and orthogonal for the metric.
    pub vectors: Vec<Vec<S>>,
    /// `(E'_i, E'_i)`, ascending.
    pub ratios: Vec<S>,
    pub route: Diagonalization,
}

/// Solve `G v = μ K v` with `K = −½B`. Exact when both forms are already
/// diagonal; otherwise computed in floats and returned converted.
pub fn simultaneous_basis<S: Scalar>(m: &MetricLieAlgebra<S>) -> Result<SimultaneousBasis<f64>> {
    let k = killing_metric(m.algebra())
        .map_err(|_| Error::Invalid("minus Killing form is not positive definite".into()))?;
    let n = m.dim();
    let g = m.gram();
    let tol = S::default_tol();
    let diag = |a: &Matrix<S>| (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)].is_negligible(tol)));
    if S::EXACT && diag(g) && diag(k.gram()) {
        if let Some(b) = exact_diagonal_basis(g, k.gram()) {
            return Ok(SimultaneousBasis {
                vectors: b.vectors.iter().map(|v| linalg::to_f64_vec(v)).collect(),
                ratios: linalg::to_f64_vec(&b.ratios),
                route: Diagonalization::Exact,
            });
        }
    }
    float_simultaneous(&g.to_f64(), &k.gram().to_f64())
}

/// Exact variant; `None` unless both forms are diagonal in the reference
/// basis with rational square roots of the Killing diagonal.
pub fn simultaneous_basis_exact(m: &MetricLieAlgebra<Rational>) -> Result<Option<SimultaneousBasis<Rational>>> {
    let k = killing_metric(m.algebra())
        .map_err(|_| Error::Invalid("minus Killing form is not positive definite".into()))?;
    let n = m.dim();
    let diag = |a: &Matrix<Rational>| (0..n).all(|i| (0..n).all(|j| i == j || num_traits::Zero::is_zero(&a[(i, j)])));
    if diag(m.gram()) && diag(k.gram()) {
        Ok(exact_diagonal_basis(m.gram(), k.gram()))
    } else {
        Ok(None)
    }
}

fn exact_diagonal_basis<S: Scalar>(g: &Matrix<S>, k: &Matrix<S>) -> Option<SimultaneousBasis<S>> {
    let n = g.rows();
    let mut items = Vec::with_capacity(n);
    for i in 0..n {
        let s = k[(i, i)].sqrt()?;
        let mut v = vec![S::zero(); n];
        v[i] = S::one() / s;
        let mu = g[(i, i)].clone() / k[(i, i)].clone();
        items.push((mu, v));
    }
    items.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Some(SimultaneousBasis {
        ratios: items.iter().map(|x| x.0.clone()).collect(),
        vectors: items.into_iter().map(|x| x.1).collect(),
        route: Diagonalization::Exact,
    })
}

fn float_simultaneous(g: &Matrix<f64>, k: &Matrix<f64>) -> Result<SimultaneousBasis<f64>> {
    let n = g.rows();
    let l = cholesky(k)?;
    let linv = l.inverse(1e-14)?;
    let c = linv.mul(g).mul(&linv.transpose());
    let (vals, q) = jacobi_eigen(&c);
    let v = linv.transpose().mul(&q);
    let mut items: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|j| {
            let mut col = v.column(j);
            let lead = col
                .iter()
                .copied()
                .fold(0.0_f64, |a, x| if x.abs() > a.abs() + 1e-12 { x } else { a });
            if lead < 0.0 {
                col.iter_mut().for_each(|x| *x = -*x);
            }
            (vals[j], col)
        })
        .collect();
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(SimultaneousBasis {
        ratios: items.iter().map(|x| x.0).collect(),
        vectors: items.into_iter().map(|x| x.1).collect(),
        route: Diagonalization::Float,
    })
}

/// Cyclic Jacobi rotations for a real symmetric matrix. Returns
/// eigenvalues and the orthogonal matrix of eigenvectors (columns).
pub fn jacobi_eigen(a: &Matrix<f64>) -> (Vec<f64>, Matrix<f64>) {
    let n = a.rows();
    let mut a = a.clone();
    let mut v = Matrix::<f64>::identity(n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        let scale: f64 = (0..n).map(|i| a[(i, i)] * a[(i, i)]).sum::<f64>().max(1e-300);
        if off <= 1e-32 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = cs * akp - sn * akq;
                    a[(k, q)] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = cs * apk - sn * aqk;
                    a[(q, k)] = sn * apk + cs * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = cs * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + cs * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)]).collect(), v)
}
