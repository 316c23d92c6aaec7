//! Reductive homogeneous spaces `G/H` with `𝔤 = 𝔥 ⊕ 𝔪` and the geodesic
//! orbit criterion: `X ∈ 𝔪` is a homogeneous-geodesic direction iff some
//! `Z ∈ 𝔥` has `([X + Z, Y]_𝔪, X) = 0` for all `Y ∈ 𝔪`.

use rayon::prelude::*;

use crate::algebra::{LieAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::metric::{InnerProduct, MetricLieAlgebra};
use crate::sampling;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug)]
pub struct ReductiveSpace<S> {
    g: LieAlgebra<S>,
    h: Subalgebra<S>,
    m: Vec<Vec<S>>,
    ip_m: InnerProduct<S>,
    /// Inverse of the matrix whose columns are the `𝔥` then `𝔪` basis.
    split: Matrix<S>,
}

impl<S: Scalar> ReductiveSpace<S> {
    pub fn new(g: LieAlgebra<S>, h: Subalgebra<S>, m: Vec<Vec<S>>, ip_m: InnerProduct<S>) -> Result<Self> {
        let n = g.dim();
        let tol = S::default_tol();
        if h.parent_dim() != n || m.iter().any(|v| v.len() != n) {
            return Err(Error::Dimension("decomposition vectors have the wrong length".into()));
        }
        if h.dim() + m.len() != n {
            return Err(Error::Decomposition(format!(
                "dim h + dim m = {} + {} ≠ {}",
                h.dim(),
                m.len(),
                n
            )));
        }
        if ip_m.dim() != m.len() {
            return Err(Error::Dimension("inner product on m has the wrong size".into()));
        }
        let cols: Vec<Vec<S>> = h.span().iter().chain(&m).cloned().collect();
        let split = Matrix::from_columns(&cols)?
            .inverse(tol)
            .map_err(|_| Error::Decomposition("h and m are not complementary".into()))?;
        let rs = ReductiveSpace { g, h, m, ip_m, split };
        for (a, z) in rs.h.span().iter().enumerate() {
            let ad = rs.ad_on_m(z)?;
            let skew = rs.ip_m.gram().mul(&ad).add(&ad.transpose().mul(rs.ip_m.gram()));
            if !skew.is_zero_within(tol) {
                return Err(Error::Decomposition(format!(
                    "ad(h_{}) is not skew-symmetric on m",
                    a + 1
                )));
            }
        }
        Ok(rs)
    }

    /// Matrix of `Y ↦ [Z, Y]` on `𝔪` coordinates; errors if `[Z, 𝔪] ⊄ 𝔪`.
    fn ad_on_m(&self, z: &[S]) -> Result<Matrix<S>> {
        let tol = S::default_tol();
        let k = self.m.len();
        let mut out = Matrix::zeros(k, k);
        for (j, y) in self.m.iter().enumerate() {
            let (hc, mc) = self.split_coords(&self.g.bracket(z, y)?);
            if !linalg::is_zero_vec(&hc, tol) {
                return Err(Error::Decomposition(format!("[h, m_{}] leaves m", j + 1)));
            }
            for (i, c) in mc.into_iter().enumerate() {
                out[(i, j)] = c;
            }
        }
        Ok(out)
    }

    /// Symmetric pair `su2 ⊕ su2 ⊃ diag(su2)` with the Killing-induced
    /// product on the antidiagonal complement.
    pub fn symmetric_pair() -> Self {
        let g = crate::algebra::catalog::su2_su2::<S>();
        let e = |i: usize| linalg::basis_vector::<S>(6, i);
        let h: Vec<Vec<S>> = (0..3).map(|i| linalg::add(&e(i), &e(i + 3))).collect();
        let m: Vec<Vec<S>> = (0..3).map(|i| linalg::sub(&e(i), &e(i + 3))).collect();
        let h = Subalgebra::new(&g, h).expect("diagonal subalgebra");
        let ip = InnerProduct::new(Matrix::identity(3).scale(&S::from_i64(2))).expect("positive");
        Self::new(g, h, m, ip).expect("symmetric pair")
    }

    /// `U(2)/U(1)` with `𝔥 = span{E3 + E4}`, `𝔪 = span{E1, E2, E3}` and
    /// `(,)_𝔪 = diag(1, 1, t)`: a Berger sphere.
    pub fn berger(t: S) -> Result<Self> {
        let g = crate::algebra::catalog::u2::<S>();
        let e = |i: usize| linalg::basis_vector::<S>(4, i);
        let h = Subalgebra::new(&g, vec![linalg::add(&e(2), &e(3))])?;
        let ip = InnerProduct::new(Matrix::from_diagonal(&[S::one(), S::one(), t]))?;
        Self::new(g, h, vec![e(0), e(1), e(2)], ip)
    }

    /// The group itself: `𝔥 = 0`, `𝔪 = 𝔤` with the metric's Gram matrix.
    pub fn lie_group(m: &MetricLieAlgebra<S>) -> Self {
        let n = m.dim();
        let g = m.algebra().clone();
        let basis = (0..n).map(|i| linalg::basis_vector(n, i)).collect();
        let h = Subalgebra::new(&g, Vec::new()).expect("zero subalgebra");
        Self::new(g, h, basis, m.ip().clone()).expect("trivial decomposition")
    }

    pub fn algebra(&self) -> &LieAlgebra<S> {
        &self.g
    }

    pub fn h(&self) -> &Subalgebra<S> {
        &self.h
    }

    pub fn m(&self) -> &[Vec<S>] {
        &self.m
    }

    pub fn ip_m(&self) -> &InnerProduct<S> {
        &self.ip_m
    }

    /// Coordinates of `x` along the `𝔥` basis and the `𝔪` basis.
    pub fn split_coords(&self, x: &[S]) -> (Vec<S>, Vec<S>) {
        let mut c = self.split.mul_vec(x);
        let mc = c.split_off(self.h.dim());
        (c, mc)
    }

    pub fn m_coords(&self, x: &[S]) -> Vec<S> {
        self.split_coords(x).1
    }

    pub fn from_m_coords(&self, c: &[S]) -> Vec<S> {
        combine(&self.m, c, self.g.dim())
    }

    pub fn from_h_coords(&self, c: &[S]) -> Vec<S> {
        combine(self.h.span(), c, self.g.dim())
    }

    /// `𝔪`-component of `x` along `𝔥`.
    pub fn m_projection(&self, x: &[S]) -> Vec<S> {
        self.from_m_coords(&self.m_coords(x))
    }

    /// `([A, B]_𝔪, C)_𝔪` for `𝔪`-coordinate `C`.
    fn bracket_pairing(&self, a: &[S], b: &[S], c_m: &[S]) -> Result<S> {
        let br = self.m_coords(&self.g.bracket(a, b)?);
        Ok(self.ip_m.ip(&br, c_m))
    }

    /// Minimum-norm least-squares `Z ∈ 𝔥` for the criterion at `X ∈ 𝔪`.
    pub fn go_solve(&self, x: &[S]) -> Result<GoSolution<S>> {
        let tol = S::default_tol();
        self.g.check_len(x)?;
        let (hc, xm) = self.split_coords(x);
        if !linalg::is_zero_vec(&hc, tol) {
            return Err(Error::Invalid("X must lie in m".into()));
        }
        let k = self.m.len();
        let p = self.h.dim();
        let mut a = Matrix::zeros(k, p);
        let mut b = vec![S::zero(); k];
        for (j, y) in self.m.iter().enumerate() {
            for (c, z) in self.h.span().iter().enumerate() {
                a[(j, c)] = self.bracket_pairing(z, y, &xm)?;
            }
            b[j] = -self.bracket_pairing(x, y, &xm)?;
        }
        let z = min_norm_lstsq(&a, &b, tol)?;
        let az = a.mul_vec(&z);
        let residual = az
            .iter()
            .zip(&b)
            .map(|(u, v)| (u.clone() - v.clone()).abs())
            .fold(S::zero(), |m, r| if r > m { r } else { m });
        Ok(GoSolution {
            z_vector: self.from_h_coords(&z),
            z,
            residual,
        })
    }

    /// Runs [`ReductiveSpace::go_solve`] on `samples` random directions of
    /// `𝔪` (unit vectors for `f64`, seeded rationals for exact scalars).
    pub fn go_sample_check(&self, samples: usize, seed: u64, tol: f64) -> Result<GoReport> {
        let k = self.m.len();
        let results: Vec<Result<(Vec<f64>, f64, bool)>> = (0..samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = sampling::stream(seed, i as u64);
                let xm: Vec<S> = if S::EXACT {
                    sampling::scalar_vector(&mut rng, k)
                } else {
                    let u = sampling::unit_vector(&mut rng, k);
                    // unit in (,)_m
                    let v: Vec<S> = u.iter().map(|&c| S::from_rational(&rational_of(c))).collect();
                    let nrm = self.ip_m.norm2(&v).to_f64().sqrt();
                    u.iter().map(|&c| S::from_rational(&rational_of(c / nrm))).collect()
                };
                let x = self.from_m_coords(&xm);
                let sol = self.go_solve(&x)?;
                Ok((
                    linalg::to_f64_vec(&x),
                    sol.residual.to_f64(),
                    sol.z.iter().any(|c| !c.is_negligible(tol)),
                ))
            })
            .collect();
        let mut report = GoReport {
            samples,
            max_residual: 0.0,
            worst: None,
            nonzero_z: 0,
            tol,
        };
        for r in results {
            let (x, res, nz) = r?;
            if nz {
                report.nonzero_z += 1;
            }
            if report.worst.is_none() || res > report.max_residual {
                report.max_residual = res;
                report.worst = Some(x);
            }
        }
        Ok(report)
    }

    pub fn to_f64(&self) -> ReductiveSpace<f64> {
        ReductiveSpace {
            g: self.g.to_f64(),
            h: Subalgebra::subspace(
                self.g.dim(),
                self.h.span().iter().map(|v| linalg::to_f64_vec(v)).collect(),
            )
            .expect("same span"),
            m: self.m.iter().map(|v| linalg::to_f64_vec(v)).collect(),
            ip_m: self.ip_m.to_f64(),
            split: self.split.to_f64(),
        }
    }
}

fn rational_of(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_default()
}

fn combine<S: Scalar>(basis: &[Vec<S>], c: &[S], n: usize) -> Vec<S> {
    basis
        .iter()
        .zip(c)
        .fold(vec![S::zero(); n], |acc, (v, ci)| linalg::axpy(&acc, ci, v))
}

/// `A⁺ b` through the full-rank factorization `A = C R`, `R` the nonzero
/// rows of the reduced echelon form.
pub fn min_norm_lstsq<S: Scalar>(a: &Matrix<S>, b: &[S], tol: f64) -> Result<Vec<S>> {
    let p = a.cols();
    if p == 0 {
        return Ok(Vec::new());
    }
    let (rref, pivots) = a.rref(tol);
    let r = pivots.len();
    if r == 0 {
        return Ok(vec![S::zero(); p]);
    }
    let rm = rref.block(0, 0, r, p);
    let c = Matrix::from_columns(&pivots.iter().map(|&j| a.column(j)).collect::<Vec<_>>())?;
    // A⁺ = Rᵀ (R Rᵀ)⁻¹ (CᵀC)⁻¹ Cᵀ
    let ctc = c.transpose().mul(&c);
    let y = ctc.solve_vec(&c.transpose().mul_vec(b), tol)?;
    let rrt = rm.mul(&rm.transpose());
    let w = rrt.solve_vec(&y, tol)?;
    Ok(rm.transpose().mul_vec(&w))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoSolution<S> {
    /// Coordinates along the `𝔥` basis.
    pub z: Vec<S>,
    pub z_vector: Vec<S>,
    /// `max_j |([X + Z, Y_j]_𝔪, X)_𝔪|`.
    pub residual: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoReport {
    pub samples: usize,
    pub max_residual: f64,
    /// Direction with the largest residual.
    pub worst: Option<Vec<f64>>,
    pub nonzero_z: usize,
    pub tol: f64,
}

impl GoReport {
    /// No counterexample among the samples.
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tol
    }
}
