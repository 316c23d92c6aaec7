//! Concrete matrix images of basis vectors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar};

pub type CMatrix = DMatrix<Complex64>;

/// Complex matrix with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactComplexMatrix {
    pub re: Matrix<Rational>,
    pub im: Matrix<Rational>,
}

impl ExactComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ExactComplexMatrix {
            re: Matrix::zeros(n, n),
            im: Matrix::zeros(n, n),
        }
    }

    pub fn size(&self) -> usize {
        self.re.rows()
    }

    /// Set entry `(i, j)` to `re + i·im` (integers).
    pub fn with(mut self, i: usize, j: usize, re: i64, im: i64) -> Self {
        self.re[(i, j)] = Rational::from_i64(re);
        self.im[(i, j)] = Rational::from_i64(im);
        self
    }

    pub fn mul(&self, o: &Self) -> Self {
        ExactComplexMatrix {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ExactComplexMatrix {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn to_complex(&self) -> CMatrix {
        let n = self.size();
        CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(self.re[(i, j)].to_f64(), self.im[(i, j)].to_f64())
        })
    }

    fn entries(&self) -> Vec<Rational> {
        let mut v = self.re.to_rows().concat();
        v.extend(self.im.to_rows().concat());
        v
    }
}

/// Structure constants of the real span of linearly independent matrices
/// closed under the commutator.
pub fn structure_from_matrices(name: &str, basis: &[ExactComplexMatrix]) -> Result<LieAlgebra<Rational>> {
    let d = basis.len();
    let cols: Vec<Vec<Rational>> = basis.iter().map(|m| m.entries()).collect();
    let a = Matrix::from_columns(&cols)?;
    if a.rank(0.0) != d {
        return Err(Error::Invalid("realization matrices are dependent".into()));
    }
    let mut c = vec![Rational::from_i64(0); d * d * d];
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let target = basis[i].commutator(&basis[j]).entries();
            let mut aug = cols.clone();
            aug.push(target);
            let (r, piv) = Matrix::from_columns(&aug)?.rref(0.0);
            if piv.contains(&d) {
                return Err(Error::Invalid("matrix span not closed under commutator".into()));
            }
            for (row, &p) in piv.iter().enumerate() {
                c[(i * d + j) * d + p] = r[(row, d)].clone();
            }
        }
    }
    LieAlgebra::from_dense(name, d, c)
}

/// `A_jk = E_jk − E_kj`, `S_jk = i(E_jk + E_kj)` for `j<k`, then
/// `H1 = i(E11 − E22)`, `H2 = i(E22 − E33)`.
pub fn su3_basis() -> Vec<ExactComplexMatrix> {
    let z = ExactComplexMatrix::zeros(3);
    let mut out = Vec::new();
    for (j, k) in [(0, 1), (0, 2), (1, 2)] {
        out.push(z.clone().with(j, k, 1, 0).with(k, j, -1, 0));
        out.push(z.clone().with(j, k, 0, 1).with(k, j, 0, 1));
    }
    out.push(z.clone().with(0, 0, 0, 1).with(1, 1, 0, -1));
    out.push(z.with(1, 1, 0, 1).with(2, 2, 0, -1));
    out
}

pub(crate) fn su3_structure() -> LieAlgebra<Rational> {
    structure_from_matrices("su3", &su3_basis()).expect("su3 basis")
}

/// Images `ρ(E_i)` as complex matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRealization {
    size: usize,
    mats: Vec<CMatrix>,
}

impl MatrixRealization {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        let size = mats.first().map_or(0, |m| m.nrows());
        if mats.iter().any(|m| m.nrows() != size || m.ncols() != size) {
            return Err(Error::Dimension("realization matrices differ in size".into()));
        }
        Ok(MatrixRealization { size, mats })
    }

    /// Checks `[ρ(E_i), ρ(E_j)] = ρ([E_i,E_j])` entrywise within `tol`.
    pub fn for_algebra<S: Scalar>(g: &LieAlgebra<S>, mats: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let r = Self::new(mats)?;
        if r.mats.len() != g.dim() {
            return Err(Error::Dimension(format!(
                "{} matrices for a {}-dimensional algebra",
                r.mats.len(),
                g.dim()
            )));
        }
        let d = r.bracket_defect(g);
        if d > tol {
            return Err(Error::Invalid(format!(
                "realization does not respect the bracket (defect {d:e})"
            )));
        }
        Ok(r)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.mats.len()
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn rho(&self, x: &[f64]) -> CMatrix {
        assert_eq!(x.len(), self.mats.len(), "vector length vs realization");
        let mut m = CMatrix::zeros(self.size, self.size);
        for (xi, e) in x.iter().zip(&self.mats) {
            if *xi != 0.0 {
                m += e * Complex64::new(*xi, 0.0);
            }
        }
        m
    }

    /// Largest entrywise violation of bracket compatibility.
    pub fn bracket_defect<S: Scalar>(&self, g: &LieAlgebra<S>) -> f64 {
        let n = g.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let a = &self.mats[i];
                let b = &self.mats[j];
                let lhs = a * b - b * a;
                let mut rhs = CMatrix::zeros(self.size, self.size);
                for k in 0..n {
                    let c = g.constant(i, j, k).to_f64();
                    if c != 0.0 {
                        rhs += &self.mats[k] * Complex64::new(c, 0.0);
                    }
                }
                worst = worst.max((lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        worst
    }

    pub fn is_skew_hermitian(&self, x: &[f64], tol: f64) -> bool {
        let m = self.rho(x);
        (&m + m.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    pub fn block_sum(&self, other: &Self) -> Self {
        let n = self.size + other.size;
        let mut mats = Vec::new();
        for m in &self.mats {
            let mut b = CMatrix::zeros(n, n);
            b.view_mut((0, 0), (self.size, self.size)).copy_from(m);
            mats.push(b);
        }
        for m in &other.mats {
            let mut b = CMatrix::zeros(n, n);
            b.view_mut((self.size, self.size), (other.size, other.size))
                .copy_from(m);
            mats.push(b);
        }
        MatrixRealization { size: n, mats }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cm(n: usize, entries: &[(usize, usize, Complex64)]) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for &(i, j, z) in entries {
        m[(i, j)] = z;
    }
    m
}

pub mod catalog {
    use super::*;

    /// `E_k = −iσ_k/2`.
    pub fn su2() -> MatrixRealization {
        let h = 0.5;
        MatrixRealization {
            size: 2,
            mats: vec![
                cm(2, &[(0, 1, c(0.0, -h)), (1, 0, c(0.0, -h))]),
                cm(2, &[(0, 1, c(-h, 0.0)), (1, 0, c(h, 0.0))]),
                cm(2, &[(0, 0, c(0.0, -h)), (1, 1, c(0.0, h))]),
            ],
        }
    }

    /// Real 3×3 rotation generators `(L_k)_{ij} = −ε_{kij}`.
    pub fn su2_spin1() -> MatrixRealization {
        let one = c(1.0, 0.0);
        MatrixRealization {
            size: 3,
            mats: vec![
                cm(3, &[(1, 2, -one), (2, 1, one)]),
                cm(3, &[(2, 0, -one), (0, 2, one)]),
                cm(3, &[(0, 1, -one), (1, 0, one)]),
            ],
        }
    }

    pub fn su2_su2() -> MatrixRealization {
        su2().block_sum(&su2())
    }

    /// `su(2) ⊕ ℝ` with the centre acting as `i/2 · I`.
    pub fn u2() -> MatrixRealization {
        let mut r = su2();
        r.mats.push(cm(2, &[(0, 0, c(0.0, 0.5)), (1, 1, c(0.0, 0.5))]));
        r
    }

    pub fn su3() -> MatrixRealization {
        MatrixRealization {
            size: 3,
            mats: su3_basis().iter().map(ExactComplexMatrix::to_complex).collect(),
        }
    }

    /// `E1 = diag(1, 0)`, `E2 = e12`. Not skew-hermitian.
    pub fn solv2() -> MatrixRealization {
        let one = c(1.0, 0.0);
        MatrixRealization {
            size: 2,
            mats: vec![cm(2, &[(0, 0, one)]), cm(2, &[(0, 1, one)])],
        }
    }

    /// Strictly upper triangular 3×3.
    pub fn heisenberg() -> MatrixRealization {
        let one = c(1.0, 0.0);
        MatrixRealization {
            size: 3,
            mats: vec![cm(3, &[(0, 1, one)]), cm(3, &[(1, 2, one)]), cm(3, &[(0, 2, one)])],
        }
    }

    /// `E_k = i·e_kk`.
    pub fn abelian(n: usize) -> MatrixRealization {
        MatrixRealization {
            size: n,
            mats: (0..n).map(|k| cm(n, &[(k, k, c(0.0, 1.0))])).collect(),
        }
    }

    pub fn by_name(name: &str) -> Option<MatrixRealization> {
        Some(match name {
            "su2" => su2(),
            "su2+su2" | "su2su2" => su2_su2(),
            "su2+R" | "u2" => u2(),
            "su3" => su3(),
            "heis3" | "heisenberg" => heisenberg(),
            "solv2" => solv2(),
            _ => abelian(name.strip_prefix("abelian")?.parse().ok()?),
        })
    }
}
