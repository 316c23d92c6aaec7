//! Lie algebras given by structure constants.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::{Rational, Scalar};

/// `[E_i, E_j] = Σ_k c[i][j][k] E_k`, stored densely and validated for
/// antisymmetry at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<S> {
    name: String,
    dim: usize,
    c: Vec<S>,
    labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport<S> {
    pub passed: bool,
    /// Worst violating `(i, j, k, l)`, zero-based, if any residual is nonzero.
    pub worst: Option<(usize, usize, usize, usize)>,
    pub residual: S,
}

impl<S: Scalar> LieAlgebra<S> {
    /// From a dense `n*n*n` tensor indexed `(i*n + j)*n + k`.
    pub fn from_dense(name: impl Into<String>, dim: usize, c: Vec<S>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                c.len()
            )));
        }
        let g = LieAlgebra {
            name: name.into(),
            dim,
            c,
            labels: (1..=dim).map(|i| format!("E{i}")).collect(),
        };
        let tol = S::default_tol();
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    let s = g.constant(i, j, k).clone() + g.constant(j, i, k).clone();
                    if !s.is_negligible(tol) {
                        return Err(Error::Antisymmetry { i, j, k });
                    }
                }
            }
        }
        Ok(g)
    }

    /// No antisymmetry check. Meant for probing [`Self::jacobi_check`] on
    /// tensors that are not Lie brackets; everything else assumes a valid
    /// algebra.
    pub fn from_dense_unchecked(name: impl Into<String>, dim: usize, c: Vec<S>) -> Self {
        assert_eq!(c.len(), dim * dim * dim, "structure tensor size");
        LieAlgebra {
            name: name.into(),
            dim,
            c,
            labels: (1..=dim).map(|i| format!("E{i}")).collect(),
        }
    }

    /// From entries `(i, j, k, c)` meaning `[E_i,E_j]` has `c` along `E_k`
    /// (zero-based); antisymmetric partners are filled in.
    pub fn from_entries(name: impl Into<String>, dim: usize, entries: &[(usize, usize, usize, S)]) -> Result<Self> {
        let mut c = vec![S::zero(); dim * dim * dim];
        for (i, j, k, v) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Dimension(format!(
                    "bracket index ({},{},{}) outside dimension {dim}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            if i == j {
                if !v.is_zero() {
                    return Err(Error::Antisymmetry { i, j, k });
                }
                continue;
            }
            c[(i * dim + j) * dim + k] = v.clone();
            c[(j * dim + i) * dim + k] = -v.clone();
        }
        Self::from_dense(name, dim, c)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::Dimension("label count".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &S {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn constants(&self) -> &[S] {
        &self.c
    }

    pub(crate) fn check_len(&self, v: &[S]) -> Result<()> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "vector of length {} in {}-dimensional algebra",
                v.len(),
                self.dim
            )))
        }
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[S], y: &[S]) -> Vec<S> {
        let n = self.dim;
        let mut out = vec![S::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let w = xi.clone() * yj.clone();
                let base = (i * n + j) * n;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.c[base + k];
                    if !c.is_zero() {
                        *o = o.clone() + w.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    /// Matrix of `z ↦ [x, z]`.
    pub fn ad_matrix(&self, x: &[S]) -> Result<Matrix<S>> {
        self.check_len(x)?;
        let n = self.dim;
        let mut m = Matrix::<S>::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        m[(k, j)] = m[(k, j)].clone() + xi.clone() * c.clone();
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn ad_basis(&self, i: usize) -> Matrix<S> {
        self.ad_matrix(&linalg::basis_vector(self.dim, i)).unwrap()
    }

    /// `t_i = tr ad(E_i)`.
    pub fn ad_traces(&self) -> Vec<S> {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(S::zero(), |a, k| a + self.constant(i, k, k).clone()))
            .collect()
    }

    pub fn killing_form(&self, x: &[S], y: &[S]) -> Result<S> {
        let ax = self.ad_matrix(x)?;
        let ay = self.ad_matrix(y)?;
        Ok(ax.mul(&ay).trace())
    }

    /// Gram matrix of the Killing form in the reference basis.
    pub fn killing_matrix(&self) -> Matrix<S> {
        let ads: Vec<Matrix<S>> = (0..self.dim).map(|i| self.ad_basis(i)).collect();
        Matrix::from_fn(self.dim, self.dim, |i, j| ads[i].mul(&ads[j]).trace())
    }

    pub fn jacobi_check(&self, tol: f64) -> JacobiReport<S> {
        let n = self.dim;
        let mut worst: Option<(usize, usize, usize, usize)> = None;
        let mut worst_val = S::zero();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut r = S::zero();
                        for m in 0..n {
                            for (a, b, cc) in [(i, j, k), (j, k, i), (k, i, j)] {
                                let u = self.constant(a, b, m);
                                let v = self.constant(m, cc, l);
                                if !u.is_zero() && !v.is_zero() {
                                    r = r + u.clone() * v.clone();
                                }
                            }
                        }
                        if !r.is_negligible(tol) && r.abs() > worst_val.abs() {
                            worst_val = r;
                            worst = Some((i, j, k, l));
                        }
                    }
                }
            }
        }
        JacobiReport {
            passed: worst.is_none(),
            worst,
            residual: worst_val,
        }
    }

    /// Fails with the witness quadruple (one-based) if Jacobi is violated.
    pub fn validate(&self) -> Result<()> {
        let tol = S::default_tol();
        let n = self.dim;
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let s = self.constant(i, j, k).clone() + self.constant(j, i, k).clone();
                    if !s.is_negligible(tol) {
                        return Err(Error::Antisymmetry { i, j, k });
                    }
                }
            }
        }
        let rep = self.jacobi_check(S::default_tol());
        match rep.worst {
            None => Ok(()),
            Some((i, j, k, l)) => Err(Error::Jacobi {
                i: i + 1,
                j: j + 1,
                k: k + 1,
                l: l + 1,
                residual: rep.residual.to_string(),
            }),
        }
    }

    pub fn is_unimodular(&self) -> bool {
        let tol = S::default_tol();
        self.ad_traces().iter().all(|t| t.is_negligible(tol))
    }

    /// `{Y : tr ad(Y) = 0}`.
    pub fn unimodular_kernel(&self) -> Subalgebra<S> {
        let t = self.ad_traces();
        let span = if t.iter().all(|x| x.is_negligible(S::default_tol())) {
            (0..self.dim).map(|i| linalg::basis_vector(self.dim, i)).collect()
        } else {
            Matrix::from_rows(&[t]).unwrap().nullspace(S::default_tol())
        };
        Subalgebra { dim: self.dim, span }
    }

    /// Basis of the center.
    pub fn center(&self) -> Vec<Vec<S>> {
        let n = self.dim;
        // rows indexed by (j, k): Σ_i x_i c_{ij}^k = 0
        let m = Matrix::from_fn(n * n, n, |r, i| self.constant(i, r / n, r % n).clone());
        m.nullspace(S::default_tol())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n1, n2) = (self.dim, other.dim);
        let n = n1 + n2;
        let mut c = vec![S::zero(); n * n * n];
        for i in 0..n1 {
            for j in 0..n1 {
                for k in 0..n1 {
                    c[(i * n + j) * n + k] = self.constant(i, j, k).clone();
                }
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                for k in 0..n2 {
                    c[((n1 + i) * n + n1 + j) * n + n1 + k] = other.constant(i, j, k).clone();
                }
            }
        }
        let name = match (n1, n2) {
            (0, _) => other.name.clone(),
            (_, 0) => self.name.clone(),
            _ => format!("{}+{}", self.name, other.name),
        };
        LieAlgebra {
            name,
            dim: n,
            c,
            labels: (1..=n).map(|i| format!("E{i}")).collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LieAlgebra<T> {
        LieAlgebra {
            name: self.name.clone(),
            dim: self.dim,
            c: self.c.iter().map(f).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn to_f64(&self) -> LieAlgebra<f64> {
        self.map(|x| x.to_f64())
    }
}

impl LieAlgebra<Rational> {
    pub fn convert<T: Scalar>(&self) -> LieAlgebra<T> {
        self.map(T::from_rational)
    }
}

/// Linearly independent vectors of a parent algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Subalgebra<S> {
    dim: usize,
    span: Vec<Vec<S>>,
}

impl<S: Scalar> Subalgebra<S> {
    /// Checks independence and closure under the bracket.
    pub fn new(g: &LieAlgebra<S>, span: Vec<Vec<S>>) -> Result<Self> {
        let tol = S::default_tol();
        for v in &span {
            g.check_len(v)?;
        }
        if !span.is_empty() && Matrix::from_rows(&span)?.rank(tol) != span.len() {
            return Err(Error::Invalid("subalgebra spanning vectors are dependent".into()));
        }
        let sub = Subalgebra { dim: g.dim(), span };
        for (a, u) in sub.span.iter().enumerate() {
            for v in &sub.span[a + 1..] {
                if !sub.contains(&g.bracket_unchecked(u, v), tol) {
                    return Err(Error::Invalid("span is not closed under the bracket".into()));
                }
            }
        }
        Ok(sub)
    }

    /// Independence only, no closure check.
    pub fn subspace(parent_dim: usize, span: Vec<Vec<S>>) -> Result<Self> {
        let tol = S::default_tol();
        if span.iter().any(|v| v.len() != parent_dim) {
            return Err(Error::Dimension("subspace vector length".into()));
        }
        if !span.is_empty() && Matrix::from_rows(&span)?.rank(tol) != span.len() {
            return Err(Error::Invalid("spanning vectors are dependent".into()));
        }
        Ok(Subalgebra { dim: parent_dim, span })
    }

    pub fn parent_dim(&self) -> usize {
        self.dim
    }

    pub fn span(&self) -> &[Vec<S>] {
        &self.span
    }

    pub fn dim(&self) -> usize {
        self.span.len()
    }

    pub fn contains(&self, x: &[S], tol: f64) -> bool {
        if linalg::is_zero_vec(x, tol) {
            return true;
        }
        let mut rows = self.span.clone();
        rows.push(x.to_vec());
        Matrix::from_rows(&rows).unwrap().rank(tol) == self.span.len()
    }
}

/// Catalog of algebras used by the examples and tests.
pub mod catalog {
    use super::*;

    fn build<S: Scalar>(name: &str, dim: usize, e: &[(usize, usize, usize, i64)]) -> LieAlgebra<S> {
        let entries: Vec<_> = e
            .iter()
            .map(|&(i, j, k, v)| (i - 1, j - 1, k - 1, S::from_i64(v)))
            .collect();
        LieAlgebra::from_entries(name, dim, &entries).expect("catalog entry")
    }

    pub fn abelian<S: Scalar>(n: usize) -> LieAlgebra<S> {
        build(&format!("abelian{n}"), n, &[])
    }

    /// `[E1,E2] = E3`.
    pub fn heisenberg<S: Scalar>() -> LieAlgebra<S> {
        build("heis3", 3, &[(1, 2, 3, 1)])
    }

    /// `[E1,E2] = E2`.
    pub fn solv2<S: Scalar>() -> LieAlgebra<S> {
        build("solv2", 2, &[(1, 2, 2, 1)])
    }

    /// `[E1,E2] = E3, [E2,E3] = E1, [E3,E1] = E2`.
    pub fn su2<S: Scalar>() -> LieAlgebra<S> {
        build("su2", 3, &[(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)])
    }

    pub fn su2_su2<S: Scalar>() -> LieAlgebra<S> {
        let s = su2::<S>();
        let mut g = s.direct_sum(&s);
        g.name = "su2+su2".into();
        g
    }

    /// `su(2) ⊕ ℝ` with `E4` central.
    pub fn u2<S: Scalar>() -> LieAlgebra<S> {
        let mut g = su2::<S>().direct_sum(&abelian(1));
        g.name = "su2+R".into();
        g
    }

    /// Traceless skew-hermitian 3×3 matrices in the basis of
    /// [`crate::realization::su3_basis`].
    pub fn su3<S: Scalar>() -> LieAlgebra<S> {
        crate::realization::su3_structure().convert()
    }

    /// Resolve one of the catalog names.
    pub fn by_name<S: Scalar>(name: &str) -> Option<LieAlgebra<S>> {
        Some(match name {
            "su2" => su2(),
            "su2+su2" | "su2su2" => su2_su2(),
            "su2+R" | "u2" => u2(),
            "su3" => su3(),
            "heis3" | "heisenberg" => heisenberg(),
            "solv2" => solv2(),
            _ => {
                let n = name.strip_prefix("abelian")?.parse().ok()?;
                abelian(n)
            }
        })
    }
}
