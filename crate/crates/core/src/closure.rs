//! Closures of one-parameter subgroups `exp(tX)` in compact matrix groups.
//!
//! If `ρ(X)` is skew-hermitian with eigenvalues `iθ_j`, the closure of
//! `exp(tρ(X))` is a torus whose dimension is the ℚ-rank of the `θ_j`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice;
use crate::linalg::Matrix;
use crate::poly::{self, Poly};
use crate::realization::{CMatrix, MatrixRealization};
use crate::scalar::{Rational, Scalar};

pub const DEFAULT_BOUND: i64 = 1_000_000;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureKind {
    /// `X` acts with no nonzero frequency.
    Trivial,
    /// `ρ(X)` is not skew-hermitian; the orbit is an embedded line.
    Line,
    Circle,
    Torus(usize),
}

impl std::fmt::Display for ClosureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClosureKind::Trivial => write!(f, "trivial"),
            ClosureKind::Line => write!(f, "line"),
            ClosureKind::Circle => write!(f, "circle"),
            ClosureKind::Torus(k) => write!(f, "torus T^{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureReport {
    pub kind: ClosureKind,
    pub rank: usize,
    pub frequencies: Vec<f64>,
    /// Present when every frequency was certified rational.
    pub exact_frequencies: Option<Vec<Rational>>,
    pub relations: Vec<Vec<i64>>,
    /// `2π/ω` for the fundamental frequency `ω` of a circle.
    pub period: Option<f64>,
    pub bound: i64,
    pub tol: f64,
}

fn hermitian_part(rho: &MatrixRealization, x: &[f64]) -> Result<CMatrix> {
    let a = rho.rho(x);
    let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if !rho.is_skew_hermitian(x, 1e-12 * scale) {
        return Err(Error::NotSkewHermitian);
    }
    // −iρ(X) is hermitian with eigenvalues θ_j
    Ok(a * Complex64::new(0.0, -1.0))
}

/// `|θ_j|` for the eigenvalues `iθ_j` of `ρ(X)`, without repeats or zeros,
/// ascending.
pub fn frequencies<S: Scalar>(rho: &MatrixRealization, x: &[S]) -> Result<Vec<f64>> {
    Ok(spectral_frequencies(rho, &to_f64(x))?.0)
}

fn to_f64<S: Scalar>(x: &[S]) -> Vec<f64> {
    x.iter().map(Scalar::to_f64).collect()
}

fn dedup_tol(scale: f64) -> f64 {
    1e-9 * scale.max(1.0)
}

/// Frequencies with one unit eigenvector of `−iρ(X)` for each.
fn spectral_frequencies(rho: &MatrixRealization, x: &[f64]) -> Result<(Vec<f64>, Vec<nalgebra::DVector<Complex64>>)> {
    if x.len() != rho.dim() {
        return Err(Error::Dimension("vector length vs realization".into()));
    }
    let h = hermitian_part(rho, x)?;
    let eig = SymmetricEigen::new(h);
    let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let tol = dedup_tol(scale);
    let mut order: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].abs() > tol).collect();
    order.sort_by(|&a, &b| {
        vals[a]
            .abs()
            .total_cmp(&vals[b].abs())
            .then(vals[b].total_cmp(&vals[a]))
    });
    let mut out = Vec::new();
    let mut vecs = Vec::new();
    for i in order {
        let t = vals[i].abs();
        if out.last().is_some_and(|&l: &f64| (t - l).abs() <= tol) {
            continue;
        }
        out.push(t);
        vecs.push(eig.eigenvectors.column(i).into_owned());
    }
    Ok((out, vecs))
}

/// Certified rational frequencies, when `ρ(X)` has exactly rational entries
/// (as in every catalog realization) and all `θ_j` are rational.
pub fn exact_frequencies(rho: &MatrixRealization, x: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let xf = to_f64(x);
    let floats = frequencies(rho, &xf)?;
    let n = rho.size();
    // real form [[A, −B], [B, A]] of ρ(X) = A + iB
    let mut re = Matrix::<Rational>::zeros(n, n);
    let mut im = Matrix::<Rational>::zeros(n, n);
    for (xi, e) in x.iter().zip(rho.matrices()) {
        if xi.is_zero() {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                let (Some(a), Some(b)) = (Rational::from_float(e[(i, j)].re), Rational::from_float(e[(i, j)].im))
                else {
                    return Ok(None);
                };
                re[(i, j)] = &re[(i, j)] + xi * a;
                im[(i, j)] = &im[(i, j)] + xi * b;
            }
        }
    }
    let real = Matrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => re[(i, j)].clone(),
        (true, false) => -im[(i, j - n)].clone(),
        (false, true) => im[(i - n, j)].clone(),
        (false, false) => re[(i - n, j - n)].clone(),
    });
    // det(tI − M) = r(t²) with r(u) = Π (u + θ_j²)
    let p = poly::charpoly(&real)?;
    let mut r: Vec<Rational> = p.coeffs().iter().step_by(2).cloned().collect();
    let mut exact = Vec::new();
    for t in &floats {
        let Some(q) = rationalize(*t) else { return Ok(None) };
        let root = -(&q * &q);
        let mut hits = 0;
        while let Some(quot) = deflate(&r, &root) {
            r = quot;
            hits += 1;
        }
        if hits == 0 {
            return Ok(None);
        }
        exact.push(q);
    }
    // whatever is left must be a power of u (zero frequencies)
    if r.iter().rev().skip(1).any(|c| !c.is_zero()) {
        return Ok(None);
    }
    Ok(Some(exact))
}

fn rationalize(t: f64) -> Option<Rational> {
    lattice::convergents(t, 1_000_000)
        .into_iter()
        .find(|&(p, q)| ((p as f64) / (q as f64) - t).abs() <= 1e-12 * t.max(1.0))
        .map(|(p, q)| Rational::new(p.into(), q.into()))
}

/// `r / (u − root)` when the division is exact.
fn deflate(r: &[Rational], root: &Rational) -> Option<Vec<Rational>> {
    if r.len() < 2 {
        return None;
    }
    let poly = Poly::new(r.to_vec());
    if !poly.eval(root).is_zero() {
        return None;
    }
    let deg = r.len() - 1;
    let mut q = vec![Rational::zero(); deg];
    let mut carry = Rational::zero();
    for k in (0..deg).rev() {
        carry = &r[k + 1] + carry * root;
        q[k] = carry.clone();
    }
    Some(q)
}

/// ℚ-rank of nonzero exact frequencies, with relations `q·θ_1 − p·θ_j = 0`.
pub fn q_rank_exact(thetas: &[Rational]) -> (usize, Vec<Vec<i64>>) {
    let n = thetas.len();
    if n == 0 {
        return (0, Vec::new());
    }
    let mut rels = Vec::new();
    for j in 1..n {
        let ratio = &thetas[j] / &thetas[0];
        let (Some(p), Some(q)) = (ratio.numer().to_i64(), ratio.denom().to_i64()) else {
            continue;
        };
        let mut r = vec![0i64; n];
        r[0] = p;
        r[j] = -q;
        lattice::normalize_sign(&mut r);
        rels.push(r);
    }
    (1, rels)
}

fn relation_residual(thetas: &[f64], r: &[i64]) -> f64 {
    thetas.iter().zip(r).map(|(t, &c)| t * c as f64).sum::<f64>().abs()
}

fn accept(thetas: &[f64], r: &[i64], bound: i64, tol: f64) -> bool {
    r.iter().any(|&c| c != 0) && r.iter().all(|c| c.abs() <= bound) && relation_residual(thetas, r) < tol
}

/// Dimension of the ℚ-span of `thetas`, found by integer-relation search
/// with coefficients up to `bound`. Every relation returned satisfies
/// `|Σ r_j θ_j| < tol`.
///
/// Frequencies are taken in order; each one is tested against the
/// independent ones before it, so appending a frequency never lowers the
/// rank and each relation introduces one new index.
pub fn q_rank(thetas: &[f64], bound: i64, tol: f64) -> (usize, Vec<Vec<i64>>) {
    let n = thetas.len();
    let mut independent: Vec<usize> = Vec::new();
    let mut rels: Vec<Vec<i64>> = Vec::new();
    for k in 0..n {
        let mut found = None;
        if thetas[k].abs() < tol {
            let mut r = vec![0; n];
            r[k] = 1;
            found = Some(r);
        }
        for &i in &independent {
            if found.is_some() {
                break;
            }
            found = pair_relation(thetas[i], thetas[k], bound, tol).map(|r| {
                let mut full = vec![0; n];
                full[i] = r[0];
                full[k] = r[1];
                full
            });
        }
        if found.is_none() && independent.len() >= 2 {
            let idx: Vec<usize> = independent.iter().copied().chain([k]).collect();
            let sub: Vec<f64> = idx.iter().map(|&i| thetas[i]).collect();
            let scale = (1.0 / tol).max(1.0) * (bound as f64).sqrt().max(1.0);
            found = lattice::relation_candidates(&sub, scale)
                .into_iter()
                .filter(|r| *r.last().unwrap() != 0)
                .map(|r| {
                    let mut full = vec![0; n];
                    for (c, &i) in r.iter().zip(&idx) {
                        full[i] = *c;
                    }
                    full
                })
                .find(|full| accept(thetas, full, bound, tol));
        }
        match found {
            Some(mut r) => {
                lattice::normalize_sign(&mut r);
                rels.push(r);
            }
            None => independent.push(k),
        }
    }
    (independent.len(), rels)
}

/// `(p, −q)`-type relation between two frequencies from continued fractions.
fn pair_relation(a: f64, b: f64, bound: i64, tol: f64) -> Option<Vec<i64>> {
    lattice::convergents(b / a, bound)
        .into_iter()
        .map(|(p, q)| vec![p, -q])
        .find(|r| accept(&[a, b], r, bound, tol))
        .map(|mut r| {
            lattice::normalize_sign(&mut r);
            r
        })
}

fn fundamental_exact(thetas: &[Rational]) -> Rational {
    let num = thetas.iter().fold(num_bigint::BigInt::zero(), |g, t| g.gcd(t.numer()));
    let den = thetas.iter().fold(num_bigint::BigInt::from(1), |l, t| l.lcm(t.denom()));
    Rational::new(num, den)
}

/// Fundamental frequency of commensurable floats, through the ratios to `θ_1`.
fn fundamental_float(thetas: &[f64], bound: i64, tol: f64) -> Option<f64> {
    let first = *thetas.first()?;
    let mut ratios = vec![Rational::from_i64(1)];
    for &t in &thetas[1..] {
        let r = pair_relation(first, t, bound, tol)?;
        // r0·θ1 + r1·θj = 0
        ratios.push(Rational::new((-r[0]).into(), r[1].into()));
    }
    Some(Scalar::to_f64(&fundamental_exact(&ratios)) * first)
}

pub fn classify_closure<S: Scalar>(rho: &MatrixRealization, x: &[S], bound: i64, tol: f64) -> Result<ClosureReport> {
    let base = ClosureReport {
        kind: ClosureKind::Line,
        rank: 0,
        frequencies: Vec::new(),
        exact_frequencies: None,
        relations: Vec::new(),
        period: None,
        bound,
        tol,
    };
    let freqs = match frequencies(rho, x) {
        Ok(f) => f,
        Err(Error::NotSkewHermitian) => return Ok(base),
        Err(e) => return Err(e),
    };
    let exact = if S::EXACT {
        let xq: Vec<Rational> = x.iter().map(|v| v.to_rational().expect("exact backend")).collect();
        exact_frequencies(rho, &xq)?
    } else {
        None
    };
    let (rank, relations, period) = match &exact {
        Some(q) => {
            let (rank, rels) = q_rank_exact(q);
            let period = (rank == 1).then(|| 2.0 * PI / Scalar::to_f64(&fundamental_exact(q)));
            (rank, rels, period)
        }
        None => {
            let (rank, rels) = q_rank(&freqs, bound, tol);
            let period = if rank == 1 {
                fundamental_float(&freqs, bound, tol).map(|w| 2.0 * PI / w)
            } else {
                None
            };
            (rank, rels, period)
        }
    };
    let kind = match rank {
        0 => ClosureKind::Trivial,
        1 => ClosureKind::Circle,
        k => ClosureKind::Torus(k),
    };
    Ok(ClosureReport {
        kind,
        rank,
        frequencies: freqs,
        exact_frequencies: exact,
        relations,
        period,
        ..base
    })
}

/// Angle samples of `exp(tρ(X))`, one row per time, in turns (`[0, 1)`).
/// Each column follows the phase of one eigenvector of `ρ(X)`.
pub fn angle_samples(rho: &MatrixRealization, x: &[f64], t: f64, h: f64) -> Result<Vec<Vec<f64>>> {
    if !(t > 0.0 && h > 0.0) {
        return Err(Error::Invalid("horizon and step must be positive".into()));
    }
    let (_, vecs) = spectral_frequencies(rho, x)?;
    let step = crate::flow::expm(&(rho.rho(x) * Complex64::new(h, 0.0)));
    let n = rho.size();
    let mut g = DMatrix::<Complex64>::identity(n, n);
    let steps = (t / h).round() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    for _ in 0..=steps {
        out.push(
            vecs.iter()
                .map(|u| {
                    let z = (u.adjoint() * &g * u)[(0, 0)];
                    (z.arg() / (2.0 * PI)).rem_euclid(1.0)
                })
                .collect(),
        );
        g = &g * &step;
    }
    Ok(out)
}

/// Largest empty cyclic cube (as a fraction of the period) left by the
/// orbit on a `grid`-per-axis partition of the torus spanned by all
/// distinct frequencies. Supports up to three frequencies.
pub fn density_check(
    rho: &MatrixRealization,
    x: &[f64],
    report: &ClosureReport,
    t: f64,
    h: f64,
    grid: usize,
) -> Result<f64> {
    let k = report.frequencies.len();
    if !(1..=3).contains(&k) {
        return Err(Error::Invalid(format!(
            "density check on {k} frequencies (supported: 1 to 3)"
        )));
    }
    if grid == 0 {
        return Err(Error::Invalid("grid must be positive".into()));
    }
    let samples = angle_samples(rho, x, t, h)?;
    let mut hit = vec![false; grid.pow(k as u32)];
    for s in &samples {
        let mut idx = 0;
        for a in s.iter().take(k) {
            idx = idx * grid + ((a * grid as f64) as usize).min(grid - 1);
        }
        hit[idx] = true;
    }
    Ok(largest_empty_cube(&hit, grid, k) as f64 / grid as f64)
}

/// Side of the largest cyclic cube of cells with `hit == false`.
fn largest_empty_cube(hit: &[bool], g: usize, k: usize) -> usize {
    let d = 2 * g;
    let count = d.pow(k as u32);
    // prefix sums over the doubled grid, one extra slot per axis
    let e = d + 1;
    let mut pre = vec![0u32; e.pow(k as u32)];
    let flat = |c: &[usize]| c.iter().fold(0, |acc, &v| acc * e + v);
    let mut coord = vec![0usize; k];
    for lin in 0..count {
        let mut rem = lin;
        for a in (0..k).rev() {
            coord[a] = rem % d;
            rem /= d;
        }
        let src = coord.iter().fold(0, |acc, &v| acc * g + v % g);
        let val = hit[src] as u32;
        // inclusion–exclusion over the 2^k lower neighbours
        let shifted: Vec<usize> = coord.iter().map(|v| v + 1).collect();
        let mut sum = val as i64;
        for mask in 1..(1usize << k) {
            let mut c = shifted.clone();
            for (a, ca) in c.iter_mut().enumerate() {
                if mask >> a & 1 == 1 {
                    *ca -= 1;
                }
            }
            let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
            sum += sign * pre[flat(&c)] as i64;
        }
        pre[flat(&shifted)] = sum as u32;
    }
    let window_hits = |start: &[usize], s: usize| -> i64 {
        let mut sum = 0i64;
        for mask in 0..(1usize << k) {
            let c: Vec<usize> = start
                .iter()
                .enumerate()
                .map(|(a, &v)| if mask >> a & 1 == 1 { v } else { v + s })
                .collect();
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            sum += sign * pre[flat(&c)] as i64;
        }
        sum
    };
    let exists = |s: usize| -> bool {
        let total = g.pow(k as u32);
        let mut start = vec![0usize; k];
        (0..total).any(|lin| {
            let mut rem = lin;
            for a in (0..k).rev() {
                start[a] = rem % g;
                rem /= g;
            }
            window_hits(&start, s) == 0
        })
    };
    let (mut lo, mut hi) = (0, g);
    if exists(g) {
        return g;
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if exists(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realization::catalog;
    use proptest::prelude::*;

    type Q = Rational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn spectra() {
        assert_eq!(frequencies(&catalog::su2(), &[1.0, 0.0, 0.0]).unwrap(), vec![0.5]);
        let f = frequencies(&catalog::su2_su2(), &[1.0, 0.0, 0.0, 3.0, 0.0, 0.0]).unwrap();
        assert!((f[0] - 0.5).abs() < 1e-14 && (f[1] - 1.5).abs() < 1e-14);
        assert!(frequencies(&catalog::su2(), &[0.0; 3]).unwrap().is_empty());
        assert_eq!(
            frequencies(&catalog::solv2(), &[1.0, 0.0]),
            Err(Error::NotSkewHermitian)
        );
    }

    #[test]
    fn exact_spectra() {
        let x = [q(1, 1), q(0, 1), q(0, 1), q(3, 7), q(0, 1), q(0, 1)];
        assert_eq!(
            exact_frequencies(&catalog::su2_su2(), &x).unwrap(),
            Some(vec![q(3, 14), q(1, 2)])
        );
        let x = [q(1, 1), q(0, 1), q(0, 1), q(1, 1), q(0, 1), q(0, 1)];
        assert_eq!(exact_frequencies(&catalog::su2_su2(), &x).unwrap(), Some(vec![q(1, 2)]));
        // |(3,4,0)| = 5
        let x = [q(3, 1), q(4, 1), q(0, 1)];
        assert_eq!(exact_frequencies(&catalog::su2(), &x).unwrap(), Some(vec![q(5, 2)]));
        // |(1,1,0)| = √2
        let x = [q(1, 1), q(1, 1), q(0, 1)];
        assert_eq!(exact_frequencies(&catalog::su2(), &x).unwrap(), None);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(q_rank(&[1.0, 0.5], DEFAULT_BOUND, DEFAULT_TOL), (1, vec![vec![1, -2]]));
        assert_eq!(q_rank(&[1.0, SQRT2], DEFAULT_BOUND, DEFAULT_TOL), (2, vec![]));
        assert_eq!(
            q_rank(&[1.0, SQRT2, 1.0 + SQRT2], DEFAULT_BOUND, DEFAULT_TOL),
            (2, vec![vec![1, 1, -1]])
        );
        assert_eq!(q_rank(&[], DEFAULT_BOUND, DEFAULT_TOL).0, 0);
        assert_eq!(q_rank_exact(&[q(1, 1), q(1, 2)]), (1, vec![vec![1, -2]]));
        let three = [1.0, 3f64.sqrt(), 5f64.sqrt()];
        assert_eq!(q_rank(&three, DEFAULT_BOUND, DEFAULT_TOL).0, 3);
    }

    #[test]
    fn low_bound_overestimates() {
        assert_eq!(q_rank(&[1.0, 1.0 / 1009.0], 100, DEFAULT_TOL).0, 2);
        assert_eq!(q_rank(&[1.0, 1.0 / 1009.0], 10_000, DEFAULT_TOL).0, 1);
    }

    #[test]
    fn classification_examples() {
        let r2 = catalog::su2_su2();
        let c = classify_closure(
            &r2,
            &[q(1, 1), q(0, 1), q(0, 1), q(1, 2), q(0, 1), q(0, 1)],
            DEFAULT_BOUND,
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(c.kind, ClosureKind::Circle);
        assert!(c.exact_frequencies.is_some());
        let t = classify_closure(&r2, &[1.0, 0.0, 0.0, SQRT2, 0.0, 0.0], DEFAULT_BOUND, DEFAULT_TOL).unwrap();
        assert_eq!(t.kind, ClosureKind::Torus(2));
        assert!(t.relations.is_empty());
        let s = classify_closure(&catalog::su2(), &[0.0, 1.0, 0.0], DEFAULT_BOUND, DEFAULT_TOL).unwrap();
        assert_eq!(s.kind, ClosureKind::Circle);
        assert!((s.period.unwrap() - 4.0 * PI).abs() < 1e-12);
        let z = classify_closure(&catalog::su2(), &[0.0; 3], DEFAULT_BOUND, DEFAULT_TOL).unwrap();
        assert_eq!(z.kind, ClosureKind::Trivial);
        let l = classify_closure(&catalog::solv2(), &[1.0, 0.0], DEFAULT_BOUND, DEFAULT_TOL).unwrap();
        assert_eq!(l.kind, ClosureKind::Line);
    }

    #[test]
    fn circle_period_closes_the_orbit() {
        let rho = catalog::su2_su2();
        let x = [1.0, 0.0, 0.0, 2.0 / 3.0, 0.0, 0.0];
        let c = classify_closure(&rho, &x, DEFAULT_BOUND, DEFAULT_TOL).unwrap();
        let p = c.period.unwrap();
        assert!((p - 12.0 * PI).abs() < 1e-9);
        let g = crate::flow::expm(&(rho.rho(&x) * Complex64::new(p, 0.0)));
        assert!((g - CMatrix::identity(4, 4)).iter().all(|z| z.norm() < 1e-6));
    }

    #[test]
    fn density_examples() {
        let rho = catalog::su2_su2();
        let x = [1.0, 0.0, 0.0, SQRT2, 0.0, 0.0];
        let r = classify_closure(&rho, &x, DEFAULT_BOUND, DEFAULT_TOL).unwrap();
        let dense = density_check(&rho, &x, &r, 1e4, 0.05, 100).unwrap();
        assert!(dense < 0.05, "{dense}");
        let x = [1.0, 0.0, 0.0, 0.5, 0.0, 0.0];
        let r = classify_closure(&rho, &x, DEFAULT_BOUND, DEFAULT_TOL).unwrap();
        let short = density_check(&rho, &x, &r, 1e3, 0.05, 100).unwrap();
        let long = density_check(&rho, &x, &r, 1e4, 0.05, 100).unwrap();
        assert!(short > 0.2 && long > 0.2);
        let x = [1.0, 0.0, 0.0];
        let r = classify_closure(&catalog::su2(), &x, DEFAULT_BOUND, DEFAULT_TOL).unwrap();
        assert_eq!(density_check(&catalog::su2(), &x, &r, 20.0, 0.01, 100).unwrap(), 0.0);
    }

    #[test]
    fn empty_cube_search() {
        let g = 4;
        let mut hit = vec![true; 16];
        for (i, j) in [(3, 3), (3, 0), (0, 3), (0, 0)] {
            hit[i * g + j] = false;
        }
        // the four corners form one cyclic 2×2 square
        assert_eq!(largest_empty_cube(&hit, g, 2), 2);
        assert_eq!(largest_empty_cube(&[false; 8], 8, 1), 8);
        let mut hit = vec![false; 10];
        hit[2] = true;
        hit[5] = true;
        assert_eq!(largest_empty_cube(&hit, 10, 1), 6);
    }

    fn rq() -> impl Strategy<Value = Q> {
        (-60i64..=60, 1i64..=30).prop_map(|(a, b)| Q::from_ratio(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn rational_cartan_never_torus(a in rq(), b in rq()) {
            let x = [a, q(0, 1), q(0, 1), b, q(0, 1), q(0, 1)];
            let c = classify_closure(&catalog::su2_su2(), &x, DEFAULT_BOUND, DEFAULT_TOL).unwrap();
            prop_assert!(!matches!(c.kind, ClosureKind::Torus(_)));
            prop_assert!(c.exact_frequencies.is_some());
        }

        #[test]
        fn rescaling_invariant(v in proptest::collection::vec(-2.0f64..2.0, 6), lam in rq()) {
            prop_assume!(!lam.is_zero());
            let rho = catalog::su2_su2();
            let l = Scalar::to_f64(&lam);
            let a = classify_closure(&rho, &v, DEFAULT_BOUND, DEFAULT_TOL).unwrap();
            let w: Vec<f64> = v.iter().map(|x| x * l).collect();
            let b = classify_closure(&rho, &w, DEFAULT_BOUND, DEFAULT_TOL).unwrap();
            prop_assert_eq!(a.kind, b.kind);
        }

        #[test]
        fn every_relation_holds(v in proptest::collection::vec(-3i64..=3, 3), s in 0usize..3) {
            let base = [1.0, SQRT2, 3f64.sqrt()];
            let mut thetas = base[..=s].to_vec();
            thetas.push(v.iter().zip(&base).map(|(c, b)| *c as f64 * b).sum::<f64>().abs());
            let (_, rels) = q_rank(&thetas, DEFAULT_BOUND, DEFAULT_TOL);
            for r in rels {
                prop_assert!(relation_residual(&thetas, &r) < DEFAULT_TOL);
            }
        }

        #[test]
        fn rank_monotone(v in proptest::collection::vec(-3i64..=3, 3)) {
            let base = [1.0, SQRT2, 3f64.sqrt()];
            let extra = v.iter().zip(&base).map(|(c, b)| *c as f64 * b).sum::<f64>().abs() + 5f64.sqrt();
            let mut prev = 0;
            let mut thetas = Vec::new();
            for t in base.iter().copied().chain([extra]) {
                thetas.push(t);
                let (r, _) = q_rank(&thetas, DEFAULT_BOUND, DEFAULT_TOL);
                prop_assert!(r >= prev);
                prev = r;
            }
        }
    }
}
