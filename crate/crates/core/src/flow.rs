//! Geodesic flow: Euler–Arnold equation in the algebra, reconstruction on
//! a matrix group.
//!
//! A geodesic `γ` with body velocity `V = γ⁻¹γ'` satisfies `V̇ = ξ(V)`.
//! The group curve is rebuilt one step at a time by `g ← g·exp(h ρ(V_mid))`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geodesy;
use crate::linalg;
use crate::metric::MetricLieAlgebra;
use crate::realization::{CMatrix, MatrixRealization};

pub fn euler_arnold_rhs(m: &MetricLieAlgebra<f64>, v: &[f64]) -> Vec<f64> {
    geodesy::xi(m, v).expect("velocity length matches the algebra")
}

const PADE_ORDER: usize = 6;

fn one_norm(a: &CMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a diagonal `[6/6]` Padé
/// approximant.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = one_norm(a);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * Complex64::new(0.5f64.powi(s), 0.0);
    // c_k = (2q−k)! q! / ((2q)! k! (q−k)!)
    let q = PADE_ORDER;
    let mut c = vec![1.0f64; q + 1];
    for k in 1..=q {
        c[k] = c[k - 1] * (q + 1 - k) as f64 / (k * (2 * q + 1 - k)) as f64;
    }
    let mut num = CMatrix::identity(n, n);
    let mut den = CMatrix::identity(n, n);
    let mut pow = CMatrix::identity(n, n);
    for (k, ck) in c.iter().enumerate().skip(1) {
        pow = &pow * &scaled;
        let term = &pow * Complex64::new(*ck, 0.0);
        num += &term;
        if k % 2 == 0 {
            den += term;
        } else {
            den -= term;
        }
    }
    let mut r = den
        .lu()
        .solve(&num)
        .expect("Padé denominator is invertible for small norm");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Sampled curve on a uniform time grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub group: Vec<CMatrix>,
    pub velocities: Vec<Vec<f64>>,
    /// `(V, V)` at each sample.
    pub energy: Vec<f64>,
    /// Frobenius norm of `g*g − I`.
    pub unitarity: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `max_t |‖V(t)‖ − ‖V(0)‖|`.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.energy[0].max(0.0).sqrt();
        self.energy
            .iter()
            .map(|e| (e.max(0.0).sqrt() - e0).abs())
            .fold(0.0, f64::max)
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.unitarity.iter().copied().fold(0.0, f64::max)
    }

    /// `max_t ‖V(t) − V(0)‖`.
    pub fn velocity_spread(&self) -> f64 {
        self.velocities
            .iter()
            .map(|v| linalg::norm_f64(&linalg::sub(v, &self.velocities[0])))
            .fold(0.0, f64::max)
    }

    /// Largest entrywise distance to another trajectory's group samples.
    pub fn group_distance(&self, other: &Trajectory) -> f64 {
        self.group
            .iter()
            .zip(&other.group)
            .map(|(a, b)| (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    /// Header for [`Trajectory::csv_rows`].
    pub fn csv_header(&self) -> Vec<String> {
        let mut h = vec!["t".to_string()];
        let n = self.velocities.first().map_or(0, Vec::len);
        h.extend((1..=n).map(|i| format!("v{i}")));
        let s = self.group.first().map_or(0, |g| g.nrows());
        for i in 1..=s {
            for j in 1..=s {
                h.push(format!("g{i}{j}_re"));
                h.push(format!("g{i}{j}_im"));
            }
        }
        h.push("energy".into());
        h.push("unitarity_defect".into());
        h
    }

    pub fn csv_rows(&self) -> Vec<Vec<f64>> {
        (0..self.len())
            .map(|k| {
                let mut row = vec![self.times[k]];
                row.extend(&self.velocities[k]);
                let g = &self.group[k];
                for i in 0..g.nrows() {
                    for j in 0..g.ncols() {
                        row.push(g[(i, j)].re);
                        row.push(g[(i, j)].im);
                    }
                }
                row.push(self.energy[k]);
                row.push(self.unitarity[k]);
                row
            })
            .collect()
    }
}

fn unitarity(g: &CMatrix) -> f64 {
    let n = g.nrows();
    (g.adjoint() * g - CMatrix::identity(n, n)).norm()
}

fn grid(t: f64, h: f64) -> Result<(usize, f64)> {
    if !(t > 0.0 && h > 0.0 && t.is_finite() && h.is_finite()) {
        return Err(Error::Invalid("horizon and step must be positive".into()));
    }
    let steps = ((t / h).round() as usize).max(1);
    Ok((steps, t / steps as f64))
}

fn check_dims(m: &MetricLieAlgebra<f64>, rho: &MatrixRealization, v: &[f64]) -> Result<()> {
    if rho.dim() != m.dim() || v.len() != m.dim() {
        return Err(Error::Dimension(format!(
            "algebra of dimension {}, realization of {}, vector of {}",
            m.dim(),
            rho.dim(),
            v.len()
        )));
    }
    Ok(())
}

/// RK4 for `V̇ = ξ(V)` with exponential reconstruction of `g`. The step is
/// adjusted so that an integer number of steps covers `[0, T]`.
pub fn integrate(m: &MetricLieAlgebra<f64>, rho: &MatrixRealization, v0: &[f64], t: f64, h: f64) -> Result<Trajectory> {
    check_dims(m, rho, v0)?;
    let (steps, h) = grid(t, h)?;
    let f = |v: &[f64]| euler_arnold_rhs(m, v);
    let n = rho.size();
    let mut v = v0.to_vec();
    let mut g = CMatrix::identity(n, n);
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        group: Vec::with_capacity(steps + 1),
        velocities: Vec::with_capacity(steps + 1),
        energy: Vec::with_capacity(steps + 1),
        unitarity: Vec::with_capacity(steps + 1),
    };
    let push = |traj: &mut Trajectory, k: usize, v: &[f64], g: &CMatrix| {
        traj.times.push(k as f64 * h);
        traj.velocities.push(v.to_vec());
        traj.energy.push(m.inner(v, v));
        traj.unitarity.push(unitarity(g));
        traj.group.push(g.clone());
    };
    push(&mut traj, 0, &v, &g);
    for k in 1..=steps {
        let k1 = f(&v);
        let k2 = f(&linalg::axpy(&v, &(h / 2.0), &k1));
        let k3 = f(&linalg::axpy(&v, &(h / 2.0), &k2));
        let k4 = f(&linalg::axpy(&v, &h, &k3));
        let mut next = v.clone();
        for i in 0..next.len() {
            next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        // cubic Hermite interpolant at the midpoint
        let f1 = f(&next);
        let mid: Vec<f64> = (0..v.len())
            .map(|i| 0.5 * (v[i] + next[i]) + h / 8.0 * (k1[i] - f1[i]))
            .collect();
        g = &g * expm(&(rho.rho(&mid) * Complex64::new(h, 0.0)));
        v = next;
        push(&mut traj, k, &v, &g);
    }
    Ok(traj)
}

/// `exp(t ρ(X))` sampled on the grid. Without a metric, `energy` holds the
/// coordinate norm `Σ x_i²`.
pub fn one_parameter_orbit(rho: &MatrixRealization, x: &[f64], t: f64, h: f64) -> Result<Trajectory> {
    if x.len() != rho.dim() {
        return Err(Error::Dimension("vector length vs realization".into()));
    }
    let (steps, h) = grid(t, h)?;
    let a = rho.rho(x);
    let e = x.iter().map(|c| c * c).sum::<f64>();
    let mut traj = Trajectory {
        times: Vec::new(),
        group: Vec::new(),
        velocities: Vec::new(),
        energy: Vec::new(),
        unitarity: Vec::new(),
    };
    for k in 0..=steps {
        let tk = k as f64 * h;
        let g = expm(&(&a * Complex64::new(tk, 0.0)));
        traj.times.push(tk);
        traj.unitarity.push(unitarity(&g));
        traj.group.push(g);
        traj.velocities.push(x.to_vec());
        traj.energy.push(e);
    }
    Ok(traj)
}

/// `Σ (G_ii v_i)²`, conserved by the flow on `su(2)` with a diagonal metric.
pub fn diagonal_casimir(m: &MetricLieAlgebra<f64>, v: &[f64]) -> f64 {
    v.iter()
        .enumerate()
        .map(|(i, vi)| (m.gram()[(i, i)] * vi).powi(2))
        .sum()
}
