//! Second-order geodesic equation in exponential coordinates on SU(2),
//! integrated independently of the Euler–Arnold code path.

use geovec::flow;
use geovec::linalg::Matrix;
use geovec::metric::diagonal_su2;
use geovec::realization::catalog;
use geovec::MetricLieAlgebra;

/// Left-trivialized differential of exp: `g⁻¹ dg = J(q) dq`.
fn dexp(g: &MetricLieAlgebra<f64>, q: &[f64]) -> Matrix<f64> {
    let ad = g.algebra().ad_matrix(q).unwrap().scale(&-1.0);
    let mut term = Matrix::identity(3);
    let mut sum = Matrix::identity(3);
    let mut fact = 1.0;
    for k in 1..40 {
        term = term.mul(&ad);
        fact *= (k + 1) as f64;
        sum = sum.add(&term.scale(&(1.0 / fact)));
    }
    sum
}

fn chart_metric(g: &MetricLieAlgebra<f64>, q: &[f64]) -> Matrix<f64> {
    let j = dexp(g, q);
    j.transpose().mul(g.gram()).mul(&j)
}

fn christoffel(g: &MetricLieAlgebra<f64>, q: &[f64]) -> Vec<f64> {
    let eps = 1e-5;
    let inv = chart_metric(g, q).inverse(1e-14).unwrap();
    let dg: Vec<Matrix<f64>> = (0..3)
        .map(|l| {
            let mut p = q.to_vec();
            let mut m = q.to_vec();
            p[l] += eps;
            m[l] -= eps;
            chart_metric(g, &p).sub(&chart_metric(g, &m)).scale(&(0.5 / eps))
        })
        .collect();
    // gamma[(k*3 + i)*3 + j] = Γ^k_ij
    let mut gamma = vec![0.0; 27];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for l in 0..3 {
                    s += inv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                gamma[(k * 3 + i) * 3 + j] = 0.5 * s;
            }
        }
    }
    gamma
}

fn accel(g: &MetricLieAlgebra<f64>, q: &[f64], p: &[f64]) -> Vec<f64> {
    let gamma = christoffel(g, q);
    (0..3)
        .map(|k| {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s -= gamma[(k * 3 + i) * 3 + j] * p[i] * p[j];
                }
            }
            s
        })
        .collect()
}

fn chart_body_velocities(g: &MetricLieAlgebra<f64>, v0: &[f64], t: f64, steps: usize) -> Vec<Vec<f64>> {
    let h = t / steps as f64;
    let mut y: Vec<f64> = [0.0; 3].iter().chain(v0).copied().collect();
    let rhs = |y: &[f64]| {
        let a = accel(g, &y[..3], &y[3..]);
        y[3..].iter().copied().chain(a).collect::<Vec<f64>>()
    };
    let body = |y: &[f64]| dexp(g, &y[..3]).mul_vec(&y[3..]);
    let mut out = vec![body(&y)];
    for _ in 0..steps {
        let k1 = rhs(&y);
        let y2: Vec<f64> = y.iter().zip(&k1).map(|(a, b)| a + 0.5 * h * b).collect();
        let k2 = rhs(&y2);
        let y3: Vec<f64> = y.iter().zip(&k2).map(|(a, b)| a + 0.5 * h * b).collect();
        let k3 = rhs(&y3);
        let y4: Vec<f64> = y.iter().zip(&k3).map(|(a, b)| a + h * b).collect();
        let k4 = rhs(&y4);
        for i in 0..6 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out.push(body(&y));
    }
    out
}

#[test]
fn euler_arnold_sign_matches_chart_geodesic() {
    let m = diagonal_su2(1.0, 2.0, 3.0).unwrap();
    let v0 = [0.8, -0.5, 0.6];
    let steps = 200;
    let chart = chart_body_velocities(&m, &v0, 1.0, steps);
    let traj = flow::integrate(&m, &catalog::su2(), &v0, 1.0, 1.0 / steps as f64).unwrap();
    let worst = chart
        .iter()
        .zip(&traj.velocities)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    assert!(worst < 1e-5, "body velocities differ by {worst}");
    assert!(traj.velocity_spread() > 1e-2, "test direction must not be stationary");

    // the opposite sign drifts away
    let flipped: Vec<Vec<f64>> = {
        let mut v = v0.to_vec();
        let h = 1.0 / steps as f64;
        let mut out = vec![v.clone()];
        for _ in 0..steps {
            let f = flow::euler_arnold_rhs(&m, &v);
            for i in 0..3 {
                v[i] -= h * f[i];
            }
            out.push(v.clone());
        }
        out
    };
    let gap = chart
        .iter()
        .zip(&flipped)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    assert!(gap > 1e-2);
}
