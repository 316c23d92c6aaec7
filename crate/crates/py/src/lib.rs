//! Python bindings.
//!
//! A [`Model`] wraps one parsed definition file. Exact results come back
//! as `"p/q"` strings (feed them to `fractions.Fraction`), float results
//! as Python floats.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use geovec::closure;
use geovec::curvature::{self, ConnectionTable};
use geovec::geodesy;
use geovec::input::{self, InputFile};
use geovec::scalar::{format_rational, parse_rational};
use geovec::{flow, MetricLieAlgebra, Rational, ReductiveSpace, Scalar, Subalgebra};

fn err(e: geovec::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A coordinate as Python hands it over.
#[derive(Clone, Debug, FromPyObject)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    /// Exact value. Floats convert with their full binary expansion.
    pub fn to_rational(&self) -> Result<Rational, String> {
        match self {
            Number::Int(n) => Ok(Rational::from_i64(*n)),
            Number::Float(x) => Rational::from_float(*x).ok_or_else(|| format!("{x} is not finite")),
            Number::Text(s) => parse_rational(s).ok_or_else(|| format!("invalid number `{s}`")),
        }
    }
}

pub fn exact_vector(v: &[Number]) -> Result<Vec<Rational>, String> {
    v.iter().map(Number::to_rational).collect()
}

fn vector(v: &[Number], n: usize) -> PyResult<Vec<Rational>> {
    let v = exact_vector(v).map_err(PyValueError::new_err)?;
    if v.len() != n {
        return Err(PyValueError::new_err(format!(
            "expected {n} coordinates, got {}",
            v.len()
        )));
    }
    Ok(v)
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn floats(v: &[Rational]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

/// `(point, residual, family)`.
type ZeroRow = (Vec<f64>, f64, Option<String>);

#[pyclass(frozen)]
pub struct Model {
    file: InputFile,
}

impl Model {
    fn metric(&self) -> PyResult<MetricLieAlgebra<Rational>> {
        self.file.metric_algebra().map_err(err)
    }

    fn realization(&self) -> PyResult<&geovec::MatrixRealization> {
        self.file
            .realization
            .as_ref()
            .ok_or_else(|| PyValueError::new_err("model has no matrix realization"))
    }
}

#[pymethods]
impl Model {
    #[getter]
    fn name(&self) -> String {
        self.file.algebra.name().to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.file.algebra.dim()
    }

    #[getter]
    fn families(&self) -> Vec<String> {
        self.file.families.iter().map(|f| f.name.clone()).collect()
    }

    #[getter]
    fn gram(&self) -> PyResult<Vec<Vec<String>>> {
        let m = self.metric()?;
        Ok(m.gram().to_rows().iter().map(|r| strings(r)).collect())
    }

    fn bracket(&self, x: Vec<Number>, y: Vec<Number>) -> PyResult<Vec<String>> {
        let n = self.dim();
        let b = self
            .file
            .algebra
            .bracket(&vector(&x, n)?, &vector(&y, n)?)
            .map_err(err)?;
        Ok(strings(&b))
    }

    /// The geodesic-vector map, exactly.
    fn xi(&self, x: Vec<Number>) -> PyResult<Vec<String>> {
        let m = self.metric()?;
        let v = geodesy::xi(&m, &vector(&x, m.dim())?).map_err(err)?;
        Ok(strings(&v))
    }

    fn is_geodesic_vector(&self, x: Vec<Number>) -> PyResult<bool> {
        let m = self.metric()?;
        geodesy::is_geodesic_vector(&m, &vector(&x, m.dim())?, 0.0).map_err(err)
    }

    fn delta(&self) -> PyResult<Vec<String>> {
        Ok(strings(&geodesy::delta(&self.metric()?)))
    }

    #[pyo3(signature = (family, samples = 50, seed = 0))]
    fn verify_family(&self, family: &str, samples: usize, seed: u64) -> PyResult<bool> {
        let m = self.metric()?;
        let fam = self
            .file
            .family(family)
            .ok_or_else(|| PyKeyError::new_err(family.to_string()))?;
        let check = geodesy::verify_family(&m, fam, samples, seed, 0.0).map_err(err)?;
        Ok(check.passed)
    }

    /// Unit zeros of the map found by Newton restarts, as
    /// `(point, residual, family or None)`.
    #[pyo3(signature = (restarts = 500, seed = 0, tol = geodesy::NEWTON_TOL))]
    fn geodesic_vectors(&self, restarts: usize, seed: u64, tol: f64) -> PyResult<Vec<ZeroRow>> {
        let m = self.metric()?.to_f64();
        let mut report = geodesy::zero_set_solve(&m, restarts, seed, tol);
        report.cluster(&self.file.families, geodesy::FAMILY_RADIUS);
        Ok(report
            .zeros
            .into_iter()
            .map(|z| {
                let fam = z.family.map(|k| self.file.families[k].name.clone());
                (z.point, z.residual, fam)
            })
            .collect())
    }

    #[pyo3(signature = (restarts = 200, seed = 0))]
    fn geodesic_basis(&self, restarts: usize, seed: u64) -> PyResult<Option<Vec<Vec<f64>>>> {
        Ok(geodesy::geodesic_basis_search(&self.metric()?.to_f64(), restarts, seed))
    }

    fn sectional(&self, x: Vec<Number>, y: Vec<Number>) -> PyResult<String> {
        let m = self.metric()?;
        let n = m.dim();
        let k = curvature::sectional(&m, &vector(&x, n)?, &vector(&y, n)?).map_err(err)?;
        Ok(format_rational(&k))
    }

    fn nabla(&self, x: Vec<Number>, y: Vec<Number>) -> PyResult<Vec<String>> {
        let m = self.metric()?;
        let n = m.dim();
        Ok(strings(&curvature::nabla(&m, &vector(&x, n)?, &vector(&y, n)?)))
    }

    fn ricci(&self) -> PyResult<Vec<Vec<String>>> {
        let r = curvature::ricci_operator(&self.metric()?);
        Ok(r.to_rows().iter().map(|row| strings(row)).collect())
    }

    fn ricci_discriminant(&self) -> PyResult<String> {
        Ok(format_rational(
            &curvature::ricci_discriminant(&self.metric()?).map_err(err)?,
        ))
    }

    /// Norm of the second fundamental form of the span of `vectors`.
    fn second_fundamental_norm(&self, vectors: Vec<Vec<Number>>) -> PyResult<f64> {
        let m = self.metric()?;
        let span = vectors
            .iter()
            .map(|v| vector(v, m.dim()))
            .collect::<PyResult<Vec<_>>>()?;
        let sub = Subalgebra::new(m.algebra(), span).map_err(err)?;
        ConnectionTable::new(&m).second_fundamental_norm(&sub).map_err(err)
    }

    /// Geodesic through the identity. Returns a dict of per-step lists plus
    /// the drift summaries.
    #[pyo3(signature = (v0, t, h = 1e-3))]
    fn flow<'py>(&self, py: Python<'py>, v0: Vec<Number>, t: f64, h: f64) -> PyResult<Bound<'py, PyDict>> {
        let m = self.metric()?.to_f64();
        let v0 = floats(&vector(&v0, m.dim())?);
        let tr = flow::integrate(&m, self.realization()?, &v0, t, h).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("times", &tr.times)?;
        d.set_item("velocities", &tr.velocities)?;
        d.set_item("energy", &tr.energy)?;
        d.set_item("unitarity", &tr.unitarity)?;
        let group: Vec<Vec<Vec<(f64, f64)>>> = tr
            .group
            .iter()
            .map(|g| {
                (0..g.nrows())
                    .map(|i| (0..g.ncols()).map(|j| (g[(i, j)].re, g[(i, j)].im)).collect())
                    .collect()
            })
            .collect();
        d.set_item("group", group)?;
        d.set_item("energy_drift", tr.energy_drift())?;
        d.set_item("unitarity_defect", tr.unitarity_defect())?;
        Ok(d)
    }

    /// Classify the closure of `exp(tX)`. Exact coordinates take the exact
    /// path when `exact` is set.
    #[pyo3(signature = (x, bound = closure::DEFAULT_BOUND, tol = closure::DEFAULT_TOL, exact = true))]
    fn closure<'py>(
        &self,
        py: Python<'py>,
        x: Vec<Number>,
        bound: i64,
        tol: f64,
        exact: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let rho = self.realization()?;
        let x = vector(&x, rho.dim())?;
        let rep = if exact {
            closure::classify_closure(rho, &x, bound, tol)
        } else {
            closure::classify_closure(rho, &floats(&x), bound, tol)
        }
        .map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("kind", rep.kind.to_string())?;
        d.set_item("rank", rep.rank)?;
        d.set_item("frequencies", &rep.frequencies)?;
        d.set_item("exact_frequencies", rep.exact_frequencies.as_deref().map(strings))?;
        d.set_item("relations", &rep.relations)?;
        d.set_item("period", rep.period)?;
        Ok(d)
    }

    /// Sample the geodesic-orbit criterion. Without a reductive
    /// decomposition in the file the group itself is used.
    #[pyo3(signature = (samples = 100, seed = 0, tol = 1e-10, exact = true))]
    fn go_check<'py>(
        &self,
        py: Python<'py>,
        samples: usize,
        seed: u64,
        tol: f64,
        exact: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let space = match &self.file.reductive {
            Some(r) => r.clone(),
            None => ReductiveSpace::lie_group(&self.metric()?),
        };
        let rep = if exact {
            space.go_sample_check(samples, seed, tol)
        } else {
            space.to_f64().go_sample_check(samples, seed, tol)
        }
        .map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("passed", rep.passed())?;
        d.set_item("samples", rep.samples)?;
        d.set_item("max_residual", rep.max_residual)?;
        d.set_item("nonzero_z", rep.nonzero_z)?;
        d.set_item("worst", rep.worst)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Model({}, dim={})", self.file.algebra.name(), self.file.algebra.dim())
    }
}

fn overrides(params: Option<BTreeMap<String, Number>>) -> PyResult<BTreeMap<String, Rational>> {
    params
        .unwrap_or_default()
        .into_iter()
        .map(|(k, v)| Ok((k, v.to_rational().map_err(PyValueError::new_err)?)))
        .collect()
}

/// Parse a definition file; `params` override its `param` lines.
#[pyfunction]
#[pyo3(signature = (path, params = None))]
fn load(path: std::path::PathBuf, params: Option<BTreeMap<String, Number>>) -> PyResult<Model> {
    let file = input::parse_file(&path, &overrides(params)?).map_err(err)?;
    Ok(Model { file })
}

/// Same as [`load`] on the text of a definition file.
#[pyfunction]
#[pyo3(signature = (text, params = None))]
fn loads(text: &str, params: Option<BTreeMap<String, Number>>) -> PyResult<Model> {
    let file = input::parse_str(text, &overrides(params)?).map_err(err)?;
    Ok(Model { file })
}

#[pymodule]
fn pygeovec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(load, m)?)?;
    m.add_function(wrap_pyfunction!(loads, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_convert_exactly() {
        let v = exact_vector(&[Number::Int(-3), Number::Float(0.5), Number::Text("2/6".into())]).unwrap();
        assert_eq!(
            v,
            vec![
                Rational::from_i64(-3),
                Rational::from_ratio(1, 2),
                Rational::from_ratio(1, 3)
            ]
        );
        assert!(exact_vector(&[Number::Text("x".into())]).is_err());
        assert!(Number::Float(f64::NAN).to_rational().is_err());
    }
}
