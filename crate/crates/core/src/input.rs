//! Line-oriented definition files.
//!
//! ```text
//! # comment
//! algebra su2 dim 3
//! bracket 1 2 -> 3 1
//! bracket 2 3 -> 1 1
//! bracket 3 1 -> 2 1
//! param a 2
//! metric frame a 1 3/2
//! family axis
//!   base 0 0 0
//!   dir 1 0 0
//! ```
//!
//! Scalars are decimals, `p/q`, a parameter name, `-name` or
//! `literal*name`. Sections (`metric gram`, `metric lower`, `hsubalgebra`,
//! `mcomplement`, `ipm`, `family`, `rho`) take the indented or plain rows
//! that follow them, up to the next keyword.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::algebra::{LieAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::geodesy::AffineFamily;
use crate::homspace::ReductiveSpace;
use crate::linalg::Matrix;
use crate::metric::{killing_metric, InnerProduct, MetricLieAlgebra};
use crate::realization::{self, CMatrix, MatrixRealization};
use crate::scalar::{parse_rational, Rational, Scalar};

/// Section rows with their line numbers.
type Rows<'a> = Vec<(usize, Vec<&'a str>)>;
/// A metric header line with the matrix rows it read, if any.
type MetricSpec<'a> = (usize, Vec<&'a str>, Option<Matrix<Rational>>);

#[derive(Clone, Debug)]
pub struct InputFile {
    pub algebra: LieAlgebra<Rational>,
    pub metric: Option<InnerProduct<Rational>>,
    pub params: BTreeMap<String, Rational>,
    pub families: Vec<AffineFamily<Rational>>,
    pub reductive: Option<ReductiveSpace<Rational>>,
    pub realization: Option<MatrixRealization>,
}

impl InputFile {
    pub fn metric_algebra(&self) -> Result<MetricLieAlgebra<Rational>> {
        let ip = self
            .metric
            .clone()
            .ok_or_else(|| Error::Invalid("input defines no metric".into()))?;
        MetricLieAlgebra::new(self.algebra.clone(), ip)
    }

    pub fn family(&self, name: &str) -> Option<&AffineFamily<Rational>> {
        self.families.iter().find(|f| f.name == name)
    }
}

pub fn parse_file(path: &std::path::Path, overrides: &BTreeMap<String, Rational>) -> Result<InputFile> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_str(&text, overrides)
}

const KEYWORDS: &[&str] = &[
    "algebra",
    "bracket",
    "param",
    "metric",
    "hsubalgebra",
    "mcomplement",
    "ipm",
    "family",
    "rho",
];

struct Line<'a> {
    no: usize,
    words: Vec<&'a str>,
}

fn err(no: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line: no,
        msg: msg.into(),
    }
}

/// Attaches a line number to errors raised while building objects.
fn at<T>(no: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } | Error::Jacobi { .. } | Error::NotPositiveDefinite(_) => e,
        other => err(no, other.to_string()),
    })
}

struct Parser<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    params: BTreeMap<String, Rational>,
    overrides: &'a BTreeMap<String, Rational>,
}

impl<'a> Parser<'a> {
    fn scalar(&self, no: usize, tok: &str) -> Result<Rational> {
        if let Some(v) = parse_rational(tok) {
            return Ok(v);
        }
        let (coef, name) = match tok.split_once('*') {
            Some((c, n)) => (
                parse_rational(c).ok_or_else(|| err(no, format!("bad scalar `{tok}`")))?,
                n,
            ),
            None => match tok.strip_prefix('-') {
                Some(n) => (Rational::from_i64(-1), n),
                None => (Rational::from_i64(1), tok),
            },
        };
        let v = self
            .params
            .get(name)
            .ok_or_else(|| err(no, format!("unknown scalar or parameter `{tok}`")))?;
        Ok(coef * v)
    }

    fn vector(&self, no: usize, toks: &[&str], n: usize) -> Result<Vec<Rational>> {
        if toks.len() != n {
            return Err(err(no, format!("expected {n} entries, found {}", toks.len())));
        }
        toks.iter().map(|t| self.scalar(no, t)).collect()
    }

    /// Rows following a section header, up to the next keyword.
    fn rows(&mut self) -> Rows<'a> {
        let mut out = Vec::new();
        while let Some(l) = self.lines.get(self.pos) {
            if KEYWORDS.contains(&l.words[0]) {
                break;
            }
            out.push((l.no, l.words.clone()));
            self.pos += 1;
        }
        out
    }

    fn matrix(&mut self, no: usize, n: usize) -> Result<Matrix<Rational>> {
        let rows = self.rows();
        if rows.len() != n {
            return Err(err(no, format!("expected {n} matrix rows, found {}", rows.len())));
        }
        let data = rows
            .iter()
            .map(|(rn, w)| self.vector(*rn, w, n))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(&data)
    }

    fn vectors(&mut self, n: usize) -> Result<Vec<Vec<Rational>>> {
        let rows = self.rows();
        rows.iter().map(|(rn, w)| self.vector(*rn, w, n)).collect()
    }
}

fn complex_entry(no: usize, tok: &str) -> Result<Complex64> {
    let (re, im) = tok.split_once(':').unwrap_or((tok, "0"));
    let p = |s: &str| parse_rational(s).ok_or_else(|| err(no, format!("bad complex entry `{tok}`")));
    Ok(Complex64::new(p(re)?.to_f64(), p(im)?.to_f64()))
}

pub fn parse_str(text: &str, overrides: &BTreeMap<String, Rational>) -> Result<InputFile> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let body = l.split('#').next().unwrap_or("");
            let words: Vec<&str> = body.split_whitespace().collect();
            (!words.is_empty()).then_some(Line { no: i + 1, words })
        })
        .collect();
    let mut p = Parser {
        lines,
        pos: 0,
        params: BTreeMap::new(),
        overrides,
    };

    let (first_no, name, n) = {
        let Some(first) = p.lines.first() else {
            return Err(err(0, "empty input"));
        };
        match first.words.as_slice() {
            ["algebra", name, "dim", n] => (
                first.no,
                name.to_string(),
                n.parse::<usize>()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| err(first.no, "dimension must be a positive integer"))?,
            ),
            _ => return Err(err(first.no, "expected `algebra <name> dim <n>`")),
        }
    };
    p.pos = 1;

    let mut entries: BTreeMap<(usize, usize, usize), (usize, Rational)> = BTreeMap::new();
    let mut metric_spec: Option<MetricSpec> = None;
    let mut h_rows: Option<(usize, Vec<Vec<Rational>>)> = None;
    let mut m_rows: Option<(usize, Vec<Vec<Rational>>)> = None;
    let mut ipm: Option<(usize, Matrix<Rational>)> = None;
    let mut fam_specs: Vec<(usize, String, Rows)> = Vec::new();
    let mut rho_specs: BTreeMap<usize, (usize, Rows)> = BTreeMap::new();

    while p.pos < p.lines.len() {
        let no = p.lines[p.pos].no;
        let words = p.lines[p.pos].words.clone();
        p.pos += 1;
        match words.as_slice() {
            ["bracket", i, j, "->", k, c] => {
                let idx = |s: &str| -> Result<usize> {
                    match s.parse::<usize>() {
                        Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
                        _ => Err(err(no, format!("index `{s}` outside 1..{n}"))),
                    }
                };
                let (i, j, k) = (idx(i)?, idx(j)?, idx(k)?);
                if i == j {
                    return Err(err(no, "bracket of a basis vector with itself"));
                }
                let c = p.scalar(no, c)?;
                let key = if i < j { (i, j, k) } else { (j, i, k) };
                let c = if i < j { c } else { -c };
                if let Some((prev, _)) = entries.get(&key) {
                    return Err(err(no, format!("duplicate bracket entry (first given on line {prev})")));
                }
                entries.insert(key, (no, c));
            }
            ["param", name, value] => {
                if parse_rational(name).is_some() || name.contains('*') || name.starts_with('-') {
                    return Err(err(no, format!("invalid parameter name `{name}`")));
                }
                let v = match p.overrides.get(*name) {
                    Some(v) => v.clone(),
                    None => p.scalar(no, value)?,
                };
                p.params.insert(name.to_string(), v);
            }
            ["metric", kind, rest @ ..] => {
                if metric_spec.is_some() {
                    return Err(err(no, "metric given twice"));
                }
                let mat = match *kind {
                    "gram" | "lower" => {
                        if !rest.is_empty() && rest != ["A"] {
                            return Err(err(no, "unexpected tokens after metric kind"));
                        }
                        Some(p.matrix(no, n)?)
                    }
                    _ => None,
                };
                metric_spec = Some((no, words.clone(), mat));
            }
            ["hsubalgebra"] => h_rows = Some((no, p.vectors(n)?)),
            ["mcomplement"] => m_rows = Some((no, p.vectors(n)?)),
            ["ipm"] => {
                let k = m_rows
                    .as_ref()
                    .map(|(_, r)| r.len())
                    .ok_or_else(|| err(no, "`ipm` must follow `mcomplement`"))?;
                ipm = Some((no, p.matrix(no, k)?));
            }
            ["family", name] => {
                if fam_specs.iter().any(|(_, n, _)| n == name) {
                    return Err(err(no, format!("duplicate family `{name}`")));
                }
                let rows = p.rows();
                fam_specs.push((no, name.to_string(), rows));
            }
            ["rho", i] => {
                let i = i
                    .parse::<usize>()
                    .ok()
                    .filter(|v| (1..=n).contains(v))
                    .ok_or_else(|| err(no, format!("`rho` index outside 1..{n}")))?;
                if rho_specs.contains_key(&i) {
                    return Err(err(no, format!("rho {i} given twice")));
                }
                let rows = p.rows();
                rho_specs.insert(i, (no, rows));
            }
            [kw, ..] if KEYWORDS.contains(kw) => return Err(err(no, format!("malformed `{kw}` line"))),
            [w, ..] => return Err(err(no, format!("unexpected `{w}`"))),
            [] => unreachable!(),
        }
    }

    let list: Vec<(usize, usize, usize, Rational)> =
        entries.into_iter().map(|((i, j, k), (_, c))| (i, j, k, c)).collect();
    let algebra = at(first_no, LieAlgebra::from_entries(name.clone(), n, &list))?;
    algebra.validate()?;

    let metric = match metric_spec {
        None => None,
        Some((no, words, mat)) => Some(build_metric(&p, &algebra, no, &words, mat)?),
    };

    let mut families = Vec::new();
    for (no, fname, rows) in fam_specs {
        let mut base = None;
        let mut dirs = Vec::new();
        for (rn, w) in rows {
            match w[0] {
                "base" if base.is_none() => base = Some(p.vector(rn, &w[1..], n)?),
                "dir" => dirs.push(p.vector(rn, &w[1..], n)?),
                other => return Err(err(rn, format!("unexpected `{other}` in family"))),
            }
        }
        let base = base.unwrap_or_else(|| vec![Rational::from_i64(0); n]);
        families.push(at(no, AffineFamily::new(fname, base, dirs))?);
    }

    let reductive = match (h_rows, m_rows) {
        (None, None) => None,
        (Some((no, _)), None) => return Err(err(no, "`hsubalgebra` without `mcomplement`")),
        (h, Some((mno, m))) => {
            let h = at(
                h.as_ref().map_or(mno, |x| x.0),
                Subalgebra::new(&algebra, h.map(|x| x.1).unwrap_or_default()),
            )?;
            let ip = match ipm {
                Some((ino, g)) => at(ino, InnerProduct::new(g))?,
                None => {
                    let g = metric
                        .as_ref()
                        .ok_or_else(|| err(mno, "`mcomplement` needs `ipm` or a metric"))?;
                    let k = m.len();
                    at(mno, InnerProduct::new(Matrix::from_fn(k, k, |a, b| g.ip(&m[a], &m[b]))))?
                }
            };
            Some(at(mno, ReductiveSpace::new(algebra.clone(), h, m, ip))?)
        }
    };

    let realization = if rho_specs.is_empty() {
        realization::catalog::by_name(&name)
            .and_then(|r| MatrixRealization::for_algebra(&algebra, r.matrices().to_vec(), 1e-12).ok())
    } else {
        if rho_specs.len() != n {
            let no = rho_specs.values().next().map_or(0, |v| v.0);
            return Err(err(
                no,
                format!("`rho` given for {} of {n} basis vectors", rho_specs.len()),
            ));
        }
        let mut mats = Vec::new();
        for (no, rows) in rho_specs.values() {
            let size = rows.len();
            let mut m = CMatrix::zeros(size, size);
            for (r, (rn, w)) in rows.iter().enumerate() {
                if w.len() != size {
                    return Err(err(*rn, format!("expected {size} entries, found {}", w.len())));
                }
                for (c, tok) in w.iter().enumerate() {
                    m[(r, c)] = complex_entry(*rn, tok)?;
                }
            }
            if size == 0 {
                return Err(err(*no, "empty `rho` matrix"));
            }
            mats.push(m);
        }
        let no = rho_specs.values().next().map_or(0, |v| v.0);
        Some(at(no, MatrixRealization::for_algebra(&algebra, mats, 1e-9))?)
    };

    Ok(InputFile {
        algebra,
        metric,
        params: p.params,
        families,
        reductive,
        realization,
    })
}

fn kv<'a>(no: usize, tok: &'a str, key: &str) -> Result<&'a str> {
    tok.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| err(no, format!("expected `{key}=...`")))
}

fn build_metric(
    p: &Parser,
    g: &LieAlgebra<Rational>,
    no: usize,
    words: &[&str],
    mat: Option<Matrix<Rational>>,
) -> Result<InnerProduct<Rational>> {
    let n = g.dim();
    match words[1] {
        "gram" => InnerProduct::new(mat.expect("rows read")),
        "lower" => at(no, InnerProduct::from_lower_triangular(&mat.expect("rows read"))),
        "diag" => {
            let d = p.vector(no, &words[2..], n)?;
            InnerProduct::new(Matrix::from_diagonal(&d))
        }
        "frame" => {
            let d = p.vector(no, &words[2..], n)?;
            if d.iter().any(|x| *x <= Rational::from_i64(0)) {
                return Err(err(no, "frame scales must be positive"));
            }
            at(no, InnerProduct::from_lower_triangular(&Matrix::from_diagonal(&d)))
        }
        "killing" if words.len() == 2 => at(no, killing_metric(g)),
        "rank1" if words.len() == 5 => {
            let base = match kv(no, words[2], "base")? {
                "killing" => at(no, killing_metric(g))?,
                "identity" | "gram" => InnerProduct::identity(n),
                other => return Err(err(no, format!("unknown base `{other}`"))),
            };
            let v: Vec<&str> = kv(no, words[3], "V")?.split(',').collect();
            let v = p.vector(no, &v, n)?;
            let alpha = p.scalar(no, kv(no, words[4], "alpha")?)?;
            if alpha <= Rational::from_i64(0) {
                return Err(err(no, "alpha must be positive"));
            }
            at(no, base.rank_one_perturbation(&v, &alpha))
        }
        other => Err(err(no, format!("unknown metric form `{other}`"))),
    }
}
