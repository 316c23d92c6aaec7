//! Command-line front end for `geovec`.
//!
//! Every subcommand reads one definition file (`--input`). Tabular results
//! are CSV with a header row, written to `--out` when given and to stdout
//! otherwise. Exact values print as `p/q`, floats with 17 significant
//! digits.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use geovec::closure::{self, ClosureKind};
use geovec::curvature::{self, ConnectionTable};
use geovec::geodesy::{self, FAMILY_RADIUS};
use geovec::input::{self, InputFile};
use geovec::scalar::{format_f64, format_rational, ln_abs_rational, parse_rational};
use geovec::{flow, Error, MetricLieAlgebra, Rational, ReductiveSpace, Scalar, Subalgebra};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Debug, Parser)]
#[command(
    name = "geovec",
    version,
    about = "Geodesic vectors, curvature, geodesic flow and orbit closures"
)]
pub struct RunConfig {
    /// Definition file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exact", global = true)]
    pub backend: Backend,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Tolerance for float comparisons; each command has its own default.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the geodesic-vector map at X.
    Xi {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Newton search for unit geodesic vectors, clustered against the
    /// file's families.
    GeodesicVectors {
        #[arg(long, default_value_t = 500)]
        restarts: usize,
    },
    /// Check that every sampled point of a family is a geodesic vector.
    VerifyFamily {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// A basis of geodesic vectors.
    GeodesicBasis {
        #[arg(long, default_value_t = 200)]
        restarts: usize,
    },
    /// Sectional curvature of the plane spanned by E_i and E_j.
    Curvature {
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        plane: Vec<usize>,
    },
    /// Ricci operator as a matrix.
    Ricci,
    /// Discriminant of the Ricci characteristic polynomial, one row per
    /// value of the parameter `d`.
    RicciDiscriminant {
        #[arg(long, required = true, num_args = 1..)]
        d: Vec<String>,
    },
    /// Test whether a subalgebra is totally geodesic.
    TotallyGeodesic {
        /// Spanning vectors separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        sub: String,
    },
    /// Integrate the geodesic through the identity with initial velocity v0.
    Flow {
        #[arg(long, allow_hyphen_values = true)]
        v0: String,
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// Classify the closure of exp(tX).
    Closure {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = closure::DEFAULT_BOUND)]
        bound: i64,
        /// Sample the orbit up to this time and report the covering defect.
        #[arg(long)]
        density: Option<f64>,
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
    },
    /// Sample the geodesic-orbit criterion on the file's reductive space.
    GoCheck {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

/// Message plus the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        input_error(e)
    }
}

fn input_error(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_INPUT,
        msg: e.to_string(),
    }
}

type Outcome = std::result::Result<Output, Failure>;

/// What a command produced. `report` goes to stdout ahead of the table,
/// `notes` to stderr.
#[derive(Debug, Default)]
pub struct Output {
    pub report: String,
    pub notes: String,
    pub table: Option<Vec<Vec<String>>>,
    pub passed: bool,
}

impl Output {
    fn table(rows: Vec<Vec<String>>) -> Self {
        Output {
            table: Some(rows),
            passed: true,
            ..Default::default()
        }
    }
}

/// Run a parsed configuration, writing to stdout/stderr and `--out`.
pub fn run(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(out) => match emit(config, &out) {
            Ok(()) if out.passed => EXIT_OK,
            Ok(()) => EXIT_FAILED,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_INPUT
            }
        },
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    }
}

fn emit(config: &RunConfig, out: &Output) -> std::io::Result<()> {
    std::io::stderr().write_all(out.notes.as_bytes())?;
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(out.report.as_bytes())?;
    if let Some(rows) = &out.table {
        let bytes = write_csv(rows)?;
        match &config.out {
            Some(path) => std::fs::write(path, bytes)?,
            None => stdout.write_all(&bytes)?,
        }
    }
    stdout.flush()
}

/// Serialize rows (header first) as CSV.
pub fn write_csv(rows: &[Vec<String>]) -> std::io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| e.into_error())
}

/// Execute without touching stdout; used by [`run`] and by tests.
pub fn execute(config: &RunConfig) -> Outcome {
    if let Some(t) = config.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(input_error("--tol must be positive"));
        }
    }
    let path = config
        .input
        .as_ref()
        .ok_or_else(|| input_error("--input is required"))?;
    let file = input::parse_file(path, &BTreeMap::new())?;
    let ctx = Context { config, file: &file };
    match config.backend {
        Backend::Exact => ctx.dispatch::<Rational>(),
        Backend::Float => ctx.dispatch::<f64>(),
    }
}

struct Context<'a> {
    config: &'a RunConfig,
    file: &'a InputFile,
}

/// One cell: `p/q` on the exact backend, 17 significant digits otherwise.
pub fn cell<S: Scalar>(x: &S) -> String {
    match x.to_rational() {
        Some(r) if S::EXACT => format_rational(&r),
        _ => format_f64(x.to_f64()),
    }
}

fn header(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Parse a vector of exact literals separated by spaces or commas.
pub fn parse_vector(s: &str) -> std::result::Result<Vec<Rational>, Failure> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| parse_rational(t).ok_or_else(|| input_error(format!("invalid number `{t}`"))))
        .collect()
}

fn check_len(v: &[Rational], n: usize, what: &str) -> std::result::Result<(), Failure> {
    if v.len() == n {
        Ok(())
    } else {
        Err(input_error(format!("{what} has {} entries, expected {n}", v.len())))
    }
}

fn convert<S: Scalar>(v: &[Rational]) -> Vec<S> {
    v.iter().map(S::from_rational).collect()
}

impl Context<'_> {
    fn tol(&self, default: f64) -> f64 {
        self.config.tol.unwrap_or(default)
    }

    fn metric<S: Scalar>(&self) -> std::result::Result<MetricLieAlgebra<S>, Failure> {
        let m = self.file.metric_algebra()?;
        Ok(MetricLieAlgebra::new(m.algebra().convert(), m.ip().convert())?)
    }

    fn dispatch<S: Scalar>(&self) -> Outcome {
        match &self.config.command {
            Command::Xi { x } => self.xi::<S>(x),
            Command::GeodesicVectors { restarts } => self.geodesic_vectors(*restarts),
            Command::VerifyFamily { family, samples } => self.verify_family::<S>(family, *samples),
            Command::GeodesicBasis { restarts } => self.geodesic_basis(*restarts),
            Command::Curvature { plane } => self.curvature::<S>(plane[0], plane[1]),
            Command::Ricci => self.ricci::<S>(),
            Command::RicciDiscriminant { d } => self.ricci_discriminant(d),
            Command::TotallyGeodesic { sub } => self.totally_geodesic::<S>(sub),
            Command::Flow { v0, t, h } => self.flow(v0, *t, *h),
            Command::Closure {
                x,
                bound,
                density,
                grid,
                step,
            } => self.closure::<S>(x, *bound, *density, *grid, *step),
            Command::GoCheck { samples } => self.go_check::<S>(*samples),
        }
    }

    fn xi<S: Scalar>(&self, x: &str) -> Outcome {
        let m = self.metric::<S>()?;
        let x = parse_vector(x)?;
        check_len(&x, m.dim(), "--x")?;
        let v = geodesy::xi(&m, &convert::<S>(&x))?;
        Ok(Output::table(vec![header("xi", m.dim()), v.iter().map(cell).collect()]))
    }

    fn geodesic_vectors(&self, restarts: usize) -> Outcome {
        let m = self.metric::<f64>()?;
        let tol = self.tol(geodesy::NEWTON_TOL);
        let mut report = geodesy::zero_set_solve(&m, restarts, self.config.seed, tol);
        let families = &self.file.families;
        report.cluster(families, FAMILY_RADIUS);
        let mut rows = vec![header("z", m.dim())];
        rows[0].extend(["residual".to_string(), "family".to_string()]);
        for z in &report.zeros {
            let mut r: Vec<String> = z.point.iter().map(|x| format_f64(*x)).collect();
            r.push(format_f64(z.residual));
            r.push(
                z.family
                    .map_or_else(|| "none".to_string(), |k| families[k].name.clone()),
            );
            rows.push(r);
        }
        let mut text = format!(
            "restarts {} converged {} zeros {} unassigned {}\n",
            report.restarts,
            report.converged,
            report.zeros.len(),
            report.unassigned()
        );
        for (f, hits) in families.iter().zip(report.family_hits(families.len())) {
            text.push_str(&format!("family {} hits {hits}\n", f.name));
        }
        Ok(Output {
            notes: text,
            ..Output::table(rows)
        })
    }

    fn verify_family<S: Scalar>(&self, name: &str, samples: usize) -> Outcome {
        let m = self.metric::<S>()?;
        let fam = self
            .file
            .family(name)
            .ok_or_else(|| input_error(format!("no family `{name}` in the input")))?;
        let fam = geovec::AffineFamily::new(
            fam.name.clone(),
            convert(&fam.base),
            fam.directions.iter().map(|d| convert(d)).collect(),
        )?;
        let check = geodesy::verify_family(&m, &fam, samples, self.config.seed, self.tol(1e-10))?;
        let report = match &check.counterexample {
            None => format!("family {name}: no counterexample among {samples} samples\n"),
            Some((p, v)) => format!(
                "family {name}: counterexample x = ({}) with xi = ({})\n",
                p.iter().map(cell).collect::<Vec<_>>().join(", "),
                v.iter().map(cell).collect::<Vec<_>>().join(", ")
            ),
        };
        Ok(Output {
            report,
            table: None,
            passed: check.passed,
            ..Default::default()
        })
    }

    fn geodesic_basis(&self, restarts: usize) -> Outcome {
        let m = self.metric::<f64>()?;
        match geodesy::geodesic_basis_search(&m, restarts, self.config.seed) {
            Some(basis) => {
                let mut rows = vec![header("e", m.dim())];
                rows.extend(basis.iter().map(|v| v.iter().map(|x| format_f64(*x)).collect()));
                Ok(Output::table(rows))
            }
            None => Ok(Output {
                report: format!("no geodesic basis found in {restarts} restarts\n"),
                table: None,
                passed: false,
                ..Default::default()
            }),
        }
    }

    fn curvature<S: Scalar>(&self, i: usize, j: usize) -> Outcome {
        let m = self.metric::<S>()?;
        let n = m.dim();
        if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
            return Err(input_error(format!("plane indices must lie in 1..{n}")));
        }
        let e = |k: usize| geovec::linalg::basis_vector::<S>(n, k - 1);
        let k = curvature::sectional(&m, &e(i), &e(j))?;
        Ok(Output::table(vec![
            vec!["i".into(), "j".into(), "sectional".into()],
            vec![i.to_string(), j.to_string(), cell(&k)],
        ]))
    }

    fn ricci<S: Scalar>(&self) -> Outcome {
        let m = self.metric::<S>()?;
        let ric = curvature::ricci_operator(&m);
        let mut rows = vec![header("c", m.dim())];
        rows.extend(ric.to_rows().iter().map(|r| r.iter().map(cell).collect()));
        Ok(Output::table(rows))
    }

    fn ricci_discriminant(&self, ds: &[String]) -> Outcome {
        if self.config.backend != Backend::Exact {
            return Err(Error::RequiresExact("ricci-discriminant").into());
        }
        let path = self.config.input.as_ref().expect("checked");
        let mut rows = vec![vec![
            "d".to_string(),
            "discriminant".to_string(),
            "log10_abs".to_string(),
            "log_slope".to_string(),
        ]];
        let mut prev: Option<(f64, f64)> = None;
        for d in ds {
            let value = parse_rational(d).ok_or_else(|| input_error(format!("invalid --d `{d}`")))?;
            if value <= Rational::from_i64(0) {
                return Err(input_error("--d must be positive"));
            }
            let overrides = BTreeMap::from([("d".to_string(), value.clone())]);
            let file = input::parse_file(path, &overrides)?;
            if !file.params.contains_key("d") {
                return Err(input_error("input has no parameter `d`"));
            }
            let disc = curvature::ricci_discriminant(&file.metric_algebra()?)?;
            let ln_d = ln_abs_rational(&value);
            let ln_disc = if disc == Rational::from_i64(0) {
                f64::NEG_INFINITY
            } else {
                ln_abs_rational(&disc)
            };
            let slope = prev.map_or(String::new(), |(a, b)| format_f64((ln_disc - b) / (ln_d - a)));
            prev = Some((ln_d, ln_disc));
            rows.push(vec![
                format_rational(&value),
                format_rational(&disc),
                format_f64(ln_disc / std::f64::consts::LN_10),
                slope,
            ]);
        }
        Ok(Output::table(rows))
    }

    fn totally_geodesic<S: Scalar>(&self, sub: &str) -> Outcome {
        let m = self.metric::<S>()?;
        let span = sub
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                let v = parse_vector(s)?;
                check_len(&v, m.dim(), "--sub vector")?;
                Ok(convert::<S>(&v))
            })
            .collect::<std::result::Result<Vec<_>, Failure>>()?;
        let sub = Subalgebra::new(m.algebra(), span)?;
        let table = ConnectionTable::new(&m);
        let tol = self.tol(1e-10);
        let norm = table.second_fundamental_norm(&sub)?;
        let yes = table.is_totally_geodesic(&sub, tol)?;
        Ok(Output {
            table: Some(vec![
                vec!["totally_geodesic".into(), "second_fundamental_norm".into()],
                vec![yes.to_string(), format_f64(norm)],
            ]),
            passed: yes,
            ..Default::default()
        })
    }

    fn realization(&self) -> std::result::Result<&geovec::MatrixRealization, Failure> {
        self.file
            .realization
            .as_ref()
            .ok_or_else(|| input_error("input has no matrix realization (add `rho` sections)"))
    }

    fn flow(&self, v0: &str, t: f64, h: f64) -> Outcome {
        let m = self.metric::<f64>()?;
        let rho = self.realization()?;
        let v0 = parse_vector(v0)?;
        check_len(&v0, m.dim(), "--v0")?;
        let traj = flow::integrate(&m, rho, &convert::<f64>(&v0), t, h)?;
        let mut rows = vec![traj.csv_header()];
        rows.extend(
            traj.csv_rows()
                .iter()
                .map(|r| r.iter().map(|x| format_f64(*x)).collect()),
        );
        Ok(Output {
            notes: format!(
                "steps {} energy_drift {} unitarity_defect {}\n",
                traj.len() - 1,
                format_f64(traj.energy_drift()),
                format_f64(traj.unitarity_defect())
            ),
            ..Output::table(rows)
        })
    }

    fn closure<S: Scalar>(&self, x: &str, bound: i64, density: Option<f64>, grid: usize, step: f64) -> Outcome {
        let rho = self.realization()?;
        let x = parse_vector(x)?;
        check_len(&x, rho.dim(), "--x")?;
        let tol = self.tol(closure::DEFAULT_TOL);
        let report = closure::classify_closure(rho, &convert::<S>(&x), bound, tol)?;
        let xf = convert::<f64>(&x);
        let mut text = format!("closure: {}\n", report.kind);
        text.push_str(&format!("rank: {}\n", report.rank));
        let freqs = match &report.exact_frequencies {
            Some(q) => q.iter().map(format_rational).collect::<Vec<_>>(),
            None => report.frequencies.iter().map(|f| format_f64(*f)).collect(),
        };
        text.push_str(&format!("frequencies: {}\n", freqs.join(" ")));
        for r in &report.relations {
            let r: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            text.push_str(&format!("relation: {}\n", r.join(" ")));
        }
        if let Some(p) = report.period {
            text.push_str(&format!("period: {}\n", format_f64(p)));
        }
        if report.exact_frequencies.is_none() && report.kind != ClosureKind::Line {
            text.push_str(&format!("relation search bound: {bound}\n"));
        }
        let mut table = None;
        if let Some(t) = density {
            let defect = closure::density_check(rho, &xf, &report, t, step, grid)?;
            text.push_str(&format!(
                "covering defect (T = {t}, grid {grid}): {}\n",
                format_f64(defect)
            ));
        }
        if self.config.out.is_some() {
            let t = density.unwrap_or(100.0);
            let samples = closure::angle_samples(rho, &xf, t, step)?;
            let k = samples.first().map_or(0, Vec::len);
            let mut rows = vec![std::iter::once("t".to_string())
                .chain(header("angle", k))
                .collect::<Vec<_>>()];
            rows.extend(samples.iter().enumerate().map(|(i, s)| {
                std::iter::once(format_f64(i as f64 * step))
                    .chain(s.iter().map(|v| format_f64(*v)))
                    .collect()
            }));
            table = Some(rows);
        }
        Ok(Output {
            report: text,
            table,
            passed: true,
            ..Default::default()
        })
    }

    fn go_check<S: Scalar>(&self, samples: usize) -> Outcome {
        let space: ReductiveSpace<Rational> = match &self.file.reductive {
            Some(r) => r.clone(),
            None => ReductiveSpace::lie_group(&self.file.metric_algebra()?),
        };
        let tol = self.tol(1e-10);
        let report = if S::EXACT {
            space.go_sample_check(samples, self.config.seed, tol)?
        } else {
            space.to_f64().go_sample_check(samples, self.config.seed, tol)?
        };
        let mut text = format!(
            "samples {} max_residual {} nonzero_z {}\n",
            report.samples,
            format_f64(report.max_residual),
            report.nonzero_z
        );
        match (&report.worst, report.passed()) {
            (_, true) => text.push_str(&format!("no counterexample among {samples} samples\n")),
            (Some(w), false) => text.push_str(&format!(
                "counterexample direction ({})\n",
                w.iter().map(|x| format_f64(*x)).collect::<Vec<_>>().join(", ")
            )),
            (None, false) => text.push_str("counterexample found\n"),
        }
        Ok(Output {
            report: text,
            table: None,
            passed: report.passed(),
            ..Default::default()
        })
    }
}
