//! Per-atom reports, Z scans, the `S = a + b ln Z` fit, model comparisons,
//! and the flat CSV/JSON tables the command line writes.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::basis::{find_atom, parse_basis_file, validate_basis, AtomBasis};
use crate::densities::{moments, momentum_density, position_density, RadialDensity, Space};
use crate::distances::{distance_report, DistanceReport};
use crate::error::{Error, Result};
use crate::measures::{
    complexity, entropy_bounds, onicescu, order_parameter, shannon_entropy, total_entropy, ComplexityPoint,
    EntropyBounds, OnicescuSet,
};
use crate::models::{asymptotic_density, thomas_fermi_density};
use crate::quadrature::QuadratureSpec;

/// Allowed excursion past an entropy bound before a row is rejected.
pub const BOUND_SLACK: f64 = 1e-7;

/// Occupancy sums must match Z to this relative accuracy.
const OCCUPANCY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomReport {
    pub z: u32,
    pub symbol: String,
    pub s_r: f64,
    pub s_k: f64,
    pub s: f64,
    pub bounds: EntropyBounds,
    pub omega: f64,
    pub delta: f64,
    pub onicescu: OnicescuSet,
    /// `⟨r²⟩`
    pub msr: f64,
    /// `T = ⟨k²⟩/2`
    pub kinetic: f64,
    pub complexities: Vec<ComplexityPoint>,
}

fn staged<T>(stage: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.at_stage(stage))
}

/// Densities, entropies, bounds, Onicescu content, order and the requested
/// complexities of one atom.
pub fn compute_report(basis: &AtomBasis, pairs: &[(f64, f64)], spec: QuadratureSpec) -> Result<AtomReport> {
    let check = validate_basis(basis, OCCUPANCY_TOLERANCE);
    if !check.occupancy_ok {
        return Err(Error::InvalidParameter(format!(
            "{}: occupancies sum to {} but Z = {}",
            basis.symbol,
            basis.occupancy_sum(),
            basis.z
        )));
    }
    let rho = staged("position density", position_density(basis, spec))?;
    let n = staged("momentum density", momentum_density(basis, spec))?;
    let s_r = staged("position entropy", shannon_entropy(&rho))?;
    let s_k = staged("momentum entropy", shannon_entropy(&n))?;
    let m = staged("moments", moments(&rho, &n))?;
    let bounds = staged("bounds", entropy_bounds(&m))?;
    if let Some(v) = bounds.violation(s_r, s_k, BOUND_SLACK) {
        return Err(Error::BoundViolation(format!("{}: {v}", basis.symbol)).at_stage("bounds"));
    }
    let onicescu = staged("onicescu", onicescu(&rho, &n))?;
    let s = total_entropy(s_r, s_k);
    let (omega, delta) = staged("order", order_parameter(s, bounds.s_max))?;
    let complexities = pairs
        .iter()
        .map(|&(alpha, beta)| complexity(delta, alpha, beta))
        .collect::<Result<Vec<_>>>();
    Ok(AtomReport {
        z: basis.z,
        symbol: basis.symbol.clone(),
        s_r,
        s_k,
        s,
        bounds,
        omega,
        delta,
        onicescu,
        msr: m.mean_square_radius,
        kinetic: m.kinetic_energy,
        complexities: staged("complexity", complexities)?,
    })
}

// Scans ----------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanFailure {
    pub z: u32,
    pub symbol: String,
    pub message: String,
    pub numerical: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScanOutcome {
    pub reports: Vec<AtomReport>,
    /// `local_minima[i][p]`: report `i` is a local minimum of the `p`-th
    /// complexity series along Z.
    pub local_minima: Vec<Vec<bool>>,
    pub failures: Vec<ScanFailure>,
    pub warnings: Vec<String>,
}

/// Reports for every atom, ordered by Z. Failing atoms are collected and the
/// scan goes on.
pub fn scan(bases: &[AtomBasis], pairs: &[(f64, f64)], spec: QuadratureSpec) -> ScanOutcome {
    let mut ordered: Vec<&AtomBasis> = bases.iter().collect();
    ordered.sort_by_key(|b| b.z);
    let mut warnings = Vec::new();
    for w in ordered.windows(2) {
        if w[0].z == w[1].z {
            warnings.push(format!(
                "duplicate Z={} ({} and {}); both rows emitted",
                w[0].z, w[0].symbol, w[1].symbol
            ));
        }
    }

    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        ordered.par_iter().map(|b| compute_report(b, pairs, spec)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = ordered.iter().map(|b| compute_report(b, pairs, spec)).collect();

    let mut outcome = ScanOutcome {
        warnings,
        ..ScanOutcome::default()
    };
    for (basis, result) in ordered.iter().zip(results) {
        match result {
            Ok(r) => outcome.reports.push(r),
            Err(e) => outcome.failures.push(ScanFailure {
                z: basis.z,
                symbol: basis.symbol.clone(),
                numerical: e.is_numerical(),
                message: e.to_string(),
            }),
        }
    }
    outcome.local_minima = local_minima(&outcome.reports, pairs.len());
    outcome
}

fn local_minima(reports: &[AtomReport], series: usize) -> Vec<Vec<bool>> {
    let gamma = |i: usize, p: usize| reports[i].complexities[p].gamma;
    (0..reports.len())
        .map(|i| {
            (0..series)
                .map(|p| {
                    i > 0 && i + 1 < reports.len() && gamma(i, p) < gamma(i - 1, p) && gamma(i, p) < gamma(i + 1, p)
                })
                .collect()
        })
        .collect()
}

// Fit ------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub rms_residual: f64,
    pub points: usize,
}

/// Ordinary least squares of `s = a + b ln z`.
pub fn fit_log(points: &[(f64, f64)]) -> Result<FitResult> {
    if let Some(&(z, s)) = points
        .iter()
        .find(|(z, s)| !(*z > 0.0) || !z.is_finite() || !s.is_finite())
    {
        return Err(Error::InvalidParameter(format!(
            "fit needs positive finite z and finite s, got ({z}, {s})"
        )));
    }
    let mut distinct: Vec<f64> = points.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::InvalidParameter(
            "fit needs at least two distinct z values".into(),
        ));
    }
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0.ln()).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(z, s) in points {
        let dx = z.ln() - mean_x;
        sxy += dx * (s - mean_y);
        sxx += dx * dx;
    }
    let b = sxy / sxx;
    let a = mean_y - b * mean_x;
    let sse: f64 = points.iter().map(|&(z, s)| (s - a - b * z.ln()).powi(2)).sum();
    Ok(FitResult {
        a,
        b,
        rms_residual: (sse / count).sqrt(),
        points: points.len(),
    })
}

// Density sources and comparisons --------------------------------------------

/// Where a density for a comparison comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DensitySource {
    Basis { path: PathBuf, symbol: String },
    Asymptotic { i1: f64 },
    ThomasFermi { z: u32 },
}

impl FromStr for DensitySource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidParameter(format!("density source `{s}`: {why}"));
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("expected KIND:ARGS"))?;
        match kind {
            "basis" => {
                let (path, symbol) = rest.rsplit_once('#').ok_or_else(|| bad("expected basis:FILE#SYMBOL"))?;
                if path.is_empty() || symbol.is_empty() {
                    return Err(bad("expected basis:FILE#SYMBOL"));
                }
                Ok(DensitySource::Basis {
                    path: path.into(),
                    symbol: symbol.into(),
                })
            }
            "asymptotic" => {
                let value = rest
                    .strip_prefix("I1=")
                    .ok_or_else(|| bad("expected asymptotic:I1=<real>"))?;
                let i1 = value.parse().map_err(|_| bad("I1 is not a number"))?;
                Ok(DensitySource::Asymptotic { i1 })
            }
            "tf" => {
                let value = rest.strip_prefix("Z=").ok_or_else(|| bad("expected tf:Z=<int>"))?;
                let z = value.parse().map_err(|_| bad("Z is not a positive integer"))?;
                Ok(DensitySource::ThomasFermi { z })
            }
            _ => Err(bad("kind must be basis, asymptotic or tf")),
        }
    }
}

impl fmt::Display for DensitySource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensitySource::Basis { path, symbol } => write!(f, "basis:{}#{symbol}", path.display()),
            DensitySource::Asymptotic { i1 } => write!(f, "asymptotic:I1={i1}"),
            DensitySource::ThomasFermi { z } => write!(f, "tf:Z={z}"),
        }
    }
}

impl DensitySource {
    pub fn resolve(&self, space: Space, spec: QuadratureSpec) -> Result<RadialDensity> {
        match self {
            DensitySource::Basis { path, symbol } => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
                let atoms = parse_basis_file(&text)?;
                let basis = find_atom(&atoms, symbol)?;
                match space {
                    Space::Position => position_density(basis, spec),
                    Space::Momentum => momentum_density(basis, spec),
                }
            }
            _ if space == Space::Momentum => Err(Error::MomentumUnsupported(self.to_string())),
            DensitySource::Asymptotic { i1 } => asymptotic_density(*i1, spec),
            DensitySource::ThomasFermi { z } => thomas_fermi_density(*z, spec),
        }
    }
}

/// Distances between two resolved sources.
pub fn compare(a: &DensitySource, b: &DensitySource, space: Space, spec: QuadratureSpec) -> Result<DistanceReport> {
    let da = a.resolve(space, spec)?;
    let db = b.resolve(space, spec)?;
    staged("distances", distance_report(&da, &db))
}

// Grids ----------------------------------------------------------------------

/// `lin:a:b:n` or `log:a:b:n`, both endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub logarithmic: bool,
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidParameter(format!("grid `{s}`: {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [kind, a, b, n] = parts[..] else {
            return Err(bad("expected lin:A:B:N or log:A:B:N"));
        };
        let logarithmic = match kind {
            "lin" => false,
            "log" => true,
            _ => return Err(bad("kind must be lin or log")),
        };
        let start: f64 = a.parse().map_err(|_| bad("start is not a number"))?;
        let end: f64 = b.parse().map_err(|_| bad("end is not a number"))?;
        let count: usize = n.parse().map_err(|_| bad("count is not an integer"))?;
        if count < 2 || !(start >= 0.0) || !(end > start) || !end.is_finite() || (logarithmic && start <= 0.0) {
            return Err(bad("need 0 <= A < B (A > 0 for log) and N >= 2"));
        }
        Ok(GridSpec {
            logarithmic,
            start,
            end,
            count,
        })
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        let steps = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / steps;
                if self.logarithmic {
                    (self.start.ln() + t * (self.end / self.start).ln()).exp()
                } else {
                    self.start + t * (self.end - self.start)
                }
            })
            .collect()
    }
}

// Tables ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Flag(bool),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Num(v) => write!(f, "{}", format_number(*v)),
            Cell::Text(v) => f.write_str(v),
            Cell::Flag(v) => write!(f, "{v}"),
        }
    }
}

/// Twelve significant digits.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        format!("{v}")
    }
}

/// A header plus rows, written as CSV or as a JSON array of objects with the
/// same keys and values.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_string))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let object = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(key, cell)| {
                        let value = match cell {
                            Cell::Int(v) => serde_json::json!(v),
                            // same rounding as the CSV cell
                            Cell::Num(v) => format_number(*v)
                                .parse::<f64>()
                                .ok()
                                .and_then(serde_json::Number::from_f64)
                                .map_or(serde_json::Value::Null, serde_json::Value::Number),
                            Cell::Text(v) => serde_json::json!(v),
                            Cell::Flag(v) => serde_json::json!(v),
                        };
                        (key.clone(), value)
                    })
                    .collect::<serde_json::Map<_, _>>();
                serde_json::Value::Object(object)
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        writeln!(out)?;
        Ok(())
    }
}

/// Header and raw string records of a CSV file.
pub fn read_csv<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| Ok(rec?.iter().map(str::to_string).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok((header, rows))
}

const REPORT_COLUMNS: [&str; 18] = [
    "z", "symbol", "s_r", "s_k", "s", "s_r_min", "s_r_max", "s_k_min", "s_k_max", "s_min", "s_max", "omega", "delta",
    "e_r", "e_k", "o", "msr", "kinetic",
];

fn strength_label(v: f64) -> String {
    format!("{v}")
}

/// One row per report. Complexity columns are named `gamma_A_B`; when
/// `minima` is given each is followed by `gamma_A_B_local_min`.
pub fn report_table(reports: &[AtomReport], minima: Option<&[Vec<bool>]>) -> Table {
    let mut header: Vec<String> = REPORT_COLUMNS.iter().map(|c| c.to_string()).collect();
    if let Some(first) = reports.first() {
        for c in &first.complexities {
            let name = format!("gamma_{}_{}", strength_label(c.alpha), strength_label(c.beta));
            if minima.is_some() {
                header.push(name.clone());
                header.push(format!("{name}_local_min"));
            } else {
                header.push(name);
            }
        }
    }
    let rows = reports
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let b = &r.bounds;
            let mut row = vec![Cell::Int(r.z as i64), Cell::Text(r.symbol.clone())];
            row.extend(
                [
                    r.s_r,
                    r.s_k,
                    r.s,
                    b.s_r_min,
                    b.s_r_max,
                    b.s_k_min,
                    b.s_k_max,
                    b.s_min,
                    b.s_max,
                    r.omega,
                    r.delta,
                    r.onicescu.e_r,
                    r.onicescu.e_k,
                    r.onicescu.o,
                    r.msr,
                    r.kinetic,
                ]
                .map(Cell::Num),
            );
            for (p, c) in r.complexities.iter().enumerate() {
                row.push(Cell::Num(c.gamma));
                if let Some(m) = minima {
                    row.push(Cell::Flag(m[i][p]));
                }
            }
            row
        })
        .collect();
    Table { header, rows }
}

/// Reports back from a table written by [`report_table`].
pub fn parse_report_csv<R: Read>(input: R) -> Result<Vec<AtomReport>> {
    let (header, rows) = read_csv(input)?;
    let index: BTreeMap<&str, usize> = header.iter().enumerate().map(|(i, h)| (h.as_str(), i)).collect();
    for c in REPORT_COLUMNS {
        if !index.contains_key(c) {
            return Err(Error::Syntax {
                line: 1,
                message: format!("report CSV lacks column `{c}`"),
            });
        }
    }
    let gammas: Vec<(usize, f64, f64)> = header
        .iter()
        .enumerate()
        .filter_map(|(i, h)| {
            let rest = h.strip_prefix("gamma_")?;
            let (a, b) = rest.split_once('_')?;
            Some((i, a.parse().ok()?, b.parse().ok()?))
        })
        .collect();
    rows.iter()
        .enumerate()
        .map(|(line, row)| {
            let line = line + 2;
            let text = |c: &str| row.get(index[c]).map(String::as_str).unwrap_or("");
            let num = |c: &str| -> Result<f64> {
                text(c).parse().map_err(|_| Error::Syntax {
                    line,
                    message: format!("column `{c}` is not a number"),
                })
            };
            let delta = num("delta")?;
            let complexities = gammas
                .iter()
                .map(|&(i, alpha, beta)| {
                    let gamma = row.get(i).and_then(|v| v.parse().ok()).ok_or_else(|| Error::Syntax {
                        line,
                        message: format!("column `{}` is not a number", header[i]),
                    })?;
                    Ok(ComplexityPoint {
                        alpha,
                        beta,
                        delta,
                        omega: num("omega")?,
                        gamma,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AtomReport {
                z: text("z").parse().map_err(|_| Error::Syntax {
                    line,
                    message: "column `z` is not an integer".into(),
                })?,
                symbol: text("symbol").to_string(),
                s_r: num("s_r")?,
                s_k: num("s_k")?,
                s: num("s")?,
                bounds: EntropyBounds {
                    s_r_min: num("s_r_min")?,
                    s_r_max: num("s_r_max")?,
                    s_k_min: num("s_k_min")?,
                    s_k_max: num("s_k_max")?,
                    s_min: num("s_min")?,
                    s_max: num("s_max")?,
                },
                omega: num("omega")?,
                delta,
                onicescu: OnicescuSet {
                    e_r: num("e_r")?,
                    e_k: num("e_k")?,
                    o: num("o")?,
                },
                msr: num("msr")?,
                kinetic: num("kinetic")?,
                complexities,
            })
        })
        .collect()
}

/// `(z, s)` pairs from any CSV with `z` and `s` columns.
pub fn read_fit_points<R: Read>(input: R) -> Result<Vec<(f64, f64)>> {
    let (header, rows) = read_csv(input)?;
    let column = |name: &str| {
        header.iter().position(|h| h == name).ok_or_else(|| Error::Syntax {
            line: 1,
            message: format!("CSV lacks column `{name}`"),
        })
    };
    let (zi, si) = (column("z")?, column("s")?);
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let get = |c: usize| row.get(c).and_then(|v| v.parse::<f64>().ok());
            match (get(zi), get(si)) {
                (Some(z), Some(s)) => Ok((z, s)),
                _ => Err(Error::Syntax {
                    line: i + 2,
                    message: "z and s must be numbers".into(),
                }),
            }
        })
        .collect()
}

pub fn distance_table(a: &str, b: &str, space: Space, d: &DistanceReport) -> Table {
    Table {
        header: ["a", "b", "space", "k_ab", "k_ba", "sk", "j", "min_trials"]
            .map(String::from)
            .to_vec(),
        rows: vec![vec![
            Cell::Text(a.into()),
            Cell::Text(b.into()),
            Cell::Text(space.to_string()),
            Cell::Num(d.k_ab),
            Cell::Num(d.k_ba),
            Cell::Num(d.sk),
            Cell::Num(d.j),
            Cell::Text(d.min_trials.to_string()),
        ]],
    }
}

pub fn curve_table(curve: &[(f64, f64)]) -> Table {
    Table {
        header: vec!["x".into(), "value".into()],
        rows: curve.iter().map(|&(x, v)| vec![Cell::Num(x), Cell::Num(v)]).collect(),
    }
}

pub fn fit_table(fit: &FitResult) -> Table {
    Table {
        header: ["a", "b", "rms_residual", "points"].map(String::from).to_vec(),
        rows: vec![vec![
            Cell::Num(fit.a),
            Cell::Num(fit.b),
            Cell::Num(fit.rms_residual),
            Cell::Int(fit.points as i64),
        ]],
    }
}
