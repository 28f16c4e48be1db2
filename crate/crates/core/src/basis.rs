//! Slater-type orbital basis data: types, the plain-text basis format,
//! validation, analytic fixtures, and ionization-potential tables.
//!
//! A basis file is line oriented. `#` starts a comment and blank lines are
//! ignored:
//!
//! ```text
//! atom Z=2 symbol=He
//! orbital n=1 l=0 occ=2
//! primitive n_jl=1 zeta=1.4595 c=1.347900
//! primitive n_jl=3 zeta=5.3244 c=-0.001613
//! ```
//!
//! Each `primitive` belongs to the preceding `orbital`, each `orbital` to the
//! preceding `atom`. Primitives are normalized Slater functions
//! `N r^(n-1) e^(-ζr)`, so `c` is the coefficient of the normalized function.

use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest principal quantum number whose normalization we evaluate.
pub const MAX_PRINCIPAL: u32 = 12;

/// One normalized Slater-type primitive `N r^(n-1) e^(-ζr)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlaterPrimitive {
    pub n: u32,
    pub zeta: f64,
}

impl SlaterPrimitive {
    pub fn new(n: u32, zeta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "STO principal quantum number must be >= 1".into(),
            ));
        }
        if !(zeta > 0.0) || !zeta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "STO exponent must be positive, got {zeta}"
            )));
        }
        Ok(Self { n, zeta })
    }

    /// `N = (2ζ)^(n+1/2) / sqrt((2n)!)`.
    pub fn normalization(&self) -> Result<f64> {
        if self.n > MAX_PRINCIPAL {
            return Err(Error::UnsupportedPrincipal(self.n));
        }
        let fact = factorial(2 * self.n);
        Ok((2.0 * self.zeta).powf(self.n as f64 + 0.5) / fact.sqrt())
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Radial orbital `R_nl` expanded over normalized primitives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbital {
    pub n: u32,
    pub l: u32,
    pub occupancy: f64,
    pub terms: Vec<(f64, SlaterPrimitive)>,
}

impl Orbital {
    /// Electrons an `l` subshell can hold.
    pub fn capacity(l: u32) -> f64 {
        2.0 * (2 * l + 1) as f64
    }

    /// `∫ R² r² dr` from the closed-form overlap of Slater functions.
    pub fn norm_integral(&self) -> Result<f64> {
        let mut total = 0.0;
        for &(ci, pi) in &self.terms {
            let ni = pi.normalization()?;
            for &(cj, pj) in &self.terms {
                let nj = pj.normalization()?;
                let p = pi.n + pj.n;
                total += ci * cj * ni * nj * factorial(p) / (pi.zeta + pj.zeta).powi(p as i32 + 1);
            }
        }
        Ok(total)
    }
}

/// STO expansion data for one atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomBasis {
    pub z: u32,
    pub symbol: String,
    pub orbitals: Vec<Orbital>,
}

impl AtomBasis {
    pub fn occupancy_sum(&self) -> f64 {
        self.orbitals.iter().map(|o| o.occupancy).sum()
    }

    /// Number of electrons the densities are normalized by.
    pub fn electrons(&self) -> f64 {
        self.z as f64
    }
}

/// Find an atom by symbol, ignoring case.
pub fn find_atom<'a>(bases: &'a [AtomBasis], symbol: &str) -> Result<&'a AtomBasis> {
    bases
        .iter()
        .find(|b| b.symbol.eq_ignore_ascii_case(symbol))
        .ok_or_else(|| Error::AtomNotFound(symbol.to_string()))
}

// Parsing --------------------------------------------------------------------

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

struct Fields<'a> {
    line: usize,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Fields<'a> {
    fn parse(line: usize, tokens: impl Iterator<Item = &'a str>) -> Result<Self> {
        let mut pairs = Vec::new();
        for tok in tokens {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| syntax(line, format!("expected key=value, found `{tok}`")))?;
            if pairs.iter().any(|&(seen, _)| seen == k) {
                return Err(syntax(line, format!("repeated key `{k}`")));
            }
            pairs.push((k, v));
        }
        Ok(Self { line, pairs })
    }

    fn raw(&self, key: &str) -> Result<&'a str> {
        self.pairs
            .iter()
            .find(|&&(k, _)| k == key)
            .map(|&(_, v)| v)
            .ok_or_else(|| syntax(self.line, format!("missing `{key}=`")))
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.raw(key)?;
        raw.parse()
            .map_err(|_| syntax(self.line, format!("cannot parse `{key}={raw}`")))
    }

    fn expect_only(&self, keys: &[&str]) -> Result<()> {
        match self.pairs.iter().find(|(k, _)| !keys.contains(k)) {
            Some((k, _)) => Err(syntax(self.line, format!("unknown key `{k}`"))),
            None => Ok(()),
        }
    }
}

/// Parse basis-file text into atoms, in file order.
pub fn parse_basis_file(text: &str) -> Result<Vec<AtomBasis>> {
    let mut atoms: Vec<AtomBasis> = Vec::new();
    let mut seen = HashSet::new();
    // line of the orbital currently accumulating primitives
    let mut open_orbital: Option<usize> = None;

    let close_orbital = |atoms: &[AtomBasis], open: Option<usize>| -> Result<()> {
        if let Some(line) = open {
            let empty = atoms
                .last()
                .and_then(|a| a.orbitals.last())
                .is_some_and(|o| o.terms.is_empty());
            if empty {
                return Err(syntax(line, "orbital has no primitives"));
            }
        }
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let keyword = tokens.next().unwrap_or_default();
        let fields = Fields::parse(line, tokens)?;
        match keyword {
            "atom" => {
                fields.expect_only(&["Z", "symbol"])?;
                close_orbital(&atoms, open_orbital.take())?;
                let z: u32 = fields.get("Z")?;
                if z == 0 {
                    return Err(syntax(line, "Z must be >= 1"));
                }
                if !seen.insert(z) {
                    return Err(Error::DuplicateAtom(z));
                }
                let symbol = fields.raw("symbol")?.to_string();
                atoms.push(AtomBasis {
                    z,
                    symbol,
                    orbitals: Vec::new(),
                });
            }
            "orbital" => {
                fields.expect_only(&["n", "l", "occ"])?;
                close_orbital(&atoms, open_orbital.take())?;
                let atom = atoms
                    .last_mut()
                    .ok_or_else(|| syntax(line, "orbital before any atom"))?;
                let n: u32 = fields.get("n")?;
                let l: u32 = fields.get("l")?;
                let occupancy: f64 = fields.get("occ")?;
                if n == 0 || l >= n {
                    return Err(syntax(line, format!("invalid quantum numbers n={n} l={l}")));
                }
                let capacity = Orbital::capacity(l);
                if occupancy > capacity {
                    return Err(Error::OccupancyExceedsCapacity {
                        line,
                        l,
                        occupancy,
                        capacity,
                    });
                }
                if !(occupancy > 0.0) {
                    return Err(syntax(line, format!("occupancy must be positive, got {occupancy}")));
                }
                atom.orbitals.push(Orbital {
                    n,
                    l,
                    occupancy,
                    terms: Vec::new(),
                });
                open_orbital = Some(line);
            }
            "primitive" => {
                fields.expect_only(&["n_jl", "zeta", "c"])?;
                let orbital = atoms
                    .last_mut()
                    .and_then(|a| a.orbitals.last_mut())
                    .ok_or_else(|| syntax(line, "primitive before any orbital"))?;
                let n: u32 = fields.get("n_jl")?;
                let zeta: f64 = fields.get("zeta")?;
                let c: f64 = fields.get("c")?;
                if n == 0 {
                    return Err(syntax(line, "n_jl must be >= 1"));
                }
                if !(zeta > 0.0) {
                    return Err(Error::NonPositiveExponent { line, zeta });
                }
                if !c.is_finite() {
                    return Err(syntax(line, "coefficient must be finite"));
                }
                orbital.terms.push((c, SlaterPrimitive { n, zeta }));
            }
            other => return Err(syntax(line, format!("unknown record `{other}`"))),
        }
    }
    close_orbital(&atoms, open_orbital)?;
    Ok(atoms)
}

impl fmt::Display for AtomBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "atom Z={} symbol={}", self.z, self.symbol)?;
        for o in &self.orbitals {
            writeln!(f, "orbital n={} l={} occ={}", o.n, o.l, o.occupancy)?;
            for (c, p) in &o.terms {
                writeln!(f, "primitive n_jl={} zeta={} c={}", p.n, p.zeta, c)?;
            }
        }
        Ok(())
    }
}

/// Serialize atoms back into the basis-file format.
pub fn write_basis_file(atoms: &[AtomBasis]) -> String {
    let mut out = String::new();
    for (i, atom) in atoms.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = write!(out, "{atom}");
    }
    out
}

// Validation -----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitalResidual {
    pub n: u32,
    pub l: u32,
    /// `|∫R²r²dr − 1|`
    pub residual: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub orbitals: Vec<OrbitalResidual>,
    /// `|Σ occupancies − Z|`
    pub occupancy_residual: f64,
    pub occupancy_ok: bool,
    pub tolerance: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.occupancy_ok && self.orbitals.iter().all(|o| o.ok)
    }
}

/// Check orbital normalization and the electron count. Never fails: problems
/// are carried in the report. An orbital whose normalization cannot be
/// evaluated is reported with an infinite residual.
pub fn validate_basis(basis: &AtomBasis, tol: f64) -> ValidationReport {
    let orbitals = basis
        .orbitals
        .iter()
        .map(|o| {
            let residual = o.norm_integral().map_or(f64::INFINITY, |v| (v - 1.0).abs());
            OrbitalResidual {
                n: o.n,
                l: o.l,
                residual,
                ok: residual <= tol,
            }
        })
        .collect();
    let occupancy_residual = (basis.occupancy_sum() - basis.electrons()).abs();
    ValidationReport {
        orbitals,
        occupancy_residual,
        occupancy_ok: occupancy_residual <= tol * basis.electrons().max(1.0),
        tolerance: tol,
    }
}

// Fixtures -------------------------------------------------------------------

/// One-electron 1s basis with exponent `z_eff`; its density is
/// `z_eff³ e^(−2 z_eff r) / π`.
pub fn hydrogenic_fixture(z_eff: f64) -> Result<AtomBasis> {
    let primitive = SlaterPrimitive::new(1, z_eff)?;
    Ok(AtomBasis {
        z: 1,
        symbol: "H".into(),
        orbitals: vec![Orbital {
            n: 1,
            l: 0,
            occupancy: 1.0,
            terms: vec![(1.0, primitive)],
        }],
    })
}

/// One-electron ensemble of 1s states with exponents `zeta_i` weighted by
/// `weight_i` (rescaled to sum to one). Position and momentum densities are
/// the matching mixtures of hydrogenic densities.
pub fn mixture_fixture(components: &[(f64, f64)]) -> Result<AtomBasis> {
    if components.is_empty() {
        return Err(Error::InvalidParameter("mixture needs at least one component".into()));
    }
    let total: f64 = components.iter().map(|&(w, _)| w).sum();
    if components.iter().any(|&(w, _)| !(w > 0.0)) || !total.is_finite() {
        return Err(Error::InvalidParameter("mixture weights must be positive".into()));
    }
    let orbitals = components
        .iter()
        .map(|&(w, zeta)| {
            Ok(Orbital {
                n: 1,
                l: 0,
                occupancy: w / total,
                terms: vec![(1.0, SlaterPrimitive::new(1, zeta)?)],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AtomBasis {
        z: 1,
        symbol: "Mix".into(),
        orbitals,
    })
}

// Ionization potentials ------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IonizationEntry {
    pub symbol: String,
    /// First ionization potential in Hartree.
    pub i1: f64,
}

/// First ionization potentials keyed by atomic number.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IonizationTable {
    pub entries: BTreeMap<u32, IonizationEntry>,
}

impl IonizationTable {
    pub fn get(&self, z: u32) -> Option<f64> {
        self.entries.get(&z).map(|e| e.i1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Parse `Z,symbol,I1_hartree` rows. The header row is optional.
pub fn parse_ionization_table(text: &str) -> Result<IonizationTable> {
    let mut table = IonizationTable::default();
    let bad = |line: usize, message: String| Error::IonizationTable { line, message };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = row.split(',').map(str::trim).collect();
        if table.is_empty() && cols.first().is_some_and(|c| c.eq_ignore_ascii_case("z")) {
            continue;
        }
        let [z, symbol, i1] = cols[..] else {
            return Err(bad(line, format!("expected 3 columns, found {}", cols.len())));
        };
        let z: u32 = z.parse().map_err(|_| bad(line, format!("invalid Z `{z}`")))?;
        let i1: f64 = i1
            .parse()
            .map_err(|_| bad(line, format!("invalid ionization potential `{i1}`")))?;
        if !(i1 > 0.0) || !i1.is_finite() {
            return Err(bad(line, format!("ionization potential must be positive, got {i1}")));
        }
        let entry = IonizationEntry {
            symbol: symbol.to_string(),
            i1,
        };
        if table.entries.insert(z, entry).is_some() {
            return Err(bad(line, format!("duplicate Z={z}")));
        }
    }
    Ok(table)
}
