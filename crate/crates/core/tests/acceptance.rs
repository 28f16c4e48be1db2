//! Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Criterion 12 needs a Roothaan–Hartree–Fock basis file covering Z = 2..54.
//! Point `ATOMINFO_RHF_BASIS` at it to run that criterion; otherwise it is
//! skipped.

use std::f64::consts::{LN_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use atominfo::basis::{hydrogenic_fixture, mixture_fixture, parse_basis_file};
use atominfo::densities::{moments, momentum_density, position_density, RadialDensity};
use atominfo::distances::{jensen_shannon, kullback, symmetrized_kullback};
use atominfo::measures::{complexity, complexity_max, entropy_bounds, gaussian_information_energy, shannon_entropy};
use atominfo::models::{asymptotic_density, thomas_fermi_density};
use atominfo::quadrature::{integrate_semi_infinite, QuadratureSpec};
use atominfo::report::{compute_report, fit_log, scan, AtomReport};
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn close(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || {
        format!("{name} = {got:.10} expected {want:.10} ± {tol:e}")
    })
}

fn hydrogen_report() -> Result<AtomReport, String> {
    compute_report(&hydrogenic_fixture(1.0).unwrap(), &[(1.0, 1.0)], spec()).map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let r = hydrogen_report()?;
    close("S_r", r.s_r, 4.14473, 1e-4)?;
    close("S_k", r.s_k, 2.42186, 1e-4)?;
    Ok(format!("S_r = {:.6}, S_k = {:.6}", r.s_r, r.s_k))
}

/// `∫₀^{π/2} sin^a θ cos^b θ dθ` for even `a`, `b` by Wallis' product.
fn wallis(a: u32, b: u32) -> f64 {
    let double_factorial = |n: u32| -> f64 { (1..=n).rev().step_by(2).map(|v| v as f64).product() };
    double_factorial(a.saturating_sub(1)) * double_factorial(b.saturating_sub(1)) / double_factorial(a + b) * PI / 2.0
}

fn criterion_2() -> Outcome {
    let r = hydrogen_report()?;
    close("O", r.onicescu.o, 120.267, 0.05)?;
    close("E_r", r.onicescu.e_r, 1.0 / (8.0 * PI), 1e-10)?;
    // n(k) = 8/(π²(1+k²)⁴); with k = tan θ, E_k = 256/π³ ∫ sin²θ cos¹²θ dθ
    let e_k = 256.0 / PI.powi(3) * wallis(2, 12);
    close("E_k oracle", e_k, 0.20897, 1e-5)?;
    close("E_k", r.onicescu.e_k, e_k, 1e-9)?;
    Ok(format!(
        "O = {:.4}, E_r = {:.8}, E_k = {:.8}",
        r.onicescu.o, r.onicescu.e_r, r.onicescu.e_k
    ))
}

fn criterion_3() -> Outcome {
    let b = hydrogenic_fixture(1.0).unwrap();
    let m = moments(
        &position_density(&b, spec()).map_err(|e| e.to_string())?,
        &momentum_density(&b, spec()).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    close("<r^2>", m.mean_square_radius, 3.0, 1e-6)?;
    close("T", m.kinetic_energy, 0.5, 1e-6)?;
    close("<k^2>", m.mean_square_momentum, 1.0, 1e-6)?;
    Ok(format!(
        "<r^2> = {:.9}, <k^2> = {:.9}, T = {:.9}",
        m.mean_square_radius, m.mean_square_momentum, m.kinetic_energy
    ))
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    for sigma in [0.5, 1.0, 2.0] {
        let g = |x: f64| (-x * x / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt());
        let q = integrate_semi_infinite(|x| g(x) * g(x), &spec());
        let direct = 2.0 * q.value;
        let formula = gaussian_information_energy(sigma).map_err(|e| e.to_string())?;
        close(&format!("E(sigma={sigma})"), formula, direct, 1e-10)?;
        worst = worst.max((formula - direct).abs());
    }
    Ok(format!("max |formula - quadrature| = {worst:.2e}"))
}

fn check_bounds(label: &str, rho: &RadialDensity, n: &RadialDensity) -> Result<(), String> {
    let err = |e: atominfo::Error| format!("{label}: {e}");
    let s_r = shannon_entropy(rho).map_err(err)?;
    let s_k = shannon_entropy(n).map_err(err)?;
    let b = entropy_bounds(&moments(rho, n).map_err(err)?).map_err(err)?;
    match b.violation(s_r, s_k, 0.0) {
        Some(v) => Err(format!("{label}: {v}")),
        None => Ok(()),
    }
}

fn random_mixture(rng: &mut impl Rng) -> Vec<(f64, f64)> {
    let parts = rng.gen_range(1..=3);
    (0..parts)
        .map(|_| (rng.gen_range(0.05..1.0), rng.gen_range(0.3..6.0)))
        .collect()
}

fn criterion_5() -> Outcome {
    for z in [0.5, 1.0, 2.0, 4.0] {
        let b = hydrogenic_fixture(z).unwrap();
        check_bounds(
            &format!("hydrogenic z={z}"),
            &position_density(&b, spec()).map_err(|e| e.to_string())?,
            &momentum_density(&b, spec()).map_err(|e| e.to_string())?,
        )?;
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    let count = 24;
    for i in 0..count {
        let b = mixture_fixture(&random_mixture(&mut rng)).unwrap();
        check_bounds(
            &format!("mixture #{i}"),
            &position_density(&b, spec()).map_err(|e| e.to_string())?,
            &momentum_density(&b, spec()).map_err(|e| e.to_string())?,
        )?;
    }
    Ok(format!(
        "4 hydrogenic fixtures and {count} random mixtures inside all three bounds"
    ))
}

fn criterion_6() -> Outcome {
    let reports = [0.5, 1.0, 2.0]
        .iter()
        .map(|&z| compute_report(&hydrogenic_fixture(z).unwrap(), &[(1.0, 1.0)], spec()).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let base = &reports[1];
    for r in &reports {
        close("S", r.s, base.s, 1e-6)?;
        close("O", r.onicescu.o, base.onicescu.o, 1e-6)?;
        close("Omega", r.omega, base.omega, 1e-6)?;
        close("Gamma_11", r.complexities[0].gamma, base.complexities[0].gamma, 1e-6)?;
    }
    let spread = reports.iter().map(|r| (r.s - base.s).abs()).fold(0.0, f64::max);
    Ok(format!(
        "S = {:.8} (spread {spread:.1e}), O, Omega, Gamma_11 agree",
        base.s
    ))
}

fn criterion_7() -> Outcome {
    let h = |z: f64| position_density(&hydrogenic_fixture(z).unwrap(), spec()).unwrap();
    let (a, b) = (h(1.0), h(2.0));
    let k = kullback(&a, &b).map_err(|e| e.to_string())?;
    close("K(1||2)", k, 3.0 - 3.0 * LN_2, 1e-5)?;

    let d = h(1.4);
    close("K(d,d)", kullback(&d, &d).map_err(|e| e.to_string())?, 0.0, 1e-8)?;
    close(
        "SK(d,d)",
        symmetrized_kullback(&d, &d).map_err(|e| e.to_string())?,
        0.0,
        1e-8,
    )?;
    close("J(d,d)", jensen_shannon(&d, &d).map_err(|e| e.to_string())?, 0.0, 1e-8)?;

    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let mut asymmetry: f64 = 0.0;
    for i in 0..100 {
        let da = position_density(&mixture_fixture(&random_mixture(&mut rng)).unwrap(), spec()).unwrap();
        let db = position_density(&mixture_fixture(&random_mixture(&mut rng)).unwrap(), spec()).unwrap();
        let jab = jensen_shannon(&da, &db).map_err(|e| e.to_string())?;
        let jba = jensen_shannon(&db, &da).map_err(|e| e.to_string())?;
        ensure((0.0..=LN_2).contains(&jab), || {
            format!("pair #{i}: J = {jab} outside [0, ln 2]")
        })?;
        asymmetry = asymmetry.max((jab - jba).abs());
    }
    ensure(asymmetry <= 1e-12, || format!("J asymmetry {asymmetry:e}"))?;
    Ok(format!(
        "K(1||2) = {k:.8}; 100 random pairs in [0, ln 2], asymmetry {asymmetry:.1e}"
    ))
}

fn criterion_8() -> Outcome {
    let h = position_density(&hydrogenic_fixture(1.0).unwrap(), spec()).map_err(|e| e.to_string())?;
    let a = asymptotic_density(0.5, spec()).map_err(|e| e.to_string())?;
    let sk = symmetrized_kullback(&h, &a).map_err(|e| e.to_string())?;
    let j = jensen_shannon(&h, &a).map_err(|e| e.to_string())?;
    ensure(sk.abs() < 1e-7, || format!("SK = {sk:e}"))?;
    ensure(j.abs() < 1e-7, || format!("J = {j:e}"))?;
    Ok(format!("SK = {sk:.1e}, J = {j:.1e}"))
}

fn criterion_9() -> Outcome {
    let mut norms = Vec::new();
    for z in [2, 10, 54] {
        let tf = thomas_fermi_density(z, spec()).map_err(|e| e.to_string())?;
        let norm = tf.integrate(|_, v| v).map_err(|e| e.to_string())?;
        close(&format!("TF norm z={z}"), norm, 1.0, 1e-6)?;
        norms.push(norm);
    }
    let tf = thomas_fermi_density(1, spec()).map_err(|e| e.to_string())?;
    let h = position_density(&hydrogenic_fixture(1.0).unwrap(), spec()).map_err(|e| e.to_string())?;
    let k = kullback(&tf, &h).map_err(|e| e.to_string())?;
    ensure(k.is_finite() && k > 0.0, || format!("K(TF||H) = {k}"))?;
    Ok(format!("norms {norms:.10?}, K(TF||hydrogenic) = {k:.6}"))
}

/// Golden-section refinement of the best point of a 10⁴-point grid.
fn grid_maximum(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let n = 10_000;
    let best = (0..=n)
        .map(|i| i as f64 / n as f64)
        .max_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap();
    let (mut lo, mut hi) = ((best - 1.0 / n as f64).max(0.0), (best + 1.0 / n as f64).min(1.0));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if f(a) < f(b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    let x = 0.5 * (lo + hi);
    (f(x), x)
}

fn criterion_10() -> Outcome {
    for (alpha, beta) in [(1.0, 1.0), (1.0, 4.0), (4.0, 1.0), (2.0, 2.0)] {
        let (gmax, dstar) = complexity_max(alpha, beta).map_err(|e| e.to_string())?;
        let (gnum, dnum) = grid_maximum(|d| complexity(d, alpha, beta).unwrap().gamma);
        let closed: f64 = alpha.powf(alpha) * beta.powf(beta) / (alpha + beta).powf(alpha + beta);
        close(&format!("Gamma_max({alpha},{beta})"), gnum, gmax, 1e-9)?;
        close(&format!("closed form ({alpha},{beta})"), closed, gmax, 1e-12)?;
        close(&format!("Delta*({alpha},{beta})"), dstar, alpha / (alpha + beta), 1e-15)?;
        close(
            &format!("Gamma at Delta*({alpha},{beta})"),
            complexity(dstar, alpha, beta).unwrap().gamma,
            gmax,
            1e-12,
        )?;
        // the flat top limits the located argmax to about sqrt(eps)
        close(&format!("argmax({alpha},{beta})"), dnum, dstar, 1e-6)?;
    }
    Ok("grid maxima match closed form for (1,1), (1,4), (4,1), (2,2)".into())
}

fn criterion_11() -> Outcome {
    let points: Vec<(f64, f64)> = (2..=54).map(|z| (z as f64, 6.257 + 1.069 * (z as f64).ln())).collect();
    let fit = fit_log(&points).map_err(|e| e.to_string())?;
    close("a", fit.a, 6.257, 1e-10)?;
    close("b", fit.b, 1.069, 1e-10)?;
    Ok(format!("a = {:.12}, b = {:.12}", fit.a, fit.b))
}

struct TableRow {
    z: u32,
    values: [f64; 6],
}

// S_r, S_k, S, S_max, Ω, O. Li's S_r is printed as 3.07144 in the source
// table, which contradicts its own S - S_k = 3.70144.
const TABLE_ROWS: [TableRow; 2] = [
    TableRow {
        z: 2,
        values: [2.69851, 3.91342, 6.61193, 7.0493, 0.06204, 100.361],
    },
    TableRow {
        z: 3,
        values: [3.70144, 3.99682, 7.69826, 10.3578, 0.25677, 9.15713],
    },
];

fn criterion_12(path: &str) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let atoms = parse_basis_file(&text).map_err(|e| e.to_string())?;
    let outcome = scan(&atoms, &[(1.0, 1.0)], spec());
    if let Some(f) = outcome.failures.first() {
        return Err(format!("Z={} {}: {}", f.z, f.symbol, f.message));
    }
    let reports = &outcome.reports;
    let by_z = |z: u32| reports.iter().position(|r| r.z == z);

    for row in &TABLE_ROWS {
        let r = &reports[by_z(row.z).ok_or(format!("Z={} missing from {path}", row.z))?];
        let got = [r.s_r, r.s_k, r.s, r.bounds.s_max, r.omega, r.onicescu.o];
        for (name, (g, w)) in ["S_r", "S_k", "S", "S_max", "Omega", "O"]
            .iter()
            .zip(got.iter().zip(row.values))
        {
            ensure((g - w).abs() <= 0.005 * w.abs(), || {
                format!("Z={} {name} = {g:.6} vs {w} (> 0.5%)", row.z)
            })?;
        }
    }

    let points: Vec<(f64, f64)> = reports.iter().filter(|r| r.z >= 2).map(|r| (r.z as f64, r.s)).collect();
    let fit = fit_log(&points).map_err(|e| e.to_string())?;
    ensure((fit.a / 6.257 - 1.0).abs() <= 0.02, || format!("fit a = {:.4}", fit.a))?;
    ensure((fit.b / 1.069 - 1.0).abs() <= 0.02, || format!("fit b = {:.4}", fit.b))?;

    for pair in reports.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        if cur.z == prev.z + 1 && cur.s <= prev.s && ![28, 46].contains(&cur.z) {
            return Err(format!("S decreases from Z={} to Z={}", prev.z, cur.z));
        }
    }

    let gamma = |i: usize| reports[i].complexities[0].gamma;
    for z in [2, 10, 18, 36] {
        let i = by_z(z).ok_or(format!("Z={z} missing from {path}"))?;
        let left = i == 0 || gamma(i) < gamma(i - 1);
        let right = i + 1 == reports.len() || gamma(i) < gamma(i + 1);
        ensure(left && right, || format!("Gamma_11 has no local minimum at Z={z}"))?;
    }
    Ok(format!(
        "{} atoms; fit a = {:.4}, b = {:.4}",
        reports.len(),
        fit.a,
        fit.b
    ))
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture are accepted and ignored
    let start = Instant::now();
    let criteria: [Criterion; 11] = [
        ("hydrogen entropies", criterion_1),
        ("hydrogen Onicescu content", criterion_2),
        ("hydrogen moments", criterion_3),
        ("Gaussian information energy", criterion_4),
        ("entropy bound inequalities", criterion_5),
        ("scaling invariance", criterion_6),
        ("divergence oracles", criterion_7),
        ("model density identity", criterion_8),
        ("Thomas-Fermi normalization", criterion_9),
        ("complexity maximum", criterion_10),
        ("fit round trip", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why}", i + 1)
            }
        }
    }
    let self_contained_failed = failed;
    match std::env::var("ATOMINFO_RHF_BASIS") {
        Ok(path) => match criterion_12(&path) {
            Ok(detail) => println!("PASS criterion 12 external RHF data: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion 12 external RHF data: {why}")
            }
        },
        Err(_) => println!("SKIP criterion 12 external RHF data: set ATOMINFO_RHF_BASIS to a basis file"),
    }
    println!(
        "acceptance: {} of 11 self-contained criteria passed in {:.1} s",
        11 - self_contained_failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
