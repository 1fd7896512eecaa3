//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use pleatlab::curve::{self, IntegratorConfig};
use pleatlab::hyperboloid::{dist, geodesic_point, push_off, HPoint, Hyperplane, LorentzVector, TangentVector};
use pleatlab::lattice::{self, QuadForm, QuadMatrix};
use pleatlab::pleat::{self, SupportVerdict, CURVATURE_CONSTANT};
use pleatlab::trig::{self, TubeQuery};
use pleatlab::wallspace::{self, Verdict};
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn tangency_consistency() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for theta in linspace(0.1, PI - 0.1, 50) {
        for eps in linspace(0.01, 1.0, 50) {
            let a = trig::tangency_radius(theta, eps).map_err(|e| e.to_string())?;
            let b = trig::tangency_radius_lambert(theta, eps).map_err(|e| e.to_string())?;
            worst = worst.max((a - b).abs());
        }
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("max deviation {worst:.1e} in {elapsed:.2?}"))
}

fn comparison_certificate() -> Outcome {
    let start = Instant::now();
    let cfg = IntegratorConfig::new(1e-4).map_err(|e| e.to_string())?;
    let ks = [0.01, 0.05, 0.1, 0.3, 0.5, 0.9];
    let reports: Vec<_> = ks
        .par_iter()
        .map(|&k| curve::verify_comparison(k, 5.0, &cfg))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    for r in &reports {
        ensure(r.pass, format!("k = {} fails with ratio {}", r.k, r.max_ratio))?;
        worst = worst.max(r.max_ratio);
    }
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("worst ratio {worst:.10} over 6 bounds in {elapsed:.2?}"))
}

fn curvature_decay() -> Outcome {
    let r = 0.5;
    let thetas = linspace(2.0, PI - 1e-3, 60);
    let sweep = pleat::decay_sweep(r, &thetas).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for &(theta, sup) in &sweep {
        let radius = trig::smoothing_radius(r, theta).map_err(|e| e.to_string())?;
        worst = worst.max(sup * radius);
    }
    ensure(worst <= CURVATURE_CONSTANT, format!("sup κ·R = {worst} exceeds C"))?;
    let tail: Vec<_> = sweep.iter().filter(|(t, _)| *t >= 2.5).collect();
    ensure(
        tail.windows(2).all(|w| w[1].1 < w[0].1),
        "sup κ is not strictly decreasing on [2.5, π)",
    )?;
    let top = sweep.last().unwrap().1;
    ensure(top < 0.01, format!("sup κ at the top of the sweep is {top}"))?;
    let flat = pleat::build_profile(2.0, 0.01).map_err(|e| e.to_string())?;
    let report = pleat::curvature_profile(&flat).map_err(|e| e.to_string())?;
    let flat_kr = report.sup_curvature * flat.radius;
    ensure((0.95..=1.05).contains(&flat_kr), format!("flat limit sup κ·R = {flat_kr}"))?;
    Ok(format!(
        "max sup κ·R = {worst:.4} ≤ C = {CURVATURE_CONSTANT}, top sup κ = {top:.2e}, flat limit {flat_kr:.4}"
    ))
}

fn wedge_width() -> Outcome {
    let mut worst = 0.0f64;
    for theta in [PI / 3.0, PI / 2.0, 2.0 * PI / 3.0, 3.0] {
        let w = pleat::wedge_width_numeric(theta).map_err(|e| e.to_string())?;
        let expected = (1.0 / (theta / 2.0).sin()).acosh();
        worst = worst.max((w - expected).abs());
    }
    ensure(worst <= 1e-8, format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn supporting_geodesics() -> Outcome {
    let mut checked = 0;
    for theta in [1.0, 2.0, 2.8] {
        for eps in [0.05, 0.1, 0.3] {
            let radius = trig::tangency_radius(theta, eps).map_err(|e| e.to_string())?;
            for d in [radius * (1.0 + 1e-3), radius + 0.1, radius + 0.5, radius + 1.5, radius + 3.0] {
                let s = pleat::arclength_for_vertex_distance(eps, d).map_err(|e| e.to_string())?;
                let verdict = pleat::supporting_geodesic_check(theta, eps, s).map_err(|e| e.to_string())?;
                ensure(
                    verdict.is_pass(),
                    format!("θ = {theta}, ε = {eps}, d = {d}: {verdict:?}"),
                )?;
                checked += 1;
            }
        }
    }
    let radius = trig::tangency_radius(2.0, 0.1).map_err(|e| e.to_string())?;
    let s = pleat::arclength_for_vertex_distance(0.1, 0.3 * radius).map_err(|e| e.to_string())?;
    match pleat::supporting_geodesic_check(2.0, 0.1, s).map_err(|e| e.to_string())? {
        SupportVerdict::Fail { ray: 2, .. } => {}
        other => return Err(format!("negative control did not fail on the second ray: {other:?}")),
    }
    Ok(format!("{checked} grid points pass, negative control fails with a witness"))
}

fn inversion_and_tubes() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..=40 {
        let x = 10f64.powf(-3.0 + 4.0 * i as f64 / 40.0);
        let back = trig::inversion_r(trig::inversion_r(x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        worst = worst.max((back - x).abs());
    }
    ensure(worst <= 1e-12, format!("r∘r deviation {worst:e}"))?;
    // the fixed point by bisection on r(x) − x
    let (mut lo, mut hi) = (0.1, 3.0);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if trig::inversion_r(mid).map_err(|e| e.to_string())? > mid {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let fixed = 0.5 * (lo + hi);
    let expected = (1.0 + 2f64.sqrt()).ln();
    ensure((fixed - expected).abs() <= 1e-10, format!("fixed point {fixed}"))?;
    let mut tube_worst = 0.0f64;
    for n in [2, 3] {
        for a in [0.1, 1.0, 10.0] {
            let c = trig::tube_width(TubeQuery::new(n, a).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let back = trig::ball_volume(n, trig::inversion_r(2.0 * c).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            tube_worst = tube_worst.max((back - a).abs());
        }
    }
    ensure(tube_worst <= 1e-9, format!("tube round trip deviation {tube_worst:e}"))?;
    Ok(format!(
        "r∘r deviation {worst:.1e}, fixed point error {:.1e}, tube deviation {tube_worst:.1e}",
        (fixed - expected).abs()
    ))
}

fn equidistant_stretch() -> Outcome {
    let u = Hyperplane::from_coords(vec![1.0, 0.0, 0.0]).map_err(|e| e.to_string())?;
    let p = HPoint::origin(2);
    let v = TangentVector::unit(p.clone(), LorentzVector::new(vec![0.0, 1.0, 0.0]).unwrap()).map_err(|e| e.to_string())?;
    let s = 1e-4;
    let q = geodesic_point(&v, s).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for t in [0.5, 1.0, 2.0] {
        let a = push_off(&p, &u, t).map_err(|e| e.to_string())?;
        let b = push_off(&q, &u, t).map_err(|e| e.to_string())?;
        let ratio = dist(&a, &b).map_err(|e| e.to_string())? / dist(&p, &q).map_err(|e| e.to_string())?;
        worst = worst.max((ratio - t.cosh()).abs());
    }
    ensure(worst <= 1e-6, format!("max |ratio − cosh t| = {worst:e}"))?;
    Ok(format!("max |ratio − cosh t| = {worst:.1e}"))
}

/// Exhaustive search over every 3×3 matrix with entries `a + b√2`,
/// `a, b ∈ {−1, 0, 1}`, preserving `x₀² + x₁² − √2 x₂²` and the future cone.
fn brute_force_height_one() -> Vec<[(i64, i64); 9]> {
    let vals: Vec<(i64, i64)> = (-1..=1).flat_map(|a| (-1..=1).map(move |b| (a, b))).collect();
    let mul = |x: (i64, i64), y: (i64, i64)| (x.0 * y.0 + 2 * x.1 * y.1, x.0 * y.1 + x.1 * y.0);
    let add = |x: (i64, i64), y: (i64, i64)| (x.0 + y.0, x.1 + y.1);
    let neg_sqrt2 = (0, -1);
    let form = [(1, 0), (1, 0), neg_sqrt2];
    // exact sign of a + b√2
    let positive = |x: (i64, i64)| match (x.0.signum(), x.1.signum()) {
        (a, b) if a >= 0 && b >= 0 => a + b > 0,
        (a, b) if a <= 0 && b <= 0 => false,
        (1, _) => x.0 * x.0 > 2 * x.1 * x.1,
        _ => 2 * x.1 * x.1 > x.0 * x.0,
    };
    (0..9usize)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut found = Vec::new();
            let mut idx = [0usize; 9];
            idx[0] = first;
            loop {
                let t: [(i64, i64); 9] = std::array::from_fn(|k| vals[idx[k]]);
                let mut ok = true;
                'outer: for i in 0..3 {
                    for j in i..3 {
                        let mut acc = (0, 0);
                        for k in 0..3 {
                            acc = add(acc, mul(form[k], mul(t[3 * k + i], t[3 * k + j])));
                        }
                        let target = if i == j { form[i] } else { (0, 0) };
                        if acc != target {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
                // B(e₂, T e₂) = −√2 · T₂₂ < 0 keeps the future cone
                if ok && positive(t[8]) {
                    found.push(t);
                }
                let mut k = 8;
                loop {
                    if k == 0 {
                        return found;
                    }
                    idx[k] += 1;
                    if idx[k] < 9 {
                        break;
                    }
                    idx[k] = 0;
                    k -= 1;
                }
            }
        })
        .collect()
}

fn lattice_enumeration() -> Outcome {
    let start = Instant::now();
    let f = QuadForm::standard(2, 3);
    let en = lattice::enumerate_elements(&f, 1).map_err(|e| e.to_string())?;
    let mut ours: Vec<Vec<(i64, i64)>> = en
        .elements
        .iter()
        .map(|t| t.to_basis().unwrap().into_iter().flatten().collect())
        .collect();
    let mut oracle: Vec<Vec<(i64, i64)>> = brute_force_height_one().into_iter().map(|t| t.to_vec()).collect();
    ours.sort();
    oracle.sort();
    ensure(ours == oracle, format!("enumeration has {}, oracle {}", ours.len(), oracle.len()))?;
    let mut worst = 0.0f64;
    for t in &en.elements {
        ensure(lattice::preserves_form(t, &f).unwrap_or(false), "element fails TᵀFT = F")?;
        let g = lattice::conjugate_to_lorentz(t, &f).map_err(|e| e.to_string())?;
        worst = worst.max(pleatlab::hyperboloid::lorentz_defect(&g));
    }
    let pell = lattice::pell_element();
    ensure(lattice::preserves_form(&pell, &f).unwrap_or(false), "Pell element fails TᵀFT = F")?;
    ensure(
        lattice::preserves_cone_components(&pell, &f).unwrap_or(false),
        "Pell element swaps the cone components",
    )?;
    let g = lattice::conjugate_to_lorentz(&pell, &f).map_err(|e| e.to_string())?;
    worst = worst.max(pleatlab::hyperboloid::lorentz_defect(&g));
    ensure(worst <= 1e-12, format!("max |GᵀJG − J| = {worst:e}"))?;
    ensure(
        g[(1, 1)] > 1.0 && g != QuadMatrix::identity(2, 3).to_f64(),
        "Pell element is not hyperbolic",
    )?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} elements match the brute-force oracle, max |GᵀJG − J| = {worst:.1e}, {elapsed:.2?}",
        ours.len()
    ))
}

fn cubulation() -> Outcome {
    for n in 1..=4 {
        let c = wallspace::build_dual(&wallspace::crossing_fixture(n)).map_err(|e| e.to_string())?;
        ensure(c.vertices().len() == 1 << n, format!("{n} crossing walls: {} vertices", c.vertices().len()))?;
        ensure(c.cubes_by_dim().len() == n + 1 && c.cubes_by_dim()[n] == 1, format!("no {n}-cube"))?;
        ensure(wallspace::check_cat0(&c).passes(), format!("{n} crossing walls fail the CAT(0) check"))?;
        let nested = wallspace::build_dual(&wallspace::nested_fixture(n)).map_err(|e| e.to_string())?;
        ensure(nested.cubes_by_dim() == vec![n + 1, n], format!("{n} nested walls: {:?}", nested.cubes_by_dim()))?;
        ensure(wallspace::check_cat0(&nested).passes(), format!("{n} nested walls fail the CAT(0) check"))?;
    }
    let ws = wallspace::diameter_fixture(6);
    let c = wallspace::build_dual(&ws).map_err(|e| e.to_string())?;
    let families = wallspace::hyperplane_families(&c, &ws).map_err(|e| e.to_string())?;
    ensure(families == 1, format!("rotation orbit gives {families} families"))?;
    let mut broken = wallspace::build_dual(&wallspace::crossing_fixture(3)).map_err(|e| e.to_string())?;
    let square = *broken.cubes().iter().find(|(_, s)| s.count_ones() == 2).unwrap();
    broken.remove_cube(square);
    let report = wallspace::check_cat0(&broken);
    ensure(!report.flag_links, "corrupted complex passes the flag check")?;
    ensure(report.simply_connected != Verdict::Yes || !report.passes(), "corrupted complex passes")?;
    Ok("cubes, paths and one hyperplane family as expected; corrupted complex rejected".into())
}

fn length_decrease() -> Outcome {
    let r = 0.5;
    let mut prev = 0.0;
    let mut last = 0.0;
    for theta in linspace(0.5, PI - 1e-3, 60) {
        let p = pleat::build_profile(theta, r).map_err(|e| e.to_string())?;
        let rep = pleat::length_decrease(&p).map_err(|e| e.to_string())?;
        ensure(rep.strict && rep.arc_len < 2.0 * r, format!("θ = {theta}: arc {}", rep.arc_len))?;
        ensure(rep.ratio > prev, format!("ratio not increasing at θ = {theta}"))?;
        prev = rep.ratio;
        last = rep.ratio;
    }
    ensure(last > 0.999_99, format!("ratio at the top of the sweep is {last}"))?;
    Ok(format!("arc < 2r on 60 angles, ratio increases to {last:.8}"))
}

fn run_cli(args: &[&str], out: &std::path::Path, csv: &std::path::Path) -> Result<(Vec<u8>, Vec<u8>), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_pleatlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .arg("--csv-out")
        .arg(csv)
        .env("PLEATLAB_JOBS", "2")
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.code() == Some(0), format!("{args:?} exited with {status}"))?;
    let primary = std::fs::read(out).map_err(|e| e.to_string())?;
    let table = std::fs::read(csv).unwrap_or_default();
    Ok((primary, table))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let fixtures: [&[&str]; 8] = [
        &["trig", "--tangency", "--theta", "2.0", "--eps", "0.1"],
        &["trig", "--grid", "20"],
        &["verify-lemma47", "--k", "0.1,0.5,0.9", "--T", "4", "--profile", "random", "--seed", "11"],
        &["smooth", "--theta", "2.8", "--r", "0.5", "--samples", "401"],
        &["lattice", "--d", "2", "--height", "1", "--angles-in", "0.7,0.9"],
        &["cubulate", "--random", "7", "--seed", "3"],
        &["cubulate", "--fixture", "crossing:3"],
        &["separate", "--fixture", "diameters:50", "--resolution", "100"],
    ];
    for (i, args) in fixtures.iter().enumerate() {
        let a = run_cli(args, &dir.path().join(format!("a{i}")), &dir.path().join(format!("a{i}.csv")))?;
        let b = run_cli(args, &dir.path().join(format!("b{i}")), &dir.path().join(format!("b{i}.csv")))?;
        ensure(a == b, format!("{args:?} differs between runs"))?;
    }
    Ok(format!("{} fixtures rerun byte-identically", fixtures.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("tangency radius closed form vs Lambert composition", tangency_consistency),
        ("curvature comparison certificate", comparison_certificate),
        ("smoothing curvature bound and decay", curvature_decay),
        ("wedge hull width", wedge_width),
        ("supporting geodesic grid", supporting_geodesics),
        ("inversion, fixed point and tube widths", inversion_and_tubes),
        ("equidistant stretch factor", equidistant_stretch),
        ("integral orthogonal group at height 1", lattice_enumeration),
        ("dual cube complex fixtures", cubulation),
        ("cross-section length decrease", length_decrease),
        ("CLI determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
