//! Acceptance battery. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use metric_geodesy::asymptotics::{
    additivity_straightness_residual, asymptote_limit, circle_to_horocycle_convergence, fit_circle, horocycle_line_fit_residual,
    limit_sphere_sample,
};
use metric_geodesy::bisector::{flatness_test, perpendicularity_symmetry_probe};
use metric_geodesy::curvature::{
    angle_excess, classify_curvature, cosine_inequality_residual, curvature_margin, quadruple_embeddability, ComparisonModel,
    CurvatureLabel, DistanceMatrix4, VERDICT_TOL,
};
use metric_geodesy::experiment::{hexagon, run_experiment, ExperimentConfig, ExperimentKind, SpaceSpec};
use metric_geodesy::{GeodesicLine, PointChart, RaySpec, Region, SearchSettings, SpaceHandle, TripleSampler};

const SEED: u64 = 20_240_601;

type Check = Result<(bool, String), String>;

fn settings() -> SearchSettings {
    SearchSettings::with_seed(SEED)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn e2() -> SpaceHandle {
    SpaceHandle::euclidean(2).unwrap()
}

fn sphere_pt(v: [f64; 3]) -> PointChart {
    PointChart::sphere_normalized(v).unwrap()
}

fn octant() -> [PointChart; 3] {
    [sphere_pt([1.0, 0.0, 0.0]), sphere_pt([0.0, 1.0, 0.0]), sphere_pt([0.0, 0.0, 1.0])]
}

fn c01() -> Check {
    let cases: Vec<(&str, SpaceHandle, Region, CurvatureLabel)> = vec![
        ("euclidean", e2(), Region::square(1.0), CurvatureLabel::Zero),
        ("minkowski p=1.5", SpaceHandle::minkowski_p(1.5).unwrap(), Region::square(1.0), CurvatureLabel::Zero),
        ("minkowski p=4", SpaceHandle::minkowski_p(4.0).unwrap(), Region::square(1.0), CurvatureLabel::Zero),
        ("disk r<0.8", SpaceHandle::poincare_disk(), Region::ball(0.8), CurvatureLabel::Negative),
        ("sphere octant", SpaceHandle::sphere(), Region::SphereOctant, CurvatureLabel::Positive),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, space, region, want) in cases {
        let v = classify_curvature(&space, &TripleSampler::new(region), 200, VERDICT_TOL, &settings()).map_err(err)?;
        ok &= v.label == want && v.n_triples == 200;
        parts.push(format!("{name}: {} [{:.2e}, {:.2e}]", v.label, v.min_margin, v.max_margin));
    }
    Ok((ok, parts.join("; ")))
}

fn c02() -> Check {
    let s = SpaceHandle::sphere();
    let [a, b, c] = octant();
    let m = curvature_margin(&s, &a, &b, &c, &settings()).map_err(err)?;
    let want = PI / 3.0 - PI / 4.0;
    Ok(((m - want).abs() <= 1e-9, format!("margin {m:.15} vs {want:.15}")))
}

fn triangles(space: &SpaceHandle, region: Region, n: u64) -> Result<Vec<metric_geodesy::Triangle>, String> {
    let s = TripleSampler::new(region);
    (0..n).map(|i| s.triangle(space, SEED, i).map_err(err)).collect()
}

fn c03() -> Check {
    let euc = triangles(&e2(), Region::square(1.0), 500)?;
    let disk = triangles(&SpaceHandle::poincare_disk(), Region::ball(0.8), 500)?;
    let sph = triangles(&SpaceHandle::sphere(), Region::SphereOctant, 500)?;
    let e_max = euc.iter().map(|t| cosine_inequality_residual(t).abs()).fold(0.0, f64::max);
    let d_min = disk.iter().map(cosine_inequality_residual).fold(f64::INFINITY, f64::min);
    let s_max = sph.iter().map(cosine_inequality_residual).fold(f64::NEG_INFINITY, f64::max);
    let s = SpaceHandle::sphere();
    let [a, b, c] = octant();
    let oct = cosine_inequality_residual(&s.triangle_measure(&a, &b, &c).map_err(err)?);
    let ok = e_max <= 1e-9 && d_min >= 1e-6 && s_max <= -1e-6 && (oct + PI * PI / 4.0).abs() <= 1e-9;
    Ok((
        ok,
        format!("euclid max|r| {e_max:.2e}; disk min {d_min:.3e}; sphere max {s_max:.3e}; octant {oct:.12}"),
    ))
}

fn c04() -> Check {
    let s = SpaceHandle::sphere();
    let [a, b, c] = octant();
    let oct = angle_excess(&s.triangle_measure(&a, &b, &c).map_err(err)?);
    let euc = triangles(&e2(), Region::square(1.0), 500)?;
    let e_max = euc.iter().map(|t| angle_excess(t).abs()).fold(0.0, f64::max);
    let disk = triangles(&SpaceHandle::poincare_disk(), Region::ball(0.8), 500)?;
    let d_max = disk.iter().map(angle_excess).fold(f64::NEG_INFINITY, f64::max);
    let ok = (oct - PI / 2.0).abs() <= 1e-9 && e_max <= 1e-9 && d_max < 0.0;
    Ok((ok, format!("octant {oct:.12}; euclid max|e| {e_max:.2e}; disk max {d_max:.3e}")))
}

fn c05() -> Check {
    let set = settings();
    let flat = |space: &SpaceHandle| -> Result<f64, String> {
        let p = space.point(&[0.0, 0.0]).map_err(err)?;
        let q = space.point(&[0.5, 0.2]).map_err(err)?;
        Ok(flatness_test(space, &p, &q, 50, 1e-5, &set).map_err(err)?.worst_defect)
    };
    let de = flat(&e2())?;
    let dd = flat(&SpaceHandle::poincare_disk())?;
    let m = SpaceHandle::minkowski_p(4.0).unwrap();
    let pm = |x: f64, y: f64| m.point(&[x, y]).unwrap();
    let dm = flatness_test(&m, &pm(0.0, 0.0), &pm(1.0, 1.0), 50, 1e-5, &set).map_err(err)?.worst_defect;
    let dg = flatness_test(&m, &pm(0.0, 0.0), &pm(1.0, 0.4), 50, 1e-5, &set).map_err(err)?.worst_defect;
    let ok = de < 1e-5 && dd < 1e-5 && dm > 1e-3;
    Ok((
        ok,
        format!("euclid {de:.2e}; disk {dd:.2e}; p=4 foci (0,0),(1,1) {dm:.2e} (needs > 1e-3); p=4 foci (0,0),(1,0.4) {dg:.2e}"),
    ))
}

fn c06() -> Check {
    let set = settings();
    let re = perpendicularity_symmetry_probe(&e2(), 100, &set).map_err(err)?.max_residual;
    let rd = perpendicularity_symmetry_probe(&SpaceHandle::poincare_disk(), 100, &set).map_err(err)?.max_residual;
    let rm = perpendicularity_symmetry_probe(&SpaceHandle::minkowski_p(4.0).unwrap(), 100, &set)
        .map_err(err)?
        .max_residual;
    Ok((re < 1e-5 && rd < 1e-5 && rm > 1e-3, format!("euclid {re:.2e}; disk {rd:.2e}; p=4 max {rm:.3e}")))
}

fn fit_of(space: &SpaceHandle) -> Result<(f64, Vec<[f64; 2]>), String> {
    let o = space.point(&[0.0, 0.0]).map_err(err)?;
    let ray = RaySpec::new(space, o, &[1.0, 0.0]).map_err(err)?;
    let cloud = limit_sphere_sample(&ray, &o, 41, 1e-9, SEED).map_err(err)?;
    Ok((horocycle_line_fit_residual(&cloud).map_err(err)?, cloud.points()))
}

fn c07() -> Check {
    let flat = [
        ("euclidean", e2()),
        ("p=1.5", SpaceHandle::minkowski_p(1.5).unwrap()),
        ("p=4", SpaceHandle::minkowski_p(4.0).unwrap()),
        ("hexagon", SpaceHandle::minkowski_polygon(hexagon()).unwrap()),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, space) in &flat {
        let (r, _) = fit_of(space)?;
        ok &= r < 1e-4;
        parts.push(format!("{name} {r:.2e}"));
    }
    let (rd, pts) = fit_of(&SpaceHandle::poincare_disk())?;
    let c = fit_circle(&pts).map_err(err)?;
    let circle_err = (c.center[0] - 0.5).abs().max(c.center[1].abs()).max((c.radius - 0.5).abs());
    ok &= rd > 1e-2 && circle_err <= 1e-3;
    parts.push(format!("disk {rd:.3e}, circle center ({:.6}, {:.1e}) r {:.6}", c.center[0], c.center[1], c.radius));
    Ok((ok, parts.join("; ")))
}

fn c08() -> Check {
    let ts = [2.0, 4.0, 8.0, 16.0];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, space) in [
        ("euclidean", e2()),
        ("disk", SpaceHandle::poincare_disk()),
        ("p=4", SpaceHandle::minkowski_p(4.0).unwrap()),
    ] {
        let o = space.point(&[0.0, 0.0]).map_err(err)?;
        let ray = RaySpec::new(&space, o, &[1.0, 0.0]).map_err(err)?;
        let g = circle_to_horocycle_convergence(&ray, &o, &ts, 1e-9, SEED).map_err(err)?;
        let last = *g.last().unwrap();
        ok &= g.windows(2).all(|w| w[1] < w[0]) && last < 1e-2;
        parts.push(format!("{name} {}", g.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>().join(" > ")));
    }
    Ok((ok, parts.join("; ")))
}

fn c09() -> Check {
    let set = settings();
    let fwd: Vec<f64> = (1..=24).map(|k| 2f64.powi(k)).collect();
    let bwd: Vec<f64> = fwd.iter().map(|t| -t).collect();
    let k = SpaceHandle::poincare_disk();
    let line = GeodesicLine::new(&k, k.point(&[0.0, 0.0]).unwrap(), &[1.0, 0.0]).map_err(err)?;
    let p = k.point(&[0.0, 0.5]).unwrap();
    let f = asymptote_limit(&k, &p, &line, &fwd, &set).map_err(err)?;
    let b = asymptote_limit(&k, &p, &line, &bwd, &set).map_err(err)?;
    let (ef, eb) = (f.ideal_endpoint.unwrap(), b.ideal_endpoint.unwrap());
    let miss = (ef[0] - 1.0).hypot(ef[1]);
    let gap = (ef[0] - eb[0]).hypot(ef[1] - eb[1]);

    let e = e2();
    let line = GeodesicLine::new(&e, e.point(&[0.0, 0.0]).unwrap(), &[1.0, 0.0]).map_err(err)?;
    let p = e.point(&[0.0, 0.5]).unwrap();
    let a = asymptote_limit(&e, &p, &line, &fwd, &set).map_err(err)?;
    // distance of the limit geodesic from the parallel y = 0.5
    let par = a.limit_samples.iter().map(|s| (s[1] - 0.5).abs()).fold(0.0, f64::max);
    Ok((
        miss <= 1e-3 && gap > 1e-3 && par <= 1e-6,
        format!("disk endpoint ({:.6}, {:.1e}) backward ({:.6}, {:.1e}); euclid parallel gap {par:.2e}", ef[0], ef[1], eb[0], eb[1]),
    ))
}

fn c10() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for space in ["hilbert-disk", "hilbert-square"] {
        let cfg = ExperimentConfig::new(ExperimentKind::Straightness, SpaceSpec::name(space), SEED).with_param("n_triples", 200);
        let r = run_experiment(&cfg).map_err(err)?;
        let m = r.summary_f64("max_abs_residual").unwrap_or(f64::INFINITY);
        ok &= r.rows.len() == 200 && m < 1e-10;
        parts.push(format!("{space} max {m:.2e} over {}", r.rows.len()));
    }
    let h = SpaceHandle::hilbert_unit_disk();
    let p = |x: f64| h.point(&[x, 0.0]).unwrap();
    let dxy = h.distance(&p(-0.5), &p(0.0)).map_err(err)?;
    let dyz = h.distance(&p(0.0), &p(0.5)).map_err(err)?;
    let r = additivity_straightness_residual(&h, &p(-0.5), &p(0.0), &p(0.5)).map_err(err)?;
    let canon = (dxy - 0.5 * 3f64.ln()).abs().max((dyz - 0.5 * 3f64.ln()).abs()).max((dxy + dyz - 3f64.ln()).abs());
    ok &= canon <= 1e-12 && r.abs() <= 1e-12;
    parts.push(format!("canonical |d - ln3/2| {canon:.1e}, residual {r:.1e}"));
    Ok((ok, parts.join("; ")))
}

fn c11() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for space in ["euclidean-2", "sphere", "poincare-disk", "minkowski-p4", "hilbert-disk"] {
        let cfg = ExperimentConfig::new(ExperimentKind::Axioms, SpaceSpec::name(space), SEED).with_param("n_instances", 100);
        let r = run_experiment(&cfg).map_err(err)?;
        let worst = ["betweenness", "extendability", "unique-extension"]
            .iter()
            .map(|a| r.summary_f64(&format!("{a}_max_residual")).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        let flagged = r.summary_f64("flagged").unwrap_or(0.0);
        ok &= r.passed && worst <= 1e-5;
        parts.push(format!("{space} worst {worst:.1e} flagged {flagged}"));
    }
    Ok((ok, parts.join("; ")))
}

fn c12() -> Check {
    let e = e2();
    let mut accepted = 0;
    let region = Region::square(1.0);
    for k in 0..1000u64 {
        let mut r = metric_geodesy::rng::stream(SEED, 0x7175_6164, k);
        let pts: Vec<PointChart> = (0..4).map(|_| region.sample(&e, &mut r).unwrap()).collect();
        let dm = DistanceMatrix4::from_points(&e, &[pts[0], pts[1], pts[2], pts[3]]).map_err(err)?;
        if quadruple_embeddability(&dm, ComparisonModel::Euclidean, 1.0).map_err(err)?.embeddable {
            accepted += 1;
        }
    }
    let sq = DistanceMatrix4::from_upper([1.0, SQRT_2, 1.0, 1.0, SQRT_2, 1.0]).map_err(err)?;
    let sq = quadruple_embeddability(&sq, ComparisonModel::Euclidean, 1.0).map_err(err)?;
    let bad = [[1.0, 1.0, 3.0, 1.0, 1.0, 1.0], [1.0, 0.5, 1.0, 2.0, 1.0, 1.0], [5.0, 1.0, 1.0, 1.0, 1.0, 1.0]];
    let rejected = bad.iter().filter(|u| DistanceMatrix4::from_upper(**u).is_err()).count();
    Ok((
        accepted == 1000 && sq.embeddable && sq.dimension == Some(2) && rejected == bad.len(),
        format!("{accepted}/1000 accepted; square embeddable={} dim={:?}; {rejected}/{} violators rejected", sq.embeddable, sq.dimension, bad.len()),
    ))
}

fn c13() -> Check {
    let bin = env!("CARGO_BIN_EXE_metric-geodesy");
    let dir = tempfile::tempdir().map_err(err)?;
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let st = Command::new(bin).arg("suite").arg("--out").arg(d).output().map_err(err)?;
        if st.status.code() == Some(1) {
            return Err(format!("suite errored: {}", String::from_utf8_lossy(&st.stderr)));
        }
    }
    let mut names: Vec<_> = std::fs::read_dir(&a).map_err(err)?.map(|e| e.unwrap().file_name()).collect();
    names.sort();
    let mut same = names.len() == std::fs::read_dir(&b).map_err(err)?.count();
    for n in &names {
        same &= std::fs::read(a.join(n)).map_err(err)? == std::fs::read(b.join(n)).map_err(err)?;
    }
    Ok((same, format!("{} files compared", names.len())))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Check); 13] = [
        ("C01", "curvature signs", c01),
        ("C02", "octant margin", c02),
        ("C03", "cosine inequality", c03),
        ("C04", "angle excess", c04),
        ("C05", "bisector flatness", c05),
        ("C06", "perpendicularity symmetry", c06),
        ("C07", "horocycle straightness", c07),
        ("C08", "circle-to-horocycle convergence", c08),
        ("C09", "parallels", c09),
        ("C10", "hilbert straightness", c10),
        ("C11", "axiom probes", c11),
        ("C12", "quadruple embeddability", c12),
        ("C13", "suite determinism", c13),
    ];
    let mut failed = 0;
    for (id, title, f) in criteria {
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(Ok(r)) => r,
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".into()),
        };
        if !ok {
            failed += 1;
        }
        println!("{} {id} {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} passed, {failed} failed", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
