use std::f64::consts::PI;

use sigquiver::curve::{CurveSample, DerivativeSource, PlaneCurve};
use sigquiver::gallery;
use sigquiver::quiver::build_quiver;
use sigquiver::signature::vertex_scan;

// Ellipse (a cos t, b sin t): κ = ab D^{-3/2}, dκ/ds = κ'(t)/√D with D = a²sin²t + b²cos²t.
fn ellipse_oracle(a: f64, b: f64, t: f64) -> (f64, f64) {
    let (s, c) = t.sin_cos();
    let d = a * a * s * s + b * b * c * c;
    let dd = 2.0 * (a * a - b * b) * s * c;
    let k = a * b * d.powf(-1.5);
    let kt = -1.5 * a * b * d.powf(-2.5) * dd;
    (k, kt / d.sqrt())
}

fn ellipse(a: f64, b: f64, n: usize) -> Vec<CurveSample> {
    (0..=n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            let (s, c) = t.sin_cos();
            CurveSample { t, p: [a * c, b * s], d1: [-a * s, b * c], d2: [-a * c, -b * s], d3: [a * s, -b * c] }
        })
        .collect()
}

#[test]
fn ellipse_curvature_from_analytic_derivatives() {
    let c = PlaneCurve::new(ellipse(3.0, 1.5, 720), true, DerivativeSource::Analytic).unwrap();
    for (i, smp) in c.samples().iter().enumerate() {
        let (k, kd) = c.curvature_at(i);
        let (k0, kd0) = ellipse_oracle(3.0, 1.5, smp.t);
        assert!((k - k0).abs() < 1e-13 && (kd - kd0).abs() < 1e-13, "t={} {k} {k0} {kd} {kd0}", smp.t);
    }
}

#[test]
fn ellipse_curvature_from_finite_differences() {
    let s = ellipse(2.0, 1.0, 2048);
    let t: Vec<f64> = s.iter().map(|x| x.t).collect();
    let p: Vec<[f64; 2]> = s.iter().map(|x| x.p).collect();
    let c = PlaneCurve::from_polyline(&t, &p, true).unwrap();
    for (i, smp) in c.samples().iter().enumerate() {
        let (k, kd) = c.curvature_at(i);
        let (k0, kd0) = ellipse_oracle(2.0, 1.0, smp.t);
        assert!((k - k0).abs() < 1e-8 && (kd - kd0).abs() < 1e-6, "t={}", smp.t);
    }
}

#[test]
fn stationary_point_is_rejected() {
    let mut s = ellipse(1.0, 1.0, 64);
    s[10].d1 = [0.0, 0.0];
    let c = PlaneCurve::new(s, true, DerivativeSource::Analytic);
    assert!(c.is_err());
}

#[test]
fn cogwheel_matches_the_closed_form() {
    let spec = gallery::default_cogwheel();
    let c = gallery::cogwheel_curve(&spec, 4096).unwrap();
    let mut worst = 0.0f64;
    for (i, smp) in c.samples().iter().enumerate() {
        let (k, _) = c.curvature_at(i);
        worst = worst.max((k - gallery::cogwheel_kappa_closed_form(&spec, smp.t)).abs());
    }
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn accumulating_vertices_are_flagged() {
    let c = gallery::degenerate_curve(4096).unwrap();
    assert!(vertex_scan(&c).degenerate);
    let s = PlaneCurve::new(ellipse(2.0, 1.0, 1024), true, DerivativeSource::Analytic).unwrap();
    let scan = vertex_scan(&s);
    assert!(!scan.degenerate);
    // an ellipse has exactly four vertices
    assert_eq!(scan.vertices.len(), 4, "{:?}", scan.vertices);
}

#[test]
fn trigonometric_quiver_dot() {
    let q = build_quiver(&gallery::mn_kappa()).unwrap();
    let dot = q.to_dot();
    let nodes = dot.lines().filter(|l| l.contains("[label=\"q")).count();
    let arcs: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
    assert_eq!(nodes, 4);
    assert_eq!(arcs.len(), 8);
    assert!(arcs.iter().all(|l| l.contains(":5:")), "{dot}");
    assert!((q.weighted_sum() + 2.0 * PI).abs() < 1e-5);
}
