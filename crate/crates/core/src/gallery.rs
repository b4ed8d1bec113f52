//! Named example curves.

use std::f64::consts::PI;

use crate::curvature::{
    BumpSum, BumpTerm, CogwheelKappa, CogwheelSpec, CurvatureFunction, CurvaturePiece, PieceKind, TrigPoly, TrigTerm,
};
use crate::curve::{CurveSample, DerivativeSource, PlaneCurve};
use crate::error::{Error, Result};

pub const NAMES: [&str; 9] = ["cinf1", "cinf2", "cinf3", "cinf4", "mn", "cogwheel", "simple-sig", "sine", "degenerate"];

/// Bump amplitudes (in units of π/3) of the two eight-unit blocks.
const BLOCK_1: [f64; 4] = [1.0, -2.0, 3.0, -1.0];
const BLOCK_2: [f64; 4] = [1.0, 3.0, -2.0, -1.0];

fn bump_blocks(blocks: &[[f64; 4]]) -> CurvatureFunction {
    let mut pieces = Vec::new();
    for (b, coefs) in blocks.iter().enumerate() {
        for (k, c) in coefs.iter().enumerate() {
            let r1 = 8.0 * b as f64 + 2.0 * k as f64;
            let kind = PieceKind::Bump(BumpSum { terms: vec![BumpTerm { coef: c * PI / 3.0, r1, r2: r1 + 2.0 }] });
            pieces.push(CurvaturePiece::new(r1, r1 + 2.0, kind));
        }
    }
    CurvatureFunction::new(8.0 * blocks.len() as f64, pieces).expect("bump family is well formed")
}

/// The four bump curvatures; `index` in `1..=4`.
pub fn bump_kappa(index: usize) -> CurvatureFunction {
    match index {
        1 => bump_blocks(&[BLOCK_1]),
        2 => bump_blocks(&[BLOCK_2]),
        3 => bump_blocks(&[BLOCK_1, BLOCK_2]),
        4 => bump_blocks(&[BLOCK_1, BLOCK_2, BLOCK_1]),
        _ => panic!("bump family has four members"),
    }
}

fn trig(constant: f64, terms: &[(f64, f64, f64)]) -> CurvatureFunction {
    let kind = PieceKind::Trig(TrigPoly {
        constant,
        terms: terms.iter().map(|&(freq, cos, sin)| TrigTerm { freq, cos, sin }).collect(),
    });
    CurvatureFunction::new(2.0 * PI, vec![CurvaturePiece::new(0.0, 2.0 * PI, kind)]).expect("trigonometric example")
}

/// `κ = (sin s - cos 3s)/2 - 1/5`.
pub fn mn_kappa() -> CurvatureFunction {
    trig(-0.2, &[(1.0, 0.0, 0.5), (3.0, -0.5, 0.0)])
}

/// `κ = sin s + cos s + 1/5`, whose signature is a circle.
pub fn simple_sig_kappa() -> CurvatureFunction {
    trig(0.2, &[(1.0, 1.0, 1.0)])
}

/// `κ = sin s`; total turning zero, never closes.
pub fn sine_kappa() -> CurvatureFunction {
    trig(0.0, &[(1.0, 0.0, 1.0)])
}

pub fn default_cogwheel() -> CogwheelSpec {
    CogwheelSpec { n: 4, r0: 1.0, a: vec![3, 4, 5, 6] }
}

/// Cogwheel curvature in arc length, starting at polar angle 0.
pub fn cogwheel_kappa(spec: &CogwheelSpec) -> Result<CurvatureFunction> {
    let k = CogwheelKappa::new(spec.clone())?;
    let len = k.length();
    CurvatureFunction::new(len, vec![CurvaturePiece::new(0.0, len, PieceKind::Cogwheel(k))])
}

/// `γ(t) = ρ(t)(cos t, sin t)` sampled on `[0, 2π]` with exact derivatives.
pub fn cogwheel_curve(spec: &CogwheelSpec, samples: usize) -> Result<PlaneCurve> {
    spec.validate()?;
    let out = (0..=samples)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / samples as f64;
            let r = spec.radius(t);
            let (s, c) = t.sin_cos();
            let u = [c, s];
            let v = [-s, c];
            let comb = |a: f64, b: f64| [a * u[0] + b * v[0], a * u[1] + b * v[1]];
            CurveSample {
                t,
                p: comb(r.rho, 0.0),
                d1: comb(r.d1, r.rho),
                d2: comb(r.d2 - r.rho, 2.0 * r.d1),
                d3: comb(r.d3 - 3.0 * r.d1, 3.0 * r.d2 - r.rho),
            }
        })
        .collect();
    PlaneCurve::new(out, true, DerivativeSource::Analytic)
}

/// Closed-form cogwheel curvature in the polar angle, written in terms of `cos(n a t)`.
pub fn cogwheel_kappa_closed_form(spec: &CogwheelSpec, t: f64) -> f64 {
    let j = spec.cog_of(t);
    let a = spec.a[j] as f64;
    let n = spec.n as f64;
    let r0 = spec.r0;
    let c = (n * a * t).cos();
    let a2 = a * a;
    let speed = ((1.0 - a2 * n * n) * c * c - (2.0 * r0 * a2 + 2.0) * c + r0 * r0 * a2 * a2 + (n * n + 2.0 * r0) * a2 + 1.0).sqrt() / a2;
    (speed * speed * a2 - (a2 * n * n * r0 + n * n) * c + n * n) / (speed.powi(3) * a2)
}

/// `(t, t⁶ sin(1/t))` near the origin, where vertices accumulate.
pub fn degenerate_curve(samples: usize) -> Result<PlaneCurve> {
    let half = 1.0 / (4.0 * PI);
    let n = samples.max(4) & !1;
    let out = (0..n)
        .map(|i| {
            // symmetric grid that avoids t = 0
            let t = -half + 2.0 * half * (i as f64 + 0.5) / n as f64;
            let u = 1.0 / t;
            let (s, c) = u.sin_cos();
            let t2 = t * t;
            let t3 = t2 * t;
            let t4 = t3 * t;
            CurveSample {
                t,
                p: [t, t3 * t3 * s],
                d1: [1.0, 6.0 * t4 * t * s - t4 * c],
                d2: [0.0, (30.0 * t4 - t2) * s - 10.0 * t3 * c],
                d3: [0.0, (120.0 * t3 - 12.0 * t) * s + (1.0 - 60.0 * t2) * c],
            }
        })
        .collect();
    PlaneCurve::new(out, false, DerivativeSource::Analytic)
}

#[derive(Clone, Debug)]
pub enum GalleryItem {
    Curvature(CurvatureFunction),
    Curve(PlaneCurve),
}

pub fn lookup(name: &str) -> Result<GalleryItem> {
    Ok(match name {
        "cinf1" => GalleryItem::Curvature(bump_kappa(1)),
        "cinf2" => GalleryItem::Curvature(bump_kappa(2)),
        "cinf3" => GalleryItem::Curvature(bump_kappa(3)),
        "cinf4" => GalleryItem::Curvature(bump_kappa(4)),
        "mn" => GalleryItem::Curvature(mn_kappa()),
        "cogwheel" => GalleryItem::Curvature(cogwheel_kappa(&default_cogwheel())?),
        "simple-sig" => GalleryItem::Curvature(simple_sig_kappa()),
        "sine" => GalleryItem::Curvature(sine_kappa()),
        "degenerate" => GalleryItem::Curve(degenerate_curve(4096)?),
        other => return Err(Error::UnknownGallery(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_integrals_are_multiples_of_pi_over_three() {
        for (i, want) in [(1, PI / 3.0), (2, PI / 3.0), (3, 2.0 * PI / 3.0), (4, PI)] {
            let f = bump_kappa(i);
            let got = f.integrate(0.0, f.period());
            assert!((got - want).abs() < 1e-9, "κ{i}: {got}");
        }
    }

    #[test]
    fn bump_critical_points_are_the_integers() {
        let f = bump_kappa(1);
        let cp = f.critical_points();
        assert!(!cp.degenerate);
        assert_eq!(cp.points.len(), 8, "{:?}", cp.points);
        for (i, p) in cp.points.iter().enumerate() {
            assert!((p - i as f64).abs() < 1e-6, "{p}");
        }
    }

    #[test]
    fn cogwheel_polar_curvature_matches_closed_form() {
        let spec = default_cogwheel();
        let c = cogwheel_curve(&spec, 20000).unwrap();
        for (i, s) in c.samples().iter().enumerate().step_by(7) {
            let (k, _) = c.curvature_at(i);
            assert!((k - cogwheel_kappa_closed_form(&spec, s.t)).abs() < 1e-8, "t={}", s.t);
        }
    }

    #[test]
    fn cogwheel_arclength_curvature_matches_the_curve() {
        let spec = default_cogwheel();
        let f = cogwheel_kappa(&spec).unwrap();
        let c = cogwheel_curve(&spec, 8000).unwrap();
        let cum = c.cumulative_length();
        assert!((cum.last().unwrap() - f.period()).abs() < 1e-9);
        for i in (0..c.len()).step_by(13) {
            let (k, kd) = c.curvature_at(i);
            let (fk, fkd) = f.eval(cum[i]);
            assert!((k - fk).abs() < 1e-8, "{i}");
            assert!((kd - fkd).abs() < 1e-6 * kd.abs().max(1.0), "{i}: {kd} {fkd}");
        }
        assert!((f.integrate(0.0, f.period()) - 2.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn degenerate_curve_derivatives_match_differences() {
        let c = degenerate_curve(64).unwrap();
        let y = |t: f64| t.powi(6) * (1.0 / t).sin();
        for s in c.samples().iter().filter(|s| s.t.abs() > 0.02) {
            let h = 1e-6;
            let d1 = (y(s.t + h) - y(s.t - h)) / (2.0 * h);
            let d2 = (y(s.t + h) - 2.0 * y(s.t) + y(s.t - h)) / (h * h);
            assert!((s.d1[1] - d1).abs() < 1e-9);
            assert!((s.d2[1] - d2).abs() < 1e-4);
            let h = 1e-5;
            let d3 = (y(s.t + 2.0 * h) - 2.0 * y(s.t + h) + 2.0 * y(s.t - h) - y(s.t - 2.0 * h)) / (2.0 * h * h * h);
            assert!((s.d3[1] - d3).abs() < 1e-3 * d3.abs().max(1.0), "t={}: {} {}", s.t, s.d3[1], d3);
        }
    }
}
