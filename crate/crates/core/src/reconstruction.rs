//! Curves from curvature: `η = ∫κ`, `γ = ∫(cos η, sin η)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::curvature::CurvatureFunction;
use crate::curve::{CurveSample, DerivativeSource, PlaneCurve, CLOSURE_TOL};
use crate::error::{Error, Result};
use crate::quadrature::{gl5, gl5_nodes, gl5_weights};

/// Default number of integration steps per reconstructed curve.
pub const DEFAULT_STEPS: usize = 8192;
/// Largest denominator accepted when reading `∫κ / 2π` as a fraction.
pub const MAX_DENOMINATOR: i64 = 64;
pub const RATIONAL_TOL: f64 = 1e-6;

/// Unit-speed curve with `γ(0) = 0`, `T(0) = (1, 0)` on `[0, s_max]`.
pub fn integrate_frenet(f: &CurvatureFunction, s_max: f64, step: f64) -> Result<PlaneCurve> {
    if !(s_max > 0.0 && s_max.is_finite()) {
        return Err(Error::InvalidInterval(format!("[0, {s_max}]")));
    }
    if !(step > 0.0 && step <= s_max) {
        return Err(Error::InvalidStep(step));
    }
    let n = (s_max / step - 1e-9).ceil().max(1.0) as usize;
    let h = s_max / n as f64;
    let mut samples = Vec::with_capacity(n + 1);
    let mut eta = 0.0;
    let mut pos = [0.0, 0.0];
    let push = |samples: &mut Vec<CurveSample>, s: f64, pos: [f64; 2], eta: f64| {
        let (k, kd) = f.eval(s);
        let (sn, cs) = eta.sin_cos();
        let t = [cs, sn];
        let nn = [-sn, cs];
        samples.push(CurveSample {
            t: s,
            p: pos,
            d1: t,
            d2: [k * nn[0], k * nn[1]],
            d3: [kd * nn[0] - k * k * t[0], kd * nn[1] - k * k * t[1]],
        });
    };
    push(&mut samples, 0.0, pos, eta);
    for i in 0..n {
        let a = i as f64 * h;
        let b = if i + 1 == n { s_max } else { (i + 1) as f64 * h };
        let mut cuts = vec![a];
        cuts.extend(f.breakpoints_in(a, b));
        cuts.push(b);
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let xs = gl5_nodes(lo, hi);
            let ws = gl5_weights(lo, hi);
            for (x, wt) in xs.iter().zip(ws) {
                let e = eta + gl5(|u| f.kappa(u), lo, *x);
                pos[0] += wt * e.cos();
                pos[1] += wt * e.sin();
            }
            eta += gl5(|u| f.kappa(u), lo, hi);
        }
        push(&mut samples, b, pos, eta);
    }
    let closed = {
        let last = samples[n].p;
        last[0].hypot(last[1]) <= CLOSURE_TOL * s_max
    };
    PlaneCurve::new(samples, closed, DerivativeSource::Analytic)
}

/// Result of reading the total turning over one period as `ξ/m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureInfo {
    /// `∫_0^ℓ κ`.
    pub integral: f64,
    pub xi: Option<i64>,
    pub m: Option<u32>,
    pub closed: bool,
    /// Relative endpoint gap of the reconstruction over `mℓ`, when computed.
    pub gap: Option<f64>,
}

impl ClosureInfo {
    /// Length of the closed curve, `mℓ`.
    pub fn length(&self, period: f64) -> Option<f64> {
        self.m.map(|m| m as f64 * period)
    }
}

/// Best fraction `p/q` with `q <= max_den` within `tol` of `x`, by continued fractions.
pub fn rational_approx(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let sign = if x < 0.0 { -1 } else { 1 };
    let y = x.abs();
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = y;
    for _ in 0..64 {
        let a = r.floor();
        if a > i64::MAX as f64 / 4.0 {
            return None;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            return None;
        }
        if (y - h2 as f64 / k2 as f64).abs() <= tol {
            return Some((sign * h2, k2));
        }
        let frac = r - a as f64;
        if frac <= 0.0 {
            return None;
        }
        r = 1.0 / frac;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    None
}

/// Applies the rational-turning criterion and confirms closure by integration.
pub fn closure_info(f: &CurvatureFunction) -> ClosureInfo {
    let off = f.offset();
    let integral = f.integrate(off, off + f.period());
    let x = integral / (2.0 * PI);
    let mut info = ClosureInfo { integral, xi: None, m: None, closed: false, gap: None };
    if x.abs() <= RATIONAL_TOL {
        return info;
    }
    let Some((xi, m)) = rational_approx(x, MAX_DENOMINATOR, RATIONAL_TOL) else {
        return info;
    };
    info.xi = Some(xi);
    info.m = Some(m as u32);
    let length = m as f64 * f.period();
    if let Ok(c) = integrate_frenet(f, length, length / DEFAULT_STEPS as f64) {
        let gap = c.closure_gap();
        info.gap = Some(gap);
        info.closed = gap <= CLOSURE_TOL;
    }
    info
}

/// Reconstruction over `[0, mℓ]` for closed functions, one period otherwise.
pub fn reconstruct(f: &CurvatureFunction) -> Result<(PlaneCurve, ClosureInfo)> {
    let info = closure_info(f);
    let length = match (info.closed, info.m) {
        (true, Some(m)) => m as f64 * f.period(),
        _ => f.period(),
    };
    let c = integrate_frenet(f, length, length / DEFAULT_STEPS as f64)?;
    Ok((c, info))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{CurvaturePiece, PieceKind, TrigPoly, TrigTerm};

    fn trig(c: f64, terms: &[(f64, f64, f64)], period: f64) -> CurvatureFunction {
        let kind = PieceKind::Trig(TrigPoly {
            constant: c,
            terms: terms.iter().map(|&(freq, cos, sin)| TrigTerm { freq, cos, sin }).collect(),
        });
        CurvatureFunction::new(period, vec![CurvaturePiece::new(0.0, period, kind)]).unwrap()
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(rational_approx(1.0 / 6.0, 64, 1e-6), Some((1, 6)));
        assert_eq!(rational_approx(-0.2, 64, 1e-6), Some((-1, 5)));
        assert_eq!(rational_approx(2.0, 64, 1e-6), Some((2, 1)));
        assert_eq!(rational_approx(7.0 / 61.0, 64, 1e-6), Some((7, 61)));
        assert_eq!(rational_approx(std::f64::consts::SQRT_2, 64, 1e-6), None);
    }

    #[test]
    fn sine_is_not_closed() {
        let f = trig(0.0, &[(1.0, 0.0, 1.0)], 2.0 * PI);
        let info = closure_info(&f);
        assert!(!info.closed && info.m.is_none());
    }

    #[test]
    fn shifted_sine_closes_with_five_fold_symmetry() {
        let f = trig(0.2, &[(1.0, 1.0, 1.0)], 2.0 * PI);
        let info = closure_info(&f);
        assert_eq!((info.xi, info.m, info.closed), (Some(1), Some(5), true));
        let (c, _) = reconstruct(&f).unwrap();
        assert!((c.length() - 10.0 * PI).abs() < 1e-9);
        assert!(c.closure_gap() < 1e-10);
    }

    #[test]
    fn constant_rate_sine_reconstructs_a_known_curve() {
        // κ = 1 + 0.5 cos s gives η = s + 0.5 sin s; compare with a dense Simpson oracle.
        let f = trig(1.0, &[(1.0, 0.5, 0.0)], 2.0 * PI);
        let c = integrate_frenet(&f, 2.0, 0.01).unwrap();
        let last = c.samples().last().unwrap();
        let n = 200_000;
        let h = 2.0 / n as f64;
        let (mut x, mut y) = (0.0, 0.0);
        for i in 0..=n {
            let s = i as f64 * h;
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let e = s + 0.5 * s.sin();
            x += w * e.cos();
            y += w * e.sin();
        }
        x *= h / 3.0;
        y *= h / 3.0;
        assert!((last.p[0] - x).abs() < 1e-12 && (last.p[1] - y).abs() < 1e-12);
        for (i, smp) in c.samples().iter().enumerate() {
            let (k, kd) = c.curvature_at(i);
            let (k0, kd0) = f.eval(smp.t);
            assert!((k - k0).abs() < 1e-12 && (kd - kd0).abs() < 1e-12);
        }
    }
}
