//! SE(2) congruence through shifts of the curvature function, and symmetry indices.

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{CurvatureFunction, CurvaturePiece, PieceKind, SampledKappa};
use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::reconstruction::closure_info;
use crate::signature::{self, signature_distance, signature_of_curve};

/// Grid resolution of the shift search, per period.
pub const SHIFT_GRID: usize = 8192;
/// Accepted sup-norm residual, relative to `max |κ|`.
pub const RESIDUAL_REL: f64 = 1e-4;
/// Relative period mismatch beyond which curvature functions cannot be congruent.
pub const PERIOD_REL: f64 = 1e-6;
/// Relative length mismatch tolerated between sampled curves.
pub const CURVE_LENGTH_REL: f64 = 1e-4;
/// Hausdorff tolerance for the simple-signature shortcut, relative to the diagonal.
pub const SIGNATURE_REL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Shift,
    SimpleSignature,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CongruenceResult {
    pub congruent: bool,
    /// `c` with `κ₂(s) = κ₁(s + c)`.
    pub shift: Option<f64>,
    /// Best sup-norm mismatch found; absent when the periods already differ.
    pub residual: Option<f64>,
    pub periods: [f64; 2],
    pub method: Method,
}

/// Acceptance thresholds, relative to `max|κ|` and the signature diagonal.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub residual_rel: f64,
    pub signature_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { residual_rel: RESIDUAL_REL, signature_rel: SIGNATURE_REL }
    }
}

/// Searches `c` with `κ₂(s) = κ₁(s + c)`.
pub fn find_shift(f1: &CurvatureFunction, f2: &CurvatureFunction) -> CongruenceResult {
    find_shift_with(f1, f2, Tolerances::default())
}

pub fn find_shift_with(f1: &CurvatureFunction, f2: &CurvatureFunction, tol: Tolerances) -> CongruenceResult {
    let (l1, l2) = (f1.period(), f2.period());
    if (l1 - l2).abs() > PERIOD_REL * l1.max(l2) {
        return CongruenceResult { congruent: false, shift: None, residual: None, periods: [l1, l2], method: Method::Shift };
    }
    let tol = tol.residual_rel * f1.scale().kappa.max(f2.scale().kappa);
    let (c, res) = search(f1, f1.offset(), f2, f2.offset(), l1, tol);
    let congruent = res <= tol;
    CongruenceResult {
        congruent,
        shift: congruent.then_some(c),
        residual: Some(res),
        periods: [l1, l2],
        method: Method::Shift,
    }
}

/// Grid search over circular shifts of sampled curvature, refined by golden
/// section on the continuous shift. Returns the best `(c, residual)` with
/// `c ∈ [0, period)`.
fn search(f1: &CurvatureFunction, o1: f64, f2: &CurvatureFunction, o2: f64, period: f64, tol: f64) -> (f64, f64) {
    let n = SHIFT_GRID;
    let h = period / n as f64;
    let a: Vec<(f64, f64)> = (0..n).map(|i| f1.eval(o1 + i as f64 * h)).collect();
    let b: Vec<f64> = (0..n).map(|i| f2.kappa(o2 + i as f64 * h)).collect();
    // a shift off the grid by h/2 can cost up to h/2·max|κ̇| on samples
    let slack = 0.5 * h * a.iter().map(|v| v.1.abs()).fold(0.0, f64::max) + tol;
    let mut cands: Vec<(usize, f64)> = (0..n)
        .into_par_iter()
        .filter_map(|j| {
            let mut worst = 0.0f64;
            for i in 0..n {
                let d = (b[i] - a[(i + j) % n].0).abs();
                if d > worst {
                    worst = d;
                    if worst > 2.0 * slack {
                        return None;
                    }
                }
            }
            Some((j, worst))
        })
        .collect();
    if cands.is_empty() {
        // report the best grid residual without early exit for diagnostics
        let best = (0..n)
            .into_par_iter()
            .map(|j| (0..n).map(|i| (b[i] - a[(i + j) % n].0).abs()).fold(0.0, f64::max))
            .reduce(|| f64::INFINITY, f64::min);
        return (0.0, best);
    }
    cands.sort_by(|x, y| x.1.total_cmp(&y.1));
    cands.truncate(8);
    let residual = |c: f64| -> f64 {
        (0..n)
            .map(|i| {
                let s = o2 + i as f64 * h;
                (f2.kappa(s) - f1.kappa(s - o2 + o1 + c)).abs()
            })
            .fold(0.0, f64::max)
    };
    let mut best = (0.0, f64::INFINITY);
    for (j, _) in cands {
        let c0 = j as f64 * h;
        let (c, r) = golden(&residual, c0 - h, c0 + h);
        if r < best.1 {
            let mut c = (o1 - o2 + c).rem_euclid(period);
            if period - c <= 1e-9 * period {
                c = 0.0;
            }
            best = (c, r);
        }
        if best.1 <= 1e-3 * tol {
            break;
        }
    }
    best
}

fn golden<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..60 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
        if hi - lo < 1e-13 * hi.abs().max(1.0) {
            break;
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `m = L/ℓ`, checked against the number of self-shifts of `κ` over `[0, L)`.
pub fn symmetry_index(f: &CurvatureFunction) -> Result<u32> {
    let info = closure_info(f);
    let m = match (info.closed, info.m) {
        (true, Some(m)) => m,
        _ => return Err(Error::NotClosed(info.gap.unwrap_or(f64::NAN))),
    };
    const K: usize = 512;
    let ell = f.period();
    let h = ell / K as f64;
    let total = K * m as usize;
    let vals: Vec<f64> = (0..total).map(|i| f.kappa(f.offset() + i as f64 * h)).collect();
    let tol = 1e-9 * f.scale().kappa;
    let count = (0..total)
        .filter(|&j| (0..total).all(|i| (vals[i] - vals[(i + j) % total]).abs() <= tol))
        .count();
    if count != m as usize {
        return Err(Error::InternalConsistency(format!("{count} self-shifts but m = {m}")));
    }
    Ok(m)
}

/// Arc-length curvature of a closed curve as a periodic function over its length.
pub fn sampled_curvature(c: &PlaneCurve, samples: usize) -> Result<CurvatureFunction> {
    if !c.is_closed() {
        return Err(Error::NotClosed(c.closure_gap()));
    }
    for (i, s) in c.samples().iter().enumerate() {
        if !(s.d1[0].hypot(s.d1[1]) > 0.0) {
            return Err(Error::NonRegularCurve { index: i });
        }
    }
    let length = c.length();
    let r = c.resample_arclength(length / samples as f64)?;
    let mut s = Vec::with_capacity(r.len());
    let mut kappa = Vec::with_capacity(r.len());
    let mut kappa_dot = Vec::with_capacity(r.len());
    for (i, smp) in r.samples().iter().enumerate() {
        let (k, kd) = r.curvature_at(i);
        s.push(smp.t);
        kappa.push(k);
        kappa_dot.push(kd);
    }
    let n = s.len();
    // the last sample closes the loop
    kappa[n - 1] = kappa[0];
    kappa_dot[n - 1] = kappa_dot[0];
    let piece = CurvaturePiece::new(0.0, length, PieceKind::Sampled(SampledKappa { s, kappa, kappa_dot }));
    CurvatureFunction::new_unchecked(length, vec![piece])
}

/// Congruence of two closed sampled curves.
pub fn are_congruent(c1: &PlaneCurve, c2: &PlaneCurve) -> Result<CongruenceResult> {
    are_congruent_with(c1, c2, Tolerances::default())
}

pub fn are_congruent_with(c1: &PlaneCurve, c2: &PlaneCurve, tols: Tolerances) -> Result<CongruenceResult> {
    let f1 = sampled_curvature(c1, SHIFT_GRID)?;
    let f2 = sampled_curvature(c2, SHIFT_GRID)?;
    let (l1, l2) = (f1.period(), f2.period());
    if (l1 - l2).abs() > CURVE_LENGTH_REL * l1.max(l2) {
        return Ok(CongruenceResult { congruent: false, shift: None, residual: None, periods: [l1, l2], method: Method::Shift });
    }
    let tol = tols.residual_rel * f1.scale().kappa.max(f2.scale().kappa);
    let (c, res) = search(&f1, 0.0, &f2, 0.0, l1, tol);
    let mut out = CongruenceResult {
        congruent: res <= tol,
        shift: (res <= tol).then_some(c),
        residual: Some(res),
        periods: [l1, l2],
        method: Method::Shift,
    };
    let s1 = signature_of_curve(c1)?;
    let s2 = signature_of_curve(c2)?;
    if signature::self_intersections(&s1).is_empty() && signature::self_intersections(&s2).is_empty() {
        let d = signature_distance(&s1, &s2);
        if d <= tols.signature_rel * s1.diag().max(s2.diag()) {
            out.method = Method::SimpleSignature;
            out.congruent = true;
            out.shift = Some(c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::reconstruction::reconstruct;

    #[test]
    fn shifted_copy_is_found() {
        let f = gallery::mn_kappa();
        let g = f.shifted(1.234);
        let r = find_shift(&f, &g);
        assert!(r.congruent);
        assert!((r.shift.unwrap() - 1.234).abs() < 1e-4, "{r:?}");
        let back = find_shift(&g, &f);
        assert!((back.shift.unwrap() - (f.period() - 1.234)).abs() < 1e-4);
    }

    #[test]
    fn bump_pairs() {
        let r = find_shift(&gallery::bump_kappa(1), &gallery::bump_kappa(2));
        assert!(!r.congruent);
        assert!(r.residual.unwrap() > 0.1);
        let r = find_shift(&gallery::bump_kappa(3), &gallery::bump_kappa(4));
        assert!(!r.congruent && r.residual.is_none());
    }

    #[test]
    fn symmetry_indices() {
        assert_eq!(symmetry_index(&gallery::bump_kappa(1)).unwrap(), 6);
        assert_eq!(symmetry_index(&gallery::bump_kappa(4)).unwrap(), 2);
        assert_eq!(symmetry_index(&gallery::simple_sig_kappa()).unwrap(), 5);
        assert!(matches!(symmetry_index(&gallery::sine_kappa()), Err(Error::NotClosed(_))));
    }

    #[test]
    fn moved_curve_is_congruent() {
        let (c, _) = reconstruct(&gallery::bump_kappa(2)).unwrap();
        let moved = c.apply_rigid_motion(0.7, [3.0, -1.5], false);
        let r = are_congruent(&c, &moved).unwrap();
        assert!(r.congruent, "{r:?}");
        assert!(r.residual.unwrap() <= 1e-4);
        let (d, _) = reconstruct(&gallery::bump_kappa(1)).unwrap();
        assert!(!are_congruent(&c, &d).unwrap().congruent);
    }
}
