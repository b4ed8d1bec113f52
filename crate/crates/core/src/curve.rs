//! Sampled regular plane curves carrying derivatives up to third order.

use crate::error::{Error, Result};
use crate::quadrature;

pub type Vec2 = [f64; 2];

#[inline]
pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn det(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
fn scale(k: f64, a: Vec2) -> Vec2 {
    [k * a[0], k * a[1]]
}

#[inline]
fn perp(a: Vec2) -> Vec2 {
    [-a[1], a[0]]
}

/// One sample: parameter, point and the first three derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub p: Vec2,
    pub d1: Vec2,
    pub d2: Vec2,
    pub d3: Vec2,
}

impl CurveSample {
    /// `(κ, κ̇)` from the derivatives, `κ̇` taken with respect to arc length.
    pub fn curvature(&self) -> (f64, f64) {
        curvature_from_derivatives(self.d1, self.d2, self.d3)
    }
}

pub fn curvature_from_derivatives(d1: Vec2, d2: Vec2, d3: Vec2) -> (f64, f64) {
    let q = dot(d1, d1);
    let sp = q.sqrt();
    let k = det(d1, d2) / (q * sp);
    let kd = (q * det(d1, d3) - 3.0 * dot(d1, d2) * det(d1, d2)) / (q * q * q);
    (k, kd)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeSource {
    Analytic,
    /// Filled by finite differences; lower trust.
    FiniteDifference,
}

#[derive(Clone, Debug)]
pub struct PlaneCurve {
    samples: Vec<CurveSample>,
    closed: bool,
    source: DerivativeSource,
}

/// Relative endpoint gap accepted for a closed curve.
pub const CLOSURE_TOL: f64 = 1e-4;

impl PlaneCurve {
    pub fn new(samples: Vec<CurveSample>, closed: bool, source: DerivativeSource) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidSpec("a curve needs at least two samples".into()));
        }
        if samples.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::InvalidSpec("curve parameter must increase strictly".into()));
        }
        if let Some(index) = samples.iter().position(|s| !(norm(s.d1) > 0.0) || !s.p[0].is_finite() || !s.p[1].is_finite()) {
            return Err(Error::NonRegularCurve { index });
        }
        let c = Self { samples, closed, source };
        if closed {
            let gap = c.closure_gap();
            if gap > CLOSURE_TOL {
                return Err(Error::NotClosed(gap));
            }
        }
        Ok(c)
    }

    /// Builds a curve from points, filling derivatives with 7-point stencils.
    /// A closed polyline may repeat its first point at the end.
    pub fn from_polyline(t: &[f64], pts: &[Vec2], closed: bool) -> Result<Self> {
        if t.len() != pts.len() || t.len() < 8 {
            return Err(Error::InvalidSpec("polyline needs at least 8 points with parameters".into()));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidSpec("polyline parameter must increase strictly".into()));
        }
        let n = pts.len();
        let dup = closed && norm(add(pts[n - 1], scale(-1.0, pts[0]))) <= 1e-12 * bbox_diag(pts).max(1e-300);
        let m = if dup { n - 1 } else { n };
        let period = if dup { t[n - 1] - t[0] } else if closed { (t[n - 1] - t[0]) * n as f64 / (n - 1) as f64 } else { 0.0 };
        const W: usize = 7;
        let mut samples = Vec::with_capacity(n);
        for i in 0..n {
            let (xs, ys): (Vec<f64>, Vec<Vec2>) = if closed {
                let c = i % m;
                (0..W)
                    .map(|k| {
                        let off = k as isize - 3;
                        let j = c as isize + off;
                        let wraps = j.div_euclid(m as isize);
                        let jj = j.rem_euclid(m as isize) as usize;
                        (t[jj] + wraps as f64 * period - t[c] + t[i], pts[jj])
                    })
                    .unzip()
            } else {
                let lo = i.saturating_sub(3).min(n - W);
                (lo..lo + W).map(|j| (t[j], pts[j])).unzip()
            };
            let w = fornberg(t[i], &xs, 3);
            let mut d = [[0.0; 2]; 4];
            for (order, row) in w.iter().enumerate() {
                for (k, y) in ys.iter().enumerate() {
                    d[order][0] += row[k] * y[0];
                    d[order][1] += row[k] * y[1];
                }
            }
            samples.push(CurveSample { t: t[i], p: pts[i], d1: d[1], d2: d[2], d3: d[3] });
        }
        Self::new(samples, closed, DerivativeSource::FiniteDifference)
    }

    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn source(&self) -> DerivativeSource {
        self.source
    }

    pub fn points(&self) -> Vec<Vec2> {
        self.samples.iter().map(|s| s.p).collect()
    }

    pub fn curvature_at(&self, i: usize) -> (f64, f64) {
        self.samples[i].curvature()
    }

    /// Speed on sample interval `i` from a quintic Hermite of `γ'`.
    fn speed_on(&self, i: usize, t: f64) -> f64 {
        norm(self.tangent_on(i, t))
    }

    fn tangent_on(&self, i: usize, t: f64) -> Vec2 {
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        hermite5(a.t, b.t, [a.d1, a.d2, a.d3], [b.d1, b.d2, b.d3], t)
    }

    /// Cumulative arc length at every sample.
    pub fn cumulative_length(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.samples.len());
        out.push(0.0);
        for i in 0..self.samples.len() - 1 {
            let ds = quadrature::gl5(|t| self.speed_on(i, t), self.samples[i].t, self.samples[i + 1].t);
            out.push(out[i] + ds);
        }
        out
    }

    pub fn length(&self) -> f64 {
        *self.cumulative_length().last().unwrap()
    }

    /// Endpoint distance divided by length.
    pub fn closure_gap(&self) -> f64 {
        let a = self.samples[0].p;
        let b = self.samples[self.samples.len() - 1].p;
        norm(add(b, scale(-1.0, a))) / self.length()
    }

    /// Unit-speed resampling at spacing `step`, keeping the final point.
    pub fn resample_arclength(&self, step: f64) -> Result<PlaneCurve> {
        let cum = self.cumulative_length();
        let total = *cum.last().unwrap();
        if !(step > 0.0 && step <= total) {
            return Err(Error::InvalidStep(step));
        }
        let n = self.samples.len();
        let kappas: Vec<(f64, f64)> = (0..n).map(|i| self.curvature_at(i)).collect();
        let speeds: Vec<f64> = self.samples.iter().map(|s| norm(s.d1)).collect();
        // slope of κ̇ in t by central differences
        let kd_t: Vec<f64> = (0..n)
            .map(|i| {
                let (a, b) = if i == 0 { (0, 1) } else if i == n - 1 { (n - 2, n - 1) } else { (i - 1, i + 1) };
                (kappas[b].1 - kappas[a].1) / (self.samples[b].t - self.samples[a].t)
            })
            .collect();
        let count = (total / step + 1e-9).floor() as usize;
        let mut targets: Vec<f64> = (0..=count).map(|k| k as f64 * step).collect();
        if total - targets[count] > 1e-9 * total {
            targets.push(total);
        } else {
            targets[count] = total;
        }
        let mut out = Vec::with_capacity(targets.len());
        let mut i = 0;
        for &s in &targets {
            while i + 2 < n && cum[i + 1] < s {
                i += 1;
            }
            let (a, b) = (&self.samples[i], &self.samples[i + 1]);
            let mut t = a.t + (s - cum[i]) / (cum[i + 1] - cum[i]) * (b.t - a.t);
            for _ in 0..12 {
                let f = cum[i] + quadrature::gl5(|x| self.speed_on(i, x), a.t, t) - s;
                let dt = f / self.speed_on(i, t);
                t = (t - dt).clamp(a.t, b.t);
                if dt.abs() <= 1e-14 * (b.t - a.t) {
                    break;
                }
            }
            let p = hermite5(a.t, b.t, [a.p, a.d1, a.d2], [b.p, b.d1, b.d2], t);
            let tan = self.tangent_on(i, t);
            let tan = scale(1.0 / norm(tan), tan);
            let nrm = perp(tan);
            let k = hermite3_scalar(a.t, b.t, kappas[i].0, kappas[i].1 * speeds[i], kappas[i + 1].0, kappas[i + 1].1 * speeds[i + 1], t);
            let kd = hermite3_scalar(a.t, b.t, kappas[i].1, kd_t[i], kappas[i + 1].1, kd_t[i + 1], t);
            out.push(CurveSample {
                t: s,
                p,
                d1: tan,
                d2: scale(k, nrm),
                d3: add(scale(kd, nrm), scale(-k * k, tan)),
            });
        }
        PlaneCurve::new(out, self.closed, self.source)
    }

    /// Rotation by `angle` about the origin, then translation; `reflect`
    /// mirrors across the x-axis first.
    pub fn apply_rigid_motion(&self, angle: f64, translation: Vec2, reflect: bool) -> PlaneCurve {
        let (s, c) = angle.sin_cos();
        let f = |v: Vec2| {
            let v = if reflect { [v[0], -v[1]] } else { v };
            [c * v[0] - s * v[1], s * v[0] + c * v[1]]
        };
        let samples = self
            .samples
            .iter()
            .map(|x| CurveSample { t: x.t, p: add(f(x.p), translation), d1: f(x.d1), d2: f(x.d2), d3: f(x.d3) })
            .collect();
        PlaneCurve { samples, closed: self.closed, source: self.source }
    }

    /// Same trace run backwards, parametrized by `t0 + t1 - t`.
    pub fn reversed(&self) -> PlaneCurve {
        let t0 = self.samples[0].t;
        let t1 = self.samples[self.samples.len() - 1].t;
        let samples = self
            .samples
            .iter()
            .rev()
            .map(|x| CurveSample { t: t0 + t1 - x.t, p: x.p, d1: scale(-1.0, x.d1), d2: x.d2, d3: scale(-1.0, x.d3) })
            .collect();
        PlaneCurve { samples, closed: self.closed, source: self.source }
    }

    /// Subsampled point list with roughly `max_points` entries.
    pub fn decimated_points(&self, max_points: usize) -> Vec<Vec2> {
        let n = self.samples.len();
        let stride = n.div_ceil(max_points.max(2)).max(1);
        let mut pts: Vec<Vec2> = self.samples.iter().step_by(stride).map(|s| s.p).collect();
        if !(n - 1).is_multiple_of(stride) {
            pts.push(self.samples[n - 1].p);
        }
        pts
    }
}

pub fn bbox_diag(pts: &[Vec2]) -> f64 {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (hi[0] - lo[0]).hypot(hi[1] - lo[1])
}

fn hermite3_scalar(t0: f64, t1: f64, y0: f64, m0: f64, y1: f64, m1: f64, t: f64) -> f64 {
    hermite3_pair(t0, t1, y0, m0, y1, m1, t).0
}

fn hermite3_pair(t0: f64, t1: f64, y0: f64, m0: f64, y1: f64, m1: f64, t: f64) -> (f64, f64) {
    let h = t1 - t0;
    let x = (t - t0) / h;
    let x2 = x * x;
    let x3 = x2 * x;
    let v = (2.0 * x3 - 3.0 * x2 + 1.0) * y0 + (x3 - 2.0 * x2 + x) * h * m0 + (-2.0 * x3 + 3.0 * x2) * y1 + (x3 - x2) * h * m1;
    let d = ((6.0 * x2 - 6.0 * x) * y0 + (3.0 * x2 - 4.0 * x + 1.0) * h * m0 + (-6.0 * x2 + 6.0 * x) * y1 + (3.0 * x2 - 2.0 * x) * h * m1) / h;
    (v, d)
}

/// Quintic Hermite from value, first and second derivative at both ends.
fn hermite5(t0: f64, t1: f64, a: [Vec2; 3], b: [Vec2; 3], t: f64) -> Vec2 {
    let h = t1 - t0;
    let x = (t - t0) / h;
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x3 * x;
    let x5 = x4 * x;
    let h0 = 1.0 - 10.0 * x3 + 15.0 * x4 - 6.0 * x5;
    let h1 = x - 6.0 * x3 + 8.0 * x4 - 3.0 * x5;
    let h2 = 0.5 * x2 - 1.5 * x3 + 1.5 * x4 - 0.5 * x5;
    let h3 = 10.0 * x3 - 15.0 * x4 + 6.0 * x5;
    let h4 = -4.0 * x3 + 7.0 * x4 - 3.0 * x5;
    let h5 = 0.5 * x3 - x4 + 0.5 * x5;
    let mut out = [0.0; 2];
    for k in 0..2 {
        out[k] = h0 * a[0][k] + h1 * h * a[1][k] + h2 * h * h * a[2][k] + h3 * b[0][k] + h4 * h * b[1][k] + h5 * h * h * b[2][k];
    }
    out
}

/// Finite-difference weights for derivatives `0..=order` at `x0` on nodes `xs`.
pub fn fornberg(x0: f64, xs: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ellipse(a: f64, b: f64, n: usize) -> PlaneCurve {
        let samples = (0..=n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                let (s, c) = t.sin_cos();
                CurveSample { t, p: [a * c, b * s], d1: [-a * s, b * c], d2: [-a * c, -b * s], d3: [a * s, -b * c] }
            })
            .collect();
        PlaneCurve::new(samples, true, DerivativeSource::Analytic).unwrap()
    }

    #[test]
    fn circle_curvature_is_inverse_radius() {
        let c = ellipse(2.0, 2.0, 64);
        for i in 0..c.len() {
            let (k, kd) = c.curvature_at(i);
            assert!((k - 0.5).abs() < 1e-14 && kd.abs() < 1e-14);
        }
        assert!((c.length() - 4.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn ellipse_curvature_matches_closed_form() {
        let (a, b) = (3.0, 1.0);
        let c = ellipse(a, b, 100);
        for (i, s) in c.samples().iter().enumerate() {
            let t = s.t;
            let q = (a * t.sin()).powi(2) + (b * t.cos()).powi(2);
            let k = a * b / q.powf(1.5);
            // dκ/dt = -1.5 a b q^{-5/2} q', with q' = 2(a²-b²) sin t cos t
            let kt = -1.5 * a * b * q.powf(-2.5) * 2.0 * (a * a - b * b) * t.sin() * t.cos();
            let (kk, kd) = c.curvature_at(i);
            assert!((kk - k).abs() < 1e-12);
            assert!((kd - kt / q.sqrt()).abs() < 1e-11);
        }
    }

    #[test]
    fn quintic_hermite_reproduces_quintics() {
        let f = |t: f64| [t.powi(5) - t, 2.0 * t.powi(4) + t * t];
        let d1 = |t: f64| [5.0 * t.powi(4) - 1.0, 8.0 * t.powi(3) + 2.0 * t];
        let d2 = |t: f64| [20.0 * t.powi(3), 24.0 * t * t + 2.0];
        for k in 0..10 {
            let t = 0.3 + 0.08 * k as f64;
            let p = hermite5(0.3, 1.1, [f(0.3), d1(0.3), d2(0.3)], [f(1.1), d1(1.1), d2(1.1)], t);
            assert!((p[0] - f(t)[0]).abs() < 1e-12 && (p[1] - f(t)[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn fornberg_central_weights() {
        let w = fornberg(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);
    }

    #[test]
    fn resampled_ellipse_keeps_curvature() {
        let c = ellipse(2.0, 1.0, 4096);
        let r = c.resample_arclength(c.length() / 1000.0).unwrap();
        assert_eq!(r.len(), 1001);
        for (i, s) in r.samples().iter().enumerate() {
            assert!((norm(s.d1) - 1.0).abs() < 1e-12);
            // closest original sample by position gives the oracle parameter
            let t = s.p[1].atan2(s.p[0] / 2.0);
            let q = (2.0 * t.sin()).powi(2) + t.cos().powi(2);
            let k = 2.0 / q.powf(1.5);
            let kt = -1.5 * 2.0 * q.powf(-2.5) * 2.0 * 3.0 * t.sin() * t.cos();
            let (kk, kd) = r.curvature_at(i);
            assert!((kk - k).abs() < 1e-8, "i={i}: {kk} vs {k}");
            assert!((kd - kt / q.sqrt()).abs() < 1e-5, "i={i}: {kd} vs {}", kt / q.sqrt());
        }
    }

    #[test]
    fn finite_difference_fill_on_circle() {
        let n = 400;
        let t: Vec<f64> = (0..=n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let pts: Vec<Vec2> = t.iter().map(|&x| [x.cos(), x.sin()]).collect();
        let c = PlaneCurve::from_polyline(&t, &pts, true).unwrap();
        for i in 0..c.len() {
            let (k, kd) = c.curvature_at(i);
            assert!((k - 1.0).abs() < 1e-8 && kd.abs() < 1e-6, "{i}: {k} {kd}");
        }
        let open = PlaneCurve::from_polyline(&t[..200], &pts[..200], false).unwrap();
        for i in 0..open.len() {
            assert!((open.curvature_at(i).0 - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn segment_resamples_to_expected_count() {
        let samples = (0..=10)
            .map(|i| {
                let t = i as f64 * 0.5;
                CurveSample { t, p: [t, 0.0], d1: [1.0, 0.0], d2: [0.0; 2], d3: [0.0; 2] }
            })
            .collect();
        let c = PlaneCurve::new(samples, false, DerivativeSource::Analytic).unwrap();
        let r = c.resample_arclength(0.25).unwrap();
        assert_eq!(r.len(), 21);
        assert!(r.samples().iter().all(|s| s.curvature() == (0.0, 0.0)));
    }

    #[test]
    fn rigid_motion_preserves_signature_and_reflection_flips_it() {
        let c = ellipse(3.0, 1.5, 200);
        let m = c.apply_rigid_motion(0.7, [3.0, -1.0], false);
        let r = c.apply_rigid_motion(0.7, [3.0, -1.0], true);
        for i in 0..c.len() {
            let (k, kd) = c.curvature_at(i);
            let (k2, kd2) = m.curvature_at(i);
            let (k3, kd3) = r.curvature_at(i);
            assert!((k - k2).abs() < 1e-12 && (kd - kd2).abs() < 1e-12);
            assert!((k + k3).abs() < 1e-12 && (kd + kd3).abs() < 1e-12);
        }
        let rev = c.reversed();
        let n = c.len();
        for i in 0..n {
            let (k, kd) = c.curvature_at(i);
            let (k2, kd2) = rev.curvature_at(n - 1 - i);
            assert!((k + k2).abs() < 1e-12 && (kd - kd2).abs() < 1e-12);
        }
    }
}
