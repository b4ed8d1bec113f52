//! Periodic piecewise curvature functions `κ(s)` of arc length.

mod cogwheel;
mod doc;
mod kinds;

use std::sync::{Arc, OnceLock};

pub use cogwheel::{CogwheelKappa, CogwheelSpec, Radius};
pub use doc::{CurvatureDoc, PieceDoc};
pub use kinds::{bump, step_down, step_up, BumpSum, BumpTerm, SampledKappa, TrigPoly, TrigTerm};

use crate::error::{Error, Result};
use crate::quadrature;

/// Grid size used for root bracketing and scale estimates.
pub const ROOT_GRID: usize = 4096;
/// Absolute bisection tolerance for critical points.
pub const ROOT_TOL: f64 = 1e-10;
/// Largest `k` for which `ℓ/k` is tested as a spurious period.
pub const MINIMALITY_DIVISORS: u32 = 16;

#[derive(Clone, Debug)]
pub enum PieceKind {
    Bump(BumpSum),
    Trig(TrigPoly),
    Cogwheel(CogwheelKappa),
    Sampled(SampledKappa),
}

impl PieceKind {
    pub fn eval(&self, x: f64) -> (f64, f64) {
        match self {
            PieceKind::Bump(b) => b.eval(x),
            PieceKind::Trig(t) => t.eval(x),
            PieceKind::Cogwheel(c) => c.eval(x),
            PieceKind::Sampled(p) => p.eval(x),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            PieceKind::Bump(b) => b.breakpoints(),
            PieceKind::Cogwheel(c) => c.breakpoints(),
            PieceKind::Trig(_) | PieceKind::Sampled(_) => Vec::new(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PieceKind::Bump(_) => "bump",
            PieceKind::Trig(_) => "trig",
            PieceKind::Cogwheel(_) => "cogwheel",
            PieceKind::Sampled(_) => "sampled",
        }
    }
}

/// One piece on `[start, end)`. The kind is evaluated at `s + shift`, or at
/// `shift - s` with negated curvature when `reversed` is set.
#[derive(Clone, Debug)]
pub struct CurvaturePiece {
    pub start: f64,
    pub end: f64,
    pub shift: f64,
    pub reversed: bool,
    pub kind: Arc<PieceKind>,
}

impl CurvaturePiece {
    pub fn new(start: f64, end: f64, kind: PieceKind) -> Self {
        Self { start, end, shift: 0.0, reversed: false, kind: Arc::new(kind) }
    }

    fn local(&self, s: f64) -> f64 {
        if self.reversed {
            self.shift - s
        } else {
            s + self.shift
        }
    }

    fn to_outer(&self, x: f64) -> f64 {
        if self.reversed {
            self.shift - x
        } else {
            x - self.shift
        }
    }

    pub fn eval(&self, s: f64) -> (f64, f64) {
        let (k, kd) = self.kind.eval(self.local(s));
        if self.reversed {
            (-k, kd)
        } else {
            (k, kd)
        }
    }

    /// Piece evaluating `self` at `s + c` on the given interval.
    fn offset_by(&self, c: f64, start: f64, end: f64) -> Self {
        let shift = if self.reversed { self.shift - c } else { self.shift + c };
        Self { start, end, shift, reversed: self.reversed, kind: self.kind.clone() }
    }
}

/// Maximum absolute curvature and curvature derivative over one period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scale {
    pub kappa: f64,
    pub kappa_dot: f64,
}

/// Parameters where `κ̇` vanishes, i.e. vertices of the curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoints {
    pub points: Vec<f64>,
    /// Set when two roots fall closer than the bracketing resolution.
    pub degenerate: bool,
}

#[derive(Clone, Debug)]
pub struct CurvatureFunction {
    period: f64,
    pieces: Vec<CurvaturePiece>,
    scale: OnceLock<Scale>,
}

impl CurvatureFunction {
    /// Builds a validated function whose pieces tile exactly one minimal period.
    pub fn new(period: f64, pieces: Vec<CurvaturePiece>) -> Result<Self> {
        let f = Self::new_unchecked(period, pieces)?;
        f.check_junctions()?;
        if f.scale().kappa_dot == 0.0 {
            return Err(Error::DegenerateFunction("κ̇ vanishes identically".into()));
        }
        f.check_minimal()?;
        Ok(f)
    }

    /// Structural validation only; skips the continuity and minimality checks.
    pub(crate) fn new_unchecked(period: f64, pieces: Vec<CurvaturePiece>) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidInterval(format!("period {period}")));
        }
        if pieces.is_empty() {
            return Err(Error::InvalidSpec("no pieces".into()));
        }
        let tol = 1e-9 * period.max(1.0);
        for p in &pieces {
            if !(p.start.is_finite() && p.end.is_finite() && p.end > p.start) {
                return Err(Error::InvalidInterval(format!("[{}, {}]", p.start, p.end)));
            }
        }
        for w in pieces.windows(2) {
            if (w[0].end - w[1].start).abs() > tol {
                return Err(Error::InvalidInterval(format!(
                    "pieces do not tile: gap between {} and {}",
                    w[0].end, w[1].start
                )));
            }
        }
        let span = pieces.last().unwrap().end - pieces[0].start;
        if (span - period).abs() > tol {
            return Err(Error::InvalidInterval(format!("pieces span {span}, period is {period}")));
        }
        Ok(Self { period, pieces, scale: OnceLock::new() })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn offset(&self) -> f64 {
        self.pieces[0].start
    }

    pub fn pieces(&self) -> &[CurvaturePiece] {
        &self.pieces
    }

    fn reduce(&self, s: f64) -> (usize, f64) {
        let off = self.offset();
        let x = off + (s - off).rem_euclid(self.period);
        let i = self.pieces.partition_point(|p| p.end <= x).min(self.pieces.len() - 1);
        (i, x)
    }

    /// `(κ(s), κ̇(s))` for any real `s`.
    pub fn eval(&self, s: f64) -> (f64, f64) {
        let (i, x) = self.reduce(s);
        self.pieces[i].eval(x)
    }

    pub fn kappa(&self, s: f64) -> f64 {
        self.eval(s).0
    }

    pub fn kappa_dot(&self, s: f64) -> f64 {
        self.eval(s).1
    }

    /// Second derivative by central differences of `κ̇`.
    pub fn kappa_ddot(&self, s: f64) -> f64 {
        let h = 1e-6 * self.period.max(1e-3);
        (self.kappa_dot(s + h) - self.kappa_dot(s - h)) / (2.0 * h)
    }

    pub fn scale(&self) -> Scale {
        *self.scale.get_or_init(|| {
            let h = self.period / ROOT_GRID as f64;
            let mut sc = Scale { kappa: 0.0, kappa_dot: 0.0 };
            for i in 0..ROOT_GRID {
                let (k, kd) = self.eval(self.offset() + i as f64 * h);
                sc.kappa = sc.kappa.max(k.abs());
                sc.kappa_dot = sc.kappa_dot.max(kd.abs());
            }
            sc
        })
    }

    fn check_junctions(&self) -> Result<()> {
        let sc = self.scale();
        let n = self.pieces.len();
        for i in 0..n {
            let left = &self.pieces[i];
            let right = &self.pieces[(i + 1) % n];
            let (kl, kdl) = left.eval(left.end);
            let x = if i + 1 == n { right.start } else { left.end };
            let (kr, kdr) = right.eval(x);
            if (kl - kr).abs() > 1e-6 * sc.kappa.max(1.0) || (kdl - kdr).abs() > 1e-6 * sc.kappa_dot.max(1.0) {
                return Err(Error::InvalidSpec(format!(
                    "curvature is not C¹ at s = {}: κ jumps {:.3e}, κ̇ jumps {:.3e}",
                    left.end,
                    kr - kl,
                    kdr - kdl
                )));
            }
        }
        Ok(())
    }

    fn check_minimal(&self) -> Result<()> {
        const G: usize = 512;
        let tol = 1e-7 * self.scale().kappa.max(f64::MIN_POSITIVE);
        let samples: Vec<(f64, f64)> = (0..G)
            .map(|i| {
                let s = self.offset() + self.period * (i as f64 + 0.37) / G as f64;
                (s, self.kappa(s))
            })
            .collect();
        for k in 2..=MINIMALITY_DIVISORS {
            let p = self.period / k as f64;
            if samples.iter().all(|&(s, v)| (self.kappa(s + p) - v).abs() <= tol) {
                return Err(Error::NotMinimalPeriod { period: self.period, divisor: p });
            }
        }
        Ok(())
    }

    /// Sorted piece boundaries and internal breakpoints in `[offset, offset + ℓ)`.
    pub fn base_breakpoints(&self) -> Vec<f64> {
        let off = self.offset();
        let mut out: Vec<f64> = Vec::new();
        for p in &self.pieces {
            out.push(p.start);
            for x in p.kind.breakpoints() {
                let s = p.to_outer(x);
                if s > p.start && s < p.end {
                    out.push(s);
                }
            }
        }
        out.retain(|&s| s >= off && s < off + self.period);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * self.period.max(1.0));
        out
    }

    /// Breakpoints strictly inside `(a, b)`, periodically extended.
    pub fn breakpoints_in(&self, a: f64, b: f64) -> Vec<f64> {
        let base = self.base_breakpoints();
        let off = self.offset();
        let k0 = ((a - off) / self.period).floor() as i64 - 1;
        let k1 = ((b - off) / self.period).ceil() as i64 + 1;
        let mut out = Vec::new();
        for k in k0..=k1 {
            for &x in &base {
                let s = x + k as f64 * self.period;
                if s > a && s < b {
                    out.push(s);
                }
            }
        }
        out
    }

    /// `∫_a^b κ(s) ds` by adaptive quadrature split at breakpoints.
    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        if b < a {
            return -self.integrate(b, a);
        }
        let full = ((b - a) / self.period).floor();
        let mut total = 0.0;
        if full >= 1.0 {
            total += full * self.integrate_span(self.offset(), self.offset() + self.period);
        }
        total + self.integrate_span(a + full * self.period, b)
    }

    fn integrate_span(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut cuts = vec![a];
        cuts.extend(self.breakpoints_in(a, b));
        cuts.push(b);
        cuts.windows(2)
            .map(|w| quadrature::adaptive(|s| self.kappa(s), w[0], w[1], 1e-13, 1e-12))
            .sum()
    }

    /// Zeros of `κ̇` on one period: sign changes, touching zeros and flat zero runs.
    pub fn critical_points(&self) -> CriticalPoints {
        let n = ROOT_GRID;
        let h = self.period / n as f64;
        let off = self.offset();
        let grid: Vec<f64> = (0..=n).map(|i| off + i as f64 * h).collect();
        let d: Vec<f64> = grid.iter().map(|&s| self.kappa_dot(s)).collect();
        let dmax = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut roots = Vec::new();
        if dmax == 0.0 {
            return CriticalPoints { points: roots, degenerate: true };
        }
        let mut degenerate = false;
        let mut i = 0;
        while i < n {
            if d[i] == 0.0 {
                let (root, width) = self.zero_run(grid[i], h);
                degenerate |= width > 2.0 * h;
                roots.push(root);
                while i < n && d[i] == 0.0 {
                    i += 1;
                }
                continue;
            }
            if d[i + 1] != 0.0 && d[i].signum() != d[i + 1].signum() {
                let (root, width) = self.bisect_root(grid[i], grid[i + 1], h);
                degenerate |= width > 2.0 * h;
                roots.push(root);
            } else if i > 0 {
                let a = d[i].abs();
                if a <= d[i - 1].abs() && a <= d[i + 1].abs() && a < 1e-6 * dmax && d[i - 1].signum() == d[i + 1].signum() {
                    if let Some(root) = self.touching_root(grid[i - 1], grid[i + 1], dmax, h) {
                        roots.push(root);
                    }
                }
            }
            i += 1;
        }
        for r in roots.iter_mut() {
            *r = off + (*r - off).rem_euclid(self.period);
        }
        roots.sort_by(f64::total_cmp);
        let merge = 1e-9 * self.period.max(1.0);
        roots.dedup_by(|a, b| (*a - *b).abs() < merge);
        if roots.len() > 1 && (roots[0] + self.period - roots[roots.len() - 1]).abs() < merge {
            roots.pop();
        }
        let m = roots.len();
        for k in 0..m {
            let next = if k + 1 < m { roots[k + 1] } else { roots[0] + self.period };
            if m > 1 && next - roots[k] < 2.0 * h {
                degenerate = true;
            }
        }
        CriticalPoints { points: roots, degenerate }
    }

    fn bisect_root(&self, mut lo: f64, mut hi: f64, h: f64) -> (f64, f64) {
        let mut flo = self.kappa_dot(lo);
        while hi - lo > ROOT_TOL {
            let mid = 0.5 * (lo + hi);
            let fm = self.kappa_dot(mid);
            if fm == 0.0 {
                return self.zero_run(mid, h);
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi), 0.0)
    }

    /// Midpoint and width of the run of exact zeros of `κ̇` containing `z`.
    fn zero_run(&self, z: f64, h: f64) -> (f64, f64) {
        let edge = |dir: f64| -> f64 {
            let mut step = h / 64.0;
            let mut inside = z;
            let mut outside = z + dir * step;
            while self.kappa_dot(outside) == 0.0 {
                inside = outside;
                step *= 2.0;
                if step > self.period {
                    return inside;
                }
                outside = z + dir * step;
            }
            while (outside - inside).abs() > 1e-13 * self.period.max(1.0) {
                let mid = 0.5 * (inside + outside);
                if self.kappa_dot(mid) == 0.0 {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
            inside
        };
        let (l, r) = (edge(-1.0), edge(1.0));
        (0.5 * (l + r), r - l)
    }

    /// Double root of `κ̇` near a tiny local minimum of `|κ̇|`.
    fn touching_root(&self, mut a: f64, mut b: f64, dmax: f64, h: f64) -> Option<f64> {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let f = |s: f64| self.kappa_dot(s).abs();
        let mut x1 = b - g * (b - a);
        let mut x2 = a + g * (b - a);
        let (mut f1, mut f2) = (f(x1), f(x2));
        while b - a > 1e-12 * self.period.max(1.0) {
            if f1 == 0.0 {
                return Some(self.zero_run(x1, h).0);
            }
            if f2 == 0.0 {
                return Some(self.zero_run(x2, h).0);
            }
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = f(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = f(x2);
            }
        }
        let x = 0.5 * (a + b);
        (f(x) <= 1e-10 * dmax).then_some(x)
    }

    /// `g(s) = f(s + c)`.
    pub fn shifted(&self, c: f64) -> CurvatureFunction {
        let pieces = self
            .pieces
            .iter()
            .map(|p| p.offset_by(c, p.start - c, p.end - c))
            .collect();
        self.derived(pieces)
    }

    /// Reverse traversal: `g(s) = -f(c - s)` on the same domain.
    pub fn reversed(&self) -> CurvatureFunction {
        let c = 2.0 * self.offset() + self.period;
        let pieces = self
            .pieces
            .iter()
            .rev()
            .map(|p| {
                let (shift, reversed) = if p.reversed { (p.shift - c, false) } else { (c + p.shift, true) };
                CurvaturePiece { start: c - p.end, end: c - p.start, shift, reversed, kind: p.kind.clone() }
            })
            .collect();
        self.derived(pieces)
    }

    fn derived(&self, pieces: Vec<CurvaturePiece>) -> CurvatureFunction {
        let scale = OnceLock::new();
        if let Some(&sc) = self.scale.get() {
            let _ = scale.set(sc);
        }
        CurvatureFunction { period: self.period, pieces, scale }
    }

    /// Pieces reproducing `f` on `[a, b)` relocated to start at `dest`.
    pub fn restrict(&self, a: f64, b: f64, dest: f64) -> Vec<CurvaturePiece> {
        let off = self.offset();
        let eps = 1e-12 * self.period.max(1.0);
        let mut out = Vec::new();
        let mut x = a;
        while b - x > eps {
            let k = ((x - off) / self.period).floor();
            let (i, _) = self.reduce(x);
            let p = &self.pieces[i];
            let mut seg_end = (p.end + k * self.period).min(b);
            if seg_end - x <= eps {
                // `x` sits on the far edge of a piece after rounding
                let q = &self.pieces[(i + 1) % self.pieces.len()];
                let kk = if i + 1 == self.pieces.len() { k + 1.0 } else { k };
                seg_end = (q.end + kk * self.period).min(b);
                out.push(q.offset_by(a - kk * self.period - dest, dest + (x - a), dest + (seg_end - a)));
            } else {
                out.push(p.offset_by(a - k * self.period - dest, dest + (x - a), dest + (seg_end - a)));
            }
            x = seg_end;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn trig(constant: f64, terms: &[(f64, f64, f64)]) -> PieceKind {
        PieceKind::Trig(TrigPoly {
            constant,
            terms: terms.iter().map(|&(freq, cos, sin)| TrigTerm { freq, cos, sin }).collect(),
        })
    }

    #[test]
    fn rejects_non_minimal_period() {
        let p = CurvaturePiece::new(0.0, 4.0 * PI, trig(0.0, &[(1.0, 0.0, 1.0)]));
        assert!(matches!(CurvatureFunction::new(4.0 * PI, vec![p]), Err(Error::NotMinimalPeriod { .. })));
    }

    #[test]
    fn rejects_constant_curvature() {
        let p = CurvaturePiece::new(0.0, 1.0, trig(2.0, &[]));
        assert!(matches!(CurvatureFunction::new(1.0, vec![p]), Err(Error::DegenerateFunction(_))));
    }

    #[test]
    fn rejects_gaps_between_pieces() {
        let a = CurvaturePiece::new(0.0, 1.0, trig(0.0, &[(2.0 * PI, 0.0, 1.0)]));
        let b = CurvaturePiece::new(1.5, 2.0, trig(0.0, &[(2.0 * PI, 0.0, 1.0)]));
        assert!(matches!(CurvatureFunction::new(2.0, vec![a, b]), Err(Error::InvalidInterval(_))));
    }

    #[test]
    fn rejects_jump_at_junction() {
        let a = CurvaturePiece::new(0.0, PI, trig(0.0, &[(1.0, 0.0, 1.0)]));
        let b = CurvaturePiece::new(PI, 2.0 * PI, trig(1.0, &[(1.0, 0.0, 1.0)]));
        assert!(matches!(CurvatureFunction::new(2.0 * PI, vec![a, b]), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn integral_of_trig_polynomial() {
        let f = CurvatureFunction::new(2.0 * PI, vec![CurvaturePiece::new(0.0, 2.0 * PI, trig(0.3, &[(1.0, 1.0, 2.0)]))]).unwrap();
        assert!((f.integrate(0.0, 2.0 * PI) - 0.6 * PI).abs() < 1e-12);
        let want = 0.3 * 7.5 + (7.5f64).sin() + 0.25f64.sin() + 2.0 * (0.25f64.cos() - 7.5f64.cos()) + 0.3 * 0.25;
        assert!((f.integrate(-0.25, 7.5) - want).abs() < 1e-11);
    }

    #[test]
    fn critical_points_of_sine() {
        let f = CurvatureFunction::new(2.0 * PI, vec![CurvaturePiece::new(0.0, 2.0 * PI, trig(0.0, &[(1.0, 0.0, 1.0)]))]).unwrap();
        let cp = f.critical_points();
        assert!(!cp.degenerate);
        assert_eq!(cp.points.len(), 2);
        assert!((cp.points[0] - PI / 2.0).abs() < 1e-9);
        assert!((cp.points[1] - 1.5 * PI).abs() < 1e-9);
    }

    #[test]
    fn shifted_and_reversed_evaluate_consistently() {
        let f = CurvatureFunction::new(2.0 * PI, vec![CurvaturePiece::new(0.0, 2.0 * PI, trig(0.2, &[(1.0, 0.5, 1.0), (3.0, -0.5, 0.0)]))]).unwrap();
        let g = f.shifted(1.3);
        let r = f.reversed();
        for i in 0..100 {
            let s = -7.0 + 0.17 * i as f64;
            let (k, kd) = f.eval(s + 1.3);
            let (gk, gkd) = g.eval(s);
            assert!((k - gk).abs() < 1e-12 && (kd - gkd).abs() < 1e-12);
            let (k, kd) = f.eval(-s);
            let (rk, rkd) = r.eval(s);
            assert!((rk + k).abs() < 1e-12 && (rkd - kd).abs() < 1e-12, "s={s}");
        }
        let rr = r.reversed();
        for i in 0..50 {
            let s = 0.3 * i as f64;
            assert!((rr.kappa(s) - f.kappa(s)).abs() < 1e-12);
        }
    }

    #[test]
    fn restrict_relocates_across_the_period() {
        let f = CurvatureFunction::new(2.0 * PI, vec![
            CurvaturePiece::new(0.0, 1.0, trig(0.0, &[(1.0, 1.0, 0.0)])),
            CurvaturePiece::new(1.0, 2.0 * PI, trig(0.0, &[(1.0, 1.0, 0.0)])),
        ])
        .unwrap();
        let pieces = f.restrict(5.0, 8.0, 10.0);
        assert_eq!(pieces.len(), 3);
        for p in &pieces {
            for j in 0..10 {
                let s = p.start + (p.end - p.start) * j as f64 / 10.0;
                assert!((p.eval(s).0 - f.kappa(s - 10.0 + 5.0)).abs() < 1e-12);
            }
        }
        assert!((pieces[0].start - 10.0).abs() < 1e-12 && (pieces[2].end - 13.0).abs() < 1e-12);
    }
}
