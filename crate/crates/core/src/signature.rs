//! Euclidean signatures `s ↦ (κ(s), κ̇(s))` and their self-intersections.

use serde::Serialize;

use crate::curvature::CurvatureFunction;
use crate::curve::{bbox_diag, PlaneCurve, Vec2};
use crate::error::{Error, Result};
use crate::polyline::{self, Segment};

/// Uniform samples per period before critical points are inserted.
pub const DEFAULT_SAMPLES: usize = 8192;
/// Crossing points closer than this fraction of the bounding diagonal merge.
pub const CLUSTER_REL: f64 = 1e-4;
/// `|κ̇|` below this fraction of its maximum is treated as zero on sampled curves.
pub const NOISE_REL: f64 = 1e-9;
/// Crossings at a smaller angle (radians) are reported as tangential.
pub const TANGENTIAL_ANGLE: f64 = 1e-3;

/// A sampled signature trace. Periodic traces cover `[offset, offset + period)`.
#[derive(Clone, Debug)]
pub struct Signature {
    pub s: Vec<f64>,
    pub kappa: Vec<f64>,
    pub kappa_dot: Vec<f64>,
    /// Trace indices of vertices of the curve (`κ̇ = 0`).
    pub critical: Vec<usize>,
    pub period: f64,
    pub periodic: bool,
    /// Vertices closer than the sampling resolution were found.
    pub degenerate: bool,
    source: Option<CurvatureFunction>,
}

/// Signature of a curvature function over one minimal period.
pub fn signature_of(f: &CurvatureFunction, samples: usize) -> Result<Signature> {
    if f.scale().kappa_dot == 0.0 {
        return Err(Error::DegenerateSignature("constant curvature maps to a single point".into()));
    }
    let off = f.offset();
    let ell = f.period();
    let n = samples.max(16);
    let h = ell / n as f64;
    let mut s: Vec<(f64, bool)> = (0..n).map(|i| (off + i as f64 * h, false)).collect();
    let cp = f.critical_points();
    s.extend(cp.points.iter().map(|&p| (p, true)));
    // extremes of κ̇, so the trace reaches its vertical extent
    let kdd: Vec<f64> = (0..=n).map(|i| f.kappa_ddot(off + i as f64 * h)).collect();
    for i in 0..n {
        if kdd[i] != 0.0 && kdd[i + 1] != 0.0 && kdd[i].signum() != kdd[i + 1].signum() {
            let (mut lo, mut hi) = (off + i as f64 * h, off + (i + 1) as f64 * h);
            let slo = kdd[i].signum();
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                let v = f.kappa_ddot(mid);
                if v == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if v.signum() == slo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let x = 0.5 * (lo + hi);
            if x < off + ell {
                s.push((x, false));
            }
        }
    }
    s.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    let tol = 1e-12 * ell.max(1.0);
    let mut merged: Vec<(f64, bool)> = Vec::with_capacity(s.len());
    for (x, c) in s {
        match merged.last_mut() {
            Some(last) if (x - last.0).abs() <= tol => {
                if c && !last.1 {
                    *last = (x, true);
                }
            }
            _ => merged.push((x, c)),
        }
    }
    let mut sig = Signature {
        s: Vec::with_capacity(merged.len()),
        kappa: Vec::with_capacity(merged.len()),
        kappa_dot: Vec::with_capacity(merged.len()),
        critical: Vec::new(),
        period: ell,
        periodic: true,
        degenerate: cp.degenerate,
        source: Some(f.clone()),
    };
    for (i, (x, c)) in merged.into_iter().enumerate() {
        let (k, kd) = f.eval(x);
        sig.s.push(x);
        sig.kappa.push(k);
        sig.kappa_dot.push(if c { 0.0 } else { kd });
        if c {
            sig.critical.push(i);
        }
    }
    Ok(sig)
}

/// Signature of a sampled curve; `s` is cumulative arc length.
pub fn signature_of_curve(c: &PlaneCurve) -> Result<Signature> {
    let cum = c.cumulative_length();
    let total = *cum.last().unwrap();
    let mut n = c.len();
    if c.is_closed() {
        n -= 1;
    }
    let mut vals: Vec<(f64, f64)> = Vec::with_capacity(n);
    for i in 0..n {
        let (k, kd) = c.curvature_at(i);
        if !(k.is_finite() && kd.is_finite()) {
            return Err(Error::NonRegularCurve { index: i });
        }
        vals.push((k, kd));
    }
    let mut sig = Signature {
        s: Vec::new(),
        kappa: Vec::new(),
        kappa_dot: Vec::new(),
        critical: Vec::new(),
        period: total,
        periodic: c.is_closed(),
        degenerate: false,
        source: None,
    };
    // κ̇ below the noise floor counts as zero; each zero run becomes one vertex
    let floor = NOISE_REL * vals.iter().map(|v| v.1.abs()).fold(0.0, f64::max);
    let sign = |i: usize| -> i8 {
        let d = vals[i].1;
        if d.abs() <= floor {
            0
        } else if d > 0.0 {
            1
        } else {
            -1
        }
    };
    let s_of = |i: usize| if i >= n { cum[i - n] + total } else { cum[i] };
    let mut marks: Vec<(f64, f64)> = Vec::new();
    let wrap = c.is_closed();
    // start the scan at a sample outside any zero run so runs are not split
    let first = (0..n).find(|&i| sign(i) != 0).unwrap_or(0);
    let span = if wrap { n } else { n - 1 - first };
    let mut k = 0;
    while k < span {
        let i = first + k;
        let (a, b) = (i % n, (i + 1) % n);
        if !wrap && i + 1 >= n {
            break;
        }
        if sign(b) == 0 && sign(a) != 0 {
            let mut j = k + 1;
            while j < span + 1 && sign((first + j) % n) == 0 && (wrap || first + j < n - 1) {
                j += 1;
            }
            let (lo, hi) = (first + k + 1, first + j - 1);
            let mid = 0.5 * (s_of(lo) + s_of(hi));
            let kap = 0.5 * (vals[lo % n].0 + vals[hi % n].0);
            marks.push((mid, kap));
            k = j;
            continue;
        }
        if sign(a) != 0 && sign(b) != 0 && sign(a) != sign(b) {
            let (kd0, kd1) = (vals[a].1, vals[b].1);
            let w = kd0 / (kd0 - kd1);
            marks.push((s_of(i) + w * (s_of(i + 1) - s_of(i)), vals[a].0 + w * (vals[b].0 - vals[a].0)));
        }
        k += 1;
    }
    for m in &mut marks {
        if wrap && m.0 >= total {
            m.0 -= total;
        }
    }
    marks.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut mi = 0;
    for i in 0..n {
        while mi < marks.len() && marks[mi].0 < cum[i] {
            sig.s.push(marks[mi].0);
            sig.kappa.push(marks[mi].1);
            sig.kappa_dot.push(0.0);
            sig.critical.push(sig.s.len() - 1);
            mi += 1;
        }
        if mi < marks.len() && marks[mi].0 == cum[i] {
            mi += 1;
            sig.s.push(cum[i]);
            sig.kappa.push(vals[i].0);
            sig.kappa_dot.push(0.0);
            sig.critical.push(sig.s.len() - 1);
            continue;
        }
        sig.s.push(cum[i]);
        sig.kappa.push(vals[i].0);
        sig.kappa_dot.push(if sign(i) == 0 { 0.0 } else { vals[i].1 });
    }
    for m in &marks[mi..] {
        sig.s.push(m.0);
        sig.kappa.push(m.1);
        sig.kappa_dot.push(0.0);
        sig.critical.push(sig.s.len() - 1);
    }
    let crit_s: Vec<f64> = sig.critical.iter().map(|&i| sig.s[i]).collect();
    let spacing = total / n as f64;
    sig.degenerate = crit_s.windows(2).any(|w| w[1] - w[0] < 2.0 * spacing);
    Ok(sig)
}

impl Signature {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn points(&self) -> Vec<Vec2> {
        self.kappa.iter().zip(&self.kappa_dot).map(|(&k, &d)| [k, d]).collect()
    }

    pub fn diag(&self) -> f64 {
        bbox_diag(&self.points())
    }

    pub fn source(&self) -> Option<&CurvatureFunction> {
        self.source.as_ref()
    }

    pub fn offset(&self) -> f64 {
        self.s[0]
    }

    /// `σ(s)`, exact when a curvature function is attached, otherwise interpolated.
    pub fn eval_at(&self, s: f64) -> Vec2 {
        if let Some(f) = &self.source {
            let (k, kd) = f.eval(s);
            return [k, kd];
        }
        let n = self.s.len();
        let off = self.s[0];
        let x = if self.periodic { off + (s - off).rem_euclid(self.period) } else { s.clamp(off, self.s[n - 1]) };
        let i = self.s.partition_point(|&v| v <= x);
        if i == 0 {
            return [self.kappa[0], self.kappa_dot[0]];
        }
        let (a, b, sb) = if i >= n {
            if !self.periodic {
                return [self.kappa[n - 1], self.kappa_dot[n - 1]];
            }
            (n - 1, 0, off + self.period)
        } else {
            (i - 1, i, self.s[i])
        };
        let w = (x - self.s[a]) / (sb - self.s[a]);
        [
            self.kappa[a] + w * (self.kappa[b] - self.kappa[a]),
            self.kappa_dot[a] + w * (self.kappa_dot[b] - self.kappa_dot[a]),
        ]
    }

    /// Parameter of trace index `k`, where indices past the end wrap around.
    fn s_at(&self, k: usize) -> f64 {
        let n = self.s.len();
        self.s[k % n] + (k / n) as f64 * self.period
    }

    fn point_at(&self, k: usize) -> Vec2 {
        let n = self.s.len();
        [self.kappa[k % n], self.kappa_dot[k % n]]
    }

    fn normalize(&self, s: f64) -> f64 {
        if self.periodic {
            let off = self.s[0];
            off + (s - off).rem_euclid(self.period)
        } else {
            s
        }
    }
}

/// Symmetric Hausdorff distance between two signature traces.
pub fn signature_distance(a: &Signature, b: &Signature) -> f64 {
    polyline::hausdorff(&a.points(), a.periodic, &b.points(), b.periodic)
}

/// A self-intersection point of the signature with all its parameter preimages.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Vertex {
    pub id: usize,
    pub location: Vec2,
    /// Sorted preimages in one period.
    pub preimages: Vec<f64>,
    /// Contact where branches meet tangentially (always the case on `κ̇ = 0`).
    pub tangential: bool,
}

#[derive(Clone, Debug, Default)]
pub struct IntersectionReport {
    pub vertices: Vec<Vertex>,
    pub warnings: Vec<String>,
}

/// Trace indices `[i0, i1]` of a monotone arc between consecutive vertices of the curve.
#[derive(Clone, Copy, Debug)]
struct MonotoneArc {
    i0: usize,
    i1: usize,
}

struct Candidate {
    point: Vec2,
    preimages: Vec<f64>,
    axis: bool,
    tangential: bool,
}

pub fn self_intersections(sig: &Signature) -> Vec<Vertex> {
    self_intersections_report(sig).vertices
}

/// Self-intersections of the trace.
///
/// The trace is cut at vertices of the curve into arcs that are graphs over
/// `κ`. Arcs traversed more than once in a period are collapsed to one
/// representative, then representatives are crossed against each other on a
/// spatial hash. Points on the `κ̇ = 0` axis are reached only at curve
/// vertices, where every branch is vertical, so those contacts are found by
/// matching critical values instead.
pub fn self_intersections_report(sig: &Signature) -> IntersectionReport {
    self_intersections_with(sig, CLUSTER_REL)
}

/// As [`self_intersections_report`] with the clustering radius `cluster_rel · diag`.
pub fn self_intersections_with(sig: &Signature, cluster_rel: f64) -> IntersectionReport {
    let mut report = IntersectionReport::default();
    let n = sig.len();
    if n < 4 {
        return report;
    }
    let diag = sig.diag();
    let eps = cluster_rel * diag;
    let exact = sig.source.is_some();
    let step = sig.period / n as f64;

    let arcs = monotone_arcs(sig);
    let arc_len = |a: &MonotoneArc| sig.s_at(a.i1) - sig.s_at(a.i0);
    let len_tol = if exact { 1e-7 * sig.period.max(1.0) } else { 4.0 * step };
    let same_tol = if exact { 1e-7 * diag } else { eps };
    let same = |a: &MonotoneArc, b: &MonotoneArc| {
        if exact {
            same_arc(sig, a, b, same_tol)
        } else {
            same_arc_sampled(sig, a, b, same_tol)
        }
    };
    let mut class = vec![usize::MAX; arcs.len()];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..arcs.len() {
        for &r in &reps {
            if (arc_len(&arcs[i]) - arc_len(&arcs[r])).abs() <= len_tol && same(&arcs[i], &arcs[r]) {
                class[i] = class[r];
                break;
            }
        }
        if class[i] == usize::MAX {
            class[i] = reps.len();
            reps.push(i);
        }
    }
    let members = |c: usize| -> Vec<usize> { (0..arcs.len()).filter(|&i| class[i] == c).collect() };

    let mut cands: Vec<Candidate> = Vec::new();

    // transversal crossings between distinct representative arcs
    let mut segs = Vec::new();
    let mut seg_arc = Vec::new();
    let mut seg_idx = Vec::new();
    for (c, &r) in reps.iter().enumerate() {
        let a = arcs[r];
        for k in a.i0..a.i1 {
            segs.push(Segment { a: sig.point_at(k), b: sig.point_at(k + 1) });
            seg_arc.push(c);
            seg_idx.push(k);
        }
    }
    let crossings = polyline::crossings(&segs, |i, j| seg_arc[i] == seg_arc[j]);
    for x in crossings {
        let (ka, kb) = (seg_idx[x.i], seg_idx[x.j]);
        let mut sa = sig.s_at(ka) + x.ti * (sig.s_at(ka + 1) - sig.s_at(ka));
        let mut sb = sig.s_at(kb) + x.tj * (sig.s_at(kb + 1) - sig.s_at(kb));
        let mut point = x.point;
        let mut angle = x.angle;
        let (ca, cb) = (seg_arc[x.i], seg_arc[x.j]);
        let (ra, rb) = (arcs[reps[ca]], arcs[reps[cb]]);
        if !exact && meets_at_ends(sig, (ra, ka), (rb, kb), eps) {
            continue;
        }
        if let Some(f) = &sig.source {
            let wa = (sig.s_at(ra.i0), sig.s_at(ra.i1));
            let wb = (sig.s_at(rb.i0), sig.s_at(rb.i1));
            match confirm_crossing(f, (sa, wa), (sb, wb), step) {
                Some((xa, xb, ang)) => {
                    sa = xa;
                    sb = xb;
                    angle = ang;
                    let (k, kd) = f.eval(sa);
                    point = [k, kd];
                }
                None => continue,
            }
        }
        let tangential = angle < TANGENTIAL_ANGLE;
        let (oa, ob) = (sa - sig.s_at(ra.i0), sb - sig.s_at(rb.i0));
        let mut pre = Vec::new();
        for m in members(ca) {
            pre.push(sig.normalize(sig.s_at(arcs[m].i0) + oa));
        }
        for m in members(cb) {
            pre.push(sig.normalize(sig.s_at(arcs[m].i0) + ob));
        }
        cands.push(Candidate { point, preimages: pre, axis: false, tangential });
    }

    // tangential contacts on the κ̇ = 0 axis
    let axis_tol = if exact { 1e-8 * diag } else { eps };
    let mut crit: Vec<(f64, f64, Option<usize>, Option<usize>)> = Vec::new();
    for &ci in &sig.critical {
        let incoming = arcs.iter().position(|a| a.i1 % n == ci).map(|a| class[a]);
        let outgoing = arcs.iter().position(|a| a.i0 % n == ci).map(|a| class[a]);
        crit.push((sig.kappa[ci], sig.s[ci], incoming, outgoing));
    }
    crit.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut g0 = 0;
    while g0 < crit.len() {
        let mut g1 = g0 + 1;
        while g1 < crit.len() && crit[g1].0 - crit[g1 - 1].0 <= axis_tol {
            g1 += 1;
        }
        let group = &crit[g0..g1];
        let mut kinds: Vec<(Option<usize>, Option<usize>)> = group.iter().map(|c| (c.2, c.3)).collect();
        kinds.sort();
        kinds.dedup();
        if group.len() >= 2 && kinds.len() >= 2 {
            let k = group.iter().map(|c| c.0).sum::<f64>() / group.len() as f64;
            cands.push(Candidate {
                point: [k, 0.0],
                preimages: group.iter().map(|c| c.1).collect(),
                axis: true,
                tangential: true,
            });
        }
        g0 = g1;
    }

    // single-link clustering of candidate points
    let m = cands.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..m {
        for j in i + 1..m {
            let d = (cands[i].point[0] - cands[j].point[0]).hypot(cands[i].point[1] - cands[j].point[1]);
            if d <= eps {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut roots: Vec<usize> = (0..m).map(|i| find(&mut parent, i)).collect();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for i in 0..m {
        let r = roots[i];
        match seen.iter().position(|&x| x == r) {
            Some(p) => clusters[p].push(i),
            None => {
                seen.push(r);
                clusters.push(vec![i]);
            }
        }
    }
    roots.clear();

    let mut vertices = Vec::new();
    for cl in clusters {
        let axis: Vec<&Candidate> = cl.iter().map(|&i| &cands[i]).filter(|c| c.axis).collect();
        let (location, mut pre) = if !axis.is_empty() {
            let k = axis.iter().map(|c| c.point[0]).sum::<f64>() / axis.len() as f64;
            ([k, 0.0], axis.iter().flat_map(|c| c.preimages.iter().copied()).collect::<Vec<_>>())
        } else {
            let cnt = cl.len() as f64;
            let loc = [
                cl.iter().map(|&i| cands[i].point[0]).sum::<f64>() / cnt,
                cl.iter().map(|&i| cands[i].point[1]).sum::<f64>() / cnt,
            ];
            (loc, cl.iter().flat_map(|&i| cands[i].preimages.iter().copied()).collect())
        };
        pre.sort_by(f64::total_cmp);
        let pre = merge_passes(sig, pre, location, 2.0 * eps);
        let tangential = cl.iter().any(|&i| cands[i].tangential);
        if tangential && axis.is_empty() {
            report.warnings.push(format!(
                "tangential intersection near ({:.6}, {:.6})",
                location[0], location[1]
            ));
        }
        vertices.push(Vertex { id: 0, location, preimages: pre, tangential });
    }
    vertices.sort_by(|a, b| a.preimages[0].total_cmp(&b.preimages[0]));
    for (i, v) in vertices.iter_mut().enumerate() {
        v.id = i;
    }
    report.vertices = vertices;
    report
}

/// Arcs between consecutive critical indices (wrapping for periodic traces).
fn monotone_arcs(sig: &Signature) -> Vec<MonotoneArc> {
    let n = sig.len();
    let c = &sig.critical;
    let mut arcs = Vec::new();
    if c.is_empty() {
        if sig.periodic {
            arcs.push(MonotoneArc { i0: 0, i1: n });
        } else {
            arcs.push(MonotoneArc { i0: 0, i1: n - 1 });
        }
        return arcs;
    }
    if !sig.periodic && c[0] > 0 {
        arcs.push(MonotoneArc { i0: 0, i1: c[0] });
    }
    for w in c.windows(2) {
        arcs.push(MonotoneArc { i0: w[0], i1: w[1] });
    }
    let last = *c.last().unwrap();
    if sig.periodic {
        arcs.push(MonotoneArc { i0: last, i1: c[0] + n });
    } else if last < n - 1 {
        arcs.push(MonotoneArc { i0: last, i1: n - 1 });
    }
    arcs
}

fn same_arc(sig: &Signature, a: &MonotoneArc, b: &MonotoneArc, tol: f64) -> bool {
    const K: usize = 16;
    let (a0, a1) = (sig.s_at(a.i0), sig.s_at(a.i1));
    let (b0, b1) = (sig.s_at(b.i0), sig.s_at(b.i1));
    let pa = sig.point_at(a.i0);
    let pb = sig.point_at(b.i0);
    let qa = sig.point_at(a.i1);
    let qb = sig.point_at(b.i1);
    let d = |p: Vec2, q: Vec2| (p[0] - q[0]).hypot(p[1] - q[1]);
    if d(pa, pb) > tol || d(qa, qb) > tol {
        return false;
    }
    (1..K).all(|k| {
        let w = k as f64 / K as f64;
        d(sig.eval_at(a0 + w * (a1 - a0)), sig.eval_at(b0 + w * (b1 - b0))) <= tol
    })
}

/// Re-checks a polyline crossing on successively finer exact samples of both
/// arcs. Returns `None` when the crossing was an artifact of the chords.
fn confirm_crossing(
    f: &CurvatureFunction,
    (mut sa, arc_a): (f64, (f64, f64)),
    (mut sb, arc_b): (f64, (f64, f64)),
    step: f64,
) -> Option<(f64, f64, f64)> {
    const SUB: usize = 32;
    let mut w = 2.0 * step;
    let mut angle = 0.0;
    for _ in 0..8 {
        let win = |c: f64, (lo, hi): (f64, f64)| ((c - w).max(lo), (c + w).min(hi));
        let (a0, a1) = win(sa, arc_a);
        let (b0, b1) = win(sb, arc_b);
        let grid = |lo: f64, hi: f64| -> Vec<(f64, Vec2)> {
            (0..=SUB)
                .map(|k| {
                    let s = lo + (hi - lo) * k as f64 / SUB as f64;
                    let (kap, kd) = f.eval(s);
                    (s, [kap, kd])
                })
                .collect()
        };
        let (ga, gb) = (grid(a0, a1), grid(b0, b1));
        let mut best: Option<(f64, f64, f64, f64)> = None;
        for p in ga.windows(2) {
            for q in gb.windows(2) {
                let sp = Segment { a: p[0].1, b: p[1].1 };
                let sq = Segment { a: q[0].1, b: q[1].1 };
                if let Some((tp, tq, _, ang)) = polyline::segment_intersection(&sp, &sq) {
                    let xa = p[0].0 + tp * (p[1].0 - p[0].0);
                    let xb = q[0].0 + tq * (q[1].0 - q[0].0);
                    let d = (xa - sa).abs() + (xb - sb).abs();
                    if best.is_none_or(|b| d < b.3) {
                        best = Some((xa, xb, ang, d));
                    }
                }
            }
        }
        let (xa, xb, ang, _) = best?;
        sa = xa;
        sb = xb;
        angle = ang;
        if let Some((ra, rb)) = refine_crossing(f, sa, sb, w) {
            return Some((ra, rb, angle));
        }
        w = 2.0 * (a1 - a0).max(b1 - b0) / SUB as f64;
    }
    Some((sa, sb, angle))
}

/// Chords next to a common endpoint of two arcs may cross without the arcs doing so.
fn meets_at_ends(sig: &Signature, (a, ka): (MonotoneArc, usize), (b, kb): (MonotoneArc, usize), eps: f64) -> bool {
    let ends = |arc: MonotoneArc, k: usize| -> Vec<usize> {
        let mut v = Vec::new();
        if k < arc.i0 + 2 {
            v.push(arc.i0);
        }
        if k + 3 > arc.i1 {
            v.push(arc.i1);
        }
        v
    };
    let seg = |k: usize| {
        let (p, q) = (sig.point_at(k), sig.point_at(k + 1));
        (p[0] - q[0]).hypot(p[1] - q[1])
    };
    let reach = 2.0 * seg(ka).max(seg(kb)) + eps;
    ends(a, ka).into_iter().any(|ea| {
        ends(b, kb).into_iter().any(|eb| {
            let (p, q) = (sig.point_at(ea), sig.point_at(eb));
            (p[0] - q[0]).hypot(p[1] - q[1]) <= reach
        })
    })
}

/// Arcs of a sampled trace coincide when every sample of each lies within
/// `tol` of the other's polyline. Endpoints may differ by a sample.
fn same_arc_sampled(sig: &Signature, a: &MonotoneArc, b: &MonotoneArc, tol: f64) -> bool {
    let near = |x: &MonotoneArc, y: &MonotoneArc| {
        let stride = ((x.i1 - x.i0) / 32).max(1);
        (x.i0..=x.i1).step_by(stride).chain(std::iter::once(x.i1)).all(|k| {
            let p = sig.point_at(k);
            (y.i0..y.i1.max(y.i0 + 1)).any(|j| {
                polyline::point_segment_distance(p, &Segment { a: sig.point_at(j), b: sig.point_at(j + 1) }) <= tol
            })
        })
    };
    near(a, b) && near(b, a)
}

/// Newton iteration on `σ(x) = σ(y)`.
fn refine_crossing(f: &CurvatureFunction, x0: f64, y0: f64, step: f64) -> Option<(f64, f64)> {
    let (mut x, mut y) = (x0, y0);
    let sc = f.scale();
    for _ in 0..30 {
        let (kx, dx) = f.eval(x);
        let (ky, dy) = f.eval(y);
        let (fx, fy) = (kx - ky, dx - dy);
        if fx.abs() <= 1e-14 * sc.kappa && fy.abs() <= 1e-14 * sc.kappa_dot {
            break;
        }
        let (ddx, ddy) = (f.kappa_ddot(x), f.kappa_ddot(y));
        // J = [[dx, -dy], [ddx, -ddy]]
        let det = -dx * ddy + dy * ddx;
        if det.abs() < f64::MIN_POSITIVE * 1e10 {
            return None;
        }
        let ux = (-ddy * fx + dy * fy) / det;
        let uy = (-ddx * fx + dx * fy) / det;
        x -= ux;
        y -= uy;
        if (x - x0).abs() > 4.0 * step || (y - y0).abs() > 4.0 * step {
            return None;
        }
    }
    let (kx, dx) = f.eval(x);
    let (ky, dy) = f.eval(y);
    ((kx - ky).abs() <= 1e-9 * sc.kappa && (dx - dy).abs() <= 1e-9 * sc.kappa_dot).then_some((x, y))
}

/// Keeps one preimage per pass of the trace through the ball around `loc`.
fn merge_passes(sig: &Signature, pre: Vec<f64>, loc: Vec2, radius: f64) -> Vec<f64> {
    if pre.len() < 2 {
        return pre;
    }
    let dist = |s: f64| {
        let p = sig.eval_at(s);
        (p[0] - loc[0]).hypot(p[1] - loc[1])
    };
    let dedup = 1e-9 * sig.period.max(1.0);
    let mut out: Vec<f64> = Vec::new();
    for s in pre {
        if let Some(&last) = out.last() {
            if s - last <= dedup || stays_near(sig, last, s, &dist, radius) {
                if dist(s) < dist(last) {
                    *out.last_mut().unwrap() = s;
                }
                continue;
            }
        }
        out.push(s);
    }
    if sig.periodic && out.len() > 1 {
        let (first, last) = (out[0], *out.last().unwrap());
        if first + sig.period - last <= dedup || stays_near(sig, last, first + sig.period, &dist, radius) {
            let keep = if dist(last) < dist(first) { last } else { first };
            out.pop();
            out[0] = keep;
            out.sort_by(f64::total_cmp);
        }
    }
    out
}

fn stays_near<F: Fn(f64) -> f64>(sig: &Signature, a: f64, b: f64, dist: &F, radius: f64) -> bool {
    let step = sig.period / sig.len() as f64;
    let k = ((b - a) / (0.25 * step)).ceil().max(1.0) as usize;
    if k > 100_000 {
        return false;
    }
    (1..k).all(|i| dist(a + (b - a) * i as f64 / k as f64) <= radius)
}

/// Sign changes of `κ̇` along a sampled curve; flags vertices that crowd below resolution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexScan {
    pub vertices: Vec<f64>,
    pub degenerate: bool,
    /// Parameters where crowding was detected.
    pub crowded_at: Vec<f64>,
}

pub fn vertex_scan(c: &PlaneCurve) -> VertexScan {
    let smp = c.samples();
    let kd: Vec<f64> = (0..c.len()).map(|i| c.curvature_at(i).1).collect();
    let mut vertices = Vec::new();
    for i in 0..c.len() - 1 {
        if kd[i] == 0.0 {
            vertices.push(smp[i].t);
        } else if kd[i + 1] != 0.0 && kd[i].signum() != kd[i + 1].signum() {
            let w = kd[i] / (kd[i] - kd[i + 1]);
            vertices.push(smp[i].t + w * (smp[i + 1].t - smp[i].t));
        }
    }
    let floor = 2.0 * (smp[smp.len() - 1].t - smp[0].t) / (c.len() - 1) as f64;
    let crowded_at: Vec<f64> = vertices.windows(2).filter(|w| w[1] - w[0] < floor).map(|w| 0.5 * (w[0] + w[1])).collect();
    VertexScan { degenerate: !crowded_at.is_empty(), vertices, crowded_at }
}

/// Writes `s,kappa,kappa_dot` rows.
pub fn to_csv(sig: &Signature) -> String {
    use crate::format::fmt9;
    let mut out = String::from("s,kappa,kappa_dot\n");
    for i in 0..sig.len() {
        out.push_str(&format!("{},{},{}\n", fmt9(sig.s[i]), fmt9(sig.kappa[i]), fmt9(sig.kappa_dot[i])));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn simple_signature_has_no_vertices() {
        let sig = signature_of(&gallery::simple_sig_kappa(), 4096).unwrap();
        assert!(self_intersections(&sig).is_empty());
        for i in 0..sig.len() {
            let r = (sig.kappa[i] - 0.2).powi(2) + sig.kappa_dot[i].powi(2);
            assert!((r - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_runs_clockwise() {
        let sig = signature_of(&gallery::mn_kappa(), 2048).unwrap();
        for i in 0..sig.len() - 1 {
            if sig.kappa_dot[i] > 0.0 && sig.kappa_dot[i + 1] > 0.0 {
                assert!(sig.kappa[i + 1] >= sig.kappa[i]);
            }
            if sig.kappa_dot[i] < 0.0 && sig.kappa_dot[i + 1] < 0.0 {
                assert!(sig.kappa[i + 1] <= sig.kappa[i]);
            }
        }
    }

    #[test]
    fn bump_vertex_is_the_origin() {
        let sig = signature_of(&gallery::bump_kappa(1), DEFAULT_SAMPLES).unwrap();
        let rep = self_intersections_report(&sig);
        assert_eq!(rep.vertices.len(), 1, "{:?}", rep.vertices);
        let v = &rep.vertices[0];
        assert!(v.location[0].abs() < 1e-12 && v.location[1] == 0.0);
        assert_eq!(v.preimages.len(), 4);
        for (i, p) in v.preimages.iter().enumerate() {
            assert!((p - 2.0 * i as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn degenerate_curve_is_flagged() {
        let c = gallery::degenerate_curve(4096).unwrap();
        let scan = vertex_scan(&c);
        assert!(scan.degenerate);
        assert!(scan.crowded_at.iter().all(|t| t.abs() < 0.02));
    }
}
