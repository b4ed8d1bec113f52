//! Polyline geometry: segment crossings on a spatial hash, Hausdorff and
//! discrete Fréchet distances.

use std::collections::HashMap;

use crate::curve::Vec2;

#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub a: Vec2,
    pub b: Vec2,
}

/// A proper crossing of segments `i` and `j` at `a + ti (b - a)`.
#[derive(Clone, Copy, Debug)]
pub struct Crossing {
    pub i: usize,
    pub j: usize,
    pub ti: f64,
    pub tj: f64,
    pub point: Vec2,
    /// Acute angle between the segments, in radians.
    pub angle: f64,
}

fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn len(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

/// Proper intersection; touching endpoints and collinear overlaps are ignored.
pub fn segment_intersection(s: &Segment, t: &Segment) -> Option<(f64, f64, Vec2, f64)> {
    let r = sub(s.b, s.a);
    let q = sub(t.b, t.a);
    let o1 = cross(r, sub(t.a, s.a));
    let o2 = cross(r, sub(t.b, s.a));
    let o3 = cross(q, sub(s.a, t.a));
    let o4 = cross(q, sub(s.b, t.a));
    if !(o1 * o2 < 0.0 && o3 * o4 < 0.0) {
        return None;
    }
    let den = cross(r, q);
    let ti = cross(sub(t.a, s.a), q) / den;
    let tj = cross(sub(t.a, s.a), r) / den;
    let p = [s.a[0] + ti * r[0], s.a[1] + ti * r[1]];
    let sin = (den / (len(r) * len(q))).abs().min(1.0);
    Some((ti.clamp(0.0, 1.0), tj.clamp(0.0, 1.0), p, sin.asin()))
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mid = v.len() / 2;
    v.select_nth_unstable_by(mid, f64::total_cmp);
    v[mid]
}

/// All proper crossings among `segs`, skipping pairs for which `skip(i, j)`
/// holds. Candidates come from a uniform grid with cells twice the median
/// segment length.
pub fn crossings<F: Fn(usize, usize) -> bool + Sync>(segs: &[Segment], skip: F) -> Vec<Crossing> {
    let lens: Vec<f64> = segs.iter().map(|s| len(sub(s.b, s.a))).filter(|&l| l > 0.0).collect();
    if lens.is_empty() {
        return Vec::new();
    }
    let mut cell = 2.0 * median(lens.clone());
    if !(cell > 0.0) {
        cell = lens.iter().sum::<f64>() / lens.len() as f64;
    }
    let key = |p: Vec2| ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    const MAX_CELLS: i64 = 4096;
    let mut oversized = Vec::new();
    for (idx, s) in segs.iter().enumerate() {
        if s.a == s.b {
            continue;
        }
        let (x0, y0) = key([s.a[0].min(s.b[0]), s.a[1].min(s.b[1])]);
        let (x1, y1) = key([s.a[0].max(s.b[0]), s.a[1].max(s.b[1])]);
        if (x1 - x0 + 1) * (y1 - y0 + 1) > MAX_CELLS {
            oversized.push(idx);
            continue;
        }
        for x in x0..=x1 {
            for y in y0..=y1 {
                grid.entry((x, y)).or_default().push(idx);
            }
        }
    }
    let mut out = Vec::new();
    let mut cells: Vec<_> = grid.into_iter().collect();
    cells.sort_by_key(|(k, _)| *k);
    for (k, members) in &cells {
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                let (i, j) = if i < j { (i, j) } else { (j, i) };
                if skip(i, j) {
                    continue;
                }
                if let Some((ti, tj, p, angle)) = segment_intersection(&segs[i], &segs[j]) {
                    if key(p) == *k {
                        out.push(Crossing { i, j, ti, tj, point: p, angle });
                    }
                }
            }
        }
    }
    for &i in &oversized {
        for j in 0..segs.len() {
            if i == j || (oversized.contains(&j) && j < i) || segs[j].a == segs[j].b {
                continue;
            }
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            if skip(a, b) {
                continue;
            }
            if let Some((ti, tj, p, angle)) = segment_intersection(&segs[a], &segs[b]) {
                out.push(Crossing { i: a, j: b, ti, tj, point: p, angle });
            }
        }
    }
    out.sort_by(|x, y| (x.i, x.j).cmp(&(y.i, y.j)).then(x.ti.total_cmp(&y.ti)));
    out
}

/// Self-crossings of a polyline; adjacent segments never count.
pub fn self_crossings(points: &[Vec2], closed: bool) -> Vec<Crossing> {
    let mut pts = points.to_vec();
    if closed && pts.len() > 2 && pts[0] == pts[pts.len() - 1] {
        pts.pop();
    }
    let n = pts.len();
    if n < 4 {
        return Vec::new();
    }
    let m = if closed { n } else { n - 1 };
    let segs: Vec<Segment> = (0..m).map(|i| Segment { a: pts[i], b: pts[(i + 1) % n] }).collect();
    crossings(&segs, |i, j| j == i + 1 || (closed && i == 0 && j == m - 1))
}

/// Point-to-segment distance.
pub fn point_segment_distance(p: Vec2, s: &Segment) -> f64 {
    let d = sub(s.b, s.a);
    let l2 = d[0] * d[0] + d[1] * d[1];
    let t = if l2 > 0.0 { ((p[0] - s.a[0]) * d[0] + (p[1] - s.a[1]) * d[1]) / l2 } else { 0.0 };
    let t = t.clamp(0.0, 1.0);
    len(sub(p, [s.a[0] + t * d[0], s.a[1] + t * d[1]]))
}

/// Nearest-segment queries on a uniform grid.
pub struct SegmentIndex {
    segs: Vec<Segment>,
    cell: f64,
    grid: HashMap<(i64, i64), Vec<usize>>,
    extent: i64,
}

impl SegmentIndex {
    pub fn new(points: &[Vec2], closed: bool) -> Self {
        let n = points.len();
        let mut segs: Vec<Segment> = points.windows(2).map(|w| Segment { a: w[0], b: w[1] }).collect();
        if closed && n > 2 {
            segs.push(Segment { a: points[n - 1], b: points[0] });
        }
        if segs.is_empty() {
            segs.push(Segment { a: points[0], b: points[0] });
        }
        let lens: Vec<f64> = segs.iter().map(|s| len(sub(s.b, s.a))).collect();
        let diag = crate::curve::bbox_diag(points);
        let mut cell = 2.0 * median(lens);
        if !(cell > 0.0) {
            cell = if diag > 0.0 { diag / 64.0 } else { 1.0 };
        }
        cell = cell.max(diag / 4096.0);
        let key = |p: Vec2| ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let (mut lo, mut hi) = ((i64::MAX, i64::MAX), (i64::MIN, i64::MIN));
        for (idx, s) in segs.iter().enumerate() {
            let (x0, y0) = key([s.a[0].min(s.b[0]), s.a[1].min(s.b[1])]);
            let (x1, y1) = key([s.a[0].max(s.b[0]), s.a[1].max(s.b[1])]);
            lo = (lo.0.min(x0), lo.1.min(y0));
            hi = (hi.0.max(x1), hi.1.max(y1));
            for x in x0..=x1 {
                for y in y0..=y1 {
                    grid.entry((x, y)).or_default().push(idx);
                }
            }
        }
        let extent = (hi.0 - lo.0).max(hi.1 - lo.1) + 2;
        Self { segs, cell, grid, extent }
    }

    pub fn distance(&self, p: Vec2) -> f64 {
        let cx = (p[0] / self.cell).floor() as i64;
        let cy = (p[1] / self.cell).floor() as i64;
        let mut best = f64::INFINITY;
        let mut r = 0i64;
        loop {
            for x in cx - r..=cx + r {
                for y in cy - r..=cy + r {
                    if (x - cx).abs() != r && (y - cy).abs() != r {
                        continue;
                    }
                    if let Some(v) = self.grid.get(&(x, y)) {
                        for &i in v {
                            best = best.min(point_segment_distance(p, &self.segs[i]));
                        }
                    }
                }
            }
            if best <= r as f64 * self.cell {
                return best;
            }
            r += 1;
            if r > self.extent + (cx.abs() + cy.abs()).min(1 << 20) {
                // query far outside the indexed region
                return self.segs.iter().map(|s| point_segment_distance(p, s)).fold(f64::INFINITY, f64::min);
            }
        }
    }
}

/// Symmetric Hausdorff distance between two polylines, point-to-segment.
pub fn hausdorff(a: &[Vec2], a_closed: bool, b: &[Vec2], b_closed: bool) -> f64 {
    use rayon::prelude::*;
    let ia = SegmentIndex::new(a, a_closed);
    let ib = SegmentIndex::new(b, b_closed);
    let ab = a.par_iter().map(|&p| ib.distance(p)).reduce(|| 0.0, f64::max);
    let ba = b.par_iter().map(|&p| ia.distance(p)).reduce(|| 0.0, f64::max);
    ab.max(ba)
}

/// Discrete Fréchet distance between two point sequences.
pub fn discrete_frechet(a: &[Vec2], b: &[Vec2]) -> f64 {
    let (n, m) = (a.len(), b.len());
    if n == 0 || m == 0 {
        return f64::INFINITY;
    }
    let mut prev = vec![0.0f64; m];
    let mut cur = vec![0.0f64; m];
    for i in 0..n {
        for j in 0..m {
            let d = len(sub(a[i], b[j]));
            cur[j] = match (i, j) {
                (0, 0) => d,
                (0, _) => cur[j - 1].max(d),
                (_, 0) => prev[0].max(d),
                _ => prev[j].min(prev[j - 1]).min(cur[j - 1]).max(d),
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_eight_has_one_crossing() {
        let n = 400;
        let pts: Vec<Vec2> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                [t.sin(), (2.0 * t).sin() / 2.0]
            })
            .collect();
        let c = self_crossings(&pts, true);
        assert_eq!(c.len(), 1);
        assert!(c[0].point[0].abs() < 1e-9 && c[0].point[1].abs() < 1e-9);
        assert!(c[0].angle > 0.5);
    }

    #[test]
    fn grid_matches_brute_force() {
        let mut state = 12345u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let pts: Vec<Vec2> = (0..300).map(|_| [rnd(), rnd()]).collect();
        let got = self_crossings(&pts, false).len();
        let mut want = 0;
        for i in 0..299 {
            for j in i + 2..299 {
                let s = Segment { a: pts[i], b: pts[i + 1] };
                let t = Segment { a: pts[j], b: pts[j + 1] };
                if segment_intersection(&s, &t).is_some() {
                    want += 1;
                }
            }
        }
        assert_eq!(got, want);
    }

    #[test]
    fn touching_endpoints_do_not_cross() {
        let s = Segment { a: [0.0, 0.0], b: [1.0, 0.0] };
        let t = Segment { a: [1.0, 0.0], b: [1.0, 1.0] };
        assert!(segment_intersection(&s, &t).is_none());
        let u = Segment { a: [0.5, 0.0], b: [0.5, 1.0] };
        assert!(segment_intersection(&s, &u).is_none());
    }

    #[test]
    fn hausdorff_of_offset_squares() {
        let a = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let b: Vec<Vec2> = a.iter().map(|p| [p[0] * 1.1, p[1] * 1.1]).collect();
        let d = hausdorff(&a, true, &b, true);
        assert!((d - 0.02f64.sqrt()).abs() < 1e-12, "{d}");
        assert_eq!(hausdorff(&a, true, &a, true), 0.0);
    }

    #[test]
    fn frechet_of_shifted_lines() {
        let a: Vec<Vec2> = (0..10).map(|i| [i as f64, 0.0]).collect();
        let b: Vec<Vec2> = (0..10).map(|i| [i as f64, 0.5]).collect();
        assert!((discrete_frechet(&a, &b) - 0.5).abs() < 1e-15);
        let rev: Vec<Vec2> = b.iter().rev().copied().collect();
        assert!(discrete_frechet(&a, &rev) > 8.0);
    }
}
