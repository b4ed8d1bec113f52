//! The acceptance suite. Each criterion returns a report with one line per check.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::congruence::{are_congruent, find_shift, symmetry_index, Method};
use crate::curve::{PlaneCurve, Vec2};
use crate::error::Result;
use crate::gallery;
use crate::polyline;
use crate::quiver::{build_quiver, SignatureQuiver};
use crate::reconstruction::{closure_info, reconstruct};
use crate::signature::{self, signature_distance, signature_of, signature_of_curve, DEFAULT_SAMPLES};
use crate::synthesis::synthesize_curve;
use crate::words::{self, canonical, closure_test, count_words, enumerate_words, GraphEdge, Word};

pub const TITLES: [&str; 9] = [
    "bump family reconstruction",
    "shared signature of the bump family",
    "quiver of the bump signature",
    "non-congruence of the bump family",
    "non-compatible synthesis",
    "trigonometric four-vertex example",
    "cogwheels",
    "simple-signature path",
    "property suite",
];

#[derive(Clone, Debug)]
pub struct Report {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub lines: Vec<String>,
    pub seconds: f64,
}

impl Report {
    /// `criterion 3 PASS  quiver of the bump signature (1.2 s)`
    pub fn summary(&self) -> String {
        format!(
            "criterion {} {}  {} ({:.1} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.seconds
        )
    }
}

#[derive(Default)]
struct Checks {
    lines: Vec<String>,
    ok: bool,
}

impl Checks {
    fn new() -> Self {
        Checks { lines: Vec::new(), ok: true }
    }

    fn check(&mut self, cond: bool, msg: impl Into<String>) -> bool {
        let msg = msg.into();
        self.lines.push(format!("{} {msg}", if cond { "  ok  " } else { "  FAIL" }));
        self.ok &= cond;
        cond
    }

    fn value<T>(&mut self, r: Result<T>, what: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, format!("{what}: {e}"));
                None
            }
        }
    }
}

pub fn run(id: usize, seed: u64) -> Report {
    let t = Instant::now();
    let mut c = Checks::new();
    match id {
        1 => bump_reconstruction(&mut c),
        2 => shared_signature(&mut c),
        3 => bump_quiver(&mut c),
        4 => bump_non_congruence(&mut c, seed),
        5 => non_compatible_synthesis(&mut c),
        6 => trigonometric_example(&mut c),
        7 => cogwheels(&mut c),
        8 => simple_signature(&mut c, seed),
        9 => properties(&mut c, seed),
        _ => {
            c.check(false, format!("no criterion {id}"));
        }
    }
    Report {
        id,
        title: TITLES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed: c.ok,
        lines: c.lines,
        seconds: t.elapsed().as_secs_f64(),
    }
}

pub fn run_all(seed: u64) -> Vec<Report> {
    (1..=TITLES.len()).map(|i| run(i, seed)).collect()
}

fn bump_reconstruction(c: &mut Checks) {
    for (k, want_m) in [(1, 6), (2, 6), (3, 3), (4, 2)] {
        let f = gallery::bump_kappa(k);
        let Some((curve, info)) = c.value(reconstruct(&f), "reconstruct") else { continue };
        let len = curve.length();
        c.check((len - 48.0).abs() <= 1e-3, format!("Γ{k} length {len:.9}"));
        c.check(info.closed && curve.closure_gap() <= 1e-4, format!("Γ{k} closure gap {:.3e} L", curve.closure_gap()));
        let turn = f.integrate(0.0, len) / (2.0 * PI);
        c.check((turn - 1.0).abs() <= 1e-5 / (2.0 * PI), format!("Γ{k} turning number {turn:.12}"));
        if let Some(m) = c.value(symmetry_index(&f), "symmetry index") {
            c.check(m == want_m, format!("Γ{k} symmetry index {m} (want {want_m})"));
        }
    }
}

fn shared_signature(c: &mut Checks) {
    let sigs: Vec<_> = (1..=4).filter_map(|k| c.value(signature_of(&gallery::bump_kappa(k), DEFAULT_SAMPLES), "signature")).collect();
    for i in 0..sigs.len() {
        for j in i + 1..sigs.len() {
            let d = signature_distance(&sigs[i], &sigs[j]);
            let diag = sigs[i].diag().max(sigs[j].diag());
            c.check(d <= 1e-3 * diag, format!("S{} vs S{}: Hausdorff {:.3e} diag", i + 1, j + 1, d / diag));
        }
    }
}

/// Bump quiver with letters sorted by weight, which gives the reference naming.
fn bump_quiver_relabeled(k: usize) -> Result<SignatureQuiver> {
    let mut q = build_quiver(&gallery::bump_kappa(k))?;
    q.canonical_relabel();
    Ok(q)
}

fn bump_quiver(c: &mut Checks) {
    let Some(q) = c.value(bump_quiver_relabeled(1), "quiver of κ1") else { return };
    c.check(q.vertices.len() == 1, format!("{} vertex", q.vertices.len()));
    if let Some(v) = q.vertices.first() {
        let r = v.location[0].hypot(v.location[1]);
        c.check(r <= 1e-4 * q.diag, format!("vertex at ({:.3e}, {:.3e})", v.location[0], v.location[1]));
    }
    c.check(q.edges.len() == 4, format!("{} edges", q.edges.len()));
    let mus: Vec<u32> = q.edges.iter().map(|e| e.mu).collect();
    c.check(mus == [6, 6, 6, 6], format!("multiplicities {mus:?}"));
    for (l, want) in [('a', -2.0 * PI / 3.0), ('b', -PI / 3.0), ('c', PI / 3.0), ('d', PI)] {
        let got = q.edge(l).map_or(f64::NAN, |e| e.omega);
        c.check((got - want).abs() <= 1e-4, format!("ω_{l} = {got:.9} (want {want:.9})"));
    }
    for (k, want) in [(1, "(cadb)^6"), (2, "(cdab)^6"), (3, "(cadbcdab)^3"), (4, "(cadbcdabcadb)^2")] {
        let Some(qk) = c.value(bump_quiver_relabeled(k), "quiver") else { continue };
        let got = qk.traced_word();
        let want = Word::parse(want).unwrap();
        let same = canonical(&got).ok() == canonical(&want).ok();
        c.check(same && up_to_bijection(&got, &want), format!("Γ{k} traces {got} ~ {want}"));
    }
}

/// Some rotation of `a` maps letter-for-letter onto `b` through a bijection.
fn up_to_bijection(a: &Word, b: &Word) -> bool {
    a.len() == b.len() && (0..a.len()).any(|r| letter_map(&a.rotate(r).letters, &b.letters).is_some())
}

fn letter_map(a: &[char], b: &[char]) -> Option<BTreeMap<char, char>> {
    let mut fwd = BTreeMap::new();
    let mut back = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        if *fwd.entry(x).or_insert(y) != y || *back.entry(y).or_insert(x) != x {
            return None;
        }
    }
    Some(fwd)
}

fn random_motion(curve: &PlaneCurve, rng: &mut ChaCha8Rng) -> PlaneCurve {
    let angle = rng.gen_range(0.0..2.0 * PI);
    let v = [rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)];
    curve.apply_rigid_motion(angle, v, false)
}

fn bump_non_congruence(c: &mut Checks, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let curves: Vec<PlaneCurve> = (1..=4).filter_map(|k| c.value(reconstruct(&gallery::bump_kappa(k)), "reconstruct").map(|r| r.0)).collect();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            if let Some(r) = c.value(are_congruent(&curves[i], &curves[j]), "congruence") {
                let res = r.residual.map_or("n/a".to_string(), |x| format!("{x:.3e}"));
                c.check(!r.congruent, format!("Γ{} vs Γ{}: not congruent (residual {res})", i + 1, j + 1));
            }
        }
    }
    for (i, curve) in curves.iter().enumerate() {
        let moved = random_motion(curve, &mut rng);
        if let Some(r) = c.value(are_congruent(curve, &moved), "congruence") {
            let res = r.residual.unwrap_or(f64::INFINITY);
            c.check(r.congruent && res <= 1e-4, format!("Γ{} vs moved copy: residual {res:.3e}", i + 1));
        }
    }
}

fn non_compatible_synthesis(c: &mut Checks) {
    let Some(q) = c.value(bump_quiver_relabeled(1), "quiver of κ1") else { return };
    for (w, m, sig) in [("(cbdacacccbda)^2", 2, 4), ("(cbdacacc)^3", 3, 3), ("(ccabdacc)^3", 3, 3)] {
        let word = Word::parse(w).unwrap();
        if let Some(r) = c.value(synthesize_curve(&q, &word, Some(1)), w) {
            c.check(
                r.closed && r.closure.holds && r.sym_index_m == m && r.sig_index == sig,
                format!("{w}: closed={} m={} sig-index={} gap={:.2e}", r.closed, r.sym_index_m, r.sig_index, r.closure_gap),
            );
        }
    }
    let w = "cadbcdabcdabcadbcadbcdab";
    if let Some(r) = c.value(synthesize_curve(&q, &Word::parse(w).unwrap(), Some(1)), w) {
        let d = r.signature_distance.unwrap_or(f64::INFINITY);
        c.check(!r.closed && r.sym_index_m == 1, format!("{w}: open (gap {:.3e})", r.closure_gap));
        c.check(d <= 1e-3 * r.diag, format!("{w}: signature Hausdorff {:.3e} diag", d / r.diag));
    }
}

/// The quiver printed for the trigonometric example, vertices numbered from 1.
const MN_REFERENCE_EDGES: [(char, usize, usize); 8] =
    [('h', 1, 4), ('a', 4, 1), ('g', 2, 4), ('b', 3, 1), ('e', 2, 3), ('d', 3, 2), ('c', 1, 2), ('f', 4, 3)];

/// Letter map from our quiver to the printed one under which `ours` becomes a
/// rotation of `theirs` and edge endpoints agree up to renumbering vertices.
fn match_printed_quiver(graph: &[GraphEdge], ours: &Word, theirs: &Word) -> Option<BTreeMap<char, char>> {
    let reference: BTreeMap<char, (usize, usize)> = MN_REFERENCE_EDGES.iter().map(|&(l, a, b)| (l, (a - 1, b - 1))).collect();
    for r in 0..ours.len() {
        let Some(map) = letter_map(&ours.rotate(r).letters, &theirs.letters) else { continue };
        if map.len() != graph.len() {
            continue;
        }
        let mut vmap: BTreeMap<usize, usize> = BTreeMap::new();
        let mut ok = true;
        for e in graph {
            let Some(&(pa, pb)) = map.get(&e.label).and_then(|l| reference.get(l)) else {
                ok = false;
                break;
            };
            for (x, y) in [(e.from, pa), (e.to, pb)] {
                if *vmap.entry(x).or_insert(y) != y {
                    ok = false;
                }
            }
        }
        let image: BTreeSet<usize> = vmap.values().copied().collect();
        if ok && image.len() == vmap.len() {
            return Some(map);
        }
    }
    None
}

fn trigonometric_example(c: &mut Checks) {
    let Some(q) = c.value(build_quiver(&gallery::mn_kappa()), "quiver") else { return };
    c.check(q.vertices.len() == 4, format!("{} vertices", q.vertices.len()));
    c.check(q.vertices.iter().all(|v| v.location[1].abs() > 1e-3 * q.diag), "no vertex on the κ̇ = 0 axis");
    c.check(q.edges.len() == 8, format!("{} edges", q.edges.len()));
    let mus: Vec<u32> = q.edges.iter().map(|e| e.mu).collect();
    c.check(mus.iter().all(|&m| m == 5), format!("multiplicities {mus:?}"));
    let graph = q.graph();
    let traced = Word::closed(&q.sequence);
    let map = match_printed_quiver(&graph, &traced, &Word::closed("bhfdgace"));
    c.check(map.is_some(), format!("traced word ({})^{} matches (bhfdgace)^5 up to relabeling", q.sequence, q.m));
    let mult = words::parse_multiplicities("all=1", &q.labels()).unwrap();
    let Some(found) = c.value(enumerate_words(&graph, &mult, 1000), "enumeration") else { return };
    c.check(found.words.len() == 5 && !found.truncated, format!("{} cyclic classes with unit multiplicities", found.words.len()));
    if let Some(map) = &map {
        let back: BTreeMap<char, char> = map.iter().map(|(a, b)| (*b, *a)).collect();
        let other = canonical(&Word::closed("bhacedgf").relabel(&back)).unwrap();
        c.check(found.words.contains(&other), "(bhacedgf) is among them");
    }
    let results: Vec<_> = found
        .words
        .iter()
        .filter_map(|u| c.value(synthesize_curve(&q, &u.pow(q.m as usize), None), "synthesis"))
        .collect();
    for (u, r) in found.words.iter().zip(&results) {
        c.check(r.closed && r.sym_index_m == 5, format!("({u})^5: closed={} m={} gap={:.2e}", r.closed, r.sym_index_m, r.closure_gap));
    }
    let sigs: Vec<_> = results.iter().filter_map(|r| c.value(signature_of(&r.kappa_w, DEFAULT_SAMPLES), "signature")).collect();
    let mut all_distinct = true;
    let mut worst: f64 = 0.0;
    for i in 0..results.len() {
        for j in i + 1..results.len() {
            all_distinct &= !find_shift(&results[i].kappa_w, &results[j].kappa_w).congruent;
            if i < sigs.len() && j < sigs.len() {
                worst = worst.max(signature_distance(&sigs[i], &sigs[j]) / sigs[i].diag().max(sigs[j].diag()));
            }
        }
    }
    c.check(all_distinct, "synthesized curves pairwise non-congruent");
    c.check(worst <= 1e-3, format!("pairwise signature Hausdorff ≤ {worst:.3e} diag"));
}

fn cogwheels(c: &mut Checks) {
    let Some(f) = c.value(gallery::cogwheel_kappa(&gallery::default_cogwheel()), "cogwheel") else { return };
    let Some(q) = c.value(build_quiver(&f), "quiver") else { return };
    c.check(q.vertices.len() == 1, format!("{} vertex", q.vertices.len()));
    c.check(q.edges.iter().all(|e| e.from == 0 && e.to == 0), "all edges are loops");
    let mus: Vec<u32> = q.edges.iter().map(|e| e.mu).collect();
    c.check(mus == [3, 4, 5, 6], format!("multiplicities {mus:?}"));
    c.check(q.sig_index() == 3, format!("sig-index {}", q.sig_index()));
    let sum = q.weighted_sum();
    c.check((sum - 2.0 * PI).abs() <= 1e-3, format!("Σμω = {sum:.9}"));
    c.check(q.traced_word().to_string() == "a^3b^4c^5d^6", format!("traced word {}", q.traced_word()));
    for w in ["a^3c^5b^4d^6", "a^3c^5d^6b^4"] {
        if let Some(r) = c.value(synthesize_curve(&q, &Word::parse(w).unwrap(), Some(1)), w) {
            let shift = find_shift(q.kappa(), &r.kappa_w);
            c.check(r.closed && !shift.congruent, format!("{w}: closed={} (gap {:.2e}), congruent to original: {}", r.closed, r.closure_gap, shift.congruent));
        }
    }
    for w in ["a^2b^4c^5d^8", "a^3b^6c^5d^3"] {
        if let Some(t) = c.value(closure_test(&q, &Word::parse(w).unwrap(), 1), w) {
            c.check(t.holds, format!("{w}: Σμ̃ω = {:.9}", t.sum));
        }
    }
}

fn simple_signature(c: &mut Checks, seed: u64) {
    let f = gallery::simple_sig_kappa();
    let Some(sig) = c.value(signature_of(&f, DEFAULT_SAMPLES), "signature") else { return };
    c.check(signature::self_intersections(&sig).is_empty(), "no self-intersections");
    let dev = (0..sig.len())
        .map(|i| ((sig.kappa[i] - 0.2).powi(2) + sig.kappa_dot[i].powi(2) - 2.0).abs())
        .fold(0.0, f64::max);
    c.check(dev <= 1e-6, format!("on the circle (κ−0.2)²+κ̇²=2 to {dev:.2e}"));
    let info = closure_info(&f);
    c.check(info.closed && info.m == Some(5), format!("closes with m = {:?}", info.m));
    let Some((curve, _)) = c.value(reconstruct(&f), "reconstruct") else { return };
    let moved = random_motion(&curve, &mut ChaCha8Rng::seed_from_u64(seed ^ 8));
    if let Some(r) = c.value(are_congruent(&curve, &moved), "congruence") {
        c.check(r.congruent && r.method == Method::SimpleSignature, format!("shortcut fires: {:?}, shift {:?}", r.method, r.shift));
    }
}

fn properties(c: &mut Checks, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 9);
    // SE(2) invariance
    if let Some((curve, _)) = c.value(reconstruct(&gallery::mn_kappa()), "reconstruct") {
        if let Some(s0) = c.value(signature_of_curve(&curve), "signature") {
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let moved = random_motion(&curve, &mut rng);
                if let Some(s1) = c.value(signature_of_curve(&moved), "signature") {
                    worst = worst.max(signature_distance(&s0, &s1));
                }
            }
            c.check(worst <= 1e-9, format!("50 rigid motions: signature Hausdorff ≤ {worst:.2e}"));
            // reversal reflects about the vertical axis
            if let Some(sr) = c.value(signature_of_curve(&curve.reversed()), "signature") {
                let mirrored: Vec<Vec2> = s0.points().iter().map(|p| [-p[0], p[1]]).collect();
                let d = polyline::hausdorff(&mirrored, true, &sr.points(), true);
                c.check(d <= 1e-6 * s0.diag(), format!("reversal mirrors the signature: {:.2e} diag", d / s0.diag()));
            }
        }
    }
    let mut sources = vec![
        ("Γ1", gallery::bump_kappa(1)),
        ("Γ2", gallery::bump_kappa(2)),
        ("Γ3", gallery::bump_kappa(3)),
        ("Γ4", gallery::bump_kappa(4)),
        ("mn", gallery::mn_kappa()),
    ];
    if let Some(f) = c.value(gallery::cogwheel_kappa(&gallery::default_cogwheel()), "cogwheel") {
        sources.push(("cogwheel", f));
    }
    for (name, f) in &sources {
        let Some(q) = c.value(build_quiver(f), name) else { continue };
        let xi = q.xi.unwrap_or(1) as f64;
        let sum = q.weighted_sum();
        c.check((sum - 2.0 * PI * xi).abs() <= 1e-5, format!("{name}: Σμω − 2πξ = {:.2e}", sum - 2.0 * PI * xi));
        c.check(q.edges.iter().all(|e| e.mu % q.m == 0), format!("{name}: m = {} divides every μ", q.m));
        c.check(local_index_matches(&q), format!("{name}: passes near each edge midpoint equal μ"));
        if let Some(r) = c.value(synthesize_curve(&q, &q.traced_word(), None), name) {
            if let Some((orig, _)) = c.value(reconstruct(f), name) {
                if let Some(v) = c.value(are_congruent(&orig, &r.curve), name) {
                    c.check(v.congruent, format!("{name}: synthesize(traced word) ≅ original"));
                }
            }
        }
    }
    // four loops on one vertex, unit multiplicities
    let graph: Vec<GraphEdge> = "abcd".chars().map(|l| GraphEdge { label: l, from: 0, to: 0 }).collect();
    let mult = words::parse_multiplicities("all=1", &['a', 'b', 'c', 'd']).unwrap();
    let enumerated = enumerate_words(&graph, &mult, 1000).map(|e| e.words.len()).unwrap_or(0);
    let counted = count_words(&graph, &mult).unwrap_or(0);
    let brute = brute_force_classes("abcd");
    c.check(
        enumerated == brute && counted as usize == brute && brute == 6,
        format!("4-loop quiver: enumerated {enumerated}, counted {counted}, brute force {brute}"),
    );
}

/// Orderings of distinct letters modulo rotation, by listing all permutations.
fn brute_force_classes(letters: &str) -> usize {
    fn perms(rest: &mut Vec<char>, cur: &mut Vec<char>, out: &mut BTreeSet<Vec<char>>) {
        if rest.is_empty() {
            let n = cur.len();
            let least = (0..n)
                .map(|k| {
                    let mut v = cur.clone();
                    v.rotate_left(k);
                    v
                })
                .min()
                .unwrap();
            out.insert(least);
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            perms(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = BTreeSet::new();
    perms(&mut letters.chars().collect(), &mut Vec::new(), &mut out);
    out.len()
}

/// Counts the passes of `σ` over `[0, L)` through a small ball around the
/// image of each edge's midpoint and compares with `μ`. A sample step is
/// inside when its chord meets the ball, so fast passes are not skipped.
fn local_index_matches(q: &SignatureQuiver) -> bool {
    let f = q.kappa();
    let total = q.ell * q.m as f64;
    let n = (q.m as usize) * 131072;
    let h = total / n as f64;
    let eps = 1e-4 * q.diag;
    let trace: Vec<Vec2> = (0..n)
        .map(|i| {
            let v = f.eval(q.offset + i as f64 * h);
            [v.0, v.1]
        })
        .collect();
    q.edges.iter().all(|e| {
        let p = f.eval(0.5 * (e.interval[0] + e.interval[1]));
        let inside: Vec<bool> = (0..n)
            .map(|i| {
                let seg = polyline::Segment { a: trace[i], b: trace[(i + 1) % n] };
                polyline::point_segment_distance([p.0, p.1], &seg) <= eps
            })
            .collect();
        let passes = (0..n).filter(|&i| inside[i] && !inside[(i + n - 1) % n]).count();
        passes as u32 == e.mu
    })
}
