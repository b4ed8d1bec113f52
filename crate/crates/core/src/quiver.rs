//! Signature quivers: vertices at self-intersections of the signature,
//! edges for the arcs between them, with multiplicities and weights.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::curvature::{CurvatureDoc, CurvatureFunction};
use crate::curve::Vec2;
use crate::error::{Error, Result};
use crate::polyline::discrete_frechet;
use crate::reconstruction::closure_info;
use crate::signature::{self, Signature, Vertex};
use crate::words::{GraphEdge, Word};

/// Samples per interval when comparing arcs of the signature.
const FRECHET_SAMPLES: usize = 64;
/// Arcs closer than this fraction of the diagonal are the same edge.
pub const EDGE_MATCH_REL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuiverVertex {
    pub id: usize,
    pub location: Vec2,
    pub preimages: Vec<f64>,
    #[serde(default)]
    pub tangential: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuiverEdge {
    pub label: char,
    pub from: usize,
    pub to: usize,
    /// First preimage interval, used for synthesis.
    pub interval: [f64; 2],
    /// All preimage intervals within one period.
    pub intervals: Vec<[f64; 2]>,
    /// Multiplicity over the full curve length `mℓ`.
    pub mu: u32,
    pub omega: f64,
}

impl QuiverEdge {
    pub fn length(&self) -> f64 {
        self.interval[1] - self.interval[0]
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SignatureQuiver {
    pub vertices: Vec<QuiverVertex>,
    pub edges: Vec<QuiverEdge>,
    pub ell: f64,
    pub offset: f64,
    /// Symmetry exponent `m = L/ℓ`; 1 when the curve does not close.
    pub m: u32,
    pub closes: bool,
    pub xi: Option<i64>,
    /// `∫ κ` over one period.
    pub integral: f64,
    pub breakpoints: Vec<f64>,
    /// Edge letters in traversal order over one period.
    pub sequence: String,
    pub diag: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(rename = "curvature")]
    doc: CurvatureDoc,
    #[serde(skip)]
    kappa: Option<CurvatureFunction>,
}

#[derive(Clone, Copy, Debug)]
pub struct QuiverOptions {
    pub samples: usize,
    pub edge_match_rel: f64,
    pub cluster_rel: f64,
}

impl Default for QuiverOptions {
    fn default() -> Self {
        QuiverOptions { samples: signature::DEFAULT_SAMPLES, edge_match_rel: EDGE_MATCH_REL, cluster_rel: signature::CLUSTER_REL }
    }
}

pub fn build_quiver(f: &CurvatureFunction) -> Result<SignatureQuiver> {
    build_quiver_with(f, QuiverOptions::default())
}

pub fn build_quiver_with(f: &CurvatureFunction, opts: QuiverOptions) -> Result<SignatureQuiver> {
    let sig = signature::signature_of(f, opts.samples)?;
    if sig.degenerate {
        return Err(Error::DegenerateSignature("vertices of the curve accumulate below the sampling resolution".into()));
    }
    let report = signature::self_intersections_with(&sig, opts.cluster_rel);
    if report.vertices.is_empty() {
        return Err(Error::SimpleSignature);
    }
    assemble(f, &sig, report.vertices, report.warnings, opts)
}

fn assemble(
    f: &CurvatureFunction,
    sig: &Signature,
    verts: Vec<Vertex>,
    mut warnings: Vec<String>,
    opts: QuiverOptions,
) -> Result<SignatureQuiver> {
    let ell = f.period();
    let off = f.offset();
    let diag = sig.diag();
    let mut marks: Vec<(f64, usize)> = verts.iter().flat_map(|v| v.preimages.iter().map(move |&p| (p, v.id))).collect();
    marks.sort_by(|a, b| a.0.total_cmp(&b.0));
    let k = marks.len();

    // one interval per pair of consecutive preimages, cyclically
    let intervals: Vec<([f64; 2], usize, usize)> = (0..k)
        .map(|i| {
            let (a, va) = marks[i];
            let (b, vb) = if i + 1 < k { marks[i + 1] } else { (marks[0].0 + ell, marks[0].1) };
            ([a, b], va, vb)
        })
        .collect();

    let len_tol = 1e-6 * ell.max(1.0);
    let match_tol = opts.edge_match_rel * diag;
    let sample = |iv: [f64; 2]| -> Vec<Vec2> {
        (0..=FRECHET_SAMPLES)
            .map(|j| sig.eval_at(iv[0] + (iv[1] - iv[0]) * j as f64 / FRECHET_SAMPLES as f64))
            .collect()
    };
    let mut reps: Vec<(usize, Vec<Vec2>)> = Vec::new();
    let mut assignment = vec![0usize; k];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (i, &(iv, va, vb)) in intervals.iter().enumerate() {
        let pts = sample(iv);
        let found = reps.iter().position(|(r, rp)| {
            let (riv, ra, rb) = intervals[*r];
            ra == va
                && rb == vb
                && ((riv[1] - riv[0]) - (iv[1] - iv[0])).abs() <= len_tol
                && discrete_frechet(rp, &pts) <= match_tol
        });
        match found {
            Some(e) => {
                assignment[i] = e;
                members[e].push(i);
            }
            None => {
                assignment[i] = reps.len();
                members.push(vec![i]);
                reps.push((i, pts));
            }
        }
    }
    if reps.len() > 52 {
        return Err(Error::TooManyEdges(reps.len()));
    }

    let info = closure_info(f);
    let (m, closes) = match info.m {
        Some(m) if info.closed => (m, true),
        _ => {
            warnings.push("curve does not close; multiplicities are counted over one period".into());
            (1, false)
        }
    };

    // renumber vertices and letters by first traversal
    let mut vmap: Vec<Option<usize>> = vec![None; verts.len()];
    let mut next_v = 0;
    let mut emap: Vec<Option<usize>> = vec![None; reps.len()];
    let mut next_e = 0;
    for &e in &assignment {
        let (_, va, vb) = intervals[reps[e].0];
        for v in [va, vb] {
            if vmap[v].is_none() {
                vmap[v] = Some(next_v);
                next_v += 1;
            }
        }
        if emap[e].is_none() {
            emap[e] = Some(next_e);
            next_e += 1;
        }
    }
    let mut edges: Vec<Option<QuiverEdge>> = vec![None; reps.len()];
    for (e, (r, _)) in reps.iter().enumerate() {
        let (iv, va, vb) = intervals[*r];
        let omega = f.integrate(iv[0], iv[1]);
        for &i in &members[e] {
            let other = f.integrate(intervals[i].0[0], intervals[i].0[1]);
            if (other - omega).abs() > 1e-6 * omega.abs().max(1.0) {
                return Err(Error::InternalConsistency(format!(
                    "weights of one edge disagree: {omega} vs {other}"
                )));
            }
        }
        let id = emap[e].unwrap();
        edges[id] = Some(QuiverEdge {
            label: letter(id),
            from: vmap[va].unwrap(),
            to: vmap[vb].unwrap(),
            interval: iv,
            intervals: members[e].iter().map(|&i| intervals[i].0).collect(),
            mu: members[e].len() as u32 * m,
            omega,
        });
    }
    let edges: Vec<QuiverEdge> = edges.into_iter().map(Option::unwrap).collect();
    let mut vertices: Vec<QuiverVertex> = verts
        .iter()
        .map(|v| QuiverVertex {
            id: vmap[v.id].unwrap(),
            location: v.location,
            preimages: v.preimages.clone(),
            tangential: v.tangential,
        })
        .collect();
    vertices.sort_by_key(|v| v.id);
    let sequence: String = assignment.iter().map(|&e| letter(emap[e].unwrap())).collect();

    let q = SignatureQuiver {
        vertices,
        edges,
        ell,
        offset: off,
        m,
        closes,
        xi: info.xi,
        integral: info.integral,
        breakpoints: marks.iter().map(|m| m.0).collect(),
        sequence,
        diag,
        warnings,
        doc: CurvatureDoc::from_function(f),
        kappa: Some(f.clone()),
    };
    let total: f64 = q.edges.iter().map(|e| e.mu as f64 * e.omega).sum();
    let expected = q.integral * m as f64;
    if (total - expected).abs() > 1e-5 * expected.abs().max(1.0) {
        return Err(Error::InternalConsistency(format!("edge weights sum to {total}, expected {expected}")));
    }
    Ok(q)
}

/// `a..z` then `A..Z`.
pub fn letter(i: usize) -> char {
    if i < 26 {
        (b'a' + i as u8) as char
    } else {
        (b'A' + (i - 26) as u8) as char
    }
}

impl SignatureQuiver {
    pub fn kappa(&self) -> &CurvatureFunction {
        self.kappa.as_ref().expect("quiver carries its curvature function")
    }

    pub fn graph(&self) -> Vec<GraphEdge> {
        self.edges.iter().map(|e| GraphEdge { label: e.label, from: e.from, to: e.to }).collect()
    }

    pub fn labels(&self) -> Vec<char> {
        self.edges.iter().map(|e| e.label).collect()
    }

    pub fn edge(&self, label: char) -> Option<&QuiverEdge> {
        self.edges.iter().find(|e| e.label == label)
    }

    /// Global signature index, `min μ`.
    pub fn sig_index(&self) -> u32 {
        self.edges.iter().map(|e| e.mu).min().unwrap_or(0)
    }

    /// `Σ μ ω`.
    pub fn weighted_sum(&self) -> f64 {
        self.edges.iter().map(|e| e.mu as f64 * e.omega).sum()
    }

    /// Word traced over the full curve, `w^m`.
    pub fn traced_word(&self) -> Word {
        Word::closed(&self.sequence).pow(self.m as usize)
    }

    /// Renames edges. `map` must be a bijection on the labels.
    pub fn relabel(&mut self, map: &BTreeMap<char, char>) -> Result<()> {
        let mut targets: Vec<char> = self.edges.iter().map(|e| *map.get(&e.label).unwrap_or(&e.label)).collect();
        targets.sort_unstable();
        targets.dedup();
        if targets.len() != self.edges.len() {
            return Err(Error::InvalidSpec("relabeling must be a bijection".into()));
        }
        for e in &mut self.edges {
            e.label = *map.get(&e.label).unwrap_or(&e.label);
        }
        self.sequence = self.sequence.chars().map(|c| *map.get(&c).unwrap_or(&c)).collect();
        self.edges.sort_by_key(|e| e.label);
        Ok(())
    }

    /// Letters reassigned by sorting edges on `(from, to, ω)`, so that
    /// quivers built independently can be compared edge for edge.
    pub fn canonical_relabel(&mut self) {
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.sort_by(|&i, &j| {
            let (a, b) = (&self.edges[i], &self.edges[j]);
            (a.from, a.to).cmp(&(b.from, b.to)).then(a.omega.total_cmp(&b.omega))
        });
        let map: BTreeMap<char, char> = order.iter().enumerate().map(|(k, &i)| (self.edges[i].label, letter(k))).collect();
        self.relabel(&map).expect("sorted order is a bijection");
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("quiver serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut q: SignatureQuiver = serde_json::from_str(text)?;
        q.kappa = Some(q.doc.to_function()?);
        Ok(q)
    }

    /// DOT digraph; arcs labelled `letter:mu:omega`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quiver {\n");
        for v in &self.vertices {
            let _ = writeln!(
                out,
                "  q{} [label=\"q{}\\n({}, {})\"];",
                v.id + 1,
                v.id + 1,
                crate::format::fmt9(v.location[0]),
                crate::format::fmt9(v.location[1])
            );
        }
        for e in &self.edges {
            let _ = writeln!(out, "  q{} -> q{} [label=\"{}:{}:{:.6}\"];", e.from + 1, e.to + 1, e.label, e.mu, e.omega);
        }
        out.push_str("}\n");
        out
    }

    /// Turning number implied by the weights, `Σ μ ω / 2π`.
    pub fn turning(&self) -> f64 {
        self.weighted_sum() / (2.0 * PI)
    }
}
