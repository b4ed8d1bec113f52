//! Curves from quiver words: concatenate the curvature of each edge's
//! representative interval and integrate.

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::CurvatureFunction;
use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::format::fmt9;
use crate::polyline;
use crate::quiver::SignatureQuiver;
use crate::reconstruction::{integrate_frenet, DEFAULT_STEPS};
use crate::signature::{self, signature_distance};
use crate::words::{self, check_path, closure_test, minimal_subword, multiplicities, ClosureTest, Word};

/// Junction jumps in `κ` and `κ̇` allowed, relative to their scales.
pub const JUNCTION_TOL: f64 = 1e-6;
/// Relative endpoint gap below which the output counts as closed.
pub const CLOSED_GAP: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct KappaW {
    /// Curvature of the minimal subword, extended periodically.
    pub function: CurvatureFunction,
    /// `c_0 < … < c_k` for the minimal subword.
    pub breakpoints: Vec<f64>,
}

/// `κ_W` for a closed word: edge curvatures laid end to end.
pub fn kappa_from_word(q: &SignatureQuiver, w: &Word) -> Result<KappaW> {
    check_path(&q.graph(), w)?;
    if w.is_empty() {
        return Err(Error::NotAPath("empty word".into()));
    }
    let (u, _) = minimal_subword(w);
    let f = q.kappa();
    let sc = f.scale();
    let mut pieces = Vec::new();
    let mut cuts = vec![0.0];
    let mut c = 0.0;
    let mut prev: Option<(char, f64)> = None;
    for &l in &u.letters {
        let e = q.edge(l).expect("checked path");
        let [a, b] = e.interval;
        if let Some((pl, pb)) = prev {
            junction(f, pb, a, sc.kappa, sc.kappa_dot, pl, l)?;
        }
        pieces.extend(f.restrict(a, b, c));
        c += b - a;
        cuts.push(c);
        prev = Some((l, b));
    }
    let first = q.edge(u.letters[0]).unwrap();
    let (pl, pb) = prev.unwrap();
    junction(f, pb, first.interval[0], sc.kappa, sc.kappa_dot, pl, u.letters[0])?;
    let function = CurvatureFunction::new(c, pieces)?;
    Ok(KappaW { function, breakpoints: cuts })
}

fn junction(f: &CurvatureFunction, b: f64, a: f64, sk: f64, skd: f64, from: char, to: char) -> Result<()> {
    let (k0, d0) = f.eval(b);
    let (k1, d1) = f.eval(a);
    if (k0 - k1).abs() > JUNCTION_TOL * sk || (d0 - d1).abs() > JUNCTION_TOL * skd {
        return Err(Error::InternalConsistency(format!(
            "junction {from}->{to} does not match: (κ, κ̇) = ({k0}, {d0}) vs ({k1}, {d1})"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct SynthesisResult {
    pub word: String,
    pub subword: String,
    #[serde(skip)]
    pub kappa_w: CurvatureFunction,
    #[serde(skip)]
    pub curve: PlaneCurve,
    /// `c_0 … c_k` over the whole word.
    pub breakpoints: Vec<f64>,
    pub sym_index_m: usize,
    pub sig_index: u32,
    pub length: f64,
    pub closed: bool,
    pub closure_gap: f64,
    pub closure: ClosureTest,
    pub complete: bool,
    /// Hausdorff distance to the source signature, for complete words.
    pub signature_distance: Option<f64>,
    pub diag: f64,
    /// Proper self-crossings of the synthesized polyline (0 for simple curves).
    pub self_crossings: usize,
}

/// Samples of the output curve per minimal subword.
pub const SYNTH_STEPS: usize = DEFAULT_STEPS;

pub fn synthesize_curve(q: &SignatureQuiver, w: &Word, xi: Option<i64>) -> Result<SynthesisResult> {
    let xi = xi.or(q.xi).unwrap_or(1);
    let test = closure_test(q, w, xi)?;
    let kw = kappa_from_word(q, w)?;
    let (u, m) = minimal_subword(w);
    let lu = kw.function.period();
    let length = m as f64 * lu;
    let curve = integrate_frenet(&kw.function, length, lu / SYNTH_STEPS as f64)?;
    let gap = curve.closure_gap();
    let mut breakpoints = Vec::with_capacity(m * u.len() + 1);
    for r in 0..m {
        let start = if r == 0 { 0 } else { 1 };
        breakpoints.extend(kw.breakpoints[start..].iter().map(|c| c + r as f64 * lu));
    }
    let sig_index = multiplicities(w).values().copied().min().unwrap_or(0);
    let complete = words::is_complete(&q.graph(), w);
    let src = signature::signature_of(q.kappa(), signature::DEFAULT_SAMPLES)?;
    let diag = src.diag();
    let signature_distance = if complete {
        let own = signature::signature_of(&kw.function, signature::DEFAULT_SAMPLES)?;
        Some(signature_distance(&own, &src))
    } else {
        None
    };
    let closed = gap <= CLOSED_GAP;
    let pts = curve.decimated_points(4096 * m);
    let self_crossings = polyline::self_crossings(&pts, closed).len();
    Ok(SynthesisResult {
        word: w.to_string(),
        subword: u.to_string(),
        kappa_w: kw.function,
        curve,
        breakpoints,
        sym_index_m: m,
        sig_index,
        length,
        closed,
        closure_gap: gap,
        closure: test,
        complete,
        signature_distance,
        diag,
        self_crossings,
    })
}

/// CSV rows `word,closed,m,sig_index,length,closure_gap`, one per input word.
pub fn synthesize_batch(q: &SignatureQuiver, words: &[Word], xi: Option<i64>) -> String {
    let rows: Vec<String> = words
        .par_iter()
        .map(|w| match synthesize_curve(q, w, xi) {
            Ok(r) => format!(
                "{},{},{},{},{},{}",
                r.word,
                r.closed,
                r.sym_index_m,
                r.sig_index,
                fmt9(r.length),
                fmt9(r.closure_gap)
            ),
            Err(e) => format!("{},error,,,,{}", w, e.to_string().replace(',', ";")),
        })
        .collect();
    let mut out = String::from("word,closed,m,sig_index,length,closure_gap\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::quiver::build_quiver;

    #[test]
    fn traced_word_rebuilds_the_source() {
        let q = build_quiver(&gallery::bump_kappa(1)).unwrap();
        let r = synthesize_curve(&q, &q.traced_word(), None).unwrap();
        assert!(r.closed);
        assert_eq!((r.sym_index_m, r.sig_index), (6, 6));
        assert!((r.length - 48.0).abs() < 1e-9);
        let f = q.kappa();
        for i in 0..200 {
            let s = i as f64 * 0.0397;
            assert!((r.kappa_w.kappa(s) - f.kappa(s)).abs() < 1e-12);
        }
        assert!(r.signature_distance.unwrap() < 1e-9 * r.diag);
        assert_eq!(r.self_crossings, 0);
    }

    #[test]
    fn short_word_fails_closure() {
        let q = build_quiver(&gallery::bump_kappa(1)).unwrap();
        let r = synthesize_curve(&q, &Word::parse("abc").unwrap(), Some(1)).unwrap();
        assert!(!r.closure.holds);
        assert!(!r.complete);
        assert!((r.length - 6.0).abs() < 1e-12);
        assert_eq!(r.breakpoints, vec![0.0, 2.0, 4.0, 6.0]);
    }

    #[test]
    fn invalid_letter_is_not_a_path() {
        let q = build_quiver(&gallery::bump_kappa(1)).unwrap();
        assert!(matches!(synthesize_curve(&q, &Word::parse("abz").unwrap(), None), Err(Error::NotAPath(_))));
    }
}
