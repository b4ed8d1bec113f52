use std::collections::BTreeMap;
use std::f64::consts::PI;

use proptest::prelude::*;
use sigquiver::gallery;
use sigquiver::reconstruction::integrate_frenet;
use sigquiver::signature::signature_of_curve;
use sigquiver::words::{self, canonical, minimal_subword, GraphEdge, Word};

fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(vec!['a', 'b', 'c', 'd']), 1..max).prop_map(|v| Word::new(v, true))
}

fn loops(k: usize) -> Vec<GraphEdge> {
    (0..k).map(|i| GraphEdge { label: (b'a' + i as u8) as char, from: 0, to: 0 }).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn signature_is_invariant_under_rigid_motions(angle in -PI..PI, tx in -50.0..50.0f64, ty in -50.0..50.0f64) {
        let f = gallery::mn_kappa();
        let c = integrate_frenet(&f, f.period(), f.period() / 1024.0).unwrap();
        let a = signature_of_curve(&c).unwrap();
        let b = signature_of_curve(&c.apply_rigid_motion(angle, [tx, ty], false)).unwrap();
        for i in 0..a.len() {
            prop_assert!((a.kappa[i] - b.kappa[i]).abs() <= 1e-9);
            prop_assert!((a.kappa_dot[i] - b.kappa_dot[i]).abs() <= 1e-9);
        }
    }

    #[test]
    fn reversal_mirrors_the_signature(s in 0.0..8.0f64, k in 1usize..5) {
        let f = gallery::bump_kappa(k);
        let g = f.reversed();
        let (k0, kd0) = f.eval(s);
        // reversal maps s to c - s with c = 2·offset + ℓ
        let c = f.offset() * 2.0 + f.period();
        let (k1, kd1) = g.eval(c - s);
        prop_assert!((k1 + k0).abs() <= 1e-12 * (1.0 + k0.abs()));
        prop_assert!((kd1 - kd0).abs() <= 1e-12 * (1.0 + kd0.abs()));
    }

    #[test]
    fn canonical_form_is_a_rotation_invariant(w in word_strategy(12), r in 0usize..12) {
        let c = canonical(&w).unwrap();
        prop_assert_eq!(&canonical(&c).unwrap(), &c);
        prop_assert_eq!(&canonical(&w.rotate(r % w.len())).unwrap(), &c);
        prop_assert!((0..w.len()).all(|k| w.rotate(k).letters >= c.letters));
    }

    #[test]
    fn minimal_subword_round_trip(u in word_strategy(6), k in 1usize..5) {
        let w = u.pow(k);
        let (v, m) = minimal_subword(&w);
        prop_assert_eq!(&v.pow(m).letters, &w.letters);
        prop_assert_eq!(m % k, 0);
        let (_, again) = minimal_subword(&v);
        prop_assert_eq!(again, 1);
    }

    #[test]
    fn burnside_count_matches_enumeration(m in prop::collection::vec(0u32..4, 3..5)) {
        let graph = loops(m.len());
        let mult: BTreeMap<char, u32> = graph.iter().zip(&m).map(|(e, &c)| (e.label, c)).collect();
        let listed = words::enumerate_words(&graph, &mult, usize::MAX).unwrap();
        prop_assert!(!listed.truncated);
        prop_assert_eq!(words::count_words(&graph, &mult).unwrap(), listed.words.len() as u128);
    }
}

#[test]
fn burnside_on_the_trigonometric_quiver() {
    let q = sigquiver::quiver::build_quiver(&gallery::mn_kappa()).unwrap();
    let graph = q.graph();
    for k in 1..=2u32 {
        let mult: BTreeMap<char, u32> = q.labels().into_iter().map(|c| (c, k)).collect();
        let listed = words::enumerate_words(&graph, &mult, usize::MAX).unwrap();
        assert_eq!(words::count_words(&graph, &mult).unwrap(), listed.words.len() as u128);
    }
}
