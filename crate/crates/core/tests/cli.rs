use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigquiver")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bump_curves_are_not_congruent() {
    let o = run(&["congruent", "gallery:cinf1", "gallery:cinf2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["congruent"], false);
}

#[test]
fn shifted_curvature_is_congruent() {
    let dir = tempfile::tempdir().unwrap();
    let f = sigquiver::gallery::mn_kappa().shifted(2.5);
    let path = dir.path().join("mn-shifted.json");
    std::fs::write(&path, f.to_json()).unwrap();
    let o = run(&["congruent", "gallery:mn", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn indices_of_first_bump_curve() {
    let o = run(&["indices", "gallery:cinf1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("m=6\n") && text.contains("sig-index=6\n"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("edge ")).count(), 4);
}

#[test]
fn simple_signature_indices() {
    let text = stdout(&run(&["indices", "gallery:simple-sig"]));
    assert_eq!(text, "m=5\nsig-index=5\n");
}

#[test]
fn trigonometric_quiver_has_five_eulerian_classes() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("mn.json");
    let o = run(&["quiver", "gallery:mn", "--out", "json", "-o", q.to_str().unwrap()]);
    assert!(o.status.success());
    let o = run(&["words", "enumerate", q.to_str().unwrap(), "--mult", "all=1"]);
    assert!(o.status.success());
    let words: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(words.len(), 5, "{words:?}");
    let o = run(&["words", "enumerate", q.to_str().unwrap(), "--mult", "all=1", "--count-only"]);
    assert_eq!(stdout(&o), "5\n");
    let o = run(&["words", "enumerate", q.to_str().unwrap(), "--mult", "all=1", "--max", "2"]);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn synthesis_from_a_saved_quiver() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("c1.json");
    assert!(run(&["quiver", "gallery:cinf1", "--out", "json", "-o", q.to_str().unwrap()]).status.success());
    let o = run(&["synth", q.to_str().unwrap(), "--word", "(cadb)^6", "--out", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["closed"], true);
    assert_eq!(v["sym_index_m"], 6);
    assert!((v["length"].as_f64().unwrap() - 48.0).abs() < 1e-9);

    let batch = dir.path().join("words.txt");
    std::fs::write(&batch, "# two words\n(abcd)^6\nabab\n").unwrap();
    let o = run(&["synth", q.to_str().unwrap(), "--batch", batch.to_str().unwrap()]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "word,closed,m,sig_index,length,closure_gap");
    assert!(rows[1].starts_with("(abcd)^6,true,6,6,48,"));
    assert!(rows[2].starts_with("(ab)^2,false,2,"));
}

#[test]
fn polyline_round_trip_is_congruent() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("mn.csv");
    assert!(run(&["curve", "gallery:mn", "-o", csv.to_str().unwrap()]).status.success());
    let o = run(&["congruent", csv.to_str().unwrap(), "gallery:mn"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["congruent", csv.to_str().unwrap(), "gallery:simple-sig"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn plots_are_svg() {
    for args in [
        &["curve", "gallery:cogwheel", "--out", "svg"][..],
        &["signature", "gallery:cinf1", "--out", "svg"][..],
    ] {
        let o = run(args);
        assert!(o.status.success());
        let text = stdout(&o);
        assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn output_is_deterministic() {
    let a = run(&["quiver", "gallery:cinf3"]);
    let b = run(&["quiver", "gallery:cinf3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("digraph quiver {"));
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["curve"]).status.code(), Some(2));
    assert_eq!(run(&["congruent", "gallery:nope", "gallery:mn"]).status.code(), Some(2));
    assert_eq!(run(&["congruent", "/nonexistent.json", "gallery:mn"]).status.code(), Some(2));
    assert_eq!(run(&["quiver", "gallery:simple-sig"]).status.code(), Some(2));
    assert_eq!(run(&["indices", "gallery:mn", "--cluster-tol", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn canonical_word() {
    assert_eq!(stdout(&run(&["words", "canonical", "dbca"])), "adbc\n");
}
