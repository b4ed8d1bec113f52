//! Compiles a C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "sigquiver.h"

int main(void) {
    SqCurvature *f = NULL;
    if (sq_curvature_gallery("cinf1", &f) != SQ_STATUS_OK) return 10;
    uint32_t m = 0;
    if (sq_symmetry_index(f, &m) != SQ_STATUS_OK || m != 6) return 11;
    SqQuiver *q = NULL;
    if (sq_quiver_build(f, &q) != SQ_STATUS_OK) return 12;
    size_t nv = 0, ne = 0;
    sq_quiver_counts(q, &nv, &ne);
    if (nv != 1 || ne != 4) return 13;
    char *words = NULL;
    int truncated = 0;
    if (sq_words_enumerate(q, "all=1", 10, &words, &truncated) != SQ_STATUS_OK) return 14;
    printf("%s", words);
    sq_string_free(words);
    SqCurvature *bad = NULL;
    if (sq_curvature_gallery("nope", &bad) != SQ_STATUS_INVALID_ARGUMENT) return 15;
    if (sq_last_error() == NULL) return 16;
    sq_quiver_free(q);
    sq_curvature_free(f);
    return 0;
}
"#;

// The test binary lives in <target>/<profile>/deps, next to the library
// when built by `cargo test`; `cargo build` uplifts it one level.
fn static_lib() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = deps.join("libsigquiver_ffi.a");
    if lib.exists() {
        lib
    } else {
        deps.parent().unwrap().join("libsigquiver_ffi.a")
    }
}

#[test]
fn header_compiles_and_links() {
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let lib = static_lib();
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    // four loops at one vertex, each once: 3! rotation classes
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 6);
}
