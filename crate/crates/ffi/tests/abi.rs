use std::ffi::{c_char, CStr, CString};
use std::ptr;

use sigquiver_ffi::*;

fn owned(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { sq_string_free(s) };
    out
}

fn last_error() -> String {
    let p = sq_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn gallery(name: &str) -> *mut SqCurvature {
    let name = CString::new(name).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { sq_curvature_gallery(name.as_ptr(), &mut h) }, SqStatus::Ok);
    h
}

#[test]
fn curvature_round_trip_and_indices() {
    unsafe {
        let f = gallery("cinf1");
        let mut period = 0.0;
        assert_eq!(sq_curvature_period(f, &mut period), SqStatus::Ok);
        assert_eq!(period, 8.0);
        let (mut k, mut kd) = (0.0, 0.0);
        assert_eq!(sq_curvature_eval(f, 1.0, &mut k, &mut kd), SqStatus::Ok);
        // plateau of the first bump: π/3 with vanishing slope
        assert!((k - std::f64::consts::FRAC_PI_3).abs() < 1e-12 && kd.abs() < 1e-12);
        let mut m = 0;
        assert_eq!(sq_symmetry_index(f, &mut m), SqStatus::Ok);
        assert_eq!(m, 6);

        let mut json = ptr::null_mut();
        assert_eq!(sq_curvature_to_json(f, &mut json), SqStatus::Ok);
        let json = CString::new(owned(json)).unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(sq_curvature_from_json(json.as_ptr(), &mut g), SqStatus::Ok);
        let mut same = 0;
        let mut shift = f64::NAN;
        assert_eq!(sq_congruent(f, g, 0, &mut same, &mut shift), SqStatus::Ok);
        assert_eq!(same, 1);
        assert!(shift.abs() < 1e-6 || (shift - 8.0).abs() < 1e-6);

        let other = gallery("cinf2");
        assert_eq!(sq_congruent(f, other, 0, &mut same, ptr::null_mut()), SqStatus::Ok);
        assert_eq!(same, 0);
        for h in [f, g, other] {
            sq_curvature_free(h);
        }
    }
}

#[test]
fn quiver_words_and_synthesis() {
    unsafe {
        let f = gallery("mn");
        let mut q = ptr::null_mut();
        assert_eq!(sq_quiver_build(f, &mut q), SqStatus::Ok);
        let (mut nv, mut ne) = (0, 0);
        assert_eq!(sq_quiver_counts(q, &mut nv, &mut ne), SqStatus::Ok);
        assert_eq!((nv, ne), (4, 8));
        let (mut m, mut sig) = (0, 0);
        assert_eq!(sq_quiver_indices(q, &mut m, &mut sig), SqStatus::Ok);
        assert_eq!((m, sig), (5, 5));
        let mut total = 0.0;
        for i in 0..ne {
            let (mut label, mut from, mut to, mut mu, mut omega) = (0 as c_char, 0, 0, 0, 0.0);
            assert_eq!(sq_quiver_edge(q, i, &mut label, &mut from, &mut to, &mut mu, &mut omega), SqStatus::Ok);
            assert_eq!(mu, 5);
            total += mu as f64 * omega;
        }
        assert!((total + 2.0 * std::f64::consts::PI).abs() < 1e-5);
        let (mut label, mut x, mut mu, mut omega) = (0 as c_char, 0, 0, 0.0);
        let mut y = 0;
        assert_eq!(sq_quiver_edge(q, 99, &mut label, &mut x, &mut y, &mut mu, &mut omega), SqStatus::InvalidArgument);

        let all = CString::new("all=1").unwrap();
        let mut list = ptr::null_mut();
        let mut truncated = -1;
        assert_eq!(sq_words_enumerate(q, all.as_ptr(), 100, &mut list, &mut truncated), SqStatus::Ok);
        let list = owned(list);
        assert_eq!(list.lines().count(), 5);
        assert_eq!(truncated, 0);
        let mut count = 0u64;
        assert_eq!(sq_words_count(q, all.as_ptr(), &mut count), SqStatus::Ok);
        assert_eq!(count, 5);

        // one period turns by -2π/5, so the curve closes after five repeats
        let first = CString::new(format!("({})^5", list.lines().next().unwrap())).unwrap();
        let mut c = ptr::null_mut();
        let mut report = ptr::null_mut();
        assert_eq!(sq_synthesize(q, first.as_ptr(), 0, 0, &mut c, &mut report), SqStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&owned(report)).unwrap();
        assert_eq!(report["closed"], true);
        let mut gap = 1.0;
        assert_eq!(sq_curve_closure_gap(c, &mut gap), SqStatus::Ok);
        assert!(gap < 1e-4);
        sq_curve_free(c);

        let bad = CString::new("aa").unwrap();
        assert_eq!(sq_synthesize(q, bad.as_ptr(), 0, 0, &mut c, ptr::null_mut()), SqStatus::NotAPath);
        assert!(last_error().contains("not a path"), "{}", last_error());
        let junk = CString::new("(ab").unwrap();
        assert_eq!(sq_synthesize(q, junk.as_ptr(), 0, 0, &mut c, ptr::null_mut()), SqStatus::Parse);

        let mut json = ptr::null_mut();
        assert_eq!(sq_quiver_to_json(q, &mut json), SqStatus::Ok);
        let json = CString::new(owned(json)).unwrap();
        let mut q2 = ptr::null_mut();
        assert_eq!(sq_quiver_from_json(json.as_ptr(), &mut q2), SqStatus::Ok);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(sq_quiver_to_dot(q, &mut a), SqStatus::Ok);
        assert_eq!(sq_quiver_to_dot(q2, &mut b), SqStatus::Ok);
        assert_eq!(owned(a), owned(b));

        sq_quiver_free(q);
        sq_quiver_free(q2);
        sq_curvature_free(f);
    }
}

#[test]
fn curves_through_the_boundary() {
    unsafe {
        let f = gallery("simple-sig");
        let mut c = ptr::null_mut();
        assert_eq!(sq_curve_reconstruct(f, &mut c), SqStatus::Ok);
        let mut n = 0;
        assert_eq!(sq_curve_sample_count(c, &mut n), SqStatus::Ok);
        let mut xy = vec![0.0; 2 * n];
        let mut written = 0;
        assert_eq!(sq_curve_points(c, xy.as_mut_ptr(), n, &mut written), SqStatus::Ok);
        assert_eq!(written, n);
        let mut length = 0.0;
        assert_eq!(sq_curve_length(c, &mut length), SqStatus::Ok);
        assert!((length - 10.0 * std::f64::consts::PI).abs() < 1e-9);

        // the same points, rotated, rebuilt from coordinates alone
        let (s, co) = 0.7f64.sin_cos();
        let moved: Vec<f64> = xy.chunks(2).flat_map(|p| [co * p[0] - s * p[1] + 3.0, s * p[0] + co * p[1] - 1.0]).collect();
        let mut d = ptr::null_mut();
        assert_eq!(sq_curve_from_points(moved.as_ptr(), n, 1, &mut d), SqStatus::Ok);
        let (mut k, mut kd) = (0.0, 0.0);
        assert_eq!(sq_curve_curvature_at(d, 0, &mut k, &mut kd), SqStatus::Ok);
        assert!((k - 1.2).abs() < 1e-5, "{k}");
        let mut same = 0;
        assert_eq!(sq_curves_congruent(c, d, &mut same), SqStatus::Ok);
        assert_eq!(same, 1);
        assert_eq!(sq_curve_curvature_at(d, n, &mut k, &mut kd), SqStatus::InvalidArgument);

        sq_curve_free(c);
        sq_curve_free(d);
        sq_curvature_free(f);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(sq_curvature_from_json(ptr::null(), &mut h), SqStatus::InvalidArgument);
        let bad = CString::new("{\"period\": 1}").unwrap();
        assert_eq!(sq_curvature_from_json(bad.as_ptr(), &mut h), SqStatus::Parse);
        assert!(!last_error().is_empty());
        let name = CString::new("nope").unwrap();
        assert_eq!(sq_curvature_gallery(name.as_ptr(), &mut h), SqStatus::InvalidArgument);
        let name = CString::new("degenerate").unwrap();
        assert_eq!(sq_curvature_gallery(name.as_ptr(), &mut h), SqStatus::InvalidArgument);

        let f = gallery("simple-sig");
        let mut q = ptr::null_mut();
        assert_eq!(sq_quiver_build(f, &mut q), SqStatus::SimpleSignature);
        assert!(q.is_null());
        let sine = gallery("sine");
        let mut m = 0;
        assert_eq!(sq_symmetry_index(sine, &mut m), SqStatus::NotClosed);
        assert_eq!(sq_curvature_period(f, ptr::null_mut()), SqStatus::InvalidArgument);
        // success clears the message
        let mut p = 0.0;
        assert_eq!(sq_curvature_period(f, &mut p), SqStatus::Ok);
        assert!(sq_last_error().is_null());
        sq_curvature_free(f);
        sq_curvature_free(sine);
        sq_curvature_free(ptr::null_mut());
        sq_string_free(ptr::null_mut());
    }
}
