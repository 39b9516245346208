use std::ffi::{CStr, CString};
use std::ptr;

use bloch_lab_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = bl_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn z(re: f64, im: f64) -> BlComplex {
    BlComplex { re, im }
}

#[test]
fn space_norm_and_errors() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(bl_space_new(2, 2.0, &mut s), BlStatus::Ok);
        assert!(bl_last_error().is_null());
        let v = [z(3.0, 0.0), z(0.0, 4.0)];
        let mut n = 0.0;
        assert_eq!(bl_space_norm(s, v.as_ptr(), 2, &mut n), BlStatus::Ok);
        assert!((n - 5.0).abs() < 1e-14);
        assert_eq!(bl_space_norm(s, v.as_ptr(), 1, &mut n), BlStatus::InvalidArgument);
        assert!(last_error().contains("dimension"));
        assert_eq!(bl_space_norm(ptr::null(), v.as_ptr(), 2, &mut n), BlStatus::NullPointer);
        bl_space_free(s);

        let mut bad = ptr::null_mut();
        assert_eq!(bl_space_new(2, 1.0, &mut bad), BlStatus::InvalidArgument);
        assert!(bad.is_null());
        assert!(last_error().contains("p = 1"));
    }
}

#[test]
fn witness_seminorm_is_one() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(bl_space_new(1, 2.0, &mut s), BlStatus::Ok);
        let mut f = ptr::null_mut();
        let json = c(r#"{"variant":"witness","z0":[0.5,0.2],"e":[[1,0]]}"#);
        assert_eq!(bl_function_from_json(json.as_ptr(), &mut f), BlStatus::Ok);
        assert_eq!(bl_function_dim(f), 1);
        let mut est = BlNormEstimate { value: 0.0, argmax: z(0.0, 0.0), uncertainty: 0.0 };
        assert_eq!(bl_seminorm(s, f, ptr::null(), &mut est), BlStatus::Ok);
        assert!((est.value - 1.0).abs() < 1e-6, "{}", est.value);
        assert!((est.argmax.re - 0.5).abs() < 1e-3 && (est.argmax.im - 0.2).abs() < 1e-3);

        // The witness vanishes at 0, so both norms agree.
        let mut star = est;
        let g = bl_grid_default();
        assert_eq!(bl_norm_star(s, f, &g, &mut star), BlStatus::Ok);
        assert!((star.value - est.value).abs() < 1e-15);

        // f(z0) = z0 e
        let mut out = [z(0.0, 0.0)];
        assert_eq!(bl_function_eval(f, z(0.5, 0.2), out.as_mut_ptr(), 1), BlStatus::Ok);
        assert!((out[0].re - 0.5).abs() < 1e-15 && (out[0].im - 0.2).abs() < 1e-15);
        assert_eq!(bl_function_eval(f, z(1.0, 0.0), out.as_mut_ptr(), 1), BlStatus::InvalidArgument);

        let mut text = ptr::null_mut();
        assert_eq!(bl_function_to_json(f, &mut text), BlStatus::Ok);
        assert!(CStr::from_ptr(text).to_str().unwrap().contains("witness"));
        bl_string_free(text);
        bl_function_free(f);
        bl_space_free(s);
    }
}

#[test]
fn malformed_json_is_a_descriptor_error() {
    unsafe {
        let mut f = ptr::null_mut();
        let json = c(r#"{"variant":"poly","coeffs":"#);
        assert_eq!(bl_function_from_json(json.as_ptr(), &mut f), BlStatus::Descriptor);
        assert!(f.is_null());
        assert_eq!(bl_function_from_json(ptr::null(), &mut f), BlStatus::NullPointer);
        let raw = [0xffu8, 0];
        assert_eq!(bl_function_from_json(raw.as_ptr().cast(), &mut f), BlStatus::InvalidUtf8);
    }
}

#[test]
fn mobius_round_trip() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(bl_mobius_new(z(0.0, 1.0), z(0.3, -0.1), &mut m), BlStatus::Ok);
        let mut inv = ptr::null_mut();
        assert_eq!(bl_mobius_inverse(m, &mut inv), BlStatus::Ok);
        let mut id = ptr::null_mut();
        assert_eq!(bl_mobius_compose(m, inv, &mut id), BlStatus::Ok);
        let mut one = ptr::null_mut();
        assert_eq!(bl_mobius_new(z(1.0, 0.0), z(0.0, 0.0), &mut one), BlStatus::Ok);
        let mut d = 1.0;
        assert_eq!(bl_mobius_distance(id, one, &mut d), BlStatus::Ok);
        assert!(d < 1e-14);

        let mut w = z(0.0, 0.0);
        assert_eq!(bl_mobius_map(m, z(0.3, -0.1), &mut w), BlStatus::Ok);
        assert!(w.re.abs() < 1e-15 && w.im.abs() < 1e-15);
        // φ'(a) = λ / (1 - |a|^2)
        let mut dw = z(0.0, 0.0);
        assert_eq!(bl_mobius_derivative(m, z(0.3, -0.1), &mut dw), BlStatus::Ok);
        assert!(dw.re.abs() < 1e-14 && (dw.im - 1.0 / 0.9).abs() < 1e-13);

        let (mut l, mut a) = (z(0.0, 0.0), z(0.0, 0.0));
        assert_eq!(bl_mobius_canonical(m, &mut l, &mut a), BlStatus::Ok);
        assert!((l.im - 1.0).abs() < 1e-14 && (a.re - 0.3).abs() < 1e-14 && (a.im + 0.1).abs() < 1e-14);

        assert_eq!(bl_mobius_new(z(2.0, 0.0), z(0.0, 0.0), &mut one), BlStatus::InvalidArgument);
        for h in [m, inv, id, one] {
            bl_mobius_free(h);
        }
        bl_mobius_free(ptr::null_mut());
    }
}

#[test]
fn flow_members_compose() {
    unsafe {
        let mut fl = ptr::null_mut();
        let json = c(r#"{"kind":"parabolic","c":0.7,"alpha":[0,1]}"#);
        assert_eq!(bl_flow_from_json(json.as_ptr(), &mut fl), BlStatus::Ok);
        let (mut a, mut b, mut ab, mut sum) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(bl_flow_at(fl, 0.4, &mut a), BlStatus::Ok);
        assert_eq!(bl_flow_at(fl, -1.1, &mut b), BlStatus::Ok);
        assert_eq!(bl_flow_at(fl, -0.7, &mut sum), BlStatus::Ok);
        assert_eq!(bl_mobius_compose(a, b, &mut ab), BlStatus::Ok);
        let mut d = 1.0;
        assert_eq!(bl_mobius_distance(ab, sum, &mut d), BlStatus::Ok);
        assert!(d < 1e-10);
        assert_eq!(bl_flow_at(fl, f64::NAN, &mut a), BlStatus::InvalidArgument);
        for h in [a, b, ab, sum] {
            bl_mobius_free(h);
        }
        bl_flow_free(fl);

        let bad = c(r#"{"kind":"hyperbolic","c":1,"alpha":[1,0],"beta":[1,0]}"#);
        assert_eq!(bl_flow_from_json(bad.as_ptr(), &mut fl), BlStatus::Descriptor);
    }
}

#[test]
fn operators_apply_and_reject() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(bl_space_new(2, 3.0, &mut s), BlStatus::Ok);
        // Coordinate swap composed with a rotation by i.
        let iso = c(r#"{"variant":"comp_iso","S":[[[0,0],[1,0]],[[1,0],[0,0]]],"sigma":{"lambda":[0,1],"a":[0,0]}}"#);
        let mut op = ptr::null_mut();
        assert_eq!(bl_operator_from_json(s, iso.as_ptr(), &mut op), BlStatus::Ok);
        let mut f = ptr::null_mut();
        let fj = c(r#"{"variant":"poly","coeffs":[[[0,0],[0,0]],[[1,0],[0,0]]]}"#);
        assert_eq!(bl_function_from_json(fj.as_ptr(), &mut f), BlStatus::Ok);
        let mut g = ptr::null_mut();
        assert_eq!(bl_operator_apply(op, f, &mut g), BlStatus::Ok);
        let mut out = [z(0.0, 0.0); 2];
        assert_eq!(bl_function_eval(g, z(0.5, 0.0), out.as_mut_ptr(), 2), BlStatus::Ok);
        // (z e_1) ∘ (i z) swapped = (0, i z)
        assert!(out[0].re.abs() < 1e-15 && out[0].im.abs() < 1e-15);
        assert!(out[1].re.abs() < 1e-15 && (out[1].im - 0.5).abs() < 1e-15);

        // Not in B0.
        let cj = c(r#"{"variant":"poly","coeffs":[[[1,0],[0,0]]]}"#);
        let mut k = ptr::null_mut();
        assert_eq!(bl_function_from_json(cj.as_ptr(), &mut k), BlStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(bl_operator_apply(op, k, &mut h), BlStatus::NotInB0);
        assert!(h.is_null());

        // A shear is not an isometry of l^3.
        let shear = c(r#"{"variant":"comp_iso","S":[[[1,0],[1,0]],[[0,0],[1,0]]],"sigma":{"lambda":[1,0],"a":[0,0]}}"#);
        let mut bad = ptr::null_mut();
        assert_eq!(bl_operator_from_json(s, shear.as_ptr(), &mut bad), BlStatus::NotIsometry);
        // gbp over a non-reflection.
        let gbp = c(&format!(r#"{{"variant":"gbp","T":{}}}"#, iso.to_str().unwrap()));
        assert_eq!(bl_operator_from_json(s, gbp.as_ptr(), &mut bad), BlStatus::NotReflection);

        for x in [f, g, k] {
            bl_function_free(x);
        }
        bl_operator_free(op);
        bl_space_free(s);
    }
}

#[test]
fn suite_over_the_abi() {
    unsafe {
        let mut out = ptr::null_mut();
        let mut ok = false;
        assert_eq!(bl_run_suite(ptr::null(), c("disc").as_ptr(), &mut out, &mut ok), BlStatus::Ok);
        assert!(ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        bl_string_free(out);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].contains(r#""type":"coverage""#));
        assert!(lines.last().unwrap().contains(r#""type":"summary""#));

        assert_eq!(bl_run_suite(ptr::null(), c("nope").as_ptr(), &mut out, &mut ok), BlStatus::UnknownSuite);
        assert_eq!(bl_run_suite(c(r#"{"seed":1,"bogus":2}"#).as_ptr(), c("disc").as_ptr(), &mut out, &mut ok), BlStatus::Descriptor);
        assert_eq!(bl_run_suite(c(r#"{"tolerances":{"norm":-1}}"#).as_ptr(), c("disc").as_ptr(), &mut out, &mut ok), BlStatus::Config);
    }
}

#[test]
fn status_messages_are_static() {
    let s = unsafe { CStr::from_ptr(bl_status_message(BlStatus::NotReflection)) };
    assert_eq!(s.to_str().unwrap(), "not a reflection");
}

#[test]
fn errors_are_thread_local() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(bl_space_new(2, f64::NAN, &mut s), BlStatus::InvalidArgument);
        assert_eq!(bl_space_new(0, 2.0, &mut s), BlStatus::Config);
        std::thread::spawn(|| assert!(bl_last_error().is_null())).join().unwrap();
        assert!(!bl_last_error().is_null());
    }
}
