use std::ffi::CStr;
use std::process::{Command, Stdio};
use std::ptr;

use beaches_ffi::*;

fn interleave(v: &[(f64, f64)]) -> Vec<f64> {
    v.iter().flat_map(|&(re, im)| [re, im]).collect()
}

fn last_error() -> String {
    let p = beaches_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(beaches_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn hand_example_threshold() {
    let y = interleave(&[(3.0, 4.0), (1.0, 0.0), (0.0, 0.1)]);
    let (mut tau, mut sure) = (0.0, 0.0);
    let st = unsafe { beaches_find_tau_star(y.as_ptr(), 3, 1.0, &mut tau, &mut sure) };
    assert_eq!(st, BeachesStatus::Ok);
    assert!((tau - 1.0).abs() < 1e-12);
    assert!((sure - 0.27).abs() < 1e-12);

    let mut s = 0.0;
    assert_eq!(unsafe { beaches_sure_soft(y.as_ptr(), 3, 0.5, 1.0, &mut s) }, BeachesStatus::Ok);
    assert!((s - 0.91 / 3.0).abs() < 1e-12);
    assert_eq!(unsafe { beaches_sure_soft(y.as_ptr(), 3, 1.0, 1.0, &mut s) }, BeachesStatus::ThresholdAtMagnitude);
}

#[test]
fn beamspace_denoise_zeroes_small_entries() {
    let mut y = interleave(&[(3.0, 4.0), (1.0, 0.0), (0.0, 0.1)]);
    let mut tau = 0.0;
    let st = unsafe { beaches_denoise_beamspace(y.as_mut_ptr(), 3, 1.0, &mut tau, ptr::null_mut()) };
    assert_eq!(st, BeachesStatus::Ok);
    let expect = interleave(&[(2.4, 3.2), (0.0, 0.0), (0.0, 0.0)]);
    for (a, b) in y.iter().zip(&expect) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn handle_lifecycle_matches_transform_path() {
    let len = 64;
    let mut h = vec![0.0; 2 * len];
    assert_eq!(unsafe { beaches_generate_channel(BeachesProfile::Los, len, 5, h.as_mut_ptr()) }, BeachesStatus::Ok);
    let energy: f64 = h.iter().map(|x| x * x).sum();
    assert!((energy - len as f64).abs() < 1e-9 * len as f64);

    let mut via_handle = h.clone();
    let mut den: *mut BeachesDenoiser = ptr::null_mut();
    assert_eq!(unsafe { beaches_denoiser_new(len, 0.1, &mut den) }, BeachesStatus::Ok);
    assert!(!den.is_null());
    let mut tau_a = 0.0;
    let st = unsafe { beaches_denoiser_denoise(den, via_handle.as_mut_ptr(), len, &mut tau_a, ptr::null_mut()) };
    assert_eq!(st, BeachesStatus::Ok);
    unsafe { beaches_denoiser_free(den) };

    let mut manual = h.clone();
    let mut tau_b = 0.0;
    unsafe {
        assert_eq!(beaches_dft(manual.as_mut_ptr(), len), BeachesStatus::Ok);
        assert_eq!(
            beaches_denoise_beamspace(manual.as_mut_ptr(), len, 0.1, &mut tau_b, ptr::null_mut()),
            BeachesStatus::Ok
        );
        assert_eq!(beaches_idft(manual.as_mut_ptr(), len), BeachesStatus::Ok);
    }
    assert_eq!(tau_a, tau_b);
    for (a, b) in via_handle.iter().zip(&manual) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn dft_round_trip() {
    let orig: Vec<f64> = (0..40).map(|i| (i as f64 * 0.37).sin()).collect();
    let mut x = orig.clone();
    unsafe {
        assert_eq!(beaches_dft(x.as_mut_ptr(), 20), BeachesStatus::Ok);
        assert_eq!(beaches_idft(x.as_mut_ptr(), 20), BeachesStatus::Ok);
    }
    for (a, b) in x.iter().zip(&orig) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut out: *mut BeachesDenoiser = ptr::null_mut();
    assert_eq!(unsafe { beaches_denoiser_new(8, 0.0, &mut out) }, BeachesStatus::InvalidNoiseVariance);
    assert!(out.is_null());
    assert!(last_error().contains("noise variance"));

    assert_eq!(unsafe { beaches_denoiser_new(0, 1.0, &mut out) }, BeachesStatus::EmptyInput);
    assert_eq!(unsafe { beaches_denoiser_new(8, 1.0, ptr::null_mut()) }, BeachesStatus::NullPointer);
    assert_eq!(unsafe { beaches_dft(ptr::null_mut(), 4) }, BeachesStatus::NullPointer);

    let mut v = [f64::NAN, 0.0, 1.0, 0.0];
    assert_eq!(unsafe { beaches_soft_threshold(v.as_mut_ptr(), 2, 0.5) }, BeachesStatus::NonFinite);
    let mut v = [1.0, 0.0];
    assert_eq!(unsafe { beaches_soft_threshold(v.as_mut_ptr(), 1, -1.0) }, BeachesStatus::InvalidThreshold);

    let mut den: *mut BeachesDenoiser = ptr::null_mut();
    assert_eq!(unsafe { beaches_denoiser_new(4, 1.0, &mut den) }, BeachesStatus::Ok);
    let mut short = [1.0, 0.0, 2.0, 0.0];
    let st = unsafe { beaches_denoiser_denoise(den, short.as_mut_ptr(), 2, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(st, BeachesStatus::InvalidArgument);
    assert!(last_error().contains("length mismatch"));
    unsafe { beaches_denoiser_free(den) };
    unsafe { beaches_denoiser_free(ptr::null_mut()) };
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/beaches.h");
    let Ok(mut child) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c", "-include", header, "-"])
        .stdin(Stdio::piped())
        .spawn()
    else {
        eprintln!("no C compiler found; skipping header check");
        return;
    };
    use std::io::Write;
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"int main(void) { BeachesDenoiser *d = 0; return beaches_denoiser_new(4, 1.0, &d) == BEACHES_STATUS_OK; }\n")
        .unwrap();
    assert!(child.wait().unwrap().success());
}
