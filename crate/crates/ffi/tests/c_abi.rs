//! Builds the static library, compiles `c/smoke.c` against the generated header
//! and compares its output with the same calls made from Rust.

use qsnp_ffi::*;
use std::path::{Path, PathBuf};
use std::process::Command;

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

fn field<'a>(out: &'a str, key: &str) -> Vec<&'a str> {
    let line = out.lines().find(|l| l.starts_with(key)).unwrap_or_else(|| panic!("no `{key}` in:\n{out}"));
    line[key.len()..].split_whitespace().collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn c_program_links_and_agrees() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let target = target_dir();
    let status = Command::new(env!("CARGO"))
        .args(["build", "-q", "-p", "qsnp-ffi", "--lib", "--target-dir"])
        .arg(&target)
        .current_dir(manifest)
        .status()
        .expect("cargo");
    assert!(status.success());
    let lib = target.join("debug").join("libqsnp_ffi.a");
    assert!(lib.exists(), "{}", lib.display());

    let work = tempfile::tempdir().unwrap();
    let exe = work.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .output()
        .expect("C compiler");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let run = Command::new(&exe).output().unwrap();
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(run.status.success(), "{text}");

    let mut m = std::ptr::null_mut();
    let (mut vg, mut ex) = (0.0, 0.0);
    let mut snr = QsnpSnr::default();
    unsafe {
        assert_eq!(qsnp_medium_new(3e15, 1e-18, -1.0, 1e12, 1.0, 1.0, 1e-4, &mut m), QsnpStatus::Ok);
        qsnp_group_velocity(m, 1e11, &mut vg, &mut ex);
        qsnp_peak_snr(m, 1.0, 1e-10, 1e11, 1.0 / 2.99792458e10, &mut snr);
        qsnp_medium_free(m);
    }
    let v = field(&text, "v_g ");
    assert_eq!(num(v[0]), vg);
    assert_eq!(num(v[2]), ex);
    let z = field(&text, "zero detuning status ");
    assert_eq!(z[0], format!("{}:", QsnpStatus::Domain as i32));
    assert!(text.contains("divergence"));
    let s = field(&text, "snr ");
    assert_eq!(num(s[0]), snr.form_qa3);
    assert_eq!(num(s[1]), snr.form_qa4);
    assert_eq!(num(s[2]), snr.form_new1);
    // I0(2) = 2.2795853023360673
    assert!((num(field(&text, "i0 ")[0]) - 2.2795853023360673).abs() < 1e-15);
    // unit-normalized packet
    assert!((num(field(&text, "norm ")[0]) - 1.0).abs() < 1e-6);
}
