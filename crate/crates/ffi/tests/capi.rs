use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use cone_poisson_ffi::*;

const TORUS: &str = include_str!("../../core/data/torus-equilateral.json");
const LONG_EDGE: &str = include_str!("../../core/data/long-edge-torus.json");
const NEAR_WALL: &str = include_str!("../../core/data/near-wall.json");
const BAD: &str = include_str!("../../core/data/bad-triangle.json");

fn load(json: &str) -> (CpStatus, *mut CpSurface) {
    let c = CString::new(json).unwrap();
    let mut h = ptr::null_mut();
    let st = unsafe { cp_surface_from_json(c.as_ptr(), &mut h) };
    (st, h)
}

fn last_error() -> String {
    let p = cp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn torus_round_trip() {
    let (st, h) = load(TORUS);
    assert_eq!(st, CpStatus::Ok);
    let (mut g, mut n, mut e) = (0, 0, 0);
    assert_eq!(unsafe { cp_surface_counts(h, &mut g, &mut n, &mut e) }, CpStatus::Ok);
    assert_eq!((g, n, e), (1, 1, 3));

    let mut theta = [0.0];
    assert_eq!(unsafe { cp_surface_cone_angles(h, theta.as_mut_ptr(), 1) }, CpStatus::Ok);
    let c = 1f64.cosh();
    assert!((theta[0] - 6.0 * (c / (c + 1.0)).acos()).abs() < 1e-12);

    let mut p = [0.0; 9];
    assert_eq!(unsafe { cp_eta_matrix(h, p.as_mut_ptr(), 9) }, CpStatus::Ok);
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(p[3 * i + j], -p[3 * j + i]);
        }
    }
    let mut r = [1.0];
    assert_eq!(unsafe { cp_radical_residuals(h, r.as_mut_ptr(), 1) }, CpStatus::Ok);
    assert!(r[0] < 1e-8);
    let mut jac = 1.0;
    assert_eq!(unsafe { cp_jacobi_residual(h, 2, &mut jac) }, CpStatus::Ok);
    assert!(jac < 1e-5);

    let json = unsafe { cp_surface_to_json(h) };
    assert!(!json.is_null());
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { cp_string_free(json) };
    let (st2, h2) = load(&text);
    assert_eq!(st2, CpStatus::Ok);
    let mut lengths = [0.0; 3];
    assert_eq!(unsafe { cp_surface_lengths(h2, lengths.as_mut_ptr(), 3) }, CpStatus::Ok);
    assert_eq!(lengths, [1.0, 1.0, 1.0]);
    unsafe {
        cp_surface_free(h2);
        cp_surface_free(h);
    }
}

#[test]
fn errors_are_reported() {
    let (st, h) = load(BAD);
    assert_eq!(st, CpStatus::Input);
    assert!(h.is_null());
    assert!(last_error().contains("triangle inequality"));

    let (st, h) = load("{not json");
    assert_eq!(st, CpStatus::Input);
    assert!(h.is_null());

    let (_, h) = load(NEAR_WALL);
    let mut p = [0.0; 36];
    assert_eq!(unsafe { cp_eta_matrix(h, p.as_mut_ptr(), 36) }, CpStatus::Wall);
    assert!(last_error().contains("vertex 0"));
    unsafe { cp_surface_free(h) };

    let (_, h) = load(TORUS);
    let mut small = [0.0; 4];
    assert_eq!(unsafe { cp_eta_matrix(h, small.as_mut_ptr(), 4) }, CpStatus::BufferTooSmall);
    assert!(last_error().contains("9"));
    assert_eq!(unsafe { cp_eta_matrix(h, ptr::null_mut(), 9) }, CpStatus::NullPointer);
    unsafe { cp_surface_free(h) };

    assert_eq!(unsafe { cp_surface_counts(ptr::null(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut()) }, CpStatus::NullPointer);
    assert!(unsafe { cp_surface_to_json(ptr::null()) }.is_null());
    unsafe { cp_surface_free(ptr::null_mut()) };
}

#[test]
fn delaunay_handle() {
    let (_, h) = load(LONG_EDGE);
    let mut d = ptr::null_mut();
    let mut flips = 0;
    assert_eq!(unsafe { cp_make_delaunay(h, &mut d, &mut flips) }, CpStatus::Ok);
    assert!(flips >= 1);
    let mut a = [0.0];
    let mut b = [0.0];
    unsafe {
        cp_surface_cone_angles(h, a.as_mut_ptr(), 1);
        cp_surface_cone_angles(d, b.as_mut_ptr(), 1);
        cp_surface_free(d);
        cp_surface_free(h);
    }
    assert!((a[0] - b[0]).abs() < 1e-9);
}

#[test]
fn status_strings_and_trace() {
    let s = unsafe { CStr::from_ptr(cp_status_string(CpStatus::Wall)) };
    assert_eq!(s.to_str().unwrap(), "cone angle on a wall");
    let t = cp_elliptic_product_trace(1.0, 2.0, 0.0);
    assert!((t - 2.0 * 1.5f64.cos().abs()).abs() < 1e-12);
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/cone_poisson.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["cp_surface_from_json", "cp_eta_matrix", "cp_make_delaunay", "cp_last_error", "CP_STATUS_WALL"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = std::env::temp_dir().join(format!("cp_header_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("check.c");
    std::fs::write(&src, "#include \"cone_poisson.h\"\nint main(void) { return cp_status_string(CP_STATUS_OK) == 0; }\n").unwrap();
    let Ok(out) = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg(format!("-I{}", header.parent().unwrap().display()))
        .arg(&src)
        .output()
    else {
        eprintln!("no C compiler found; syntax check skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let _ = std::fs::remove_dir_all(dir);
}
