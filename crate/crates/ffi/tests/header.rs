//! The generated header declares the whole API and compiles as C.

use std::path::{Path, PathBuf};
use std::process::Command;

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/nodal_theta.h")
}

#[test]
fn header_declares_every_entry_point() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "nt_last_error_message",
        "nt_theta",
        "nt_curve_new",
        "nt_curve_free",
        "nt_curve_periods",
        "nt_phi",
        "nt_big_theta",
        "nt_frak_t",
        "nt_count_zeros",
        "nt_locate_zeros",
        "nt_riemann_constants",
        "typedef struct nt_curve nt_curve;",
        "NT_STATUS_OK = 0",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
}

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "nodal_theta.h"

int main(void) {
    nt_curve_spec spec = {{0.0, 1.0}, {0.62, 0.55}, {0.31, 0.38}, {0.15, 0.8}, {0.0, 0.0},
                          0.05, 0.05, 1e-12, 1e-14, 64};
    nt_curve *h = NULL;
    if (nt_curve_new(&spec, &h) != NT_STATUS_OK) return 1;
    nt_complex c1 = {0.37, 0.21}, c2 = {0.13, -0.05};
    int64_t n = 0;
    if (nt_count_zeros(h, c1, c2, &n) != NT_STATUS_OK || n != 2) return 2;
    nt_curve_free(h);
    spec.eps = -1.0;
    if (nt_curve_new(&spec, &h) != NT_STATUS_INVALID_PARAMETER) return 3;
    char msg[128];
    size_t len = 0;
    nt_last_error_message(msg, sizeof msg, &len);
    if (len == 0) return 4;
    printf("ok %s\n", msg);
    return 0;
}
"#;

/// Compile and run a C client against the static library when a C
/// compiler is on the path.
#[test]
fn c_client_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libnodal_theta_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or no cc");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let bin = dir.path().join("client");
    let out = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
