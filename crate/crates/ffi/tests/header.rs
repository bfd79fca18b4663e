use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "centroflow.h"

int main(void) {
    const double coords[] = {10, 22, 1, 8, 2, 1, 21, 0, 1, 37, 2, 1, 48, 28, 1};
    CfPolygon *p = NULL;
    CfSignature *s = NULL;
    CfInvariants inv;
    if (cf_polygon_new(3, coords, 5, true, &p) != CF_STATUS_OK) return 1;
    if (cf_signature_compute(p, &s) != CF_STATUS_OK) return 2;
    if (cf_signature_get(s, 0, &inv) != CF_STATUS_OK) return 3;
    if (cf_flow_step(p, CF_FLOW_KIND_PENTAGRAM, 0, 0, NULL) != CF_STATUS_NULL_POINTER) return 4;
    printf("%.6f %s\n", inv.kappa, cf_version());
    cf_signature_free(s);
    cf_polygon_free(p);
    return 0;
}
"#;

fn include_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn cc_available() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(include_dir().join("centroflow.h")).unwrap();
    for name in [
        "cf_polygon_new",
        "cf_polygon_free",
        "cf_polygon_len",
        "cf_polygon_dim",
        "cf_polygon_coords",
        "cf_signature_compute",
        "cf_signature_len",
        "cf_signature_offset",
        "cf_signature_get",
        "cf_signature_free",
        "cf_closure_check",
        "cf_flow_step",
        "cf_match",
        "cf_generate_regular",
        "cf_last_error_message",
        "cf_version",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("CF_STATUS_BUFFER_TOO_SMALL = 5"));
}

#[test]
fn c_program_links_against_static_library() {
    if !cc_available() {
        eprintln!("cc not found, skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();

    let syntax =
        Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"]).arg(include_dir()).arg(&src).output().unwrap();
    assert!(syntax.status.success(), "{}", String::from_utf8_lossy(&syntax.stderr));

    // the test binary sits next to the freshly built library in target/<profile>/deps
    let lib = std::env::current_exe().unwrap().with_file_name("libcentroflow_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping link step", lib.display());
        return;
    }
    let exe = dir.path().join("main");
    let link = Command::new("cc")
        .arg("-I")
        .arg(include_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(link.status.success(), "{}", String::from_utf8_lossy(&link.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert_eq!(stdout.trim(), format!("0.352941 {}", env!("CARGO_PKG_VERSION")));
}
