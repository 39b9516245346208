//! Compiles and links a C program against the generated header and the
//! static library. Skipped when no C compiler is on PATH.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "bloch_lab.h"

int main(void) {
    BlSpace *s = NULL;
    if (bl_space_new(2, 2.0, &s) != BL_STATUS_OK) return 1;
    BlFunction *f = NULL;
    const char *json = "{\"variant\":\"witness\",\"z0\":[0.3,0],\"e\":[[1,0],[0,0]]}";
    if (bl_function_from_json(json, &f) != BL_STATUS_OK) return 2;
    BlGrid g = bl_grid_default();
    BlNormEstimate est;
    if (bl_seminorm(s, f, &g, &est) != BL_STATUS_OK) return 3;
    if (est.value < 1.0 - 1e-6 || est.value > 1.0 + 1e-6) return 4;
    BlMobius *m = NULL;
    BlComplex lambda = {2.0, 0.0}, a = {0.0, 0.0};
    if (bl_mobius_new(lambda, a, &m) != BL_STATUS_INVALID_ARGUMENT) return 5;
    if (bl_last_error() == NULL || strlen(bl_last_error()) == 0) return 6;
    bl_function_free(f);
    bl_space_free(s);
    printf("ok %.9f\n", est.value);
    return 0;
}
"#;

fn have(cmd: &str) -> bool {
    Command::new(cmd).arg("--version").output().is_ok()
}

/// `target/<profile>` next to the test executable in `deps/`.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links() {
    if !have("cc") {
        eprintln!("skipping: no C compiler");
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();

    let syntax = Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"]).arg(&include).arg(&src).status().unwrap();
    assert!(syntax.success(), "header does not compile");

    let lib = profile_dir().join("libbloch_lab_ffi.a");
    if !lib.exists() {
        eprintln!("skipping link: {} not built", lib.display());
        return;
    }
    let exe = tmp.path().join("smoke");
    let st = Command::new("cc")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(st.success(), "link failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "smoke program exited with {:?}", out.status);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok 1.0000"));
}
