// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::Command;

const PROGRAM: &str = r#"
#include "catkerr.h"
int main(void) {
    CkModel *m = NULL;
    CkDensity *rho = NULL;
    CkProtocolResult res;
    if (ck_model_new(1.0, 4.0, 0.0, 0.0, 20, &m) != CK_STATUS_OK) return 1;
    (void)ck_steady_state(m, 1, 100.0, 1e-8, &rho);
    (void)ck_gate_z(4.0, 0.8, 3.14159, 0.0, 0.0, 30, &res, NULL);
    ck_density_free(rho);
    ck_model_free(m);
    return ck_last_error() == NULL ? 0 : 2;
}
"#;

#[test]
fn header_compiles_as_c() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = std::fs::read_to_string(include.join("catkerr.h")).unwrap();
    for name in ["ck_model_new", "ck_steady_state", "ck_wigner", "ck_gate_zz", "CK_STATUS_NUMERICAL"] {
        assert!(header.contains(name), "{name} missing from header");
    }
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping compile check");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
