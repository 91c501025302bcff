//! Compile and run a small C program against the generated header and
//! the static library.

use std::path::PathBuf;
use std::process::Command;

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "typetwo.h"

int main(void) {
    TtSop *sop = NULL;
    if (tt_sop_parse("L(L(n*n)) + L(L(n)*L(n)) + L(n) + 4", &sop) != TT_STATUS_OK) return 1;
    uint32_t deg = 0;
    char tag = 0;
    if (tt_sop_degree(sop, &deg, &tag) != TT_STATUS_OK) return 2;
    if (deg != 3 || tag != 'a') return 3;

    TtMonFn *square = NULL;
    if (tt_monfn_parse("poly: x^2", &square) != TT_STATUS_OK) return 4;
    char *value = NULL;
    if (tt_sop_eval(sop, square, 2, &value) != TT_STATUS_OK) return 5;
    if (strcmp(value, "520") != 0) return 6;
    tt_string_free(value);

    TtMachine *phi1 = tt_machine_phi(1);
    TtRegFn *oracle = NULL;
    if (tt_regfn_parse("pad g=poly: x + 1", &oracle) != TT_STATUS_OK) return 7;
    TtRunResult result;
    if (tt_run(phi1, oracle, "11", 0, &result) != TT_STATUS_OK) return 8;
    if (result.aborted || strcmp(result.output, "000") != 0) return 9;
    tt_string_free(result.output);

    tt_regfn_free(oracle);
    tt_machine_free(phi1);
    tt_monfn_free(square);
    tt_sop_free(sop);
    printf("ok\n");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include_dir = manifest.join("include");

    // make sure the staticlib artifact is current (plain `cargo test`
    // only links the rlib)
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let build = Command::new(cargo)
        .args(["build", "-p", "typetwo-ffi"])
        .current_dir(&manifest)
        .output()
        .expect("cargo runs");
    assert!(
        build.status.success(),
        "staticlib build failed:\n{}",
        String::from_utf8_lossy(&build.stderr)
    );

    let lib_dir = target_dir();
    let staticlib = lib_dir.join("libtypetwo_ffi.a");
    assert!(staticlib.exists(), "static library at {}", staticlib.display());

    let work = std::env::temp_dir().join(format!("typetwo-c-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("smoke.c");
    let bin = work.join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();

    let compile = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include_dir)
        .arg(&staticlib)
        .arg("-lpthread")
        .arg("-ldl")
        .arg("-lm")
        .arg("-o")
        .arg(&bin)
        .output()
        .expect("cc available");
    assert!(
        compile.status.success(),
        "compile failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&bin).output().expect("smoke binary runs");
    assert!(
        run.status.success(),
        "smoke binary exited with {:?}:\n{}",
        run.status.code(),
        String::from_utf8_lossy(&run.stdout)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
    let _ = std::fs::remove_dir_all(&work);
}

/// The debug artifact directory for this build.
fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps; the staticlib lives one level up
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}
