//! Compile a C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

fn compiler() -> String {
    std::env::var("CC").unwrap_or_else(|_| "cc".into())
}

#[test]
fn c_program_links_and_runs() {
    let here = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // integration tests run from target/<profile>/deps, next to the static library
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.join("libkoszulkit_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let exe = deps.join("kzk_consumer");
    let st = Command::new(compiler())
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(here.join("include"))
        .arg(here.join("tests/consumer.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(st.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok 0\n");
    assert!(out.status.success(), "{:?}", out.status);
}
