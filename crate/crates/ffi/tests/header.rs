//! Builds a C program against the generated header and the shared library.

use std::path::{Path, PathBuf};
use std::process::Command;

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// target/<profile>, where cargo leaves the cdylib next to deps/.
fn lib_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(manifest().join("include/movcone.h")).unwrap();
    for name in [
        "typedef struct MovconeCase MovconeCase;",
        "typedef struct MovconeCone MovconeCone;",
        "MOVCONE_STATUS_NOT_CALABI_YAU = 3",
        "const char *movcone_last_error(void);",
        "enum MovconeStatus movcone_cone_map(",
        "void movcone_string_free(char *s);",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let libs = lib_dir();
    assert!(libs.join("libmovcone_ffi.so").exists(), "no shared library in {}", libs.display());
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest().join("include"))
        .arg(manifest().join("tests/c/smoke.c"))
        .arg("-L")
        .arg(&libs)
        .arg("-lmovcone_ffi")
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("a C compiler");
    assert!(status.success());
    let out = Command::new(&exe).env("LD_LIBRARY_PATH", &libs).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("generator -19 -15 90 71"), "{stdout}");
    assert!(stdout.contains("error cannot parse"), "{stdout}");
}
