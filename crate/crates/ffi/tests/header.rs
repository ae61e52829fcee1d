use std::path::Path;
use std::process::Command;

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/iecount.h")).unwrap();
    for name in [
        "iec_last_error",
        "iec_string_free",
        "iec_generators_parse",
        "iec_generators_free",
        "iec_generators_ground_size",
        "iec_generators_complex",
        "iec_rows_free",
        "iec_rows_len",
        "iec_rows_face_count",
        "iec_rows_total",
        "iec_rows_to_string",
        "iec_formula_parse",
        "iec_formula_free",
        "iec_formula_model_count",
        "iec_formula_model_count_k",
        "iec_count_compositions",
        "iec_count_permutations",
        "IEC_STATUS_BUDGET_EXCEEDED",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Compiles a small C client against the header when a C compiler is present.
#[test]
fn header_compiles_as_c() {
    let dir = std::env::temp_dir().join(format!("iecount-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("client.c");
    std::fs::write(
        &src,
        r#"#include "iecount.h"
int run(const char *text) {
    IecFormula *f = NULL;
    char *count = NULL;
    if (iec_formula_parse(text, &f) != IEC_STATUS_OK) return 1;
    IecStatus st = iec_formula_model_count(f, &count);
    iec_string_free(count);
    iec_formula_free(f);
    return st == IEC_STATUS_OK ? 0 : 2;
}
"#,
    )
    .unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "C compiler rejected the header"),
        Err(e) => eprintln!("no C compiler available ({e}); header not compiled"),
    }
}
