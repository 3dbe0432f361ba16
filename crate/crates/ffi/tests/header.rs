use std::path::Path;
use std::process::Command;

#[test]
fn header_compiles_as_c99() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = include.join("mlsp.h");
    assert!(header.exists(), "build script did not write {}", header.display());

    let dir = tempfile::TempDir::new().unwrap();
    let src = dir.path().join("use_header.c");
    std::fs::write(
        &src,
        "#include \"mlsp.h\"\n\
         int main(void) {\n\
           MlspParams p = { 1, 1.0, MLSP_MODE_COMBINED };\n\
           MlspNetwork *net = 0;\n\
           MlspStatus s = mlsp_network_load_csv(\"x.csv\", MLSP_POLARITY_POSITIVE, false, &net);\n\
           (void)p; (void)s;\n\
           return 0;\n\
         }\n",
    )
    .unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = match Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        Err(_) => {
            eprintln!("no C compiler ({cc}) available, skipping");
            return;
        }
    };
    assert!(status.success());
}
