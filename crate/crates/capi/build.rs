use std::path::Path;

fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("cargo sets the manifest dir");
    let header = Path::new(&crate_dir).join("include").join("hsmc.h");

    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("HSMC_H".into()),
        cpp_compat: true,
        documentation: true,
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            ..Default::default()
        },
        ..Default::default()
    };

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("header generation succeeds")
        .write_to_file(header);

    println!("cargo:rerun-if-changed=src/lib.rs");
}
