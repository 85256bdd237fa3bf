use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header = crate_dir.join("include").join("limitroots.h");
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("LIMITROOTS_H".to_string()),
        cpp_compat: true,
        documentation: true,
        header: Some("/* C interface for the limitroots library. */".to_string()),
        ..Default::default()
    };
    match cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
    {
        Ok(bindings) => {
            bindings.write_to_file(header);
        }
        Err(e) => {
            // Header generation failing should not break `cargo build` for
            // consumers without the committed header being regenerated.
            println!("cargo:warning=cbindgen failed: {e}");
        }
    }
    println!("cargo:rerun-if-changed=src/lib.rs");
}
