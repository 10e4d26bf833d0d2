//! Writes the built-in silhouettes as 256×256 binary PGMs.
//!
//! Usage: cargo run -p sdr-core --example render_fixtures [out_dir]

use std::path::PathBuf;

use sdr_core::imaging::encode_pgm;
use sdr_core::synth::silhouettes;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/silhouettes"));
    std::fs::create_dir_all(&out)?;
    for shape in silhouettes() {
        let path = out.join(format!("{}.pgm", shape.name));
        std::fs::write(&path, encode_pgm(&shape.rasterize(256)?))?;
        println!("{}", path.display());
    }
    Ok(())
}
