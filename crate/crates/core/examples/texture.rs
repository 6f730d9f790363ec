//! Haralick features of synthetic phantoms, with the per-segment rows used
//! by the `S` setup.

use rebalance::synth::phantom_image;
use rebalance::texture::{self, TextureConfig};

fn main() -> rebalance::Result<()> {
    let cfg = TextureConfig::default();
    let names = texture::feature_names();
    for textured in [false, true] {
        let img = phantom_image(64, 72, textured, 3);
        let pre = texture::preprocess(&img, &cfg)?;
        let records = texture::extract_features(&pre.image, Some(&pre.mask), &cfg)?;
        println!("textured = {textured}");
        for r in &records {
            let head: Vec<String> = r.values.iter().take(4).map(|v| format!("{v:.4}")).collect();
            println!("  {:<6} {}={} ...", r.segment.name(), names[..4].join(","), head.join(","));
        }
    }
    let out = std::env::temp_dir().join("rebalance_phantom.pgm");
    texture::write_pgm(&phantom_image(64, 72, true, 3), &out)?;
    println!("wrote {}", out.display());
    Ok(())
}
