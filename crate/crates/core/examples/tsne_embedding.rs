//! Two-dimensional t-SNE of a feature table, written as an embedding artifact.
//!
//! ```text
//! cargo run --release --example tsne_embedding [out.json]
//! ```

use eeg_emotion::analysis::{tsne_embed, TsneParams};
use eeg_emotion::dataio::{generate_synthetic, write_artifact, SyntheticSpec};
use eeg_emotion::featext::Standardizer;

fn main() -> eeg_emotion::Result<()> {
    let ds = generate_synthetic(&SyntheticSpec::new(60, 12, 4.0, 5))?;
    let x = Standardizer::fit(ds.features())?.transform(ds.features())?;
    let params = TsneParams {
        perplexity: 20.0,
        ..Default::default()
    };
    let mut emb = tsne_embed(&x, &params)?;
    emb.labels = ds.labels().to_vec();

    println!("{} points, perplexity {}", emb.coordinates.len(), emb.perplexity);
    println!("max entropy error  {:.2e} bits", emb.max_entropy_error);
    println!("KL after exaggeration {:.4}", emb.kl_after_exaggeration);
    println!("final KL              {:.4}", emb.final_kl);
    for class in 0..3 {
        let pts: Vec<&[f64; 2]> = emb
            .coordinates
            .iter()
            .zip(&emb.labels)
            .filter(|(_, &l)| l == class)
            .map(|(p, _)| p)
            .collect();
        let n = pts.len() as f64;
        let cx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
        let cy = pts.iter().map(|p| p[1]).sum::<f64>() / n;
        println!("class {class} centroid ({cx:>8.2}, {cy:>8.2})");
    }

    if let Some(path) = std::env::args().nth(1) {
        write_artifact(&emb, &path)?;
        println!("wrote {path}");
    }
    Ok(())
}
