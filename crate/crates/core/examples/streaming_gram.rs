//! Feed samples to the row-side Gram accumulator block by block, so the
//! full data matrix is never held in memory, then threshold the spectrum.

use std::time::Instant;

use csvt::estimator::{count_above, threshold};
use csvt::spectral::{gram_singular_values, RowGramAccumulator};
use csvt::synth::{
    replication_rng, sample_dataset, theoretical_delta, CenterMode, MixtureDesign, NoiseModel,
};
use csvt::TnRule;

fn main() -> csvt::Result<()> {
    let (p, k, blocks, per_block) = (60, 12, 50, 10_000);
    let n = blocks * per_block;
    let t = threshold(p, n, TnRule::LogN)?;
    let delta = theoretical_delta(n, p, k, 1.0, 1.0, TnRule::LogN, 1.0)?;
    println!(
        "p = {p}, n = {n}, K = {k}, delta = {delta:.4}, T = {:.3}",
        t.threshold
    );

    let start = Instant::now();
    let mut acc = RowGramAccumulator::centered(p);
    for b in 0..blocks {
        // each block is an independent draw from the same centers
        let mut rng = replication_rng(8, b as u64);
        let design =
            MixtureDesign::orthonormal(p, per_block, k, 1.0, delta, CenterMode::Basis, &mut rng)?;
        let (x, _) = sample_dataset(&design, NoiseModel::Unit, &mut rng)?;
        acc.push_block(x.values())?;
    }
    let samples = acc.count();
    let sv = gram_singular_values(&acc.finish()?)?;
    let r = count_above(&sv, t.threshold);
    println!(
        "accumulated {samples} samples in {:.2} s",
        start.elapsed().as_secs_f64()
    );
    println!(
        "top values: {:?}",
        sv[..(r + 2).min(sv.len())]
            .iter()
            .map(|s| format!("{s:.1}"))
            .collect::<Vec<_>>()
    );
    println!("K_hat = {}", r + 1);
    Ok(())
}
