//! One Gaussian component with a small non-zero mean: the raw spectrum
//! count gives 0 components, centering and adding one gives 1.

use csvt::synth::{replication_rng, single_component_dataset};
use csvt::theory::single_component_spectra;
use csvt::{csvt, raw_count, Strategy, TnRule};

fn main() -> csvt::Result<()> {
    let demo = single_component_spectra(1)?;
    let raw = demo.raw.as_deref().unwrap_or_default();
    println!(
        "n = 100, p = 20, mean 0.1 in every coordinate, T = {:.3}",
        demo.threshold
    );
    println!(
        "sigma_1 raw = {:.3}, centered = {:.3}",
        raw[0], demo.centered[0]
    );

    let reps = 200;
    let (mut raw_zero, mut k_one) = (0, 0);
    for rep in 0..reps {
        let x =
            single_component_dataset(0.1 * 20f64.sqrt(), 100, 20, &mut replication_rng(1, rep))?;
        raw_zero += usize::from(raw_count(&x, TnRule::LogN, Strategy::Auto)? == 0);
        k_one += usize::from(csvt(&x, TnRule::LogN, Strategy::Auto)?.k_hat == 1);
    }
    println!("raw count = 0 in {raw_zero}/{reps}, K_hat = 1 in {k_one}/{reps}");
    Ok(())
}
