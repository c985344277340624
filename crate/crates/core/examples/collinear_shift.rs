//! Two clusters whose centers are collinear with the origin. A large common
//! shift `t` makes the raw signal rank one, so raw counting finds a single
//! component, while the centered spectrum does not depend on `t` at all.

use csvt::synth::{pathology_dataset, seeded_rng};
use csvt::theory::{
    pathology_delta, pathology_raw_sigmas, pathology_sigma1, pathology_sigma1_exact,
};
use csvt::{csvt, raw_count, Strategy, TnRule};

fn main() -> csvt::Result<()> {
    let (n1, n2, p) = (100, 100, 50);
    let delta = pathology_delta(n1, n2, p, 2.0)?;
    println!(
        "delta = {delta:.4}, closed-form centered sigma_1 = {:.4}",
        pathology_sigma1(delta, n1, n2)
    );
    println!(
        "{:>8} {:>14} {:>14} {:>14}",
        "t", "raw sigma_1", "raw sigma_2", "centered"
    );
    for t in [2.0, 10.0, 100.0, 1000.0] {
        let (s1, s2) = pathology_raw_sigmas(t, delta, n1, n2, p)?;
        let c = pathology_sigma1_exact(t, delta, n1, n2, p)?;
        println!("{t:>8} {s1:>14.4} {s2:>14.2e} {c:>14.6}");
    }

    let (x, _) = pathology_dataset(100.0, delta, n1, n2, p, &mut seeded_rng(4))?;
    println!(
        "with unit noise at t = 100: raw count = {}, K_hat = {}",
        raw_count(&x, TnRule::LogN, Strategy::Auto)?,
        csvt(&x, TnRule::LogN, Strategy::Auto)?.k_hat
    );
    Ok(())
}
