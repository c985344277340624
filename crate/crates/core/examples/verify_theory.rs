//! Numerical checks of the bounds the estimator relies on, on a few
//! concrete designs and then the full randomized suite.

use csvt::synth::{orthonormal_centers, seeded_rng, CenterMode, MixtureDesign, NoiseModel};
use csvt::theory::{
    centered_signal_bound, gram_structure_check, uncentered_signal_bound, verification_suite,
    weyl_gap_check,
};

fn main() -> csvt::Result<()> {
    let centers = orthonormal_centers(10, 4, 3.0, CenterMode::QrRandom { seed: 5 })?;
    let design = MixtureDesign::from_centers(centers, vec![5, 12, 20, 3])?;
    let c = centered_signal_bound(&design)?;
    let u = uncentered_signal_bound(&design)?;
    println!("sizes {:?}, balance {:.3}", design.sizes, design.balance());
    println!(
        "  centered:   sigma_(K-1) = {:.4} >= {:.4}",
        c.sigma_observed, c.bound
    );
    println!(
        "  uncentered: sigma_K = {:.4} >= {:.4}; sharper bound {:.4}",
        u.lemma.sigma_observed, u.lemma.bound, u.sharper_bound
    );

    let g = gram_structure_check(&design.block_labels(), design.k)?;
    println!(
        "  membership Gram: identity error {:.1e}, sigma_(K-1)(A) = {:.4} >= sqrt(min n_k) = {:.4}",
        g.identity_error,
        g.sigma_km1.unwrap_or(0.0),
        g.sqrt_min_size
    );

    let w = weyl_gap_check(&design, NoiseModel::Unit, &mut seeded_rng(2))?;
    println!(
        "  Weyl: {:.3} >= {:.3} - {:.3}, {:.3} <= {:.3} + {:.3}",
        w.sigma_hat_km1, w.signal_km1, w.noise_norm, w.sigma_hat_k, w.signal_k, w.noise_norm
    );

    println!();
    for o in verification_suite(0)? {
        println!(
            "{}  {}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
    }
    Ok(())
}
