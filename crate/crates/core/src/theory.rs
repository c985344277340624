//! Executable checks of the bounds behind the estimator.
//!
//! Every check builds the relevant matrices explicitly and uses a dense SVD,
//! so inputs are capped at [`MAX_ORACLE_ENTRIES`] entries.
//!
//! - centered signal: `σ_{K−1}(P̃) ≥ (Δ/κ)·√(βn/2K)`
//! - uncentered signal: `σ_K(P) ≥ (Δ/κ)·√(βn/2K)`, and the sharper
//!   `σ_K(P) = σ_K(MD^{1/2}) ≥ σ_K(M)·√(min n_k)`
//! - membership Gram: `A = ZᵀH`, `AAᵀ = D − (1/n)nnᵀ`, `AAᵀ1 = 0`,
//!   `σ_{K−1}(A) ≥ √(min n_k)`
//! - noise: `P(‖E‖ ≥ √p + √n + t) ≤ e^{−t²/2}`
//! - Weyl: `σ̂_{K−1} ≥ σ_{K−1}(P̃) − ‖Ẽ‖` and `σ̂_K ≤ σ_K(P̃) + ‖Ẽ‖`
//! - collinear two-cluster signal: `σ₁(P̃) = Δ·√(n₁n₂/n)` for every shift `t`

use faer::{Mat, MatRef};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{threshold, TnRule};
use crate::spectral::{singular_values_centered, spectral_norm, DataMatrix, Strategy};
use crate::synth::{
    allocate_sizes, pathology_dataset, pathology_signal, replication_rng, sample_dataset,
    seeded_rng, single_component_dataset, theoretical_delta, CenterMode, Centers, MixtureDesign,
    NoiseModel,
};

pub const MAX_ORACLE_ENTRIES: usize = 1_000_000;

const REL_TOL: f64 = 1e-9;
const GRAM_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalBoundReport {
    pub sigma_observed: f64,
    pub bound: f64,
    pub satisfied: bool,
}

impl SignalBoundReport {
    fn new(sigma_observed: f64, bound: f64) -> Self {
        Self {
            sigma_observed,
            bound,
            satisfied: sigma_observed >= bound - REL_TOL * bound,
        }
    }
}

/// `(Δ/κ)·√(βn/(2K))`.
pub fn signal_lower_bound(delta: f64, kappa: f64, beta: f64, n: usize, k: usize) -> f64 {
    (delta / kappa) * (beta * n as f64 / (2.0 * k as f64)).sqrt()
}

fn svd_values(m: MatRef<'_, f64>) -> Result<Vec<f64>> {
    let mut sv = m
        .singular_values()
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

fn exact_singular_values(x: &DataMatrix) -> Result<Vec<f64>> {
    svd_values(x.as_mat_ref())
}

fn check_oracle_design(design: &MixtureDesign) -> Result<()> {
    if design.k < 2 {
        return Err(Error::InvalidParameter(
            "signal bounds are stated for K >= 2".into(),
        ));
    }
    if design.p.saturating_mul(design.n) > MAX_ORACLE_ENTRIES {
        return Err(Error::InvalidParameter(format!(
            "oracle checks are capped at {MAX_ORACLE_ENTRIES} signal entries"
        )));
    }
    Ok(())
}

/// Lower bound on the smallest non-zero singular value of the centered signal.
pub fn centered_signal_bound(design: &MixtureDesign) -> Result<SignalBoundReport> {
    check_oracle_design(design)?;
    let signal = design.signal(&design.block_labels())?;
    let sv = exact_singular_values(&signal.centered())?;
    let bound = signal_lower_bound(
        design.centers.min_separation(),
        design.centers.condition_number()?,
        design.balance(),
        design.n,
        design.k,
    );
    Ok(SignalBoundReport::new(sv[design.k - 2], bound))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncenteredSignalReport {
    /// `σ_K(P)` against `(Δ/κ)·√(βn/2K)`.
    pub lemma: SignalBoundReport,
    /// `σ_K(MD^{1/2})`, which equals `σ_K(P)`.
    pub sigma_md_half: f64,
    /// `σ_K(M)·√(min n_k)`.
    pub sharper_bound: f64,
    pub factorization_holds: bool,
    pub sharper_satisfied: bool,
}

impl UncenteredSignalReport {
    pub fn all_hold(&self) -> bool {
        self.lemma.satisfied && self.factorization_holds && self.sharper_satisfied
    }
}

pub fn uncentered_signal_bound(design: &MixtureDesign) -> Result<UncenteredSignalReport> {
    check_oracle_design(design)?;
    let k = design.k;
    let signal = design.signal(&design.block_labels())?;
    let sigma_k = exact_singular_values(&signal)?[k - 1];

    let m = design.centers.to_mat();
    let m_sv = svd_values(m.as_ref())?;
    let md = Mat::from_fn(design.p, k, |i, j| {
        m[(i, j)] * (design.sizes[j] as f64).sqrt()
    });
    let sigma_md_half = svd_values(md.as_ref())?[k - 1];
    let sharper_bound = m_sv[k - 1] * (design.min_size() as f64).sqrt();

    let bound = signal_lower_bound(
        design.centers.min_separation(),
        m_sv[0] / m_sv[k - 1],
        design.balance(),
        design.n,
        k,
    );
    Ok(UncenteredSignalReport {
        lemma: SignalBoundReport::new(sigma_k, bound),
        sigma_md_half,
        sharper_bound,
        factorization_holds: (sigma_k - sigma_md_half).abs() <= REL_TOL * sigma_k.max(1.0),
        sharper_satisfied: sigma_k >= sharper_bound - REL_TOL * sharper_bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramStructureReport {
    /// `max |AAᵀ − (D − nnᵀ/n)|` divided by `n`.
    pub identity_error: f64,
    /// `max |AAᵀ·1_K|` divided by `n`.
    pub zero_eigvec_error: f64,
    /// `σ_{K−1}(A)`; absent when `K = 1`.
    pub sigma_km1: Option<f64>,
    pub sqrt_min_size: f64,
    pub passed: bool,
}

/// Builds `A = ZᵀH` from the membership labels (values in `0..k`) by explicit
/// matrix products and checks its Gram structure.
pub fn gram_structure_check(labels: &[usize], k: usize) -> Result<GramStructureReport> {
    let n = labels.len();
    if k == 0 || n == 0 || labels.iter().any(|&l| l >= k) {
        return Err(Error::InvalidParameter(format!(
            "labels must be in 0..{k} and non-empty"
        )));
    }
    if n.saturating_mul(n) > MAX_ORACLE_ENTRIES * 4 {
        return Err(Error::InvalidParameter(
            "membership matrix too large".into(),
        ));
    }
    let mut sizes = vec![0usize; k];
    labels.iter().for_each(|&l| sizes[l] += 1);
    if sizes.contains(&0) {
        return Err(Error::InvalidParameter(format!(
            "every cluster needs a member, sizes {sizes:?}"
        )));
    }

    let nf = n as f64;
    let zt = Mat::<f64>::from_fn(k, n, |c, i| if labels[i] == c { 1.0 } else { 0.0 });
    let h = Mat::<f64>::from_fn(n, n, |i, j| f64::from(u8::from(i == j)) - 1.0 / nf);
    let a = &zt * &h;
    let aat = &a * a.transpose();

    let mut identity_error: f64 = 0.0;
    let mut zero_eigvec_error: f64 = 0.0;
    for i in 0..k {
        let mut row_sum = 0.0;
        for j in 0..k {
            let d = if i == j { sizes[i] as f64 } else { 0.0 };
            let want = d - (sizes[i] * sizes[j]) as f64 / nf;
            identity_error = identity_error.max((aat[(i, j)] - want).abs());
            row_sum += aat[(i, j)];
        }
        zero_eigvec_error = zero_eigvec_error.max(row_sum.abs());
    }
    identity_error /= nf;
    zero_eigvec_error /= nf;

    let sqrt_min_size = (*sizes.iter().min().expect("k >= 1") as f64).sqrt();
    let sigma_km1 = if k >= 2 {
        Some(svd_values(a.as_ref())?[k - 2])
    } else {
        None
    };
    let sigma_ok = sigma_km1.is_none_or(|s| s >= sqrt_min_size - REL_TOL * sqrt_min_size);
    Ok(GramStructureReport {
        identity_error,
        zero_eigvec_error,
        sigma_km1,
        sqrt_min_size,
        passed: identity_error <= GRAM_TOL && zero_eigvec_error <= GRAM_TOL && sigma_ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseBoundReport {
    pub violations: usize,
    pub reps: usize,
    pub violation_rate: f64,
    /// `e^{−t²/2}`.
    pub bound: f64,
    /// Three binomial standard deviations at the bound.
    pub slack: f64,
    pub within_bound: bool,
}

/// Monte Carlo frequency of `‖E‖ ≥ √p + √n + t` over `reps` standard
/// Gaussian `p × n` matrices.
pub fn noise_bound_test<R: Rng + ?Sized>(
    p: usize,
    n: usize,
    t: f64,
    reps: usize,
    rng: &mut R,
) -> Result<NoiseBoundReport> {
    if reps == 0 || p == 0 || n == 0 || t.is_nan() || t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need reps, p, n >= 1 and t >= 0, got reps={reps}, p={p}, n={n}, t={t}"
        )));
    }
    let level = (p as f64).sqrt() + (n as f64).sqrt() + t;
    let mut violations = 0;
    for _ in 0..reps {
        let e = DataMatrix::new(
            p,
            n,
            (0..p * n).map(|_| StandardNormal.sample(rng)).collect(),
        )?;
        if spectral_norm(&e)? >= level {
            violations += 1;
        }
    }
    let bound = (-t * t / 2.0).exp();
    let slack = 3.0 * (bound * (1.0 - bound) / reps as f64).sqrt();
    let violation_rate = violations as f64 / reps as f64;
    Ok(NoiseBoundReport {
        violations,
        reps,
        violation_rate,
        bound,
        slack,
        within_bound: violation_rate <= bound + slack,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylReport {
    /// `σ̂_{K−1}`, `σ_{K−1}(P̃)`.
    pub sigma_hat_km1: f64,
    pub signal_km1: f64,
    /// `σ̂_K`, `σ_K(P̃)` (zero in exact arithmetic).
    pub sigma_hat_k: f64,
    pub signal_k: f64,
    /// `‖Ẽ‖`.
    pub noise_norm: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
    /// `|σ̂ᵢ − σᵢ(P̃)| ≤ ‖Ẽ‖` at every index.
    pub all_indices_hold: bool,
}

impl WeylReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds && self.all_indices_hold
    }
}

/// Samples one dataset and checks the perturbation inequalities on
/// `X̃ = P̃ + Ẽ` with exact SVDs of all three matrices.
pub fn weyl_gap_check<R: Rng + ?Sized>(
    design: &MixtureDesign,
    noise: NoiseModel,
    rng: &mut R,
) -> Result<WeylReport> {
    check_oracle_design(design)?;
    let (x, labels) = sample_dataset(design, noise, rng)?;
    let p_mat = design.signal(&labels)?;
    let e_mat = DataMatrix::new(
        x.p(),
        x.n(),
        x.values()
            .iter()
            .zip(p_mat.values())
            .map(|(a, b)| a - b)
            .collect(),
    )?;
    let sx = exact_singular_values(&x.centered())?;
    let sp = exact_singular_values(&p_mat.centered())?;
    let noise_norm = exact_singular_values(&e_mat.centered())?[0];

    let k = design.k;
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    let scale = sx[0].max(sp[0]).max(1.0);
    let tol = REL_TOL * scale;
    let all_indices_hold = sx
        .iter()
        .zip(&sp)
        .all(|(a, b)| (a - b).abs() <= noise_norm + tol);
    Ok(WeylReport {
        sigma_hat_km1: at(&sx, k - 2),
        signal_km1: at(&sp, k - 2),
        sigma_hat_k: at(&sx, k - 1),
        signal_k: at(&sp, k - 1),
        noise_norm,
        lower_holds: at(&sx, k - 2) >= at(&sp, k - 2) - noise_norm - tol,
        upper_holds: at(&sx, k - 1) <= at(&sp, k - 1) + noise_norm + tol,
        all_indices_hold,
    })
}

/// `Δ·√(n₁n₂/(n₁+n₂))`.
pub fn pathology_sigma1(delta: f64, n1: usize, n2: usize) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    delta * (a * b / (a + b)).sqrt()
}

/// `σ₁(P̃)` of the constructed collinear signal, by dense SVD.
pub fn pathology_sigma1_exact(t: f64, delta: f64, n1: usize, n2: usize, p: usize) -> Result<f64> {
    let (signal, _) = pathology_signal(t, delta, n1, n2, p)?;
    Ok(exact_singular_values(&signal.centered())?[0])
}

/// `(σ₁(P), σ₂(P))` of the uncentered collinear signal.
pub fn pathology_raw_sigmas(
    t: f64,
    delta: f64,
    n1: usize,
    n2: usize,
    p: usize,
) -> Result<(f64, f64)> {
    let (signal, _) = pathology_signal(t, delta, n1, n2, p)?;
    let sv = exact_singular_values(&signal)?;
    Ok((sv[0], sv.get(1).copied().unwrap_or(0.0)))
}

/// `σ₁(P) ≥ (Δ/2)(t−1)√n`.
pub fn pathology_raw_lower_bound(t: f64, delta: f64, n: usize) -> f64 {
    delta / 2.0 * (t - 1.0) * (n as f64).sqrt()
}

/// A small design with Gaussian (generally non-orthogonal) centers:
/// `p ≤ 30`, `n ≤ 120`, `2 ≤ K ≤ 8`, allocation `β ∈ [0.2, 1]`.
pub fn random_small_design<R: Rng + ?Sized>(rng: &mut R) -> Result<MixtureDesign> {
    let p = rng.random_range(2..=30usize);
    let k = rng.random_range(2..=p.min(8));
    let n = rng.random_range(k.max(4)..=120usize);
    let beta = rng.random_range(0.2..=1.0);
    let sizes = allocate_sizes(n, k, beta, rng)?.sizes;
    let spread = rng.random_range(0.5..5.0);
    let offset = rng.random_range(-3.0..3.0);
    let values = (0..p * k)
        .map(|_| offset + spread * rng.sample::<f64, _>(StandardNormal))
        .collect();
    MixtureDesign::from_centers(Centers::Dense { p, k, values }, sizes)
}

/// One line of the verification table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Runs every oracle at moderate size. Deterministic given `seed`.
pub fn verification_suite(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();

    let mut rng = replication_rng(seed, 1);
    let (mut centered_ok, mut uncentered_ok) = (0, 0);
    let designs = 100;
    for _ in 0..designs {
        let d = random_small_design(&mut rng)?;
        centered_ok += usize::from(centered_signal_bound(&d)?.satisfied);
        uncentered_ok += usize::from(uncentered_signal_bound(&d)?.all_hold());
    }
    out.push(outcome(
        "centered signal lower bound",
        centered_ok == designs,
        format!("{centered_ok}/{designs} random designs"),
    ));
    out.push(outcome(
        "uncentered signal lower bound",
        uncentered_ok == designs,
        format!("{uncentered_ok}/{designs} random designs"),
    ));

    let mut rng = replication_rng(seed, 2);
    let mut gram_ok = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..designs {
        let d = random_small_design(&mut rng)?;
        let r = gram_structure_check(&d.block_labels(), d.k)?;
        worst = worst.max(r.identity_error);
        gram_ok += usize::from(r.passed);
    }
    out.push(outcome(
        "membership Gram identity",
        gram_ok == designs,
        format!("{gram_ok}/{designs}, worst scaled error {worst:.2e}"),
    ));

    let mut rng = replication_rng(seed, 3);
    let noise = noise_bound_test(50, 50, 3.0, 300, &mut rng)?;
    out.push(outcome(
        "Gaussian spectral norm tail",
        noise.within_bound,
        format!(
            "{} / {} above sqrt(p)+sqrt(n)+3 (bound {:.4} + slack {:.4})",
            noise.violations, noise.reps, noise.bound, noise.slack
        ),
    ));

    let mut rng = replication_rng(seed, 4);
    let mut weyl_ok = 0;
    let weyl_reps = 50;
    for _ in 0..weyl_reps {
        let d = random_small_design(&mut rng)?;
        weyl_ok += usize::from(weyl_gap_check(&d, NoiseModel::Unit, &mut rng)?.holds());
    }
    out.push(outcome(
        "Weyl perturbation inequalities",
        weyl_ok == weyl_reps,
        format!("{weyl_ok}/{weyl_reps} sampled datasets"),
    ));

    let closed = pathology_sigma1(1.0, 100, 100);
    let mut worst_rel: f64 = 0.0;
    let mut raw_ok = true;
    for t in [2.0, 10.0, 1000.0] {
        let exact = pathology_sigma1_exact(t, 1.0, 100, 100, 5)?;
        worst_rel = worst_rel.max((exact - closed).abs() / closed);
        let (s1, s2) = pathology_raw_sigmas(t, 1.0, 100, 100, 5)?;
        raw_ok &=
            s1 >= pathology_raw_lower_bound(t, 1.0, 200) * (1.0 - REL_TOL) && s2 <= REL_TOL * s1;
    }
    out.push(outcome(
        "collinear centered sigma_1 is shift invariant",
        worst_rel <= REL_TOL,
        format!("max relative deviation {worst_rel:.2e} over t in {{2, 10, 1000}}"),
    ));
    out.push(outcome(
        "collinear raw spectrum is rank one and grows with t",
        raw_ok,
        "sigma_2(P) = 0, sigma_1(P) >= (delta/2)(t-1)sqrt(n)".to_string(),
    ));
    Ok(out)
}

/// Singular values behind one of the illustrative figures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoSpectra {
    pub name: String,
    pub threshold: f64,
    /// Singular values of the raw matrix, when the demo contrasts them.
    pub raw: Option<Vec<f64>>,
    pub centered: Vec<f64>,
}

impl DemoSpectra {
    /// CSV with columns `index,sigma_raw,sigma_centered,threshold`;
    /// `sigma_raw` is empty when not computed.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        out.write_record(["index", "sigma_raw", "sigma_centered", "threshold"])
            .map_err(ser)?;
        for (i, c) in self.centered.iter().enumerate() {
            let raw = self
                .raw
                .as_ref()
                .and_then(|r| r.get(i))
                .map(|v| v.to_string())
                .unwrap_or_default();
            out.write_record([
                (i + 1).to_string(),
                raw,
                c.to_string(),
                self.threshold.to_string(),
            ])
            .map_err(ser)?;
        }
        out.flush().map_err(|e| Error::Serialization(e.to_string()))
    }
}

fn demo_spectra(name: &str, x: &DataMatrix, with_raw: bool) -> Result<DemoSpectra> {
    let threshold = threshold(x.p(), x.n(), TnRule::LogN)?.threshold;
    let centered = singular_values_centered(x, Strategy::Auto)?.singular_values;
    let raw = if with_raw {
        Some(exact_singular_values(x)?)
    } else {
        None
    };
    Ok(DemoSpectra {
        name: name.to_string(),
        threshold,
        raw,
        centered,
    })
}

/// One Gaussian component, `n = 100`, `p = 20`, mean `0.1·1_p`: raw and
/// centered spectra against `T`.
pub fn single_component_spectra(seed: u64) -> Result<DemoSpectra> {
    let x = single_component_dataset(0.1 * 20f64.sqrt(), 100, 20, &mut seeded_rng(seed))?;
    demo_spectra("fig1", &x, true)
}

/// Five balanced clusters, `n = 1000`, `p = 20`, separation at the
/// theoretical value.
pub fn five_cluster_spectra(seed: u64) -> Result<DemoSpectra> {
    let (n, p, k) = (1000, 20, 5);
    let delta = theoretical_delta(n, p, k, 1.0, 1.0, TnRule::LogN, 1.0)?;
    let mut rng = seeded_rng(seed);
    let design = MixtureDesign::orthonormal(p, n, k, 1.0, delta, CenterMode::Basis, &mut rng)?;
    let (x, _) = sample_dataset(&design, NoiseModel::Unit, &mut rng)?;
    demo_spectra("remark2", &x, false)
}

/// Separation giving `Δ·√(n₁n₂/n) = factor·T` for the collinear design.
pub fn pathology_delta(n1: usize, n2: usize, p: usize, factor: f64) -> Result<f64> {
    let t = threshold(p, n1 + n2, TnRule::LogN)?.threshold;
    Ok(factor * t / pathology_sigma1(1.0, n1, n2))
}

/// Collinear two-cluster design with global shift `t = 100`,
/// `n₁ = n₂ = 100`, `p = 50` and `Δ·√(n₁n₂/n) = 2T`.
pub fn collinear_spectra(seed: u64) -> Result<DemoSpectra> {
    let delta = pathology_delta(100, 100, 50, 2.0)?;
    let (x, _) = pathology_dataset(100.0, delta, 100, 100, 50, &mut seeded_rng(seed))?;
    demo_spectra("pathology", &x, true)
}
