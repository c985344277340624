//! Synthetic Gaussian mixtures and the counterexample constructions.
//!
//! Centers are `M = (Δ/√2)·Q` with orthonormal `Q`, so every pair of centers
//! is exactly `Δ` apart and `κ(M) = 1`. Cluster sizes start at
//! `n_min = max(1, ⌊βn/K⌋)`; one cluster picked uniformly at random stays at
//! `n_min` and the remainder is dealt round-robin, in ascending index order,
//! over the other clusters.
//!
//! All randomness goes through [`ReplicationRng`] (ChaCha8). A replication
//! draws from `replication_rng(master_seed, stream)`; distinct streams of the
//! same seed never overlap.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use faer::Mat;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{threshold, TnRule};
use crate::spectral::DataMatrix;

pub type ReplicationRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ReplicationRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of generator `master_seed`.
pub fn replication_rng(master_seed: u64, stream: u64) -> ReplicationRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// Stream id for replication `rep` of grid point `point`.
pub fn replication_stream(point: usize, rep: usize) -> u64 {
    ((point as u64) << 32) | (rep as u64 & 0xffff_ffff)
}

/// How to pick the orthonormal columns of `Q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterMode {
    /// The first `K` standard basis vectors. Stored in `O(1)` space.
    #[default]
    Basis,
    /// Thin QR of a seeded Gaussian `p × K` matrix.
    QrRandom { seed: u64 },
}

/// The `p × K` center matrix `M`.
#[derive(Clone, Debug, PartialEq)]
pub enum Centers {
    /// `M = scale·[e₁ … e_K]`.
    Basis { p: usize, k: usize, scale: f64 },
    /// Column-major `p × K` values.
    Dense {
        p: usize,
        k: usize,
        values: Vec<f64>,
    },
}

impl Centers {
    pub fn p(&self) -> usize {
        match *self {
            Centers::Basis { p, .. } | Centers::Dense { p, .. } => p,
        }
    }

    pub fn k(&self) -> usize {
        match *self {
            Centers::Basis { k, .. } | Centers::Dense { k, .. } => k,
        }
    }

    /// Center `k` as a dense vector.
    pub fn center(&self, k: usize) -> Vec<f64> {
        let mut c = vec![0.0; self.p()];
        self.add_center(k, &mut c);
        c
    }

    fn add_center(&self, k: usize, col: &mut [f64]) {
        match self {
            Centers::Basis { scale, .. } => col[k] += scale,
            Centers::Dense { p, values, .. } => {
                for (x, m) in col.iter_mut().zip(&values[k * p..(k + 1) * p]) {
                    *x += m;
                }
            }
        }
    }

    pub fn to_mat(&self) -> Mat<f64> {
        let (p, k) = (self.p(), self.k());
        match self {
            Centers::Basis { scale, .. } => {
                Mat::from_fn(p, k, |i, j| if i == j { *scale } else { 0.0 })
            }
            Centers::Dense { values, .. } => Mat::from_fn(p, k, |i, j| values[j * p + i]),
        }
    }

    /// `Δ = min_{k≠ℓ} ‖μ_k − μ_ℓ‖`; infinite when `K = 1`.
    pub fn min_separation(&self) -> f64 {
        let k = self.k();
        if k < 2 {
            return f64::INFINITY;
        }
        match self {
            Centers::Basis { scale, .. } => scale.abs() * std::f64::consts::SQRT_2,
            Centers::Dense { p, values, .. } => {
                let mut best = f64::INFINITY;
                for a in 0..k {
                    for b in (a + 1)..k {
                        let d2: f64 = (0..*p)
                            .map(|i| (values[a * p + i] - values[b * p + i]).powi(2))
                            .sum();
                        best = best.min(d2.sqrt());
                    }
                }
                best
            }
        }
    }

    /// `κ = σ₁(M)/σ_K(M)`.
    pub fn condition_number(&self) -> Result<f64> {
        match self {
            Centers::Basis { .. } => Ok(1.0),
            Centers::Dense { .. } => {
                let sv = self
                    .to_mat()
                    .singular_values()
                    .map_err(|e| Error::Solver(format!("{e:?}")))?;
                let last = *sv.last().unwrap_or(&0.0);
                Ok(if last > 0.0 {
                    sv[0] / last
                } else {
                    f64::INFINITY
                })
            }
        }
    }
}

/// `(Δ/√2)·Q` with `QᵀQ = I`.
pub fn orthonormal_centers(p: usize, k: usize, delta: f64, mode: CenterMode) -> Result<Centers> {
    if k == 0 || k > p {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= K <= p, got K={k}, p={p}"
        )));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must be > 0, got {delta}"
        )));
    }
    let scale = delta / std::f64::consts::SQRT_2;
    match mode {
        CenterMode::Basis => Ok(Centers::Basis { p, k, scale }),
        CenterMode::QrRandom { seed } => {
            let mut rng = seeded_rng(seed);
            let g = Mat::<f64>::from_fn(p, k, |_, _| StandardNormal.sample(&mut rng));
            let q = g.qr().compute_thin_Q();
            let mut values = Vec::with_capacity(p * k);
            for j in 0..k {
                for i in 0..p {
                    values.push(scale * q[(i, j)]);
                }
            }
            Ok(Centers::Dense { p, k, values })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeAllocation {
    pub sizes: Vec<usize>,
    /// Index of the cluster held at `n_min`.
    pub smallest: usize,
    pub n_min: usize,
}

pub fn allocate_sizes<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    beta: f64,
    rng: &mut R,
) -> Result<SizeAllocation> {
    if k == 0 || n < k {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= K <= n, got K={k}, n={n}"
        )));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "beta must be in (0, 1], got {beta}"
        )));
    }
    let n_min = ((beta * n as f64 / k as f64).floor() as usize).max(1);
    let smallest = rng.random_range(0..k);
    if k == 1 {
        return Ok(SizeAllocation {
            sizes: vec![n],
            smallest,
            n_min,
        });
    }
    let remainder = n - k * n_min;
    let (share, extra) = (remainder / (k - 1), remainder % (k - 1));
    let mut sizes = vec![n_min; k];
    for (rank, idx) in (0..k).filter(|&i| i != smallest).enumerate() {
        sizes[idx] += share + usize::from(rank < extra);
    }
    Ok(SizeAllocation {
        sizes,
        smallest,
        n_min,
    })
}

/// `Δ = γ·2√2·(κ/√β)·√(K/n)·T`.
pub fn theoretical_delta(
    n: usize,
    p: usize,
    k: usize,
    beta: f64,
    kappa: f64,
    rule: TnRule,
    gamma: f64,
) -> Result<f64> {
    if k == 0
        || !(beta > 0.0 && beta <= 1.0)
        || kappa.is_nan()
        || kappa < 1.0
        || gamma.is_nan()
        || gamma <= 0.0
    {
        return Err(Error::InvalidParameter(format!(
            "need K >= 1, beta in (0,1], kappa >= 1, gamma > 0; got K={k}, beta={beta}, kappa={kappa}, gamma={gamma}"
        )));
    }
    let t = threshold(p, n, rule)?.threshold;
    Ok(gamma
        * 2.0
        * std::f64::consts::SQRT_2
        * (kappa / beta.sqrt())
        * (k as f64 / n as f64).sqrt()
        * t)
}

/// Ground truth for one synthetic mixture.
#[derive(Clone, Debug, PartialEq)]
pub struct MixtureDesign {
    pub p: usize,
    pub n: usize,
    pub k: usize,
    /// Minimal center separation.
    pub delta: f64,
    /// Balance parameter used to size the clusters.
    pub beta: f64,
    pub sizes: Vec<usize>,
    pub smallest: usize,
    pub centers: Centers,
    pub kappa: f64,
}

impl MixtureDesign {
    /// Orthonormal centers at separation `delta`, sizes from [`allocate_sizes`].
    pub fn orthonormal<R: Rng + ?Sized>(
        p: usize,
        n: usize,
        k: usize,
        beta: f64,
        delta: f64,
        mode: CenterMode,
        rng: &mut R,
    ) -> Result<Self> {
        if k > p.min(n) {
            return Err(Error::InvalidParameter(format!(
                "K={k} exceeds min(p, n)={}",
                p.min(n)
            )));
        }
        let centers = orthonormal_centers(p, k, delta, mode)?;
        let alloc = allocate_sizes(n, k, beta, rng)?;
        Ok(Self {
            p,
            n,
            k,
            delta,
            beta,
            sizes: alloc.sizes,
            smallest: alloc.smallest,
            centers,
            kappa: 1.0,
        })
    }

    /// A design with arbitrary centers; `delta`, `beta` and `kappa` are
    /// measured from the centers and sizes.
    pub fn from_centers(centers: Centers, sizes: Vec<usize>) -> Result<Self> {
        let k = centers.k();
        if sizes.len() != k || sizes.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "need {k} cluster sizes, each >= 1, got {sizes:?}"
            )));
        }
        let n: usize = sizes.iter().sum();
        let p = centers.p();
        if k > p.min(n) {
            return Err(Error::InvalidParameter(format!("K={k} exceeds min(p, n)")));
        }
        let (smallest, &min) = sizes
            .iter()
            .enumerate()
            .min_by_key(|&(_, s)| *s)
            .expect("K >= 1");
        let kappa = centers.condition_number()?;
        Ok(Self {
            p,
            n,
            k,
            delta: centers.min_separation(),
            beta: min as f64 * k as f64 / n as f64,
            smallest,
            sizes,
            centers,
            kappa,
        })
    }

    /// `β = min_k n_k / (n/K)` of the realized sizes.
    pub fn balance(&self) -> f64 {
        self.min_size() as f64 * self.k as f64 / self.n as f64
    }

    pub fn min_size(&self) -> usize {
        self.sizes.iter().copied().min().unwrap_or(0)
    }

    /// Labels in cluster order: `n₁` zeros, then `n₂` ones, and so on.
    pub fn block_labels(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(k, &s)| std::iter::repeat_n(k, s))
            .collect()
    }

    /// The noiseless signal `P = MZᵀ` with columns ordered by `labels`.
    pub fn signal(&self, labels: &[usize]) -> Result<DataMatrix> {
        let mut values = vec![0.0; self.p * labels.len()];
        for (col, &l) in values.chunks_exact_mut(self.p).zip(labels) {
            self.centers.add_center(l, col);
        }
        DataMatrix::new(self.p, labels.len(), values)
    }
}

/// Noise added to each column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseModel {
    /// No noise: `X = MZᵀ`.
    Noiseless,
    /// i.i.d. standard normal entries.
    #[default]
    Unit,
    /// Column `i` has entries i.i.d. `N(0, ηᵢ²)` with `ηᵢ` uniform between
    /// `eta_lo` and `eta_max` (taken in whichever order is increasing).
    Heteroscedastic { eta_lo: f64, eta_max: f64 },
}

impl NoiseModel {
    /// Heteroscedastic noise with the default lower end 0.5.
    pub fn heteroscedastic(eta_max: f64) -> Self {
        NoiseModel::Heteroscedastic {
            eta_lo: 0.5,
            eta_max,
        }
    }

    fn validate(&self) -> Result<()> {
        if let NoiseModel::Heteroscedastic { eta_lo, eta_max } = *self {
            if !(eta_lo > 0.0 && eta_max > 0.0 && eta_lo.is_finite() && eta_max.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "heteroscedastic noise needs positive bounds, got ({eta_lo}, {eta_max})"
                )));
            }
        }
        Ok(())
    }
}

/// Draws `X = MZᵀ + E`. Labels are block labels shuffled uniformly, so
/// column `i` belongs to cluster `labels[i]`.
pub fn sample_dataset<R: Rng + ?Sized>(
    design: &MixtureDesign,
    noise: NoiseModel,
    rng: &mut R,
) -> Result<(DataMatrix, Vec<usize>)> {
    noise.validate()?;
    let p = design.p;
    let mut labels = design.block_labels();
    labels.shuffle(rng);

    let etas: Option<Vec<f64>> = match noise {
        NoiseModel::Heteroscedastic { eta_lo, eta_max } => {
            let (lo, hi) = (eta_lo.min(eta_max), eta_lo.max(eta_max));
            Some(if lo == hi {
                vec![lo; labels.len()]
            } else {
                let u = Uniform::new(lo, hi).expect("lo < hi");
                (0..labels.len()).map(|_| u.sample(rng)).collect()
            })
        }
        _ => None,
    };

    let mut values = vec![0.0; p * labels.len()];
    for (i, (col, &l)) in values.chunks_exact_mut(p).zip(&labels).enumerate() {
        match noise {
            NoiseModel::Noiseless => {}
            NoiseModel::Unit => col.iter_mut().for_each(|v| *v = StandardNormal.sample(rng)),
            NoiseModel::Heteroscedastic { .. } => {
                let eta = etas.as_ref().expect("drawn above")[i];
                col.iter_mut()
                    .for_each(|v| *v = eta * rng.sample::<f64, _>(StandardNormal));
            }
        }
        design.centers.add_center(l, col);
    }
    Ok((DataMatrix::new(p, labels.len(), values)?, labels))
}

fn check_pathology(t: f64, delta: f64, n1: usize, n2: usize, p: usize) -> Result<()> {
    if !(t > 1.0 && t.is_finite()) || !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need t > 1 and delta > 0, got t={t}, delta={delta}"
        )));
    }
    if p < 2 || n1 == 0 || n2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "need p >= 2 and n1, n2 >= 1, got p={p}, n1={n1}, n2={n2}"
        )));
    }
    Ok(())
}

/// Noiseless collinear two-cluster signal `P = c1ᵀ + vwᵀ` with `v = (Δ/2)e₁`,
/// `c = t·v`: the first `n1` columns are `(t+1)v`, the rest `(t−1)v`.
pub fn pathology_signal(
    t: f64,
    delta: f64,
    n1: usize,
    n2: usize,
    p: usize,
) -> Result<(DataMatrix, Vec<usize>)> {
    check_pathology(t, delta, n1, n2, p)?;
    let half = delta / 2.0;
    let labels: Vec<usize> = std::iter::repeat_n(0, n1)
        .chain(std::iter::repeat_n(1, n2))
        .collect();
    let x = DataMatrix::from_fn(p, n1 + n2, |row, col| {
        if row != 0 {
            0.0
        } else if labels[col] == 0 {
            (t + 1.0) * half
        } else {
            (t - 1.0) * half
        }
    })?;
    Ok((x, labels))
}

/// [`pathology_signal`] plus unit Gaussian noise.
pub fn pathology_dataset<R: Rng + ?Sized>(
    t: f64,
    delta: f64,
    n1: usize,
    n2: usize,
    p: usize,
    rng: &mut R,
) -> Result<(DataMatrix, Vec<usize>)> {
    let (signal, labels) = pathology_signal(t, delta, n1, n2, p)?;
    let mut values = signal.into_values();
    for v in &mut values {
        *v += rng.sample::<f64, _>(StandardNormal);
    }
    Ok((DataMatrix::new(p, n1 + n2, values)?, labels))
}

/// `X = μ1ᵀ + E` with `μ = (mu_norm/√p)·1_p`.
pub fn single_component_dataset<R: Rng + ?Sized>(
    mu_norm: f64,
    n: usize,
    p: usize,
    rng: &mut R,
) -> Result<DataMatrix> {
    if !(mu_norm >= 0.0 && mu_norm.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "mu_norm must be >= 0, got {mu_norm}"
        )));
    }
    let mu = mu_norm / (p as f64).sqrt();
    let values = (0..p.saturating_mul(n))
        .map(|_| mu + rng.sample::<f64, _>(StandardNormal))
        .collect();
    DataMatrix::new(p, n, values)
}

/// Writes samples as comma-separated rows (no header) and, when given, one
/// label per line to `labels_path`. Values use the shortest representation
/// that parses back to the same `f64`.
pub fn export_dataset(
    x: &DataMatrix,
    labels: Option<&[usize]>,
    data_path: &Path,
    labels_path: Option<&Path>,
) -> Result<()> {
    let file = File::create(data_path).map_err(|e| Error::io(data_path, e))?;
    let mut w = BufWriter::new(file);
    for col in x.columns() {
        let line: Vec<String> = col.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(",")).map_err(|e| Error::io(data_path, e))?;
    }
    w.flush().map_err(|e| Error::io(data_path, e))?;

    if let (Some(labels), Some(path)) = (labels, labels_path) {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        for l in labels {
            writeln!(w, "{l}").map_err(|e| Error::io(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_centers_identity() {
        let c = orthonormal_centers(2, 2, 2f64.sqrt(), CenterMode::Basis).unwrap();
        let m = c.to_mat();
        assert!((m[(0, 0)] - 1.0).abs() < 1e-15 && (m[(1, 1)] - 1.0).abs() < 1e-15);
        assert_eq!(m[(0, 1)], 0.0);
        assert!((c.min_separation() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn qr_centers_are_orthonormal() {
        let c = orthonormal_centers(50, 10, 3.0, CenterMode::QrRandom { seed: 7 }).unwrap();
        let m = c.to_mat();
        let mtm = m.transpose() * &m;
        for i in 0..10 {
            for j in 0..10 {
                let want = if i == j { 4.5 } else { 0.0 };
                assert!(
                    (mtm[(i, j)] - want).abs() <= 1e-10,
                    "({i},{j}) {}",
                    mtm[(i, j)]
                );
            }
        }
        assert!((c.min_separation() - 3.0).abs() < 1e-9 * 3.0);
        assert!((c.condition_number().unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn centers_reject_bad_input() {
        assert!(orthonormal_centers(3, 4, 1.0, CenterMode::Basis).is_err());
        assert!(orthonormal_centers(3, 2, 0.0, CenterMode::Basis).is_err());
    }

    #[test]
    fn balanced_allocation() {
        let a = allocate_sizes(100, 5, 1.0, &mut seeded_rng(1)).unwrap();
        assert_eq!(a.sizes, vec![20; 5]);
    }

    #[test]
    fn extreme_imbalance_n_min() {
        let a = allocate_sizes(1_000_000, 50, 0.001, &mut seeded_rng(1)).unwrap();
        assert_eq!(a.n_min, 20);
        assert_eq!(a.sizes[a.smallest], 20);
        assert_eq!(a.sizes.iter().sum::<usize>(), 1_000_000);
    }

    #[test]
    fn round_robin_remainder_golden() {
        // n_min = max(1, floor(0.5*10/3)) = 1, remainder 7 over the two other clusters
        let mut rng = seeded_rng(0);
        loop {
            let a = allocate_sizes(10, 3, 0.5, &mut rng).unwrap();
            if a.smallest == 1 {
                assert_eq!(a.sizes, vec![5, 1, 4]);
                break;
            }
        }
        let mut rng = seeded_rng(0);
        loop {
            let a = allocate_sizes(10, 3, 0.5, &mut rng).unwrap();
            if a.smallest == 0 {
                assert_eq!(a.sizes, vec![1, 5, 4]);
                break;
            }
        }
    }

    #[test]
    fn allocation_errors() {
        let mut rng = seeded_rng(0);
        assert!(allocate_sizes(3, 4, 1.0, &mut rng).is_err());
        assert!(allocate_sizes(10, 2, 0.0, &mut rng).is_err());
        assert!(allocate_sizes(10, 2, 1.5, &mut rng).is_err());
        assert_eq!(allocate_sizes(7, 1, 0.3, &mut rng).unwrap().sizes, vec![7]);
    }

    #[test]
    fn theoretical_delta_matches_formula() {
        // T = √20 + √1000 + ln 1000; Δ = 2√2·√(5/1000)·T = 0.2·T
        let t = 20f64.sqrt() + 1000f64.sqrt() + 1000f64.ln();
        let d = theoretical_delta(1000, 20, 5, 1.0, 1.0, TnRule::LogN, 1.0).unwrap();
        assert!((d - 0.2 * t).abs() < 1e-12);
        assert!((d - 8.600534).abs() < 1e-5, "{d}");
        assert!(theoretical_delta(1000, 20, 5, 1.0, 1.0, TnRule::LogN, 0.0).is_err());
    }

    #[test]
    fn noiseless_k1_is_constant() {
        let mut rng = seeded_rng(3);
        let d =
            MixtureDesign::orthonormal(4, 10, 1, 1.0, 2.0, CenterMode::Basis, &mut rng).unwrap();
        let (x, labels) = sample_dataset(&d, NoiseModel::Noiseless, &mut rng).unwrap();
        assert!(labels.iter().all(|&l| l == 0));
        assert!(x.centered().values().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn same_seed_same_dataset() {
        let mk = || {
            let mut rng = replication_rng(42, replication_stream(3, 9));
            let d = MixtureDesign::orthonormal(6, 40, 3, 0.5, 2.0, CenterMode::Basis, &mut rng)
                .unwrap();
            sample_dataset(&d, NoiseModel::heteroscedastic(1.2), &mut rng).unwrap()
        };
        assert_eq!(mk(), mk());
        let other = {
            let mut rng = replication_rng(42, replication_stream(3, 10));
            let d = MixtureDesign::orthonormal(6, 40, 3, 0.5, 2.0, CenterMode::Basis, &mut rng)
                .unwrap();
            sample_dataset(&d, NoiseModel::heteroscedastic(1.2), &mut rng).unwrap()
        };
        assert_ne!(mk().0, other.0);
    }

    #[test]
    fn heteroscedastic_inverted_interval() {
        // eta_max below 0.5: scales drawn from (0.1, 0.5), so columns shrink
        let mut rng = seeded_rng(5);
        let d =
            MixtureDesign::orthonormal(2000, 30, 1, 1.0, 1.0, CenterMode::Basis, &mut rng).unwrap();
        let (x, _) = sample_dataset(&d, NoiseModel::heteroscedastic(0.1), &mut rng).unwrap();
        let xc = x.centered();
        for col in xc.columns() {
            let sd = (col.iter().map(|v| v * v).sum::<f64>() / col.len() as f64).sqrt();
            assert!(sd > 0.08 && sd < 0.55, "{sd}");
        }
        assert!(NoiseModel::heteroscedastic(-1.0).validate().is_err());
    }

    #[test]
    fn pathology_layout() {
        let (x, labels) = pathology_signal(3.0, 2.0, 2, 1, 3).unwrap();
        assert_eq!(labels, vec![0, 0, 1]);
        assert_eq!(x.column(0), &[4.0, 0.0, 0.0]);
        assert_eq!(x.column(2), &[2.0, 0.0, 0.0]);
        assert!(pathology_signal(1.0, 2.0, 2, 1, 3).is_err());
        assert!(pathology_signal(3.0, 2.0, 2, 1, 1).is_err());
    }

    #[test]
    fn single_component_mean_norm() {
        // μ = 0.1·1_20 has norm 0.1·√20 ≈ 0.4472
        let mu_norm = 0.1 * 20f64.sqrt();
        assert!((mu_norm - 0.4472).abs() < 1e-4);
        let x = single_component_dataset(mu_norm, 20_000, 20, &mut seeded_rng(2)).unwrap();
        let m = crate::spectral::column_mean(&x);
        assert!(m.iter().all(|v| (v - 0.1).abs() < 0.03));
    }
}
