//! Singular values of the column-centered data matrix.
//!
//! Small matrices go through a dense SVD of the explicitly centered matrix.
//! Larger ones use the symmetric eigendecomposition of the centered Gram
//! matrix on the smaller side, which is accumulated block by block so the
//! centered `p × n` matrix is never materialized:
//!
//! - rows side (`p ≤ n`): `X̃X̃ᵀ = XXᵀ − n·x̄x̄ᵀ`, a `p × p` matrix;
//! - cols side (`p > n`): `X̃ᵀX̃ = H(XᵀX)H`, an `n × n` matrix.
//!
//! The eigenvalues `λᵢ` of either Gram matrix are the squared singular values
//! of `X̃`, so `σᵢ = √max(λᵢ, 0)`.

use std::time::Instant;

use faer::linalg::matmul::triangular::{matmul, BlockStructure};
use faer::{Accum, Mat, MatRef, Par, Side};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense `p × n` matrix of observations, one sample per column.
///
/// Values are stored column-major, so sample `i` occupies
/// `values[i*p .. (i+1)*p]`. Every entry is finite.
#[derive(Clone, Debug, PartialEq)]
pub struct DataMatrix {
    p: usize,
    n: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    pub fn new(p: usize, n: usize, values: Vec<f64>) -> Result<Self> {
        if p == 0 || n == 0 {
            return Err(Error::InvalidDimensions(format!(
                "p and n must be positive, got p={p}, n={n}"
            )));
        }
        let len = p
            .checked_mul(n)
            .ok_or_else(|| Error::InvalidDimensions(format!("p*n overflows for p={p}, n={n}")))?;
        if values.len() != len {
            return Err(Error::InvalidDimensions(format!(
                "expected {len} values for a {p}x{n} matrix, got {}",
                values.len()
            )));
        }
        if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: idx % p,
                col: idx / p,
            });
        }
        Ok(Self { p, n, values })
    }

    pub fn zeros(p: usize, n: usize) -> Result<Self> {
        Self::new(p, n, vec![0.0; p.saturating_mul(n)])
    }

    /// Builds the matrix from `f(row, col)`.
    pub fn from_fn(p: usize, n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(p.saturating_mul(n));
        for col in 0..n {
            for row in 0..p {
                values.push(f(row, col));
            }
        }
        Self::new(p, n, values)
    }

    /// Builds the matrix from a list of samples; each sample becomes a column.
    pub fn from_samples(samples: &[Vec<f64>]) -> Result<Self> {
        let p = samples.first().map_or(0, Vec::len);
        if let Some((i, s)) = samples.iter().enumerate().find(|(_, s)| s.len() != p) {
            return Err(Error::InvalidDimensions(format!(
                "sample {i} has {} coordinates, expected {p}",
                s.len()
            )));
        }
        Self::new(p, samples.len(), samples.concat())
    }

    /// Dimension (number of rows).
    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of samples (columns).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[col * self.p + row]
    }

    pub fn column(&self, col: usize) -> &[f64] {
        &self.values[col * self.p..(col + 1) * self.p]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.p)
    }

    /// `X + c·1ᵀ`: adds `shift` to every sample.
    pub fn shifted(&self, shift: &[f64]) -> Result<Self> {
        if shift.len() != self.p {
            return Err(Error::InvalidDimensions(format!(
                "shift has length {}, expected {}",
                shift.len(),
                self.p
            )));
        }
        let mut values = self.values.clone();
        for col in values.chunks_exact_mut(self.p) {
            for (v, c) in col.iter_mut().zip(shift) {
                *v += c;
            }
        }
        Self::new(self.p, self.n, values)
    }

    /// The explicitly centered matrix `X − x̄1ᵀ`.
    pub fn centered(&self) -> Self {
        let mean = column_mean(self);
        let mut values = self.values.clone();
        for col in values.chunks_exact_mut(self.p) {
            for (v, m) in col.iter_mut().zip(&mean) {
                *v -= m;
            }
        }
        Self {
            p: self.p,
            n: self.n,
            values,
        }
    }

    pub fn as_mat_ref(&self) -> MatRef<'_, f64> {
        MatRef::from_column_major_slice(&self.values, self.p, self.n)
    }
}

/// How [`singular_values_centered`] should compute the spectrum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Direct SVD up to [`SpectralOptions::direct_cutoff`], Gram eigensolve above.
    #[default]
    Auto,
    Direct,
    Gram,
}

/// The route actually taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComputedBy {
    Direct,
    GramRows,
    GramCols,
}

/// Which Gram matrix to form: `X̃X̃ᵀ` (`p × p`) or `X̃ᵀX̃` (`n × n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GramSide {
    Rows,
    Cols,
}

impl GramSide {
    /// The smaller side: rows when `p ≤ n`.
    pub fn smaller(p: usize, n: usize) -> Self {
        if p <= n {
            GramSide::Rows
        } else {
            GramSide::Cols
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralOptions {
    /// `Strategy::Auto` uses the direct SVD when `max(p, n)` is at most this.
    pub direct_cutoff: usize,
    /// Number of columns (rows side) or rows (cols side) streamed per block.
    pub block_size: usize,
    /// Largest Gram dimension that will be allocated.
    pub max_gram_dim: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            direct_cutoff: 2048,
            block_size: 4096,
            max_gram_dim: 32_768,
        }
    }
}

/// Singular values sorted non-increasing, of length `min(p, n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub singular_values: Vec<f64>,
    pub strategy: ComputedBy,
    /// Seconds.
    pub wall_time: f64,
}

/// Sample mean of the columns, `x̄ⱼ = (1/n) Σᵢ Xⱼᵢ`.
pub fn column_mean(x: &DataMatrix) -> Vec<f64> {
    let mut sum = vec![0.0; x.p];
    for col in x.columns() {
        for (s, v) in sum.iter_mut().zip(col) {
            *s += v;
        }
    }
    let n = x.n as f64;
    sum.iter_mut().for_each(|s| *s /= n);
    sum
}

/// One-pass accumulator of `Σ xᵢxᵢᵀ` over streamed columns, optionally centered.
///
/// Columns are shifted by the mean of the first block before accumulating and
/// the rank-one correction `−n·ddᵀ` (with `d = x̄ − shift`) is applied at the
/// end. Algebraically this is `XXᵀ − n·x̄x̄ᵀ`; the shift keeps a large common
/// offset from cancelling catastrophically.
#[derive(Debug)]
pub struct RowGramAccumulator {
    p: usize,
    count: usize,
    centered: bool,
    shift: Option<Vec<f64>>,
    sum: Vec<f64>,
    gram: Mat<f64>,
    buf: Vec<f64>,
}

impl RowGramAccumulator {
    pub fn centered(p: usize) -> Self {
        Self::with_centering(p, true)
    }

    pub fn uncentered(p: usize) -> Self {
        Self::with_centering(p, false)
    }

    fn with_centering(p: usize, centered: bool) -> Self {
        Self {
            p,
            count: 0,
            centered,
            shift: None,
            sum: vec![0.0; p],
            gram: Mat::zeros(p, p),
            buf: Vec::new(),
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Adds a column-major block of whole samples.
    pub fn push_block(&mut self, block: &[f64]) -> Result<()> {
        let p = self.p;
        if p == 0 || !block.len().is_multiple_of(p) {
            return Err(Error::InvalidDimensions(format!(
                "block of length {} is not a whole number of {p}-dimensional samples",
                block.len()
            )));
        }
        let cols = block.len() / p;
        if cols == 0 {
            return Ok(());
        }
        if let Some(idx) = block.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: idx % p,
                col: self.count + idx / p,
            });
        }

        let data: &[f64] = if self.centered {
            let shift = self.shift.get_or_insert_with(|| {
                let mut m = vec![0.0; p];
                for col in block.chunks_exact(p) {
                    for (s, v) in m.iter_mut().zip(col) {
                        *s += v;
                    }
                }
                m.iter_mut().for_each(|s| *s /= cols as f64);
                m
            });
            self.buf.clear();
            self.buf.reserve(block.len());
            for col in block.chunks_exact(p) {
                for ((v, s), acc) in col.iter().zip(shift.iter()).zip(self.sum.iter_mut()) {
                    let d = v - s;
                    *acc += d;
                    self.buf.push(d);
                }
            }
            &self.buf
        } else {
            block
        };

        let b = MatRef::from_column_major_slice(data, p, cols);
        matmul(
            self.gram.as_mut(),
            BlockStructure::TriangularLower,
            Accum::Add,
            b,
            BlockStructure::Rectangular,
            b.transpose(),
            BlockStructure::Rectangular,
            1.0,
            Par::Seq,
        );
        self.count += cols;
        Ok(())
    }

    /// The symmetric `p × p` Gram matrix of everything pushed so far.
    pub fn finish(mut self) -> Result<Mat<f64>> {
        if self.count == 0 {
            return Err(Error::InvalidDimensions("no samples were pushed".into()));
        }
        if self.centered {
            let n = self.count as f64;
            let d: Vec<f64> = self.sum.iter().map(|s| s / n).collect();
            for j in 0..self.p {
                for i in j..self.p {
                    self.gram[(i, j)] -= n * d[i] * d[j];
                }
            }
        }
        mirror_lower(&mut self.gram);
        Ok(self.gram)
    }
}

/// Copies the lower triangle onto the upper one, making the matrix exactly
/// symmetric.
fn mirror_lower(g: &mut Mat<f64>) {
    let m = g.nrows();
    for j in 0..m {
        for i in (j + 1)..m {
            g[(j, i)] = g[(i, j)];
        }
    }
}

fn check_gram_dim(dim: usize, opts: &SpectralOptions) -> Result<()> {
    if dim > opts.max_gram_dim || dim.checked_mul(dim).is_none() {
        return Err(Error::GramTooLarge {
            dim,
            limit: opts.max_gram_dim,
        });
    }
    Ok(())
}

/// `X̃ᵀX̃` streamed over blocks of rows; each row block is centered exactly
/// with its own row means, which equals applying `H` on both sides of `XᵀX`.
fn col_gram(x: &DataMatrix, block_size: usize, centered: bool) -> Mat<f64> {
    let (p, n) = (x.p, x.n);
    let mut gram = Mat::<f64>::zeros(n, n);
    let mut buf = Vec::new();
    let mut start = 0;
    while start < p {
        let rows = block_size.min(p - start);
        buf.clear();
        buf.resize(rows * n, 0.0);
        // buf is rows × n column-major
        for (i, col) in x.columns().enumerate() {
            buf[i * rows..(i + 1) * rows].copy_from_slice(&col[start..start + rows]);
        }
        if centered {
            for r in 0..rows {
                let mean = (0..n).map(|i| buf[i * rows + r]).sum::<f64>() / n as f64;
                for i in 0..n {
                    buf[i * rows + r] -= mean;
                }
            }
        }
        let b = MatRef::from_column_major_slice(&buf, rows, n);
        matmul(
            gram.as_mut(),
            BlockStructure::TriangularLower,
            Accum::Add,
            b.transpose(),
            BlockStructure::Rectangular,
            b,
            BlockStructure::Rectangular,
            1.0,
            Par::Seq,
        );
        start += rows;
    }
    mirror_lower(&mut gram);
    gram
}

fn gram_with(
    x: &DataMatrix,
    side: GramSide,
    block_size: usize,
    centered: bool,
) -> Result<Mat<f64>> {
    if block_size == 0 {
        return Err(Error::InvalidParameter(
            "block_size must be at least 1".into(),
        ));
    }
    match side {
        GramSide::Rows => {
            let mut acc = RowGramAccumulator::with_centering(x.p, centered);
            for block in x.values.chunks(block_size.saturating_mul(x.p)) {
                acc.push_block(block)?;
            }
            acc.finish()
        }
        GramSide::Cols => Ok(col_gram(x, block_size, centered)),
    }
}

/// The exact centered Gram matrix for `side`, computed by streaming blocks.
///
/// Fails with [`Error::GramTooLarge`] when the chosen side exceeds the
/// default [`SpectralOptions::max_gram_dim`]; pick the other side then.
pub fn centered_gram(x: &DataMatrix, side: GramSide, block_size: usize) -> Result<Mat<f64>> {
    let dim = match side {
        GramSide::Rows => x.p,
        GramSide::Cols => x.n,
    };
    check_gram_dim(dim, &SpectralOptions::default())?;
    gram_with(x, side, block_size, true)
}

/// Eigenvalues of a symmetric PSD matrix mapped to singular values:
/// clamped at zero, square-rooted, sorted non-increasing.
pub fn gram_singular_values(gram: &Mat<f64>) -> Result<Vec<f64>> {
    let mut eig = gram
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    eig.reverse();
    Ok(eig.into_iter().map(|l| l.max(0.0).sqrt()).collect())
}

fn direct_singular_values(m: MatRef<'_, f64>) -> Result<Vec<f64>> {
    let mut sv = m
        .singular_values()
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    sv.iter_mut().for_each(|s| *s = s.max(0.0));
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

fn spectrum(
    x: &DataMatrix,
    centered: bool,
    strategy: Strategy,
    opts: &SpectralOptions,
) -> Result<SpectrumResult> {
    let start = Instant::now();
    let use_direct = match strategy {
        Strategy::Direct => true,
        Strategy::Gram => false,
        Strategy::Auto => x.p.max(x.n) <= opts.direct_cutoff,
    };
    let (singular_values, computed_by) = if use_direct {
        let sv = if centered {
            direct_singular_values(x.centered().as_mat_ref())?
        } else {
            direct_singular_values(x.as_mat_ref())?
        };
        (sv, ComputedBy::Direct)
    } else {
        let side = GramSide::smaller(x.p, x.n);
        check_gram_dim(x.p.min(x.n), opts)?;
        let gram = gram_with(x, side, opts.block_size, centered)?;
        let by = match side {
            GramSide::Rows => ComputedBy::GramRows,
            GramSide::Cols => ComputedBy::GramCols,
        };
        (gram_singular_values(&gram)?, by)
    };
    Ok(SpectrumResult {
        singular_values,
        strategy: computed_by,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Singular values of `X̃ = X − x̄1ᵀ` with default [`SpectralOptions`].
pub fn singular_values_centered(x: &DataMatrix, strategy: Strategy) -> Result<SpectrumResult> {
    spectrum(x, true, strategy, &SpectralOptions::default())
}

pub fn singular_values_centered_with(
    x: &DataMatrix,
    strategy: Strategy,
    opts: &SpectralOptions,
) -> Result<SpectrumResult> {
    spectrum(x, true, strategy, opts)
}

/// Singular values of `X` itself, without centering.
pub fn singular_values_uncentered_with(
    x: &DataMatrix,
    strategy: Strategy,
    opts: &SpectralOptions,
) -> Result<SpectrumResult> {
    spectrum(x, false, strategy, opts)
}

/// Largest singular value of `X` (uncentered).
pub fn spectral_norm(x: &DataMatrix) -> Result<f64> {
    let s = spectrum(x, false, Strategy::Auto, &SpectralOptions::default())?;
    Ok(s.singular_values[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(r: &[&[f64]]) -> DataMatrix {
        let p = r.len();
        let n = r[0].len();
        DataMatrix::from_fn(p, n, |i, j| r[i][j]).unwrap()
    }

    #[test]
    fn column_mean_examples() {
        assert_eq!(column_mean(&rows(&[&[1.0, 3.0]])), vec![2.0]);
        assert_eq!(column_mean(&DataMatrix::zeros(3, 4).unwrap()), vec![0.0; 3]);
        assert_eq!(
            column_mean(&rows(&[&[1.0, 0.0], &[0.0, 1.0]])),
            vec![0.5, 0.5]
        );
    }

    #[test]
    fn data_matrix_validation() {
        assert!(DataMatrix::new(0, 3, vec![]).is_err());
        assert!(DataMatrix::new(2, 2, vec![1.0; 3]).is_err());
        match DataMatrix::new(2, 2, vec![1.0, 2.0, f64::NAN, 4.0]) {
            Err(Error::NonFinite { row: 0, col: 1 }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(DataMatrix::from_samples(&[vec![1.0, 2.0], vec![3.0]]).is_err());
        let x = DataMatrix::from_samples(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(x.get(0, 1), 3.0);
        assert_eq!(x.column(1), &[3.0, 4.0]);
    }

    #[test]
    fn centered_gram_zero_mean_row() {
        let x = rows(&[&[1.0, -1.0]]);
        let g = centered_gram(&x, GramSide::Rows, 1).unwrap();
        assert_eq!((g.nrows(), g.ncols()), (1, 1));
        assert!((g[(0, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn centering_annihilates_repeated_column() {
        let x = DataMatrix::from_fn(4, 9, |i, _| 1.5 * i as f64 - 2.0).unwrap();
        for side in [GramSide::Rows, GramSide::Cols] {
            let g = centered_gram(&x, side, 2).unwrap();
            for j in 0..g.ncols() {
                for i in 0..g.nrows() {
                    assert!(
                        g[(i, j)].abs() < 1e-12,
                        "{side:?} ({i},{j}) = {}",
                        g[(i, j)]
                    );
                }
            }
        }
    }

    #[test]
    fn gram_is_exactly_symmetric_and_block_independent() {
        let x = DataMatrix::from_fn(5, 13, |i, j| ((i * 7 + j * 3) % 11) as f64 - 4.5).unwrap();
        for side in [GramSide::Rows, GramSide::Cols] {
            let a = centered_gram(&x, side, 1).unwrap();
            let b = centered_gram(&x, side, 1000).unwrap();
            for j in 0..a.ncols() {
                for i in 0..a.nrows() {
                    assert_eq!(a[(i, j)], a[(j, i)]);
                    assert!((a[(i, j)] - b[(i, j)]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn zero_matrix_spectrum() {
        let x = DataMatrix::zeros(3, 5).unwrap();
        for strategy in [Strategy::Direct, Strategy::Gram, Strategy::Auto] {
            let s = singular_values_centered(&x, strategy).unwrap();
            assert_eq!(s.singular_values, vec![0.0; 3]);
        }
    }

    #[test]
    fn spectral_norm_small_cases() {
        assert!((spectral_norm(&rows(&[&[3.0]])).unwrap() - 3.0).abs() < 1e-14);
        let d = rows(&[&[1.0, 0.0], &[0.0, 2.0]]);
        assert!((spectral_norm(&d).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn auto_picks_route_by_cutoff_and_side() {
        let x = DataMatrix::from_fn(3, 10, |i, j| (i + j * j) as f64).unwrap();
        let mut opts = SpectralOptions::default();
        let s = singular_values_centered_with(&x, Strategy::Auto, &opts).unwrap();
        assert_eq!(s.strategy, ComputedBy::Direct);
        opts.direct_cutoff = 4;
        let s = singular_values_centered_with(&x, Strategy::Auto, &opts).unwrap();
        assert_eq!(s.strategy, ComputedBy::GramRows);
        assert_eq!(s.singular_values.len(), 3);

        let xt = DataMatrix::from_fn(10, 3, |i, j| (j + i * i) as f64).unwrap();
        let s = singular_values_centered_with(&xt, Strategy::Gram, &opts).unwrap();
        assert_eq!(s.strategy, ComputedBy::GramCols);
        assert_eq!(s.singular_values.len(), 3);
    }

    #[test]
    fn gram_dimension_limit() {
        let x = DataMatrix::zeros(6, 8).unwrap();
        let opts = SpectralOptions {
            max_gram_dim: 5,
            ..Default::default()
        };
        match singular_values_centered_with(&x, Strategy::Gram, &opts) {
            Err(Error::GramTooLarge { dim: 6, limit: 5 }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(centered_gram(&x, GramSide::Rows, 0).is_err());
    }

    #[test]
    fn accumulator_streams_like_batch() {
        let x = DataMatrix::from_fn(4, 20, |i, j| (i as f64 + 1.0) * ((j * j) % 7) as f64 + 1e3)
            .unwrap();
        let mut acc = RowGramAccumulator::centered(4);
        for block in x.values().chunks(4 * 3) {
            acc.push_block(block).unwrap();
        }
        assert_eq!(acc.count(), 20);
        let streamed = acc.finish().unwrap();
        let batch = centered_gram(&x, GramSide::Rows, 4096).unwrap();
        for j in 0..4 {
            for i in 0..4 {
                assert!((streamed[(i, j)] - batch[(i, j)]).abs() < 1e-8);
            }
        }
        assert!(RowGramAccumulator::centered(3)
            .push_block(&[1.0; 4])
            .is_err());
        assert!(RowGramAccumulator::centered(3).finish().is_err());
    }
}
