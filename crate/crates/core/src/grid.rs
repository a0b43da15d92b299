//! Uniform centered sampling grids and the unitary discrete Fourier transform
//! in the 2π convention.
//!
//! Grid points per axis are x_j = (j - n/2)·delta, so both the position and
//! the induced frequency grid are symmetric about the origin.  `fourier`
//! absorbs all offset-induced linear phases and therefore approximates the
//! continuum transform f̂(ξ) = ∫ f(x) e^{-2πixξ} dx rather than the raw DFT.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform centered grid: n samples per axis at spacing `delta`, d axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    d: usize,
    n: usize,
    delta: f64,
}

impl GridSpec {
    pub fn new(d: usize, n: usize, delta: f64) -> Result<Self> {
        if !(1..=2).contains(&d) {
            return Err(Error::UnsupportedDim(d));
        }
        if n == 0 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("n = {n} must be even and positive")));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidGrid(format!("delta = {delta} must be finite and > 0")));
        }
        Ok(Self { d, n, delta })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn samples_per_axis(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Total number of grid points, n^d.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Extent per axis, L = n·delta; positions cover [-L/2, L/2).
    pub fn extent(&self) -> f64 {
        self.n as f64 * self.delta
    }

    /// Spacing of the induced frequency grid, 1/(n·delta).
    pub fn freq_spacing(&self) -> f64 {
        1.0 / self.extent()
    }

    /// Spacing of the halved Wigner frequency grid, 1/(2·n·delta).
    pub fn wigner_freq_spacing(&self) -> f64 {
        0.5 * self.freq_spacing()
    }

    /// The induced frequency grid reinterpreted as a GridSpec.
    pub fn frequency_grid(&self) -> GridSpec {
        GridSpec { d: self.d, n: self.n, delta: self.freq_spacing() }
    }

    /// Position coordinate of axis index j.
    pub fn coord(&self, j: usize) -> f64 {
        (j as f64 - self.n as f64 / 2.0) * self.delta
    }

    /// Frequency coordinate of axis index k on the full frequency grid.
    pub fn freq_coord(&self, k: usize) -> f64 {
        (k as f64 - self.n as f64 / 2.0) * self.freq_spacing()
    }

    /// Frequency coordinate of axis index k on the halved Wigner grid.
    pub fn wigner_freq_coord(&self, k: usize) -> f64 {
        (k as f64 - self.n as f64 / 2.0) * self.wigner_freq_spacing()
    }

    /// Axis coordinates x_j for j = 0..n.
    pub fn axis_coords(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.coord(j)).collect()
    }

    /// Decompose a flat row-major index (last axis fastest) into per-axis indices.
    pub fn unflatten(&self, idx: usize) -> [usize; 2] {
        match self.d {
            1 => [idx, 0],
            _ => [idx / self.n, idx % self.n],
        }
    }

    /// Position vector of a flat index.
    pub fn position(&self, idx: usize) -> [f64; 2] {
        let ij = self.unflatten(idx);
        match self.d {
            1 => [self.coord(ij[0]), 0.0],
            _ => [self.coord(ij[0]), self.coord(ij[1])],
        }
    }

    /// Nearest axis index of a coordinate; None if off the grid by more than half a cell.
    pub fn nearest_index(&self, x: f64) -> Option<usize> {
        let j = (x / self.delta + self.n as f64 / 2.0).round();
        if j < 0.0 || j >= self.n as f64 {
            None
        } else {
            Some(j as usize)
        }
    }
}

/// Complex samples of a wavefunction on a grid, flat row-major storage.
#[derive(Debug, Clone)]
pub struct SampledState {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
}

impl SampledState {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, values: vec![Complex64::ZERO; grid.len()] }
    }

    /// Discrete L²-norm with cell measure delta^d.
    pub fn norm_l2(&self) -> f64 {
        let cell = self.grid.delta.powi(self.grid.d as i32);
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * cell).sqrt()
    }

    pub fn scale(&mut self, c: Complex64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    /// Index of the sample with largest modulus.
    pub fn argmax_modulus(&self) -> usize {
        let mut best = 0;
        let mut bestv = -1.0;
        for (i, v) in self.values.iter().enumerate() {
            let m = v.norm_sqr();
            if m > bestv {
                bestv = m;
                best = i;
            }
        }
        best
    }
}

/// ⟨f,g⟩ = delta^d Σ f·conj(g), conjugate-linear in the second slot.
pub fn inner(f: &SampledState, g: &SampledState) -> Result<Complex64> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    let cell = f.grid.delta.powi(f.grid.d as i32);
    let s: Complex64 = f.values.iter().zip(&g.values).map(|(a, b)| a * b.conj()).sum();
    Ok(s * cell)
}

/// Shared FFT plans for one length.
pub(crate) struct FftPair {
    pub fwd: Arc<dyn Fft<f64>>,
    pub inv: Arc<dyn Fft<f64>>,
}

pub(crate) fn plan_fft(n: usize) -> FftPair {
    let mut planner = FftPlanner::new();
    FftPair { fwd: planner.plan_fft_forward(n), inv: planner.plan_fft_inverse(n) }
}

/// Global sign (-1)^(n/2) produced by the centered index offsets.
fn center_sign(n: usize) -> f64 {
    if (n / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// In-place centered transform of one contiguous length-n line.
///
/// forward: ĝ_k = delta·(-1)^(n/2)·(-1)^k Σ_j (-1)^j g_j e^{-2πijk/n},
/// which equals delta·Σ_j g_j e^{-2πi x_j ξ_k} exactly.  The inverse uses the
/// conjugate exponent with the same structure; in both directions `delta` is
/// the spacing of the grid the input data lives on (the quadrature measure).
fn centered_line(buf: &mut [Complex64], delta: f64, fft: &Arc<dyn Fft<f64>>) {
    let n = buf.len();
    for (j, v) in buf.iter_mut().enumerate() {
        if j % 2 == 1 {
            *v = -*v;
        }
    }
    fft.process(buf);
    let scale = delta * center_sign(n);
    for (k, v) in buf.iter_mut().enumerate() {
        let s = if k % 2 == 1 { -scale } else { scale };
        *v *= s;
    }
}

fn transform(f: &SampledState, inverse: bool) -> SampledState {
    let n = f.grid.n;
    let plans = plan_fft(n);
    let fft = if inverse { &plans.inv } else { &plans.fwd };
    let mut values = f.values.clone();
    match f.grid.d {
        1 => centered_line(&mut values, f.grid.delta, fft),
        2 => {
            // axis 1 (contiguous rows), then axis 0 (strided columns)
            for row in values.chunks_mut(n) {
                centered_line(row, f.grid.delta, fft);
            }
            let mut col = vec![Complex64::ZERO; n];
            for j in 0..n {
                for i in 0..n {
                    col[i] = values[i * n + j];
                }
                centered_line(&mut col, f.grid.delta, fft);
                for i in 0..n {
                    values[i * n + j] = col[i];
                }
            }
        }
        d => unreachable!("dimension {d} rejected at construction"),
    }
    // Either direction maps onto the induced dual grid, spacing 1/(n·delta).
    let grid = GridSpec { d: f.grid.d, n, delta: 1.0 / (n as f64 * f.grid.delta) };
    SampledState { grid, values }
}

/// Unitary discrete approximation of f̂(ξ) = ∫ f(x) e^{-2πixξ} dx.
///
/// Output lives on the induced frequency grid reinterpreted as a GridSpec.
pub fn fourier(f: &SampledState) -> SampledState {
    transform(f, false)
}

/// Inverse of [`fourier`]; `inverse_fourier(fourier(f)) == f` to roundoff.
pub fn inverse_fourier(f: &SampledState) -> SampledState {
    transform(f, true)
}

/// Normalized Gaussian c·e^{-π((x-x₀)/width)²}·e^{2πiξ₀·x} on the grid.
///
/// Fails with `SupportOverflow` when six standard deviations in either
/// position or frequency do not fit inside the grid extents (aliasing risk).
pub fn make_gaussian(
    grid: GridSpec,
    center_x: &[f64],
    center_xi: &[f64],
    width: f64,
) -> Result<SampledState> {
    if !(width > 0.0) {
        return Err(Error::InvalidArgument(format!("width = {width} must be > 0")));
    }
    if center_x.len() != grid.d || center_xi.len() != grid.d {
        return Err(Error::InvalidArgument("center length must equal grid dimension".into()));
    }
    // e^{-π(x/w)²} has std w/√(2π) in position and 1/(w√(2π)) in frequency.
    let sigma_x = width / (2.0 * std::f64::consts::PI).sqrt();
    let sigma_xi = 1.0 / (width * (2.0 * std::f64::consts::PI).sqrt());
    let half_l = 0.5 * grid.extent();
    let half_f = 0.5 / grid.delta;
    for a in 0..grid.d {
        if center_x[a].abs() + 6.0 * sigma_x > half_l {
            return Err(Error::SupportOverflow(format!(
                "position axis {a}: |{}| + 6σ = {} exceeds L/2 = {half_l}",
                center_x[a],
                center_x[a].abs() + 6.0 * sigma_x
            )));
        }
        if center_xi[a].abs() + 6.0 * sigma_xi > half_f {
            return Err(Error::SupportOverflow(format!(
                "frequency axis {a}: |{}| + 6σ = {} exceeds 1/(2δ) = {half_f}",
                center_xi[a],
                center_xi[a].abs() + 6.0 * sigma_xi
            )));
        }
    }
    let mut state = SampledState::zeros(grid);
    for idx in 0..grid.len() {
        let pos = grid.position(idx);
        let mut arg = 0.0;
        let mut phase = 0.0;
        for a in 0..grid.d {
            let xa = pos[a] - center_x[a];
            arg += (xa / width) * (xa / width);
            phase += center_xi[a] * pos[a];
        }
        state.values[idx] = Complex64::from_polar(
            (-std::f64::consts::PI * arg).exp(),
            2.0 * std::f64::consts::PI * phase,
        );
    }
    let nrm = state.norm_l2();
    state.scale(Complex64::new(1.0 / nrm, 0.0));
    Ok(state)
}

/// Fraction of spectral energy outside the half-band [-1/(4δ), 1/(4δ)) per axis.
pub fn out_of_band_fraction(f: &SampledState) -> f64 {
    let hat = fourier(f);
    let n = f.grid.n;
    let inside = |k: usize| -> bool {
        let c = k as i64 - (n / 2) as i64;
        c >= -((n / 4) as i64) && c < (n / 4) as i64
    };
    let mut total = 0.0;
    let mut inband = 0.0;
    for (idx, v) in hat.values.iter().enumerate() {
        let e = v.norm_sqr();
        total += e;
        let ij = f.grid.unflatten(idx);
        let ok = match f.grid.d {
            1 => inside(ij[0]),
            _ => inside(ij[0]) && inside(ij[1]),
        };
        if ok {
            inband += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        ((total - inband) / total).max(0.0)
    }
}

/// Enforce the Wigner half-band precondition (≥ 1-1e-6 of energy inside).
pub fn check_band_limit(f: &SampledState) -> Result<()> {
    let outside = out_of_band_fraction(f);
    if outside > 1e-6 {
        Err(Error::BandLimit { outside })
    } else {
        Ok(())
    }
}

/// Random state with spectrum strictly inside the Wigner half-band.
///
/// Spectral coefficients are iid complex Gaussian on bins |k - n/2| <= n/4 - 2
/// and zero elsewhere; the result is normalized.
pub fn random_bandlimited_state<R: Rng>(grid: GridSpec, rng: &mut R) -> SampledState {
    let n = grid.n;
    let freq = grid.frequency_grid();
    let mut hat = SampledState::zeros(freq);
    let lim = (n / 4).saturating_sub(2) as i64;
    for idx in 0..freq.len() {
        let ij = freq.unflatten(idx);
        let ok = (0..grid.d).all(|a| {
            let c = ij[a] as i64 - (n / 2) as i64;
            c.abs() <= lim
        });
        if ok {
            hat.values[idx] = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
    }
    let mut f = inverse_fourier(&hat);
    let nrm = f.norm_l2();
    f.scale(Complex64::new(1.0 / nrm, 0.0));
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid256() -> GridSpec {
        GridSpec::new(1, 256, 1.0 / 16.0).unwrap()
    }

    #[test]
    fn gaussian_is_normalized() {
        let f = make_gaussian(grid256(), &[0.0], &[0.0], 1.0).unwrap();
        assert_relative_eq!(f.norm_l2(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_support_overflow_rejected() {
        let g = grid256();
        // center far outside the position extent
        let err = make_gaussian(g, &[7.9], &[0.0], 1.0).unwrap_err();
        assert!(matches!(err, Error::SupportOverflow(_)));
        let err = make_gaussian(g, &[0.0], &[7.9], 1.0).unwrap_err();
        assert!(matches!(err, Error::SupportOverflow(_)));
    }

    #[test]
    fn standard_gaussian_is_fourier_fixed_point() {
        // e^{-πx²} is its own transform in the 2π convention.
        let f = make_gaussian(grid256(), &[0.0], &[0.0], 1.0).unwrap();
        let hat = fourier(&f);
        let err = f
            .values
            .iter()
            .zip(&hat.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "max deviation {err}");
    }

    #[test]
    fn fourier_matches_direct_quadrature() {
        // Oracle: O(N²) evaluation of delta·Σ f(x_j) e^{-2πi x_j ξ}.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = GridSpec::new(1, 64, 0.2).unwrap();
        let f = random_bandlimited_state(g, &mut rng);
        let hat = fourier(&f);
        for k in (0..64).step_by(7) {
            let xi = g.freq_coord(k);
            let mut s = Complex64::ZERO;
            for j in 0..64 {
                s += f.values[j]
                    * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * g.coord(j) * xi);
            }
            s *= g.delta();
            assert!((s - hat.values[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn impulse_has_flat_spectrum() {
        let g = GridSpec::new(1, 64, 0.25).unwrap();
        let mut f = SampledState::zeros(g);
        f.values[32] = Complex64::new(1.0, 0.0); // x = 0
        let hat = fourier(&f);
        for v in &hat.values {
            assert_relative_eq!(v.norm(), g.delta(), epsilon = 1e-13);
        }
    }

    #[test]
    fn parseval_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let g = grid256();
            let mut f = SampledState::zeros(g);
            for v in &mut f.values {
                *v = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
            assert_relative_eq!(fourier(&f).norm_l2(), f.norm_l2(), epsilon = 1e-12);
        }
    }

    #[test]
    fn double_fourier_is_parity() {
        let f = make_gaussian(grid256(), &[1.0], &[-0.5], 1.0).unwrap();
        let ff = fourier(&fourier(&f));
        let n = 256;
        for j in 0..n {
            let parity = f.values[(n - j) % n];
            assert!((ff.values[j] - parity).norm() < 1e-10);
        }
    }

    #[test]
    fn inverse_fourier_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // one self-dual grid and one far from self-dual
        for g in [grid256(), GridSpec::new(1, 64, 0.05).unwrap()] {
            let f = random_bandlimited_state(g, &mut rng);
            let back = inverse_fourier(&fourier(&f));
            assert_eq!(back.grid, f.grid);
            let err = f
                .values
                .iter()
                .zip(&back.values)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-13);
            // unitarity on the non-self-dual grid as well
            assert_relative_eq!(fourier(&f).norm_l2(), f.norm_l2(), epsilon = 1e-12);
        }
    }

    #[test]
    fn offcenter_gaussian_peaks_at_center() {
        let f = make_gaussian(grid256(), &[2.0], &[3.0], 1.0).unwrap();
        let g = f.grid;
        let jmax = f.argmax_modulus();
        assert!((g.coord(jmax) - 2.0).abs() <= g.delta());
        let hat = fourier(&f);
        let kmax = hat.argmax_modulus();
        assert!((g.freq_coord(kmax) - 3.0).abs() <= g.freq_spacing());
    }

    #[test]
    fn inner_products() {
        let g = grid256();
        let f = make_gaussian(g, &[0.0], &[0.0], 1.0).unwrap();
        let ip = inner(&f, &f).unwrap();
        assert_relative_eq!(ip.re, 1.0, epsilon = 1e-12);
        assert!(ip.im.abs() < 1e-14);

        // parity orthogonality: <gaussian, x·gaussian> = 0
        let mut xg = f.clone();
        for (idx, v) in xg.values.iter_mut().enumerate() {
            *v *= g.position(idx)[0];
        }
        assert!(inner(&f, &xg).unwrap().norm() < 1e-12);

        let h = make_gaussian(g, &[1.0], &[0.5], 1.0).unwrap();
        let a = inner(&f, &h).unwrap();
        let b = inner(&h, &f).unwrap();
        assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn d2_fourier_unitary_and_separable() {
        let g = GridSpec::new(2, 32, 1.0 / 6.0).unwrap();
        let f = make_gaussian(g, &[0.2, -0.1], &[0.25, 0.0], 1.0).unwrap();
        let hat = fourier(&f);
        assert_relative_eq!(hat.norm_l2(), 1.0, epsilon = 1e-12);
        // peak at the frequency center
        let kmax = hat.argmax_modulus();
        let ij = g.unflatten(kmax);
        assert!((g.freq_coord(ij[0]) - 0.25).abs() <= g.freq_spacing());
        assert!((g.freq_coord(ij[1]) - 0.0).abs() <= g.freq_spacing());
    }

    #[test]
    fn bandlimited_generator_passes_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_bandlimited_state(grid256(), &mut rng);
        check_band_limit(&f).unwrap();
        // A spike is maximally broadband.
        let g = grid256();
        let mut spike = SampledState::zeros(g);
        spike.values[128] = Complex64::new(1.0, 0.0);
        assert!(check_band_limit(&spike).is_err());
    }
}
