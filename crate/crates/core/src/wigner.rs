//! Discrete cross-Wigner, τ-Wigner and Rihaczek distributions.
//!
//! The discrete Wigner uses the integer-shift sum
//!
//!   W[j,k] = 2δ · Σ_m f[j+m]·conj(g[j-m]) · e^{-4πi m δ ξ_k},
//!
//! with ξ_k = (k - n/2)/(2nδ), so the frequency range is halved to
//! [-1/(4δ), 1/(4δ)).  Callers must keep signals in the lower half-band;
//! `cross_wigner` enforces this with a spectral-energy check.  Out-of-range
//! samples are treated as zero, which keeps W(f,f) exactly real.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{self, GridSpec, SampledState};

/// Samples on the 2d-dimensional (x,ξ) lattice.
///
/// Rows are flat position indices, columns flat frequency indices on the
/// halved Wigner frequency grid.
#[derive(Debug, Clone)]
pub struct PhaseSpaceFunction {
    pub grid: GridSpec,
    pub values: Array2<Complex64>,
}

impl PhaseSpaceFunction {
    /// Phase-space cell measure (δ · δ_wigner)^d.
    pub fn cell(&self) -> f64 {
        (self.grid.delta() * self.grid.wigner_freq_spacing()).powi(self.grid.dim() as i32)
    }

    pub fn norm_l2(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell()).sqrt()
    }

    pub fn norm_l1(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum::<f64>() * self.cell()
    }

    /// ∬ W dx dξ.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.cell()
    }

    /// Max imaginary part relative to max modulus (realness diagnostic).
    pub fn relative_imag(&self) -> f64 {
        let max_mod = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let max_im = self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        if max_mod == 0.0 {
            0.0
        } else {
            max_im / max_mod
        }
    }

    /// Phase-space coordinates (x.., ξ..) of the cell with largest modulus.
    pub fn argmax(&self) -> Vec<f64> {
        let mut best = (0usize, 0usize);
        let mut bestv = -1.0;
        for ((r, c), v) in self.values.indexed_iter() {
            let m = v.norm_sqr();
            if m > bestv {
                bestv = m;
                best = (r, c);
            }
        }
        let d = self.grid.dim();
        let pos = self.grid.unflatten(best.0);
        let frq = self.grid.unflatten(best.1);
        let mut out = Vec::with_capacity(2 * d);
        for a in 0..d {
            out.push(self.grid.coord(pos[a]));
        }
        for a in 0..d {
            out.push(self.grid.wigner_freq_coord(frq[a]));
        }
        out
    }
}

/// ⟨A,B⟩ over phase space with the cell measure, conjugate-linear in B.
pub fn ps_inner(a: &PhaseSpaceFunction, b: &PhaseSpaceFunction) -> Result<Complex64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let s: Complex64 = a
        .values
        .iter()
        .zip(b.values.iter())
        .map(|(x, y)| x * y.conj())
        .sum();
    Ok(s * a.cell())
}

/// One Wigner lag row: c[m mod n] = pair(m)·(-1)^m for m in [-n/2, n/2);
/// a forward FFT of the result evaluates the lag sum on the halved grid.
fn lag_line<F: Fn(i64) -> Complex64>(n: usize, pair: F, out: &mut [Complex64]) {
    let half = (n / 2) as i64;
    for mp in 0..n {
        let m = if (mp as i64) < half { mp as i64 } else { mp as i64 - n as i64 };
        let v = pair(m);
        out[mp] = if m % 2 == 0 { v } else { -v };
    }
}

/// Cross-Wigner distribution W(f,g) on the (x,ξ) lattice.
pub fn cross_wigner(f: &SampledState, g: &SampledState) -> Result<PhaseSpaceFunction> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    grid::check_band_limit(f)?;
    grid::check_band_limit(g)?;
    Ok(cross_wigner_unchecked(f, g))
}

/// Cross-Wigner without the band-limit precondition (for internal use where
/// the caller accounts for aliasing).
pub fn cross_wigner_unchecked(f: &SampledState, g: &SampledState) -> PhaseSpaceFunction {
    let n = f.grid.samples_per_axis();
    let delta = f.grid.delta();
    match f.grid.dim() {
        1 => {
            let plans = grid::plan_fft(n);
            let fft = plans.fwd;
            let scale = Complex64::new(2.0 * delta, 0.0);
            let mut values = Array2::from_elem((n, n), Complex64::ZERO);
            let rows: Vec<(usize, Vec<Complex64>)> = (0..n)
                .into_par_iter()
                .map(|j| {
                    let mut lag = vec![Complex64::ZERO; n];
                    lag_line(n, |m| {
                        let jp = j as i64 + m;
                        let jm = j as i64 - m;
                        if jp < 0 || jp >= n as i64 || jm < 0 || jm >= n as i64 {
                            Complex64::ZERO
                        } else {
                            f.values[jp as usize] * g.values[jm as usize].conj()
                        }
                    }, &mut lag);
                    fft.process(&mut lag);
                    for v in &mut lag {
                        *v *= scale;
                    }
                    (j, lag)
                })
                .collect();
            for (j, lag) in rows {
                for (k, v) in lag.into_iter().enumerate() {
                    values[(j, k)] = v;
                }
            }
            PhaseSpaceFunction { grid: f.grid, values }
        }
        2 => {
            let fm = Array2::from_shape_vec((n, n), f.values.clone()).expect("shape");
            let gm = Array2::from_shape_vec((n, n), g.values.clone()).expect("shape");
            let values = cross_wigner_two_var(&fm, &gm, delta);
            PhaseSpaceFunction { grid: f.grid, values }
        }
        d => unreachable!("dimension {d} rejected at construction"),
    }
}

/// 2-variable discrete cross-Wigner of functions on an n×n tensor grid with
/// spacing `delta` on both axes.
///
/// Output layout: rows = flat position index a·n+b, columns = flat frequency
/// index p·n+q on the halved grid; measure (2δ)² folded in.
pub(crate) fn cross_wigner_two_var(
    fv: &Array2<Complex64>,
    gv: &Array2<Complex64>,
    delta: f64,
) -> Array2<Complex64> {
    let n = fv.nrows();
    let plans = grid::plan_fft(n);
    let fft = plans.fwd;
    let scale = Complex64::new((2.0 * delta) * (2.0 * delta), 0.0);
    let mut out = Array2::from_elem((n * n, n * n), Complex64::ZERO);
    let rows: Vec<(usize, Vec<Complex64>)> = (0..n * n)
        .into_par_iter()
        .map(|ab| {
            let (a, b) = (ab / n, ab % n);
            let mut lag = vec![Complex64::ZERO; n * n];
            let half = (n / 2) as i64;
            for mp in 0..n {
                let m = if (mp as i64) < half { mp as i64 } else { mp as i64 - n as i64 };
                let ap = a as i64 + m;
                let am = a as i64 - m;
                if ap < 0 || ap >= n as i64 || am < 0 || am >= n as i64 {
                    continue;
                }
                for mq in 0..n {
                    let q = if (mq as i64) < half { mq as i64 } else { mq as i64 - n as i64 };
                    let bp = b as i64 + q;
                    let bm = b as i64 - q;
                    if bp < 0 || bp >= n as i64 || bm < 0 || bm >= n as i64 {
                        continue;
                    }
                    let v = fv[(ap as usize, bp as usize)] * gv[(am as usize, bm as usize)].conj();
                    lag[mp * n + mq] = if (m + q) % 2 == 0 { v } else { -v };
                }
            }
            for r in lag.chunks_mut(n) {
                fft.process(r);
            }
            let mut col = vec![Complex64::ZERO; n];
            for j in 0..n {
                for i in 0..n {
                    col[i] = lag[i * n + j];
                }
                fft.process(&mut col);
                for i in 0..n {
                    lag[i * n + j] = col[i];
                }
            }
            for v in &mut lag {
                *v *= scale;
            }
            (ab, lag)
        })
        .collect();
    for (ab, lag) in rows {
        for (kk, v) in lag.into_iter().enumerate() {
            out[(ab, kk)] = v;
        }
    }
    out
}

/// Partial Wigner of a d=2 state in one coordinate plane: the other plane is
/// traced out, W_axis(x,ξ) = δ·Σ_b W(f[·,b], g[·,b])(x,ξ).
pub fn partial_wigner(f: &SampledState, g: &SampledState, axis: usize) -> Result<PhaseSpaceFunction> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    if f.grid.dim() != 2 {
        return Err(Error::UnsupportedDim(f.grid.dim()));
    }
    if axis > 1 {
        return Err(Error::InvalidArgument("axis must be 0 or 1".into()));
    }
    grid::check_band_limit(f)?;
    grid::check_band_limit(g)?;
    let n = f.grid.samples_per_axis();
    let delta = f.grid.delta();
    let g1 = GridSpec::new(1, n, delta)?;
    let mut acc = Array2::from_elem((n, n), Complex64::ZERO);
    let mut fcol = SampledState::zeros(g1);
    let mut gcol = SampledState::zeros(g1);
    for b in 0..n {
        for i in 0..n {
            let idx = if axis == 0 { i * n + b } else { b * n + i };
            fcol.values[i] = f.values[idx];
            gcol.values[i] = g.values[idx];
        }
        let w = cross_wigner_unchecked(&fcol, &gcol);
        acc += &(&w.values * Complex64::new(delta, 0.0));
    }
    Ok(PhaseSpaceFunction { grid: g1, values: acc })
}

/// Spectrally zero-padded factor-2 oversampling of a d=1 state.
/// Returns 2n samples at spacing δ/2 covering the same extent.
fn oversample2(f: &SampledState) -> Vec<Complex64> {
    let n = f.grid.samples_per_axis();
    let hat = grid::fourier(f);
    let fine = GridSpec::new(1, 2 * n, f.grid.delta() / 2.0).expect("valid grid");
    let mut hat2 = SampledState::zeros(fine.frequency_grid());
    // embed centered spectrum: bin k (offset c = k-n/2) -> bin n/2+k (offset c)
    for k in 0..n {
        hat2.values[n / 2 + k] = hat.values[k];
    }
    grid::inverse_fourier(&hat2).values
}

/// τ-Wigner distribution, Eq-level family interpolating Rihaczek (τ=0),
/// Wigner (τ=1/2) and conjugate Rihaczek (τ=1).
///
/// Interior τ values use a factor-2 oversampled integrand with linear
/// interpolation for off-lattice points; error budget ~1e-4 relative.
pub fn tau_wigner(f: &SampledState, g: &SampledState, tau: f64) -> Result<PhaseSpaceFunction> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    if f.grid.dim() != 1 {
        return Err(Error::UnsupportedDim(f.grid.dim()));
    }
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::InvalidArgument(format!("tau = {tau} outside [0,1]")));
    }
    grid::check_band_limit(f)?;
    grid::check_band_limit(g)?;
    let n = f.grid.samples_per_axis();
    let delta = f.grid.delta();

    if (tau - 0.5).abs() < 1e-15 {
        return Ok(cross_wigner_unchecked(f, g));
    }
    if tau.abs() < 1e-15 || (tau - 1.0).abs() < 1e-15 {
        // W₀(f,g) = f(x)·conj(ĝ(ξ))·e^{-2πiξx};  W₁(f,g) = f̂(ξ)·conj(g(x))·e^{2πiξx}
        // with ξ on the halved grid, evaluated by the exact quadrature sum.
        let mut values = Array2::from_elem((n, n), Complex64::ZERO);
        let hat_on_half = |h: &SampledState, k: usize| -> Complex64 {
            let xi = f.grid.wigner_freq_coord(k);
            let mut s = Complex64::ZERO;
            for j in 0..n {
                s += h.values[j]
                    * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * f.grid.coord(j) * xi);
            }
            s * delta
        };
        if tau.abs() < 1e-15 {
            let ghat: Vec<Complex64> = (0..n).map(|k| hat_on_half(g, k)).collect();
            for j in 0..n {
                for k in 0..n {
                    let ph = -2.0 * std::f64::consts::PI
                        * f.grid.wigner_freq_coord(k)
                        * f.grid.coord(j);
                    values[(j, k)] = f.values[j] * ghat[k].conj() * Complex64::from_polar(1.0, ph);
                }
            }
        } else {
            let fhat: Vec<Complex64> = (0..n).map(|k| hat_on_half(f, k)).collect();
            for j in 0..n {
                for k in 0..n {
                    let ph = 2.0 * std::f64::consts::PI
                        * f.grid.wigner_freq_coord(k)
                        * f.grid.coord(j);
                    values[(j, k)] = fhat[k] * g.values[j].conj() * Complex64::from_polar(1.0, ph);
                }
            }
        }
        return Ok(PhaseSpaceFunction { grid: f.grid, values });
    }

    // interior τ: quadrature over t_m = mδ, m in [-n, n), on the oversampled lattice
    let f2 = oversample2(f);
    let g2 = oversample2(g);
    let half_step = delta / 2.0;
    let sample = |data: &[Complex64], x: f64| -> Complex64 {
        // linear interpolation on the δ/2 lattice x_p = (p - n)·δ/2
        let p = x / half_step + n as f64;
        let p0 = p.floor();
        let w = p - p0;
        let i0 = p0 as i64;
        let at = |i: i64| -> Complex64 {
            if i < 0 || i >= 2 * n as i64 {
                Complex64::ZERO
            } else {
                data[i as usize]
            }
        };
        at(i0) * (1.0 - w) + at(i0 + 1) * w
    };
    let plans = grid::plan_fft(2 * n);
    let fft = plans.fwd;
    let mut values = Array2::from_elem((n, n), Complex64::ZERO);
    for j in 0..n {
        let xj = f.grid.coord(j);
        let mut lag = vec![Complex64::ZERO; 2 * n];
        for mp in 0..2 * n {
            let m = if mp < n { mp as i64 } else { mp as i64 - 2 * n as i64 };
            let t = m as f64 * delta;
            let v = sample(&f2, xj + tau * t) * sample(&g2, xj - (1.0 - tau) * t).conj();
            // e^{-2πi m (k - n/2) / (2n)} = i^m · e^{-2πi m k/(2n)}
            let tw = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2 * m as f64);
            lag[mp] = v * tw;
        }
        fft.process(&mut lag);
        for k in 0..n {
            values[(j, k)] = lag[k] * delta;
        }
    }
    Ok(PhaseSpaceFunction { grid: f.grid, values })
}

/// Â_{1/2} = ℱ₂ 𝔗_L applied to a function on the n×n tensor grid:
/// (Â F)(x,ξ) = ∫ F(x+t/2, x-t/2) e^{-2πiξt} dt with t on the 2δ lag lattice.
///
/// Implemented by the coordinate shear followed by a partial FFT, not by
/// calling `cross_wigner`; the two paths cross-validate each other.
pub fn a_half_apply(f_tensor: &Array2<Complex64>, g: GridSpec) -> Result<PhaseSpaceFunction> {
    let n = g.samples_per_axis();
    if g.dim() != 1 {
        return Err(Error::UnsupportedDim(g.dim()));
    }
    if f_tensor.nrows() != n || f_tensor.ncols() != n {
        return Err(Error::BadShape {
            rows: f_tensor.nrows(),
            cols: f_tensor.ncols(),
            what: format!("expected {n}x{n} tensor-grid samples"),
        });
    }
    let plans = grid::plan_fft(n);
    let fft = plans.fwd;
    let scale = Complex64::new(2.0 * g.delta(), 0.0);
    let mut values = Array2::from_elem((n, n), Complex64::ZERO);
    let mut lag = vec![Complex64::ZERO; n];
    for j in 0..n {
        lag_line(n, |m| {
            let jp = j as i64 + m;
            let jm = j as i64 - m;
            if jp < 0 || jp >= n as i64 || jm < 0 || jm >= n as i64 {
                Complex64::ZERO
            } else {
                f_tensor[(jp as usize, jm as usize)]
            }
        }, &mut lag);
        fft.process(&mut lag);
        for k in 0..n {
            values[(j, k)] = lag[k] * scale;
        }
    }
    Ok(PhaseSpaceFunction { grid: g, values })
}

/// Inverse of [`a_half_apply`]:
/// (Â⁻¹ F)(x,y) = ∫ F(x/2 + y/2, η) e^{2πi(x-y)η} dη.
///
/// Midpoint rows at half-integer indices are reconstructed by an exact FFT
/// half-cell shift; the η-sum evaluates half-integer lags by band-limited
/// (Dirichlet) interpolation, so the round trip is exact on half-band input.
pub fn a_half_inverse(w: &PhaseSpaceFunction) -> Result<Array2<Complex64>> {
    if w.grid.dim() != 1 {
        return Err(Error::UnsupportedDim(w.grid.dim()));
    }
    let n = w.grid.samples_per_axis();
    let delta = w.grid.delta();

    // midrows[2c] = row c of W; midrows[2c+1] = row interpolated at c + 1/2.
    let plans = grid::plan_fft(n);
    let mut midrows = vec![vec![Complex64::ZERO; n]; 2 * n];
    for c in 0..n {
        for k in 0..n {
            midrows[2 * c][k] = w.values[(c, k)];
        }
    }
    // FFT shift along the position axis, column by column.
    let mut col = vec![Complex64::ZERO; n];
    for k in 0..n {
        for c in 0..n {
            col[c] = w.values[(c, k)];
        }
        plans.fwd.process(&mut col);
        for (nu, v) in col.iter_mut().enumerate() {
            // signed frequency of bin nu; Nyquist bin split symmetrically
            let s = if nu <= n / 2 { nu as f64 } else { nu as f64 - n as f64 };
            let ph = std::f64::consts::PI * s / n as f64; // 2π·s·(1/2)/n
            let mut shift = Complex64::from_polar(1.0, ph);
            if nu == n / 2 {
                shift = Complex64::new(ph.cos(), 0.0);
            }
            *v *= shift / n as f64;
        }
        plans.inv.process(&mut col);
        for c in 0..n {
            midrows[2 * c + 1][k] = col[c];
        }
    }

    // phase table E[p][k] = e^{2πi p δ η_k} for p = a - b.
    let cell = w.grid.wigner_freq_spacing();
    let phase = |p: i64, k: usize| -> Complex64 {
        let eta = (k as f64 - n as f64 / 2.0) * cell;
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * p as f64 * delta * eta)
    };
    let measure = cell; // dη
    let mut out = Array2::from_elem((n, n), Complex64::ZERO);
    let rows: Vec<(usize, Vec<Complex64>)> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut row = vec![Complex64::ZERO; n];
            for b in 0..n {
                let mid = a + b; // index into midrows at (a+b)/2 in half steps
                let p = a as i64 - b as i64;
                let mr = &midrows[mid];
                let mut s = Complex64::ZERO;
                for k in 0..n {
                    s += mr[k] * phase(p, k);
                }
                row[b] = s * measure;
            }
            (a, row)
        })
        .collect();
    for (a, row) in rows {
        for (b, v) in row.into_iter().enumerate() {
            out[(a, b)] = v;
        }
    }
    Ok(out)
}

/// |⟨W(f,g), W(φ,γ)⟩ - ⟨f,φ⟩·conj(⟨g,γ⟩)|  (Moyal identity residual).
pub fn moyal_check(
    f: &SampledState,
    g: &SampledState,
    phi: &SampledState,
    gamma: &SampledState,
) -> Result<f64> {
    let wfg = cross_wigner(f, g)?;
    let wpg = cross_wigner(phi, gamma)?;
    let lhs = ps_inner(&wfg, &wpg)?;
    let rhs = grid::inner(f, phi)? * grid::inner(g, gamma)?.conj();
    Ok((lhs - rhs).norm())
}
