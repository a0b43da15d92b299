//! Kohn-Nirenberg and Weyl pseudodifferential operators from symbols, and
//! materialization of discrete Schwartz kernels.
//!
//! Symbols are trusted callables or bilinearly interpolated samples; the
//! S⁰₀,₀ admissibility flag is metadata only and never validated.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::{self, GridSpec, SampledState};

type SymbolFn = dyn Fn(&[f64], &[f64]) -> Complex64 + Send + Sync;

enum SymbolEval {
    Callable(Arc<SymbolFn>),
    /// Samples on the position × full-frequency lattice, bilinearly interpolated,
    /// clamped at the boundary (d = 1 only).
    Sampled { grid: GridSpec, values: Array2<Complex64> },
}

/// Evaluation rule σ(x,ξ) plus the caller's (uninterpreted) S⁰₀,₀ claim.
pub struct Symbol {
    eval: SymbolEval,
    pub s000_claim: bool,
}

impl std::fmt::Debug for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.eval {
            SymbolEval::Callable(_) => "callable",
            SymbolEval::Sampled { .. } => "sampled",
        };
        write!(f, "Symbol({kind}, s000_claim={})", self.s000_claim)
    }
}

impl Symbol {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> Complex64 + Send + Sync + 'static,
    {
        Self { eval: SymbolEval::Callable(Arc::new(f)), s000_claim: true }
    }

    /// σ ≡ 1.
    pub fn one() -> Self {
        Self::from_fn(|_, _| Complex64::new(1.0, 0.0))
    }

    pub fn from_samples(grid: GridSpec, values: Array2<Complex64>) -> Result<Self> {
        if grid.dim() != 1 {
            return Err(Error::UnsupportedDim(grid.dim()));
        }
        let n = grid.samples_per_axis();
        if values.nrows() != n || values.ncols() != n {
            return Err(Error::BadShape {
                rows: values.nrows(),
                cols: values.ncols(),
                what: format!("sampled symbol must be {n}x{n}"),
            });
        }
        Ok(Self { eval: SymbolEval::Sampled { grid, values }, s000_claim: true })
    }

    pub fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        match &self.eval {
            SymbolEval::Callable(f) => f(x, xi),
            SymbolEval::Sampled { grid, values } => {
                let n = grid.samples_per_axis();
                let fx = (x[0] / grid.delta() + n as f64 / 2.0).clamp(0.0, (n - 1) as f64);
                let fk = (xi[0] / grid.freq_spacing() + n as f64 / 2.0).clamp(0.0, (n - 1) as f64);
                let (i0, k0) = (fx.floor() as usize, fk.floor() as usize);
                let (i1, k1) = ((i0 + 1).min(n - 1), (k0 + 1).min(n - 1));
                let (wx, wk) = (fx - i0 as f64, fk - k0 as f64);
                values[(i0, k0)] * ((1.0 - wx) * (1.0 - wk))
                    + values[(i1, k0)] * (wx * (1.0 - wk))
                    + values[(i0, k1)] * ((1.0 - wx) * wk)
                    + values[(i1, k1)] * (wx * wk)
            }
        }
    }

    /// Built-in registry used by scenario files.
    ///
    /// Names: "one", "potential:cos", "potential:lorentzian", "multiplier:gauss".
    pub fn from_registry(name: &str) -> Result<Self> {
        match name {
            "one" => Ok(Self::one()),
            "potential:cos" => Ok(Self::from_fn(|x, _| {
                Complex64::new(x.iter().map(|&xi| (2.0 * PI * xi).cos()).sum::<f64>(), 0.0)
            })),
            "potential:lorentzian" => Ok(Self::from_fn(|x, _| {
                let r2: f64 = x.iter().map(|&xi| xi * xi).sum();
                Complex64::new(1.0 / (1.0 + r2), 0.0)
            })),
            "multiplier:gauss" => Ok(Self::from_fn(|_, xi| {
                let r2: f64 = xi.iter().map(|&v| v * v).sum();
                Complex64::new((-PI * r2).exp(), 0.0)
            })),
            other => Err(Error::SymbolEval(format!("unknown registry symbol '{other}'"))),
        }
    }

    /// Whether the symbol depends only on x (safe for exact splitting substeps).
    pub fn is_potential(&self, grid: GridSpec) -> bool {
        let d = grid.dim();
        let zero = vec![0.0; d];
        let probe = vec![0.37 / grid.delta() * grid.delta(); d];
        let hi = vec![0.25 / grid.delta(); d];
        for idx in (0..grid.len()).step_by((grid.len() / 16).max(1)) {
            let pos = grid.position(idx);
            let x = &pos[..d];
            let a = self.eval(x, &zero);
            let b = self.eval(x, &probe);
            let c = self.eval(x, &hi);
            if (a - b).norm() > 1e-12 || (a - c).norm() > 1e-12 {
                return false;
            }
        }
        true
    }
}

/// Dense discrete Schwartz kernel scaled by delta^d, so that matrix-vector
/// product equals discrete operator application.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub grid: GridSpec,
    pub entries: Array2<Complex64>,
}

impl OperatorMatrix {
    pub fn new(grid: GridSpec, entries: Array2<Complex64>) -> Result<Self> {
        let m = grid.len();
        if entries.nrows() != m || entries.ncols() != m {
            return Err(Error::BadShape {
                rows: entries.nrows(),
                cols: entries.ncols(),
                what: format!("operator matrix must be {m}x{m}"),
            });
        }
        Ok(Self { grid, entries })
    }

    pub fn identity(grid: GridSpec) -> Self {
        Self { grid, entries: Array2::eye(grid.len()) }
    }

    pub fn apply(&self, f: &SampledState) -> Result<SampledState> {
        if f.grid != self.grid {
            return Err(Error::GridMismatch);
        }
        let v = ndarray::Array1::from_vec(f.values.clone());
        let out = self.entries.dot(&v);
        SampledState::new(self.grid, out.to_vec())
    }

    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(OperatorMatrix { grid: self.grid, entries: self.entries.dot(&other.entries) })
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix { grid: self.grid, entries: self.entries.t().mapv(|v| v.conj()) }
    }

    /// L² norm of the underlying Schwartz kernel; with the delta^d scaling
    /// this is exactly the Frobenius norm of the entries.
    pub fn kernel_l2_norm(&self) -> f64 {
        self.entries.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Kohn-Nirenberg application: (σ(x,D)f)(x) = Σ_ξ e^{2πixξ} σ(x,ξ) f̂(ξ) dξ,
/// evaluated directly in O(N²).
pub fn kn_apply(sigma: &Symbol, f: &SampledState) -> Result<SampledState> {
    let g = f.grid;
    let hat = grid::fourier(f);
    let freq = hat.grid;
    let mut out = SampledState::zeros(g);
    let d = g.dim();
    let measure = freq.delta().powi(d as i32);
    for j in 0..g.len() {
        let pos = g.position(j);
        let x = &pos[..d];
        let mut s = Complex64::ZERO;
        for k in 0..freq.len() {
            let fq = freq.position(k);
            let xi = &fq[..d];
            let dot: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
            let sv = sigma.eval(x, xi);
            if !sv.re.is_finite() || !sv.im.is_finite() {
                return Err(Error::SymbolEval(format!("non-finite symbol value at x={x:?}, xi={xi:?}")));
            }
            s += Complex64::from_polar(1.0, 2.0 * PI * dot) * sv * hat.values[k];
        }
        out.values[j] = s * measure;
    }
    Ok(out)
}

/// Materialize the Kohn-Nirenberg kernel h(x,y) = ℱ₂σ(x, y-x) by per-row FFT.
pub fn kn_kernel(sigma: &Symbol, g: GridSpec) -> Result<OperatorMatrix> {
    if g.dim() != 1 {
        return Err(Error::UnsupportedDim(g.dim()));
    }
    let n = g.samples_per_axis();
    let plans = grid::plan_fft(n);
    let mut entries = Array2::from_elem((n, n), Complex64::ZERO);
    let mut row = vec![Complex64::ZERO; n];
    for j in 0..n {
        let x = [g.coord(j)];
        for (k, r) in row.iter_mut().enumerate() {
            let xi = [g.freq_coord(k)];
            let sv = sigma.eval(&x, &xi);
            if !sv.re.is_finite() || !sv.im.is_finite() {
                return Err(Error::SymbolEval(format!("non-finite symbol value at x={x:?}, xi={xi:?}")));
            }
            *r = sv;
        }
        plans.fwd.process(&mut row);
        // entries[j][l] = (1/n)·(-1)^{l-j}·DFT(σ(x_j,·))[(l-j) mod n]
        for l in 0..n {
            let diff = (l + n - j) % n;
            let sign = if (l + j) % 2 == 0 { 1.0 } else { -1.0 }; // (-1)^{l-j}
            entries[(j, l)] = row[diff] * (sign / n as f64);
        }
        // restore row buffer for next iteration (row was consumed by FFT)
    }
    OperatorMatrix::new(g, entries)
}

/// Weyl application through the midpoint kernel
/// k(x,y) = ∫ σ((x+y)/2, ξ) e^{2πi(x-y)ξ} dξ by quadrature on the full grid.
pub fn weyl_apply(sigma: &Symbol, f: &SampledState) -> Result<SampledState> {
    let k = weyl_kernel(sigma, f.grid)?;
    k.apply(f)
}

/// Materialized Weyl kernel (d = 1).
pub fn weyl_kernel(sigma: &Symbol, g: GridSpec) -> Result<OperatorMatrix> {
    if g.dim() != 1 {
        return Err(Error::UnsupportedDim(g.dim()));
    }
    let n = g.samples_per_axis();
    let mut entries = Array2::from_elem((n, n), Complex64::ZERO);
    for j in 0..n {
        for l in 0..n {
            let mid = [0.5 * (g.coord(j) + g.coord(l))];
            let dx = g.coord(j) - g.coord(l);
            let mut s = Complex64::ZERO;
            for k in 0..n {
                let xi = g.freq_coord(k);
                let sv = sigma.eval(&mid, &[xi]);
                if !sv.re.is_finite() || !sv.im.is_finite() {
                    return Err(Error::SymbolEval("non-finite symbol value".into()));
                }
                s += sv * Complex64::from_polar(1.0, 2.0 * PI * dx * xi);
            }
            entries[(j, l)] = s / n as f64; // δ · freq-measure = δ/(nδ)
        }
    }
    OperatorMatrix::new(g, entries)
}

/// Materialize an abstract linear operator by applying it to basis spikes.
pub fn materialize<F>(op: F, g: GridSpec) -> Result<OperatorMatrix>
where
    F: Fn(&SampledState) -> Result<SampledState> + Sync,
{
    let m = g.len();
    let cols: Vec<Vec<Complex64>> = {
        use rayon::prelude::*;
        (0..m)
            .into_par_iter()
            .map(|l| {
                let mut spike = SampledState::zeros(g);
                spike.values[l] = Complex64::new(1.0, 0.0);
                op(&spike).map(|s| s.values)
            })
            .collect::<Result<Vec<_>>>()?
    };
    let mut entries = Array2::from_elem((m, m), Complex64::ZERO);
    for (l, col) in cols.into_iter().enumerate() {
        for (j, v) in col.into_iter().enumerate() {
            entries[(j, l)] = v;
        }
    }
    OperatorMatrix::new(g, entries)
}

/// Smooth half-band multiplier used to keep materialized operators inside the
/// Wigner-representable band: per axis, 1 on |ξ| ≤ 0.65·ξq and a cos² rolloff
/// reaching zero at the half-band edge ξq = 1/(4δ).
pub fn halfband_taper(g: GridSpec) -> Symbol {
    let q = 0.25 / g.delta();
    Symbol::from_fn(move |_, xi| {
        let mut w = 1.0;
        for &v in xi {
            let a = v.abs();
            let inner = 0.65 * q;
            w *= if a <= inner {
                1.0
            } else if a >= q {
                0.0
            } else {
                let s = (a - inner) / (q - inner);
                (0.5 * PI * s).cos().powi(2)
            };
        }
        Complex64::new(w, 0.0)
    })
}

/// Materialized half-band projector (Fourier multiplier of [`halfband_taper`]).
pub fn halfband_projector(g: GridSpec) -> Result<OperatorMatrix> {
    if g.dim() != 1 {
        return Err(Error::UnsupportedDim(g.dim()));
    }
    kn_kernel(&halfband_taper(g), g)
}

/// Sandwich K -> P·K·P with the half-band projector; operators entering the
/// Wigner-kernel pipeline must not carry upper-band content, otherwise the
/// integer-lag Wigner aliases it onto displaced graph images.
pub fn halfband_sandwich(k: &OperatorMatrix) -> Result<OperatorMatrix> {
    let p = halfband_projector(k.grid)?;
    p.compose(k)?.compose(&p)
}

/// Random dense operator supported on the half-band sector (P·R·P with iid
/// Gaussian-ish R), normalized to unit kernel L² norm.
pub fn random_bandlimited_operator<R: Rng>(g: GridSpec, rng: &mut R) -> Result<OperatorMatrix> {
    let m = g.len();
    let mut raw = Array2::from_elem((m, m), Complex64::ZERO);
    for v in raw.iter_mut() {
        *v = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
    }
    let k = halfband_sandwich(&OperatorMatrix::new(g, raw)?)?;
    let nrm = k.kernel_l2_norm();
    Ok(OperatorMatrix { grid: k.grid, entries: k.entries.mapv(|v| v / nrm) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{fourier, inner, inverse_fourier, make_gaussian, random_bandlimited_state};
    use crate::wigner::{cross_wigner, ps_inner};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid256() -> GridSpec {
        GridSpec::new(1, 256, 1.0 / 16.0).unwrap()
    }

    fn max_dev(a: &SampledState, b: &SampledState) -> f64 {
        a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn kn_identity_and_potential() {
        let g = grid256();
        let f = make_gaussian(g, &[0.3], &[0.5], 1.0).unwrap();
        let out = kn_apply(&Symbol::one(), &f).unwrap();
        assert!(max_dev(&out, &f) < 1e-10);

        let v = Symbol::from_registry("potential:cos").unwrap();
        let out = kn_apply(&v, &f).unwrap();
        let mut expected = f.clone();
        for (i, val) in expected.values.iter_mut().enumerate() {
            *val *= (2.0 * PI * g.position(i)[0]).cos();
        }
        assert!(max_dev(&out, &expected) < 1e-10);
    }

    #[test]
    fn kn_fourier_multiplier_matches_multiplier_path() {
        let g = grid256();
        let f = make_gaussian(g, &[0.2], &[-0.4], 1.0).unwrap();
        let sigma = Symbol::from_registry("multiplier:gauss").unwrap();
        let out = kn_apply(&sigma, &f).unwrap();
        let mut hat = fourier(&f);
        for (k, v) in hat.values.iter_mut().enumerate() {
            *v *= (-PI * g.freq_coord(k).powi(2)).exp();
        }
        let expected = inverse_fourier(&hat);
        assert!(max_dev(&out, &expected) < 1e-10);
    }

    #[test]
    fn kn_kernel_matches_kn_apply() {
        let g = GridSpec::new(1, 64, 0.125).unwrap();
        let sigma = Symbol::from_fn(|x, xi| {
            Complex64::new((-0.5 * (x[0] * x[0] + xi[0] * xi[0])).exp(), 0.3 * (x[0] * xi[0]).sin())
        });
        let k = kn_kernel(&sigma, g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let f = random_bandlimited_state(g, &mut rng);
            let a = k.apply(&f).unwrap();
            let b = kn_apply(&sigma, &f).unwrap();
            assert!(max_dev(&a, &b) < 1e-10);
        }
    }

    #[test]
    fn kn_kernel_special_symbols() {
        let g = GridSpec::new(1, 32, 0.25).unwrap();
        let k = kn_kernel(&Symbol::one(), g).unwrap();
        let eye = Array2::<Complex64>::eye(32);
        let err = (&k.entries - &eye).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);

        let v = Symbol::from_registry("potential:cos").unwrap();
        let k = kn_kernel(&v, g).unwrap();
        for j in 0..32 {
            for l in 0..32 {
                let expected = if j == l {
                    Complex64::new((2.0 * PI * g.coord(j)).cos(), 0.0)
                } else {
                    Complex64::ZERO
                };
                assert!((k.entries[(j, l)] - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn kn_apply_is_linear() {
        let g = GridSpec::new(1, 64, 0.125).unwrap();
        let sigma = Symbol::from_fn(|x, xi| Complex64::new((x[0] * xi[0]).cos(), 0.1 * x[0]));
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let f = random_bandlimited_state(g, &mut rng);
        let h = random_bandlimited_state(g, &mut rng);
        let (a, b) = (Complex64::new(0.7, -0.2), Complex64::new(-1.1, 0.4));
        let mut combo = SampledState::zeros(g);
        for i in 0..g.len() {
            combo.values[i] = a * f.values[i] + b * h.values[i];
        }
        let lhs = kn_apply(&sigma, &combo).unwrap();
        let rf = kn_apply(&sigma, &f).unwrap();
        let rh = kn_apply(&sigma, &h).unwrap();
        let mut rhs = SampledState::zeros(g);
        for i in 0..g.len() {
            rhs.values[i] = a * rf.values[i] + b * rh.values[i];
        }
        assert!(max_dev(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn weyl_identity_potential_and_self_adjointness() {
        let g = GridSpec::new(1, 64, 0.125).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let f = random_bandlimited_state(g, &mut rng);
        let out = weyl_apply(&Symbol::one(), &f).unwrap();
        assert!(max_dev(&out, &f) < 1e-10);

        let v = Symbol::from_registry("potential:cos").unwrap();
        let out = weyl_apply(&v, &f).unwrap();
        let mut expected = f.clone();
        for (i, val) in expected.values.iter_mut().enumerate() {
            *val *= (2.0 * PI * g.position(i)[0]).cos();
        }
        assert!(max_dev(&out, &expected) < 1e-10);

        // real symbol → self-adjoint kernel
        let sigma = Symbol::from_fn(|x, xi| Complex64::new((x[0] - xi[0]).cos(), 0.0));
        let k = weyl_kernel(&sigma, g).unwrap();
        let res = (&k.entries - &k.adjoint().entries)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(res < 1e-8);
    }

    #[test]
    fn weyl_duality_with_wigner() {
        // ⟨Op(σ)f, g⟩ = ⟨σ, W(g,f)⟩ for a Gaussian-envelope symbol.
        let g = grid256();
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let sigma = Symbol::from_fn(|x, xi| {
            Complex64::new(
                (-PI * ((x[0] - 0.4).powi(2) / 4.0 + (xi[0] + 0.3).powi(2) / 4.0)).exp(),
                0.0,
            ) * Complex64::from_polar(1.0, 0.7 * x[0] - 0.2 * xi[0])
        });
        for _ in 0..3 {
            let f = make_gaussian(
                g,
                &[rng.gen_range(-0.8..0.8)],
                &[rng.gen_range(-0.8..0.8)],
                rng.gen_range(0.9..1.3),
            )
            .unwrap();
            let h = make_gaussian(
                g,
                &[rng.gen_range(-0.8..0.8)],
                &[rng.gen_range(-0.8..0.8)],
                rng.gen_range(0.9..1.3),
            )
            .unwrap();
            let lhs = inner(&weyl_apply(&sigma, &f).unwrap(), &h).unwrap();
            // ⟨σ, W(g,f)⟩ with σ sampled on the phase-space lattice
            let w = cross_wigner(&h, &f).unwrap();
            let mut sig = w.clone();
            for j in 0..256 {
                for k in 0..256 {
                    sig.values[(j, k)] =
                        sigma.eval(&[g.coord(j)], &[g.wigner_freq_coord(k)]);
                }
            }
            let rhs = ps_inner(&sig, &w).unwrap();
            assert!((lhs - rhs).norm() < 1e-8, "residual {}", (lhs - rhs).norm());
        }
    }

    #[test]
    fn materialize_consistency() {
        let g = GridSpec::new(1, 32, 0.25).unwrap();
        let id = materialize(|f| Ok(f.clone()), g).unwrap();
        let eye = Array2::<Complex64>::eye(32);
        assert!((&id.entries - &eye).iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-14);

        let sigma = Symbol::from_fn(|x, xi| Complex64::new((x[0] * 0.3).cos(), (0.2 * xi[0]).sin()));
        let direct = kn_kernel(&sigma, g).unwrap();
        let mat = materialize(|f| kn_apply(&sigma, f), g).unwrap();
        let err = (&direct.entries - &mat.entries)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn materialized_fourier_is_unitary_on_self_dual_grid() {
        // self-dual: delta = 1/sqrt(n)
        let g = GridSpec::new(1, 64, 0.125).unwrap();
        let u = materialize(|f| Ok(fourier(f)), g).unwrap();
        let prod = u.adjoint().entries.dot(&u.entries);
        let eye = Array2::<Complex64>::eye(64);
        let err = (&prod - &eye).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn halfband_projector_behaviour() {
        let g = grid256();
        let p = halfband_projector(g).unwrap();
        // fixes comfortably band-limited states up to the taper tail
        let f = make_gaussian(g, &[0.3], &[0.4], 1.0).unwrap();
        let pf = p.apply(&f).unwrap();
        assert!(max_dev(&pf, &f) < 1e-6);
        // annihilates Nyquist-modulated states
        let mut m = f.clone();
        for (i, v) in m.values.iter_mut().enumerate() {
            if i % 2 == 1 {
                *v = -*v;
            }
        }
        let pm = p.apply(&m).unwrap();
        assert!(pm.norm_l2() < 1e-10);
        // idempotent on the plateau: P(Pf) = Pf for plateau-supported states
        let f0 = make_gaussian(g, &[0.2], &[0.0], 1.2).unwrap();
        let pf0 = p.apply(&f0).unwrap();
        let ppf0 = p.apply(&pf0).unwrap();
        assert!(max_dev(&ppf0, &pf0) < 1e-10);
    }

    #[test]
    fn sampled_symbol_round_trip() {
        let g = GridSpec::new(1, 32, 0.25).unwrap();
        let mut vals = Array2::from_elem((32, 32), Complex64::ZERO);
        for j in 0..32 {
            for k in 0..32 {
                vals[(j, k)] = Complex64::new(g.coord(j), g.freq_coord(k));
            }
        }
        let s = Symbol::from_samples(g, vals).unwrap();
        // on-lattice evaluation is exact; off-lattice is bilinear
        let v = s.eval(&[g.coord(5)], &[g.freq_coord(7)]);
        assert!((v - Complex64::new(g.coord(5), g.freq_coord(7))).norm() < 1e-14);
        let mid = s.eval(&[0.5 * (g.coord(5) + g.coord(6))], &[g.freq_coord(7)]);
        assert!((mid.re - 0.5 * (g.coord(5) + g.coord(6))).abs() < 1e-12);
    }
}
