//! Schrödinger evolution for quadratic Hamiltonians with bounded
//! perturbations: exact metaplectic stepping, Strang splitting for the
//! perturbation, Wigner transport along the classical flow, and caustic-time
//! detection.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fio::{metaplectic_apply, metaplectic_apply_routed, phase_from_symplectic};
use crate::grid::{self, SampledState};
use crate::quantize::{kn_apply, Symbol};
use crate::symplectic::{
    exp_flow, free_particle_flow, harmonic_flow, magnetic_flow, HamiltonianGenerator,
    SymplecticMatrix,
};
use crate::wigner::{cross_wigner, partial_wigner, PhaseSpaceFunction};

const MAX_SPLIT_STEPS: usize = 2_000_000;

/// Classical flow preset generating S_t.
#[derive(Debug, Clone)]
pub enum FlowPreset {
    Harmonic,
    FreeParticle,
    /// Uniform magnetic potential with B = [[0,-1],[1,0]]; requires d = 2.
    Magnetic { mass: f64, omega: f64 },
    Custom { generator: HamiltonianGenerator },
}

impl FlowPreset {
    pub fn dim_constraint(&self) -> Option<usize> {
        match self {
            FlowPreset::Magnetic { .. } => Some(2),
            FlowPreset::Custom { generator } => Some(generator.dim()),
            _ => None,
        }
    }

    pub fn flow_at(&self, d: usize, t: f64) -> Result<SymplecticMatrix> {
        match self {
            FlowPreset::Harmonic => Ok(harmonic_flow(d, t)),
            FlowPreset::FreeParticle => Ok(free_particle_flow(d, t)),
            FlowPreset::Magnetic { mass, omega } => {
                if d != 2 {
                    return Err(Error::UnsupportedDim(d));
                }
                magnetic_flow(t, *mass, *omega, &magnetic_b())
            }
            FlowPreset::Custom { generator } => {
                if generator.dim() != d {
                    return Err(Error::UnsupportedDim(d));
                }
                exp_flow(generator, t)
            }
        }
    }

    /// det A(t) of the flow, the caustic indicator.
    pub fn det_a(&self, d: usize, t: f64) -> Result<f64> {
        Ok(self.flow_at(d, t)?.det_a())
    }
}

pub fn magnetic_b() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])
}

/// Cauchy problem data: flow preset, optional bounded perturbation, initial
/// state, output times, splitting step.
#[derive(Debug)]
pub struct CauchyProblem {
    pub flow: FlowPreset,
    pub perturbation: Option<Symbol>,
    pub u0: SampledState,
    pub times: Vec<f64>,
    pub dt: Option<f64>,
}

impl CauchyProblem {
    pub fn validate(&self) -> Result<()> {
        if let Some(dc) = self.flow.dim_constraint() {
            if dc != self.u0.grid.dim() {
                return Err(Error::UnsupportedDim(self.u0.grid.dim()));
            }
        }
        if self.times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument("non-finite output time".into()));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(Error::InvalidArgument(format!("dt = {dt} must be > 0")));
            }
        }
        Ok(())
    }

    /// Splitting step: explicit dt, or min consecutive time difference / 64.
    pub fn splitting_dt(&self) -> f64 {
        if let Some(dt) = self.dt {
            return dt;
        }
        let mut ts: Vec<f64> = self.times.iter().cloned().filter(|t| t.is_finite()).collect();
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut min_gap = f64::INFINITY;
        for w in ts.windows(2) {
            let gap = w[1] - w[0];
            if gap > 1e-14 {
                min_gap = min_gap.min(gap);
            }
        }
        if let Some(first) = ts.iter().find(|t| t.abs() > 1e-14) {
            min_gap = min_gap.min(first.abs());
        }
        if min_gap.is_finite() {
            min_gap / 64.0
        } else {
            1.0 / 64.0
        }
    }
}

/// u(t) = Ŝ_t u₀ for the unperturbed quadratic problem; defined for all t
/// through the caustic factorization inside `metaplectic_apply`.
pub fn evolve_quadratic(p: &CauchyProblem, t: f64) -> Result<SampledState> {
    p.validate()?;
    let d = p.u0.grid.dim();
    let s = p.flow.flow_at(d, t)?;
    metaplectic_apply(&s, &p.u0)
}

/// Strang splitting for the perturbed problem: half perturbation step, exact
/// metaplectic quadratic step, half perturbation step.
///
/// ξ-independent perturbations (potentials) get exact unitary substeps; a
/// general symbol falls back to the first-order substep u + i·dt·σ(x,D)u
/// with O(dt) accuracy.
pub fn evolve_perturbed(p: &CauchyProblem, t: f64) -> Result<SampledState> {
    p.validate()?;
    let sigma = match &p.perturbation {
        Some(s) => s,
        None => return evolve_quadratic(p, t),
    };
    let g = p.u0.grid;
    let d = g.dim();
    if t == 0.0 {
        return Ok(p.u0.clone());
    }
    // σ ≡ 0 degenerates to the pure quadratic propagator
    let is_potential = sigma.is_potential(g);
    let mut vmax = 0.0f64;
    let zero = vec![0.0; d];
    for idx in 0..g.len() {
        let pos = g.position(idx);
        vmax = vmax.max(sigma.eval(&pos[..d], &zero).norm());
    }
    if vmax == 0.0 {
        return evolve_quadratic(p, t);
    }

    let dt = p.splitting_dt().min(t.abs());
    let steps = (t.abs() / dt).round().max(1.0) as usize;
    if steps > MAX_SPLIT_STEPS {
        return Err(Error::StepOverflow { steps });
    }
    let h = t / steps as f64;
    let s_step = p.flow.flow_at(d, h)?;

    // half-step multiplier for potentials: e^{i (h/2) V(x)}
    let half_mult: Option<Vec<Complex64>> = if is_potential {
        let mut m = Vec::with_capacity(g.len());
        for idx in 0..g.len() {
            let pos = g.position(idx);
            let v = sigma.eval(&pos[..d], &zero);
            // exp(i·(h/2)·v) for complex v
            let e = (Complex64::i() * Complex64::new(0.5 * h, 0.0) * v).exp();
            m.push(e);
        }
        Some(m)
    } else {
        None
    };

    let half_step = |u: &mut SampledState| -> Result<()> {
        match &half_mult {
            Some(m) => {
                for (v, f) in u.values.iter_mut().zip(m) {
                    *v *= f;
                }
                Ok(())
            }
            None => {
                // first-order exponential substep, documented O(dt)
                let ku = kn_apply(sigma, u)?;
                for (v, w) in u.values.iter_mut().zip(&ku.values) {
                    *v += Complex64::i() * Complex64::new(0.5 * h, 0.0) * w;
                }
                Ok(())
            }
        }
    };

    let mut u = p.u0.clone();
    for _ in 0..steps {
        half_step(&mut u)?;
        u = metaplectic_apply(&s_step, &u)?;
        half_step(&mut u)?;
    }
    Ok(u)
}

/// Transported phase-space function with mass-loss diagnostics.
#[derive(Debug, Clone)]
pub struct Transported {
    pub w: PhaseSpaceFunction,
    pub mass_loss: f64,
    pub flagged: bool,
}

/// W(t,z) = W₀(S⁻¹z) by multilinear interpolation, zero outside the grid.
pub fn transport_wigner(w0: &PhaseSpaceFunction, s: &SymplecticMatrix) -> Result<Transported> {
    let d = w0.grid.dim();
    if s.dim() != d {
        return Err(Error::GridMismatch);
    }
    let n = w0.grid.samples_per_axis();
    let delta = w0.grid.delta();
    let deta = w0.grid.wigner_freq_spacing();
    let sinv = s.inverse();
    let npos = w0.grid.len();
    let mut values = ndarray::Array2::from_elem((npos, npos), Complex64::ZERO);

    // per-axis spacing: first d axes position, last d axes frequency
    let spacing: Vec<f64> = (0..2 * d).map(|a| if a < d { delta } else { deta }).collect();
    let mut zvec = vec![0.0; 2 * d];
    for r in 0..npos {
        let pidx = w0.grid.unflatten(r);
        for c in 0..npos {
            let fidx = w0.grid.unflatten(c);
            for a in 0..d {
                zvec[a] = w0.grid.coord(pidx[a]);
                zvec[d + a] = w0.grid.wigner_freq_coord(fidx[a]);
            }
            let src = sinv.apply(&zvec);
            // fractional indices per axis
            let mut frac = vec![0.0; 2 * d];
            let mut inside = true;
            for a in 0..2 * d {
                let f = src[a] / spacing[a] + n as f64 / 2.0;
                if f < 0.0 || f > (n - 1) as f64 {
                    inside = false;
                    break;
                }
                frac[a] = f;
            }
            if !inside {
                continue;
            }
            // multilinear over 2^(2d) corners
            let mut acc = Complex64::ZERO;
            let corners = 1usize << (2 * d);
            for mask in 0..corners {
                let mut wgt = 1.0;
                let mut idx = vec![0usize; 2 * d];
                for a in 0..2 * d {
                    let base = frac[a].floor();
                    let t = frac[a] - base;
                    if mask & (1 << a) == 0 {
                        wgt *= 1.0 - t;
                        idx[a] = base as usize;
                    } else {
                        wgt *= t;
                        idx[a] = (base as usize + 1).min(n - 1);
                    }
                }
                if wgt == 0.0 {
                    continue;
                }
                let (pr, pc) = match d {
                    1 => (idx[0], idx[1]),
                    _ => (idx[0] * n + idx[1], idx[2] * n + idx[3]),
                };
                acc += w0.values[(pr, pc)] * wgt;
            }
            values[(r, c)] = acc;
        }
    }
    let out = PhaseSpaceFunction { grid: w0.grid, values };
    let m0 = w0.integral();
    let m1 = out.integral();
    let mass_loss = if m0.norm() > 0.0 { (m0 - m1).norm() / m0.norm() } else { 0.0 };
    Ok(Transported { w: out, mass_loss, flagged: mass_loss > 1e-3 })
}

/// Roots of det A(t) in [t0, t1]: sign changes by bisection, even-order
/// touching zeros by minimum refinement of |det A| (the magnetic flow has
/// det A(t) = cos²(ωt), which never changes sign).
pub fn caustic_times<F: Fn(f64) -> f64>(det_a: F, t0: f64, t1: f64) -> Vec<f64> {
    let scan = 1e-3;
    let steps = ((t1 - t0) / scan).ceil().max(1.0) as usize;
    let ts: Vec<f64> = (0..=steps).map(|i| t0 + (t1 - t0) * i as f64 / steps as f64).collect();
    let vs: Vec<f64> = ts.iter().map(|&t| det_a(t)).collect();
    let mut roots: Vec<f64> = Vec::new();

    // odd-order roots: bisection on sign changes
    for i in 0..steps {
        if vs[i] == 0.0 {
            roots.push(ts[i]);
            continue;
        }
        if vs[i] * vs[i + 1] < 0.0 {
            let (mut lo, mut hi) = (ts[i], ts[i + 1]);
            let mut flo = vs[i];
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = det_a(mid);
                if flo * fm <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
                if hi - lo < 1e-13 {
                    break;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }

    // even-order roots: golden-section refinement of interior |det| dips
    let gold = 0.5 * (3.0 - 5.0f64.sqrt());
    for i in 1..steps {
        let a = vs[i - 1].abs();
        let b = vs[i].abs();
        let c = vs[i + 1].abs();
        let sign_change = vs[i - 1] * vs[i] < 0.0 || vs[i] * vs[i + 1] < 0.0;
        if sign_change || b > 1e-3 || b > a || b > c {
            continue;
        }
        let (mut lo, mut hi) = (ts[i - 1], ts[i + 1]);
        for _ in 0..200 {
            let m1 = lo + gold * (hi - lo);
            let m2 = hi - gold * (hi - lo);
            if det_a(m1).abs() < det_a(m2).abs() {
                hi = m2;
            } else {
                lo = m1;
            }
            if hi - lo < 1e-12 {
                break;
            }
        }
        let t_star = 0.5 * (lo + hi);
        if det_a(t_star).abs() < 1e-9 {
            roots.push(t_star);
        }
    }

    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
    roots
}

/// Per-time metrics of a propagation run.
#[derive(Debug, Clone)]
pub struct TimeMetrics {
    pub t: f64,
    pub norm: f64,
    pub det_a: f64,
    /// The type-I phase extraction failed here (caustic time).
    pub type1_failed: bool,
    /// Relative L² gap between W(u(t)) and the transported W(u₀); for d = 2
    /// the two coordinate-plane partial-Wigner gaps.
    pub wigner_gaps: Vec<f64>,
    pub transport_mass_loss: Option<f64>,
    /// Whether the caustic fallback route was taken by the propagator.
    pub caustic_route: bool,
}

#[derive(Debug)]
pub struct PropagationResult {
    pub metrics: Vec<TimeMetrics>,
    pub states: Vec<SampledState>,
    pub norm_warning: bool,
}

impl PropagationResult {
    /// max/median ratio of the leading Wigner gap across times (caustic
    /// robustness: no spike at caustics).
    pub fn gap_spike_ratio(&self) -> Option<f64> {
        let mut gaps: Vec<f64> = self
            .metrics
            .iter()
            .filter_map(|m| m.wigner_gaps.first().cloned())
            .collect();
        if gaps.is_empty() {
            return None;
        }
        gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let max = *gaps.last().unwrap();
        let median = gaps[gaps.len() / 2];
        if median == 0.0 {
            None
        } else {
            Some(max / median)
        }
    }
}

fn rel_l2_gap(a: &PhaseSpaceFunction, b: &PhaseSpaceFunction) -> f64 {
    let num: f64 = a
        .values
        .iter()
        .zip(b.values.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let den: f64 = b.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Run the quadratic (or perturbed) problem over all output times and compare
/// Wigner-kernel transport against direct state-space propagation.
///
/// For quadratic problems the gap between cross_wigner(u(t)) and the
/// transported W(u₀) stays small at all times, including caustic times where
/// the type-I representation fails; `type1_failed` records exactly those.
pub fn run_and_compare(p: &CauchyProblem) -> Result<PropagationResult> {
    p.validate()?;
    let d = p.u0.grid.dim();
    let norm0 = p.u0.norm_l2();
    let w0 = cross_wigner(&p.u0, &p.u0)?;
    let perturbed = p.perturbation.is_some();

    let mut metrics = Vec::new();
    let mut states = Vec::new();
    let mut norm_warning = false;
    for &t in &p.times {
        let s_t = p.flow.flow_at(d, t)?;
        let det_a = s_t.det_a();
        let type1_failed = matches!(phase_from_symplectic(&s_t), Err(Error::Caustic { .. }));
        let (u, route) = if perturbed {
            (evolve_perturbed(p, t)?, None)
        } else {
            let (u, r) = metaplectic_apply_routed(&s_t, &p.u0)?;
            (u, Some(r))
        };
        let norm = u.norm_l2();
        if (norm - norm0).abs() > 1e-4 {
            norm_warning = true;
        }

        // transport is meaningful for the quadratic part only; for perturbed
        // runs the gap is still reported but not expected to be small
        let mut gaps = Vec::new();
        let mut mass_loss = None;
        match d {
            1 => {
                let wt = cross_wigner(&u, &u)?;
                let tr = transport_wigner(&w0, &s_t)?;
                mass_loss = Some(tr.mass_loss);
                gaps.push(rel_l2_gap(&wt, &tr.w));
            }
            2 => {
                let tr = transport_wigner(&w0, &s_t)?;
                mass_loss = Some(tr.mass_loss);
                for axis in 0..2 {
                    let wt = partial_wigner(&u, &u, axis)?;
                    let trm = marginalize_plane(&tr.w, axis)?;
                    gaps.push(rel_l2_gap(&wt, &trm));
                }
            }
            _ => {}
        }
        metrics.push(TimeMetrics {
            t,
            norm,
            det_a,
            type1_failed,
            wigner_gaps: gaps,
            transport_mass_loss: mass_loss,
            caustic_route: matches!(route, Some(crate::fio::MetaplecticRoute::CausticFallback)),
        });
        states.push(u);
    }
    Ok(PropagationResult { metrics, states, norm_warning })
}

/// Marginalize a d=2 phase-space function onto one coordinate plane.
pub fn marginalize_plane(w: &PhaseSpaceFunction, axis: usize) -> Result<PhaseSpaceFunction> {
    if w.grid.dim() != 2 {
        return Err(Error::UnsupportedDim(w.grid.dim()));
    }
    if axis > 1 {
        return Err(Error::InvalidArgument("axis must be 0 or 1".into()));
    }
    let n = w.grid.samples_per_axis();
    let cell = w.grid.delta() * w.grid.wigner_freq_spacing();
    let g1 = crate::grid::GridSpec::new(1, n, w.grid.delta())?;
    let mut out = ndarray::Array2::from_elem((n, n), Complex64::ZERO);
    for a in 0..n {
        for b in 0..n {
            for p in 0..n {
                for q in 0..n {
                    let (i, k, r, c) = if axis == 0 { (a, p, a * n + b, p * n + q) } else { (b, q, a * n + b, p * n + q) };
                    out[(i, k)] += w.values[(r, c)] * cell;
                }
            }
        }
    }
    Ok(PhaseSpaceFunction { grid: g1, values: out })
}

/// Max pointwise deviation after aligning the global phase of `b` to `a`.
pub fn aligned_max_dev(a: &SampledState, b: &SampledState) -> Result<f64> {
    let ip = grid::inner(a, b)?;
    let phase = if ip.norm() > 0.0 { ip / ip.norm() } else { Complex64::new(1.0, 0.0) };
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y * phase).norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_gaussian, GridSpec};
    use approx::assert_relative_eq;

    fn grid256() -> GridSpec {
        GridSpec::new(1, 256, 1.0 / 16.0).unwrap()
    }

    fn harmonic_problem(times: Vec<f64>) -> CauchyProblem {
        let g = grid256();
        CauchyProblem {
            flow: FlowPreset::Harmonic,
            perturbation: None,
            u0: make_gaussian(g, &[0.4], &[0.2], 1.3).unwrap(),
            times,
            dt: None,
        }
    }

    #[test]
    fn harmonic_period_returns_to_start_in_modulus() {
        let p = harmonic_problem(vec![]);
        let u = evolve_quadratic(&p, 2.0 * std::f64::consts::PI).unwrap();
        for (a, b) in u.values.iter().zip(&p.u0.values) {
            assert!((a.norm() - b.norm()).abs() < 1e-6);
        }
    }

    #[test]
    fn harmonic_caustic_state_is_fourier_in_modulus() {
        let p = harmonic_problem(vec![]);
        let u = evolve_quadratic(&p, std::f64::consts::FRAC_PI_2).unwrap();
        let hat = grid::fourier(&p.u0);
        let n = 256;
        for j in 0..n {
            // S_{π/2} = J᷀ = J⁻¹, whose metaplectic image is the inverse
            // Fourier transform: |u(x)| = |f̂(-x)|
            let mirror = hat.values[(n - j) % n].norm();
            assert!((u.values[j].norm() - mirror).abs() < 1e-6);
        }
    }

    #[test]
    fn free_particle_argmax_moves_ballistically() {
        let g = grid256();
        let p = CauchyProblem {
            flow: FlowPreset::FreeParticle,
            perturbation: None,
            u0: make_gaussian(g, &[0.5], &[1.0], 1.0).unwrap(),
            times: vec![],
            dt: None,
        };
        for t in [0.5, 1.0, 2.0] {
            let u = evolve_quadratic(&p, t).unwrap();
            let w = cross_wigner(&u, &u).unwrap();
            let z = w.argmax();
            assert!((z[0] - (0.5 + t * 1.0)).abs() <= 2.0 * g.delta(), "t = {t}");
            assert!((z[1] - 1.0).abs() <= 2.0 * g.wigner_freq_spacing());
        }
    }

    #[test]
    fn transport_identity_and_rotation() {
        let g = grid256();
        let f = make_gaussian(g, &[0.5], &[0.25], 1.3).unwrap();
        let w = cross_wigner(&f, &f).unwrap();
        let tr = transport_wigner(&w, &SymplecticMatrix::identity(1)).unwrap();
        let dev = tr
            .w
            .values
            .iter()
            .zip(w.values.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12);
        assert!(tr.mass_loss < 1e-12);

        // 90° rotation: value at (x,ξ) equals W((ξ,-x)) within interpolation error
        let s = harmonic_flow(1, std::f64::consts::FRAC_PI_2);
        let tr = transport_wigner(&w, &s).unwrap();
        let n = 256;
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for j in 0..n {
            for k in 0..n {
                let x = g.coord(j);
                let xi = g.wigner_freq_coord(k);
                // source point (ξ, -x) must lie on the lattice to compare exactly
                let sj = g.nearest_index(xi);
                let sk = (-x) / g.wigner_freq_spacing() + n as f64 / 2.0;
                if let Some(sj) = sj {
                    if (g.coord(sj) - xi).abs() < 1e-12 && (sk - sk.round()).abs() < 1e-12 {
                        let skr = sk.round();
                        if skr >= 0.0 && skr < n as f64 {
                            let r = w.values[(sj, skr as usize)];
                            num += (tr.w.values[(j, k)] - r).norm_sqr();
                            den += r.norm_sqr();
                        }
                    }
                }
            }
        }
        assert!(num.sqrt() / den.sqrt() < 1e-3);
    }

    #[test]
    fn free_particle_transport_matches_shear() {
        let g = grid256();
        let f = make_gaussian(g, &[-0.4], &[0.6], 1.5).unwrap();
        let w = cross_wigner(&f, &f).unwrap();
        let t = 0.8;
        let tr = transport_wigner(&w, &free_particle_flow(1, t)).unwrap();
        // W(x - tξ, ξ) at lattice points coincides with the oracle state path
        let u = evolve_quadratic(
            &CauchyProblem {
                flow: FlowPreset::FreeParticle,
                perturbation: None,
                u0: f.clone(),
                times: vec![],
                dt: None,
            },
            t,
        )
        .unwrap();
        let wu = cross_wigner(&u, &u).unwrap();
        assert!(rel_l2_gap(&tr.w, &wu) < 2e-3);
    }

    #[test]
    fn caustic_times_presets() {
        let pi = std::f64::consts::PI;
        // harmonic: {π/2, 3π/2} on [0, 2π]
        let roots = caustic_times(|t| t.cos(), 0.0, 2.0 * pi);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - pi / 2.0).abs() < 1e-9);
        assert!((roots[1] - 3.0 * pi / 2.0).abs() < 1e-9);

        // free particle: none
        let flow = FlowPreset::FreeParticle;
        let roots = caustic_times(|t| flow.det_a(1, t).unwrap(), 0.0, 10.0);
        assert!(roots.is_empty());

        // magnetic (ω = 1): det A = cos²t touches zero at π/2, 3π/2
        let flow = FlowPreset::Magnetic { mass: 1.0, omega: 1.0 };
        let roots = caustic_times(|t| flow.det_a(2, t).unwrap(), 0.0, 2.0 * pi);
        assert_eq!(roots.len(), 2, "roots: {roots:?}");
        assert!((roots[0] - pi / 2.0).abs() < 1e-9);
        assert!((roots[1] - 3.0 * pi / 2.0).abs() < 1e-9);
    }

    #[test]
    fn quadratic_semigroup_up_to_phase() {
        let p = harmonic_problem(vec![]);
        for t in [0.8, 2.0] {
            let one = evolve_quadratic(&p, t).unwrap();
            let half = evolve_quadratic(&p, t / 2.0).unwrap();
            let p2 = CauchyProblem {
                flow: FlowPreset::Harmonic,
                perturbation: None,
                u0: half,
                times: vec![],
                dt: None,
            };
            let two = evolve_quadratic(&p2, t / 2.0).unwrap();
            let dev = aligned_max_dev(&one, &two).unwrap();
            assert!(dev < 1e-8, "t = {t}, dev = {dev}");
        }
    }

    #[test]
    fn perturbed_zero_sigma_degenerates() {
        let g = grid256();
        let mut p = harmonic_problem(vec![]);
        p.u0 = make_gaussian(g, &[0.3], &[0.1], 1.2).unwrap();
        p.perturbation = Some(Symbol::from_fn(|_, _| Complex64::ZERO));
        p.dt = Some(0.05);
        let a = evolve_perturbed(&p, 0.4).unwrap();
        let b = evolve_quadratic(&p, 0.4).unwrap();
        let dev = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-10);
    }

    #[test]
    fn perturbed_norm_conservation_real_potential() {
        let mut p = harmonic_problem(vec![]);
        p.perturbation = Some(Symbol::from_registry("potential:cos").unwrap());
        p.dt = Some(0.01);
        let u = evolve_perturbed(&p, 0.3).unwrap();
        assert_relative_eq!(u.norm_l2(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn strang_self_convergence_second_order() {
        let mut p = harmonic_problem(vec![]);
        p.perturbation = Some(Symbol::from_registry("potential:cos").unwrap());
        let t = 0.4;
        let dt0 = t / 16.0;
        let run = |dt: f64| {
            let mut q = CauchyProblem {
                flow: FlowPreset::Harmonic,
                perturbation: Some(Symbol::from_registry("potential:cos").unwrap()),
                u0: p.u0.clone(),
                times: vec![],
                dt: Some(dt),
            };
            q.dt = Some(dt);
            evolve_perturbed(&q, t).unwrap()
        };
        let u1 = run(dt0);
        let u2 = run(dt0 / 2.0);
        let u4 = run(dt0 / 4.0);
        let d12 = u1
            .values
            .iter()
            .zip(&u2.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let d24 = u2
            .values
            .iter()
            .zip(&u4.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let order = (d12 / d24).log2();
        assert!(order >= 1.9, "observed order {order}");
    }

    #[test]
    fn run_and_compare_harmonic_sweep() {
        let pi = std::f64::consts::PI;
        let p = harmonic_problem(vec![0.0, pi / 4.0, pi / 2.0, 3.0 * pi / 4.0, pi]);
        let res = run_and_compare(&p).unwrap();
        assert!(!res.norm_warning);
        for m in &res.metrics {
            assert!(m.wigner_gaps[0] <= 5e-3, "t = {}, gap = {}", m.t, m.wigner_gaps[0]);
        }
        // type-I fails exactly at π/2
        let fails: Vec<f64> =
            res.metrics.iter().filter(|m| m.type1_failed).map(|m| m.t).collect();
        assert_eq!(fails.len(), 1);
        assert!((fails[0] - pi / 2.0).abs() < 1e-12);
        let ratio = res.gap_spike_ratio().unwrap();
        assert!(ratio <= 3.0, "spike ratio {ratio}");
    }
}
