//! Wigner kernels of operators on the 4d phase-space lattice, graph
//! concentration diagnostics, and kernel algebra.
//!
//! The Wigner kernel of an operator with discrete Schwartz kernel k_T is the
//! permuted 2-variable Wigner transform k(x,ξ,y,η) = W k_T(x,y,ξ,-η).  A
//! kernel acts on phase-space functions by integration over w = (y,η) and is
//! stored as an n²×n² matrix in the flat (z,w) layout, so composition is a
//! matrix product and the adjoint is the argument swap.
//!
//! Operators entering this pipeline should be half-band limited
//! (`quantize::halfband_sandwich`): upper-band content aliases onto displaced
//! graph images under the integer-lag Wigner and corrupts the diagnostics.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fio::TypeIFio;
use crate::grid::{self, GridSpec};
use crate::quantize::OperatorMatrix;
use crate::symplectic::SymplecticMatrix;
use crate::wigner::{cross_wigner_two_var, PhaseSpaceFunction};

pub const KERNEL_MAX_N: usize = 64;

/// Samples of a Wigner kernel on the (z,w) = ((x,ξ),(y,η)) lattice, with an
/// optionally attached symplectic map (the claimed graph).
#[derive(Debug, Clone)]
pub struct WignerKernel {
    pub grid: GridSpec,
    /// n²×n² matrix; row = x·n + ξ, column = y·n + η.
    pub values: Array2<Complex64>,
    pub attached: Option<SymplecticMatrix>,
}

impl WignerKernel {
    fn guard(grid: GridSpec, what: &str) -> Result<()> {
        if grid.dim() != 1 {
            return Err(Error::UnsupportedDim(grid.dim()));
        }
        let n = grid.samples_per_axis();
        if n > KERNEL_MAX_N {
            return Err(Error::MemoryGuard { what: what.into(), n, max: KERNEL_MAX_N });
        }
        Ok(())
    }

    /// 4d L² norm with cell measure (δ·δ_wigner)².
    pub fn norm_l2(&self) -> f64 {
        let cell = self.grid.delta() * self.grid.wigner_freq_spacing();
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt() * cell
    }

    pub fn value(&self, ix: usize, ixi: usize, iy: usize, ieta: usize) -> Complex64 {
        let n = self.grid.samples_per_axis();
        self.values[(ix * n + ixi, iy * n + ieta)]
    }
}

/// Wigner kernel of an operator matrix: k = 𝔗_p W k_T with
/// 𝔗_p F(x,ξ,y,η) = F(x,y,ξ,-η).
pub fn kernel_from_operator(kt: &OperatorMatrix) -> Result<WignerKernel> {
    WignerKernel::guard(kt.grid, "kernel_from_operator")?;
    let n = kt.grid.samples_per_axis();
    let delta = kt.grid.delta();
    // entries carry the delta^d kernel scaling; undo it for the true k_T values
    let ktf = kt.entries.mapv(|v| v / delta);
    let w2 = cross_wigner_two_var(&ktf, &ktf, delta);
    // w2[(a,b),(p,q)] = W k_T(x_a, x_b, ξ_p, ξ_q); permute to (a,p),(b, -q)
    let mut values = Array2::from_elem((n * n, n * n), Complex64::ZERO);
    for a in 0..n {
        for p in 0..n {
            let row = a * n + p;
            for b in 0..n {
                for q in 0..n {
                    let qflip = (n - q) % n;
                    values[(row, b * n + q)] = w2[(a * n + b, p * n + qflip)];
                }
            }
        }
    }
    Ok(WignerKernel { grid: kt.grid, values, attached: None })
}

/// W(Tf,Tg)(z) = ∫ k(z,w) W(f,g)(w) dw as a cell-measure-weighted contraction.
pub fn apply_kernel(k: &WignerKernel, w: &PhaseSpaceFunction) -> Result<PhaseSpaceFunction> {
    if k.grid != w.grid {
        return Err(Error::GridMismatch);
    }
    let n = k.grid.samples_per_axis();
    let cell = k.grid.delta() * k.grid.wigner_freq_spacing();
    let flat = ndarray::Array1::from_iter(w.values.iter().cloned());
    let out = k.values.dot(&flat) * Complex64::new(cell, 0.0);
    let values = Array2::from_shape_vec((n, n), out.to_vec()).expect("shape");
    Ok(PhaseSpaceFunction { grid: k.grid, values })
}

/// Contraction of two kernels over the shared middle lattice.
pub fn compose_kernels(k1: &WignerKernel, k2: &WignerKernel) -> Result<WignerKernel> {
    if k1.grid != k2.grid {
        return Err(Error::GridMismatch);
    }
    WignerKernel::guard(k1.grid, "compose_kernels")?;
    let cell = k1.grid.delta() * k1.grid.wigner_freq_spacing();
    let values = k1.values.dot(&k2.values) * Complex64::new(cell, 0.0);
    let attached = match (&k1.attached, &k2.attached) {
        (Some(a), Some(b)) => a.compose(b).ok(),
        _ => None,
    };
    Ok(WignerKernel { grid: k1.grid, values, attached })
}

/// Argument swap k̃(z,w) = k(w,z); the Wigner kernel of the adjoint operator.
pub fn adjoint_kernel(k: &WignerKernel) -> WignerKernel {
    WignerKernel {
        grid: k.grid,
        values: k.values.t().to_owned(),
        attached: k.attached.as_ref().map(|s| s.inverse()),
    }
}

/// Wigner kernel of a type-I FIO with quadratic phase, built directly from
/// k_I(x,ξ,y,η) = ℱ₂σ̃ (ξ-Φ_x(x,η), y-Φ_η(x,η)) with
/// σ̃(x,η,t,r) = σ(x+t/2, η+r/2)·conj(σ(x-t/2, η-r/2)).
///
/// The lag FFT is zero-padded 4x and evaluated off-lattice by bilinear
/// interpolation; lag windows mirror the finite-grid truncation of
/// `kernel_from_operator` so the two constructions are comparable cell by
/// cell.
pub fn type1_kernel_direct(t: &TypeIFio, g: GridSpec) -> Result<WignerKernel> {
    WignerKernel::guard(g, "type1_kernel_direct")?;
    if t.phase.dim() != 1 {
        return Err(Error::UnsupportedDim(t.phase.dim()));
    }
    let n = g.samples_per_axis();
    let delta = g.delta();
    let deta = g.wigner_freq_spacing();
    let pad = 4 * n;
    let plans = grid::plan_fft(pad);
    let fft = plans.fwd;
    // fine output lattices of the padded lag FFT
    let du = 1.0 / (8.0 * n as f64 * delta); // = deta/4
    let dv = delta / 4.0;
    let measure = (2.0 * delta) * (2.0 * deta) * t.prefactor_value();

    // one padded lag FFT per (x, η); the result covers every (ξ, y) cell
    let blocks: Vec<(usize, usize, Vec<Complex64>)> = (0..n * n)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            let x = g.coord(i);
            let eta = g.wigner_freq_coord(j);
            let gx = t.phase.grad_x(&[x], &[eta])[0];
            let ge = t.phase.grad_eta(&[x], &[eta])[0];
            // lag windows matched to the operator-path truncation: the t-lag
            // window comes from the x edge, the r-lag window from the y edge
            // at the graph image Φ_η(x,η)
            let mt = i.min(n - 1 - i) as i64;
            let lstar = (ge / delta + n as f64 / 2.0).round();
            let mr = if lstar < 0.0 || lstar > (n - 1) as f64 {
                (n / 2 - 1) as i64
            } else {
                (lstar as usize).min(n - 1 - lstar as usize) as i64
            };
            let mut lag = vec![Complex64::ZERO; pad * pad];
            for m in -mt..=mt {
                let tv = m as f64 * delta; // t/2 = mδ
                for mq in -mr..=mr {
                    let rv = mq as f64 * deta; // r/2 = m'·Δη
                    let s1 = t.symbol.eval(&[x + tv], &[eta + rv]);
                    let s2 = t.symbol.eval(&[x - tv], &[eta - rv]).conj();
                    let sign = if (m + mq) % 2 == 0 { 1.0 } else { -1.0 };
                    let mp = ((m % pad as i64) + pad as i64) as usize % pad;
                    let mqp = ((mq % pad as i64) + pad as i64) as usize % pad;
                    lag[mp * pad + mqp] = s1 * s2 * sign;
                }
            }
            // 2D FFT of the padded lag array
            for r in lag.chunks_mut(pad) {
                fft.process(r);
            }
            let mut col = vec![Complex64::ZERO; pad];
            for c in 0..pad {
                for rr in 0..pad {
                    col[rr] = lag[rr * pad + c];
                }
                fft.process(&mut col);
                for rr in 0..pad {
                    lag[rr * pad + c] = col[rr];
                }
            }
            // sample F(u,v) at u = ξ_k - Φx, v = y_l - Φη for all (k,l)
            let mut block = vec![Complex64::ZERO; n * n];
            for k in 0..n {
                let u = g.wigner_freq_coord(k) - gx;
                let fu = u / du + (pad / 2) as f64;
                if fu < 0.0 || fu > (pad - 1) as f64 {
                    continue; // outside the covered band: kernel ~ 0
                }
                let k0 = fu.floor() as usize;
                let k1 = (k0 + 1).min(pad - 1);
                let wu = fu - k0 as f64;
                for l in 0..n {
                    let v = g.coord(l) - ge;
                    let fv = v / dv + (pad / 2) as f64;
                    if fv < 0.0 || fv > (pad - 1) as f64 {
                        continue;
                    }
                    let l0 = fv.floor() as usize;
                    let l1 = (l0 + 1).min(pad - 1);
                    let wv = fv - l0 as f64;
                    let f00 = lag[k0 * pad + l0];
                    let f01 = lag[k0 * pad + l1];
                    let f10 = lag[k1 * pad + l0];
                    let f11 = lag[k1 * pad + l1];
                    block[k * n + l] = (f00 * ((1.0 - wu) * (1.0 - wv))
                        + f01 * ((1.0 - wu) * wv)
                        + f10 * (wu * (1.0 - wv))
                        + f11 * (wu * wv))
                        * measure;
                }
            }
            (i, j, block)
        })
        .collect();

    let mut values = Array2::from_elem((n * n, n * n), Complex64::ZERO);
    for (i, j, block) in blocks {
        for k in 0..n {
            for l in 0..n {
                values[(i * n + k, l * n + j)] = block[k * n + l];
            }
        }
    }
    Ok(WignerKernel {
        grid: g,
        values,
        attached: Some(t.phase.origin.clone()),
    })
}

/// Graph-concentration diagnostics of a kernel against a claimed map S.
#[derive(Debug, Clone)]
pub struct GraphDiagnostics {
    /// Fraction of significant z-columns whose argmax lies within one cell of S⁻¹z.
    pub hit_rate: f64,
    pub significant_columns: usize,
    /// |k| mass per integer annulus of graph distance (in w-lattice cells).
    pub mass_profile: Vec<f64>,
    /// Least-squares slope of log(mass) vs log⟨distance⟩ over the profile.
    pub decay_exponent: f64,
}

impl GraphDiagnostics {
    /// Total mass at graph distance strictly greater than `r` cells.
    pub fn tail_mass(&self, r: usize) -> f64 {
        self.mass_profile.iter().skip(r + 1).sum()
    }
}

/// Per-column argmax distance to the graph {z = S w}, measured in w-lattice
/// cells after mapping z through S⁻¹.
pub fn graph_concentration(k: &WignerKernel, s: &SymplecticMatrix) -> Result<GraphDiagnostics> {
    if s.dim() != 1 {
        return Err(Error::UnsupportedDim(s.dim()));
    }
    let n = k.grid.samples_per_axis();
    let delta = k.grid.delta();
    let deta = k.grid.wigner_freq_spacing();
    let sinv = s.inverse();
    let global_max = k.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if global_max == 0.0 {
        return Ok(GraphDiagnostics {
            hit_rate: 0.0,
            significant_columns: 0,
            mass_profile: vec![0.0],
            decay_exponent: 0.0,
        });
    }
    let col_threshold = 1e-6 * global_max;
    let max_r = ((n as f64) * std::f64::consts::SQRT_2).ceil() as usize + 1;
    let mut profile = vec![0.0; max_r + 1];
    let mut hits = 0usize;
    let mut significant = 0usize;
    for i in 0..n {
        for kk in 0..n {
            let z = [k.grid.coord(i), k.grid.wigner_freq_coord(kk)];
            let wg = sinv.apply(&z);
            // fractional w-lattice indices of S⁻¹ z
            let ly = wg[0] / delta + n as f64 / 2.0;
            let le = wg[1] / deta + n as f64 / 2.0;
            let row = i * n + kk;
            let mut best = (0usize, 0usize);
            let mut bestv = -1.0;
            for l in 0..n {
                for j in 0..n {
                    let m = k.values[(row, l * n + j)].norm();
                    if m > bestv {
                        bestv = m;
                        best = (l, j);
                    }
                    let dyc = l as f64 - ly;
                    let dec = j as f64 - le;
                    let dist = (dyc * dyc + dec * dec).sqrt();
                    let bin = (dist.floor() as usize).min(max_r);
                    profile[bin] += m;
                }
            }
            if bestv >= col_threshold {
                significant += 1;
                let dy = (best.0 as f64 - ly).abs();
                let de = (best.1 as f64 - le).abs();
                if dy.max(de) <= 1.0 + 1e-9 {
                    hits += 1;
                } else {
                    // tie handling: the graph cell may attain the column max
                    // without being the first argmax (flat ridges)
                    let gl = ly.round();
                    let ge = le.round();
                    if gl >= 0.0 && gl < n as f64 && ge >= 0.0 && ge < n as f64 {
                        let mut near_max: f64 = 0.0;
                        for dl in -1i64..=1 {
                            for dj in -1i64..=1 {
                                let l = gl as i64 + dl;
                                let j = ge as i64 + dj;
                                if l >= 0 && l < n as i64 && j >= 0 && j < n as i64 {
                                    near_max = near_max.max(
                                        k.values[(row, l as usize * n + j as usize)].norm(),
                                    );
                                }
                            }
                        }
                        if near_max >= (1.0 - 1e-9) * bestv {
                            hits += 1;
                        }
                    }
                }
            }
        }
    }
    // log-log fit of the radial profile over populated annuli
    let pts: Vec<(f64, f64)> = profile
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &m)| m > 0.0)
        .map(|(r, &m)| (((1 + r * r) as f64).sqrt().ln(), m.ln()))
        .collect();
    let decay_exponent = if pts.len() >= 2 {
        let nn = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (nn * sxy - sx * sy) / (nn * sxx - sx * sx)
    } else {
        0.0
    };
    Ok(GraphDiagnostics {
        hit_rate: if significant == 0 { 0.0 } else { hits as f64 / significant as f64 },
        significant_columns: significant,
        mass_profile: profile,
        decay_exponent,
    })
}

/// Masked relative L² deviation between two kernels over the cells where the
/// reference modulus is at least `mask_rel` of its maximum.
pub fn masked_relative_l2(a: &WignerKernel, reference: &WignerKernel, mask_rel: f64) -> f64 {
    let max_ref = reference.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let thr = mask_rel * max_ref;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in a.values.iter().zip(reference.values.iter()) {
        if y.norm() >= thr {
            num += (x - y).norm_sqr();
            den += y.norm_sqr();
        }
    }
    if den == 0.0 {
        0.0
    } else {
        (num / den).sqrt()
    }
}
