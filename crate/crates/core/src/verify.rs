//! Built-in verification suites.
//!
//! Each criterion is a self-contained check with pinned tolerances; the
//! acceptance test target and the CLI `verify` command both run these.
//! `tol_scale` multiplies tolerances for constrained CI environments and
//! defaults to 1.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fio::{metaplectic_apply, TypeIFio};
use crate::grid::{make_gaussian, random_bandlimited_state, GridSpec};
use crate::propagate::{run_and_compare, CauchyProblem, FlowPreset};
use crate::quantize::{
    halfband_projector, halfband_sandwich, materialize, random_bandlimited_operator,
    OperatorMatrix, Symbol,
};
use crate::symplectic::{
    exp_flow, ft2_conjugation, harmonic_flow, free_particle_flow, magnetic_flow,
    magnetic_generator, SymplecticMatrix,
};
use crate::wigner::{cross_wigner, moyal_check, ps_inner};
use crate::wigner_kernel::{
    compose_kernels, graph_concentration, kernel_from_operator, masked_relative_l2,
    type1_kernel_direct,
};

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
    pub millis: u128,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {:<28} {} ({} ms)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.details,
            self.millis
        )
    }
}

fn run_criterion(
    id: usize,
    name: &'static str,
    body: impl FnOnce() -> (bool, String),
) -> CriterionOutcome {
    let start = Instant::now();
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(body));
    let millis = start.elapsed().as_millis();
    match result {
        Ok((passed, details)) => CriterionOutcome { id, name, passed, details, millis },
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            CriterionOutcome { id, name, passed: false, details: format!("panicked: {msg}"), millis }
        }
    }
}

fn grid_selfdual(n: usize) -> GridSpec {
    GridSpec::new(1, n, 1.0 / (n as f64).sqrt()).expect("valid grid")
}

fn grid256() -> GridSpec {
    GridSpec::new(1, 256, 1.0 / 16.0).expect("valid grid")
}

/// 1. Symplectic flows: rotation entries, magnetic closed form vs exp(tX),
///    and the 𝒜ᵀ𝒞 identity.
pub fn criterion_01_symplectic_flows(tol_scale: f64) -> CriterionOutcome {
    run_criterion(1, "symplectic-flows", || {
        let mut worst_rot: f64 = 0.0;
        for i in 0..=100 {
            let t = -6.0 + 12.0 * i as f64 / 100.0;
            let s = harmonic_flow(1, t);
            let m = s.matrix();
            worst_rot = worst_rot
                .max((m[(0, 0)] - t.cos()).abs())
                .max((m[(0, 1)] + t.sin()).abs())
                .max((m[(1, 0)] - t.sin()).abs())
                .max((m[(1, 1)] - t.cos()).abs());
        }

        let b = crate::propagate::magnetic_b();
        let (mass, omega) = (1.3, 0.7);
        let x = magnetic_generator(mass, omega, &b).expect("generator");
        let mut worst_mag: f64 = 0.0;
        let mut worst_atc: f64 = 0.0;
        for i in 0..100 {
            let t = i as f64 * (4.0 * PI / omega) / 99.0;
            let closed = magnetic_flow(t, mass, omega, &b).expect("flow");
            let series = exp_flow(&x, t).expect("exp");
            worst_mag = worst_mag.max(
                (closed.matrix() - series.matrix())
                    .iter()
                    .fold(0.0f64, |a, v| a.max(v.abs())),
            );
            let bl = closed.blocks();
            let atc = bl.a.transpose() * &bl.c;
            let expected =
                DMatrix::<f64>::identity(2, 2) * (-(mass * omega / 2.0) * (2.0 * omega * t).sin());
            worst_atc = worst_atc.max((atc - expected).iter().fold(0.0f64, |a, v| a.max(v.abs())));
        }
        let ok = worst_rot <= 1e-12 * tol_scale
            && worst_mag <= 1e-8 * tol_scale
            && worst_atc <= 1e-10 * tol_scale;
        (ok, format!("rotation {worst_rot:.2e}, magnetic-vs-exp {worst_mag:.2e}, AᵀC {worst_atc:.2e}"))
    })
}

/// 2. Moyal identity on 20 random half-band quadruples at n=256.
pub fn criterion_02_moyal(seed: u64, tol_scale: f64) -> CriterionOutcome {
    run_criterion(2, "moyal-suite", || {
        let g = grid256();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let f = random_bandlimited_state(g, &mut rng);
            let h = random_bandlimited_state(g, &mut rng);
            let p = random_bandlimited_state(g, &mut rng);
            let q = random_bandlimited_state(g, &mut rng);
            worst = worst.max(moyal_check(&f, &h, &p, &q).expect("moyal"));
        }
        (worst <= 1e-8 * tol_scale, format!("max residual {worst:.2e}"))
    })
}

/// 3. Uniqueness shadow: operator-path and direct type-I kernels agree on the
///    significant-mass region for harmonic_flow(π/3), σ ≡ 1, n = 32.
pub fn criterion_03_kernel_uniqueness(tol_scale: f64) -> CriterionOutcome {
    run_criterion(3, "kernel-uniqueness", || {
        let g = grid_selfdual(32);
        let s = harmonic_flow(1, PI / 3.0);
        let kt = halfband_sandwich(
            &materialize(|f| metaplectic_apply(&s, f), g).expect("materialize"),
        )
        .expect("sandwich");
        let k_op = kernel_from_operator(&kt).expect("kernel");
        let fio = TypeIFio::metaplectic(&s).expect("fio");
        let k_dir = type1_kernel_direct(&fio, g).expect("direct");
        let rel = masked_relative_l2(&k_dir, &k_op, 1e-6);
        (rel <= 1e-2 * tol_scale, format!("masked relative L² {rel:.3e}"))
    })
}

/// 4. Sesquilinear identity of the Wigner kernel, brute force at n=16.
pub fn criterion_04_sesquilinear(seed: u64, tol_scale: f64) -> CriterionOutcome {
    run_criterion(4, "sesquilinear-identity", || {
        let g = grid_selfdual(16);
        let n = 16;
        let cell = g.delta() * g.wigner_freq_spacing();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5e5e);
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let kt = random_bandlimited_operator(g, &mut rng).expect("operator");
            let k = kernel_from_operator(&kt).expect("kernel");
            let f = random_bandlimited_state(g, &mut rng);
            let gg = random_bandlimited_state(g, &mut rng);
            let u = random_bandlimited_state(g, &mut rng);
            let v = random_bandlimited_state(g, &mut rng);
            let w_t = cross_wigner(&kt.apply(&f).expect("apply"), &kt.apply(&gg).expect("apply"))
                .expect("wigner");
            let w_uv = cross_wigner(&u, &v).expect("wigner");
            let w_fg = cross_wigner(&f, &gg).expect("wigner");
            let lhs = ps_inner(&w_t, &w_uv).expect("inner");
            let mut rhs = Complex64::ZERO;
            for zi in 0..n * n {
                let wz = w_uv.values[(zi / n, zi % n)].conj();
                for wi in 0..n * n {
                    rhs += k.values[(zi, wi)] * wz * w_fg.values[(wi / n, wi % n)];
                }
            }
            rhs *= cell * cell;
            worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1e-30));
        }
        (worst <= 1e-8 * tol_scale, format!("max relative residual {worst:.2e}"))
    })
}

/// 5. Graph concentration: metaplectic kernel hits its own graph and misses a
///    wrong one, n = 32.
pub fn criterion_05_graph_concentration(tol_scale: f64) -> CriterionOutcome {
    run_criterion(5, "graph-concentration", || {
        let g = grid_selfdual(32);
        let s = harmonic_flow(1, PI / 3.0);
        let kt = halfband_sandwich(
            &materialize(|f| metaplectic_apply(&s, f), g).expect("materialize"),
        )
        .expect("sandwich");
        let k = kernel_from_operator(&kt).expect("kernel");
        let own = graph_concentration(&k, &s).expect("diag").hit_rate;
        let wrong = graph_concentration(&k, &free_particle_flow(1, 1.0))
            .expect("diag")
            .hit_rate;
        let ok = own >= 0.95 / tol_scale.max(1.0) && wrong <= 0.2 * tol_scale;
        (ok, format!("own-graph {own:.3}, wrong-graph {wrong:.3}"))
    })
}

/// 6. Algebra property: composed rotation kernels concentrate on the product
///    graph, and kernel composition equals the kernel of the composed
///    operator at n = 16.
pub fn criterion_06_algebra(tol_scale: f64) -> CriterionOutcome {
    run_criterion(6, "kernel-algebra", || {
        let g = grid_selfdual(32);
        let s1 = harmonic_flow(1, 0.5);
        let s2 = harmonic_flow(1, 0.3);
        let mk = |s: &SymplecticMatrix| {
            halfband_sandwich(&materialize(|f| metaplectic_apply(s, f), g).expect("materialize"))
                .expect("sandwich")
        };
        let k1 = kernel_from_operator(&mk(&s1)).expect("kernel");
        let k2 = kernel_from_operator(&mk(&s2)).expect("kernel");
        let composed = compose_kernels(&k1, &k2).expect("compose");
        let hit = graph_concentration(&composed, &s1.compose(&s2).expect("compose"))
            .expect("diag")
            .hit_rate;

        let g16 = grid_selfdual(16);
        let mk16 = |s: &SymplecticMatrix| {
            halfband_sandwich(&materialize(|f| metaplectic_apply(s, f), g16).expect("materialize"))
                .expect("sandwich")
        };
        let a = mk16(&s1);
        let b = mk16(&s2);
        let lhs = compose_kernels(
            &kernel_from_operator(&a).expect("kernel"),
            &kernel_from_operator(&b).expect("kernel"),
        )
        .expect("compose");
        let rhs = kernel_from_operator(&a.compose(&b).expect("compose")).expect("kernel");
        let num: f64 = lhs
            .values
            .iter()
            .zip(rhs.values.iter())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let den: f64 = rhs.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let rel = num / den;
        let ok = hit >= 0.9 / tol_scale.max(1.0) && rel <= 1e-6 * tol_scale;
        (ok, format!("product-graph hit {hit:.3}, compose-vs-product {rel:.2e}"))
    })
}

/// 7. Positivity of ⟨k, Wf ⊗ Wg⟩ for constructed kernels.
pub fn criterion_07_positivity(seed: u64, tol_scale: f64) -> CriterionOutcome {
    run_criterion(7, "kernel-positivity", || {
        let g = grid_selfdual(16);
        let n = 16;
        let cell = g.delta() * g.wigner_freq_spacing();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7051);
        let s = harmonic_flow(1, 0.9);
        let kernels = vec![
            kernel_from_operator(&OperatorMatrix::identity(g)).expect("kernel"),
            kernel_from_operator(&halfband_projector(g).expect("proj")).expect("kernel"),
            kernel_from_operator(&random_bandlimited_operator(g, &mut rng).expect("op"))
                .expect("kernel"),
            kernel_from_operator(&random_bandlimited_operator(g, &mut rng).expect("op"))
                .expect("kernel"),
            kernel_from_operator(
                &halfband_sandwich(
                    &materialize(|f| metaplectic_apply(&s, f), g).expect("materialize"),
                )
                .expect("sandwich"),
            )
            .expect("kernel"),
        ];
        let mut worst = f64::INFINITY;
        for k in &kernels {
            for _ in 0..20 {
                let f = random_bandlimited_state(g, &mut rng);
                let h = random_bandlimited_state(g, &mut rng);
                let wf = cross_wigner(&f, &f).expect("wigner");
                let wh = cross_wigner(&h, &h).expect("wigner");
                let mut s = Complex64::ZERO;
                for zi in 0..n * n {
                    let a = wf.values[(zi / n, zi % n)];
                    for wi in 0..n * n {
                        s += k.values[(zi, wi)] * a * wh.values[(wi / n, wi % n)];
                    }
                }
                s *= cell * cell;
                let scale = k.norm_l2() * wf.norm_l2() * wh.norm_l2();
                worst = worst.min(s.re / scale);
            }
        }
        (worst >= -1e-8 * tol_scale, format!("min normalized pairing {worst:.2e}"))
    })
}

/// 8. Caustic experiment: harmonic sweep (d=1) and magnetic sweep (d=2).
pub fn criterion_08_caustic_experiment(tol_scale: f64) -> CriterionOutcome {
    run_criterion(8, "caustic-experiment", || {
        // d = 1 harmonic
        let g = grid256();
        let p = CauchyProblem {
            flow: FlowPreset::Harmonic,
            perturbation: None,
            u0: make_gaussian(g, &[0.4], &[0.2], 1.3).expect("gaussian"),
            times: vec![0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI],
            dt: None,
        };
        let res = run_and_compare(&p).expect("run");
        let max_gap = res
            .metrics
            .iter()
            .map(|m| m.wigner_gaps[0])
            .fold(0.0, f64::max);
        let fails: Vec<f64> = res
            .metrics
            .iter()
            .filter(|m| m.type1_failed)
            .map(|m| m.t)
            .collect();
        let fails_ok = fails.len() == 1 && (fails[0] - PI / 2.0).abs() < 1e-12;
        let spike = res.gap_spike_ratio().unwrap_or(f64::INFINITY);

        // d = 2 magnetic, gaps on coordinate-plane partial Wigners
        let g2 = GridSpec::new(2, 48, 1.0 / 6.0).expect("grid");
        let u0 = make_gaussian(g2, &[0.15, 0.1], &[0.12, -0.08], 1.2).expect("gaussian");
        let p2 = CauchyProblem {
            flow: FlowPreset::Magnetic { mass: 1.0, omega: 1.0 },
            perturbation: None,
            u0,
            times: vec![0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI],
            dt: None,
        };
        let res2 = run_and_compare(&p2).expect("run");
        let max_gap2 = res2
            .metrics
            .iter()
            .flat_map(|m| m.wigner_gaps.iter().cloned())
            .fold(0.0, f64::max);
        let fails2: Vec<f64> = res2
            .metrics
            .iter()
            .filter(|m| m.type1_failed)
            .map(|m| m.t)
            .collect();
        let fails2_ok = fails2.len() == 1 && (fails2[0] - PI / 2.0).abs() < 1e-12;

        let ok = max_gap <= 5e-3 * tol_scale
            && fails_ok
            && spike <= 3.0 * tol_scale
            && max_gap2 <= 1e-2 * tol_scale
            && fails2_ok;
        (
            ok,
            format!(
                "harmonic gap {max_gap:.2e} (spike {spike:.2}), caustic at {:?}; magnetic marginal gap {max_gap2:.2e}, caustic at {:?}",
                fails, fails2
            ),
        )
    })
}

/// 9. Perturbed propagator kernel concentrates on the flow graph with
///    monotone off-graph decay (V = cos(2πx), harmonic, t = 0.1, n = 32).
pub fn criterion_09_perturbed(tol_scale: f64) -> CriterionOutcome {
    run_criterion(9, "perturbed-propagator", || {
        let g = grid_selfdual(32);
        let t_final = 0.1;
        let prop = materialize(
            |f| {
                let p = CauchyProblem {
                    flow: FlowPreset::Harmonic,
                    perturbation: Some(Symbol::from_registry("potential:cos").expect("registry")),
                    u0: f.clone(),
                    times: vec![t_final],
                    dt: None,
                };
                crate::propagate::evolve_perturbed(&p, t_final)
            },
            g,
        )
        .expect("materialize");
        let kt = halfband_sandwich(&prop).expect("sandwich");
        let k = kernel_from_operator(&kt).expect("kernel");
        let s_t = harmonic_flow(1, t_final);
        let diag = graph_concentration(&k, &s_t).expect("diag");
        let tails: Vec<f64> = [1usize, 2, 4, 8].iter().map(|&r| diag.tail_mass(r)).collect();
        let monotone = tails.windows(2).all(|w| w[1] < w[0]);
        let ok = diag.hit_rate >= 0.8 / tol_scale.max(1.0) && monotone;
        (
            ok,
            format!("hit rate {:.3}, tail masses {:?}", diag.hit_rate, tails),
        )
    })
}

/// 10. Appendix block-structure equivalences and (reversed-order)
///     functoriality of the ℱ₂ conjugation.
pub fn criterion_10_ft2_conjugation(seed: u64, tol_scale: f64) -> CriterionOutcome {
    run_criterion(10, "ft2-conjugation", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa11a);
        let d = 1usize;
        let mut exact = true;
        for _ in 0..100 {
            // upper triangular
            let mut m = DMatrix::from_fn(2 * d, 2 * d, |i, j| {
                if j >= i {
                    rng.gen_range(-1.0..1.0)
                } else {
                    0.0
                }
            });
            for i in 0..2 * d {
                m[(i, i)] += 2.0;
            }
            let u = ft2_conjugation(&m).expect("conjugation");
            let c_absmax = u
                .view((2 * d, 0), (2 * d, 2 * d))
                .iter()
                .fold(0.0f64, |a, v| a.max(v.abs()));
            exact &= c_absmax == 0.0;

            // lower triangular
            let mut ml = DMatrix::from_fn(2 * d, 2 * d, |i, j| {
                if j <= i {
                    rng.gen_range(-1.0..1.0)
                } else {
                    0.0
                }
            });
            for i in 0..2 * d {
                ml[(i, i)] += 2.0;
            }
            let u = ft2_conjugation(&ml).expect("conjugation");
            let b_absmax = u
                .view((0, 2 * d), (2 * d, 2 * d))
                .iter()
                .fold(0.0f64, |a, v| a.max(v.abs()));
            exact &= b_absmax == 0.0;

            // diagonal
            let mut md = DMatrix::zeros(2 * d, 2 * d);
            for i in 0..2 * d {
                md[(i, i)] = rng.gen_range(0.5..2.0);
            }
            let u = ft2_conjugation(&md).expect("conjugation");
            let off = u
                .view((0, 2 * d), (2 * d, 2 * d))
                .iter()
                .chain(u.view((2 * d, 0), (2 * d, 2 * d)).iter())
                .fold(0.0f64, |a, v| a.max(v.abs()));
            exact &= off == 0.0;
        }

        // contravariant functoriality U(M₁M₂) = U(M₂)·U(M₁)
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let m1 = DMatrix::from_fn(2, 2, |_, _| rng.gen_range(-1.0..1.0))
                + DMatrix::identity(2, 2) * 1.6;
            let m2 = DMatrix::from_fn(2, 2, |_, _| rng.gen_range(-1.0..1.0))
                + DMatrix::identity(2, 2) * 1.6;
            let lhs = ft2_conjugation(&(&m1 * &m2)).expect("conjugation");
            let rhs = ft2_conjugation(&m2).expect("conjugation")
                * ft2_conjugation(&m1).expect("conjugation");
            worst = worst.max((lhs - rhs).iter().fold(0.0f64, |a, v| a.max(v.abs())));
        }
        let ok = exact && worst <= 1e-10 * tol_scale;
        (ok, format!("block zeros exact: {exact}, functoriality residual {worst:.2e}"))
    })
}

pub fn all_criteria(seed: u64, tol_scale: f64) -> Vec<CriterionOutcome> {
    vec![
        criterion_01_symplectic_flows(tol_scale),
        criterion_02_moyal(seed, tol_scale),
        criterion_03_kernel_uniqueness(tol_scale),
        criterion_04_sesquilinear(seed, tol_scale),
        criterion_05_graph_concentration(tol_scale),
        criterion_06_algebra(tol_scale),
        criterion_07_positivity(seed, tol_scale),
        criterion_08_caustic_experiment(tol_scale),
        criterion_09_perturbed(tol_scale),
        criterion_10_ft2_conjugation(seed, tol_scale),
    ]
}

/// Named suites for the CLI `verify` command.
pub fn suite(name: &str, seed: u64, tol_scale: f64) -> Option<Vec<CriterionOutcome>> {
    let ids: &[usize] = match name {
        "all" => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        "symplectic" => &[1],
        "moyal" => &[2],
        "kernels" => &[3, 4, 5, 6, 7],
        "caustic" => &[8],
        "perturbed" => &[9],
        "appendix" => &[10],
        _ => return None,
    };
    let run = |id: usize| -> CriterionOutcome {
        match id {
            1 => criterion_01_symplectic_flows(tol_scale),
            2 => criterion_02_moyal(seed, tol_scale),
            3 => criterion_03_kernel_uniqueness(tol_scale),
            4 => criterion_04_sesquilinear(seed, tol_scale),
            5 => criterion_05_graph_concentration(tol_scale),
            6 => criterion_06_algebra(tol_scale),
            7 => criterion_07_positivity(seed, tol_scale),
            8 => criterion_08_caustic_experiment(tol_scale),
            9 => criterion_09_perturbed(tol_scale),
            10 => criterion_10_ft2_conjugation(seed, tol_scale),
            _ => unreachable!(),
        }
    };
    Some(ids.iter().map(|&id| run(id)).collect())
}

pub fn suite_names() -> &'static [&'static str] {
    &["all", "symplectic", "moyal", "kernels", "caustic", "perturbed", "appendix"]
}
