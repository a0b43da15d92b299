use ndarray::Array2;
use num_complex::Complex64;
use phasespace::fio::{metaplectic_apply, phase_from_symplectic, TypeIFio};
use phasespace::grid::GridSpec;
use phasespace::quantize::{kn_kernel, materialize, OperatorMatrix, Symbol};
use phasespace::symplectic::{free_particle_flow, harmonic_flow};
use phasespace::wigner_kernel::{graph_concentration, kernel_from_operator, masked_relative_l2, type1_kernel_direct};
use std::f64::consts::PI;

fn hann(edge: f64, v: f64, p: i32) -> f64 {
    let a = v.abs();
    if a >= edge { 0.0 } else { (0.5 * PI * a / edge).cos().powi(p) }
}

fn run(n: usize, p: i32) {
    let g = GridSpec::new(1, n, 1.0 / (n as f64).sqrt()).unwrap();
    let q = 0.25 / g.delta();
    let half = 0.5 * g.extent();
    let t = PI / 3.0;
    let s = harmonic_flow(1, t);
    let raw = materialize(|f| metaplectic_apply(&s, f), g).unwrap();

    let band = kn_kernel(&Symbol::from_fn(move |_, xi| Complex64::new(hann(q, xi[0], p), 0.0)), g).unwrap();
    let mut xw = Array2::from_elem((n, n), Complex64::ZERO);
    for j in 0..n {
        xw[(j, j)] = Complex64::new(hann(half, g.coord(j), p), 0.0);
    }
    let xw = OperatorMatrix::new(g, xw).unwrap();
    let kt = xw.compose(&band).unwrap().compose(&raw).unwrap().compose(&band).unwrap().compose(&xw).unwrap();
    let k_op = kernel_from_operator(&kt).unwrap();
    let diag = graph_concentration(&k_op, &s).unwrap();
    let wrong = graph_concentration(&k_op, &free_particle_flow(1, 1.0)).unwrap();

    let phase = phase_from_symplectic(&s).unwrap();
    let phase2 = phase.clone();
    let sym = Symbol::from_fn(move |x, eta| {
        let gx = phase2.grad_x(x, eta)[0];
        let ge = phase2.grad_eta(x, eta)[0];
        Complex64::new(hann(q, eta[0], p) * hann(q, gx, p) * hann(half, x[0], p) * hann(half, ge, p), 0.0)
    });
    let fio = TypeIFio::new(phase, sym, true);
    let k_dir = type1_kernel_direct(&fio, g).unwrap();
    let m2 = masked_relative_l2(&k_dir, &k_op, 1e-2);
    let m3 = masked_relative_l2(&k_dir, &k_op, 1e-3);
    println!("n={n} hann^{p}: hit {:.4} (sig {}), wrong {:.4}, masked 1e-2 {:.3e}, 1e-3 {:.3e}",
        diag.hit_rate, diag.significant_columns, wrong.hit_rate, m2, m3);
}

fn main() {
    for p in [2, 4] { run(32, p); }
}
