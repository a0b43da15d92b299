use ndarray::Array2;
use num_complex::Complex64;
use phasespace::fio::{metaplectic_apply, phase_from_symplectic, TypeIFio};
use phasespace::grid::GridSpec;
use phasespace::quantize::{kn_kernel, materialize, OperatorMatrix, Symbol};
use phasespace::symplectic::{free_particle_flow, harmonic_flow};
use phasespace::wigner_kernel::{graph_concentration, kernel_from_operator, masked_relative_l2, type1_kernel_direct};
use std::f64::consts::PI;

// Gaussian band taper, hard zero beyond the quarter band
fn theta(q: f64, xi: f64) -> f64 {
    let a = xi.abs();
    if a >= q { 0.0 } else { (-PI * (a / (0.55 * q)).powi(2)).exp() }
}
// Gaussian spatial window
fn chi(half: f64, x: f64) -> f64 {
    (-PI * (x / (0.55 * half)).powi(2)).exp()
}

fn main() {
    let n = 32usize;
    let g = GridSpec::new(1, n, 1.0 / (n as f64).sqrt()).unwrap();
    let q = 0.25 / g.delta();
    let half = 0.5 * g.extent();
    let t = PI / 3.0;
    let s = harmonic_flow(1, t);
    let raw = materialize(|f| metaplectic_apply(&s, f), g).unwrap();

    let band = kn_kernel(&Symbol::from_fn(move |_, xi| Complex64::new(theta(q, xi[0]), 0.0)), g).unwrap();
    let mut xw = Array2::from_elem((n, n), Complex64::ZERO);
    for j in 0..n {
        xw[(j, j)] = Complex64::new(chi(half, g.coord(j)), 0.0);
    }
    let xw = OperatorMatrix::new(g, xw).unwrap();

    let kt = xw.compose(&band).unwrap().compose(&raw).unwrap().compose(&band).unwrap().compose(&xw).unwrap();
    let k_op = kernel_from_operator(&kt).unwrap();
    let diag = graph_concentration(&k_op, &s).unwrap();
    let wrong = graph_concentration(&k_op, &free_particle_flow(1, 1.0)).unwrap();
    println!("hit {:.4} (sig {}), wrong {:.4}", diag.hit_rate, diag.significant_columns, wrong.hit_rate);

    // direct kernel with the matching effective symbol
    let phase = phase_from_symplectic(&s).unwrap();
    let phase2 = phase.clone();
    let sym = Symbol::from_fn(move |x, eta| {
        let gx = phase2.grad_x(x, eta)[0];
        let ge = phase2.grad_eta(x, eta)[0];
        Complex64::new(theta(q, eta[0]) * theta(q, gx) * chi(half, x[0]) * chi(half, ge), 0.0)
    });
    let fio = TypeIFio::new(phase, sym, true);
    let k_dir = type1_kernel_direct(&fio, g).unwrap();
    for mask in [1e-2, 1e-3, 1e-6] {
        println!("mask {mask:.0e}: masked rel {:.3e}", masked_relative_l2(&k_dir, &k_op, mask));
    }
    // also compare direct without windows vs op with windows, to see scale
    let fio_plain = TypeIFio::metaplectic(&s).unwrap();
    let k_plain = type1_kernel_direct(&fio_plain, g).unwrap();
    let dplain = graph_concentration(&k_plain, &s).unwrap();
    println!("plain direct hit {:.4} (sig {})", dplain.hit_rate, dplain.significant_columns);
}
