use ndarray::Array2;
use num_complex::Complex64;
use phasespace::fio::metaplectic_apply;
use phasespace::grid::GridSpec;
use phasespace::quantize::{kn_kernel, materialize, OperatorMatrix, Symbol};
use phasespace::symplectic::{free_particle_flow, harmonic_flow};
use phasespace::wigner_kernel::{graph_concentration, kernel_from_operator};
use std::f64::consts::PI;

fn window(edge: f64, plateau: f64, v: f64, p: i32) -> f64 {
    let a = v.abs();
    let inner = plateau * edge;
    if a <= inner { 1.0 } else if a >= edge { 0.0 }
    else { (0.5 * PI * (a - inner) / (edge - inner)).cos().powi(p) }
}

fn main() {
    let n = 32usize;
    let g = GridSpec::new(1, n, 1.0 / (n as f64).sqrt()).unwrap();
    let q = 0.25 / g.delta();
    let half = 0.5 * g.extent();
    let t = PI / 3.0;
    let s = harmonic_flow(1, t);
    let raw = materialize(|f| metaplectic_apply(&s, f), g).unwrap();

    for (bp, xp, pw) in [
        (0.65f64, -1.0f64, 2),
        (0.4, -1.0, 2),
        (0.4, 0.5, 2),
        (0.3, 0.4, 2),
        (0.3, 0.4, 3),
        (0.2, 0.3, 2),
        (0.5, 0.6, 2),
        (0.4, 0.5, 3),
        (0.0, 0.0, 2),
    ] {
        let band = kn_kernel(
            &Symbol::from_fn(move |_, xi| Complex64::new(window(q, bp, xi[0], pw), 0.0)),
            g,
        )
        .unwrap();
        let mut kt = band.compose(&raw).unwrap().compose(&band).unwrap();
        if xp >= 0.0 {
            let mut xw = Array2::from_elem((n, n), Complex64::ZERO);
            for j in 0..n {
                xw[(j, j)] = Complex64::new(window(half, xp, g.coord(j), pw), 0.0);
            }
            let xw = OperatorMatrix::new(g, xw).unwrap();
            kt = xw.compose(&kt).unwrap().compose(&xw).unwrap();
        }
        let k = kernel_from_operator(&kt).unwrap();
        let d = graph_concentration(&k, &s).unwrap();
        let w = graph_concentration(&k, &free_particle_flow(1, 1.0)).unwrap();
        println!(
            "band plateau {bp} / spatial {xp} / cos^{pw}: hit {:.4} (sig {}), wrong {:.4}",
            d.hit_rate, d.significant_columns, w.hit_rate
        );
    }
}
