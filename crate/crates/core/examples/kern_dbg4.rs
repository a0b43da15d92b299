use ndarray::Array2;
use num_complex::Complex64;
use phasespace::fio::metaplectic_apply;
use phasespace::grid::GridSpec;
use phasespace::quantize::{halfband_sandwich, kn_kernel, materialize, OperatorMatrix, Symbol};
use phasespace::symplectic::harmonic_flow;
use phasespace::wigner_kernel::kernel_from_operator;
use std::f64::consts::PI;

fn hann(edge: f64, v: f64, p: i32) -> f64 {
    let a = v.abs();
    if a >= edge { 0.0 } else { (0.5 * PI * a / edge).cos().powi(p) }
}

fn main() {
    let n = 32usize;
    let g = GridSpec::new(1, n, 1.0 / (n as f64).sqrt()).unwrap();
    let q = 0.25 / g.delta();
    let half = 0.5 * g.extent();
    let t = PI / 3.0;
    let s = harmonic_flow(1, t);
    let raw = materialize(|f| metaplectic_apply(&s, f), g).unwrap();

    for mode in ["plateau", "hann", "raw"] {
        let kt = match mode {
            "plateau" => halfband_sandwich(&raw).unwrap(),
            "hann" => {
                let band = kn_kernel(&Symbol::from_fn(move |_, xi| Complex64::new(hann(q, xi[0], 2), 0.0)), g).unwrap();
                let mut xw = Array2::from_elem((n, n), Complex64::ZERO);
                for j in 0..n { xw[(j, j)] = Complex64::new(hann(half, g.coord(j), 2), 0.0); }
                let xw = OperatorMatrix::new(g, xw).unwrap();
                xw.compose(&band).unwrap().compose(&raw).unwrap().compose(&band).unwrap().compose(&xw).unwrap()
            }
            _ => raw.clone(),
        };
        let k = kernel_from_operator(&kt).unwrap();
        let (i, kk) = (19usize, 18usize);
        let row = i * n + kk;
        let mut vals: Vec<(f64, usize, usize)> = Vec::new();
        for l in 0..n { for j in 0..n { vals.push((k.values[(row, l * n + j)].norm(), l, j)); } }
        vals.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        println!("--- {mode}: column z=(19,18), S^-1 z at (18.37, 11.80)");
        for v in vals.iter().take(6) { println!("  |k|={:.4e} at (l={}, j={})", v.0, v.1, v.2); }
    }
}
