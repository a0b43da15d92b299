use ndarray::Array2;
use num_complex::Complex64;
use phasespace::fio::metaplectic_apply;
use phasespace::grid::GridSpec;
use phasespace::quantize::{kn_kernel, materialize, OperatorMatrix, Symbol};
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
    let band = kn_kernel(&Symbol::from_fn(move |_, xi| Complex64::new(hann(q, xi[0], 2), 0.0)), g).unwrap();
    let mut xw = Array2::from_elem((n, n), Complex64::ZERO);
    for j in 0..n { xw[(j, j)] = Complex64::new(hann(half, g.coord(j), 2), 0.0); }
    let xw = OperatorMatrix::new(g, xw).unwrap();
    let kt = xw.compose(&band).unwrap().compose(&raw).unwrap().compose(&band).unwrap().compose(&xw).unwrap();
    let k = kernel_from_operator(&kt).unwrap();
    let gmax = k.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let sinv = s.inverse();
    let delta = g.delta();
    let deta = g.wigner_freq_spacing();
    let mut sig = 0; let mut hit = 0;
    let mut ongrid_miss = 0; let mut offgrid_sig = 0;
    let mut level_hist = [0usize; 7]; // log10 bins of miss levels
    let mut examples = 0;
    let mut worst: Vec<(f64, usize, usize, f64, f64, usize, usize)> = Vec::new();
    for i in 0..n { for kk in 0..n {
        let z = [g.coord(i), g.wigner_freq_coord(kk)];
        let wg = sinv.apply(&z);
        let ly = wg[0] / delta + n as f64 / 2.0;
        let le = wg[1] / deta + n as f64 / 2.0;
        let row = i * n + kk;
        let mut best = (0usize, 0usize); let mut bv = -1.0;
        for l in 0..n { for j in 0..n {
            let m = k.values[(row, l * n + j)].norm();
            if m > bv { bv = m; best = (l, j); }
        }}
        if bv < 1e-6 * gmax { continue; }
        sig += 1;
        let on = ly >= -0.5 && ly <= n as f64 - 0.5 && le >= -0.5 && le <= n as f64 - 0.5;
        if !on { offgrid_sig += 1; }
        let dy = (best.0 as f64 - ly).abs(); let de = (best.1 as f64 - le).abs();
        if dy.max(de) <= 1.0 { hit += 1; }
        else {
            worst.push((bv / gmax, i, kk, ly, le, best.0, best.1));
            if on {
                ongrid_miss += 1;
                if examples < 8 {
                    examples += 1;
                    println!("ON-GRID miss z=({i},{kk}) level {:.1e} S^-1z=({ly:.1},{le:.1}) argmax=({},{}) ridge val {:.1e}",
                        bv/gmax, best.0, best.1,
                        k.values[(row, (ly.round() as usize).min(n-1)*n + (le.round() as usize).min(n-1))].norm()/gmax);
                }
            }
            let lev = (bv / gmax).log10();
            let bin = ((-lev).floor() as usize).min(6);
            level_hist[bin] += 1;
        }
    }}
    println!("sig {sig} hit {hit} rate {:.4}; on-grid misses {ongrid_miss}, off-grid significant {offgrid_sig}", hit as f64 / sig as f64);
    println!("miss level histogram (1e-0..1e-6 decades): {level_hist:?}");
    worst.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    for w in worst.iter().take(10) {
        println!("TOP miss lvl {:.2e} z=({},{}) S^-1z=({:.2},{:.2}) argmax=({},{})", w.0, w.1, w.2, w.3, w.4, w.5, w.6);
    }
}
