use phasespace::fio::metaplectic_apply;
use phasespace::grid::GridSpec;
use phasespace::quantize::{halfband_sandwich, materialize};
use phasespace::symplectic::free_particle_flow;
use phasespace::wigner_kernel::kernel_from_operator;

fn main() {
    let n = 32usize;
    let g = GridSpec::new(1, n, 1.0 / (n as f64).sqrt()).unwrap();
    let t = 0.6;
    let s = free_particle_flow(1, t);
    let kt = halfband_sandwich(&materialize(|f| metaplectic_apply(&s, f), g).unwrap()).unwrap();
    let k = kernel_from_operator(&kt).unwrap();
    let delta = g.delta();
    let deta = g.wigner_freq_spacing();
    let gmax = k.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    // inspect central columns: argmax vs both candidate graphs
    let mut agree_inv = 0; let mut agree_fwd = 0; let mut tot = 0;
    for i in (4..28).step_by(3) {
        for kk in (4..28).step_by(3) {
            let x = g.coord(i); let xi = g.wigner_freq_coord(kk);
            let row = i * n + kk;
            let mut best = (0usize, 0usize); let mut bv = -1.0;
            for l in 0..n { for j in 0..n {
                let m = k.values[(row, l * n + j)].norm();
                if m > bv { bv = m; best = (l, j); }
            }}
            if bv < 1e-3 * gmax { continue; }
            tot += 1;
            let y_inv = x - t * xi; // S^-1 z
            let y_fwd = x + t * xi; // S z
            let li = (y_inv / delta + n as f64 / 2.0).round();
            let lf = (y_fwd / delta + n as f64 / 2.0).round();
            let je = (xi / deta + n as f64 / 2.0).round();
            if (best.0 as f64 - li).abs() <= 1.0 && (best.1 as f64 - je).abs() <= 1.0 { agree_inv += 1; }
            if (best.0 as f64 - lf).abs() <= 1.0 && (best.1 as f64 - je).abs() <= 1.0 { agree_fwd += 1; }
        }
    }
    println!("total {tot}, matches S^-1 graph {agree_inv}, matches S graph {agree_fwd}");
    // one column profile
    let (i, kk) = (16usize, 22usize);
    let row = i * n + kk;
    let x = g.coord(i); let xi = g.wigner_freq_coord(kk);
    println!("column z=({x:.3},{xi:.3}): expected y_inv idx {:.2}, eta idx {:.2}",
        (x - t*xi)/delta + 16.0, xi/deta + 16.0);
    let mut vals: Vec<(f64, usize, usize)> = Vec::new();
    for l in 0..n { for j in 0..n { vals.push((k.values[(row, l*n+j)].norm(), l, j)); } }
    vals.sort_by(|a,b| b.0.partial_cmp(&a.0).unwrap());
    for v in vals.iter().take(5) { println!("  |k| = {:.4e} at (l={}, j={})", v.0, v.1, v.2); }
}
