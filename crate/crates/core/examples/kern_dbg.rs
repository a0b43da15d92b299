use phasespace::fio::metaplectic_apply;
use phasespace::grid::GridSpec;
use phasespace::quantize::{halfband_sandwich, materialize};
use phasespace::symplectic::harmonic_flow;
use phasespace::wigner_kernel::{graph_concentration, kernel_from_operator};

fn main() {
    let n = 32usize;
    let g = GridSpec::new(1, n, 1.0 / (n as f64).sqrt()).unwrap();
    let t = std::f64::consts::PI / 3.0;
    let s = harmonic_flow(1, t);
    let kt = halfband_sandwich(&materialize(|f| metaplectic_apply(&s, f), g).unwrap()).unwrap();
    let k = kernel_from_operator(&kt).unwrap();
    let gmax = k.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    println!("global max {gmax}");
    let sinv = s.inverse();
    let delta = g.delta();
    let deta = g.wigner_freq_spacing();
    let mut sig = 0; let mut hit = 0; let mut shown = 0;
    for i in 0..n { for kk in 0..n {
        let z = [g.coord(i), g.wigner_freq_coord(kk)];
        let wg = sinv.apply(&z);
        let ly = wg[0]/delta + n as f64/2.0;
        let le = wg[1]/deta + n as f64/2.0;
        let row = i*n + kk;
        let mut best = (0usize, 0usize); let mut bv = -1.0;
        for l in 0..n { for j in 0..n {
            let m = k.values[(row, l*n+j)].norm();
            if m > bv { bv = m; best = (l,j); }
        }}
        if bv >= 1e-6*gmax {
            sig += 1;
            let dy = (best.0 as f64 - ly).abs(); let de = (best.1 as f64 - le).abs();
            let ok = dy.max(de) <= 1.0+1e-9;
            if ok { hit += 1; }
            else if shown < 10 {
                shown += 1;
                println!("miss z=({i},{kk}) colmax {:.3e} rel {:.1e} S^-1z idx=({:.1},{:.1}) argmax=({},{})",
                    bv, bv/gmax, ly, le, best.0, best.1);
            }
        }
    }}
    println!("significant {sig} hits {hit} rate {}", hit as f64/sig as f64);
    let d = graph_concentration(&k, &s).unwrap();
    println!("diag hit_rate {} decay {}", d.hit_rate, d.decay_exponent);
}
