use num_complex::Complex64;
use phasespace::fio::metaplectic_apply;
use phasespace::grid::{inner, make_gaussian, GridSpec};
use phasespace::symplectic::harmonic_flow;

fn main() {
    let g = GridSpec::new(1, 256, 1.0 / 16.0).unwrap();
    let f = make_gaussian(g, &[0.4], &[0.2], 1.3).unwrap();
    for t in [0.8f64, 2.0] {
        let one = metaplectic_apply(&harmonic_flow(1, t), &f).unwrap();
        let half = metaplectic_apply(&harmonic_flow(1, t / 2.0), &f).unwrap();
        let two = metaplectic_apply(&harmonic_flow(1, t / 2.0), &half).unwrap();
        let ip = inner(&one, &two).unwrap();
        println!("t={t}: |<one,two>| = {}  norms {} {}", ip.norm(), one.norm_l2(), two.norm_l2());
        // where do they differ most?
        let phase = ip / ip.norm();
        let mut worst = (0usize, 0.0f64);
        for j in 0..256 {
            let d = (one.values[j] - two.values[j] * phase).norm();
            if d > worst.1 { worst = (j, d); }
        }
        println!("  max dev {} at j={} (x={}), |one|={} |two|={}",
                 worst.1, worst.0, g.coord(worst.0), one.values[worst.0].norm(), two.values[worst.0].norm());
        let c: Complex64 = one.values[128] / two.values[128];
        println!("  центр ratio = {:?} (|.|={})", c, c.norm());
    }
}
