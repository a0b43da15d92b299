use ndarray::Array2;
use num_complex::Complex64;
use phasespace::fio::metaplectic_apply;
use phasespace::grid::GridSpec;
use phasespace::quantize::{kn_kernel, materialize, OperatorMatrix, Symbol};
use phasespace::symplectic::harmonic_flow;
use phasespace::wigner_kernel::{graph_concentration, kernel_from_operator};
use std::f64::consts::PI;

fn taper_matrix(g: GridSpec, plateau: f64, power: i32) -> OperatorMatrix {
    let q = 0.25 / g.delta();
    let sym = Symbol::from_fn(move |_, xi| {
        let a = xi[0].abs();
        let inner = plateau * q;
        let w = if a <= inner {
            1.0
        } else if a >= q {
            0.0
        } else {
            let s = (a - inner) / (q - inner);
            (0.5 * PI * s).cos().powi(power)
        };
        Complex64::new(w, 0.0)
    });
    kn_kernel(&sym, g).unwrap()
}

fn spatial_window(g: GridSpec, plateau: f64, power: i32) -> OperatorMatrix {
    let n = g.samples_per_axis();
    let half = 0.5 * g.extent();
    let mut m = Array2::from_elem((n, n), Complex64::ZERO);
    for j in 0..n {
        let a = g.coord(j).abs();
        let inner = plateau * half;
        let w = if a <= inner {
            1.0
        } else if a >= half {
            0.0
        } else {
            let s = (a - inner) / (half - inner);
            (0.5 * PI * s).cos().powi(power)
        };
        m[(j, j)] = Complex64::new(w, 0.0);
    }
    OperatorMatrix::new(g, m).unwrap()
}

fn main() {
    let n = 32usize;
    let g = GridSpec::new(1, n, 1.0 / (n as f64).sqrt()).unwrap();
    let t = PI / 3.0;
    let s = harmonic_flow(1, t);
    let raw = materialize(|f| metaplectic_apply(&s, f), g).unwrap();
    let sinv = s.inverse();
    let delta = g.delta();
    let deta = g.wigner_freq_spacing();

    for (plateau, power, use_x, xplat) in [
        (0.65, 2, false, 0.0),
        (0.55, 2, false, 0.0),
        (0.55, 4, false, 0.0),
        (0.65, 2, true, 0.7),
        (0.55, 2, true, 0.6),
        (0.5, 4, true, 0.6),
        (0.6, 4, true, 0.65),
    ] {
        let p = taper_matrix(g, plateau, power);
        let mut kt = p.compose(&raw).unwrap().compose(&p).unwrap();
        if use_x {
            let x = spatial_window(g, xplat, power);
            kt = x.compose(&kt).unwrap().compose(&x).unwrap();
        }
        let k = kernel_from_operator(&kt).unwrap();
        let gmax = k.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        // junk level: max column-max over columns whose graph point is off-grid
        let mut junk: f64 = 0.0;
        for i in 0..n {
            for kk in 0..n {
                let z = [g.coord(i), g.wigner_freq_coord(kk)];
                let wg = sinv.apply(&z);
                let ly = wg[0] / delta + n as f64 / 2.0;
                let le = wg[1] / deta + n as f64 / 2.0;
                let on_grid = ly >= -0.5 && ly <= n as f64 - 0.5 && le >= -0.5 && le <= n as f64 - 0.5;
                if !on_grid {
                    let row = i * n + kk;
                    let cm = (0..n * n).map(|w| k.values[(row, w)].norm()).fold(0.0, f64::max);
                    junk = junk.max(cm / gmax);
                }
            }
        }
        let d = graph_concentration(&k, &s).unwrap();
        println!(
            "plateau {plateau} pow {power} spatial {use_x}/{xplat}: junk {junk:.2e}, hit {:.4}, sig {}",
            d.hit_rate, d.significant_columns
        );
    }
}
