// scratch: debug tau generic path
use phasespace::grid::{GridSpec, make_gaussian};
use phasespace::wigner::{cross_wigner, tau_wigner};

fn main() {
    let g = GridSpec::new(1, 256, 1.0/16.0).unwrap();
    let f = make_gaussian(g, &[0.3], &[0.2], 1.2).unwrap();
    let w = tau_wigner(&f, &f, 0.5 + 1e-9).unwrap();
    let wr = cross_wigner(&f, &f).unwrap();
    // compare a few central cells
    for (j,k) in [(128usize,128usize),(133,131),(120,140)] {
        println!("({j},{k}): generic {:?}  ref {:?}  ratio {:?}",
            w.values[(j,k)], wr.values[(j,k)], w.values[(j,k)]/wr.values[(j,k)]);
    }
}
