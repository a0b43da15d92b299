use phasespace::fio::metaplectic_apply;
use phasespace::grid::{make_gaussian, GridSpec};
use phasespace::symplectic::{free_particle_flow, harmonic_flow, standard_j, random_symplectic};
use rand::SeedableRng;

fn main() {
    let g = GridSpec::new(1, 256, 1.0 / 16.0).unwrap();
    let f = make_gaussian(g, &[0.3], &[0.2], 1.0).unwrap();
    for (name, s) in [
        ("harm0.9", harmonic_flow(1, 0.9)),
        ("harm pi/2", harmonic_flow(1, std::f64::consts::FRAC_PI_2)),
        ("free1.5", free_particle_flow(1, 1.5)),
        ("J", standard_j(1)),
    ] {
        let out = metaplectic_apply(&s, &f).unwrap();
        println!("{name}: norm = {}", out.norm_l2());
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
    for i in 0..8 {
        let s = random_symplectic(1, &mut rng, 3);
        let out = metaplectic_apply(&s, &f).unwrap();
        println!("random {i}: det_a = {:+.3}, norm = {}", s.det_a(), out.norm_l2());
    }
}
