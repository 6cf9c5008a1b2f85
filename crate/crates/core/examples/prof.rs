use henon_heights::henon::*;
use henon_heights::render::*;
use henon_heights::exact::scalar::{parse_rat, rat_from_i64 as q};
use num_complex::Complex64;
use sha2::{Digest, Sha256};

fn main() {
    let fam = HenonFamily::quadratic();
    let figs = [
        ("fig1", Complex64::new(0.0, 0.0), InitialPoint::constant(q(0), q(0))),
        ("fig2", Complex64::new(0.1, 0.0), InitialPoint::constant(q(0), parse_rat("1/2").unwrap())),
        ("fig3", Complex64::new(-1.0, 0.0), InitialPoint::constant(q(-1), q(1))),
    ];
    for (name, center, pt) in figs {
        let t0 = std::time::Instant::now();
        let w = Window::square(center, 1.0, 512).unwrap();
        let r = default_escape_radius(&fam, &pt, &w).unwrap();
        let grid = escape_map(&fam, &pt, &w, 256, r).unwrap();
        let bytes = ppm_bytes(&grid).unwrap();
        let hash = hex::encode(Sha256::digest(&bytes));
        let bounded = grid.escaped_at.iter().filter(|e| e.is_none()).count();
        println!("{name}: hash={hash} bounded={} center_bounded={} time={:?}", bounded, grid.bounded(256, 256), t0.elapsed());
    }
}
