//! Escape-rate rasters of the parameter plane: per-pixel smoothed escape
//! values for the forward and backward orbits, written as deterministic
//! PPM (bit-exact, fixed-length header) or PNG.

use crate::exact::scalar::{rat_from_i64, rat_to_f64};
use crate::henon::{HenonFamily, InitialPoint};
use crate::localgreen::{filtration_consts_with, Place};
use crate::{Error, Rat, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::io::Write;
use std::path::Path;

/// A rectangular window of the complex parameter plane with a pixel grid.
/// Pixel `(row, col)` maps to
/// `center + ((col - W/2) * 2*half_width/W, (H/2 - row) * 2*half_height/H)`,
/// so the exact center is a grid point for even resolutions.
#[derive(Clone, Copy, Debug)]
pub struct Window {
    pub center: Complex64,
    pub half_width: f64,
    pub half_height: f64,
    pub width: u32,
    pub height: u32,
}

impl Window {
    pub fn square(center: Complex64, radius: f64, res: u32) -> Result<Window> {
        if radius <= 0.0 || res == 0 {
            return Err(Error::Invalid("window extents must be positive".into()));
        }
        Ok(Window {
            center,
            half_width: radius,
            half_height: radius,
            width: res,
            height: res,
        })
    }

    pub fn pixel_to_t(&self, row: u32, col: u32) -> Complex64 {
        let sx = 2.0 * self.half_width / self.width as f64;
        let sy = 2.0 * self.half_height / self.height as f64;
        Complex64::new(
            self.center.re + (col as f64 - self.width as f64 / 2.0) * sx,
            self.center.im + (self.height as f64 / 2.0 - row as f64) * sy,
        )
    }
}

/// Per-pixel escape data. `value` is the smoothed rate
/// `(1/d^n) log ||orbit||` at the first crossing of the escape radius
/// (the larger of the two orbit directions), and zero exactly when both
/// directions stayed below the radius through the budget.
#[derive(Clone, Debug)]
pub struct EscapeGrid {
    pub width: u32,
    pub height: u32,
    pub values: Vec<f64>,
    pub escaped_at: Vec<Option<u16>>,
}

impl EscapeGrid {
    pub fn value(&self, row: u32, col: u32) -> f64 {
        self.values[(row * self.width + col) as usize]
    }

    pub fn bounded(&self, row: u32, col: u32) -> bool {
        self.escaped_at[(row * self.width + col) as usize].is_none()
    }
}

/// Escape radius for a window: four times the larger of the bounded-region
/// escape threshold of the family and the unbounded-region domination scale
/// `reach^(m+1)`, where `reach` bounds `|t|` over the window. Crossing it
/// flags a pixel as escaping for shading purposes.
pub fn default_escape_radius(
    family: &HenonFamily,
    point: &InitialPoint,
    window: &Window,
) -> Result<f64> {
    let reach = (window.center.norm() + window.half_width.hypot(window.half_height)).max(1.0);
    let mut data = family.coeff_polys().to_vec();
    data.push(point.a.clone());
    data.push(point.b.clone());
    let consts = filtration_consts_with(
        family,
        &data,
        &Place::Arch,
        &rat_from_i64(2),
        &Rat::from_float(1.0).unwrap(),
        &rat_from_i64(0),
    )?;
    let m1 = (consts.m + 1) as i32;
    Ok(consts.escape_threshold_f64().max(reach.powi(m1)) * 4.0)
}

/// Renders the escape grid. Pixels are independent; rows are processed in
/// parallel and reassembled in order, so the output is identical for any
/// thread count.
pub fn escape_map(
    family: &HenonFamily,
    point: &InitialPoint,
    window: &Window,
    n_max: u32,
    escape_radius: f64,
) -> Result<EscapeGrid> {
    let d = family.degree() as f64;
    let delta = rat_to_f64(family.delta());
    let cpolys: Vec<Vec<f64>> = family
        .coeff_polys()
        .iter()
        .map(|p| p.coeffs().iter().map(rat_to_f64).collect())
        .collect();
    let apoly: Vec<f64> = point.a.coeffs().iter().map(rat_to_f64).collect();
    let bpoly: Vec<f64> = point.b.coeffs().iter().map(rat_to_f64).collect();
    let horner = |cs: &[f64], t: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in cs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    };
    let ln_r = escape_radius.ln();

    let rows: Vec<Vec<(f64, Option<u16>)>> = (0..window.height)
        .into_par_iter()
        .map(|row| {
            let mut out = Vec::with_capacity(window.width as usize);
            for col in 0..window.width {
                let t = window.pixel_to_t(row, col);
                let c_at: Vec<Complex64> = cpolys.iter().map(|cs| horner(cs, t)).collect();
                let start = (horner(&apoly, t), horner(&bpoly, t));
                let f_eval = |x: Complex64| -> Complex64 {
                    let mut acc = Complex64::new(1.0, 0.0);
                    for c in &c_at {
                        acc = acc * x + c;
                    }
                    acc
                };
                let run = |forward: bool| -> Option<(u16, f64)> {
                    let (mut x, mut y) = start;
                    for n in 1..=n_max {
                        if forward {
                            let nx = delta * y + f_eval(x);
                            y = x;
                            x = nx;
                        } else {
                            let ny = (x - f_eval(y)) / delta;
                            x = y;
                            y = ny;
                        }
                        let norm = x.norm().max(y.norm());
                        if norm > escape_radius {
                            return Some((n as u16, norm.ln() / d.powi(n as i32)));
                        }
                        if !norm.is_finite() {
                            return Some((n as u16, ln_r / d.powi(n as i32)));
                        }
                    }
                    None
                };
                let fwd = run(true);
                let bwd = run(false);
                let cell = match (fwd, bwd) {
                    (None, None) => (0.0, None),
                    (f, b) => {
                        let gf = f.map_or(0.0, |(_, g)| g);
                        let gb = b.map_or(0.0, |(_, g)| g);
                        let at = match (f, b) {
                            (Some((nf, _)), Some((nb, _))) => nf.min(nb),
                            (Some((nf, _)), None) => nf,
                            (None, Some((nb, _))) => nb,
                            (None, None) => unreachable!(),
                        };
                        (gf.max(gb), Some(at))
                    }
                };
                out.push(cell);
            }
            out
        })
        .collect();

    let mut values = Vec::with_capacity((window.width * window.height) as usize);
    let mut escaped_at = Vec::with_capacity(values.capacity());
    for row in rows {
        for (v, e) in row {
            values.push(v);
            escaped_at.push(e);
        }
    }
    Ok(EscapeGrid {
        width: window.width,
        height: window.height,
        values,
        escaped_at,
    })
}

/// Palette: bounded pixels are black; escaped pixels get the monotone
/// grayscale `round(255 * (1 - exp(-value))^(1/2.2))` (gamma 2.2), so faster
/// escape is brighter.
pub fn gray_pixels(grid: &EscapeGrid) -> Vec<u8> {
    grid.values
        .iter()
        .zip(&grid.escaped_at)
        .map(|(&v, esc)| match esc {
            None => 0u8,
            Some(_) => {
                let u = 1.0 - (-v).exp();
                (255.0 * u.powf(1.0 / 2.2)).round().clamp(0.0, 255.0) as u8
            }
        })
        .collect()
}

/// Binary PPM with a fixed 17-byte header (dimensions are space-padded to
/// four digits), followed by three identical gray channels per pixel.
pub fn ppm_bytes(grid: &EscapeGrid) -> Result<Vec<u8>> {
    if grid.width > 9999 || grid.height > 9999 {
        return Err(Error::Invalid("resolution above 9999 pixels".into()));
    }
    let gray = gray_pixels(grid);
    let mut out = Vec::with_capacity(17 + gray.len() * 3);
    write!(out, "P6\n{:>4} {:>4}\n255\n", grid.width, grid.height)?;
    debug_assert_eq!(out.len(), 17);
    for g in gray {
        out.extend_from_slice(&[g, g, g]);
    }
    Ok(out)
}

pub fn write_ppm(grid: &EscapeGrid, path: &Path) -> Result<()> {
    std::fs::write(path, ppm_bytes(grid)?)?;
    Ok(())
}

/// PNG re-encoding of the same gray values (lossless; decodes to the same
/// pixel array as the PPM).
pub fn write_png(grid: &EscapeGrid, path: &Path) -> Result<()> {
    let gray = gray_pixels(grid);
    let img = image::GrayImage::from_raw(grid.width, grid.height, gray)
        .ok_or_else(|| Error::Invalid("pixel buffer size mismatch".into()))?;
    img.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| Error::Invalid(format!("png encoding failed: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat_from_i64 as q;
    use sha2::Digest;

    fn quad() -> HenonFamily {
        HenonFamily::quadratic()
    }

    fn origin() -> InitialPoint {
        InitialPoint::constant(q(0), q(0))
    }

    fn small_window(center: Complex64, radius: f64, res: u32) -> Window {
        Window::square(center, radius, res).unwrap()
    }

    #[test]
    fn header_is_fixed_length() {
        let grid = EscapeGrid {
            width: 2,
            height: 2,
            values: vec![0.0; 4],
            escaped_at: vec![None; 4],
        };
        let bytes = ppm_bytes(&grid).unwrap();
        assert_eq!(bytes.len(), 17 + 12);
        assert!(bytes.starts_with(b"P6\n"));
        assert!(bytes[17..].iter().all(|&b| b == 0));
    }

    #[test]
    fn center_pixels_bounded() {
        let fam = quad();
        let w = small_window(Complex64::new(0.0, 0.0), 1.0, 64);
        let r = default_escape_radius(&fam, &origin(), &w).unwrap();
        let grid = escape_map(&fam, &origin(), &w, 128, r).unwrap();
        assert!(grid.bounded(32, 32), "fixed point at the center");

        let p2 = InitialPoint::constant(q(-1), q(1));
        let w = small_window(Complex64::new(-1.0, 0.0), 1.0, 64);
        let r = default_escape_radius(&fam, &p2, &w).unwrap();
        let grid = escape_map(&fam, &p2, &w, 128, r).unwrap();
        assert!(grid.bounded(32, 32), "2-cycle at the center");
    }

    #[test]
    fn far_window_escapes_fast() {
        let fam = quad();
        let w = small_window(Complex64::new(1e6, 0.0), 1.0, 16);
        let r = default_escape_radius(&fam, &origin(), &w).unwrap();
        let grid = escape_map(&fam, &origin(), &w, 64, r).unwrap();
        for e in &grid.escaped_at {
            let n = e.expect("all pixels escape");
            assert!(n <= 3);
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let fam = quad();
        let w = small_window(Complex64::new(0.0, 0.0), 1.0, 48);
        let r = default_escape_radius(&fam, &origin(), &w).unwrap();
        let render = || -> Vec<u8> {
            ppm_bytes(&escape_map(&fam, &origin(), &w, 96, r).unwrap()).unwrap()
        };
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let b1 = pool1.install(render);
        let b4 = pool4.install(render);
        assert_eq!(b1, b4);
        let h1 = sha2::Sha256::digest(&b1);
        let h4 = sha2::Sha256::digest(&b4);
        assert_eq!(h1, h4);
    }

    #[test]
    fn conjugation_symmetry() {
        // Real data: rows above and below the real axis mirror each other.
        let fam = quad();
        let w = small_window(Complex64::new(0.25, 0.0), 1.0, 40);
        let r = default_escape_radius(&fam, &origin(), &w).unwrap();
        let grid = escape_map(&fam, &origin(), &w, 96, r).unwrap();
        for row in 1..w.height {
            let mirror = w.height - row;
            if mirror >= w.height {
                continue;
            }
            for col in 0..w.width {
                assert_eq!(grid.value(row, col), grid.value(mirror, col));
                assert_eq!(grid.bounded(row, col), grid.bounded(mirror, col));
            }
        }
    }

    #[test]
    fn zoom_coherence_on_shared_points() {
        // Points of the wide grid that also lie on the zoom grid classify
        // identically at equal budgets.
        let fam = quad();
        let wide = small_window(Complex64::new(0.0, 0.0), 1.0, 64);
        let zoom = small_window(Complex64::new(0.0, 0.0), 0.01, 64);
        let r = default_escape_radius(&fam, &origin(), &wide).unwrap();
        let gw = escape_map(&fam, &origin(), &wide, 128, r).unwrap();
        let gz = escape_map(&fam, &origin(), &zoom, 128, r).unwrap();
        // The exact center is a grid point of both.
        assert_eq!(gw.bounded(32, 32), gz.bounded(32, 32));
        // Any zoom pixel whose t equals a wide pixel's t must agree; with
        // these resolutions that is exactly the center row/col overlap.
        let tw = wide.pixel_to_t(32, 32);
        let tz = zoom.pixel_to_t(32, 32);
        assert_eq!(tw, tz);
    }

    #[test]
    fn ppm_and_png_decode_identically() {
        let fam = quad();
        let w = small_window(Complex64::new(0.0, 0.0), 1.0, 24);
        let r = default_escape_radius(&fam, &origin(), &w).unwrap();
        let grid = escape_map(&fam, &origin(), &w, 64, r).unwrap();
        let dir = std::env::temp_dir().join(format!("render-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let ppm = dir.join("a.ppm");
        let png = dir.join("a.png");
        write_ppm(&grid, &ppm).unwrap();
        write_png(&grid, &png).unwrap();
        let ppm_img = image::open(&ppm).unwrap().to_luma8();
        let png_img = image::open(&png).unwrap().to_luma8();
        assert_eq!(ppm_img.as_raw(), png_img.as_raw());
        std::fs::remove_dir_all(&dir).ok();
    }
}
