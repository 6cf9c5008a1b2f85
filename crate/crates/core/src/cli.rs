//! Command-line front door: JSON job orchestration over the library.
//!
//! Every command prints a JSON document (sorted keys, hence byte-stable) to
//! stdout and optionally to `--out`. Exit codes: 0 success, 2 invalid
//! input/schema, 3 budget exhausted or unresolved, 4 theorem inapplicable,
//! 1 anything else.

use crate::cache::orbit_polys_cached;
use crate::exact::scalar::{parse_rat, rat_to_string};
use crate::ffheight::{cert_to_json, degree_profile, ff_height, stabilize, Stabilization};
use crate::globalheight::{height_to_json, parameter_height, parameter_height_algebraic};
use crate::henon::{family_from_json, family_to_json, poly_to_json, HenonFamily, InitialPoint};
use crate::localgreen::{filtration_consts, green_at_param, Place};
use crate::periodic::{
    finite_field_sigma, resultant_in_b, sigma_empty_certificate, sigma_n, witnesses,
};
use crate::render::{default_escape_radius, escape_map, write_png, write_ppm, Window};
use crate::{Error, QPoly, Rat, Result};
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "henon",
    version,
    about = "Exact heights, Green functions and periodic-parameter certificates for Henon families"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Family JSON file, or the builtin alias "quadratic"
    /// ((x, y) -> (y + x^2 + t, x)).
    #[arg(long, global = true, default_value = "quadratic")]
    family: String,

    /// Separate point file {"a": poly, "b": poly} overriding the family's.
    #[arg(long, global = true)]
    point: Option<PathBuf>,

    /// Constant first coordinate a (rational), overriding files.
    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<String>,

    /// Constant second coordinate b (rational), overriding files.
    #[arg(long, global = true, allow_hyphen_values = true)]
    b: Option<String>,

    /// Skip the orbit-table disk cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Also write the JSON (or image) output here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact orbit polynomial tables and the degree profile.
    Orbit {
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Also write the degree profile as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Degree stabilization and the exact function-field height.
    Ffheight {
        #[arg(long, default_value_t = 12)]
        budget: usize,
    },
    /// Local Green values at one place.
    Green {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// "inf" or a prime.
        #[arg(long, default_value = "inf")]
        place: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Canonical height and parameter height at a parameter value.
    Height {
        /// Rational parameter value.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Algebraic parameter: comma-separated minimal polynomial
        /// coefficients by ascending degree.
        #[arg(long, allow_hyphen_values = true)]
        t_minpoly: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Period-n parameter polynomial with factorization and rational roots.
    Sigma {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Certified periodic-parameter witnesses for a list of odd primes.
    Witnesses {
        #[arg(long, default_value = "3,5,7")]
        primes: String,
    },
    /// Resultant-in-b monicity laboratory (quadratic family, point (0, b)).
    Resultant {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Also write the coefficients as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Check the emptiness certificate for this rational b instead.
        #[arg(long, allow_hyphen_values = true)]
        empty_for: Option<String>,
    },
    /// Exhaustive periodicity over a finite field.
    Ffcheck {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Coefficients of a over the field generator, ascending.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a_coeffs: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        b_coeffs: String,
    },
    /// Escape-rate raster of the parameter plane.
    Render {
        /// Window center, e.g. "-1+0i".
        #[arg(long, default_value = "0+0i", allow_hyphen_values = true)]
        center: String,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 512)]
        res: u32,
        #[arg(long, default_value_t = 256)]
        n_max: u32,
        /// Escape radius override (default: filtration threshold x 4).
        #[arg(long)]
        escape_radius: Option<f64>,
        /// Also encode a PNG next to the PPM.
        #[arg(long)]
        png: bool,
    },
}

fn load_family(cli: &Cli) -> Result<(HenonFamily, InitialPoint)> {
    let (mut family, mut point) = if cli.family == "quadratic" {
        (
            HenonFamily::quadratic(),
            InitialPoint::constant(Rat::from_integer(0.into()), Rat::from_integer(0.into())),
        )
    } else {
        let text = std::fs::read_to_string(&cli.family)?;
        let v: Value = serde_json::from_str(&text)?;
        family_from_json(&v)?
    };
    if let Some(path) = &cli.point {
        let text = std::fs::read_to_string(path)?;
        let v: Value = serde_json::from_str(&text)?;
        let a = crate::henon::poly_from_json(
            v.get("a")
                .ok_or_else(|| Error::Invalid("point JSON needs \"a\"".into()))?,
        )?;
        let b = crate::henon::poly_from_json(
            v.get("b")
                .ok_or_else(|| Error::Invalid("point JSON needs \"b\"".into()))?,
        )?;
        point = InitialPoint { a, b };
    }
    if let Some(a) = &cli.a {
        point.a = QPoly::constant(parse_rat(a)?);
    }
    if let Some(b) = &cli.b {
        point.b = QPoly::constant(parse_rat(b)?);
    }
    let _ = &mut family;
    Ok((family, point))
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::Invalid(format!("bad complex number {s:?}"));
    if let Some(body) = s.strip_suffix('i') {
        // Split at the sign of the imaginary part (not the leading sign).
        for (idx, ch) in body.char_indices().rev() {
            if (ch == '+' || ch == '-') && idx > 0 {
                let prev = body.as_bytes()[idx - 1];
                if prev == b'e' || prev == b'E' {
                    continue;
                }
                let re: f64 = body[..idx].parse().map_err(|_| err())?;
                let im_str = &body[idx..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().map_err(|_| err())?
                };
                return Ok(Complex64::new(re, im));
            }
        }
        let im: f64 = if body.is_empty() {
            1.0
        } else {
            body.parse().map_err(|_| err())?
        };
        return Ok(Complex64::new(0.0, im));
    }
    Ok(Complex64::new(s.parse().map_err(|_| err())?, 0.0))
}

fn parse_coeff_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<i64>()
                .map_err(|_| Error::Invalid(format!("bad integer {tok:?}")))
        })
        .collect()
}

fn provenance() -> Value {
    json!({ "tool": "henon-heights", "version": env!("CARGO_PKG_VERSION") })
}

/// Runs a parsed command line; the binary maps errors to exit codes.
pub fn run(cli: Cli) -> Result<()> {
    let (family, point) = load_family(&cli)?;
    let use_cache = !cli.no_cache;
    let output = match &cli.command {
        Command::Orbit { n, csv } => {
            let table = orbit_polys_cached(&family, &point, *n, use_cache)?;
            let prof = degree_profile(&table);
            if let Some(path) = csv {
                let mut text = String::from("n,deg_fwd,deg_bwd,elln\n");
                for k in 0..=*n {
                    text.push_str(&format!(
                        "{},{},{},{}\n",
                        k, prof.deg_fwd[k], prof.deg_bwd[k], prof.elln[k]
                    ));
                }
                std::fs::write(path, text)?;
            }
            json!({
                "provenance": provenance(),
                "family": family_to_json(&family, &point),
                "n": n,
                "fwd": table.fwd_all().iter().map(|p| poly_to_json(p, "t")).collect::<Vec<_>>(),
                "bwd": table.bwd_all().iter().map(|p| poly_to_json(p, "t")).collect::<Vec<_>>(),
                "deg_fwd": prof.deg_fwd,
                "deg_bwd": prof.deg_bwd,
                "elln": prof.elln,
            })
        }
        Command::Ffheight { budget } => {
            let stab = stabilize(&family, &point, *budget)?;
            let ell = ff_height(&stab)?;
            let cert = match &stab {
                Stabilization::Certified(c) => cert_to_json(c),
                Stabilization::Undetermined { .. } => unreachable!(),
            };
            json!({
                "provenance": provenance(),
                "family": family_to_json(&family, &point),
                "ell": rat_to_string(&ell),
                "cert": cert,
                "exact": true,
            })
        }
        Command::Green { t, place, tol } => {
            let t = parse_rat(t)?;
            let place = Place::parse(place)?;
            let triple = green_at_param(&family, &point, &t, &place, *tol)?;
            let consts = filtration_consts(&family, &point, &place, &parse_rat("2")?)?;
            json!({
                "provenance": provenance(),
                "t": rat_to_string(&t),
                "place": place.to_string(),
                "tol": tol,
                "plus": triple.plus.to_json(),
                "minus": triple.minus.to_json(),
                "green": triple.green.to_json(),
                "constants": consts.summary_json(),
            })
        }
        Command::Height { t, t_minpoly, tol } => match (t, t_minpoly) {
            (Some(t), None) => {
                let t = parse_rat(t)?;
                let h = parameter_height(&family, &point, &t, *tol)?;
                let mut v = height_to_json(&rat_to_string(&t), &h);
                v["provenance"] = provenance();
                v
            }
            (None, Some(mp)) => {
                let coeffs = mp
                    .split(',')
                    .map(parse_rat)
                    .collect::<Result<Vec<_>>>()?;
                let m = QPoly::from_coeffs(coeffs);
                let h = parameter_height_algebraic(&family, &point, &m, *tol)?;
                let mut v = height_to_json(&m.display("t"), &h);
                v["provenance"] = provenance();
                v["t_minpoly"] = poly_to_json(&m, "t");
                v
            }
            _ => {
                return Err(Error::Invalid(
                    "height needs exactly one of --t or --t-minpoly".into(),
                ))
            }
        },
        Command::Sigma { n } => {
            let s = sigma_n(&family, &point, *n)?;
            let factors = if s.degree_i64() >= 1 {
                crate::exact::factor::factor(&s)?
            } else {
                Vec::new()
            };
            let roots = if s.degree_i64() >= 1 {
                crate::exact::factor::rational_roots(&s)?
            } else {
                Vec::new()
            };
            json!({
                "provenance": provenance(),
                "n": n,
                "poly": poly_to_json(&s, "t"),
                "degree": s.degree_i64(),
                "factors": factors.iter().map(|(g, m)| json!({
                    "poly": poly_to_json(g, "t"),
                    "multiplicity": m,
                })).collect::<Vec<_>>(),
                "rational_roots": roots.iter().map(rat_to_string).collect::<Vec<_>>(),
                "exact": true,
            })
        }
        Command::Witnesses { primes } => {
            let ps = primes
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Invalid(format!("bad prime {tok:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let ws = witnesses(&family, &point, &ps)?;
            json!({
                "provenance": provenance(),
                "primes": ps,
                "witnesses": ws.iter().map(|w| w.to_json()).collect::<Vec<_>>(),
                "exact": true,
            })
        }
        Command::Resultant { n, csv, empty_for } => {
            if let Some(b) = empty_for {
                let b = parse_rat(b)?;
                let empty = sigma_empty_certificate(&family, &b)?;
                json!({
                    "provenance": provenance(),
                    "b": rat_to_string(&b),
                    "sigma_empty": empty,
                    "exact": true,
                })
            } else {
                let rep = resultant_in_b(&family, *n)?;
                if let Some(path) = csv {
                    let mut text = String::from("degree,coefficient\n");
                    for (k, c) in rep.poly.coeffs().iter().enumerate() {
                        text.push_str(&format!("{},{}\n", k, rat_to_string(c)));
                    }
                    std::fs::write(path, text)?;
                }
                json!({
                    "provenance": provenance(),
                    "n": n,
                    "poly_in_b": poly_to_json(&rep.poly, "b"),
                    "degree": rep.degree,
                    "leading": rat_to_string(&rep.leading),
                    "leading_is_unit": rep.leading_is_unit,
                    "integer_coeffs": rep.integer_coeffs,
                    "reduction_identity": rep.reduction_identity,
                    "exact": true,
                })
            }
        }
        Command::Ffcheck {
            p,
            k,
            a_coeffs,
            b_coeffs,
        } => {
            let a = parse_coeff_list(a_coeffs)?;
            let b = parse_coeff_list(b_coeffs)?;
            let table = finite_field_sigma(*p, *k, &a, &b)?;
            let ctx = crate::exact::finfield::FfCtx::new(*p, *k)?;
            json!({
                "provenance": provenance(),
                "p": p,
                "k": k,
                "modulus": ctx.modulus(),
                "count": table.len(),
                "all_periodic": true,
                "periods": table.iter().map(|(t, per)| json!({
                    "t": t,
                    "period": per,
                })).collect::<Vec<_>>(),
                "exact": true,
            })
        }
        Command::Render {
            center,
            radius,
            res,
            n_max,
            escape_radius,
            png,
        } => {
            let center = parse_complex(center)?;
            let window = Window::square(center, *radius, *res)?;
            let r = match escape_radius {
                Some(r) => *r,
                None => default_escape_radius(&family, &point, &window)?,
            };
            let grid = escape_map(&family, &point, &window, *n_max, r)?;
            let out = cli
                .out
                .clone()
                .ok_or_else(|| Error::Invalid("render needs --out <file.ppm>".into()))?;
            write_ppm(&grid, &out)?;
            if *png {
                let png_path = out.with_extension("png");
                write_png(&grid, &png_path)?;
            }
            let bounded = grid.escaped_at.iter().filter(|e| e.is_none()).count();
            json!({
                "provenance": provenance(),
                "center": [center.re, center.im],
                "radius": radius,
                "res": res,
                "n_max": n_max,
                "escape_radius": r,
                "bounded_pixels": bounded,
                "out": out.display().to_string(),
            })
        }
    };
    let text = serde_json::to_string_pretty(&output)?;
    println!("{text}");
    if let Some(out) = &cli.out {
        if !matches!(cli.command, Command::Render { .. }) {
            std::fs::write(out, text)?;
        }
    }
    Ok(())
}

pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
