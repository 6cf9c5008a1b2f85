//! Disk cache for orbit-polynomial tables, keyed by a content hash of the
//! family and initial point. One JSON file per (family, point, n) under the
//! hash directory; a larger cached table serves any smaller request by
//! truncation.

use crate::henon::{family_to_json, orbit_polys, poly_from_json, poly_to_json, HenonFamily, InitialPoint, OrbitTable};
use crate::{QPoly, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::PathBuf;

pub const CACHE_DIR_ENV: &str = "HENON_CACHE_DIR";

/// Cache root: `$HENON_CACHE_DIR`, or `.henon_cache` under the working
/// directory.
pub fn cache_dir() -> PathBuf {
    match std::env::var_os(CACHE_DIR_ENV) {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(".henon_cache"),
    }
}

/// Content hash of the (family, point) pair over its canonical JSON.
pub fn table_key(family: &HenonFamily, point: &InitialPoint) -> String {
    let canonical = family_to_json(family, point).to_string();
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn table_to_json(table: &OrbitTable) -> Value {
    json!({
        "fwd": table.fwd_all().iter().map(|p| poly_to_json(p, "t")).collect::<Vec<_>>(),
        "bwd": table.bwd_all().iter().map(|p| poly_to_json(p, "t")).collect::<Vec<_>>(),
    })
}

fn table_from_json(v: &Value) -> Result<(Vec<QPoly>, Vec<QPoly>)> {
    let read = |key: &str| -> Result<Vec<QPoly>> {
        v.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| crate::Error::Invalid(format!("orbit JSON needs \"{key}\"")))?
            .iter()
            .map(poly_from_json)
            .collect()
    };
    Ok((read("fwd")?, read("bwd")?))
}

/// Orbit tables with an optional disk cache. A cache hit is re-served
/// byte-identically; on miss the table is computed and stored.
pub fn orbit_polys_cached(
    family: &HenonFamily,
    point: &InitialPoint,
    n: usize,
    use_cache: bool,
) -> Result<OrbitTable> {
    if !use_cache {
        return orbit_polys(family, point, n);
    }
    let dir = cache_dir().join(table_key(family, point));
    // Any cached table at least as long serves the request.
    if let Ok(entries) = std::fs::read_dir(&dir) {
        let mut best: Option<(usize, PathBuf)> = None;
        for e in entries.flatten() {
            let name = e.file_name().to_string_lossy().into_owned();
            if let Some(m) = name
                .strip_prefix("orbit_")
                .and_then(|s| s.strip_suffix(".json"))
                .and_then(|s| s.parse::<usize>().ok())
            {
                if m >= n && best.as_ref().map_or(true, |(b, _)| m < *b) {
                    best = Some((m, e.path()));
                }
            }
        }
        if let Some((_, path)) = best {
            if let Ok(text) = std::fs::read_to_string(&path) {
                if let Ok(v) = serde_json::from_str::<Value>(&text) {
                    if let Ok((fwd, bwd)) = table_from_json(&v) {
                        if fwd.len() > n && bwd.len() > n {
                            return Ok(OrbitTable::from_parts(
                                fwd.into_iter().take(n + 1).collect(),
                                bwd.into_iter().take(n + 1).collect(),
                            ));
                        }
                    }
                }
            }
        }
    }
    let table = orbit_polys(family, point, n)?;
    std::fs::create_dir_all(&dir)?;
    let path = dir.join(format!("orbit_{n}.json"));
    std::fs::write(&path, table_to_json(&table).to_string())?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat_from_i64 as q;

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        std::env::set_var(CACHE_DIR_ENV, dir.path());
        let fam = HenonFamily::quadratic();
        let pt = InitialPoint::constant(q(0), q(0));
        let cold = orbit_polys_cached(&fam, &pt, 6, true).unwrap();
        let warm = orbit_polys_cached(&fam, &pt, 6, true).unwrap();
        assert_eq!(cold, warm);
        // A shorter request is served from the longer cached table.
        let shorter = orbit_polys_cached(&fam, &pt, 4, true).unwrap();
        assert_eq!(shorter.fwd(4), cold.fwd(4));
        assert_eq!(shorter.len(), 5);
        std::env::remove_var(CACHE_DIR_ENV);
    }
}
