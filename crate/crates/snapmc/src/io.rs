//! File formats.
//!
//! - point patterns: CSV with header `x,y`, optional `#` comment lines
//!   (writers echo the window as `# window rect x0 x1 y0 y1`)
//! - rasters: CSV matrix with a 4-line header (x-range, y-range, nx, ny),
//!   rows written north-up
//! - partitions: JSON `{ "cells": [ { "id": ..., "ring": [[x,y],...] } ] }`
//!   with implicitly closed rings
//! - K estimates: `r,khat` CSV with comment headers recording the variant,
//!   point count, window and intensity provenance
//! - fit rows: one CSV row per fit
//!
//! Floats are written with Rust's shortest round-trip formatting, so
//! write/read cycles are lossless and outputs are byte-deterministic.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::MethodLabel;
use crate::geometry::{Partition, Point, PointPattern, Rect, Window};
use crate::kfunction::{KEstimate, KVariant};
use crate::raster::RasterField;

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{what}: cannot parse {s:?} as a number")))
}

/// `# window ...` comment line for a window.
pub fn window_comment(window: &Window) -> String {
    match window {
        Window::Rect(r) => format!("# window rect {} {} {} {}", r.x0, r.x1, r.y0, r.y1),
        Window::Polygon { ring } => {
            let coords: Vec<String> = ring
                .iter()
                .flat_map(|p| [p.x.to_string(), p.y.to_string()])
                .collect();
            format!("# window polygon {}", coords.join(" "))
        }
    }
}

/// Parse a `# window ...` comment produced by [`window_comment`].
pub fn parse_window_comment(line: &str) -> Option<Window> {
    let rest = line
        .trim()
        .strip_prefix('#')?
        .trim()
        .strip_prefix("window")?
        .trim();
    let mut it = rest.split_whitespace();
    match it.next()? {
        "rect" => {
            let vals: Vec<f64> = it.filter_map(|t| t.parse().ok()).collect();
            if vals.len() != 4 {
                return None;
            }
            Window::rect(vals[0], vals[1], vals[2], vals[3]).ok()
        }
        "polygon" => {
            let vals: Vec<f64> = it.filter_map(|t| t.parse().ok()).collect();
            if vals.len() < 6 || vals.len() % 2 != 0 {
                return None;
            }
            let ring = vals.chunks(2).map(|c| Point::new(c[0], c[1])).collect();
            Window::polygon(ring).ok()
        }
        _ => None,
    }
}

// ---------------------------------------------------------------- patterns

/// Serialize a pattern; `comments` are emitted verbatim before the header.
pub fn pattern_to_csv(pattern: &PointPattern, comments: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&window_comment(pattern.window()));
    out.push('\n');
    for c in comments {
        out.push_str(c);
        out.push('\n');
    }
    out.push_str("x,y\n");
    for p in pattern.points() {
        out.push_str(&format!("{},{}\n", p.x, p.y));
    }
    out
}

pub fn write_pattern(path: &Path, pattern: &PointPattern, comments: &[String]) -> Result<()> {
    fs::write(path, pattern_to_csv(pattern, comments))?;
    Ok(())
}

/// Parse a pattern. The window comes from `window` when given, otherwise
/// from a `# window` comment in the file.
pub fn pattern_from_csv(text: &str, window: Option<Window>) -> Result<PointPattern> {
    let mut win = window;
    let mut points = Vec::new();
    let mut saw_header = false;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if win.is_none() {
                if let Some(w) = parse_window_comment(line) {
                    win = Some(w);
                }
            }
            continue;
        }
        if !saw_header {
            let lower = line.to_ascii_lowercase();
            if lower.replace(' ', "") == "x,y" {
                saw_header = true;
                continue;
            }
            return Err(Error::Parse(format!(
                "expected header \"x,y\", found {line:?}"
            )));
        }
        let mut it = line.split(',');
        let x = parse_f64(it.next().unwrap_or(""), "x coordinate")?;
        let y = parse_f64(
            it.next()
                .ok_or_else(|| Error::Parse(format!("row {line:?} lacks a y column")))?,
            "y coordinate",
        )?;
        points.push(Point::new(x, y));
    }
    let win = win.ok_or_else(|| {
        Error::Config("no window given and no # window comment in the pattern file".into())
    })?;
    PointPattern::new(win, points)
}

pub fn read_pattern(path: &Path, window: Option<Window>) -> Result<PointPattern> {
    pattern_from_csv(&fs::read_to_string(path)?, window)
}

// ---------------------------------------------------------------- rasters

pub fn raster_to_csv(raster: &RasterField) -> String {
    let b = raster.bounds();
    let mut out = format!(
        "# xrange {} {}\n# yrange {} {}\n# nx {}\n# ny {}\n",
        b.x0,
        b.x1,
        b.y0,
        b.y1,
        raster.nx(),
        raster.ny()
    );
    // north-up: top row first
    for iy in (0..raster.ny()).rev() {
        let row: Vec<String> = (0..raster.nx())
            .map(|ix| raster.get(ix, iy).to_string())
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_raster(path: &Path, raster: &RasterField) -> Result<()> {
    fs::write(path, raster_to_csv(raster))?;
    Ok(())
}

pub fn raster_from_csv(text: &str) -> Result<RasterField> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let mut header = |tag: &str| -> Result<Vec<f64>> {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("raster header line {tag:?} missing")))?;
        let rest = line
            .trim()
            .strip_prefix('#')
            .map(str::trim)
            .and_then(|r| r.strip_prefix(tag))
            .ok_or_else(|| Error::Parse(format!("expected \"# {tag} ...\", found {line:?}")))?;
        rest.split_whitespace().map(|t| parse_f64(t, tag)).collect()
    };
    let xr = header("xrange")?;
    let yr = header("yrange")?;
    let nxv = header("nx")?;
    let nyv = header("ny")?;
    if xr.len() != 2 || yr.len() != 2 || nxv.len() != 1 || nyv.len() != 1 {
        return Err(Error::Parse("malformed raster header".into()));
    }
    let (nx, ny) = (nxv[0] as usize, nyv[0] as usize);
    let bounds = Rect {
        x0: xr[0],
        x1: xr[1],
        y0: yr[0],
        y1: yr[1],
    };
    let mut values = vec![0.0; nx * ny];
    let mut rows = 0usize;
    for line in lines {
        if rows >= ny {
            return Err(Error::Parse("raster has more rows than ny".into()));
        }
        let iy = ny - 1 - rows; // first file row is the top of the grid
        let mut count = 0usize;
        for (ix, tok) in line.trim().split(',').enumerate() {
            if ix >= nx {
                return Err(Error::Parse(format!(
                    "raster row {rows} has more than nx values"
                )));
            }
            values[iy * nx + ix] = parse_f64(tok, "raster value")?;
            count += 1;
        }
        if count != nx {
            return Err(Error::Parse(format!(
                "raster row {rows} has {count} values, expected {nx}"
            )));
        }
        rows += 1;
    }
    if rows != ny {
        return Err(Error::Parse(format!("raster has {rows} rows, expected {ny}")));
    }
    RasterField::new(bounds, nx, ny, values)
}

pub fn read_raster(path: &Path) -> Result<RasterField> {
    raster_from_csv(&fs::read_to_string(path)?)
}

// -------------------------------------------------------------- partitions

#[derive(Serialize, Deserialize)]
struct PartitionDoc {
    cells: Vec<CellDoc>,
}

#[derive(Serialize, Deserialize)]
struct CellDoc {
    id: u64,
    ring: Vec<[f64; 2]>,
}

/// Load a partition document over a known window (rings are implicitly
/// closed: the last vertex differs from the first).
pub fn partition_from_json(text: &str, window: &Window) -> Result<Partition> {
    let doc: PartitionDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("partition JSON: {e}")))?;
    let rings = doc
        .cells
        .into_iter()
        .map(|c| c.ring.into_iter().map(|v| Point::new(v[0], v[1])).collect())
        .collect();
    Partition::from_rings(window, rings)
}

pub fn partition_to_json(partition: &Partition) -> String {
    let doc = PartitionDoc {
        cells: partition
            .cells()
            .iter()
            .enumerate()
            .map(|(i, c)| CellDoc {
                id: i as u64,
                ring: c.ring().iter().map(|p| [p.x, p.y]).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("partition document serializes")
}

pub fn read_partition(path: &Path, window: &Window) -> Result<Partition> {
    partition_from_json(&fs::read_to_string(path)?, window)
}

pub fn write_partition(path: &Path, partition: &Partition) -> Result<()> {
    fs::write(path, partition_to_json(partition))?;
    Ok(())
}

// ------------------------------------------------------------ K estimates

pub fn kest_to_csv(k: &KEstimate, window: &Window) -> String {
    let mut out = format!("# variant {}\n# n {}\n", k.variant, k.n_points);
    out.push_str(&window_comment(window));
    out.push('\n');
    out.push_str(&format!("# intensity {}\n", k.meta));
    out.push_str("r,khat\n");
    for (r, v) in k.r.iter().zip(k.khat.iter()) {
        out.push_str(&format!("{r},{v}\n"));
    }
    out
}

pub fn write_kest(path: &Path, k: &KEstimate, window: &Window) -> Result<()> {
    fs::write(path, kest_to_csv(k, window))?;
    Ok(())
}

pub fn kest_from_csv(text: &str) -> Result<KEstimate> {
    let mut variant = KVariant::Hom;
    let mut n_points = 0usize;
    let mut meta = String::new();
    let mut r = Vec::new();
    let mut khat = Vec::new();
    let mut saw_header = false;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("variant ") {
                variant = match v.trim() {
                    "hom" => KVariant::Hom,
                    "inhom" => KVariant::Inhom,
                    other => return Err(Error::Parse(format!("unknown K variant {other:?}"))),
                };
            } else if let Some(v) = rest.strip_prefix("n ") {
                n_points = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad point count {v:?}")))?;
            } else if let Some(v) = rest.strip_prefix("intensity ") {
                meta = v.trim().to_string();
            }
            continue;
        }
        if !saw_header {
            if line.to_ascii_lowercase().replace(' ', "") == "r,khat" {
                saw_header = true;
                continue;
            }
            return Err(Error::Parse(format!(
                "expected header \"r,khat\", found {line:?}"
            )));
        }
        let mut it = line.split(',');
        r.push(parse_f64(it.next().unwrap_or(""), "r")?);
        khat.push(parse_f64(
            it.next()
                .ok_or_else(|| Error::Parse("khat column missing".into()))?,
            "khat",
        )?);
    }
    KEstimate::new(r, khat, variant, n_points, meta)
}

pub fn read_kest(path: &Path) -> Result<KEstimate> {
    kest_from_csv(&fs::read_to_string(path)?)
}

// --------------------------------------------------------------- fit rows

/// One study fit in the row CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub scenario: String,
    pub method: MethodLabel,
    pub corruption: f64,
    pub seed: u64,
    pub phi_hat: f64,
    pub sigma2_hat: f64,
    pub contrast: f64,
    pub converged: bool,
}

pub const FIT_ROW_HEADER: &str =
    "scenario,method,corruption,seed,phi_hat,sigma2_hat,contrast,converged";

pub fn rows_to_csv(rows: &[FitRow], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(FIT_ROW_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.scenario,
            row.method,
            row.corruption,
            row.seed,
            row.phi_hat,
            row.sigma2_hat,
            row.contrast,
            row.converged
        ));
    }
    out
}

pub fn rows_from_csv(text: &str) -> Result<Vec<FitRow>> {
    let mut rows = Vec::new();
    let mut saw_header = false;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line == FIT_ROW_HEADER {
                saw_header = true;
                continue;
            }
            return Err(Error::Parse(format!("unexpected fit-row header {line:?}")));
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(Error::Parse(format!("fit row has {} fields", f.len())));
        }
        rows.push(FitRow {
            scenario: f[0].to_string(),
            method: f[1].parse()?,
            corruption: parse_f64(f[2], "corruption")?,
            seed: f[3]
                .parse()
                .map_err(|_| Error::Parse(format!("bad seed {:?}", f[3])))?,
            phi_hat: parse_f64(f[4], "phi_hat")?,
            sigma2_hat: parse_f64(f[5], "sigma2_hat")?,
            contrast: parse_f64(f[6], "contrast")?,
            converged: match f[7] {
                "true" => true,
                "false" => false,
                other => return Err(Error::Parse(format!("bad converged flag {other:?}"))),
            },
        });
    }
    Ok(rows)
}

pub fn read_rows(path: &Path) -> Result<Vec<FitRow>> {
    rows_from_csv(&fs::read_to_string(path)?)
}
