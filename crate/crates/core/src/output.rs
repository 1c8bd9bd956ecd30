// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

//! Artifact writers. Files are written to a temporary sibling and renamed
//! into place; numbers use a fixed `{:.12e}` format so reruns are
//! byte-identical.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::observables::WignerGrid;
use crate::protocols::{SweepRow, TimePoint};

pub const TIMESERIES_HEADER: &str = "t,fidelity,parity,mean_n,purity";
pub const WIGNER_HEADER: &str = "x,p,w";
pub const SWEEP_HEADER: &str = "strength,fidelity,root_fidelity,duration";

/// Documentation-only mapping of the dimensionless units.
pub const UNIT_NOTE: &str =
    "rates in units of K and times in units of 1/K; with K/2pi = 750 kHz the time unit 1/K is 212.2 ns";

fn num(out: &mut String, v: f64) {
    let _ = write!(out, "{v:.12e}");
}

fn row(out: &mut String, values: &[f64]) {
    for (i, &v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        num(out, v);
    }
    out.push('\n');
}

pub fn timeseries_csv(points: &[TimePoint]) -> String {
    let mut out = format!("{TIMESERIES_HEADER}\n");
    for p in points {
        row(&mut out, &[p.t, p.fidelity, p.parity, p.mean_n, p.purity]);
    }
    out
}

/// Rows ordered with `p` outer and `x` inner.
pub fn wigner_csv(grid: &WignerGrid) -> String {
    let mut out = format!("{WIGNER_HEADER}\n");
    for (ip, &p) in grid.p_axis.iter().enumerate() {
        for (ix, &x) in grid.x_axis.iter().enumerate() {
            row(&mut out, &[x, p, grid.values[ip * grid.x_axis.len() + ix]]);
        }
    }
    out
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for r in rows {
        row(&mut out, &[r.strength, r.fidelity, r.root_fidelity, r.duration]);
    }
    out
}

/// Writes `contents` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

/// Collects the files of one run under a common directory.
#[derive(Debug)]
pub struct ArtifactDir {
    root: PathBuf,
    written: Vec<String>,
}

impl ArtifactDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into(), written: Vec::new() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        write_atomic(&self.root.join(name), contents.as_bytes())?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }

    pub fn files(&self) -> &[String] {
        &self.written
    }
}
