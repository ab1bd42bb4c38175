//! File helpers shared by the commands.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use pielou_core::orbit::read_orbit_csv;
use pielou_core::{AnalysisReport, Orbit, State};

use crate::error::{CliError, CliResult};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let file = File::open(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| CliError::Parse {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

/// Where an output named in an input file ends up.
///
/// With `out_dir`, relative names are placed under it and absolute names keep
/// only their file name. Without it, relative names resolve against
/// `input_dir` (the directory of the scenario or sweep file).
pub fn resolve_output(name: &Path, input_dir: &Path, out_dir: Option<&Path>) -> PathBuf {
    match out_dir {
        Some(dir) if name.is_absolute() => match name.file_name() {
            Some(file) => dir.join(file),
            None => dir.to_owned(),
        },
        Some(dir) => dir.join(name),
        None if name.is_absolute() => name.to_owned(),
        None => input_dir.join(name),
    }
}

/// `orbit.csv` becomes `orbit_3.csv` for `k = 3`.
pub fn with_index_suffix(path: &Path, k: usize) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{k}"),
    };
    path.with_file_name(name)
}

pub fn write_with<F>(path: &Path, body: F) -> CliResult<()>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let wrap = |source| CliError::Write {
        path: path.to_owned(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(wrap)?;
    }
    let mut out = BufWriter::new(File::create(path).map_err(wrap)?);
    body(&mut out).map_err(wrap)?;
    out.flush().map_err(wrap)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    write_with(path, |out| {
        serde_json::to_writer_pretty(&mut *out, value)?;
        out.write_all(b"\n")
    })
}

pub fn write_orbit(path: &Path, orbit: &Orbit) -> CliResult<()> {
    write_with(path, |out| orbit.write_csv(out))
}

pub fn load_orbit_csv(path: &Path) -> CliResult<Vec<State>> {
    let file = File::open(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    read_orbit_csv(BufReader::new(file)).map_err(|message| CliError::Parse {
        path: path.to_owned(),
        message,
    })
}

pub fn load_report(path: &Path) -> CliResult<AnalysisReport> {
    read_json(path)
}
