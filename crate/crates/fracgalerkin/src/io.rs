//! Output formats: gnuplot-compatible CSV and pretty JSON, written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use fracgalerkin_core::ModalPath;
use serde::Serialize;

use crate::error::{AppError, AppResult};

/// Writes `bytes` to a temporary sibling of `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> AppResult<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| AppError::usage(format!("{} is not a file path", path.display())))?;
    let mut tmp = PathBuf::from(dir);
    tmp.push(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let ctx = |what: &str| format!("{what} {}", tmp.display());
    let mut f = fs::File::create(&tmp).map_err(|e| AppError::io(ctx("creating"), e))?;
    f.write_all(bytes).map_err(|e| AppError::io(ctx("writing"), e))?;
    f.sync_all().map_err(|e| AppError::io(ctx("syncing"), e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| AppError::io(format!("renaming onto {}", path.display()), e))
}

pub fn ensure_dir(dir: &Path) -> AppResult<()> {
    fs::create_dir_all(dir).map_err(|e| AppError::io(format!("creating {}", dir.display()), e))
}

/// Header plus one line per row; fields are `f64` in round-trip exponent form.
pub fn csv<'a>(header: &[&str], rows: impl IntoIterator<Item = &'a [f64]>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

/// Columns `t, g1, …, gm`.
pub fn modal_csv(path: &ModalPath) -> String {
    let mut header = vec!["t".to_string()];
    header.extend((1..=path.modes()).map(|k| format!("g{k}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<f64>> = path
        .grid()
        .nodes()
        .enumerate()
        .map(|(i, t)| std::iter::once(t).chain(path.row(i).iter().copied()).collect())
        .collect();
    csv(&header, rows.iter().map(Vec::as_slice))
}

/// Pretty JSON with a trailing newline.
pub fn json<T: Serialize + ?Sized>(value: &T) -> AppResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| AppError::usage(format!("serializing output: {e}")))?;
    s.push('\n');
    Ok(s)
}
