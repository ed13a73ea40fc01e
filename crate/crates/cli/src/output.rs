use std::io::Write;
use std::path::{Path, PathBuf};
use tempfile::NamedTempFile;

/// Write through a temp file in the same directory, then rename over `path`,
/// so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// `<out>.svg` next to the artifact.
pub fn svg_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".svg");
    PathBuf::from(s)
}
