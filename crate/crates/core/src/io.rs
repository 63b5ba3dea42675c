use std::fs;
use std::io::Write;
use std::path::Path;

use crate::complex::{ComplexFile, SimplicialComplex};
use crate::error::Result;

pub fn read_complex(path: &Path) -> Result<SimplicialComplex> {
    ComplexFile::from_json(&fs::read_to_string(path)?)?.into_complex()
}

/// Writes `bytes` to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
