//! Atomic file output: write to a sibling temp file, then rename.

use crate::error::{CliError, Result};
use std::io::Write;
use std::path::Path;

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
        )),
        None => Path::new(&format!(
            ".{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
        ))
        .to_path_buf(),
    };
    let mut file = std::fs::File::create(&tmp)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", tmp.display())))?;
    file.write_all(bytes)
        .and_then(|_| file.sync_all())
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", tmp.display())))?;
    drop(file);
    std::fs::rename(&tmp, path)
        .map_err(|e| CliError::input(format!("cannot move into place {}: {e}", path.display())))
}
