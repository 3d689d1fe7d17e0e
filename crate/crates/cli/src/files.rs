//! Output-file plumbing: every artifact is written to a temporary sibling
//! and renamed into place, so a failing command never leaves partial files.

use std::fs;
use std::path::{Path, PathBuf};

use modvit::Result;

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Builds the file in memory first; nothing touches disk if the builder fails.
pub fn write_atomic_with(path: &Path, build: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    build(&mut buf)?;
    write_atomic(path, &buf)
}
