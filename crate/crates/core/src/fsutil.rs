use std::fs::File;
use std::path::Path;

use crate::{Error, Result};

/// Creates `path` for writing, parent directories included.
pub(crate) fn create_file(path: &Path) -> Result<File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path).map_err(|e| Error::io(path, e))
}
