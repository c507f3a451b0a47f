use std::fs;
use std::path::{Path, PathBuf};

use crate::{CliError, CliResult};

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Creates `dir` if needed. An existing directory must be empty unless
/// `force` is set.
pub fn prepare(dir: &Path, force: bool) -> CliResult<PathBuf> {
    if dir.exists() {
        let mut entries = fs::read_dir(dir).map_err(io(dir))?;
        if entries.next().is_some() && !force {
            return Err(CliError::Usage(format!(
                "{} is not empty; pass --force to write into it",
                dir.display()
            )));
        }
    } else {
        fs::create_dir_all(dir).map_err(io(dir))?;
    }
    Ok(dir.to_path_buf())
}

pub fn write(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(io(&path))
}

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(io(path))
}
