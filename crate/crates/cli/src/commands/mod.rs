mod analyze;
mod baseline;
mod run;
mod simulate;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

pub use analyze::analyze;
pub use baseline::baseline;
pub use run::run;
pub use simulate::simulate;

/// Parses `lo:hi` into an inclusive range.
pub(crate) fn parse_range(text: &str) -> Result<(usize, usize)> {
    let (lo, hi) = text.split_once(':').with_context(|| format!("range {text:?} is not of the form lo:hi"))?;
    let lo: usize = lo.trim().parse().with_context(|| format!("bad lower bound in {text:?}"))?;
    let hi: usize = hi.trim().parse().with_context(|| format!("bad upper bound in {text:?}"))?;
    anyhow::ensure!(lo <= hi, "range {text:?} has lo > hi");
    Ok((lo, hi))
}

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

pub(crate) fn write_file(dir: &Path, name: &str, contents: impl AsRef<[u8]>) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
