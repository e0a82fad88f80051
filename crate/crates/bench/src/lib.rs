//! Collections shared by the criterion benches.

use std::path::PathBuf;

use banditree::{BanditCollection, Result};

/// Repository `fixtures/` directory.
pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Loads a shipped collection by file stem, e.g. `"rand-10-20"`.
pub fn fixture(name: &str) -> Result<BanditCollection> {
    BanditCollection::load(fixtures_dir().join(format!("{name}.json")))
}
