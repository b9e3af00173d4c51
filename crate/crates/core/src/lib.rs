//! Exact Lie-theoretic computations for screening first-cohomology
//! obstructions to complete reducibility in exceptional groups.

pub mod error;
pub mod absfilt;
pub mod catalogue;
pub mod charcalc;
pub mod h1data;
pub mod modp;
pub mod rootcore;
pub mod screen;
pub mod subgroups;

pub use error::{Error, Result};
pub use rootcore::{RootSystem, RootSystemId, Series, System, Weight};

/// Contents of `EXCLIE_DATA_DIR/<name>` when that file exists.
pub(crate) fn data_override(name: &str) -> Option<String> {
    let dir = std::env::var_os("EXCLIE_DATA_DIR")?;
    std::fs::read_to_string(std::path::Path::new(&dir).join(name)).ok()
}

/// Parse every override file present in `EXCLIE_DATA_DIR`, reporting the
/// first malformed one. Returns the names of the files that will be used.
pub fn check_data_overrides() -> Result<Vec<&'static str>> {
    type Parser = fn(&str) -> Result<()>;
    let files: [(&'static str, Parser); 5] = [
        ("decompositions.txt", |t| modp::DecompositionTable::parse(t).map(drop)),
        ("h1_table.txt", |t| h1data::H1Table::parse(t).map(drop)),
        ("levi_containments.txt", |t| h1data::parse_levi_containments(t).map(drop)),
        ("corollary2.txt", |t| screen::parse_prime_table(t).map(drop)),
        ("catalogue.txt", |t| catalogue::parse_catalogue(t).map(drop)),
    ];
    let mut used = Vec::new();
    for (name, parse) in files {
        if let Some(text) = data_override(name) {
            parse(&text).map_err(|e| Error::Data(format!("{name}: {e}")))?;
            used.push(name);
        }
    }
    Ok(used)
}
