//! Ring presentations bundled with the library.

use crate::error::{Error, Result};
use crate::parse::{parse_input, InputFile};
use crate::resolve::ModulePresentation;
use crate::ring::{build_algebra, LocalAlgebra};

/// A named input file shipped under `rings/`.
#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub source: &'static str,
}

macro_rules! entry {
    ($name:literal) => {
        CorpusEntry { name: $name, source: include_str!(concat!("../../../rings/", $name, ".ring")) }
    };
}

pub const CORPUS: &[CorpusEntry] = &[
    entry!("ex31"),
    entry!("ex32"),
    entry!("ex33"),
    entry!("field"),
    entry!("r1"),
    entry!("dual"),
    entry!("xyz2"),
    entry!("f3m3"),
    entry!("f3xy"),
    entry!("f3x3"),
    entry!("f5xy"),
    entry!("f7x4"),
    entry!("depth1"),
    entry!("f3depth1"),
];

pub fn entry(name: &str) -> Option<&'static CorpusEntry> {
    let name = name.strip_suffix(".ring").unwrap_or(name);
    CORPUS.iter().find(|e| e.name == name)
}

/// A parsed corpus file with its algebra.
pub struct Loaded {
    pub name: &'static str,
    pub input: InputFile,
    pub alg: LocalAlgebra,
}

impl Loaded {
    /// Module declared in the file under `name`.
    pub fn module(&self, name: &str) -> Result<ModulePresentation> {
        let spec = self.input.module(name).ok_or_else(|| Error::UnknownModule(name.to_string()))?;
        ModulePresentation::from_spec(&self.alg, spec)
    }

    /// Names of the declared modules, in file order.
    pub fn module_names(&self) -> Vec<&str> {
        self.input.modules.iter().map(|(n, _)| n.as_str()).collect()
    }
}

pub fn load(name: &str) -> Result<Loaded> {
    let e = entry(name).ok_or_else(|| Error::NotApplicable(format!("no bundled ring named `{name}`")))?;
    let input = parse_input(e.source)?;
    let alg = build_algebra(&input.ring)?;
    Ok(Loaded { name: e.name, input, alg })
}

/// Every bundled ring.
pub fn load_all() -> Result<Vec<Loaded>> {
    CORPUS.iter().map(|e| load(e.name)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds_with_its_modules() {
        for l in load_all().unwrap() {
            for m in l.module_names() {
                l.module(m).unwrap_or_else(|e| panic!("{}: {m}: {e}", l.name));
            }
        }
    }
}
