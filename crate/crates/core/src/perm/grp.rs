use std::fmt::Write as _;
use std::path::Path;

use super::{Group, GroupError, Permutation};

/// Contents of a `.grp` file: degree, name and generators in cycle notation.
///
/// ```text
/// degree 5
/// name A5
/// (0 1 2 3 4)
/// (2 3 4)
/// ```
///
/// Lines starting with `#` and blank lines are ignored when reading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrpFile {
    pub degree: usize,
    pub name: String,
    pub generators: Vec<Permutation>,
}

impl GrpFile {
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let err = |line: usize, msg: &str| GroupError::Parse(format!("line {line}: {msg}"));
        let mut degree = None;
        let mut name = None;
        let mut generators = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim_end_matches('\r');
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            match (degree, &name) {
                (None, _) => {
                    let d = trimmed
                        .strip_prefix("degree ")
                        .ok_or_else(|| err(lineno, "expected `degree <d>`"))?;
                    degree = Some(
                        d.trim()
                            .parse::<usize>()
                            .map_err(|_| err(lineno, "degree is not a non-negative integer"))?,
                    );
                }
                (Some(_), None) => {
                    let n = line
                        .strip_prefix("name ")
                        .ok_or_else(|| err(lineno, "expected `name <string>`"))?;
                    name = Some(n.to_string());
                }
                (Some(d), Some(_)) => {
                    let g = Permutation::parse_cycles(trimmed, d)
                        .map_err(|e| err(lineno, &e.to_string()))?;
                    generators.push(g);
                }
            }
        }
        Ok(Self {
            degree: degree.ok_or_else(|| err(0, "missing `degree` line"))?,
            name: name.ok_or_else(|| err(0, "missing `name` line"))?,
            generators,
        })
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "degree {}", self.degree);
        let _ = writeln!(out, "name {}", self.name);
        for g in &self.generators {
            let _ = writeln!(out, "{g}");
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self, GroupError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GroupError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            GroupError::Parse(msg) => GroupError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), GroupError> {
        std::fs::write(path, self.write())
            .map_err(|e| GroupError::Io(format!("{}: {e}", path.display())))
    }

    pub fn build(&self, cap: usize) -> Result<Group, GroupError> {
        Group::from_generators(self.degree, &self.generators, cap)
    }

    pub fn from_group(name: &str, g: &Group) -> Self {
        Self {
            degree: g.degree(),
            name: name.to_string(),
            generators: g.generators().to_vec(),
        }
    }
}
