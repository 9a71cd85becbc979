use std::path::{Path, PathBuf};

use serde::Serialize;
use soergel::{FieldSpec, RootDatum};

/// Invalid command-line input; reported with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WallSelector {
    All,
    Index(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub group: String,
    pub field: String,
    pub box_radius: i64,
    pub wall: WallSelector,
    /// Zero-based simple indices.
    pub word: Option<Vec<usize>>,
    pub point: Option<Vec<String>>,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
    #[serde(skip)]
    pub datum: RootDatum,
    #[serde(skip)]
    pub field_spec: FieldSpec,
}

pub fn load_group(group: &str) -> Result<RootDatum, InputError> {
    let path = Path::new(group);
    if group.ends_with(".toml") || path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError(format!("cannot read {group}: {e}")))?;
        return RootDatum::from_toml_str(&text).map_err(|e| InputError(e.to_string()));
    }
    RootDatum::preset(group).map_err(|e| InputError(e.to_string()))
}

/// `all` or a 1-based index into the positive coroots.
pub fn parse_wall(s: &str, datum: &RootDatum) -> Result<WallSelector, InputError> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(WallSelector::All);
    }
    let k: usize = s.trim().parse().map_err(|_| {
        InputError(format!(
            "wall must be `all` or a positive integer, got {s:?}"
        ))
    })?;
    let n = datum.positive_coroots().len();
    if k == 0 || k > n {
        return Err(InputError(format!("wall {k} out of range 1..={n}")));
    }
    Ok(WallSelector::Index(k - 1))
}

/// Comma-separated 1-based simple indices, e.g. `1,2,1`.
pub fn parse_word(s: &str, datum: &RootDatum) -> Result<Vec<usize>, InputError> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|x| {
            let k: usize = x
                .trim()
                .parse()
                .map_err(|_| InputError(format!("bad letter {x:?} in word {s:?}")))?;
            if k == 0 || k > datum.rank() {
                return Err(InputError(format!(
                    "letter {k} out of range 1..={} in word {s:?}",
                    datum.rank()
                )));
            }
            Ok(k - 1)
        })
        .collect()
}

impl RunConfig {
    pub fn walls(&self) -> Vec<usize> {
        match self.wall {
            WallSelector::All => (0..self.datum.positive_coroots().len()).collect(),
            WallSelector::Index(k) => vec![k],
        }
    }

    pub fn word_label(&self) -> String {
        self.word
            .as_deref()
            .unwrap_or(&[])
            .iter()
            .map(|s| (s + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn parse_field(s: &str) -> Result<FieldSpec, InputError> {
    s.parse()
        .map_err(|e: soergel::Error| InputError(e.to_string()))
}
