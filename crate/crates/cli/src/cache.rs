use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use soergel::bimodule::{BimoduleRecord, MatrixBimodule};
use soergel::soergel::{build_big_bimodule, BigBimodule, SteinbergBasis};
use soergel::{FieldSpec, Result, RootDatum};

/// Whether the last lookup was served from disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
}

pub struct Cache {
    dir: Option<PathBuf>,
    pub status: CacheStatus,
}

#[derive(Serialize, Deserialize)]
struct BigEntry {
    basis: SteinbergBasis,
    bimodule: BimoduleRecord,
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        let status = if dir.is_some() {
            CacheStatus::Miss
        } else {
            CacheStatus::Disabled
        };
        Cache { dir, status }
    }

    fn path(&self, datum: &RootDatum, field: FieldSpec, recipe: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| {
            d.join(format!(
                "{}__{}__{}.json",
                sanitize(datum.name()),
                sanitize(&field.to_string()),
                sanitize(recipe)
            ))
        })
    }

    fn read(path: &Path) -> Option<String> {
        std::fs::read_to_string(path).ok()
    }

    /// Write-then-rename, so readers never see a partial file.
    fn write(path: &Path, contents: &str) {
        let Some(dir) = path.parent() else { return };
        if std::fs::create_dir_all(dir).is_err() {
            return;
        }
        let Ok(mut tmp) = tempfile::NamedTempFile::new_in(dir) else {
            return;
        };
        if tmp.write_all(contents.as_bytes()).is_ok() {
            let _ = tmp.persist(path);
        }
    }

    pub fn bott_samelson(
        &mut self,
        datum: &RootDatum,
        word: &[usize],
        field: FieldSpec,
    ) -> Result<MatrixBimodule> {
        let recipe = format!(
            "bs-{}",
            word.iter()
                .map(|s| (s + 1).to_string())
                .collect::<Vec<_>>()
                .join("-")
        );
        let path = self.path(datum, field, &recipe);
        if let Some(p) = &path {
            let cached = Self::read(p)
                .and_then(|t| BimoduleRecord::from_json(&t).ok())
                .and_then(|r| r.to_plain().ok())
                .filter(|m| m.datum() == datum && m.rank() == 1 << word.len());
            if let Some(m) = cached {
                self.status = CacheStatus::Hit;
                return Ok(m);
            }
        }
        let m = MatrixBimodule::bott_samelson(datum, word, field)?;
        if let Some(p) = &path {
            Self::write(p, &BimoduleRecord::from_plain(&m).to_json());
        }
        Ok(m)
    }

    pub fn big(&mut self, datum: &RootDatum, field: FieldSpec) -> Result<BigBimodule> {
        let path = self.path(datum, field, "big");
        if let Some(p) = &path {
            let cached = Self::read(p)
                .and_then(|t| serde_json::from_str::<BigEntry>(&t).ok())
                .and_then(|e| {
                    let inner = e.bimodule.to_plain().ok()?;
                    (inner.datum() == datum).then_some(())?;
                    BigBimodule::from_parts(inner, e.basis).ok()
                });
            if let Some(b) = cached {
                self.status = CacheStatus::Hit;
                return Ok(b);
            }
        }
        let big = build_big_bimodule(datum, field)?;
        if let Some(p) = &path {
            let entry = BigEntry {
                basis: big.basis.clone(),
                bimodule: BimoduleRecord::from_plain(&big.inner),
            };
            Self::write(
                p,
                &serde_json::to_string_pretty(&entry).expect("serializable"),
            );
        }
        Ok(big)
    }
}
