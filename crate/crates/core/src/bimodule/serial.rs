use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::charring::{LaurentPoly, WallFraction, WallSet};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::rootdata::{DatumFile, LatticeSpec, RootDatum};

use super::{MatrixBimodule, RingTag};

/// One matrix entry: numerator terms, and wall exponents of the denominator when localized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub num: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub den: BTreeMap<usize, u32>,
}

/// Self-contained document for a bimodule: the datum, the field, the ring, and one matrix
/// per lattice generator. The inverses are recomputed on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleRecord {
    pub datum: DatumFile,
    pub field: String,
    pub localized: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allowed_wall: Option<usize>,
    pub rank: usize,
    pub left_action: Vec<Vec<Vec<EntryRecord>>>,
}

fn datum_file(datum: &RootDatum) -> DatumFile {
    let r = datum.rank();
    let cartan = (0..r).map(|i| datum.cartan().row(i).to_vec()).collect();
    let lattice = if datum.is_adjoint() {
        LatticeSpec::Keyword("adjoint".into())
    } else {
        LatticeSpec::Coroots(datum.simple_coroots().iter().map(|c| c.to_vec()).collect())
    };
    DatumFile {
        name: datum.name().to_string(),
        cartan,
        lattice,
    }
}

fn matrices<E, F: Fn(&E) -> EntryRecord>(ms: &[Matrix<E>], f: F) -> Vec<Vec<Vec<EntryRecord>>> {
    ms.iter()
        .map(|m| {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(&f).collect())
                .collect()
        })
        .collect()
}

impl BimoduleRecord {
    pub fn from_plain(m: &MatrixBimodule<LaurentPoly>) -> Self {
        BimoduleRecord {
            datum: datum_file(m.datum()),
            field: m.field().to_string(),
            localized: false,
            allowed_wall: None,
            rank: m.rank(),
            left_action: matrices(m.left_actions(), |e| EntryRecord {
                num: e.to_serial(),
                den: BTreeMap::new(),
            }),
        }
    }

    pub fn from_localized(m: &MatrixBimodule<WallFraction>) -> Self {
        let allowed = match m.ring_tag() {
            RingTag::Localized(a) => a,
            RingTag::Plain => None,
        };
        BimoduleRecord {
            datum: datum_file(m.datum()),
            field: m.field().to_string(),
            localized: true,
            allowed_wall: allowed,
            rank: m.rank(),
            left_action: matrices(m.left_actions(), |e| EntryRecord {
                num: e.numerator().to_serial(),
                den: e.denominator_walls().clone(),
            }),
        }
    }

    fn context(&self) -> Result<(RootDatum, FieldSpec)> {
        let datum = RootDatum::from_file_spec(&self.datum)?;
        let field: FieldSpec = self.field.parse()?;
        if self.left_action.len() != datum.lattice_rank() {
            return Err(Error::Parse(format!(
                "expected {} action matrices, found {}",
                datum.lattice_rank(),
                self.left_action.len()
            )));
        }
        for m in &self.left_action {
            if m.len() != self.rank || m.iter().any(|row| row.len() != self.rank) {
                return Err(Error::Parse(format!(
                    "action matrix is not {0}×{0}",
                    self.rank
                )));
            }
        }
        Ok((datum, field))
    }

    pub fn to_plain(&self) -> Result<MatrixBimodule<LaurentPoly>> {
        if self.localized {
            return Err(Error::Parse("record is localized".into()));
        }
        let (datum, field) = self.context()?;
        let n = datum.lattice_rank();
        let left = self
            .left_action
            .iter()
            .map(|m| {
                let rows = m
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| LaurentPoly::from_serial(field, n, &e.num))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Matrix::from_rows(rows))
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixBimodule::from_left_actions(&datum, field, left)
    }

    pub fn to_localized(&self) -> Result<MatrixBimodule<WallFraction>> {
        if !self.localized {
            return Err(Error::Parse("record is not localized".into()));
        }
        let (datum, field) = self.context()?;
        let n = datum.lattice_rank();
        let walls = WallSet::new(&datum, self.allowed_wall)?;
        let left = self
            .left_action
            .iter()
            .map(|m| {
                let rows = m
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| {
                                let num = LaurentPoly::from_serial(field, n, &e.num)?;
                                WallFraction::new(num, e.den.clone(), &walls)
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Matrix::from_rows(rows))
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixBimodule::from_left_actions(&datum, field, left)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}
