pub mod bimodule;
pub mod charring;
pub mod error;
pub mod field;
pub mod hecke;
pub mod lattice;
pub mod matrix;
pub mod ring;
pub mod rootdata;
pub mod soergel;
pub mod walls;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use lattice::{IntMatrix, LatticeVec};
pub use matrix::Matrix;
pub use ring::RingElem;
pub use rootdata::RootDatum;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/root-data.md")]
    mod root_data {}
    #[doc = include_str!("../../../book/src/character-ring.md")]
    mod character_ring {}
    #[doc = include_str!("../../../book/src/walls.md")]
    mod walls {}
    #[doc = include_str!("../../../book/src/bimodules.md")]
    mod bimodules {}
    #[doc = include_str!("../../../book/src/hecke.md")]
    mod hecke {}
    #[doc = include_str!("../../../book/src/big-bimodule.md")]
    mod big_bimodule {}
    #[doc = include_str!("../../../book/src/localization.md")]
    mod localization {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
