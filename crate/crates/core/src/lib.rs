//! Exact character theory of small finite groups: ordinary character
//! tables, Brauer p-blocks with defect groups, Brauer characters and
//! decomposition matrices, and theta-blocks of character triples together
//! with a suite of instance checkers for their structural theorems.

pub mod blocks;
pub mod chartab;
pub mod cyclo;
pub mod error;
pub mod field;
pub mod groups;
pub mod linalg;
pub mod modrep;
pub mod triples;
pub mod util;
pub mod verify;

pub use error::{Error, Result};
