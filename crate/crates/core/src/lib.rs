//! Spectral element solver for second-order elliptic PDEs on quadrilateral meshes.

pub mod banded;
pub mod bench;
pub mod element;
pub mod error;
pub mod mesh;
pub mod poly;
pub mod quadmap;
pub mod navier_stokes;
pub mod schur;
pub mod ultra;

pub use error::{Error, LinAlgStage, Result};
