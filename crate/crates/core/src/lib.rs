//! Learning With Errors over cyclic division algebras.

pub mod algebra;
pub mod base_ring;
pub mod bench;
pub mod clwe;
pub mod difference_set;
pub mod error;
pub mod field_tower;
pub mod fixtures;
pub mod linalg;
pub mod oracle;
pub mod params;
pub mod pke;
pub mod sampler;
pub mod selftest;
pub mod wire;

pub use error::{ClweError, Result};
pub use algebra::{AElem, CyclicAlgebra};
pub use bench::BenchReport;
pub use params::{registry, ParamPack};
pub use pke::{Ciphertext, Message, Pke, PublicKey, SecretKey};
pub use sampler::GaussianParams;
