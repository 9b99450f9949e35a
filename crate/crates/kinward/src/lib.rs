//! kinward: kinship-aware association testing.
//!
//! A library and CLI for estimating kinship matrices from pedigrees or
//! marker panels, running structure-corrected single-SNP association tests
//! (Armitage trend, TDT, retrospective score test, genomic control,
//! principal-component adjustment, linear mixed models, GRAMMAR), and
//! benchmarking those methods on island-model case-control simulations.
//!
//! The numeric core is generic over the scalar type via [`num::Real`]
//! (`f32` or `f64`); the aliases below fix `f64` for common use.

pub mod assoc;
pub mod data;
pub mod error;
pub mod eval;
pub mod gc;
pub mod io;
pub mod kinship;
pub mod num;
pub mod sim;
pub mod special;
pub mod structure;

pub use data::{AlleleFrequencies, GenotypeMatrix, KinshipMatrix, Pedigree, Phenotype, PhenotypeKind};
pub use num::Real;

/// Default scalar for the CLI and pipelines.
pub type Scalar = f64;

pub type Kinship = KinshipMatrix<Scalar>;
pub type Frequencies = AlleleFrequencies<Scalar>;
pub type Outcome = Phenotype<Scalar>;
