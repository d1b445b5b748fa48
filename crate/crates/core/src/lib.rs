//! Finite nearness posets (P, ≤, Θ): spectra of round Cauchy up-sets, near
//! subsets, restrictions, stars, uniformly-below relations, regularisation,
//! admissibility predicates, concrete spaces and finite frames.

pub mod admissibility;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod files;
pub mod frames;
pub mod generate;
pub mod nearness;
pub mod poset;
pub mod props;
pub mod proximity;
pub mod replacement;
pub mod spaces;

pub use bounds::Bounds;
pub use error::{NearnessError, Result};
pub use nearness::{NearnessInstance, PreorderFamily, Spectrum, ThetaClosure};
pub use poset::{ElementSet, Mask, Poset};
pub use proximity::{BelowRelation, NearWitness, Priming, Restriction};
pub use frames::{FiniteFrame, Sublocale};
pub use replacement::{DirectedReplacement, ReplacementReading};
pub use spaces::{CoverMode, FiniteSpace, Role};
