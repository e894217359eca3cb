//! Finite, dimension-truncated simplicial sets carrying algebraic filler
//! structure.
//!
//! The crate revolves around three layers:
//!
//! * plain combinatorics: [`SimplicialSet`] with total face/degeneracy
//!   operators up to a truncation dimension, simplicial maps, standard
//!   shapes, nerves and levelwise colimits;
//! * horns and fillers: enumeration of horns in a complex, filler search
//!   and fibrancy reports ([`horn`]);
//! * algebraic complexes: filler tables ([`algebra`]), the staged free
//!   construction ([`free`]), semi-final lifts and colimits of algebraic
//!   complexes ([`solid`]), and the Kan/quasi comparison ([`quasi`]).
//!
//! All values are immutable after construction and every operation is a
//! pure function, so everything can be shared freely across threads. With
//! the default `parallel` feature the bulk loops (horn enumeration,
//! validation, table checks) run on rayon; results are merged in canonical
//! order so the output never depends on scheduling.

pub mod algebra;
pub mod category;
pub mod colimit;
pub mod error;
pub mod fixtures;
pub mod free;
pub mod horn;
pub mod iso;
pub mod json;
pub mod map;
pub mod par;
pub mod quasi;
pub mod report;
pub mod shapes;
pub mod simplicial;
pub mod solid;

pub use algebra::{
    check_alg_morphism, choose_fillers, counit_eval, make_algebraic, split_coequalizer,
    AlgMorphism, AlgebraicComplex, FillerTable,
};
pub use category::{nerve, CatFunctor, FiniteCategory};
pub use colimit::{
    chain_colimit, coequalizer, coproduct, general_colimit, mediating_map, pushout, ColimitResult,
    DiagramSpec,
};
pub use error::{AlgError, CategoryError, ColimitError, FreeError, JsonError, SsetError};
pub use free::{canonical_retract, free, free_map, growth_stats, unit, StageBudget, StagedComplex};
pub use horn::{
    check_fibrancy, enumerate_horns, factors_through, find_fillers, Horn, HornDescriptor, Mode,
};
pub use iso::find_isomorphism;
pub use map::SimplicialMap;
pub use par::Exec;
pub use quasi::{forget_outer, generating_maps, groupoidify, interval_nerve, GeneratorKind};
pub use report::{
    AlgDefects, FibrancyReport, PreservationReport, ResidueReport, ValidationReport, Violation,
};
pub use simplicial::{LevelSubset, Provenance, SimplexId, SimplicialSet, SsetBuilder};
pub use solid::{
    alg_colimit, alg_filtered_colimit, identify_fillers, pushout_along_free, solid_lift,
    AlgDiagram, IdentifyOutcome, SolidFamily, SolidLift,
};
