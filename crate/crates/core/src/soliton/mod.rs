//! Moment map, the functional `F`, soliton detection and fingerprints.

pub mod fingerprint;
pub mod moment;
pub mod probe;
pub mod solve;

pub use fingerprint::{compare, fingerprint, Fingerprint, FingerprintDiff};
pub use moment::{functional_f, moment_defect, moment_map, static_check, StaticCheck};
pub use probe::{uniqueness_probe, ProbeLimit, ProbeReport, TransformKind};
pub use solve::{fixed_point_is_soliton, soliton_solve, Classification, SolitonReport};
