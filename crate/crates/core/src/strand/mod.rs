//! Degree-wise linear algebra over `R` and `A = R/I`: presented modules,
//! strands of maps, truncated resolutions, Hom and Ext dimensions.

pub mod checks;
pub mod detmod;
pub mod gate;
pub mod hilbert;
pub mod hom;
pub mod module;
pub mod resolution;
pub mod restrict;
pub mod ring;
pub mod scan;

pub use checks::{
    conormal_bounds, conormal_depth, iso_suite, simplicity_check, symmetry_suite, vanishing_suite,
    DimComparison, SchemeModules, SimplicityReport, SymmetryCheck, VanishingCheck,
};
pub use gate::{depth_j_gate, DepthJGate};
pub use hilbert::{fit_hilbert_polynomial, rank_estimate, HilbertFit};
pub use hom::{ext_strand, hom_matrix, hom_strand};
pub use module::{FreeCover, ModuleMap, ModulePiece, PresentedModule, StrandSnapshot};
pub use resolution::{
    solve_lift, truncated_min_resolution, DepthFlag, DepthReport, Level, ResolutionOptions,
    ResolveSource, TruncatedResolution,
};
pub use restrict::{hyperplane_restrict, restrict_linear, Restriction};
pub use ring::{Ring, RingPiece, MAX_DEGREE};
pub use scan::{
    conjecture_scan, done_keys, scan_mode, scan_unit, unit_key, ConjectureReport, ScanCheck,
    ScanGrid, ScanMode, ScanOptions, ScanStatus, ScanUnit, Verdict,
};
