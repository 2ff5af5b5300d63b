//! Linear stability classification of planar shock fronts in
//! two-dimensional isentropic elastodynamics.
//!
//! A front is described by three dimensionless quantities: the downstream
//! normal Mach number `M`, the compression ratio `R`, and the scaled
//! downstream deformation gradient `F`. The crate classifies each admissible
//! front as uniformly stable, neutrally stable, or violently unstable by
//! four mutually independent methods and cross-checks them:
//!
//! * an algebraic stability margin whose sign settles uniform stability
//!   ([`uniform_stability_margin`]),
//! * a quartic Hurwitz criterion with a companion-matrix root oracle
//!   ([`lienard_chipart`], [`quartic_root_oracle`]),
//! * a symmetrizer certificate obtained from a Lyapunov solve for the
//!   companion form of the reduced boundary system
//!   ([`assemble_symmetrizer`]),
//! * a frequency-domain sweep for zeros of the boundary compatibility
//!   determinant ([`classify_spectral`]), with a closed form for
//!   single-axis deformations ([`classify_stretching`]).
//!
//! [`classify`] runs any subset of the methods and merges the outcomes;
//! [`solve_rankine_hugoniot`] builds admissible fronts from physical
//! upstream data and an equation of state.

pub mod energy;
pub mod eos;
pub mod error;
pub mod hugoniot;
pub mod linalg;
pub mod lopatinski;
pub mod poly;
pub mod sampling;
pub mod scales;
pub mod state;
pub mod symmetrizer;
pub mod verdict;

pub use energy::{
    compressive_certificate, detect_pattern, elastic_mach_check, energy_verdict,
    margin_certificate, stretching_condition, uniform_stability_margin, CompressiveCertificate,
    DeformationPattern, ElasticMachReport, EnergyVerdict, MarginCertificate, MARGIN_BAND,
};
pub use eos::{EosPoint, EquationOfState};
pub use error::{Error, Result};
pub use hugoniot::{rh_residuals, solve_rankine_hugoniot, RhSolution};
pub use lopatinski::{
    classify_spectral, classify_spectral_streaming, classify_stretching, mode_solution, Frequency,
    GridConfig, ModeSolution, SpectralClass, SpectralVerdict, SweepSample,
};
pub use poly::{
    hurwitz_coefficients, lienard_chipart, quartic_root_oracle, QuarticHurwitz, QuarticRoots,
};
pub use sampling::sample_admissible;
pub use scales::{derived_scales, DerivedScales};
pub use state::{
    characteristic_speeds, check_lax, nondimensionalize, LaxReport, ShockParameters, SideState,
};
pub use symmetrizer::{
    assemble_symmetrizer, dissipativity_probe, solve_lyapunov, ProbeReport, SymmetrizerBundle,
};
pub use verdict::{
    classify, classify_with_sweep_sink, ClassifyConfig, MethodSelection, StabilityClass,
    StabilityVerdict, SymmetrizerSummary,
};
