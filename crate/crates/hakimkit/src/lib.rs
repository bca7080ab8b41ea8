//! Truncated power-series toolkit for tangent-to-identity germs of (C^2, 0)
//! that fix both coordinate axes.
//!
//! The crate works with finite jets throughout: every series carries an
//! explicit truncation order and every operation states how it transforms
//! that order. Two coefficient domains are supported and never mixed, exact
//! Gaussian rationals for identities and structure, `Complex64` for
//! large-scale numerics and orbit computation.

pub mod coeff;
pub mod constraint;
pub mod dynamics;
pub mod hakim;
pub mod maps;
pub mod mapspec;
pub mod roots;
pub mod series;

pub use coeff::{Coeff, GaussianRational};
pub use constraint::{
    complete_h, no_attracting_fixed_points_check, pde_residual, relation_check, verify_prop2,
    ConstraintError, ConstraintReport, DirectionCheck, FixedPointCheck, NoAttractingReport,
    Prop2Report, RelationViolation, ResidualNorm,
};
pub use dynamics::{
    chordal_distance, iterate_orbit, iterate_orbit_summary, render_basin, tangent_statistics,
    write_orbit_csv, write_ppm,
    BasinRaster, DynamicsError, OrbitOutcome, OrbitParams, OrbitRecord, PixelOutcome, SliceSpec,
    TangentHistogram, Window,
};
pub use hakim::{
    basin_candidates, char_polynomial, directions, directions_exact, directions_from_pair, index,
    swapped_chart_index, CharPolynomial, CharacteristicDirection, DirectionKind, DirectionsResult,
    ExactDirections, HakimError, ProjectiveDirection,
};
pub use maps::{
    classify_fixed_point, contract, eigenvalues_2x2, recenter, AxesFixingMap, FixedPointClass,
    FixedPointReport, HomogeneousPair, MapError, TangentMap,
};
pub use mapspec::{parse_mapspec, serialize_mapspec, CoeffLit, MapSpec, MapSpecError, RawMapSpec};
pub use roots::{complex_roots, exact_roots, RootError};
pub use series::{Monomial, Series, SeriesError, Var};
