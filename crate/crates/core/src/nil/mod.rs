//! Unitriangular groups `T_p^r`, Mal'cev coordinates, polynomial mappings
//! and equidistribution diagnostics.

mod embed;
mod equidist;
mod filtration;
mod malcev;
mod mapping;
mod matrix;
mod poly;

pub use embed::embed;
pub use equidist::{equidistribution_discrepancy, orbit, orbit_csv};
pub use filtration::{is_poly_sequence, Filtration};
pub use malcev::{heisenberg_orbit_check, GenId, HeisenbergReport, MalcevBasis, NilError};
pub use mapping::{generic_mapping, PolynomialMapping, DEPTH_CAP};
pub use matrix::{mat_exp, mat_log, LieElement, Unitriangular};
pub use poly::MultiPoly;
