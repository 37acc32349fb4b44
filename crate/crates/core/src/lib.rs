//! Latin hypercube sampling and star discrepancy.
//!
//! The crate generates Latin hypercube and uniform Monte Carlo samples,
//! computes their star discrepancy exactly (critical-grid enumeration, with a
//! quadratic sweep for the plane) or as a certified lower estimate, and builds
//! the recursive witness box whose excess lower-bounds the star discrepancy of
//! a Latin hypercube sample. [`probtools`] holds exact binomial and
//! hypergeometric kernels together with enumerative checks of the probability
//! inequalities the witness construction relies on, and [`harness`] runs
//! seeded multi-trial experiments over all of it.

pub mod discrepancy;
pub mod error;
pub mod harness;
pub mod points;
pub mod probtools;
pub mod rng;
pub mod sampling;
pub mod witness;

pub use discrepancy::{
    box_volume, count_closed, count_open, excess, local_discrepancy, star_discrepancy_exact,
    star_discrepancy_exact_2d, star_discrepancy_lower_estimate, AnchoredBox,
    DiscrepancyCertificate, DEFAULT_GRID_BUDGET,
};
pub use error::{Error, Result};
pub use points::{read_pointset, validate_pointset, write_pointset, PointSet};
pub use probtools::CheckReport;
pub use rng::Rng64;
pub use sampling::{latin_check, lhs_sample, random_permutation, uniform_sample, Seed};
pub use witness::{
    build_witness, compute_slab_constant, theory_constants, witness_lower_bound, SlabConstant,
    TheoryConstants, WitnessTrace,
};
