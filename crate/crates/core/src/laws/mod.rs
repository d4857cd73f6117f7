//! The three blurred constitutive laws, each as a closed-form bipotential,
//! a graph membership predicate and a convex cover whose inf-envelope
//! reproduces the closed form.
//!
//! Graph predicates use closed inequalities everywhere, so that membership
//! coincides with criticality of the closed form. Comparisons that mirror
//! an indicator term of the bipotential are evaluated exactly as the
//! bipotential evaluates them; `tol` only relaxes the finite residuals.

pub mod elastic;
pub mod friction;
pub mod plastic;

pub use elastic::{
    elastic_b, elastic_cover_b, elastic_member, elastic_regime, elastic_stationarity, ElasticBipotential,
    ElasticConjugate, ElasticCover, ElasticCoverMember, ElasticGraph, ElasticParams, ElasticPotential,
};
pub use friction::{
    coulomb_b, coulomb_member, friction_b, friction_member, friction_regime, in_coulomb_cone, in_gap_halfspace,
    ContactVec, CoulombBipotential, CoulombGraph, FrictionBipotential, FrictionCover, FrictionGraph, FrictionParams,
};
pub use plastic::{
    plastic_b, plastic_cover_b, plastic_member, plastic_regime, PlasticBipotential, PlasticCover, PlasticCoverMember,
    PlasticGraph, PlasticParams,
};

use crate::vector::{dot, norm};

/// `∃ eta >= 0, a = eta * b` (or the reverse), tested as Cauchy-Schwarz
/// equality `<a, b> >= ||a|| ||b|| - tol * max(1, ||a|| ||b||)`. Holds
/// whenever either vector vanishes.
pub fn positively_colinear(a: &[f64], b: &[f64], tol: f64) -> bool {
    let nn = norm(a) * norm(b);
    dot(a, b) >= nn - tol * nn.max(1.0)
}

/// `value <= bound` up to a few ulps of `bound`, so that points built on a
/// ball or cone boundary (rims, convex combinations, stationary
/// parameters) are admitted.
pub(crate) fn within(value: f64, bound: f64) -> bool {
    value <= bound + 4.0 * f64::EPSILON * bound.abs()
}

/// Default number of points of interval parameter grids.
pub const INTERVAL_SAMPLES: usize = 1001;

pub(crate) fn uniform_grid(lo: f64, hi: f64, points: usize) -> alloc::vec::Vec<f64> {
    if points == 1 {
        return alloc::vec![lo];
    }
    let last = points - 1;
    (0..points).map(|i| if i == last { hi } else { lo + (hi - lo) * i as f64 / last as f64 }).collect()
}
